//! Command-line driver behind the `axial` binary.
//!
//! Every command prints a report and exits 0 when all requested checks
//! pass, 1 when one fails and 2 on an error.

use std::io::Read;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::algebra::Algebra;
use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::finite::FiniteAlgebra;
use crate::format::{self, AlgebraFile, Document, HighwaterFile};
use crate::fusion::{self, AxisDecomposition, FusionLaw, FusionReport, Violation};
use crate::lazy::{HwKey, SparseVector};
use crate::linalg::Vector;
use crate::maps::{self, MapClass, MapTable, Mode, Residual};
use crate::martindale::{self, LemmaReport, MartindaleReport, DEFAULT_CAP};
use crate::search::{self, SearchMode, SearchSpec, Target};
use crate::window::HighwaterWindow;
use crate::zoo;

pub const FORMAT_ENV: &str = "AXIAL_FORMAT";

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "axial", version, about = "Exact checks for axial algebras and multiplicative maps")]
struct Cli {
    /// Output format
    #[arg(long, value_enum, global = true, env = FORMAT_ENV, default_value = "text")]
    format: OutputFormat,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Input {
    /// Algebra file, or `-` for stdin
    #[arg(default_value = "-")]
    file: String,
}

#[derive(Debug, Args)]
struct LawArg {
    /// Fusion law, e.g. `jordan 1/4`, `monster 1/2 1/4`, `assoc`, `highwater`;
    /// defaults to the file's `law` line
    #[arg(long, num_args = 1..=3)]
    law: Vec<String>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Eigenspace decomposition of an axis
    Decompose {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        axis: String,
        #[command(flatten)]
        law: LawArg,
    },
    /// Fusion law check at one axis
    FusionCheck {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        axis: Option<String>,
        #[command(flatten)]
        law: LawArg,
        /// Generator window for the highwater marker
        #[arg(long)]
        window: Option<u64>,
    },
    /// Martindale-like conditions at one axis
    Martindale {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        axis: Option<String>,
        #[command(flatten)]
        law: LawArg,
        #[arg(long)]
        window: Option<u64>,
    },
    /// Fusion law at every declared axis, plus generation
    AxialCheck {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        law: LawArg,
    },
    /// Annihilation and injectivity of the operator families
    LemmaCheck {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        axis: Option<String>,
        #[command(flatten)]
        law: LawArg,
        #[arg(long)]
        r: usize,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
        #[arg(long)]
        window: Option<u64>,
    },
    /// Class identity and additivity residual of a map
    ResidualCheck {
        #[command(flatten)]
        input: Input,
        /// Map file (`map` table or `linmap` matrix)
        #[arg(long)]
        map: String,
        /// M* for the elementary classes
        #[arg(long)]
        mstar: Option<String>,
        #[arg(long, value_parser = ["iso", "der", "elem", "jelem"])]
        class: String,
        #[arg(long, default_value_t = 2)]
        n: usize,
        /// Sample this many tuples instead of enumerating
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Search for non-additive multiplicative maps
    Search {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_parser = ["nonadditive-iso", "nonadditive-derivation"])]
        target: String,
        #[arg(long, default_value_t = 2)]
        n: usize,
        /// Node budget; without one the search is exhaustive
        #[arg(long)]
        budget: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Built-in algebras
    Zoo {
        #[command(subcommand)]
        action: ZooAction,
    },
}

#[derive(Debug, Subcommand)]
enum ZooAction {
    /// Write an algebra file (or the highwater marker)
    Emit {
        name: String,
        /// `Q` or a prime
        #[arg(long, default_value = "Q")]
        field: String,
        #[arg(long)]
        eta: Option<String>,
        #[arg(long)]
        dim: Option<usize>,
        #[arg(short = 'o', long)]
        output: Option<String>,
    },
    /// Names of the built-in algebras
    List,
}

/// What a command produced.
struct Outcome {
    passed: bool,
    text: String,
    data: Value,
}

#[derive(Serialize)]
struct Envelope<'a> {
    command: &'a [String],
    input_sha256: Option<String>,
    status: &'a str,
    result: &'a Value,
}

/// Exit code and captured streams of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliOutput {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Runs the command line `args` (program name first) against `stdin`.
pub fn run(args: &[String], stdin: &mut dyn Read) -> CliOutput {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_PASS };
            let text = e.render().to_string();
            let (stdout, stderr) = if e.use_stderr() {
                (String::new(), text)
            } else {
                (text, String::new())
            };
            return CliOutput { code, stdout, stderr };
        }
    };
    let mut digest = None;
    let result = dispatch(&cli.command, stdin, &mut digest);
    let echo = &args[1.min(args.len())..];
    match result {
        Ok(out) => {
            let status = if out.passed { "pass" } else { "fail" };
            let stdout = match cli.format {
                OutputFormat::Text => out.text,
                OutputFormat::Json => {
                    let env = Envelope {
                        command: echo,
                        input_sha256: digest,
                        status,
                        result: &out.data,
                    };
                    serde_json::to_string_pretty(&env).expect("serializable") + "\n"
                }
            };
            CliOutput {
                code: if out.passed { EXIT_PASS } else { EXIT_FAIL },
                stdout,
                stderr: String::new(),
            }
        }
        Err(e) => {
            let stdout = match cli.format {
                OutputFormat::Text => String::new(),
                OutputFormat::Json => {
                    let v = json!({"command": echo, "input_sha256": digest, "status": "error", "error": e.to_string()});
                    serde_json::to_string_pretty(&v).expect("serializable") + "\n"
                }
            };
            CliOutput {
                code: EXIT_ERROR,
                stdout,
                stderr: format!("error: {e}\n"),
            }
        }
    }
}

fn read_input(path: &str, stdin: &mut dyn Read, digest: &mut Option<String>) -> Result<String> {
    let mut text = String::new();
    let read = if path == "-" {
        stdin.read_to_string(&mut text).map(|_| ())
    } else {
        std::fs::read_to_string(path).map(|t| text = t)
    };
    read.map_err(|e| Error::InvalidParameter(format!("cannot read `{path}`: {e}")))?;
    *digest = Some(format!("{:x}", Sha256::digest(text.as_bytes())));
    Ok(text)
}

fn read_file(path: &str) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::InvalidParameter(format!("cannot read `{path}`: {e}")))
}

fn load(input: &Input, stdin: &mut dyn Read, digest: &mut Option<String>) -> Result<Document> {
    format::parse_document(&read_input(&input.file, stdin, digest)?)
}

fn load_finite(input: &Input, stdin: &mut dyn Read, digest: &mut Option<String>) -> Result<AlgebraFile> {
    match load(input, stdin, digest)? {
        Document::Finite(f) => Ok(f),
        Document::Highwater(_) => Err(Error::Unsupported(
            "this command needs a finite-dimensional algebra file".into(),
        )),
    }
}

fn resolve_law(arg: &LawArg, field: FieldSpec, declared: Option<&FusionLaw>) -> Result<FusionLaw> {
    if arg.law.is_empty() {
        declared
            .cloned()
            .ok_or_else(|| Error::InvalidParameter("no --law given and the file declares none".into()))
    } else {
        FusionLaw::parse(&arg.law.join(" "), field)
    }
}

fn resolve_axis(file: &AlgebraFile, axis: Option<&str>) -> Result<Vector> {
    match axis {
        Some(text) => file.algebra.parse_element(text),
        None => file
            .axes
            .first()
            .cloned()
            .ok_or_else(|| Error::InvalidParameter("no --axis given and the file declares none".into())),
    }
}

fn hw_axis(hw: &HighwaterFile, axis: Option<&str>) -> Result<i64> {
    match axis {
        Some(text) => match text.parse::<HwKey>()? {
            HwKey::A(i) => Ok(i),
            HwKey::S(_) => Err(Error::InvalidParameter("highwater axes are a(i)".into())),
        },
        None => Ok(hw.axes.first().copied().unwrap_or(0)),
    }
}

fn window_for(hw: &HighwaterFile, axis: Option<&str>, window: Option<u64>) -> Result<HighwaterWindow> {
    let window = window.ok_or_else(|| Error::InvalidParameter("the highwater marker needs --window".into()))?;
    HighwaterWindow::new(hw.field, hw_axis(hw, axis)?, window)
}

fn hw_law(arg: &LawArg, field: FieldSpec) -> Result<FusionLaw> {
    if arg.law.is_empty() {
        FusionLaw::highwater(field)
    } else {
        FusionLaw::parse(&arg.law.join(" "), field)
    }
}

fn dispatch(cmd: &Command, stdin: &mut dyn Read, digest: &mut Option<String>) -> Result<Outcome> {
    match cmd {
        Command::Decompose { input, axis, law } => {
            let file = load_finite(input, stdin, digest)?;
            let law = resolve_law(law, file.algebra.field(), file.law.as_ref())?;
            let e = file.algebra.parse_element(axis)?;
            let d = fusion::decompose(&file.algebra, &e, &law)?;
            Ok(decompose_outcome(&file.algebra, &d))
        }
        Command::FusionCheck {
            input,
            axis,
            law,
            window,
        } => match load(input, stdin, digest)? {
            Document::Finite(file) => {
                let law = resolve_law(law, file.algebra.field(), file.law.as_ref())?;
                let e = resolve_axis(&file, axis.as_deref())?;
                let report = fusion::verify_fusion(&file.algebra, &e, &law)?;
                Ok(fusion_outcome(&report, &|v| file.algebra.format_element(v)))
            }
            Document::Highwater(hw) => {
                let win = window_for(&hw, axis.as_deref(), *window)?;
                let report = fusion::verify_fusion_window(&win, &hw_law(law, hw.field)?)?;
                Ok(fusion_outcome(&report, &sparse))
            }
        },
        Command::Martindale {
            input,
            axis,
            law,
            window,
        } => match load(input, stdin, digest)? {
            Document::Finite(file) => {
                let law = resolve_law(law, file.algebra.field(), file.law.as_ref())?;
                let e = resolve_axis(&file, axis.as_deref())?;
                let d = fusion::decompose(&file.algebra, &e, &law)?;
                let report = martindale::check_conditions(&file.algebra, &d)?;
                Ok(martindale_outcome(&report, &|v| file.algebra.format_element(v)))
            }
            Document::Highwater(hw) => {
                let win = window_for(&hw, axis.as_deref(), *window)?;
                let report = martindale::check_m_conditions_window(&win, &hw_law(law, hw.field)?)?;
                Ok(martindale_outcome(&report, &sparse))
            }
        },
        Command::AxialCheck { input, law } => {
            let file = load_finite(input, stdin, digest)?;
            let law = resolve_law(law, file.algebra.field(), file.law.as_ref())?;
            if file.axes.is_empty() {
                return Err(Error::InvalidParameter("the file declares no axes".into()));
            }
            let report = fusion::verify_axial(&file.algebra, &file.axes, &law)?;
            let fmt = |v: &Vector| file.algebra.format_element(v);
            let per: Vec<Outcome> = report.per_axis.iter().map(|r| fusion_outcome(r, &fmt)).collect();
            let mut text = String::new();
            for o in &per {
                text.push_str(&o.text);
            }
            text.push_str(&format!("generates: {}\n", report.generates));
            Ok(Outcome {
                passed: report.passed(),
                text,
                data: json!({
                    "axes": per.iter().map(|o| o.data.clone()).collect::<Vec<_>>(),
                    "generates": report.generates,
                }),
            })
        }
        Command::LemmaCheck {
            input,
            axis,
            law,
            r,
            cap,
            window,
        } => match load(input, stdin, digest)? {
            Document::Finite(file) => {
                let law = resolve_law(law, file.algebra.field(), file.law.as_ref())?;
                let e = resolve_axis(&file, axis.as_deref())?;
                let d = fusion::decompose(&file.algebra, &e, &law)?;
                Ok(lemma_outcome(&martindale::lemma_check(&file.algebra, &d, *r, *cap)?))
            }
            Document::Highwater(hw) => {
                let win = window_for(&hw, axis.as_deref(), *window)?;
                let report = martindale::lemma_check_window(&win, &hw_law(law, hw.field)?, *r, *cap)?;
                Ok(lemma_outcome(&report))
            }
        },
        Command::ResidualCheck {
            input,
            map,
            mstar,
            class,
            n,
            samples,
            seed,
        } => {
            let file = load_finite(input, stdin, digest)?;
            residual_check(&file.algebra, map, mstar.as_deref(), class, *n, *samples, *seed)
        }
        Command::Search {
            input,
            target,
            n,
            budget,
            seed,
        } => {
            let file = load_finite(input, stdin, digest)?;
            let mode = match budget {
                Some(b) => SearchMode::Backtracking { budget: *b, seed: *seed },
                None => SearchMode::Exhaustive,
            };
            let mut spec = SearchSpec::new(Target::parse(target)?, *n, mode);
            if let Some(law) = &file.law {
                spec = spec.with_hypotheses(&file.axes, law);
            }
            search_outcome(&file.algebra, &spec)
        }
        Command::Zoo { action } => zoo_command(action),
    }
}

fn sparse(v: &SparseVector<HwKey>) -> String {
    v.to_string()
}

fn decompose_outcome(alg: &Algebra, d: &AxisDecomposition) -> Outcome {
    let mut text = format!("axis {}  law {}\n", alg.format_element(d.axis()), d.law());
    let mut parts = Vec::new();
    for (lambda, part) in d.eigenvalues().iter().zip(d.parts()) {
        let basis: Vec<String> = part.basis_vectors().iter().map(|v| alg.format_element(v)).collect();
        text.push_str(&format!("  {lambda}: dim {}  [{}]\n", part.dim(), basis.join("; ")));
        parts.push(json!({"eigenvalue": lambda.to_string(), "dim": part.dim(), "basis": basis}));
    }
    let outside = d.outside_witness().map(|w| alg.format_element(w));
    if let Some(w) = &outside {
        text.push_str(&format!("  incomplete: {w} lies outside the listed eigenspaces\n"));
    }
    Outcome {
        passed: d.is_complete(),
        text,
        data: json!({
            "axis": alg.format_element(d.axis()),
            "law": d.law().spec(),
            "parts": parts,
            "complete": d.is_complete(),
            "outside_witness": outside,
        }),
    }
}

fn fusion_outcome<V>(report: &FusionReport<V>, fmt: &dyn Fn(&V) -> String) -> Outcome {
    let status = if report.passed() { "pass" } else { "fail" };
    let mut text = format!(
        "fusion {}  axis {}  law {}  pairs {}",
        status,
        fmt(&report.axis),
        report.law,
        report.pairs_checked
    );
    if let Some(w) = report.window {
        text.push_str(&format!("  window {w}"));
    }
    text.push('\n');
    let mut violations = Vec::new();
    for v in &report.violations {
        match v {
            Violation::OutsideSpectrum { witness } => {
                text.push_str(&format!("  outside-spectrum: {}\n", fmt(witness)));
                violations.push(json!({"kind": "outside-spectrum", "witness": fmt(witness)}));
            }
            Violation::Forbidden {
                lambda,
                mu,
                left,
                right,
                component,
                projection,
                ..
            } => {
                text.push_str(&format!(
                    "  ({lambda}, {mu}): ({}) * ({}) has {component}-component {}\n",
                    fmt(left),
                    fmt(right),
                    fmt(projection)
                ));
                violations.push(json!({
                    "kind": "forbidden",
                    "lambda": lambda.to_string(),
                    "mu": mu.to_string(),
                    "left": fmt(left),
                    "right": fmt(right),
                    "component": component.to_string(),
                    "projection": fmt(projection),
                }));
            }
        }
    }
    Outcome {
        passed: report.passed(),
        text,
        data: json!({
            "axis": fmt(&report.axis),
            "law": report.law,
            "window": report.window,
            "pairs_checked": report.pairs_checked,
            "passed": report.passed(),
            "violations": violations,
        }),
    }
}

fn martindale_outcome<V>(report: &MartindaleReport<V>, fmt: &dyn Fn(&V) -> String) -> Outcome {
    let mut text = format!("martindale  axis {}  law {}", fmt(&report.axis), report.law);
    if let Some(w) = report.window {
        text.push_str(&format!("  window {w}"));
    }
    text.push('\n');
    let mut conds = Vec::new();
    for c in &report.conditions {
        let holds = c.holds();
        text.push_str(&format!("  ({}) {}", c.label, holds));
        let mut checks = Vec::new();
        for k in &c.checks {
            if let Some(w) = &k.witness {
                text.push_str(&format!(
                    "  witness {} in A_{} killed by A_{}",
                    fmt(w),
                    k.part,
                    k.multipliers
                ));
            }
            checks.push(json!({
                "part": k.part.to_string(),
                "multipliers": k.multipliers.to_string(),
                "holds": k.holds(),
                "witness": k.witness.as_ref().map(fmt),
            }));
        }
        text.push('\n');
        conds.push(json!({"label": c.label, "holds": holds, "checks": checks}));
    }
    Outcome {
        passed: report.all_hold(),
        text,
        data: json!({
            "axis": fmt(&report.axis),
            "law": report.law,
            "window": report.window,
            "conditions": conds,
            "all_hold": report.all_hold(),
        }),
    }
}

fn lemma_outcome(report: &LemmaReport) -> Outcome {
    let mut text = format!("lemma  law {}  r {}", report.law, report.r);
    if let Some(w) = report.window {
        text.push_str(&format!("  window {w}"));
    }
    text.push('\n');
    let mut rows = Vec::new();
    for s in &report.statements {
        let kind = match s.kind {
            martindale::StatementKind::Annihilation => "annihilates",
            martindale::StatementKind::Injectivity => "injective on",
        };
        text.push_str(&format!(
            "  {} ({} words) {kind} A_{}: {}\n",
            s.family, s.family_size, s.part, s.holds
        ));
        rows.push(json!({
            "family": s.family.to_string(),
            "words": s.family_size,
            "part": s.part.to_string(),
            "kind": kind,
            "holds": s.holds,
        }));
    }
    Outcome {
        passed: report.all_hold(),
        text,
        data: json!({"law": report.law, "r": report.r, "window": report.window, "statements": rows}),
    }
}

fn vectors(alg: &Algebra, vs: &[Vector]) -> Vec<String> {
    vs.iter().map(|v| alg.format_element(v)).collect()
}

fn residual_check(
    alg: &Algebra,
    map_path: &str,
    mstar_path: Option<&str>,
    class: &str,
    n: usize,
    samples: Option<usize>,
    seed: u64,
) -> Result<Outcome> {
    let class = MapClass::parse(class)?;
    let map = format::parse_map(&read_file(map_path)?, alg, alg)?;
    let mstar = mstar_path
        .map(|p| read_file(p).and_then(|t| format::parse_map(&t, alg, alg)))
        .transpose()?;
    let finite = FiniteAlgebra::new(alg, maps::EXHAUSTIVE_BOUND).is_ok();
    let mode = match samples {
        Some(k) => Mode::sampled(k, seed),
        None if finite => Mode::exhaustive(),
        None => Mode::sampled(1000, seed),
    };
    let identity = match class {
        MapClass::Isomorphism => maps::check_n_multiplicative_iso(&map, n, mode)?,
        MapClass::Derivation => maps::check_n_multiplicative_derivation(&map, n, mode)?,
        MapClass::Elementary | MapClass::JordanElementary => {
            let star = mstar
                .clone()
                .ok_or_else(|| Error::InvalidParameter("elementary classes need --mstar".into()))?;
            let flavor = if class == MapClass::Elementary {
                maps::Flavor::Elementary
            } else {
                maps::Flavor::Jordan
            };
            maps::check_elementary_pair(&maps::ElementaryPair::new(map.clone(), star, flavor)?, mode)?
        }
    };
    let residual = Residual::for_class(class, &map, mstar.as_ref())?;
    let vanishing = match mode {
        Mode::Exhaustive { bound } => maps::residual_vanishes_on_all_pairs(&residual, bound)?,
        Mode::Sampled { count, seed } => {
            let family = maps::TupleFamily {
                kind: maps::TupleKind::GeneralPairs,
                tuples: maps::sample_tuples(&[alg, alg], count, seed),
            };
            maps::residual_vanishes_on(&residual, &family)?
        }
    };
    let residual_value = vanishing
        .counterexample
        .as_ref()
        .map(|t| residual.eval(t).map(|v| alg.format_element(&v)))
        .transpose()?;
    let scope = if identity.exhaustive { "all tuples" } else { "sampled tuples" };
    let mut text = format!(
        "class identity ({}-ary, {} on {scope}): {}\n",
        n, identity.tested, identity.holds
    );
    if let Some(t) = &identity.counterexample {
        text.push_str(&format!("  fails at ({})\n", vectors(alg, t).join(", ")));
    }
    text.push_str(&format!("residual vanishes on {} pairs: {}\n", vanishing.tested, vanishing.holds));
    if let (Some(t), Some(r)) = (&vanishing.counterexample, &residual_value) {
        text.push_str(&format!("  f({}) = {r}\n", vectors(alg, t).join(", ")));
    }
    Ok(Outcome {
        passed: identity.holds && vanishing.holds,
        text,
        data: json!({
            "class": format!("{class:?}"),
            "n": n,
            "identity": {
                "holds": identity.holds,
                "tested": identity.tested,
                "exhaustive": identity.exhaustive,
                "counterexample": identity.counterexample.as_ref().map(|t| vectors(alg, t)),
            },
            "residual": {
                "vanishes": vanishing.holds,
                "tested": vanishing.tested,
                "exhaustive": vanishing.exhaustive,
                "counterexample": vanishing.counterexample.as_ref().map(|t| vectors(alg, t)),
                "value": residual_value,
            },
        }),
    })
}

fn search_outcome(alg: &Algebra, spec: &SearchSpec) -> Result<Outcome> {
    let out = search::run_search(alg, spec)?;
    let mut text = format!(
        "search {}  n {}  status {}  nodes {}\n",
        spec.target.name(),
        spec.n,
        out.status.name(),
        out.nodes
    );
    if let Some((m, a)) = out.counts {
        text.push_str(&format!("  multiplicative {m}  additive {a}\n"));
    }
    for h in &out.hypotheses {
        text.push_str(&format!(
            "  martindale at {} ({}): {}\n",
            alg.format_element(&h.axis),
            h.law,
            if h.all_hold {
                "all hold".to_string()
            } else {
                format!("fails {}", h.failing.join(", "))
            }
        ));
    }
    let witness = match &out.witness {
        Some(w) => {
            let map = MapTable::table(alg, alg, w.table.clone())?;
            let file = format::emit_map(&map);
            let (x, y) = &w.pair;
            text.push_str(&format!(
                "  witness fails additivity at ({}, {})\n{}",
                alg.format_element(x),
                alg.format_element(y),
                indent(&file)
            ));
            json!({
                "map": file,
                "pair": [alg.format_element(x), alg.format_element(y)],
            })
        }
        None => Value::Null,
    };
    Ok(Outcome {
        passed: true,
        text,
        data: json!({
            "target": spec.target.name(),
            "n": spec.n,
            "status": out.status.name(),
            "nodes": out.nodes,
            "counts": out.counts.map(|(m, a)| json!({"multiplicative": m, "additive": a})),
            "hypotheses": out.hypotheses.iter().map(|h| json!({
                "axis": alg.format_element(&h.axis),
                "law": h.law,
                "all_hold": h.all_hold,
                "failing": h.failing,
            })).collect::<Vec<_>>(),
            "witness": witness,
        }),
    })
}

fn indent(text: &str) -> String {
    text.lines().map(|l| format!("    {l}\n")).collect()
}

fn parse_field_arg(text: &str) -> Result<FieldSpec> {
    match text {
        "Q" | "q" => Ok(FieldSpec::Rationals),
        other => {
            let digits = other.trim_start_matches(['F', 'f']);
            let p = digits
                .parse::<u64>()
                .map_err(|_| Error::InvalidParameter(format!("bad field `{other}` (use Q or a prime)")))?;
            FieldSpec::prime(p)
        }
    }
}

fn zoo_command(action: &ZooAction) -> Result<Outcome> {
    match action {
        ZooAction::List => {
            let mut names: Vec<&str> = zoo::FINITE_NAMES.to_vec();
            names.push("highwater");
            Ok(Outcome {
                passed: true,
                text: names.iter().map(|n| format!("{n}\n")).collect(),
                data: json!({"entries": names}),
            })
        }
        ZooAction::Emit {
            name,
            field,
            eta,
            dim,
            output,
        } => {
            let field = parse_field_arg(field)?;
            let text = if name == "highwater" {
                // rejects the excluded characteristics
                zoo::highwater(field)?;
                format::emit_highwater(&HighwaterFile {
                    field,
                    axes: vec![0, 1],
                })
            } else {
                let eta = eta.as_deref().map(|e| field.parse_scalar(e)).transpose()?;
                let entry = zoo::by_name(name, field, eta, *dim)?;
                format::emit_algebra(&entry.algebra, &entry.axes, Some(&entry.law))
            };
            match output {
                Some(path) => {
                    std::fs::write(path, &text)
                        .map_err(|e| Error::InvalidParameter(format!("cannot write `{path}`: {e}")))?;
                    Ok(Outcome {
                        passed: true,
                        text: format!("wrote {path}\n"),
                        data: json!({"name": name, "path": path}),
                    })
                }
                None => Ok(Outcome {
                    passed: true,
                    data: json!({"name": name, "file": text}),
                    text,
                }),
            }
        }
    }
}
