//! One line per acceptance criterion; exits nonzero if any fails.

mod common;

use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use axial_core::fusion::{check_eigenvector, decompose, verify_fusion, verify_fusion_window};
use axial_core::lazy::{HwKey, LazyAlgebra};
use axial_core::maps::{
    self, check_elementary_pair, check_n_multiplicative_derivation, check_n_multiplicative_iso, ElementaryPair,
    Flavor, MapTable, Mode, Residual,
};
use axial_core::martindale::{check_conditions, check_m_conditions_window, lemma_check, lemma_check_window, DEFAULT_CAP};
use axial_core::search::{linear_multiplicative_bijections, run_search, SearchMode, SearchSpec, SearchStatus, Target};
use axial_core::window::{HighwaterWindow, SLOT_HALF, SLOT_TWO, SLOT_ZERO};
use axial_core::{cli, zoo, Algebra, FieldSpec, FusionLaw, LawKind, Matrix, Subspace, Vector};

type Check = std::result::Result<(), String>;
type Criterion = (&'static str, fn() -> Check);

const Q: FieldSpec = FieldSpec::Rationals;

fn fp(p: u64) -> FieldSpec {
    FieldSpec::prime(p).unwrap()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn run_cli(args: &[&str], stdin: &str) -> cli::CliOutput {
    let mut argv = vec!["axial".to_string()];
    argv.extend(args.iter().map(|s| s.to_string()));
    cli::run(&argv, &mut stdin.as_bytes())
}

fn two_a_decomposition() -> Check {
    let z = zoo::norton_sakuma_2a(Q).map_err(err)?;
    let alg = &z.algebra;
    let d = decompose(alg, &z.axes[0], &z.law).map_err(err)?;
    let span = |s: &str| Subspace::span(Q, 3, &[alg.parse_element(s).unwrap()]).unwrap();
    let quarter = Q.ratio_i64(1, 4).unwrap();
    ensure(d.is_complete(), || "decomposition incomplete".into())?;
    ensure(d.part_for(&Q.one()) == Some(&span("eA")), || format!("A_1 = {}", d.part(0)))?;
    ensure(d.part_for(&Q.zero()) == Some(&span("-eA + 4 eB + 4 eC")), || format!("A_0 = {}", d.part(1)))?;
    ensure(d.part_for(&quarter) == Some(&span("eB - eC")), || format!("A_1/4 = {}", d.part(2)))?;

    let file = run_cli(&["zoo", "emit", "2a"], "");
    let out = run_cli(&["--format", "json", "decompose", "--axis", "eA"], &file.stdout);
    let v: serde_json::Value = serde_json::from_str(&out.stdout).map_err(err)?;
    let bases: Vec<String> = v["result"]["parts"]
        .as_array()
        .ok_or("no parts")?
        .iter()
        .map(|p| p["basis"][0].as_str().unwrap_or("").to_string())
        .collect();
    ensure(out.code == 0 && bases == ["eA", "eA - 4 eB - 4 eC", "eB - eC"], || {
        format!("cli decompose: code {} bases {bases:?}", out.code)
    })
}

fn two_a_fusion_martindale() -> Check {
    let z = zoo::norton_sakuma_2a(Q).map_err(err)?;
    let report = verify_fusion(&z.algebra, &z.axes[0], &z.law).map_err(err)?;
    ensure(report.passed(), || format!("fusion violations {:?}", report.violations))?;
    let d = decompose(&z.algebra, &z.axes[0], &z.law).map_err(err)?;
    let m = check_conditions(&z.algebra, &d).map_err(err)?;
    let flags: Vec<Option<bool>> = ["i", "ii", "iii"].iter().map(|l| m.holds(l)).collect();
    ensure(flags == [Some(true); 3], || format!("conditions {flags:?}"))?;

    let file = run_cli(&["zoo", "emit", "2a"], "").stdout;
    let out = run_cli(&["martindale", "--axis", "eA", "--law", "jordan", "1/4"], &file);
    ensure(out.code == 0, || format!("cli martindale exit {}: {}", out.code, out.stdout))
}

fn b_plus() -> Check {
    let z = zoo::jordan_b_plus(Q).map_err(err)?;
    let d = decompose(&z.algebra, &z.axes[0], &z.law).map_err(err)?;
    let dim = |n: i64, den: i64| d.part_for(&Q.ratio_i64(n, den).unwrap()).map(Subspace::dim);
    let dims = (dim(1, 1), dim(1, 2), dim(0, 1));
    ensure(dims == (Some(1), Some(2), Some(1)), || format!("dims {dims:?}"))?;
    let report = verify_fusion(&z.algebra, &z.axes[0], &z.law).map_err(err)?;
    ensure(report.passed(), || "fusion J(1/2) fails".into())?;
    let m = check_conditions(&z.algebra, &d).map_err(err)?;
    ensure(m.all_hold() && m.conditions.len() == 3, || format!("martindale {m:?}"))
}

fn highwater_window() -> Check {
    let win = HighwaterWindow::new(Q, 0, 8).map_err(err)?;
    let alg = win.algebra();
    let axis = HwKey::A(0);
    for (slot, lambda) in [(SLOT_ZERO, Q.zero()), (SLOT_TWO, Q.from_i64(2)), (SLOT_HALF, Q.ratio_i64(1, 2).unwrap())] {
        let gens = win.generators(slot);
        ensure(gens.len() == 8, || format!("slot {slot} has {} generators", gens.len()))?;
        for (j, g) in gens.iter().enumerate() {
            ensure(check_eigenvector(alg, &axis, g, &lambda).map_err(err)?, || {
                format!("generator j={} of H_{lambda} is not an eigenvector", j + 1)
            })?;
        }
    }
    for i in -8..=8 {
        ensure(alg.is_idempotent(&alg.a(i)).map_err(err)?, || format!("a({i}) not idempotent"))?;
    }
    let law = FusionLaw::monster(Q.from_i64(2), Q.ratio_i64(1, 2).unwrap()).map_err(err)?;
    let fusion = verify_fusion_window(&win, &law).map_err(err)?;
    ensure(fusion.passed(), || format!("windowed fusion: {:?}", fusion.violations.first()))?;
    let m = check_m_conditions_window(&win, &law).map_err(err)?;
    ensure(m.all_hold() && m.conditions.len() == 5, || "windowed Martindale (i)-(v) fail".into())
}

fn matsuo_coincidence() -> Check {
    let line = zoo::matsuo(&zoo::FischerSpace::single_line(), Q.ratio_i64(1, 4).unwrap()).map_err(err)?;
    let two_a = zoo::norton_sakuma_2a(Q).map_err(err)?;
    for i in 0..3 {
        for j in 0..3 {
            ensure(line.algebra.structure(i, j) == two_a.algebra.structure(i, j), || {
                format!("entry ({i},{j}) differs")
            })?;
        }
    }
    ensure(line.algebra == two_a.algebra, || "algebras differ".into())
}

fn lemma_suite() -> Check {
    for z in [zoo::norton_sakuma_2a(Q).map_err(err)?, zoo::jordan_b_plus(Q).map_err(err)?] {
        let d = decompose(&z.algebra, &z.axes[0], &z.law).map_err(err)?;
        for r in [1, 2] {
            let rep = lemma_check(&z.algebra, &d, r, DEFAULT_CAP).map_err(err)?;
            ensure(rep.statements.len() == 9 && rep.all_hold(), || {
                format!("{} r={r}: {:?}", z.name, rep.statements.iter().filter(|s| !s.holds).collect::<Vec<_>>())
            })?;
        }
    }
    let law = FusionLaw::monster(Q.from_i64(2), Q.ratio_i64(1, 2).unwrap()).map_err(err)?;
    let win = HighwaterWindow::new(Q, 0, 2).map_err(err)?;
    for r in [1, 2] {
        let rep = lemma_check_window(&win, &law, r, DEFAULT_CAP).map_err(err)?;
        ensure(rep.statements.len() == 16 && rep.all_hold(), || format!("highwater r={r} fails"))?;
    }
    Ok(())
}

fn permutation_matrix(perm: &[usize], field: FieldSpec) -> Matrix {
    let cols: Vec<Vector> = perm.iter().map(|&k| Vector::unit(field, 3, k)).collect();
    Matrix::from_columns(field, 3, &cols).unwrap()
}

fn additivity_positive() -> Check {
    let f7 = fp(7);
    let z = zoo::norton_sakuma_2a(f7).map_err(err)?;
    let alg = &z.algebra;
    let linear = linear_multiplicative_bijections(alg, 2).map_err(err)?;
    let perms = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    let perm_mats: Vec<Matrix> = perms.iter().map(|p| permutation_matrix(p, f7)).collect();
    ensure(linear.len() == 6 && perm_mats.iter().all(|m| linear.contains(m)), || {
        format!("{} linear multiplicative bijections", linear.len())
    })?;

    let spec = SearchSpec::new(Target::NonadditiveIso, 2, SearchMode::Backtracking { budget: 100_000, seed: 0 })
        .with_hypotheses(&z.axes, &z.law);
    let out = run_search(alg, &spec).map_err(err)?;
    ensure(out.hypotheses.iter().all(|h| h.all_hold), || "Martindale hypotheses fail".into())?;
    ensure(out.status == SearchStatus::ExhaustedNone && out.nodes <= 100_000, || {
        format!("search status {:?} after {} nodes", out.status, out.nodes)
    })?;
    // all multiplicative bijections, linear or not, are the six permutations
    let full = run_search(alg, &SearchSpec::new(Target::NonadditiveIso, 2, SearchMode::Exhaustive)).map_err(err)?;
    ensure(full.counts == Some((6, 6)), || format!("exhaustive counts {:?}", full.counts))?;

    for (k, m) in perm_mats.into_iter().enumerate() {
        let phi = MapTable::linear(alg, alg, m).map_err(err)?;
        let iso = check_n_multiplicative_iso(&phi, 2, Mode::exhaustive()).map_err(err)?;
        ensure(iso.holds, || format!("permutation {k} is not multiplicative"))?;
        let residual = Residual::isomorphism(&phi).map_err(err)?;
        let family = maps::TupleFamily {
            kind: maps::TupleKind::GeneralPairs,
            tuples: maps::sample_tuples(&[alg, alg], 1000, 7 + k as u64),
        };
        let v = maps::residual_vanishes_on(&residual, &family).map_err(err)?;
        ensure(v.holds && v.tested == 1000, || format!("residual of permutation {k} nonzero"))?;
    }
    Ok(())
}

fn additivity_negative() -> Check {
    let f5 = fp(5);
    let z = zoo::zero_algebra(1, f5).map_err(err)?;
    let alg = &z.algebra;

    // oracle: every bijection fixing 0, checked directly
    let mut images = vec![1usize, 2, 3, 4];
    let (mut mult, mut add) = (0, 0);
    let mut all_perms = Vec::new();
    permutations(&mut images, 0, &mut all_perms);
    for p in &all_perms {
        let table: Vec<usize> = std::iter::once(0).chain(p.iter().copied()).collect();
        // every product in the zero algebra is 0
        let prod = |_: usize, _: usize| 0usize;
        let multiplicative = (0..5).all(|x| (0..5).all(|y| table[prod(x, y)] == prod(table[x], table[y])));
        let additive = (0..5).all(|x| (0..5).all(|y| table[(x + y) % 5] == (table[x] + table[y]) % 5));
        mult += multiplicative as u64;
        add += (multiplicative && additive) as u64;
    }
    ensure((mult, add) == (24, 4), || format!("oracle counts ({mult}, {add})"))?;

    let spec = SearchSpec::new(Target::NonadditiveIso, 2, SearchMode::Exhaustive).with_hypotheses(&[], &z.law);
    let out = run_search(alg, &spec).map_err(err)?;
    ensure(out.counts == Some((mult, add)), || format!("search counts {:?}", out.counts))?;
    let w = out.witness.ok_or("no witness")?;
    let phi = MapTable::table(alg, alg, w.table.clone()).map_err(err)?;
    ensure(!phi.is_additive().map_err(err)?, || "witness is additive".into())?;
    ensure(check_n_multiplicative_iso(&phi, 2, Mode::exhaustive()).map_err(err)?.holds, || {
        "witness is not multiplicative".into()
    })?;
    let v = |k: i64| Vector::from_i64(f5, &[k]);
    let f12 = Residual::isomorphism(&phi).map_err(err)?.eval(&[v(1), v(2)]).map_err(err)?;
    ensure(f12 == v(1), || format!("f(1,2) = {f12}"))?;
    ensure(w.pair == (v(1), v(2)), || format!("recorded pair {:?}", w.pair))
}

fn permutations(items: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k == items.len() {
        out.push(items.clone());
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permutations(items, k + 1, out);
        items.swap(k, i);
    }
}

fn martindale_oracle() -> Check {
    let f5 = fp(5);
    let mut entries = Vec::new();
    for name in zoo::FINITE_NAMES {
        let dims: &[usize] = if *name == "zero" { &[1, 2, 3, 4] } else { &[0] };
        for &d in dims {
            let dim = (d > 0).then_some(d);
            if let Ok(z) = zoo::by_name(name, f5, None, dim) {
                if z.algebra.dim() <= 4 {
                    entries.push(z);
                }
            }
        }
    }
    let mut compared = 0;
    for z in &entries {
        let all = common::elements(&z.algebra);
        let mut laws = vec![FusionLaw::monster(f5.ratio_i64(1, 2).unwrap(), f5.ratio_i64(1, 4).unwrap()).unwrap()];
        if matches!(z.law.kind(), LawKind::Jordan | LawKind::Monster) {
            laws.push(z.law.clone());
        }
        for axis in z.axes.iter().chain(&z.double_axes) {
            for law in &laws {
                let d = decompose(&z.algebra, axis, law).map_err(err)?;
                if !d.is_complete() {
                    continue;
                }
                let parts: Vec<Vec<Vector>> = law
                    .eigenvalues()
                    .iter()
                    .map(|l| common::eigenspace(&z.algebra, &all, axis, l))
                    .collect();
                for (k, part) in parts.iter().enumerate() {
                    let expected = (f5.order().unwrap() as usize).pow(d.part(k).dim() as u32);
                    ensure(part.len() == expected, || format!("{} part {k}: size mismatch", z.name))?;
                }
                let report = check_conditions(&z.algebra, &d).map_err(err)?;
                for cond in &report.conditions {
                    for check in &cond.checks {
                        let p = law.index_of(&check.part).unwrap();
                        let m = law.index_of(&check.multipliers).unwrap();
                        let brute = common::annihilated(&z.algebra, &parts[p], &parts[m]);
                        ensure(brute.is_none() == check.holds(), || {
                            format!("{} axis {} law {} ({}): oracle disagrees", z.name, axis, law, cond.label)
                        })?;
                        if let Some(w) = &check.witness {
                            ensure(parts[p].contains(w) && parts[m].iter().all(|t| z.algebra.mul(w, t).is_zero()), || {
                                format!("{} ({}): invalid witness", z.name, cond.label)
                            })?;
                        }
                        compared += 1;
                    }
                }
            }
        }
    }
    eprintln!("martindale oracle: {compared} checks across {} algebras", entries.len());
    ensure(compared > 0, || "nothing compared".into())
}

/// (I) symmetry, (III) single argument, (IV) appending zero, on `count`
/// random tuples.
fn axioms_on_random(res: &Residual, alg: &Algebra, rng: &mut ChaCha8Rng, count: usize) -> Check {
    for _ in 0..count {
        let len = rng.gen_range(1..=4);
        let s: Vec<Vector> = (0..len).map(|_| maps::random_element(alg, rng)).collect();
        let base = res.eval(&s).map_err(err)?;
        let mut shuffled = s.clone();
        shuffled.shuffle(rng);
        ensure(res.eval(&shuffled).map_err(err)? == base, || format!("(I) fails on {s:?}"))?;
        ensure(res.eval(&s[..1]).map_err(err)?.is_zero(), || format!("(III) fails on {:?}", s[0]))?;
        let mut padded = s.clone();
        padded.push(alg.zero_vector());
        ensure(res.eval(&padded).map_err(err)? == base, || format!("(IV) fails on {s:?}"))?;
    }
    Ok(())
}

/// (V): `L f(s) = f(L s_1, ..., L s_k)` for words `L` drawn from `words`.
fn axiom_v(res: &Residual, alg: &Algebra, words: &[Vec<Vector>], tuples: &[Vec<Vector>]) -> Check {
    let apply = |w: &[Vector], x: &Vector| w.iter().rev().fold(x.clone(), |acc, t| alg.mul(t, &acc));
    for w in words {
        for s in tuples {
            let left = apply(w, &res.eval(s).map_err(err)?);
            let moved: Vec<Vector> = s.iter().map(|x| apply(w, x)).collect();
            ensure(left == res.eval(&moved).map_err(err)?, || format!("(V) fails for word {w:?} on {s:?}"))?;
        }
    }
    Ok(())
}

fn nullifying_axioms() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let f5 = fp(5);

    // isomorphism: x -> x^3 on F5 x F5 is multiplicative, bijective, not additive
    let diag = zoo::diag2(f5).map_err(err)?;
    let d2 = &diag.algebra;
    let cube = MapTable::from_fn(d2, d2, common::cube_map).map_err(err)?;
    ensure(!cube.is_additive().map_err(err)?, || "cube map is additive".into())?;
    for n in [2, 3] {
        ensure(check_n_multiplicative_iso(&cube, n, Mode::exhaustive()).map_err(err)?.holds, || {
            format!("cube map not {n}-multiplicative")
        })?;
    }
    let iso = Residual::isomorphism(&cube).map_err(err)?;
    axioms_on_random(&iso, d2, &mut rng, 500)?;
    let all = common::elements(d2);
    let pairs: Vec<Vec<Vector>> = all.iter().flat_map(|x| all.iter().map(move |y| vec![x.clone(), y.clone()])).collect();
    let words1: Vec<Vec<Vector>> = all.iter().map(|t| vec![t.clone()]).collect();
    axiom_v(&iso, d2, &words1, &pairs)?;
    let words2: Vec<Vec<Vector>> = (0..60)
        .map(|_| vec![all[rng.gen_range(0..all.len())].clone(), all[rng.gen_range(0..all.len())].clone()])
        .collect();
    let triples: Vec<Vec<Vector>> = (0..60)
        .map(|_| (0..3).map(|_| all[rng.gen_range(0..all.len())].clone()).collect())
        .collect();
    axiom_v(&iso, d2, &words2, &triples)?;

    // derivation: a non-additive multiplicative derivation of u*u = v over F3
    let f3 = fp(3);
    let nil = common::nil2(f3);
    let spec = SearchSpec::new(Target::NonadditiveDerivation, 2, SearchMode::Backtracking { budget: 10_000, seed: 0 });
    let found = run_search(&nil, &spec).map_err(err)?.witness.ok_or("no derivation witness")?;
    let der = MapTable::table(&nil, &nil, found.table).map_err(err)?;
    ensure(check_n_multiplicative_derivation(&der, 2, Mode::exhaustive()).map_err(err)?.holds, || {
        "witness is not a derivation".into()
    })?;
    let dres = Residual::derivation(&der).map_err(err)?;
    axioms_on_random(&dres, &nil, &mut rng, 500)?;
    let nil_all = common::elements(&nil);
    let nil_pairs: Vec<Vec<Vector>> =
        nil_all.iter().flat_map(|x| nil_all.iter().map(move |y| vec![x.clone(), y.clone()])).collect();
    let nil_words: Vec<Vec<Vector>> = nil_all.iter().map(|t| vec![t.clone()]).collect();
    axiom_v(&dres, &nil, &nil_words, &nil_pairs)?;

    // elementary: (cube, cube) on F5 x F5; (V) with words L_{t1} L_{t2}
    let pair = ElementaryPair::new(cube.clone(), cube.clone(), Flavor::Elementary).map_err(err)?;
    ensure(check_elementary_pair(&pair, Mode::exhaustive()).map_err(err)?.holds, || {
        "(cube, cube) is not elementary".into()
    })?;
    let eres = Residual::elementary(&pair).map_err(err)?;
    axioms_on_random(&eres, d2, &mut rng, 500)?;
    axiom_v(&eres, d2, &words2, &pairs)?;

    // Jordan elementary: any pair of bijections fixing 0 on a zero algebra
    let zero = zoo::zero_algebra(2, f5).map_err(err)?;
    let za = &zero.algebra;
    let mut perm: Vec<usize> = (1..25).collect();
    perm.shuffle(&mut rng);
    let table: Vec<usize> = std::iter::once(0).chain(perm).collect();
    let m = MapTable::table(za, za, table).map_err(err)?;
    let jpair = ElementaryPair::new(m.clone(), m.inverse().map_err(err)?, Flavor::Jordan).map_err(err)?;
    ensure(check_elementary_pair(&jpair, Mode::exhaustive()).map_err(err)?.holds, || {
        "Jordan pair identity fails".into()
    })?;
    let jres = Residual::elementary(&jpair).map_err(err)?;
    axioms_on_random(&jres, za, &mut rng, 500)?;
    let zall = common::elements(za);
    let zpairs: Vec<Vec<Vector>> = zall.iter().take(25).map(|x| vec![x.clone(), zall[7].clone()]).collect();
    let zwords: Vec<Vec<Vector>> = zall.iter().map(|t| vec![t.clone()]).collect();
    axiom_v(&jres, za, &zwords, &zpairs)
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("2A decomposition at eA", two_a_decomposition),
        ("2A fusion J(1/4) and Martindale (i)-(iii)", two_a_fusion_martindale),
        ("B+ dims (1,2,1), fusion J(1/2), Martindale (i)-(iii)", b_plus),
        ("Highwater window 8: eigenvectors, idempotents, fusion, Martindale (i)-(v)", highwater_window),
        ("Matsuo single line at 1/4 equals 2A", matsuo_coincidence),
        ("lemma families on 2A, B+ (r = 1, 2) and the Highwater window", lemma_suite),
        ("2A over F7: no non-additive multiplicative bijection; permutation residuals vanish", additivity_positive),
        ("F5 zero algebra: 24 multiplicative bijections, 4 additive, f(1,2) = 1", additivity_negative),
        ("Martindale checks agree with brute force on zoo algebras over F5", martindale_oracle),
        ("nullifying axioms (I), (III), (IV), (V) for all four map classes", nullifying_axioms),
    ];
    let mut failed = Vec::new();
    for (k, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = check();
        let secs = start.elapsed().as_secs_f64();
        match &result {
            Ok(()) => println!("criterion {:>2}: PASS  {name}  ({secs:.2}s)", k + 1),
            Err(e) => {
                println!("criterion {:>2}: FAIL  {name}  ({secs:.2}s): {e}", k + 1);
                failed.push(k + 1);
            }
        }
    }
    if !failed.is_empty() {
        eprintln!("failing criteria: {failed:?}");
        std::process::exit(1);
    }
}
