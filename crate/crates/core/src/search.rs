//! Search for multiplicative bijections and multiplicative derivations of
//! small algebras over `F_p`, looking for ones that fail to be additive.
//!
//! Maps are built one element at a time in index order. Every assignment
//! forces the value at each word of already-assigned elements, so
//! inconsistent prefixes die early. A multiplicative map sends 0 to 0
//! (`phi(0) = phi(0 x) = phi(0) phi(x)`, pick `phi(x) = 0`; `d(0) = d(0 0) = 0`),
//! which seeds the search.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::Algebra;
use crate::error::{Error, Result};
use crate::finite::FiniteAlgebra;
use crate::fusion::{decompose, FusionLaw};
use crate::linalg::{Matrix, Vector};
use crate::martindale::check_conditions;

/// Prefix nodes an exhaustive search may visit.
pub const NODE_BOUND: u64 = 10_000_000;

/// Elements a searched algebra may have.
pub const ELEMENT_BOUND: u128 = 100_000;

/// `p^dim` limit for counting derivations.
pub const DERIVATION_LIMIT: u128 = 25;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Target {
    NonadditiveIso,
    NonadditiveDerivation,
}

impl Target {
    pub fn parse(text: &str) -> Result<Self> {
        match text {
            "nonadditive-iso" | "iso" => Ok(Target::NonadditiveIso),
            "nonadditive-derivation" | "der" => Ok(Target::NonadditiveDerivation),
            other => Err(Error::InvalidParameter(format!(
                "unknown search target `{other}` (expected nonadditive-iso or nonadditive-derivation)"
            ))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Target::NonadditiveIso => "nonadditive-iso",
            Target::NonadditiveDerivation => "nonadditive-derivation",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchMode {
    /// Visit every consistent map and count them.
    Exhaustive,
    /// Stop at the first witness or after `budget` nodes. Seed 0 keeps the
    /// natural candidate order; other seeds shuffle it.
    Backtracking { budget: u64, seed: u64 },
}

#[derive(Clone, Debug)]
pub struct SearchSpec {
    pub target: Target,
    pub n: usize,
    pub mode: SearchMode,
    /// Axes and law whose Martindale conditions are recorded with the result.
    pub axes: Vec<Vector>,
    pub law: Option<FusionLaw>,
}

impl SearchSpec {
    pub fn new(target: Target, n: usize, mode: SearchMode) -> Self {
        SearchSpec {
            target,
            n,
            mode,
            axes: Vec::new(),
            law: None,
        }
    }

    pub fn with_hypotheses(mut self, axes: &[Vector], law: &FusionLaw) -> Self {
        self.axes = axes.to_vec();
        self.law = Some(law.clone());
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchStatus {
    WitnessFound,
    ExhaustedNone,
    BudgetExhausted,
}

impl SearchStatus {
    pub fn name(self) -> &'static str {
        match self {
            SearchStatus::WitnessFound => "witness-found",
            SearchStatus::ExhaustedNone => "exhausted-none",
            SearchStatus::BudgetExhausted => "budget-exhausted",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HypothesisRecord {
    pub axis: Vector,
    pub law: String,
    pub all_hold: bool,
    /// Labels of the conditions that fail.
    pub failing: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    /// Image index of every element index.
    pub table: Vec<usize>,
    /// A pair on which additivity fails.
    pub pair: (Vector, Vector),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchOutcome {
    pub status: SearchStatus,
    pub witness: Option<Witness>,
    /// (multiplicative, additive) maps, exhaustive mode only.
    pub counts: Option<(u64, u64)>,
    pub nodes: u64,
    pub hypotheses: Vec<HypothesisRecord>,
}

struct Searcher<'a> {
    fa: FiniteAlgebra<'a>,
    target: Target,
    n: usize,
    map: Vec<Option<usize>>,
    used: Vec<bool>,
    trail: Vec<usize>,
    queue: Vec<usize>,
}

impl Searcher<'_> {
    fn assign(&mut self, x: usize, y: usize) -> bool {
        match self.map[x] {
            Some(v) => v == y,
            None => {
                if self.target == Target::NonadditiveIso {
                    if self.used[y] {
                        return false;
                    }
                    self.used[y] = true;
                }
                self.map[x] = Some(y);
                self.trail.push(x);
                self.queue.push(x);
                true
            }
        }
    }

    fn undo(&mut self, len: usize) {
        while self.trail.len() > len {
            let x = self.trail.pop().expect("nonempty trail");
            if let Some(y) = self.map[x].take() {
                if self.target == Target::NonadditiveIso {
                    self.used[y] = false;
                }
            }
        }
        self.queue.clear();
    }

    fn word(&self, ts: &[usize], x: usize) -> usize {
        ts.iter().rev().fold(x, |acc, &t| self.fa.mul(t, acc))
    }

    /// The value the identity forces at the word of `args`.
    fn forced(&self, args: &[usize]) -> (usize, usize) {
        let (&x, ts) = args.split_last().expect("nonempty tuple");
        let m = |v: usize| self.map[v].expect("assigned");
        let w = self.word(ts, x);
        let images: Vec<usize> = ts.iter().map(|&t| m(t)).collect();
        let value = match self.target {
            Target::NonadditiveIso => self.word(&images, m(x)),
            Target::NonadditiveDerivation => {
                let mut acc = self.word(ts, m(x));
                let mut swapped = ts.to_vec();
                for k in 0..ts.len() {
                    swapped[k] = m(ts[k]);
                    acc = self.fa.add(acc, self.word(&swapped, x));
                    swapped[k] = ts[k];
                }
                acc
            }
        };
        (w, value)
    }

    /// Applies forced values until nothing new is assigned; false on conflict.
    fn propagate(&mut self) -> bool {
        while let Some(v) = self.queue.pop() {
            let others = self.trail.clone();
            let free = self.n - 1;
            let mut args = vec![0usize; self.n];
            // slot `pos` holds v, the other slots range over the trail
            for pos in 0..self.n {
                let mut idx = vec![0usize; free];
                loop {
                    let mut rest = idx.iter().map(|&i| others[i]);
                    for (slot, a) in args.iter_mut().enumerate() {
                        *a = if slot == pos { v } else { rest.next().expect("free slot") };
                    }
                    let (w, value) = self.forced(&args);
                    if !self.assign(w, value) {
                        return false;
                    }
                    if !advance(&mut idx, others.len()) {
                        break;
                    }
                }
            }
        }
        true
    }

    fn table(&self) -> Vec<usize> {
        self.map.iter().map(|v| v.expect("complete")).collect()
    }

    fn additivity_failure(&self, table: &[usize]) -> Option<(usize, usize)> {
        let size = self.fa.size();
        for x in 0..size {
            for y in x..size {
                if table[self.fa.add(x, y)] != self.fa.add(table[x], table[y]) {
                    return Some((x, y));
                }
            }
        }
        None
    }
}

/// Next index tuple in lexicographic order; false after the last.
fn advance(idx: &mut [usize], base: usize) -> bool {
    for k in (0..idx.len()).rev() {
        idx[k] += 1;
        if idx[k] < base {
            return true;
        }
        idx[k] = 0;
    }
    false
}

struct Walk {
    nodes: u64,
    limit: u64,
    exhaustive: bool,
    rng: Option<ChaCha8Rng>,
    multiplicative: u64,
    additive: u64,
    witness: Option<Witness>,
    out_of_budget: bool,
}

fn walk(s: &mut Searcher, w: &mut Walk) {
    let Some(next) = s.map.iter().position(Option::is_none) else {
        let table = s.table();
        w.multiplicative += 1;
        match s.additivity_failure(&table) {
            None => w.additive += 1,
            Some((x, y)) => {
                if w.witness.is_none() {
                    w.witness = Some(Witness {
                        table,
                        pair: (s.fa.decode(x), s.fa.decode(y)),
                    });
                }
            }
        }
        return;
    };
    let mut candidates: Vec<usize> = (0..s.fa.size())
        .filter(|&y| s.target == Target::NonadditiveDerivation || !s.used[y])
        .collect();
    if let Some(rng) = w.rng.as_mut() {
        candidates.shuffle(rng);
    }
    for y in candidates {
        if w.nodes >= w.limit {
            w.out_of_budget = true;
            return;
        }
        w.nodes += 1;
        let mark = s.trail.len();
        if s.assign(next, y) && s.propagate() {
            walk(s, w);
        }
        s.undo(mark);
        if w.out_of_budget || (!w.exhaustive && w.witness.is_some()) {
            return;
        }
    }
}

fn hypotheses(alg: &Algebra, spec: &SearchSpec) -> Result<Vec<HypothesisRecord>> {
    let Some(law) = &spec.law else {
        return Ok(Vec::new());
    };
    spec.axes
        .iter()
        .map(|axis| {
            let decomp = decompose(alg, axis, law)?;
            let report = check_conditions(alg, &decomp)?;
            Ok(HypothesisRecord {
                axis: axis.clone(),
                law: report.law.clone(),
                all_hold: report.all_hold(),
                failing: report
                    .conditions
                    .iter()
                    .filter(|c| !c.holds())
                    .map(|c| c.label.to_string())
                    .collect(),
            })
        })
        .collect()
}

fn run(alg: &Algebra, target: Target, n: usize, mode: SearchMode) -> Result<Walk> {
    if n == 0 {
        return Err(Error::InvalidParameter("arity n must be positive".into()));
    }
    let fa = FiniteAlgebra::new(alg, ELEMENT_BOUND)?;
    let size = fa.size();
    let mut s = Searcher {
        fa,
        target,
        n,
        map: vec![None; size],
        used: vec![false; size],
        trail: Vec::new(),
        queue: Vec::new(),
    };
    let (limit, exhaustive, rng) = match mode {
        SearchMode::Exhaustive => (NODE_BOUND, true, None),
        SearchMode::Backtracking { budget, seed } => {
            (budget, false, (seed != 0).then(|| ChaCha8Rng::seed_from_u64(seed)))
        }
    };
    let mut w = Walk {
        nodes: 0,
        limit,
        exhaustive,
        rng,
        multiplicative: 0,
        additive: 0,
        witness: None,
        out_of_budget: false,
    };
    if s.assign(0, 0) && s.propagate() {
        walk(&mut s, &mut w);
    }
    if exhaustive && w.out_of_budget {
        return Err(Error::SizeBound {
            what: "exhaustive search nodes".into(),
            size: w.nodes as u128 + 1,
            bound: NODE_BOUND as u128,
        });
    }
    Ok(w)
}

pub fn run_search(alg: &Algebra, spec: &SearchSpec) -> Result<SearchOutcome> {
    let hypotheses = hypotheses(alg, spec)?;
    let w = run(alg, spec.target, spec.n, spec.mode)?;
    let status = if w.witness.is_some() {
        SearchStatus::WitnessFound
    } else if w.out_of_budget {
        SearchStatus::BudgetExhausted
    } else {
        SearchStatus::ExhaustedNone
    };
    let counts = matches!(spec.mode, SearchMode::Exhaustive).then_some((w.multiplicative, w.additive));
    Ok(SearchOutcome {
        status,
        witness: w.witness,
        counts,
        nodes: w.nodes,
        hypotheses,
    })
}

/// (multiplicative derivations, additive ones) among all maps fixing 0.
pub fn count_derivations(alg: &Algebra, n: usize, bound: u128) -> Result<(u64, u64)> {
    let size = crate::finite::element_count(alg.field(), alg.dim(), u128::MAX)? as u128;
    if size > bound {
        return Err(Error::SizeBound {
            what: "derivation enumeration domain".into(),
            size,
            bound,
        });
    }
    let w = run(alg, Target::NonadditiveDerivation, n, SearchMode::Exhaustive)?;
    Ok((w.multiplicative, w.additive))
}

/// Every invertible linear map satisfying the n-multiplicative identity,
/// as matrices. Multilinearity reduces the identity to basis tuples.
pub fn linear_multiplicative_bijections(alg: &Algebra, n: usize) -> Result<Vec<Matrix>> {
    if n == 0 {
        return Err(Error::InvalidParameter("arity n must be positive".into()));
    }
    let fa = FiniteAlgebra::new(alg, ELEMENT_BOUND)?;
    let d = alg.dim();
    let field = alg.field();
    // basis tuples with their word, grouped by the deepest basis index involved
    let mut checks: Vec<Vec<(Vec<usize>, Vector)>> = vec![Vec::new(); d];
    let mut idx = vec![0usize; n];
    loop {
        let (&x, ts) = idx.split_last().expect("n >= 1");
        let w = ts.iter().rev().fold(alg.basis_vector(x), |acc, &t| alg.mul(&alg.basis_vector(t), &acc));
        let support = w.coords().iter().rposition(|c| !c.is_zero()).unwrap_or(0);
        let depth = idx.iter().copied().max().unwrap_or(0).max(support);
        checks[depth].push((idx.clone(), w));
        if !advance(&mut idx, d) {
            break;
        }
    }
    let mut images: Vec<Vector> = Vec::with_capacity(d);
    let mut found = Vec::new();
    let mut nodes = 0u64;
    linear_walk(alg, &fa, &checks, &mut images, &mut found, &mut nodes)?;
    Ok(found
        .into_iter()
        .map(|cols: Vec<Vector>| Matrix::from_columns(field, d, &cols).expect("dimensions agree"))
        .filter(|m| m.inverse().is_some())
        .collect())
}

fn linear_walk(
    alg: &Algebra,
    fa: &FiniteAlgebra,
    checks: &[Vec<(Vec<usize>, Vector)>],
    images: &mut Vec<Vector>,
    found: &mut Vec<Vec<Vector>>,
    nodes: &mut u64,
) -> Result<()> {
    let depth = images.len();
    if depth == alg.dim() {
        found.push(images.clone());
        return Ok(());
    }
    let field = alg.field();
    for y in 0..fa.size() {
        *nodes += 1;
        if *nodes > NODE_BOUND {
            return Err(Error::SizeBound {
                what: "linear search nodes".into(),
                size: *nodes as u128,
                bound: NODE_BOUND as u128,
            });
        }
        images.push(fa.decode(y));
        let apply = |v: &Vector| {
            let mut out = Vector::zeros(field, alg.dim());
            for (k, c) in v.coords().iter().enumerate() {
                if !c.is_zero() {
                    out.add_scaled(c, &images[k]);
                }
            }
            out
        };
        let ok = checks[depth].iter().all(|(idx, w)| {
            let (&x, ts) = idx.split_last().expect("n >= 1");
            let rhs = ts.iter().rev().fold(images[x].clone(), |acc, &t| alg.mul(&images[t], &acc));
            apply(w) == rhs
        });
        if ok {
            linear_walk(alg, fa, checks, images, found, nodes)?;
        }
        images.pop();
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;
    use crate::zoo;

    fn fp(p: u64) -> FieldSpec {
        FieldSpec::prime(p).unwrap()
    }

    #[test]
    fn zero_algebra_counts() {
        let z = zoo::zero_algebra(1, fp(5)).unwrap();
        let spec = SearchSpec::new(Target::NonadditiveIso, 2, SearchMode::Exhaustive);
        let out = run_search(&z.algebra, &spec).unwrap();
        assert_eq!(out.counts, Some((24, 4)));
        assert_eq!(out.status, SearchStatus::WitnessFound);
        let w = out.witness.unwrap();
        assert_eq!(w.table, vec![0, 1, 2, 4, 3]);
        assert_eq!(w.pair, (Vector::from_i64(fp(5), &[1]), Vector::from_i64(fp(5), &[2])));
    }

    #[test]
    fn trivial_field() {
        let z = zoo::zero_algebra(1, fp(2)).unwrap();
        let spec = SearchSpec::new(Target::NonadditiveIso, 2, SearchMode::Exhaustive);
        let out = run_search(&z.algebra, &spec).unwrap();
        assert_eq!(out.counts, Some((1, 1)));
        assert_eq!(out.status, SearchStatus::ExhaustedNone);
        assert_eq!(count_derivations(&z.algebra, 2, DERIVATION_LIMIT).unwrap(), (2, 2));
    }

    #[test]
    fn backtracking_finds_witness_fast() {
        let z = zoo::zero_algebra(1, fp(5)).unwrap();
        let spec = SearchSpec::new(Target::NonadditiveIso, 2, SearchMode::Backtracking { budget: 100, seed: 0 });
        let out = run_search(&z.algebra, &spec).unwrap();
        assert_eq!(out.status, SearchStatus::WitnessFound);
        assert!(out.nodes <= 100);
        assert!(out.counts.is_none());
    }

    #[test]
    fn zero_algebra_derivations() {
        let z = zoo::zero_algebra(1, fp(5)).unwrap();
        assert_eq!(count_derivations(&z.algebra, 2, DERIVATION_LIMIT).unwrap(), (625, 5));
        let big = zoo::zero_algebra(2, fp(7)).unwrap();
        assert!(count_derivations(&big.algebra, 2, DERIVATION_LIMIT).is_err());
    }

    #[test]
    fn diag2_over_f3() {
        let z = zoo::diag2(fp(3)).unwrap();
        let auts = linear_multiplicative_bijections(&z.algebra, 2).unwrap();
        // identity and the swap of the two idempotents
        assert_eq!(auts.len(), 2);
    }
}
