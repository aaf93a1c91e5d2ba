//! Martindale-like kernel conditions and the operator families `L_i`, `G`,
//! `F_i` built from eigenspace multiplications.
//!
//! "For all `t` in `A_x`" reduces to a basis of `A_x` by bilinearity, and every
//! family member is multilinear in its factors, so words over part-basis
//! factors decide each statement exactly.

use std::collections::BTreeMap;
use std::fmt;

use crate::algebra::Algebra;
use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::fusion::{AxisDecomposition, FusionLaw, LawKind};
use crate::lazy::{HwKey, LazyAlgebra, SparseVector};
use crate::linalg::{Matrix, Subspace, Vector};
use crate::window::{lazy_annihilated, HighwaterWindow, KernelTracker};

pub const DEFAULT_CAP: usize = 10_000;

/// Is every `a` in the `part` eigenspace with `t a = 0` for all `t` in the
/// `multipliers` eigenspace zero? `witness` is a nonzero such `a` otherwise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelCheck<V> {
    pub part: Scalar,
    pub multipliers: Scalar,
    pub witness: Option<V>,
}

impl<V> KernelCheck<V> {
    pub fn holds(&self) -> bool {
        self.witness.is_none()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Condition<V> {
    pub label: &'static str,
    pub checks: Vec<KernelCheck<V>>,
}

impl<V> Condition<V> {
    pub fn holds(&self) -> bool {
        self.checks.iter().all(KernelCheck::holds)
    }

    pub fn witness(&self) -> Option<&V> {
        self.checks.iter().find_map(|c| c.witness.as_ref())
    }
}

/// Conditions (i)-(iii) for a `J` law, (i)-(v) for an `M` law.
#[derive(Clone, Debug)]
pub struct MartindaleReport<V = Vector> {
    pub law: String,
    pub axis: V,
    pub conditions: Vec<Condition<V>>,
    pub window: Option<u64>,
}

impl<V> MartindaleReport<V> {
    pub fn all_hold(&self) -> bool {
        self.conditions.iter().all(Condition::holds)
    }

    pub fn condition(&self, label: &str) -> Option<&Condition<V>> {
        self.conditions.iter().find(|c| c.label == label)
    }

    pub fn holds(&self, label: &str) -> Option<bool> {
        self.condition(label).map(Condition::holds)
    }
}

// (label, [(part, multipliers)]) over law indices 1, 0, alpha, beta = 0, 1, 2, 3
const J_CONDITIONS: &[(&str, &[(usize, usize)])] = &[
    ("i", &[(0, 2), (1, 2)]),
    ("ii", &[(1, 1)]),
    ("iii", &[(2, 1)]),
];

const M_CONDITIONS: &[(&str, &[(usize, usize)])] = &[
    ("i", &[(0, 2), (1, 2)]),
    ("ii", &[(1, 1)]),
    ("iii", &[(2, 1), (3, 1)]),
    ("iv", &[(3, 2)]),
    ("v", &[(2, 3)]),
];

fn layout(law: &FusionLaw) -> Result<&'static [(&'static str, &'static [(usize, usize)])]> {
    match (law.kind(), law.len()) {
        (LawKind::Jordan, 3) => Ok(J_CONDITIONS),
        (LawKind::Monster | LawKind::Highwater, 4) => Ok(M_CONDITIONS),
        _ => Err(Error::Unsupported(format!(
            "Martindale conditions are defined for jordan and monster laws, not `{law}`"
        ))),
    }
}

/// Nonzero vector of `part` killed by every basis vector of `multipliers`.
pub fn annihilated(alg: &Algebra, part: &Subspace, multipliers: &Subspace) -> Result<Option<Vector>> {
    let mut k = part.clone();
    for t in multipliers.basis_vectors() {
        if k.is_zero() {
            break;
        }
        k = k.intersect(&alg.left_mul_matrix(&t)?.kernel())?;
    }
    Ok(k.basis_vectors().into_iter().next())
}

fn check_conditions_with(
    alg: &Algebra,
    decomp: &AxisDecomposition,
    expect: LawKind,
) -> Result<MartindaleReport> {
    if !decomp.is_complete() {
        return Err(Error::IncompleteDecomposition);
    }
    let law = decomp.law();
    let rows = layout(law)?;
    let kind_ok = match expect {
        LawKind::Jordan => rows.len() == J_CONDITIONS.len(),
        _ => rows.len() == M_CONDITIONS.len(),
    };
    if !kind_ok {
        return Err(Error::Unsupported(format!("law `{law}` does not match the requested conditions")));
    }
    let ev = law.eigenvalues();
    let mut conditions = Vec::new();
    for &(label, pairs) in rows {
        let mut checks = Vec::new();
        for &(p, m) in pairs {
            checks.push(KernelCheck {
                part: ev[p].clone(),
                multipliers: ev[m].clone(),
                witness: annihilated(alg, decomp.part(p), decomp.part(m))?,
            });
        }
        conditions.push(Condition { label, checks });
    }
    Ok(MartindaleReport {
        law: law.spec(),
        axis: decomp.axis().clone(),
        conditions,
        window: None,
    })
}

/// Conditions (i)-(iii) for a decomposition over a `J(alpha)` law.
pub fn check_j_conditions(alg: &Algebra, decomp: &AxisDecomposition) -> Result<MartindaleReport> {
    check_conditions_with(alg, decomp, LawKind::Jordan)
}

/// Conditions (i)-(v) for a decomposition over an `M(alpha, beta)` law.
pub fn check_m_conditions(alg: &Algebra, decomp: &AxisDecomposition) -> Result<MartindaleReport> {
    check_conditions_with(alg, decomp, LawKind::Monster)
}

/// Whichever condition set the decomposition's law calls for.
pub fn check_conditions(alg: &Algebra, decomp: &AxisDecomposition) -> Result<MartindaleReport> {
    match decomp.law().len() {
        3 => check_j_conditions(alg, decomp),
        _ => check_m_conditions(alg, decomp),
    }
}

/// Conditions (i)-(v) at a Highwater axis, with parts and multipliers
/// restricted to window generators.
pub fn check_m_conditions_window(
    win: &HighwaterWindow,
    law: &FusionLaw,
) -> Result<MartindaleReport<SparseVector<HwKey>>> {
    let order = win.law_order(law)?;
    let rows = layout(law)?;
    let gens: Vec<Vec<SparseVector<HwKey>>> = order.iter().map(|&s| win.generators(s)).collect();
    let ev = law.eigenvalues();
    let conditions = rows
        .iter()
        .map(|&(label, pairs)| Condition {
            label,
            checks: pairs
                .iter()
                .map(|&(p, m)| KernelCheck {
                    part: ev[p].clone(),
                    multipliers: ev[m].clone(),
                    witness: lazy_annihilated(win.algebra(), &gens[p], &gens[m]),
                })
                .collect(),
        })
        .collect();
    Ok(MartindaleReport {
        law: law.spec(),
        axis: win.axis_vector(),
        conditions,
        window: Some(win.window()),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FamilyTag {
    L0,
    L1,
    LAlpha,
    LBeta,
    G,
    FAlpha,
    FBeta,
    F1,
    F0,
}

impl FamilyTag {
    /// For `F_i`, the law index of `i`.
    pub fn target(self) -> Option<usize> {
        match self {
            FamilyTag::F1 => Some(0),
            FamilyTag::F0 => Some(1),
            FamilyTag::FAlpha => Some(2),
            FamilyTag::FBeta => Some(3),
            _ => None,
        }
    }
}

impl fmt::Display for FamilyTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FamilyTag::L0 => "L0",
            FamilyTag::L1 => "L1",
            FamilyTag::LAlpha => "Lalpha",
            FamilyTag::LBeta => "Lbeta",
            FamilyTag::G => "G",
            FamilyTag::FAlpha => "Falpha",
            FamilyTag::FBeta => "Fbeta",
            FamilyTag::F1 => "F1",
            FamilyTag::F0 => "F0",
        })
    }
}

/// A word factor: the axis itself, or basis vector `k` of law part `p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum FactorRef {
    Axis,
    Part(usize, usize),
}

fn basic_words(tag: FamilyTag, r: usize, dims: &[usize]) -> Vec<Vec<FactorRef>> {
    let lead = |part: usize| -> Vec<Vec<FactorRef>> {
        (0..dims.get(part).copied().unwrap_or(0))
            .map(|k| {
                let mut w = vec![FactorRef::Axis; r - 1];
                w.push(FactorRef::Part(part, k));
                w
            })
            .collect()
    };
    match tag {
        FamilyTag::L0 => {
            let mut words = vec![Vec::new()];
            for _ in 0..r {
                words = words
                    .into_iter()
                    .flat_map(|w| {
                        (0..dims[1]).map(move |k| {
                            let mut w = w.clone();
                            w.push(FactorRef::Part(1, k));
                            w
                        })
                    })
                    .collect();
            }
            words
        }
        FamilyTag::L1 => vec![vec![FactorRef::Axis; r]],
        FamilyTag::LAlpha => lead(2),
        FamilyTag::LBeta => lead(3),
        _ => unreachable!("composite family"),
    }
}

/// Composite families as products of basic ones, leftmost applied last.
fn stages(tag: FamilyTag, monster: bool) -> Vec<FamilyTag> {
    use FamilyTag::*;
    let g = [L0, L1];
    match (tag, monster) {
        (L0 | L1 | LAlpha | LBeta, _) => vec![tag],
        (G, _) => g.to_vec(),
        (FAlpha, false) => g.to_vec(),
        (F1, false) => [&g[..], &[LAlpha, L1]].concat(),
        (F0, false) => [&g[..], &[LAlpha, L0]].concat(),
        (FBeta, true) => [&g[..], &[LAlpha], &g[..]].concat(),
        (FAlpha, true) => [stages(FBeta, true), vec![LBeta], g.to_vec()].concat(),
        (F1, true) => [stages(FAlpha, true), vec![LAlpha, L1]].concat(),
        (F0, true) => [stages(FAlpha, true), vec![LAlpha, L0]].concat(),
        (FBeta, false) => unreachable!("no beta part in a jordan law"),
    }
}

fn family_tags(monster: bool) -> Vec<FamilyTag> {
    use FamilyTag::*;
    if monster {
        vec![L0, L1, LAlpha, LBeta, G, FBeta, FAlpha, F1, F0]
    } else {
        vec![L0, L1, LAlpha, FAlpha, F1, F0]
    }
}

fn family_size(tag: FamilyTag, monster: bool, counts: &BTreeMap<FamilyTag, usize>, cap: usize) -> Result<usize> {
    let required: u128 = stages(tag, monster).iter().map(|s| counts[s] as u128).product();
    if required > cap as u128 {
        return Err(Error::CapExceeded {
            family: tag.to_string(),
            required,
            cap,
        });
    }
    Ok(required as usize)
}

fn is_monster(law: &FusionLaw) -> Result<bool> {
    match (law.kind(), law.len()) {
        (LawKind::Jordan, 3) => Ok(false),
        (LawKind::Monster | LawKind::Highwater, 4) => Ok(true),
        _ => Err(Error::Unsupported(format!("operator families need a jordan or monster law, not `{law}`"))),
    }
}

/// One factor of an operator word, tagged with its eigenvalue.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factor {
    pub eigenvalue: Scalar,
    pub vector: Vector,
}

/// `L_{t_1} ... L_{t_k}` with its matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OperatorWord {
    factors: Vec<Factor>,
    matrix: Matrix,
}

impl OperatorWord {
    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    fn then(&self, inner: &OperatorWord) -> OperatorWord {
        OperatorWord {
            factors: [self.factors.clone(), inner.factors.clone()].concat(),
            matrix: self.matrix.mul(&inner.matrix),
        }
    }
}

#[derive(Clone, Debug)]
pub struct OperatorFamily {
    pub tag: FamilyTag,
    pub r: usize,
    pub words: Vec<OperatorWord>,
}

pub type Families = BTreeMap<FamilyTag, OperatorFamily>;

/// Generators of `L0, L1, L_alpha (, L_beta, G), F_i` over part-basis factors.
/// `L_alpha` words are `L_e^{r-1} L_t`, so for `r = 1` they are just `L_t`.
pub fn build_operator_families(alg: &Algebra, decomp: &AxisDecomposition, r: usize, cap: usize) -> Result<Families> {
    if !decomp.is_complete() {
        return Err(Error::IncompleteDecomposition);
    }
    if r == 0 {
        return Err(Error::InvalidParameter("word length r must be positive".into()));
    }
    let law = decomp.law();
    let monster = is_monster(law)?;
    let dims = decomp.dims();
    let bases: Vec<Vec<Vector>> = decomp.parts().iter().map(Subspace::basis_vectors).collect();
    let ev = law.eigenvalues();
    let one = law.field().one();

    let basic = [FamilyTag::L0, FamilyTag::L1, FamilyTag::LAlpha, FamilyTag::LBeta];
    let mut counts = BTreeMap::new();
    for tag in basic {
        counts.insert(tag, basic_words(tag, r, &dims).len());
    }
    let tags = family_tags(monster);
    for &tag in &tags {
        family_size(tag, monster, &counts, cap)?;
    }

    let mut out = Families::new();
    let mut built: BTreeMap<FamilyTag, Vec<OperatorWord>> = BTreeMap::new();
    for tag in basic {
        let words = basic_words(tag, r, &dims)
            .into_iter()
            .map(|refs| {
                let factors: Vec<Factor> = refs
                    .iter()
                    .map(|f| match *f {
                        FactorRef::Axis => Factor {
                            eigenvalue: one.clone(),
                            vector: decomp.axis().clone(),
                        },
                        FactorRef::Part(p, k) => Factor {
                            eigenvalue: ev[p].clone(),
                            vector: bases[p][k].clone(),
                        },
                    })
                    .collect();
                let mut matrix = Matrix::identity(alg.field(), alg.dim());
                for f in &factors {
                    matrix = matrix.mul(&alg.left_mul_matrix(&f.vector)?);
                }
                Ok(OperatorWord { factors, matrix })
            })
            .collect::<Result<Vec<_>>>()?;
        built.insert(tag, words);
    }
    for tag in tags {
        let mut words = vec![OperatorWord {
            factors: Vec::new(),
            matrix: Matrix::identity(alg.field(), alg.dim()),
        }];
        for stage in stages(tag, monster) {
            words = words
                .iter()
                .flat_map(|w| built[&stage].iter().map(move |s| w.then(s)))
                .collect();
        }
        out.insert(tag, OperatorFamily { tag, r, words });
    }
    Ok(out)
}

/// Every generator kills every vector of `part`.
pub fn verify_family_annihilation(fam: &OperatorFamily, part: &Subspace) -> bool {
    let basis = part.basis_vectors();
    fam.words
        .iter()
        .all(|w| basis.iter().all(|v| w.matrix.mul_vec(v).is_zero()))
}

/// The common kernel of the generators meets `part` trivially.
pub fn verify_family_injectivity(fam: &OperatorFamily, part: &Subspace) -> bool {
    let mut k = part.clone();
    for w in &fam.words {
        if k.is_zero() {
            break;
        }
        k = k.intersect(&w.matrix.kernel()).expect("same ambient space");
    }
    k.is_zero()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StatementKind {
    /// `F_i A_j = 0` for `i != j`.
    Annihilation,
    /// `F_i a_i = 0` implies `a_i = 0`.
    Injectivity,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LemmaStatement {
    pub family: FamilyTag,
    pub family_size: usize,
    pub part: Scalar,
    pub kind: StatementKind,
    pub holds: bool,
}

#[derive(Clone, Debug)]
pub struct LemmaReport {
    pub law: String,
    pub r: usize,
    pub statements: Vec<LemmaStatement>,
    pub window: Option<u64>,
}

impl LemmaReport {
    pub fn all_hold(&self) -> bool {
        self.statements.iter().all(|s| s.holds)
    }
}

fn f_tags(monster: bool) -> Vec<FamilyTag> {
    use FamilyTag::*;
    if monster {
        vec![F1, F0, FAlpha, FBeta]
    } else {
        vec![F1, F0, FAlpha]
    }
}

/// Every `F_i A_j = 0` with `i != j` and every `F_i`-injectivity on `A_i`.
pub fn lemma_check(alg: &Algebra, decomp: &AxisDecomposition, r: usize, cap: usize) -> Result<LemmaReport> {
    let families = build_operator_families(alg, decomp, r, cap)?;
    let law = decomp.law();
    let monster = is_monster(law)?;
    let mut statements = Vec::new();
    for tag in f_tags(monster) {
        let fam = &families[&tag];
        let i = tag.target().expect("F family");
        for j in 0..law.len() {
            let part = decomp.part(j);
            let (kind, holds) = if i == j {
                (StatementKind::Injectivity, verify_family_injectivity(fam, part))
            } else {
                (StatementKind::Annihilation, verify_family_annihilation(fam, part))
            };
            statements.push(LemmaStatement {
                family: tag,
                family_size: fam.words.len(),
                part: law.eigenvalues()[j].clone(),
                kind,
                holds,
            });
        }
    }
    Ok(LemmaReport {
        law: law.spec(),
        r,
        statements,
        window: None,
    })
}

type LazyWord = Vec<SparseVector<HwKey>>;

fn apply_word<A: LazyAlgebra>(alg: &A, word: &[SparseVector<A::Key>], v: &SparseVector<A::Key>) -> SparseVector<A::Key> {
    let mut out = v.clone();
    for t in word.iter().rev() {
        if out.is_zero() {
            break;
        }
        out = alg.mul(t, &out);
    }
    out
}

// Applies the stages right to left, skipping branches where every image
// vanishes. `leaf` returns false to stop early; the return value is false
// iff some leaf stopped the walk.
fn walk<A: LazyAlgebra>(
    alg: &A,
    stages: &[&[Vec<SparseVector<A::Key>>]],
    vs: &[SparseVector<A::Key>],
    leaf: &mut dyn FnMut(&[SparseVector<A::Key>]) -> bool,
) -> bool {
    let Some((last, rest)) = stages.split_last() else {
        return leaf(vs);
    };
    for word in last.iter() {
        let images: Vec<_> = vs.iter().map(|v| apply_word(alg, word, v)).collect();
        if images.iter().all(SparseVector::is_zero) {
            continue;
        }
        if !walk(alg, rest, &images, leaf) {
            return false;
        }
    }
    true
}

/// The lemma statements at a Highwater axis with factors and parts drawn
/// from window generators.
pub fn lemma_check_window(win: &HighwaterWindow, law: &FusionLaw, r: usize, cap: usize) -> Result<LemmaReport> {
    if r == 0 {
        return Err(Error::InvalidParameter("word length r must be positive".into()));
    }
    let order = win.law_order(law)?;
    let monster = is_monster(law)?;
    let gens: Vec<Vec<SparseVector<HwKey>>> = order.iter().map(|&s| win.generators(s)).collect();
    let dims: Vec<usize> = gens.iter().map(Vec::len).collect();
    let axis = win.axis_vector();

    let mut basic: BTreeMap<FamilyTag, Vec<LazyWord>> = BTreeMap::new();
    let mut counts = BTreeMap::new();
    for tag in [FamilyTag::L0, FamilyTag::L1, FamilyTag::LAlpha, FamilyTag::LBeta] {
        let words: Vec<LazyWord> = basic_words(tag, r, &dims)
            .into_iter()
            .map(|refs| {
                refs.iter()
                    .map(|f| match *f {
                        FactorRef::Axis => axis.clone(),
                        FactorRef::Part(p, k) => gens[p][k].clone(),
                    })
                    .collect()
            })
            .collect();
        counts.insert(tag, words.len());
        basic.insert(tag, words);
    }
    for tag in family_tags(monster) {
        family_size(tag, monster, &counts, cap)?;
    }

    let alg = win.algebra();
    let mut statements = Vec::new();
    for tag in f_tags(monster) {
        let stage_tags = stages(tag, monster);
        let stage_refs: Vec<&[LazyWord]> = stage_tags.iter().map(|t| basic[t].as_slice()).collect();
        let size = family_size(tag, monster, &counts, cap)?;
        let i = tag.target().expect("F family");
        for (j, part) in gens.iter().enumerate() {
            let (kind, holds) = if i == j {
                let mut tracker = KernelTracker::new(win.field(), part);
                if !tracker.is_trivial() {
                    walk(alg, &stage_refs, part, &mut |imgs| {
                        tracker.feed(imgs);
                        !tracker.is_trivial()
                    });
                }
                (StatementKind::Injectivity, tracker.is_trivial())
            } else {
                let holds = part.iter().all(|g| {
                    walk(alg, &stage_refs, std::slice::from_ref(g), &mut |imgs| imgs[0].is_zero())
                });
                (StatementKind::Annihilation, holds)
            };
            statements.push(LemmaStatement {
                family: tag,
                family_size: size,
                part: law.eigenvalues()[j].clone(),
                kind,
                holds,
            });
        }
    }
    Ok(LemmaReport {
        law: law.spec(),
        r,
        statements,
        window: Some(win.window()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;
    use crate::fusion::decompose;
    use crate::zoo;

    const Q: FieldSpec = FieldSpec::Rationals;

    fn two_a() -> (Algebra, AxisDecomposition) {
        let z = zoo::norton_sakuma_2a(Q).unwrap();
        let d = decompose(&z.algebra, &z.axes[0], &z.law).unwrap();
        (z.algebra, d)
    }

    #[test]
    fn two_a_conditions_hold() {
        let (alg, d) = two_a();
        let rep = check_j_conditions(&alg, &d).unwrap();
        assert_eq!(rep.conditions.len(), 3);
        assert!(rep.all_hold());
    }

    #[test]
    fn two_point_matsuo_fails_i() {
        let z = zoo::two_point_matsuo(Q.ratio_i64(1, 4).unwrap()).unwrap();
        let d = decompose(&z.algebra, &z.axes[0], &z.law).unwrap();
        let rep = check_j_conditions(&z.algebra, &d).unwrap();
        assert_eq!(rep.holds("i"), Some(false));
        assert_eq!(rep.condition("i").unwrap().witness(), Some(&z.axes[0]));
    }

    #[test]
    fn diag2_monster_fails_i() {
        let z = zoo::diag2(Q).unwrap();
        let law = FusionLaw::monster(Q.ratio_i64(1, 4).unwrap(), Q.ratio_i64(1, 32).unwrap()).unwrap();
        let d = decompose(&z.algebra, &z.axes[0], &law).unwrap();
        let rep = check_m_conditions(&z.algebra, &d).unwrap();
        assert_eq!(rep.holds("i"), Some(false));
        assert_eq!(rep.conditions.len(), 5);
        assert!(check_j_conditions(&z.algebra, &d).is_err());
    }

    #[test]
    fn family_shapes() {
        let (alg, d) = two_a();
        let fams = build_operator_families(&alg, &d, 1, DEFAULT_CAP).unwrap();
        assert_eq!(fams[&FamilyTag::L0].words.len(), 1);
        assert_eq!(fams[&FamilyTag::LAlpha].words[0].len(), 1);
        assert_eq!(fams[&FamilyTag::F1].words.len(), 1);
        assert_eq!(fams[&FamilyTag::F1].words[0].len(), 4);

        let b = zoo::jordan_b_plus(Q).unwrap();
        let db = decompose(&b.algebra, &b.axes[0], &b.law).unwrap();
        let fams = build_operator_families(&b.algebra, &db, 2, DEFAULT_CAP).unwrap();
        let la = &fams[&FamilyTag::LAlpha];
        assert_eq!(la.words.len(), 2);
        for w in &la.words {
            assert_eq!(w.factors()[0].vector, b.axes[0]);
            assert_eq!(w.factors()[1].eigenvalue, Q.ratio_i64(1, 2).unwrap());
        }
    }

    #[test]
    fn cap_zero_errors() {
        let (alg, d) = two_a();
        let err = build_operator_families(&alg, &d, 1, 0).unwrap_err();
        assert!(matches!(err, Error::CapExceeded { required: 1, cap: 0, .. }));
    }

    #[test]
    fn word_matrix_is_product() {
        let (alg, d) = two_a();
        let fams = build_operator_families(&alg, &d, 2, DEFAULT_CAP).unwrap();
        for fam in fams.values() {
            for w in &fam.words {
                let mut m = Matrix::identity(Q, 3);
                for f in w.factors() {
                    m = m.mul(&alg.left_mul_matrix(&f.vector).unwrap());
                }
                assert_eq!(&m, w.matrix());
            }
        }
    }

    #[test]
    fn two_a_lemma() {
        let (alg, d) = two_a();
        for r in [1, 2] {
            let rep = lemma_check(&alg, &d, r, DEFAULT_CAP).unwrap();
            assert_eq!(rep.statements.len(), 9);
            assert!(rep.all_hold(), "{rep:?}");
        }
        let fams = build_operator_families(&alg, &d, 1, DEFAULT_CAP).unwrap();
        assert!(!verify_family_annihilation(&fams[&FamilyTag::L1], d.part(0)));
    }

    #[test]
    fn empty_family_not_injective() {
        let (_, d) = two_a();
        let fam = OperatorFamily {
            tag: FamilyTag::F0,
            r: 1,
            words: Vec::new(),
        };
        assert!(!verify_family_injectivity(&fam, d.part(0)));
        assert!(verify_family_injectivity(&fam, &Subspace::zero(Q, 3)));
    }

    #[test]
    fn highwater_window_small() {
        let win = HighwaterWindow::new(Q, 0, 3).unwrap();
        let law = FusionLaw::monster(Q.from_i64(2), Q.ratio_i64(1, 2).unwrap()).unwrap();
        let rep = check_m_conditions_window(&win, &law).unwrap();
        assert!(rep.all_hold());
        assert_eq!(rep.window, Some(3));
        let lem = lemma_check_window(&HighwaterWindow::new(Q, 0, 1).unwrap(), &law, 1, DEFAULT_CAP).unwrap();
        assert!(lem.all_hold(), "{lem:?}");
    }
}
