//! Multiplicative isomorphisms, derivations and (Jordan) elementary pairs,
//! their defining identities, and the residual functions measuring how far
//! they are from additive.
//!
//! The maps are not linear, so identities are checked on element tuples:
//! every tuple when the algebra is small and finite, otherwise on seeded
//! samples (basis tuples first, then random elements).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::Algebra;
use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::finite::{element_count, encode, FiniteAlgebra};
use crate::fusion::AxisDecomposition;
use crate::linalg::{Matrix, Vector};

/// Largest algebra checked element by element.
pub const EXHAUSTIVE_BOUND: u128 = 3_125;

/// Largest number of tuples an exhaustive check will visit.
pub const TUPLE_BOUND: u128 = 50_000_000;

// Table maps may address larger algebras than the exhaustive checks do.
const TABLE_BOUND: u128 = 10_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// Every tuple; the algebras may have at most `bound` elements.
    Exhaustive { bound: u128 },
    /// Basis tuples, then random tuples, `count` in total.
    Sampled { count: usize, seed: u64 },
}

impl Mode {
    pub fn exhaustive() -> Self {
        Mode::Exhaustive {
            bound: EXHAUSTIVE_BOUND,
        }
    }

    pub fn sampled(count: usize, seed: u64) -> Self {
        Mode::Sampled { count, seed }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MapRepr {
    /// Image index of every element index of a finite algebra.
    Table(Vec<usize>),
    /// Matrix acting on coordinates.
    Linear(Matrix),
}

/// A function between two algebras over the same field.
#[derive(Clone, Debug)]
pub struct MapTable<'a> {
    domain: &'a Algebra,
    codomain: &'a Algebra,
    repr: MapRepr,
}

fn same_field(a: &Algebra, b: &Algebra) -> Result<()> {
    if a.field() != b.field() {
        return Err(Error::FieldMismatch {
            expected: a.field(),
            found: b.field(),
        });
    }
    Ok(())
}

impl<'a> MapTable<'a> {
    pub fn table(domain: &'a Algebra, codomain: &'a Algebra, values: Vec<usize>) -> Result<Self> {
        same_field(domain, codomain)?;
        let n = element_count(domain.field(), domain.dim(), TABLE_BOUND)?;
        let m = element_count(codomain.field(), codomain.dim(), TABLE_BOUND)?;
        if values.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: values.len(),
            });
        }
        if let Some(&bad) = values.iter().find(|&&v| v >= m) {
            return Err(Error::InvalidParameter(format!(
                "image index {bad} outside the {m} codomain elements"
            )));
        }
        Ok(MapTable {
            domain,
            codomain,
            repr: MapRepr::Table(values),
        })
    }

    /// `matrix` has `codomain.dim()` rows and `domain.dim()` columns.
    pub fn linear(domain: &'a Algebra, codomain: &'a Algebra, matrix: Matrix) -> Result<Self> {
        same_field(domain, codomain)?;
        if matrix.field() != domain.field() {
            return Err(Error::FieldMismatch {
                expected: domain.field(),
                found: matrix.field(),
            });
        }
        if matrix.rows() != codomain.dim() || matrix.cols() != domain.dim() {
            return Err(Error::DimensionMismatch {
                expected: codomain.dim() * domain.dim(),
                found: matrix.rows() * matrix.cols(),
            });
        }
        Ok(MapTable {
            domain,
            codomain,
            repr: MapRepr::Linear(matrix),
        })
    }

    pub fn identity(alg: &'a Algebra) -> Self {
        MapTable {
            domain: alg,
            codomain: alg,
            repr: MapRepr::Linear(Matrix::identity(alg.field(), alg.dim())),
        }
    }

    /// Tabulates `f` on every element of a finite domain.
    pub fn from_fn(domain: &'a Algebra, codomain: &'a Algebra, f: impl Fn(&Vector) -> Vector) -> Result<Self> {
        let n = element_count(domain.field(), domain.dim(), TABLE_BOUND)?;
        let mut values = Vec::with_capacity(n);
        for i in 0..n {
            let x = crate::finite::decode(domain.field(), domain.dim(), i)?;
            let y = f(&x);
            codomain.check_vector(&y)?;
            values.push(encode(&y)?);
        }
        MapTable::table(domain, codomain, values)
    }

    pub fn domain(&self) -> &'a Algebra {
        self.domain
    }

    pub fn codomain(&self) -> &'a Algebra {
        self.codomain
    }

    pub fn repr(&self) -> &MapRepr {
        &self.repr
    }

    pub fn field(&self) -> FieldSpec {
        self.domain.field()
    }

    pub fn apply(&self, x: &Vector) -> Vector {
        match &self.repr {
            MapRepr::Linear(m) => m.mul_vec(x),
            MapRepr::Table(t) => {
                let i = encode(x).expect("table maps live on prime fields");
                crate::finite::decode(self.field(), self.codomain.dim(), t[i]).expect("prime field")
            }
        }
    }

    /// Image indices of every domain element.
    pub fn to_table(&self, bound: u128) -> Result<Vec<usize>> {
        match &self.repr {
            MapRepr::Table(t) => Ok(t.clone()),
            MapRepr::Linear(m) => {
                let n = element_count(self.field(), self.domain.dim(), bound)?;
                (0..n)
                    .map(|i| {
                        let x = crate::finite::decode(self.field(), self.domain.dim(), i)?;
                        encode(&m.mul_vec(&x))
                    })
                    .collect()
            }
        }
    }

    pub fn is_bijective(&self) -> bool {
        match &self.repr {
            MapRepr::Linear(m) => m.rows() == m.cols() && m.inverse().is_some(),
            MapRepr::Table(t) => {
                if self.domain.dim() != self.codomain.dim() {
                    return false;
                }
                let mut seen = vec![false; t.len()];
                t.iter().all(|&v| !std::mem::replace(&mut seen[v], true))
            }
        }
    }

    /// The inverse map, by table transposition or matrix inversion.
    pub fn inverse(&self) -> Result<MapTable<'a>> {
        let repr = match &self.repr {
            MapRepr::Linear(m) => MapRepr::Linear(
                m.inverse()
                    .filter(|_| m.rows() == m.cols())
                    .ok_or_else(|| Error::NotInvertible("singular matrix".into()))?,
            ),
            MapRepr::Table(t) => {
                if !self.is_bijective() {
                    return Err(Error::NotInvertible("table is not a bijection".into()));
                }
                let mut inv = vec![0; t.len()];
                for (i, &v) in t.iter().enumerate() {
                    inv[v] = i;
                }
                MapRepr::Table(inv)
            }
        };
        Ok(MapTable {
            domain: self.codomain,
            codomain: self.domain,
            repr,
        })
    }

    /// First pair `(x, y)`, in element order, with `f(x + y) != f(x) + f(y)`.
    /// Linear maps are additive by construction.
    pub fn additivity_failure(&self) -> Result<Option<(Vector, Vector)>> {
        let MapRepr::Table(t) = &self.repr else {
            return Ok(None);
        };
        let dom = FiniteAlgebra::new(self.domain, TABLE_BOUND)?;
        let cod = FiniteAlgebra::new(self.codomain, TABLE_BOUND)?;
        for x in 0..t.len() {
            for y in x..t.len() {
                if t[dom.add(x, y)] != cod.add(t[x], t[y]) {
                    return Ok(Some((dom.decode(x), dom.decode(y))));
                }
            }
        }
        Ok(None)
    }

    pub fn is_additive(&self) -> Result<bool> {
        Ok(self.additivity_failure()?.is_none())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Flavor {
    Elementary,
    Jordan,
}

/// `M: A -> A'` and `M*: A' -> A`.
#[derive(Clone, Debug)]
pub struct ElementaryPair<'a> {
    pub m: MapTable<'a>,
    pub m_star: MapTable<'a>,
    pub flavor: Flavor,
}

impl<'a> ElementaryPair<'a> {
    pub fn new(m: MapTable<'a>, m_star: MapTable<'a>, flavor: Flavor) -> Result<Self> {
        if m.domain() != m_star.codomain() || m.codomain() != m_star.domain() {
            return Err(Error::InvalidParameter(
                "M* must map the codomain of M back to its domain".into(),
            ));
        }
        if flavor == Flavor::Jordan && m.field().characteristic() == 2 {
            return Err(Error::Characteristic {
                name: "jordan elementary pair".into(),
                characteristic: 2,
                excluded: vec![2],
            });
        }
        Ok(ElementaryPair { m, m_star, flavor })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckOutcome {
    pub holds: bool,
    /// The first failing tuple, replayable through the same identity.
    pub counterexample: Option<Vec<Vector>>,
    pub tested: u64,
    pub exhaustive: bool,
}

/// Element arithmetic shared by index-addressed finite algebras and
/// coordinate vectors.
pub(crate) trait Space {
    type E: Clone + PartialEq;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn add(&self, a: &Self::E, b: &Self::E) -> Self::E;
}

impl Space for FiniteAlgebra<'_> {
    type E = usize;
    fn mul(&self, a: &usize, b: &usize) -> usize {
        FiniteAlgebra::mul(self, *a, *b)
    }
    fn add(&self, a: &usize, b: &usize) -> usize {
        FiniteAlgebra::add(self, *a, *b)
    }
}

impl Space for Algebra {
    type E = Vector;
    fn mul(&self, a: &Vector, b: &Vector) -> Vector {
        Algebra::mul(self, a, b)
    }
    fn add(&self, a: &Vector, b: &Vector) -> Vector {
        a + b
    }
}

/// `L_{t_1} ... L_{t_k} x`
fn word<S: Space>(s: &S, ts: &[S::E], x: &S::E) -> S::E {
    ts.iter().rev().fold(x.clone(), |acc, t| s.mul(t, &acc))
}

/// `phi(L x) = phi(L) phi(x)` with `args = (t_1, ..., t_{n-1}, x)`.
fn iso_instance<D: Space, C: Space>(d: &D, c: &C, phi: &dyn Fn(&D::E) -> C::E, args: &[D::E]) -> bool {
    let (x, ts) = args.split_last().expect("nonempty tuple");
    let left = phi(&word(d, ts, x));
    let images: Vec<C::E> = ts.iter().map(phi).collect();
    left == word(c, &images, &phi(x))
}

/// `d(L x) = d(L) x + L d(x)`, `d(L)` replacing one factor at a time.
fn derivation_instance<S: Space>(s: &S, d: &dyn Fn(&S::E) -> S::E, args: &[S::E]) -> bool {
    let (x, ts) = args.split_last().expect("nonempty tuple");
    let left = d(&word(s, ts, x));
    let mut right = word(s, ts, &d(x));
    for k in 0..ts.len() {
        let mut swapped = ts.to_vec();
        swapped[k] = d(&ts[k]);
        right = s.add(&right, &word(s, &swapped, x));
    }
    left == right
}

struct PairMaps<'f, A: Space, B: Space> {
    a: &'f A,
    b: &'f B,
    m: &'f dyn Fn(&A::E) -> B::E,
    ms: &'f dyn Fn(&B::E) -> A::E,
}

impl<A: Space, B: Space> PairMaps<'_, A, B> {
    /// `M(a(M*(x) b)) = M(a)(x M(b))`
    fn elementary_left(&self, a: &A::E, b: &A::E, x: &B::E) -> bool {
        let left = (self.m)(&self.a.mul(a, &self.a.mul(&(self.ms)(x), b)));
        let right = self.b.mul(&(self.m)(a), &self.b.mul(x, &(self.m)(b)));
        left == right
    }

    /// `M*(x(M(a) y)) = M*(x)(a M*(y))`
    fn elementary_right(&self, x: &B::E, y: &B::E, a: &A::E) -> bool {
        let left = (self.ms)(&self.b.mul(x, &self.b.mul(&(self.m)(a), y)));
        let right = self.a.mul(&(self.ms)(x), &self.a.mul(a, &(self.ms)(y)));
        left == right
    }

    /// `M(a M*(x) + M*(x) a) = M(a) x + x M(a)` and
    /// `M*(M(a) x + x M(a)) = a M*(x) + M*(x) a`
    fn jordan(&self, a: &A::E, x: &B::E) -> bool {
        let msx = (self.ms)(x);
        let ax = self.a.mul(a, &msx);
        let sym_a = self.a.add(&ax, &ax);
        let ma = (self.m)(a);
        let mx = self.b.mul(&ma, x);
        let sym_b = self.b.add(&mx, &mx);
        (self.m)(&sym_a) == sym_b && (self.ms)(&sym_b) == sym_a
    }
}

/// Walks every tuple with slot `k` ranging over `0..sizes[k]`, in
/// lexicographic order, until `test` fails.
fn odometer(sizes: &[usize], mut test: impl FnMut(&[usize]) -> bool) -> (Option<Vec<usize>>, u64) {
    let mut idx = vec![0usize; sizes.len()];
    let mut tested = 0u64;
    if sizes.contains(&0) {
        return (None, 0);
    }
    loop {
        tested += 1;
        if !test(&idx) {
            return (Some(idx), tested);
        }
        let mut k = sizes.len();
        loop {
            if k == 0 {
                return (None, tested);
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < sizes[k] {
                break;
            }
            idx[k] = 0;
        }
    }
}

fn tuple_count(sizes: &[usize]) -> Result<()> {
    let total: u128 = sizes.iter().map(|&s| s as u128).product();
    if total > TUPLE_BOUND {
        return Err(Error::SizeBound {
            what: "exhaustive tuple enumeration".into(),
            size: total,
            bound: TUPLE_BOUND,
        });
    }
    Ok(())
}

/// A random element: small rationals over Q, uniform residues over F_p.
pub fn random_element(alg: &Algebra, rng: &mut ChaCha8Rng) -> Vector {
    let field = alg.field();
    let coords = (0..alg.dim())
        .map(|_| match field {
            FieldSpec::Rationals => field
                .ratio_i64(rng.gen_range(-3..=3), rng.gen_range(1..=3))
                .expect("nonzero denominator"),
            FieldSpec::Prime(p) => field.from_u64(rng.gen_range(0..p)),
        })
        .collect();
    Vector::new(field, coords).expect("coordinates in the field")
}

/// `count` tuples whose slot `k` lies in `algs[k]`: tuples of basis vectors
/// in lexicographic order first, then random elements.
pub fn sample_tuples(algs: &[&Algebra], count: usize, seed: u64) -> Vec<Vec<Vector>> {
    let mut out = Vec::with_capacity(count);
    let sizes: Vec<usize> = algs.iter().map(|a| a.dim()).collect();
    odometer(&sizes, |idx| {
        if out.len() >= count {
            return false;
        }
        out.push(idx.iter().zip(algs).map(|(&i, a)| a.basis_vector(i)).collect());
        true
    });
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    while out.len() < count {
        out.push(algs.iter().map(|a| random_element(a, &mut rng)).collect());
    }
    out
}

fn run_sampled(tuples: Vec<Vec<Vector>>, test: impl Fn(&[Vector]) -> bool) -> CheckOutcome {
    let mut tested = 0;
    for t in tuples {
        tested += 1;
        if !test(&t) {
            return CheckOutcome {
                holds: false,
                counterexample: Some(t),
                tested,
                exhaustive: false,
            };
        }
    }
    CheckOutcome {
        holds: true,
        counterexample: None,
        tested,
        exhaustive: false,
    }
}

fn run_exhaustive(
    sizes: &[usize],
    decode: impl Fn(usize, usize) -> Vector,
    test: impl Fn(&[usize]) -> bool,
) -> Result<CheckOutcome> {
    tuple_count(sizes)?;
    let (fail, tested) = odometer(sizes, test);
    Ok(CheckOutcome {
        holds: fail.is_none(),
        counterexample: fail.map(|idx| idx.iter().enumerate().map(|(k, &i)| decode(k, i)).collect()),
        tested,
        exhaustive: true,
    })
}

fn check_arity(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidParameter("arity n must be positive".into()));
    }
    Ok(())
}

/// `phi(L_{t_1}...L_{t_{n-1}} x) = L_{phi t_1}...L_{phi t_{n-1}} phi(x)` on
/// tuples `(t_1, ..., t_{n-1}, x)`.
pub fn check_n_multiplicative_iso(phi: &MapTable, n: usize, mode: Mode) -> Result<CheckOutcome> {
    check_arity(n)?;
    if !phi.is_bijective() {
        return Err(Error::NotInvertible("an isomorphism must be bijective".into()));
    }
    match mode {
        Mode::Exhaustive { bound } => {
            let dom = FiniteAlgebra::new(phi.domain(), bound)?;
            let cod = FiniteAlgebra::new(phi.codomain(), bound)?;
            let table = phi.to_table(bound)?;
            let f = |x: &usize| table[*x];
            run_exhaustive(&vec![dom.size(); n], |_, i| dom.decode(i), |args| {
                iso_instance(&dom, &cod, &f, args)
            })
        }
        Mode::Sampled { count, seed } => {
            let tuples = sample_tuples(&vec![phi.domain(); n], count, seed);
            let f = |x: &Vector| phi.apply(x);
            Ok(run_sampled(tuples, |args| {
                iso_instance(phi.domain(), phi.codomain(), &f, args)
            }))
        }
    }
}

/// `d(L x) = d(L) x + L d(x)` on tuples `(t_1, ..., t_{n-1}, x)`.
pub fn check_n_multiplicative_derivation(d: &MapTable, n: usize, mode: Mode) -> Result<CheckOutcome> {
    check_arity(n)?;
    if d.domain() != d.codomain() {
        return Err(Error::InvalidParameter("a derivation maps an algebra to itself".into()));
    }
    match mode {
        Mode::Exhaustive { bound } => {
            let sp = FiniteAlgebra::new(d.domain(), bound)?;
            let table = d.to_table(bound)?;
            let f = |x: &usize| table[*x];
            run_exhaustive(&vec![sp.size(); n], |_, i| sp.decode(i), |args| {
                derivation_instance(&sp, &f, args)
            })
        }
        Mode::Sampled { count, seed } => {
            let tuples = sample_tuples(&vec![d.domain(); n], count, seed);
            let f = |x: &Vector| d.apply(x);
            Ok(run_sampled(tuples, |args| derivation_instance(d.domain(), &f, args)))
        }
    }
}

/// Both identities of the pair's flavor. Elementary tuples are `(a, b, x)`
/// then `(x, y, a)`; Jordan tuples are `(a, x)`.
pub fn check_elementary_pair(pair: &ElementaryPair, mode: Mode) -> Result<CheckOutcome> {
    let (a_alg, b_alg) = (pair.m.domain(), pair.m.codomain());
    match mode {
        Mode::Exhaustive { bound } => {
            let a = FiniteAlgebra::new(a_alg, bound)?;
            let b = FiniteAlgebra::new(b_alg, bound)?;
            let mt = pair.m.to_table(bound)?;
            let mst = pair.m_star.to_table(bound)?;
            let m = |x: &usize| mt[*x];
            let ms = |x: &usize| mst[*x];
            let pm = PairMaps {
                a: &a,
                b: &b,
                m: &m,
                ms: &ms,
            };
            match pair.flavor {
                Flavor::Elementary => {
                    let first = run_exhaustive(
                        &[a.size(), a.size(), b.size()],
                        |k, i| if k < 2 { a.decode(i) } else { b.decode(i) },
                        |t| pm.elementary_left(&t[0], &t[1], &t[2]),
                    )?;
                    if !first.holds {
                        return Ok(first);
                    }
                    let mut second = run_exhaustive(
                        &[b.size(), b.size(), a.size()],
                        |k, i| if k < 2 { b.decode(i) } else { a.decode(i) },
                        |t| pm.elementary_right(&t[0], &t[1], &t[2]),
                    )?;
                    second.tested += first.tested;
                    Ok(second)
                }
                Flavor::Jordan => run_exhaustive(
                    &[a.size(), b.size()],
                    |k, i| if k == 0 { a.decode(i) } else { b.decode(i) },
                    |t| pm.jordan(&t[0], &t[1]),
                ),
            }
        }
        Mode::Sampled { count, seed } => {
            let m = |x: &Vector| pair.m.apply(x);
            let ms = |x: &Vector| pair.m_star.apply(x);
            let pm = PairMaps {
                a: a_alg,
                b: b_alg,
                m: &m,
                ms: &ms,
            };
            match pair.flavor {
                Flavor::Elementary => {
                    let half = count.div_ceil(2);
                    let first = run_sampled(sample_tuples(&[a_alg, a_alg, b_alg], half, seed), |t| {
                        pm.elementary_left(&t[0], &t[1], &t[2])
                    });
                    if !first.holds {
                        return Ok(first);
                    }
                    let mut second =
                        run_sampled(sample_tuples(&[b_alg, b_alg, a_alg], count - half, seed ^ 1), |t| {
                            pm.elementary_right(&t[0], &t[1], &t[2])
                        });
                    second.tested += first.tested;
                    Ok(second)
                }
                Flavor::Jordan => Ok(run_sampled(sample_tuples(&[a_alg, b_alg], count, seed), |t| {
                    pm.jordan(&t[0], &t[1])
                })),
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MapClass {
    Isomorphism,
    Derivation,
    Elementary,
    JordanElementary,
}

impl MapClass {
    pub fn parse(text: &str) -> Result<Self> {
        match text {
            "iso" => Ok(MapClass::Isomorphism),
            "der" => Ok(MapClass::Derivation),
            "elem" => Ok(MapClass::Elementary),
            "jelem" => Ok(MapClass::JordanElementary),
            other => Err(Error::InvalidParameter(format!(
                "unknown map class `{other}` (expected iso, der, elem or jelem)"
            ))),
        }
    }
}

/// The additivity defect of a map:
/// `F^{-1}(F(x_1 + ... + x_n) - F(x_1) - ... - F(x_n))`, with no inverse for
/// derivations. Elementary flavors use `F = M`.
#[derive(Clone, Debug)]
pub struct Residual<'a> {
    class: MapClass,
    forward: MapTable<'a>,
    inverse: Option<MapTable<'a>>,
}

impl<'a> Residual<'a> {
    pub fn isomorphism(phi: &MapTable<'a>) -> Result<Self> {
        Ok(Residual {
            class: MapClass::Isomorphism,
            forward: phi.clone(),
            inverse: Some(phi.inverse()?),
        })
    }

    pub fn derivation(d: &MapTable<'a>) -> Result<Self> {
        if d.domain() != d.codomain() {
            return Err(Error::InvalidParameter("a derivation maps an algebra to itself".into()));
        }
        Ok(Residual {
            class: MapClass::Derivation,
            forward: d.clone(),
            inverse: None,
        })
    }

    pub fn elementary(pair: &ElementaryPair<'a>) -> Result<Self> {
        let class = match pair.flavor {
            Flavor::Elementary => MapClass::Elementary,
            Flavor::Jordan => MapClass::JordanElementary,
        };
        Ok(Residual {
            class,
            forward: pair.m.clone(),
            inverse: Some(pair.m.inverse()?),
        })
    }

    /// Builds the residual of `map` for a class; elementary classes take `M`
    /// and pair it with `m_star`.
    pub fn for_class(class: MapClass, map: &MapTable<'a>, m_star: Option<&MapTable<'a>>) -> Result<Self> {
        match class {
            MapClass::Isomorphism => Residual::isomorphism(map),
            MapClass::Derivation => Residual::derivation(map),
            MapClass::Elementary | MapClass::JordanElementary => {
                let flavor = if class == MapClass::Elementary {
                    Flavor::Elementary
                } else {
                    Flavor::Jordan
                };
                let star = m_star
                    .cloned()
                    .ok_or_else(|| Error::InvalidParameter("elementary classes need M*".into()))?;
                Residual::elementary(&ElementaryPair::new(map.clone(), star, flavor)?)
            }
        }
    }

    pub fn class(&self) -> MapClass {
        self.class
    }

    pub fn domain(&self) -> &'a Algebra {
        self.forward.domain()
    }

    pub fn eval(&self, args: &[Vector]) -> Result<Vector> {
        let dom = self.forward.domain();
        let Some(first) = args.first() else {
            return Err(Error::InvalidParameter("residual of an empty tuple".into()));
        };
        for a in args {
            dom.check_vector(a)?;
        }
        let mut sum = first.clone();
        for a in &args[1..] {
            sum = &sum + a;
        }
        let mut v = self.forward.apply(&sum);
        for a in args {
            v = &v - &self.forward.apply(a);
        }
        Ok(match &self.inverse {
            Some(inv) => inv.apply(&v),
            None => v,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TupleKind {
    /// One component from each eigenspace: `(a_1, a_0, a_alpha[, a_beta])`.
    PeirceComponents,
    /// `(a_alpha a_0, b_alpha)`, or `(a_beta a_0, b_beta)` for a four-part law.
    MixedProduct,
    /// Pairs within the part of the given law index.
    SamePart(usize),
    /// Pairs of arbitrary elements.
    GeneralPairs,
}

#[derive(Clone, Debug)]
pub struct TupleFamily {
    pub kind: TupleKind,
    pub tuples: Vec<Vec<Vector>>,
}

const COEFFS: [i64; 4] = [0, 1, -1, 2];
const PER_PART: usize = 8;
const PER_FAMILY: usize = 64;

/// Nonzero combinations of `basis` with coefficients in {-1, 0, 1, 2}:
/// the basis vectors first, then mixed combinations.
fn small_combinations(field: FieldSpec, dim: usize, basis: &[Vector]) -> Vec<Vector> {
    let mut out: Vec<Vector> = basis.iter().take(PER_PART).cloned().collect();
    let sizes = vec![COEFFS.len(); basis.len()];
    odometer(&sizes, |idx| {
        if out.len() >= PER_PART {
            return false;
        }
        if idx.iter().filter(|&&i| i != 0).count() >= 2 || idx.iter().any(|&i| i >= 2) {
            let mut v = Vector::zeros(field, dim);
            for (k, &i) in idx.iter().enumerate() {
                v.add_scaled(&field.from_i64(COEFFS[i]), &basis[k]);
            }
            if !v.is_zero() && !out.contains(&v) {
                out.push(v);
            }
        }
        true
    });
    out
}

fn product_tuples(lists: &[Vec<Vector>]) -> Vec<Vec<Vector>> {
    let mut out = Vec::new();
    let sizes: Vec<usize> = lists.iter().map(Vec::len).collect();
    odometer(&sizes, |idx| {
        if out.len() >= PER_FAMILY {
            return false;
        }
        out.push(idx.iter().zip(lists).map(|(&i, l)| l[i].clone()).collect());
        true
    });
    out
}

/// Tuples shaped like the arguments in the lemma chain, from part-basis
/// vectors and small combinations of them.
pub fn lemma_tuples(alg: &Algebra, decomp: &AxisDecomposition, kind: TupleKind) -> Result<TupleFamily> {
    if !decomp.is_complete() {
        return Err(Error::IncompleteDecomposition);
    }
    let field = alg.field();
    let n = alg.dim();
    let combos: Vec<Vec<Vector>> = decomp
        .parts()
        .iter()
        .map(|p| small_combinations(field, n, &p.basis_vectors()))
        .collect();
    let tuples = match kind {
        TupleKind::PeirceComponents => {
            // an empty part contributes its only element, zero
            let lists: Vec<Vec<Vector>> = combos
                .iter()
                .map(|c| if c.is_empty() { vec![Vector::zeros(field, n)] } else { c.clone() })
                .collect();
            product_tuples(&lists)
        }
        TupleKind::MixedProduct => {
            let top = decomp.law().len() - 1;
            if top < 2 {
                return Err(Error::Unsupported("mixed products need an alpha part".into()));
            }
            let products: Vec<Vector> = product_tuples(&[combos[top].clone(), combos[1].clone()])
                .into_iter()
                .map(|t| alg.mul(&t[0], &t[1]))
                .collect();
            product_tuples(&[products, combos[top].clone()])
        }
        TupleKind::SamePart(i) => {
            let part = combos
                .get(i)
                .ok_or_else(|| Error::InvalidParameter(format!("law has no part {i}")))?;
            product_tuples(&[part.clone(), part.clone()])
        }
        TupleKind::GeneralPairs => {
            let basis: Vec<Vector> = (0..n).map(|k| alg.basis_vector(k)).collect();
            let all = small_combinations(field, n, &basis);
            product_tuples(&[all.clone(), all])
        }
    };
    Ok(TupleFamily { kind, tuples })
}

/// The residual is zero on every tuple of the family.
pub fn residual_vanishes_on(residual: &Residual, family: &TupleFamily) -> Result<CheckOutcome> {
    let mut tested = 0;
    for t in &family.tuples {
        tested += 1;
        if !residual.eval(t)?.is_zero() {
            return Ok(CheckOutcome {
                holds: false,
                counterexample: Some(t.clone()),
                tested,
                exhaustive: false,
            });
        }
    }
    Ok(CheckOutcome {
        holds: true,
        counterexample: None,
        tested,
        exhaustive: false,
    })
}

/// Residual vanishing on every pair of a finite algebra, in element order.
pub fn residual_vanishes_on_all_pairs(residual: &Residual, bound: u128) -> Result<CheckOutcome> {
    let alg = residual.domain();
    let fa = FiniteAlgebra::new(alg, bound)?;
    let size = fa.size();
    let mut tested = 0;
    for x in 0..size {
        for y in x..size {
            tested += 1;
            let args = [fa.decode(x), fa.decode(y)];
            if !residual.eval(&args)?.is_zero() {
                return Ok(CheckOutcome {
                    holds: false,
                    counterexample: Some(args.to_vec()),
                    tested,
                    exhaustive: true,
                });
            }
        }
    }
    Ok(CheckOutcome {
        holds: true,
        counterexample: None,
        tested,
        exhaustive: true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fusion::decompose;
    use crate::zoo;

    const Q: FieldSpec = FieldSpec::Rationals;

    fn f5() -> FieldSpec {
        FieldSpec::prime(5).unwrap()
    }

    fn swap_bc(alg: &Algebra) -> MapTable<'_> {
        let m = Matrix::from_columns(
            Q,
            3,
            &[alg.basis_vector(0), alg.basis_vector(2), alg.basis_vector(1)],
        )
        .unwrap();
        MapTable::linear(alg, alg, m).unwrap()
    }

    #[test]
    fn identity_and_swap_are_isomorphisms() {
        let z = zoo::norton_sakuma_2a(Q).unwrap();
        let id = MapTable::identity(&z.algebra);
        assert!(check_n_multiplicative_iso(&id, 2, Mode::sampled(200, 1)).unwrap().holds);
        let sw = swap_bc(&z.algebra);
        let out = check_n_multiplicative_iso(&sw, 3, Mode::sampled(200, 2)).unwrap();
        assert!(out.holds);
        assert_eq!(out.tested, 200);
    }

    #[test]
    fn zero_not_fixed_fails() {
        let z = zoo::zero_algebra(1, f5()).unwrap();
        let phi = MapTable::table(&z.algebra, &z.algebra, vec![1, 0, 2, 3, 4]).unwrap();
        let out = check_n_multiplicative_iso(&phi, 2, Mode::exhaustive()).unwrap();
        assert!(!out.holds);
        let zero = Vector::from_i64(f5(), &[0]);
        assert_eq!(out.counterexample, Some(vec![zero.clone(), zero]));
    }

    #[test]
    fn identity_is_not_a_derivation() {
        let z = zoo::norton_sakuma_2a(Q).unwrap();
        let id = MapTable::identity(&z.algebra);
        let out = check_n_multiplicative_derivation(&id, 2, Mode::sampled(10, 0)).unwrap();
        assert!(!out.holds);
        assert_eq!(out.counterexample, Some(vec![z.axes[0].clone(), z.axes[0].clone()]));
    }

    #[test]
    fn zero_map_is_a_derivation() {
        let z = zoo::norton_sakuma_2a(Q).unwrap();
        let zero = MapTable::linear(&z.algebra, &z.algebra, Matrix::zeros(Q, 3, 3)).unwrap();
        for n in 1..=3 {
            assert!(check_n_multiplicative_derivation(&zero, n, Mode::sampled(50, 3)).unwrap().holds);
        }
    }

    #[test]
    fn scaled_pair_fails() {
        let z = zoo::norton_sakuma_2a(Q).unwrap();
        let a = &z.algebra;
        let two = MapTable::linear(a, a, Matrix::identity(Q, 3).scale(&Q.from_i64(2))).unwrap();
        let half = MapTable::linear(a, a, Matrix::identity(Q, 3).scale(&Q.ratio_i64(1, 2).unwrap())).unwrap();
        let pair = ElementaryPair::new(two, half, Flavor::Elementary).unwrap();
        let out = check_elementary_pair(&pair, Mode::sampled(20, 0)).unwrap();
        assert!(!out.holds);
        let e = z.axes[0].clone();
        assert_eq!(out.counterexample, Some(vec![e.clone(), e.clone(), e]));

        let id = MapTable::identity(a);
        for flavor in [Flavor::Elementary, Flavor::Jordan] {
            let pair = ElementaryPair::new(id.clone(), id.clone(), flavor).unwrap();
            assert!(check_elementary_pair(&pair, Mode::sampled(100, 5)).unwrap().holds);
        }
    }

    #[test]
    fn jordan_refuses_char_two() {
        let f2 = FieldSpec::prime(2).unwrap();
        let z = zoo::zero_algebra(1, f2).unwrap();
        let id = MapTable::identity(&z.algebra);
        assert!(ElementaryPair::new(id.clone(), id, Flavor::Jordan).is_err());
    }

    #[test]
    fn transposition_residual() {
        let z = zoo::zero_algebra(1, f5()).unwrap();
        let a = &z.algebra;
        let phi = MapTable::table(a, a, vec![0, 1, 2, 4, 3]).unwrap();
        let res = Residual::isomorphism(&phi).unwrap();
        let v = |k| Vector::from_i64(f5(), &[k]);
        assert_eq!(res.eval(&[v(1), v(2)]).unwrap(), v(1));
        assert!(!phi.is_additive().unwrap());
    }

    #[test]
    fn exhaustive_size_bound() {
        let z = zoo::zero_algebra(6, f5()).unwrap();
        let id = MapTable::identity(&z.algebra);
        assert!(matches!(
            check_n_multiplicative_iso(&id, 2, Mode::exhaustive()),
            Err(Error::SizeBound { .. })
        ));
    }

    #[test]
    fn tuple_families_on_2a() {
        let z = zoo::norton_sakuma_2a(Q).unwrap();
        let d = decompose(&z.algebra, &z.axes[0], &z.law).unwrap();
        let parse = |s: &str| z.algebra.parse_element(s).unwrap();
        let peirce = lemma_tuples(&z.algebra, &d, TupleKind::PeirceComponents).unwrap();
        let target = vec![parse("eA"), parse("-eA + 4 eB + 4 eC"), parse("eB - eC")];
        assert!(peirce.tuples.contains(&target));

        let mixed = lemma_tuples(&z.algebra, &d, TupleKind::MixedProduct).unwrap();
        let v_q = d.part(2).basis_vectors()[0].clone();
        let v_0 = d.part(1).basis_vectors()[0].clone();
        assert!(mixed.tuples.contains(&vec![z.algebra.mul(&v_q, &v_0), v_q]));

        let sw = swap_bc(&z.algebra);
        let res = Residual::isomorphism(&sw).unwrap();
        let general = lemma_tuples(&z.algebra, &d, TupleKind::GeneralPairs).unwrap();
        assert!(residual_vanishes_on(&res, &general).unwrap().holds);

        let two = zoo::two_point_matsuo(Q.ratio_i64(1, 4).unwrap()).unwrap();
        let d2 = decompose(&two.algebra, &two.axes[0], &two.law).unwrap();
        assert!(lemma_tuples(&two.algebra, &d2, TupleKind::SamePart(2)).unwrap().tuples.is_empty());
    }
}
