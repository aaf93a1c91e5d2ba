//! Finite windows into the Highwater algebra at an axis `a(c)`.
//!
//! The eigenspaces of `L_{a(c)}` are spanned by, for `j >= 1`,
//!
//! * `1`:   `a(c)`
//! * `0`:   `6a(c) - 3(a(c-j) + a(c+j)) + 4s(j)`
//! * `2`:   `2a(c) - (a(c-j) + a(c+j)) - 4s(j)`
//! * `1/2`: `a(c-j) - a(c+j)`
//!
//! A window of size `N` keeps the generators with `j <= N`. Projection onto
//! the four eigenspaces is exact for any finitely supported vector.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::fusion::FusionLaw;
use crate::lazy::{Highwater, HwKey, LazyAlgebra, SparseVector};
use crate::linalg::{Matrix, Subspace, Vector};

/// Eigenspace slots in the order `1, 0, 2, 1/2`.
pub const SLOT_ONE: usize = 0;
pub const SLOT_ZERO: usize = 1;
pub const SLOT_TWO: usize = 2;
pub const SLOT_HALF: usize = 3;

#[derive(Clone, Debug)]
pub struct HighwaterWindow {
    alg: Highwater,
    axis: i64,
    window: u64,
    slot_values: [Scalar; 4],
    quarter: Scalar,
}

impl HighwaterWindow {
    pub fn new(field: FieldSpec, axis: i64, window: u64) -> Result<Self> {
        let alg = Highwater::new(field)?;
        if window == 0 {
            return Err(Error::InvalidParameter("window must be at least 1".into()));
        }
        Ok(HighwaterWindow {
            alg,
            axis,
            window,
            slot_values: [
                field.one(),
                field.zero(),
                field.from_i64(2),
                field.ratio_i64(1, 2)?,
            ],
            quarter: field.ratio_i64(1, 4)?,
        })
    }

    pub fn algebra(&self) -> &Highwater {
        &self.alg
    }

    pub fn field(&self) -> FieldSpec {
        self.alg.field()
    }

    pub fn axis(&self) -> i64 {
        self.axis
    }

    pub fn axis_vector(&self) -> SparseVector<HwKey> {
        self.alg.a(self.axis)
    }

    pub fn window(&self) -> u64 {
        self.window
    }

    /// Eigenvalue of a slot.
    pub fn slot_value(&self, slot: usize) -> &Scalar {
        &self.slot_values[slot]
    }

    /// For each eigenvalue of `law`, its slot. The law must have exactly the
    /// eigenvalues `1, 0, 2, 1/2` in some order.
    pub fn law_order(&self, law: &FusionLaw) -> Result<Vec<usize>> {
        if law.field() != self.field() {
            return Err(Error::FieldMismatch {
                expected: self.field(),
                found: law.field(),
            });
        }
        let order: Option<Vec<usize>> = law
            .eigenvalues()
            .iter()
            .map(|l| self.slot_values.iter().position(|s| s == l))
            .collect();
        match order {
            Some(o) if o.len() == 4 => Ok(o),
            _ => Err(Error::InvalidParameter(format!(
                "law `{law}` does not have the eigenvalues 1, 0, 2, 1/2 of a Highwater axis"
            ))),
        }
    }

    /// The slot's generator for a single `j >= 1`.
    pub fn generator(&self, slot: usize, j: u64) -> SparseVector<HwKey> {
        let f = self.field();
        let c = self.axis;
        let lo = HwKey::A(c - j as i64);
        let hi = HwKey::A(c + j as i64);
        let mut v = SparseVector::zero(f);
        match slot {
            SLOT_ONE => v.add_term(HwKey::A(c), &f.one()),
            SLOT_ZERO => {
                v.add_term(HwKey::A(c), &f.from_i64(6));
                v.add_term(lo, &f.from_i64(-3));
                v.add_term(hi, &f.from_i64(-3));
                v.add_term(HwKey::S(j), &f.from_i64(4));
            }
            SLOT_TWO => {
                v.add_term(HwKey::A(c), &f.from_i64(2));
                v.add_term(lo, &f.from_i64(-1));
                v.add_term(hi, &f.from_i64(-1));
                v.add_term(HwKey::S(j), &f.from_i64(-4));
            }
            SLOT_HALF => {
                v.add_term(lo, &f.one());
                v.add_term(hi, &f.from_i64(-1));
            }
            _ => panic!("slot {slot} out of range"),
        }
        v
    }

    /// Window generators of a slot: `[a(c)]` for slot 1, else `j = 1..=N`.
    pub fn generators(&self, slot: usize) -> Vec<SparseVector<HwKey>> {
        if slot == SLOT_ONE {
            vec![self.axis_vector()]
        } else {
            (1..=self.window).map(|j| self.generator(slot, j)).collect()
        }
    }

    /// Exact eigen-components of `w` by slot; they sum to `w`.
    ///
    /// For each `j`, with `x+ = w[a(c+j)]`, `x- = w[a(c-j)]`, `s = w[s(j)]`
    /// and `m = (x+ + x-)/2`, the coefficients of the `0`, `2` and `1/2`
    /// generators are `u = (s/4 - m)/4`, `v = u - s/4`, `(x- - x+)/2`.
    pub fn components(&self, w: &SparseVector<HwKey>) -> [SparseVector<HwKey>; 4] {
        let f = self.field();
        let c = self.axis;
        let mut js = BTreeSet::new();
        for key in w.support() {
            match *key {
                HwKey::A(i) if i != c => {
                    js.insert(i.abs_diff(c));
                }
                HwKey::S(j) => {
                    js.insert(j);
                }
                _ => {}
            }
        }
        let half = &self.slot_values[SLOT_HALF];
        let mut out: [SparseVector<HwKey>; 4] = std::array::from_fn(|_| SparseVector::zero(f));
        let mut axis_coeff = w.coeff(&HwKey::A(c));
        for j in js {
            let xp = w.coeff(&HwKey::A(c + j as i64));
            let xm = w.coeff(&HwKey::A(c - j as i64));
            let s = w.coeff(&HwKey::S(j));
            let m = &(&xp + &xm) * half;
            let s4 = &s * &self.quarter;
            let u = &(&s4 - &m) * &self.quarter;
            let v = &u - &s4;
            let h = &(&xm - &xp) * half;
            axis_coeff = &axis_coeff - &(&(&f.from_i64(6) * &u) + &(&f.from_i64(2) * &v));
            out[SLOT_ZERO].add_scaled(&u, &self.generator(SLOT_ZERO, j));
            out[SLOT_TWO].add_scaled(&v, &self.generator(SLOT_TWO, j));
            out[SLOT_HALF].add_scaled(&h, &self.generator(SLOT_HALF, j));
        }
        out[SLOT_ONE].add_term(HwKey::A(c), &axis_coeff);
        out
    }
}

/// Coordinates of sparse vectors over the union of their supports, as the
/// columns of a dense matrix.
pub fn densify<K: Ord + Clone>(field: FieldSpec, vectors: &[SparseVector<K>]) -> Matrix {
    let keys: BTreeSet<&K> = vectors.iter().flat_map(|v| v.support()).collect();
    let cols: Vec<Vector> = vectors
        .iter()
        .map(|v| {
            let coords = keys.iter().map(|k| v.coeff(k)).collect();
            Vector::new(field, coords).expect("coefficients share the field")
        })
        .collect();
    Matrix::from_columns(field, keys.len(), &cols).expect("columns share a length")
}

/// Linear relations among `vectors`: the kernel of their column matrix.
pub fn relations<K: Ord + Clone>(field: FieldSpec, vectors: &[SparseVector<K>]) -> Subspace {
    if vectors.is_empty() {
        return Subspace::zero(field, 0);
    }
    densify(field, vectors).kernel()
}

/// `sum_k c_k g_k`
pub fn combine<K: Ord + Clone>(field: FieldSpec, coeffs: &Vector, gens: &[SparseVector<K>]) -> SparseVector<K> {
    let mut out = SparseVector::zero(field);
    for (c, g) in coeffs.coords().iter().zip(gens) {
        out.add_scaled(c, g);
    }
    out
}

/// Tracks coefficient vectors `c` with `W(sum c_k g_k) = 0` for every map `W`
/// fed so far, modulo the relations among the `g_k` themselves.
pub struct KernelTracker {
    field: FieldSpec,
    kernel: Subspace,
    trivial: Subspace,
}

impl KernelTracker {
    pub fn new<K: Ord + Clone>(field: FieldSpec, gens: &[SparseVector<K>]) -> Self {
        let d = gens.len();
        let trivial = if d == 0 {
            Subspace::zero(field, 0)
        } else {
            relations(field, gens)
        };
        KernelTracker {
            field,
            kernel: Subspace::full(field, d),
            trivial,
        }
    }

    /// Restricts to coefficient vectors killed by a map with these generator images.
    pub fn feed<K: Ord + Clone>(&mut self, images: &[SparseVector<K>]) {
        if images.iter().all(SparseVector::is_zero) {
            return;
        }
        let k = densify(self.field, images).kernel();
        self.kernel = self.kernel.intersect(&k).expect("same coefficient space");
    }

    /// No nonzero element of the generated span survives.
    pub fn is_trivial(&self) -> bool {
        self.kernel.dim() == self.trivial.dim()
    }

    /// A surviving coefficient vector, if any.
    pub fn witness(&self) -> Option<Vector> {
        self.kernel
            .basis_vectors()
            .into_iter()
            .find(|v| !self.trivial.contains(v).expect("same coefficient space"))
    }
}

/// A nonzero element of `span(part)` killed by every multiplier, if one exists.
pub fn lazy_annihilated<A: LazyAlgebra>(
    alg: &A,
    part: &[SparseVector<A::Key>],
    multipliers: &[SparseVector<A::Key>],
) -> Option<SparseVector<A::Key>> {
    let field = alg.field();
    let mut tracker = KernelTracker::new(field, part);
    for t in multipliers {
        if tracker.is_trivial() {
            break;
        }
        let images: Vec<_> = part.iter().map(|g| alg.mul(t, g)).collect();
        tracker.feed(&images);
    }
    tracker.witness().map(|c| combine(field, &c, part))
}
