//! Algebras over a countable basis, evaluated lazily on finitely supported
//! vectors.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::algebra::format_combination;
use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};

/// A finitely supported linear combination of basis keys. Zero coefficients
/// are never stored, so structural equality is vector equality.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseVector<K: Ord> {
    field: FieldSpec,
    terms: BTreeMap<K, Scalar>,
}

impl<K: Ord + Clone> SparseVector<K> {
    pub fn zero(field: FieldSpec) -> Self {
        SparseVector {
            field,
            terms: BTreeMap::new(),
        }
    }

    pub fn basis(field: FieldSpec, key: K) -> Self {
        let mut v = SparseVector::zero(field);
        v.add_term(key, &field.one());
        v
    }

    /// Builds a vector from integer-ratio terms `(key, num, den)`.
    pub fn from_ratios(field: FieldSpec, terms: &[(K, i64, i64)]) -> Result<Self> {
        let mut v = SparseVector::zero(field);
        for (k, n, d) in terms {
            v.add_term(k.clone(), &field.ratio_i64(*n, *d)?);
        }
        Ok(v)
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, key: &K) -> Scalar {
        self.terms.get(key).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn terms(&self) -> impl Iterator<Item = (&K, &Scalar)> {
        self.terms.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &K> {
        self.terms.keys()
    }

    /// `self += c * key`, pruning a coefficient that cancels to zero.
    pub fn add_term(&mut self, key: K, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&key) {
            Some(existing) => {
                let v = &*existing + c;
                if v.is_zero() {
                    self.terms.remove(&key);
                } else {
                    *existing = v;
                }
            }
            None => {
                self.terms.insert(key, c.clone());
            }
        }
    }

    /// `self += c * other`
    pub fn add_scaled(&mut self, c: &Scalar, other: &SparseVector<K>) {
        if c.is_zero() {
            return;
        }
        for (k, v) in &other.terms {
            self.add_term(k.clone(), &(c * v));
        }
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        let mut out = SparseVector::zero(self.field);
        out.add_scaled(c, self);
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_scaled(&self.field.one(), other);
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_scaled(&-self.field.one(), other);
        out
    }
}

impl<K: Ord + Clone + fmt::Display> fmt::Display for SparseVector<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_combination(self.terms.iter().map(|(k, c)| (c, k))))
    }
}

/// A commutative algebra on a countable basis given by a product rule.
pub trait LazyAlgebra {
    type Key: Ord + Clone + fmt::Debug + fmt::Display;

    fn field(&self) -> FieldSpec;

    /// Product of two basis elements; must be symmetric in its arguments.
    fn basis_product(&self, a: &Self::Key, b: &Self::Key) -> SparseVector<Self::Key>;

    /// Bilinear extension of [`LazyAlgebra::basis_product`].
    fn product(
        &self,
        x: &SparseVector<Self::Key>,
        y: &SparseVector<Self::Key>,
    ) -> Result<SparseVector<Self::Key>> {
        for v in [x, y] {
            if v.field() != self.field() {
                return Err(Error::FieldMismatch {
                    expected: self.field(),
                    found: v.field(),
                });
            }
        }
        Ok(self.mul(x, y))
    }

    /// Product without the field check.
    fn mul(
        &self,
        x: &SparseVector<Self::Key>,
        y: &SparseVector<Self::Key>,
    ) -> SparseVector<Self::Key> {
        let mut out = SparseVector::zero(self.field());
        for (a, ca) in x.terms() {
            for (b, cb) in y.terms() {
                out.add_scaled(&(ca * cb), &self.basis_product(a, b));
            }
        }
        out
    }

    fn is_idempotent(&self, e: &SparseVector<Self::Key>) -> Result<bool> {
        Ok(&self.product(e, e)? == e)
    }
}

/// Basis keys of the Highwater algebra: `a(i)` for integer `i` and `s(j)`
/// for positive `j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum HwKey {
    A(i64),
    S(u64),
}

impl HwKey {
    /// Largest index magnitude, used to bound supports.
    pub fn magnitude(&self) -> u64 {
        match self {
            HwKey::A(i) => i.unsigned_abs(),
            HwKey::S(j) => *j,
        }
    }
}

impl fmt::Display for HwKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HwKey::A(i) => write!(f, "a({i})"),
            HwKey::S(j) => write!(f, "s({j})"),
        }
    }
}

impl FromStr for HwKey {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidParameter(format!("bad Highwater key `{s}`"));
        let s = s.trim();
        let inner = |prefix: &str| {
            s.strip_prefix(prefix)
                .and_then(|r| r.strip_prefix('('))
                .and_then(|r| r.strip_suffix(')'))
        };
        if let Some(i) = inner("a") {
            return Ok(HwKey::A(i.trim().parse().map_err(|_| bad())?));
        }
        if let Some(j) = inner("s") {
            let j: u64 = j.trim().parse().map_err(|_| bad())?;
            if j == 0 {
                return Err(bad());
            }
            return Ok(HwKey::S(j));
        }
        Err(bad())
    }
}

/// The Highwater algebra over a field of characteristic other than 2 and 3:
///
/// * `a_i a_j = 1/2 (a_i + a_j) + s_|i-j|`
/// * `a_i s_j = -3/4 a_i + 3/8 (a_{i-j} + a_{i+j}) + 3/2 s_j`
/// * `s_i s_j = 3/4 (s_i + s_j) - 3/8 (s_|i-j| + s_{i+j})`
///
/// with `s_0 = 0`.
#[derive(Clone, Debug)]
pub struct Highwater {
    field: FieldSpec,
    half: Scalar,
    three_quarters: Scalar,
    three_eighths: Scalar,
    three_halves: Scalar,
}

impl Highwater {
    pub fn new(field: FieldSpec) -> Result<Self> {
        let c = field.characteristic();
        if c == 2 || c == 3 {
            return Err(Error::Characteristic {
                name: "highwater".into(),
                characteristic: c,
                excluded: vec![2, 3],
            });
        }
        Ok(Highwater {
            field,
            half: field.ratio_i64(1, 2)?,
            three_quarters: field.ratio_i64(3, 4)?,
            three_eighths: field.ratio_i64(3, 8)?,
            three_halves: field.ratio_i64(3, 2)?,
        })
    }

    pub fn a(&self, i: i64) -> SparseVector<HwKey> {
        SparseVector::basis(self.field, HwKey::A(i))
    }

    /// `s(j)`, with `s(0) = 0`.
    pub fn s(&self, j: u64) -> SparseVector<HwKey> {
        if j == 0 {
            SparseVector::zero(self.field)
        } else {
            SparseVector::basis(self.field, HwKey::S(j))
        }
    }

    fn push_s(&self, out: &mut SparseVector<HwKey>, j: u64, c: &Scalar) {
        if j != 0 {
            out.add_term(HwKey::S(j), c);
        }
    }

    fn a_times_s(&self, i: i64, j: u64) -> SparseVector<HwKey> {
        let mut out = SparseVector::zero(self.field);
        let j_signed = j as i64;
        out.add_term(HwKey::A(i), &-&self.three_quarters);
        out.add_term(HwKey::A(i - j_signed), &self.three_eighths);
        out.add_term(HwKey::A(i + j_signed), &self.three_eighths);
        self.push_s(&mut out, j, &self.three_halves);
        out
    }
}

impl LazyAlgebra for Highwater {
    type Key = HwKey;

    fn field(&self) -> FieldSpec {
        self.field
    }

    fn basis_product(&self, x: &HwKey, y: &HwKey) -> SparseVector<HwKey> {
        match (*x, *y) {
            (HwKey::A(i), HwKey::A(j)) => {
                let mut out = SparseVector::zero(self.field);
                out.add_term(HwKey::A(i), &self.half);
                out.add_term(HwKey::A(j), &self.half);
                self.push_s(&mut out, i.abs_diff(j), &self.field.one());
                out
            }
            (HwKey::A(i), HwKey::S(j)) | (HwKey::S(j), HwKey::A(i)) => self.a_times_s(i, j),
            (HwKey::S(i), HwKey::S(j)) => {
                let mut out = SparseVector::zero(self.field);
                self.push_s(&mut out, i, &self.three_quarters);
                self.push_s(&mut out, j, &self.three_quarters);
                let m = -&self.three_eighths;
                self.push_s(&mut out, i.abs_diff(j), &m);
                self.push_s(&mut out, i + j, &m);
                out
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: FieldSpec = FieldSpec::Rationals;

    #[test]
    fn key_round_trip() {
        for k in [HwKey::A(-3), HwKey::A(0), HwKey::S(7)] {
            assert_eq!(k.to_string().parse::<HwKey>().unwrap(), k);
        }
        assert!("s(0)".parse::<HwKey>().is_err());
        assert!("b(1)".parse::<HwKey>().is_err());
    }

    #[test]
    fn zero_pruning() {
        let mut v = SparseVector::basis(Q, HwKey::A(1));
        v.add_term(HwKey::A(1), &Q.from_i64(-1));
        assert!(v.is_zero());
        assert_eq!(v, SparseVector::zero(Q));
    }

    #[test]
    fn highwater_rejects_small_characteristic() {
        assert!(Highwater::new(FieldSpec::prime(3).unwrap()).is_err());
        assert!(Highwater::new(FieldSpec::prime(2).unwrap()).is_err());
        assert!(Highwater::new(FieldSpec::prime(5).unwrap()).is_ok());
    }

    #[test]
    fn a_idempotent_and_mixed_product() {
        let h = Highwater::new(Q).unwrap();
        assert!(h.is_idempotent(&h.a(5)).unwrap());
        let p = h.product(&h.a(0), &h.s(1)).unwrap();
        let expected = SparseVector::from_ratios(
            Q,
            &[
                (HwKey::A(0), -3, 4),
                (HwKey::A(-1), 3, 8),
                (HwKey::A(1), 3, 8),
                (HwKey::S(1), 3, 2),
            ],
        )
        .unwrap();
        assert_eq!(p, expected);
    }
}
