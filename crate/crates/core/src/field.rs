//! Exact scalars over the rationals or a prime field.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Largest modulus accepted for a prime field. Residues are multiplied in `u64`.
pub const MAX_MODULUS: u64 = u32::MAX as u64;

/// The ground field of an algebra.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FieldSpec {
    Rationals,
    Prime(u64),
}

impl FieldSpec {
    /// Builds the prime field of order `p`, rejecting composite moduli.
    pub fn prime(p: u64) -> Result<Self> {
        if !is_prime(p) || p > MAX_MODULUS {
            return Err(Error::NotPrime(p));
        }
        Ok(FieldSpec::Prime(p))
    }

    /// 0 for the rationals, `p` for a prime field.
    pub fn characteristic(self) -> u64 {
        match self {
            FieldSpec::Rationals => 0,
            FieldSpec::Prime(p) => p,
        }
    }

    /// Number of elements, if finite.
    pub fn order(self) -> Option<u64> {
        match self {
            FieldSpec::Rationals => None,
            FieldSpec::Prime(p) => Some(p),
        }
    }

    pub fn zero(self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(self, n: i64) -> Scalar {
        match self {
            FieldSpec::Rationals => Scalar(Repr::Q(BigRational::from_integer(n.into()))),
            FieldSpec::Prime(p) => {
                let v = n.rem_euclid(p as i64) as u64;
                Scalar(Repr::Fp { value: v, modulus: p })
            }
        }
    }

    /// Residue `value mod p`; for the rationals this is just the integer.
    pub fn from_u64(self, n: u64) -> Scalar {
        match self {
            FieldSpec::Rationals => Scalar(Repr::Q(BigRational::from_integer(n.into()))),
            FieldSpec::Prime(p) => Scalar(Repr::Fp { value: n % p, modulus: p }),
        }
    }

    /// `num / den` in this field. Fails when `den` vanishes in the field.
    pub fn ratio(self, num: &BigInt, den: &BigInt) -> Result<Scalar> {
        match self {
            FieldSpec::Rationals => {
                if den.is_zero() {
                    return Err(Error::NotInField {
                        value: format!("{num}/{den}"),
                        field: self,
                    });
                }
                Ok(Scalar(Repr::Q(BigRational::new(num.clone(), den.clone()))))
            }
            FieldSpec::Prime(p) => {
                let pb = BigInt::from(p);
                let n = num.mod_floor(&pb).to_u64().unwrap_or(0);
                let d = den.mod_floor(&pb).to_u64().unwrap_or(0);
                if d == 0 {
                    return Err(Error::NotInField {
                        value: format!("{num}/{den}"),
                        field: self,
                    });
                }
                let d_inv = pow_mod(d, p - 2, p);
                Ok(Scalar(Repr::Fp {
                    value: mul_mod(n, d_inv, p),
                    modulus: p,
                }))
            }
        }
    }

    pub fn ratio_i64(self, num: i64, den: i64) -> Result<Scalar> {
        self.ratio(&BigInt::from(num), &BigInt::from(den))
    }

    /// Parses an optionally signed integer or `p/q` literal.
    pub fn parse_scalar(self, text: &str) -> Result<Scalar> {
        let bad = || Error::InvalidScalar(text.to_string());
        let t = text.trim();
        let (num, den) = match t.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (t, "1"),
        };
        if num.is_empty() || den.is_empty() || den.starts_with(['+', '-']) {
            return Err(bad());
        }
        let num: BigInt = num.parse().map_err(|_| bad())?;
        let den: BigInt = den.parse().map_err(|_| bad())?;
        self.ratio(&num, &den)
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rationals => write!(f, "Q"),
            FieldSpec::Prime(p) => write!(f, "F{p}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Repr {
    Q(BigRational),
    Fp { value: u64, modulus: u64 },
}

/// An exact field element. Rationals are kept reduced with a positive
/// denominator; residues are canonical representatives in `[0, p)`.
///
/// Arithmetic between scalars of different fields is a logic error and panics.
/// Public entry points that accept user data check fields before computing.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Scalar(Repr);

impl Scalar {
    pub fn field(&self) -> FieldSpec {
        match &self.0 {
            Repr::Q(_) => FieldSpec::Rationals,
            Repr::Fp { modulus, .. } => FieldSpec::Prime(*modulus),
        }
    }

    pub fn is_zero(&self) -> bool {
        match &self.0 {
            Repr::Q(q) => q.is_zero(),
            Repr::Fp { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match &self.0 {
            Repr::Q(q) => q.is_one(),
            Repr::Fp { value, .. } => *value == 1,
        }
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        Some(match &self.0 {
            Repr::Q(q) => Scalar(Repr::Q(q.recip())),
            Repr::Fp { value, modulus } => Scalar(Repr::Fp {
                value: pow_mod(*value, modulus - 2, *modulus),
                modulus: *modulus,
            }),
        })
    }

    pub fn checked_div(&self, rhs: &Scalar) -> Option<Scalar> {
        rhs.inv().map(|r| self * &r)
    }

    /// Canonical residue for prime-field elements.
    pub fn residue(&self) -> Option<u64> {
        match &self.0 {
            Repr::Fp { value, .. } => Some(*value),
            Repr::Q(_) => None,
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match &self.0 {
            Repr::Q(q) => Some(q),
            Repr::Fp { .. } => None,
        }
    }

    /// Whether the value is an integer (always true for residues).
    pub fn is_integer(&self) -> bool {
        match &self.0 {
            Repr::Q(q) => q.is_integer(),
            Repr::Fp { .. } => true,
        }
    }

    pub fn is_negative(&self) -> bool {
        match &self.0 {
            Repr::Q(q) => q.is_negative(),
            Repr::Fp { .. } => false,
        }
    }

    /// Total order used only for deterministic output (numeric order on
    /// rationals, residue order on prime fields).
    pub fn cmp_canonical(&self, other: &Scalar) -> std::cmp::Ordering {
        match (&self.0, &other.0) {
            (Repr::Q(a), Repr::Q(b)) => a.cmp(b),
            (Repr::Fp { value: a, .. }, Repr::Fp { value: b, .. }) => a.cmp(b),
            (Repr::Q(_), Repr::Fp { .. }) => std::cmp::Ordering::Less,
            (Repr::Fp { .. }, Repr::Q(_)) => std::cmp::Ordering::Greater,
        }
    }

    fn expect_same(&self, rhs: &Scalar) -> u64 {
        match (&self.0, &rhs.0) {
            (Repr::Fp { modulus: a, .. }, Repr::Fp { modulus: b, .. }) if a == b => *a,
            (Repr::Q(_), Repr::Q(_)) => 0,
            _ => panic!(
                "scalar field mismatch: {} vs {}",
                self.field(),
                rhs.field()
            ),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Q(q) => {
                if q.is_integer() {
                    write!(f, "{}", q.numer())
                } else {
                    write!(f, "{}/{}", q.numer(), q.denom())
                }
            }
            Repr::Fp { value, .. } => write!(f, "{value}"),
        }
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        let p = self.expect_same(rhs);
        match (&self.0, &rhs.0) {
            (Repr::Q(a), Repr::Q(b)) => Scalar(Repr::Q(a + b)),
            (Repr::Fp { value: a, .. }, Repr::Fp { value: b, .. }) => Scalar(Repr::Fp {
                value: (a + b) % p,
                modulus: p,
            }),
            _ => unreachable!(),
        }
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        let p = self.expect_same(rhs);
        match (&self.0, &rhs.0) {
            (Repr::Q(a), Repr::Q(b)) => Scalar(Repr::Q(a - b)),
            (Repr::Fp { value: a, .. }, Repr::Fp { value: b, .. }) => Scalar(Repr::Fp {
                value: (a + p - b) % p,
                modulus: p,
            }),
            _ => unreachable!(),
        }
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        let p = self.expect_same(rhs);
        match (&self.0, &rhs.0) {
            (Repr::Q(a), Repr::Q(b)) => Scalar(Repr::Q(a * b)),
            (Repr::Fp { value: a, .. }, Repr::Fp { value: b, .. }) => Scalar(Repr::Fp {
                value: mul_mod(*a, *b, p),
                modulus: p,
            }),
            _ => unreachable!(),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match &self.0 {
            Repr::Q(a) => Scalar(Repr::Q(-a)),
            Repr::Fp { value, modulus } => Scalar(Repr::Fp {
                value: (modulus - value) % modulus,
                modulus: *modulus,
            }),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &Scalar) -> Scalar {
                (&self).$m(rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

pub(crate) fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}
