//! Algebras over `F_p` as finite sets of elements.
//!
//! Element `x` has index `sum_k x_k p^(n-1-k)`: coordinates read as base-`p`
//! digits with the first basis vector most significant.

use crate::algebra::Algebra;
use crate::error::{Error, Result};
use crate::field::{mul_mod, FieldSpec};
use crate::linalg::Vector;

/// Elements beyond which the product table is not cached.
const CACHE_LIMIT: usize = 2500;

pub fn modulus(field: FieldSpec) -> Result<u64> {
    match field {
        FieldSpec::Prime(p) => Ok(p),
        FieldSpec::Rationals => Err(Error::Unsupported(
            "element enumeration needs a prime field".into(),
        )),
    }
}

/// `p^n`, or an error past `bound`.
pub fn element_count(field: FieldSpec, n: usize, bound: u128) -> Result<usize> {
    let p = modulus(field)? as u128;
    let mut size: u128 = 1;
    for _ in 0..n {
        size = size.saturating_mul(p);
    }
    if size > bound {
        return Err(Error::SizeBound {
            what: format!("{n}-dimensional algebra over {field}"),
            size,
            bound,
        });
    }
    Ok(size as usize)
}

pub fn encode(x: &Vector) -> Result<usize> {
    let p = modulus(x.field())? as usize;
    Ok(x.coords()
        .iter()
        .fold(0, |acc, c| acc * p + c.residue().expect("prime field") as usize))
}

pub fn decode(field: FieldSpec, n: usize, mut index: usize) -> Result<Vector> {
    let p = modulus(field)? as usize;
    let mut digits = vec![0i64; n];
    for d in digits.iter_mut().rev() {
        *d = (index % p) as i64;
        index /= p;
    }
    Ok(Vector::from_i64(field, &digits))
}

/// An algebra over `F_p` with elements addressed by index.
#[derive(Clone, Debug)]
pub struct FiniteAlgebra<'a> {
    alg: &'a Algebra,
    p: u64,
    n: usize,
    size: usize,
    // consts[(i*n + j)*n + k]: coefficient of b_k in b_i b_j
    consts: Vec<u64>,
    table: Option<Vec<u32>>,
}

impl<'a> FiniteAlgebra<'a> {
    pub fn new(alg: &'a Algebra, bound: u128) -> Result<Self> {
        let p = modulus(alg.field())?;
        let n = alg.dim();
        let size = element_count(alg.field(), n, bound)?;
        let mut consts = Vec::with_capacity(n * n * n);
        for i in 0..n {
            for j in 0..n {
                for c in alg.structure(i, j).coords() {
                    consts.push(c.residue().expect("prime field"));
                }
            }
        }
        let mut fa = FiniteAlgebra {
            alg,
            p,
            n,
            size,
            consts,
            table: None,
        };
        if size <= CACHE_LIMIT {
            let mut t = Vec::with_capacity(size * size);
            for x in 0..size {
                for y in 0..size {
                    t.push(fa.mul_uncached(x, y) as u32);
                }
            }
            fa.table = Some(t);
        }
        Ok(fa)
    }

    pub fn algebra(&self) -> &'a Algebra {
        self.alg
    }

    pub fn field(&self) -> FieldSpec {
        self.alg.field()
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn digits(&self, mut x: usize) -> Vec<u64> {
        let p = self.p as usize;
        let mut d = vec![0u64; self.n];
        for slot in d.iter_mut().rev() {
            *slot = (x % p) as u64;
            x /= p;
        }
        d
    }

    pub fn from_digits(&self, digits: &[u64]) -> usize {
        let p = self.p as usize;
        digits.iter().fold(0, |acc, &d| acc * p + d as usize)
    }

    pub fn encode(&self, x: &Vector) -> usize {
        encode(x).expect("prime field")
    }

    pub fn decode(&self, x: usize) -> Vector {
        decode(self.field(), self.n, x).expect("prime field")
    }

    pub fn add(&self, x: usize, y: usize) -> usize {
        let (a, b) = (self.digits(x), self.digits(y));
        let s: Vec<u64> = a.iter().zip(&b).map(|(u, v)| (u + v) % self.p).collect();
        self.from_digits(&s)
    }

    pub fn sub(&self, x: usize, y: usize) -> usize {
        let (a, b) = (self.digits(x), self.digits(y));
        let s: Vec<u64> = a.iter().zip(&b).map(|(u, v)| (u + self.p - v) % self.p).collect();
        self.from_digits(&s)
    }

    pub fn neg(&self, x: usize) -> usize {
        self.sub(0, x)
    }

    /// `k x` for a residue `k`.
    pub fn scale(&self, k: u64, x: usize) -> usize {
        let s: Vec<u64> = self.digits(x).iter().map(|&d| mul_mod(k % self.p, d, self.p)).collect();
        self.from_digits(&s)
    }

    pub fn mul(&self, x: usize, y: usize) -> usize {
        match &self.table {
            Some(t) => t[x * self.size + y] as usize,
            None => self.mul_uncached(x, y),
        }
    }

    fn mul_uncached(&self, x: usize, y: usize) -> usize {
        let (a, b) = (self.digits(x), self.digits(y));
        let n = self.n;
        let p = self.p;
        let mut out = vec![0u64; n];
        for (i, &ai) in a.iter().enumerate().filter(|(_, &d)| d != 0) {
            for (j, &bj) in b.iter().enumerate().filter(|(_, &d)| d != 0) {
                let c = mul_mod(ai, bj, p);
                let row = &self.consts[(i * n + j) * n..(i * n + j + 1) * n];
                for (o, &r) in out.iter_mut().zip(row) {
                    *o = (*o + mul_mod(c, r, p)) % p;
                }
            }
        }
        self.from_digits(&out)
    }
}
