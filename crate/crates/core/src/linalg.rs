//! Dense exact linear algebra: vectors, matrices, canonical row reduction and
//! subspaces stored as reduced row echelon bases.
//!
//! Every subspace carries its canonical RREF basis, so two spanning sets of
//! the same space produce structurally equal [`Subspace`] values.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Vector {
    field: FieldSpec,
    coords: Vec<Scalar>,
}

impl Vector {
    pub fn zeros(field: FieldSpec, dim: usize) -> Self {
        Vector {
            field,
            coords: vec![field.zero(); dim],
        }
    }

    pub fn unit(field: FieldSpec, dim: usize, i: usize) -> Self {
        let mut v = Vector::zeros(field, dim);
        v.coords[i] = field.one();
        v
    }

    /// Builds a vector, checking that every coordinate lives in `field`.
    pub fn new(field: FieldSpec, coords: Vec<Scalar>) -> Result<Self> {
        if let Some(bad) = coords.iter().find(|c| c.field() != field) {
            return Err(Error::FieldMismatch {
                expected: field,
                found: bad.field(),
            });
        }
        Ok(Vector { field, coords })
    }

    pub fn from_i64(field: FieldSpec, coords: &[i64]) -> Self {
        Vector {
            field,
            coords: coords.iter().map(|&c| field.from_i64(c)).collect(),
        }
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Scalar] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<Scalar> {
        self.coords
    }

    pub fn get(&self, i: usize) -> &Scalar {
        &self.coords[i]
    }

    pub fn set(&mut self, i: usize, value: Scalar) {
        self.coords[i] = value;
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Scalar::is_zero)
    }

    pub fn scale(&self, c: &Scalar) -> Vector {
        Vector {
            field: self.field,
            coords: self.coords.iter().map(|x| x * c).collect(),
        }
    }

    /// `self += c * other`
    pub fn add_scaled(&mut self, c: &Scalar, other: &Vector) {
        if c.is_zero() {
            return;
        }
        for (x, y) in self.coords.iter_mut().zip(&other.coords) {
            if !y.is_zero() {
                *x = &*x + &(c * y);
            }
        }
    }

    pub fn check_compatible(&self, field: FieldSpec, dim: usize) -> Result<()> {
        if self.field != field {
            return Err(Error::FieldMismatch {
                expected: field,
                found: self.field,
            });
        }
        if self.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: self.dim(),
            });
        }
        Ok(())
    }
}

impl fmt::Display for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl<'a> Add<&'a Vector> for &'a Vector {
    type Output = Vector;
    fn add(self, rhs: &Vector) -> Vector {
        assert_eq!(self.dim(), rhs.dim(), "vector dimension mismatch");
        Vector {
            field: self.field,
            coords: self.coords.iter().zip(&rhs.coords).map(|(a, b)| a + b).collect(),
        }
    }
}

impl<'a> Sub<&'a Vector> for &'a Vector {
    type Output = Vector;
    fn sub(self, rhs: &Vector) -> Vector {
        assert_eq!(self.dim(), rhs.dim(), "vector dimension mismatch");
        Vector {
            field: self.field,
            coords: self.coords.iter().zip(&rhs.coords).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &Vector {
    type Output = Vector;
    fn neg(self) -> Vector {
        Vector {
            field: self.field,
            coords: self.coords.iter().map(|a| -a).collect(),
        }
    }
}

/// Row-major dense matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix {
    field: FieldSpec,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(field: FieldSpec, rows: usize, cols: usize) -> Self {
        Matrix {
            field,
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: FieldSpec, n: usize) -> Self {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    /// Matrix whose rows are the given vectors. All rows must have `cols` entries.
    pub fn from_rows(field: FieldSpec, cols: usize, rows: &[Vector]) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            r.check_compatible(field, cols)?;
            data.extend(r.coords.iter().cloned());
        }
        Ok(Matrix {
            field,
            rows: rows.len(),
            cols,
            data,
        })
    }

    /// Matrix whose columns are the given vectors, each of length `rows`.
    pub fn from_columns(field: FieldSpec, rows: usize, cols: &[Vector]) -> Result<Self> {
        let mut m = Matrix::zeros(field, rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            c.check_compatible(field, rows)?;
            for i in 0..rows {
                m.set(i, j, c.coords[i].clone());
            }
        }
        Ok(m)
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: Scalar) {
        self.data[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> Vector {
        Vector {
            field: self.field,
            coords: self.data[i * self.cols..(i + 1) * self.cols].to_vec(),
        }
    }

    pub fn row_vectors(&self) -> Vec<Vector> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn column(&self, j: usize) -> Vector {
        Vector {
            field: self.field,
            coords: (0..self.rows).map(|i| self.get(i, j).clone()).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &Vector) -> Vector {
        assert_eq!(v.dim(), self.cols, "matrix-vector dimension mismatch");
        let mut out = Vector::zeros(self.field, self.rows);
        for i in 0..self.rows {
            let mut acc = self.field.zero();
            for j in 0..self.cols {
                let a = self.get(i, j);
                if !a.is_zero() && !v.coords[j].is_zero() {
                    acc = &acc + &(a * &v.coords[j]);
                }
            }
            out.coords[i] = acc;
        }
        out
    }

    pub fn mul(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.rows, "matrix product dimension mismatch");
        let mut out = Matrix::zeros(self.field, self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        let v = out.get(i, j) + &(a * b);
                        out.set(i, j, v);
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> Matrix {
        Matrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * c).collect(),
        }
    }

    /// `self - lambda * I`
    pub fn shift(&self, lambda: &Scalar) -> Matrix {
        assert_eq!(self.rows, self.cols, "shift needs a square matrix");
        let mut m = self.clone();
        for i in 0..self.rows {
            let v = m.get(i, i) - lambda;
            m.set(i, i, v);
        }
        m
    }

    /// Canonical reduced row echelon form. Pivots are chosen leftmost-first and
    /// the topmost nonzero row is used, so the output depends only on the row space.
    /// Zero rows are dropped from the result.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut rows: Vec<Vec<Scalar>> = (0..self.rows)
            .map(|i| self.data[i * self.cols..(i + 1) * self.cols].to_vec())
            .collect();
        let mut pivots = Vec::new();
        let mut r = 0;
        for col in 0..self.cols {
            if r == rows.len() {
                break;
            }
            let Some(found) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
                continue;
            };
            rows.swap(r, found);
            let inv = rows[r][col].inv().expect("pivot is nonzero");
            for x in rows[r].iter_mut() {
                if !x.is_zero() {
                    *x = &*x * &inv;
                }
            }
            let pivot_row = rows[r].clone();
            for (i, row) in rows.iter_mut().enumerate() {
                if i == r || row[col].is_zero() {
                    continue;
                }
                let factor = row[col].clone();
                for (x, p) in row.iter_mut().zip(&pivot_row) {
                    if !p.is_zero() {
                        *x = &*x - &(&factor * p);
                    }
                }
            }
            pivots.push(col);
            r += 1;
        }
        rows.truncate(r);
        let data = rows.into_iter().flatten().collect();
        (
            Matrix {
                field: self.field,
                rows: r,
                cols: self.cols,
                data,
            },
            pivots,
        )
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Null space `{x : self * x = 0}` with its canonical basis.
    pub fn kernel(&self) -> Subspace {
        let (red, pivots) = self.rref();
        let n = self.cols;
        let mut is_pivot = vec![None; n];
        for (row, &c) in pivots.iter().enumerate() {
            is_pivot[c] = Some(row);
        }
        let mut basis = Vec::new();
        for free in (0..n).filter(|&c| is_pivot[c].is_none()) {
            let mut v = Vector::unit(self.field, n, free);
            for (row, &pc) in pivots.iter().enumerate() {
                v.coords[pc] = -red.get(row, free);
            }
            basis.push(v);
        }
        Subspace::span_unchecked(self.field, n, &basis)
    }

    /// `kernel(self - lambda * I)`
    pub fn eigenspace(&self, lambda: &Scalar) -> Subspace {
        self.shift(lambda).kernel()
    }

    /// Exact inverse of a square matrix, `None` when singular.
    pub fn inverse(&self) -> Option<Matrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut aug = Matrix::zeros(self.field, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, self.field.one());
        }
        let (red, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut inv = Matrix::zeros(self.field, n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, red.get(i, n + j).clone());
            }
        }
        Some(inv)
    }

    /// Some solution of `self * x = b`, if the system is consistent.
    pub fn solve(&self, b: &Vector) -> Option<Vector> {
        assert_eq!(b.dim(), self.rows);
        let mut aug = Matrix::zeros(self.field, self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, self.cols, b.coords[i].clone());
        }
        let (red, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = Vector::zeros(self.field, self.cols);
        for (row, &c) in pivots.iter().enumerate() {
            x.coords[c] = red.get(row, self.cols).clone();
        }
        Some(x)
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Matrix {
            field: self.field,
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            writeln!(f, "{}", self.row(i))?;
        }
        Ok(())
    }
}

/// A linear subspace of `field^ambient`, stored as the canonical RREF of a
/// spanning set.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient: usize,
    basis: Matrix,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(field: FieldSpec, ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Matrix::zeros(field, 0, ambient),
            pivots: Vec::new(),
        }
    }

    pub fn full(field: FieldSpec, ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Matrix::identity(field, ambient),
            pivots: (0..ambient).collect(),
        }
    }

    /// Span of `vectors` inside `field^ambient`.
    pub fn span(field: FieldSpec, ambient: usize, vectors: &[Vector]) -> Result<Self> {
        let m = Matrix::from_rows(field, ambient, vectors)?;
        Ok(Subspace::from_matrix_rows(&m))
    }

    pub(crate) fn span_unchecked(field: FieldSpec, ambient: usize, vectors: &[Vector]) -> Self {
        Subspace::span(field, ambient, vectors).expect("vectors match the ambient space")
    }

    /// Row space of `m`.
    pub fn from_matrix_rows(m: &Matrix) -> Self {
        let (basis, pivots) = m.rref();
        Subspace {
            ambient: m.cols(),
            basis,
            pivots,
        }
    }

    pub fn field(&self) -> FieldSpec {
        self.basis.field()
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    /// Canonical basis, one RREF row per vector.
    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<Vector> {
        self.basis.row_vectors()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    fn check_ambient(&self, other_field: FieldSpec, other: usize) -> Result<()> {
        if self.field() != other_field {
            return Err(Error::FieldMismatch {
                expected: self.field(),
                found: other_field,
            });
        }
        if self.ambient != other {
            return Err(Error::DimensionMismatch {
                expected: self.ambient,
                found: other,
            });
        }
        Ok(())
    }

    /// Reduces `x` against the basis; the remainder is zero iff `x` is in the span.
    pub fn contains(&self, x: &Vector) -> Result<bool> {
        self.check_ambient(x.field(), x.dim())?;
        let mut rem = x.clone();
        for (row, &c) in self.pivots.iter().enumerate() {
            let coef = rem.coords[c].clone();
            if !coef.is_zero() {
                rem.add_scaled(&-&coef, &self.basis.row(row));
            }
        }
        Ok(rem.is_zero())
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check_ambient(other.field(), other.ambient)?;
        Ok(Subspace::from_matrix_rows(&self.basis.vstack(&other.basis)))
    }

    /// `U ∩ V` from the kernel of `[U^T | -V^T]`.
    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        self.check_ambient(other.field(), other.ambient)?;
        let field = self.field();
        if self.is_zero() || other.is_zero() {
            return Ok(Subspace::zero(field, self.ambient));
        }
        let du = self.dim();
        let mut cols = self.basis_vectors();
        cols.extend(other.basis_vectors().iter().map(|v| -v));
        let system = Matrix::from_columns(field, self.ambient, &cols)?;
        let ker = system.kernel();
        let vectors: Vec<Vector> = ker
            .basis_vectors()
            .iter()
            .map(|k| {
                let mut acc = Vector::zeros(field, self.ambient);
                for i in 0..du {
                    acc.add_scaled(k.get(i), &self.basis.row(i));
                }
                acc
            })
            .collect();
        Subspace::span(field, self.ambient, &vectors)
    }
}

impl fmt::Display for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "span{{")?;
        for (i, v) in self.basis_vectors().iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

/// Whether the parts form a direct sum decomposition of `field^ambient`:
/// dimensions add up to `ambient` and the sum has full rank.
pub fn is_direct_sum(parts: &[Subspace], ambient: usize) -> Result<bool> {
    let total: usize = parts.iter().map(Subspace::dim).sum();
    if total != ambient {
        return Ok(false);
    }
    let Some(first) = parts.first() else {
        return Ok(ambient == 0);
    };
    let mut acc = Subspace::zero(first.field(), ambient);
    for p in parts {
        acc = acc.sum(p)?;
    }
    Ok(acc.dim() == ambient)
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: FieldSpec = FieldSpec::Rationals;

    fn q(n: i64, d: i64) -> Scalar {
        Q.ratio_i64(n, d).unwrap()
    }

    #[test]
    fn rref_examples() {
        let id = Matrix::identity(Q, 3);
        let (r, p) = id.rref();
        assert_eq!(r, id);
        assert_eq!(p, vec![0, 1, 2]);

        let z = Matrix::zeros(Q, 2, 3);
        let (r, p) = z.rref();
        assert_eq!(r.rows(), 0);
        assert!(p.is_empty());

        let m = Matrix::from_rows(
            Q,
            2,
            &[Vector::from_i64(Q, &[2, 4]), Vector::from_i64(Q, &[1, 2])],
        )
        .unwrap();
        let (r, p) = m.rref();
        assert_eq!(r.row_vectors(), vec![Vector::from_i64(Q, &[1, 2])]);
        assert_eq!(p, vec![0]);
    }

    #[test]
    fn kernel_edge_cases() {
        assert!(Matrix::identity(Q, 4).kernel().is_zero());
        assert_eq!(Matrix::zeros(Q, 2, 3).kernel(), Subspace::full(Q, 3));
    }

    #[test]
    fn contains_and_intersect() {
        let u = Subspace::span(Q, 3, &[Vector::from_i64(Q, &[0, 1, -1])]).unwrap();
        assert!(!u.contains(&Vector::from_i64(Q, &[0, 1, 1])).unwrap());
        assert!(u.contains(&Vector::from_i64(Q, &[0, -3, 3])).unwrap());
        let zero = Subspace::zero(Q, 3);
        assert!(u.intersect(&zero).unwrap().is_zero());

        let xy = Subspace::span(Q, 3, &[Vector::from_i64(Q, &[1, 0, 0]), Vector::from_i64(Q, &[0, 1, 0])]).unwrap();
        let yz = Subspace::span(Q, 3, &[Vector::from_i64(Q, &[0, 1, 0]), Vector::from_i64(Q, &[0, 0, 1])]).unwrap();
        let y = xy.intersect(&yz).unwrap();
        assert_eq!(y, Subspace::span(Q, 3, &[Vector::from_i64(Q, &[0, 5, 0])]).unwrap());
        assert_eq!(xy.sum(&yz).unwrap(), Subspace::full(Q, 3));
    }

    #[test]
    fn ambient_mismatch_is_an_error() {
        let a = Subspace::zero(Q, 2);
        let b = Subspace::zero(Q, 3);
        assert!(matches!(a.sum(&b), Err(Error::DimensionMismatch { .. })));
        assert!(a.contains(&Vector::zeros(Q, 3)).is_err());
    }

    #[test]
    fn inverse_and_solve() {
        let m = Matrix::from_rows(
            Q,
            2,
            &[Vector::from_i64(Q, &[2, 1]), Vector::from_i64(Q, &[1, 1])],
        )
        .unwrap();
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), Matrix::identity(Q, 2));
        let x = m.solve(&Vector::from_i64(Q, &[3, 2])).unwrap();
        assert_eq!(x, Vector::from_i64(Q, &[1, 1]));
        let singular = Matrix::from_rows(
            Q,
            2,
            &[Vector::from_i64(Q, &[1, 2]), Vector::from_i64(Q, &[2, 4])],
        )
        .unwrap();
        assert!(singular.inverse().is_none());
        assert!(singular.solve(&Vector::from_i64(Q, &[1, 0])).is_none());
    }

    #[test]
    fn direct_sum_check() {
        let e = |i| Subspace::span(Q, 2, &[Vector::unit(Q, 2, i)]).unwrap();
        assert!(is_direct_sum(&[e(0), e(1)], 2).unwrap());
        assert!(!is_direct_sum(&[e(0), e(0)], 2).unwrap());
        assert!(!is_direct_sum(&[e(0)], 2).unwrap());
    }

    #[test]
    fn fractions_survive_elimination() {
        let m = Matrix::from_rows(
            Q,
            2,
            &[
                Vector::new(Q, vec![q(1, 3), q(1, 2)]).unwrap(),
                Vector::new(Q, vec![q(2, 3), q(1, 1)]).unwrap(),
            ],
        )
        .unwrap();
        let k = m.kernel();
        assert_eq!(k.basis_vectors(), vec![Vector::new(Q, vec![q(1, 1), q(-2, 3)]).unwrap()]);
    }
}
