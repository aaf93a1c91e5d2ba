//! Finite-dimensional commutative algebras given by structure constants.

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::linalg::{Matrix, Subspace, Vector};

/// A commutative algebra `b_i * b_j = sum_k c[i][j][k] b_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Algebra {
    field: FieldSpec,
    names: Vec<String>,
    // n*n products, row-major; table[i*n+j] == table[j*n+i]
    table: Vec<Vector>,
}

impl Algebra {
    /// Builds an algebra from a full `n x n` table of basis products.
    /// Fails unless the table is symmetric and every entry lies in `field^n`.
    pub fn new(field: FieldSpec, names: Vec<String>, table: Vec<Vec<Vector>>) -> Result<Self> {
        let n = names.len();
        if table.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: table.len(),
            });
        }
        for (i, name) in names.iter().enumerate() {
            if names[..i].contains(name) {
                return Err(Error::InvalidParameter(format!("duplicate basis name `{name}`")));
            }
        }
        let mut flat = Vec::with_capacity(n * n);
        for row in table {
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: row.len(),
                });
            }
            for v in row {
                v.check_compatible(field, n)?;
                flat.push(v);
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                if flat[i * n + j] != flat[j * n + i] {
                    return Err(Error::NotCommutative {
                        left: names[i].clone(),
                        right: names[j].clone(),
                    });
                }
            }
        }
        Ok(Algebra {
            field,
            names,
            table: flat,
        })
    }

    /// Builds an algebra from a product rule on basis indices. The rule is
    /// evaluated on every ordered pair, so asymmetric rules are rejected.
    pub fn from_fn(
        field: FieldSpec,
        names: Vec<String>,
        mut rule: impl FnMut(usize, usize) -> Vector,
    ) -> Result<Self> {
        let n = names.len();
        let table = (0..n).map(|i| (0..n).map(|j| rule(i, j)).collect()).collect();
        Algebra::new(field, names, table)
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn basis_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn basis_vector(&self, i: usize) -> Vector {
        Vector::unit(self.field, self.dim(), i)
    }

    /// `b_i * b_j` in coordinates.
    pub fn structure(&self, i: usize, j: usize) -> &Vector {
        &self.table[i * self.dim() + j]
    }

    pub fn zero_vector(&self) -> Vector {
        Vector::zeros(self.field, self.dim())
    }

    pub fn check_vector(&self, x: &Vector) -> Result<()> {
        x.check_compatible(self.field, self.dim())
    }

    /// Bilinear product of two elements.
    pub fn product(&self, x: &Vector, y: &Vector) -> Result<Vector> {
        self.check_vector(x)?;
        self.check_vector(y)?;
        Ok(self.mul(x, y))
    }

    /// Product without compatibility checks; panics on mismatched input.
    pub fn mul(&self, x: &Vector, y: &Vector) -> Vector {
        let n = self.dim();
        let mut out = self.zero_vector();
        for i in 0..n {
            let xi = x.get(i);
            if xi.is_zero() {
                continue;
            }
            for j in 0..n {
                let yj = y.get(j);
                if yj.is_zero() {
                    continue;
                }
                out.add_scaled(&(xi * yj), self.structure(i, j));
            }
        }
        out
    }

    /// Matrix of `L_e : x -> e x`; column `k` holds `e * b_k`.
    pub fn left_mul_matrix(&self, e: &Vector) -> Result<Matrix> {
        self.check_vector(e)?;
        let cols: Vec<Vector> = (0..self.dim())
            .map(|k| self.mul(e, &self.basis_vector(k)))
            .collect();
        Matrix::from_columns(self.field, self.dim(), &cols)
    }

    pub fn is_idempotent(&self, e: &Vector) -> Result<bool> {
        Ok(&self.product(e, e)? == e)
    }

    /// Smallest subspace containing `gens` and closed under the product.
    ///
    /// Repeatedly adds all pairwise products of the current basis until the
    /// dimension stops growing; it can grow at most `n` times.
    pub fn subalgebra_generated(&self, gens: &[Vector]) -> Result<Subspace> {
        for g in gens {
            self.check_vector(g)?;
        }
        let n = self.dim();
        let mut span = Subspace::span(self.field, n, gens)?;
        loop {
            let basis = span.basis_vectors();
            let mut extended = basis.clone();
            for (i, u) in basis.iter().enumerate() {
                for v in &basis[i..] {
                    extended.push(self.mul(u, v));
                }
            }
            let next = Subspace::span(self.field, n, &extended)?;
            if next.dim() == span.dim() {
                return Ok(span);
            }
            span = next;
        }
    }

    /// Parses `eA`, `2 eA + -1/2 eB`, `eA - eB`, or `0` into a vector.
    pub fn parse_element(&self, text: &str) -> Result<Vector> {
        parse_combination(self.field, &self.names, text)
    }

    /// Canonical text for an element: `c name + c name`, coefficient 1 omitted.
    pub fn format_element(&self, x: &Vector) -> String {
        format_combination(x.coords().iter().zip(&self.names).filter(|(c, _)| !c.is_zero()))
    }
}

/// Parses a linear combination of `names` over `field`.
pub(crate) fn parse_combination(field: FieldSpec, names: &[String], text: &str) -> Result<Vector> {
    let mut out = Vector::zeros(field, names.len());
    let text = text.trim();
    if text == "0" {
        return Ok(out);
    }
    for (sign, term) in split_terms(text)? {
        let parts: Vec<&str> = term.split_whitespace().collect();
        let (coef, name) = match parts.as_slice() {
            [name] => match name.strip_prefix('-') {
                Some(rest) => (-field.one(), rest),
                None => (field.one(), *name),
            },
            [c, name] => (field.parse_scalar(c)?, *name),
            _ => return Err(Error::InvalidParameter(format!("bad term `{term}`"))),
        };
        let idx = names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::UnknownBasis(name.to_string()))?;
        let coef = if sign { -coef } else { coef };
        let v = out.get(idx) + &coef;
        out.set(idx, v);
    }
    Ok(out)
}

/// Renders `sum c_k name_k` as `a - 1/2 b + c`; `0` when empty.
pub(crate) fn format_combination<'a, N: std::fmt::Display + 'a>(
    terms: impl Iterator<Item = (&'a Scalar, N)>,
) -> String {
    let mut out = String::new();
    for (c, name) in terms {
        // only rationals have a sign; residues print in [0, p)
        let (neg, mag) = if c.is_negative() { (true, -c.clone()) } else { (false, c.clone()) };
        match (out.is_empty(), neg) {
            (true, true) => out.push('-'),
            (false, true) => out.push_str(" - "),
            (false, false) => out.push_str(" + "),
            (true, false) => {}
        }
        if mag.is_one() {
            out.push_str(&name.to_string());
        } else {
            out.push_str(&format!("{mag} {name}"));
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// Splits `a + b - c` into (negated, term) pairs. A leading sign is allowed;
/// signs glued to coefficients (`-1/2 x`) are left for the scalar parser.
pub(crate) fn split_terms(text: &str) -> Result<Vec<(bool, String)>> {
    let mut out = Vec::new();
    let mut negate = false;
    let mut current: Vec<&str> = Vec::new();
    for tok in text.split_whitespace() {
        match tok {
            "+" | "-" => {
                if !current.is_empty() {
                    out.push((negate, current.join(" ")));
                    current.clear();
                } else if !out.is_empty() {
                    return Err(Error::InvalidParameter(format!("dangling sign in `{text}`")));
                }
                negate = tok == "-";
            }
            _ => current.push(tok),
        }
    }
    if current.is_empty() {
        return Err(Error::InvalidParameter(format!("empty term in `{text}`")));
    }
    out.push((negate, current.join(" ")));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: FieldSpec = FieldSpec::Rationals;

    fn two_dim_diag() -> Algebra {
        Algebra::from_fn(Q, vec!["x".into(), "y".into()], |i, j| {
            if i == j {
                Vector::unit(Q, 2, i)
            } else {
                Vector::zeros(Q, 2)
            }
        })
        .unwrap()
    }

    #[test]
    fn rejects_asymmetric_tables() {
        let r = Algebra::from_fn(Q, vec!["x".into(), "y".into()], |i, j| {
            if (i, j) == (0, 1) {
                Vector::unit(Q, 2, 0)
            } else {
                Vector::zeros(Q, 2)
            }
        });
        assert!(matches!(r, Err(Error::NotCommutative { .. })));
    }

    #[test]
    fn zero_times_anything() {
        let a = two_dim_diag();
        let x = Vector::from_i64(Q, &[3, -2]);
        assert!(a.product(&a.zero_vector(), &x).unwrap().is_zero());
        assert!(a.left_mul_matrix(&a.zero_vector()).unwrap().is_zero());
        assert!(a.is_idempotent(&a.zero_vector()).unwrap());
    }

    #[test]
    fn mismatched_inputs_error() {
        let a = two_dim_diag();
        assert!(a.product(&Vector::zeros(Q, 3), &a.zero_vector()).is_err());
        let f5 = FieldSpec::prime(5).unwrap();
        assert!(a.product(&Vector::zeros(f5, 2), &a.zero_vector()).is_err());
    }

    #[test]
    fn element_parsing() {
        let a = two_dim_diag();
        assert_eq!(a.parse_element("x").unwrap(), Vector::from_i64(Q, &[1, 0]));
        assert_eq!(a.parse_element("x - 2 y").unwrap(), Vector::from_i64(Q, &[1, -2]));
        assert_eq!(a.parse_element("-x + -3 y").unwrap(), Vector::from_i64(Q, &[-1, -3]));
        assert!(a.parse_element("z").is_err());
        assert!(a.parse_element("x +").is_err());
        let v = a.parse_element("1/2 x + y").unwrap();
        assert_eq!(a.format_element(&v), "1/2 x + y");
        assert_eq!(a.format_element(&a.zero_vector()), "0");
    }

    #[test]
    fn generation_on_diag() {
        let a = two_dim_diag();
        let s = a.subalgebra_generated(&[Vector::from_i64(Q, &[1, 1])]).unwrap();
        assert_eq!(s.dim(), 1);
        let s = a.subalgebra_generated(&[Vector::from_i64(Q, &[1, 2])]).unwrap();
        assert_eq!(s.dim(), 2);
    }
}
