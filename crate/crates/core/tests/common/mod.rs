//! Brute-force oracles shared by the integration tests. They enumerate
//! elements directly and never call the library's linear algebra.

#![allow(dead_code)]

use axial_core::{Algebra, FieldSpec, Scalar, Vector};

/// Every element of an algebra over `F_p`, first coordinate most significant.
pub fn elements(alg: &Algebra) -> Vec<Vector> {
    let FieldSpec::Prime(p) = alg.field() else {
        panic!("enumeration needs a prime field");
    };
    let n = alg.dim();
    let total = (p as usize).pow(n as u32);
    (0..total)
        .map(|mut idx| {
            let mut digits = vec![0i64; n];
            for d in digits.iter_mut().rev() {
                *d = (idx % p as usize) as i64;
                idx /= p as usize;
            }
            Vector::from_i64(alg.field(), &digits)
        })
        .collect()
}

/// `{x : e x = lambda x}` by testing every element.
pub fn eigenspace(alg: &Algebra, all: &[Vector], e: &Vector, lambda: &Scalar) -> Vec<Vector> {
    all.iter()
        .filter(|x| alg.mul(e, x) == x.scale(lambda))
        .cloned()
        .collect()
}

/// Some nonzero `x` in `part` with `x t = 0` for every `t` in `mults`.
pub fn annihilated(alg: &Algebra, part: &[Vector], mults: &[Vector]) -> Option<Vector> {
    part.iter()
        .filter(|x| !x.is_zero())
        .find(|x| mults.iter().all(|t| alg.mul(x, t).is_zero()))
        .cloned()
}

pub fn cube(x: &Scalar) -> Scalar {
    &(x * x) * x
}

/// `x -> x^3` coordinatewise.
pub fn cube_map(x: &Vector) -> Vector {
    Vector::new(x.field(), x.coords().iter().map(cube).collect()).unwrap()
}

/// Basis `u, v` with `u u = v` and every other product zero.
pub fn nil2(field: FieldSpec) -> Algebra {
    let z = Vector::zeros(field, 2);
    let v = Vector::from_i64(field, &[0, 1]);
    Algebra::new(
        field,
        vec!["u".into(), "v".into()],
        vec![vec![v, z.clone()], vec![z.clone(), z]],
    )
    .unwrap()
}
