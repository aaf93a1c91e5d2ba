//! Concrete algebras with their axes and fusion laws.

use crate::algebra::Algebra;
use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::fusion::FusionLaw;
use crate::lazy::{Highwater, HwKey};
use crate::linalg::Vector;

#[derive(Clone, Debug)]
pub struct ZooEntry {
    pub name: String,
    pub algebra: Algebra,
    pub axes: Vec<Vector>,
    pub law: FusionLaw,
    /// Characteristics the constructor refuses.
    pub excluded: Vec<u64>,
    /// Sums `a + b` of orthogonal axes, for Matsuo algebras.
    pub double_axes: Vec<Vector>,
}

#[derive(Clone, Debug)]
pub struct HighwaterEntry {
    pub algebra: Highwater,
    pub axes: Vec<HwKey>,
    /// `M(2, 1/2)`.
    pub law: FusionLaw,
    /// The finer Highwater table on the same eigenvalues.
    pub highwater_law: FusionLaw,
    pub excluded: Vec<u64>,
}

fn guard(name: &str, field: FieldSpec, excluded: &[u64]) -> Result<()> {
    let c = field.characteristic();
    if excluded.contains(&c) {
        return Err(Error::Characteristic {
            name: name.into(),
            characteristic: c,
            excluded: excluded.to_vec(),
        });
    }
    Ok(())
}

fn names(list: &[&str]) -> Vec<String> {
    list.iter().map(|s| s.to_string()).collect()
}

fn combo(field: FieldSpec, n: usize, terms: &[(usize, i64, i64)]) -> Vector {
    let mut v = Vector::zeros(field, n);
    for &(k, num, den) in terms {
        let c = v.get(k) + &field.ratio_i64(num, den).expect("guarded denominators");
        v.set(k, c);
    }
    v
}

/// The Norton-Sakuma algebra of type 2A on `eA, eB, eC`; law `J(1/4)`.
pub fn norton_sakuma_2a(field: FieldSpec) -> Result<ZooEntry> {
    let excluded = vec![2, 3, 5];
    guard("norton-sakuma 2A", field, &excluded)?;
    let rule = |i: usize, j: usize| {
        if i == j {
            return Vector::unit(field, 3, i);
        }
        // the third axis gets -1/8, the two factors +1/8
        let k = 3 - i - j;
        combo(field, 3, &[(i, 1, 8), (j, 1, 8), (k, -1, 8)])
    };
    let algebra = Algebra::from_fn(field, names(&["eA", "eB", "eC"]), rule)?;
    let axes = (0..3).map(|i| algebra.basis_vector(i)).collect();
    Ok(ZooEntry {
        name: "2a".into(),
        algebra,
        axes,
        law: FusionLaw::jordan(field.ratio_i64(1, 4)?)?,
        excluded,
        double_axes: Vec::new(),
    })
}

/// `M_2(F)^+` on `e11, e10, e01, e00` with `x*y = (xy + yx)/2`; axis `e11`, law `J(1/2)`.
pub fn jordan_b_plus(field: FieldSpec) -> Result<ZooEntry> {
    let excluded = vec![2];
    guard("jordan B+", field, &excluded)?;
    // basis index k <-> matrix unit e_{ij}
    let units = [(1u8, 1u8), (1, 0), (0, 1), (0, 0)];
    let index = |i: u8, j: u8| units.iter().position(|&u| u == (i, j)).expect("unit exists");
    let assoc = |a: usize, b: usize| {
        let (i, j) = units[a];
        let (k, l) = units[b];
        (j == k).then(|| index(i, l))
    };
    let rule = |a: usize, b: usize| {
        let mut terms = Vec::new();
        for k in [assoc(a, b), assoc(b, a)].into_iter().flatten() {
            terms.push((k, 1, 2));
        }
        combo(field, 4, &terms)
    };
    let algebra = Algebra::from_fn(field, names(&["e11", "e10", "e01", "e00"]), rule)?;
    Ok(ZooEntry {
        name: "bplus".into(),
        axes: vec![algebra.basis_vector(0)],
        algebra,
        law: FusionLaw::jordan(field.ratio_i64(1, 2)?)?,
        excluded,
        double_axes: Vec::new(),
    })
}

/// Points and lines of a partial linear space with three points per line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FischerSpace {
    points: Vec<String>,
    lines: Vec<[usize; 3]>,
}

impl FischerSpace {
    pub fn new(points: Vec<String>, lines: Vec<[usize; 3]>) -> Result<Self> {
        let n = points.len();
        for (i, p) in points.iter().enumerate() {
            if points[..i].contains(p) {
                return Err(Error::InvalidParameter(format!("duplicate point `{p}`")));
            }
        }
        let mut seen = vec![false; n * n];
        for line in &lines {
            let [a, b, c] = *line;
            if a >= n || b >= n || c >= n {
                return Err(Error::InvalidParameter(format!("line {line:?} names a missing point")));
            }
            if a == b || b == c || a == c {
                return Err(Error::InvalidParameter(format!("line {line:?} repeats a point")));
            }
            for (x, y) in [(a, b), (a, c), (b, c)] {
                if seen[x * n + y] {
                    return Err(Error::InvalidParameter(format!(
                        "points `{}` and `{}` lie on two lines",
                        points[x], points[y]
                    )));
                }
                seen[x * n + y] = true;
                seen[y * n + x] = true;
            }
        }
        Ok(FischerSpace { points, lines })
    }

    /// One line on three points `eA, eB, eC`.
    pub fn single_line() -> Self {
        FischerSpace::new(names(&["eA", "eB", "eC"]), vec![[0, 1, 2]]).expect("valid")
    }

    /// Two points and no lines.
    pub fn two_points() -> Self {
        FischerSpace::new(names(&["a", "b"]), Vec::new()).expect("valid")
    }

    /// The transpositions of `S4`; lines are the transpositions of each `S3`.
    pub fn s4() -> Self {
        let pairs = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
        let points = pairs.iter().map(|(a, b)| format!("t{a}{b}")).collect();
        let idx = |a: usize, b: usize| pairs.iter().position(|&p| p == (a, b)).expect("pair");
        let mut lines = Vec::new();
        for fixed in (0..4).rev() {
            let rest: Vec<usize> = (0..4).filter(|&x| x != fixed).collect();
            let (x, y, z) = (rest[0], rest[1], rest[2]);
            lines.push([idx(x, y), idx(x, z), idx(y, z)]);
        }
        FischerSpace::new(points, lines).expect("valid")
    }

    pub fn points(&self) -> &[String] {
        &self.points
    }

    pub fn lines(&self) -> &[[usize; 3]] {
        &self.lines
    }

    /// The third point on the line through `x` and `y`.
    pub fn third_point(&self, x: usize, y: usize) -> Option<usize> {
        self.lines.iter().find_map(|l| {
            (l.contains(&x) && l.contains(&y) && x != y)
                .then(|| l.iter().copied().find(|&z| z != x && z != y).expect("three points"))
        })
    }
}

/// Matsuo algebra: `x*x = x`, `x*y = (eta/2)(x + y - z)` on a line `{x, y, z}`,
/// `x*y = 0` for non-collinear points. Law `J(eta)`.
pub fn matsuo(space: &FischerSpace, eta: Scalar) -> Result<ZooEntry> {
    let field = eta.field();
    let excluded = vec![2];
    guard("matsuo", field, &excluded)?;
    if eta.is_zero() || eta.is_one() {
        return Err(Error::InvalidParameter(format!("matsuo needs eta not in {{0, 1}}, got {eta}")));
    }
    let n = space.points().len();
    let half_eta = &eta * &field.ratio_i64(1, 2)?;
    let rule = |i: usize, j: usize| {
        if i == j {
            return Vector::unit(field, n, i);
        }
        let mut v = Vector::zeros(field, n);
        if let Some(k) = space.third_point(i, j) {
            v.set(i, half_eta.clone());
            v.set(j, half_eta.clone());
            v.set(k, -&half_eta);
        }
        v
    };
    let algebra = Algebra::from_fn(field, space.points().to_vec(), rule)?;
    let axes: Vec<Vector> = (0..n).map(|i| algebra.basis_vector(i)).collect();
    let mut double_axes = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if algebra.structure(i, j).is_zero() {
                double_axes.push(&axes[i] + &axes[j]);
            }
        }
    }
    Ok(ZooEntry {
        name: "matsuo".into(),
        algebra,
        axes,
        law: FusionLaw::jordan(eta)?,
        excluded,
        double_axes,
    })
}

/// The Highwater algebra with axes `a(0)`, `a(1)`.
pub fn highwater(field: FieldSpec) -> Result<HighwaterEntry> {
    let algebra = Highwater::new(field)?;
    Ok(HighwaterEntry {
        algebra,
        axes: vec![HwKey::A(0), HwKey::A(1)],
        law: FusionLaw::monster(field.from_i64(2), field.ratio_i64(1, 2)?)?,
        highwater_law: FusionLaw::highwater(field)?,
        excluded: vec![2, 3],
    })
}

/// `n`-dimensional algebra with every product zero. No axes; law `A`.
pub fn zero_algebra(n: usize, field: FieldSpec) -> Result<ZooEntry> {
    let basis = (1..=n).map(|i| format!("z{i}")).collect();
    let algebra = Algebra::from_fn(field, basis, |_, _| Vector::zeros(field, n))?;
    Ok(ZooEntry {
        name: "zero".into(),
        algebra,
        axes: Vec::new(),
        law: FusionLaw::associative(field),
        excluded: Vec::new(),
        double_axes: Vec::new(),
    })
}

/// `F x F` with the componentwise product on `e1, e2`; axis `e1`, law `A`.
pub fn diag2(field: FieldSpec) -> Result<ZooEntry> {
    let algebra = Algebra::from_fn(field, names(&["e1", "e2"]), |i, j| {
        if i == j {
            Vector::unit(field, 2, i)
        } else {
            Vector::zeros(field, 2)
        }
    })?;
    Ok(ZooEntry {
        name: "diag2".into(),
        axes: vec![algebra.basis_vector(0), algebra.basis_vector(1)],
        algebra,
        law: FusionLaw::associative(field),
        excluded: Vec::new(),
        double_axes: Vec::new(),
    })
}

/// Matsuo algebra on two non-collinear points.
pub fn two_point_matsuo(eta: Scalar) -> Result<ZooEntry> {
    let mut e = matsuo(&FischerSpace::two_points(), eta)?;
    e.name = "matsuo-two-point".into();
    Ok(e)
}

/// Names accepted by [`by_name`].
pub const FINITE_NAMES: &[&str] = &[
    "2a",
    "bplus",
    "matsuo-line",
    "matsuo-s4",
    "matsuo-two-point",
    "zero",
    "diag2",
];

/// Looks up a finite entry. `eta` defaults to 1/4 for Matsuo algebras and
/// `dim` to 1 for the zero algebra.
pub fn by_name(name: &str, field: FieldSpec, eta: Option<Scalar>, dim: Option<usize>) -> Result<ZooEntry> {
    let eta = || match eta.clone() {
        Some(e) => Ok(e),
        None => field.ratio_i64(1, 4),
    };
    let mut entry = match name {
        "2a" => norton_sakuma_2a(field)?,
        "bplus" => jordan_b_plus(field)?,
        "matsuo-line" => matsuo(&FischerSpace::single_line(), eta()?)?,
        "matsuo-s4" => matsuo(&FischerSpace::s4(), eta()?)?,
        "matsuo-two-point" => two_point_matsuo(eta()?)?,
        "zero" => zero_algebra(dim.unwrap_or(1), field)?,
        "diag2" => diag2(field)?,
        other => {
            return Err(Error::InvalidParameter(format!(
                "unknown zoo entry `{other}`; known: {}, highwater",
                FINITE_NAMES.join(", ")
            )))
        }
    };
    entry.name = name.into();
    Ok(entry)
}
