//! Text formats: algebra files, map files and the lazy highwater marker.
//!
//! ```text
//! # comments run to end of line
//! field Q                 | field F 7
//! dim 3
//! basis eA eB eC
//! mul eA eB -> 1/8 eA + 1/8 eB + -1/8 eC
//! axis eA
//! law jordan 1/4
//! ```
//!
//! Products not listed are taken from the symmetric entry, or zero.

use std::collections::BTreeMap;

use crate::algebra::{parse_combination, Algebra};
use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::fusion::FusionLaw;
use crate::linalg::{Matrix, Vector};
use crate::maps::{MapRepr, MapTable};

#[derive(Clone, Debug)]
pub struct AlgebraFile {
    pub algebra: Algebra,
    pub axes: Vec<Vector>,
    pub law: Option<FusionLaw>,
}

/// Marker for the infinite-dimensional highwater algebra. Only its field and
/// declared axis indices `a(i)` are recorded.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HighwaterFile {
    pub field: FieldSpec,
    pub axes: Vec<i64>,
}

#[derive(Clone, Debug)]
pub enum Document {
    Finite(AlgebraFile),
    Highwater(HighwaterFile),
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let line = line.split('#').next().unwrap_or("").trim();
        (!line.is_empty()).then_some((i + 1, line))
    })
}

fn parse_field(line: usize, rest: &str) -> Result<FieldSpec> {
    let toks: Vec<&str> = rest.split_whitespace().collect();
    match toks.as_slice() {
        ["Q"] => Ok(FieldSpec::Rationals),
        ["F", p] => {
            let p: u64 = p
                .parse()
                .map_err(|_| Error::parse(line, format!("bad modulus `{p}`")))?;
            FieldSpec::prime(p)
        }
        _ => Err(Error::parse(line, "expected `field Q` or `field F <p>`")),
    }
}

fn field_line(field: FieldSpec) -> String {
    match field {
        FieldSpec::Rationals => "field Q".into(),
        FieldSpec::Prime(p) => format!("field F {p}"),
    }
}

pub fn parse_document(text: &str) -> Result<Document> {
    let lazy = content_lines(text).next().map(|(_, l)| l == "lazy highwater");
    if lazy == Some(true) {
        parse_highwater(text).map(Document::Highwater)
    } else {
        parse_algebra(text).map(Document::Finite)
    }
}

fn parse_highwater(text: &str) -> Result<HighwaterFile> {
    let mut field = None;
    let mut axes = Vec::new();
    for (line, l) in content_lines(text).skip(1) {
        let (key, rest) = l.split_once(char::is_whitespace).unwrap_or((l, ""));
        match key {
            "field" => field = Some(parse_field(line, rest)?),
            "axis" => {
                let key: crate::lazy::HwKey = rest.trim().parse()?;
                match key {
                    crate::lazy::HwKey::A(i) => axes.push(i),
                    crate::lazy::HwKey::S(_) => {
                        return Err(Error::parse(line, "highwater axes are a(i)"));
                    }
                }
            }
            "law" if rest.trim() == "highwater" => {}
            _ => return Err(Error::parse(line, format!("unexpected `{l}` in a highwater marker"))),
        }
    }
    let field = field.ok_or_else(|| Error::parse(0, "missing `field` line"))?;
    Ok(HighwaterFile { field, axes })
}

pub fn emit_highwater(file: &HighwaterFile) -> String {
    let mut out = format!("lazy highwater\n{}\n", field_line(file.field));
    for i in &file.axes {
        out.push_str(&format!("axis a({i})\n"));
    }
    out.push_str("law highwater\n");
    out
}

pub fn parse_algebra(text: &str) -> Result<AlgebraFile> {
    let mut field = None;
    let mut dim = None;
    let mut names: Option<Vec<String>> = None;
    let mut muls: Vec<(usize, &str)> = Vec::new();
    let mut axes: Vec<(usize, &str)> = Vec::new();
    let mut law: Option<(usize, &str)> = None;
    for (line, l) in content_lines(text) {
        let (key, rest) = l.split_once(char::is_whitespace).unwrap_or((l, ""));
        let rest = rest.trim();
        match key {
            "field" if field.is_none() => field = Some(parse_field(line, rest)?),
            "dim" if dim.is_none() => {
                dim = Some(
                    rest.parse::<usize>()
                        .map_err(|_| Error::parse(line, format!("bad dimension `{rest}`")))?,
                )
            }
            "basis" if names.is_none() => names = Some(rest.split_whitespace().map(String::from).collect()),
            "mul" => muls.push((line, rest)),
            "axis" => axes.push((line, rest)),
            "law" if law.is_none() => law = Some((line, rest)),
            "field" | "dim" | "basis" | "law" => {
                return Err(Error::parse(line, format!("repeated `{key}` line")));
            }
            _ => return Err(Error::parse(line, format!("unknown directive `{key}`"))),
        }
    }
    let field = field.ok_or_else(|| Error::parse(0, "missing `field` line"))?;
    let names = match (names, dim) {
        (Some(n), Some(d)) if n.len() != d => {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: n.len(),
            })
        }
        (Some(n), _) => n,
        (None, Some(d)) => (1..=d).map(|k| format!("e{k}")).collect(),
        (None, None) => return Err(Error::parse(0, "missing `dim` or `basis` line")),
    };
    let n = names.len();
    let index = |name: &str| {
        names
            .iter()
            .position(|b| b == name)
            .ok_or_else(|| Error::UnknownBasis(name.to_string()))
    };
    let mut entries: BTreeMap<(usize, usize), Vector> = BTreeMap::new();
    for (line, rest) in muls {
        let (lhs, rhs) = rest
            .split_once("->")
            .ok_or_else(|| Error::parse(line, "expected `mul <b1> <b2> -> <combination>`"))?;
        let pair: Vec<&str> = lhs.split_whitespace().collect();
        let [a, b] = pair.as_slice() else {
            return Err(Error::parse(line, "a product names exactly two basis elements"));
        };
        let (i, j) = (index(a)?, index(b)?);
        let v = parse_combination(field, &names, rhs)?;
        for key in [(i, j), (j, i)] {
            if let Some(prev) = entries.get(&key) {
                if *prev != v {
                    return Err(Error::parse(line, format!("conflicting entries for {a} {b}")));
                }
            }
        }
        entries.insert((i, j), v.clone());
        entries.insert((j, i), v);
    }
    let table = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| entries.remove(&(i, j)).unwrap_or_else(|| Vector::zeros(field, n)))
                .collect()
        })
        .collect();
    let algebra = Algebra::new(field, names, table)?;
    let axes = axes
        .into_iter()
        .map(|(_, text)| algebra.parse_element(text))
        .collect::<Result<Vec<_>>>()?;
    let law = law.map(|(_, text)| FusionLaw::parse(text, field)).transpose()?;
    Ok(AlgebraFile { algebra, axes, law })
}

fn explicit_combination(alg: &Algebra, v: &Vector) -> String {
    let terms: Vec<String> = v
        .coords()
        .iter()
        .zip(alg.names())
        .filter(|(c, _)| !c.is_zero())
        .map(|(c, name)| format!("{c} {name}"))
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

/// Canonical text: basis order, upper-triangular nonzero products with
/// explicit coefficients.
pub fn emit_algebra(alg: &Algebra, axes: &[Vector], law: Option<&FusionLaw>) -> String {
    let mut out = String::new();
    out.push_str(&field_line(alg.field()));
    out.push('\n');
    out.push_str(&format!("dim {}\n", alg.dim()));
    out.push_str(&format!("basis {}\n", alg.names().join(" ")));
    for i in 0..alg.dim() {
        for j in i..alg.dim() {
            let v = alg.structure(i, j);
            if !v.is_zero() {
                out.push_str(&format!(
                    "mul {} {} -> {}\n",
                    alg.names()[i],
                    alg.names()[j],
                    explicit_combination(alg, v)
                ));
            }
        }
    }
    for a in axes {
        out.push_str(&format!("axis {}\n", alg.format_element(a)));
    }
    if let Some(law) = law {
        out.push_str(&format!("law {}\n", law.spec()));
    }
    out
}

pub fn emit_file(file: &AlgebraFile) -> String {
    emit_algebra(&file.algebra, &file.axes, file.law.as_ref())
}

/// `map <size>` then `i -> j` lines, or `linmap <rows> <cols>` then matrix rows.
pub fn emit_map(map: &MapTable) -> String {
    match map.repr() {
        MapRepr::Table(t) => {
            let mut out = format!("map {}\n", t.len());
            for (i, j) in t.iter().enumerate() {
                out.push_str(&format!("{i} -> {j}\n"));
            }
            out
        }
        MapRepr::Linear(m) => {
            let mut out = format!("linmap {} {}\n", m.rows(), m.cols());
            for r in 0..m.rows() {
                let row: Vec<String> = (0..m.cols()).map(|c| m.get(r, c).to_string()).collect();
                out.push_str(&row.join(" "));
                out.push('\n');
            }
            out
        }
    }
}

pub fn parse_map<'a>(text: &str, domain: &'a Algebra, codomain: &'a Algebra) -> Result<MapTable<'a>> {
    let mut lines = content_lines(text);
    let (hline, header) = lines.next().ok_or_else(|| Error::parse(0, "empty map file"))?;
    let head: Vec<&str> = header.split_whitespace().collect();
    let number = |line: usize, t: &str| {
        t.parse::<usize>()
            .map_err(|_| Error::parse(line, format!("bad number `{t}`")))
    };
    match head.as_slice() {
        ["map", size] => {
            let size = number(hline, size)?;
            let mut values: Vec<Option<usize>> = vec![None; size];
            for (line, l) in lines {
                let (i, j) = l
                    .split_once("->")
                    .ok_or_else(|| Error::parse(line, "expected `i -> j`"))?;
                let (i, j) = (number(line, i.trim())?, number(line, j.trim())?);
                let slot = values
                    .get_mut(i)
                    .ok_or_else(|| Error::parse(line, format!("index {i} outside the domain")))?;
                if slot.replace(j).is_some() {
                    return Err(Error::parse(line, format!("index {i} assigned twice")));
                }
            }
            let values = values
                .into_iter()
                .enumerate()
                .map(|(i, v)| v.ok_or_else(|| Error::parse(0, format!("no image for index {i}"))))
                .collect::<Result<Vec<_>>>()?;
            MapTable::table(domain, codomain, values)
        }
        ["linmap", rows, cols] => {
            let (rows, cols) = (number(hline, rows)?, number(hline, cols)?);
            let field = domain.field();
            let mut data: Vec<Vector> = Vec::with_capacity(rows);
            for (line, l) in lines {
                let row = l
                    .split_whitespace()
                    .map(|t| field.parse_scalar(t))
                    .collect::<Result<Vec<Scalar>>>()?;
                if row.len() != cols {
                    return Err(Error::parse(line, format!("expected {cols} entries")));
                }
                data.push(Vector::new(field, row)?);
            }
            if data.len() != rows {
                return Err(Error::parse(0, format!("expected {rows} matrix rows")));
            }
            MapTable::linear(domain, codomain, Matrix::from_rows(field, cols, &data)?)
        }
        _ => Err(Error::parse(hline, "expected `map <size>` or `linmap <rows> <cols>`")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zoo;

    #[test]
    fn round_trip_2a() {
        let z = zoo::norton_sakuma_2a(FieldSpec::Rationals).unwrap();
        let text = emit_algebra(&z.algebra, &z.axes, Some(&z.law));
        assert!(text.contains("mul eA eB -> 1/8 eA + 1/8 eB + -1/8 eC\n"));
        let back = parse_algebra(&text).unwrap();
        assert_eq!(back.algebra, z.algebra);
        assert_eq!(back.axes, z.axes);
        assert_eq!(emit_file(&back), text);
    }

    #[test]
    fn symmetric_completion_and_conflicts() {
        let base = "field F 5\nbasis x y\nmul x y -> 2 x\n";
        let f = parse_algebra(base).unwrap();
        assert_eq!(f.algebra.structure(1, 0), &Vector::from_i64(FieldSpec::prime(5).unwrap(), &[2, 0]));
        assert!(parse_algebra(&format!("{base}mul y x -> 2 x\n")).is_ok());
        assert!(matches!(
            parse_algebra(&format!("{base}mul y x -> 3 x\n")),
            Err(Error::Parse { line: 4, .. })
        ));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(parse_algebra("field F 4\ndim 1\n"), Err(Error::NotPrime(4))));
        assert!(matches!(
            parse_algebra("field Q\nbasis x\nmul x z -> x\n"),
            Err(Error::UnknownBasis(_))
        ));
        assert!(parse_algebra("field F 5\nbasis x\nmul x x -> 1/5 x\n").is_err());
        assert!(parse_algebra("field Q\nbasis x\nfrob x\n").is_err());
    }

    #[test]
    fn highwater_marker() {
        let hw = HighwaterFile {
            field: FieldSpec::Rationals,
            axes: vec![0, 1],
        };
        let text = emit_highwater(&hw);
        match parse_document(&text).unwrap() {
            Document::Highwater(back) => assert_eq!(back, hw),
            Document::Finite(_) => panic!("expected a marker"),
        }
    }

    #[test]
    fn map_round_trip() {
        let z = zoo::zero_algebra(1, FieldSpec::prime(5).unwrap()).unwrap();
        let m = MapTable::table(&z.algebra, &z.algebra, vec![0, 1, 2, 4, 3]).unwrap();
        let text = emit_map(&m);
        let back = parse_map(&text, &z.algebra, &z.algebra).unwrap();
        assert_eq!(back.repr(), m.repr());

        let q = zoo::norton_sakuma_2a(FieldSpec::Rationals).unwrap();
        let id = MapTable::identity(&q.algebra);
        let back = parse_map(&emit_map(&id), &q.algebra, &q.algebra).unwrap();
        assert_eq!(back.repr(), id.repr());
    }
}
