//! JSON wire formats. Indices are 1-based on the wire and 0-based in
//! memory; every rational is a `"p/q"` string. Serialization is canonical:
//! entries sorted, zero entries omitted, first-two-slot pairs with `i < j`.

use std::collections::BTreeMap;

use exactlin::{Matrix, Rational, Subspace};
use serde::{Deserialize, Serialize};

use crate::algebra::{SkewTableBuilder, ThreeAlgebra};
use crate::cocycle::Cocycle;
use crate::error::{Error, Result};
use crate::lie::{LieBuilder, ThreeLieAlgebra};
use crate::maps::{MapKind, MapSpace};
use crate::module::DoubleModule;
use crate::sparse::SparseVec;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProductJson {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub out: BTreeMap<usize, Rational>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraJson {
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    #[serde(default)]
    pub products: Vec<ProductJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LieJson {
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub skew: String,
    #[serde(default)]
    pub products: Vec<ProductJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixEntryJson {
    pub i: usize,
    pub j: usize,
    pub matrix: Vec<Vec<Rational>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DoubleModuleJson {
    pub algebra: AlgebraJson,
    pub vdim: usize,
    #[serde(default)]
    pub phi: Vec<MatrixEntryJson>,
    #[serde(default)]
    pub psi: Vec<MatrixEntryJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CocycleJson {
    pub algebra: AlgebraJson,
    #[serde(default)]
    pub theta: Vec<ProductJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapSpaceJson {
    pub kind: MapKind,
    pub dim: usize,
    pub basis: Vec<Vec<Vec<Rational>>>,
}

fn check_dim(dim: usize, max: usize) -> Result<()> {
    if dim > max {
        return Err(Error::DimensionTooLarge { dim, max });
    }
    Ok(())
}

fn index(i: usize, n: usize, what: &str) -> Result<usize> {
    if i == 0 || i > n {
        return Err(Error::Schema(format!("{what} index {i} outside 1..={n}")));
    }
    Ok(i - 1)
}

fn out_vec(out: &BTreeMap<usize, Rational>, n: usize) -> Result<SparseVec> {
    let mut v = SparseVec::new();
    for (l, x) in out {
        let l = index(*l, n, "output")?;
        if !x.is_zero() {
            v.push((l, x.clone()));
        }
    }
    Ok(v)
}

fn out_map(v: &SparseVec) -> BTreeMap<usize, Rational> {
    v.iter().map(|(l, x)| (l + 1, x.clone())).collect()
}

fn product_json((i, j, k): (usize, usize, usize), v: &SparseVec) -> ProductJson {
    ProductJson {
        i: i + 1,
        j: j + 1,
        k: k + 1,
        out: out_map(v),
    }
}

fn triple(p: &ProductJson, n: usize) -> Result<(usize, usize, usize)> {
    Ok((index(p.i, n, "i")?, index(p.j, n, "j")?, index(p.k, n, "k")?))
}

fn matrix_from(rows: &[Vec<Rational>], m: usize, what: &str) -> Result<Matrix> {
    if rows.len() != m || rows.iter().any(|r| r.len() != m) {
        return Err(Error::Schema(format!("{what} matrix must be {m}×{m}")));
    }
    Ok(Matrix::from_rows(m, rows.to_vec())?)
}

fn parse<T: for<'de> Deserialize<'de>>(s: &str) -> Result<T> {
    Ok(serde_json::from_str(s)?)
}

pub fn algebra_to_json(a: &ThreeAlgebra) -> AlgebraJson {
    AlgebraJson {
        dim: a.dim(),
        label: a.label().map(str::to_string),
        products: a.orbits().map(|(t, v)| product_json(t, v)).collect(),
    }
}

pub fn algebra_from_json(j: &AlgebraJson, max_dim: usize) -> Result<ThreeAlgebra> {
    check_dim(j.dim, max_dim)?;
    check_dim(j.dim, crate::MAX_DIM)?;
    let n = j.dim;
    let mut b = SkewTableBuilder::new(n, n);
    for p in &j.products {
        b.insert(triple(p, n)?, out_vec(&p.out, n)?)?;
    }
    let mut a = ThreeAlgebra::from_builder(n, b);
    a.set_label(j.label.clone());
    Ok(a)
}

pub fn parse_algebra(s: &str, max_dim: usize) -> Result<ThreeAlgebra> {
    algebra_from_json(&parse(s)?, max_dim)
}

pub fn algebra_to_string(a: &ThreeAlgebra) -> String {
    serde_json::to_string(&algebra_to_json(a)).expect("plain data serializes")
}

pub fn lie_to_json(l: &ThreeLieAlgebra) -> LieJson {
    LieJson {
        dim: l.dim(),
        label: l.label().map(str::to_string),
        skew: "full".into(),
        products: l.orbits().map(|(t, v)| product_json(t, v)).collect(),
    }
}

pub fn lie_from_json(j: &LieJson, max_dim: usize) -> Result<ThreeLieAlgebra> {
    if j.skew != "full" {
        return Err(Error::Schema(format!("skew must be \"full\", found {:?}", j.skew)));
    }
    check_dim(j.dim, max_dim)?;
    let n = j.dim;
    let mut b = LieBuilder::new(n, n)?;
    for p in &j.products {
        b.insert(triple(p, n)?, out_vec(&p.out, n)?)?;
    }
    let mut l = b.finish();
    l.set_label(j.label.clone());
    Ok(l)
}

pub fn parse_lie(s: &str, max_dim: usize) -> Result<ThreeLieAlgebra> {
    lie_from_json(&parse(s)?, max_dim)
}

pub fn lie_to_string(l: &ThreeLieAlgebra) -> String {
    serde_json::to_string(&lie_to_json(l)).expect("plain data serializes")
}

pub fn module_to_json(dm: &DoubleModule) -> DoubleModuleJson {
    let n = dm.algebra().dim();
    let entry = |i: usize, j: usize, m: &Matrix| MatrixEntryJson {
        i: i + 1,
        j: j + 1,
        matrix: m.row_vecs(),
    };
    let mut phi = Vec::new();
    let mut psi = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i < j && !dm.phi(i, j).is_zero() {
                phi.push(entry(i, j, dm.phi(i, j)));
            }
            if !dm.psi(i, j).is_zero() {
                psi.push(entry(i, j, dm.psi(i, j)));
            }
        }
    }
    DoubleModuleJson {
        algebra: algebra_to_json(dm.algebra()),
        vdim: dm.vdim(),
        phi,
        psi,
    }
}

pub fn module_from_json(j: &DoubleModuleJson, max_dim: usize) -> Result<DoubleModule> {
    let a = algebra_from_json(&j.algebra, max_dim)?;
    check_dim(j.vdim, max_dim)?;
    let n = a.dim();
    let read = |es: &[MatrixEntryJson], what: &str| -> Result<Vec<((usize, usize), Matrix)>> {
        es.iter()
            .map(|e| {
                Ok((
                    (index(e.i, n, "i")?, index(e.j, n, "j")?),
                    matrix_from(&e.matrix, j.vdim, what)?,
                ))
            })
            .collect()
    };
    DoubleModule::new(a, j.vdim, read(&j.phi, "phi")?, read(&j.psi, "psi")?)
}

pub fn parse_double_module(s: &str, max_dim: usize) -> Result<DoubleModule> {
    module_from_json(&parse(s)?, max_dim)
}

pub fn module_to_string(dm: &DoubleModule) -> String {
    serde_json::to_string(&module_to_json(dm)).expect("plain data serializes")
}

pub fn cocycle_to_json(c: &Cocycle) -> CocycleJson {
    CocycleJson {
        algebra: algebra_to_json(c.algebra()),
        theta: c.orbits().map(|(t, v)| product_json(t, v)).collect(),
    }
}

pub fn cocycle_from_json(j: &CocycleJson, max_dim: usize) -> Result<Cocycle> {
    let a = algebra_from_json(&j.algebra, max_dim)?;
    let n = a.dim();
    let entries = j
        .theta
        .iter()
        .map(|p| Ok((triple(p, n)?, out_vec(&p.out, n)?)))
        .collect::<Result<Vec<_>>>()?;
    Cocycle::new(a, entries)
}

pub fn parse_cocycle(s: &str, max_dim: usize) -> Result<Cocycle> {
    cocycle_from_json(&parse(s)?, max_dim)
}

pub fn cocycle_to_string(c: &Cocycle) -> String {
    serde_json::to_string(&cocycle_to_json(c)).expect("plain data serializes")
}

pub fn map_space_to_json(m: &MapSpace) -> MapSpaceJson {
    MapSpaceJson {
        kind: m.kind,
        dim: m.dim(),
        basis: m.basis().iter().map(Matrix::row_vecs).collect(),
    }
}

/// Parses a subspace and checks its ambient dimension.
pub fn parse_subspace(s: &str, max_dim: usize) -> Result<Subspace> {
    let sub: Subspace = parse(s)?;
    check_dim(sub.ambient_dim(), max_dim)?;
    Ok(sub)
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    s.trim()
        .parse()
        .map_err(|e: exactlin::ParseRationalError| Error::Schema(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    const A3: &str = r#"{"dim":3,"label":"A3","products":[{"i":1,"j":2,"k":2,"out":{"3":"1"}}]}"#;

    #[test]
    fn canonical_a3() {
        let a = parse_algebra(A3, 10).unwrap();
        assert_eq!(a, catalog::a3());
        assert_eq!(algebra_to_string(&a), A3);
    }

    #[test]
    fn mirrored_input_is_canonicalized() {
        let s = r#"{"dim":3,"products":[{"i":2,"j":1,"k":2,"out":{"3":"-1","1":"0"}}]}"#;
        let a = parse_algebra(s, 10).unwrap();
        assert_eq!(a.basis_product(0, 1, 1), catalog::a3().basis_product(0, 1, 1));
    }

    #[test]
    fn inconsistent_triple_named() {
        let s = r#"{"dim":3,"products":[{"i":1,"j":2,"k":2,"out":{"3":"1"}},{"i":2,"j":1,"k":2,"out":{"3":"1"}}]}"#;
        match parse_algebra(s, 10) {
            Err(Error::InconsistentTriple { i: 2, j: 1, k: 2, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn malformed_json_reports_position() {
        match parse_algebra("{\"dim\": 3,\n \"products\": [", 10) {
            Err(Error::Json { line: 2, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn schema_violations() {
        for s in [
            r#"{"dim":3,"products":[],"extra":1}"#,
            r#"{"dim":3,"products":[{"i":0,"j":2,"k":2,"out":{}}]}"#,
            r#"{"dim":3,"products":[{"i":1,"j":2,"k":2,"out":{"4":"1"}}]}"#,
            r#"{"dim":3,"products":[{"i":1,"j":2,"k":2,"out":{"3":1}}]}"#,
        ] {
            assert!(matches!(parse_algebra(s, 10), Err(Error::Schema(_))), "{s}");
        }
        let bad_key = r#"{"dim":3,"products":[{"i":1,"j":2,"k":2,"out":{"x":"1"}}]}"#;
        assert!(matches!(parse_algebra(bad_key, 10), Err(Error::Json { .. } | Error::Schema(_))));
        assert!(matches!(
            parse_algebra(r#"{"dim":11}"#, 10),
            Err(Error::DimensionTooLarge { dim: 11, max: 10 })
        ));
    }

    #[test]
    fn lie_round_trip() {
        let l = catalog::lie_n4();
        let s = lie_to_string(&l);
        assert_eq!(s, r#"{"dim":4,"skew":"full","products":[{"i":1,"j":2,"k":3,"out":{"4":"1"}}]}"#);
        assert_eq!(parse_lie(&s, 10).unwrap(), l);
        assert!(parse_lie(r#"{"dim":4,"skew":"first-two","products":[]}"#, 10).is_err());
    }

    #[test]
    fn module_and_cocycle_round_trip() {
        let dm = DoubleModule::regular(&catalog::a3());
        let s = module_to_string(&dm);
        assert_eq!(parse_double_module(&s, 10).unwrap(), dm);
        for c in crate::cocycle::cocycle_space(&catalog::a3()).unwrap() {
            let s = cocycle_to_string(&c);
            assert_eq!(parse_cocycle(&s, 10).unwrap(), c);
        }
    }

    #[test]
    fn rationals() {
        assert_eq!(parse_rational("-3/6").unwrap(), Rational::new(-1, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("1.5").is_err());
    }
}
