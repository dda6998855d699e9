//! Multiplication operators and spaces of linear maps: derivations,
//! central derivations, the centroid and operator spans.

use std::fmt;

use exactlin::{Matrix, Rational, RowReducer, ShapeError, Subspace};
use serde::{Deserialize, Serialize};

use crate::algebra::ThreeAlgebra;
use crate::error::{Error, Result};
use crate::sparse::{self, SparseVec};
use crate::structure::{center, derived_algebra};

fn check_vec(a: &ThreeAlgebra, v: &[Rational]) -> Result<()> {
    if v.len() != a.dim() {
        return Err(ShapeError::Length {
            found: v.len(),
            expected: a.dim(),
        }
        .into());
    }
    Ok(())
}

fn from_columns(n: usize, cols: impl Fn(usize) -> SparseVec) -> Matrix {
    let mut m = Matrix::zeros(n, n);
    for k in 0..n {
        for (r, c) in cols(k) {
            m[(r, k)] = c;
        }
    }
    m
}

/// `L(x, y) z = {x, y, z}`; column `k` is the image of `e_k`.
pub fn left_mult(a: &ThreeAlgebra, x: &[Rational], y: &[Rational]) -> Result<Matrix> {
    check_vec(a, x)?;
    check_vec(a, y)?;
    let (x, y) = (sparse::from_dense(x), sparse::from_dense(y));
    Ok(from_columns(a.dim(), |k| {
        a.product_sparse(&x, &y, &vec![(k, Rational::one())])
    }))
}

/// `R(x, y) z = {z, x, y}`.
pub fn right_mult(a: &ThreeAlgebra, x: &[Rational], y: &[Rational]) -> Result<Matrix> {
    check_vec(a, x)?;
    check_vec(a, y)?;
    let (x, y) = (sparse::from_dense(x), sparse::from_dense(y));
    Ok(from_columns(a.dim(), |k| {
        a.product_sparse(&vec![(k, Rational::one())], &x, &y)
    }))
}

/// `S(x, y) = L(x, y) − R(x, y)`.
pub fn s_map(a: &ThreeAlgebra, x: &[Rational], y: &[Rational]) -> Result<Matrix> {
    Ok(left_mult(a, x, y)?.sub(&right_mult(a, x, y)?))
}

/// `L(e_i, e_j)`.
pub fn left_basis(a: &ThreeAlgebra, i: usize, j: usize) -> Matrix {
    from_columns(a.dim(), |k| a.basis_product(i, j, k).clone())
}

/// `R(e_i, e_j)`.
pub fn right_basis(a: &ThreeAlgebra, i: usize, j: usize) -> Matrix {
    from_columns(a.dim(), |k| a.basis_product(k, i, j).clone())
}

fn columns(d: &Matrix) -> Vec<SparseVec> {
    (0..d.cols()).map(|c| sparse::from_dense(&d.column(c))).collect()
}

fn apply(d: &Matrix, v: &SparseVec) -> SparseVec {
    let mut out = vec![Rational::zero(); d.rows()];
    for (j, c) in v {
        for (r, o) in out.iter_mut().enumerate() {
            let m = &d[(r, *j)];
            if !m.is_zero() {
                *o += c * m;
            }
        }
    }
    sparse::from_dense(&out)
}

/// `D{e_i,e_j,e_k} = {De_i,e_j,e_k} + {e_i,De_j,e_k} + {e_i,e_j,De_k}` on
/// every basis triple.
pub fn is_derivation(a: &ThreeAlgebra, d: &Matrix) -> bool {
    let n = a.dim();
    if d.rows() != n || d.cols() != n {
        return false;
    }
    let cols = columns(d);
    for i in 0..n {
        for j in i + 1..n {
            for k in 0..n {
                let lhs = apply(d, a.basis_product(i, j, k));
                let mut acc = crate::algebra::Accum::new(n);
                acc.add_sparse(&a.left(&cols[i], j, k));
                acc.add_sparse(&a.mid(i, &cols[j], k));
                acc.add_sparse(&a.right(i, j, &cols[k]));
                if lhs != acc.finish() {
                    return false;
                }
            }
        }
    }
    true
}

/// `φ{x,y,z} = {φx,y,z}`, `= {x,φy,z}` and `= {x,y,φz}` on every basis
/// triple, per slot.
pub fn centroid_slots(a: &ThreeAlgebra, phi: &Matrix) -> [bool; 3] {
    let n = a.dim();
    let mut ok = [true; 3];
    if phi.rows() != n || phi.cols() != n {
        return [false; 3];
    }
    let cols = columns(phi);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let lhs = apply(phi, a.basis_product(i, j, k));
                ok[0] &= lhs == a.left(&cols[i], j, k);
                ok[1] &= lhs == a.mid(i, &cols[j], k);
                ok[2] &= lhs == a.right(i, j, &cols[k]);
            }
        }
    }
    ok
}

/// Membership in the centroid: slots one and three.
pub fn is_centroid(a: &ThreeAlgebra, phi: &Matrix) -> bool {
    let s = centroid_slots(a, phi);
    s[0] && s[2]
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MapKind {
    Der,
    DerC,
    Centroid,
    LSpan,
    RSpan,
    SSpan,
    TSpan,
}

impl fmt::Display for MapKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// A subspace of `n×n` matrices, stored as a canonical subspace of
/// `Q^{n²}` via row-major flattening.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MapSpace {
    pub kind: MapKind,
    n: usize,
    space: Subspace,
}

impl MapSpace {
    pub fn new(kind: MapKind, n: usize, space: Subspace) -> Result<Self> {
        if space.ambient_dim() != n * n {
            return Err(ShapeError::Length {
                found: space.ambient_dim(),
                expected: n * n,
            }
            .into());
        }
        Ok(MapSpace { kind, n, space })
    }

    pub fn span(kind: MapKind, n: usize, maps: &[Matrix]) -> Self {
        let mut red = RowReducer::new(n * n);
        for m in maps {
            red.insert_dense(m.as_slice());
        }
        let space = Subspace::span(n * n, &red.into_rref().rows).expect("width n²");
        MapSpace { kind, n, space }
    }

    pub fn algebra_dim(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn space(&self) -> &Subspace {
        &self.space
    }

    pub fn basis(&self) -> Vec<Matrix> {
        self.space
            .basis_vectors()
            .into_iter()
            .map(|v| Matrix::from_flat(self.n, self.n, v).expect("n² entries"))
            .collect()
    }

    pub fn contains(&self, m: &Matrix) -> bool {
        m.rows() == self.n && m.cols() == self.n && self.space.contains(m.as_slice()).expect("n² entries")
    }

    pub fn is_subspace_of(&self, other: &MapSpace) -> Result<bool> {
        Ok(self.space.is_subspace_of(&other.space)?)
    }

    pub fn intersect(&self, other: &MapSpace, kind: MapKind) -> Result<MapSpace> {
        MapSpace::new(kind, self.n, self.space.intersect(&other.space)?)
    }

    /// `[X, Y] ∈ self` for all basis elements.
    pub fn is_commutator_closed(&self) -> bool {
        let b = self.basis();
        b.iter().enumerate().all(|(i, x)| b[i + 1..].iter().all(|y| self.contains(&x.commutator(y))))
    }
}

/// Row builder for systems whose unknowns are the entries `D[r][c]` at
/// index `r·n + c`. One vector equation contributes one row per output
/// coordinate.
struct MapSystem {
    n: usize,
    red: RowReducer,
    rows: Vec<Vec<(usize, Rational)>>,
}

impl MapSystem {
    fn new(n: usize) -> Self {
        MapSystem {
            n,
            red: RowReducer::new(n * n),
            rows: vec![Vec::new(); n],
        }
    }

    /// Adds `c · D[r][col]` to output coordinate `l`.
    fn term(&mut self, l: usize, r: usize, col: usize, c: Rational) {
        self.rows[l].push((r * self.n + col, c));
    }

    /// `+ D · v` (the image of a fixed vector under the unknown map).
    fn image_of(&mut self, v: &SparseVec, sign: &Rational) {
        for (m, c) in v {
            for l in 0..self.n {
                self.term(l, l, *m, sign * c);
            }
        }
    }

    /// `+ Σ_m D[m][col] · w_m` where `w_m` is the product with `e_m`
    /// substituted for `D e_col`.
    fn substituted<F: Fn(usize) -> SparseVec>(&mut self, col: usize, w: F, sign: &Rational) {
        for m in 0..self.n {
            for (l, c) in w(m) {
                self.term(l, m, col, sign * &c);
            }
        }
    }

    fn end(&mut self) {
        for row in self.rows.iter_mut().filter(|r| !r.is_empty()) {
            self.red.insert_sparse(row);
            row.clear();
        }
    }

    /// Extra scalar constraint row.
    fn scalar(&mut self, row: Vec<(usize, Rational)>) {
        self.red.insert_sparse(&row);
    }

    fn solve(self, kind: MapKind) -> MapSpace {
        let n = self.n;
        let kernel = self.red.into_rref().kernel();
        MapSpace {
            kind,
            n,
            space: Subspace::span(n * n, &kernel).expect("width n²"),
        }
    }
}

fn add_derivation_rows(a: &ThreeAlgebra, sys: &mut MapSystem) {
    let n = a.dim();
    let (one, minus) = (Rational::one(), Rational::from(-1));
    // (j, i, k) rows are negatives of (i, j, k) rows and i = j rows vanish
    for i in 0..n {
        for j in i + 1..n {
            for k in 0..n {
                sys.image_of(a.basis_product(i, j, k), &one);
                sys.substituted(i, |m| a.basis_product(m, j, k).clone(), &minus);
                sys.substituted(j, |m| a.basis_product(i, m, k).clone(), &minus);
                sys.substituted(k, |m| a.basis_product(i, j, m).clone(), &minus);
                sys.end();
            }
        }
    }
}

/// `Der(A)`, the solution space of the Leibniz rule.
pub fn derivation_space(a: &ThreeAlgebra) -> MapSpace {
    let mut sys = MapSystem::new(a.dim());
    add_derivation_rows(a, &mut sys);
    sys.solve(MapKind::Der)
}

/// Derivations with `D(A) ⊆ Z(A)` and `D(A¹) = 0`.
pub fn central_derivation_space(a: &ThreeAlgebra) -> MapSpace {
    let n = a.dim();
    let mut sys = MapSystem::new(n);
    add_derivation_rows(a, &mut sys);
    // every column of D is annihilated by each functional vanishing on Z
    for w in center(a).annihilator().basis_vectors() {
        for c in 0..n {
            sys.scalar(
                w.iter()
                    .enumerate()
                    .filter(|(_, x)| !x.is_zero())
                    .map(|(r, x)| (r * n + c, x.clone()))
                    .collect(),
            );
        }
    }
    for u in derived_algebra(a).basis_vectors() {
        for r in 0..n {
            sys.scalar(
                u.iter()
                    .enumerate()
                    .filter(|(_, x)| !x.is_zero())
                    .map(|(c, x)| (r * n + c, x.clone()))
                    .collect(),
            );
        }
    }
    sys.solve(MapKind::DerC)
}

/// `Γ(A)`: maps with `φ{x,y,z} = {φx,y,z} = {x,y,φz}`.
pub fn centroid_space(a: &ThreeAlgebra) -> MapSpace {
    let n = a.dim();
    let mut sys = MapSystem::new(n);
    let (one, minus) = (Rational::one(), Rational::from(-1));
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let p = a.basis_product(i, j, k);
                sys.image_of(p, &one);
                sys.substituted(i, |m| a.basis_product(m, j, k).clone(), &minus);
                sys.end();
                sys.image_of(p, &one);
                sys.substituted(k, |m| a.basis_product(i, j, m).clone(), &minus);
                sys.end();
            }
        }
    }
    sys.solve(MapKind::Centroid)
}

/// Span of `L`, `R`, `S = L − R` or `T = L ∪ R` over basis pairs.
pub fn span_space(a: &ThreeAlgebra, kind: MapKind) -> Result<MapSpace> {
    let n = a.dim();
    let mut gens = Vec::new();
    for i in 0..n {
        for j in 0..n {
            match kind {
                MapKind::LSpan => gens.push(left_basis(a, i, j)),
                MapKind::RSpan => gens.push(right_basis(a, i, j)),
                MapKind::SSpan => gens.push(left_basis(a, i, j).sub(&right_basis(a, i, j))),
                MapKind::TSpan => {
                    gens.push(left_basis(a, i, j));
                    gens.push(right_basis(a, i, j));
                }
                other => return Err(Error::Schema(format!("{other} is not an operator span"))),
            }
        }
    }
    Ok(MapSpace::span(kind, n, &gens))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use exactlin::unit;

    fn e(i: usize) -> Vec<Rational> {
        unit(3, i - 1)
    }

    #[test]
    fn operators_on_a3() {
        let a = catalog::a3();
        let l = left_mult(&a, &e(1), &e(2)).unwrap();
        let mut want = Matrix::zeros(3, 3);
        want[(2, 1)] = Rational::one();
        assert_eq!(l, want);
        assert!(left_mult(&a, &e(2), &e(2)).unwrap().is_zero());
        let s = s_map(&a, &e(1), &e(2)).unwrap();
        assert_eq!(s.mul_vec(&e(2)), sparse::to_dense(&vec![(2, Rational::from(2))], 3));
        assert!(left_mult(&a, &unit(2, 0), &e(1)).is_err());
    }

    #[test]
    fn derivation_membership() {
        let a = catalog::a3();
        assert!(is_derivation(&a, &Matrix::zeros(3, 3)));
        assert!(is_derivation(&a, &s_map(&a, &e(1), &e(2)).unwrap()));
        assert!(!is_derivation(&a, &Matrix::identity(3)));
    }

    #[test]
    fn a3_map_spaces() {
        let a = catalog::a3();
        let der = derivation_space(&a);
        assert_eq!(der.dim(), 5);
        assert!(der.basis().iter().all(|d| is_derivation(&a, d)));
        assert!(der.is_commutator_closed());
        let derc = central_derivation_space(&a);
        assert_eq!(derc.dim(), 2);
        assert!(derc.is_subspace_of(&der).unwrap());
        let gamma = centroid_space(&a);
        assert_eq!(gamma.dim(), 3);
        assert!(gamma.contains(&Matrix::identity(3)));
        assert_eq!(gamma.intersect(&der, MapKind::DerC).unwrap(), derc);
        let l = span_space(&a, MapKind::LSpan).unwrap();
        assert_eq!(l.dim(), 1);
        assert!(span_space(&a, MapKind::SSpan).unwrap().is_subspace_of(&der).unwrap());
    }

    #[test]
    fn abelian_spaces_are_everything() {
        let a = ThreeAlgebra::zero(3);
        assert_eq!(derivation_space(&a).dim(), 9);
        assert_eq!(central_derivation_space(&a).dim(), 9);
        assert_eq!(centroid_space(&a).dim(), 9);
        for k in [MapKind::LSpan, MapKind::RSpan, MapKind::SSpan, MapKind::TSpan] {
            assert_eq!(span_space(&a, k).unwrap().dim(), 0);
        }
        assert!(span_space(&a, MapKind::Der).is_err());
    }

    #[test]
    fn n4_derivations_pass_leibniz() {
        let a = catalog::n4();
        let der = derivation_space(&a);
        assert!(der.basis().iter().all(|d| is_derivation(&a, d)));
        assert!(der.dim() > 0);
    }
}
