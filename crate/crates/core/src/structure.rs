//! Derived algebra, center, ideals, quotients and homomorphisms.

use exactlin::{nullspace, unit, Matrix, Rational, RowReducer, ShapeError, Subspace};

use crate::algebra::{SkewTableBuilder, ThreeAlgebra};
use crate::error::{Error, Result};
use crate::sparse::{self, SparseVec};

fn check_ambient(a: &ThreeAlgebra, s: &Subspace) -> Result<()> {
    if s.ambient_dim() != a.dim() {
        return Err(ShapeError::Ambient {
            left: a.dim(),
            right: s.ambient_dim(),
        }
        .into());
    }
    Ok(())
}

fn sparse_basis(s: &Subspace) -> Vec<SparseVec> {
    s.basis_vectors().iter().map(|v| sparse::from_dense(v)).collect()
}

fn contains_sparse(s: &Subspace, v: &SparseVec) -> bool {
    v.is_empty() || s.contains(&sparse::to_dense(v, s.ambient_dim())).expect("ambient checked")
}

/// `A¹`, the span of all products.
pub fn derived_algebra(a: &ThreeAlgebra) -> Subspace {
    let n = a.dim();
    let mut red = RowReducer::new(n);
    for (_, v) in a.orbits() {
        red.insert_sparse(v);
    }
    Subspace::span(n, &red.into_rref().rows).expect("rows have width n")
}

/// Collects conditions `Σ_i x_i w_i = 0` on an unknown `x ∈ Qⁿ`, one group
/// (one vector equation) at a time, and solves them.
struct Vanishing {
    red: RowReducer,
    rows: Vec<Vec<(usize, Rational)>>,
}

impl Vanishing {
    fn new(n: usize) -> Self {
        Vanishing {
            red: RowReducer::new(n),
            rows: vec![Vec::new(); n],
        }
    }

    fn add(&mut self, i: usize, w: &SparseVec) {
        for (l, c) in w {
            self.rows[*l].push((i, c.clone()));
        }
    }

    fn end_group(&mut self) {
        for row in self.rows.iter_mut().filter(|r| !r.is_empty()) {
            self.red.insert_sparse(row);
            row.clear();
        }
    }

    fn solve(self) -> Subspace {
        let n = self.red.cols();
        Subspace::span(n, &self.red.into_rref().kernel()).expect("kernel vectors have width n")
    }
}

/// `Z(A) = {x : {x,A,A} = {A,A,x} = 0}`.
pub fn center(a: &ThreeAlgebra) -> Subspace {
    let n = a.dim();
    let mut sys = Vanishing::new(n);
    for p in 0..n {
        for q in 0..n {
            for i in 0..n {
                sys.add(i, a.basis_product(i, p, q));
            }
            sys.end_group();
            for i in 0..n {
                sys.add(i, a.basis_product(p, q, i));
            }
            sys.end_group();
        }
    }
    sys.solve()
}

/// Centralizer of `V`: `{x : {x,V,A} = {V,A,x} = 0}`.
pub fn centralizer(a: &ThreeAlgebra, v: &Subspace) -> Result<Subspace> {
    check_ambient(a, v)?;
    let n = a.dim();
    let mut sys = Vanishing::new(n);
    for b in sparse_basis(v) {
        for p in 0..n {
            for i in 0..n {
                sys.add(i, &a.mid(i, &b, p));
            }
            sys.end_group();
            for i in 0..n {
                sys.add(i, &a.left(&b, p, i));
            }
            sys.end_group();
        }
    }
    Ok(sys.solve())
}

/// `{B,B,B} ⊆ B`.
pub fn is_subalgebra(a: &ThreeAlgebra, b: &Subspace) -> Result<bool> {
    check_ambient(a, b)?;
    let bs = sparse_basis(b);
    for x in &bs {
        for y in &bs {
            for z in &bs {
                if !contains_sparse(b, &a.product_sparse(x, y, z)) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// `{A,A,B} ⊆ B` and `{A,B,A} ⊆ B`; the first slot follows from the second
/// by antisymmetry.
pub fn is_ideal(a: &ThreeAlgebra, b: &Subspace) -> Result<bool> {
    check_ambient(a, b)?;
    let n = a.dim();
    for v in sparse_basis(b) {
        for p in 0..n {
            for q in 0..n {
                if !contains_sparse(b, &a.right(p, q, &v)) || !contains_sparse(b, &a.mid(p, &v, q)) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Span of `{X, Y, Z}` over three subspaces.
pub fn triple_span(a: &ThreeAlgebra, x: &Subspace, y: &Subspace, z: &Subspace) -> Result<Subspace> {
    for s in [x, y, z] {
        check_ambient(a, s)?;
    }
    let n = a.dim();
    let (xs, ys, zs) = (sparse_basis(x), sparse_basis(y), sparse_basis(z));
    let mut red = RowReducer::new(n);
    for u in &xs {
        for v in &ys {
            for w in &zs {
                red.insert_sparse(&a.product_sparse(u, v, w));
            }
        }
    }
    Ok(Subspace::span(n, &red.into_rref().rows)?)
}

fn require_ideals(a: &ThreeAlgebra, ideals: &[&Subspace]) -> Result<()> {
    for i in ideals {
        if !is_ideal(a, i)? {
            return Err(Error::NotAnIdeal);
        }
    }
    Ok(())
}

fn ensure_ideal(a: &ThreeAlgebra, s: Subspace, what: &str) -> Result<Subspace> {
    if is_ideal(a, &s)? {
        Ok(s)
    } else {
        Err(Error::Discrepancy(format!("{what} of ideals is not an ideal: {:?}", s.basis())))
    }
}

pub fn ideal_sum(a: &ThreeAlgebra, i1: &Subspace, i2: &Subspace) -> Result<Subspace> {
    require_ideals(a, &[i1, i2])?;
    ensure_ideal(a, i1.sum(i2)?, "sum")
}

pub fn ideal_intersect(a: &ThreeAlgebra, i1: &Subspace, i2: &Subspace) -> Result<Subspace> {
    require_ideals(a, &[i1, i2])?;
    ensure_ideal(a, i1.intersect(i2)?, "intersection")
}

pub fn ideal_product(a: &ThreeAlgebra, i1: &Subspace, i2: &Subspace, i3: &Subspace) -> Result<Subspace> {
    require_ideals(a, &[i1, i2, i3])?;
    ensure_ideal(a, triple_span(a, i1, i2, i3)?, "product")
}

/// Linear map between algebras; column `j` of `map` is the image of `e_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraMorphism {
    pub source: ThreeAlgebra,
    pub target: ThreeAlgebra,
    pub map: Matrix,
}

impl AlgebraMorphism {
    pub fn new(source: ThreeAlgebra, target: ThreeAlgebra, map: Matrix) -> Result<Self> {
        if map.rows() != target.dim() || map.cols() != source.dim() {
            return Err(ShapeError::Length {
                found: map.rows() * map.cols(),
                expected: target.dim() * source.dim(),
            }
            .into());
        }
        Ok(AlgebraMorphism { source, target, map })
    }

    pub fn identity(a: ThreeAlgebra) -> Self {
        let map = Matrix::identity(a.dim());
        AlgebraMorphism {
            source: a.clone(),
            target: a,
            map,
        }
    }

    fn image_of(&self, v: &SparseVec) -> SparseVec {
        let mut acc = crate::algebra::Accum::new(self.target.dim());
        for (j, c) in v {
            for r in 0..self.map.rows() {
                let m = &self.map[(r, *j)];
                if !m.is_zero() {
                    acc.add(r, c * m);
                }
            }
        }
        acc.finish()
    }

    /// `f{e_i,e_j,e_k} = {f e_i, f e_j, f e_k}` on every basis triple.
    pub fn is_homomorphism(&self) -> bool {
        let n = self.source.dim();
        let cols: Vec<SparseVec> = (0..n).map(|j| self.image_of(&vec![(j, Rational::one())])).collect();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let lhs = self.image_of(self.source.basis_product(i, j, k));
                    let rhs = self.target.product_sparse(&cols[i], &cols[j], &cols[k]);
                    if lhs != rhs {
                        return false;
                    }
                }
            }
        }
        true
    }

    pub fn kernel(&self) -> Subspace {
        nullspace(&self.map)
    }

    pub fn image(&self) -> Subspace {
        Subspace::column_space(&self.map)
    }

    /// For a homomorphism, returns the kernel and image after confirming the
    /// kernel is an ideal of the source and the image a subalgebra of the
    /// target.
    pub fn kernel_and_image(&self) -> Result<(Subspace, Subspace)> {
        if !self.is_homomorphism() {
            return Err(Error::NotVerified("algebra homomorphism"));
        }
        let (k, im) = (self.kernel(), self.image());
        if !is_ideal(&self.source, &k)? {
            return Err(Error::Discrepancy(format!("kernel {:?} is not an ideal", k.basis())));
        }
        if !is_subalgebra(&self.target, &im)? {
            return Err(Error::Discrepancy(format!("image {:?} is not a subalgebra", im.basis())));
        }
        Ok((k, im))
    }
}

/// Complement indices and projection for a quotient by `i`: the non-pivot
/// standard basis vectors represent the quotient, and column `j` of the
/// projection holds the non-pivot coordinates of `e_j` reduced modulo `i`.
pub(crate) struct QuotientFrame {
    pub(crate) complement: Vec<usize>,
    pub(crate) ideal: Subspace,
}

impl QuotientFrame {
    pub(crate) fn new(i: &Subspace) -> Self {
        let n = i.ambient_dim();
        let mut is_pivot = vec![false; n];
        for &p in i.pivots() {
            is_pivot[p] = true;
        }
        QuotientFrame {
            complement: (0..n).filter(|&c| !is_pivot[c]).collect(),
            ideal: i.clone(),
        }
    }

    pub(crate) fn dim(&self) -> usize {
        self.complement.len()
    }

    /// Quotient coordinates of a vector of the ambient space.
    pub(crate) fn reduce(&self, v: &SparseVec) -> SparseVec {
        if v.is_empty() {
            return SparseVec::new();
        }
        let n = self.ideal.ambient_dim();
        let r = self.ideal.residual(&sparse::to_dense(v, n)).expect("ambient checked");
        self.complement
            .iter()
            .enumerate()
            .filter(|(_, &c)| !r[c].is_zero())
            .map(|(q, &c)| (q, r[c].clone()))
            .collect()
    }

    pub(crate) fn projection(&self) -> Matrix {
        let n = self.ideal.ambient_dim();
        let mut m = Matrix::zeros(self.dim(), n);
        for j in 0..n {
            for (q, x) in self.reduce(&sparse::from_dense(&unit(n, j))) {
                m[(q, j)] = x;
            }
        }
        m
    }
}

/// `A/I` with the projection `A → A/I`.
pub fn quotient(a: &ThreeAlgebra, i: &Subspace) -> Result<(ThreeAlgebra, AlgebraMorphism)> {
    if !is_ideal(a, i)? {
        return Err(Error::NotAnIdeal);
    }
    let frame = QuotientFrame::new(i);
    let m = frame.dim();
    let c = &frame.complement;
    let mut b = SkewTableBuilder::new(m, m);
    for x in 0..m {
        for y in x + 1..m {
            for z in 0..m {
                let v = frame.reduce(a.basis_product(c[x], c[y], c[z]));
                if !v.is_empty() {
                    b.insert((x, y, z), v)?;
                }
            }
        }
    }
    let mut q = ThreeAlgebra::from_builder(m, b);
    if let Some(l) = a.label() {
        q.set_label(Some(format!("{l}/I")));
    }
    let proj = AlgebraMorphism::new(a.clone(), q.clone(), frame.projection())?;
    if !proj.is_homomorphism() {
        return Err(Error::Discrepancy("quotient projection is not a homomorphism".into()));
    }
    Ok((q, proj))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn e(n: usize, idx: &[usize]) -> Subspace {
        Subspace::coordinate(n, &idx.iter().map(|i| i - 1).collect::<Vec<_>>())
    }

    #[test]
    fn a3_derived_and_center() {
        let a = catalog::a3();
        assert_eq!(derived_algebra(&a), e(3, &[3]));
        assert_eq!(center(&a), e(3, &[3]));
    }

    #[test]
    fn abelian_center_is_everything() {
        let a = ThreeAlgebra::zero(4);
        assert!(derived_algebra(&a).is_zero());
        assert!(center(&a).is_full());
        assert!(centralizer(&a, &Subspace::full(4)).unwrap().is_full());
    }

    #[test]
    fn n4_derived_inside_center() {
        let a = catalog::n4();
        assert_eq!(derived_algebra(&a), e(4, &[4]));
        assert_eq!(center(&a), e(4, &[4]));
    }

    #[test]
    fn centralizer_of_whole_space_is_center() {
        for a in [catalog::a3(), catalog::n4()] {
            let n = a.dim();
            assert_eq!(centralizer(&a, &Subspace::full(n)).unwrap(), center(&a));
            assert!(centralizer(&a, &Subspace::zero(n)).unwrap().is_full());
        }
    }

    #[test]
    fn ideals_of_a3() {
        let a = catalog::a3();
        assert!(is_ideal(&a, &e(3, &[3])).unwrap());
        assert!(is_ideal(&a, &Subspace::full(3)).unwrap());
        assert!(is_ideal(&a, &Subspace::zero(3)).unwrap());
        assert!(!is_ideal(&a, &e(3, &[1])).unwrap());
        assert!(is_subalgebra(&a, &e(3, &[1])).unwrap());
        assert!(!is_subalgebra(&a, &e(3, &[1, 2])).unwrap());
    }

    #[test]
    fn ideal_operations() {
        let a = catalog::a3();
        let i = e(3, &[3]);
        assert_eq!(ideal_sum(&a, &i, &Subspace::zero(3)).unwrap(), i);
        assert_eq!(ideal_intersect(&a, &i, &i).unwrap(), i);
        assert!(ideal_product(&a, &i, &Subspace::full(3), &Subspace::full(3)).unwrap().is_zero());
        assert!(matches!(ideal_sum(&a, &e(3, &[1]), &i), Err(Error::NotAnIdeal)));
    }

    #[test]
    fn quotients() {
        let a = catalog::a3();
        let (q, p) = quotient(&a, &e(3, &[3])).unwrap();
        assert_eq!(q.dim(), 2);
        assert!(q.is_abelian());
        assert_eq!(p.kernel(), e(3, &[3]));
        assert!(p.kernel_and_image().is_ok());

        let (q, _) = quotient(&a, &Subspace::full(3)).unwrap();
        assert_eq!(q.dim(), 0);

        let (q, p) = quotient(&a, &Subspace::zero(3)).unwrap();
        assert_eq!(q.basis_product(0, 1, 1), a.basis_product(0, 1, 1));
        assert_eq!(p.map, Matrix::identity(3));
        assert!(matches!(quotient(&a, &e(3, &[1])), Err(Error::NotAnIdeal)));
    }

    #[test]
    fn homomorphisms() {
        let a = catalog::a3();
        let id = AlgebraMorphism::identity(a.clone());
        assert!(id.is_homomorphism());
        assert!(id.kernel().is_zero());
        let swap = Matrix::from_i64(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, 1]]);
        let f = AlgebraMorphism::new(a.clone(), a, swap).unwrap();
        assert!(!f.is_homomorphism());
        assert!(matches!(f.kernel_and_image(), Err(Error::NotVerified(_))));
    }
}
