//! 3-Lie algebras, the sub-adjacent bracket and 3-Lie modules.

use std::collections::BTreeMap;

use exactlin::{Matrix, Rational, ShapeError, Subspace, Vector};

use crate::algebra::{Accum, ThreeAlgebra, MAX_DIM};
use crate::error::{Error, Result};
use crate::report::AxiomReport;
use crate::sparse::{self, SparseOp, SparseVec};
use crate::structure::QuotientFrame;

/// Sorts three distinct indices, returning the permutation sign.
fn sort3(i: usize, j: usize, k: usize) -> (bool, (usize, usize, usize)) {
    let mut t = [i, j, k];
    let mut odd = false;
    for (a, b) in [(0, 1), (1, 2), (0, 1)] {
        if t[a] > t[b] {
            t.swap(a, b);
            odd = !odd;
        }
    }
    (odd, (t[0], t[1], t[2]))
}

/// A 3-ary bracket that is totally antisymmetric by construction: only
/// `i < j < k` brackets are supplied and the rest follow by permutation
/// signs.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ThreeLieAlgebra {
    dim: usize,
    label: Option<String>,
    table: Vec<SparseVec>,
}

impl ThreeLieAlgebra {
    pub fn zero(dim: usize) -> Self {
        ThreeLieAlgebra {
            dim,
            label: None,
            table: vec![SparseVec::new(); dim * dim * dim],
        }
    }

    /// Builds a bracket from 0-based entries in any argument order; entries
    /// reaching the same sorted triple must agree up to the permutation sign,
    /// and brackets with a repeated argument must vanish.
    pub fn from_brackets<I>(dim: usize, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = ((usize, usize, usize), Vec<Rational>)>,
    {
        let mut b = LieBuilder::new(dim, dim)?;
        for (t, v) in entries {
            if v.len() != dim {
                return Err(ShapeError::Length {
                    found: v.len(),
                    expected: dim,
                }
                .into());
            }
            b.insert(t, sparse::from_dense(&v))?;
        }
        Ok(b.finish())
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn set_label(&mut self, label: Option<String>) {
        self.label = label;
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn basis_bracket(&self, i: usize, j: usize, k: usize) -> &SparseVec {
        let n = self.dim;
        &self.table[(i * n + j) * n + k]
    }

    /// Nonzero brackets on sorted triples `i < j < k`.
    pub fn orbits(&self) -> impl Iterator<Item = ((usize, usize, usize), &SparseVec)> + '_ {
        let n = self.dim;
        (0..n).flat_map(move |i| {
            (i + 1..n).flat_map(move |j| {
                (j + 1..n).filter_map(move |k| {
                    let v = self.basis_bracket(i, j, k);
                    (!v.is_empty()).then_some(((i, j, k), v))
                })
            })
        })
    }

    pub fn is_abelian(&self) -> bool {
        self.table.iter().all(Vec::is_empty)
    }

    pub fn bracket_sparse(&self, x: &SparseVec, y: &SparseVec, z: &SparseVec) -> SparseVec {
        let mut acc = Accum::new(self.dim);
        for (i, a) in x {
            for (j, b) in y {
                if i == j {
                    continue;
                }
                let ab = a * b;
                for (k, c) in z {
                    let p = self.basis_bracket(*i, *j, *k);
                    if !p.is_empty() {
                        acc.add_scaled(&(&ab * c), p);
                    }
                }
            }
        }
        acc.finish()
    }

    pub fn bracket(&self, x: &[Rational], y: &[Rational], z: &[Rational]) -> Result<Vector> {
        for v in [x, y, z] {
            if v.len() != self.dim {
                return Err(ShapeError::Length {
                    found: v.len(),
                    expected: self.dim,
                }
                .into());
            }
        }
        let p = self.bracket_sparse(&sparse::from_dense(x), &sparse::from_dense(y), &sparse::from_dense(z));
        Ok(sparse::to_dense(&p, self.dim))
    }

    /// `[v, e_a, e_b]`
    fn first(&self, v: &SparseVec, a: usize, b: usize) -> SparseVec {
        let mut acc = Accum::new(self.dim);
        for (m, c) in v {
            acc.add_scaled(c, self.basis_bracket(*m, a, b));
        }
        acc.finish()
    }

    /// `[e_a, v, e_b]`
    fn second(&self, a: usize, v: &SparseVec, b: usize) -> SparseVec {
        let mut acc = Accum::new(self.dim);
        for (m, c) in v {
            acc.add_scaled(c, self.basis_bracket(a, *m, b));
        }
        acc.finish()
    }

    /// `[e_a, e_b, v]`
    fn third(&self, a: usize, b: usize, v: &SparseVec) -> SparseVec {
        let mut acc = Accum::new(self.dim);
        for (m, c) in v {
            acc.add_scaled(c, self.basis_bracket(a, b, *m));
        }
        acc.finish()
    }

    /// The Filippov identity
    /// `[[x1,x2,x3],x4,x5] = [[x1,x4,x5],x2,x3] + [x1,[x2,x4,x5],x3] + [x1,x2,[x3,x4,x5]]`
    /// on basis 5-tuples with `x1 < x2 < x3` and `x4 < x5`, which covers all
    /// of them by antisymmetry.
    pub fn check_filippov(&self) -> AxiomReport {
        self.filippov_impl(false)
    }

    pub fn is_filippov(&self) -> bool {
        self.filippov_impl(true).passed
    }

    /// Both sides are alternating in `(x1, x2, x3)` and in `(x4, x5)`, so
    /// only strictly increasing triples and pairs are visited; the first
    /// violation in lexicographic order is the same as over all tuples.
    /// When no `[e_x, e4, e5]` is nonzero, every term vanishes.
    fn filippov_impl(&self, stop_first: bool) -> AxiomReport {
        let n = self.dim;
        let mut rep = AxiomReport::new(&["Filippov"]);
        for x4 in 0..n {
            for x5 in x4 + 1..n {
                let live: Vec<bool> = (0..n).map(|x| !self.basis_bracket(x, x4, x5).is_empty()).collect();
                if !live.iter().any(|b| *b) {
                    continue;
                }
                for x1 in 0..n {
                    for x2 in x1 + 1..n {
                        for x3 in x2 + 1..n {
                            let b123 = self.basis_bracket(x1, x2, x3);
                            if b123.is_empty() && !(live[x1] || live[x2] || live[x3]) {
                                continue;
                            }
                            let lhs = self.first(b123, x4, x5);
                            let mut acc = Accum::new(n);
                            acc.add_sparse(&self.first(self.basis_bracket(x1, x4, x5), x2, x3));
                            acc.add_sparse(&self.second(x1, self.basis_bracket(x2, x4, x5), x3));
                            acc.add_sparse(&self.third(x1, x2, self.basis_bracket(x3, x4, x5)));
                            let rhs = acc.finish();
                            if lhs != rhs {
                                rep.push(
                                    "Filippov",
                                    &[x1, x2, x3, x4, x5],
                                    sparse::to_dense(&lhs, n),
                                    sparse::to_dense(&rhs, n),
                                );
                                if stop_first {
                                    return rep;
                                }
                            }
                        }
                    }
                }
            }
        }
        rep.sort();
        rep
    }

    /// `D[x,y,z] = [Dx,y,z] + [x,Dy,z] + [x,y,Dz]` on every basis triple.
    pub fn is_derivation(&self, d: &Matrix) -> bool {
        let n = self.dim;
        if d.rows() != n || d.cols() != n {
            return false;
        }
        let cols: Vec<SparseVec> = (0..n).map(|c| sparse::from_dense(&d.column(c))).collect();
        for i in 0..n {
            for j in i + 1..n {
                for k in 0..n {
                    let p = self.basis_bracket(i, j, k);
                    let lhs = sparse::from_dense(&d.mul_vec(&sparse::to_dense(p, n)));
                    let mut acc = Accum::new(n);
                    acc.add_sparse(&self.first(&cols[i], j, k));
                    acc.add_sparse(&self.second(i, &cols[j], k));
                    acc.add_sparse(&self.third(i, j, &cols[k]));
                    if lhs != acc.finish() {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// `[I, L, L] ⊆ I`; the other slots follow from total antisymmetry.
    pub fn is_ideal(&self, i: &Subspace) -> Result<bool> {
        if i.ambient_dim() != self.dim {
            return Err(ShapeError::Ambient {
                left: self.dim,
                right: i.ambient_dim(),
            }
            .into());
        }
        let n = self.dim;
        for v in i.basis_vectors() {
            let v = sparse::from_dense(&v);
            for a in 0..n {
                for b in a + 1..n {
                    let w = self.first(&v, a, b);
                    if !w.is_empty() && !i.contains(&sparse::to_dense(&w, n))? {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }

    /// Quotient by an ideal, using the same complement convention as the
    /// quotient of a 3-algebra.
    pub fn quotient(&self, i: &Subspace) -> Result<ThreeLieAlgebra> {
        if !self.is_ideal(i)? {
            return Err(Error::NotAnIdeal);
        }
        let frame = QuotientFrame::new(i);
        let m = frame.dim();
        let c = &frame.complement;
        let mut b = LieBuilder::new(m, m)?;
        for x in 0..m {
            for y in x + 1..m {
                for z in y + 1..m {
                    b.insert((x, y, z), frame.reduce(self.basis_bracket(c[x], c[y], c[z])))?;
                }
            }
        }
        Ok(b.finish())
    }
}

/// Collects 3-Lie brackets into canonical sorted-triple storage.
pub(crate) struct LieBuilder {
    dim: usize,
    out_len: usize,
    entries: BTreeMap<(usize, usize, usize), SparseVec>,
}

impl LieBuilder {
    pub(crate) fn new(dim: usize, out_len: usize) -> Result<Self> {
        if dim > MAX_DIM {
            return Err(Error::DimensionTooLarge { dim, max: MAX_DIM });
        }
        Ok(LieBuilder {
            dim,
            out_len,
            entries: BTreeMap::new(),
        })
    }

    pub(crate) fn insert(&mut self, (i, j, k): (usize, usize, usize), v: SparseVec) -> Result<()> {
        let n = self.dim;
        if i >= n || j >= n || k >= n {
            return Err(Error::Schema(format!(
                "triple ({},{},{}) outside 1..={n}",
                i + 1,
                j + 1,
                k + 1
            )));
        }
        if let Some((l, _)) = v.iter().find(|(l, _)| *l >= self.out_len) {
            return Err(Error::Schema(format!("output index {} outside 1..={}", l + 1, self.out_len)));
        }
        let bad = |reason: &str| Error::InconsistentTriple {
            i: i + 1,
            j: j + 1,
            k: k + 1,
            reason: reason.into(),
        };
        if i == j || j == k || i == k {
            return if v.is_empty() {
                Ok(())
            } else {
                Err(bad("brackets with a repeated argument must vanish"))
            };
        }
        let (odd, key) = sort3(i, j, k);
        let v = if odd { sparse::neg(&v) } else { v };
        match self.entries.get(&key) {
            Some(prev) if *prev != v => Err(bad("conflicts with an earlier entry (total antisymmetry)")),
            Some(_) => Ok(()),
            None => {
                self.entries.insert(key, v);
                Ok(())
            }
        }
    }

    pub(crate) fn finish(self) -> ThreeLieAlgebra {
        let n = self.dim;
        let mut table = vec![SparseVec::new(); n * n * n];
        for ((i, j, k), v) in self.entries {
            if v.is_empty() {
                continue;
            }
            let neg = sparse::neg(&v);
            for (p, even) in [
                ((i, j, k), true),
                ((j, k, i), true),
                ((k, i, j), true),
                ((j, i, k), false),
                ((i, k, j), false),
                ((k, j, i), false),
            ] {
                table[(p.0 * n + p.1) * n + p.2] = if even { v.clone() } else { neg.clone() };
            }
        }
        ThreeLieAlgebra {
            dim: n,
            label: None,
            table,
        }
    }
}

/// Whether [`sub_adjacent`] insists on a verified input.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SubAdjacentMode {
    /// Rejects inputs that fail the axioms and confirms the Filippov
    /// identity on the output.
    Strict,
    /// Builds the bracket for any input, with no checks.
    Unchecked,
}

/// The cyclic-sum bracket `[x1,x2,x3]_c = {x1,x2,x3} + {x2,x3,x1} + {x3,x1,x2}`.
pub fn sub_adjacent(a: &ThreeAlgebra, mode: SubAdjacentMode) -> Result<ThreeLieAlgebra> {
    if mode == SubAdjacentMode::Strict && !a.is_semi_associative() {
        return Err(Error::NotVerified("semi-associative 3-algebra"));
    }
    let n = a.dim();
    let mut b = LieBuilder::new(n, n)?;
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let mut acc = Accum::new(n);
                acc.add_sparse(a.basis_product(i, j, k));
                acc.add_sparse(a.basis_product(j, k, i));
                acc.add_sparse(a.basis_product(k, i, j));
                b.insert((i, j, k), acc.finish())?;
            }
        }
    }
    let mut l = b.finish();
    l.set_label(a.label().map(|s| format!("{s}_c")));
    if mode == SubAdjacentMode::Strict {
        let rep = l.check_filippov();
        if let Some(v) = rep.first_witness() {
            return Err(Error::Discrepancy(format!(
                "sub-adjacent bracket fails the Filippov identity at {:?}",
                v.witness
            )));
        }
    }
    Ok(l)
}

/// A module `(V, ρ)` over a 3-Lie algebra. `rho[i*n + j]` is the `m×m`
/// matrix of `ρ(e_i, e_j)`; antisymmetry is enforced on construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieModule {
    algebra: ThreeLieAlgebra,
    vdim: usize,
    rho: Vec<Matrix>,
}

impl LieModule {
    /// `rho` lists `ρ(e_i, e_j)` for ordered pairs (0-based); missing pairs
    /// are zero, and each entry must agree with its mirror.
    pub fn new(algebra: ThreeLieAlgebra, vdim: usize, rho: Vec<((usize, usize), Matrix)>) -> Result<Self> {
        let n = algebra.dim();
        let mut full = vec![Matrix::zeros(vdim, vdim); n * n];
        let mut seen = vec![false; n * n];
        for ((i, j), m) in rho {
            if i >= n || j >= n {
                return Err(Error::Schema(format!("pair ({},{}) outside 1..={n}", i + 1, j + 1)));
            }
            if m.rows() != vdim || m.cols() != vdim {
                return Err(Error::Schema(format!("matrix for ({},{}) is not {vdim}×{vdim}", i + 1, j + 1)));
            }
            if i == j && !m.is_zero() {
                return Err(Error::Schema(format!("rho({},{}) must vanish", i + 1, i + 1)));
            }
            let mirror = m.neg();
            for (idx, val) in [(i * n + j, m), (j * n + i, mirror)] {
                if seen[idx] && full[idx] != val {
                    return Err(Error::Schema(format!(
                        "rho({},{}) conflicts with antisymmetry",
                        i + 1,
                        j + 1
                    )));
                }
                seen[idx] = true;
                full[idx] = val;
            }
        }
        Ok(LieModule {
            algebra,
            vdim,
            rho: full,
        })
    }

    /// The adjoint module `ρ(x, y) = [x, y, ·]`.
    pub fn adjoint(l: &ThreeLieAlgebra) -> Self {
        let n = l.dim();
        let mut rho = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut m = Matrix::zeros(n, n);
                for k in 0..n {
                    for (r, c) in l.basis_bracket(i, j, k) {
                        m[(*r, k)] = c.clone();
                    }
                }
                rho.push(m);
            }
        }
        LieModule {
            algebra: l.clone(),
            vdim: n,
            rho,
        }
    }

    pub fn algebra(&self) -> &ThreeLieAlgebra {
        &self.algebra
    }

    pub fn vdim(&self) -> usize {
        self.vdim
    }

    pub fn rho(&self, i: usize, j: usize) -> &Matrix {
        &self.rho[i * self.algebra.dim() + j]
    }

    /// Both module identities on basis 4-tuples, without the cross-check.
    pub fn check_identities(&self) -> AxiomReport {
        let (n, m) = (self.algebra.dim(), self.vdim);
        let ops: Vec<SparseOp> = self.rho.iter().map(SparseOp::from_matrix).collect();
        let rho = |i: usize, j: usize| &ops[i * n + j];
        let rho_left = |v: &SparseVec, b: usize| {
            let mut out = SparseOp::zero(m, m);
            for (a, c) in v {
                out.add_scaled(c, rho(*a, b));
            }
            out
        };
        let mut rep = AxiomReport::new(&["rho-commutator", "rho-bracket"]);
        for x1 in 0..n {
            for x2 in 0..n {
                for x3 in 0..n {
                    let b123 = self.algebra.basis_bracket(x1, x2, x3);
                    for x4 in 0..n {
                        let t = [x1, x2, x3, x4];
                        let b124 = self.algebra.basis_bracket(x1, x2, x4);
                        let (r12, r34) = (rho(x1, x2), rho(x3, x4));
                        let lhs = r12.mul(r34).sub(&r34.mul(r12));
                        let rho_b123_4 = rho_left(b123, x4);
                        let rhs = rho_b123_4.sub(&rho_left(b124, x3));
                        if lhs != rhs {
                            rep.push("rho-commutator", &t, lhs.into_flat(), rhs.into_flat());
                        }
                        let rhs = r12
                            .mul(r34)
                            .add(&rho(x2, x3).mul(rho(x1, x4)))
                            .add(&rho(x3, x1).mul(rho(x2, x4)));
                        if rho_b123_4 != rhs {
                            rep.push("rho-bracket", &t, rho_b123_4.into_flat(), rhs.into_flat());
                        }
                    }
                }
            }
        }
        rep
    }

    /// The `(n+m)`-dimensional 3-Lie algebra
    /// `[x1+v1, x2+v2, x3+v3] = [x1,x2,x3] + ρ(x1,x2)v3 + ρ(x2,x3)v1 + ρ(x3,x1)v2`,
    /// algebra basis first.
    pub fn semidirect(&self) -> ThreeLieAlgebra {
        let (n, m) = (self.algebra.dim(), self.vdim);
        let mut b = LieBuilder::new(n + m, n + m).expect("dimension bounded by the inputs");
        for ((i, j, k), v) in self.algebra.orbits() {
            b.insert((i, j, k), v.clone()).expect("valid bracket");
        }
        for i in 0..n {
            for j in i + 1..n {
                let r = self.rho(i, j);
                for c in 0..m {
                    let col: SparseVec = (0..m)
                        .filter(|&row| !r[(row, c)].is_zero())
                        .map(|row| (n + row, r[(row, c)].clone()))
                        .collect();
                    b.insert((i, j, n + c), col).expect("valid bracket");
                }
            }
        }
        b.finish()
    }

    /// Checks both identities directly and confirms the verdict against the
    /// Filippov identity of [`semidirect`](Self::semidirect). Disagreement
    /// is an error.
    pub fn check(&self) -> Result<AxiomReport> {
        let rep = self.check_identities();
        let sd = self.semidirect().is_filippov();
        if sd != rep.passed {
            return Err(Error::Discrepancy(format!(
                "module identities {} but the semidirect bracket {} the Filippov identity",
                if rep.passed { "hold" } else { "fail" },
                if sd { "satisfies" } else { "violates" }
            )));
        }
        Ok(rep)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use exactlin::unit;

    #[test]
    fn sort3_signs() {
        assert_eq!(sort3(0, 1, 2), (false, (0, 1, 2)));
        assert_eq!(sort3(1, 0, 2), (true, (0, 1, 2)));
        assert_eq!(sort3(2, 0, 1), (false, (0, 1, 2)));
        assert_eq!(sort3(2, 1, 0), (true, (0, 1, 2)));
        assert_eq!(sort3(1, 2, 0), (false, (0, 1, 2)));
        assert_eq!(sort3(0, 2, 1), (true, (0, 1, 2)));
    }

    #[test]
    fn total_antisymmetry() {
        let l = catalog::lie_n4();
        let e = |i| unit(4, i);
        let p = l.bracket(&e(2), &e(0), &e(1)).unwrap();
        assert_eq!(p, e(3));
        let q = l.bracket(&e(0), &e(2), &e(1)).unwrap();
        assert_eq!(q, sparse::to_dense(&vec![(3, Rational::from(-1))], 4));
        assert!(l.bracket(&e(0), &e(0), &e(1)).unwrap().iter().all(Rational::is_zero));
    }

    #[test]
    fn filippov_examples() {
        assert!(ThreeLieAlgebra::zero(5).check_filippov().passed);
        assert!(catalog::lie_n4().check_filippov().passed);
        assert!(catalog::lie_e123_e1().check_filippov().passed);
        let rep = catalog::lie_not_filippov().check_filippov();
        assert!(!rep.passed);
        assert_eq!(rep.first_witness().unwrap().witness, vec![1, 2, 3, 2, 4]);
    }

    #[test]
    fn conflicting_brackets_rejected() {
        let v = sparse::to_dense(&vec![(0, Rational::one())], 3);
        assert!(ThreeLieAlgebra::from_brackets(3, [((0, 1, 2), v.clone()), ((1, 2, 0), v.clone())]).is_ok());
        assert!(ThreeLieAlgebra::from_brackets(3, [((0, 1, 2), v.clone()), ((1, 0, 2), v.clone())]).is_err());
        assert!(ThreeLieAlgebra::from_brackets(3, [((0, 0, 2), v)]).is_err());
    }

    #[test]
    fn sub_adjacent_examples() {
        let c = sub_adjacent(&catalog::a3(), SubAdjacentMode::Strict).unwrap();
        assert!(c.is_abelian());
        let c = sub_adjacent(&catalog::n4(), SubAdjacentMode::Strict).unwrap();
        assert_eq!(c, catalog::lie_n4().with_label("N4_c"));
        assert!(sub_adjacent(&ThreeAlgebra::zero(3), SubAdjacentMode::Strict).unwrap().is_abelian());
        assert!(matches!(
            sub_adjacent(&catalog::bad_e123_e1(), SubAdjacentMode::Strict),
            Err(Error::NotVerified(_))
        ));
        assert!(sub_adjacent(&catalog::bad_e123_e1(), SubAdjacentMode::Unchecked).is_ok());
    }

    #[test]
    fn lie_modules() {
        let l = catalog::lie_n4();
        let zero = LieModule::new(l.clone(), 2, vec![]).unwrap();
        assert!(zero.check().unwrap().passed);
        assert!(LieModule::adjoint(&l).check().unwrap().passed);
        let bad = LieModule::adjoint(&catalog::lie_not_filippov());
        assert!(!bad.check().unwrap().passed);
    }

    #[test]
    fn lie_quotient() {
        let l = catalog::lie_n4();
        let i = Subspace::coordinate(4, &[3]);
        assert!(l.is_ideal(&i).unwrap());
        assert!(l.quotient(&i).unwrap().is_abelian());
        assert!(!l.is_ideal(&Subspace::coordinate(4, &[0])).unwrap());
    }
}
