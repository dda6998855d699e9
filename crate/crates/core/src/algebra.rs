use std::collections::BTreeMap;

use exactlin::{Rational, ShapeError, Vector};

use crate::error::{Error, Result};
use crate::report::AxiomReport;
use crate::sparse::{self, SparseVec};

/// Hard ceiling on dimensions accepted from any constructor. Keeps dense
/// n³ tables bounded for untrusted input.
pub const MAX_DIM: usize = 64;

/// Accumulates a sparse result without allocating for zero coordinates.
pub(crate) struct Accum(Vec<Option<Rational>>);

impl Accum {
    pub(crate) fn new(n: usize) -> Self {
        Accum(vec![None; n])
    }

    pub(crate) fn add(&mut self, i: usize, x: Rational) {
        match &mut self.0[i] {
            Some(y) => *y += x,
            slot => *slot = Some(x),
        }
    }

    pub(crate) fn add_scaled(&mut self, k: &Rational, v: &SparseVec) {
        if k.is_zero() {
            return;
        }
        for (i, x) in v {
            self.add(*i, k * x);
        }
    }

    pub(crate) fn add_sparse(&mut self, v: &SparseVec) {
        for (i, x) in v {
            self.add(*i, x.clone());
        }
    }

    pub(crate) fn finish(self) -> SparseVec {
        self.0
            .into_iter()
            .enumerate()
            .filter_map(|(i, x)| x.filter(|x| !x.is_zero()).map(|x| (i, x)))
            .collect()
    }
}

/// Collects `(i, j, k) ↦ vector` entries into canonical `i < j` storage,
/// rejecting contradictory input.
#[derive(Default)]
pub(crate) struct SkewTableBuilder {
    dim: usize,
    out_len: usize,
    entries: BTreeMap<(usize, usize, usize), SparseVec>,
}

impl SkewTableBuilder {
    pub(crate) fn new(dim: usize, out_len: usize) -> Self {
        SkewTableBuilder {
            dim,
            out_len,
            entries: BTreeMap::new(),
        }
    }

    /// 0-based indices; either orientation of the first two slots.
    pub(crate) fn insert(&mut self, (i, j, k): (usize, usize, usize), value: SparseVec) -> Result<()> {
        let n = self.dim;
        if i >= n || j >= n || k >= n {
            return Err(Error::Schema(format!(
                "triple ({},{},{}) outside 1..={n}",
                i + 1,
                j + 1,
                k + 1
            )));
        }
        if let Some((l, _)) = value.iter().find(|(l, _)| *l >= self.out_len) {
            return Err(Error::Schema(format!(
                "output index {} outside 1..={}",
                l + 1,
                self.out_len
            )));
        }
        if i == j {
            if value.is_empty() {
                return Ok(());
            }
            return Err(Error::InconsistentTriple {
                i: i + 1,
                j: j + 1,
                k: k + 1,
                reason: "repeated first two arguments must give zero".into(),
            });
        }
        let (key, value) = if i < j {
            ((i, j, k), value)
        } else {
            ((j, i, k), sparse::neg(&value))
        };
        match self.entries.get(&key) {
            Some(prev) if *prev != value => Err(Error::InconsistentTriple {
                i: i + 1,
                j: j + 1,
                k: k + 1,
                reason: "conflicts with an earlier entry (antisymmetry in the first two slots)".into(),
            }),
            Some(_) => Ok(()),
            None => {
                self.entries.insert(key, value);
                Ok(())
            }
        }
    }

    /// Full n³ table with the antisymmetric partners filled in.
    pub(crate) fn into_table(self) -> Vec<SparseVec> {
        let n = self.dim;
        let mut table = vec![SparseVec::new(); n * n * n];
        for ((i, j, k), v) in self.entries {
            if v.is_empty() {
                continue;
            }
            table[(j * n + i) * n + k] = sparse::neg(&v);
            table[(i * n + j) * n + k] = v;
        }
        table
    }
}

/// A finite-dimensional 3-algebra given by structure constants
/// `{e_i, e_j, e_k} = Σ_l c[i][j][k][l] e_l`.
///
/// Only the `i < j` half is ever supplied; the `j > i` half is its negative
/// and `i = j` products vanish, so skew-symmetry in the first two arguments
/// holds by construction.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ThreeAlgebra {
    dim: usize,
    label: Option<String>,
    table: Vec<SparseVec>,
}

impl ThreeAlgebra {
    /// The abelian algebra of the given dimension.
    pub fn zero(dim: usize) -> Self {
        ThreeAlgebra {
            dim,
            label: None,
            table: vec![SparseVec::new(); dim * dim * dim],
        }
    }

    /// Builds an algebra from 0-based `((i, j, k), coefficients)` entries.
    /// Entries with `i > j` are read through antisymmetry; an entry and its
    /// mirror must agree.
    pub fn from_products<I>(dim: usize, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = ((usize, usize, usize), Vec<Rational>)>,
    {
        if dim > MAX_DIM {
            return Err(Error::DimensionTooLarge { dim, max: MAX_DIM });
        }
        let mut b = SkewTableBuilder::new(dim, dim);
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
        Ok(ThreeAlgebra {
            dim,
            label: None,
            table: b.into_table(),
        })
    }

    pub(crate) fn from_builder(dim: usize, b: SkewTableBuilder) -> Self {
        ThreeAlgebra {
            dim,
            label: None,
            table: b.into_table(),
        }
    }

    /// Adds `v` to `{e_i, e_j, e_k}` and subtracts it from `{e_j, e_i, e_k}`.
    pub(crate) fn add_to_product(&mut self, i: usize, j: usize, k: usize, v: &SparseVec) {
        assert_ne!(i, j, "repeated first arguments stay zero");
        let n = self.dim;
        for (idx, sign) in [((i * n + j) * n + k, false), ((j * n + i) * n + k, true)] {
            let mut acc = Accum::new(n);
            acc.add_sparse(&self.table[idx]);
            if sign {
                acc.add_sparse(&sparse::neg(v));
            } else {
                acc.add_sparse(v);
            }
            self.table[idx] = acc.finish();
        }
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

    /// `{e_i, e_j, e_k}` as a sparse vector (0-based indices).
    pub fn basis_product(&self, i: usize, j: usize, k: usize) -> &SparseVec {
        let n = self.dim;
        &self.table[(i * n + j) * n + k]
    }

    /// Nonzero products in canonical order: `(i, j, k)` with `i < j`,
    /// lexicographic.
    pub fn orbits(&self) -> impl Iterator<Item = ((usize, usize, usize), &SparseVec)> + '_ {
        let n = self.dim;
        (0..n).flat_map(move |i| {
            (i + 1..n).flat_map(move |j| {
                (0..n).filter_map(move |k| {
                    let v = self.basis_product(i, j, k);
                    (!v.is_empty()).then_some(((i, j, k), v))
                })
            })
        })
    }

    pub fn is_abelian(&self) -> bool {
        self.table.iter().all(Vec::is_empty)
    }

    /// `{x, y, z}` for sparse arguments.
    pub fn product_sparse(&self, x: &SparseVec, y: &SparseVec, z: &SparseVec) -> SparseVec {
        let mut acc = Accum::new(self.dim);
        for (i, a) in x {
            for (j, b) in y {
                if i == j {
                    continue;
                }
                let ab = a * b;
                for (k, c) in z {
                    let p = self.basis_product(*i, *j, *k);
                    if !p.is_empty() {
                        acc.add_scaled(&(&ab * c), p);
                    }
                }
            }
        }
        acc.finish()
    }

    /// The trilinear product `{x, y, z}`.
    pub fn triple_product(&self, x: &[Rational], y: &[Rational], z: &[Rational]) -> Result<Vector> {
        for v in [x, y, z] {
            if v.len() != self.dim {
                return Err(ShapeError::Length {
                    found: v.len(),
                    expected: self.dim,
                }
                .into());
            }
        }
        let p = self.product_sparse(&sparse::from_dense(x), &sparse::from_dense(y), &sparse::from_dense(z));
        Ok(sparse::to_dense(&p, self.dim))
    }

    /// `{e_a, v, e_b}`
    pub fn mid(&self, a: usize, v: &SparseVec, b: usize) -> SparseVec {
        let mut acc = Accum::new(self.dim);
        for (m, c) in v {
            acc.add_scaled(c, self.basis_product(a, *m, b));
        }
        acc.finish()
    }

    /// `{e_a, e_b, v}`
    pub fn right(&self, a: usize, b: usize, v: &SparseVec) -> SparseVec {
        let mut acc = Accum::new(self.dim);
        for (m, c) in v {
            acc.add_scaled(c, self.basis_product(a, b, *m));
        }
        acc.finish()
    }

    /// `{v, e_a, e_b}`
    pub fn left(&self, v: &SparseVec, a: usize, b: usize) -> SparseVec {
        let mut acc = Accum::new(self.dim);
        for (m, c) in v {
            acc.add_scaled(c, self.basis_product(*m, a, b));
        }
        acc.finish()
    }

    /// `buf += k {e_i, e_j, e_k}`
    fn accumulate(&self, buf: &mut [Rational], k: &Rational, i: usize, j: usize, l: usize) {
        for (m, x) in self.basis_product(i, j, l) {
            buf[*m] += k * x;
        }
    }

    /// Verifies both mixing identities on every basis 5-tuple; skew-symmetry
    /// is structural. By multilinearity a pass certifies the whole algebra.
    pub fn check_semi_associative(&self) -> AxiomReport {
        self.check_impl(false)
    }

    /// Like [`check_semi_associative`](Self::check_semi_associative) but
    /// stops at the first violation.
    pub fn is_semi_associative(&self) -> bool {
        self.check_impl(true).passed
    }

    /// Loops over `(x3, x4, x2, x5)` and only visits the `x1` that occur in
    /// some nonzero product with the inner results; every other `x1` makes
    /// all three sides vanish. Violations are sorted afterwards.
    fn check_impl(&self, stop_first: bool) -> AxiomReport {
        let n = self.dim;
        let mut rep = AxiomReport::new(&["E21", "E22", "E23"]);
        // first[j*n+k] = {i : {e_i,e_j,e_k} != 0}, third[i*n+j] = {k : ...}
        let mut first = vec![Vec::new(); n * n];
        let mut third = vec![Vec::new(); n * n];
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if !self.basis_product(i, j, k).is_empty() {
                        first[j * n + k].push(i);
                        third[i * n + j].push(k);
                    }
                }
            }
        }
        let mut stamp = vec![usize::MAX; n];
        let mut cand = Vec::with_capacity(n);
        let mut lhs = vec![Rational::zero(); n];
        let mut assoc = vec![Rational::zero(); n];
        let mut exch = vec![Rational::zero(); n];
        let mut round = 0;
        for x3 in 0..n {
            for x4 in 0..n {
                for x2 in 0..n {
                    let in234 = self.basis_product(x2, x3, x4);
                    for x5 in 0..n {
                        let in345 = self.basis_product(x3, x4, x5);
                        let in534 = self.basis_product(x5, x3, x4);
                        if in234.is_empty() && in345.is_empty() && in534.is_empty() {
                            continue;
                        }
                        round += 1;
                        cand.clear();
                        let lists = in234
                            .iter()
                            .flat_map(|(m, _)| [&first[m * n + x5], &third[x5 * n + m]])
                            .chain(in534.iter().map(|(m, _)| &first[m * n + x2]))
                            .chain(in345.iter().map(|(m, _)| &first[x2 * n + m]));
                        for list in lists {
                            for &x1 in list {
                                if stamp[x1] != round {
                                    stamp[x1] = round;
                                    cand.push(x1);
                                }
                            }
                        }
                        for &x1 in &cand {
                            for buf in [&mut lhs, &mut assoc, &mut exch] {
                                buf.iter_mut().for_each(|c| *c = Rational::zero());
                            }
                            for (m, c) in in234 {
                                self.accumulate(&mut lhs, c, x1, *m, x5);
                                self.accumulate(&mut exch, c, x5, *m, x1);
                            }
                            for (m, c) in in534 {
                                self.accumulate(&mut exch, c, x1, *m, x2);
                            }
                            for (m, c) in in345 {
                                self.accumulate(&mut assoc, c, x1, x2, *m);
                            }
                            let t = [x1, x2, x3, x4, x5];
                            if lhs != assoc {
                                rep.push("E22", &t, lhs.clone(), assoc.clone());
                            }
                            if lhs != exch {
                                rep.push("E23", &t, lhs.clone(), exch.clone());
                            }
                            if stop_first && !rep.passed {
                                return rep;
                            }
                        }
                    }
                }
            }
        }
        rep.sort();
        rep
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use exactlin::unit;

    #[test]
    fn a3_products() {
        let a = catalog::a3();
        let e = |i| unit(3, i);
        assert_eq!(a.triple_product(&e(0), &e(1), &e(1)).unwrap(), e(2));
        assert_eq!(a.triple_product(&e(1), &e(0), &e(1)).unwrap(), sparse::to_dense(&vec![(2, Rational::from(-1))], 3));
        let x: Vec<Rational> = e(0).iter().zip(e(1)).map(|(a, b)| a + b).collect();
        assert_eq!(a.triple_product(&x, &e(1), &e(1)).unwrap(), e(2));
        assert!(a.triple_product(&x, &x, &e(1)).unwrap().iter().all(Rational::is_zero));
    }

    #[test]
    fn dimension_mismatch() {
        let a = catalog::a3();
        assert!(a.triple_product(&unit(2, 0), &unit(3, 0), &unit(3, 0)).is_err());
    }

    #[test]
    fn mirrored_entries_must_agree() {
        let one = vec![Rational::from(1), Rational::zero()];
        let minus = vec![Rational::from(-1), Rational::zero()];
        assert!(ThreeAlgebra::from_products(2, [((0, 1, 0), one.clone()), ((1, 0, 0), minus)]).is_ok());
        let err = ThreeAlgebra::from_products(2, [((0, 1, 0), one.clone()), ((1, 0, 0), one.clone())]);
        assert!(matches!(err, Err(Error::InconsistentTriple { i: 2, j: 1, k: 1, .. })));
        assert!(ThreeAlgebra::from_products(2, [((1, 1, 0), one)]).is_err());
    }

    #[test]
    fn a3_passes_and_tampered_tensor_fails() {
        assert!(catalog::a3().check_semi_associative().passed);
        let rep = catalog::bad_e123_e1().check_semi_associative();
        assert!(!rep.passed);
        let v = rep.first_witness().unwrap();
        assert_eq!(v.axiom, "E22");
        assert_eq!(v.witness, vec![2, 1, 2, 3, 3]);
        assert_eq!(v.lhs, sparse::to_dense(&vec![(0, Rational::from(-1))], 3));
        assert!(v.rhs.iter().all(Rational::is_zero));
    }

    #[test]
    fn degenerate_dimensions() {
        for n in 0..=2 {
            let a = ThreeAlgebra::zero(n);
            assert!(a.check_semi_associative().passed);
            assert!(a.is_abelian());
        }
    }
}
