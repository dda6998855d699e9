//! Cocycles `θ : A ⊗ A ⊗ A → A*` and double extensions on `A ⊕ A*`.
//!
//! Elements of `A*` are coordinate vectors in the dual basis
//! `⟨e*_l, e_m⟩ = δ_lm`. The dual regular actions are negative transposes:
//! `(L*(a,b)ξ)_l = −Σ_k ξ_k c[a][b][l][k]` and
//! `(R*(a,b)ξ)_l = −Σ_k ξ_k c[l][a][b][k]`.

use exactlin::{Rational, RowReducer};

use crate::algebra::{Accum, SkewTableBuilder, ThreeAlgebra, MAX_DIM};
use crate::error::{Error, Result};
use crate::module::DoubleModule;
use crate::report::AxiomReport;
use crate::sparse::SparseVec;

pub const COCYCLE_IDS: [&str; 3] = ["cocycle-assoc", "cocycle-dual", "cocycle-exchange"];

/// A trilinear map into `A*`, antisymmetric in its first two arguments by
/// construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cocycle {
    algebra: ThreeAlgebra,
    theta: Vec<SparseVec>,
}

impl Cocycle {
    pub fn zero(algebra: ThreeAlgebra) -> Self {
        let n = algebra.dim();
        Cocycle {
            algebra,
            theta: vec![SparseVec::new(); n * n * n],
        }
    }

    /// 0-based `((i, j, k), θ{e_i,e_j,e_k})` entries, either orientation of
    /// the first two slots; mirrors must agree.
    pub fn new(algebra: ThreeAlgebra, entries: Vec<((usize, usize, usize), SparseVec)>) -> Result<Self> {
        let n = algebra.dim();
        let mut b = SkewTableBuilder::new(n, n);
        for (t, v) in entries {
            b.insert(t, v)?;
        }
        Ok(Cocycle {
            algebra,
            theta: b.into_table(),
        })
    }

    /// Reads a cocycle from its coordinates in the unknown ordering of
    /// [`cocycle_constraints`].
    pub fn from_coordinates(algebra: ThreeAlgebra, v: &[Rational]) -> Result<Self> {
        let sparse: SparseVec = crate::sparse::from_dense(v);
        Cocycle::from_sparse_coordinates(algebra, &sparse)
    }

    /// [`from_coordinates`](Self::from_coordinates) for a sorted sparse
    /// coordinate vector.
    pub fn from_sparse_coordinates(algebra: ThreeAlgebra, v: &SparseVec) -> Result<Self> {
        let n = algebra.dim();
        let pairs = pairs(n);
        let mut entries: Vec<((usize, usize, usize), SparseVec)> = Vec::new();
        for (idx, x) in v {
            let (p, k, l) = (idx / (n * n), idx / n % n, idx % n);
            let Some(&(i, j)) = pairs.get(p) else {
                return Err(Error::Schema(format!("cocycle coordinate {idx} out of range")));
            };
            match entries.last_mut() {
                Some((t, out)) if *t == (i, j, k) => out.push((l, x.clone())),
                _ => entries.push(((i, j, k), vec![(l, x.clone())])),
            }
        }
        Cocycle::new(algebra, entries)
    }

    pub fn algebra(&self) -> &ThreeAlgebra {
        &self.algebra
    }

    /// `θ{e_i, e_j, e_k}`
    pub fn value(&self, i: usize, j: usize, k: usize) -> &SparseVec {
        let n = self.algebra.dim();
        &self.theta[(i * n + j) * n + k]
    }

    /// Nonzero values on `i < j`, lexicographic.
    pub fn orbits(&self) -> impl Iterator<Item = ((usize, usize, usize), &SparseVec)> + '_ {
        let n = self.algebra.dim();
        (0..n).flat_map(move |i| {
            (i + 1..n).flat_map(move |j| {
                (0..n).filter_map(move |k| {
                    let v = self.value(i, j, k);
                    (!v.is_empty()).then_some(((i, j, k), v))
                })
            })
        })
    }

    /// The three cocycle identities on every basis 5-tuple `(x,y,z,w,u)`:
    ///
    /// ```text
    /// θ{x,{y,z,w},u} = θ{x,y,{z,w,u}}
    /// L*(x,y)θ{z,w,u} = −R*(x,u)θ{y,z,w}
    /// θ{x,{y,z,w},u} − θ{u,{y,z,w},x}
    ///     = θ{x,{u,z,w},y} + R*(x,u)θ{y,z,w} − R*(u,x)θ{y,z,w} − R*(x,y)θ{u,z,w}
    /// ```
    pub fn check(&self) -> AxiomReport {
        let a = &self.algebra;
        let n = a.dim();
        let mut rep = AxiomReport::new(&COCYCLE_IDS);
        // Supports of the products and of θ, indexed by slot.
        let mut p_first = vec![Vec::new(); n * n];
        let mut t_first = vec![Vec::new(); n * n];
        let mut t_third = vec![Vec::new(); n * n];
        let (mut p_row, mut p_mid, mut p_last) = (vec![Vec::new(); n], vec![Vec::new(); n], vec![Vec::new(); n]);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if !a.basis_product(i, j, k).is_empty() {
                        p_first[j * n + k].push(i);
                        p_row[j].push(i);
                        p_mid[k].push(i);
                        p_last[j].push(k);
                    }
                    if !self.value(i, j, k).is_empty() {
                        t_first[j * n + k].push(i);
                        t_third[i * n + j].push(k);
                    }
                }
            }
        }
        let mut stamp = vec![usize::MAX; n];
        let mut cand = Vec::with_capacity(n);
        let mut bufs = vec![vec![Rational::zero(); n]; 6];
        let mut round = 0;
        for z in 0..n {
            for w in 0..n {
                for y in 0..n {
                    let yzw = a.basis_product(y, z, w);
                    let th_yzw = self.value(y, z, w);
                    for u in 0..n {
                        let zwu = a.basis_product(z, w, u);
                        let uzw = a.basis_product(u, z, w);
                        let th_zwu = self.value(z, w, u);
                        let th_uzw = self.value(u, z, w);
                        if [yzw, zwu, uzw, th_yzw, th_zwu, th_uzw].iter().all(|v| v.is_empty()) {
                            continue;
                        }
                        // Every x outside these supports makes all terms vanish.
                        round += 1;
                        cand.clear();
                        let mut lists: Vec<&Vec<usize>> = Vec::new();
                        for (m, _) in yzw {
                            lists.push(&t_first[m * n + u]);
                            lists.push(&t_third[u * n + m]);
                        }
                        lists.extend(zwu.iter().map(|(m, _)| &t_first[y * n + m]));
                        lists.extend(uzw.iter().map(|(m, _)| &t_first[m * n + y]));
                        if !th_zwu.is_empty() {
                            lists.push(&p_row[y]);
                        }
                        if !th_yzw.is_empty() {
                            lists.push(&p_mid[u]);
                            lists.push(&p_last[u]);
                        }
                        if !th_uzw.is_empty() {
                            lists.push(&p_mid[y]);
                        }
                        for list in lists {
                            for &x in list {
                                if stamp[x] != round {
                                    stamp[x] = round;
                                    cand.push(x);
                                }
                            }
                        }
                        let one = Rational::one();
                        let neg1 = Rational::from(-1);
                        for &x in &cand {
                            for b in bufs.iter_mut() {
                                b.iter_mut().for_each(|c| *c = Rational::zero());
                            }
                            let [lhs1, rhs1, lhs2, rhs2, lhs3, rhs3] = &mut bufs[..] else { unreachable!() };
                            for (m, c) in yzw {
                                self.add_value(lhs1, c, x, *m, u);
                                self.add_value(lhs3, c, x, *m, u);
                                self.add_value(lhs3, &-c, u, *m, x);
                            }
                            for (m, c) in zwu {
                                self.add_value(rhs1, c, x, y, *m);
                            }
                            add_l_star(a, lhs2, &one, x, y, th_zwu);
                            add_r_star(a, rhs2, &neg1, x, u, th_yzw);
                            for (m, c) in uzw {
                                self.add_value(rhs3, c, x, *m, y);
                            }
                            add_r_star(a, rhs3, &one, x, u, th_yzw);
                            add_r_star(a, rhs3, &neg1, u, x, th_yzw);
                            add_r_star(a, rhs3, &neg1, x, y, th_uzw);
                            let t = [x, y, z, w, u];
                            for (id, (l, r)) in COCYCLE_IDS.iter().zip([(lhs1, rhs1), (lhs2, rhs2), (lhs3, rhs3)]) {
                                if l != r {
                                    rep.push(id, &t, l.clone(), r.clone());
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

    /// `buf += k θ{e_i, e_j, e_l}`
    fn add_value(&self, buf: &mut [Rational], k: &Rational, i: usize, j: usize, l: usize) {
        for (m, x) in self.value(i, j, l) {
            buf[*m] += k * x;
        }
    }
}

/// `buf += k L*(e_p, e_q) ξ`
fn add_l_star(a: &ThreeAlgebra, buf: &mut [Rational], k: &Rational, p: usize, q: usize, xi: &SparseVec) {
    if xi.is_empty() {
        return;
    }
    for (l, b) in buf.iter_mut().enumerate() {
        let d = dot(a.basis_product(p, q, l), xi);
        if !d.is_zero() {
            *b -= k * &d;
        }
    }
}

/// `buf += k R*(e_p, e_q) ξ`
fn add_r_star(a: &ThreeAlgebra, buf: &mut [Rational], k: &Rational, p: usize, q: usize, xi: &SparseVec) {
    if xi.is_empty() {
        return;
    }
    for (l, b) in buf.iter_mut().enumerate() {
        let d = dot(a.basis_product(l, p, q), xi);
        if !d.is_zero() {
            *b -= k * &d;
        }
    }
}

/// `L*(e_a, e_b) ξ`
pub fn l_star(a: &ThreeAlgebra, p: usize, q: usize, xi: &SparseVec) -> SparseVec {
    let n = a.dim();
    let mut acc = Accum::new(n);
    if xi.is_empty() {
        return SparseVec::new();
    }
    for l in 0..n {
        acc.add(l, -dot(a.basis_product(p, q, l), xi));
    }
    acc.finish()
}

/// `R*(e_a, e_b) ξ`
pub fn r_star(a: &ThreeAlgebra, p: usize, q: usize, xi: &SparseVec) -> SparseVec {
    let n = a.dim();
    let mut acc = Accum::new(n);
    if xi.is_empty() {
        return SparseVec::new();
    }
    for l in 0..n {
        acc.add(l, -dot(a.basis_product(l, p, q), xi));
    }
    acc.finish()
}

fn dot(u: &SparseVec, v: &SparseVec) -> Rational {
    let (mut i, mut j) = (0, 0);
    let mut s = Rational::zero();
    while i < u.len() && j < v.len() {
        match u[i].0.cmp(&v[j].0) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                s += &u[i].1 * &v[j].1;
                i += 1;
                j += 1;
            }
        }
    }
    s
}

/// Ordered pairs `i < j`, lexicographic.
fn pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect()
}

fn pair_index(n: usize, i: usize, j: usize) -> usize {
    // pairs before row i: Σ_{r<i} (n − 1 − r)
    i * (2 * n - i - 1) / 2 + (j - i - 1)
}

fn unknown(n: usize, p: usize, k: usize, l: usize) -> usize {
    (p * n + k) * n + l
}

/// Number of unknowns `θ[i<j][k][l]`.
pub fn cocycle_unknowns(n: usize) -> usize {
    n * (n.saturating_sub(1)) / 2 * n * n
}

/// One linear equation per output coordinate, over the unknown coordinates
/// of `θ`.
struct SymVec {
    n: usize,
    rows: Vec<Vec<(usize, Rational)>>,
}

impl SymVec {
    fn new(n: usize) -> Self {
        SymVec {
            n,
            rows: vec![Vec::new(); n],
        }
    }

    /// `+ c · θ{e_i, e_j, e_k}`
    fn theta(&mut self, i: usize, j: usize, k: usize, c: &Rational) {
        if i == j || c.is_zero() {
            return;
        }
        let n = self.n;
        let (p, c) = if i < j {
            (pair_index(n, i, j), c.clone())
        } else {
            (pair_index(n, j, i), -c)
        };
        for l in 0..n {
            self.rows[l].push((unknown(n, p, k, l), c.clone()));
        }
    }

    /// `+ c · θ{e_x, w, e_u}`
    fn theta_mid(&mut self, x: usize, w: &SparseVec, u: usize, c: &Rational) {
        for (m, v) in w {
            self.theta(x, *m, u, &(c * v));
        }
    }

    /// `+ c · θ{e_x, e_y, w}`
    fn theta_last(&mut self, x: usize, y: usize, w: &SparseVec, c: &Rational) {
        for (m, v) in w {
            self.theta(x, y, *m, &(c * v));
        }
    }

    /// `+ c · M θ{e_i,e_j,e_k}` for the dual action whose `l`-th output
    /// pairs `θ` with `coeffs(l)` and negates.
    fn dual_action<'a, F>(&mut self, coeffs: F, (i, j, k): (usize, usize, usize), c: &Rational)
    where
        F: Fn(usize) -> &'a SparseVec,
    {
        if i == j || c.is_zero() {
            return;
        }
        let n = self.n;
        let (p, c) = if i < j {
            (pair_index(n, i, j), -c)
        } else {
            (pair_index(n, j, i), c.clone())
        };
        for l in 0..n {
            for (kk, v) in coeffs(l) {
                self.rows[l].push((unknown(n, p, k, *kk), &c * v));
            }
        }
    }

    fn drain_into(&mut self, out: &mut Vec<Vec<(usize, Rational)>>) {
        for row in self.rows.iter_mut() {
            row.sort_by_key(|e| e.0);
            let mut r: Vec<(usize, Rational)> = Vec::with_capacity(row.len());
            for (c, v) in row.drain(..) {
                match r.last_mut() {
                    Some((last, x)) if *last == c => *x += v,
                    _ => r.push((c, v)),
                }
            }
            r.retain(|(_, v)| !v.is_zero());
            if !r.is_empty() {
                out.push(r);
            }
        }
    }
}

/// The linear constraints on `θ`, one row per 5-tuple, identity and output
/// coordinate, in that lexicographic order; all-zero rows are dropped.
/// Unknown `θ{e_i,e_j,e_k}_l` with `i < j` sits at `(p·n + k)·n + l`, `p` the
/// lexicographic rank of the pair `(i, j)`.
pub fn cocycle_constraints(a: &ThreeAlgebra) -> Vec<Vec<(usize, Rational)>> {
    let n = a.dim();
    let one = Rational::one();
    let neg1 = Rational::from(-1);
    let l_nonzero: Vec<bool> = (0..n * n)
        .map(|pq| (0..n).any(|l| !a.basis_product(pq / n, pq % n, l).is_empty()))
        .collect();
    let r_nonzero: Vec<bool> = (0..n * n)
        .map(|pq| (0..n).any(|l| !a.basis_product(l, pq / n, pq % n).is_empty()))
        .collect();
    let lcoef = |p: usize, q: usize| move |l: usize| a.basis_product(p, q, l);
    let rcoef = |p: usize, q: usize| move |l: usize| a.basis_product(l, p, q);
    let mut out = Vec::new();
    let mut s = SymVec::new(n);
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                for w in 0..n {
                    let yzw = a.basis_product(y, z, w);
                    for u in 0..n {
                        let zwu = a.basis_product(z, w, u);
                        let uzw = a.basis_product(u, z, w);
                        let any_r = r_nonzero[x * n + u] || r_nonzero[u * n + x] || r_nonzero[x * n + y];
                        if yzw.is_empty() && zwu.is_empty() && uzw.is_empty() && !any_r && !l_nonzero[x * n + y] {
                            continue;
                        }
                        s.theta_mid(x, yzw, u, &one);
                        s.theta_last(x, y, zwu, &neg1);
                        s.drain_into(&mut out);

                        s.dual_action(lcoef(x, y), (z, w, u), &one);
                        s.dual_action(rcoef(x, u), (y, z, w), &one);
                        s.drain_into(&mut out);

                        s.theta_mid(x, yzw, u, &one);
                        s.theta_mid(u, yzw, x, &neg1);
                        s.theta_mid(x, uzw, y, &neg1);
                        s.dual_action(rcoef(x, u), (y, z, w), &neg1);
                        s.dual_action(rcoef(u, x), (y, z, w), &one);
                        s.dual_action(rcoef(x, y), (u, z, w), &one);
                        s.drain_into(&mut out);
                    }
                }
            }
        }
    }
    out
}

/// Canonical basis of the space of cocycles: the kernel of
/// [`cocycle_constraints`] in reduced echelon form.
pub fn cocycle_space(a: &ThreeAlgebra) -> Result<Vec<Cocycle>> {
    if a.dim() > MAX_DIM {
        return Err(Error::DimensionTooLarge { dim: a.dim(), max: MAX_DIM });
    }
    let n = a.dim();
    let mut rows = cocycle_constraints(a);
    // Short rows first keeps fill-in low; the reduced form does not depend
    // on the order.
    rows.sort_by_key(Vec::len);
    let mut red = RowReducer::new(cocycle_unknowns(n));
    for row in &rows {
        red.insert_sparse(row);
    }
    // The kernel read off the echelon form is not itself reduced; one more
    // sparse pass gives the canonical basis.
    let mut kernel = RowReducer::new(cocycle_unknowns(n));
    for v in red.into_rref().kernel_sparse() {
        kernel.insert_sparse(&v);
    }
    kernel
        .into_sparse_rref()
        .iter()
        .map(|v| Cocycle::from_sparse_coordinates(a.clone(), v))
        .collect()
}

/// `A ⊕ A*` with
/// `{x1+ξ1, x2+ξ2, x3+ξ3} = {x1,x2,x3} + θ{x1,x2,x3} + L*(x1,x2)ξ3 − R*(x1,x3)ξ2 + R*(x2,x3)ξ1`,
/// with no checks.
pub fn double_extension_unchecked(c: &Cocycle) -> ThreeAlgebra {
    twist(DoubleModule::regular(&c.algebra).dual_unchecked().semidirect_unchecked(), c)
}

/// Adds `θ` into the `A*` block of `A ⋉ A*`, given as `base`.
pub(crate) fn twist(mut base: ThreeAlgebra, c: &Cocycle) -> ThreeAlgebra {
    let n = c.algebra.dim();
    for ((i, j, k), v) in c.orbits() {
        let shifted: SparseVec = v.iter().map(|(l, x)| (n + l, x.clone())).collect();
        base.add_to_product(i, j, k, &shifted);
    }
    base
}

/// The double extension. The cocycle must satisfy its identities over a
/// semi-associative algebra; a result failing the axioms is returned as a
/// discrepancy.
pub fn double_extension(c: &Cocycle) -> Result<ThreeAlgebra> {
    if !c.algebra.is_semi_associative() {
        return Err(Error::NotVerified("semi-associative 3-algebra"));
    }
    if !c.check().passed {
        return Err(Error::NotVerified("cocycle"));
    }
    let out = double_extension_unchecked(c);
    let rep = out.check_semi_associative();
    if let Some(v) = rep.first_witness() {
        return Err(Error::Discrepancy(format!(
            "double extension fails {} at {:?}",
            v.axiom, v.witness
        )));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn pair_indexing() {
        for n in 0..6 {
            for (p, (i, j)) in pairs(n).into_iter().enumerate() {
                assert_eq!(pair_index(n, i, j), p);
            }
        }
    }

    #[test]
    fn zero_cocycle_passes() {
        assert!(Cocycle::zero(catalog::a3()).check().passed);
    }

    #[test]
    fn abelian_space_is_unconstrained() {
        for n in 0..=3 {
            let a = ThreeAlgebra::zero(n);
            assert_eq!(cocycle_space(&a).unwrap().len(), n * n * n * n.saturating_sub(1) / 2);
        }
    }

    #[test]
    fn a3_space() {
        let a = catalog::a3();
        let basis = cocycle_space(&a).unwrap();
        assert_eq!(basis.len(), 4);
        for c in &basis {
            assert!(c.check().passed);
            assert!(double_extension(c).is_ok());
        }
    }

    #[test]
    fn zero_extension_is_dual_semidirect() {
        let a = catalog::a3();
        let ext = double_extension(&Cocycle::zero(a.clone())).unwrap();
        let sd = DoubleModule::regular(&a).dual().unwrap().semidirect().unwrap().algebra;
        assert_eq!(ext, sd);
        let z = double_extension(&Cocycle::zero(ThreeAlgebra::zero(3))).unwrap();
        assert!(z.is_abelian());
    }

    #[test]
    fn random_dense_theta_fails() {
        let a = catalog::a3();
        let mut entries = Vec::new();
        for (i, j) in pairs(3) {
            for k in 0..3 {
                entries.push(((i, j, k), vec![(0, Rational::one()), (2, Rational::from(i as i64 - k as i64))]));
            }
        }
        let c = Cocycle::new(a, entries).unwrap();
        let rep = c.check();
        assert!(!rep.passed);
        assert!(matches!(double_extension(&c), Err(Error::NotVerified(_))));
    }
}
