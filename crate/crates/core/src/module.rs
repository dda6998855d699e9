//! Double modules, semidirect products and the induced 3-Lie module.

use std::cell::OnceCell;

use exactlin::Matrix;

use crate::algebra::{SkewTableBuilder, ThreeAlgebra};
use crate::error::{Error, Result};
use crate::lie::{sub_adjacent, LieModule, SubAdjacentMode};
use crate::maps::{left_basis, right_basis};
use crate::report::AxiomReport;
use crate::sparse::{SparseOp, SparseVec};

/// Identity ids checked by [`DoubleModule::check`], in report order.
pub const MODULE_IDS: [&str; 8] = [
    "phi-nested",
    "psi-shift",
    "psi-nested",
    "psi-square",
    "psi-exchange",
    "mixed-psi-phi",
    "mixed-phi-psi",
    "mixed-nested",
];

/// Identity ids checked by [`DoubleModule::check_derived`].
pub const DERIVED_IDS: [&str; 10] = [
    "assoc-v1",
    "assoc-v2",
    "assoc-v3",
    "assoc-v4",
    "assoc-v5",
    "exchange-v1",
    "exchange-v2",
    "exchange-v3",
    "exchange-v4",
    "exchange-v5",
];

/// A pair of bilinear actions `φ, ψ : A × A → End(V)`, with `φ`
/// antisymmetric by construction. Matrices act on column vectors of `V`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DoubleModule {
    algebra: ThreeAlgebra,
    vdim: usize,
    phi: Vec<Matrix>,
    psi: Vec<Matrix>,
}

fn check_square(m: &Matrix, vdim: usize, what: &str, i: usize, j: usize) -> Result<()> {
    if m.rows() != vdim || m.cols() != vdim {
        return Err(Error::Schema(format!(
            "{what}({},{}) is {}×{}, expected {vdim}×{vdim}",
            i + 1,
            j + 1,
            m.rows(),
            m.cols()
        )));
    }
    Ok(())
}

impl DoubleModule {
    /// Builds a module from 0-based `((i, j), matrix)` entries. `phi`
    /// entries are read through antisymmetry; `psi` lists ordered pairs.
    /// Missing pairs are zero; repeated pairs must agree.
    pub fn new(
        algebra: ThreeAlgebra,
        vdim: usize,
        phi: Vec<((usize, usize), Matrix)>,
        psi: Vec<((usize, usize), Matrix)>,
    ) -> Result<Self> {
        let n = algebra.dim();
        let mut full_phi = vec![Matrix::zeros(vdim, vdim); n * n];
        let mut full_psi = full_phi.clone();
        let mut seen = vec![false; n * n];
        let out_of_range = |i: usize, j: usize| Error::Schema(format!("pair ({},{}) outside 1..={n}", i + 1, j + 1));
        for ((i, j), m) in phi {
            if i >= n || j >= n {
                return Err(out_of_range(i, j));
            }
            check_square(&m, vdim, "phi", i, j)?;
            if i == j {
                if !m.is_zero() {
                    return Err(Error::Schema(format!("phi({},{}) must vanish", i + 1, i + 1)));
                }
                continue;
            }
            let mirror = m.neg();
            for (idx, val) in [(i * n + j, m), (j * n + i, mirror)] {
                if seen[idx] && full_phi[idx] != val {
                    return Err(Error::Schema(format!("phi({},{}) conflicts with antisymmetry", i + 1, j + 1)));
                }
                seen[idx] = true;
                full_phi[idx] = val;
            }
        }
        let mut seen = vec![false; n * n];
        for ((i, j), m) in psi {
            if i >= n || j >= n {
                return Err(out_of_range(i, j));
            }
            check_square(&m, vdim, "psi", i, j)?;
            let idx = i * n + j;
            if seen[idx] && full_psi[idx] != m {
                return Err(Error::Schema(format!("psi({},{}) given twice with different values", i + 1, j + 1)));
            }
            seen[idx] = true;
            full_psi[idx] = m;
        }
        Ok(DoubleModule {
            algebra,
            vdim,
            phi: full_phi,
            psi: full_psi,
        })
    }

    /// The zero actions on `Q^vdim`.
    pub fn zero(algebra: ThreeAlgebra, vdim: usize) -> Self {
        let n = algebra.dim();
        DoubleModule {
            algebra,
            vdim,
            phi: vec![Matrix::zeros(vdim, vdim); n * n],
            psi: vec![Matrix::zeros(vdim, vdim); n * n],
        }
    }

    /// `φ = L`, `ψ = R` on `V = A`.
    pub fn regular(a: &ThreeAlgebra) -> Self {
        let n = a.dim();
        let mut phi = Vec::with_capacity(n * n);
        let mut psi = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                phi.push(left_basis(a, i, j));
                psi.push(right_basis(a, i, j));
            }
        }
        DoubleModule {
            algebra: a.clone(),
            vdim: n,
            phi,
            psi,
        }
    }

    pub fn algebra(&self) -> &ThreeAlgebra {
        &self.algebra
    }

    pub fn vdim(&self) -> usize {
        self.vdim
    }

    pub fn phi(&self, i: usize, j: usize) -> &Matrix {
        &self.phi[i * self.algebra.dim() + j]
    }

    pub fn psi(&self, i: usize, j: usize) -> &Matrix {
        &self.psi[i * self.algebra.dim() + j]
    }

    /// Replaces `psi(i, j)`; used to corrupt modules in experiments.
    pub fn set_psi(&mut self, i: usize, j: usize, m: Matrix) -> Result<()> {
        check_square(&m, self.vdim, "psi", i, j)?;
        let n = self.algebra.dim();
        self.psi[i * n + j] = m;
        Ok(())
    }

    /// Replaces `phi(i, j)` and its mirror.
    pub fn set_phi(&mut self, i: usize, j: usize, m: Matrix) -> Result<()> {
        check_square(&m, self.vdim, "phi", i, j)?;
        if i == j {
            return Err(Error::Schema("phi on a repeated pair must vanish".into()));
        }
        let n = self.algebra.dim();
        self.phi[j * n + i] = m.neg();
        self.phi[i * n + j] = m;
        Ok(())
    }

    /// Sparse copies of both actions, used by the identity checks.
    fn ops(&self) -> Ops {
        let n = self.algebra.dim();
        Ops {
            m: self.vdim,
            phi: self.phi.iter().map(SparseOp::from_matrix).collect(),
            psi: self.psi.iter().map(SparseOp::from_matrix).collect(),
            n,
            prods: (0..4 * n * n * n * n).map(|_| OnceCell::new()).collect(),
        }
    }

    /// Every defining identity on every basis 4-tuple. Chained equalities
    /// are checked link by link.
    pub fn check(&self) -> AxiomReport {
        self.check_impl(false)
    }

    /// Like [`check`](Self::check) but stops at the first violation.
    pub fn is_double_module(&self) -> bool {
        self.check_impl(true).passed
    }

    fn check_impl(&self, stop_first: bool) -> AxiomReport {
        use Act::{Phi, Psi};
        let n = self.algebra.dim();
        let a = &self.algebra;
        let o = self.ops();
        let mut rep = AxiomReport::new(&MODULE_IDS);
        let push = |rep: &mut AxiomReport, id: &str, t: &[usize], l: &SparseOp, r: &SparseOp| {
            if l != r {
                rep.push(id, t, l.clone().into_flat(), r.clone().into_flat());
            }
        };
        for x1 in 0..n {
            for x2 in 0..n {
                for x3 in 0..n {
                    let p123 = a.basis_product(x1, x2, x3);
                    for x4 in 0..n {
                        let t = [x1, x2, x3, x4];
                        let p234 = a.basis_product(x2, x3, x4);
                        push(&mut rep, MODULE_IDS[0], &t, &o.phi_r(x1, p234), o.prod(Phi(x1, x2), Phi(x3, x4)));

                        let shift_l = o.psi_l(p123, x4);
                        let shift_r = o.psi_r(x1, p234);
                        push(&mut rep, MODULE_IDS[1], &t, &shift_l, &shift_r);
                        push(&mut rep, MODULE_IDS[2], &t, &shift_r, o.prod(Psi(x1, x4), Psi(x2, x3)));

                        let sq = o.prod(Psi(x1, x2), Psi(x3, x4));
                        let sq_r = o.prod(Psi(x2, x1), Phi(x3, x4)).add(o.prod(Psi(x1, x3), Phi(x2, x4)));
                        push(&mut rep, MODULE_IDS[3], &t, sq, &sq_r);

                        let ex_r = o
                            .phi_r(x4, p123)
                            .add(&o.psi_l(a.basis_product(x4, x2, x3), x1));
                        push(&mut rep, MODULE_IDS[4], &t, &shift_l, &ex_r);

                        let b = o.prod(Psi(x1, x2), Phi(x3, x4));
                        let c = o.prod(Phi(x1, x3), Psi(x4, x2));
                        let d = o.phi_r(x1, a.basis_product(x3, x2, x4)).neg();
                        push(&mut rep, MODULE_IDS[5], &t, sq, b);
                        push(&mut rep, MODULE_IDS[6], &t, b, c);
                        push(&mut rep, MODULE_IDS[7], &t, c, &d);
                        if stop_first && !rep.passed {
                            return rep;
                        }
                    }
                }
            }
        }
        rep
    }

    /// The coefficient identities obtained by comparing both sides of the
    /// two mixing identities on the semidirect product one module slot at a
    /// time, on every basis 5-tuple.
    ///
    /// Most identities ignore one of the five indices; those are evaluated
    /// once with that index at zero and any violation is reported for every
    /// value of it.
    pub fn check_derived(&self) -> AxiomReport {
        use Act::{Phi, Psi};
        let n = self.algebra.dim();
        let a = &self.algebra;
        let o = self.ops();
        let pp = |x, y| o.prod(x, y);
        let mut rep = AxiomReport::new(&DERIVED_IDS);
        let mut emit = |k: usize, free: Option<usize>, t: [usize; 5], l: &SparseOp, r: &SparseOp| {
            if l == r {
                return;
            }
            let values = if free.is_some() { 0..n } else { 0..1 };
            for v in values {
                let mut w = t;
                if let Some(f) = free {
                    w[f] = v;
                }
                rep.push(DERIVED_IDS[k], &w, l.clone().into_flat(), r.clone().into_flat());
            }
        };
        for x1 in 0..n {
            for x2 in 0..n {
                for x3 in 0..n {
                    for x4 in 0..n {
                        let p234 = a.basis_product(x2, x3, x4);
                        for x5 in 0..n {
                            let t = [x1, x2, x3, x4, x5];
                            let p345 = a.basis_product(x3, x4, x5);
                            let p534 = a.basis_product(x5, x3, x4);
                            if x1 == 0 {
                                let l = o.psi_l(p234, x5);
                                emit(0, Some(0), t, &l, &o.psi_r(x2, p345));
                                emit(8, Some(0), t, &l, &o.phi_r(x5, p234).add(&o.psi_l(p534, x2)));
                            }
                            if x5 == 0 {
                                let l = o.phi_r(x1, p234);
                                emit(1, Some(4), t, &l, pp(Phi(x1, x2), Phi(x3, x4)));
                                let r = o.psi_l(p234, x1).sub(pp(Psi(x1, x2), Psi(x3, x4)));
                                emit(9, Some(4), t, &l, &r);
                            }
                            if x2 == 0 {
                                let l = pp(Psi(x1, x5), Psi(x3, x4));
                                emit(2, Some(1), t, l, &o.psi_r(x1, p345));
                                emit(7, Some(1), t, l, &pp(Psi(x5, x1), Psi(x3, x4)).sub(&o.phi_r(x1, p534)));
                            }
                            if x3 == 0 {
                                let r = pp(Psi(x5, x1), Psi(x2, x4)).add(pp(Psi(x1, x2), Psi(x5, x4)));
                                emit(5, Some(2), t, pp(Psi(x1, x5), Psi(x2, x4)), &r);
                            }
                            if x4 == 0 {
                                let r = pp(Psi(x5, x1), Phi(x2, x3)).add(pp(Psi(x1, x2), Phi(x5, x3)));
                                emit(6, Some(3), t, pp(Psi(x1, x5), Phi(x2, x3)), &r);
                            }
                            emit(3, None, t, pp(Psi(x1, x5), Psi(x2, x4)), pp(Phi(x1, x2), Psi(x4, x5)));
                            emit(4, None, t, pp(Psi(x1, x5), Phi(x2, x3)), pp(Phi(x1, x2), Psi(x3, x5)));
                        }
                    }
                }
            }
        }
        rep.sort();
        rep
    }

    /// Negative transposes of both actions, acting on `V*` in the dual
    /// basis. No checks.
    pub fn dual_unchecked(&self) -> DoubleModule {
        let t = |ms: &[Matrix]| ms.iter().map(|m| m.transpose().neg()).collect();
        DoubleModule {
            algebra: self.algebra.clone(),
            vdim: self.vdim,
            phi: t(&self.phi),
            psi: t(&self.psi),
        }
    }

    /// The dual module. The input must be a double module; if the output
    /// fails the identities the failure is returned as a discrepancy.
    pub fn dual(&self) -> Result<DoubleModule> {
        if !self.check().passed {
            return Err(Error::NotVerified("double module"));
        }
        let d = self.dual_unchecked();
        let rep = d.check();
        if let Some(v) = rep.first_witness() {
            return Err(Error::Discrepancy(format!(
                "dual module fails {} at {:?}",
                v.axiom, v.witness
            )));
        }
        Ok(d)
    }

    /// `ρ = φ − ψτ + ψ` on the sub-adjacent 3-Lie algebra. The input must be
    /// a double module over a verified algebra; the result is confirmed to be
    /// a 3-Lie module.
    pub fn induce_lie_module(&self) -> Result<LieModule> {
        if !self.check().passed {
            return Err(Error::NotVerified("double module"));
        }
        let lie = sub_adjacent(&self.algebra, SubAdjacentMode::Strict)?;
        let m = self.induced_rho_unchecked(lie)?;
        let rep = m.check()?;
        if let Some(v) = rep.first_witness() {
            return Err(Error::Discrepancy(format!(
                "induced module fails {} at {:?}",
                v.axiom, v.witness
            )));
        }
        Ok(m)
    }

    /// The induced `ρ` over the given 3-Lie algebra, with no checks.
    pub fn induced_rho_unchecked(&self, lie: crate::lie::ThreeLieAlgebra) -> Result<LieModule> {
        let n = self.algebra.dim();
        let mut rho = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let r = self.phi(i, j).sub(self.psi(j, i)).add(self.psi(i, j));
                rho.push(((i, j), r));
            }
        }
        LieModule::new(lie, self.vdim, rho)
    }

    /// `A ⋉ V` with
    /// `{x1+v1, x2+v2, x3+v3} = {x1,x2,x3} + φ(x1,x2)v3 − ψ(x1,x3)v2 + ψ(x2,x3)v1`,
    /// algebra basis first. No checks.
    pub fn semidirect_unchecked(&self) -> ThreeAlgebra {
        let (n, m) = (self.algebra.dim(), self.vdim);
        let mut b = SkewTableBuilder::new(n + m, n + m);
        let col = |mat: &Matrix, c: usize, neg: bool| -> SparseVec {
            (0..m)
                .filter(|&r| !mat[(r, c)].is_zero())
                .map(|r| (n + r, if neg { -&mat[(r, c)] } else { mat[(r, c)].clone() }))
                .collect()
        };
        let ok = "semidirect entries are consistent";
        for ((i, j, k), v) in self.algebra.orbits() {
            b.insert((i, j, k), v.clone()).expect(ok);
        }
        for i in 0..n {
            for j in i + 1..n {
                for c in 0..m {
                    b.insert((i, j, n + c), col(self.phi(i, j), c, false)).expect(ok);
                }
            }
            for v in 0..m {
                for k in 0..n {
                    b.insert((i, n + v, k), col(self.psi(i, k), v, true)).expect(ok);
                }
            }
        }
        ThreeAlgebra::from_builder(n + m, b)
    }

    /// The semidirect product together with both verdicts. When the base
    /// algebra is semi-associative the two verdicts must agree; a mismatch
    /// is returned as a discrepancy.
    pub fn semidirect(&self) -> Result<Semidirect> {
        let algebra = self.semidirect_unchecked();
        let algebra_report = algebra.check_semi_associative();
        let module_report = self.check();
        if self.algebra.is_semi_associative() && algebra_report.passed != module_report.passed {
            return Err(Error::Discrepancy(format!(
                "module identities {} but the semidirect product {}",
                if module_report.passed { "hold" } else { "fail" },
                if algebra_report.passed { "is semi-associative" } else { "is not semi-associative" }
            )));
        }
        Ok(Semidirect {
            algebra,
            algebra_report,
            module_report,
        })
    }
}

struct Ops {
    n: usize,
    m: usize,
    phi: Vec<SparseOp>,
    psi: Vec<SparseOp>,
    // Products of two basis actions, filled on first use.
    prods: Vec<OnceCell<SparseOp>>,
}

#[derive(Clone, Copy)]
enum Act {
    Phi(usize, usize),
    Psi(usize, usize),
}

impl Ops {
    fn act(&self, a: Act) -> &SparseOp {
        match a {
            Act::Phi(i, j) => self.phi(i, j),
            Act::Psi(i, j) => self.psi(i, j),
        }
    }

    fn slot(&self, a: Act) -> usize {
        let nn = self.n * self.n;
        match a {
            Act::Phi(i, j) => i * self.n + j,
            Act::Psi(i, j) => nn + i * self.n + j,
        }
    }

    /// `a · b`
    fn prod(&self, a: Act, b: Act) -> &SparseOp {
        let idx = self.slot(a) * 2 * self.n * self.n + self.slot(b);
        self.prods[idx].get_or_init(|| self.act(a).mul(self.act(b)))
    }

    fn phi(&self, i: usize, j: usize) -> &SparseOp {
        &self.phi[i * self.n + j]
    }

    fn psi(&self, i: usize, j: usize) -> &SparseOp {
        &self.psi[i * self.n + j]
    }

    /// `φ(e_a, v)`
    fn phi_r(&self, a: usize, v: &SparseVec) -> SparseOp {
        let mut out = SparseOp::zero(self.m, self.m);
        for (b, c) in v {
            out.add_scaled(c, self.phi(a, *b));
        }
        out
    }

    /// `ψ(v, e_b)`
    fn psi_l(&self, v: &SparseVec, b: usize) -> SparseOp {
        let mut out = SparseOp::zero(self.m, self.m);
        for (a, c) in v {
            out.add_scaled(c, self.psi(*a, b));
        }
        out
    }

    /// `ψ(e_a, v)`
    fn psi_r(&self, a: usize, v: &SparseVec) -> SparseOp {
        let mut out = SparseOp::zero(self.m, self.m);
        for (b, c) in v {
            out.add_scaled(c, self.psi(a, *b));
        }
        out
    }
}

/// Output of [`DoubleModule::semidirect`].
#[derive(Clone, Debug)]
pub struct Semidirect {
    pub algebra: ThreeAlgebra,
    pub algebra_report: AxiomReport,
    pub module_report: AxiomReport,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::lie::ThreeLieAlgebra;
    use exactlin::Rational;

    fn one_by_one(x: i64) -> Matrix {
        Matrix::from_i64(&[&[x]])
    }

    /// `φ(e1,e2) = (1)` over A3, all else zero.
    fn broken_a3_module() -> DoubleModule {
        DoubleModule::new(catalog::a3(), 1, vec![((0, 1), one_by_one(1))], vec![]).unwrap()
    }

    #[test]
    fn zero_and_regular_modules_pass() {
        let a = catalog::a3();
        assert!(DoubleModule::zero(a.clone(), 2).check().passed);
        let reg = DoubleModule::regular(&a);
        assert!(reg.check().passed);
        assert!(reg.check_derived().passed);
        assert!(DoubleModule::regular(&ThreeAlgebra::zero(3)).phi.iter().all(Matrix::is_zero));
    }

    #[test]
    fn broken_module_witness() {
        let rep = broken_a3_module().check();
        assert!(!rep.passed);
        let v = rep
            .violations
            .iter()
            .find(|v| v.axiom == "phi-nested")
            .expect("phi-nested fails");
        assert_eq!(v.witness, vec![1, 2, 1, 2]);
        assert_eq!(v.lhs, vec![Rational::zero()]);
        assert_eq!(v.rhs, vec![Rational::one()]);
    }

    #[test]
    fn duals() {
        let a = catalog::a3();
        let reg = DoubleModule::regular(&a);
        let d = reg.dual().unwrap();
        assert!(d.check().passed);
        assert_eq!(d.dual_unchecked(), reg);
        let z = DoubleModule::zero(a, 2);
        assert_eq!(z.dual().unwrap(), z);
        assert!(matches!(broken_a3_module().dual(), Err(Error::NotVerified(_))));
    }

    #[test]
    fn semidirect_products() {
        let a = catalog::a3();
        let sd = DoubleModule::regular(&a).semidirect().unwrap();
        assert_eq!(sd.algebra.dim(), 6);
        assert!(sd.algebra_report.passed && sd.module_report.passed);

        let bad = broken_a3_module().semidirect().unwrap();
        assert!(!bad.algebra_report.passed && !bad.module_report.passed);

        let z = DoubleModule::zero(a.clone(), 2).semidirect().unwrap().algebra;
        let mut block = ThreeAlgebra::zero(5);
        block.add_to_product(0, 1, 1, a.basis_product(0, 1, 1));
        assert_eq!(z, block);
    }

    #[test]
    fn induced_module() {
        let a = catalog::a3();
        let reg = DoubleModule::regular(&a);
        let m = reg.induce_lie_module().unwrap();
        let want = left_basis(&a, 0, 1).sub(&right_basis(&a, 1, 0)).add(&right_basis(&a, 0, 1));
        assert_eq!(m.rho(0, 1), &want);
        let z = DoubleModule::zero(a, 2).induce_lie_module().unwrap();
        assert!((0..3).all(|i| (0..3).all(|j| z.rho(i, j).is_zero())));
    }

    #[test]
    fn induced_module_matches_semidirect_bracket() {
        for a in [catalog::a3(), catalog::n4()] {
            let dm = DoubleModule::regular(&a);
            let mut lhs = sub_adjacent(&dm.semidirect_unchecked(), SubAdjacentMode::Unchecked).unwrap();
            lhs.set_label(None);
            let lie: ThreeLieAlgebra = sub_adjacent(&a, SubAdjacentMode::Strict).unwrap();
            let rhs = dm.induced_rho_unchecked(lie).unwrap().semidirect();
            assert_eq!(lhs, rhs);
        }
    }
}
