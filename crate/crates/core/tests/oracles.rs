//! Dense brute-force oracles, written straight from the identities with no
//! pruning and no sparse storage, compared against the library checkers and
//! solvers.

use std::collections::BTreeMap;

use exactlin::{Matrix, Rational, RowReducer};
use proptest::prelude::*;
use triad::cocycle::{self, Cocycle};
use triad::lab::{self, Family, GeneratorSpec};
use triad::lie::ThreeLieAlgebra;
use triad::maps;
use triad::{catalog, ThreeAlgebra};

type Vector = Vec<Rational>;
/// `t[i][j][k]` is the coordinate vector of `{e_i, e_j, e_k}`.
type Tensor = Vec<Vec<Vec<Vector>>>;
/// Sparse entries `((i, j, k), coefficients)`, 0-based.
type Entry = ((usize, usize, usize), Vec<i64>);
type Entries = Vec<Entry>;

fn zero(n: usize) -> Vector {
    vec![Rational::zero(); n]
}

fn e(n: usize, i: usize) -> Vector {
    let mut v = zero(n);
    v[i] = Rational::one();
    v
}

fn add(a: &mut Vector, k: &Rational, b: &Vector) {
    for (x, y) in a.iter_mut().zip(b) {
        *x += k * y;
    }
}

fn sub(a: &Vector, b: &Vector) -> Vector {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn tensor_of(a: &ThreeAlgebra) -> Tensor {
    let n = a.dim();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).map(|k| a.triple_product(&e(n, i), &e(n, j), &e(n, k)).unwrap()).collect())
                .collect()
        })
        .collect()
}

/// Trilinear extension of `t`.
fn prod(t: &Tensor, x: &Vector, y: &Vector, z: &Vector) -> Vector {
    let n = x.len();
    let mut out = zero(n);
    for i in (0..n).filter(|&i| !x[i].is_zero()) {
        for j in (0..n).filter(|&j| !y[j].is_zero()) {
            for k in (0..n).filter(|&k| !z[k].is_zero()) {
                add(&mut out, &(&(&x[i] * &y[j]) * &z[k]), &t[i][j][k]);
            }
        }
    }
    out
}

fn tuples(n: usize) -> impl Iterator<Item = [usize; 5]> {
    (0..n.pow(5)).map(move |mut c| {
        let mut t = [0; 5];
        for slot in t.iter_mut().rev() {
            *slot = c % n;
            c /= n;
        }
        t
    })
}

type Row = (String, Vec<usize>, Vector, Vector);

fn one_based(t: &[usize]) -> Vec<usize> {
    t.iter().map(|i| i + 1).collect()
}

/// Both mixing identities on every basis 5-tuple, in lexicographic order.
fn algebra_oracle(t: &Tensor) -> Vec<Row> {
    let n = t.len();
    let mut out = Vec::new();
    for tp in tuples(n) {
        let [x1, x2, x3, x4, x5] = tp.map(|i| e(n, i));
        let inner = prod(t, &x2, &x3, &x4);
        let lhs = prod(t, &x1, &inner, &x5);
        let assoc = prod(t, &x1, &x2, &prod(t, &x3, &x4, &x5));
        let mut exch = prod(t, &x5, &inner, &x1);
        add(&mut exch, &Rational::one(), &prod(t, &x1, &prod(t, &x5, &x3, &x4), &x2));
        if lhs != assoc {
            out.push(("E22".into(), one_based(&tp), lhs.clone(), assoc));
        }
        if lhs != exch {
            out.push(("E23".into(), one_based(&tp), lhs, exch));
        }
    }
    out
}

fn rows(rep: &triad::AxiomReport) -> Vec<Row> {
    rep.violations
        .iter()
        .map(|v| (v.axiom.clone(), v.witness.clone(), v.lhs.clone(), v.rhs.clone()))
        .collect()
}

/// Entries `((i, j, k), coefficients)` with `i < j`, deduplicated.
fn arb_orbits(max_dim: usize) -> impl Strategy<Value = (usize, Entries)> {
    (2..=max_dim).prop_flat_map(|n| {
        let entry = (0..n, 1..n, 0..n, prop::collection::vec(-2i64..=2, n));
        (Just(n), prop::collection::vec(entry, 0..4)).prop_map(|(n, es)| {
            let mut m = BTreeMap::new();
            for (i, d, k, c) in es {
                let j = (i + d) % n;
                m.insert((i.min(j), i.max(j), k), c);
            }
            (n, m.into_iter().collect())
        })
    })
}

fn algebra_from(n: usize, es: &[Entry]) -> ThreeAlgebra {
    ThreeAlgebra::from_products(
        n,
        es.iter().map(|(t, c)| (*t, c.iter().map(|&x| Rational::from(x)).collect())),
    )
    .unwrap()
}

/// The tensor assembled directly from the entries: `t[j][i][k] = −t[i][j][k]`.
fn tensor_from(n: usize, es: &[Entry]) -> Tensor {
    let mut t = vec![vec![vec![zero(n); n]; n]; n];
    for ((i, j, k), c) in es {
        let v: Vector = c.iter().map(|&x| Rational::from(x)).collect();
        t[*j][*i][*k] = v.iter().map(|x| -x).collect();
        t[*i][*j][*k] = v;
    }
    t
}

fn corpus(dims: std::ops::RangeInclusive<usize>, per: usize, seed: u64) -> Vec<ThreeAlgebra> {
    let mut out = vec![catalog::a3(), catalog::n4()];
    for dim in dims {
        for family in [Family::TwoStep, Family::RandomFiltered] {
            let g = lab::generate(&GeneratorSpec::new(dim, family, seed + dim as u64, per)).unwrap();
            out.extend(g.samples.into_iter().map(|s| s.algebra));
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn algebra_checker_matches_brute_force((n, es) in arb_orbits(4)) {
        let a = algebra_from(n, &es);
        let t = tensor_from(n, &es);
        prop_assert_eq!(&tensor_of(&a), &t);
        let want = algebra_oracle(&t);
        let rep = a.check_semi_associative();
        prop_assert_eq!(rep.passed, want.is_empty());
        prop_assert_eq!(rows(&rep), want.clone());
        prop_assert_eq!(a.is_semi_associative(), want.is_empty());
    }

    #[test]
    fn products_are_trilinear_and_skew(
        (n, es) in arb_orbits(4),
        seed in any::<u64>(),
    ) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let a = algebra_from(n, &es);
        let t = tensor_from(n, &es);
        let mut v = || -> Vector { (0..n).map(|_| Rational::new(rng.gen_range(-3..=3), rng.gen_range(1..=3))).collect() };
        let (x, y, z) = (v(), v(), v());
        let p = a.triple_product(&x, &y, &z).unwrap();
        prop_assert_eq!(&p, &prod(&t, &x, &y, &z));
        let swapped: Vector = a.triple_product(&y, &x, &z).unwrap().iter().map(|c| -c).collect();
        prop_assert_eq!(&p, &swapped);
        prop_assert!(a.triple_product(&x, &x, &z).unwrap().iter().all(Rational::is_zero));
    }
}

#[test]
fn verified_corpus_matches_brute_force() {
    for a in corpus(2..=4, 6, 40) {
        let want = algebra_oracle(&tensor_of(&a));
        assert!(want.is_empty(), "{:?}", a.label());
        assert!(a.check_semi_associative().passed);
    }
}

#[test]
fn bad_tensor_violations_match_brute_force() {
    let a = catalog::bad_e123_e1();
    let want = algebra_oracle(&tensor_of(&a));
    assert_eq!(want[0].0, "E22");
    assert_eq!(want[0].1, vec![2, 1, 2, 3, 3]);
    assert_eq!(rows(&a.check_semi_associative()), want);
}

// ---- 3-Lie algebras ----

fn filippov_oracle(t: &Tensor) -> Vec<Row> {
    let n = t.len();
    let mut out = Vec::new();
    for tp in tuples(n) {
        let [x1, x2, x3, x4, x5] = tp.map(|i| e(n, i));
        let lhs = prod(t, &prod(t, &x1, &x2, &x3), &x4, &x5);
        let mut rhs = prod(t, &prod(t, &x1, &x4, &x5), &x2, &x3);
        add(&mut rhs, &Rational::one(), &prod(t, &x1, &prod(t, &x2, &x4, &x5), &x3));
        add(&mut rhs, &Rational::one(), &prod(t, &x1, &x2, &prod(t, &x3, &x4, &x5)));
        if lhs != rhs {
            out.push(("Filippov".into(), one_based(&tp), lhs, rhs));
        }
    }
    out
}

fn lie_tensor(l: &ThreeLieAlgebra) -> Tensor {
    let n = l.dim();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).map(|k| l.bracket(&e(n, i), &e(n, j), &e(n, k)).unwrap()).collect())
                .collect()
        })
        .collect()
}

/// Brackets on increasing triples, extended to a fully skew tensor by hand.
fn arb_lie(max_dim: usize) -> impl Strategy<Value = (usize, Entries)> {
    (3..=max_dim).prop_flat_map(|n| {
        let triples: Vec<(usize, usize, usize)> = (0..n)
            .flat_map(|i| (i + 1..n).flat_map(move |j| (j + 1..n).map(move |k| (i, j, k))))
            .collect();
        let m = triples.len();
        prop::collection::vec((0..m, prop::collection::vec(-1i64..=1, n)), 1..4).prop_map(move |es| {
            let mut out = BTreeMap::new();
            for (idx, c) in es {
                out.insert(triples[idx], c);
            }
            (n, out.into_iter().collect())
        })
    })
}

fn skew_tensor(n: usize, es: &[Entry]) -> Tensor {
    let mut t = vec![vec![vec![zero(n); n]; n]; n];
    for ((i, j, k), c) in es {
        let v: Vector = c.iter().map(|&x| Rational::from(x)).collect();
        let neg: Vector = v.iter().map(|x| -x).collect();
        for (p, sign) in [
            ([i, j, k], &v),
            ([j, k, i], &v),
            ([k, i, j], &v),
            ([j, i, k], &neg),
            ([i, k, j], &neg),
            ([k, j, i], &neg),
        ] {
            t[*p[0]][*p[1]][*p[2]] = sign.clone();
        }
    }
    t
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn filippov_checker_matches_brute_force((n, es) in arb_lie(5)) {
        let l = ThreeLieAlgebra::from_brackets(
            n,
            es.iter().map(|(t, c)| (*t, c.iter().map(|&x| Rational::from(x)).collect())),
        )
        .unwrap();
        let t = skew_tensor(n, &es);
        prop_assert_eq!(&lie_tensor(&l), &t);
        let want = filippov_oracle(&t);
        let rep = l.check_filippov();
        prop_assert_eq!(rep.passed, want.is_empty());
        prop_assert_eq!(l.is_filippov(), want.is_empty());
        if let (Some(got), Some(w)) = (rep.first_witness(), want.first()) {
            prop_assert_eq!(&got.witness, &w.1);
            prop_assert_eq!(&got.lhs, &w.2);
            prop_assert_eq!(&got.rhs, &w.3);
        }
        // Every reported violation is a genuine one.
        for v in &rep.violations {
            prop_assert!(want.iter().any(|w| w.1 == v.witness && w.2 == v.lhs && w.3 == v.rhs));
        }
    }
}

#[test]
fn failing_filippov_example_matches_brute_force() {
    let l = catalog::lie_not_filippov();
    let want = filippov_oracle(&lie_tensor(&l));
    assert_eq!(want[0].1, vec![1, 2, 3, 2, 4]);
    assert_eq!(l.check_filippov().first_witness().unwrap().witness, want[0].1);
}

#[test]
fn sub_adjacent_is_the_cyclic_sum() {
    for a in corpus(3..=5, 4, 90) {
        let t = tensor_of(&a);
        let n = a.dim();
        let l = triad::lie::sub_adjacent(&a, triad::lie::SubAdjacentMode::Strict).unwrap();
        let lt = lie_tensor(&l);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let mut want = t[i][j][k].clone();
                    add(&mut want, &Rational::one(), &t[j][k][i]);
                    add(&mut want, &Rational::one(), &t[k][i][j]);
                    assert_eq!(lt[i][j][k], want);
                }
            }
        }
        assert!(filippov_oracle(&lt).is_empty());
    }
}

// ---- cocycles ----

/// `θ` as a dense skew table into `A*`.
fn theta_of(c: &Cocycle) -> Tensor {
    let n = c.algebra().dim();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).map(|k| triad::sparse::to_dense(c.value(i, j, k), n)).collect())
                .collect()
        })
        .collect()
}

/// `(L*(e_p, e_q) ξ)_l = −ξ({e_p, e_q, e_l})`
fn l_star(t: &Tensor, p: usize, q: usize, xi: &Vector) -> Vector {
    (0..t.len()).map(|l| -dot(xi, &t[p][q][l])).collect()
}

/// `(R*(e_p, e_q) ξ)_l = −ξ({e_l, e_p, e_q})`
fn r_star(t: &Tensor, p: usize, q: usize, xi: &Vector) -> Vector {
    (0..t.len()).map(|l| -dot(xi, &t[l][p][q])).collect()
}

fn dot(a: &Vector, b: &Vector) -> Rational {
    a.iter().zip(b).fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

/// The three cocycle identities on every basis 5-tuple `(x, y, z, w, u)`.
fn cocycle_residuals(t: &Tensor, th: &Tensor, mut f: impl FnMut(&[usize; 5], usize, Vector, Vector)) {
    let n = t.len();
    for tp in tuples(n) {
        let [x, y, z, w, u] = tp;
        let ex = |i| e(n, i);
        let yzw = &t[y][z][w];
        let c1l = prod(th, &ex(x), yzw, &ex(u));
        let c1r = prod(th, &ex(x), &ex(y), &t[z][w][u]);
        let c2l = l_star(t, x, y, &th[z][w][u]);
        let c2r: Vector = r_star(t, x, u, &th[y][z][w]).iter().map(|c| -c).collect();
        let c3l = sub(&c1l, &prod(th, &ex(u), yzw, &ex(x)));
        let mut c3r = prod(th, &ex(x), &t[u][z][w], &ex(y));
        add(&mut c3r, &Rational::one(), &r_star(t, x, u, &th[y][z][w]));
        add(&mut c3r, &Rational::from(-1), &r_star(t, u, x, &th[y][z][w]));
        add(&mut c3r, &Rational::from(-1), &r_star(t, x, y, &th[u][z][w]));
        f(&tp, 0, c1l, c1r);
        f(&tp, 1, c2l, c2r);
        f(&tp, 2, c3l, c3r);
    }
}

const IDS: [&str; 3] = ["cocycle-assoc", "cocycle-dual", "cocycle-exchange"];

fn cocycle_oracle(t: &Tensor, th: &Tensor) -> Vec<Row> {
    let mut out = Vec::new();
    cocycle_residuals(t, th, |tp, id, l, r| {
        if l != r {
            out.push((IDS[id].to_string(), one_based(tp), l, r));
        }
    });
    out
}

fn random_theta(a: &ThreeAlgebra, rng: &mut rand_chacha::ChaCha8Rng) -> Cocycle {
    use rand::Rng;
    let n = a.dim();
    let mut es = BTreeMap::new();
    for _ in 0..rng.gen_range(1..=3) {
        let i = rng.gen_range(0..n);
        let j = (i + rng.gen_range(1..n)) % n;
        let k = rng.gen_range(0..n);
        let l = rng.gen_range(0..n);
        es.insert((i.min(j), i.max(j), k), vec![(l, Rational::from(rng.gen_range(1..=2)))]);
    }
    Cocycle::new(a.clone(), es.into_iter().collect()).unwrap()
}

#[test]
fn cocycle_checker_matches_brute_force() {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
    for a in corpus(2..=3, 5, 70) {
        let t = tensor_of(&a);
        for _ in 0..3 {
            let c = random_theta(&a, &mut rng);
            assert_eq!(rows(&c.check()), cocycle_oracle(&t, &theta_of(&c)), "{:?}", a.label());
        }
        for c in cocycle::cocycle_space(&a).unwrap() {
            assert!(cocycle_oracle(&t, &theta_of(&c)).is_empty());
        }
    }
}

/// Unknowns `θ{e_i,e_j,e_k}(e_l)` for `i < j`, ordered here by `(l, k, j, i)`.
fn unknowns(n: usize) -> Vec<(usize, usize, usize, usize)> {
    let mut out = Vec::new();
    for l in 0..n {
        for k in 0..n {
            for j in 0..n {
                for i in 0..j {
                    out.push((i, j, k, l));
                }
            }
        }
    }
    out
}

/// Rank of the cocycle constraints, rows visited in reverse tuple order and
/// with the identities in reverse, one column per unknown.
fn cocycle_rank(t: &Tensor) -> (usize, usize) {
    let n = t.len();
    let us = unknowns(n);
    // residual[u][(tuple, id)] = lhs − rhs for θ = the u-th unit cocycle.
    let mut cols: Vec<Vec<Vector>> = Vec::new();
    for &(i, j, k, l) in &us {
        let mut th = vec![vec![vec![zero(n); n]; n]; n];
        th[i][j][k] = e(n, l);
        th[j][i][k] = e(n, l).iter().map(|x| -x).collect();
        let mut col = Vec::new();
        cocycle_residuals(t, &th, |_, _, lhs, rhs| col.push(sub(&lhs, &rhs)));
        cols.push(col);
    }
    let mut red = RowReducer::new(us.len());
    let eqs = cols[0].len();
    for r in (0..eqs).rev() {
        for m in (0..n).rev() {
            let row: Vector = cols.iter().map(|c| c[r][m].clone()).collect();
            red.insert_dense(&row);
        }
    }
    (us.len(), red.rank())
}

#[test]
fn cocycle_space_dimension_matches_rank_oracle() {
    let mut algebras = corpus(2..=3, 3, 120);
    algebras.push(ThreeAlgebra::zero(3));
    for a in algebras {
        let (unknown, rank) = cocycle_rank(&tensor_of(&a));
        assert_eq!(unknown, cocycle::cocycle_unknowns(a.dim()));
        let basis = cocycle::cocycle_space(&a).unwrap();
        assert_eq!(basis.len(), unknown - rank, "{:?}", a.label());
        // The basis is independent.
        let mut red = RowReducer::new(unknown);
        let us = unknowns(a.dim());
        for c in &basis {
            let th = theta_of(c);
            let v: Vector = us.iter().map(|&(i, j, k, l)| th[i][j][k][l].clone()).collect();
            assert!(red.insert_dense(&v));
        }
    }
}

// ---- derivations, centroid, central derivations ----

/// Column of the unknown `M[r][c]` (row-major, `M v` convention).
fn mcol(n: usize, r: usize, c: usize) -> usize {
    r * n + c
}

/// Adds the equations `coef · M applied to the listed slots` as dense rows.
struct System {
    n: usize,
    red: RowReducer,
}

impl System {
    fn new(n: usize) -> Self {
        System {
            n,
            red: RowReducer::new(n * n),
        }
    }

    /// Row for component `m` of `M p − Σ slot terms`, where `p = {e_i,e_j,e_k}`
    /// and each listed slot has `M` applied to that argument.
    fn leibniz(&mut self, t: &Tensor, (i, j, k): (usize, usize, usize), lhs: bool, slots: &[usize], sign: i64) {
        let n = self.n;
        for m in 0..n {
            let mut row = zero(n * n);
            if lhs {
                for (a, c) in t[i][j][k].iter().enumerate() {
                    row[mcol(n, m, a)] += c;
                }
            }
            for &s in slots {
                for a in 0..n {
                    // M e_x = Σ_a M[a][x] e_a
                    let (x, c) = match s {
                        0 => (i, &t[a][j][k][m]),
                        1 => (j, &t[i][a][k][m]),
                        _ => (k, &t[i][j][a][m]),
                    };
                    row[mcol(n, a, x)] -= &(Rational::from(sign) * c);
                }
            }
            self.red.insert_dense(&row);
        }
    }

    fn kernel_dim(&self) -> usize {
        self.n * self.n - self.red.rank()
    }
}

fn triples(n: usize) -> impl Iterator<Item = (usize, usize, usize)> {
    (0..n).flat_map(move |i| (0..n).flat_map(move |j| (0..n).map(move |k| (i, j, k))))
}

fn der_dim(t: &Tensor) -> usize {
    let n = t.len();
    let mut s = System::new(n);
    for tr in triples(n) {
        s.leibniz(t, tr, true, &[0, 1, 2], 1);
    }
    s.kernel_dim()
}

fn centroid_dim(t: &Tensor) -> usize {
    let n = t.len();
    let mut s = System::new(n);
    for tr in triples(n) {
        s.leibniz(t, tr, true, &[0], 1);
        s.leibniz(t, tr, true, &[2], 1);
    }
    s.kernel_dim()
}

/// Derivations with `D(A) ⊆ Z(A)` and `D(A¹) = 0`.
fn central_der_dim(t: &Tensor) -> usize {
    let n = t.len();
    let mut s = System::new(n);
    for tr in triples(n) {
        s.leibniz(t, tr, true, &[0, 1, 2], 1);
        s.leibniz(t, tr, true, &[], 1);
        // {D e_i, e_j, e_k} = 0 and {e_i, e_j, D e_k} = 0
        s.leibniz(t, tr, false, &[0], 1);
        s.leibniz(t, tr, false, &[2], 1);
    }
    s.kernel_dim()
}

#[test]
fn map_space_dimensions_match_dense_systems() {
    for a in corpus(2..=4, 4, 200) {
        let t = tensor_of(&a);
        let der = maps::derivation_space(&a);
        assert_eq!(der.dim(), der_dim(&t), "Der {:?}", a.label());
        assert_eq!(maps::centroid_space(&a).dim(), centroid_dim(&t), "Γ {:?}", a.label());
        assert_eq!(maps::central_derivation_space(&a).dim(), central_der_dim(&t), "Der_C {:?}", a.label());
        for d in der.basis() {
            assert!(is_derivation_dense(&t, &d));
        }
    }
}

#[test]
fn a3_oracle_values() {
    let t = tensor_of(&catalog::a3());
    // Der(A3): De1 = a e1 + c e3, De2 = p e1 + q e2 + r e3, De3 = (a + 2q) e3.
    assert_eq!(der_dim(&t), 5);
    assert_eq!(centroid_dim(&t), 3);
    assert_eq!(central_der_dim(&t), 2);
    // e1 -> e2 breaks the Leibniz rule at (e1, e2, e1).
    let mut m = Matrix::zeros(3, 3);
    m.row_mut(1)[0] = Rational::one();
    assert!(!is_derivation_dense(&t, &m));
    assert!(!maps::is_derivation(&catalog::a3(), &m));
}

fn is_derivation_dense(t: &Tensor, d: &Matrix) -> bool {
    let n = t.len();
    let col = |x: usize| d.column(x);
    triples(n).all(|(i, j, k)| {
        let lhs = d.mul_vec(&t[i][j][k]);
        let mut rhs = prod(t, &col(i), &e(n, j), &e(n, k));
        add(&mut rhs, &Rational::one(), &prod(t, &e(n, i), &col(j), &e(n, k)));
        add(&mut rhs, &Rational::one(), &prod(t, &e(n, i), &e(n, j), &col(k)));
        lhs == rhs
    })
}
