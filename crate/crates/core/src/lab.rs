//! Random generation of verified algebras and a property harness that
//! evaluates structural facts about semi-associative 3-algebras over
//! generated samples.
//!
//! Every trial `t` of a [`GeneratorSpec`] draws from its own ChaCha8
//! stream seeded with `seed + t`, so a single recorded trial seed
//! regenerates the algebra with `trials = 1`.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use exactlin::{Matrix, Rational, Subspace};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{SkewTableBuilder, ThreeAlgebra};
use crate::cocycle::{self, Cocycle};
use crate::error::{Error, Result};
use crate::json::{self, AlgebraJson};
use crate::lie::{sub_adjacent, SubAdjacentMode};
use crate::maps::{self, MapKind};
use crate::module::DoubleModule;
use crate::sparse::{self, SparseVec};
use crate::structure;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    /// The zero product.
    Abelian,
    /// Products from `U×U×U` into `W`, all others zero, for a random split
    /// `U ⊕ W`. Always semi-associative because `W` annihilates everything.
    TwoStep,
    /// Sparse random tensors kept only when they pass the axiom check.
    RandomFiltered,
}

impl Family {
    pub const ALL: [Family; 3] = [Family::Abelian, Family::TwoStep, Family::RandomFiltered];

    pub fn name(self) -> &'static str {
        match self {
            Family::Abelian => "abelian",
            Family::TwoStep => "two-step",
            Family::RandomFiltered => "random-filtered",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::Schema(format!("unknown family {s:?} (abelian, two-step, random-filtered)")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub dim: usize,
    pub family: Family,
    pub coeff_set: Vec<Rational>,
    pub seed: u64,
    pub trials: usize,
    /// Upper bound on the number of orbits drawn by
    /// [`Family::RandomFiltered`]; each attempt draws `1..=sparsity`.
    pub sparsity: usize,
    /// Rejection-sampling attempts allowed per trial.
    pub max_attempts: usize,
}

impl GeneratorSpec {
    pub fn new(dim: usize, family: Family, seed: u64, trials: usize) -> Self {
        GeneratorSpec {
            dim,
            family,
            coeff_set: (-2..=2).map(Rational::from).collect(),
            seed,
            trials,
            sparsity: 2,
            max_attempts: 10_000,
        }
    }

    pub fn trial_seed(&self, t: usize) -> u64 {
        self.seed.wrapping_add(t as u64)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sample {
    pub seed: u64,
    pub algebra: ThreeAlgebra,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generated {
    pub samples: Vec<Sample>,
    pub attempts: usize,
}

impl Generated {
    pub fn acceptance_rate(&self) -> f64 {
        if self.attempts == 0 {
            return 1.0;
        }
        self.samples.len() as f64 / self.attempts as f64
    }

    pub fn algebras(&self) -> impl Iterator<Item = &ThreeAlgebra> {
        self.samples.iter().map(|s| &s.algebra)
    }
}

pub fn generate(spec: &GeneratorSpec) -> Result<Generated> {
    if spec.trials == 0 {
        return Err(Error::Schema("trials must be at least 1".into()));
    }
    if spec.dim > crate::MAX_DIM {
        return Err(Error::DimensionTooLarge {
            dim: spec.dim,
            max: crate::MAX_DIM,
        });
    }
    if spec.coeff_set.is_empty() {
        return Err(Error::Schema("coefficient set is empty".into()));
    }
    let mut samples = Vec::with_capacity(spec.trials);
    let mut attempts = 0;
    for t in 0..spec.trials {
        let seed = spec.trial_seed(t);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut algebra = match spec.family {
            Family::Abelian => {
                attempts += 1;
                ThreeAlgebra::zero(spec.dim)
            }
            Family::TwoStep => {
                attempts += 1;
                let a = random_two_step(spec, &mut rng);
                if !a.is_semi_associative() {
                    return Err(Error::Discrepancy(format!(
                        "two-step sample with seed {seed} fails the axioms"
                    )));
                }
                a
            }
            Family::RandomFiltered => {
                let mut found = None;
                for _ in 0..spec.max_attempts {
                    attempts += 1;
                    let a = random_sparse(spec, &mut rng);
                    if a.is_semi_associative() {
                        found = Some(a);
                        break;
                    }
                }
                found.ok_or(Error::GeneratorExhausted {
                    attempts: spec.max_attempts,
                })?
            }
        };
        algebra.set_label(Some(format!("{}-{}-{seed}", spec.family, spec.dim)));
        samples.push(Sample { seed, algebra });
    }
    Ok(Generated { samples, attempts })
}

fn pick(spec: &GeneratorSpec, rng: &mut ChaCha8Rng) -> Rational {
    spec.coeff_set.choose(rng).expect("nonempty").clone()
}

fn random_two_step(spec: &GeneratorSpec, rng: &mut ChaCha8Rng) -> ThreeAlgebra {
    let n = spec.dim;
    if n < 2 {
        return ThreeAlgebra::zero(n);
    }
    let w = rng.gen_range(1..=n / 2);
    let u = n - w;
    let mut products = Vec::new();
    for i in 0..u {
        for j in i + 1..u {
            for k in 0..u {
                let out: SparseVec = (u..n)
                    .map(|l| (l, pick(spec, rng)))
                    .filter(|(_, x)| !x.is_zero())
                    .collect();
                products.push(((i, j, k), out));
            }
        }
    }
    two_step_algebra(n, u, products).expect("products land in W by construction")
}

/// The algebra with the given products on `U = ⟨e_0..e_{u-1}⟩`, each landing
/// in `W = ⟨e_u..⟩`. Indices are 0-based.
pub fn two_step_algebra(
    dim: usize,
    u: usize,
    products: Vec<((usize, usize, usize), SparseVec)>,
) -> Result<ThreeAlgebra> {
    if u > dim {
        return Err(Error::Schema(format!("split {u} exceeds dimension {dim}")));
    }
    let mut b = SkewTableBuilder::new(dim, dim);
    for ((i, j, k), out) in products {
        if i >= u || j >= u || k >= u {
            return Err(Error::Schema(format!(
                "two-step product ({},{},{}) has an argument outside U",
                i + 1,
                j + 1,
                k + 1
            )));
        }
        if out.iter().any(|(l, _)| *l < u) {
            return Err(Error::Schema(format!(
                "two-step product ({},{},{}) leaves W",
                i + 1,
                j + 1,
                k + 1
            )));
        }
        b.insert((i, j, k), out)?;
    }
    Ok(ThreeAlgebra::from_builder(dim, b))
}

/// Draws `1..=sparsity` orbits, each with one or two output coordinates
/// taken from `coeff_set`. A zero draw leaves the orbit empty, which is the
/// only way dimensions below 3 are ever accepted.
fn random_sparse(spec: &GeneratorSpec, rng: &mut ChaCha8Rng) -> ThreeAlgebra {
    let n = spec.dim;
    if n < 2 {
        return ThreeAlgebra::zero(n);
    }
    let mut b = SkewTableBuilder::new(n, n);
    let count = rng.gen_range(1..=spec.sparsity.max(1));
    for _ in 0..count {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        let k = rng.gen_range(0..n);
        let support = rng.gen_range(1..=2.min(n));
        let mut ls: Vec<usize> = (0..n).collect();
        ls.shuffle(rng);
        let mut out: SparseVec = ls[..support]
            .iter()
            .map(|&l| (l, pick(spec, rng)))
            .filter(|(_, x)| !x.is_zero())
            .collect();
        out.sort_by_key(|(l, _)| *l);
        // A repeated orbit keeps its first draw.
        let _ = b.insert((i, j, k), out);
    }
    ThreeAlgebra::from_builder(n, b)
}

/// The registered properties. Each holds on every semi-associative
/// 3-algebra of dimension at most 6.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Property {
    DerivedInCenter,
    ProductSpan,
    IndependentTriple,
    IdealLattice,
    OperatorIdentities,
    TAbelian,
    InnerDerivations,
    Centroid,
    CentroidDerivations,
    SubAdjacentFilippov,
    SubAdjacentStructure,
    MultiplicationsAreLieDerivations,
    SemidirectBiconditional,
    ModuleConstructions,
    ModuleDerivedIdentities,
    DoubleExtension,
}

impl Property {
    pub const ALL: [Property; 16] = [
        Property::DerivedInCenter,
        Property::ProductSpan,
        Property::IndependentTriple,
        Property::IdealLattice,
        Property::OperatorIdentities,
        Property::TAbelian,
        Property::InnerDerivations,
        Property::Centroid,
        Property::CentroidDerivations,
        Property::SubAdjacentFilippov,
        Property::SubAdjacentStructure,
        Property::MultiplicationsAreLieDerivations,
        Property::SemidirectBiconditional,
        Property::ModuleConstructions,
        Property::ModuleDerivedIdentities,
        Property::DoubleExtension,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Property::DerivedInCenter => "derived_in_center",
            Property::ProductSpan => "product_span",
            Property::IndependentTriple => "independent_triple",
            Property::IdealLattice => "ideal_lattice",
            Property::OperatorIdentities => "operator_identities",
            Property::TAbelian => "t_abelian",
            Property::InnerDerivations => "inner_derivations",
            Property::Centroid => "centroid",
            Property::CentroidDerivations => "centroid_derivations",
            Property::SubAdjacentFilippov => "sub_adjacent_filippov",
            Property::SubAdjacentStructure => "sub_adjacent_structure",
            Property::MultiplicationsAreLieDerivations => "multiplications_are_lie_derivations",
            Property::SemidirectBiconditional => "semidirect_biconditional",
            Property::ModuleConstructions => "module_constructions",
            Property::ModuleDerivedIdentities => "module_derived_identities",
            Property::DoubleExtension => "double_extension",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            Property::DerivedInCenter => "the derived algebra lies in the center",
            Property::ProductSpan => "a nonzero basis product {e_i,e_j,e_k} is not a multiple of any argument and avoids <e_i,e_j>",
            Property::IndependentTriple => "a non-abelian algebra has independent x,y,z with {x,y,z} != 0",
            Property::IdealLattice => "center is an ideal, {B,A,A} lies in {A,B,A}, ideal operations and quotients behave",
            Property::OperatorIdentities => "identities between left and right multiplication operators",
            Property::TAbelian => "L(A)+R(A) is commutative",
            Property::InnerDerivations => "S maps are derivations, commute, and [S(A),Der(A)] lies in S(A)",
            Property::Centroid => "centroid is commutator-closed, contains the identity, and satisfies the middle-slot law",
            Property::CentroidDerivations => "centroid and derivation interplay, central derivations = centroid ∩ Der",
            Property::SubAdjacentFilippov => "the cyclic-sum bracket satisfies the Filippov identity",
            Property::SubAdjacentStructure => "derivations, S-identity, ideals and quotients pass to the sub-adjacent 3-Lie algebra",
            Property::MultiplicationsAreLieDerivations => "L(e_i,e_j) and R(e_i,e_j) are derivations of the sub-adjacent algebra",
            Property::SemidirectBiconditional => "semidirect product is semi-associative iff the double module identities hold",
            Property::ModuleConstructions => "regular and dual modules pass, the induced 3-Lie module passes",
            Property::ModuleDerivedIdentities => "regular and dual modules satisfy the slot-by-slot consequences of the semidirect axioms",
            Property::DoubleExtension => "double extensions by every basis cocycle are semi-associative",
        }
    }

    pub fn from_id(id: &str) -> Result<Property> {
        Property::ALL
            .into_iter()
            .find(|p| p.id() == id)
            .ok_or_else(|| Error::UnknownProperty(id.to_string()))
    }

    /// Evaluates the property on one algebra. `seed` drives any sampling
    /// the property does internally.
    pub fn evaluate(self, a: &ThreeAlgebra, seed: u64) -> Evaluation {
        let mut ev = Evaluation::default();
        let outcome = match self {
            Property::DerivedInCenter => derived_in_center(a),
            Property::ProductSpan => product_span(a),
            Property::IndependentTriple => independent_triple(a),
            Property::IdealLattice => ideal_lattice(a),
            Property::OperatorIdentities => operator_identities(a),
            Property::TAbelian => t_abelian(a),
            Property::InnerDerivations => inner_derivations(a),
            Property::Centroid => centroid(a),
            Property::CentroidDerivations => centroid_derivations(a, seed, &mut ev),
            Property::SubAdjacentFilippov => sub_adjacent_filippov(a),
            Property::SubAdjacentStructure => sub_adjacent_structure(a),
            Property::MultiplicationsAreLieDerivations => multiplications_are_lie_derivations(a),
            Property::SemidirectBiconditional => semidirect_biconditional(a, seed, &mut ev),
            Property::ModuleConstructions => module_constructions(a),
            Property::ModuleDerivedIdentities => module_derived_identities(a),
            Property::DoubleExtension => double_extension(a, &mut ev),
        };
        ev.finding = match outcome {
            Ok(f) => f,
            Err(e) => Some(Finding::new(&[], format!("error: {e}"))),
        };
        ev
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Finding {
    /// 1-based basis indices locating the failure; empty if not local.
    pub witness: Vec<usize>,
    pub detail: String,
}

impl Finding {
    fn new(witness: &[usize], detail: impl Into<String>) -> Self {
        Finding {
            witness: witness.iter().map(|i| i + 1).collect(),
            detail: detail.into(),
        }
    }
}

type Outcome = Result<Option<Finding>>;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Evaluation {
    pub finding: Option<Finding>,
    /// Named counters, e.g. how often each side of a biconditional held.
    pub observations: BTreeMap<String, u64>,
}

impl Evaluation {
    fn observe(&mut self, key: &str) {
        *self.observations.entry(key.to_string()).or_default() += 1;
    }
}

/// Why a counterexample occurred, decided by re-checking the input.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Classification {
    /// The input fails the axioms: the generator produced a bad sample.
    InvalidInput,
    /// The input is verified, so the property itself failed.
    Discrepancy,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub seed: u64,
    pub algebra: AlgebraJson,
    pub witness: Vec<usize>,
    pub detail: String,
    pub classification: Classification,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HarnessResult {
    pub property: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spec: Option<GeneratorSpec>,
    pub trials: usize,
    pub counterexamples: Vec<Counterexample>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub observations: BTreeMap<String, u64>,
}

impl HarnessResult {
    pub fn passed(&self) -> bool {
        self.counterexamples.is_empty()
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("plain data serializes")
    }

    /// Writes one file per counterexample, named by property and seed.
    pub fn write_counterexamples(&self, dir: &Path) -> std::io::Result<Vec<PathBuf>> {
        std::fs::create_dir_all(dir)?;
        let mut paths = Vec::new();
        for (idx, c) in self.counterexamples.iter().enumerate() {
            let path = dir.join(format!("{}-{}-{idx}.json", self.property, c.seed));
            let record = serde_json::json!({
                "property": self.property,
                "spec": self.spec,
                "counterexample": c,
            });
            std::fs::write(&path, serde_json::to_string_pretty(&record).expect("plain data serializes") + "\n")?;
            paths.push(path);
        }
        Ok(paths)
    }
}

/// Evaluates `property` on explicit samples, in the order given.
pub fn run_on(property: Property, samples: &[Sample]) -> HarnessResult {
    let mut result = HarnessResult {
        property: property.id().to_string(),
        spec: None,
        trials: samples.len(),
        counterexamples: Vec::new(),
        observations: BTreeMap::new(),
    };
    for s in samples {
        let ev = property.evaluate(&s.algebra, s.seed);
        for (k, v) in ev.observations {
            *result.observations.entry(k).or_default() += v;
        }
        if let Some(f) = ev.finding {
            let classification = if s.algebra.is_semi_associative() {
                Classification::Discrepancy
            } else {
                Classification::InvalidInput
            };
            result.counterexamples.push(Counterexample {
                seed: s.seed,
                algebra: json::algebra_to_json(&s.algebra),
                witness: f.witness,
                detail: f.detail,
                classification,
            });
        }
    }
    result
}

pub fn run_harness(property_id: &str, spec: &GeneratorSpec) -> Result<HarnessResult> {
    let property = Property::from_id(property_id)?;
    let generated = generate(spec)?;
    let mut result = run_on(property, &generated.samples);
    result.spec = Some(spec.clone());
    Ok(result)
}

fn e(i: usize) -> SparseVec {
    vec![(i, Rational::one())]
}

fn dense(v: &SparseVec, n: usize) -> Vec<Rational> {
    sparse::to_dense(v, n)
}

fn derived_in_center(a: &ThreeAlgebra) -> Outcome {
    let d = structure::derived_algebra(a);
    let z = structure::center(a);
    for v in d.basis_vectors() {
        if !z.contains(&v)? {
            let w: Vec<usize> = v.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, _)| i).collect();
            return Ok(Some(Finding::new(&w, "derived-algebra basis vector outside the center")));
        }
    }
    Ok(None)
}

fn product_span(a: &ThreeAlgebra) -> Outcome {
    let n = a.dim();
    for ((i, j, k), w) in a.orbits() {
        for s in [i, j, k] {
            if w.len() == 1 && w[0].0 == s {
                return Ok(Some(Finding::new(&[i, j, k], format!("product is a multiple of e{}", s + 1))));
            }
        }
        let span = Subspace::coordinate(n, &[i, j]);
        if span.contains(&dense(w, n))? {
            return Ok(Some(Finding::new(&[i, j, k], "product lies in <e_i,e_j>")));
        }
    }
    Ok(None)
}

/// Basis triples with distinct indices first; otherwise perturb the third
/// argument `e_k` (a repeat of `e_i` or `e_j`) to `e_k + e_m`.
pub fn find_independent_triple(a: &ThreeAlgebra) -> Option<[Vec<Rational>; 3]> {
    let n = a.dim();
    let unit = |i| exactlin::unit(n, i);
    for ((i, j, k), _) in a.orbits() {
        if k != i && k != j {
            return Some([unit(i), unit(j), unit(k)]);
        }
    }
    for ((i, j, k), w) in a.orbits() {
        for m in (0..n).filter(|&m| m != i && m != j) {
            let z = sparse::add_scaled(&e(k), &Rational::one(), &e(m));
            let p = a.product_sparse(&e(i), &e(j), &z);
            if !p.is_empty() {
                return Some([unit(i), unit(j), dense(&z, n)]);
            }
            debug_assert!(!w.is_empty());
        }
    }
    None
}

fn independent_triple(a: &ThreeAlgebra) -> Outcome {
    if a.is_abelian() {
        return Ok(None);
    }
    let Some([x, y, z]) = find_independent_triple(a) else {
        return Ok(Some(Finding::new(&[], "no independent triple with a nonzero product")));
    };
    let n = a.dim();
    let independent = Subspace::span(n, &[x.clone(), y.clone(), z.clone()])?.dim() == 3;
    let nonzero = a.triple_product(&x, &y, &z)?.iter().any(|c| !c.is_zero());
    if !(independent && nonzero) {
        return Ok(Some(Finding::new(&[], "search returned an invalid triple")));
    }
    Ok(None)
}

fn candidate_subspaces(a: &ThreeAlgebra) -> Result<Vec<Subspace>> {
    let n = a.dim();
    let mut out = vec![Subspace::zero(n), Subspace::full(n), structure::center(a), structure::derived_algebra(a)];
    for i in 0..n {
        out.push(Subspace::coordinate(n, &[i]));
        let rest: Vec<usize> = (0..n).filter(|&j| j != i).collect();
        out.push(Subspace::coordinate(n, &rest));
    }
    let mut unique: Vec<Subspace> = Vec::new();
    for s in out {
        if !unique.contains(&s) {
            unique.push(s);
        }
    }
    Ok(unique)
}

fn ideal_lattice(a: &ThreeAlgebra) -> Outcome {
    let n = a.dim();
    let full = Subspace::full(n);
    let z = structure::center(a);
    if !structure::is_ideal(a, &z)? {
        return Ok(Some(Finding::new(&[], "center is not an ideal")));
    }
    let subspaces = candidate_subspaces(a)?;
    for (idx, b) in subspaces.iter().enumerate() {
        let baa = structure::triple_span(a, b, &full, &full)?;
        let aba = structure::triple_span(a, &full, b, &full)?;
        if !baa.is_subspace_of(&aba)? {
            return Ok(Some(Finding::new(&[], format!("{{B,A,A}} not in {{A,B,A}} for candidate {idx}"))));
        }
    }
    let ideals: Vec<&Subspace> = subspaces
        .iter()
        .filter(|b| structure::is_ideal(a, b).unwrap_or(false))
        .collect();
    // Sums, intersections and {X,Y,A} are symmetric in X and Y.
    for (k, x) in ideals.iter().enumerate() {
        for y in &ideals[k..] {
            structure::ideal_sum(a, x, y)?;
            structure::ideal_intersect(a, x, y)?;
            structure::ideal_product(a, x, y, &full)?;
        }
        let (q, proj) = structure::quotient(a, x)?;
        if !proj.is_homomorphism() {
            return Ok(Some(Finding::new(&[], "quotient projection is not a homomorphism")));
        }
        if proj.kernel() != **x {
            return Ok(Some(Finding::new(&[], "quotient projection kernel differs from the ideal")));
        }
        if !q.is_semi_associative() {
            return Ok(Some(Finding::new(&[], "quotient fails the axioms")));
        }
    }
    Ok(None)
}

/// `{x, y, v}`
fn lop(a: &ThreeAlgebra, x: &SparseVec, y: &SparseVec, v: &SparseVec) -> SparseVec {
    a.product_sparse(x, y, v)
}

/// `{v, x, y}`
fn rop(a: &ThreeAlgebra, x: &SparseVec, y: &SparseVec, v: &SparseVec) -> SparseVec {
    a.product_sparse(v, x, y)
}

fn sum(vs: &[SparseVec]) -> SparseVec {
    vs.iter().fold(SparseVec::new(), |acc, v| sparse::add_scaled(&acc, &Rational::one(), v))
}

fn sub(x: &SparseVec, y: &SparseVec) -> SparseVec {
    sparse::add_scaled(x, &Rational::from(-1), y)
}

/// Operator identities evaluated on every basis vector `e_5`:
///
/// ```text
/// L(x1,x2) = -L(x2,x1)
/// L(x1,x2)L(x3,x4) = L(x1,{x2,x3,x4})
/// L(x1,{x2,x3,x4}) = R({x2,x3,x4},x1) - R(x1,x2)R(x3,x4)
/// L(x1,x2)L(x3,x4) = L(x3,x1)L(x2,x4) = L(x4,x2)R(x3,x1) + L(x3,x1)R(x4,x2)
/// R(x3,x4)(R(x1,x2) + R(x2,x1)) = 0
/// ```
pub fn check_operator_identities(a: &ThreeAlgebra) -> Option<Finding> {
    let n = a.dim();
    for x1 in 0..n {
        for x2 in 0..n {
            for x5 in 0..n {
                let (p, q, v) = (e(x1), e(x2), e(x5));
                if lop(a, &p, &q, &v) != sparse::neg(&lop(a, &q, &p, &v)) {
                    return Some(Finding::new(&[x1, x2, x5], "left-operator skew-symmetry"));
                }
            }
        }
    }
    for x1 in 0..n {
        for x2 in 0..n {
            for x3 in 0..n {
                for x4 in 0..n {
                    let (e1, e2, e3, e4) = (e(x1), e(x2), e(x3), e(x4));
                    let w234 = a.basis_product(x2, x3, x4).clone();
                    for x5 in 0..n {
                        let t = [x1, x2, x3, x4, x5];
                        let v = e(x5);
                        let l34 = lop(a, &e3, &e4, &v);
                        let l12l34 = lop(a, &e1, &e2, &l34);
                        let l1w = lop(a, &e1, &w234, &v);
                        if l12l34 != l1w {
                            return Some(Finding::new(&t, "L(x1,x2)L(x3,x4) = L(x1,{x2,x3,x4})"));
                        }
                        let rw1 = rop(a, &w234, &e1, &v);
                        let r12r34 = rop(a, &e1, &e2, &rop(a, &e3, &e4, &v));
                        if l1w != sub(&rw1, &r12r34) {
                            return Some(Finding::new(&t, "L(x1,{x2,x3,x4}) = R({x2,x3,x4},x1) - R(x1,x2)R(x3,x4)"));
                        }
                        let l31l24 = lop(a, &e3, &e1, &lop(a, &e2, &e4, &v));
                        if l12l34 != l31l24 {
                            return Some(Finding::new(&t, "L(x1,x2)L(x3,x4) = L(x3,x1)L(x2,x4)"));
                        }
                        let mixed = sum(&[
                            lop(a, &e4, &e2, &rop(a, &e3, &e1, &v)),
                            lop(a, &e3, &e1, &rop(a, &e4, &e2, &v)),
                        ]);
                        if l31l24 != mixed {
                            return Some(Finding::new(&t, "L(x3,x1)L(x2,x4) = L(x4,x2)R(x3,x1) + L(x3,x1)R(x4,x2)"));
                        }
                        let rr = sum(&[rop(a, &e1, &e2, &v), rop(a, &e2, &e1, &v)]);
                        if !rop(a, &e3, &e4, &rr).is_empty() {
                            return Some(Finding::new(&t, "R(x3,x4)(R(x1,x2) + R(x2,x1)) = 0"));
                        }
                    }
                }
            }
        }
    }
    None
}

fn operator_identities(a: &ThreeAlgebra) -> Outcome {
    Ok(check_operator_identities(a))
}

fn commuting(basis: &[Matrix], what: &str) -> Option<Finding> {
    for (i, x) in basis.iter().enumerate() {
        for (j, y) in basis.iter().enumerate().skip(i + 1) {
            if !x.commutator(y).is_zero() {
                return Some(Finding::new(&[i, j], format!("{what} basis maps {} and {} do not commute", i + 1, j + 1)));
            }
        }
    }
    None
}

fn t_abelian(a: &ThreeAlgebra) -> Outcome {
    let t = maps::span_space(a, MapKind::TSpan)?;
    Ok(commuting(&t.basis(), "T(A)"))
}

fn inner_derivations(a: &ThreeAlgebra) -> Outcome {
    let n = a.dim();
    for i in 0..n {
        for j in 0..n {
            let s = maps::left_basis(a, i, j).sub(&maps::right_basis(a, i, j));
            if !maps::is_derivation(a, &s) {
                return Ok(Some(Finding::new(&[i, j], "S(e_i,e_j) is not a derivation")));
            }
        }
    }
    let s = maps::span_space(a, MapKind::SSpan)?;
    let sb = s.basis();
    if let Some(f) = commuting(&sb, "S(A)") {
        return Ok(Some(f));
    }
    let der = maps::derivation_space(a);
    if !s.is_subspace_of(&der)? {
        return Ok(Some(Finding::new(&[], "S(A) not inside Der(A)")));
    }
    for (i, x) in sb.iter().enumerate() {
        for (j, d) in der.basis().iter().enumerate() {
            if !s.contains(&x.commutator(d)) {
                return Ok(Some(Finding::new(&[i, j], "[S(A), Der(A)] leaves S(A)")));
            }
        }
    }
    Ok(None)
}

fn centroid(a: &ThreeAlgebra) -> Outcome {
    let n = a.dim();
    let g = maps::centroid_space(a);
    if !g.contains(&Matrix::identity(n)) {
        return Ok(Some(Finding::new(&[], "identity map outside the centroid")));
    }
    for (i, phi) in g.basis().iter().enumerate() {
        if maps::centroid_slots(a, phi) != [true; 3] {
            return Ok(Some(Finding::new(&[i], "centroid element fails a slot law")));
        }
    }
    if !g.is_commutator_closed() {
        return Ok(Some(Finding::new(&[], "centroid not closed under commutators")));
    }
    Ok(None)
}

/// Pairs `(D, φ)` from the bases, all of them if few, otherwise a seeded
/// sample of 24.
fn sample_pairs(nd: usize, ng: usize, seed: u64) -> Vec<(usize, usize)> {
    let all: Vec<(usize, usize)> = (0..nd).flat_map(|d| (0..ng).map(move |g| (d, g))).collect();
    if all.len() <= 24 {
        return all;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut picked: Vec<(usize, usize)> = all.choose_multiple(&mut rng, 24).copied().collect();
    picked.sort();
    picked
}

fn centroid_derivations(a: &ThreeAlgebra, seed: u64, ev: &mut Evaluation) -> Outcome {
    let g = maps::centroid_space(a);
    let der = maps::derivation_space(a);
    let derc = maps::central_derivation_space(a);
    if *g.intersect(&der, MapKind::DerC)?.space() != *derc.space() {
        return Ok(Some(Finding::new(&[], "central derivations differ from centroid ∩ Der")));
    }
    let gb = g.basis();
    let db = der.basis();
    for (d, p) in sample_pairs(db.len(), gb.len(), seed) {
        let (dm, phi) = (&db[d], &gb[p]);
        let w = [d, p];
        if !maps::is_derivation(a, &phi.mul(dm)) {
            return Ok(Some(Finding::new(&w, "φD is not a derivation")));
        }
        let bracket = dm.commutator(phi);
        if !g.contains(&bracket) {
            return Ok(Some(Finding::new(&w, "[D, φ] outside the centroid")));
        }
        let dphi = dm.mul(phi);
        let in_g = g.contains(&dphi);
        let in_c = derc.contains(&phi.mul(dm));
        ev.observe(if in_g { "Dφ∈Γ" } else { "Dφ∉Γ" });
        if in_g != in_c {
            return Ok(Some(Finding::new(&w, "Dφ ∈ Γ and φD ∈ Der_C disagree")));
        }
        let in_der = der.contains(&dphi);
        let br_c = derc.contains(&bracket);
        ev.observe(if in_der { "Dφ∈Der" } else { "Dφ∉Der" });
        if in_der != br_c {
            return Ok(Some(Finding::new(&w, "Dφ ∈ Der and [D,φ] ∈ Der_C disagree")));
        }
    }
    Ok(None)
}

fn sub_adjacent_filippov(a: &ThreeAlgebra) -> Outcome {
    let l = sub_adjacent(a, SubAdjacentMode::Unchecked)?;
    Ok(l.check_filippov()
        .first_witness()
        .map(|v| Finding {
            witness: v.witness.clone(),
            detail: "Filippov identity fails for the cyclic-sum bracket".into(),
        }))
}

/// `S(x,y)v = {x,y,v} - {v,x,y}`
fn s_apply(a: &ThreeAlgebra, x: &SparseVec, y: &SparseVec, v: &SparseVec) -> SparseVec {
    sub(&lop(a, x, y, v), &rop(a, x, y, v))
}

fn sub_adjacent_structure(a: &ThreeAlgebra) -> Outcome {
    let n = a.dim();
    let l = sub_adjacent(a, SubAdjacentMode::Unchecked)?;
    for (i, d) in maps::derivation_space(a).basis().iter().enumerate() {
        if !l.is_derivation(d) {
            return Ok(Some(Finding::new(&[i], "derivation of A is not a derivation of A_c")));
        }
    }
    // S([x1,x2,x3]_c, x4) = S(x2,x3)S(x1,x4) + S(x1,x2)S(x3,x4) - S(x1,x3)S(x2,x4)
    for x1 in 0..n {
        for x2 in 0..n {
            for x3 in 0..n {
                let b = l.basis_bracket(x1, x2, x3).clone();
                for x4 in 0..n {
                    for x5 in 0..n {
                        let (e1, e2, e3, e4, v) = (e(x1), e(x2), e(x3), e(x4), e(x5));
                        let lhs = s_apply(a, &b, &e4, &v);
                        let rhs = sub(
                            &sum(&[
                                s_apply(a, &e2, &e3, &s_apply(a, &e1, &e4, &v)),
                                s_apply(a, &e1, &e2, &s_apply(a, &e3, &e4, &v)),
                            ]),
                            &s_apply(a, &e1, &e3, &s_apply(a, &e2, &e4, &v)),
                        );
                        if lhs != rhs {
                            return Ok(Some(Finding::new(&[x1, x2, x3, x4, x5], "S-bracket identity")));
                        }
                    }
                }
            }
        }
    }
    for (idx, b) in candidate_subspaces(a)?.iter().enumerate() {
        if structure::is_ideal(a, b)? {
            if !l.is_ideal(b)? {
                return Ok(Some(Finding::new(&[], format!("ideal candidate {idx} is not an ideal of A_c"))));
            }
            let (q, _) = structure::quotient(a, b)?;
            let mut lhs = sub_adjacent(&q, SubAdjacentMode::Unchecked)?;
            let mut rhs = l.quotient(b)?;
            lhs.set_label(None);
            rhs.set_label(None);
            if lhs != rhs {
                return Ok(Some(Finding::new(&[], format!("quotient by candidate {idx} does not commute with A_c"))));
            }
        }
    }
    Ok(None)
}

fn multiplications_are_lie_derivations(a: &ThreeAlgebra) -> Outcome {
    let n = a.dim();
    let l = sub_adjacent(a, SubAdjacentMode::Unchecked)?;
    for i in 0..n {
        for j in 0..n {
            if !l.is_derivation(&maps::left_basis(a, i, j)) {
                return Ok(Some(Finding::new(&[i, j], "L(e_i,e_j) is not a derivation of A_c")));
            }
            if !l.is_derivation(&maps::right_basis(a, i, j)) {
                return Ok(Some(Finding::new(&[i, j], "R(e_i,e_j) is not a derivation of A_c")));
            }
        }
    }
    Ok(None)
}

/// Number of corrupted modules tried per algebra.
pub const CORRUPTIONS: usize = 20;

/// A perturbation of `dm`: one or two random entries of one action
/// matrix change by a random nonzero amount, or one action is zeroed.
pub fn corrupt(dm: &DoubleModule, rng: &mut ChaCha8Rng) -> DoubleModule {
    let n = dm.algebra().dim();
    let m = dm.vdim();
    let mut out = dm.clone();
    if n < 2 || m == 0 {
        return out;
    }
    let kind = rng.gen_range(0..5);
    let entries = if kind == 4 { 2 } else { 1 };
    for _ in 0..entries {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n);
        let use_phi = rng.gen_bool(0.5);
        if use_phi && i == j {
            j = (i + 1) % n;
        }
        let base = if use_phi { out.phi(i, j).clone() } else { out.psi(i, j).clone() };
        let next = if kind == 3 {
            Matrix::zeros(m, m)
        } else {
            let (r, c) = (rng.gen_range(0..m), rng.gen_range(0..m));
            let delta = Rational::from([-2i64, -1, 1, 2][rng.gen_range(0..4)]);
            let mut flat = Matrix::zeros(m, m).into_flat();
            flat[r * m + c] = delta;
            base.add(&Matrix::from_flat(m, m, flat).expect("m² entries"))
        };
        if use_phi {
            out.set_phi(i, j, next).expect("valid pair");
        } else {
            out.set_psi(i, j, next).expect("valid pair");
        }
    }
    out
}

/// Module identities hold ⇔ the semidirect product is semi-associative,
/// compared as two independent verdicts.
pub fn biconditional_agrees(dm: &DoubleModule) -> (bool, bool) {
    (dm.is_double_module(), dm.semidirect_unchecked().is_semi_associative())
}

fn semidirect_biconditional(a: &ThreeAlgebra, seed: u64, ev: &mut Evaluation) -> Outcome {
    let reg = DoubleModule::regular(a);
    let (mp, sp) = biconditional_agrees(&reg);
    if !(mp && sp) {
        return Ok(Some(Finding::new(&[], format!("regular module: module {mp}, semidirect {sp}"))));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_b1c0);
    let zero = DoubleModule::zero(a.clone(), a.dim());
    for c in 0..CORRUPTIONS {
        let base = if c % 2 == 0 { &reg } else { &zero };
        let dm = corrupt(base, &mut rng);
        let (mp, sp) = biconditional_agrees(&dm);
        ev.observe(match (mp, sp) {
            (true, true) => "both-pass",
            (false, false) => "both-fail",
            (true, false) => "module-pass-semidirect-fail",
            (false, true) => "module-fail-semidirect-pass",
        });
        if mp != sp {
            return Ok(Some(Finding::new(
                &[c],
                format!("corruption {c}: module check {mp}, semidirect check {sp}"),
            )));
        }
    }
    Ok(None)
}

fn module_constructions(a: &ThreeAlgebra) -> Outcome {
    let reg = DoubleModule::regular(a);
    for (what, dm) in [("regular", reg.clone()), ("dual regular", reg.dual()?)] {
        if let Some(v) = dm.check().first_witness() {
            return Ok(Some(Finding {
                witness: v.witness.clone(),
                detail: format!("{what} module fails {}", v.axiom),
            }));
        }
        // induce_lie_module minus its repeated checks.
        let lm = dm.induced_rho_unchecked(sub_adjacent(a, SubAdjacentMode::Strict)?)?;
        if let Some(v) = lm.check()?.first_witness() {
            return Ok(Some(Finding {
                witness: v.witness.clone(),
                detail: format!("induced 3-Lie module of the {what} module fails {}", v.axiom),
            }));
        }
    }
    if reg.dual()?.dual()? != reg {
        return Ok(Some(Finding::new(&[], "dual of the dual differs from the original")));
    }
    Ok(None)
}

fn module_derived_identities(a: &ThreeAlgebra) -> Outcome {
    let reg = DoubleModule::regular(a);
    for (what, dm) in [("regular", reg.clone()), ("dual regular", reg.dual()?)] {
        if let Some(v) = dm.check_derived().first_witness() {
            return Ok(Some(Finding {
                witness: v.witness.clone(),
                detail: format!("{what} module fails derived identity {}", v.axiom),
            }));
        }
    }
    Ok(None)
}

fn unlabeled(a: &ThreeAlgebra) -> ThreeAlgebra {
    let mut a = a.clone();
    a.set_label(None);
    a
}

fn double_extension(a: &ThreeAlgebra, ev: &mut Evaluation) -> Outcome {
    let zero = Cocycle::zero(a.clone());
    let ext = cocycle::double_extension(&zero)?;
    let sd = DoubleModule::regular(a).dual()?.semidirect_unchecked();
    if unlabeled(&ext) == unlabeled(&sd) {
        ev.observe("zero-cocycle-matches-semidirect");
    } else {
        return Ok(Some(Finding::new(&[], "zero-cocycle extension differs from the dual semidirect product")));
    }
    let basis = cocycle::cocycle_space(a)?;
    ev.observations.insert("cocycles".into(), basis.len() as u64);
    for (idx, c) in basis.iter().enumerate() {
        if !c.check().passed {
            return Ok(Some(Finding::new(&[idx], "basis cocycle fails the cocycle identities")));
        }
        if !cocycle::twist(sd.clone(), c).is_semi_associative() {
            return Ok(Some(Finding::new(&[idx], "double extension by a basis cocycle fails the axioms")));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn two_step_reproduces_n4() {
        let a = two_step_algebra(4, 3, vec![((0, 1, 2), e(3))]).unwrap();
        assert_eq!(a, unlabeled(&catalog::n4()));
        assert!(a.is_semi_associative());
        let a3 = two_step_algebra(3, 2, vec![((0, 1, 1), e(2))]).unwrap();
        assert_eq!(a3, unlabeled(&catalog::a3()));
        assert!(two_step_algebra(3, 2, vec![((0, 1, 1), e(0))]).is_err());
    }

    #[test]
    fn generation_is_deterministic() {
        for family in Family::ALL {
            let spec = GeneratorSpec::new(4, family, 99, 6);
            let a = generate(&spec).unwrap();
            let b = generate(&spec).unwrap();
            assert_eq!(a, b);
            for s in &a.samples {
                assert!(s.algebra.is_semi_associative());
                let one = GeneratorSpec {
                    seed: s.seed,
                    trials: 1,
                    ..spec.clone()
                };
                assert_eq!(generate(&one).unwrap().samples[0], *s);
            }
        }
    }

    #[test]
    fn two_step_is_mostly_non_abelian() {
        let g = generate(&GeneratorSpec::new(6, Family::TwoStep, 1, 20)).unwrap();
        assert!(g.algebras().filter(|a| !a.is_abelian()).count() >= 15);
        assert_eq!(g.acceptance_rate(), 1.0);
    }

    #[test]
    fn unknown_property() {
        let spec = GeneratorSpec::new(3, Family::Abelian, 0, 1);
        assert!(matches!(run_harness("nope", &spec), Err(Error::UnknownProperty(_))));
    }

    #[test]
    fn catalog_algebras_satisfy_every_property() {
        let samples = [catalog::a3(), catalog::n4()].map(|algebra| Sample { seed: 0, algebra });
        for p in Property::ALL {
            let r = run_on(p, &samples);
            assert!(r.passed(), "{p}: {:?}", r.counterexamples);
        }
    }

    #[test]
    fn abelian_operator_identities_are_trivial() {
        let r = run_harness("operator_identities", &GeneratorSpec::new(4, Family::Abelian, 0, 3)).unwrap();
        assert!(r.passed());
        assert_eq!(r.trials, 3);
    }

    #[test]
    fn unverified_input_is_classified() {
        let samples = [Sample {
            seed: 7,
            algebra: catalog::bad_e123_e1(),
        }];
        let r = run_on(Property::DerivedInCenter, &samples);
        assert_eq!(r.counterexamples.len(), 1);
        assert_eq!(r.counterexamples[0].classification, Classification::InvalidInput);
    }

    #[test]
    fn independent_triple_for_a3_uses_perturbation() {
        let [x, y, z] = find_independent_triple(&catalog::a3()).unwrap();
        assert_eq!(x, exactlin::unit(3, 0));
        assert_eq!(y, exactlin::unit(3, 1));
        assert_eq!(z, vec![Rational::zero(), Rational::one(), Rational::one()]);
    }
}
