//! The `triad` command line: parse JSON inputs, run one library operation,
//! print a text or JSON report.
//!
//! Exit status: 0 when the checked property holds or the construction
//! succeeded, 1 when a checked property fails, 2 for usage and input errors.

use std::fmt::Write as _;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use exactlin::{Rational, Subspace};
use serde::Serialize;
use triad::cocycle::{self, Cocycle};
use triad::json::{self, AlgebraJson, CocycleJson};
use triad::lab::{self, Family, GeneratorSpec, Property};
use triad::lie::{self, SubAdjacentMode, ThreeLieAlgebra};
use triad::maps::{self, MapKind, MapSpace};
use triad::module::DoubleModule;
use triad::{structure, AxiomReport, Error, ThreeAlgebra};

pub const MAX_DIM_VAR: &str = "TRIAD_MAX_DIM";
pub const DEFAULT_MAX_DIM: usize = 10;

#[derive(Parser, Debug)]
#[command(name = "triad", version, about = "Exact computations with semi-associative 3-algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(clap::Args, Debug)]
struct Input {
    /// JSON input file, or `-` for standard input.
    #[arg(long, short)]
    input: PathBuf,
}

#[derive(clap::Args, Debug)]
struct ModuleInput {
    #[command(flatten)]
    input: Input,
    /// Read an algebra and use its regular module.
    #[arg(long)]
    regular: bool,
}

#[derive(clap::Args, Debug)]
struct GenArgs {
    #[arg(long)]
    dim: usize,
    #[arg(long, default_value = "two-step")]
    family: Family,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    trials: usize,
    /// Comma-separated coefficient set, e.g. `-2,-1,0,1,2`.
    #[arg(long, allow_hyphen_values = true)]
    coeffs: Option<String>,
    /// Maximum number of orbits per random-filtered attempt.
    #[arg(long)]
    sparsity: Option<usize>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SpanKind {
    #[value(name = "L", alias = "l")]
    L,
    #[value(name = "R", alias = "r")]
    R,
    #[value(name = "S", alias = "s")]
    S,
    #[value(name = "T", alias = "t")]
    T,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check both mixing identities on every basis 5-tuple.
    Check(Input),
    /// Evaluate `{x, y, z}`.
    Product {
        #[command(flatten)]
        input: Input,
        /// Comma-separated coordinates.
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, allow_hyphen_values = true)]
        y: String,
        #[arg(long, allow_hyphen_values = true)]
        z: String,
    },
    /// The derived algebra, span of all products.
    Derived(Input),
    /// The center, or the centralizer of `--subspace`.
    Center {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        subspace: Option<PathBuf>,
    },
    /// Whether a subspace is an ideal (and a subalgebra).
    IdealTest {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        subspace: PathBuf,
    },
    /// Quotient by an ideal.
    Quotient {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        subspace: PathBuf,
    },
    /// Basis of the derivation algebra.
    Derivations(Input),
    /// Basis of the central derivations.
    CentralDerivations(Input),
    /// Basis of the centroid.
    Centroid(Input),
    /// Span of the multiplication operators L, R, S = L − R or T = L + R.
    Spans {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum)]
        kind: SpanKind,
    },
    /// The sub-adjacent 3-Lie algebra of a verified algebra.
    Subadjacent(Input),
    /// Check the Filippov identity of a 3-Lie algebra.
    Filippov(Input),
    /// Check the double-module identities.
    ModuleCheck {
        #[command(flatten)]
        module: ModuleInput,
        /// Also check the coefficient identities derived from them.
        #[arg(long)]
        derived: bool,
    },
    /// Semidirect product with a double module.
    Semidirect(ModuleInput),
    /// Dual of a double module.
    Dual(ModuleInput),
    /// Check the cocycle identities.
    CocycleCheck(Input),
    /// Canonical basis of the cocycle space.
    CocycleSpace {
        #[command(flatten)]
        input: Input,
        /// Emit only the given basis cocycle (1-based).
        #[arg(long)]
        index: Option<usize>,
    },
    /// Double extension by a cocycle.
    Extend(Input),
    /// Generate algebras from a family.
    Generate {
        #[command(flatten)]
        gen: GenArgs,
        /// Emit only the given sample (1-based).
        #[arg(long)]
        index: Option<usize>,
    },
    /// Run a registered property (or `all`) over generated algebras.
    Harness {
        /// Property id, or `all`.
        property: String,
        #[command(flatten)]
        gen: GenArgs,
        /// Write one JSON file per counterexample into this directory.
        #[arg(long)]
        counterexamples: Option<PathBuf>,
    },
}

/// Outcome of a failed run, mapped onto the exit-code contract.
#[derive(Debug)]
enum Failure {
    /// Bad flags, unreadable or malformed input.
    Input(String),
    /// A required property does not hold.
    Property(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NotAnIdeal | Error::NotVerified(_) | Error::Discrepancy(_) | Error::GeneratorExhausted { .. } => {
                Failure::Property(e.to_string())
            }
            _ => Failure::Input(e.to_string()),
        }
    }
}

impl From<exactlin::ShapeError> for Failure {
    fn from(e: exactlin::ShapeError) -> Self {
        Failure::Input(e.to_string())
    }
}

/// A finished report. `verdict` is `None` for plain computations.
struct Report {
    text: String,
    json: String,
    verdict: Option<bool>,
}

impl Report {
    fn info(text: String, json: String) -> Self {
        Report { text, json, verdict: None }
    }
}

/// Runs the command line and returns the exit status.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            let _ = if code == 0 {
                stdout.write_all(rendered.as_bytes())
            } else {
                stderr.write_all(rendered.as_bytes())
            };
            return code;
        }
    };
    let result = max_dim().and_then(|max| dispatch(&cli.command, max));
    match result {
        Ok(rep) => {
            let mut body = match cli.format {
                Format::Text => rep.text,
                Format::Json => rep.json,
            };
            if !body.ends_with('\n') {
                body.push('\n');
            }
            let written = match &cli.output {
                Some(path) => std::fs::write(path, body.as_bytes()).map_err(|e| format!("{}: {e}", path.display())),
                None => stdout.write_all(body.as_bytes()).map_err(|e| e.to_string()),
            };
            if let Err(e) = written {
                let _ = writeln!(stderr, "error: {e}");
                return 2;
            }
            match rep.verdict {
                Some(false) => 1,
                _ => 0,
            }
        }
        Err(Failure::Input(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            2
        }
        Err(Failure::Property(msg)) => {
            let _ = writeln!(stderr, "fail: {msg}");
            1
        }
    }
}

fn max_dim() -> Result<usize, Failure> {
    match std::env::var(MAX_DIM_VAR) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Failure::Input(format!("{MAX_DIM_VAR} must be a non-negative integer, got {v:?}"))),
        Err(_) => Ok(DEFAULT_MAX_DIM),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Failure::Input(format!("stdin: {e}")))?;
        return Ok(s);
    }
    std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn with_path<T>(path: &Path, r: triad::Result<T>) -> Result<T, Failure> {
    r.map_err(|e| match Failure::from(e) {
        Failure::Input(m) => Failure::Input(format!("{}: {m}", path.display())),
        other => other,
    })
}

fn load_algebra(i: &Input, max: usize) -> Result<ThreeAlgebra, Failure> {
    with_path(&i.input, json::parse_algebra(&read(&i.input)?, max))
}

fn load_verified(i: &Input, max: usize) -> Result<ThreeAlgebra, Failure> {
    let a = load_algebra(i, max)?;
    if !a.is_semi_associative() {
        return Err(Failure::Property(format!(
            "{}: the algebra is not semi-associative (run `triad check`)",
            i.input.display()
        )));
    }
    Ok(a)
}

fn load_module(m: &ModuleInput, max: usize) -> Result<DoubleModule, Failure> {
    if m.regular {
        return Ok(DoubleModule::regular(&load_algebra(&m.input, max)?));
    }
    with_path(&m.input.input, json::parse_double_module(&read(&m.input.input)?, max))
}

fn load_subspace(path: &Path, max: usize) -> Result<Subspace, Failure> {
    with_path(path, json::parse_subspace(&read(path)?, max))
}

fn parse_vector(s: &str, n: usize) -> Result<Vec<Rational>, Failure> {
    let v: Vec<Rational> = s
        .split(',')
        .map(|t| json::parse_rational(t).map_err(Failure::from))
        .collect::<Result<_, _>>()?;
    if v.len() != n {
        return Err(Failure::Input(format!("vector {s:?} has {} coordinates, expected {n}", v.len())));
    }
    Ok(v)
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("plain data serializes")
}

#[derive(Serialize)]
struct CheckJson<'a> {
    command: &'a str,
    passed: bool,
    checked: &'a [String],
    violations: &'a [triad::Violation],
}

fn check_report(command: &str, what: &str, rep: &AxiomReport) -> Report {
    Report {
        text: rep.to_text(what),
        json: to_json(&CheckJson {
            command,
            passed: rep.passed,
            checked: &rep.checked,
            violations: &rep.violations,
        }),
        verdict: Some(rep.passed),
    }
}

fn dispatch(cmd: &Command, max: usize) -> Result<Report, Failure> {
    match cmd {
        Command::Check(i) => {
            let a = load_algebra(i, max)?;
            Ok(check_report("check", "axioms", &a.check_semi_associative()))
        }
        Command::Product { input, x, y, z } => {
            let a = load_algebra(input, max)?;
            let n = a.dim();
            let (x, y, z) = (parse_vector(x, n)?, parse_vector(y, n)?, parse_vector(z, n)?);
            let v = a.triple_product(&x, &y, &z)?;
            Ok(Report::info(
                format!("{{x, y, z}} = {}", combination(&v)),
                to_json(&serde_json::json!({ "command": "product", "value": v })),
            ))
        }
        Command::Derived(i) => {
            let a = load_algebra(i, max)?;
            Ok(subspace_report("derived algebra", &structure::derived_algebra(&a)))
        }
        Command::Center { input, subspace } => {
            let a = load_algebra(input, max)?;
            match subspace {
                None => Ok(subspace_report("center", &structure::center(&a))),
                Some(p) => {
                    let v = load_subspace(p, max)?;
                    Ok(subspace_report("centralizer", &structure::centralizer(&a, &v)?))
                }
            }
        }
        Command::IdealTest { input, subspace } => {
            let a = load_algebra(input, max)?;
            let b = load_subspace(subspace, max)?;
            let ideal = structure::is_ideal(&a, &b)?;
            let sub = structure::is_subalgebra(&a, &b)?;
            let yes = |b: bool| if b { "yes" } else { "no" };
            Ok(Report {
                text: format!("ideal: {}\nsubalgebra: {}", yes(ideal), yes(sub)),
                json: to_json(&serde_json::json!({
                    "command": "ideal-test",
                    "passed": ideal,
                    "ideal": ideal,
                    "subalgebra": sub,
                })),
                verdict: Some(ideal),
            })
        }
        Command::Quotient { input, subspace } => {
            let a = load_algebra(input, max)?;
            let b = load_subspace(subspace, max)?;
            let (q, proj) = structure::quotient(&a, &b)?;
            let mut text = algebra_text(&q);
            text.push_str("\nprojection:");
            for row in proj.map.row_vecs() {
                let _ = write!(text, "\n  [{}]", join(&row));
            }
            Ok(Report::info(text, json::algebra_to_string(&q)))
        }
        Command::Derivations(i) => Ok(map_space_report(&maps::derivation_space(&load_algebra(i, max)?))),
        Command::CentralDerivations(i) => {
            Ok(map_space_report(&maps::central_derivation_space(&load_algebra(i, max)?)))
        }
        Command::Centroid(i) => Ok(map_space_report(&maps::centroid_space(&load_algebra(i, max)?))),
        Command::Spans { input, kind } => {
            let kind = match kind {
                SpanKind::L => MapKind::LSpan,
                SpanKind::R => MapKind::RSpan,
                SpanKind::S => MapKind::SSpan,
                SpanKind::T => MapKind::TSpan,
            };
            Ok(map_space_report(&maps::span_space(&load_algebra(input, max)?, kind)?))
        }
        Command::Subadjacent(i) => {
            let a = load_algebra(i, max)?;
            let l = lie::sub_adjacent(&a, SubAdjacentMode::Strict)?;
            Ok(Report::info(lie_text(&l), json::lie_to_string(&l)))
        }
        Command::Filippov(i) => {
            let l = with_path(&i.input, json::parse_lie(&read(&i.input)?, max))?;
            Ok(check_report("filippov", "identity", &l.check_filippov()))
        }
        Command::ModuleCheck { module, derived } => {
            let dm = load_module(module, max)?;
            let mut rep = dm.check();
            if *derived {
                rep.merge(dm.check_derived());
            }
            Ok(check_report("module-check", "module identities", &rep))
        }
        Command::Semidirect(m) => {
            let dm = load_module(m, max)?;
            let sd = dm.semidirect()?;
            let text = format!(
                "{}\n{}\n{}",
                algebra_text(&sd.algebra),
                sd.algebra_report.to_text("axioms"),
                sd.module_report.to_text("module identities")
            );
            Ok(Report {
                text,
                json: json::algebra_to_string(&sd.algebra),
                verdict: Some(sd.algebra_report.passed),
            })
        }
        Command::Dual(m) => {
            let d = load_module(m, max)?.dual()?;
            Ok(Report::info(
                format!("dual module: algebra dim {}, module dim {}", d.algebra().dim(), d.vdim()),
                json::module_to_string(&d),
            ))
        }
        Command::CocycleCheck(i) => {
            let c = with_path(&i.input, json::parse_cocycle(&read(&i.input)?, max))?;
            Ok(check_report("cocycle-check", "cocycle identities", &c.check()))
        }
        Command::CocycleSpace { input, index } => {
            let a = load_verified(input, max)?;
            let basis = cocycle::cocycle_space(&a)?;
            match index {
                Some(k) => {
                    let c = pick(&basis, *k, "cocycle")?;
                    Ok(Report::info(cocycle_text(c), json::cocycle_to_string(c)))
                }
                None => {
                    let mut text = format!("cocycle space: dim {}", basis.len());
                    for (k, c) in basis.iter().enumerate() {
                        let _ = write!(text, "\n#{}\n{}", k + 1, indent(&cocycle_text(c)));
                    }
                    let cocycles: Vec<CocycleJson> = basis.iter().map(json::cocycle_to_json).collect();
                    Ok(Report::info(
                        text,
                        to_json(&serde_json::json!({
                            "command": "cocycle-space",
                            "dim": basis.len(),
                            "cocycles": cocycles,
                        })),
                    ))
                }
            }
        }
        Command::Extend(i) => {
            let c = with_path(&i.input, json::parse_cocycle(&read(&i.input)?, max))?;
            let e = cocycle::double_extension(&c)?;
            Ok(Report::info(algebra_text(&e), json::algebra_to_string(&e)))
        }
        Command::Generate { gen, index } => {
            let spec = gen_spec(gen, max)?;
            let g = lab::generate(&spec)?;
            if let Some(k) = index {
                let s = pick(&g.samples, *k, "sample")?;
                return Ok(Report::info(algebra_text(&s.algebra), json::algebra_to_string(&s.algebra)));
            }
            let mut text = format!(
                "{} samples of {} dim {} (seed {}, {} attempts, acceptance rate {:.4})",
                g.samples.len(),
                spec.family,
                spec.dim,
                spec.seed,
                g.attempts,
                g.acceptance_rate()
            );
            for s in &g.samples {
                let _ = write!(text, "\nseed {}\n{}", s.seed, indent(&algebra_text(&s.algebra)));
            }
            let samples: Vec<serde_json::Value> = g
                .samples
                .iter()
                .map(|s| serde_json::json!({ "seed": s.seed, "algebra": json::algebra_to_json(&s.algebra) }))
                .collect();
            Ok(Report::info(
                text,
                to_json(&serde_json::json!({
                    "command": "generate",
                    "spec": spec,
                    "attempts": g.attempts,
                    "acceptance_rate": g.acceptance_rate(),
                    "samples": samples,
                })),
            ))
        }
        Command::Harness {
            property,
            gen,
            counterexamples,
        } => {
            let spec = gen_spec(gen, max)?;
            let props: Vec<Property> = if property == "all" {
                Property::ALL.to_vec()
            } else {
                vec![Property::from_id(property)?]
            };
            let g = lab::generate(&spec)?;
            let (mut text, mut lines, mut ok) = (Vec::new(), Vec::new(), true);
            for p in props {
                let mut r = lab::run_on(p, &g.samples);
                r.spec = Some(spec.clone());
                if let Some(dir) = counterexamples {
                    r.write_counterexamples(dir)
                        .map_err(|e| Failure::Input(format!("{}: {e}", dir.display())))?;
                }
                ok &= r.passed();
                text.push(harness_text(&r));
                lines.push(r.to_json_line());
            }
            Ok(Report {
                text: text.join("\n"),
                json: lines.join("\n"),
                verdict: Some(ok),
            })
        }
    }
}

fn gen_spec(g: &GenArgs, max: usize) -> Result<GeneratorSpec, Failure> {
    if g.dim > max {
        return Err(Error::DimensionTooLarge { dim: g.dim, max }.into());
    }
    let mut spec = GeneratorSpec::new(g.dim, g.family, g.seed, g.trials);
    if let Some(c) = &g.coeffs {
        spec.coeff_set = c
            .split(',')
            .map(|t| json::parse_rational(t).map_err(Failure::from))
            .collect::<Result<_, _>>()?;
    }
    if let Some(s) = g.sparsity {
        spec.sparsity = s;
    }
    Ok(spec)
}

fn pick<'a, T>(xs: &'a [T], k: usize, what: &str) -> Result<&'a T, Failure> {
    if k == 0 || k > xs.len() {
        return Err(Failure::Input(format!("{what} index {k} outside 1..={}", xs.len())));
    }
    Ok(&xs[k - 1])
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
}

fn indent(s: &str) -> String {
    s.lines().map(|l| format!("  {l}")).collect::<Vec<_>>().join("\n")
}

/// `−e1 + 1/2 e3`, or `0`.
fn combination(v: &[Rational]) -> String {
    combination_of(v.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, x)| (i, x.clone())), "e")
}

fn combination_of(terms: impl Iterator<Item = (usize, Rational)>, sym: &str) -> String {
    let mut s = String::new();
    for (i, x) in terms {
        let neg = x.is_negative();
        let a = if neg { -x } else { x };
        if s.is_empty() {
            if neg {
                s.push('-');
            }
        } else {
            s.push_str(if neg { " - " } else { " + " });
        }
        if !a.is_one() {
            let _ = write!(s, "{a} ");
        }
        let _ = write!(s, "{sym}{}", i + 1);
    }
    if s.is_empty() {
        s.push('0');
    }
    s
}

fn algebra_text(a: &ThreeAlgebra) -> String {
    let mut s = format!("3-algebra of dim {}", a.dim());
    if let Some(l) = a.label() {
        let _ = write!(s, " ({l})");
    }
    let mut any = false;
    for ((i, j, k), v) in a.orbits() {
        any = true;
        let _ = write!(s, "\n  {{e{},e{},e{}}} = {}", i + 1, j + 1, k + 1, combination_of(v.iter().cloned(), "e"));
    }
    if !any {
        s.push_str("\n  all products zero");
    }
    s
}

fn lie_text(l: &ThreeLieAlgebra) -> String {
    let mut s = format!("3-Lie algebra of dim {}", l.dim());
    if let Some(lb) = l.label() {
        let _ = write!(s, " ({lb})");
    }
    let mut any = false;
    for ((i, j, k), v) in l.orbits() {
        any = true;
        let _ = write!(s, "\n  [e{},e{},e{}] = {}", i + 1, j + 1, k + 1, combination_of(v.iter().cloned(), "e"));
    }
    if !any {
        s.push_str("\n  all brackets zero");
    }
    s
}

fn cocycle_text(c: &Cocycle) -> String {
    let mut s = String::from("cocycle");
    let mut any = false;
    for ((i, j, k), v) in c.orbits() {
        any = true;
        let _ = write!(s, "\n  θ{{e{},e{},e{}}} = {}", i + 1, j + 1, k + 1, combination_of(v.iter().cloned(), "e*"));
    }
    if !any {
        s.push_str("\n  zero");
    }
    s
}

fn subspace_report(what: &str, s: &Subspace) -> Report {
    let mut text = format!("{what}: dim {} in Q^{}", s.dim(), s.ambient_dim());
    for v in s.basis_vectors() {
        let _ = write!(text, "\n  {}", combination(&v));
    }
    Report::info(text, to_json(s))
}

fn map_space_report(m: &MapSpace) -> Report {
    let mut text = format!("{}: dim {}", m.kind, m.dim());
    for (k, b) in m.basis().iter().enumerate() {
        let _ = write!(text, "\n#{}", k + 1);
        for row in b.row_vecs() {
            let _ = write!(text, "\n  [{}]", join(&row));
        }
    }
    Report::info(text, to_json(&json::map_space_to_json(m)))
}

fn harness_text(r: &lab::HarnessResult) -> String {
    let mut s = format!(
        "property {}: {} ({} trials, {} counterexamples)",
        r.property,
        if r.passed() { "pass" } else { "FAIL" },
        r.trials,
        r.counterexamples.len()
    );
    for (k, v) in &r.observations {
        let _ = write!(s, "\n  {k}: {v}");
    }
    for c in &r.counterexamples {
        let _ = write!(
            s,
            "\n  seed {} witness ({}) [{}]: {}",
            c.seed,
            join(&c.witness),
            match c.classification {
                lab::Classification::InvalidInput => "invalid input",
                lab::Classification::Discrepancy => "discrepancy",
            },
            c.detail
        );
    }
    s
}

/// Re-exported so tests can build inputs without a second JSON layer.
pub fn algebra_json(a: &ThreeAlgebra) -> AlgebraJson {
    json::algebra_to_json(a)
}
