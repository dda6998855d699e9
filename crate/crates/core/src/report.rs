use std::fmt::Write as _;

use exactlin::Rational;
use serde::{Deserialize, Serialize};

/// One failing instance of an identity.
///
/// `witness` holds 1-based basis indices. `lhs` and `rhs` are the two sides
/// evaluated at the witness; matrix-valued identities are flattened row-major.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub axiom: String,
    pub witness: Vec<usize>,
    pub lhs: Vec<Rational>,
    pub rhs: Vec<Rational>,
}

/// Outcome of an exhaustive identity check. `passed` holds exactly when
/// `violations` is empty.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomReport {
    pub passed: bool,
    pub checked: Vec<String>,
    pub violations: Vec<Violation>,
}

impl AxiomReport {
    pub fn new(checked: &[&str]) -> Self {
        AxiomReport {
            passed: true,
            checked: checked.iter().map(|s| s.to_string()).collect(),
            violations: Vec::new(),
        }
    }

    /// Records a violation; `witness` is 0-based here and stored 1-based.
    pub fn push(&mut self, axiom: &str, witness: &[usize], lhs: Vec<Rational>, rhs: Vec<Rational>) {
        self.passed = false;
        self.violations.push(Violation {
            axiom: axiom.to_string(),
            witness: witness.iter().map(|i| i + 1).collect(),
            lhs,
            rhs,
        });
    }

    /// Folds another report in, keeping its violations after ours.
    pub fn merge(&mut self, other: AxiomReport) {
        for c in other.checked {
            if !self.checked.contains(&c) {
                self.checked.push(c);
            }
        }
        self.passed &= other.passed;
        self.violations.extend(other.violations);
    }

    /// Orders violations by witness tuple, then by the position of the
    /// identity in `checked`.
    pub(crate) fn sort(&mut self) {
        let pos = |a: &str| self.checked.iter().position(|c| c == a).unwrap_or(usize::MAX);
        let mut keyed: Vec<_> = self
            .violations
            .drain(..)
            .map(|v| ((v.witness.clone(), pos(&v.axiom)), v))
            .collect();
        keyed.sort_by(|a, b| a.0.cmp(&b.0));
        self.violations = keyed.into_iter().map(|(_, v)| v).collect();
    }

    pub fn first_witness(&self) -> Option<&Violation> {
        self.violations.first()
    }

    /// Human-readable form, e.g. `axioms E21/E22/E23: pass`.
    pub fn to_text(&self, what: &str) -> String {
        let mut s = format!("{what} {}: ", self.checked.join("/"));
        if self.passed {
            s.push_str("pass");
            return s;
        }
        let _ = write!(s, "FAIL ({} violations)", self.violations.len());
        for v in &self.violations {
            let _ = write!(
                s,
                "\n  {} at ({}): lhs [{}] rhs [{}]",
                v.axiom,
                join(&v.witness),
                join(&v.lhs),
                join(&v.rhs)
            );
        }
        s
    }
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}
