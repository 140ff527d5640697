//! Verification engines for minimality and strong proximality, with the
//! finite case decided exhaustively.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::Value;

mod cocycle;
mod contraction;
mod finite;
mod sampler;
mod symbolic;

pub use cocycle::check_coset_invariants;
pub use contraction::{
    contract_measure, measure_depth, replay, ContractionCertificate, ContractionOutcome, Replay, Strategy, SymbolicSpace,
};
pub use finite::{
    amenable_size_check, check_minimal_finite, check_sp_extension_finite, finite_contractible, stabilizer_subgroup, AmenableCandidate,
};
pub use sampler::{
    sample_fiber_measure, sample_finite_fiber_measure, sample_finite_measure, sample_induced_measure, sample_points, sample_seed,
    SamplerParams,
};
pub use symbolic::{
    check_isometry_bridge, check_minimal_symbolic, check_sp_extension_induced, check_theorem_a_34, decompose_fibers, steering_word,
    witness_defect, ContractionParams, FiberDescription, WitnessDefect,
};

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

impl Verdict {
    /// FAIL dominates INCONCLUSIVE, which dominates PASS.
    pub fn combine(self, other: Verdict) -> Verdict {
        use Verdict::*;
        match (self, other) {
            (Fail, _) | (_, Fail) => Fail,
            (Inconclusive, _) | (_, Inconclusive) => Inconclusive,
            _ => Pass,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Inconclusive => "INCONCLUSIVE",
        })
    }
}

#[derive(Clone, PartialEq, Debug, Default, Serialize, Deserialize)]
pub struct Truncation {
    pub depths: BTreeMap<String, usize>,
    pub radii: BTreeMap<String, usize>,
    pub budgets: BTreeMap<String, usize>,
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Evidence {
    Certificate(ContractionCertificate),
    Counterexample {
        reason: String,
        data: Value,
    },
    Orbit {
        start: String,
        points: Vec<String>,
    },
    Coverage {
        start: String,
        #[serde(with = "wide")]
        covered: u128,
        #[serde(with = "wide")]
        total: u128,
        missing: Vec<String>,
    },
    Exhausted {
        reason: String,
        budget: usize,
        data: Value,
    },
    Note {
        text: String,
    },
    Check {
        report: Box<CheckReport>,
    },
}

/// Counts that may exceed `u64`: numbers when they fit, decimal strings
/// otherwise (JSON readers lose precision beyond that).
mod wide {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &u128, s: S) -> Result<S::Ok, S::Error> {
        match u64::try_from(*v) {
            Ok(small) => s.serialize_u64(small),
            Err(_) => s.serialize_str(&v.to_string()),
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Num(u64),
        Str(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<u128, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Num(n) => Ok(n.into()),
            Repr::Str(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct CheckReport {
    pub check: String,
    pub verdict: Verdict,
    pub parameters: BTreeMap<String, Value>,
    pub seed: Option<u64>,
    pub evidence: Vec<Evidence>,
    pub truncation: Truncation,
}

impl CheckReport {
    pub fn new(check: &str) -> Self {
        CheckReport {
            check: check.to_string(),
            verdict: Verdict::Pass,
            parameters: BTreeMap::new(),
            seed: None,
            evidence: Vec::new(),
            truncation: Truncation::default(),
        }
    }

    pub fn param(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.parameters.insert(key.to_string(), value.into());
        self
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn depth(mut self, key: &str, d: usize) -> Self {
        self.truncation.depths.insert(key.to_string(), d);
        self
    }

    pub fn radius(mut self, key: &str, r: usize) -> Self {
        self.truncation.radii.insert(key.to_string(), r);
        self
    }

    pub fn budget(mut self, key: &str, b: usize) -> Self {
        self.truncation.budgets.insert(key.to_string(), b);
        self
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.evidence.push(Evidence::Note { text: text.into() });
    }

    pub fn downgrade(&mut self, v: Verdict) {
        self.verdict = self.verdict.combine(v);
    }

    pub fn certificates(&self) -> impl Iterator<Item = &ContractionCertificate> {
        self.evidence.iter().filter_map(|e| match e {
            Evidence::Certificate(c) => Some(c),
            _ => None,
        })
    }

    /// Attaches a sub-check and folds in its verdict.
    pub fn nest(&mut self, sub: CheckReport) {
        self.downgrade(sub.verdict);
        self.evidence.push(Evidence::Check { report: Box::new(sub) });
    }
}
