//! Structured check results.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    /// A failure while every hypothesis of the corresponding theorem held:
    /// either an implementation bug or a genuine refutation.
    ContradictsTheorem,
    NotFound,
    PreconditionUnmet,
}

impl Status {
    pub fn is_ok(self) -> bool {
        matches!(self, Status::Pass | Status::NotFound)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Seeds {
    pub seed: u64,
    pub count: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub check: String,
    pub subject: String,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seeds: Option<Seeds>,
    #[serde(default)]
    pub preconditions: BTreeMap<String, bool>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub details: BTreeMap<String, Value>,
}

impl CheckReport {
    pub fn new(check: impl Into<String>, subject: impl Into<String>, status: Status) -> Self {
        Self {
            check: check.into(),
            subject: subject.into(),
            status,
            witness: None,
            seeds: None,
            preconditions: BTreeMap::new(),
            details: BTreeMap::new(),
        }
    }

    pub fn pass(check: impl Into<String>, subject: impl Into<String>) -> Self {
        Self::new(check, subject, Status::Pass)
    }

    /// A failing report; failures always carry a witness.
    pub fn fail(check: impl Into<String>, subject: impl Into<String>, witness: Value) -> Self {
        Self::new(check, subject, Status::Fail).with_witness(witness)
    }

    /// Fail, escalated to contradicts-theorem when every recorded precondition held.
    pub fn fail_escalated(mut self, witness: Value) -> Self {
        self.status = if self.preconditions.values().all(|&b| b) {
            Status::ContradictsTheorem
        } else {
            Status::Fail
        };
        self.witness = Some(witness);
        self
    }

    pub fn with_witness(mut self, w: Value) -> Self {
        self.witness = Some(w);
        self
    }

    pub fn with_seeds(mut self, seed: u64, count: u64) -> Self {
        self.seeds = Some(Seeds { seed, count });
        self
    }

    pub fn with_precondition(mut self, name: &str, held: bool) -> Self {
        self.preconditions.insert(name.to_string(), held);
        self
    }

    pub fn with_detail(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.details.insert(key.to_string(), value.into());
        self
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn preconditions_hold(&self) -> bool {
        self.preconditions.values().all(|&b| b)
    }
}

/// How a quantified check covers its domain.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum SampleMode {
    Exhaustive,
    Samples { count: u64, seed: u64 },
}

pub fn seeded_rng(seed: u64) -> rand_chacha::ChaCha8Rng {
    use rand::SeedableRng;
    rand_chacha::ChaCha8Rng::seed_from_u64(seed)
}

/// Derives the seed of task `index` from a root seed (SplitMix64 finaliser).
pub fn derive_seed(root: u64, index: u64) -> u64 {
    let mut z = root
        .wrapping_add(0x9E37_79B9_7F4A_7C15u64.wrapping_mul(index.wrapping_add(1)));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn escalation_depends_on_preconditions() {
        let r = CheckReport::pass("c", "s")
            .with_precondition("a", true)
            .fail_escalated(json!(1));
        assert_eq!(r.status, Status::ContradictsTheorem);
        let r = CheckReport::pass("c", "s")
            .with_precondition("a", false)
            .fail_escalated(json!(1));
        assert_eq!(r.status, Status::Fail);
    }

    #[test]
    fn report_round_trips() {
        let r = CheckReport::fail("verify_hom", "f", json!({"pair": [0, 1]}))
            .with_seeds(7, 100)
            .with_precondition("verified", false)
            .with_detail("n", 2);
        let s = serde_json::to_string(&r).unwrap();
        assert_eq!(serde_json::from_str::<CheckReport>(&s).unwrap(), r);
        assert!(s.contains("\"status\":\"fail\""));
    }

    #[test]
    fn derived_seeds_differ() {
        assert_ne!(derive_seed(42, 0), derive_seed(42, 1));
        assert_eq!(derive_seed(42, 3), derive_seed(42, 3));
    }
}
