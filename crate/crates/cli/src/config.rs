//! Run configuration: named objects plus an ordered list of checks.

use std::collections::HashMap;
use std::sync::Arc;

use anyhow::{anyhow, bail, Context, Result};
use azumaya_core::algebra::{Algebra, AlgebraSpec};
use azumaya_core::hom::{AlgebraHom, HomSpec, IdealSpec};
use azumaya_core::pi::MultilinearIdentity;
use azumaya_core::ring::{FiniteCommRing, RingDescriptor};
use azumaya_core::suites;
use serde::Deserialize;
use serde_json::Value;

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub max_tuples: Option<u64>,
    #[serde(default)]
    pub max_elements: Option<u64>,
    #[serde(default)]
    pub rings: Vec<Value>,
    #[serde(default)]
    pub algebras: Vec<Value>,
    #[serde(default)]
    pub homs: Vec<Value>,
    #[serde(default)]
    pub checks: Option<Vec<Value>>,
}

/// An algebra given by name or inline.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum AlgebraRef {
    Name(String),
    Spec(AlgebraSpec),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RingDecl {
    name: String,
    ring: RingDescriptor,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct AlgebraDecl {
    name: String,
    algebra: AlgebraSpec,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct HomDecl {
    name: String,
    source: AlgebraRef,
    #[serde(default)]
    target: Option<AlgebraRef>,
    map: HomSpec,
    /// Status the config asserts, e.g. `"verified"`.
    #[serde(default)]
    claimed: Option<Claim>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Claim {
    Verified,
    Refuted,
}

/// Status a check is expected to produce. `fail` inverts the outcome.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Expect {
    Pass,
    Fail,
}

/// Matrix rows or flattened coordinates.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum ElemSpec {
    Matrix(Vec<Vec<i64>>),
    Coords(Vec<u64>),
}

#[derive(Clone, Debug, Deserialize)]
#[serde(tag = "check", rename_all = "snake_case", deny_unknown_fields)]
pub enum CheckSpec {
    IsAzumaya { algebra: AlgebraRef },
    SquareRank { algebra: AlgebraRef },
    Center { algebra: AlgebraRef },
    CenterOracle { algebra: AlgebraRef },
    EnvMap { algebra: AlgebraRef },
    ConstantRank { algebra: AlgebraRef },
    IdealIntersection { algebra: AlgebraRef, ideals: Vec<IdealSpec> },
    Nilpotency { algebra: AlgebraRef, element: ElemSpec, #[serde(default)] cap: Option<u32> },
    JordanIndex { p: u64, n: usize },
    VerifyHom { hom: String },
    KernelIdeal { hom: String },
    CenterPreservation { hom: String },
    RankComparison { hom: String },
    Isomorphism { hom: String },
    EndoAuto { hom: String },
    JordanProbe { n: usize, algebra: AlgebraRef, #[serde(default)] samples: Option<u64> },
    AlVanishing { algebra: AlgebraRef, n: usize, #[serde(default)] samples: Option<u64> },
    NonvanishingWitness { algebra: AlgebraRef, k: usize, #[serde(default)] budget: Option<u64> },
    IdentityTransfer { hom: String, identity: MultilinearIdentity, #[serde(default)] trials: Option<u64> },
    CounterexampleSearch { source: AlgebraRef, target: AlgebraRef, budget: u64 },
    Suite { name: String },
}

impl CheckSpec {
    pub fn name(&self) -> &'static str {
        match self {
            Self::IsAzumaya { .. } => "is_azumaya",
            Self::SquareRank { .. } => "square_rank",
            Self::Center { .. } => "center",
            Self::CenterOracle { .. } => "center_oracle",
            Self::EnvMap { .. } => "env_map",
            Self::ConstantRank { .. } => "constant_rank",
            Self::IdealIntersection { .. } => "ideal_intersection",
            Self::Nilpotency { .. } => "nilpotency",
            Self::JordanIndex { .. } => "jordan_index",
            Self::VerifyHom { .. } => "verify_hom",
            Self::KernelIdeal { .. } => "kernel_ideal",
            Self::CenterPreservation { .. } => "center_preservation",
            Self::RankComparison { .. } => "rank_comparison",
            Self::Isomorphism { .. } => "isomorphism",
            Self::EndoAuto { .. } => "endo_auto",
            Self::JordanProbe { .. } => "jordan_probe",
            Self::AlVanishing { .. } => "al_vanishing",
            Self::NonvanishingWitness { .. } => "nonvanishing_witness",
            Self::IdentityTransfer { .. } => "identity_transfer",
            Self::CounterexampleSearch { .. } => "counterexample_search",
            Self::Suite { .. } => "suite",
        }
    }

    /// Whether the check draws random samples.
    pub fn is_sampled(&self) -> bool {
        match self {
            Self::JordanProbe { samples, .. } | Self::AlVanishing { samples, .. } => samples.is_some(),
            Self::NonvanishingWitness { .. } | Self::IdentityTransfer { .. } | Self::CounterexampleSearch { .. } => true,
            Self::Suite { name } => suites::expand(name).map_or(false, |v| v.iter().any(|s| suites::is_sampled(s))),
            _ => false,
        }
    }
}

#[derive(Clone, Debug)]
pub struct CheckEntry {
    pub spec: CheckSpec,
    pub expect: Option<Expect>,
}

/// A declared hom and the status the config claims for it.
pub struct NamedHom {
    pub name: String,
    pub hom: AlgebraHom,
    pub claimed: Option<Claim>,
}

/// Everything a config declares, built and cross-checked.
pub struct Objects {
    pub rings: Vec<(String, FiniteCommRing)>,
    pub algebras: Vec<(String, Arc<Algebra>)>,
    pub homs: Vec<NamedHom>,
    pub checks: Vec<CheckEntry>,
}

impl Objects {
    pub fn algebra(&self, name: &str) -> Option<&Arc<Algebra>> {
        self.algebras.iter().find(|(n, _)| n == name).map(|(_, a)| a)
    }

    pub fn hom(&self, name: &str) -> Option<&NamedHom> {
        self.homs.iter().find(|h| h.name == name)
    }

    pub fn resolve(&self, r: &AlgebraRef) -> Result<Arc<Algebra>> {
        match r {
            AlgebraRef::Name(n) => self.algebra(n).cloned().ok_or_else(|| anyhow!("unknown algebra `{n}`")),
            AlgebraRef::Spec(s) => {
                let lookup = |n: &str| self.algebra(n).map(|a| (**a).clone());
                Ok(Arc::new(s.build(&lookup)?))
            }
        }
    }
}

pub fn parse(text: &str) -> Result<RunConfig> {
    serde_json::from_str(text).context("config does not parse")
}

/// Replaces `"ring": "<name>"` with the named descriptor, at any depth.
fn substitute_rings(v: &mut Value, rings: &HashMap<String, Value>) -> Result<()> {
    match v {
        Value::Object(map) => {
            for (k, child) in map.iter_mut() {
                if let (true, Value::String(name)) = (k == "ring", &*child) {
                    *child = rings.get(name).cloned().ok_or_else(|| anyhow!("unknown ring `{name}`"))?;
                } else {
                    substitute_rings(child, rings)?;
                }
            }
        }
        Value::Array(items) => {
            for item in items {
                substitute_rings(item, rings)?;
            }
        }
        _ => {}
    }
    Ok(())
}

fn check_unique<'a>(section: &str, names: impl Iterator<Item = &'a String>) -> Result<()> {
    let mut seen = std::collections::HashSet::new();
    for n in names {
        if !seen.insert(n) {
            bail!("{section}: duplicate name `{n}`");
        }
    }
    Ok(())
}

/// Builds every declared object and parses the check list, failing with the
/// location of the first problem.
pub fn build(cfg: &RunConfig) -> Result<Objects> {
    let mut ring_json = HashMap::new();
    let mut rings = Vec::new();
    for (i, v) in cfg.rings.iter().enumerate() {
        let d: RingDecl = serde_json::from_value(v.clone()).with_context(|| format!("rings[{i}]"))?;
        let r = FiniteCommRing::try_from(d.ring.clone()).with_context(|| format!("rings[{i}] `{}`", d.name))?;
        ring_json.insert(d.name.clone(), serde_json::to_value(&d.ring)?);
        rings.push((d.name, r));
    }
    check_unique("rings", rings.iter().map(|(n, _)| n))?;

    let mut objects = Objects { rings, algebras: Vec::new(), homs: Vec::new(), checks: Vec::new() };
    for (i, v) in cfg.algebras.iter().enumerate() {
        let mut v = v.clone();
        substitute_rings(&mut v, &ring_json).with_context(|| format!("algebras[{i}]"))?;
        let d: AlgebraDecl = serde_json::from_value(v).with_context(|| format!("algebras[{i}]"))?;
        if objects.algebra(&d.name).is_some() {
            bail!("algebras[{i}]: duplicate name `{}`", d.name);
        }
        let a = objects
            .resolve(&AlgebraRef::Spec(d.algebra))
            .with_context(|| format!("algebras[{i}] `{}`", d.name))?;
        objects.algebras.push((d.name, a));
    }

    for (i, v) in cfg.homs.iter().enumerate() {
        let mut v = v.clone();
        substitute_rings(&mut v, &ring_json).with_context(|| format!("homs[{i}]"))?;
        let d: HomDecl = serde_json::from_value(v).with_context(|| format!("homs[{i}]"))?;
        if objects.hom(&d.name).is_some() {
            bail!("homs[{i}]: duplicate name `{}`", d.name);
        }
        let at = || format!("homs[{i}] `{}`", d.name);
        let source = objects.resolve(&d.source).with_context(at)?;
        let target = d.target.as_ref().map(|t| objects.resolve(t)).transpose().with_context(at)?;
        let mut hom = d.map.build(source, target.clone()).with_context(at)?;
        if let Some(t) = target {
            if hom.target() != &t {
                bail!("{}: map lands in {}, not the declared target {}", at(), hom.target().label(), t.label());
            }
        }
        hom.set_label(d.name.clone());
        objects.homs.push(NamedHom { name: d.name, hom, claimed: d.claimed });
    }

    if let Some(checks) = &cfg.checks {
        if checks.is_empty() {
            bail!("checks: empty check list");
        }
        for (i, v) in checks.iter().enumerate() {
            let entry = parse_check(v, &ring_json).with_context(|| format!("checks[{i}]"))?;
            validate_refs(&objects, &entry.spec).with_context(|| format!("checks[{i}] ({})", entry.spec.name()))?;
            objects.checks.push(entry);
        }
    }
    Ok(objects)
}

fn parse_check(v: &Value, rings: &HashMap<String, Value>) -> Result<CheckEntry> {
    let mut v = v.clone();
    substitute_rings(&mut v, rings)?;
    let expect = match v.as_object_mut().and_then(|m| m.remove("expect")) {
        Some(e) => Some(serde_json::from_value(e).context("expect must be \"pass\" or \"fail\"")?),
        None => None,
    };
    let spec = serde_json::from_value(v)?;
    Ok(CheckEntry { spec, expect })
}

fn validate_refs(objects: &Objects, spec: &CheckSpec) -> Result<()> {
    use CheckSpec::*;
    match spec {
        IsAzumaya { algebra }
        | SquareRank { algebra }
        | Center { algebra }
        | CenterOracle { algebra }
        | EnvMap { algebra }
        | ConstantRank { algebra }
        | IdealIntersection { algebra, .. }
        | Nilpotency { algebra, .. }
        | JordanProbe { algebra, .. }
        | AlVanishing { algebra, .. }
        | NonvanishingWitness { algebra, .. } => objects.resolve(algebra).map(|_| ()),
        VerifyHom { hom }
        | KernelIdeal { hom }
        | CenterPreservation { hom }
        | RankComparison { hom }
        | Isomorphism { hom }
        | EndoAuto { hom }
        | IdentityTransfer { hom, .. } => objects.hom(hom).map(|_| ()).ok_or_else(|| anyhow!("unknown hom `{hom}`")),
        CounterexampleSearch { source, target, .. } => {
            objects.resolve(source)?;
            objects.resolve(target).map(|_| ())
        }
        Suite { name } => suites::expand(name).map(|_| ()).map_err(Into::into),
        JordanIndex { p, n } => {
            if *n == 0 {
                bail!("n must be at least 1");
            }
            FiniteCommRing::prime_field(*p).map(|_| ()).map_err(Into::into)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn named_rings_and_refs_resolve() {
        let cfg = parse(
            r#"{
              "rings": [{"name": "R", "ring": {"kind": "zmod", "n": 4}}],
              "algebras": [
                {"name": "A", "algebra": {"kind": "matrix", "n": 2, "ring": "R"}},
                {"name": "B", "algebra": {"kind": "opposite", "of": {"kind": "ref", "name": "A"}}}
              ],
              "homs": [{"name": "f", "source": "A", "map": {"kind": "reduction", "ideal": 2}}],
              "checks": [{"check": "is_azumaya", "algebra": "B"}, {"check": "kernel_ideal", "hom": "f", "expect": "pass"}]
            }"#,
        )
        .unwrap();
        let o = build(&cfg).unwrap();
        assert_eq!(o.algebra("B").unwrap().rank(), 4);
        assert_eq!(o.hom("f").unwrap().hom.target().base().to_string(), "Z/2");
        assert_eq!(o.checks.len(), 2);
        assert_eq!(o.checks[1].expect, Some(Expect::Pass));
    }

    #[test]
    fn errors_carry_locations() {
        let cfg = parse(r#"{"algebras": [{"name": "A", "algebra": {"kind": "matrix", "n": 0, "ring": {"kind": "zmod", "n": 2}}}]}"#)
            .unwrap();
        let e = format!("{:#}", build(&cfg).err().unwrap());
        assert!(e.contains("algebras[0]"), "{e}");

        let cfg = parse(r#"{"checks": [{"check": "isomorphism", "hom": "g"}]}"#).unwrap();
        let e = format!("{:#}", build(&cfg).err().unwrap());
        assert!(e.contains("checks[0]") && e.contains("unknown hom"), "{e}");

        let cfg = parse(r#"{"checks": []}"#).unwrap();
        assert!(build(&cfg).is_err());

        let cfg = parse(r#"{"algebras": [{"name": "A", "algebra": {"kind": "weyl", "p": 2, "a": 0, "b": 0}},
                                         {"name": "A", "algebra": {"kind": "weyl", "p": 2, "a": 1, "b": 0}}]}"#)
            .unwrap();
        assert!(format!("{:#}", build(&cfg).err().unwrap()).contains("duplicate"));
    }

    #[test]
    fn sampled_checks_are_flagged() {
        let s: CheckSpec = serde_json::from_str(r#"{"check":"al_vanishing","algebra":"A","n":2}"#).unwrap();
        assert!(!s.is_sampled());
        let s: CheckSpec = serde_json::from_str(r#"{"check":"al_vanishing","algebra":"A","n":2,"samples":10}"#).unwrap();
        assert!(s.is_sampled());
        let s: CheckSpec = serde_json::from_str(r#"{"check":"suite","name":"theorem41"}"#).unwrap();
        assert!(!s.is_sampled());
    }
}
