//! Executes checks and renders reports.

use std::io::Write;
use std::time::Instant;

use anyhow::{anyhow, bail, Result};
use azumaya_core::algebra::{Algebra, Nilpotency as Nil};
use azumaya_core::error::Error;
use azumaya_core::hom::{counterexample_search, jordan_obstruction_probe, FactCache};
use azumaya_core::pi::{al_vanishing_check, identity_transfer_check, nonvanishing_witness};
use azumaya_core::report::{derive_seed, CheckReport, SampleMode, Status};
use azumaya_core::suites::{self, expect_fail, or_unmet, unmet_report, SuiteOptions, WITNESS_BUDGET};
use serde_json::json;

use crate::config::{CheckEntry, CheckSpec, Claim, ElemSpec, Expect, Objects};

const DEFAULT_TRIALS: u64 = 100;

#[derive(Clone, Copy, Debug)]
pub struct Settings {
    pub seed: Option<u64>,
    pub max_tuples: u128,
    pub max_elements: u128,
}

pub struct Timed {
    pub report: CheckReport,
    pub timing_ms: u128,
}

/// Reports for the homs whose status the config claims.
pub fn claim_reports(objects: &Objects) -> Vec<Timed> {
    objects
        .homs
        .iter()
        .filter_map(|h| {
            let claim = h.claimed?;
            let start = Instant::now();
            let mut r = h.hom.verification_report().with_detail("claimed", json!(claim_name(claim)));
            if claim == Claim::Refuted {
                r = expect_fail(r);
            }
            Some(Timed { report: r, timing_ms: start.elapsed().as_millis() })
        })
        .collect()
}

fn claim_name(c: Claim) -> &'static str {
    match c {
        Claim::Verified => "verified",
        Claim::Refuted => "refuted",
    }
}

/// Fails before running anything if some sampled check lacks a seed.
pub fn require_seed(entries: &[(usize, &CheckEntry)], seed: Option<u64>) -> Result<()> {
    if seed.is_some() {
        return Ok(());
    }
    if let Some((i, e)) = entries.iter().find(|(_, e)| e.spec.is_sampled()) {
        bail!("checks[{i}] ({}) samples randomly; pass --seed", e.spec.name());
    }
    Ok(())
}

/// Runs `entries` in order; `index` is each entry's position in the config,
/// from which its seed is derived.
pub fn run_checks(objects: &Objects, entries: &[(usize, &CheckEntry)], settings: &Settings) -> Result<Vec<Timed>> {
    let facts = FactCache::new();
    let mut out = Vec::new();
    for (i, entry) in entries {
        let seed = settings.seed.map(|s| derive_seed(s, *i as u64));
        let start = Instant::now();
        let reports = run_one(objects, &entry.spec, seed, settings, &facts)
            .map_err(|e| anyhow!("checks[{i}] ({}): {e:#}", entry.spec.name()))?;
        let elapsed = start.elapsed().as_millis();
        for r in reports {
            let r = match entry.expect {
                Some(Expect::Fail) => expect_fail(r),
                _ => r,
            };
            out.push(Timed { report: r, timing_ms: elapsed });
        }
    }
    Ok(out)
}

fn need(seed: Option<u64>) -> Result<u64> {
    seed.ok_or_else(|| anyhow!("this check samples randomly; pass --seed"))
}

fn run_one(
    objects: &Objects,
    spec: &CheckSpec,
    seed: Option<u64>,
    settings: &Settings,
    facts: &FactCache,
) -> Result<Vec<CheckReport>> {
    use CheckSpec::*;
    let one = |r: CheckReport| Ok(vec![r]);
    match spec {
        IsAzumaya { algebra } => one(objects.resolve(algebra)?.is_azumaya()),
        SquareRank { algebra } => {
            let a = objects.resolve(algebra)?;
            one(a.square_rank_check(&a.is_azumaya()))
        }
        Center { algebra } => {
            let a = objects.resolve(algebra)?;
            let c = a.center();
            one(CheckReport::pass("center", a.label())
                .with_detail("generators", json!(a.to_elems(&c)))
                .with_detail("size", json!(c.order().to_u128().map(|n| n.to_string())))
                .with_detail("central", a.is_central()))
        }
        CenterOracle { algebra } => one(objects.resolve(algebra)?.center_oracle_check(settings.max_elements)),
        EnvMap { algebra } => one(objects.resolve(algebra)?.env_map_check()),
        ConstantRank { algebra } => one(constant_rank_report(&*objects.resolve(algebra)?)?),
        IdealIntersection { algebra, ideals } => {
            let a = objects.resolve(algebra)?;
            let ideals = ideals.iter().map(|i| i.resolve(&a)).collect::<Result<Vec<_>, _>>()?;
            one(a.ideal_intersection_check(&ideals)?)
        }
        Nilpotency { algebra, element, cap } => {
            let a = objects.resolve(algebra)?;
            let x = match element {
                ElemSpec::Matrix(rows) => a.matrix_elem(rows)?,
                ElemSpec::Coords(c) => {
                    if c.len() != a.flat_dim() {
                        bail!("element needs {} coordinates", a.flat_dim());
                    }
                    a.elem(c)
                }
            };
            let cap = cap.unwrap_or(a.rank() as u32);
            let r = CheckReport::pass("nilpotency", a.label())
                .with_detail("element", json!(x))
                .with_detail("cap", cap);
            one(match a.nilpotency_index(&x, cap) {
                Nil::Index(e) => r.with_detail("index", e),
                Nil::NotNilpotentWithinCap(c) => r.with_detail("not_nilpotent_within", c),
            })
        }
        JordanIndex { p, n } => {
            let a = Algebra::matrix(&azumaya_core::ring::FiniteCommRing::prime_field(*p)?, *n)?;
            let x = a.jordan_cell()?;
            let subject = format!("J_{n} in {}", a.label());
            one(match a.nilpotency_index(&x, *n as u32 + 1) {
                Nil::Index(e) if e as usize == *n => {
                    CheckReport::pass("jordan_cell_index", subject).with_detail("index", e)
                }
                other => CheckReport::fail("jordan_cell_index", subject, json!({ "expected": n, "observed": format!("{other:?}") })),
            })
        }
        VerifyHom { hom } => one(hom_of(objects, hom)?.verification_report()),
        KernelIdeal { hom } => {
            let h = hom_of(objects, hom)?;
            one(or_unmet("kernel_ideal", h.label(), h.kernel_ideal().map(|(_, r)| r)))
        }
        CenterPreservation { hom } => one(hom_of(objects, hom)?.center_preservation_check(facts).0),
        RankComparison { hom } => {
            let h = hom_of(objects, hom)?;
            one(or_unmet("rank_comparison", h.label(), h.rank_comparison_check(facts)))
        }
        Isomorphism { hom } => {
            let h = hom_of(objects, hom)?;
            one(or_unmet("isomorphism", h.label(), h.isomorphism_check(facts).map(|(r, _)| r)))
        }
        EndoAuto { hom } => {
            let h = hom_of(objects, hom)?;
            match h.endo_auto_check(facts) {
                Ok(r) => one(r),
                Err(e @ Error::PreconditionUnmet(_)) => {
                    let skipped = unmet_report("endo_auto", h.label(), &e).with_detail("routed_to", "isomorphism");
                    let routed = or_unmet("isomorphism", h.label(), h.isomorphism_check(facts).map(|(r, _)| r));
                    Ok(vec![skipped, routed])
                }
                Err(e) => Err(e.into()),
            }
        }
        JordanProbe { n, algebra, samples } => {
            let a = objects.resolve(algebra)?;
            let mode = match samples {
                Some(count) => SampleMode::Samples { count: *count, seed: need(seed)? },
                None => {
                    let size = a.size().unwrap_or(u128::MAX);
                    if size > settings.max_elements {
                        bail!("exhaustive probe needs {size} elements, over --max-elements; set \"samples\"");
                    }
                    SampleMode::Exhaustive
                }
            };
            match jordan_obstruction_probe(*n, &a, mode) {
                Err(e @ Error::PreconditionUnmet(_)) => one(unmet_report("jordan_obstruction", a.label(), &e)),
                r => one(r?),
            }
        }
        AlVanishing { algebra, n, samples } => {
            let a = objects.resolve(algebra)?;
            let mode = match samples {
                Some(count) => SampleMode::Samples { count: *count, seed: need(seed)? },
                None => SampleMode::Exhaustive,
            };
            match al_vanishing_check(&a, *n, mode, settings.max_tuples) {
                Err(Error::BudgetExceeded { needed, budget }) => {
                    let seed = seed.ok_or_else(|| {
                        anyhow!("exhaustive sweep needs {needed} tuples, over --max-tuples {budget}; switching to samples needs --seed")
                    })?;
                    let r = al_vanishing_check(&a, *n, SampleMode::Samples { count: suites::AL_SAMPLES, seed }, settings.max_tuples)?;
                    one(r.with_detail(
                        "mode_switch",
                        json!({ "from": "exhaustive", "needed": needed.to_string(), "budget": budget.to_string() }),
                    ))
                }
                r => one(r?),
            }
        }
        NonvanishingWitness { algebra, k, budget } => {
            let a = objects.resolve(algebra)?;
            one(nonvanishing_witness(&a, *k, budget.unwrap_or(WITNESS_BUDGET), need(seed)?)?)
        }
        IdentityTransfer { hom, identity, trials } => {
            let h = hom_of(objects, hom)?;
            one(identity_transfer_check(h, identity, trials.unwrap_or(DEFAULT_TRIALS), need(seed)?)?)
        }
        CounterexampleSearch { source, target, budget } => {
            let (s, t) = (objects.resolve(source)?, objects.resolve(target)?);
            match counterexample_search(s, t, *budget, need(seed)?, facts) {
                Err(Error::PreconditionUnmet(m)) => bail!("counterexample search rejected: {m}"),
                r => one(r?),
            }
        }
        Suite { name } => {
            let opts = SuiteOptions { seed: settings.seed, max_tuples: settings.max_tuples, max_elements: settings.max_elements };
            Ok(suites::run_suite(name, &opts)?)
        }
    }
}

fn hom_of<'a>(objects: &'a Objects, name: &str) -> Result<&'a azumaya_core::hom::AlgebraHom> {
    objects.hom(name).map(|h| &h.hom).ok_or_else(|| anyhow!("unknown hom `{name}`"))
}

fn constant_rank_report(a: &Algebra) -> Result<CheckReport> {
    let ranks = a
        .base()
        .maximal_ideals()
        .iter()
        .map(|m| Ok(json!({ "maximal_ideal": m, "rank": a.rank_at(m)? })))
        .collect::<Result<Vec<_>, Error>>()?;
    let (constant, rank) = a.has_constant_rank();
    let r = CheckReport::pass("constant_rank", a.label()).with_detail("ranks", json!(ranks));
    Ok(if constant {
        r.with_detail("rank", rank)
    } else {
        CheckReport { status: Status::Fail, ..r }.with_witness(json!({ "ranks": ranks }))
    })
}

/// 3 on any contradicts-theorem, else 1 on any fail, else 0.
pub fn exit_code(reports: &[Timed]) -> i32 {
    let has = |s: Status| reports.iter().any(|t| t.report.status == s);
    if has(Status::ContradictsTheorem) {
        3
    } else if has(Status::Fail) {
        1
    } else {
        0
    }
}

/// One line per report on `out`: NDJSON when `json`, otherwise plain text.
pub fn emit(out: &mut impl Write, reports: &[Timed], json: bool) -> std::io::Result<()> {
    for t in reports {
        if json {
            let line = json!({ "report": t.report, "timing_ms": t.timing_ms as u64 });
            writeln!(out, "{line}")?;
        } else {
            let r = &t.report;
            write!(out, "{:<20} {:<22} {}", status_name(r.status), r.check, r.subject)?;
            if let Some(w) = &r.witness {
                write!(out, "  witness={w}")?;
            }
            writeln!(out)?;
        }
    }
    Ok(())
}

pub fn status_name(s: Status) -> &'static str {
    match s {
        Status::Pass => "pass",
        Status::Fail => "fail",
        Status::ContradictsTheorem => "contradicts-theorem",
        Status::NotFound => "not-found",
        Status::PreconditionUnmet => "precondition-unmet",
    }
}

/// Counts per status, for standard error.
pub fn summary(reports: &[Timed], code: i32, elapsed_ms: u128) -> String {
    let order = [
        Status::Pass,
        Status::NotFound,
        Status::PreconditionUnmet,
        Status::Fail,
        Status::ContradictsTheorem,
    ];
    let counts: Vec<String> = order
        .iter()
        .map(|&s| (s, reports.iter().filter(|t| t.report.status == s).count()))
        .filter(|&(_, c)| c > 0)
        .map(|(s, c)| format!("{c} {}", status_name(s)))
        .collect();
    format!("{} reports: {}; exit {code} ({elapsed_ms} ms)", reports.len(), counts.join(", "))
}
