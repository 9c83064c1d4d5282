//! Built-in suites: fixed families of algebras and homs swept by the checks.
//!
//! Every suite is deterministic given its seed. Reports come back in a fixed
//! order regardless of how the work was scheduled.

use std::sync::{Arc, OnceLock};

use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use serde_json::json;

use crate::algebra::{Algebra, AlgebraShape, Nilpotency};
use crate::corpus::{default_corpus, CorpusEntry, Family, DEFAULT_CORPUS_SEED};
use crate::error::{Error, Result};
use crate::hom::{free_rank, jordan_obstruction_probe, AlgebraHom, FactCache};
use crate::pi::{al_vanishing_check, nonvanishing_witness, DEFAULT_MAX_TUPLES};
use crate::report::{derive_seed, seeded_rng, CheckReport, SampleMode, Status};
use crate::ring::{FiniteCommRing, RingIdeal};

pub const DEFAULT_MAX_ELEMENTS: u128 = 5000;
pub const AL_SAMPLES: u64 = 2000;
pub const PROBE_SAMPLES: u64 = 10_000;
pub const WITNESS_BUDGET: u64 = 10_000;
/// Center preservation needs at least this many homs meeting every hypothesis.
pub const MIN_QUALIFYING: usize = 50;

/// Named suites in canonical order.
pub const SUITES: [&str; 10] = [
    "azumaya-def21",
    "al-thm26",
    "split-cor29",
    "matrixcenter-thm31",
    "jordan-lem32",
    "center-thm41",
    "rank-thm41",
    "iso-prop51-thm53",
    "endo-cor52",
    "tensor-env-rem23",
];

/// Aliases and the suites they expand to.
pub fn expand(name: &str) -> Result<Vec<&'static str>> {
    match name {
        "all" => Ok(SUITES.to_vec()),
        "theorem41" => Ok(vec!["center-thm41", "rank-thm41"]),
        _ => SUITES
            .iter()
            .find(|s| **s == name)
            .map(|s| vec![*s])
            .ok_or_else(|| Error::UnknownSuite(name.to_string())),
    }
}

/// Whether the suite draws random samples and so needs a seed.
pub fn is_sampled(name: &str) -> bool {
    matches!(name, "al-thm26" | "jordan-lem32" | "tensor-env-rem23")
}

#[derive(Clone, Copy, Debug)]
pub struct SuiteOptions {
    pub seed: Option<u64>,
    pub max_tuples: u128,
    pub max_elements: u128,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        Self { seed: None, max_tuples: DEFAULT_MAX_TUPLES, max_elements: DEFAULT_MAX_ELEMENTS }
    }
}

/// Runs a suite or alias. Fails before doing any work if the name is unknown
/// or a sampled suite has no seed.
pub fn run_suite(name: &str, opts: &SuiteOptions) -> Result<Vec<CheckReport>> {
    let names = expand(name)?;
    if opts.seed.is_none() {
        if let Some(s) = names.iter().find(|s| is_sampled(s)) {
            return Err(Error::MissingSeed(s.to_string()));
        }
    }
    let ctx = Context::new(*opts);
    let mut out = Vec::new();
    for s in names {
        out.extend(ctx.run(s)?);
    }
    Ok(out)
}

/// Shared state across the suites of one run.
pub struct Context {
    opts: SuiteOptions,
    corpus: OnceLock<Vec<CorpusEntry>>,
    facts: FactCache,
}

impl Context {
    pub fn new(opts: SuiteOptions) -> Self {
        Self { opts, corpus: OnceLock::new(), facts: FactCache::new() }
    }

    pub fn facts(&self) -> &FactCache {
        &self.facts
    }

    pub fn corpus(&self) -> &[CorpusEntry] {
        self.corpus
            .get_or_init(|| default_corpus(DEFAULT_CORPUS_SEED).expect("default corpus builds"))
    }

    /// Seed of the suite at position `pos` in `SUITES`, so that a suite run on
    /// its own and as part of `all` draws the same samples.
    fn suite_seed(&self, name: &str) -> u64 {
        let pos = SUITES.iter().position(|s| *s == name).unwrap_or(0);
        derive_seed(self.opts.seed.unwrap_or(0), pos as u64)
    }

    pub fn run(&self, name: &str) -> Result<Vec<CheckReport>> {
        let seed = self.suite_seed(name);
        match name {
            "azumaya-def21" => Ok(self.azumaya()),
            "al-thm26" => self.amitsur_levitzki(seed),
            "split-cor29" => Ok(self.weyl_splittings()),
            "matrixcenter-thm31" => Ok(self.matrix_center()),
            "jordan-lem32" => self.jordan(seed),
            "center-thm41" => Ok(self.center_sweep()),
            "rank-thm41" => Ok(self.rank_sweep()),
            "iso-prop51-thm53" => Ok(self.iso_sweep()),
            "endo-cor52" => Ok(self.endo_sweep()),
            "tensor-env-rem23" => self.tensor_env(seed),
            _ => Err(Error::UnknownSuite(name.to_string())),
        }
    }

    fn azumaya(&self) -> Vec<CheckReport> {
        let algebras = azumaya_grid();
        let max_elements = self.opts.max_elements;
        let mut out: Vec<CheckReport> = algebras
            .par_iter()
            .map(|a| {
                let az = a.is_azumaya();
                let sq = a.square_rank_check(&az);
                let oracle = a.center_oracle_check(max_elements);
                vec![az, sq, oracle]
            })
            .collect::<Vec<_>>()
            .into_iter()
            .flatten()
            .collect();
        let t2 = Algebra::upper_triangular(&zmod(2), 2).expect("n >= 1");
        out.push(expect_fail(t2.is_azumaya()));
        out.push(t2.center_oracle_check(max_elements));
        out
    }

    fn amitsur_levitzki(&self, seed: u64) -> Result<Vec<CheckReport>> {
        let mut tasks: Vec<(Arc<Algebra>, usize, bool)> = Vec::new();
        for m in [2, 3, 4, 6] {
            for n in 1..=3 {
                tasks.push((mat(m, n), n, n <= 2 && m == 2 || n == 1));
            }
        }
        for (a, b) in weyl_pairs(2) {
            tasks.push((weyl(2, a, b), 2, false));
        }
        tasks.push((weyl(2, 1, 1), 2, true));
        tasks.push((weyl(3, 1, 2), 3, false));
        let max_tuples = self.opts.max_tuples;
        let mut out = tasks
            .par_iter()
            .enumerate()
            .map(|(i, (a, n, exhaustive))| {
                let mode = if *exhaustive {
                    SampleMode::Exhaustive
                } else {
                    SampleMode::Samples { count: AL_SAMPLES, seed: derive_seed(seed, i as u64) }
                };
                al_with_fallback(a, *n, mode, max_tuples, derive_seed(seed, i as u64))
            })
            .collect::<Result<Vec<_>>>()?;
        let offset = tasks.len() as u64;
        let witnesses: Vec<(Arc<Algebra>, usize)> = [2, 3, 4, 6]
            .iter()
            .flat_map(|&m| [(mat(m, 2), 2), (mat(m, 3), 4)])
            .collect();
        out.extend(
            witnesses
                .par_iter()
                .enumerate()
                .map(|(i, (a, k))| nonvanishing_witness(a, *k, WITNESS_BUDGET, derive_seed(seed, offset + i as u64)))
                .collect::<Result<Vec<_>>>()?,
        );
        Ok(out)
    }

    fn weyl_splittings(&self) -> Vec<CheckReport> {
        let triples: Vec<(u64, u64, u64)> = [2u64, 3, 5]
            .iter()
            .flat_map(|&p| weyl_pairs(p).into_iter().map(move |(a, b)| (p, a, b)))
            .collect();
        triples
            .par_iter()
            .map(|&(p, a, b)| {
                let subject = format!("W({p},{a},{b})");
                match AlgebraHom::weyl_splitting(p, a, b) {
                    Ok(h) => CheckReport::pass("weyl_splitting", subject)
                        .with_detail("verified", h.is_verified())
                        .with_detail("bijective", h.is_bijective())
                        .with_detail("target", h.target().label()),
                    Err(e) => CheckReport::fail("weyl_splitting", subject, json!({ "error": e.to_string() })),
                }
            })
            .collect()
    }

    fn center_reports<F>(&self, keep: F) -> Vec<CheckReport>
    where
        F: Fn(&CorpusEntry) -> bool + Sync,
    {
        let entries: Vec<&CorpusEntry> = self.corpus().iter().filter(|e| keep(e)).collect();
        let mut out: Vec<CheckReport> = entries
            .par_iter()
            .map(|e| family_tag(e, e.hom.center_preservation_check(&self.facts).0))
            .collect();
        let qualifying = out.iter().filter(|r| r.preconditions_hold()).count();
        out.push(summary("center_preservation", &out, Some(qualifying)));
        out
    }

    fn matrix_center(&self) -> Vec<CheckReport> {
        self.center_reports(|e| match (e.hom.source().shape(), e.hom.target().shape()) {
            (AlgebraShape::Matrix { n }, AlgebraShape::Matrix { n: m }) => n == m,
            _ => false,
        })
    }

    fn center_sweep(&self) -> Vec<CheckReport> {
        self.center_reports(|_| true)
    }

    fn rank_sweep(&self) -> Vec<CheckReport> {
        let mut out: Vec<CheckReport> = self
            .corpus()
            .par_iter()
            .map(|e| family_tag(e, or_unmet("rank_comparison", e.hom.label(), e.hom.rank_comparison_check(&self.facts))))
            .collect();
        out.push(summary("rank_comparison", &out, None));
        out
    }

    fn iso_sweep(&self) -> Vec<CheckReport> {
        let corpus = self.corpus();
        let results: Vec<(CheckReport, Option<bool>)> = corpus
            .par_iter()
            .map(|e| match e.hom.isomorphism_check(&self.facts) {
                Ok((r, v)) => (family_tag(e, r), Some(v.bijective)),
                Err(err) => (family_tag(e, unmet_report("isomorphism", e.hom.label(), &err)), None),
            })
            .collect();
        let mut out: Vec<CheckReport> = results.iter().map(|(r, _)| r.clone()).collect();
        let iso = results.iter().filter(|(_, b)| *b == Some(true)).count();
        let not_iso = results.iter().filter(|(_, b)| *b == Some(false)).count();
        out.push(summary("isomorphism", &out, None).with_detail("iso", iso).with_detail("not_iso", not_iso));

        let diag_iso: Vec<String> = corpus
            .iter()
            .zip(&results)
            .filter(|(e, (_, b))| e.family == Family::Diagonal && *b != Some(false))
            .map(|(e, _)| e.hom.label().to_string())
            .collect();
        let diag_total = corpus.iter().filter(|e| e.family == Family::Diagonal).count();
        let diag = CheckReport::pass("diagonal_not_iso", "corpus").with_detail("diagonal_embeddings", diag_total);
        out.push(if diag_iso.is_empty() {
            diag
        } else {
            CheckReport { status: Status::Fail, ..diag }.with_witness(json!({ "iso_or_undetermined": diag_iso }))
        });
        out.push(self.commutant_tau());
        out
    }

    /// Commutant of the block-diagonal `M_2(F_5)` inside `M_4(F_5)`.
    fn commutant_tau(&self) -> CheckReport {
        let h = AlgebraHom::diagonal_embed(mat(5, 2), 2).expect("diagonal embedding");
        let tgt = h.target();
        let image = tgt.to_elems(&h.image());
        let c = tgt.commutant(&image);
        let rank = free_rank(tgt, &c);
        let subject = h.label().to_string();
        let tau = match h.isomorphism_check(&self.facts) {
            Ok((_, v)) => v.tau_bijective,
            Err(e) => return unmet_report("commutant_tau", &subject, &e),
        };
        let report = CheckReport::pass("commutant_tau", subject)
            .with_detail("commutant_free_rank", json!(rank))
            .with_detail("tau_bijective", json!(tau));
        if rank == Some(4) && tau == Some(true) {
            report
        } else {
            CheckReport { status: Status::Fail, ..report }
                .with_witness(json!({ "commutant_free_rank": rank, "tau_bijective": tau }))
        }
    }

    fn endo_sweep(&self) -> Vec<CheckReport> {
        let mut homs: Vec<(Option<Family>, AlgebraHom)> = self
            .corpus()
            .iter()
            .filter(|e| e.hom.source() == e.hom.target())
            .map(|e| (Some(e.family), e.hom.clone()))
            .collect();
        for a in [mat(4, 2), mat(6, 3), weyl(3, 1, 2), Arc::new(Algebra::matrix(&gf4(), 2).expect("n >= 1"))] {
            homs.push((None, AlgebraHom::identity(a)));
        }
        let mut out: Vec<CheckReport> = homs
            .par_iter()
            .map(|(fam, h)| {
                let tag = |r: CheckReport| match fam {
                    Some(f) => r.with_detail("family", json!(f)),
                    None => r,
                };
                match h.endo_auto_check(&self.facts) {
                    Ok(r) => vec![tag(r)],
                    Err(e) => {
                        let skipped = unmet_report("endo_auto", h.label(), &e).with_detail("routed_to", "isomorphism");
                        let routed = or_unmet(
                            "isomorphism",
                            h.label(),
                            h.isomorphism_check(&self.facts).map(|(r, _)| r),
                        );
                        vec![tag(skipped), tag(routed)]
                    }
                }
            })
            .collect::<Vec<_>>()
            .into_iter()
            .flatten()
            .collect();
        out.push(summary("endo_auto", &out, None));
        out
    }

    fn jordan(&self, seed: u64) -> Result<Vec<CheckReport>> {
        let mut out: Vec<CheckReport> = Vec::new();
        for p in [2u64, 3, 5] {
            for n in 1..=6usize {
                out.push(jordan_index_report(p, n));
            }
        }
        let mut probes: Vec<(usize, usize, u64)> = Vec::new();
        for p in [2u64, 3, 5] {
            for n in 2..=4usize {
                for np in 1..n {
                    probes.push((n, np, p));
                }
            }
        }
        let max_elements = self.opts.max_elements;
        out.extend(
            probes
                .par_iter()
                .enumerate()
                .map(|(i, &(n, np, p))| {
                    let a = mat(p, np);
                    let small = a.size().is_some_and(|s| s <= max_elements);
                    let mode = if p == 2 && np <= 2 && small {
                        SampleMode::Exhaustive
                    } else {
                        SampleMode::Samples { count: PROBE_SAMPLES, seed: derive_seed(seed, i as u64) }
                    };
                    jordan_obstruction_probe(n, &a, mode)
                })
                .collect::<Result<Vec<_>>>()?,
        );
        Ok(out)
    }

    fn tensor_env(&self, seed: u64) -> Result<Vec<CheckReport>> {
        let mut out = Vec::new();
        for a in [mat(2, 2), mat(4, 2), weyl(3, 1, 2)] {
            out.push(a.env_map_check());
        }
        let split = Algebra::diagonal(&zmod(2), 2).expect("k >= 1");
        out.push(expect_fail(split.env_map_check()));

        let m3 = mat(3, 2);
        let env = m3.tensor_product(&m3.opposite())?;
        out.push(env.is_azumaya().with_detail("construction", "M_2(F_3) ⊗ M_2(F_3)^op"));
        let mixed = mat(2, 2).tensor_product(&weyl(2, 1, 0))?;
        let az = mixed.is_azumaya();
        out.push(mixed.square_rank_check(&az));
        out.push(az);

        let mut kernels: Vec<CheckReport> = self
            .corpus()
            .par_iter()
            .map(|e| family_tag(e, or_unmet("kernel_ideal", e.hom.label(), e.hom.kernel_ideal().map(|(_, r)| r))))
            .collect();
        kernels.push(summary("kernel_ideal", &kernels, None));
        out.extend(kernels);

        let m12 = mat(12, 2);
        out.push(m12.ideal_intersection_check(&[RingIdeal::Zmod { d: 2 }, RingIdeal::Zmod { d: 3 }])?);
        let mut rng = seeded_rng(seed);
        for _ in 0..20 {
            let (a, ideals) = random_ideal_family(&mut rng);
            out.push(a.ideal_intersection_check(&ideals)?);
        }
        Ok(out)
    }
}

/// Runs `al_vanishing_check`, dropping to sampling when an exhaustive sweep
/// would exceed `max_tuples`.
fn al_with_fallback(a: &Algebra, n: usize, mode: SampleMode, max_tuples: u128, seed: u64) -> Result<CheckReport> {
    match al_vanishing_check(a, n, mode, max_tuples) {
        Err(Error::BudgetExceeded { needed, budget }) => {
            let r = al_vanishing_check(a, n, SampleMode::Samples { count: AL_SAMPLES, seed }, max_tuples)?;
            Ok(r.with_detail(
                "mode_switch",
                json!({ "from": "exhaustive", "needed": needed.to_string(), "budget": budget.to_string() }),
            ))
        }
        other => other,
    }
}

fn jordan_index_report(p: u64, n: usize) -> CheckReport {
    let a = mat(p, n);
    let x = a.jordan_cell().expect("matrix algebra");
    let subject = format!("J_{n} in {}", a.label());
    match a.nilpotency_index(&x, n as u32 + 1) {
        Nilpotency::Index(e) if e as usize == n => CheckReport::pass("jordan_cell_index", subject).with_detail("index", e),
        other => CheckReport::fail("jordan_cell_index", subject, json!({ "expected": n, "observed": format!("{other:?}") })),
    }
}

/// Inverts the outcome of a check that is meant to fail on this input.
pub fn expect_fail(mut r: CheckReport) -> CheckReport {
    r.details.insert("expected".into(), json!("fail"));
    match r.status {
        Status::Fail => {
            r.status = Status::Pass;
            r
        }
        Status::Pass => {
            r.status = Status::Fail;
            r.witness = Some(json!({ "expected": "fail", "observed": "pass" }));
            r
        }
        _ => r,
    }
}

/// A report standing in for a check whose preconditions were not met.
pub fn unmet_report(check: &str, subject: &str, err: &Error) -> CheckReport {
    CheckReport::new(check, subject, Status::PreconditionUnmet).with_detail("reason", err.to_string())
}

/// Passes reports through, turning unmet preconditions into reports and
/// anything else into a failure.
pub fn or_unmet(check: &str, subject: &str, r: Result<CheckReport>) -> CheckReport {
    match r {
        Ok(r) => r,
        Err(e @ Error::PreconditionUnmet(_)) => unmet_report(check, subject, &e),
        Err(e) => CheckReport::fail(check, subject, json!({ "error": e.to_string() })),
    }
}

fn family_tag(e: &CorpusEntry, r: CheckReport) -> CheckReport {
    r.with_detail("family", json!(e.family))
}

fn summary(check: &str, reports: &[CheckReport], qualifying: Option<usize>) -> CheckReport {
    let count = |s: Status| reports.iter().filter(|r| r.status == s).count();
    let (fail, contra) = (count(Status::Fail), count(Status::ContradictsTheorem));
    let mut r = CheckReport::pass("corpus_summary", check)
        .with_detail("total", reports.len())
        .with_detail("pass", count(Status::Pass))
        .with_detail("fail", fail)
        .with_detail("contradicts_theorem", contra)
        .with_detail("precondition_unmet", count(Status::PreconditionUnmet));
    if let Some(q) = qualifying {
        r = r.with_detail("qualifying", q);
    }
    let short = qualifying.is_some_and(|q| q < MIN_QUALIFYING);
    if fail + contra > 0 || short {
        r.status = Status::Fail;
        r.witness = Some(json!({ "failures": fail + contra, "qualifying": qualifying, "min_qualifying": MIN_QUALIFYING }));
    }
    r
}

fn zmod(m: u64) -> FiniteCommRing {
    FiniteCommRing::zmod(m).expect("modulus in range")
}

fn gf4() -> FiniteCommRing {
    FiniteCommRing::galois_field(2, vec![1, 1, 1]).expect("irreducible")
}

fn mat(m: u64, n: usize) -> Arc<Algebra> {
    Arc::new(Algebra::matrix(&zmod(m), n).expect("n >= 1"))
}

fn weyl(p: u64, a: u64, b: u64) -> Arc<Algebra> {
    Arc::new(Algebra::weyl(p, a, b).expect("prime p"))
}

fn weyl_pairs(p: u64) -> Vec<(u64, u64)> {
    (0..p).flat_map(|a| (0..p).map(move |b| (a, b))).collect()
}

/// The algebras the Azumaya suite classifies, in report order.
pub fn azumaya_grid() -> Vec<Arc<Algebra>> {
    let mut out = Vec::new();
    for n in 1..=3 {
        for m in [2, 3, 4, 6, 8, 9, 12] {
            out.push(mat(m, n));
        }
    }
    for p in [2, 3, 5] {
        for (a, b) in weyl_pairs(p) {
            out.push(weyl(p, a, b));
        }
    }
    out
}

fn random_ideal_family<G: Rng + ?Sized>(rng: &mut G) -> (Algebra, Vec<RingIdeal>) {
    let m = *[12u64, 18, 30, 36, 60].choose(rng).expect("nonempty");
    let n = rng.gen_range(1..=2);
    let divisors: Vec<u64> = (1..=m).filter(|d| m % d == 0).collect();
    let k = rng.gen_range(2..=3);
    let ideals = (0..k)
        .map(|_| RingIdeal::Zmod { d: *divisors.choose(rng).expect("nonempty") })
        .collect();
    (Algebra::matrix(&zmod(m), n).expect("n >= 1"), ideals)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn aliases_expand() {
        assert_eq!(expand("theorem41").unwrap(), vec!["center-thm41", "rank-thm41"]);
        assert_eq!(expand("all").unwrap().len(), SUITES.len());
        assert!(matches!(expand("nope"), Err(Error::UnknownSuite(_))));
    }

    #[test]
    fn sampled_suites_need_a_seed() {
        let opts = SuiteOptions::default();
        assert!(matches!(run_suite("al-thm26", &opts), Err(Error::MissingSeed(_))));
        assert!(matches!(run_suite("all", &opts), Err(Error::MissingSeed(_))));
    }

    #[test]
    fn expect_fail_inverts() {
        let r = expect_fail(CheckReport::fail("c", "s", json!(1)));
        assert_eq!(r.status, Status::Pass);
        assert_eq!(r.witness, Some(json!(1)));
        let r = expect_fail(CheckReport::pass("c", "s"));
        assert_eq!(r.status, Status::Fail);
    }

    #[test]
    fn split_suite_passes() {
        let r = run_suite("split-cor29", &SuiteOptions::default()).unwrap();
        assert_eq!(r.len(), 4 + 9 + 25);
        assert!(r.iter().all(|r| r.passed() && r.details["bijective"] == true));
    }

    #[test]
    fn fallback_switches_mode() {
        let a = mat(2, 2);
        let r = al_with_fallback(&a, 2, SampleMode::Exhaustive, 10, 3).unwrap();
        assert_eq!(r.details["mode"], "samples");
        assert!(r.details.contains_key("mode_switch"));
        assert!(r.passed());
    }
}
