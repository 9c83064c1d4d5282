//! Randomized search for center-violating homs into non-reduced targets.

use std::sync::Arc;

use rand::Rng;
use serde_json::json;

use crate::algebra::{AlgElem, Algebra};
use crate::arith::gcd;
use crate::error::{Error, Result};
use crate::linalg::IntMatrix;
use crate::report::{seeded_rng, CheckReport, Status};

use super::{AlgebraHom, FactCache};

/// Candidate homs that are known to be verified, used as perturbation seeds.
fn known_homs(source: &Arc<Algebra>, target: &Arc<Algebra>) -> Vec<AlgebraHom> {
    let mut out = Vec::new();
    if source == target {
        out.push(AlgebraHom::identity(source.clone()));
    }
    let n = source.base().characteristic();
    if let crate::ring::RingKind::ZMod(_) = source.base().kind() {
        for d in (2..=n).filter(|d| n % d == 0) {
            if let Ok(h) = AlgebraHom::reduction(source.clone(), &crate::ring::RingIdeal::Zmod { d }) {
                if h.target() == target && h.is_verified() {
                    out.push(h);
                }
            }
        }
    }
    out
}

/// Allowed entry step so that column `c` stays well defined into row `r`.
fn entry_step(source: &Algebra, target: &Algebra, r: usize, c: usize) -> u64 {
    let m = target.moduli()[r];
    m / gcd(source.moduli()[c], m)
}

fn random_entry<G: Rng + ?Sized>(rng: &mut G, step: u64, modulus: u64) -> u64 {
    rng.gen_range(0..modulus / step) * step
}

/// Whether some image of a central generator fails to commute with the target.
fn violates_center(h: &AlgebraHom, center: &[AlgElem]) -> Option<serde_json::Value> {
    let tgt = h.target();
    for c in center {
        let img = h.apply(c);
        for j in 0..tgt.rank() {
            let comm = tgt.commutator(&img, &tgt.basis(j));
            if !tgt.is_zero(&comm) {
                return Some(json!({
                    "matrix": h.matrix().to_rows(),
                    "center_element": c,
                    "image": img,
                    "target_basis_index": j,
                    "commutator": comm,
                }));
            }
        }
    }
    None
}

/// Samples `budget` candidate matrices `source -> target`, alternating between
/// uniformly random well-defined matrices and perturbations of known homs, and
/// reports the first verified hom that does not preserve centers. Finding
/// nothing is evidence only.
pub fn counterexample_search(
    source: Arc<Algebra>,
    target: Arc<Algebra>,
    budget: u64,
    seed: u64,
    facts: &FactCache,
) -> Result<CheckReport> {
    if target.base().is_reduced() {
        return Err(Error::PreconditionUnmet(format!(
            "target base {} is reduced",
            target.base()
        )));
    }
    let subject = format!("{} -> {}", source.label(), target.label());
    let center = source.to_elems(&facts.get(&source).center);
    let known = known_homs(&source, &target);
    let (rows, cols) = (target.flat_dim(), source.flat_dim());
    let mut rng = seeded_rng(seed);
    let (mut unital, mut verified) = (0u64, 0u64);
    let mut report = CheckReport::new("counterexample_search", subject, Status::NotFound)
        .with_precondition("target_base_nonreduced", true)
        .with_seeds(seed, budget);
    for i in 0..budget {
        let m = if !known.is_empty() && i % 2 == 1 {
            let mut m = known[rng.gen_range(0..known.len())].matrix().clone();
            for _ in 0..rng.gen_range(1..=2) {
                let (r, c) = (rng.gen_range(0..rows), rng.gen_range(0..cols));
                let step = entry_step(&source, &target, r, c);
                m.set(r, c, random_entry(&mut rng, step, target.moduli()[r]));
            }
            m
        } else {
            let mut m = IntMatrix::zeros(rows, cols);
            for r in 0..rows {
                for c in 0..cols {
                    let step = entry_step(&source, &target, r, c);
                    m.set(r, c, random_entry(&mut rng, step, target.moduli()[r]));
                }
            }
            m
        };
        let h = AlgebraHom::verify(source.clone(), target.clone(), m, "candidate")?;
        if h.apply(&source.one()) == target.one() {
            unital += 1;
        }
        if !h.is_verified() {
            continue;
        }
        verified += 1;
        if let Some(w) = violates_center(&h, &center) {
            report.status = Status::Fail;
            report = report
                .with_witness(w)
                .with_detail("outcome", "found")
                .with_detail("candidate_index", i);
            return Ok(report
                .with_detail("unital", unital)
                .with_detail("verified", verified));
        }
    }
    Ok(report
        .with_detail("outcome", "not-found")
        .with_detail("candidates", budget)
        .with_detail("known_seed_homs", known.len())
        .with_detail("unital", unital)
        .with_detail("verified", verified))
}
