//! Theorem checks on verified homomorphisms.

use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::algebra::{AlgElem, Algebra, AlgebraShape, Nilpotency};
use crate::arith::GroupOrder;
use crate::error::{Error, Result};
use crate::linalg::{IntMatrix, Subgroup};
use crate::report::{seeded_rng, CheckReport, SampleMode, Status};

use super::{AlgebraHom, FactCache};

/// What a center-preserving hom does on centers.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CenterMap {
    /// Additive generators of the source center.
    pub generators: Vec<AlgElem>,
    pub images: Vec<AlgElem>,
    /// `R -> R'` with `φ(r·1) = ψ(r)·1`, when `φ` maps `R·1` into `R'·1`.
    pub base_map: Option<IntMatrix>,
}

/// The four isomorphism verdicts and the data behind the last one.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsoVerdicts {
    /// Center map bijective onto the target center.
    pub center_iso: bool,
    pub equal_rank: bool,
    pub bijective: bool,
    /// `R -> R'` injective, so that `ker φ = IA` with `I = 0`.
    pub base_injective: bool,
    /// Commutant of the image equals `R'·1`.
    pub commutant_scalar: bool,
    /// `A_2 ⊗ C -> A'` bijective; `None` when no free bases were found.
    pub tau_bijective: Option<bool>,
}

impl IsoVerdicts {
    pub fn criterion_a(&self) -> bool {
        self.center_iso && self.equal_rank
    }

    pub fn criterion_d(&self) -> bool {
        self.base_injective && self.commutant_scalar && self.tau_bijective == Some(true)
    }

    pub fn agree(&self) -> bool {
        self.criterion_a() == self.bijective && self.bijective == self.criterion_d()
    }
}

fn unmet(what: &str, h: &AlgebraHom) -> Error {
    Error::PreconditionUnmet(format!("{what} for {}", h.label()))
}

impl AlgebraHom {
    /// Whether `φ(Z(A))` commutes with every basis element of the target.
    pub fn center_preservation_check(&self, facts: &FactCache) -> (CheckReport, Option<CenterMap>) {
        let (fs, ft) = (facts.get(&self.source), facts.get(&self.target));
        let (src, tgt) = (&self.source, &self.target);
        let report = CheckReport::pass("center_preservation", self.label.clone())
            .with_precondition("verified", self.is_verified())
            .with_precondition("source_azumaya", fs.is_azumaya())
            .with_precondition("target_azumaya", ft.is_azumaya())
            .with_precondition(
                "equal_constant_rank",
                fs.constant_rank.0 && ft.constant_rank.0 && fs.constant_rank.1 == ft.constant_rank.1,
            )
            .with_precondition("target_base_reduced", ft.base_reduced);
        let generators = src.to_elems(&fs.center);
        let images: Vec<AlgElem> = generators.iter().map(|c| self.apply(c)).collect();
        for (c, img) in generators.iter().zip(&images) {
            for j in 0..tgt.rank() {
                let comm = tgt.commutator(img, &tgt.basis(j));
                if !tgt.is_zero(&comm) {
                    return (
                        report.fail_escalated(json!({
                            "center_element": c,
                            "image": img,
                            "target_basis_index": j,
                            "commutator": comm,
                        })),
                        None,
                    );
                }
            }
        }
        let base_map = self.base_map();
        let report = match &base_map {
            Some(m) => report.with_detail("base_map", json!(m.to_rows())),
            None => report,
        };
        (report, Some(CenterMap { generators, images, base_map }))
    }

    /// `R -> R'` read off `φ(r·1) ∈ R'·1`, if it lands there.
    fn base_map(&self) -> Option<IntMatrix> {
        let (src, tgt) = (&self.source, &self.target);
        let structural = tgt.structural_matrix();
        let cols: Option<Vec<Vec<u64>>> = (0..src.base().flatten_len())
            .map(|l| {
                let v = self.apply(&src.scalar(&src.base().coordinate_generator(l)));
                structural
                    .solve(tgt.base().moduli(), tgt.moduli(), v.coords())
                    .ok()
                    .map(|(x, _)| x)
            })
            .collect();
        cols.map(|c| IntMatrix::from_columns(tgt.base().flatten_len(), &c))
    }

    /// `rank(A) <= rank(A')` for a verified hom between Azumaya algebras of
    /// constant rank.
    pub fn rank_comparison_check(&self, facts: &FactCache) -> Result<CheckReport> {
        let (fs, ft) = (facts.get(&self.source), facts.get(&self.target));
        if !self.is_verified() {
            return Err(unmet("unverified hom", self));
        }
        if !fs.is_azumaya() || !ft.is_azumaya() {
            return Err(unmet("non-Azumaya endpoint", self));
        }
        if !fs.constant_rank.0 || !ft.constant_rank.0 {
            return Err(unmet("non-constant rank", self));
        }
        let (r, r2) = (fs.constant_rank.1, ft.constant_rank.1);
        let report = CheckReport::pass("rank_comparison", self.label.clone())
            .with_precondition("verified", true)
            .with_precondition("azumaya_constant_rank", true)
            .with_detail("source_rank", r)
            .with_detail("target_rank", r2);
        Ok(if r <= r2 {
            report
        } else {
            report.fail_escalated(json!({"source_rank": r, "target_rank": r2}))
        })
    }

    /// Evaluates the four isomorphism criteria; passes iff they agree.
    pub fn isomorphism_check(&self, facts: &FactCache) -> Result<(CheckReport, IsoVerdicts)> {
        let (fs, ft) = (facts.get(&self.source), facts.get(&self.target));
        if !self.is_verified() {
            return Err(unmet("unverified hom", self));
        }
        if !fs.is_azumaya() || !ft.is_azumaya() {
            return Err(unmet("non-Azumaya endpoint", self));
        }
        let tgt = &self.target;
        let (cp, _) = self.center_preservation_check(facts);
        let center_iso = cp.status == Status::Pass && {
            let gens: Vec<AlgElem> = self.source.to_elems(&fs.center);
            let imgs: Vec<AlgElem> = gens.iter().map(|c| self.apply(c)).collect();
            let image = tgt.span(imgs.iter());
            image == ft.center && image.order() == fs.center.order()
        };
        let equal_rank = fs.constant_rank.0
            && ft.constant_rank.0
            && fs.constant_rank.1 == ft.constant_rank.1;
        let bijective = self.is_bijective();
        let base_injective = self.contracted_ideal()? == self.source.base().zero_ideal();
        let image_gens = tgt.to_elems(&self.image());
        let a2 = tgt.module_span(image_gens.iter());
        let a2_gens = tgt.to_elems(&a2);
        let commutant = tgt.commutant(&a2_gens);
        let commutant_scalar = commutant == tgt.scalar_span();
        let tau_bijective = tau_bijective(tgt, &a2, &commutant);
        let verdicts = IsoVerdicts {
            center_iso,
            equal_rank,
            bijective,
            base_injective,
            commutant_scalar,
            tau_bijective,
        };
        let report = CheckReport::pass("isomorphism", self.label.clone())
            .with_precondition("verified", true)
            .with_precondition("azumaya", true)
            .with_detail("verdicts", serde_json::to_value(&verdicts).unwrap())
            .with_detail("iso", if bijective { "ISO" } else { "NOT-ISO" });
        let report = if verdicts.agree() {
            report
        } else {
            report.fail_escalated(serde_json::to_value(&verdicts).unwrap())
        };
        Ok((report, verdicts))
    }

    /// A base-identity endomorphism of an Azumaya algebra must be bijective.
    pub fn endo_auto_check(&self, facts: &FactCache) -> Result<CheckReport> {
        if *self.source != *self.target {
            return Err(unmet("not an endomorphism", self));
        }
        if !self.is_verified() {
            return Err(unmet("unverified hom", self));
        }
        if !facts.get(&self.source).is_azumaya() {
            return Err(unmet("non-Azumaya algebra", self));
        }
        if !self.is_base_identity() {
            return Err(unmet("restriction to the base is not the identity", self));
        }
        let report = CheckReport::pass("endo_auto", self.label.clone())
            .with_precondition("verified", true)
            .with_precondition("azumaya", true)
            .with_precondition("base_identity", true);
        Ok(if self.is_bijective() {
            report
        } else {
            let k = self.kernel().generators().into_iter().next();
            let witness = match k {
                Some(v) => json!({"kernel_element": v}),
                None => json!({"image_order": format!("{:?}", self.image().order())}),
            };
            report.fail_escalated(witness)
        })
    }
}

/// Greedy free `R`-basis of a submodule, if the greedy choice finds one.
fn free_basis(a: &Algebra, s: &Subgroup) -> Option<Vec<AlgElem>> {
    let mut basis: Vec<AlgElem> = Vec::new();
    let mut span = Subgroup::zero(a.moduli());
    for v in a.to_elems(s) {
        if span == *s {
            break;
        }
        let mut trial = basis.clone();
        trial.push(v);
        let t = a.module_span(trial.iter());
        let free = GroupOrder::of_moduli(&a.base().moduli().repeat(trial.len()));
        if t.order() == free {
            basis = trial;
            span = t;
        }
    }
    (span == *s).then_some(basis)
}

/// Bijectivity of `A_2 ⊗ C -> A'`, `a ⊗ c ↦ a c`.
fn tau_bijective(tgt: &Algebra, a2: &Subgroup, c: &Subgroup) -> Option<bool> {
    if *c == tgt.scalar_span() {
        return Some(*a2 == tgt.whole());
    }
    let ba = free_basis(tgt, a2)?;
    let bc = free_basis(tgt, c)?;
    if ba.len() * bc.len() != tgt.rank() {
        return Some(false);
    }
    let products: Vec<AlgElem> = ba.iter().flat_map(|x| bc.iter().map(move |y| tgt.mul(x, y))).collect();
    Some(tgt.module_span(products.iter()) == tgt.whole())
}

/// Free rank of a submodule that has a free basis.
pub fn free_rank(a: &Algebra, s: &Subgroup) -> Option<usize> {
    free_basis(a, s).map(|b| b.len())
}

/// Looks for an element of `M_{n'}(k)` with nilpotency index exactly `n`.
///
/// When `n' < n` none can exist, so any hit (or any nilpotent of index above
/// `n'`) is a contradiction. When `n <= n'` the probe instead exhibits one.
pub fn jordan_obstruction_probe(n: usize, target: &Arc<Algebra>, mode: SampleMode) -> Result<CheckReport> {
    let AlgebraShape::Matrix { n: np } = *target.shape() else {
        return Err(Error::PreconditionUnmet(format!("{} is not a matrix algebra", target.label())));
    };
    if !target.base().is_field() {
        return Err(Error::PreconditionUnmet(format!("{} is not over a field", target.base())));
    }
    if n == 0 {
        return Err(Error::InvalidDescriptor("nilpotency index must be at least 1".into()));
    }
    let subject = format!("index {n} in {}", target.label());
    let report = CheckReport::pass("jordan_obstruction", subject).with_precondition("n_prime_lt_n", np < n);
    if n <= np {
        let mut rows = vec![vec![0i64; np]; np];
        for i in 1..n {
            rows[i - 1][i] = 1;
        }
        let x = target.matrix_elem(&rows)?;
        debug_assert_eq!(target.nilpotency_index(&x, n as u32), Nilpotency::Index(n as u32));
        return Ok(report.with_detail("index_n_element", json!(x)));
    }
    let cap = n as u32;
    let mut nilpotents = 0u64;
    let mut max_index = 0u32;
    let mut examine = |x: &AlgElem| -> Option<serde_json::Value> {
        if let Nilpotency::Index(e) = target.nilpotency_index(x, cap) {
            nilpotents += 1;
            max_index = max_index.max(e);
            if e as usize > np {
                return Some(json!({"element": x, "index": e}));
            }
        }
        None
    };
    let (examined, seeds) = match mode {
        SampleMode::Exhaustive => {
            let mut count = 0u64;
            for x in target.elements() {
                count += 1;
                if let Some(w) = examine(&x) {
                    return Ok(report.fail_escalated(w));
                }
            }
            (count, None)
        }
        SampleMode::Samples { count, seed } => {
            let mut rng = seeded_rng(seed);
            for i in 0..count {
                let x = if i % 2 == 0 {
                    target.random_elem(&mut rng)
                } else {
                    conjugated_strict_upper(target, np, &mut rng)
                };
                if let Some(w) = examine(&x) {
                    return Ok(report.with_seeds(seed, count).fail_escalated(w));
                }
            }
            (count, Some((seed, count)))
        }
    };
    let mut report = report
        .with_detail("examined", examined)
        .with_detail("nilpotents", nilpotents)
        .with_detail("max_index", max_index);
    if let Some((s, c)) = seeds {
        report = report.with_seeds(s, c);
    }
    Ok(report)
}

/// `g N g⁻¹` with `N` random strictly upper triangular and `g` random invertible.
fn conjugated_strict_upper<G: Rng + ?Sized>(a: &Algebra, n: usize, rng: &mut G) -> AlgElem {
    let base = a.base();
    let l = base.flatten_len();
    let mut coords = vec![0u64; a.flat_dim()];
    for i in 0..n {
        for j in i + 1..n {
            let r = base.random_elem(rng);
            coords[(i * n + j) * l..(i * n + j + 1) * l].copy_from_slice(r.coords());
        }
    }
    let nil = a.elem(&coords);
    loop {
        let g = a.random_elem(rng);
        if let Ok(inv) = a.inverse(&g) {
            return a.mul(&a.mul(&g, &nil), &inv);
        }
    }
}
