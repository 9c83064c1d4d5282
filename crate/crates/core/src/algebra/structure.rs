//! Structural queries: centers, commutants, the enveloping map, the Azumaya
//! decision, ranks, ideal expansion and nilpotency.

use serde_json::json;

use crate::arith::{isqrt, GroupOrder};
use crate::error::{Error, Result};
use crate::linalg::{IntMatrix, Matrix, Subgroup};
use crate::report::CheckReport;
use crate::ring::{MaxIdeal, RingIdeal};

use super::{AlgElem, Algebra, AlgebraShape};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Nilpotency {
    /// Least `e` with `x^e = 0`.
    Index(u32),
    NotNilpotentWithinCap(u32),
}

impl Algebra {
    /// `{a : a g = g a for all g in gens}`.
    pub fn commutant(&self, gens: &[AlgElem]) -> Subgroup {
        if gens.is_empty() {
            return self.whole();
        }
        let dim = self.flat_dim();
        let cols: Vec<Vec<u64>> = (0..dim)
            .map(|a| {
                let e = self.generator(a);
                gens.iter()
                    .flat_map(|g| self.commutator(&e, g).into_coords())
                    .collect()
            })
            .collect();
        let h = IntMatrix::from_columns(dim * gens.len(), &cols);
        let target = self.moduli.repeat(gens.len());
        h.kernel(&self.moduli, &target)
            .expect("commutator map is well defined")
    }

    /// `Z(A)`. Commuting with the `R`-basis suffices since `R` acts centrally.
    pub fn center(&self) -> Subgroup {
        let basis: Vec<AlgElem> = (0..self.rank).map(|i| self.basis(i)).collect();
        self.commutant(&basis)
    }

    /// `Z(A) = R·1`.
    pub fn is_central(&self) -> bool {
        self.center() == self.scalar_span()
    }

    /// The map `A ⊗ A⁰ -> End_R(A)`, `a ⊗ b ↦ (x ↦ a x b)`, as a `d² x d²` matrix.
    ///
    /// Column `i*d + j` is the image of `e_i ⊗ e_j`; row `r*d + c` holds the
    /// coefficient of `e_r` in `e_i e_c e_j`.
    pub fn env_map(&self) -> Matrix {
        let d = self.rank;
        let base = &self.base;
        let mut m = Matrix::zeros(base, d * d, d * d);
        for i in 0..d {
            let ei = self.basis(i);
            for c in 0..d {
                let eic = self.mul(&ei, &self.basis(c));
                for j in 0..d {
                    let img = self.ring_coords(&self.mul(&eic, &self.basis(j)));
                    for (r, v) in img.into_iter().enumerate() {
                        if !base.is_zero(&v) {
                            m.set(r * d + c, i * d + j, v);
                        }
                    }
                }
            }
        }
        m
    }

    pub fn env_map_is_bijective(&self) -> bool {
        self.env_map().is_bijective()
    }

    /// Bijectivity of the enveloping map, with a kernel vector on failure.
    pub fn env_map_check(&self) -> CheckReport {
        let env = self.env_map();
        let report = CheckReport::pass("env_map", self.label.clone()).with_detail("size", env.rows());
        if env.is_bijective() {
            report
        } else {
            let k = env.kernel().into_iter().next();
            CheckReport { status: crate::report::Status::Fail, ..report }
                .with_witness(json!({ "kernel_vector": k }))
        }
    }

    /// Compares `center()` with a brute-force scan for `z` commuting with every
    /// element of the algebra. Needs `|A| <= max_elements`.
    pub fn center_oracle_check(&self, max_elements: u128) -> CheckReport {
        let report = CheckReport::pass("center_oracle", self.label.clone());
        let size = self.size().unwrap_or(u128::MAX);
        if size > max_elements {
            let mut r = report
                .with_precondition("size_within_budget", false)
                .with_detail("size", size.to_string())
                .with_detail("max_elements", max_elements.to_string());
            r.status = crate::report::Status::PreconditionUnmet;
            return r;
        }
        let all: Vec<AlgElem> = self.elements().collect();
        let brute: std::collections::BTreeSet<AlgElem> = all
            .iter()
            .filter(|z| all.iter().all(|x| self.mul(z, x) == self.mul(x, z)))
            .cloned()
            .collect();
        let computed: std::collections::BTreeSet<AlgElem> =
            self.center().elements().into_iter().map(|v| self.elem(&v)).collect();
        let report = report
            .with_precondition("size_within_budget", true)
            .with_detail("size", size as u64)
            .with_detail("center_size", brute.len());
        if brute == computed {
            report
        } else {
            let diff = brute.symmetric_difference(&computed).next().cloned();
            report.fail_escalated(json!({ "element": diff }))
        }
    }

    /// Pass iff at every maximal ideal the residue algebra is central with a
    /// bijective enveloping map, i.e. central simple over the residue field.
    pub fn is_azumaya(&self) -> CheckReport {
        let subject = self.label.clone();
        let mut checked = Vec::new();
        for m in self.base.maximal_ideals() {
            let (k, pi) = self
                .base
                .residue_field(&m)
                .expect("listed maximal ideals are valid");
            let ak = self.base_change(&pi).expect("residue projection is a ring map");
            let center = ak.center();
            let scalars = ak.scalar_span();
            if center != scalars {
                let witness = ak
                    .to_elems(&center)
                    .into_iter()
                    .find(|z| !scalars.contains(z.coords()))
                    .expect("center strictly larger than scalars");
                return CheckReport::fail(
                    "is_azumaya",
                    subject,
                    json!({
                        "maximal_ideal": m,
                        "residue_field": k.descriptor(),
                        "reason": "non-scalar central element",
                        "element": witness,
                    }),
                );
            }
            let env = ak.env_map();
            if !env.is_bijective() {
                let kernel = env.kernel();
                let witness = kernel.first().cloned().unwrap_or_default();
                return CheckReport::fail(
                    "is_azumaya",
                    subject,
                    json!({
                        "maximal_ideal": m,
                        "residue_field": k.descriptor(),
                        "reason": "enveloping map not bijective",
                        "env_kernel_vector": witness,
                    }),
                );
            }
            checked.push(serde_json::to_value(&m).unwrap());
        }
        CheckReport::pass("is_azumaya", subject)
            .with_detail("maximal_ideals", checked)
            .with_detail("rank", self.rank)
    }

    /// Rank of `A ⊗ R/m` over the residue field, read off the order of the image
    /// of the reduction map.
    pub fn rank_at(&self, m: &MaxIdeal) -> Result<usize> {
        let (k, pi) = self.base.residue_field(m)?;
        let l = self.base.flatten_len();
        let lk = k.flatten_len();
        let mut h = IntMatrix::zeros(self.rank * lk, self.rank * l);
        for blk in 0..self.rank {
            for a in 0..lk {
                for b in 0..l {
                    h.set(blk * lk + a, blk * l + b, pi.matrix().get(a, b));
                }
            }
        }
        let image = h.image(&self.moduli, &k.moduli().repeat(self.rank))?;
        let order = image.order();
        let field = GroupOrder::of_moduli(k.moduli());
        let p = k.characteristic();
        let r = order.exponent_of(p) / field.exponent_of(p);
        Ok(r as usize)
    }

    /// `(true, r)` when the rank is `r` at every maximal ideal.
    pub fn has_constant_rank(&self) -> (bool, usize) {
        let ranks: Vec<usize> = self
            .base
            .maximal_ideals()
            .iter()
            .map(|m| self.rank_at(m).expect("listed maximal ideals are valid"))
            .collect();
        let first = ranks[0];
        (ranks.iter().all(|&r| r == first), first)
    }

    /// Constant rank is a perfect square `n²`. Needs a passing Azumaya report.
    pub fn square_rank_check(&self, azumaya: &CheckReport) -> CheckReport {
        let base = CheckReport::pass("square_rank", self.label.clone())
            .with_precondition("azumaya", azumaya.passed());
        if !azumaya.passed() {
            let mut r = base;
            r.status = crate::report::Status::PreconditionUnmet;
            return r;
        }
        let (constant, r) = self.has_constant_rank();
        let n = isqrt(r as u64);
        if constant && n * n == r as u64 {
            base.with_detail("rank", r).with_detail("n", n)
        } else {
            base.with_precondition("constant_rank", constant)
                .fail_escalated(json!({"rank": r, "constant": constant}))
        }
    }

    /// `IA`.
    pub fn expand_ideal(&self, ideal: &RingIdeal) -> Result<Subgroup> {
        self.base.validate_ideal(ideal)?;
        let gens: Vec<AlgElem> = self
            .base
            .ideal_generators(ideal)
            .iter()
            .flat_map(|g| (0..self.rank).map(move |k| (g.clone(), k)))
            .map(|(g, k)| self.scalar_mul(&g, &self.basis(k)))
            .collect();
        Ok(self.span(gens.iter()))
    }

    /// `⋂ (a_i A) = (⋂ a_i) A`.
    pub fn ideal_intersection_check(&self, ideals: &[RingIdeal]) -> Result<CheckReport> {
        if ideals.is_empty() {
            return Err(Error::InvalidDescriptor("need at least one ideal".into()));
        }
        let mut lhs = self.expand_ideal(&ideals[0])?;
        let mut meet = ideals[0].clone();
        for i in &ideals[1..] {
            lhs = lhs.intersect(&self.expand_ideal(i)?);
            meet = self.base.ideal_intersection(&meet, i);
        }
        let rhs = self.expand_ideal(&meet)?;
        let report = CheckReport::pass("ideal_intersection", self.label.clone())
            .with_detail("ideals", serde_json::to_value(ideals).unwrap())
            .with_detail("intersection", serde_json::to_value(&meet).unwrap());
        if lhs == rhs {
            Ok(report)
        } else {
            let witness = lhs
                .generators()
                .into_iter()
                .find(|g| !rhs.contains(g))
                .or_else(|| rhs.generators().into_iter().find(|g| !lhs.contains(g)));
            Ok(report.fail_escalated(json!({ "element": witness })))
        }
    }

    pub fn nilpotency_index(&self, x: &AlgElem, cap: u32) -> Nilpotency {
        let mut power = x.clone();
        for e in 1..=cap {
            if self.is_zero(&power) {
                return Nilpotency::Index(e);
            }
            if e < cap {
                power = self.mul(&power, x);
            }
        }
        Nilpotency::NotNilpotentWithinCap(cap)
    }

    /// In `M_n(R)`: the nilpotent with ones on the superdiagonal, so its first
    /// column is zero and `e_i ↦ e_{i-1}`.
    pub fn jordan_cell(&self) -> Result<AlgElem> {
        let AlgebraShape::Matrix { n } = self.shape else {
            return Err(Error::InvalidAlgebra(format!("{} is not a matrix algebra", self.label)));
        };
        let mut coeffs = vec![self.base.zero(); n * n];
        for i in 1..n {
            coeffs[(i - 1) * n + i] = self.base.one();
        }
        Ok(self.from_ring_coords(&coeffs))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::FiniteCommRing;

    fn r(n: u64) -> FiniteCommRing {
        FiniteCommRing::zmod(n).unwrap()
    }

    fn brute_center(a: &Algebra) -> std::collections::BTreeSet<AlgElem> {
        let all: Vec<AlgElem> = a.elements().collect();
        all.iter()
            .filter(|z| (0..a.rank()).all(|i| a.commutator(z, &a.basis(i)) == a.zero()))
            .cloned()
            .collect()
    }

    #[test]
    fn center_examples() {
        let m = Algebra::matrix(&r(4), 2).unwrap();
        let c = m.center();
        let brute = brute_center(&m);
        assert_eq!(brute.len(), 4);
        assert_eq!(c.elements().into_iter().map(|v| m.elem(&v)).collect::<std::collections::BTreeSet<_>>(), brute);
        assert_eq!(c, m.scalar_span());
        let w = Algebra::weyl(2, 0, 0).unwrap();
        assert_eq!(brute_center(&w).len(), 2);
        assert!(w.is_central());
        let comm = Algebra::diagonal(&r(3), 2).unwrap();
        assert_eq!(comm.center(), comm.whole());
        assert!(!comm.is_central());
        assert!(Algebra::weyl(3, 0, 0).unwrap().is_central());
    }

    #[test]
    fn commutant_examples() {
        let m = Algebra::matrix(&r(3), 2).unwrap();
        assert_eq!(m.commutant(&[m.one()]), m.whole());
        let basis: Vec<_> = (0..4).map(|i| m.basis(i)).collect();
        assert_eq!(m.commutant(&basis), m.scalar_span());
    }

    #[test]
    fn env_examples() {
        let base = Algebra::diagonal(&r(5), 1).unwrap();
        assert_eq!(base.env_map(), Matrix::identity(&r(5), 1));
        assert!(Algebra::matrix(&r(2), 2).unwrap().env_map_is_bijective());
        assert!(Algebra::matrix(&r(4), 2).unwrap().env_map_is_bijective());
        assert!(Algebra::weyl(3, 1, 2).unwrap().env_map_is_bijective());
        assert!(!Algebra::diagonal(&r(2), 2).unwrap().env_map_is_bijective());
    }

    #[test]
    fn azumaya_examples() {
        let m = Algebra::matrix(&r(12), 2).unwrap();
        let rep = m.is_azumaya();
        assert!(rep.passed());
        assert_eq!(rep.details["maximal_ideals"].as_array().unwrap().len(), 2);
        assert!(Algebra::weyl(3, 2, 1).unwrap().is_azumaya().passed());
        let t = Algebra::upper_triangular(&r(2), 2).unwrap();
        let rep = t.is_azumaya();
        assert!(!rep.passed());
        assert!(rep.witness.is_some());
        assert_eq!(rep.witness.unwrap()["reason"], "enveloping map not bijective");
    }

    #[test]
    fn rank_examples() {
        let m = Algebra::matrix(&r(6), 2).unwrap();
        assert_eq!(m.rank_at(&MaxIdeal::Zmod { p: 2 }).unwrap(), 4);
        let w = Algebra::weyl(5, 1, 1).unwrap();
        assert_eq!(w.rank_at(&MaxIdeal::Zmod { p: 5 }).unwrap(), 25);
        assert_eq!(Algebra::matrix(&r(12), 3).unwrap().has_constant_rank(), (true, 9));
    }

    #[test]
    fn square_rank_examples() {
        let m3 = Algebra::matrix(&r(2), 3).unwrap();
        let rep = m3.square_rank_check(&m3.is_azumaya());
        assert_eq!(rep.details["n"], 3);
        let base = Algebra::diagonal(&r(7), 1).unwrap();
        assert_eq!(base.square_rank_check(&base.is_azumaya()).details["n"], 1);
        let t = Algebra::upper_triangular(&r(2), 2).unwrap();
        assert_eq!(
            t.square_rank_check(&t.is_azumaya()).status,
            crate::report::Status::PreconditionUnmet
        );
    }

    #[test]
    fn expand_ideal_examples() {
        let m = Algebra::matrix(&r(4), 2).unwrap();
        let ia = m.expand_ideal(&RingIdeal::Zmod { d: 2 }).unwrap();
        assert_eq!(ia.order().to_u128(), Some(16));
        assert!(ia.elements().iter().all(|v| v.iter().all(|x| x % 2 == 0)));
        assert_eq!(m.expand_ideal(&RingIdeal::Zmod { d: 1 }).unwrap(), m.whole());
    }

    #[test]
    fn intersection_examples() {
        let m = Algebra::matrix(&r(12), 2).unwrap();
        let rep = m
            .ideal_intersection_check(&[RingIdeal::Zmod { d: 2 }, RingIdeal::Zmod { d: 3 }])
            .unwrap();
        assert!(rep.passed());
        assert_eq!(rep.details["intersection"]["d"], 6);
        let single = m.ideal_intersection_check(&[RingIdeal::Zmod { d: 4 }]).unwrap();
        assert!(single.passed());
    }

    #[test]
    fn nilpotency_examples() {
        let m = Algebra::matrix(&r(5), 4).unwrap();
        let j = m.jordan_cell().unwrap();
        assert_eq!(m.nilpotency_index(&j, 16), Nilpotency::Index(4));
        assert_eq!(m.nilpotency_index(&m.one(), 16), Nilpotency::NotNilpotentWithinCap(16));
        assert_eq!(m.nilpotency_index(&m.zero(), 16), Nilpotency::Index(1));
        let m2 = Algebra::matrix(&r(2), 2).unwrap();
        assert_eq!(m2.to_matrix(&m2.jordan_cell().unwrap()).unwrap(), Matrix::from_ints(&r(2), &[vec![0, 1], vec![0, 0]]).unwrap());
        let m1 = Algebra::matrix(&r(2), 1).unwrap();
        assert_eq!(m1.jordan_cell().unwrap(), m1.zero());
    }
}
