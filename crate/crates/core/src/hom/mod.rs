//! Unital ring homomorphisms between algebras, possibly over different base
//! rings, stored as integer matrices on flattened coordinates.

mod checks;
mod facts;
mod search;
mod spec;

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::algebra::{AlgElem, Algebra, AlgebraShape};
use crate::error::{Error, Result};
use crate::linalg::{IntMatrix, Subgroup};
use crate::report::CheckReport;
use crate::ring::{RingHom, RingIdeal, RingKind};

pub use checks::{free_rank, jordan_obstruction_probe, CenterMap, IsoVerdicts};
pub use facts::{AlgebraFacts, FactCache};
pub use search::counterexample_search;
pub use spec::{HomSpec, IdealSpec};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", content = "witness", rename_all = "snake_case")]
pub enum HomStatus {
    Unverified,
    Verified,
    Refuted(Value),
}

#[derive(Clone, Debug)]
pub struct AlgebraHom {
    source: Arc<Algebra>,
    target: Arc<Algebra>,
    matrix: IntMatrix,
    status: HomStatus,
    label: String,
}

impl AlgebraHom {
    /// An unchecked map. Only well-definedness of the shape is enforced.
    pub fn unverified(
        source: Arc<Algebra>,
        target: Arc<Algebra>,
        matrix: IntMatrix,
        label: impl Into<String>,
    ) -> Result<Self> {
        if matrix.rows() != target.flat_dim() || matrix.cols() != source.flat_dim() {
            return Err(Error::DimensionMismatch(format!(
                "matrix is {}x{}, expected {}x{}",
                matrix.rows(),
                matrix.cols(),
                target.flat_dim(),
                source.flat_dim()
            )));
        }
        Ok(Self {
            source,
            target,
            matrix,
            status: HomStatus::Unverified,
            label: label.into(),
        })
    }

    /// Checks well-definedness, `φ(1) = 1` and `φ(ε_a ε_b) = φ(ε_a) φ(ε_b)` on all
    /// flattened generator pairs, which gives multiplicativity by bilinearity.
    pub fn verify(
        source: Arc<Algebra>,
        target: Arc<Algebra>,
        matrix: IntMatrix,
        label: impl Into<String>,
    ) -> Result<Self> {
        let mut h = Self::unverified(source, target, matrix, label)?;
        h.status = match h.first_failure() {
            None => HomStatus::Verified,
            Some(w) => HomStatus::Refuted(w),
        };
        Ok(h)
    }

    fn first_failure(&self) -> Option<Value> {
        let (src, tgt) = (&self.source, &self.target);
        if let Err(Error::IllFormedMap { row, col, order, modulus }) =
            self.matrix.check_well_defined(src.moduli(), tgt.moduli())
        {
            return Some(json!({
                "kind": "well_defined",
                "row": row,
                "col": col,
                "source_order": order,
                "target_modulus": modulus,
            }));
        }
        let image_of_one = self.apply(&src.one());
        if image_of_one != tgt.one() {
            return Some(json!({"kind": "unit", "image_of_one": image_of_one}));
        }
        let dim = src.flat_dim();
        let images: Vec<AlgElem> = (0..dim).map(|a| self.apply(&src.generator(a))).collect();
        for a in 0..dim {
            let ga = src.generator(a);
            for b in 0..dim {
                let lhs = self.apply(&src.mul(&ga, &src.generator(b)));
                let rhs = tgt.mul(&images[a], &images[b]);
                if lhs != rhs {
                    return Some(json!({
                        "kind": "multiplicative",
                        "a": a,
                        "b": b,
                        "image_of_product": lhs,
                        "product_of_images": rhs,
                    }));
                }
            }
        }
        None
    }

    pub fn source(&self) -> &Arc<Algebra> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Algebra> {
        &self.target
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn status(&self) -> &HomStatus {
        &self.status
    }

    pub fn is_verified(&self) -> bool {
        self.status == HomStatus::Verified
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn set_label(&mut self, label: impl Into<String>) {
        self.label = label.into();
    }

    pub fn apply(&self, x: &AlgElem) -> AlgElem {
        self.target.elem(&self.matrix.apply(x.coords(), self.target.moduli()))
    }

    /// Verification outcome as a report.
    pub fn verification_report(&self) -> CheckReport {
        match &self.status {
            HomStatus::Verified => CheckReport::pass("verify_hom", self.label.clone()),
            HomStatus::Refuted(w) => CheckReport::fail("verify_hom", self.label.clone(), w.clone()),
            HomStatus::Unverified => {
                let h = Self::verify(self.source.clone(), self.target.clone(), self.matrix.clone(), self.label.clone())
                    .expect("shape already checked");
                h.verification_report()
            }
        }
    }

    // ---- constructors ---------------------------------------------------

    pub fn identity(a: Arc<Algebra>) -> Self {
        let m = IntMatrix::identity(a.flat_dim());
        let label = format!("id[{}]", a.label());
        Self {
            source: a.clone(),
            target: a,
            matrix: m,
            status: HomStatus::Verified,
            label,
        }
    }

    /// `x ↦ u x u⁻¹`.
    pub fn conjugation(a: Arc<Algebra>, u: &AlgElem) -> Result<Self> {
        let inv = a.inverse(u)?;
        let cols: Vec<Vec<u64>> = (0..a.flat_dim())
            .map(|g| a.mul(&a.mul(u, &a.generator(g)), &inv).into_coords())
            .collect();
        let m = IntMatrix::from_columns(a.flat_dim(), &cols);
        let label = format!("conj[{}]({:?})", a.label(), u.coords());
        Self::verify(a.clone(), a, m, label)
    }

    /// `A -> A ⊗_R S` along a ring homomorphism `R -> S`.
    pub fn base_change(a: Arc<Algebra>, phi: &RingHom) -> Result<Self> {
        let target = Arc::new(a.base_change(phi)?);
        let (l, lt) = (a.base().flatten_len(), phi.target().flatten_len());
        let mut m = IntMatrix::zeros(target.flat_dim(), a.flat_dim());
        for blk in 0..a.rank() {
            for r in 0..lt {
                for c in 0..l {
                    m.set(blk * lt + r, blk * l + c, phi.matrix().get(r, c));
                }
            }
        }
        let label = format!("{} -> {}", a.label(), target.label());
        Self::verify(a, target, m, label)
    }

    /// `A -> A/IA`. The unit ideal is rejected since the quotient is zero.
    pub fn reduction(a: Arc<Algebra>, ideal: &RingIdeal) -> Result<Self> {
        let (_, proj) = a.base().quotient(ideal)?;
        let mut h = Self::base_change(a, &proj)?;
        h.label = format!("reduce[{}]({})", h.source.label(), ideal_label(ideal));
        Ok(h)
    }

    /// `M_m(R) -> M_{km}(R)`, `x ↦ diag(x, ..., x)`.
    pub fn diagonal_embed(a: Arc<Algebra>, k: usize) -> Result<Self> {
        let AlgebraShape::Matrix { n: m } = *a.shape() else {
            return Err(Error::InvalidAlgebra(format!("{} is not a matrix algebra", a.label())));
        };
        if k == 0 {
            return Err(Error::InvalidAlgebra("block count must be at least 1".into()));
        }
        let big = m * k;
        let target = Arc::new(Algebra::matrix(a.base(), big)?);
        let l = a.base().flatten_len();
        let mut h = IntMatrix::zeros(target.flat_dim(), a.flat_dim());
        for i in 0..m {
            for j in 0..m {
                for blk in 0..k {
                    let t = (blk * m + i) * big + blk * m + j;
                    for c in 0..l {
                        h.set(t * l + c, (i * m + j) * l + c, 1);
                    }
                }
            }
        }
        let label = format!("diag[{}->{}]", a.label(), target.label());
        Self::verify(a, target, h, label)
    }

    /// `W(p,a,b) -> M_p(F_p)`: `x` acts as multiplication by `t + a` on
    /// `F_p[t]/(t^p)` and `y` as `d/dt + b`, both in the basis `1, t, ..., t^{p-1}`.
    pub fn weyl_splitting(p: u64, a: u64, b: u64) -> Result<Self> {
        let w = Arc::new(Algebra::weyl(p, a, b)?);
        let (a, b) = (a % p, b % p);
        let pu = p as usize;
        let target = Arc::new(Algebra::matrix(w.base(), pu)?);
        let mut x = vec![vec![0i64; pu]; pu];
        let mut y = vec![vec![0i64; pu]; pu];
        for k in 0..pu {
            x[k][k] = a as i64;
            if k + 1 < pu {
                x[k + 1][k] = 1;
            }
            y[k][k] = b as i64;
            if k >= 1 {
                y[k - 1][k] = k as i64;
            }
        }
        let (x, y) = (target.matrix_elem(&x)?, target.matrix_elem(&y)?);
        let mut xpow = vec![target.one()];
        let mut ypow = vec![target.one()];
        for _ in 1..pu {
            xpow.push(target.mul(xpow.last().unwrap(), &x));
            ypow.push(target.mul(ypow.last().unwrap(), &y));
        }
        let mut cols = vec![Vec::new(); pu * pu];
        for i in 0..pu {
            for j in 0..pu {
                cols[Algebra::weyl_index(p, i, j)] = target.mul(&xpow[i], &ypow[j]).into_coords();
            }
        }
        let m = IntMatrix::from_columns(target.flat_dim(), &cols);
        let label = format!("split[{}]", w.label());
        let h = Self::verify(w, target, m, label)?;
        if !h.is_verified() {
            return Err(Error::VerificationFailed(format!("{:?}", h.status)));
        }
        if !h.is_bijective() {
            return Err(Error::VerificationFailed("splitting map is not bijective".into()));
        }
        Ok(h)
    }

    /// `x ↦ u F(x) u⁻¹` on `M_n(GF(p^k))`, with `F` the entrywise Frobenius.
    /// A ring automorphism that is not linear over the base when `k > 1`.
    pub fn frobenius_conjugation(a: Arc<Algebra>, u: &AlgElem) -> Result<Self> {
        let RingKind::GaloisField { p, .. } = a.base().kind() else {
            return Err(Error::UnsupportedRing(a.base().to_string()));
        };
        let base = a.base();
        let l = base.flatten_len();
        let inv = a.inverse(u)?;
        let cols: Vec<Vec<u64>> = (0..a.flat_dim())
            .map(|g| {
                let (blk, c) = (g / l, g % l);
                let coeff = base.pow(&base.coordinate_generator(c), *p);
                let mut coeffs = vec![base.zero(); a.rank()];
                coeffs[blk] = coeff;
                let fx = a.from_ring_coords(&coeffs);
                a.mul(&a.mul(u, &fx), &inv).into_coords()
            })
            .collect();
        let m = IntMatrix::from_columns(a.flat_dim(), &cols);
        let label = format!("frob-conj[{}]({:?})", a.label(), u.coords());
        Self::verify(a.clone(), a, m, label)
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &AlgebraHom) -> Result<Self> {
        if *inner.target != *self.source {
            return Err(Error::ComposabilityMismatch);
        }
        let m = self.matrix.mul(&inner.matrix, self.target.moduli());
        let label = format!("({}) o ({})", self.label, inner.label);
        Self::verify(inner.source.clone(), self.target.clone(), m, label)
    }

    // ---- linear data ----------------------------------------------------

    pub fn kernel(&self) -> Subgroup {
        self.matrix
            .kernel(self.source.moduli(), self.target.moduli())
            .expect("hom matrix shape checked")
    }

    pub fn image(&self) -> Subgroup {
        self.matrix
            .image(self.source.moduli(), self.target.moduli())
            .expect("hom matrix shape checked")
    }

    pub fn is_bijective(&self) -> bool {
        self.matrix
            .is_bijective(self.source.moduli(), self.target.moduli())
            .unwrap_or(false)
    }

    /// `{r ∈ R : φ(r·1) = 0}`.
    pub fn contracted_ideal(&self) -> Result<RingIdeal> {
        let structural = self.matrix.mul(&self.source.structural_matrix(), self.target.moduli());
        let k = structural.kernel(self.source.base().moduli(), self.target.moduli())?;
        self.source.base().ideal_from_subgroup(&k)
    }

    /// Contracts the kernel to `I = {r : r·1 ∈ ker}` and checks `ker = IA`.
    pub fn kernel_ideal(&self) -> Result<(RingIdeal, CheckReport)> {
        if !self.is_verified() {
            return Err(Error::PreconditionUnmet(format!("{} is not a verified hom", self.label)));
        }
        let ideal = self.contracted_ideal()?;
        let ker = self.kernel();
        let ia = self.source.expand_ideal(&ideal)?;
        let report = CheckReport::pass("kernel_ideal", self.label.clone())
            .with_precondition("verified", true)
            .with_detail("ideal", serde_json::to_value(&ideal).unwrap());
        let report = if ker == ia {
            report
        } else {
            let extra = ker.generators().into_iter().find(|g| !ia.contains(g));
            report.fail_escalated(json!({"kernel_element_outside_ia": extra}))
        };
        Ok((ideal, report))
    }

    /// Whether `φ(r·1) = r·1` for every `r` (only meaningful for endomorphisms).
    pub fn is_base_identity(&self) -> bool {
        *self.source == *self.target
            && (0..self.source.base().flatten_len()).all(|l| {
                let s = self.source.scalar(&self.source.base().coordinate_generator(l));
                self.apply(&s) == s
            })
    }
}

fn ideal_label(ideal: &RingIdeal) -> String {
    match ideal {
        RingIdeal::Zmod { d } => format!("({d})"),
        other => serde_json::to_string(other).unwrap(),
    }
}
