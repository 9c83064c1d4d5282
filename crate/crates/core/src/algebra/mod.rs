//! Finite free algebras over the base rings, given by structure constants.
//!
//! An algebra of rank `d` over `R` has basis `e_0..e_{d-1}` and products
//! `e_i e_j = Σ_k c[i][j][k] e_k`. Elements are stored in flattened coordinates:
//! block `i` holds the `R`-coefficient of `e_i` in `R`'s own coordinates, so the
//! underlying additive group is `R^d` viewed as `⊕ Z/m`. The product of two
//! flattened generators is precomputed once and multiplication is the
//! `Z`-bilinear extension of that table.
//!
//! Being free of rank `d`, every algebra here is a faithful `R`-module.

mod families;
mod spec;
mod structure;
mod weyl;

use std::fmt;
use std::hash::{Hash, Hasher};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::arith::{addmod, submod, GroupOrder};
use crate::error::{Error, Result};
use crate::linalg::{group, IntMatrix, Subgroup};
use crate::ring::{FiniteCommRing, RingElem};

pub use spec::AlgebraSpec;
pub use structure::Nilpotency;
pub use weyl::weyl_normal_form_oracle;

/// What a constructor knows about the algebra it built.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AlgebraShape {
    Matrix { n: usize },
    Weyl { p: u64, a: u64, b: u64 },
    Other,
}

#[derive(Clone, Debug)]
pub struct Algebra {
    base: FiniteCommRing,
    rank: usize,
    /// `table[i*d + j]` is `e_i e_j` in flattened coordinates.
    table: Vec<Vec<u64>>,
    unit: Vec<u64>,
    label: String,
    shape: AlgebraShape,
    moduli: Vec<u64>,
    /// `gen_products[a*D + b]`: sparse flattened product of generators `ε_a ε_b`.
    gen_products: Vec<Vec<(usize, u64)>>,
}

impl PartialEq for Algebra {
    fn eq(&self, other: &Self) -> bool {
        self.base == other.base
            && self.rank == other.rank
            && self.unit == other.unit
            && self.table == other.table
    }
}

impl Eq for Algebra {}

impl Hash for Algebra {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.base.hash(state);
        self.rank.hash(state);
        self.unit.hash(state);
        self.table.hash(state);
    }
}

impl fmt::Display for Algebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label)
    }
}

/// An algebra element in flattened coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct AlgElem(Vec<u64>);

impl AlgElem {
    pub fn coords(&self) -> &[u64] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<u64> {
        self.0
    }
}

impl Algebra {
    /// Validates and builds an algebra. `table[i*d + j]` and `unit` are flattened
    /// vectors of length `d * flatten_len(base)`. Associativity on basis triples and
    /// two-sided unitality are checked here.
    pub fn from_structure_constants(
        base: FiniteCommRing,
        rank: usize,
        table: Vec<Vec<u64>>,
        unit: Vec<u64>,
        label: impl Into<String>,
    ) -> Result<Self> {
        let a = Self::new_unchecked(base, rank, table, unit, label.into(), AlgebraShape::Other)?;
        a.check_axioms()?;
        Ok(a)
    }

    pub(crate) fn new_unchecked(
        base: FiniteCommRing,
        rank: usize,
        table: Vec<Vec<u64>>,
        unit: Vec<u64>,
        label: String,
        shape: AlgebraShape,
    ) -> Result<Self> {
        if rank == 0 {
            return Err(Error::InvalidAlgebra("rank must be at least 1".into()));
        }
        let l = base.flatten_len();
        let dim = rank * l;
        if table.len() != rank * rank || table.iter().any(|v| v.len() != dim) || unit.len() != dim {
            return Err(Error::InvalidAlgebra(format!(
                "structure constants must be {rank}x{rank} vectors of length {dim}"
            )));
        }
        let moduli: Vec<u64> = base.moduli().repeat(rank);
        let reduce = |v: Vec<u64>| -> Vec<u64> { v.iter().zip(&moduli).map(|(&x, &m)| x % m).collect() };
        let table: Vec<Vec<u64>> = table.into_iter().map(reduce).collect();
        let unit = reduce(unit);

        let mut gen_products = vec![Vec::new(); dim * dim];
        for i in 0..rank {
            for j in 0..rank {
                let c = &table[i * rank + j];
                for la in 0..l {
                    for lb in 0..l {
                        let s = base.mul(&base.coordinate_generator(la), &base.coordinate_generator(lb));
                        let prod = scale_flat(&base, &s, c);
                        let entry: Vec<(usize, u64)> = prod
                            .into_iter()
                            .enumerate()
                            .filter(|(_, x)| *x != 0)
                            .collect();
                        gen_products[(i * l + la) * dim + (j * l + lb)] = entry;
                    }
                }
            }
        }
        Ok(Self {
            base,
            rank,
            table,
            unit,
            label,
            shape,
            moduli,
            gen_products,
        })
    }

    pub(crate) fn check_axioms(&self) -> Result<()> {
        let one = self.one();
        for i in 0..self.rank {
            let e = self.basis(i);
            if self.mul(&one, &e) != e || self.mul(&e, &one) != e {
                return Err(Error::InvalidAlgebra(format!("unit fails on basis element {i}")));
            }
        }
        for i in 0..self.rank {
            let ei = self.basis(i);
            for j in 0..self.rank {
                let eij = self.mul(&ei, &self.basis(j));
                for k in 0..self.rank {
                    let ek = self.basis(k);
                    let left = self.mul(&eij, &ek);
                    let right = self.mul(&ei, &self.mul(&self.basis(j), &ek));
                    if left != right {
                        return Err(Error::InvalidAlgebra(format!(
                            "not associative on basis triple ({i}, {j}, {k})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn base(&self) -> &FiniteCommRing {
        &self.base
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn shape(&self) -> &AlgebraShape {
        &self.shape
    }

    pub fn set_label(&mut self, label: impl Into<String>) {
        self.label = label.into();
    }

    /// Flattened coordinate moduli of the underlying additive group.
    pub fn moduli(&self) -> &[u64] {
        &self.moduli
    }

    /// Number of flattened coordinates, `rank * flatten_len(base)`.
    pub fn flat_dim(&self) -> usize {
        self.moduli.len()
    }

    /// `table[i*d + j]` is `e_i e_j` in flattened coordinates.
    pub fn structure_constants(&self) -> &[Vec<u64>] {
        &self.table
    }

    pub fn unit_coords(&self) -> &[u64] {
        &self.unit
    }

    pub fn order(&self) -> GroupOrder {
        GroupOrder::of_moduli(&self.moduli)
    }

    /// Number of elements, if it fits in a `u128`.
    pub fn size(&self) -> Option<u128> {
        self.order().to_u128()
    }

    pub fn is_commutative(&self) -> bool {
        (0..self.rank).all(|i| (0..self.rank).all(|j| self.table[i * self.rank + j] == self.table[j * self.rank + i]))
    }

    // ---- elements -------------------------------------------------------

    pub fn elem(&self, coords: &[u64]) -> AlgElem {
        assert_eq!(coords.len(), self.flat_dim(), "coordinate count for {}", self.label);
        AlgElem(coords.iter().zip(&self.moduli).map(|(&x, &m)| x % m).collect())
    }

    pub fn zero(&self) -> AlgElem {
        AlgElem(vec![0; self.flat_dim()])
    }

    pub fn one(&self) -> AlgElem {
        AlgElem(self.unit.clone())
    }

    /// The `R`-basis element `e_i`.
    pub fn basis(&self, i: usize) -> AlgElem {
        let l = self.base.flatten_len();
        let mut v = vec![0; self.flat_dim()];
        v[i * l..(i + 1) * l].copy_from_slice(self.base.one().coords());
        AlgElem(v)
    }

    /// The flattened additive generator `ε_a`.
    pub fn generator(&self, a: usize) -> AlgElem {
        let mut v = vec![0; self.flat_dim()];
        v[a] = 1;
        AlgElem(v)
    }

    pub fn from_ring_coords(&self, coeffs: &[RingElem]) -> AlgElem {
        assert_eq!(coeffs.len(), self.rank);
        AlgElem(coeffs.iter().flat_map(|c| c.coords().iter().copied()).collect())
    }

    pub fn ring_coords(&self, x: &AlgElem) -> Vec<RingElem> {
        x.0.chunks(self.base.flatten_len())
            .map(|c| self.base.elem(c))
            .collect()
    }

    pub fn is_zero(&self, x: &AlgElem) -> bool {
        x.0.iter().all(|&c| c == 0)
    }

    pub fn add(&self, x: &AlgElem, y: &AlgElem) -> AlgElem {
        AlgElem(
            x.0.iter()
                .zip(&y.0)
                .zip(&self.moduli)
                .map(|((&a, &b), &m)| addmod(a, b, m))
                .collect(),
        )
    }

    pub fn sub(&self, x: &AlgElem, y: &AlgElem) -> AlgElem {
        AlgElem(
            x.0.iter()
                .zip(&y.0)
                .zip(&self.moduli)
                .map(|((&a, &b), &m)| submod(a, b, m))
                .collect(),
        )
    }

    pub fn neg(&self, x: &AlgElem) -> AlgElem {
        AlgElem(x.0.iter().zip(&self.moduli).map(|(&a, &m)| submod(0, a, m)).collect())
    }

    /// `k · x` for an integer `k`.
    pub fn int_mul(&self, k: i64, x: &AlgElem) -> AlgElem {
        AlgElem(
            x.0.iter()
                .zip(&self.moduli)
                .map(|(&a, &m)| crate::arith::reduce_signed(a as i128 * k as i128, m))
                .collect(),
        )
    }

    pub fn mul(&self, x: &AlgElem, y: &AlgElem) -> AlgElem {
        let dim = self.flat_dim();
        let mut acc = vec![0u64; dim];
        for (a, &xa) in x.0.iter().enumerate() {
            if xa == 0 {
                continue;
            }
            let row = &self.gen_products[a * dim..(a + 1) * dim];
            for (b, &yb) in y.0.iter().enumerate() {
                if yb == 0 {
                    continue;
                }
                let coef = xa * yb;
                for &(c, t) in &row[b] {
                    let m = self.moduli[c];
                    acc[c] = (acc[c] + (coef % m) * t) % m;
                }
            }
        }
        AlgElem(acc)
    }

    pub fn commutator(&self, x: &AlgElem, y: &AlgElem) -> AlgElem {
        self.sub(&self.mul(x, y), &self.mul(y, x))
    }

    pub fn pow(&self, x: &AlgElem, e: u32) -> AlgElem {
        let mut acc = self.one();
        for _ in 0..e {
            acc = self.mul(&acc, x);
        }
        acc
    }

    /// `r · x` for `r ∈ R`, acting coefficientwise.
    pub fn scalar_mul(&self, r: &RingElem, x: &AlgElem) -> AlgElem {
        let l = self.base.flatten_len();
        let mut out = Vec::with_capacity(self.flat_dim());
        for block in x.0.chunks(l) {
            out.extend(self.base.mul(r, &self.base.elem(block)).into_coords());
        }
        AlgElem(out)
    }

    /// The structural map `r ↦ r·1`.
    pub fn scalar(&self, r: &RingElem) -> AlgElem {
        self.scalar_mul(r, &self.one())
    }

    /// Additive matrix of `R -> A, r ↦ r·1`.
    pub fn structural_matrix(&self) -> IntMatrix {
        let cols: Vec<Vec<u64>> = (0..self.base.flatten_len())
            .map(|l| self.scalar(&self.base.coordinate_generator(l)).into_coords())
            .collect();
        IntMatrix::from_columns(self.flat_dim(), &cols)
    }

    /// Additive matrix of left multiplication by `u`.
    pub fn left_mul_matrix(&self, u: &AlgElem) -> IntMatrix {
        let cols: Vec<Vec<u64>> = (0..self.flat_dim())
            .map(|a| self.mul(u, &self.generator(a)).into_coords())
            .collect();
        IntMatrix::from_columns(self.flat_dim(), &cols)
    }

    /// Two-sided inverse, when it exists.
    pub fn inverse(&self, u: &AlgElem) -> Result<AlgElem> {
        let lm = self.left_mul_matrix(u);
        if !lm.is_bijective(&self.moduli, &self.moduli)? {
            return Err(Error::NotInvertible);
        }
        let (v, _) = lm
            .solve(&self.moduli, &self.moduli, self.unit_coords())
            .map_err(|_| Error::NotInvertible)?;
        let v = AlgElem(v);
        if self.mul(&v, u) != self.one() {
            return Err(Error::NotInvertible);
        }
        Ok(v)
    }

    /// All elements. Only for small algebras.
    pub fn elements(&self) -> impl Iterator<Item = AlgElem> + '_ {
        group::enumerate(&self.moduli).map(AlgElem)
    }

    pub fn random_elem<G: Rng + ?Sized>(&self, rng: &mut G) -> AlgElem {
        AlgElem(self.moduli.iter().map(|&m| rng.gen_range(0..m)).collect())
    }

    // ---- submodules -----------------------------------------------------

    /// Additive span of the given elements.
    pub fn span<'a, I: IntoIterator<Item = &'a AlgElem>>(&self, elems: I) -> Subgroup {
        Subgroup::span(&self.moduli, elems.into_iter().map(|e| e.coords()))
    }

    /// `R`-span of the given elements.
    pub fn module_span<'a, I: IntoIterator<Item = &'a AlgElem>>(&self, elems: I) -> Subgroup {
        let l = self.base.flatten_len();
        let gens: Vec<AlgElem> = elems
            .into_iter()
            .flat_map(|e| {
                (0..l).map(move |g| self.scalar_mul(&self.base.coordinate_generator(g), e))
            })
            .collect();
        self.span(gens.iter())
    }

    /// `R·1`.
    pub fn scalar_span(&self) -> Subgroup {
        self.module_span([&self.one()])
    }

    pub fn whole(&self) -> Subgroup {
        Subgroup::whole(&self.moduli)
    }

    pub fn to_elems(&self, s: &Subgroup) -> Vec<AlgElem> {
        s.generators().into_iter().map(AlgElem).collect()
    }
}

/// `s · v` for a flattened vector `v` over `R^d`.
fn scale_flat(base: &FiniteCommRing, s: &RingElem, v: &[u64]) -> Vec<u64> {
    let l = base.flatten_len();
    v.chunks(l)
        .flat_map(|block| base.mul(s, &base.elem(block)).into_coords())
        .collect()
}
