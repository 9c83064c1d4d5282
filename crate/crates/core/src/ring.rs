//! Finite commutative base rings: `Z/n`, `GF(p^k)` and finite products.
//!
//! Every ring is stored together with its flattened coordinate moduli. An element
//! is a vector of residues, one per coordinate, always kept canonical, so equality
//! of elements is plain vector equality. The additive group of a ring is thus
//! `⊕ Z/moduli[i]`, which is the view the linear algebra layer works with.
//!
//! Every prime ideal of a finite commutative ring is maximal, so the maximal ideals
//! listed here are the whole prime spectrum, and all these rings are Jacobson.

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::arith::{self, addmod, factorize, inv_mod, is_prime, mulmod, submod};
use crate::error::{Error, Result};
use crate::linalg::{group, IntMatrix, Subgroup};

/// Serialized form of a ring, e.g. `{"kind":"gf","p":2,"f":[1,1,1]}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum RingDescriptor {
    Zmod { n: u64 },
    Gf { p: u64, f: Vec<u64> },
    Product { factors: Vec<RingDescriptor> },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum RingKind {
    ZMod(u64),
    /// `F_p[t]/(f)`; `modulus` holds the monic `f`, coefficients low to high.
    GaloisField { p: u64, modulus: Vec<u64> },
    Product(Vec<FiniteCommRing>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RingDescriptor", into = "RingDescriptor")]
pub struct FiniteCommRing {
    kind: RingKind,
    moduli: Vec<u64>,
}

/// A ring element in flattened coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RingElem(Vec<u64>);

impl RingElem {
    pub fn coords(&self) -> &[u64] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<u64> {
        self.0
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum MaxIdeal {
    /// `(p)` in `Z/n` for a prime `p | n`.
    Zmod { p: u64 },
    /// The zero ideal of a field.
    Field,
    /// `m` in factor `index`, the full factor everywhere else.
    Factor { index: usize, inner: Box<MaxIdeal> },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum RingIdeal {
    /// `(d)` in `Z/n` with `d | n`; `d = n` is the zero ideal, `d = 1` the unit ideal.
    Zmod { d: u64 },
    Field { unit: bool },
    Product { factors: Vec<RingIdeal> },
}

impl TryFrom<RingDescriptor> for FiniteCommRing {
    type Error = Error;

    fn try_from(desc: RingDescriptor) -> Result<Self> {
        match desc {
            RingDescriptor::Zmod { n } => FiniteCommRing::zmod(n),
            RingDescriptor::Gf { p, f } => FiniteCommRing::galois_field(p, f),
            RingDescriptor::Product { factors } => FiniteCommRing::product(
                factors
                    .into_iter()
                    .map(FiniteCommRing::try_from)
                    .collect::<Result<Vec<_>>>()?,
            ),
        }
    }
}

impl From<FiniteCommRing> for RingDescriptor {
    fn from(r: FiniteCommRing) -> Self {
        r.descriptor()
    }
}

impl fmt::Display for FiniteCommRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            RingKind::ZMod(n) => write!(f, "Z/{n}"),
            RingKind::GaloisField { p, modulus } if modulus.len() == 2 => write!(f, "GF({p})"),
            RingKind::GaloisField { p, modulus } => {
                write!(f, "GF({p}^{}:{:?})", modulus.len() - 1, modulus)
            }
            RingKind::Product(factors) => {
                for (i, r) in factors.iter().enumerate() {
                    if i > 0 {
                        write!(f, "x")?;
                    }
                    write!(f, "{r}")?;
                }
                Ok(())
            }
        }
    }
}

// Polynomials over F_p, coefficients low to high.

fn poly_trim(mut a: Vec<u64>) -> Vec<u64> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

/// Remainder of `a` by the monic polynomial `m`.
fn poly_rem_monic(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let k = m.len() - 1;
    let mut r = a.to_vec();
    while r.len() > k {
        let lead = r.pop().unwrap();
        if lead != 0 {
            let shift = r.len() - k;
            for (i, &c) in m[..k].iter().enumerate() {
                r[shift + i] = submod(r[shift + i], mulmod(lead, c, p), p);
            }
        }
    }
    r
}

fn is_irreducible(f: &[u64], p: u64) -> bool {
    let k = f.len() - 1;
    if k == 1 {
        return true;
    }
    // Every reducible f of degree k has a monic factor of degree <= k/2.
    for deg in 1..=k / 2 {
        let count = p.pow(deg as u32);
        for idx in 0..count {
            let mut g = Vec::with_capacity(deg + 1);
            let mut v = idx;
            for _ in 0..deg {
                g.push(v % p);
                v /= p;
            }
            g.push(1);
            if poly_trim(poly_rem_monic(f, &g, p)).is_empty() {
                return false;
            }
        }
    }
    true
}

impl FiniteCommRing {
    pub fn zmod(n: u64) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidDescriptor(format!("Z/{n} needs n >= 2")));
        }
        if n >= 1 << 31 {
            return Err(Error::InvalidDescriptor(format!("modulus {n} too large")));
        }
        Ok(Self {
            kind: RingKind::ZMod(n),
            moduli: vec![n],
        })
    }

    /// `F_p[t]/(f)` for monic `f` (coefficients low to high); `f` must be irreducible.
    pub fn galois_field(p: u64, f: Vec<u64>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NonPrimeModulus(p));
        }
        if p >= 1 << 31 {
            return Err(Error::InvalidDescriptor(format!("prime {p} too large")));
        }
        if f.len() < 2 {
            return Err(Error::InvalidDescriptor("field polynomial needs degree >= 1".into()));
        }
        if f.last() != Some(&1) {
            return Err(Error::InvalidDescriptor("field polynomial must be monic".into()));
        }
        if f.iter().any(|&c| c >= p) {
            return Err(Error::InvalidDescriptor(format!(
                "coefficients of {f:?} must lie in [0, {p})"
            )));
        }
        if !is_irreducible(&f, p) {
            return Err(Error::ReduciblePolynomial(f, p));
        }
        let k = f.len() - 1;
        Ok(Self {
            kind: RingKind::GaloisField { p, modulus: f },
            moduli: vec![p; k],
        })
    }

    /// `GF(p^k)` with the smallest irreducible monic polynomial of degree `k`,
    /// ordering candidates by their coefficient string read as a base-`p` number.
    pub fn galois_field_default(p: u64, k: usize) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NonPrimeModulus(p));
        }
        if k == 0 {
            return Err(Error::InvalidDescriptor("degree must be >= 1".into()));
        }
        let count = p.pow(k as u32);
        for idx in 0..count {
            let mut f = Vec::with_capacity(k + 1);
            let mut v = idx;
            for _ in 0..k {
                f.push(v % p);
                v /= p;
            }
            f.push(1);
            if is_irreducible(&f, p) {
                return Self::galois_field(p, f);
            }
        }
        unreachable!("irreducible polynomials exist in every degree")
    }

    /// The prime field `F_p`, represented as `Z/p`.
    pub fn prime_field(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NonPrimeModulus(p));
        }
        Self::zmod(p)
    }

    pub fn product(factors: Vec<FiniteCommRing>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::EmptyProduct);
        }
        let moduli = factors.iter().flat_map(|r| r.moduli.iter().copied()).collect();
        Ok(Self {
            kind: RingKind::Product(factors),
            moduli,
        })
    }

    pub fn descriptor(&self) -> RingDescriptor {
        match &self.kind {
            RingKind::ZMod(n) => RingDescriptor::Zmod { n: *n },
            RingKind::GaloisField { p, modulus } => RingDescriptor::Gf {
                p: *p,
                f: modulus.clone(),
            },
            RingKind::Product(fs) => RingDescriptor::Product {
                factors: fs.iter().map(|r| r.descriptor()).collect(),
            },
        }
    }

    pub fn kind(&self) -> &RingKind {
        &self.kind
    }

    pub fn moduli(&self) -> &[u64] {
        &self.moduli
    }

    pub fn flatten_len(&self) -> usize {
        self.moduli.len()
    }

    /// Number of elements. Rings in this crate are desk sized.
    pub fn size(&self) -> u64 {
        self.moduli.iter().product()
    }

    pub fn characteristic(&self) -> u64 {
        self.moduli.iter().fold(1, |a, &m| arith::lcm(a, m))
    }

    pub fn is_field(&self) -> bool {
        match &self.kind {
            RingKind::ZMod(n) => is_prime(*n),
            RingKind::GaloisField { .. } => true,
            RingKind::Product(fs) => fs.len() == 1 && fs[0].is_field(),
        }
    }

    /// No nonzero nilpotents.
    pub fn is_reduced(&self) -> bool {
        match &self.kind {
            RingKind::ZMod(n) => arith::is_squarefree(*n),
            RingKind::GaloisField { .. } => true,
            RingKind::Product(fs) => fs.iter().all(|r| r.is_reduced()),
        }
    }

    fn factor_offsets(factors: &[FiniteCommRing]) -> Vec<usize> {
        let mut offs = Vec::with_capacity(factors.len() + 1);
        let mut acc = 0;
        offs.push(0);
        for r in factors {
            acc += r.flatten_len();
            offs.push(acc);
        }
        offs
    }

    // ---- elements -------------------------------------------------------

    /// Builds an element from arbitrary coordinates, reducing each one.
    pub fn elem(&self, coords: &[u64]) -> RingElem {
        assert_eq!(coords.len(), self.flatten_len(), "coordinate count for {self}");
        RingElem(
            coords
                .iter()
                .zip(&self.moduli)
                .map(|(&c, &m)| c % m)
                .collect(),
        )
    }

    pub fn zero(&self) -> RingElem {
        RingElem(vec![0; self.flatten_len()])
    }

    pub fn one(&self) -> RingElem {
        RingElem(self.one_coords())
    }

    fn one_coords(&self) -> Vec<u64> {
        match &self.kind {
            RingKind::ZMod(_) => vec![1],
            RingKind::GaloisField { modulus, .. } => {
                let mut v = vec![0; modulus.len() - 1];
                v[0] = 1;
                v
            }
            RingKind::Product(fs) => fs.iter().flat_map(|r| r.one_coords()).collect(),
        }
    }

    /// Image of the integer `k` under `Z -> R`.
    pub fn from_int(&self, k: i64) -> RingElem {
        let one = self.one();
        RingElem(
            one.0
                .iter()
                .zip(&self.moduli)
                .map(|(&c, &m)| arith::reduce_signed(c as i128 * k as i128, m))
                .collect(),
        )
    }

    /// The `l`-th additive coordinate generator.
    pub fn coordinate_generator(&self, l: usize) -> RingElem {
        let mut v = vec![0; self.flatten_len()];
        v[l] = 1;
        RingElem(v)
    }

    pub fn is_zero(&self, x: &RingElem) -> bool {
        x.0.iter().all(|&c| c == 0)
    }

    pub fn add(&self, x: &RingElem, y: &RingElem) -> RingElem {
        RingElem(
            x.0.iter()
                .zip(&y.0)
                .zip(&self.moduli)
                .map(|((&a, &b), &m)| addmod(a, b, m))
                .collect(),
        )
    }

    pub fn sub(&self, x: &RingElem, y: &RingElem) -> RingElem {
        RingElem(
            x.0.iter()
                .zip(&y.0)
                .zip(&self.moduli)
                .map(|((&a, &b), &m)| submod(a, b, m))
                .collect(),
        )
    }

    pub fn neg(&self, x: &RingElem) -> RingElem {
        RingElem(
            x.0.iter()
                .zip(&self.moduli)
                .map(|(&a, &m)| submod(0, a, m))
                .collect(),
        )
    }

    pub fn mul(&self, x: &RingElem, y: &RingElem) -> RingElem {
        let mut out = vec![0; self.flatten_len()];
        self.mul_into(&x.0, &y.0, &mut out);
        RingElem(out)
    }

    fn mul_into(&self, a: &[u64], b: &[u64], out: &mut [u64]) {
        match &self.kind {
            RingKind::ZMod(n) => out[0] = mulmod(a[0], b[0], *n),
            RingKind::GaloisField { p, modulus } => {
                let p = *p;
                let k = modulus.len() - 1;
                let mut prod = vec![0u64; 2 * k - 1];
                for (i, &ai) in a.iter().enumerate() {
                    if ai == 0 {
                        continue;
                    }
                    for (j, &bj) in b.iter().enumerate() {
                        prod[i + j] = addmod(prod[i + j], mulmod(ai, bj, p), p);
                    }
                }
                let r = poly_rem_monic(&prod, modulus, p);
                out.fill(0);
                out[..r.len()].copy_from_slice(&r);
            }
            RingKind::Product(fs) => {
                let offs = Self::factor_offsets(fs);
                for (i, r) in fs.iter().enumerate() {
                    let range = offs[i]..offs[i + 1];
                    r.mul_into(&a[range.clone()], &b[range.clone()], &mut out[range]);
                }
            }
        }
    }

    pub fn pow(&self, x: &RingElem, mut e: u64) -> RingElem {
        let mut acc = self.one();
        let mut base = x.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    pub fn is_unit(&self, x: &RingElem) -> bool {
        self.inv(x).is_ok()
    }

    pub fn inv(&self, x: &RingElem) -> Result<RingElem> {
        match &self.kind {
            RingKind::ZMod(n) => inv_mod(x.0[0], *n)
                .map(|v| RingElem(vec![v]))
                .ok_or(Error::NotAUnit),
            RingKind::GaloisField { p, modulus } => {
                if self.is_zero(x) {
                    return Err(Error::NotAUnit);
                }
                let q = p.pow((modulus.len() - 1) as u32);
                Ok(self.pow(x, q - 2))
            }
            RingKind::Product(fs) => {
                let offs = Self::factor_offsets(fs);
                let mut out = Vec::with_capacity(self.flatten_len());
                for (i, r) in fs.iter().enumerate() {
                    let part = RingElem(x.0[offs[i]..offs[i + 1]].to_vec());
                    out.extend(r.inv(&part)?.0);
                }
                Ok(RingElem(out))
            }
        }
    }

    /// All elements in mixed-radix order of the coordinates.
    pub fn elements(&self) -> impl Iterator<Item = RingElem> + '_ {
        group::enumerate(&self.moduli).map(RingElem)
    }

    pub fn random_elem<G: Rng + ?Sized>(&self, rng: &mut G) -> RingElem {
        RingElem(self.moduli.iter().map(|&m| rng.gen_range(0..m)).collect())
    }

    /// The additive matrix of `y -> x*y` on flattened coordinates.
    pub fn mul_matrix(&self, x: &RingElem) -> IntMatrix {
        let l = self.flatten_len();
        let mut m = IntMatrix::zeros(l, l);
        for j in 0..l {
            let col = self.mul(x, &self.coordinate_generator(j));
            for i in 0..l {
                m.set(i, j, col.0[i]);
            }
        }
        m
    }

    // ---- ideals ---------------------------------------------------------

    pub fn maximal_ideals(&self) -> Vec<MaxIdeal> {
        match &self.kind {
            RingKind::ZMod(n) => factorize(*n)
                .into_iter()
                .map(|(p, _)| MaxIdeal::Zmod { p })
                .collect(),
            RingKind::GaloisField { .. } => vec![MaxIdeal::Field],
            RingKind::Product(fs) => fs
                .iter()
                .enumerate()
                .flat_map(|(index, r)| {
                    r.maximal_ideals().into_iter().map(move |m| MaxIdeal::Factor {
                        index,
                        inner: Box::new(m),
                    })
                })
                .collect(),
        }
    }

    pub fn max_ideal_as_ideal(&self, m: &MaxIdeal) -> Result<RingIdeal> {
        match (&self.kind, m) {
            (RingKind::ZMod(n), MaxIdeal::Zmod { p }) if is_prime(*p) && n % p == 0 => {
                Ok(RingIdeal::Zmod { d: *p })
            }
            (RingKind::GaloisField { .. }, MaxIdeal::Field) => Ok(RingIdeal::Field { unit: false }),
            (RingKind::Product(fs), MaxIdeal::Factor { index, inner }) if *index < fs.len() => {
                let factors = fs
                    .iter()
                    .enumerate()
                    .map(|(i, r)| {
                        if i == *index {
                            r.max_ideal_as_ideal(inner)
                        } else {
                            Ok(r.unit_ideal())
                        }
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(RingIdeal::Product { factors })
            }
            _ => Err(Error::InvalidIdeal),
        }
    }

    /// `R/m` together with the verified projection `R -> R/m`.
    pub fn residue_field(&self, m: &MaxIdeal) -> Result<(FiniteCommRing, RingHom)> {
        let ideal = self.max_ideal_as_ideal(m)?;
        let (k, proj) = self.quotient(&ideal)?;
        debug_assert!(k.is_field());
        Ok((k, proj))
    }

    pub fn unit_ideal(&self) -> RingIdeal {
        match &self.kind {
            RingKind::ZMod(_) => RingIdeal::Zmod { d: 1 },
            RingKind::GaloisField { .. } => RingIdeal::Field { unit: true },
            RingKind::Product(fs) => RingIdeal::Product {
                factors: fs.iter().map(|r| r.unit_ideal()).collect(),
            },
        }
    }

    pub fn zero_ideal(&self) -> RingIdeal {
        match &self.kind {
            RingKind::ZMod(n) => RingIdeal::Zmod { d: *n },
            RingKind::GaloisField { .. } => RingIdeal::Field { unit: false },
            RingKind::Product(fs) => RingIdeal::Product {
                factors: fs.iter().map(|r| r.zero_ideal()).collect(),
            },
        }
    }

    /// The principal ideal `(d)` of `Z/n`, canonicalised to `gcd(d, n)`.
    pub fn zmod_ideal(&self, d: u64) -> Result<RingIdeal> {
        match self.kind {
            RingKind::ZMod(n) => Ok(RingIdeal::Zmod {
                d: arith::gcd(d % n, n),
            }),
            _ => Err(Error::UnsupportedRing(self.to_string())),
        }
    }

    pub fn validate_ideal(&self, ideal: &RingIdeal) -> Result<()> {
        match (&self.kind, ideal) {
            (RingKind::ZMod(n), RingIdeal::Zmod { d }) if *d >= 1 && n % d == 0 => Ok(()),
            (RingKind::GaloisField { .. }, RingIdeal::Field { .. }) => Ok(()),
            (RingKind::Product(fs), RingIdeal::Product { factors }) if fs.len() == factors.len() => {
                fs.iter().zip(factors).try_for_each(|(r, i)| r.validate_ideal(i))
            }
            _ => Err(Error::InvalidDescriptor(format!(
                "{ideal:?} is not an ideal descriptor of {self}"
            ))),
        }
    }

    pub fn is_unit_ideal(&self, ideal: &RingIdeal) -> bool {
        *ideal == self.unit_ideal()
    }

    /// Additive generators of the ideal, as ring elements.
    pub fn ideal_generators(&self, ideal: &RingIdeal) -> Vec<RingElem> {
        match (&self.kind, ideal) {
            (RingKind::ZMod(n), RingIdeal::Zmod { d }) => {
                if d % n == 0 {
                    vec![]
                } else {
                    vec![RingElem(vec![*d])]
                }
            }
            (RingKind::GaloisField { .. }, RingIdeal::Field { unit }) => {
                if *unit {
                    (0..self.flatten_len()).map(|l| self.coordinate_generator(l)).collect()
                } else {
                    vec![]
                }
            }
            (RingKind::Product(fs), RingIdeal::Product { factors }) => {
                let offs = Self::factor_offsets(fs);
                let mut out = Vec::new();
                for (i, (r, id)) in fs.iter().zip(factors).enumerate() {
                    for g in r.ideal_generators(id) {
                        let mut v = vec![0; self.flatten_len()];
                        v[offs[i]..offs[i + 1]].copy_from_slice(&g.0);
                        out.push(RingElem(v));
                    }
                }
                out
            }
            _ => panic!("ideal descriptor does not match ring {self}"),
        }
    }

    /// The ideal as an additive subgroup of the ring.
    pub fn ideal_subgroup(&self, ideal: &RingIdeal) -> Subgroup {
        let gens = self.ideal_generators(ideal);
        Subgroup::span(&self.moduli, gens.iter().map(|g| g.coords()))
    }

    pub fn ideal_contains(&self, ideal: &RingIdeal, x: &RingElem) -> bool {
        self.ideal_subgroup(ideal).contains(x.coords())
    }

    pub fn ideal_intersection(&self, a: &RingIdeal, b: &RingIdeal) -> RingIdeal {
        match (&self.kind, a, b) {
            (RingKind::ZMod(_), RingIdeal::Zmod { d: x }, RingIdeal::Zmod { d: y }) => {
                RingIdeal::Zmod { d: arith::lcm(*x, *y) }
            }
            (RingKind::GaloisField { .. }, RingIdeal::Field { unit: x }, RingIdeal::Field { unit: y }) => {
                RingIdeal::Field { unit: *x && *y }
            }
            (
                RingKind::Product(fs),
                RingIdeal::Product { factors: xs },
                RingIdeal::Product { factors: ys },
            ) => RingIdeal::Product {
                factors: fs
                    .iter()
                    .zip(xs.iter().zip(ys))
                    .map(|(r, (x, y))| r.ideal_intersection(x, y))
                    .collect(),
            },
            _ => panic!("ideal descriptors do not match ring {self}"),
        }
    }

    /// Recovers the ideal whose additive group is `sub`. The caller guarantees
    /// `sub` is an ideal; the result is checked against it.
    pub fn ideal_from_subgroup(&self, sub: &Subgroup) -> Result<RingIdeal> {
        let gens = sub.generators();
        let ideal = self.ideal_from_generators(&gens);
        if self.ideal_subgroup(&ideal) != *sub {
            return Err(Error::VerificationFailed(format!(
                "subgroup of {self} is not the ideal {ideal:?}"
            )));
        }
        Ok(ideal)
    }

    fn ideal_from_generators(&self, gens: &[Vec<u64>]) -> RingIdeal {
        match &self.kind {
            RingKind::ZMod(n) => RingIdeal::Zmod {
                d: gens.iter().fold(*n, |acc, g| arith::gcd(acc, g[0])),
            },
            RingKind::GaloisField { .. } => RingIdeal::Field {
                unit: gens.iter().any(|g| g.iter().any(|&c| c != 0)),
            },
            RingKind::Product(fs) => {
                let offs = Self::factor_offsets(fs);
                RingIdeal::Product {
                    factors: fs
                        .iter()
                        .enumerate()
                        .map(|(i, r)| {
                            let part: Vec<Vec<u64>> =
                                gens.iter().map(|g| g[offs[i]..offs[i + 1]].to_vec()).collect();
                            r.ideal_from_generators(&part)
                        })
                        .collect(),
                }
            }
        }
    }

    /// `R/I` with the verified projection. The zero ring is rejected.
    pub fn quotient(&self, ideal: &RingIdeal) -> Result<(FiniteCommRing, RingHom)> {
        self.validate_ideal(ideal)?;
        let (q, matrix) = self.quotient_parts(ideal)?;
        let hom = RingHom::new(self.clone(), q.clone(), matrix)?;
        Ok((q, hom))
    }

    fn quotient_parts(&self, ideal: &RingIdeal) -> Result<(FiniteCommRing, IntMatrix)> {
        match (&self.kind, ideal) {
            (RingKind::ZMod(n), RingIdeal::Zmod { d }) => {
                if *d == 1 {
                    return Err(Error::ZeroRing);
                }
                let q = if d == n { self.clone() } else { Self::zmod(*d)? };
                Ok((q, IntMatrix::identity(1)))
            }
            (RingKind::GaloisField { .. }, RingIdeal::Field { unit }) => {
                if *unit {
                    return Err(Error::ZeroRing);
                }
                Ok((self.clone(), IntMatrix::identity(self.flatten_len())))
            }
            (RingKind::Product(fs), RingIdeal::Product { factors }) => {
                let offs = Self::factor_offsets(fs);
                let mut kept = Vec::new();
                for (i, (r, id)) in fs.iter().zip(factors).enumerate() {
                    match r.quotient_parts(id) {
                        Ok((q, m)) => kept.push((i, q, m)),
                        Err(Error::ZeroRing) => {}
                        Err(e) => return Err(e),
                    }
                }
                if kept.is_empty() {
                    return Err(Error::ZeroRing);
                }
                let rows: usize = kept.iter().map(|(_, q, _)| q.flatten_len()).sum();
                let mut matrix = IntMatrix::zeros(rows, self.flatten_len());
                let mut row = 0;
                for (i, q, m) in &kept {
                    for a in 0..m.rows() {
                        for b in 0..m.cols() {
                            matrix.set(row + a, offs[*i] + b, m.get(a, b));
                        }
                    }
                    row += q.flatten_len();
                }
                let q = if kept.len() == 1 {
                    kept.pop().unwrap().1
                } else {
                    Self::product(kept.into_iter().map(|(_, q, _)| q).collect())?
                };
                Ok((q, matrix))
            }
            _ => Err(Error::InvalidDescriptor("ideal does not match ring".into())),
        }
    }

    /// Splits `Z/n` into its prime-power factors.
    pub fn crt_decompose(&self) -> Result<CrtSplit> {
        let RingKind::ZMod(n) = self.kind else {
            return Err(Error::UnsupportedRing(self.to_string()));
        };
        let parts: Vec<u64> = factorize(n).iter().map(|&(p, e)| p.pow(e)).collect();
        let product = Self::product(
            parts
                .iter()
                .map(|&q| Self::zmod(q))
                .collect::<Result<Vec<_>>>()?,
        )?;
        let s = parts.len();
        let mut fwd = IntMatrix::zeros(s, 1);
        let mut back = IntMatrix::zeros(1, s);
        for (i, &q) in parts.iter().enumerate() {
            fwd.set(i, 0, 1);
            // Idempotent: 1 mod q, 0 mod n/q.
            let rest = n / q;
            let e = mulmod(rest, inv_mod(rest % q, q).unwrap_or(0), n);
            back.set(0, i, e);
        }
        let forward = RingHom::new(self.clone(), product.clone(), fwd)?;
        let backward = RingHom::new(product.clone(), self.clone(), back)?;
        Ok(CrtSplit {
            product,
            forward,
            backward,
        })
    }
}

/// `Z/n ≅ Π Z/p^e` with both directions.
#[derive(Clone, Debug)]
pub struct CrtSplit {
    pub product: FiniteCommRing,
    pub forward: RingHom,
    pub backward: RingHom,
}

/// A verified unital ring homomorphism between finite commutative rings, stored
/// as its additive matrix on flattened coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingHom {
    source: FiniteCommRing,
    target: FiniteCommRing,
    matrix: IntMatrix,
}

impl RingHom {
    pub fn new(source: FiniteCommRing, target: FiniteCommRing, matrix: IntMatrix) -> Result<Self> {
        if matrix.rows() != target.flatten_len() || matrix.cols() != source.flatten_len() {
            return Err(Error::InvalidBaseHom(format!(
                "matrix is {}x{}, expected {}x{}",
                matrix.rows(),
                matrix.cols(),
                target.flatten_len(),
                source.flatten_len()
            )));
        }
        matrix
            .check_well_defined(source.moduli(), target.moduli())
            .map_err(|e| Error::InvalidBaseHom(e.to_string()))?;
        let hom = Self {
            source,
            target,
            matrix,
        };
        if hom.apply(&hom.source.one()) != hom.target.one() {
            return Err(Error::InvalidBaseHom("unit not preserved".into()));
        }
        let l = hom.source.flatten_len();
        for a in 0..l {
            for b in 0..l {
                let ga = hom.source.coordinate_generator(a);
                let gb = hom.source.coordinate_generator(b);
                let lhs = hom.apply(&hom.source.mul(&ga, &gb));
                let rhs = hom.target.mul(&hom.apply(&ga), &hom.apply(&gb));
                if lhs != rhs {
                    return Err(Error::InvalidBaseHom(format!(
                        "not multiplicative on generators {a}, {b}"
                    )));
                }
            }
        }
        Ok(hom)
    }

    pub fn identity(ring: &FiniteCommRing) -> Self {
        Self {
            source: ring.clone(),
            target: ring.clone(),
            matrix: IntMatrix::identity(ring.flatten_len()),
        }
    }

    pub fn source(&self) -> &FiniteCommRing {
        &self.source
    }

    pub fn target(&self) -> &FiniteCommRing {
        &self.target
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn apply(&self, x: &RingElem) -> RingElem {
        RingElem(self.matrix.apply(x.coords(), self.target.moduli()))
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &RingHom) -> Result<RingHom> {
        if inner.target != self.source {
            return Err(Error::ComposabilityMismatch);
        }
        let m = self.matrix.mul(&inner.matrix, self.target.moduli());
        RingHom::new(inner.source.clone(), self.target.clone(), m)
    }

    /// The kernel as an ideal of the source.
    pub fn kernel(&self) -> Result<RingIdeal> {
        let k = self.matrix.kernel(self.source.moduli(), self.target.moduli())?;
        self.source.ideal_from_subgroup(&k)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf4() -> FiniteCommRing {
        FiniteCommRing::galois_field(2, vec![1, 1, 1]).unwrap()
    }

    #[test]
    fn make_ring_examples() {
        let z12 = FiniteCommRing::zmod(12).unwrap();
        assert_eq!(z12.moduli(), &[12]);
        assert_eq!(gf4().size(), 4);
        assert!(matches!(
            FiniteCommRing::galois_field(2, vec![1, 0, 1]),
            Err(Error::ReduciblePolynomial(..))
        ));
        assert_eq!(
            FiniteCommRing::galois_field(4, vec![1, 1]),
            Err(Error::NonPrimeModulus(4))
        );
        assert_eq!(FiniteCommRing::product(vec![]), Err(Error::EmptyProduct));
        assert!(FiniteCommRing::zmod(1).is_err());
    }

    #[test]
    fn default_field_polynomial() {
        let f = FiniteCommRing::galois_field_default(2, 2).unwrap();
        assert_eq!(f, gf4());
        let f8 = FiniteCommRing::galois_field_default(2, 3).unwrap();
        assert_eq!(f8.descriptor(), RingDescriptor::Gf { p: 2, f: vec![1, 1, 0, 1] });
    }

    #[test]
    fn arithmetic_examples() {
        let z12 = FiniteCommRing::zmod(12).unwrap();
        assert_eq!(z12.inv(&z12.elem(&[5])).unwrap(), z12.elem(&[5]));
        assert_eq!(z12.inv(&z12.elem(&[2])), Err(Error::NotAUnit));
        let f = gf4();
        let t = f.elem(&[0, 1]);
        assert_eq!(f.mul(&t, &t), f.elem(&[1, 1]));
        for x in f.elements().filter(|x| !f.is_zero(x)) {
            assert_eq!(f.mul(&x, &f.inv(&x).unwrap()), f.one());
        }
    }

    #[test]
    fn maximal_ideal_examples() {
        let z12 = FiniteCommRing::zmod(12).unwrap();
        assert_eq!(
            z12.maximal_ideals(),
            vec![MaxIdeal::Zmod { p: 2 }, MaxIdeal::Zmod { p: 3 }]
        );
        let f3 = FiniteCommRing::galois_field(3, vec![0, 1]).unwrap();
        assert_eq!(f3.maximal_ideals(), vec![MaxIdeal::Field]);
        let prod = FiniteCommRing::product(vec![
            FiniteCommRing::zmod(4).unwrap(),
            FiniteCommRing::zmod(3).unwrap(),
        ])
        .unwrap();
        assert_eq!(
            prod.maximal_ideals(),
            vec![
                MaxIdeal::Factor { index: 0, inner: Box::new(MaxIdeal::Zmod { p: 2 }) },
                MaxIdeal::Factor { index: 1, inner: Box::new(MaxIdeal::Zmod { p: 3 }) },
            ]
        );
    }

    #[test]
    fn residue_field_examples() {
        let z12 = FiniteCommRing::zmod(12).unwrap();
        let (k, pi) = z12.residue_field(&MaxIdeal::Zmod { p: 2 }).unwrap();
        assert_eq!(k, FiniteCommRing::zmod(2).unwrap());
        assert_eq!(pi.apply(&z12.elem(&[7])), k.elem(&[1]));
        let z9 = FiniteCommRing::zmod(9).unwrap();
        let (k3, _) = z9.residue_field(&MaxIdeal::Zmod { p: 3 }).unwrap();
        assert!(k3.is_field());
        let (k4, id) = gf4().residue_field(&MaxIdeal::Field).unwrap();
        assert_eq!(k4, gf4());
        assert_eq!(id, RingHom::identity(&gf4()));
        assert_eq!(z12.residue_field(&MaxIdeal::Zmod { p: 5 }).unwrap_err(), Error::InvalidIdeal);
        assert_eq!(z12.residue_field(&MaxIdeal::Field).unwrap_err(), Error::InvalidIdeal);
    }

    #[test]
    fn residue_kernel_is_max_ideal() {
        let prod = FiniteCommRing::product(vec![
            FiniteCommRing::zmod(4).unwrap(),
            gf4(),
            FiniteCommRing::zmod(9).unwrap(),
        ])
        .unwrap();
        for m in prod.maximal_ideals() {
            let (k, pi) = prod.residue_field(&m).unwrap();
            assert!(k.is_field());
            assert_eq!(pi.kernel().unwrap(), prod.max_ideal_as_ideal(&m).unwrap());
            let image: std::collections::HashSet<_> = prod.elements().map(|x| pi.apply(&x)).collect();
            assert_eq!(image.len() as u64, k.size());
        }
    }

    #[test]
    fn reducedness() {
        let r = |n| FiniteCommRing::zmod(n).unwrap();
        assert!(r(6).is_reduced());
        assert!(!r(12).is_reduced());
        let p = FiniteCommRing::product(vec![r(4), r(3)]).unwrap();
        assert!(!p.is_reduced());
    }

    #[test]
    fn crt_examples() {
        let z12 = FiniteCommRing::zmod(12).unwrap();
        let split = z12.crt_decompose().unwrap();
        assert_eq!(split.product.to_string(), "Z/4xZ/3");
        assert_eq!(split.forward.apply(&z12.elem(&[7])).coords(), &[3, 1]);
        let z8 = FiniteCommRing::zmod(8).unwrap();
        assert_eq!(z8.crt_decompose().unwrap().product.moduli(), &[8]);
        assert!(gf4().crt_decompose().is_err());
    }

    #[test]
    fn quotient_by_unit_ideal_is_rejected() {
        let z12 = FiniteCommRing::zmod(12).unwrap();
        assert_eq!(z12.quotient(&RingIdeal::Zmod { d: 1 }).unwrap_err(), Error::ZeroRing);
        let (q, _) = z12.quotient(&RingIdeal::Zmod { d: 12 }).unwrap();
        assert_eq!(q, z12);
        let (q4, _) = z12.quotient(&RingIdeal::Zmod { d: 4 }).unwrap();
        assert_eq!(q4.moduli(), &[4]);
    }

    #[test]
    fn descriptor_round_trip_is_bit_exact() {
        for text in [
            r#"{"kind":"zmod","n":12}"#,
            r#"{"kind":"gf","p":2,"f":[1,1,1]}"#,
            r#"{"kind":"product","factors":[{"kind":"zmod","n":4},{"kind":"gf","p":3,"f":[1,0,1]}]}"#,
        ] {
            let r: FiniteCommRing = serde_json::from_str(text).unwrap();
            assert_eq!(serde_json::to_string(&r).unwrap(), text);
        }
        assert!(serde_json::from_str::<FiniteCommRing>(r#"{"kind":"gf","p":2,"f":[1,0,1]}"#).is_err());
    }
}
