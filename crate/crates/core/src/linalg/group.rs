//! Subgroups of finite abelian groups `⊕ Z/m_i`, held in canonical form.
//!
//! A group with coordinate moduli `m_i` is embedded into `(Z/N)^D` with
//! `N = lcm(m_i)` by sending coordinate `i` to multiples of `N/m_i`. Subgroups are
//! stored as the Howell form of their embedded generators, which makes equality of
//! subgroups structural equality. Submodules over any of the base rings are in
//! particular subgroups, so this one representation serves every ring kind.

use crate::arith::{lcm, GroupOrder};

use super::howell::{self, Howell};

/// Mixed-radix enumeration of `⊕ Z/m_i`, first coordinate fastest.
pub fn enumerate(moduli: &[u64]) -> impl Iterator<Item = Vec<u64>> + '_ {
    let mut cur: Option<Vec<u64>> = Some(vec![0; moduli.len()]);
    std::iter::from_fn(move || {
        let out = cur.clone()?;
        let mut next = out.clone();
        let mut i = 0;
        loop {
            if i == moduli.len() {
                cur = None;
                break;
            }
            next[i] += 1;
            if next[i] < moduli[i] {
                cur = Some(next);
                break;
            }
            next[i] = 0;
            i += 1;
        }
        Some(out)
    })
}

pub fn exponent(moduli: &[u64]) -> u64 {
    moduli.iter().fold(1, |a, &m| lcm(a, m))
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subgroup {
    moduli: Vec<u64>,
    exponent: u64,
    /// Howell rows of the embedded generators.
    rows: Vec<Vec<u64>>,
    pivots: Vec<usize>,
}

impl Subgroup {
    fn embed(moduli: &[u64], n: u64, v: &[u64]) -> Vec<u64> {
        v.iter()
            .zip(moduli)
            .map(|(&x, &m)| ((x % m) as u128 * (n / m) as u128 % n as u128) as u64)
            .collect()
    }

    fn unembed(&self, v: &[u64]) -> Vec<u64> {
        v.iter()
            .zip(&self.moduli)
            .map(|(&x, &m)| x / (self.exponent / m))
            .collect()
    }

    fn from_embedded(moduli: &[u64], rows: Vec<Vec<u64>>) -> Self {
        let n = exponent(moduli);
        let h = howell::howell(n, moduli.len(), rows, false);
        Self {
            moduli: moduli.to_vec(),
            exponent: n,
            rows: h.rows,
            pivots: h.pivots,
        }
    }

    fn as_howell(&self) -> Howell {
        Howell {
            rows: self.rows.clone(),
            pivots: self.pivots.clone(),
            transform: None,
        }
    }

    pub fn span<'a, I>(moduli: &[u64], gens: I) -> Self
    where
        I: IntoIterator<Item = &'a [u64]>,
    {
        let n = exponent(moduli);
        let rows = gens
            .into_iter()
            .map(|g| {
                assert_eq!(g.len(), moduli.len(), "generator length");
                Self::embed(moduli, n, g)
            })
            .collect();
        Self::from_embedded(moduli, rows)
    }

    pub fn zero(moduli: &[u64]) -> Self {
        Self::span(moduli, std::iter::empty())
    }

    pub fn whole(moduli: &[u64]) -> Self {
        let gens: Vec<Vec<u64>> = (0..moduli.len())
            .map(|i| {
                let mut e = vec![0; moduli.len()];
                e[i] = 1;
                e
            })
            .collect();
        Self::span(moduli, gens.iter().map(Vec::as_slice))
    }

    pub fn moduli(&self) -> &[u64] {
        &self.moduli
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    /// Canonical generators in ambient coordinates.
    pub fn generators(&self) -> Vec<Vec<u64>> {
        self.rows.iter().map(|r| self.unembed(r)).collect()
    }

    pub fn order(&self) -> GroupOrder {
        let mut o = GroupOrder::one();
        for (r, &c) in self.rows.iter().zip(&self.pivots) {
            o.times(self.exponent / r[c]);
        }
        o
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        let mut e = Self::embed(&self.moduli, self.exponent, v);
        howell::reduce(self.exponent, &self.as_howell(), &mut e, usize::MAX);
        e.iter().all(|&x| x == 0)
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.moduli == other.moduli && self.generators().iter().all(|g| other.contains(g))
    }

    pub fn sum(&self, other: &Subgroup) -> Subgroup {
        assert_eq!(self.moduli, other.moduli);
        let rows = self.rows.iter().chain(&other.rows).cloned().collect();
        Self::from_embedded(&self.moduli, rows)
    }

    /// Intersection by the Zassenhaus trick on `[[S, S], [T, 0]]`.
    pub fn intersect(&self, other: &Subgroup) -> Subgroup {
        assert_eq!(self.moduli, other.moduli);
        let d = self.moduli.len();
        let n = self.exponent;
        let mut rows = Vec::with_capacity(self.rows.len() + other.rows.len());
        for r in &self.rows {
            rows.push(r.iter().chain(r.iter()).copied().collect());
        }
        for r in &other.rows {
            rows.push(r.iter().copied().chain(std::iter::repeat(0).take(d)).collect());
        }
        let h = howell::howell(n, 2 * d, rows, false);
        let inter = h
            .rows
            .iter()
            .zip(&h.pivots)
            .filter(|(_, &c)| c >= d)
            .map(|(r, _)| r[d..].to_vec())
            .collect();
        Self::from_embedded(&self.moduli, inter)
    }

    /// Every element, for small subgroups only.
    pub fn elements(&self) -> Vec<Vec<u64>> {
        let n = self.exponent;
        let ranges: Vec<u64> = self
            .rows
            .iter()
            .zip(&self.pivots)
            .map(|(r, &c)| n / r[c])
            .collect();
        enumerate(&ranges)
            .map(|coeffs| {
                let mut v = vec![0u64; self.moduli.len()];
                for (row, &k) in self.rows.iter().zip(&coeffs) {
                    for (x, &y) in v.iter_mut().zip(row) {
                        *x = ((*x as u128 + k as u128 * y as u128) % n as u128) as u64;
                    }
                }
                self.unembed(&v)
            })
            .collect()
    }
}
