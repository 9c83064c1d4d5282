//! The reduced Weyl algebra `W(p, a, b) = F_p<x, y>/(yx - xy - 1, x^p - a, y^p - b)`.
//!
//! Basis `x^i y^j` (`0 <= i, j < p`) sits at index `i + j*p`. Structure constants
//! come from rewriting words with `yx -> xy + 1` until they are normally
//! ordered, then folding exponents with `x^p -> a`, `y^p -> b`.

use std::collections::{BTreeMap, HashMap};

use crate::arith::{addmod, is_prime, mulmod, powmod};
use crate::error::{Error, Result};
use crate::ring::FiniteCommRing;

use super::{Algebra, AlgebraShape};

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
enum Letter {
    X,
    Y,
}

/// Normal form of `y^j x^k` as `{(x-exponent, y-exponent): coefficient}`.
fn normal_order(j: usize, k: usize, p: u64) -> BTreeMap<(usize, usize), u64> {
    let mut word = vec![Letter::Y; j];
    word.extend(std::iter::repeat(Letter::X).take(k));
    let mut out = BTreeMap::new();
    let mut stack = vec![(word, 1u64)];
    while let Some((w, c)) = stack.pop() {
        match w.windows(2).position(|s| s == [Letter::Y, Letter::X]) {
            None => {
                let xs = w.iter().filter(|&&l| l == Letter::X).count();
                let e = out.entry((xs, w.len() - xs)).or_insert(0);
                *e = addmod(*e, c, p);
            }
            Some(pos) => {
                let mut swapped = w.clone();
                swapped.swap(pos, pos + 1);
                stack.push((swapped, c));
                let mut removed = w;
                removed.drain(pos..pos + 2);
                stack.push((removed, c));
            }
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

/// Closed form `y^b x^c = Σ_k k!·C(b,k)·C(c,k)·x^{c-k} y^{b-k}` over `F_p`,
/// before exponent folding. Kept for tests.
pub fn weyl_normal_form_oracle(b: usize, c: usize, p: u64) -> BTreeMap<(usize, usize), u64> {
    let binom = |n: usize, k: usize| -> u128 {
        (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
    };
    let mut out = BTreeMap::new();
    for k in 0..=b.min(c) {
        let fact: u128 = (1..=k as u128).product();
        let coef = (fact * binom(b, k) * binom(c, k) % p as u128) as u64;
        if coef != 0 {
            out.insert((c - k, b - k), coef);
        }
    }
    out
}

impl Algebra {
    pub fn weyl(p: u64, a: u64, b: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NonPrimeModulus(p));
        }
        let base = FiniteCommRing::zmod(p)?;
        let (a, b) = (a % p, b % p);
        let pu = p as usize;
        let d = pu * pu;
        let idx = |i: usize, j: usize| i + j * pu;
        let mut memo: HashMap<(usize, usize), BTreeMap<(usize, usize), u64>> = HashMap::new();
        let mut table = vec![vec![0u64; d]; d * d];
        for j1 in 0..pu {
            for i1 in 0..pu {
                for j2 in 0..pu {
                    for i2 in 0..pu {
                        // (x^i1 y^j1)(x^i2 y^j2) = x^i1 (y^j1 x^i2) y^j2
                        let inner = memo.entry((j1, i2)).or_insert_with(|| normal_order(j1, i2, p));
                        let out = &mut table[idx(i1, j1) * d + idx(i2, j2)];
                        for (&(ex, ey), &c) in inner.iter() {
                            let (ex, ey) = (i1 + ex, ey + j2);
                            let c = mulmod(c, powmod(a, (ex / pu) as u64, p), p);
                            let c = mulmod(c, powmod(b, (ey / pu) as u64, p), p);
                            let k = idx(ex % pu, ey % pu);
                            out[k] = addmod(out[k], c, p);
                        }
                    }
                }
            }
        }
        let mut unit = vec![0; d];
        unit[0] = 1;
        let w = Self::new_unchecked(base, d, table, unit, format!("W({p},{a},{b})"), AlgebraShape::Weyl { p, a, b })?;
        w.check_axioms()?;
        Ok(w)
    }

    /// Index of `x^i y^j` in a Weyl algebra basis.
    pub fn weyl_index(p: u64, i: usize, j: usize) -> usize {
        i + j * p as usize
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rewriting_matches_closed_form() {
        for p in [2u64, 3, 5, 7] {
            for j in 0..p as usize {
                for k in 0..p as usize {
                    assert_eq!(normal_order(j, k, p), weyl_normal_form_oracle(j, k, p), "p={p} y^{j} x^{k}");
                }
            }
        }
    }

    #[test]
    fn small_products() {
        let w = Algebra::weyl(2, 0, 0).unwrap();
        let (x, y) = (w.basis(Algebra::weyl_index(2, 1, 0)), w.basis(Algebra::weyl_index(2, 0, 1)));
        assert_eq!(w.mul(&y, &x).coords(), &[1, 0, 0, 1]);
        assert!(w.is_zero(&w.mul(&x, &x)));
        let w3 = Algebra::weyl(3, 1, 0).unwrap();
        let x = w3.basis(1);
        let x2 = w3.basis(2);
        assert_eq!(w3.mul(&x2, &x), w3.one());
    }

    #[test]
    fn all_small_weyl_algebras_are_associative() {
        for p in [2u64, 3] {
            for a in 0..p {
                for b in 0..p {
                    let w = Algebra::weyl(p, a, b).unwrap();
                    w.check_axioms().unwrap();
                    let (x, y) = (w.basis(1), w.basis(p as usize));
                    assert_eq!(w.commutator(&y, &x), w.one());
                    assert_eq!(w.pow(&x, p as u32), w.int_mul(a as i64, &w.one()));
                    assert_eq!(w.pow(&y, p as u32), w.int_mul(b as i64, &w.one()));
                }
            }
        }
    }

    #[test]
    fn rejects_composite_characteristic() {
        assert_eq!(Algebra::weyl(4, 0, 0).unwrap_err(), Error::NonPrimeModulus(4));
    }
}
