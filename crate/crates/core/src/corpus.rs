//! The deterministic corpus of verified homs used by the theorem sweeps.
//!
//! Families are generated in a fixed order: conjugations, reductions, diagonal
//! embeddings, CRT splittings, Weyl splittings, then compositions of two of
//! the earlier maps. Only the conjugating units depend on the seed.

use std::sync::Arc;

use rand::Rng;
use serde::Serialize;

use crate::algebra::{AlgElem, Algebra};
use crate::error::Result;
use crate::hom::AlgebraHom;
use crate::report::seeded_rng;
use crate::ring::{FiniteCommRing, RingIdeal};

pub const DEFAULT_CORPUS_SEED: u64 = 20_240_601;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Conjugation,
    Reduction,
    Diagonal,
    Crt,
    WeylSplitting,
    Composition,
}

#[derive(Clone, Debug)]
pub struct CorpusEntry {
    pub family: Family,
    pub hom: AlgebraHom,
}

fn zmod(n: u64) -> FiniteCommRing {
    FiniteCommRing::zmod(n).expect("modulus in range")
}

fn mat(base: &FiniteCommRing, n: usize) -> Arc<Algebra> {
    Arc::new(Algebra::matrix(base, n).expect("n >= 1"))
}

/// A uniformly random unit of `a`, by rejection.
pub fn random_unit<G: Rng + ?Sized>(a: &Algebra, rng: &mut G) -> AlgElem {
    loop {
        let u = a.random_elem(rng);
        if a.inverse(&u).is_ok() {
            return u;
        }
    }
}

pub fn default_corpus(seed: u64) -> Result<Vec<CorpusEntry>> {
    let mut rng = seeded_rng(seed);
    let mut out = Vec::new();
    let push = |family: Family, hom: AlgebraHom, out: &mut Vec<CorpusEntry>| {
        debug_assert!(hom.is_verified(), "{}", hom.label());
        out.push(CorpusEntry { family, hom });
    };

    let conj_algebras: Vec<Arc<Algebra>> = [(2, 2), (3, 2), (5, 2), (6, 2), (4, 2), (12, 2), (2, 3), (3, 3), (6, 3)]
        .iter()
        .map(|&(m, n)| mat(&zmod(m), n))
        .chain(std::iter::once(mat(&FiniteCommRing::galois_field(2, vec![1, 1, 1])?, 2)))
        .collect();
    for a in &conj_algebras {
        for _ in 0..3 {
            let u = random_unit(a, &mut rng);
            push(Family::Conjugation, AlgebraHom::conjugation(a.clone(), &u)?, &mut out);
        }
    }
    let gf4 = conj_algebras.last().unwrap().clone();
    let u = random_unit(&gf4, &mut rng);
    push(Family::Conjugation, AlgebraHom::frobenius_conjugation(gf4, &u)?, &mut out);

    for (m, n, ds) in [
        (4, 2, vec![2]),
        (6, 2, vec![2, 3]),
        (8, 2, vec![2, 4]),
        (9, 2, vec![3]),
        (12, 2, vec![2, 3, 4, 6]),
        (6, 3, vec![2, 3]),
        (30, 1, vec![2, 3, 5, 6, 15]),
    ] {
        let a = mat(&zmod(m), n);
        for d in ds {
            push(Family::Reduction, AlgebraHom::reduction(a.clone(), &RingIdeal::Zmod { d })?, &mut out);
        }
    }

    for (m, n, k) in [(5, 1, 2), (3, 1, 3), (2, 2, 2), (4, 2, 2), (3, 2, 3), (6, 1, 2)] {
        push(Family::Diagonal, AlgebraHom::diagonal_embed(mat(&zmod(m), n), k)?, &mut out);
    }

    for (m, n) in [(6, 2), (12, 2), (6, 3), (10, 1), (30, 2)] {
        let a = mat(&zmod(m), n);
        let split = a.base().crt_decompose()?;
        let fwd = AlgebraHom::base_change(a, &split.forward)?;
        let back = AlgebraHom::base_change(fwd.target().clone(), &split.backward)?;
        push(Family::Crt, fwd, &mut out);
        push(Family::Crt, back, &mut out);
    }

    for (p, ab) in [
        (2u64, (0..2).flat_map(|a| (0..2).map(move |b| (a, b))).collect::<Vec<_>>()),
        (3, (0..3).flat_map(|a| (0..3).map(move |b| (a, b))).collect()),
        (5, vec![(0, 0), (1, 2), (4, 3)]),
    ] {
        for (a, b) in ab {
            push(Family::WeylSplitting, AlgebraHom::weyl_splitting(p, a, b)?, &mut out);
        }
    }

    // Depth 2: each map followed by the first composable map from another
    // entry (conjugations only after a map of a different family), then one
    // pair of conjugations per algebra.
    let singles: Vec<CorpusEntry> = out.clone();
    for (i, f) in singles.iter().enumerate() {
        let next = singles.iter().enumerate().find(|(j, g)| {
            *j != i
                && g.hom.source() == f.hom.target()
                && !(f.family == Family::Conjugation && g.family == Family::Conjugation)
        });
        if let Some((_, g)) = next {
            push(Family::Composition, g.hom.compose(&f.hom)?, &mut out);
        }
    }
    for pair in singles.chunks(3).take(conj_algebras.len()) {
        push(Family::Composition, pair[1].hom.compose(&pair[0].hom)?, &mut out);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_is_verified_and_deterministic() {
        let a = default_corpus(DEFAULT_CORPUS_SEED).unwrap();
        let b = default_corpus(DEFAULT_CORPUS_SEED).unwrap();
        assert!(a.iter().all(|e| e.hom.is_verified()));
        assert_eq!(a.len(), b.len());
        assert!(a.iter().zip(&b).all(|(x, y)| x.hom.matrix() == y.hom.matrix()));
        let families: Vec<Family> = a.iter().map(|e| e.family).collect();
        let mut sorted = families.clone();
        sorted.dedup();
        assert_eq!(
            sorted,
            vec![Family::Conjugation, Family::Reduction, Family::Diagonal, Family::Crt, Family::WeylSplitting, Family::Composition]
        );
    }
}
