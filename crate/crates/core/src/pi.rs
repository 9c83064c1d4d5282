//! Multilinear polynomial identities: the standard identities, evaluation, and
//! vanishing, witness and transfer checks.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::algebra::{AlgElem, Algebra};
use crate::error::{Error, Result};
use crate::hom::AlgebraHom;
use crate::report::{derive_seed, seeded_rng, CheckReport, SampleMode, Status};

/// Largest supported arity of a standard identity.
pub const MAX_STANDARD_ARITY: usize = 8;

/// Default bound on exhaustively enumerated tuples.
pub const DEFAULT_MAX_TUPLES: u128 = 10_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Term {
    pub coef: i64,
    /// Variable indices, `1..=arity`, each exactly once.
    pub word: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "IdentitySpec", into = "IdentitySpec")]
pub struct MultilinearIdentity {
    arity: usize,
    terms: Vec<Term>,
    /// Set for `s_k`, which has a faster evaluator.
    standard: bool,
}

/// Configuration form: `{"standard": k}` or `{"arity": k, "terms": [...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged, deny_unknown_fields)]
pub enum IdentitySpec {
    Standard { standard: usize },
    Explicit { arity: usize, terms: Vec<Term> },
}

impl TryFrom<IdentitySpec> for MultilinearIdentity {
    type Error = Error;

    fn try_from(s: IdentitySpec) -> Result<Self> {
        match s {
            IdentitySpec::Standard { standard } => Self::standard(standard),
            IdentitySpec::Explicit { arity, terms } => Self::new(arity, terms),
        }
    }
}

impl From<MultilinearIdentity> for IdentitySpec {
    fn from(id: MultilinearIdentity) -> Self {
        if id.standard {
            IdentitySpec::Standard { standard: id.arity }
        } else {
            IdentitySpec::Explicit { arity: id.arity, terms: id.terms }
        }
    }
}

/// Permutations of `0..k` in lexicographic order with their signs.
fn signed_permutations(k: usize) -> Vec<(Vec<usize>, i64)> {
    let mut out = Vec::new();
    let mut perm: Vec<usize> = (0..k).collect();
    loop {
        let inversions = (0..k)
            .flat_map(|i| (i + 1..k).map(move |j| (i, j)))
            .filter(|&(i, j)| perm[i] > perm[j])
            .count();
        out.push((perm.clone(), if inversions % 2 == 0 { 1 } else { -1 }));
        let Some(i) = (0..k.saturating_sub(1)).rev().find(|&i| perm[i] < perm[i + 1]) else {
            return out;
        };
        let j = (i + 1..k).rev().find(|&j| perm[j] > perm[i]).unwrap();
        perm.swap(i, j);
        perm[i + 1..].reverse();
    }
}

impl MultilinearIdentity {
    pub fn new(arity: usize, terms: Vec<Term>) -> Result<Self> {
        if arity == 0 {
            return Err(Error::InvalidDescriptor("identity arity must be at least 1".into()));
        }
        for t in &terms {
            if t.coef == 0 {
                return Err(Error::InvalidDescriptor("zero coefficient".into()));
            }
            let mut w = t.word.clone();
            w.sort_unstable();
            if w != (1..=arity).collect::<Vec<_>>() {
                return Err(Error::InvalidDescriptor(format!(
                    "word {:?} does not use each of 1..={arity} exactly once",
                    t.word
                )));
            }
        }
        Ok(Self { arity, terms, standard: false })
    }

    /// `s_k = Σ_σ sgn(σ) x_σ(1) ... x_σ(k)`.
    pub fn standard(k: usize) -> Result<Self> {
        if k == 0 || k > MAX_STANDARD_ARITY {
            return Err(Error::InvalidDescriptor(format!(
                "standard identity arity must be in 1..={MAX_STANDARD_ARITY}"
            )));
        }
        let terms = signed_permutations(k)
            .into_iter()
            .map(|(p, s)| Term { coef: s, word: p.into_iter().map(|i| i + 1).collect() })
            .collect();
        Ok(Self { arity: k, terms, standard: true })
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn name(&self) -> String {
        if self.standard {
            format!("s_{}", self.arity)
        } else {
            format!("identity[{} terms, arity {}]", self.terms.len(), self.arity)
        }
    }

    pub fn evaluate(&self, a: &Algebra, xs: &[AlgElem]) -> Result<AlgElem> {
        if xs.len() != self.arity {
            return Err(Error::ArityMismatch { expected: self.arity, got: xs.len() });
        }
        for x in xs {
            if x.coords().len() != a.flat_dim()
                || x.coords().iter().zip(a.moduli()).any(|(&c, &m)| c >= m)
            {
                return Err(Error::AlgebraMismatch);
            }
        }
        if self.standard {
            let mut acc = a.zero();
            standard_dfs(a, xs, &mut vec![false; xs.len()], &a.one(), false, &mut acc);
            return Ok(acc);
        }
        let mut acc = a.zero();
        for t in &self.terms {
            let prod = t.word.iter().fold(a.one(), |p, &v| a.mul(&p, &xs[v - 1]));
            acc = a.add(&acc, &a.int_mul(t.coef, &prod));
        }
        Ok(acc)
    }
}

/// Sums `sgn(σ) x_σ(1)...x_σ(k)` by extending shared prefixes. Appending `v`
/// after a prefix adds one inversion per used index above `v`.
fn standard_dfs(a: &Algebra, xs: &[AlgElem], used: &mut [bool], prefix: &AlgElem, odd: bool, acc: &mut AlgElem) {
    if used.iter().all(|&u| u) {
        *acc = if odd { a.sub(acc, prefix) } else { a.add(acc, prefix) };
        return;
    }
    for v in 0..xs.len() {
        if used[v] {
            continue;
        }
        let flips = used[v + 1..].iter().filter(|&&u| u).count();
        used[v] = true;
        let next = a.mul(prefix, &xs[v]);
        if !a.is_zero(&next) {
            standard_dfs(a, xs, used, &next, odd ^ (flips % 2 == 1), acc);
        }
        used[v] = false;
    }
}

/// Whether `a` is Azumaya of constant rank `n²`.
fn azumaya_of_rank(a: &Algebra, n: usize) -> bool {
    a.is_azumaya().passed() && a.has_constant_rank() == (true, n * n)
}

/// `s_{2n}` vanishes on every tested `2n`-tuple of `a`.
pub fn al_vanishing_check(a: &Algebra, n: usize, mode: SampleMode, max_tuples: u128) -> Result<CheckReport> {
    if n == 0 {
        return Err(Error::InvalidDescriptor("n must be at least 1".into()));
    }
    let k = 2 * n;
    let id = MultilinearIdentity::standard(k)?;
    let report = CheckReport::pass("al_vanishing", a.label().to_string())
        .with_precondition(&format!("azumaya_rank_{}", n * n), azumaya_of_rank(a, n))
        .with_detail("identity", id.name());
    let eval = |xs: &[AlgElem]| id.evaluate(a, xs).expect("arity fixed");
    let failure = |xs: Vec<AlgElem>, v: AlgElem| json!({"tuple": xs, "value": v});
    match mode {
        SampleMode::Exhaustive => {
            let size = a.size().unwrap_or(u128::MAX);
            let needed = (0..k).try_fold(1u128, |acc, _| acc.checked_mul(size)).unwrap_or(u128::MAX);
            if needed > max_tuples {
                return Err(Error::BudgetExceeded { needed, budget: max_tuples });
            }
            let elems: Vec<AlgElem> = a.elements().collect();
            let s = elems.len() as u128;
            let tuple = |mut t: u128| -> Vec<AlgElem> {
                (0..k)
                    .map(|_| {
                        let e = elems[(t % s) as usize].clone();
                        t /= s;
                        e
                    })
                    .collect()
            };
            let bad = (0..needed as u64).into_par_iter().find_first(|&t| !a.is_zero(&eval(&tuple(t as u128))));
            let report = report.with_detail("mode", "exhaustive").with_detail("tuples", needed as u64);
            Ok(match bad {
                None => report,
                Some(t) => {
                    let xs = tuple(t as u128);
                    let v = eval(&xs);
                    report.fail_escalated(failure(xs, v))
                }
            })
        }
        SampleMode::Samples { count, seed } => {
            let tuple = |i: u64| -> Vec<AlgElem> {
                let mut rng = seeded_rng(derive_seed(seed, i));
                (0..k).map(|_| a.random_elem(&mut rng)).collect()
            };
            let bad = (0..count).into_par_iter().find_first(|&i| !a.is_zero(&eval(&tuple(i))));
            let report = report.with_detail("mode", "samples").with_seeds(seed, count);
            Ok(match bad {
                None => report,
                Some(i) => {
                    let xs = tuple(i);
                    let v = eval(&xs);
                    report.fail_escalated(failure(xs, v))
                }
            })
        }
    }
}

/// First `k`-tuple with `s_k ≠ 0`: distinct basis elements in lexicographic
/// order, then seeded random tuples, `budget` evaluations in total.
pub fn find_nonvanishing(a: &Algebra, k: usize, budget: u64, seed: u64) -> Result<Option<Vec<AlgElem>>> {
    let id = MultilinearIdentity::standard(k)?;
    let mut spent = 0u64;
    let d = a.rank();
    let mut idx: Vec<usize> = Vec::with_capacity(k);
    fn next_distinct(idx: &mut Vec<usize>, k: usize, d: usize, out: &mut Vec<Vec<usize>>, limit: u64) {
        if out.len() as u64 >= limit {
            return;
        }
        if idx.len() == k {
            out.push(idx.clone());
            return;
        }
        for i in 0..d {
            if !idx.contains(&i) {
                idx.push(i);
                next_distinct(idx, k, d, out, limit);
                idx.pop();
            }
        }
    }
    let mut basis_tuples = Vec::new();
    next_distinct(&mut idx, k, d, &mut basis_tuples, budget);
    for t in basis_tuples {
        spent += 1;
        let xs: Vec<AlgElem> = t.iter().map(|&i| a.basis(i)).collect();
        if !a.is_zero(&id.evaluate(a, &xs)?) {
            return Ok(Some(xs));
        }
    }
    let mut rng = seeded_rng(seed);
    while spent < budget {
        spent += 1;
        let xs: Vec<AlgElem> = (0..k).map(|_| a.random_elem(&mut rng)).collect();
        if !a.is_zero(&id.evaluate(a, &xs)?) {
            return Ok(Some(xs));
        }
    }
    Ok(None)
}

pub fn nonvanishing_witness(a: &Algebra, k: usize, budget: u64, seed: u64) -> Result<CheckReport> {
    let subject = a.label().to_string();
    let found = find_nonvanishing(a, k, budget, seed)?;
    let report = CheckReport::new("nonvanishing_witness", subject, Status::NotFound)
        .with_detail("identity", format!("s_{k}"))
        .with_detail("budget", budget)
        .with_seeds(seed, budget);
    Ok(match found {
        Some(xs) => {
            let v = MultilinearIdentity::standard(k)?.evaluate(a, &xs)?;
            let mut r = report.with_witness(json!({"tuple": xs, "value": v}));
            r.status = Status::Pass;
            r
        }
        None => report,
    })
}

/// `φ(id(x_1..x_k)) = id(φ x_1, ..., φ x_k)` on `trials` random tuples.
pub fn identity_transfer_check(f: &AlgebraHom, id: &MultilinearIdentity, trials: u64, seed: u64) -> Result<CheckReport> {
    let (src, tgt) = (f.source(), f.target());
    let report = CheckReport::pass("identity_transfer", f.label().to_string())
        .with_precondition("verified", f.is_verified())
        .with_detail("identity", id.name())
        .with_seeds(seed, trials);
    let mut rng = seeded_rng(seed);
    for _ in 0..trials {
        let xs: Vec<AlgElem> = (0..id.arity()).map(|_| src.random_elem(&mut rng)).collect();
        let lhs = f.apply(&id.evaluate(src, &xs)?);
        let ys: Vec<AlgElem> = xs.iter().map(|x| f.apply(x)).collect();
        let rhs = id.evaluate(tgt, &ys)?;
        if lhs != rhs {
            return Ok(report.fail_escalated(json!({"tuple": xs, "image_of_value": lhs, "value_of_images": rhs})));
        }
    }
    Ok(report)
}
