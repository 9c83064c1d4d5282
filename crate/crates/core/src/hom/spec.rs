use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::{Algebra, AlgebraShape};
use crate::error::{Error, Result};
use crate::linalg::IntMatrix;
use crate::ring::RingIdeal;

use super::AlgebraHom;

/// An ideal of the base ring: a bare integer `d` means `(d)` in `Z/n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum IdealSpec {
    Generator(u64),
    Ideal(RingIdeal),
}

/// Configuration form of a hom. The source algebra is supplied by the caller.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum HomSpec {
    Identity,
    /// `x ↦ u x u⁻¹`, `u` given as integer matrix rows.
    Conjugation { u: Vec<Vec<i64>> },
    Reduction { ideal: IdealSpec },
    Diagonal { k: usize },
    /// Raw matrix on flattened coordinates, rows indexed by the target.
    Explicit { matrix: Vec<Vec<u64>> },
    /// `outer ∘ inner`.
    Compose { outer: Box<HomSpec>, inner: Box<HomSpec> },
    WeylSplitting,
    /// `M_n(Z/m) -> M_n(Π Z/p^e)`.
    Crt,
    FrobeniusConjugation { u: Vec<Vec<i64>> },
}

impl IdealSpec {
    pub fn resolve(&self, a: &Algebra) -> Result<RingIdeal> {
        match self {
            IdealSpec::Generator(d) => a.base().zmod_ideal(*d),
            IdealSpec::Ideal(i) => {
                a.base().validate_ideal(i)?;
                Ok(i.clone())
            }
        }
    }
}

impl HomSpec {
    /// Builds the hom out of `source`. `target` is needed only for explicit maps.
    pub fn build(&self, source: Arc<Algebra>, target: Option<Arc<Algebra>>) -> Result<AlgebraHom> {
        match self {
            Self::Identity => Ok(AlgebraHom::identity(source)),
            Self::Conjugation { u } => {
                let u = source.matrix_elem(u)?;
                AlgebraHom::conjugation(source, &u)
            }
            Self::Reduction { ideal } => {
                let i = ideal.resolve(&source)?;
                AlgebraHom::reduction(source, &i)
            }
            Self::Diagonal { k } => AlgebraHom::diagonal_embed(source, *k),
            Self::Explicit { matrix } => {
                let target = target.ok_or_else(|| {
                    Error::InvalidDescriptor("explicit hom needs a target algebra".into())
                })?;
                let m = IntMatrix::from_rows(matrix)?;
                AlgebraHom::verify(source, target, m, "explicit")
            }
            Self::Compose { outer, inner } => {
                let f = inner.build(source, target.clone())?;
                let g = outer.build(f.target().clone(), target)?;
                g.compose(&f)
            }
            Self::WeylSplitting => {
                let AlgebraShape::Weyl { p, a, b } = *source.shape() else {
                    return Err(Error::InvalidAlgebra(format!("{} is not a Weyl algebra", source.label())));
                };
                AlgebraHom::weyl_splitting(p, a, b)
            }
            Self::Crt => {
                let split = source.base().crt_decompose()?;
                AlgebraHom::base_change(source, &split.forward)
            }
            Self::FrobeniusConjugation { u } => {
                let u = source.matrix_elem(u)?;
                AlgebraHom::frobenius_conjugation(source, &u)
            }
        }
    }
}
