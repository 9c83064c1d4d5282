use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ring::{FiniteCommRing, RingDescriptor, RingIdeal};

use super::Algebra;

/// Configuration form of an algebra.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum AlgebraSpec {
    Matrix {
        n: usize,
        ring: RingDescriptor,
    },
    Weyl {
        p: u64,
        a: u64,
        b: u64,
    },
    Tensor {
        left: Box<AlgebraSpec>,
        right: Box<AlgebraSpec>,
    },
    Opposite {
        of: Box<AlgebraSpec>,
    },
    /// `table[i][j]` is `e_i e_j` in flattened ring coordinates.
    StructureConstants {
        ring: RingDescriptor,
        rank: usize,
        table: Vec<Vec<Vec<u64>>>,
        unit: Vec<u64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        label: Option<String>,
    },
    UpperTriangular {
        n: usize,
        ring: RingDescriptor,
    },
    /// `R^k` with componentwise product.
    Diagonal {
        k: usize,
        ring: RingDescriptor,
    },
    Quotient {
        of: Box<AlgebraSpec>,
        ideal: RingIdeal,
    },
    /// An algebra declared elsewhere in the same configuration.
    Ref {
        name: String,
    },
}

impl AlgebraSpec {
    /// Builds the algebra; `lookup` resolves `ref` entries.
    pub fn build(&self, lookup: &dyn Fn(&str) -> Option<Algebra>) -> Result<Algebra> {
        let ring = |d: &RingDescriptor| FiniteCommRing::try_from(d.clone());
        match self {
            Self::Matrix { n, ring: r } => Algebra::matrix(&ring(r)?, *n),
            Self::Weyl { p, a, b } => Algebra::weyl(*p, *a, *b),
            Self::Tensor { left, right } => left.build(lookup)?.tensor_product(&right.build(lookup)?),
            Self::Opposite { of } => Ok(of.build(lookup)?.opposite()),
            Self::StructureConstants { ring: r, rank, table, unit, label } => {
                if table.len() != *rank || table.iter().any(|row| row.len() != *rank) {
                    return Err(Error::InvalidAlgebra(format!("table must be {rank}x{rank}")));
                }
                let flat = table.iter().flatten().cloned().collect();
                let label = label.clone().unwrap_or_else(|| format!("A(rank {rank})"));
                Algebra::from_structure_constants(ring(r)?, *rank, flat, unit.clone(), label)
            }
            Self::UpperTriangular { n, ring: r } => Algebra::upper_triangular(&ring(r)?, *n),
            Self::Diagonal { k, ring: r } => Algebra::diagonal(&ring(r)?, *k),
            Self::Quotient { of, ideal } => Ok(of.build(lookup)?.quotient_algebra(ideal)?.0),
            Self::Ref { name } => {
                lookup(name).ok_or_else(|| Error::InvalidDescriptor(format!("unknown algebra `{name}`")))
            }
        }
    }

    /// Structure-constant form of a built algebra.
    pub fn canonical(a: &Algebra) -> AlgebraSpec {
        let d = a.rank();
        AlgebraSpec::StructureConstants {
            ring: a.base().descriptor(),
            rank: d,
            table: a.structure_constants().chunks(d).map(|c| c.to_vec()).collect(),
            unit: a.unit_coords().to_vec(),
            label: Some(a.label().to_string()),
        }
    }
}
