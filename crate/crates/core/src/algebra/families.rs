use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::ring::{FiniteCommRing, RingElem, RingHom, RingIdeal};

use super::{AlgElem, Algebra, AlgebraShape};

/// Flattened vector of `R^d` with `coeff` in block `k`.
fn block(base: &FiniteCommRing, rank: usize, k: usize, coeff: &RingElem) -> Vec<u64> {
    let l = base.flatten_len();
    let mut v = vec![0; rank * l];
    v[k * l..(k + 1) * l].copy_from_slice(coeff.coords());
    v
}

impl Algebra {
    /// `M_n(R)` with basis `E_ij` at index `i*n + j` and `E_ij E_kl = δ_jk E_il`.
    pub fn matrix(base: &FiniteCommRing, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidAlgebra("matrix size must be at least 1".into()));
        }
        let d = n * n;
        let one = base.one();
        let zero = vec![0; d * base.flatten_len()];
        let mut table = vec![zero.clone(); d * d];
        for i in 0..n {
            for j in 0..n {
                for l in 0..n {
                    table[(i * n + j) * d + (j * n + l)] = block(base, d, i * n + l, &one);
                }
            }
        }
        let mut unit = zero;
        for i in 0..n {
            let l = base.flatten_len();
            let k = i * n + i;
            unit[k * l..(k + 1) * l].copy_from_slice(one.coords());
        }
        let a = Self::new_unchecked(
            base.clone(),
            d,
            table,
            unit,
            format!("M_{n}({base})"),
            AlgebraShape::Matrix { n },
        )?;
        a.check_axioms()?;
        Ok(a)
    }

    /// Upper triangular `n x n` matrices, basis `E_ij` with `i <= j` in row-major order.
    pub fn upper_triangular(base: &FiniteCommRing, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidAlgebra("matrix size must be at least 1".into()));
        }
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
        let index = |i: usize, j: usize| pairs.iter().position(|&p| p == (i, j)).unwrap();
        let d = pairs.len();
        let one = base.one();
        let zero = vec![0; d * base.flatten_len()];
        let mut table = vec![zero.clone(); d * d];
        for (x, &(i, j)) in pairs.iter().enumerate() {
            for (y, &(k, l)) in pairs.iter().enumerate() {
                if j == k {
                    table[x * d + y] = block(base, d, index(i, l), &one);
                }
            }
        }
        let mut unit = zero;
        for i in 0..n {
            let l = base.flatten_len();
            let k = index(i, i);
            unit[k * l..(k + 1) * l].copy_from_slice(one.coords());
        }
        Self::from_structure_constants(base.clone(), d, table, unit, format!("T_{n}({base})"))
    }

    /// `R^k` with componentwise multiplication, a commutative rank-`k` algebra.
    pub fn diagonal(base: &FiniteCommRing, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidAlgebra("rank must be at least 1".into()));
        }
        let one = base.one();
        let zero = vec![0; k * base.flatten_len()];
        let mut table = vec![zero.clone(); k * k];
        let mut unit = zero;
        for i in 0..k {
            table[i * k + i] = block(base, k, i, &one);
            let l = base.flatten_len();
            unit[i * l..(i + 1) * l].copy_from_slice(one.coords());
        }
        let label = if k == 1 { base.to_string() } else { format!("{base}^{k}") };
        Self::from_structure_constants(base.clone(), k, table, unit, label)
    }

    /// `A⁰`: same module, `c⁰[i][j] = c[j][i]`.
    pub fn opposite(&self) -> Algebra {
        let d = self.rank;
        let table = (0..d * d).map(|x| self.table[(x % d) * d + x / d].clone()).collect();
        Self::new_unchecked(
            self.base.clone(),
            d,
            table,
            self.unit.clone(),
            format!("({})^op", self.label),
            AlgebraShape::Other,
        )
        .expect("opposite of a valid algebra")
    }

    /// `A ⊗_R B` with basis `e_i ⊗ f_j` at index `i*d_B + j`.
    pub fn tensor_product(&self, other: &Algebra) -> Result<Algebra> {
        if self.base != other.base {
            return Err(Error::BaseMismatch);
        }
        let base = &self.base;
        let (da, db) = (self.rank, other.rank);
        let d = da * db;
        let a_coords: Vec<Vec<RingElem>> = self.table.iter().map(|v| self.ring_coords(&AlgElem(v.clone()))).collect();
        let b_coords: Vec<Vec<RingElem>> = other.table.iter().map(|v| other.ring_coords(&AlgElem(v.clone()))).collect();
        let tensor = |x: &[RingElem], y: &[RingElem]| -> Vec<u64> {
            let mut out = Vec::with_capacity(d * base.flatten_len());
            for xi in x {
                for yj in y {
                    out.extend(base.mul(xi, yj).into_coords());
                }
            }
            out
        };
        let mut table = Vec::with_capacity(d * d);
        for i in 0..da {
            for j in 0..db {
                for k in 0..da {
                    for l in 0..db {
                        table.push(tensor(&a_coords[i * da + k], &b_coords[j * db + l]));
                    }
                }
            }
        }
        let unit = tensor(&self.ring_coords(&self.one()), &other.ring_coords(&other.one()));
        let a = Self::new_unchecked(
            base.clone(),
            d,
            table,
            unit,
            format!("{} (x) {}", self.label, other.label),
            AlgebraShape::Other,
        )?;
        a.check_axioms()?;
        Ok(a)
    }

    /// `A ⊗_R S` along a verified ring homomorphism `R -> S`.
    pub fn base_change(&self, phi: &RingHom) -> Result<Algebra> {
        if *phi.source() != self.base {
            return Err(Error::InvalidBaseHom(format!(
                "map starts at {}, algebra is over {}",
                phi.source(),
                self.base
            )));
        }
        let push = |v: &[u64]| -> Vec<u64> {
            v.chunks(self.base.flatten_len())
                .flat_map(|c| phi.apply(&self.base.elem(c)).into_coords())
                .collect()
        };
        let table = self.table.iter().map(|v| push(v)).collect();
        let unit = push(&self.unit);
        let target = phi.target().clone();
        let label = match &self.shape {
            AlgebraShape::Matrix { n } => format!("M_{n}({target})"),
            _ if phi.source() == phi.target() => self.label.clone(),
            _ => format!("{} (x) {}", self.label, target),
        };
        let shape = match &self.shape {
            AlgebraShape::Matrix { n } => AlgebraShape::Matrix { n: *n },
            _ => AlgebraShape::Other,
        };
        Self::new_unchecked(target, self.rank, table, unit, label, shape)
    }

    /// `A/IA`, free over `R/I` of the same rank, with the projection on the base.
    pub fn quotient_algebra(&self, ideal: &RingIdeal) -> Result<(Algebra, RingHom)> {
        let (_, proj) = self.base.quotient(ideal)?;
        Ok((self.base_change(&proj)?, proj))
    }

    /// Element of `M_n(R)` from a ring matrix.
    pub fn from_matrix(&self, m: &Matrix) -> Result<AlgElem> {
        let AlgebraShape::Matrix { n } = self.shape else {
            return Err(Error::InvalidAlgebra(format!("{} is not a matrix algebra", self.label)));
        };
        if m.rows() != n || m.cols() != n || m.ring() != &self.base {
            return Err(Error::DimensionMismatch(format!("expected {n}x{n} over {}", self.base)));
        }
        let coeffs: Vec<RingElem> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| m.get(i, j).clone()).collect();
        Ok(self.from_ring_coords(&coeffs))
    }

    /// Ring matrix of an element of `M_n(R)`.
    pub fn to_matrix(&self, x: &AlgElem) -> Result<Matrix> {
        let AlgebraShape::Matrix { n } = self.shape else {
            return Err(Error::InvalidAlgebra(format!("{} is not a matrix algebra", self.label)));
        };
        Matrix::new(self.base.clone(), n, n, self.ring_coords(x))
    }

    /// Element of `M_n(R)` from integer entries.
    pub fn matrix_elem(&self, rows: &[Vec<i64>]) -> Result<AlgElem> {
        self.from_matrix(&Matrix::from_ints(&self.base, rows)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::MaxIdeal;

    fn r(n: u64) -> FiniteCommRing {
        FiniteCommRing::zmod(n).unwrap()
    }

    #[test]
    fn matrix_examples() {
        let a = Algebra::matrix(&r(4), 2).unwrap();
        assert_eq!(a.rank(), 4);
        let (e11, e12) = (a.basis(0), a.basis(1));
        assert_eq!(a.mul(&e11, &e12), e12);
        assert!(a.is_zero(&a.mul(&e12, &e11)));
        let b = Algebra::matrix(&r(2), 1).unwrap();
        assert_eq!(b.rank(), 1);
        assert_eq!(Algebra::matrix(&r(6), 3).unwrap().rank(), 9);
        assert!(Algebra::matrix(&r(6), 0).is_err());
    }

    #[test]
    fn opposite_examples() {
        let a = Algebra::matrix(&r(3), 2).unwrap();
        let op = a.opposite();
        assert!(op.is_zero(&op.mul(&op.basis(0), &op.basis(1))));
        assert_eq!(op.opposite(), a);
        let c = Algebra::diagonal(&r(3), 2).unwrap();
        assert_eq!(c.opposite(), c);
    }

    #[test]
    fn tensor_examples() {
        let m2 = Algebra::matrix(&r(2), 2).unwrap();
        assert_eq!(m2.tensor_product(&m2).unwrap().rank(), 16);
        let base = Algebra::diagonal(&r(2), 1).unwrap();
        assert_eq!(m2.tensor_product(&base).unwrap(), m2);
        let m3 = Algebra::matrix(&r(3), 2).unwrap();
        assert_eq!(m2.tensor_product(&m3).unwrap_err(), Error::BaseMismatch);
    }

    #[test]
    fn tensor_is_associative_without_reindexing() {
        let a = Algebra::matrix(&r(2), 2).unwrap();
        let b = Algebra::upper_triangular(&r(2), 2).unwrap();
        let c = Algebra::diagonal(&r(2), 2).unwrap();
        let left = a.tensor_product(&b).unwrap().tensor_product(&c).unwrap();
        let right = a.tensor_product(&b.tensor_product(&c).unwrap()).unwrap();
        assert_eq!(left, right);
    }

    #[test]
    fn base_change_examples() {
        let z12 = r(12);
        let a = Algebra::matrix(&z12, 2).unwrap();
        let (_, pi) = z12.residue_field(&MaxIdeal::Zmod { p: 2 }).unwrap();
        assert_eq!(a.base_change(&pi).unwrap(), Algebra::matrix(&r(2), 2).unwrap());
        assert_eq!(a.base_change(&RingHom::identity(&z12)).unwrap(), a);
        let w = Algebra::weyl(3, 1, 2).unwrap();
        assert_eq!(w.base_change(&RingHom::identity(w.base())).unwrap(), w);
        assert!(matches!(a.base_change(&pi.clone()).and_then(|b| b.base_change(&pi)), Err(Error::InvalidBaseHom(_))));
    }

    #[test]
    fn quotient_algebra_example() {
        let a = Algebra::matrix(&r(4), 2).unwrap();
        let (q, _) = a.quotient_algebra(&RingIdeal::Zmod { d: 2 }).unwrap();
        assert_eq!(q, Algebra::matrix(&r(2), 2).unwrap());
    }
}
