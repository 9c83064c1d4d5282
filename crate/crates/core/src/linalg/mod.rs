//! Exact linear algebra over the base rings.
//!
//! Two layers live here. [`IntMatrix`] is an additive map between finite abelian
//! groups given by coordinate moduli; kernels, images, solving and bijectivity are
//! decided on it through Howell forms. [`Matrix`] is a matrix over a
//! [`FiniteCommRing`](crate::ring::FiniteCommRing) and is lowered to an
//! `IntMatrix` on flattened coordinates for all of those questions.

pub mod group;
mod howell;
mod matrix;

use serde::{Deserialize, Serialize};

use crate::arith::{gcd, GroupOrder};
use crate::error::{Error, Result};

pub use group::Subgroup;
pub use matrix::{howell_form, HowellResult, Matrix};

/// Dense integer matrix, read as an additive map `⊕ Z/N_j -> ⊕ Z/M_i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<u64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            data: rows.concat(),
        })
    }

    /// Builds the matrix whose `j`-th column is `columns[j]`.
    pub fn from_columns(nrows: usize, columns: &[Vec<u64>]) -> Self {
        let mut m = Self::zeros(nrows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), nrows);
            for (i, &x) in c.iter().enumerate() {
                m.set(i, j, x);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<u64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<u64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    /// `y_i = Σ_j H_ij x_j mod M_i`.
    pub fn apply(&self, x: &[u64], target_moduli: &[u64]) -> Vec<u64> {
        debug_assert_eq!(x.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let m = target_moduli[i] as u128;
                let mut acc: u128 = 0;
                for (h, &xv) in self.row(i).iter().zip(x) {
                    if *h != 0 && xv != 0 {
                        acc = (acc + *h as u128 * xv as u128) % m;
                    }
                }
                acc as u64
            })
            .collect()
    }

    /// `self · other`, reduced by the row moduli of `self`.
    pub fn mul(&self, other: &IntMatrix, target_moduli: &[u64]) -> IntMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for j in 0..other.cols {
            let col = other.column(j);
            let img = self.apply(&col, target_moduli);
            for (i, v) in img.into_iter().enumerate() {
                out.set(i, j, v);
            }
        }
        out
    }

    /// Checks `N_j · H_ij ≡ 0 (mod M_i)` for every entry, i.e. that the integer
    /// matrix descends to a map of the finite groups.
    pub fn check_well_defined(&self, source_moduli: &[u64], target_moduli: &[u64]) -> Result<()> {
        if source_moduli.len() != self.cols || target_moduli.len() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix between groups of {} and {} coordinates",
                self.rows,
                self.cols,
                source_moduli.len(),
                target_moduli.len()
            )));
        }
        for i in 0..self.rows {
            for j in 0..self.cols {
                let (n, m) = (source_moduli[j], target_moduli[i]);
                if (self.get(i, j) as u128 * n as u128) % m as u128 != 0 {
                    return Err(Error::IllFormedMap {
                        row: i,
                        col: j,
                        order: n,
                        modulus: m,
                    });
                }
            }
        }
        Ok(())
    }

    /// Common modulus and the kernel system: row `j` is `(A·e_j, emb(e_j))` where
    /// `A` is the map with row `i` scaled into `Z/N`.
    fn kernel_system(&self, source_moduli: &[u64], target_moduli: &[u64]) -> (u64, Vec<Vec<u64>>) {
        let n = group::exponent(source_moduli).max(1);
        let n = crate::arith::lcm(n, group::exponent(target_moduli).max(1));
        let m = self.rows;
        let rows = (0..self.cols)
            .map(|j| {
                let mut r = vec![0u64; m + self.cols];
                for i in 0..m {
                    let scale = n / target_moduli[i];
                    r[i] = ((self.get(i, j) % target_moduli[i]) as u128 * scale as u128 % n as u128) as u64;
                }
                r[m + j] = n / source_moduli[j];
                r
            })
            .collect();
        (n, rows)
    }

    /// Kernel of the additive map, as a subgroup of the source.
    pub fn kernel(&self, source_moduli: &[u64], target_moduli: &[u64]) -> Result<Subgroup> {
        self.check_well_defined(source_moduli, target_moduli)?;
        let (n, rows) = self.kernel_system(source_moduli, target_moduli);
        let m = self.rows;
        let h = howell::howell(n, m + self.cols, rows, false);
        let gens: Vec<Vec<u64>> = h
            .rows
            .iter()
            .zip(&h.pivots)
            .filter(|(_, &c)| c >= m)
            .map(|(r, _)| {
                r[m..]
                    .iter()
                    .zip(source_moduli)
                    .map(|(&x, &nj)| x / (n / nj))
                    .collect()
            })
            .collect();
        Ok(Subgroup::span(source_moduli, gens.iter().map(Vec::as_slice)))
    }

    /// Image of the additive map, as a subgroup of the target.
    pub fn image(&self, source_moduli: &[u64], target_moduli: &[u64]) -> Result<Subgroup> {
        self.check_well_defined(source_moduli, target_moduli)?;
        let cols: Vec<Vec<u64>> = (0..self.cols)
            .map(|j| {
                self.column(j)
                    .iter()
                    .zip(target_moduli)
                    .map(|(&x, &m)| x % m)
                    .collect()
            })
            .collect();
        Ok(Subgroup::span(target_moduli, cols.iter().map(Vec::as_slice)))
    }

    /// One solution of `H x = b` together with the kernel, or `NoSolution`.
    pub fn solve(
        &self,
        source_moduli: &[u64],
        target_moduli: &[u64],
        b: &[u64],
    ) -> Result<(Vec<u64>, Subgroup)> {
        self.check_well_defined(source_moduli, target_moduli)?;
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch("right-hand side length".into()));
        }
        let (n, rows) = self.kernel_system(source_moduli, target_moduli);
        let m = self.rows;
        let h = howell::howell(n, m + self.cols, rows, false);
        let mut v: Vec<u64> = b
            .iter()
            .zip(target_moduli)
            .map(|(&x, &mi)| ((x % mi) as u128 * (n / mi) as u128 % n as u128) as u64)
            .chain(std::iter::repeat(0).take(self.cols))
            .collect();
        howell::reduce(n, &h, &mut v, m);
        if v[..m].iter().any(|&x| x != 0) {
            return Err(Error::NoSolution);
        }
        // v = (b - A y, -emb(y))
        let x: Vec<u64> = v[m..]
            .iter()
            .zip(source_moduli)
            .map(|(&e, &nj)| {
                let y = e / (n / nj);
                (nj - y % nj) % nj
            })
            .collect();
        let kernel = self.kernel(source_moduli, target_moduli)?;
        Ok((x, kernel))
    }

    /// Whether the map is a bijection of finite groups.
    ///
    /// Bijective iff the group orders agree and the map is injective; with equal
    /// orders that is the same as surjective, which is what is computed here.
    pub fn is_bijective(&self, source_moduli: &[u64], target_moduli: &[u64]) -> Result<bool> {
        self.check_well_defined(source_moduli, target_moduli)?;
        let target_order = GroupOrder::of_moduli(target_moduli);
        if GroupOrder::of_moduli(source_moduli) != target_order {
            return Ok(false);
        }
        Ok(self.image(source_moduli, target_moduli)?.order() == target_order)
    }
}

/// Integer order of `x` in `Z/m`.
pub fn additive_order(x: u64, m: u64) -> u64 {
    m / gcd(x % m, m)
}
