use crate::error::{Error, Result};
use crate::ring::{FiniteCommRing, RingElem, RingKind};

use super::{howell, IntMatrix, Subgroup};

/// Dense row-major matrix over a finite commutative ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    ring: FiniteCommRing,
    rows: usize,
    cols: usize,
    entries: Vec<RingElem>,
}

/// Howell form `h = transform · m` of a matrix over `Z/N`.
#[derive(Clone, Debug)]
pub struct HowellResult {
    pub h: Matrix,
    pub transform: Matrix,
    pub pivots: Vec<usize>,
}

impl Matrix {
    pub fn new(ring: FiniteCommRing, rows: usize, cols: usize, entries: Vec<RingElem>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        let entries = entries.into_iter().map(|e| ring.elem(e.coords())).collect();
        Ok(Self {
            ring,
            rows,
            cols,
            entries,
        })
    }

    /// Integer entries mapped through `Z -> R`.
    pub fn from_ints(ring: &FiniteCommRing, rows: &[Vec<i64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        let entries = rows.iter().flatten().map(|&x| ring.from_int(x)).collect();
        Self::new(ring.clone(), rows.len(), cols, entries)
    }

    pub fn zeros(ring: &FiniteCommRing, rows: usize, cols: usize) -> Self {
        Self {
            ring: ring.clone(),
            rows,
            cols,
            entries: vec![ring.zero(); rows * cols],
        }
    }

    pub fn identity(ring: &FiniteCommRing, n: usize) -> Self {
        let mut m = Self::zeros(ring, n, n);
        for i in 0..n {
            m.set(i, i, ring.one());
        }
        m
    }

    pub fn ring(&self) -> &FiniteCommRing {
        &self.ring
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &RingElem {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: RingElem) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows || self.ring != other.ring {
            return Err(Error::DimensionMismatch("matrix product".into()));
        }
        let r = &self.ring;
        let mut out = Matrix::zeros(r, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if r.is_zero(a) {
                    continue;
                }
                for j in 0..other.cols {
                    let v = r.add(out.get(i, j), &r.mul(a, other.get(k, j)));
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    pub fn apply(&self, x: &[RingElem]) -> Result<Vec<RingElem>> {
        if x.len() != self.cols {
            return Err(Error::DimensionMismatch("vector length".into()));
        }
        let r = &self.ring;
        Ok((0..self.rows)
            .map(|i| {
                (0..self.cols).fold(r.zero(), |acc, j| r.add(&acc, &r.mul(self.get(i, j), &x[j])))
            })
            .collect())
    }

    fn flat_moduli(&self, count: usize) -> Vec<u64> {
        self.ring.moduli().repeat(count)
    }

    /// The additive map on flattened coordinates: each entry becomes the
    /// `L x L` block of multiplication by it.
    pub fn to_additive(&self) -> IntMatrix {
        let l = self.ring.flatten_len();
        let mut out = IntMatrix::zeros(self.rows * l, self.cols * l);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let e = self.get(i, j);
                if self.ring.is_zero(e) {
                    continue;
                }
                let block = self.ring.mul_matrix(e);
                for a in 0..l {
                    for b in 0..l {
                        out.set(i * l + a, j * l + b, block.get(a, b));
                    }
                }
            }
        }
        out
    }

    fn unflatten(&self, v: &[u64]) -> Vec<RingElem> {
        v.chunks(self.ring.flatten_len().max(1))
            .map(|c| self.ring.elem(c))
            .collect()
    }

    /// Kernel as a subgroup of the flattened source `R^cols`.
    pub fn kernel_subgroup(&self) -> Subgroup {
        self.to_additive()
            .kernel(&self.flat_moduli(self.cols), &self.flat_moduli(self.rows))
            .expect("ring matrices are always well defined")
    }

    /// Generators of `{x : M x = 0}`.
    pub fn kernel(&self) -> Vec<Vec<RingElem>> {
        self.kernel_subgroup()
            .generators()
            .iter()
            .map(|g| self.unflatten(g))
            .collect()
    }

    /// One solution of `M x = b` and generators of the kernel.
    pub fn solve(&self, b: &[RingElem]) -> Result<(Vec<RingElem>, Vec<Vec<RingElem>>)> {
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch("right-hand side length".into()));
        }
        let flat_b: Vec<u64> = b.iter().flat_map(|e| e.coords().iter().copied()).collect();
        let (x, k) = self.to_additive().solve(
            &self.flat_moduli(self.cols),
            &self.flat_moduli(self.rows),
            &flat_b,
        )?;
        let kernel = k.generators().iter().map(|g| self.unflatten(g)).collect();
        Ok((self.unflatten(&x), kernel))
    }

    pub fn is_bijective(&self) -> bool {
        self.to_additive()
            .is_bijective(&self.flat_moduli(self.cols), &self.flat_moduli(self.rows))
            .expect("ring matrices are always well defined")
    }

    /// Row span over the ring, as a subgroup of flattened `R^cols`.
    pub fn row_span(&self) -> Subgroup {
        let l = self.ring.flatten_len();
        let moduli = self.flat_moduli(self.cols);
        let mut gens = Vec::new();
        for i in 0..self.rows {
            for g in 0..l {
                let s = self.ring.coordinate_generator(g);
                let row: Vec<u64> = (0..self.cols)
                    .flat_map(|j| self.ring.mul(&s, self.get(i, j)).into_coords())
                    .collect();
                gens.push(row);
            }
        }
        Subgroup::span(&moduli, gens.iter().map(Vec::as_slice))
    }
}

/// Howell normal form over `Z/N`. Zero rows are dropped.
pub fn howell_form(m: &Matrix) -> Result<HowellResult> {
    let RingKind::ZMod(n) = *m.ring.kind() else {
        return Err(Error::UnsupportedRing(m.ring.to_string()));
    };
    let rows: Vec<Vec<u64>> = (0..m.rows)
        .map(|i| (0..m.cols).map(|j| m.get(i, j).coords()[0]).collect())
        .collect();
    let h = howell::howell(n, m.cols, rows, true);
    let to_matrix = |rs: &[Vec<u64>], cols: usize| -> Matrix {
        let entries = rs.iter().flatten().map(|&x| m.ring.elem(&[x])).collect();
        Matrix {
            ring: m.ring.clone(),
            rows: rs.len(),
            cols,
            entries,
        }
    };
    let transform = to_matrix(h.transform.as_deref().unwrap_or(&[]), m.rows);
    Ok(HowellResult {
        h: to_matrix(&h.rows, m.cols),
        transform,
        pivots: h.pivots,
    })
}
