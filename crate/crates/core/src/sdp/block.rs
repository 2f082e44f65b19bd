use crate::error::{Error, Result};
use crate::linalg::{eigvalsh_real, RealMatrix};

/// Block-diagonal real symmetric matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockMatrix {
    blocks: Vec<RealMatrix>,
}

impl BlockMatrix {
    /// Validates that every block is square and finite, then stores the symmetric part.
    pub fn new(blocks: Vec<RealMatrix>) -> Result<Self> {
        for (k, b) in blocks.iter().enumerate() {
            if b.rows() != b.cols() {
                return Err(Error::invalid(format!(
                    "block {k} is {}x{}, not square",
                    b.rows(),
                    b.cols()
                )));
            }
            if !b.is_finite() {
                return Err(Error::invalid(format!("block {k} has non-finite entries")));
            }
        }
        Ok(BlockMatrix {
            blocks: blocks.iter().map(RealMatrix::symmetric_part).collect(),
        })
    }

    pub fn single(m: RealMatrix) -> Result<Self> {
        Self::new(vec![m])
    }

    pub fn zeros(sizes: &[usize]) -> Self {
        BlockMatrix {
            blocks: sizes.iter().map(|&n| RealMatrix::zeros(n, n)).collect(),
        }
    }

    pub fn scaled_identity(sizes: &[usize], s: f64) -> Self {
        BlockMatrix {
            blocks: sizes
                .iter()
                .map(|&n| RealMatrix::scaled_identity(n, s))
                .collect(),
        }
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.blocks.iter().map(RealMatrix::rows).collect()
    }

    /// Total dimension, the sum of block sizes.
    pub fn dim(&self) -> usize {
        self.blocks.iter().map(RealMatrix::rows).sum()
    }

    pub fn blocks(&self) -> &[RealMatrix] {
        &self.blocks
    }

    pub fn block(&self, k: usize) -> &RealMatrix {
        &self.blocks[k]
    }

    pub fn block_mut(&mut self, k: usize) -> &mut RealMatrix {
        &mut self.blocks[k]
    }

    pub fn dot(&self, other: &Self) -> f64 {
        self.blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| a.dot(b))
            .sum()
    }

    pub fn axpy(&mut self, s: f64, other: &Self) {
        for (a, b) in self.blocks.iter_mut().zip(&other.blocks) {
            a.axpy(s, b);
        }
    }

    pub fn scale(&self, s: f64) -> Self {
        self.map(|b| b.scale(s))
    }

    pub fn trace(&self) -> f64 {
        self.blocks.iter().map(RealMatrix::trace).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.blocks
            .iter()
            .flat_map(eigvalsh_real)
            .fold(f64::INFINITY, f64::min)
    }

    pub fn to_dense(&self) -> RealMatrix {
        let n = self.dim();
        let mut out = RealMatrix::zeros(n, n);
        let mut off = 0;
        for b in &self.blocks {
            for i in 0..b.rows() {
                for j in 0..b.cols() {
                    out[(off + i, off + j)] = b[(i, j)];
                }
            }
            off += b.rows();
        }
        out
    }

    pub(crate) fn map(&self, f: impl Fn(&RealMatrix) -> RealMatrix) -> Self {
        BlockMatrix {
            blocks: self.blocks.iter().map(f).collect(),
        }
    }

    pub(crate) fn zip_map(
        &self,
        other: &Self,
        f: impl Fn(&RealMatrix, &RealMatrix) -> RealMatrix,
    ) -> Self {
        BlockMatrix {
            blocks: self
                .blocks
                .iter()
                .zip(&other.blocks)
                .map(|(a, b)| f(a, b))
                .collect(),
        }
    }

    /// Blockwise product; the result is generally not symmetric.
    pub(crate) fn mul(&self, other: &Self) -> Self {
        self.zip_map(other, |a, b| a * b)
    }

    pub(crate) fn symmetric_part(&self) -> Self {
        self.map(RealMatrix::symmetric_part)
    }

    /// Blockwise lower Cholesky factors; `None` unless every block is positive definite.
    pub(crate) fn cholesky(&self) -> Option<Self> {
        let blocks = self
            .blocks
            .iter()
            .map(RealMatrix::cholesky)
            .collect::<Option<Vec<_>>>()?;
        Some(BlockMatrix { blocks })
    }
}
