//! Small dense complex and real matrix algebra.
//!
//! Every matrix in this crate is at most 16×16, so the routines here favour
//! determinism and accuracy over asymptotic speed.

mod complex;
mod jacobi;
mod real;

pub use complex::{pauli, ComplexMatrix, HermitianMatrix, C64, HERMITIAN_TOL, I, ONE, ZERO};
pub use real::{cholesky_solve, RealMatrix, RealSymmetricMatrix};

use crate::error::{Error, Result};

/// Default relative rank tolerance for [`psd_factor`].
pub const DEFAULT_RANK_TOL: f64 = 1e-10;

/// Spectral decomposition `A = U diag(λ) U†` with ascending eigenvalues.
#[derive(Clone, Debug)]
pub struct EigenDecomposition {
    pub eigenvalues: Vec<f64>,
    /// Unitary matrix whose columns are the eigenvectors.
    pub eigenvectors: ComplexMatrix,
}

impl EigenDecomposition {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.eigenvalues[self.dim() - 1]
    }

    /// `U f(Λ) U†` for a real spectral function `f`.
    pub fn map_spectrum(&self, f: impl Fn(f64) -> f64) -> HermitianMatrix {
        let n = self.dim();
        let u = &self.eigenvectors;
        let fl: Vec<f64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        let m = ComplexMatrix::from_fn(n, n, |i, j| {
            (0..n).map(|k| u[(i, k)] * u[(j, k)].conj() * fl[k]).sum()
        });
        HermitianMatrix::from_hermitian_part(&m)
    }

    pub fn reconstruct(&self) -> HermitianMatrix {
        self.map_spectrum(|l| l)
    }

    /// Ratio of largest to smallest absolute eigenvalue.
    pub fn condition_number(&self) -> f64 {
        let abs: Vec<f64> = self.eigenvalues.iter().map(|l| l.abs()).collect();
        let max = abs.iter().cloned().fold(0.0, f64::max);
        let min = abs.iter().cloned().fold(f64::INFINITY, f64::min);
        if min == 0.0 {
            f64::INFINITY
        } else {
            max / min
        }
    }

    /// `U† M U`, i.e. `M` expressed in the eigenbasis.
    pub fn to_eigenbasis(&self, m: &ComplexMatrix) -> ComplexMatrix {
        let u = &self.eigenvectors;
        &(&u.adjoint() * m) * u
    }

    /// `U M U†`, the inverse of [`Self::to_eigenbasis`].
    pub fn from_eigenbasis(&self, m: &ComplexMatrix) -> ComplexMatrix {
        let u = &self.eigenvectors;
        &(u * m) * &u.adjoint()
    }
}

/// Hermitian eigendecomposition by cyclic Jacobi rotations.
pub fn eigh(m: &HermitianMatrix) -> Result<EigenDecomposition> {
    m.check_finite()?;
    let (values, vectors) = jacobi::hermitian_jacobi(m.matrix());
    let order = jacobi::ascending_order(&values);
    let n = values.len();
    let eigenvalues = order.iter().map(|&k| values[k]).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, n, |i, j| vectors[(i, order[j])]);
    Ok(EigenDecomposition {
        eigenvalues,
        eigenvectors,
    })
}

/// Ascending eigenvalues and orthogonal eigenvectors (columns) of a real symmetric matrix.
pub fn eigh_real(m: &RealMatrix) -> Result<(Vec<f64>, RealMatrix)> {
    if m.rows() != m.cols() || !m.is_finite() {
        return Err(Error::invalid("eigh_real needs a finite square matrix"));
    }
    let (values, vectors) = jacobi::symmetric_jacobi(m, true);
    let vectors = vectors.expect("vectors requested");
    let order = jacobi::ascending_order(&values);
    let n = values.len();
    Ok((
        order.iter().map(|&k| values[k]).collect(),
        RealMatrix::from_fn(n, n, |i, j| vectors[(i, order[j])]),
    ))
}

/// Ascending eigenvalues of a real symmetric matrix (no vectors).
pub fn eigvalsh_real(m: &RealMatrix) -> Vec<f64> {
    let (mut values, _) = jacobi::symmetric_jacobi(m, false);
    values.sort_by(f64::total_cmp);
    values
}

/// Trace norm `‖A‖₁ = tr √(A†A)`, the sum of singular values.
pub fn trace_norm(m: &ComplexMatrix) -> Result<f64> {
    if !m.is_square() {
        return Err(Error::invalid(format!(
            "trace norm needs a square matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    m.check_finite()?;
    let gram = HermitianMatrix::from_hermitian_part(&(&m.adjoint() * m));
    let eig = eigh(&gram)?;
    Ok(eig.eigenvalues.iter().map(|&l| l.max(0.0).sqrt()).sum())
}

/// Kronecker product `a ⊗ b`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    a.check_finite()?;
    b.check_finite()?;
    Ok(a.kron(b))
}

/// Rank-revealing factor `S` with `S†S = G`.
///
/// Eigen-directions with eigenvalue below `rank_tol · λ_max` are dropped, so `S`
/// has one row per retained direction.
pub fn psd_factor(g: &HermitianMatrix, rank_tol: f64) -> Result<ComplexMatrix> {
    let eig = eigh(g)?;
    let cutoff = rank_tol * eig.max_eigenvalue().abs().max(f64::MIN_POSITIVE);
    if eig.min_eigenvalue() < -cutoff {
        return Err(Error::NotPositiveSemidefinite {
            min_eigenvalue: eig.min_eigenvalue(),
        });
    }
    let kept: Vec<usize> = (0..eig.dim())
        .filter(|&k| eig.eigenvalues[k] > cutoff)
        .collect();
    let n = g.dim();
    let u = &eig.eigenvectors;
    Ok(ComplexMatrix::from_fn(kept.len(), n, |r, j| {
        let k = kept[r];
        u[(j, k)].conj() * eig.eigenvalues[k].sqrt()
    }))
}
