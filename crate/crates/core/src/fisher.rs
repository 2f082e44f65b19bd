//! Logarithmic-derivative operators, quantum Fisher information matrices and
//! the scalar SLD/RLD Cramér–Rao bounds.

use std::f64::consts::PI;

use serde::Serialize;

use crate::detector::{DetectorParams, Scenario, StatModel};
use crate::error::{Error, Result};
use crate::linalg::{
    eigh, eigh_real, trace_norm, ComplexMatrix, EigenDecomposition, HermitianMatrix, RealMatrix,
    RealSymmetricMatrix, C64,
};

/// Smallest admissible eigenvalue of `ρ` for the logarithmic derivatives to exist.
pub const RANK_TOL: f64 = 1e-12;

/// Information matrices with a condition number above this are treated as singular.
pub const MAX_CONDITION: f64 = 1e12;

#[derive(Clone, Debug)]
pub struct FisherBundle {
    pub slds: Vec<HermitianMatrix>,
    pub rlds: Vec<ComplexMatrix>,
    pub j_sld: RealSymmetricMatrix,
    pub j_rld: HermitianMatrix,
    /// Mean Uhlmann curvature, exactly antisymmetric.
    pub uhlmann: RealMatrix,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ScalarCrbs {
    pub c_sld: f64,
    pub c_rld: f64,
    pub c_upper: f64,
}

fn full_rank_spectrum(m: &StatModel) -> Result<EigenDecomposition> {
    let eig = eigh(&m.rho)?;
    if eig.min_eigenvalue() <= RANK_TOL {
        return Err(Error::RankDeficient {
            min_eigenvalue: eig.min_eigenvalue(),
        });
    }
    Ok(eig)
}

/// Symmetric logarithmic derivatives solving `∂ρ = (Lρ + ρL)/2`.
pub fn sld_operators(m: &StatModel) -> Result<Vec<HermitianMatrix>> {
    let eig = full_rank_spectrum(m)?;
    Ok(slds_from_spectrum(m, &eig))
}

fn slds_from_spectrum(m: &StatModel, eig: &EigenDecomposition) -> Vec<HermitianMatrix> {
    let lam = &eig.eigenvalues;
    m.derivs
        .iter()
        .map(|d| {
            let db = eig.to_eigenbasis(d.matrix());
            let lb = ComplexMatrix::from_fn(lam.len(), lam.len(), |i, j| {
                db[(i, j)] * (2.0 / (lam[i] + lam[j]))
            });
            HermitianMatrix::from_hermitian_part(&eig.from_eigenbasis(&lb))
        })
        .collect()
}

/// Right logarithmic derivatives `L = ρ⁻¹ ∂ρ`.
pub fn rld_operators(m: &StatModel) -> Result<Vec<ComplexMatrix>> {
    let eig = full_rank_spectrum(m)?;
    Ok(rlds_from_spectrum(m, &eig))
}

fn rlds_from_spectrum(m: &StatModel, eig: &EigenDecomposition) -> Vec<ComplexMatrix> {
    let inv = eig.map_spectrum(|l| 1.0 / l);
    m.derivs.iter().map(|d| inv.matrix() * d.matrix()).collect()
}

pub fn fisher_bundle(m: &StatModel) -> Result<FisherBundle> {
    let eig = full_rank_spectrum(m)?;
    let slds = slds_from_spectrum(m, &eig);
    let rlds = rlds_from_spectrum(m, &eig);
    let rho = m.rho.matrix();
    let d = m.num_params();

    let j_sld = RealMatrix::from_fn(d, d, |u, v| {
        0.5 * rho.trace_product(&slds[u].anticommutator(&slds[v])).re
    });
    let j_rld = ComplexMatrix::from_fn(d, d, |u, v| {
        (&rlds[u].adjoint() * rho).trace_product(&rlds[v])
    });

    let mut uhlmann = RealMatrix::zeros(d, d);
    for u in 0..d {
        for v in u + 1..d {
            // −(i/2) Tr[ρ[L_u, L_v]] is real because the trace is purely imaginary
            let t = rho.trace_product(&slds[u].commutator(&slds[v]));
            let val = (C64::new(0.0, -0.5) * t).re;
            uhlmann[(u, v)] = val;
            uhlmann[(v, u)] = -val;
        }
    }

    Ok(FisherBundle {
        slds,
        rlds,
        j_sld: RealSymmetricMatrix::new(j_sld)?,
        j_rld: HermitianMatrix::from_hermitian_part(&j_rld),
        uhlmann,
    })
}

/// Inverse of a real symmetric positive-definite matrix with a condition-number guard.
pub fn invert_information(j: &RealMatrix) -> Result<RealMatrix> {
    let (vals, vecs) = eigh_real(j)?;
    let lo = vals[0];
    let hi = vals[vals.len() - 1];
    if lo <= 0.0 || hi / lo >= MAX_CONDITION {
        let condition = if lo <= 0.0 { f64::INFINITY } else { hi / lo };
        return Err(Error::SingularInformation { condition });
    }
    let inv_diag: Vec<f64> = vals.iter().map(|l| 1.0 / l).collect();
    let inv = &(&vecs * &RealMatrix::diag(&inv_diag)) * &vecs.transpose();
    Ok(inv.symmetric_part())
}

fn invert_hermitian_information(j: &HermitianMatrix) -> Result<ComplexMatrix> {
    let eig = eigh(j)?;
    let lo = eig.min_eigenvalue();
    let hi = eig.max_eigenvalue();
    if lo <= 0.0 || hi / lo >= MAX_CONDITION {
        let condition = if lo <= 0.0 { f64::INFINITY } else { hi / lo };
        return Err(Error::SingularInformation { condition });
    }
    Ok(eig.map_spectrum(|l| 1.0 / l).into_matrix())
}

fn real_to_complex(m: &RealMatrix) -> ComplexMatrix {
    ComplexMatrix::from_fn(m.rows(), m.cols(), |i, j| C64::new(m[(i, j)], 0.0))
}

/// `(C^S, C^R, C^U)`: SLD-CRB `tr J_S⁻¹`, RLD-CRB `tr Re J_R⁻¹ + ‖Im J_R⁻¹‖₁`
/// and the upper bound `C^S + ‖J_S⁻¹ D J_S⁻¹‖₁`.
pub fn scalar_crbs(f: &FisherBundle) -> Result<ScalarCrbs> {
    let js_inv = invert_information(f.j_sld.matrix())?;
    let c_sld = js_inv.trace();

    let jr_inv = invert_hermitian_information(&f.j_rld)?;
    // the imaginary part of a Hermitian matrix is real antisymmetric; i·Im is Hermitian
    // and its |eigenvalues| are the singular values of Im
    let d = jr_inv.rows();
    let i_im = HermitianMatrix::from_hermitian_part(&ComplexMatrix::from_fn(d, d, |u, v| {
        C64::new(0.0, jr_inv[(u, v)].im)
    }));
    let im_norm: f64 = eigh(&i_im)?.eigenvalues.iter().map(|l| l.abs()).sum();
    let c_rld = jr_inv.trace().re + im_norm;

    let sandwich = &(&js_inv * &f.uhlmann) * &js_inv;
    let c_upper = c_sld + trace_norm(&real_to_complex(&sandwich))?;
    Ok(ScalarCrbs {
        c_sld,
        c_rld,
        c_upper,
    })
}

/// Probabilities below this are dropped from the classical Fisher sum.
pub const MIN_PROBABILITY: f64 = 1e-14;

/// Classical Fisher information of the outcome distribution `p_k = Tr[ρ Π_k]`.
pub fn classical_fim(m: &StatModel, povm: &[HermitianMatrix]) -> Result<RealSymmetricMatrix> {
    let n = m.dim();
    if povm.is_empty() || povm.iter().any(|e| e.dim() != n) {
        return Err(Error::invalid(
            "POVM elements must match the system dimension",
        ));
    }
    let mut total = ComplexMatrix::zeros(n, n);
    for e in povm {
        let lo = eigh(e)?.min_eigenvalue();
        if lo < -1e-12 {
            return Err(Error::NotPositiveSemidefinite { min_eigenvalue: lo });
        }
        total = &total + e.matrix();
    }
    let residual = (&total - &ComplexMatrix::identity(n)).frobenius_norm();
    if residual > 1e-10 {
        return Err(Error::IncompletePovm { residual });
    }

    let d = m.num_params();
    let mut f = RealMatrix::zeros(d, d);
    for e in povm {
        let p = m.rho.trace_product(e).re;
        if p <= MIN_PROBABILITY {
            continue;
        }
        let dp: Vec<f64> = m.derivs.iter().map(|dr| dr.trace_product(e).re).collect();
        for u in 0..d {
            for v in 0..d {
                f[(u, v)] += dp[u] * dp[v] / p;
            }
        }
    }
    RealSymmetricMatrix::new(f)
}

/// Which branch of the piecewise closed-form Holevo bound applies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum HcrbBranch {
    /// `C^H = C^R`, when `C^R ≥ (C^S + C^Z)/2`.
    Rld,
    /// `C^H = C^R + S`.
    Corrected,
}

/// Closed-form two-parameter `(θ, φ)` bounds for the unbounded vacuum.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AnalyticTwoParam {
    pub c_sld: f64,
    pub c_rld: f64,
    pub c_hcrb: f64,
    pub c_nb: f64,
    pub c_z: f64,
    pub hcrb_branch: HcrbBranch,
    /// Uhlmann curvature for the ordering `(θ, φ)`.
    pub uhlmann: [[f64; 2]; 2],
}

pub fn analytic_two_param(p: &DetectorParams) -> Result<AnalyticTwoParam> {
    p.validate()?;
    if !matches!(p.scenario, Scenario::Unbounded) {
        return Err(Error::BoundedScenarioUnsupported);
    }
    let (th, a, tau) = (p.theta, p.a_inv, p.tau);
    let pa = PI * a;
    let coth = 1.0 / pa.tanh();
    let tanh = pa.tanh();
    let e = (tau * coth).exp();
    let (s, c) = th.sin_cos();
    let csc = 1.0 / s;
    let csc2 = csc * csc;
    let cos2 = (2.0 * th).cos();
    let (sh2, ch2) = ((2.0 * pa).sinh(), (2.0 * pa).cosh());
    let ch = pa.cosh();

    let lambda1 = (3.0 + cos2) * ch2;
    let lambda2 = 2.0 * e * c * c + s * s + 2.0 * sh2 * c;
    let theta1 = 4.0 * e + 2.0 * cos2 * ch * ch;
    let theta2 = 3.0 * ch2 + 4.0 * sh2 * c - 1.0;
    let lambda = lambda1 + 2.0 * lambda2;
    let big_theta = theta1 + theta2;
    let upsilon1 = coth + (1.0 - e) * c;
    let upsilon2 = tanh * csc;
    let upsilon = upsilon1 * upsilon2 * big_theta;
    let xi = 1.0 + e * csc2;

    let c_sld = (csc2 + big_theta / lambda) * e;
    let c_rld = xi * big_theta / lambda + 2.0 * (upsilon / lambda).abs();

    let lambda3 = (e - 1.0) * tanh * c - 1.0;
    let theta3 = big_theta * e * e * csc2 / lambda;
    let c_z = c_sld + 2.0 * (big_theta * lambda3 * csc / lambda).abs();
    let half = 0.5 * (c_sld + c_z);
    let (c_hcrb, hcrb_branch) = if c_rld >= half {
        (c_rld, HcrbBranch::Rld)
    } else {
        let excess = (half - c_rld).powi(2) / (c_z - c_rld);
        (c_rld + excess, HcrbBranch::Corrected)
    };
    let c_nb = c_sld + 2.0 * theta3.sqrt();

    let delta1 = (-2.0 * tau * coth).exp() * s;
    let delta2 = 1.0 + (1.0 - e) * tanh * c;
    let dd = delta1 * delta2;
    Ok(AnalyticTwoParam {
        c_sld,
        c_rld,
        c_hcrb,
        c_nb,
        c_z,
        hcrb_branch,
        uhlmann: [[0.0, dd], [-dd, 0.0]],
    })
}
