//! Evolved state of a uniformly accelerated two-level detector.
//!
//! All quantities are dimensionless: proper time in units of the inverse
//! spontaneous-emission rate, `a_inv = ω₀/a` and `z = z·ω₀`.

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{eigh, pauli, ComplexMatrix, HermitianMatrix, C64, I};

/// Field vacuum seen by the detector.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Scenario {
    Unbounded,
    /// Perfectly reflecting mirror at distance `z`.
    Bounded {
        z: f64,
    },
}

/// Estimable parameters.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Param {
    Theta,
    Phi,
    AInv,
}

impl Param {
    pub const ALL: [Param; 3] = [Param::Theta, Param::Phi, Param::AInv];

    pub fn name(self) -> &'static str {
        match self {
            Param::Theta => "theta",
            Param::Phi => "phi",
            Param::AInv => "a_inv",
        }
    }
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DetectorParams {
    pub theta: f64,
    pub phi: f64,
    pub a_inv: f64,
    pub tau: f64,
    pub scenario: Scenario,
    /// Renormalized gap in units of the emission rate; a configuration constant.
    pub omega_eff: f64,
}

impl DetectorParams {
    pub fn new(theta: f64, phi: f64, a_inv: f64, tau: f64, scenario: Scenario) -> Result<Self> {
        let p = DetectorParams {
            theta,
            phi,
            a_inv,
            tau,
            scenario,
            omega_eff: 0.0,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn unbounded(theta: f64, phi: f64, a_inv: f64, tau: f64) -> Result<Self> {
        Self::new(theta, phi, a_inv, tau, Scenario::Unbounded)
    }

    pub fn bounded(theta: f64, phi: f64, a_inv: f64, tau: f64, z: f64) -> Result<Self> {
        Self::new(theta, phi, a_inv, tau, Scenario::Bounded { z })
    }

    pub fn with_omega_eff(mut self, omega_eff: f64) -> Result<Self> {
        self.omega_eff = omega_eff;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.theta, self.phi, self.a_inv, self.tau, self.omega_eff]
            .iter()
            .all(|x| x.is_finite());
        if !finite {
            return Err(Error::invalid("detector parameters must be finite"));
        }
        if !(self.theta > 0.0 && self.theta < PI) {
            return Err(Error::invalid(format!(
                "theta = {} must lie strictly inside (0, π)",
                self.theta
            )));
        }
        if self.a_inv <= 0.0 {
            return Err(Error::invalid(format!(
                "a_inv = {} must be positive",
                self.a_inv
            )));
        }
        if self.tau <= 0.0 {
            return Err(Error::invalid(format!(
                "tau = {} must be positive",
                self.tau
            )));
        }
        if self.omega_eff < 0.0 {
            return Err(Error::invalid("omega_eff must be non-negative"));
        }
        if let Scenario::Bounded { z } = self.scenario {
            if !(z.is_finite() && z > 0.0) {
                return Err(Error::invalid(format!(
                    "bounded scenario needs z > 0, got {z}"
                )));
            }
        }
        Ok(())
    }

    pub fn get(&self, p: Param) -> f64 {
        match p {
            Param::Theta => self.theta,
            Param::Phi => self.phi,
            Param::AInv => self.a_inv,
        }
    }

    /// Copy with one estimable parameter replaced (unvalidated).
    pub fn with(&self, p: Param, value: f64) -> Self {
        let mut out = *self;
        match p {
            Param::Theta => out.theta = value,
            Param::Phi => out.phi = value,
            Param::AInv => out.a_inv = value,
        }
        out
    }
}

/// Dissipator coefficients `A` and `B` in units of the emission rate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct KossakowskiCoeffs {
    pub a_coef: f64,
    pub b_coef: f64,
}

impl KossakowskiCoeffs {
    /// `B/A`; equals `tanh(π a_inv)` in both scenarios.
    pub fn ratio(&self) -> f64 {
        self.b_coef / self.a_coef
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BlochState {
    pub w1: f64,
    pub w2: f64,
    pub w3: f64,
}

impl BlochState {
    pub fn length(&self) -> f64 {
        (self.w1 * self.w1 + self.w2 * self.w2 + self.w3 * self.w3).sqrt()
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.w1, self.w2, self.w3]
    }
}

/// Mirror correction `1 − sin[2a·asinh(z/a)] / (2z·√(1 + z²/a²))` to both transition rates.
pub fn boundary_factor(a_inv: f64, z: f64) -> Result<f64> {
    if !(a_inv > 0.0 && z > 0.0) || !a_inv.is_finite() || !z.is_finite() {
        return Err(Error::invalid(format!(
            "boundary factor needs a_inv > 0 and z > 0, got ({a_inv}, {z})"
        )));
    }
    let r = z / a_inv;
    let g = 2.0 * a_inv * r.asinh();
    let h = 2.0 * z * (1.0 + r * r).sqrt();
    Ok(1.0 - g.sin() / h)
}

/// Derivative of [`boundary_factor`] with respect to `a_inv`.
fn boundary_factor_da(a_inv: f64, z: f64) -> f64 {
    let r = z / a_inv;
    let root = (1.0 + r * r).sqrt();
    let g = 2.0 * a_inv * r.asinh();
    let h = 2.0 * z * root;
    let dg = 2.0 * r.asinh() - 2.0 * r / root;
    let dh = -2.0 * z * r * r / (a_inv * root);
    -(g.cos() * dg * h - g.sin() * dh) / (h * h)
}

fn coth(x: f64) -> f64 {
    1.0 / x.tanh()
}

/// `(A, dA/da_inv, f)` where `f` is the scenario's rate factor.
fn rate_and_slope(p: &DetectorParams) -> (f64, f64, f64) {
    let x = PI * p.a_inv;
    let c = coth(x);
    let dc = -PI / (x.sinh() * x.sinh());
    let (f, df) = match p.scenario {
        Scenario::Unbounded => (1.0, 0.0),
        Scenario::Bounded { z } => (
            boundary_factor(p.a_inv, z).expect("validated parameters"),
            boundary_factor_da(p.a_inv, z),
        ),
    };
    (0.25 * f * c, 0.25 * (df * c + f * dc), f)
}

pub fn kossakowski(p: &DetectorParams) -> Result<KossakowskiCoeffs> {
    p.validate()?;
    let (a, _, f) = rate_and_slope(p);
    Ok(KossakowskiCoeffs {
        a_coef: a,
        b_coef: 0.25 * f,
    })
}

/// Closed-form Bloch vector at proper time `tau`.
pub fn bloch_evolve(p: &DetectorParams) -> Result<BlochState> {
    p.validate()?;
    let (a, _, _) = rate_and_slope(p);
    let t = (PI * p.a_inv).tanh();
    let e2 = (-2.0 * a * p.tau).exp();
    let e4 = (-4.0 * a * p.tau).exp();
    let relaxed = -(-4.0 * a * p.tau).exp_m1();
    let psi = p.omega_eff * p.tau + p.phi;
    let (st, ct) = p.theta.sin_cos();
    Ok(BlochState {
        w1: st * psi.cos() * e2,
        w2: st * psi.sin() * e2,
        w3: ct * e4 - t * relaxed,
    })
}

/// `ρ = (I + Σ w_j σ_j)/2`.
pub fn density_matrix(b: &BlochState) -> Result<HermitianMatrix> {
    let len = b.length();
    if !len.is_finite() || len > 1.0 + 1e-12 {
        return Err(Error::Unphysical { length: len });
    }
    Ok(bloch_operator(b.as_array(), 0.5))
}

/// `c·I + Σ w_j σ_j / 2`, the Hermitian operator for a Bloch-type vector.
fn bloch_operator(w: [f64; 3], identity_coef: f64) -> HermitianMatrix {
    let m = ComplexMatrix::from_fn(2, 2, |i, j| match (i, j) {
        (0, 0) => C64::new(identity_coef + 0.5 * w[2], 0.0),
        (1, 1) => C64::new(identity_coef - 0.5 * w[2], 0.0),
        (0, 1) => C64::new(0.5 * w[0], -0.5 * w[1]),
        _ => C64::new(0.5 * w[0], 0.5 * w[1]),
    });
    HermitianMatrix::from_hermitian_part(&m)
}

/// Quantum statistical model: `ρ` plus `∂ρ/∂θ_u` for an ordered parameter subset.
#[derive(Clone, Debug)]
pub struct StatModel {
    pub rho: HermitianMatrix,
    pub derivs: Vec<HermitianMatrix>,
    pub param_labels: Vec<Param>,
}

impl StatModel {
    /// Builds a model from raw parts, checking unit trace, positivity and traceless derivatives.
    pub fn from_parts(
        rho: HermitianMatrix,
        derivs: Vec<HermitianMatrix>,
        param_labels: Vec<Param>,
    ) -> Result<Self> {
        if derivs.is_empty() {
            return Err(Error::EmptyParameterSet);
        }
        if derivs.len() != param_labels.len() {
            return Err(Error::invalid("one label per derivative required"));
        }
        if (rho.trace_re() - 1.0).abs() > 1e-12 {
            return Err(Error::invalid(format!(
                "density matrix has trace {}",
                rho.trace_re()
            )));
        }
        let min_eig = eigh(&rho)?.min_eigenvalue();
        if min_eig < -1e-12 {
            return Err(Error::NotPositiveSemidefinite {
                min_eigenvalue: min_eig,
            });
        }
        for d in &derivs {
            if d.dim() != rho.dim() {
                return Err(Error::invalid("derivative dimension mismatch"));
            }
            if d.trace().norm() > 1e-10 {
                return Err(Error::invalid("parameter derivative must be traceless"));
            }
        }
        Ok(StatModel {
            rho,
            derivs,
            param_labels,
        })
    }

    pub fn num_params(&self) -> usize {
        self.derivs.len()
    }

    pub fn dim(&self) -> usize {
        self.rho.dim()
    }

    /// Model with parameter `u` rescaled so that `θ'_u = k_u θ_u`.
    pub fn reparametrized(&self, scale: &[f64]) -> StatModel {
        StatModel {
            rho: self.rho.clone(),
            derivs: self
                .derivs
                .iter()
                .zip(scale)
                .map(|(d, k)| d.scale(1.0 / k))
                .collect(),
            param_labels: self.param_labels.clone(),
        }
    }

    /// Model with parameters reordered by `order` (indices into the current order).
    pub fn permuted(&self, order: &[usize]) -> StatModel {
        StatModel {
            rho: self.rho.clone(),
            derivs: order.iter().map(|&i| self.derivs[i].clone()).collect(),
            param_labels: order.iter().map(|&i| self.param_labels[i]).collect(),
        }
    }
}

/// Analytic `∂w/∂p` of the closed-form Bloch vector.
pub fn bloch_gradient(p: &DetectorParams, param: Param) -> Result<[f64; 3]> {
    p.validate()?;
    let (a, da, _) = rate_and_slope(p);
    let x = PI * p.a_inv;
    let t = x.tanh();
    let tau = p.tau;
    let e2 = (-2.0 * a * tau).exp();
    let e4 = (-4.0 * a * tau).exp();
    let psi = p.omega_eff * tau + p.phi;
    let (st, ct) = p.theta.sin_cos();
    let (sp, cp) = psi.sin_cos();
    Ok(match param {
        Param::Theta => [ct * cp * e2, ct * sp * e2, -st * e4],
        Param::Phi => [-st * sp * e2, st * cp * e2, 0.0],
        Param::AInv => {
            let de2 = -2.0 * tau * da * e2;
            let de4 = -4.0 * tau * da * e4;
            let dt = PI / (x.cosh() * x.cosh());
            let relaxed = -(-4.0 * a * tau).exp_m1();
            [
                st * cp * de2,
                st * sp * de2,
                ct * de4 - dt * relaxed + t * de4,
            ]
        }
    })
}

/// Evolved state and analytic derivatives for the requested parameters.
///
/// The gap `omega_eff` is held fixed when differentiating with respect to `a_inv`.
pub fn stat_model(p: &DetectorParams, params: &[Param]) -> Result<StatModel> {
    if params.is_empty() {
        return Err(Error::EmptyParameterSet);
    }
    for (i, q) in params.iter().enumerate() {
        if params[..i].contains(q) {
            return Err(Error::invalid(format!("parameter {q} listed twice")));
        }
    }
    let rho = density_matrix(&bloch_evolve(p)?)?;
    let derivs = params
        .iter()
        .map(|&q| bloch_gradient(p, q).map(|g| bloch_operator(g, 0.0)))
        .collect::<Result<Vec<_>>>()?;
    StatModel::from_parts(rho, derivs, params.to_vec())
}

/// Right-hand side `−i[H_eff, ρ] + Ł[ρ]` of the master equation in dimensionless time,
/// with `H_eff = Ω σ₃ / 2` and Kossakowski matrix `a_ij = Aδ_ij − iBε_ij3 − Aδ_i3δ_j3`.
pub fn lindblad_rhs(
    rho: &HermitianMatrix,
    c: &KossakowskiCoeffs,
    omega_eff: f64,
) -> Result<ComplexMatrix> {
    if rho.dim() != 2 {
        return Err(Error::invalid("lindblad_rhs is defined for a single qubit"));
    }
    if !(c.a_coef.is_finite() && c.b_coef.is_finite() && omega_eff.is_finite()) {
        return Err(Error::invalid("non-finite coefficients"));
    }
    let s = pauli();
    let r = rho.matrix();
    let h = s[2].scale_real(0.5 * omega_eff);
    let mut out = h.commutator(r).scale(-I);

    let kossakowski = [
        [
            C64::new(c.a_coef, 0.0),
            C64::new(0.0, -c.b_coef),
            C64::new(0.0, 0.0),
        ],
        [
            C64::new(0.0, c.b_coef),
            C64::new(c.a_coef, 0.0),
            C64::new(0.0, 0.0),
        ],
        [C64::new(0.0, 0.0); 3],
    ];
    for (i, row) in kossakowski.iter().enumerate() {
        for (j, &aij) in row.iter().enumerate() {
            if aij == C64::new(0.0, 0.0) {
                continue;
            }
            let sisj = &s[i] * &s[j];
            let jump = &(&(&s[j] * r) * &s[i]).scale_real(2.0) - &(&sisj * r);
            let term = &jump - &(r * &sisj);
            out = &out + &term.scale(aij * 0.5);
        }
    }
    Ok(out)
}
