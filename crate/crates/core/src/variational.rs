//! Holevo and Nagaoka–Hayashi bounds as semidefinite programs, and the
//! combined [`BoundReport`].
//!
//! Both programs are solved in the whitened parametrization `θ' = J^{1/2} θ`
//! (`J` the SLD information) with weight matrix `J⁻¹`, so the optimum equals the
//! unweighted bound of the original parameters. Without this the `a_inv`
//! direction, whose information can be orders of magnitude smaller than that of
//! `θ` and `φ`, leaves the interior-point method badly conditioned.

use serde::Serialize;

use crate::detector::{stat_model, DetectorParams, Param, Scenario, StatModel};
use crate::error::{Error, Result};
use crate::fisher::{
    analytic_two_param, fisher_bundle, scalar_crbs, AnalyticTwoParam, FisherBundle, MAX_CONDITION,
};
use crate::linalg::{
    eigh, eigh_real, psd_factor, ComplexMatrix, HermitianMatrix, RealMatrix, C64, DEFAULT_RANK_TOL,
};
use crate::sdp::{
    embed_complex, solve, BlockMatrix, LmiProblem, SdpOptions, SdpSolution, SolverStatus,
};

/// Relative tolerance of the hierarchy check in [`BoundReport`].
pub const HIERARCHY_TOL: f64 = 1e-6;

/// Orthonormal basis of Hermitian operators under `⟨A, B⟩ = Tr[AB]`.
#[derive(Clone, Debug)]
pub struct OperatorBasis {
    pub elements: Vec<HermitianMatrix>,
}

impl OperatorBasis {
    /// `{I, σ₁, σ₂, σ₃}/√2`.
    pub fn pauli() -> Self {
        let [s1, s2, s3] = crate::linalg::pauli();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let elements = [ComplexMatrix::identity(2), s1, s2, s3]
            .iter()
            .map(|m| HermitianMatrix::from_hermitian_part(&m.scale_real(r)))
            .collect();
        OperatorBasis { elements }
    }

    /// Pauli basis for qubits, otherwise diagonal units plus symmetric and
    /// antisymmetric off-diagonal pairs.
    pub fn for_dim(n: usize) -> Self {
        if n == 2 {
            return Self::pauli();
        }
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let mut elements = Vec::with_capacity(n * n);
        for i in 0..n {
            elements.push(HermitianMatrix::from_hermitian_part(
                &ComplexMatrix::from_fn(n, n, |a, b| {
                    if a == i && b == i {
                        C64::new(1.0, 0.0)
                    } else {
                        C64::new(0.0, 0.0)
                    }
                }),
            ));
        }
        for i in 0..n {
            for j in i + 1..n {
                let sym = ComplexMatrix::from_fn(n, n, |a, b| match (a, b) {
                    _ if (a, b) == (i, j) || (a, b) == (j, i) => C64::new(r, 0.0),
                    _ => C64::new(0.0, 0.0),
                });
                let anti = ComplexMatrix::from_fn(n, n, |a, b| match (a, b) {
                    _ if (a, b) == (i, j) => C64::new(0.0, -r),
                    _ if (a, b) == (j, i) => C64::new(0.0, r),
                    _ => C64::new(0.0, 0.0),
                });
                elements.push(HermitianMatrix::from_hermitian_part(&sym));
                elements.push(HermitianMatrix::from_hermitian_part(&anti));
            }
        }
        OperatorBasis { elements }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// `Σ_k c_k E_k`.
    pub fn combine(&self, coeffs: &[f64]) -> HermitianMatrix {
        let n = self.elements[0].dim();
        let mut m = ComplexMatrix::zeros(n, n);
        for (c, e) in coeffs.iter().zip(&self.elements) {
            m = &m + &e.scale_real(*c);
        }
        HermitianMatrix::from_hermitian_part(&m)
    }
}

/// Data shared by the Holevo and Nagaoka–Hayashi programs.
#[derive(Clone, Debug)]
pub struct HolevoProblem {
    pub model: StatModel,
    pub basis: OperatorBasis,
    /// `G_kl = Tr[ρ E_k E_l]`.
    pub gram: HermitianMatrix,
    /// `S` with `S†S = G`.
    pub gram_factor: ComplexMatrix,
}

impl HolevoProblem {
    /// Checks that the `d(d+1)` unbiasedness constraints have full row rank.
    pub fn new(model: &StatModel) -> Result<Self> {
        let n = model.dim();
        let basis = OperatorBasis::for_dim(n);
        let nb = basis.len();
        let rho = model.rho.matrix();
        let gram = HermitianMatrix::from_hermitian_part(&ComplexMatrix::from_fn(nb, nb, |k, l| {
            (rho * basis.elements[k].matrix()).trace_product(basis.elements[l].matrix())
        }));
        let gram_factor = psd_factor(&gram, DEFAULT_RANK_TOL)?;

        let rows = unbiasedness_rows(model, &basis);
        let aat = RealMatrix::from_fn(rows.len(), rows.len(), |i, j| {
            rows[i].iter().zip(&rows[j]).map(|(a, b)| a * b).sum()
        });
        let vals = crate::linalg::eigvalsh_real(&aat);
        let (lo, hi) = (vals[0], vals[vals.len() - 1]);
        if lo <= 1e-20 * hi {
            return Err(Error::SingularInformation {
                condition: if lo <= 0.0 { f64::INFINITY } else { hi / lo },
            });
        }
        Ok(HolevoProblem {
            model: model.clone(),
            basis,
            gram,
            gram_factor,
        })
    }

    pub fn num_params(&self) -> usize {
        self.model.num_params()
    }
}

/// Rows `(Tr[ρE_k])_k` and `(Tr[E_k ∂_vρ])_k` for `v = 1..d`.
fn unbiasedness_rows(model: &StatModel, basis: &OperatorBasis) -> Vec<Vec<f64>> {
    let mut rows = vec![basis
        .elements
        .iter()
        .map(|e| model.rho.trace_product(e).re)
        .collect::<Vec<_>>()];
    for d in &model.derivs {
        rows.push(
            basis
                .elements
                .iter()
                .map(|e| e.trace_product(d).re)
                .collect(),
        );
    }
    rows
}

/// Equalities `Σ_k x_uk Tr[ρE_k] = 0`, `Σ_k x_uk Tr[E_k ∂_vρ] = δ_uv` over the
/// variables `x_uk` located at `offset + u·nb + k`.
fn unbiasedness_equalities(
    model: &StatModel,
    basis: &OperatorBasis,
    nvars: usize,
    offset: usize,
) -> (RealMatrix, Vec<f64>) {
    let d = model.num_params();
    let nb = basis.len();
    let rows = unbiasedness_rows(model, basis);
    let mut e = RealMatrix::zeros(d * (d + 1), nvars);
    let mut rhs = vec![0.0; d * (d + 1)];
    for u in 0..d {
        for (r, row) in rows.iter().enumerate() {
            let i = u * (d + 1) + r;
            for k in 0..nb {
                e[(i, offset + u * nb + k)] = row[k];
            }
            if r >= 1 && r - 1 == u {
                rhs[i] = 1.0;
            }
        }
    }
    (e, rhs)
}

/// Real embedding of a linear family of Hermitian matrices as one LMI block.
fn embedded_lmi(c: Vec<f64>, g0: &ComplexMatrix, gi: &[ComplexMatrix]) -> Result<LmiProblem> {
    let f0 = BlockMatrix::single(embed_complex(g0))?;
    let fi = gi
        .iter()
        .map(|g| BlockMatrix::single(embed_complex(g)))
        .collect::<Result<Vec<_>>>()?;
    LmiProblem::new(c, f0, fi)?.with_trace_scales(&[0.5])
}

/// Exponent `a` of the partial whitening `θ' = J^a θ`.
///
/// Full whitening (`a = 1/2`) moves the whole spread of `J` into the objective
/// weight `J^{-2a}`; splitting it between constraints and objective keeps both
/// moderately conditioned when one direction is nearly unidentifiable.
const WHITENING_EXPONENT: f64 = 0.3;

/// Reparametrization `θ' = J^a θ` applied before the SDPs.
struct Conditioning {
    /// `J^{-a}`; maps derivatives `∂' = J^{-a} ∂` and observables `X = J^{-a} X'`.
    t_inv: RealMatrix,
    /// `J^{-2a} / scale`, so the transformed objective times `scale` equals the original one.
    weight: RealMatrix,
    /// Largest eigenvalue of `J^{-2a}`.
    scale: f64,
}

impl Conditioning {
    fn new(f: &FisherBundle) -> Result<Self> {
        let (vals, vecs) = eigh_real(f.j_sld.matrix())?;
        let (lo, hi) = (vals[0], vals[vals.len() - 1]);
        if lo <= 0.0 || hi / lo >= MAX_CONDITION {
            return Err(Error::SingularInformation {
                condition: if lo <= 0.0 { f64::INFINITY } else { hi / lo },
            });
        }
        let spectral = |g: &dyn Fn(f64) -> f64| {
            let diag: Vec<f64> = vals.iter().map(|&l| g(l)).collect();
            (&(&vecs * &RealMatrix::diag(&diag)) * &vecs.transpose()).symmetric_part()
        };
        let a = WHITENING_EXPONENT;
        let scale = vals.iter().map(|&l| l.powf(-2.0 * a)).fold(0.0, f64::max);
        Ok(Conditioning {
            t_inv: spectral(&|l| l.powf(-a)),
            weight: spectral(&|l| l.powf(-2.0 * a) / scale),
            scale,
        })
    }

    fn transform_model(&self, m: &StatModel) -> StatModel {
        StatModel {
            rho: m.rho.clone(),
            derivs: self.mix(&m.derivs),
            param_labels: m.param_labels.clone(),
        }
    }

    /// `A'_u = Σ_v T⁻¹_uv A_v`.
    fn mix(&self, ops: &[HermitianMatrix]) -> Vec<HermitianMatrix> {
        let d = ops.len();
        (0..d)
            .map(|u| {
                let n = ops[0].dim();
                let mut acc = ComplexMatrix::zeros(n, n);
                for (v, op) in ops.iter().enumerate() {
                    acc = &acc + &op.scale_real(self.t_inv[(u, v)]);
                }
                HermitianMatrix::from_hermitian_part(&acc)
            })
            .collect()
    }
}

/// Relative gap and residuals at which a stalled solve is still accepted.
///
/// Near the optimum of the degenerate Nagaoka–Hayashi programs the Schur system
/// loses rank and the solver cannot always certify the 1e-9 default; iterates
/// this close are kept. The primal iterate is feasible, so the value is an upper
/// bound on the exact optimum.
pub const REDUCED_ACCURACY_TOL: f64 = 1e-7;

fn accept_solution(sol: &SdpSolution, what: &str, d: usize) -> Result<()> {
    let scale = 1.0 + sol.objective_value.abs();
    let near_optimal = matches!(
        sol.status,
        SolverStatus::NumericalFailure | SolverStatus::MaxIterations
    ) && sol.duality_gap <= REDUCED_ACCURACY_TOL * scale
        && sol.primal_infeasibility <= REDUCED_ACCURACY_TOL
        && sol.dual_infeasibility <= REDUCED_ACCURACY_TOL;
    if sol.status == SolverStatus::Optimal || near_optimal {
        Ok(())
    } else {
        Err(Error::SolverFailure {
            status: sol.status,
            detail: format!(
                "{what} with {d} parameters, final gap {:.3e}",
                sol.duality_gap
            ),
        })
    }
}

/// Holevo bound; returns the value and the minimizing observables `X_u`, which
/// satisfy `Tr[ρX_u] = 0` and `Tr[X_u ∂_vρ] = δ_uv`.
pub fn hcrb(model: &StatModel) -> Result<(f64, Vec<HermitianMatrix>)> {
    let cond = Conditioning::new(&fisher_bundle(model)?)?;
    let hp = HolevoProblem::new(&cond.transform_model(model))?;
    let (value, xs) = weighted_hcrb(&hp, &cond.weight)?;
    Ok((value * cond.scale, cond.mix(&xs)))
}

/// `min tr(W V)` s.t. `[[V, Y†], [Y, I]] ⪰ 0`, `Y = S xᵀ`, `x` unbiased.
fn weighted_hcrb(hp: &HolevoProblem, weights: &RealMatrix) -> Result<(f64, Vec<HermitianMatrix>)> {
    let d = hp.num_params();
    let nb = hp.basis.len();
    let s = &hp.gram_factor;
    let r = s.rows();
    let size = d + r;
    let nx = d * nb;
    let v_index: Vec<(usize, usize)> = (0..d).flat_map(|i| (i..d).map(move |j| (i, j))).collect();
    let nvars = nx + v_index.len();

    let mut g0 = ComplexMatrix::zeros(size, size);
    g0.set_block(d, d, &ComplexMatrix::identity(r));
    let mut gi = Vec::with_capacity(nvars);
    let mut c = Vec::with_capacity(nvars);
    for u in 0..d {
        for kk in 0..nb {
            let mut g = ComplexMatrix::zeros(size, size);
            for a in 0..r {
                let sv = s[(a, kk)];
                g[(d + a, u)] = sv;
                g[(u, d + a)] = sv.conj();
            }
            gi.push(g);
            c.push(0.0);
        }
    }
    for &(i, j) in &v_index {
        let mut g = ComplexMatrix::zeros(size, size);
        g[(i, j)] = C64::new(1.0, 0.0);
        g[(j, i)] = C64::new(1.0, 0.0);
        gi.push(g);
        c.push(if i == j {
            weights[(i, i)]
        } else {
            2.0 * weights[(i, j)]
        });
    }
    let (e, rhs) = unbiasedness_equalities(&hp.model, &hp.basis, nvars, 0);
    let problem = embedded_lmi(c, &g0, &gi)?.with_equalities(e, rhs)?;
    let sol = solve(&problem, &SdpOptions::default())?;
    accept_solution(&sol, "Holevo program", d)?;
    let xs = (0..d)
        .map(|u| hp.basis.combine(&sol.y[u * nb..(u + 1) * nb]))
        .collect();
    Ok((sol.objective_value, xs))
}

/// Nagaoka–Hayashi bound (the Nagaoka bound when `d = 2`).
pub fn nagaoka_hayashi(model: &StatModel) -> Result<f64> {
    nagaoka_hayashi_with_minimizer(model).map(|(v, _)| v)
}

/// Nagaoka–Hayashi bound together with the minimizing unbiased observables `X_u`.
pub fn nagaoka_hayashi_with_minimizer(model: &StatModel) -> Result<(f64, Vec<HermitianMatrix>)> {
    if model.num_params() < 2 {
        return Err(Error::invalid(
            "the Nagaoka–Hayashi bound needs at least two parameters",
        ));
    }
    let cond = Conditioning::new(&fisher_bundle(model)?)?;
    let hp = HolevoProblem::new(&cond.transform_model(model))?;
    let (value, xs) = weighted_nagaoka_hayashi(&hp, &cond.weight)?;
    Ok((value * cond.scale, cond.mix(&xs)))
}

/// `min Tr[(W ⊗ ρ) 𝕃]` s.t. `[[𝕃, X], [X†, I_n]] ⪰ 0` with `X` the stacked
/// `X_u` and `𝕃_vu = 𝕃_uv` imposed by parametrizing only `u ≤ v`.
fn weighted_nagaoka_hayashi(
    hp: &HolevoProblem,
    weights: &RealMatrix,
) -> Result<(f64, Vec<HermitianMatrix>)> {
    let d = hp.num_params();
    let n = hp.model.dim();
    let nb = hp.basis.len();
    let size = (d + 1) * n;
    let nx = d * nb;
    let l_index: Vec<(usize, usize)> = (0..d).flat_map(|i| (i..d).map(move |j| (i, j))).collect();
    let nvars = nx + l_index.len() * nb;
    let rho_e: Vec<f64> = hp
        .basis
        .elements
        .iter()
        .map(|e| hp.model.rho.trace_product(e).re)
        .collect();

    let mut g0 = ComplexMatrix::zeros(size, size);
    g0.set_block(d * n, d * n, &ComplexMatrix::identity(n));
    let mut gi = Vec::with_capacity(nvars);
    let mut c = Vec::with_capacity(nvars);
    for u in 0..d {
        for e in &hp.basis.elements {
            let mut g = ComplexMatrix::zeros(size, size);
            g.set_block(u * n, d * n, e.matrix());
            g.set_block(d * n, u * n, e.matrix());
            gi.push(g);
            c.push(0.0);
        }
    }
    for &(u, v) in &l_index {
        for (kk, e) in hp.basis.elements.iter().enumerate() {
            let mut g = ComplexMatrix::zeros(size, size);
            g.set_block(u * n, v * n, e.matrix());
            if u != v {
                g.set_block(v * n, u * n, e.matrix());
            }
            gi.push(g);
            c.push(if u == v {
                weights[(u, u)] * rho_e[kk]
            } else {
                2.0 * weights[(u, v)] * rho_e[kk]
            });
        }
    }
    let (e, rhs) = unbiasedness_equalities(&hp.model, &hp.basis, nvars, 0);
    let problem = embedded_lmi(c, &g0, &gi)?.with_equalities(e, rhs)?;
    let sol = solve(&problem, &SdpOptions::default())?;
    accept_solution(&sol, "Nagaoka–Hayashi program", d)?;
    let xs = (0..d)
        .map(|u| hp.basis.combine(&sol.y[u * nb..(u + 1) * nb]))
        .collect();
    Ok((sol.objective_value, xs))
}

/// `Z_uv = Tr[ρ X_u X_v]`.
pub fn z_matrix(rho: &HermitianMatrix, xs: &[HermitianMatrix]) -> ComplexMatrix {
    let d = xs.len();
    ComplexMatrix::from_fn(d, d, |u, v| {
        (rho.matrix() * xs[u].matrix()).trace_product(xs[v].matrix())
    })
}

/// `tr Re Z + ‖Im Z‖₁`, the Holevo functional at fixed observables.
pub fn holevo_functional(rho: &HermitianMatrix, xs: &[HermitianMatrix]) -> Result<f64> {
    let z = z_matrix(rho, xs);
    let d = z.rows();
    let i_im = HermitianMatrix::from_hermitian_part(&ComplexMatrix::from_fn(d, d, |u, v| {
        C64::new(0.0, z[(u, v)].im)
    }));
    let im: f64 = eigh(&i_im)?.eigenvalues.iter().map(|l| l.abs()).sum();
    Ok(z.trace().re + im)
}

/// `Tr[ρX₁²] + Tr[ρX₂²] + TrAbs[ρ[X₁, X₂]]`, the two-parameter Nagaoka functional.
pub fn nagaoka_functional(
    rho: &HermitianMatrix,
    x1: &HermitianMatrix,
    x2: &HermitianMatrix,
) -> Result<f64> {
    let r = rho.matrix();
    let a = (r * x1.matrix()).trace_product(x1.matrix()).re
        + (r * x2.matrix()).trace_product(x2.matrix()).re;
    // ρ[X₁, X₂] is not Hermitian; TrAbs sums the moduli of its eigenvalues
    let m = r * &x1.commutator(x2.matrix());
    Ok(a + eigenvalue_abs_sum(&m))
}

/// Sum of the moduli of the eigenvalues of a 1×1 or 2×2 complex matrix.
fn eigenvalue_abs_sum(m: &ComplexMatrix) -> f64 {
    match m.rows() {
        1 => m[(0, 0)].norm(),
        2 => {
            let tr = m[(0, 0)] + m[(1, 1)];
            let det = m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)];
            let disc = (tr * tr - det * 4.0).sqrt();
            ((tr + disc) * 0.5).norm() + ((tr - disc) * 0.5).norm()
        }
        _ => unimplemented!("TrAbs is only needed for qubit observables"),
    }
}

/// Closed-form values next to the numerical ones, for `(θ, φ)` in the unbounded scenario.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AnalyticComparison {
    pub values: AnalyticTwoParam,
    pub rel_dev_sld: Option<f64>,
    pub rel_dev_rld: Option<f64>,
    pub rel_dev_hcrb: Option<f64>,
    pub rel_dev_nagaoka: Option<f64>,
    /// `|D_θφ(closed form) − D_θφ(direct)|`.
    pub uhlmann_abs_dev: f64,
    pub uhlmann_agrees: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundReport {
    pub params: Vec<Param>,
    pub c_sld: Option<f64>,
    pub c_rld: Option<f64>,
    pub c_upper: Option<f64>,
    pub c_hcrb: Option<f64>,
    pub c_nagaoka: Option<f64>,
    /// Evaluated over the bounds that are present.
    pub hierarchy_ok: bool,
    pub tolerance: f64,
    pub solver_failure: bool,
    pub analytic: Option<AnalyticComparison>,
    pub notes: Vec<String>,
}

impl BoundReport {
    fn empty(params: Vec<Param>) -> Self {
        BoundReport {
            params,
            c_sld: None,
            c_rld: None,
            c_upper: None,
            c_hcrb: None,
            c_nagaoka: None,
            hierarchy_ok: true,
            tolerance: HIERARCHY_TOL,
            solver_failure: false,
            analytic: None,
            notes: Vec::new(),
        }
    }

    /// Checks `C^N ≥ C^H ≥ max(C^S, C^R)`, `C^S ≤ C^H ≤ C^U ≤ 2C^S` among present values.
    pub fn check_hierarchy(&self) -> bool {
        let present = [
            self.c_sld,
            self.c_rld,
            self.c_upper,
            self.c_hcrb,
            self.c_nagaoka,
        ];
        let scale = present
            .iter()
            .flatten()
            .fold(0.0_f64, |a, b| a.max(b.abs()));
        let tol = self.tolerance * scale.max(1.0);
        let le = |a: Option<f64>, b: Option<f64>| match (a, b) {
            (Some(a), Some(b)) => a <= b + tol,
            _ => true,
        };
        le(self.c_hcrb, self.c_nagaoka)
            && le(self.c_sld, self.c_hcrb)
            && le(self.c_rld, self.c_hcrb)
            && le(self.c_hcrb, self.c_upper)
            && le(self.c_sld, self.c_upper)
            && le(self.c_upper, self.c_sld.map(|s| 2.0 * s))
    }
}

fn record_failure(report: &mut BoundReport, what: &str, err: Error) -> Result<()> {
    match err {
        Error::SolverFailure { .. } => {
            report.solver_failure = true;
            report.notes.push(format!("{what}: {err}"));
            Ok(())
        }
        Error::SingularInformation { .. } => {
            report.notes.push(format!("{what}: {err}"));
            Ok(())
        }
        other => Err(other),
    }
}

/// All scalar bounds for a model. Unidentifiable points and solver failures
/// leave the affected fields absent and add a note.
pub fn bound_report(model: &StatModel) -> Result<BoundReport> {
    let mut report = BoundReport::empty(model.param_labels.clone());
    let f = fisher_bundle(model)?;
    match scalar_crbs(&f) {
        Ok(c) => {
            report.c_sld = Some(c.c_sld);
            report.c_rld = Some(c.c_rld);
            report.c_upper = Some(c.c_upper);
        }
        Err(e) => record_failure(&mut report, "information matrices", e)?,
    }

    if model.num_params() == 1 {
        // single parameter: every bound collapses to 1/J^S
        report.c_hcrb = report.c_sld;
        report.c_nagaoka = report.c_sld;
        report
            .notes
            .push("single parameter: Holevo and Nagaoka bounds equal the SLD bound".into());
    } else if report.c_sld.is_some() {
        let (h, nh) = rayon::join(|| hcrb(model), || nagaoka_hayashi(model));
        match h {
            Ok((v, _)) => report.c_hcrb = Some(v),
            Err(e) => record_failure(&mut report, "Holevo bound", e)?,
        }
        match nh {
            Ok(v) => report.c_nagaoka = Some(v),
            Err(e) => record_failure(&mut report, "Nagaoka-Hayashi bound", e)?,
        }
    }
    report.hierarchy_ok = report.check_hierarchy();
    if !report.hierarchy_ok {
        report
            .notes
            .push("bound hierarchy violated beyond tolerance".into());
    }
    Ok(report)
}

fn rel_dev(numeric: Option<f64>, exact: f64) -> Option<f64> {
    numeric.map(|x| ((x - exact) / exact).abs())
}

/// Absolute agreement required between the closed-form and direct Uhlmann curvature.
pub const UHLMANN_AGREEMENT_TOL: f64 = 1e-9;

/// [`bound_report`] for the detector model; adds the closed-form comparison when
/// the scenario is unbounded and the parameters are `(θ, φ)`.
pub fn detector_report(p: &DetectorParams, params: &[Param]) -> Result<BoundReport> {
    let model = stat_model(p, params)?;
    let mut report = bound_report(&model)?;
    if matches!(p.scenario, Scenario::Unbounded) && params == [Param::Theta, Param::Phi] {
        let a = analytic_two_param(p)?;
        let direct = fisher_bundle(&model)?.uhlmann[(0, 1)];
        let dev = (a.uhlmann[0][1] - direct).abs();
        report.analytic = Some(AnalyticComparison {
            rel_dev_sld: rel_dev(report.c_sld, a.c_sld),
            rel_dev_rld: rel_dev(report.c_rld, a.c_rld),
            rel_dev_hcrb: rel_dev(report.c_hcrb, a.c_hcrb),
            rel_dev_nagaoka: rel_dev(report.c_nagaoka, a.c_nb),
            uhlmann_abs_dev: dev,
            uhlmann_agrees: dev <= UHLMANN_AGREEMENT_TOL * (1.0 + direct.abs()),
            values: a,
        });
    }
    Ok(report)
}
