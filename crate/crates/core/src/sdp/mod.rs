//! Dense primal–dual interior-point solver for small linear matrix inequalities.
//!
//! Problems have the form `min cᵀy` subject to `F(y) = F₀ + Σ yᵢ Fᵢ ⪰ 0` and
//! optionally `E y = d`. Equalities are removed by nullspace elimination, then the
//! LMI is solved by an infeasible-start path-following method with the HKM
//! direction and Mehrotra predictor–corrector steps. The dual is
//! `max −⟨F₀, X⟩` subject to `⟨Fᵢ, X⟩ = cᵢ`, `X ⪰ 0`.

mod block;
mod eliminate;
mod embed;

pub use block::BlockMatrix;
pub use eliminate::{eliminate_equalities, AffineMap, Equalities, CONSISTENCY_TOL};
pub use embed::{embed_complex, real_embed};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{cholesky_solve, eigh_real, eigvalsh_real, RealMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SolverStatus {
    Optimal,
    MaxIterations,
    Infeasible,
    NumericalFailure,
}

impl std::fmt::Display for SolverStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            SolverStatus::Optimal => "optimal",
            SolverStatus::MaxIterations => "max-iterations",
            SolverStatus::Infeasible => "infeasible",
            SolverStatus::NumericalFailure => "numerical-failure",
        };
        f.write_str(s)
    }
}

/// Per-block metadata. `trace_scale` is ½ for blocks that are real embeddings of
/// complex ones, so that a trace read through the block is not doubled.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BlockInfo {
    pub size: usize,
    pub trace_scale: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LmiProblem {
    pub objective: Vec<f64>,
    pub f0: BlockMatrix,
    pub fi: Vec<BlockMatrix>,
    pub equalities: Option<Equalities>,
    pub blocks: Vec<BlockInfo>,
}

impl LmiProblem {
    pub fn new(objective: Vec<f64>, f0: BlockMatrix, fi: Vec<BlockMatrix>) -> Result<Self> {
        let blocks = f0
            .sizes()
            .into_iter()
            .map(|size| BlockInfo {
                size,
                trace_scale: 1.0,
            })
            .collect();
        let p = LmiProblem {
            objective,
            f0,
            fi,
            equalities: None,
            blocks,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn with_equalities(mut self, matrix: RealMatrix, rhs: Vec<f64>) -> Result<Self> {
        self.equalities = Some(Equalities { matrix, rhs });
        self.validate()?;
        Ok(self)
    }

    pub fn with_trace_scales(mut self, scales: &[f64]) -> Result<Self> {
        if scales.len() != self.blocks.len() {
            return Err(Error::invalid("one trace scale per block"));
        }
        for (b, &s) in self.blocks.iter_mut().zip(scales) {
            b.trace_scale = s;
        }
        Ok(self)
    }

    pub fn nvars(&self) -> usize {
        self.objective.len()
    }

    pub fn validate(&self) -> Result<()> {
        if self.fi.len() != self.objective.len() {
            return Err(Error::invalid(format!(
                "{} objective coefficients but {} constraint matrices",
                self.objective.len(),
                self.fi.len()
            )));
        }
        if self.objective.iter().any(|c| !c.is_finite()) {
            return Err(Error::invalid("objective has non-finite entries"));
        }
        let sizes = self.f0.sizes();
        if self.fi.iter().any(|f| f.sizes() != sizes) {
            return Err(Error::invalid(
                "constraint matrices disagree on block structure",
            ));
        }
        if self.blocks.iter().map(|b| b.size).collect::<Vec<_>>() != sizes {
            return Err(Error::invalid("block metadata does not match the matrices"));
        }
        if let Some(eq) = &self.equalities {
            if eq.matrix.cols() != self.nvars() || eq.matrix.rows() != eq.rhs.len() {
                return Err(Error::invalid("equality system has the wrong shape"));
            }
            if !eq.matrix.is_finite() || eq.rhs.iter().any(|x| !x.is_finite()) {
                return Err(Error::invalid("equality system has non-finite entries"));
            }
        }
        Ok(())
    }

    /// `F(y) = F₀ + Σ yᵢ Fᵢ`.
    pub fn evaluate(&self, y: &[f64]) -> BlockMatrix {
        let mut f = self.f0.clone();
        for (yi, fi) in y.iter().zip(&self.fi) {
            f.axpy(*yi, fi);
        }
        f
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SdpOptions {
    pub gap_tol: f64,
    /// Relative primal and dual residual required for `Optimal`.
    pub feas_tol: f64,
    pub max_iter: usize,
    pub step_frac: f64,
    /// Record one [`TraceRecord`] per iteration in the solution.
    pub trace: bool,
    /// Also print each trace line to standard error.
    pub trace_stderr: bool,
}

impl Default for SdpOptions {
    fn default() -> Self {
        SdpOptions {
            gap_tol: 1e-9,
            feas_tol: 1e-9,
            max_iter: 200,
            step_frac: 0.98,
            trace: false,
            trace_stderr: false,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TraceRecord {
    pub iteration: usize,
    pub primal_objective: f64,
    pub dual_objective: f64,
    pub gap: f64,
    pub primal_infeasibility: f64,
    pub dual_infeasibility: f64,
    pub primal_step: f64,
    pub dual_step: f64,
}

#[derive(Clone, Debug)]
pub struct SdpSolution {
    pub y: Vec<f64>,
    pub objective_value: f64,
    pub dual_objective: f64,
    pub duality_gap: f64,
    pub iterations: usize,
    pub status: SolverStatus,
    /// Relative residual of `F(y) = Z` at the returned iterate.
    pub primal_infeasibility: f64,
    /// Relative residual of `⟨Fᵢ, X⟩ = cᵢ` at the returned iterate.
    pub dual_infeasibility: f64,
    /// Dual matrix `X` of the final iterate.
    pub dual: BlockMatrix,
    pub trace: Vec<TraceRecord>,
}

/// Solves the LMI problem; non-optimal terminations are reported through `status`.
pub fn solve(p: &LmiProblem, opts: &SdpOptions) -> Result<SdpSolution> {
    let (reduced, map) = eliminate_equalities(p)?;
    let mut sol = solve_reduced(&reduced, opts);
    let y = map.recover(&sol.y);
    let constant: f64 = p.objective.iter().zip(&map.y0).map(|(c, y)| c * y).sum();
    sol.objective_value = p.objective.iter().zip(&y).map(|(c, y)| c * y).sum();
    sol.dual_objective += constant;
    sol.y = y;
    Ok(sol)
}

const REFINEMENT_STEPS: usize = 2;

/// Iterations without improvement of the best merit before giving up.
const STALL_LIMIT: usize = 8;

struct Iterate {
    y: Vec<f64>,
    x: BlockMatrix,
    z: BlockMatrix,
}

struct Direction {
    dy: Vec<f64>,
    dx: BlockMatrix,
    dz: BlockMatrix,
}

/// Largest `α` keeping `M + α ΔM ⪰ 0`, from `λ_min(L⁻¹ ΔM L⁻ᵀ)`.
fn max_step(chol: &BlockMatrix, dm: &BlockMatrix) -> f64 {
    let mut alpha = f64::INFINITY;
    for (l, d) in chol.blocks().iter().zip(dm.blocks()) {
        let linv = l.lower_triangular_inverse();
        let s = &(&linv * d) * &linv.transpose();
        let lo = eigvalsh_real(&s)[0];
        if lo < 0.0 {
            alpha = alpha.min(-1.0 / lo);
        }
    }
    alpha
}

fn inverse_from_cholesky(chol: &BlockMatrix) -> BlockMatrix {
    chol.map(|l| {
        let linv = l.lower_triangular_inverse();
        (&linv.transpose() * &linv).symmetric_part()
    })
}

/// Condition number of the Schur matrix beyond which the Cholesky solve is replaced.
const SCHUR_MAX_CONDITION: f64 = 1e12;

/// Relative cutoff for the eigenvalues kept by the pseudo-inverse.
const SCHUR_EIG_CUTOFF: f64 = 1e-16;

/// Solver for the Schur system `M Δy = r`. Near the optimum of degenerate
/// problems `M` becomes singular; the pseudo-inverse then picks the
/// minimum-norm step.
enum SchurSolver {
    Cholesky(RealMatrix),
    Pseudo { vals: Vec<f64>, vecs: RealMatrix },
}

impl SchurSolver {
    fn new(m: &RealMatrix) -> Option<Self> {
        if let Some(l) = m.cholesky() {
            let diag: Vec<f64> = (0..l.rows()).map(|i| l[(i, i)]).collect();
            let (lo, hi) = diag
                .iter()
                .fold((f64::INFINITY, 0.0_f64), |(a, b), &x| (a.min(x), b.max(x)));
            if lo > 0.0 && (hi / lo).powi(2) < SCHUR_MAX_CONDITION {
                return Some(SchurSolver::Cholesky(l));
            }
        }
        let (vals, vecs) = eigh_real(m).ok()?;
        let top = vals.iter().fold(0.0_f64, |a, &b| a.max(b));
        if top <= 0.0 || !top.is_finite() {
            return None;
        }
        let vals = vals
            .iter()
            .map(|&v| {
                if v > SCHUR_EIG_CUTOFF * top {
                    1.0 / v
                } else {
                    0.0
                }
            })
            .collect();
        Some(SchurSolver::Pseudo { vals, vecs })
    }

    fn solve(&self, b: &[f64]) -> Vec<f64> {
        match self {
            SchurSolver::Cholesky(l) => cholesky_solve(l, b),
            SchurSolver::Pseudo { vals, vecs } => {
                let n = b.len();
                let coef: Vec<f64> = (0..n)
                    .map(|k| vals[k] * (0..n).map(|i| vecs[(i, k)] * b[i]).sum::<f64>())
                    .collect();
                (0..n)
                    .map(|i| (0..n).map(|k| vecs[(i, k)] * coef[k]).sum())
                    .collect()
            }
        }
    }
}

fn solve_reduced(p: &LmiProblem, opts: &SdpOptions) -> SdpSolution {
    let m = p.nvars();
    let sizes = p.f0.sizes();
    let n = p.f0.dim() as f64;
    let c = &p.objective;

    if m == 0 {
        let lo = p.f0.min_eigenvalue();
        let ok = lo >= -1e-9 * (1.0 + p.f0.frobenius_norm());
        return SdpSolution {
            y: vec![],
            objective_value: 0.0,
            dual_objective: 0.0,
            duality_gap: 0.0,
            iterations: 0,
            status: if ok {
                SolverStatus::Optimal
            } else {
                SolverStatus::Infeasible
            },
            primal_infeasibility: 0.0,
            dual_infeasibility: 0.0,
            dual: BlockMatrix::zeros(&sizes),
            trace: vec![],
        };
    }

    let f0_norm = p.f0.frobenius_norm();
    let c_norm = c.iter().map(|x| x * x).sum::<f64>().sqrt();
    let tau0 = 1.0 + f0_norm;
    let xi =
        p.fi.iter()
            .zip(c)
            .map(|(f, ci)| n * (1.0 + ci.abs()) / (1.0 + f.frobenius_norm()))
            .fold(10.0_f64.max(n.sqrt()), f64::max);
    let mut it = Iterate {
        y: vec![0.0; m],
        x: BlockMatrix::scaled_identity(&sizes, xi),
        z: BlockMatrix::scaled_identity(&sizes, tau0),
    };

    let mut trace = Vec::new();
    let mut status = SolverStatus::MaxIterations;
    let mut iterations = 0;
    let (mut last_ap, mut last_ad) = (0.0, 0.0);
    let mut best: Option<(f64, Iterate)> = None;
    let mut since_best = 0;

    for iter in 0..=opts.max_iter {
        iterations = iter;
        let rp: Vec<f64> = (0..m).map(|i| c[i] - p.fi[i].dot(&it.x)).collect();
        let mut rd = p.evaluate(&it.y);
        rd.axpy(-1.0, &it.z);
        let pobj: f64 = c.iter().zip(&it.y).map(|(a, b)| a * b).sum();
        let dobj = -p.f0.dot(&it.x);
        let xz = it.x.dot(&it.z);
        let p_inf = rd.frobenius_norm() / (1.0 + f0_norm);
        let d_inf = rp.iter().map(|x| x * x).sum::<f64>().sqrt() / (1.0 + c_norm);
        let gap = (pobj - dobj).abs();

        let rec = TraceRecord {
            iteration: iter,
            primal_objective: pobj,
            dual_objective: dobj,
            gap,
            primal_infeasibility: p_inf,
            dual_infeasibility: d_inf,
            primal_step: last_ap,
            dual_step: last_ad,
        };
        if opts.trace_stderr {
            eprintln!(
                "sdp iter {:3}  pobj {:+.10e}  dobj {:+.10e}  gap {:.3e}  pinf {:.2e}  dinf {:.2e}",
                iter, pobj, dobj, gap, p_inf, d_inf
            );
        }
        if opts.trace {
            trace.push(rec);
        }

        let scale = 1.0 + pobj.abs();
        if gap <= opts.gap_tol * scale
            && xz <= opts.gap_tol * scale
            && p_inf <= opts.feas_tol
            && d_inf <= opts.feas_tol
        {
            status = SolverStatus::Optimal;
            break;
        }
        // near the end the Schur system loses accuracy; keep the best iterate and
        // stop once it has not improved for a while
        let merit = (gap / scale).max(xz / scale).max(p_inf).max(d_inf);
        if best.as_ref().is_none_or(|(b, _)| merit < *b) {
            best = Some((
                merit,
                Iterate {
                    y: it.y.clone(),
                    x: it.x.clone(),
                    z: it.z.clone(),
                },
            ));
            since_best = 0;
        } else {
            since_best += 1;
            if since_best >= STALL_LIMIT {
                status = SolverStatus::NumericalFailure;
                break;
            }
        }
        // primal infeasibility certificate: X ⪰ 0 with ⟨Fᵢ, X⟩ ≈ 0 and ⟨F₀, X⟩ < 0
        if dobj > 0.0 {
            let ax: f64 =
                p.fi.iter()
                    .map(|f| (f.dot(&it.x) / (1.0 + f.frobenius_norm())).powi(2))
                    .sum::<f64>()
                    .sqrt();
            if dobj > 1e8 * (1.0 + c_norm) && ax / dobj < 1e-8 {
                status = SolverStatus::Infeasible;
                break;
            }
        }
        // dual infeasibility: unbounded primal descent with small residual
        if -pobj > 1e12 * (1.0 + c_norm + f0_norm) && p_inf < 1e-6 {
            status = SolverStatus::Infeasible;
            break;
        }
        if iter == opts.max_iter {
            break;
        }

        let Some(z_chol) = it.z.cholesky() else {
            status = SolverStatus::NumericalFailure;
            break;
        };
        let Some(x_chol) = it.x.cholesky() else {
            status = SolverStatus::NumericalFailure;
            break;
        };
        let zinv = inverse_from_cholesky(&z_chol);

        // Schur complement M_ij = tr(F_i X F_j Z⁻¹) = ⟨A_i, A_j⟩ with A_i = L_z⁻¹ F_i L_x
        let lz_inv = z_chol.map(RealMatrix::lower_triangular_inverse);
        let a: Vec<BlockMatrix> = p.fi.iter().map(|f| lz_inv.mul(f).mul(&x_chol)).collect();
        let mut schur = RealMatrix::zeros(m, m);
        for i in 0..m {
            for j in i..m {
                let v = a[i].dot(&a[j]);
                schur[(i, j)] = v;
                schur[(j, i)] = v;
            }
        }
        let Some(schur_solver) = SchurSolver::new(&schur) else {
            status = SolverStatus::NumericalFailure;
            break;
        };
        let x_rd_zinv = it.x.mul(&rd).mul(&zinv);

        let direction = |rc: &BlockMatrix| -> Direction {
            let mut t = rc.mul(&zinv);
            t.axpy(-1.0, &x_rd_zinv);
            let rhs: Vec<f64> = (0..m).map(|i| p.fi[i].dot(&t) - rp[i]).collect();
            let mut dy = schur_solver.solve(&rhs);
            let mut dz = rd.clone();
            for (d, f) in dy.iter().zip(&p.fi) {
                dz.axpy(*d, f);
            }
            let mut dx = rc.clone();
            dx.axpy(-1.0, &it.x.mul(&dz));
            let mut dx = dx.mul(&zinv).symmetric_part();
            // iterative refinement of ⟨F_i, ΔX⟩ = rp_i against the operator actually applied
            for _ in 0..REFINEMENT_STEPS {
                let r: Vec<f64> = (0..m).map(|i| p.fi[i].dot(&dx) - rp[i]).collect();
                let delta = schur_solver.solve(&r);
                let mut fd = BlockMatrix::zeros(&sizes);
                for (d, f) in delta.iter().zip(&p.fi) {
                    fd.axpy(*d, f);
                }
                for (a, b) in dy.iter_mut().zip(&delta) {
                    *a += b;
                }
                dz.axpy(1.0, &fd);
                dx.axpy(-1.0, &it.x.mul(&fd).mul(&zinv).symmetric_part());
            }
            Direction { dy, dx, dz }
        };

        let mu = xz / n;
        let mut rc = it.x.mul(&it.z).scale(-1.0);
        let pred = direction(&rc);
        let ap = max_step(&z_chol, &pred.dz).min(1.0);
        let ad = max_step(&x_chol, &pred.dx).min(1.0);
        let mut x_aff = it.x.clone();
        x_aff.axpy(ad, &pred.dx);
        let mut z_aff = it.z.clone();
        z_aff.axpy(ap, &pred.dz);
        let mu_aff = x_aff.dot(&z_aff) / n;
        let sigma = (mu_aff / mu).clamp(0.0, 1.0).powi(3);

        rc.axpy(-1.0, &pred.dx.mul(&pred.dz));
        let shift = BlockMatrix::scaled_identity(&sizes, sigma * mu);
        rc.axpy(1.0, &shift);
        let corr = direction(&rc);

        let ap = (opts.step_frac * max_step(&z_chol, &corr.dz)).min(1.0);
        let ad = (opts.step_frac * max_step(&x_chol, &corr.dx)).min(1.0);
        if ap < 1e-12 && ad < 1e-12 {
            status = SolverStatus::NumericalFailure;
            break;
        }
        for (y, d) in it.y.iter_mut().zip(&corr.dy) {
            *y += ap * d;
        }
        it.z.axpy(ap, &corr.dz);
        it.x.axpy(ad, &corr.dx);
        last_ap = ap;
        last_ad = ad;
    }

    if status == SolverStatus::NumericalFailure || status == SolverStatus::MaxIterations {
        if let Some((_, b)) = best {
            it = b;
        }
    }
    let x = it.x;
    let pobj: f64 = c.iter().zip(&it.y).map(|(a, b)| a * b).sum();
    let dobj = -p.f0.dot(&x);
    let mut rd = p.evaluate(&it.y);
    rd.axpy(-1.0, &it.z);
    let rp = (0..m)
        .map(|i| (c[i] - p.fi[i].dot(&x)).powi(2))
        .sum::<f64>()
        .sqrt();
    SdpSolution {
        y: it.y,
        objective_value: pobj,
        dual_objective: dobj,
        duality_gap: (pobj - dobj).abs(),
        iterations,
        status,
        primal_infeasibility: rd.frobenius_norm() / (1.0 + f0_norm),
        dual_infeasibility: rp / (1.0 + c_norm),
        dual: x,
        trace,
    }
}
