use super::{BlockMatrix, LmiProblem};
use crate::error::{Error, Result};
use crate::linalg::RealMatrix;

/// Rows whose component orthogonal to the earlier rows falls below this
/// (relative to the row norm) are treated as linearly dependent.
const DEPENDENCE_TOL: f64 = 1e-10;

/// Allowed residual `‖E y₀ − d‖ / (1 + ‖d‖)` of the particular solution.
pub const CONSISTENCY_TOL: f64 = 1e-10;

/// Linear equality constraints `E y = d`.
#[derive(Clone, Debug, PartialEq)]
pub struct Equalities {
    pub matrix: RealMatrix,
    pub rhs: Vec<f64>,
}

/// `y = y₀ + N w`, with the columns of `N` an orthonormal basis of `ker E`.
#[derive(Clone, Debug, PartialEq)]
pub struct AffineMap {
    pub y0: Vec<f64>,
    pub basis: RealMatrix,
}

impl AffineMap {
    pub fn identity(n: usize) -> Self {
        AffineMap {
            y0: vec![0.0; n],
            basis: RealMatrix::identity(n),
        }
    }

    pub fn free_dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn recover(&self, w: &[f64]) -> Vec<f64> {
        let nw = self.basis.mat_vec(w);
        self.y0.iter().zip(nw).map(|(a, b)| a + b).collect()
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Removes the components of `v` along the orthonormal `basis`, twice for stability.
/// `t` receives the same updates relative to `coeffs`.
fn project_out(
    v: &mut [f64],
    mut t: Option<&mut Vec<f64>>,
    basis: &[Vec<f64>],
    coeffs: &[Vec<f64>],
) {
    for _ in 0..2 {
        for (k, q) in basis.iter().enumerate() {
            let proj = dot(q, v);
            for (vi, qi) in v.iter_mut().zip(q) {
                *vi -= proj * qi;
            }
            if let Some(t) = t.as_deref_mut() {
                for (ti, ci) in t.iter_mut().zip(&coeffs[k]) {
                    *ti -= proj * ci;
                }
            }
        }
    }
}

/// Replaces `E y = d` by an affine parametrization of its solution set.
///
/// The returned problem has no equalities; its objective omits the constant `cᵀy₀`.
pub fn eliminate_equalities(p: &LmiProblem) -> Result<(LmiProblem, AffineMap)> {
    p.validate()?;
    let m = p.nvars();
    let Some(eq) = &p.equalities else {
        return Ok((p.clone(), AffineMap::identity(m)));
    };
    let k = eq.matrix.rows();

    // modified Gram–Schmidt on the rows, tracking q = Σ t_i e_i
    let mut q_rows: Vec<Vec<f64>> = Vec::new();
    let mut t_rows: Vec<Vec<f64>> = Vec::new();
    for r in 0..k {
        let row = eq.matrix.row(r);
        let s = norm(row);
        if s == 0.0 {
            continue;
        }
        let mut v: Vec<f64> = row.iter().map(|x| x / s).collect();
        let mut t = vec![0.0; k];
        t[r] = 1.0 / s;
        project_out(&mut v, Some(&mut t), &q_rows, &t_rows);
        let nv = norm(&v);
        if nv <= DEPENDENCE_TOL {
            continue;
        }
        v.iter_mut().for_each(|x| *x /= nv);
        t.iter_mut().for_each(|x| *x /= nv);
        q_rows.push(v);
        t_rows.push(t);
    }

    let mut y0 = vec![0.0; m];
    for (q, t) in q_rows.iter().zip(&t_rows) {
        let a = dot(t, &eq.rhs);
        for (yi, qi) in y0.iter_mut().zip(q) {
            *yi += a * qi;
        }
    }
    let ey = eq.matrix.mat_vec(&y0);
    let residual = ey
        .iter()
        .zip(&eq.rhs)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt();
    if residual > CONSISTENCY_TOL * (1.0 + norm(&eq.rhs)) {
        return Err(Error::InconsistentEqualities { residual });
    }

    let rank = q_rows.len();
    let mut null: Vec<Vec<f64>> = Vec::new();
    for j in 0..m {
        if null.len() == m - rank {
            break;
        }
        let mut v = vec![0.0; m];
        v[j] = 1.0;
        let mut all = q_rows.clone();
        all.extend(null.iter().cloned());
        project_out(&mut v, None, &all, &[]);
        let nv = norm(&v);
        if nv <= 1e-8 {
            continue;
        }
        v.iter_mut().for_each(|x| *x /= nv);
        null.push(v);
    }
    let basis = RealMatrix::from_columns(m, &null);
    let map = AffineMap { y0, basis };

    let mut f0 = p.f0.clone();
    for (yi, fi) in map.y0.iter().zip(&p.fi) {
        if *yi != 0.0 {
            f0.axpy(*yi, fi);
        }
    }
    let mut fi = Vec::with_capacity(null.len());
    let mut objective = Vec::with_capacity(null.len());
    for col in &null {
        let mut f = BlockMatrix::zeros(&p.f0.sizes());
        for (ni, g) in col.iter().zip(&p.fi) {
            if *ni != 0.0 {
                f.axpy(*ni, g);
            }
        }
        fi.push(f);
        objective.push(dot(col, &p.objective));
    }
    let reduced = LmiProblem {
        objective,
        f0,
        fi,
        equalities: None,
        blocks: p.blocks.clone(),
    };
    Ok((reduced, map))
}
