//! Parameter sweeps over the detector model, crossover detection and CSV/SVG output.

mod config;
mod csv;
mod figures;
mod svg;

pub use config::{
    default_range, BoundKind, FixedValues, OutputPaths, PointConfig, ScenarioKind, SweepConfig,
    SweepRange, SweepVariable,
};
pub use csv::{format_value, parse_csv, to_csv_string, write_csv, write_csv_to, CsvRow};
pub use figures::{figure_config, FIGURE_IDS};
pub use svg::{render_svg, render_svg_to, SvgStyle};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::variational::{detector_report, BoundReport};

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub sweep_value: f64,
    /// One entry per column of the owning [`SweepResult`].
    pub values: Vec<Option<f64>>,
    pub hierarchy_ok: bool,
    pub solver_failure: bool,
    /// Why columns are absent, if any are.
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepResult {
    pub variable: SweepVariable,
    pub columns: Vec<String>,
    pub rows: Vec<SweepRow>,
}

impl SweepResult {
    pub fn column_index(&self, name: &str) -> Result<usize> {
        self.columns
            .iter()
            .position(|c| c == name)
            .ok_or_else(|| Error::ColumnAbsent(name.to_string()))
    }

    pub fn column(&self, name: &str) -> Result<Vec<Option<f64>>> {
        let k = self.column_index(name)?;
        Ok(self.rows.iter().map(|r| r.values[k]).collect())
    }

    pub fn solver_failures(&self) -> usize {
        self.rows.iter().filter(|r| r.solver_failure).count()
    }
}

fn row_values(columns: &[String], r: &BoundReport) -> Vec<Option<f64>> {
    let analytic = r.analytic.as_ref().map(|a| &a.values);
    columns
        .iter()
        .map(|c| match c.as_str() {
            "sld" => r.c_sld,
            "rld" => r.c_rld,
            "upper" => r.c_upper,
            "hcrb" => r.c_hcrb,
            "nagaoka" => r.c_nagaoka,
            "analytic_sld" => analytic.map(|a| a.c_sld),
            "analytic_rld" => analytic.map(|a| a.c_rld),
            "analytic_hcrb" => analytic.map(|a| a.c_hcrb),
            "analytic_nagaoka" => analytic.map(|a| a.c_nb),
            _ => None,
        })
        .collect()
}

/// Evaluates every grid point, in parallel on the current rayon pool.
///
/// A point that fails leaves its columns empty and records the error; the sweep
/// itself only fails on an invalid configuration.
pub fn run_sweep(cfg: &SweepConfig) -> Result<SweepResult> {
    cfg.validate()?;
    let columns = cfg.columns();
    let grid = cfg.sweep.grid();
    let rows = grid
        .par_iter()
        .map(|&x| {
            let report = cfg
                .params_at(x)
                .and_then(|p| detector_report(&p, &cfg.params));
            match report {
                Ok(r) => SweepRow {
                    sweep_value: x,
                    values: row_values(&columns, &r),
                    hierarchy_ok: r.hierarchy_ok,
                    solver_failure: r.solver_failure,
                    notes: r.notes,
                },
                Err(e) => SweepRow {
                    sweep_value: x,
                    values: vec![None; columns.len()],
                    hierarchy_ok: true,
                    solver_failure: matches!(e, Error::SolverFailure { .. }),
                    notes: vec![e.to_string()],
                },
            }
        })
        .collect();
    Ok(SweepResult {
        variable: cfg.sweep.variable,
        columns,
        rows,
    })
}

/// Abscissas where `col_a − col_b` changes sign, by linear interpolation
/// between adjacent rows on which both columns are present.
pub fn detect_crossover(result: &SweepResult, col_a: &str, col_b: &str) -> Result<Vec<f64>> {
    let a = result.column(col_a)?;
    let b = result.column(col_b)?;
    let diffs: Vec<Option<f64>> = a.iter().zip(&b).map(|(x, y)| Some((*x)? - (*y)?)).collect();
    let consecutive = diffs.windows(2).any(|w| w[0].is_some() && w[1].is_some());
    if !consecutive {
        let missing = if a.windows(2).any(|w| w[0].is_some() && w[1].is_some()) {
            col_b
        } else {
            col_a
        };
        return Err(Error::ColumnAbsent(missing.to_string()));
    }
    let xs: Vec<f64> = result.rows.iter().map(|r| r.sweep_value).collect();
    let mut out = Vec::new();
    for i in 0..diffs.len().saturating_sub(1) {
        let (Some(d0), Some(d1)) = (diffs[i], diffs[i + 1]) else {
            continue;
        };
        if d0 == 0.0 {
            // an exact touch is reported once, at the row where it happens
            let prev = if i > 0 { diffs[i - 1] } else { None };
            if prev.is_none_or(|p| p != 0.0) && i > 0 {
                out.push(xs[i]);
            }
            continue;
        }
        if d1 != 0.0 && (d0 < 0.0) != (d1 < 0.0) {
            out.push(xs[i] + (xs[i + 1] - xs[i]) * d0 / (d0 - d1));
        }
    }
    Ok(out)
}
