use std::f64::consts::FRAC_PI_2;
use std::path::PathBuf;

use super::config::{
    default_range, BoundKind, FixedValues, OutputPaths, ScenarioKind, SweepConfig, SweepVariable,
};
use crate::detector::Param;
use crate::error::{Error, Result};

pub const FIGURE_IDS: [&str; 12] = [
    "1a", "1b", "1c", "2a", "2b", "2c", "3a", "3b", "3c", "4a", "4b", "4c",
];

const FIGURE_POINTS: usize = 100;

/// Built-in sweep for a figure panel such as `"1b"`.
///
/// Figures 1 and 2 use the unbounded detector at θ = π/2, τ = 0.4, ã = 0.2;
/// figure 3 the bounded one at z = 0.5, θ = π/2, τ = 1, ã = 1; figure 4 the
/// bounded one at z = 0.5 with the figure 1 values. Figures 1 and 3 estimate
/// (θ, φ), figures 2 and 4 add ã. Panel a sweeps ã, b sweeps τ, c sweeps θ,
/// over [`default_range`].
pub fn figure_config(id: &str) -> Result<SweepConfig> {
    let unknown = || {
        Error::Range(format!(
            "unknown figure id `{id}`; expected one of {}",
            FIGURE_IDS.join(", ")
        ))
    };
    let mut chars = id.chars();
    let (Some(fig), Some(panel), None) = (chars.next(), chars.next(), chars.next()) else {
        return Err(unknown());
    };
    let (theta, tau, a_inv) = match fig {
        '1' | '2' | '4' => (FRAC_PI_2, 0.4, 0.2),
        '3' => (FRAC_PI_2, 1.0, 1.0),
        _ => return Err(unknown()),
    };
    let (scenario, z) = match fig {
        '1' | '2' => (ScenarioKind::Unbounded, None),
        _ => (ScenarioKind::Bounded, Some(0.5)),
    };
    let params = match fig {
        '1' | '3' => vec![Param::Theta, Param::Phi],
        _ => vec![Param::Theta, Param::Phi, Param::AInv],
    };
    let variable = match panel {
        'a' => SweepVariable::AInv,
        'b' => SweepVariable::Tau,
        'c' => SweepVariable::Theta,
        _ => return Err(unknown()),
    };
    let mut fixed = FixedValues {
        theta: Some(theta),
        phi: Some(0.0),
        a_inv: Some(a_inv),
        tau: Some(tau),
        z,
    };
    match variable {
        SweepVariable::Theta => fixed.theta = None,
        SweepVariable::AInv => fixed.a_inv = None,
        SweepVariable::Tau => fixed.tau = None,
    }
    let mut bounds = BoundKind::DEFAULT.to_vec();
    if fig == '1' {
        bounds.push(BoundKind::Analytic);
    }
    let cfg = SweepConfig {
        scenario,
        params,
        fixed,
        omega_eff: None,
        sweep: default_range(variable, FIGURE_POINTS),
        bounds: Some(bounds),
        output: Some(OutputPaths {
            csv_path: PathBuf::from(format!("fig{id}.csv")),
            svg_path: Some(PathBuf::from(format!("fig{id}.svg"))),
        }),
    };
    cfg.validate()?;
    Ok(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_figure_id_is_valid() {
        for id in FIGURE_IDS {
            let cfg = figure_config(id).unwrap();
            assert_eq!(cfg.sweep.points, FIGURE_POINTS);
        }
        assert!(figure_config("5a").is_err());
        assert!(figure_config("1d").is_err());
        assert!(figure_config("1").is_err());
    }

    #[test]
    fn figure_3b_is_bounded() {
        let cfg = figure_config("3b").unwrap();
        assert_eq!(cfg.scenario, ScenarioKind::Bounded);
        assert_eq!(cfg.fixed.z, Some(0.5));
        assert_eq!(cfg.sweep.variable, SweepVariable::Tau);
    }
}
