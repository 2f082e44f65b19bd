use std::f64::consts::PI;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::detector::{DetectorParams, Param, Scenario};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScenarioKind {
    Unbounded,
    Bounded,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepVariable {
    Theta,
    AInv,
    Tau,
}

impl SweepVariable {
    pub fn name(self) -> &'static str {
        match self {
            SweepVariable::Theta => "theta",
            SweepVariable::AInv => "a_inv",
            SweepVariable::Tau => "tau",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    Sld,
    Rld,
    Upper,
    Hcrb,
    Nagaoka,
    /// Expands to the closed-form `analytic_sld`, `analytic_rld`, `analytic_hcrb`
    /// and `analytic_nagaoka` columns.
    Analytic,
}

impl BoundKind {
    pub const DEFAULT: [BoundKind; 5] = [
        BoundKind::Sld,
        BoundKind::Rld,
        BoundKind::Upper,
        BoundKind::Hcrb,
        BoundKind::Nagaoka,
    ];
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FixedValues {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a_inv: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub z: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepRange {
    pub variable: SweepVariable,
    pub from: f64,
    pub to: f64,
    pub points: usize,
}

impl SweepRange {
    /// Evenly spaced grid; the last point is exactly `to`.
    pub fn grid(&self) -> Vec<f64> {
        let n = self.points;
        (0..n)
            .map(|i| {
                if i + 1 == n {
                    self.to
                } else {
                    self.from + (self.to - self.from) * i as f64 / (n - 1) as f64
                }
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputPaths {
    pub csv_path: PathBuf,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub svg_path: Option<PathBuf>,
}

/// A validated sweep configuration.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub scenario: ScenarioKind,
    #[serde(rename = "params_to_estimate", alias = "params")]
    pub params: Vec<Param>,
    #[serde(default)]
    pub fixed: FixedValues,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega_eff: Option<f64>,
    pub sweep: SweepRange,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bounds: Option<Vec<BoundKind>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<OutputPaths>,
}

/// Single-point configuration for `report`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointConfig {
    pub scenario: ScenarioKind,
    #[serde(rename = "params_to_estimate", alias = "params")]
    pub params: Vec<Param>,
    pub point: FixedValues,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega_eff: Option<f64>,
}

fn pointer_from_path(path: &serde_path_to_error::Path) -> String {
    use serde_path_to_error::Segment;
    let mut out = String::new();
    for seg in path.iter() {
        out.push('/');
        match seg {
            Segment::Seq { index } => out.push_str(&index.to_string()),
            Segment::Map { key } => out.push_str(&key.replace('~', "~0").replace('/', "~1")),
            Segment::Enum { variant } => out.push_str(variant),
            Segment::Unknown => out.push('?'),
        }
    }
    out
}

fn parse_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let value: T = serde_path_to_error::deserialize(de).map_err(|e| {
        let pointer = pointer_from_path(e.path());
        Error::Schema {
            pointer,
            message: e.inner().to_string(),
        }
    })?;
    Ok(value)
}

fn check_params(params: &[Param]) -> Result<()> {
    if params.is_empty() {
        return Err(Error::Range(
            "params must name at least one parameter".into(),
        ));
    }
    for (i, p) in params.iter().enumerate() {
        if params[..i].contains(p) {
            return Err(Error::Range(format!("parameter `{p}` listed twice")));
        }
    }
    Ok(())
}

fn scenario_of(kind: ScenarioKind, fixed: &FixedValues) -> Result<Scenario> {
    match kind {
        ScenarioKind::Unbounded => Ok(Scenario::Unbounded),
        ScenarioKind::Bounded => match fixed.z {
            Some(z) if z.is_finite() && z > 0.0 => Ok(Scenario::Bounded { z }),
            Some(z) => Err(Error::Range(format!("z = {z} must be positive"))),
            None => Err(Error::Range("bounded scenario requires fixed.z".into())),
        },
    }
}

fn point_params(
    kind: ScenarioKind,
    v: &FixedValues,
    omega_eff: Option<f64>,
) -> Result<DetectorParams> {
    let need = |x: Option<f64>, name: &str| {
        x.ok_or_else(|| Error::Range(format!("{name} is neither fixed nor swept")))
    };
    let p = DetectorParams {
        theta: need(v.theta, "theta")?,
        phi: v.phi.unwrap_or(0.0),
        a_inv: need(v.a_inv, "a_inv")?,
        tau: need(v.tau, "tau")?,
        scenario: scenario_of(kind, v)?,
        omega_eff: omega_eff.unwrap_or(0.0),
    };
    p.validate().map_err(|e| Error::Range(e.to_string()))?;
    Ok(p)
}

impl SweepConfig {
    /// Parses and validates a JSON document; unknown keys are rejected.
    pub fn parse(text: &str) -> Result<Self> {
        let cfg: SweepConfig = parse_json(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        check_params(&self.params)?;
        let s = &self.sweep;
        let swept_fixed = match s.variable {
            SweepVariable::Theta => self.fixed.theta.is_some(),
            SweepVariable::AInv => self.fixed.a_inv.is_some(),
            SweepVariable::Tau => self.fixed.tau.is_some(),
        };
        if swept_fixed {
            return Err(Error::Range(format!(
                "sweep variable `{}` is also fixed",
                s.variable.name()
            )));
        }
        if !(s.from.is_finite() && s.to.is_finite() && s.from < s.to) {
            return Err(Error::Range(format!(
                "sweep range needs from < to, got [{}, {}]",
                s.from, s.to
            )));
        }
        if s.points < 2 {
            return Err(Error::Range(format!(
                "sweep needs at least 2 points, got {}",
                s.points
            )));
        }
        if let Some(b) = &self.bounds {
            if b.is_empty() {
                return Err(Error::Range("bounds must not be empty".into()));
            }
            if b.contains(&BoundKind::Analytic)
                && (self.scenario != ScenarioKind::Unbounded
                    || self.params != [Param::Theta, Param::Phi])
            {
                return Err(Error::Range(
                    "analytic bounds need the unbounded scenario and params [theta, phi]".into(),
                ));
            }
        }
        // endpoints bracket every grid point, so checking them validates the sweep
        for x in [s.from, s.to] {
            self.params_at(x)?;
        }
        Ok(())
    }

    pub fn bounds(&self) -> Vec<BoundKind> {
        self.bounds
            .clone()
            .unwrap_or_else(|| BoundKind::DEFAULT.to_vec())
    }

    /// Column names in output order.
    pub fn columns(&self) -> Vec<String> {
        let mut cols = Vec::new();
        for b in self.bounds() {
            match b {
                BoundKind::Sld => cols.push("sld".to_string()),
                BoundKind::Rld => cols.push("rld".to_string()),
                BoundKind::Upper => cols.push("upper".to_string()),
                BoundKind::Hcrb => cols.push("hcrb".to_string()),
                BoundKind::Nagaoka => cols.push("nagaoka".to_string()),
                BoundKind::Analytic => cols.extend(
                    [
                        "analytic_sld",
                        "analytic_rld",
                        "analytic_hcrb",
                        "analytic_nagaoka",
                    ]
                    .map(String::from),
                ),
            }
        }
        cols
    }

    /// Detector parameters at sweep value `x`.
    pub fn params_at(&self, x: f64) -> Result<DetectorParams> {
        let mut v = self.fixed.clone();
        match self.sweep.variable {
            SweepVariable::Theta => v.theta = Some(x),
            SweepVariable::AInv => v.a_inv = Some(x),
            SweepVariable::Tau => v.tau = Some(x),
        }
        point_params(self.scenario, &v, self.omega_eff)
    }
}

impl PointConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let cfg: PointConfig = parse_json(text)?;
        check_params(&cfg.params)?;
        cfg.detector_params()?;
        Ok(cfg)
    }

    pub fn detector_params(&self) -> Result<DetectorParams> {
        point_params(self.scenario, &self.point, self.omega_eff)
    }
}

/// Default sweep ranges; the source figures do not state their axis limits.
pub fn default_range(variable: SweepVariable, points: usize) -> SweepRange {
    let (from, to) = match variable {
        SweepVariable::AInv => (0.05, 1.0),
        SweepVariable::Tau => (0.05, 2.0),
        SweepVariable::Theta => (0.1, PI - 0.1),
    };
    SweepRange {
        variable,
        from,
        to,
        points,
    }
}
