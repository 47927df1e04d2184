//! Sweep configuration: TOML file plus command-line overrides.

use std::f64::consts::PI;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::CliError;
use crate::observables::LogBase;

/// A sweepable parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Axis {
    Epsilon,
    J0,
    /// `ω₀²` directly.
    Omega0Sq,
    /// `ω₀`; the point uses `ω₀²` = value².
    Omega0,
}

impl Axis {
    pub fn name(self) -> &'static str {
        match self {
            Axis::Epsilon => "epsilon",
            Axis::J0 => "j0",
            Axis::Omega0Sq => "omega0_sq",
            Axis::Omega0 => "omega0",
        }
    }

    fn sets_frequency(self) -> bool {
        matches!(self, Axis::Omega0Sq | Axis::Omega0)
    }
}

impl FromStr for Axis {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s {
            "epsilon" | "eps" => Ok(Axis::Epsilon),
            "j0" | "J0" => Ok(Axis::J0),
            "omega0_sq" | "omega0sq" => Ok(Axis::Omega0Sq),
            "omega0" => Ok(Axis::Omega0),
            other => Err(CliError::config(
                "axis",
                format!("unknown axis `{other}` (expected epsilon, j0, omega0_sq or omega0)"),
            )),
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// `count` equally spaced values from `min` to `max`, both included.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AxisSpec {
    pub axis: Axis,
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl AxisSpec {
    pub fn value(&self, i: usize) -> f64 {
        if i + 1 == self.count {
            self.max
        } else {
            self.min + (self.max - self.min) * i as f64 / (self.count - 1) as f64
        }
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.count).map(|i| self.value(i)).collect()
    }

    fn validate(&self, field: &'static str) -> Result<(), CliError> {
        if self.count < 2 {
            return Err(CliError::config(field, format!("count must be at least 2, got {}", self.count)));
        }
        if !(self.min.is_finite() && self.max.is_finite()) {
            return Err(CliError::config(field, "bounds must be finite"));
        }
        if !(self.min < self.max) {
            return Err(CliError::config(
                field,
                format!("min ({}) must be below max ({})", self.min, self.max),
            ));
        }
        Ok(())
    }
}

/// Parses `name:min:max:count`, e.g. `epsilon:0:1:200`.
impl FromStr for AxisSpec {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 4 {
            return Err(CliError::config("axis", format!("expected name:min:max:count, got `{s}`")));
        }
        let num = |field: &'static str, v: &str| -> Result<f64, CliError> {
            v.trim()
                .parse::<f64>()
                .map_err(|_| CliError::config(field, format!("not a number: `{v}`")))
        };
        Ok(AxisSpec {
            axis: parts[0].trim().parse()?,
            min: num("axis.min", parts[1])?,
            max: num("axis.max", parts[2])?,
            count: parts[3]
                .trim()
                .parse()
                .map_err(|_| CliError::config("axis.count", format!("not a count: `{}`", parts[3])))?,
        })
    }
}

/// Everything a map or dynamics run needs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepConfig {
    pub axis1: Option<AxisSpec>,
    pub axis2: Option<AxisSpec>,
    /// Fixed values for whatever is not swept.
    pub epsilon: f64,
    pub j0: f64,
    pub omega0_sq: f64,
    /// Dynamics horizon and number of samples (both ends included).
    pub horizon: f64,
    pub samples: usize,
    pub output: Option<PathBuf>,
    pub log_base: LogBase,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            axis1: None,
            axis2: None,
            epsilon: 0.0,
            j0: 0.0,
            omega0_sq: 1.0,
            horizon: PI,
            samples: 1000,
            output: None,
            log_base: LogBase::Natural,
        }
    }
}

/// On-disk form; every key optional.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub axis1: Option<AxisSpec>,
    pub axis2: Option<AxisSpec>,
    pub epsilon: Option<f64>,
    pub j0: Option<f64>,
    pub omega0_sq: Option<f64>,
    pub horizon: Option<f64>,
    pub samples: Option<usize>,
    pub output: Option<PathBuf>,
    pub log_base: Option<LogBase>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::config("config", e.message().to_string()))
    }

    /// Later layers win: `self` is applied on top of `base`.
    pub fn apply(self, mut base: SweepConfig) -> SweepConfig {
        if self.axis1.is_some() {
            base.axis1 = self.axis1;
        }
        if self.axis2.is_some() {
            base.axis2 = self.axis2;
        }
        if let Some(v) = self.epsilon {
            base.epsilon = v;
        }
        if let Some(v) = self.j0 {
            base.j0 = v;
        }
        if let Some(v) = self.omega0_sq {
            base.omega0_sq = v;
        }
        if let Some(v) = self.horizon {
            base.horizon = v;
        }
        if let Some(v) = self.samples {
            base.samples = v;
        }
        if self.output.is_some() {
            base.output = self.output;
        }
        if let Some(v) = self.log_base {
            base.log_base = v;
        }
        base
    }
}

impl SweepConfig {
    /// Both axes, checked for map commands.
    pub fn map_axes(&self) -> Result<(AxisSpec, AxisSpec), CliError> {
        let a1 = self.axis1.ok_or_else(|| CliError::config("axis1", "missing"))?;
        let a2 = self.axis2.ok_or_else(|| CliError::config("axis2", "missing"))?;
        a1.validate("axis1")?;
        a2.validate("axis2")?;
        if a1.axis == a2.axis || (a1.axis.sets_frequency() && a2.axis.sets_frequency()) {
            return Err(CliError::config(
                "axis2",
                format!("axes {} and {} sweep the same parameter", a1.axis, a2.axis),
            ));
        }
        for (field, v) in [("epsilon", self.epsilon), ("j0", self.j0), ("omega0_sq", self.omega0_sq)] {
            if !v.is_finite() {
                return Err(CliError::config(field, "must be finite"));
            }
        }
        Ok((a1, a2))
    }

    pub fn check_dynamics(&self) -> Result<(), CliError> {
        if !(self.horizon > 0.0 && self.horizon.is_finite()) {
            return Err(CliError::config("horizon", format!("must be positive, got {}", self.horizon)));
        }
        if self.samples < 2 {
            return Err(CliError::config("samples", format!("must be at least 2, got {}", self.samples)));
        }
        Ok(())
    }

    /// `(ω₀², ε, J₀)` at grid cell `(i, k)`, starting from the fixed values.
    pub fn coordinates(&self, a1: &AxisSpec, a2: &AxisSpec, i: usize, k: usize) -> (f64, f64, f64, f64, f64) {
        let (x, y) = (a1.value(i), a2.value(k));
        let (mut w, mut e, mut j) = (self.omega0_sq, self.epsilon, self.j0);
        for (axis, v) in [(a1.axis, x), (a2.axis, y)] {
            match axis {
                Axis::Epsilon => e = v,
                Axis::J0 => j = v,
                Axis::Omega0Sq => w = v,
                // a non-positive ω₀ is not a frequency; keep the sign so the cell is rejected
                Axis::Omega0 => w = v * v.abs(),
            }
        }
        (x, y, w, e, j)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn axis_spec_parsing() {
        let a: AxisSpec = "epsilon:0:1:200".parse().unwrap();
        assert_eq!(a.axis, Axis::Epsilon);
        assert_eq!(a.count, 200);
        assert_eq!(a.value(0), 0.0);
        assert_eq!(a.value(199), 1.0);
        assert!("epsilon:0:1".parse::<AxisSpec>().is_err());
        assert!("bogus:0:1:3".parse::<AxisSpec>().is_err());
        assert!("j0:0:x:3".parse::<AxisSpec>().is_err());
    }

    #[test]
    fn validation_names_the_field() {
        let mut cfg = SweepConfig {
            axis1: Some("epsilon:0:1:1".parse().unwrap()),
            axis2: Some("j0:0:1:3".parse().unwrap()),
            ..SweepConfig::default()
        };
        let err = cfg.map_axes().unwrap_err();
        assert!(err.to_string().contains("axis1"), "{err}");
        cfg.axis1 = Some("epsilon:1:0:3".parse().unwrap());
        assert!(cfg.map_axes().unwrap_err().to_string().contains("axis1"));
        cfg.axis1 = Some("omega0:0.1:1:3".parse().unwrap());
        cfg.axis2 = Some("omega0_sq:0.1:1:3".parse().unwrap());
        assert!(cfg.map_axes().unwrap_err().to_string().contains("axis2"));
        cfg.samples = 1;
        assert!(cfg.check_dynamics().unwrap_err().to_string().contains("samples"));
    }

    #[test]
    fn file_layer_and_precedence() {
        let file = FileConfig::parse(
            r#"
            omega0_sq = 1.01
            samples = 10
            log_base = "two"
            [axis1]
            axis = "epsilon"
            min = 0.0
            max = 1.0
            count = 5
            "#,
        )
        .unwrap();
        let cfg = file.apply(SweepConfig::default());
        assert_eq!(cfg.omega0_sq, 1.01);
        assert_eq!(cfg.samples, 10);
        assert_eq!(cfg.log_base, LogBase::Two);
        assert_eq!(cfg.axis1.unwrap().count, 5);
        let flags = FileConfig {
            samples: Some(20),
            ..FileConfig::default()
        };
        let cfg = flags.apply(cfg);
        assert_eq!(cfg.samples, 20);
        assert_eq!(cfg.omega0_sq, 1.01);
        assert!(FileConfig::parse("nonsense = 1").is_err());
    }

    #[test]
    fn omega0_axis_squares() {
        let cfg = SweepConfig::default();
        let a1: AxisSpec = "epsilon:0:1:2".parse().unwrap();
        let a2: AxisSpec = "omega0:1:2:2".parse().unwrap();
        let (_, y, w, _, _) = cfg.coordinates(&a1, &a2, 0, 1);
        assert_eq!(y, 2.0);
        assert_eq!(w, 4.0);
    }
}
