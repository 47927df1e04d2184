//! Boundedness and stability maps over a two-axis parameter grid.

use std::fmt;
use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use super::config::SweepConfig;
use super::{fmt_float, CliError};
use crate::hill::{stability, StabilityResult};
use crate::model::OscillatorParams;

pub const THREADS_ENV: &str = "MEISSNER_LAB_THREADS";
pub const BOUNDNESS_HEADER: &str = "axis1,axis2,bounded";
pub const STABILITY_HEADER: &str = "axis1,axis2,lambda,S,class";

/// Classification of a stability-map cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CellClass {
    Stable,
    Unstable,
    /// No frequency at all (`ω₀² ≤ 0`).
    Forbidden,
    /// Outside the open disc `ε² + J₀² < ω₀⁴`.
    Unbounded,
}

impl CellClass {
    pub const ALL: [CellClass; 4] = [
        CellClass::Stable,
        CellClass::Unstable,
        CellClass::Forbidden,
        CellClass::Unbounded,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CellClass::Stable => "stable",
            CellClass::Unstable => "unstable",
            CellClass::Forbidden => "forbidden",
            CellClass::Unbounded => "unbounded",
        }
    }
}

impl fmt::Display for CellClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundCell {
    pub x: f64,
    pub y: f64,
    pub bounded: bool,
}

/// One stability-map cell; `payload` is absent for forbidden and unbounded cells.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridCell {
    pub x: f64,
    pub y: f64,
    pub class: CellClass,
    pub payload: Option<StabilityResult>,
}

/// Worker pool honouring `MEISSNER_LAB_THREADS`.
pub fn worker_pool() -> Result<rayon::ThreadPool, CliError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var(THREADS_ENV) {
        let n: usize = v
            .trim()
            .parse()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| CliError::config(THREADS_ENV, format!("expected a positive integer, got `{v}`")))?;
        builder = builder.num_threads(n);
    }
    builder
        .build()
        .map_err(|e| CliError::config(THREADS_ENV, e.to_string()))
}

/// Evaluates `f` on every cell, row-major in (axis1, axis2), in parallel.
/// The output order is the grid order whatever the pool size.
fn sweep<T, F>(cfg: &SweepConfig, f: F) -> Result<Vec<T>, CliError>
where
    T: Send,
    F: Fn(f64, f64, f64, f64, f64) -> T + Sync,
{
    let (a1, a2) = cfg.map_axes()?;
    let n2 = a2.count;
    let pool = worker_pool()?;
    Ok(pool.install(|| {
        (0..a1.count * n2)
            .into_par_iter()
            .map(|idx| {
                let (x, y, w, e, j) = cfg.coordinates(&a1, &a2, idx / n2, idx % n2);
                f(x, y, w, e, j)
            })
            .collect()
    }))
}

pub fn boundness_map(cfg: &SweepConfig) -> Result<Vec<BoundCell>, CliError> {
    sweep(cfg, |x, y, w, e, j| BoundCell {
        x,
        y,
        bounded: w > 0.0 && e * e + j * j < w * w,
    })
}

pub fn classify(omega0_sq: f64, epsilon: f64, j0: f64) -> (CellClass, Option<StabilityResult>) {
    if !(omega0_sq > 0.0) {
        return (CellClass::Forbidden, None);
    }
    // Λ depends on ε and J₀ only through ε² + J₀²
    let p = match OscillatorParams::new(omega0_sq, epsilon.abs(), j0.abs()) {
        Ok(p) => p,
        Err(_) => return (CellClass::Forbidden, None),
    };
    if p.check_admissible().is_err() {
        return (CellClass::Unbounded, None);
    }
    match stability(&p) {
        Ok(s) if s.lambda.is_finite() => {
            let class = if s.is_stable() {
                CellClass::Stable
            } else {
                CellClass::Unstable
            };
            (class, Some(s))
        }
        _ => (CellClass::Forbidden, None),
    }
}

pub fn stability_map(cfg: &SweepConfig) -> Result<Vec<GridCell>, CliError> {
    sweep(cfg, |x, y, w, e, j| {
        let (class, payload) = classify(w, e, j);
        GridCell { x, y, class, payload }
    })
}

pub fn count_class(cells: &[GridCell], class: CellClass) -> usize {
    cells.iter().filter(|c| c.class == class).count()
}

pub fn write_boundness<W: Write>(out: W, cells: &[BoundCell]) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(BOUNDNESS_HEADER.split(','))?;
    for c in cells {
        w.write_record([fmt_float(c.x), fmt_float(c.y), u8::from(c.bounded).to_string()])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_stability<W: Write>(out: W, cells: &[GridCell]) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(STABILITY_HEADER.split(','))?;
    for c in cells {
        let (lambda, s) = match c.payload {
            Some(p) => (fmt_float(p.lambda), fmt_float(p.s)),
            None => (String::new(), String::new()),
        };
        w.write_record([fmt_float(c.x), fmt_float(c.y), lambda, s, c.class.name().to_string()])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(a1: &str, a2: &str) -> SweepConfig {
        SweepConfig {
            axis1: Some(a1.parse().unwrap()),
            axis2: Some(a2.parse().unwrap()),
            ..SweepConfig::default()
        }
    }

    #[test]
    fn lattice_disc() {
        let cells = boundness_map(&cfg("epsilon:0:2:3", "j0:0:2:3")).unwrap();
        assert_eq!(cells.len(), 9);
        let inside: Vec<_> = cells.iter().filter(|c| c.bounded).collect();
        assert_eq!(inside.len(), 1);
        assert_eq!((inside[0].x, inside[0].y), (0.0, 0.0));
    }

    #[test]
    fn classification_examples() {
        assert_eq!(classify(1.01, 0.0, 0.0).0, CellClass::Stable);
        assert_eq!(classify(1.01, 0.1, 0.0).0, CellClass::Unstable);
        assert_eq!(classify(1.0, 0.6, 0.8).0, CellClass::Unbounded);
        assert_eq!(classify(1.0, 1.0, 0.0).0, CellClass::Unbounded);
        assert_eq!(classify(0.0, 0.1, 0.0).0, CellClass::Forbidden);
        assert_eq!(classify(-1.0, 0.0, 0.0).1, None);
    }

    #[test]
    fn boundary_grid_point_is_unbounded() {
        let cells = stability_map(&cfg("epsilon:0:1:2", "j0:0:1:2")).unwrap();
        let edge = cells.iter().find(|c| c.x == 1.0 && c.y == 0.0).unwrap();
        assert_eq!(edge.class, CellClass::Unbounded);
        assert!(edge.payload.is_none());
    }

    #[test]
    fn csv_schema() {
        let cells = stability_map(&cfg("epsilon:0:1:4", "omega0_sq:0.5:2:3")).unwrap();
        let mut buf = Vec::new();
        write_stability(&mut buf, &cells).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines[0], STABILITY_HEADER);
        assert_eq!(lines.len(), 13);
    }
}
