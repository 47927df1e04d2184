//! Oracle-equivalence suites: every fast path against an independent route.

use std::f64::consts::{FRAC_PI_2, PI};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::ermakov::{closed_first_period, pinney};
use crate::error::Result;
use crate::hill::{lambda_param, monodromy, rk4_oracle, MeissnerOscillator};
use crate::model::{Mode, OscillatorParams};
use crate::observables::{marginal_moments, pt_symplectic_min, quadrature_oracle, VacuumEvolution};

pub const DEFAULT_POINTS: usize = 50;
pub const DEFAULT_SEED: u64 = 0x5eed;
pub const RK4_STEP: f64 = 1e-4;

pub const CLOSED_VS_PINNEY: &str = "closed-vs-pinney";
pub const PINNEY_VS_RK4: &str = "pinney-vs-rk4";
pub const LAMBDA_VS_TRACE: &str = "lambda-vs-trace";
pub const LAMBDA_MIN_VS_QUADRATURE: &str = "lambda_min-vs-quadrature";

/// Suites run by `selftest`, with their tolerances.
pub const SUITES: [(&str, f64); 4] = [
    (CLOSED_VS_PINNEY, 1e-10),
    (PINNEY_VS_RK4, 1e-6),
    (LAMBDA_VS_TRACE, 1e-12),
    (LAMBDA_MIN_VS_QUADRATURE, 1e-6),
];

#[derive(Debug, Clone, Serialize)]
pub struct SuiteResult {
    pub name: String,
    pub max_error: f64,
    pub tolerance: f64,
    pub points: usize,
}

impl SuiteResult {
    pub fn passed(&self) -> bool {
        self.max_error <= self.tolerance
    }
}

/// Random admissible point, kept at least 10% away from the disc edge so the
/// dilatations stay of order one.
pub fn random_admissible(rng: &mut impl Rng) -> OscillatorParams {
    let w: f64 = rng.gen_range(0.3..2.0);
    let r = rng.gen_range(0.0..0.9) * w;
    let phi: f64 = rng.gen_range(0.0..FRAC_PI_2);
    OscillatorParams::new(w, r * phi.cos(), r * phi.sin()).expect("finite, non-negative by construction")
}

/// `n` random points with a time drawn from `[0, t_max)` for each.
pub fn sample_points(seed: u64, n: usize, t_max: f64) -> Vec<(OscillatorParams, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let p = random_admissible(&mut rng);
            (p, rng.gen_range(0.0..t_max))
        })
        .collect()
}

fn oscillators(p: &OscillatorParams) -> Result<Vec<MeissnerOscillator>> {
    let mut v = Vec::with_capacity(4);
    for mode in Mode::BOTH {
        v.push(MeissnerOscillator::normal(p, mode)?);
        v.push(MeissnerOscillator::bare(p, mode)?);
    }
    Ok(v)
}

fn scaled(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1.0)
}

/// Closed first-period dilatation vs the Pinney construction on `[0, π)`.
pub fn closed_vs_pinney(points: &[(OscillatorParams, f64)]) -> Result<f64> {
    let mut err = 0.0f64;
    for (p, t) in points {
        let t = t % PI;
        for osc in oscillators(p)? {
            let a = closed_first_period(&osc, t)?;
            let b = pinney(&osc, t)?;
            err = err.max(scaled(a.h, b.h)).max(scaled(a.h_dot, b.h_dot));
        }
    }
    Ok(err)
}

/// Pinney dilatation vs one built from RK4-integrated fundamental solutions.
pub fn pinney_vs_rk4(points: &[(OscillatorParams, f64)], step: f64) -> Result<f64> {
    let mut err = 0.0f64;
    for (p, t) in points {
        for osc in oscillators(p)? {
            let f = rk4_oracle(|s| osc.omega_sq_at(s), *t, step)?;
            let w0_sq = osc.initial_sq();
            let h = (f.x1.x * f.x1.x + w0_sq * f.x2.x * f.x2.x).sqrt();
            let exact = pinney(&osc, *t)?;
            err = err.max(scaled(h, exact.h));
        }
    }
    Ok(err)
}

/// Closed-form Λ vs half the monodromy trace of both normal modes.
pub fn lambda_vs_trace(points: &[(OscillatorParams, f64)]) -> Result<f64> {
    let mut err = 0.0f64;
    for (p, _) in points {
        let lambda = lambda_param(p)?;
        for mode in Mode::BOTH {
            let tr = 0.5 * monodromy(p, mode)?.trace().abs();
            err = err.max(scaled(lambda, tr));
        }
    }
    Ok(err)
}

/// λ_min from the purity vs the spectrum of the integrated PT covariance.
pub fn lambda_min_vs_quadrature(points: &[(OscillatorParams, f64)]) -> Result<f64> {
    let mut err = 0.0f64;
    for (p, t) in points {
        let c = VacuumEvolution::new(p)?.coefficients(*t)?;
        let q = quadrature_oracle(&c)?;
        err = err.max((pt_symplectic_min(&c) - q.pt_symplectic[0]).abs());
    }
    Ok(err)
}

/// Largest deviations of the closed-form single-oscillator moments from the
/// integrated ones: `(⟨x²⟩, ⟨p²⟩, ⟨xp⟩)`.
pub fn moments_vs_quadrature(points: &[(OscillatorParams, f64)]) -> Result<[f64; 3]> {
    let mut err = [0.0f64; 3];
    for (p, t) in points {
        let c = VacuumEvolution::new(p)?.coefficients(*t)?;
        let q = quadrature_oracle(&c)?;
        let m = marginal_moments(&c);
        for j in 0..2 {
            err[0] = err[0].max(scaled(m.x_sq[j], q.xx[j][j]));
            err[1] = err[1].max(scaled(m.p_sq[j], q.pp[j][j]));
            err[2] = err[2].max(scaled(m.xp[j], q.xp[j][j]));
        }
    }
    Ok(err)
}

/// Runs one named suite on `n` seeded points.
pub fn run_suite(name: &str, tolerance: f64, seed: u64, n: usize) -> Result<SuiteResult> {
    let max_error = match name {
        CLOSED_VS_PINNEY => closed_vs_pinney(&sample_points(seed, n, PI))?,
        PINNEY_VS_RK4 => pinney_vs_rk4(&sample_points(seed, n, 4.0 * PI), RK4_STEP)?,
        LAMBDA_VS_TRACE => lambda_vs_trace(&sample_points(seed, n, PI))?,
        LAMBDA_MIN_VS_QUADRATURE => lambda_min_vs_quadrature(&sample_points(seed, n, 4.0 * PI))?,
        other => {
            return Err(crate::Error::Domain(format!("unknown suite `{other}`")));
        }
    };
    Ok(SuiteResult {
        name: name.to_string(),
        max_error,
        tolerance,
        points: n,
    })
}

/// All suites, with optional tolerance overrides by name.
pub fn run_all(seed: u64, n: usize, overrides: &[(String, f64)]) -> Result<Vec<SuiteResult>> {
    SUITES
        .iter()
        .map(|&(name, tol)| {
            let tol = overrides
                .iter()
                .rev()
                .find(|(n, _)| n == name)
                .map_or(tol, |&(_, t)| t);
            run_suite(name, tol, seed, n)
        })
        .collect()
}
