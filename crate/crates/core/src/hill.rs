//! Exact propagation of the Meissner equation `ẍ + Ω²(t) x = 0` with a
//! π-periodic, two-valued `Ω²(t)`, its monodromy and Floquet stability.
//!
//! Every constant piece is integrated in closed form, so chaining the 2×2
//! propagators is exact up to rounding. A fixed-step RK4 integrator is kept
//! alongside as an independent check of that chaining.

use std::ops::Mul;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Mode, OscillatorParams, HALF_PERIOD};

/// Real 2×2 matrix mapping `(x(t₀), ẋ(t₀))` to `(x(t₁), ẋ(t₁))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Propagator {
    pub m11: f64,
    pub m12: f64,
    pub m21: f64,
    pub m22: f64,
}

impl Propagator {
    pub const IDENTITY: Propagator = Propagator {
        m11: 1.0,
        m12: 0.0,
        m21: 0.0,
        m22: 1.0,
    };

    pub fn det(&self) -> f64 {
        self.m11 * self.m22 - self.m12 * self.m21
    }

    pub fn trace(&self) -> f64 {
        self.m11 + self.m22
    }

    pub fn apply(&self, s: PhasePoint) -> PhasePoint {
        PhasePoint {
            x: self.m11 * s.x + self.m12 * s.v,
            v: self.m21 * s.x + self.m22 * s.v,
        }
    }

    /// `self^n` by repeated squaring.
    pub fn pow(&self, mut n: u64) -> Propagator {
        let mut acc = Propagator::IDENTITY;
        let mut base = *self;
        while n > 0 {
            if n & 1 == 1 {
                acc = base * acc;
            }
            base = base * base;
            n >>= 1;
        }
        acc
    }

    /// Spectral norm.
    pub fn norm(&self) -> f64 {
        // singular values of a 2x2 from the Frobenius norm and |det|
        let f2 = self.m11 * self.m11 + self.m12 * self.m12 + self.m21 * self.m21 + self.m22 * self.m22;
        let d = self.det().abs();
        let disc = (f2 * f2 - 4.0 * d * d).max(0.0).sqrt();
        (0.5 * (f2 + disc)).sqrt()
    }
}

/// Matrix product; `later * earlier` propagates through `earlier` first.
impl Mul for Propagator {
    type Output = Propagator;

    fn mul(self, r: Propagator) -> Propagator {
        Propagator {
            m11: self.m11 * r.m11 + self.m12 * r.m21,
            m12: self.m11 * r.m12 + self.m12 * r.m22,
            m21: self.m21 * r.m11 + self.m22 * r.m21,
            m22: self.m21 * r.m12 + self.m22 * r.m22,
        }
    }
}

/// Propagator of `ẍ + ω² x = 0` over a duration `tau` at constant `ω² > 0`.
pub fn constant_propagator(omega_sq: f64, tau: f64) -> Result<Propagator> {
    if !(omega_sq > 0.0) || !omega_sq.is_finite() {
        return Err(Error::Domain(format!(
            "squared frequency must be positive, got {omega_sq}"
        )));
    }
    if !(tau >= 0.0) || !tau.is_finite() {
        return Err(Error::Domain(format!(
            "duration must be finite and non-negative, got {tau}"
        )));
    }
    let w = omega_sq.sqrt();
    let (s, c) = (w * tau).sin_cos();
    Ok(Propagator {
        m11: c,
        m12: s / w,
        m21: -w * s,
        m22: c,
    })
}

/// Value and first derivative of a solution at one instant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhasePoint {
    pub x: f64,
    pub v: f64,
}

/// The two canonical solutions `x₁(0)=1, ẋ₁(0)=0` and `x₂(0)=0, ẋ₂(0)=1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FundamentalPair {
    pub x1: PhasePoint,
    pub x2: PhasePoint,
}

impl FundamentalPair {
    pub const INITIAL: FundamentalPair = FundamentalPair {
        x1: PhasePoint { x: 1.0, v: 0.0 },
        x2: PhasePoint { x: 0.0, v: 1.0 },
    };

    pub fn wronskian(&self) -> f64 {
        self.x1.x * self.x2.v - self.x2.x * self.x1.v
    }

    /// Columns of a propagator from 0 are exactly the two solutions.
    pub fn from_propagator(p: &Propagator) -> FundamentalPair {
        FundamentalPair {
            x1: PhasePoint { x: p.m11, v: p.m21 },
            x2: PhasePoint { x: p.m12, v: p.m22 },
        }
    }
}

/// A Meissner oscillator: `Ω² = first_sq` on `[0, π/2)` and `second_sq` on
/// `[π/2, π)`, repeated with period π.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeissnerOscillator {
    first_sq: f64,
    second_sq: f64,
    half_first: Propagator,
    half_second: Propagator,
    monodromy: Propagator,
}

impl MeissnerOscillator {
    pub fn new(first_sq: f64, second_sq: f64) -> Result<Self> {
        let half_first = constant_propagator(first_sq, HALF_PERIOD)?;
        let half_second = constant_propagator(second_sq, HALF_PERIOD)?;
        Ok(Self {
            first_sq,
            second_sq,
            half_first,
            half_second,
            monodromy: half_second * half_first,
        })
    }

    /// Normal mode `mode` of `p`.
    pub fn normal(p: &OscillatorParams, mode: Mode) -> Result<Self> {
        let (a, b) = p.normal_pieces(mode)?;
        Self::new(a, b)
    }

    /// Bare oscillator `mode` of `p`.
    pub fn bare(p: &OscillatorParams, mode: Mode) -> Result<Self> {
        let (a, b) = p.bare_pieces(mode)?;
        Self::new(a, b)
    }

    pub fn first_sq(&self) -> f64 {
        self.first_sq
    }

    pub fn second_sq(&self) -> f64 {
        self.second_sq
    }

    /// `Ω²(0)`.
    pub fn initial_sq(&self) -> f64 {
        self.first_sq
    }

    pub fn monodromy(&self) -> Propagator {
        self.monodromy
    }

    /// Index of the half-period containing `t` and the offset into it.
    fn locate(t: f64) -> (u64, f64) {
        let k = (t / HALF_PERIOD).floor().max(0.0);
        let tau = (t - k * HALF_PERIOD).max(0.0);
        (k as u64, tau)
    }

    /// Squared frequency active at `t` (right-continuous at quench instants).
    pub fn omega_sq_at(&self, t: f64) -> f64 {
        let (k, _) = Self::locate(t);
        if k % 2 == 0 {
            self.first_sq
        } else {
            self.second_sq
        }
    }

    /// Propagator from 0 to `t ≥ 0`.
    pub fn propagator_to(&self, t: f64) -> Result<Propagator> {
        if !(t >= 0.0) || !t.is_finite() {
            return Err(Error::Domain(format!("time must be non-negative, got {t}")));
        }
        let (k, tau) = Self::locate(t);
        let mut acc = self.monodromy.pow(k / 2);
        let piece = if k % 2 == 1 {
            acc = self.half_first * acc;
            self.second_sq
        } else {
            self.first_sq
        };
        Ok(constant_propagator(piece, tau)? * acc)
    }

    pub fn fundamental(&self, t: f64) -> Result<FundamentalPair> {
        Ok(FundamentalPair::from_propagator(&self.propagator_to(t)?))
    }

    /// `½ |tr M|` of the one-period monodromy.
    pub fn half_trace(&self) -> f64 {
        0.5 * self.monodromy.trace().abs()
    }
}

/// One-period monodromy of normal mode `mode`.
///
/// Mode 1 sees `a²` then `b²`, mode 2 sees `b²` then `a²`.
pub fn monodromy(p: &OscillatorParams, mode: Mode) -> Result<Propagator> {
    Ok(MeissnerOscillator::normal(p, mode)?.monodromy())
}

/// Closed-form stability parameter for initial normal frequencies `a`, `b`:
///
/// `Λ = |cos(aπ/2) cos(bπ/2) − ½(a/b + b/a) sin(aπ/2) sin(bπ/2)|`.
pub fn lambda_closed_form(a: f64, b: f64) -> f64 {
    let (sa, ca) = (a * HALF_PERIOD).sin_cos();
    let (sb, cb) = (b * HALF_PERIOD).sin_cos();
    (ca * cb - 0.5 * (a / b + b / a) * sa * sb).abs()
}

/// Stability parameter Λ of the normal modes of `p`.
pub fn lambda_param(p: &OscillatorParams) -> Result<f64> {
    p.check_admissible()?;
    let (a_sq, b_sq) = p.normal_mode_data()?.initial();
    Ok(lambda_closed_form(a_sq.sqrt(), b_sq.sqrt()))
}

/// Floquet classification derived from Λ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StabilityResult {
    pub lambda: f64,
    /// `max(1 − Λ, 0)`; the point is stable iff this is positive.
    pub s: f64,
    /// Largest Floquet multiplier modulus per period.
    pub growth_rate: f64,
}

impl StabilityResult {
    pub fn from_lambda(lambda: f64) -> Self {
        let growth_rate = if lambda > 1.0 {
            lambda + (lambda * lambda - 1.0).sqrt()
        } else {
            1.0
        };
        Self {
            lambda,
            s: (1.0 - lambda).max(0.0),
            growth_rate,
        }
    }

    pub fn is_stable(&self) -> bool {
        self.s > 0.0
    }
}

pub fn stability(p: &OscillatorParams) -> Result<StabilityResult> {
    Ok(StabilityResult::from_lambda(lambda_param(p)?))
}

/// Exact fundamental solutions of normal mode `mode` at time `t`.
pub fn fundamental_solutions(p: &OscillatorParams, mode: Mode, t: f64) -> Result<FundamentalPair> {
    MeissnerOscillator::normal(p, mode)?.fundamental(t)
}

/// Fixed-step RK4 integration of `ẍ = −ω²(t) x` for both canonical initial
/// conditions, from 0 to `t_end`.
///
/// The interval is split at every multiple of π/2 and each piece is covered
/// by equal sub-steps no longer than `step`. Stage times are kept strictly
/// inside the current piece so that a right-continuous square wave is sampled
/// on the correct side of its jumps.
pub fn rk4_oracle<F>(omega_sq_of_t: F, t_end: f64, step: f64) -> Result<FundamentalPair>
where
    F: Fn(f64) -> f64,
{
    if !(step > 0.0) || !step.is_finite() {
        return Err(Error::Domain(format!("step must be positive, got {step}")));
    }
    if !(t_end >= 0.0) || !t_end.is_finite() {
        return Err(Error::Domain(format!("t_end must be non-negative, got {t_end}")));
    }
    // state: [x1, v1, x2, v2]
    let mut y = [1.0, 0.0, 0.0, 1.0];
    let deriv = |w2: f64, y: &[f64; 4]| [y[1], -w2 * y[0], y[3], -w2 * y[2]];

    let mut start = 0.0;
    let mut k = 0u64;
    while start < t_end {
        let end = (((k + 1) as f64) * HALF_PERIOD).min(t_end);
        let len = end - start;
        if len <= 0.0 {
            k += 1;
            continue;
        }
        let n = (len / step).ceil().max(1.0) as u64;
        let h = len / n as f64;
        let margin = 1e-9 * len;
        let omega = |t: f64| omega_sq_of_t(t.clamp(start + margin, end - margin));
        for i in 0..n {
            let t = start + i as f64 * h;
            let k1 = deriv(omega(t), &y);
            let y2 = add(&y, &k1, 0.5 * h);
            let k2 = deriv(omega(t + 0.5 * h), &y2);
            let y3 = add(&y, &k2, 0.5 * h);
            let k3 = deriv(omega(t + 0.5 * h), &y3);
            let y4 = add(&y, &k3, h);
            let k4 = deriv(omega(t + h), &y4);
            for j in 0..4 {
                y[j] += h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
            }
        }
        start = end;
        k += 1;
    }
    Ok(FundamentalPair {
        x1: PhasePoint { x: y[0], v: y[1] },
        x2: PhasePoint { x: y[2], v: y[3] },
    })
}

fn add(y: &[f64; 4], k: &[f64; 4], h: f64) -> [f64; 4] {
    [y[0] + h * k[0], y[1] + h * k[1], y[2] + h * k[2], y[3] + h * k[3]]
}
