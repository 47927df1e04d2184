//! Ermakov–Pinney dilatation functions.
//!
//! `h_j` solves `ḧ + Ω_j²(t) h = Ω_j²(0)/h³` for the normal-mode frequencies and
//! `ν_j` the same equation for the bare frequencies, both with `h(0)=1, ḣ(0)=0`.
//! They are built from the exact fundamental solutions of the Meissner
//! equation through `h² = x₁² + Ω²(0) x₂²` (Wronskian normalized to one).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hill::{FundamentalPair, MeissnerOscillator};
use crate::model::{Mode, OscillatorParams, HALF_PERIOD, PERIOD};

/// Which family of dilatation functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Dilatation {
    /// `h_j`, driven by the normal-mode frequencies.
    Normal,
    /// `ν_j`, driven by the bare frequencies.
    Bare,
}

/// Dilatation `h(t) > 0` and its derivative at one sample time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DilatationState {
    pub t: f64,
    pub h: f64,
    pub h_dot: f64,
}

impl DilatationState {
    /// Logarithmic derivative `ḣ/h`.
    pub fn rate(&self) -> f64 {
        self.h_dot / self.h
    }
}

fn pinney_parts(osc: &MeissnerOscillator, t: f64) -> Result<(FundamentalPair, f64, f64)> {
    let f = osc.fundamental(t)?;
    let lam = osc.initial_sq();
    let h = (f.x1.x * f.x1.x + lam * f.x2.x * f.x2.x).sqrt();
    let h_dot = (f.x1.x * f.x1.v + lam * f.x2.x * f.x2.v) / h;
    Ok((f, h, h_dot))
}

/// Pinney construction for an arbitrary Meissner oscillator, valid for all `t ≥ 0`.
pub fn pinney(osc: &MeissnerOscillator, t: f64) -> Result<DilatationState> {
    let (_, h, h_dot) = pinney_parts(osc, t)?;
    Ok(DilatationState { t, h, h_dot })
}

/// First-period closed form for an arbitrary Meissner oscillator.
///
/// `h² = 1` on `[0, π/2)`; on `[π/2, π)` with `a² = Ω²(0)` and `b²` the second
/// piece: `h² = (b²−a²)/(2b²) cos(2b(t−π/2)) + (a²+b²)/(2b²)`.
pub fn closed_first_period(osc: &MeissnerOscillator, t: f64) -> Result<DilatationState> {
    if !(0.0..PERIOD).contains(&t) {
        return Err(Error::Domain(format!(
            "closed form holds on [0, π) only, got t = {t}"
        )));
    }
    if t < HALF_PERIOD {
        return Ok(DilatationState {
            t,
            h: 1.0,
            h_dot: 0.0,
        });
    }
    let a_sq = osc.first_sq();
    let b_sq = osc.second_sq();
    let b = b_sq.sqrt();
    let s = t - HALF_PERIOD;
    let amp = (b_sq - a_sq) / (2.0 * b_sq);
    let (sin, cos) = (2.0 * b * s).sin_cos();
    let h_sq = amp * cos + (a_sq + b_sq) / (2.0 * b_sq);
    let h = h_sq.sqrt();
    let dh_sq = -2.0 * b * amp * sin;
    Ok(DilatationState {
        t,
        h,
        h_dot: dh_sq / (2.0 * h),
    })
}

/// `h_j(t)` from the Pinney construction.
pub fn h_pinney(p: &OscillatorParams, mode: Mode, t: f64) -> Result<DilatationState> {
    pinney(&MeissnerOscillator::normal(p, mode)?, t)
}

/// `h_j(t)` from the first-period closed form, `t ∈ [0, π)`.
pub fn h_closed_first_period(p: &OscillatorParams, mode: Mode, t: f64) -> Result<DilatationState> {
    closed_first_period(&MeissnerOscillator::normal(p, mode)?, t)
}

/// `ν_j(t)`: the same construction driven by the bare frequency `ω_j²(t)`.
pub fn nu(p: &OscillatorParams, mode: Mode, t: f64) -> Result<DilatationState> {
    pinney(&MeissnerOscillator::bare(p, mode)?, t)
}

/// `ν_j(t)` from the first-period closed form with `√(ε²+J₀²) → ε`.
pub fn nu_closed_first_period(p: &OscillatorParams, mode: Mode, t: f64) -> Result<DilatationState> {
    closed_first_period(&MeissnerOscillator::bare(p, mode)?, t)
}

/// `|ḧ + Ω²(t) h − Ω²(0)/h³|` for explicitly supplied values.
pub fn ermakov_residual_of(h: f64, h_ddot: f64, omega_sq: f64, omega0_sq: f64) -> f64 {
    (h_ddot + omega_sq * h - omega0_sq / (h * h * h)).abs()
}

/// Second derivative of the Pinney dilatation from the active piece.
///
/// Differentiating `h² = x₁² + λx₂²` twice with `ẍ = −Ω²(t) x` gives
/// `h ḧ = ẋ₁² + λẋ₂² − Ω²(t) h² − ḣ²`.
fn pinney_accel(osc: &MeissnerOscillator, t: f64) -> Result<(DilatationState, f64)> {
    let (f, h, h_dot) = pinney_parts(osc, t)?;
    let lam = osc.initial_sq();
    let w2 = osc.omega_sq_at(t);
    let h_ddot = (f.x1.v * f.x1.v + lam * f.x2.v * f.x2.v - w2 * h * h - h_dot * h_dot) / h;
    Ok((DilatationState { t, h, h_dot }, h_ddot))
}

fn is_quench_instant(t: f64) -> bool {
    let k = (t / HALF_PERIOD).round();
    k >= 1.0 && (t - k * HALF_PERIOD).abs() <= 1e-12 * t.max(1.0)
}

/// Residual of the Ermakov equation for `h_j` or `ν_j` at a non-quench instant.
pub fn ermakov_residual(p: &OscillatorParams, mode: Mode, t: f64, which: Dilatation) -> Result<f64> {
    if is_quench_instant(t) {
        return Err(Error::Domain(format!(
            "second derivative undefined at quench instant t = {t}"
        )));
    }
    let osc = match which {
        Dilatation::Normal => MeissnerOscillator::normal(p, mode)?,
        Dilatation::Bare => MeissnerOscillator::bare(p, mode)?,
    };
    let (state, h_ddot) = pinney_accel(&osc, t)?;
    Ok(ermakov_residual_of(
        state.h,
        h_ddot,
        osc.omega_sq_at(t),
        osc.initial_sq(),
    ))
}

/// The four dilatation oscillators of one parameter point, built once.
#[derive(Debug, Clone, Copy)]
pub struct DilatationSet {
    normal: [MeissnerOscillator; 2],
    bare: [MeissnerOscillator; 2],
}

impl DilatationSet {
    pub fn new(p: &OscillatorParams) -> Result<Self> {
        Ok(Self {
            normal: [
                MeissnerOscillator::normal(p, Mode::One)?,
                MeissnerOscillator::normal(p, Mode::Two)?,
            ],
            bare: [
                MeissnerOscillator::bare(p, Mode::One)?,
                MeissnerOscillator::bare(p, Mode::Two)?,
            ],
        })
    }

    pub fn oscillator(&self, which: Dilatation, mode: Mode) -> &MeissnerOscillator {
        match which {
            Dilatation::Normal => &self.normal[mode.index()],
            Dilatation::Bare => &self.bare[mode.index()],
        }
    }

    pub fn h(&self, mode: Mode, t: f64) -> Result<DilatationState> {
        pinney(&self.normal[mode.index()], t)
    }

    pub fn nu(&self, mode: Mode, t: f64) -> Result<DilatationState> {
        pinney(&self.bare[mode.index()], t)
    }
}
