//! Vacuum observables: Gaussian wavefunction coefficients, marginal purity,
//! partially transposed symplectic spectrum, logarithmic negativity, and the
//! photon-number expectations of the bare oscillators.

mod quadrature;

use std::f64::consts::LN_2;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::ermakov::{DilatationSet, DilatationState};
use crate::error::{Error, Result};
use crate::hill::{lambda_param, StabilityResult};
use crate::model::{Mode, OscillatorParams};

pub use quadrature::{quadrature_oracle, symplectic_eigenvalues, QuadratureMoments};

/// Logarithm used for the logarithmic negativity.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LogBase {
    #[default]
    Natural,
    Two,
}

impl std::str::FromStr for LogBase {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "natural" | "e" | "ln" => Ok(LogBase::Natural),
            "two" | "2" | "log2" => Ok(LogBase::Two),
            other => Err(Error::Domain(format!(
                "unknown log base `{other}` (expected `natural` or `two`)"
            ))),
        }
    }
}

/// Coefficients of the vacuum `exp(−½A₁x₁² − ½A₂x₂² + A₁₂x₁x₂)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VacuumCoefficients {
    pub a1: Complex64,
    pub a2: Complex64,
    pub a12: Complex64,
    /// `ϖ_j = Ω_j(0)/h_j²`.
    pub varpi1: f64,
    pub varpi2: f64,
    /// Decoupling angle.
    pub alpha: f64,
    /// `ḣ_j/h_j`.
    pub rate1: f64,
    pub rate2: f64,
}

impl VacuumCoefficients {
    pub fn from_parts(alpha: f64, varpi: [f64; 2], rate: [f64; 2]) -> Self {
        let (s, c) = alpha.sin_cos();
        let (s2, c2) = (s * s, c * c);
        let [w1, w2] = varpi;
        let [g1, g2] = rate;
        Self {
            a1: Complex64::new(w1 * c2 + w2 * s2, -(g1 * c2 + g2 * s2)),
            a2: Complex64::new(w1 * s2 + w2 * c2, -(g1 * s2 + g2 * c2)),
            a12: Complex64::new(s * c * (w1 - w2), s * c * (g2 - g1)),
            varpi1: w1,
            varpi2: w2,
            alpha,
            rate1: g1,
            rate2: g2,
        }
    }

    fn varpi(&self, mode: Mode) -> f64 {
        match mode {
            Mode::One => self.varpi1,
            Mode::Two => self.varpi2,
        }
    }

    fn rate(&self, mode: Mode) -> f64 {
        match mode {
            Mode::One => self.rate1,
            Mode::Two => self.rate2,
        }
    }

    /// `|A₁₂|² / (ϖ₁ϖ₂)`.
    pub fn correlation_ratio(&self) -> f64 {
        self.a12.norm_sqr() / (self.varpi1 * self.varpi2)
    }
}

/// Single-oscillator second moments of the vacuum in the closed form used by
/// the photon-number formula.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MarginalMoments {
    pub x_sq: [f64; 2],
    pub p_sq: [f64; 2],
    /// Symmetrized position–momentum moment `½⟨x p + p x⟩`.
    pub xp: [f64; 2],
}

/// Closed-form `⟨x_j²⟩`, `⟨p_j²⟩`, `⟨x_j p_j⟩`.
pub fn marginal_moments(c: &VacuumCoefficients) -> MarginalMoments {
    let (s, co) = c.alpha.sin_cos();
    let (s2, c2) = (s * s, co * co);
    let mut m = MarginalMoments {
        x_sq: [0.0; 2],
        p_sq: [0.0; 2],
        xp: [0.0; 2],
    };
    for j in Mode::BOTH {
        let k = j.other();
        let (wj, wk) = (c.varpi(j), c.varpi(k));
        let (gj, gk) = (c.rate(j), c.rate(k));
        let i = j.index();
        m.x_sq[i] = (wj * s2 + wk * c2) / (2.0 * wj * wk);
        m.p_sq[i] = 0.5 * (wj * c2 + wk * s2 + gj * gj / wj * c2 + gk * gk / wk * s2);
        m.xp[i] = (wk * c2 * gj + wj * s2 * gk) / (2.0 * wj * wk);
    }
    m
}

/// Marginal purity `μ = (ϖ₁ϖ₂ / (ϖ₁ϖ₂ + |A₁₂|²))^½`.
pub fn purity(c: &VacuumCoefficients) -> f64 {
    (1.0 / (1.0 + c.correlation_ratio())).sqrt()
}

/// Smallest symplectic eigenvalue of the partially transposed standard-form
/// covariance matrix.
///
/// With `det A = μ⁻²` and `det C = −(μ⁻² − 1)`, the transposed invariant is
/// `Δ = 2(det A − det C)` and `λ_min² = ½(Δ − √(Δ² − 4))`.
pub fn pt_symplectic_min(c: &VacuumCoefficients) -> f64 {
    pt_symplectic_min_from_purity(purity(c))
}

pub fn pt_symplectic_min_from_purity(mu: f64) -> f64 {
    let inv_sq = 1.0 / (mu * mu);
    let det_a = inv_sq;
    let det_c = -(inv_sq - 1.0);
    let delta = 2.0 * (det_a - det_c);
    // product of the two roots is 1; take the small one without cancellation
    let lambda_sq = 2.0 / (delta + (delta * delta - 4.0).max(0.0).sqrt());
    lambda_sq.sqrt()
}

/// `E_N = max(0, −log λ_min)`.
pub fn log_negativity(c: &VacuumCoefficients, base: LogBase) -> f64 {
    negativity_from_lambda(pt_symplectic_min(c), base)
}

fn negativity_from_lambda(lambda_min: f64, base: LogBase) -> f64 {
    let e = (-lambda_min.ln()).max(0.0);
    match base {
        LogBase::Natural => e,
        LogBase::Two => e / LN_2,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EntanglementRecord {
    pub mu: f64,
    pub lambda_min: f64,
    pub e_n: f64,
}

pub fn entanglement(c: &VacuumCoefficients, base: LogBase) -> EntanglementRecord {
    let mu = purity(c);
    let lambda_min = pt_symplectic_min_from_purity(mu);
    EntanglementRecord {
        mu,
        lambda_min,
        e_n: negativity_from_lambda(lambda_min, base),
    }
}

/// Vacuum expectations of the two bare number operators.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExcitationRecord {
    pub n1: f64,
    pub n2: f64,
    /// Geometric mean `√(⟨N₁⟩⟨N₂⟩)`.
    pub m12: f64,
}

impl ExcitationRecord {
    fn new(n1: f64, n2: f64) -> Self {
        Self {
            n1,
            n2,
            m12: (n1 * n2).max(0.0).sqrt(),
        }
    }
}

/// `⟨N⟩` for one bare oscillator of initial frequency `w0` with dilatation `nu`.
fn number_expectation(w0: f64, nu: &DilatationState, x_sq: f64, p_sq: f64, xp: f64) -> f64 {
    let (v, vd) = (nu.h, nu.h_dot);
    (w0 * w0 / (v * v) + vd * vd) / (2.0 * w0) * x_sq + v * v / (2.0 * w0) * p_sq
        - v * vd / w0 * xp
        - 0.5
}

/// Time-independent excitations for frequencies `ω₁, ω₂` and coupling `J₀`.
///
/// Equivalent to the dynamic formula with every dilatation frozen at one.
pub fn photon_numbers_static(omega1: f64, omega2: f64, j0: f64) -> Result<ExcitationRecord> {
    if !(omega1 > 0.0 && omega2 > 0.0) {
        return Err(Error::Domain(format!(
            "bare frequencies must be positive, got ({omega1}, {omega2})"
        )));
    }
    let (w1s, w2s) = (omega1 * omega1, omega2 * omega2);
    if !(w1s * w2s > j0 * j0) {
        return Err(Error::Domain(format!(
            "unbounded: omega1^2 omega2^2 = {} must exceed J0^2 = {}",
            w1s * w2s,
            j0 * j0
        )));
    }
    let root = ((w1s - w2s).powi(2) + 4.0 * j0 * j0).sqrt();
    let big1 = (0.5 * (w1s + w2s + root)).sqrt();
    let big2 = (0.5 * (w1s + w2s - root)).sqrt();
    let alpha = 0.5 * (2.0 * j0).atan2(w1s - w2s);
    let (s, c) = alpha.sin_cos();
    let (s2, c2) = (s * s, c * c);
    let bracket = |a: f64, b: f64| a / b + b / a;
    let n1 = 0.25 * c2 * bracket(big1, omega1) + 0.25 * s2 * bracket(big2, omega1) - 0.5;
    let n2 = 0.25 * c2 * bracket(big2, omega2) + 0.25 * s2 * bracket(big1, omega2) - 0.5;
    Ok(ExcitationRecord::new(n1, n2))
}

/// Everything computed at one time sample.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ObservableRecord {
    pub t: f64,
    pub h1: f64,
    pub h2: f64,
    pub nu1: f64,
    pub nu2: f64,
    pub n1: f64,
    pub n2: f64,
    pub m12: f64,
    pub mu: f64,
    pub lambda_min: f64,
    pub e_n: f64,
    pub s: f64,
    pub lambda: f64,
}

/// Precomputed evolution of the vacuum for one admissible parameter point.
#[derive(Debug, Clone)]
pub struct VacuumEvolution {
    params: OscillatorParams,
    dilatations: DilatationSet,
    alpha: f64,
    normal0: [f64; 2],
    bare0: [f64; 2],
    stability: StabilityResult,
}

impl VacuumEvolution {
    pub fn new(params: &OscillatorParams) -> Result<Self> {
        params.check_admissible()?;
        let dilatations = DilatationSet::new(params)?;
        let (a_sq, b_sq) = params.normal_mode_data()?.initial();
        let (u, d) = params.bare_pieces(Mode::One)?;
        Ok(Self {
            params: *params,
            dilatations,
            alpha: params.rotation_angle(),
            normal0: [a_sq.sqrt(), b_sq.sqrt()],
            bare0: [u.sqrt(), d.sqrt()],
            stability: StabilityResult::from_lambda(lambda_param(params)?),
        })
    }

    pub fn params(&self) -> &OscillatorParams {
        &self.params
    }

    pub fn stability(&self) -> StabilityResult {
        self.stability
    }

    pub fn dilatations(&self) -> &DilatationSet {
        &self.dilatations
    }

    fn coefficients_from(&self, h: [DilatationState; 2]) -> VacuumCoefficients {
        let varpi = [
            self.normal0[0] / (h[0].h * h[0].h),
            self.normal0[1] / (h[1].h * h[1].h),
        ];
        VacuumCoefficients::from_parts(self.alpha, varpi, [h[0].rate(), h[1].rate()])
    }

    fn normal_states(&self, t: f64) -> Result<[DilatationState; 2]> {
        Ok([self.dilatations.h(Mode::One, t)?, self.dilatations.h(Mode::Two, t)?])
    }

    fn bare_states(&self, t: f64) -> Result<[DilatationState; 2]> {
        Ok([self.dilatations.nu(Mode::One, t)?, self.dilatations.nu(Mode::Two, t)?])
    }

    pub fn coefficients(&self, t: f64) -> Result<VacuumCoefficients> {
        Ok(self.coefficients_from(self.normal_states(t)?))
    }

    fn excitations_from(&self, c: &VacuumCoefficients, nu: &[DilatationState; 2]) -> ExcitationRecord {
        let m = marginal_moments(c);
        let n = |i: usize| number_expectation(self.bare0[i], &nu[i], m.x_sq[i], m.p_sq[i], m.xp[i]);
        ExcitationRecord::new(n(0), n(1))
    }

    pub fn photon_numbers(&self, t: f64) -> Result<ExcitationRecord> {
        let c = self.coefficients(t)?;
        Ok(self.excitations_from(&c, &self.bare_states(t)?))
    }

    /// `⟨H̃_j⟩` in the excitation `n` of normal mode `mode`.
    pub fn energy_average(&self, mode: Mode, n: u32, t: f64) -> Result<f64> {
        let osc = self.dilatations.oscillator(crate::ermakov::Dilatation::Normal, mode);
        let h = self.dilatations.h(mode, t)?;
        let w0_sq = osc.initial_sq();
        let w0 = w0_sq.sqrt();
        let hh = h.h * h.h;
        Ok((2 * n + 1) as f64 / (4.0 * w0) * (h.h_dot * h.h_dot + osc.omega_sq_at(t) * hh + w0_sq / hh))
    }

    pub fn record(&self, t: f64, base: LogBase) -> Result<ObservableRecord> {
        let h = self.normal_states(t)?;
        let nu = self.bare_states(t)?;
        let c = self.coefficients_from(h);
        let ex = self.excitations_from(&c, &nu);
        let ent = entanglement(&c, base);
        Ok(ObservableRecord {
            t,
            h1: h[0].h,
            h2: h[1].h,
            nu1: nu[0].h,
            nu2: nu[1].h,
            n1: ex.n1,
            n2: ex.n2,
            m12: ex.m12,
            mu: ent.mu,
            lambda_min: ent.lambda_min,
            e_n: ent.e_n,
            s: self.stability.s,
            lambda: self.stability.lambda,
        })
    }
}

/// `A₁, A₂, A₁₂` and the scaled frequencies at time `t`.
pub fn vacuum_coefficients(p: &OscillatorParams, t: f64) -> Result<VacuumCoefficients> {
    VacuumEvolution::new(p)?.coefficients(t)
}

/// `(⟨N₁⟩, ⟨N₂⟩, M₁₂)` at time `t`.
pub fn photon_numbers(p: &OscillatorParams, t: f64) -> Result<ExcitationRecord> {
    VacuumEvolution::new(p)?.photon_numbers(t)
}

/// `(2n+1)/(4Ω(0)) (ḣ² + Ω²(t)h² + Ω²(0)/h²)` for normal mode `mode`.
pub fn energy_average(p: &OscillatorParams, mode: Mode, n: u32, t: f64) -> Result<f64> {
    VacuumEvolution::new(p)?.energy_average(mode, n, t)
}
