//! Parameter space of the two periodically quenched oscillators.
//!
//! All quantities are dimensionless: time is measured in units of an arbitrary
//! reference frequency, and the square-wave quencher has period π. The bare
//! frequencies and the coupling follow
//!
//! ```text
//! ω₁,₂²(t) = ω₀² ± ε Θ(t),    J(t) = J₀ Θ(t)
//! ```
//!
//! and a constant rotation by `α = ½ atan2(J₀, ε)` decouples the Hamiltonian
//! into two Meissner oscillators with `Ω₁,₂²(t) = ω₀² ± Θ(t) √(ε² + J₀²)`.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Quencher period.
pub const PERIOD: f64 = PI;

/// Length of each constant piece of the quencher.
pub const HALF_PERIOD: f64 = FRAC_PI_2;

/// One of the two oscillators (bare or normal, depending on context).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Mode {
    One,
    Two,
}

impl Mode {
    pub const BOTH: [Mode; 2] = [Mode::One, Mode::Two];

    pub fn index(self) -> usize {
        match self {
            Mode::One => 0,
            Mode::Two => 1,
        }
    }

    pub fn other(self) -> Mode {
        match self {
            Mode::One => Mode::Two,
            Mode::Two => Mode::One,
        }
    }

    /// Parses `1` or `2`.
    pub fn from_number(n: u32) -> Result<Mode> {
        match n {
            1 => Ok(Mode::One),
            2 => Ok(Mode::Two),
            _ => Err(Error::Domain(format!("mode must be 1 or 2, got {n}"))),
        }
    }
}

/// π-periodic square wave: `+1` on `[0, π/2)`, `−1` on `[π/2, π)`.
pub fn quencher(t: f64) -> f64 {
    if t.rem_euclid(PERIOD) < HALF_PERIOD {
        1.0
    } else {
        -1.0
    }
}

/// A point `(ω₀², ε, J₀)` of the dimensionless parameter space.
///
/// Construction only enforces the type-level domain (`ω₀² > 0`, `ε ≥ 0`,
/// `J₀ ≥ 0`, all finite). Boundedness of the Hamiltonian is checked
/// separately by [`OscillatorParams::check_admissible`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OscillatorParams {
    pub omega0_sq: f64,
    pub epsilon: f64,
    pub j0: f64,
}

impl OscillatorParams {
    pub fn new(omega0_sq: f64, epsilon: f64, j0: f64) -> Result<Self> {
        if !omega0_sq.is_finite() || omega0_sq <= 0.0 {
            return Err(Error::InvalidParameter {
                name: "omega0_sq",
                value: omega0_sq,
                reason: "must be finite and positive",
            });
        }
        if !epsilon.is_finite() || epsilon < 0.0 {
            return Err(Error::InvalidParameter {
                name: "epsilon",
                value: epsilon,
                reason: "must be finite and non-negative",
            });
        }
        if !j0.is_finite() || j0 < 0.0 {
            return Err(Error::InvalidParameter {
                name: "j0",
                value: j0,
                reason: "must be finite and non-negative",
            });
        }
        Ok(Self {
            omega0_sq,
            epsilon,
            j0,
        })
    }

    /// Builds and immediately checks admissibility.
    pub fn admissible(omega0_sq: f64, epsilon: f64, j0: f64) -> Result<Self> {
        let p = Self::new(omega0_sq, epsilon, j0)?;
        p.check_admissible()?;
        Ok(p)
    }

    pub fn period(&self) -> f64 {
        PERIOD
    }

    /// `√(ε² + J₀²)`, the half-splitting of the normal frequencies.
    pub fn splitting(&self) -> f64 {
        self.epsilon.hypot(self.j0)
    }

    /// True iff `ε² + J₀² < ω₀⁴` (open disc).
    pub fn is_bounded(&self) -> bool {
        self.epsilon * self.epsilon + self.j0 * self.j0 < self.omega0_sq * self.omega0_sq
    }

    /// `ω₁²ω₂² − J²`, identical at every instant.
    pub fn potential_determinant(&self) -> f64 {
        self.omega0_sq * self.omega0_sq - self.epsilon * self.epsilon - self.j0 * self.j0
    }

    /// Admissibility gate used by every downstream operation.
    pub fn check_admissible(&self) -> Result<()> {
        let radius_sq = self.epsilon * self.epsilon + self.j0 * self.j0;
        let limit = self.omega0_sq * self.omega0_sq;
        if radius_sq > limit {
            return Err(Error::Unbounded { radius_sq, limit });
        }
        let low = self.omega0_sq - self.splitting();
        if radius_sq == limit || low <= 0.0 {
            return Err(Error::ForbiddenPoint { value: low });
        }
        Ok(())
    }

    /// `J(t) = J₀ Θ(t)`.
    pub fn coupling(&self, t: f64) -> f64 {
        self.j0 * quencher(t)
    }

    /// `(ω₁²(t), ω₂²(t)) = (ω₀² + εΘ, ω₀² − εΘ)`.
    pub fn bare_frequencies_sq(&self, t: f64) -> (f64, f64) {
        let q = quencher(t);
        (self.omega0_sq + self.epsilon * q, self.omega0_sq - self.epsilon * q)
    }

    /// `(Ω₁²(t), Ω₂²(t)) = (ω₀² + Θ√(ε²+J₀²), ω₀² − Θ√(ε²+J₀²))`.
    pub fn normal_frequencies_sq(&self, t: f64) -> Result<(f64, f64)> {
        let data = self.normal_mode_data()?;
        Ok(if quencher(t) > 0.0 {
            (data.big_omega1_sq_plus, data.big_omega2_sq_plus)
        } else {
            (data.big_omega1_sq_minus, data.big_omega2_sq_minus)
        })
    }

    /// Constant decoupling angle `α = ½ atan2(J₀, ε) ∈ [0, π/4]`.
    ///
    /// `ε = J₀ = 0` gives `α = 0`.
    pub fn rotation_angle(&self) -> f64 {
        0.5 * self.j0.atan2(self.epsilon)
    }

    /// Normal-mode squared frequencies on both half-periods plus the angle.
    pub fn normal_mode_data(&self) -> Result<NormalModeData> {
        let r = self.splitting();
        let high = self.omega0_sq + r;
        let low = self.omega0_sq - r;
        if low == 0.0 {
            return Err(Error::ForbiddenPoint { value: low });
        }
        Ok(NormalModeData {
            big_omega1_sq_plus: high,
            big_omega1_sq_minus: low,
            big_omega2_sq_plus: low,
            big_omega2_sq_minus: high,
            alpha: self.rotation_angle(),
        })
    }

    /// Squared frequencies `(first half, second half)` seen by a normal mode.
    pub fn normal_pieces(&self, mode: Mode) -> Result<(f64, f64)> {
        self.check_admissible()?;
        let d = self.normal_mode_data()?;
        Ok(match mode {
            Mode::One => (d.big_omega1_sq_plus, d.big_omega1_sq_minus),
            Mode::Two => (d.big_omega2_sq_plus, d.big_omega2_sq_minus),
        })
    }

    /// Squared frequencies `(first half, second half)` of a bare oscillator.
    pub fn bare_pieces(&self, mode: Mode) -> Result<(f64, f64)> {
        self.check_admissible()?;
        let up = self.omega0_sq + self.epsilon;
        let down = self.omega0_sq - self.epsilon;
        Ok(match mode {
            Mode::One => (up, down),
            Mode::Two => (down, up),
        })
    }
}

/// Normal-mode frequencies on each half of the quench cycle.
///
/// The two modes exchange their values between the halves.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormalModeData {
    /// Ω₁² while Θ = +1.
    pub big_omega1_sq_plus: f64,
    /// Ω₁² while Θ = −1.
    pub big_omega1_sq_minus: f64,
    pub big_omega2_sq_plus: f64,
    pub big_omega2_sq_minus: f64,
    /// Rotation angle in radians.
    pub alpha: f64,
}

impl NormalModeData {
    /// `(a², b²)` — the squared normal frequencies at `t = 0`.
    pub fn initial(&self) -> (f64, f64) {
        (self.big_omega1_sq_plus, self.big_omega2_sq_plus)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_4;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn quencher_pieces() {
        assert_eq!(quencher(0.1), 1.0);
        assert_eq!(quencher(0.0), 1.0);
        assert_eq!(quencher(FRAC_PI_2), -1.0);
        assert_eq!(quencher(PI + 0.1), 1.0);
        assert_eq!(quencher(3.0), -1.0);
    }

    #[test]
    fn bare_frequencies_examples() {
        let p = OscillatorParams::new(1.01, 0.9, 0.0).unwrap();
        let (w1, w2) = p.bare_frequencies_sq(0.1);
        assert!(close(w1, 1.91, 1e-14) && close(w2, 0.11, 1e-14));
        let (w1, w2) = p.bare_frequencies_sq(2.0);
        assert!(close(w1, 0.11, 1e-14) && close(w2, 1.91, 1e-14));
        let p = OscillatorParams::new(1.3, 0.0, 0.4).unwrap();
        assert_eq!(p.bare_frequencies_sq(2.0), (1.3, 1.3));
    }

    #[test]
    fn normal_frequency_examples() {
        let b = OscillatorParams::new(1.01, 0.0, 0.99).unwrap();
        let (a2, b2) = b.normal_frequencies_sq(0.0).unwrap();
        assert!(close(a2, 2.0, 1e-14) && close(b2, 0.02, 1e-14));

        let a = OscillatorParams::new(1.01, 0.0, 0.0).unwrap();
        assert_eq!(a.normal_frequencies_sq(0.0).unwrap(), (1.01, 1.01));

        let c = OscillatorParams::new(1.01, 0.1, 0.9).unwrap();
        let (a2, b2) = c.normal_frequencies_sq(0.0).unwrap();
        assert!(close(a2, 1.01 + 0.82f64.sqrt(), 1e-14));
        assert!(close(b2, 1.01 - 0.82f64.sqrt(), 1e-14));
        assert!(close(a2, 1.9155, 1e-4) && close(b2, 0.1045, 1e-4));

        let (m1, m2) = c.normal_frequencies_sq(2.0).unwrap();
        assert_eq!((m1, m2), (b2, a2));
    }

    #[test]
    fn zero_low_frequency_is_forbidden() {
        let p = OscillatorParams::new(1.0, 0.6, 0.8).unwrap();
        assert!(matches!(
            p.normal_frequencies_sq(0.0),
            Err(Error::ForbiddenPoint { .. })
        ));
        assert!(matches!(
            p.check_admissible(),
            Err(Error::ForbiddenPoint { .. })
        ));
    }

    #[test]
    fn rotation_angle_examples() {
        let p = |e, j| OscillatorParams::new(1.0, e, j).unwrap();
        assert!(close(p(0.0, 0.3).rotation_angle(), FRAC_PI_4, 1e-15));
        assert_eq!(p(0.5, 0.0).rotation_angle(), 0.0);
        assert!(close(p(0.2, 0.2).rotation_angle(), PI / 8.0, 1e-15));
        assert_eq!(p(0.0, 0.0).rotation_angle(), 0.0);
    }

    #[test]
    fn boundedness_examples() {
        assert!(OscillatorParams::new(1.0, 0.5, 0.5).unwrap().is_bounded());
        assert!(!OscillatorParams::new(1.0, 1.0, 0.0).unwrap().is_bounded());
        assert!(OscillatorParams::new(1.01, 0.0, 0.99).unwrap().is_bounded());
        let err = OscillatorParams::new(1.0, 1.2, 0.0)
            .unwrap()
            .check_admissible()
            .unwrap_err();
        assert!(err.to_string().contains("unbounded"));
        assert!(matches!(
            OscillatorParams::new(1.0, 1.0, 0.0).unwrap().check_admissible(),
            Err(Error::ForbiddenPoint { .. })
        ));
    }

    #[test]
    fn construction_rejects_bad_values() {
        assert!(OscillatorParams::new(0.0, 0.1, 0.1).is_err());
        assert!(OscillatorParams::new(1.0, -0.1, 0.1).is_err());
        assert!(OscillatorParams::new(1.0, 0.1, f64::NAN).is_err());
    }

    #[test]
    fn mode_pieces_swap() {
        let p = OscillatorParams::new(1.01, 0.1, 0.9).unwrap();
        let (a1, b1) = p.normal_pieces(Mode::One).unwrap();
        let (b2, a2) = p.normal_pieces(Mode::Two).unwrap();
        assert_eq!((a1, b1), (a2, b2));
        let (u, d) = p.bare_pieces(Mode::One).unwrap();
        assert!(close(u, 1.11, 1e-14) && close(d, 0.91, 1e-14));
        assert_eq!(p.bare_pieces(Mode::Two).unwrap(), (d, u));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn bounded_params() -> impl Strategy<Value = OscillatorParams> {
            (0.05f64..3.0, 0.0f64..0.999, 0.0f64..std::f64::consts::FRAC_PI_2).prop_map(
                |(w, frac, phi)| {
                    let r = frac * w;
                    OscillatorParams::new(w, r * phi.cos(), r * phi.sin()).unwrap()
                },
            )
        }

        proptest! {
            #[test]
            fn quencher_is_periodic_sign(t in 0.0f64..1e3) {
                let q = quencher(t);
                prop_assert!(q == 1.0 || q == -1.0);
                // shift by an exactly representable multiple of the period
                let k = (t / PERIOD).floor();
                prop_assert_eq!(quencher(t - k * PERIOD), q);
            }

            #[test]
            fn determinant_is_time_independent(p in bounded_params(), t in 0.0f64..50.0) {
                let (w1, w2) = p.bare_frequencies_sq(t);
                let j = p.coupling(t);
                let det = w1 * w2 - j * j;
                prop_assert!((det - p.potential_determinant()).abs() < 1e-12);
                prop_assert!(det > 0.0);
            }

            #[test]
            fn rotation_preserves_trace_and_determinant(p in bounded_params(), t in 0.0f64..50.0) {
                let (w1, w2) = p.bare_frequencies_sq(t);
                let j = p.coupling(t);
                let (n1, n2) = p.normal_frequencies_sq(t).unwrap();
                prop_assert!((n1 + n2 - 2.0 * p.omega0_sq).abs() < 1e-12);
                prop_assert!((n1 + n2 - w1 - w2).abs() < 1e-12);
                prop_assert!((n1 * n2 - (w1 * w2 - j * j)).abs() < 1e-12);
                prop_assert!(n1 > 0.0 && n2 > 0.0);
            }

            #[test]
            fn rotation_angle_is_scale_invariant(e in 0.0f64..2.0, j in 0.0f64..2.0, c in 0.01f64..100.0) {
                let a = OscillatorParams::new(1.0, e, j).unwrap().rotation_angle();
                let b = OscillatorParams::new(1.0, c * e, c * j).unwrap().rotation_angle();
                prop_assert!((a - b).abs() < 1e-14);
                prop_assert!((0.0..=std::f64::consts::FRAC_PI_4 + 1e-15).contains(&a));
            }

            #[test]
            fn angle_diagonalizes_the_potential(p in bounded_params(), t in 0.0f64..10.0) {
                let (w1, w2) = p.bare_frequencies_sq(t);
                let j = p.coupling(t);
                let (s, c) = p.rotation_angle().sin_cos();
                // off-diagonal element of R K Rᵀ with K = [[w1, -j], [-j, w2]]
                let off = s * c * (w1 - w2) - j * (c * c - s * s);
                prop_assert!(off.abs() < 1e-12);
                let (n1, _) = p.normal_frequencies_sq(t).unwrap();
                let diag = w1 * c * c + w2 * s * s + 2.0 * j * s * c;
                prop_assert!((diag - n1).abs() < 1e-12);
            }
        }
    }
}
