//! Brute-force second moments of the two-mode vacuum by 2-D quadrature.
//!
//! The wavefunction `exp(−½A₁x₁² − ½A₂x₂² + A₁₂x₁x₂)` and its analytic
//! gradient are sampled on a square grid spanning eight standard deviations
//! of the widest marginal; the trapezoidal rule is refined until every
//! moment is stable. Symplectic eigenvalues of the assembled covariance
//! matrix are then obtained from a singular value decomposition.

use std::f64::consts::PI;

use nalgebra::{Matrix2, Matrix4};
use num_complex::Complex64;

use super::VacuumCoefficients;
use crate::error::{Error, Result};

const SPAN_SIGMAS: f64 = 8.0;
const START_POINTS: usize = 64;
const MAX_POINTS: usize = 8192;
const REFINE_TOL: f64 = 1e-8;

/// Moments, covariance matrix and symplectic spectra of the vacuum.
#[derive(Debug, Clone)]
pub struct QuadratureMoments {
    /// `∫|ψ|²` including the `(ϖ₁ϖ₂/π²)^¼` prefactor; one for a valid state.
    pub norm: f64,
    /// `⟨x_j x_k⟩`.
    pub xx: [[f64; 2]; 2],
    /// `⟨p_j p_k⟩`.
    pub pp: [[f64; 2]; 2],
    /// `½⟨x_j p_k + p_k x_j⟩`.
    pub xp: [[f64; 2]; 2],
    /// Covariance matrix in `(x₁, p₁, x₂, p₂)` order, vacuum = identity.
    pub covariance: Matrix4<f64>,
    /// Symplectic eigenvalues, ascending.
    pub symplectic: [f64; 2],
    /// Symplectic eigenvalues after `p₂ → −p₂`, ascending.
    pub pt_symplectic: [f64; 2],
    /// Points per axis of the accepted grid.
    pub grid: usize,
}

#[derive(Debug, Clone, Copy)]
struct RawMoments {
    norm: f64,
    xx: [[f64; 2]; 2],
    pp: [[f64; 2]; 2],
    xp: [[f64; 2]; 2],
}

impl RawMoments {
    fn flat(&self) -> [f64; 12] {
        [
            self.xx[0][0], self.xx[0][1], self.xx[1][1],
            self.pp[0][0], self.pp[0][1], self.pp[1][1],
            self.xp[0][0], self.xp[0][1], self.xp[1][0], self.xp[1][1],
            self.norm, 0.0,
        ]
    }
}

fn integrate(c: &VacuumCoefficients, half_width: f64, n: usize) -> RawMoments {
    let h = 2.0 * half_width / (n - 1) as f64;
    let (a1, a2, a12) = (c.a1, c.a2, c.a12);
    let minus_i = Complex64::new(0.0, -1.0);
    let mut acc = RawMoments {
        norm: 0.0,
        xx: [[0.0; 2]; 2],
        pp: [[0.0; 2]; 2],
        xp: [[0.0; 2]; 2],
    };
    let weight = |i: usize| if i == 0 || i == n - 1 { 0.5 } else { 1.0 };
    for i in 0..n {
        let x1 = -half_width + i as f64 * h;
        let wi = weight(i);
        for k in 0..n {
            let x2 = -half_width + k as f64 * h;
            // |ψ|² and ∂_j ψ / ψ
            let expo = -a1.re * x1 * x1 - a2.re * x2 * x2 + 2.0 * a12.re * x1 * x2;
            let w = wi * weight(k) * expo.exp();
            if w == 0.0 {
                continue;
            }
            let d = [-a1 * x1 + a12 * x2, -a2 * x2 + a12 * x1];
            let x = [x1, x2];
            acc.norm += w;
            for j in 0..2 {
                for l in 0..2 {
                    acc.xx[j][l] += w * x[j] * x[l];
                    acc.pp[j][l] += w * (d[j].conj() * d[l]).re;
                    acc.xp[j][l] += w * x[j] * (minus_i * d[l]).re;
                }
            }
        }
    }
    let norm = acc.norm;
    for j in 0..2 {
        for l in 0..2 {
            acc.xx[j][l] /= norm;
            acc.pp[j][l] /= norm;
            acc.xp[j][l] /= norm;
        }
    }
    // prefactor (ϖ₁ϖ₂/π²)^½ of |ψ|²
    acc.norm = norm * h * h * (c.varpi1 * c.varpi2).sqrt() / PI;
    acc
}

/// Symplectic eigenvalues (ascending) of a 4×4 two-mode covariance matrix.
///
/// They are the singular values of `V^½ Ω V^½`, each appearing twice.
pub fn symplectic_eigenvalues(v: &Matrix4<f64>) -> [f64; 2] {
    let eig = v.symmetric_eigen();
    let sqrt_diag = Matrix4::from_diagonal(&eig.eigenvalues.map(|e| e.max(0.0).sqrt()));
    let root = eig.eigenvectors * sqrt_diag * eig.eigenvectors.transpose();
    let j = Matrix2::new(0.0, 1.0, -1.0, 0.0);
    let mut omega = Matrix4::zeros();
    omega.fixed_view_mut::<2, 2>(0, 0).copy_from(&j);
    omega.fixed_view_mut::<2, 2>(2, 2).copy_from(&j);
    let k = root * omega * root;
    let mut sv: Vec<f64> = k.singular_values().iter().copied().collect();
    sv.sort_by(|a, b| a.partial_cmp(b).unwrap());
    [0.5 * (sv[0] + sv[1]), 0.5 * (sv[2] + sv[3])]
}

/// Numerically integrated moments of the vacuum with coefficients `c`.
pub fn quadrature_oracle(c: &VacuumCoefficients) -> Result<QuadratureMoments> {
    let p = Matrix2::new(2.0 * c.a1.re, -2.0 * c.a12.re, -2.0 * c.a12.re, 2.0 * c.a2.re);
    let cov = p.try_inverse().ok_or_else(|| {
        Error::Domain("vacuum coefficients do not define a normalizable state".into())
    })?;
    if !(cov[(0, 0)] > 0.0 && cov[(1, 1)] > 0.0 && p.determinant() > 0.0) {
        return Err(Error::Domain(
            "vacuum coefficients do not define a normalizable state".into(),
        ));
    }
    let half_width = SPAN_SIGMAS * cov[(0, 0)].max(cov[(1, 1)]).sqrt();

    let mut n = START_POINTS;
    let mut prev = integrate(c, half_width, n);
    let (moments, grid) = loop {
        let next_n = 2 * n - 1;
        if next_n > MAX_POINTS {
            let change = max_change(&prev, &integrate(c, half_width, n));
            return Err(Error::NonConverged { grid: n, change });
        }
        let next = integrate(c, half_width, next_n);
        let change = max_change(&prev, &next);
        n = next_n;
        prev = next;
        if change <= REFINE_TOL {
            break (next, n);
        }
    };

    let mut v = Matrix4::zeros();
    for j in 0..2 {
        for l in 0..2 {
            v[(2 * j, 2 * l)] = 2.0 * moments.xx[j][l];
            v[(2 * j + 1, 2 * l + 1)] = 2.0 * moments.pp[j][l];
            v[(2 * j, 2 * l + 1)] = 2.0 * moments.xp[j][l];
            v[(2 * l + 1, 2 * j)] = 2.0 * moments.xp[j][l];
        }
    }
    let mut flip = Matrix4::identity();
    flip[(3, 3)] = -1.0;
    let v_pt = flip * v * flip;

    Ok(QuadratureMoments {
        norm: moments.norm,
        xx: moments.xx,
        pp: moments.pp,
        xp: moments.xp,
        covariance: v,
        symplectic: symplectic_eigenvalues(&v),
        pt_symplectic: symplectic_eigenvalues(&v_pt),
        grid,
    })
}

/// Largest change between refinements, relative for entries above one.
fn max_change(a: &RawMoments, b: &RawMoments) -> f64 {
    a.flat()
        .iter()
        .zip(b.flat())
        .map(|(x, y)| (x - y).abs() / y.abs().max(1.0))
        .fold(0.0, f64::max)
}
