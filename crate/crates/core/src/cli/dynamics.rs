//! Time series of the vacuum observables at one parameter point.

use std::io::Write;

use serde::Serialize;

use super::{fmt_float, CliError};
use crate::hill::StabilityResult;
use crate::model::{OscillatorParams, HALF_PERIOD};
use crate::observables::{LogBase, ObservableRecord, VacuumEvolution};

pub const DYNAMICS_HEADER: &str = "t,h1,h2,nu1,nu2,N1,N2,M12,mu,lambda_min,E_N";

/// `samples` uniform times on `[0, horizon]`, with every quench instant
/// `kπ/2` inside the horizon moved onto its nearest sample.
pub fn sample_times(horizon: f64, samples: usize) -> Vec<f64> {
    let dt = horizon / (samples - 1) as f64;
    let mut t: Vec<f64> = (0..samples).map(|i| i as f64 * dt).collect();
    t[samples - 1] = horizon;
    let mut k = 1u64;
    loop {
        let q = k as f64 * HALF_PERIOD;
        if q > horizon + 0.5 * dt {
            break;
        }
        let i = ((q / dt).round() as usize).min(samples - 1);
        t[i] = q;
        k += 1;
    }
    t
}

pub fn dynamics(params: &OscillatorParams, horizon: f64, samples: usize, base: LogBase) -> Result<Vec<ObservableRecord>, CliError> {
    let ev = VacuumEvolution::new(params)?;
    sample_times(horizon, samples)
        .into_iter()
        .map(|t| ev.record(t, base).map_err(CliError::from))
        .collect()
}

pub fn write_dynamics<W: Write>(out: W, rows: &[ObservableRecord]) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(DYNAMICS_HEADER.split(','))?;
    for r in rows {
        w.write_record(
            [r.t, r.h1, r.h2, r.nu1, r.nu2, r.n1, r.n2, r.m12, r.mu, r.lambda_min, r.e_n].map(fmt_float),
        )?;
    }
    w.flush()?;
    Ok(())
}

/// Single-point report, keys in a fixed order.
#[derive(Debug, Clone, Serialize)]
pub struct PointReport {
    pub omega0_sq: f64,
    pub epsilon: f64,
    pub j0: f64,
    pub t: f64,
    pub h1: f64,
    pub h2: f64,
    pub nu1: f64,
    pub nu2: f64,
    #[serde(rename = "N1")]
    pub n1: f64,
    #[serde(rename = "N2")]
    pub n2: f64,
    #[serde(rename = "M12")]
    pub m12: f64,
    pub mu: f64,
    pub lambda_min: f64,
    #[serde(rename = "E_N")]
    pub e_n: f64,
    pub log_base: LogBase,
    #[serde(rename = "Lambda")]
    pub lambda: f64,
    #[serde(rename = "S")]
    pub s: f64,
    pub growth_rate: f64,
    pub class: &'static str,
}

pub fn point_report(params: &OscillatorParams, t: f64, base: LogBase) -> Result<PointReport, CliError> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(CliError::config("t", format!("must be finite and non-negative, got {t}")));
    }
    let ev = VacuumEvolution::new(params)?;
    let r = ev.record(t, base)?;
    let st: StabilityResult = ev.stability();
    Ok(PointReport {
        omega0_sq: params.omega0_sq,
        epsilon: params.epsilon,
        j0: params.j0,
        t,
        h1: r.h1,
        h2: r.h2,
        nu1: r.nu1,
        nu2: r.nu2,
        n1: r.n1,
        n2: r.n2,
        m12: r.m12,
        mu: r.mu,
        lambda_min: r.lambda_min,
        e_n: r.e_n,
        log_base: base,
        lambda: st.lambda,
        s: st.s,
        growth_rate: st.growth_rate,
        class: if st.is_stable() { "stable" } else { "unstable" },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn quench_instants_are_samples() {
        let t = sample_times(PI, 1000);
        assert_eq!(t.len(), 1000);
        assert!(t.contains(&HALF_PERIOD));
        assert_eq!(t[999], PI);
        assert!(t.windows(2).all(|w| w[1] > w[0]));
        let t = sample_times(4.0 * PI, 1000);
        for k in 1..=8 {
            assert!(t.contains(&(k as f64 * HALF_PERIOD)));
        }
    }

    #[test]
    fn point_a_is_silent() {
        let p = OscillatorParams::new(1.01, 0.0, 0.0).unwrap();
        let rows = dynamics(&p, PI, 50, LogBase::Natural).unwrap();
        assert_eq!(rows.len(), 50);
        assert!(rows.iter().all(|r| r.n1.abs() < 1e-12 && r.n2.abs() < 1e-12 && r.e_n == 0.0));
    }

    #[test]
    fn report_keys() {
        let p = OscillatorParams::new(1.01, 0.1, 0.0).unwrap();
        let rep = point_report(&p, 0.0, LogBase::Natural).unwrap();
        assert!((rep.lambda - 1.005).abs() < 1e-3);
        assert_eq!(rep.class, "unstable");
        let json = serde_json::to_string(&rep).unwrap();
        for key in ["\"N1\"", "\"N2\"", "\"E_N\"", "\"Lambda\"", "\"class\""] {
            assert!(json.contains(key), "{json}");
        }
    }
}
