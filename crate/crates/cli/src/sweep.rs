//! Witness-versus-p sweep over the Werner family.
//!
//! Point `i` of the grid samples with seed `derive_seed(master, i)`, and each
//! of its three settings derives its own stream from that, so rows do not
//! depend on evaluation order or thread count.

use polwit_core::polarimeter::{derive_seed, measure_witness, SimulationConfig};
use polwit_core::states::{werner, WernerParam};
use polwit_core::witness::{ppt_check, witness_analytic_werner};
use polwit_core::Error as CoreError;
use rayon::prelude::*;
use thiserror::Error;

pub const HEADER: &str = "p,w_est,w_err,w_analytic,ppt_min_eig,entangled_ppt";

/// Significant digits of every printed number.
pub const SIG_DIGITS: usize = 12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SweepError {
    #[error("sweep grid is empty")]
    EmptyGrid,

    #[error("sweep point p = {p}: {source}")]
    Point { p: f64, source: CoreError },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub p_values: Vec<f64>,
    pub simulation: SimulationConfig,
    /// Report the closed-form line without sampling.
    pub analytic_only: bool,
}

impl SweepConfig {
    pub fn new(
        p_values: Vec<f64>,
        simulation: SimulationConfig,
        analytic_only: bool,
    ) -> Result<Self, SweepError> {
        if p_values.is_empty() {
            return Err(SweepError::EmptyGrid);
        }
        for &p in &p_values {
            WernerParam::new(p).map_err(|source| SweepError::Point { p, source })?;
        }
        Ok(Self {
            p_values,
            simulation,
            analytic_only,
        })
    }
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            p_values: grid(0.0, 1.0, 10),
            simulation: SimulationConfig::default(),
            analytic_only: false,
        }
    }
}

/// `steps + 1` evenly spaced points from `p_min` to `p_max` inclusive.
///
/// `steps = 0` yields `p_min` alone.
pub fn grid(p_min: f64, p_max: f64, steps: usize) -> Vec<f64> {
    if steps == 0 {
        return vec![p_min];
    }
    (0..=steps)
        .map(|i| {
            if i == steps {
                p_max
            } else {
                p_min + (p_max - p_min) * i as f64 / steps as f64
            }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub p: f64,
    pub w_est: f64,
    pub w_err: f64,
    pub w_analytic: f64,
    pub ppt_min_eig: f64,
    pub entangled_ppt: bool,
}

fn sweep_point(cfg: &SweepConfig, index: usize, p: f64) -> Result<SweepRow, SweepError> {
    let param = WernerParam::new(p).map_err(|source| SweepError::Point { p, source })?;
    let rho = werner(param);
    let w_analytic = witness_analytic_werner(param);
    let (w_est, w_err) = if cfg.analytic_only {
        (w_analytic, 0.0)
    } else {
        let sim = cfg
            .simulation
            .with_seed(derive_seed(cfg.simulation.seed, index as u64));
        let (_, est) =
            measure_witness(&rho, &sim).map_err(|source| SweepError::Point { p, source })?;
        (est.value, est.std_error)
    };
    let ppt = ppt_check(&rho);
    Ok(SweepRow {
        p,
        w_est,
        w_err,
        w_analytic,
        ppt_min_eig: ppt.min_eigenvalue,
        entangled_ppt: ppt.entangled,
    })
}

/// Evaluates every grid point, in parallel, returning rows in input order.
pub fn run_sweep(cfg: &SweepConfig) -> Result<Vec<SweepRow>, SweepError> {
    if cfg.p_values.is_empty() {
        return Err(SweepError::EmptyGrid);
    }
    cfg.p_values
        .par_iter()
        .enumerate()
        .map(|(i, &p)| sweep_point(cfg, i, p))
        .collect()
}

/// Formats like C's `%.{digits}g`.
pub fn format_sig(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let digits = digits.max(1);
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -5 || exp >= digits as i32 {
        let mantissa = trim_fraction(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_fraction(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_fraction(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Header line followed by one comma-separated row per point.
pub fn to_csv(rows: &[SweepRow]) -> String {
    let mut out = String::with_capacity(64 * (rows.len() + 1));
    out.push_str(HEADER);
    out.push('\n');
    for r in rows {
        let fields =
            [r.p, r.w_est, r.w_err, r.w_analytic, r.ppt_min_eig].map(|x| format_sig(x, SIG_DIGITS));
        out.push_str(&fields.join(","));
        out.push(',');
        out.push_str(if r.entangled_ppt { "true" } else { "false" });
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_grid_is_tenths() {
        let g = grid(0.0, 1.0, 10);
        assert_eq!(g.len(), 11);
        for (i, p) in g.iter().enumerate() {
            assert_eq!(*p, i as f64 / 10.0);
        }
        assert_eq!(grid(0.2, 0.9, 0), vec![0.2]);
        assert_eq!(*grid(0.2, 0.9, 7).last().unwrap(), 0.9);
    }

    #[test]
    fn sig_formatting() {
        assert_eq!(format_sig(0.25, 12), "0.25");
        assert_eq!(format_sig(-0.125, 12), "-0.125");
        assert_eq!(format_sig(1.0 / 3.0, 12), "0.333333333333");
        assert_eq!(format_sig(-0.0, 12), "0");
        assert_eq!(format_sig(1.23456789e-9, 12), "1.23456789e-09");
        assert_eq!(format_sig(0.0011122233344455, 12), "0.00111222333445");
        assert_eq!(format_sig(123456.0, 12), "123456");
        assert_eq!(format_sig(1e15, 12), "1e+15");
    }

    #[test]
    fn analytic_sweep_is_exact() {
        let cfg = SweepConfig {
            analytic_only: true,
            ..SweepConfig::default()
        };
        let rows = run_sweep(&cfg).unwrap();
        assert_eq!(rows.len(), 11);
        for r in &rows {
            assert_eq!(r.w_est, (1.0 - 3.0 * r.p) / 4.0);
            assert_eq!(r.w_err, 0.0);
            assert!((r.ppt_min_eig - r.w_analytic).abs() < 1e-10);
            assert_eq!(r.entangled_ppt, r.p > 1.0 / 3.0);
        }
        assert!(rows[3].w_analytic > 0.0 && rows[4].w_analytic < 0.0);
    }

    #[test]
    fn csv_layout() {
        let cfg = SweepConfig {
            analytic_only: true,
            ..SweepConfig::default()
        };
        let text = to_csv(&run_sweep(&cfg).unwrap());
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], HEADER);
        assert_eq!(lines.len(), 12);
        assert_eq!(lines[1], "0,0.25,0,0.25,0.25,false");
        assert_eq!(lines[11], "1,-0.5,0,-0.5,-0.5,true");
    }

    #[test]
    fn rejects_bad_points() {
        let sim = SimulationConfig::default();
        assert_eq!(
            SweepConfig::new(vec![], sim, false),
            Err(SweepError::EmptyGrid)
        );
        let err = SweepConfig::new(vec![0.5, 1.2], sim, false).unwrap_err();
        assert!(matches!(err, SweepError::Point { p, .. } if p == 1.2));
        assert!(err.to_string().contains("1.2"));
    }

    #[test]
    fn sampled_sweep_is_seed_deterministic() {
        let cfg = SweepConfig {
            simulation: SimulationConfig::default().with_seed(42),
            ..SweepConfig::default()
        };
        let a = to_csv(&run_sweep(&cfg).unwrap());
        let b = to_csv(&run_sweep(&cfg).unwrap());
        assert_eq!(a, b);
        let other = SweepConfig {
            simulation: SimulationConfig::default().with_seed(43),
            ..SweepConfig::default()
        };
        assert_ne!(a, to_csv(&run_sweep(&other).unwrap()));
    }
}
