//! Convergence detection for integrals over [lo, infinity).

use serde::Serialize;

use super::grid::{linear_fit, log_grid};
use super::quad::{integrate_with, QuadOptions};
use crate::error::{HuntError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ConvergenceVerdict {
    Converges { value: f64, err: f64 },
    Diverges { tail_exponent: f64 },
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceReport {
    pub verdict: ConvergenceVerdict,
    /// (upper limit, partial integral)
    pub samples: Vec<(f64, f64)>,
    /// fitted exponent p of f(z) ~ z^p over the last two decades
    pub tail_exponent: f64,
}

impl ConvergenceReport {
    pub fn converges(&self) -> bool {
        matches!(self.verdict, ConvergenceVerdict::Converges { .. })
    }
    pub fn diverges(&self) -> bool {
        matches!(self.verdict, ConvergenceVerdict::Diverges { .. })
    }
    pub fn value(&self) -> Option<f64> {
        match self.verdict {
            ConvergenceVerdict::Converges { value, .. } => Some(value),
            _ => None,
        }
    }

    /// Scales every partial and the value by 2 (symmetric integrands).
    pub fn double(&mut self) {
        for s in &mut self.samples {
            s.1 *= 2.0;
        }
        if let ConvergenceVerdict::Converges { value, err } = &mut self.verdict {
            *value *= 2.0;
            *err *= 2.0;
        }
    }
}

#[derive(Debug, Clone)]
pub struct ImproperOptions {
    /// geometric upper limits at which partial integrals are recorded
    pub upper_limits: Vec<f64>,
    /// band around exponent -1 treated as undecidable
    pub margin: f64,
    /// relative agreement required between successive extrapolated partials
    pub cauchy_rel: f64,
    pub quad_rel: f64,
}

impl Default for ImproperOptions {
    fn default() -> Self {
        Self {
            upper_limits: (1..=6).map(|k| 10f64.powi(k)).collect(),
            margin: 0.05,
            cauchy_rel: 1e-4,
            quad_rel: 1e-10,
        }
    }
}

impl ImproperOptions {
    pub fn up_to(zmax: f64) -> Self {
        let top = zmax.log10().ceil() as i32;
        let mut upper: Vec<f64> = (1..top).map(|k| 10f64.powi(k)).collect();
        upper.push(zmax);
        Self { upper_limits: upper, ..Self::default() }
    }
}

/// Local power-law exponent between z/2 and z, or the fitted one when the
/// local ratio is unusable.
fn local_exponent<F: Fn(f64) -> f64>(f: &F, z: f64, fallback: f64) -> f64 {
    let (a, b) = (f(z / 2.0), f(z));
    if a > 0.0 && b > 0.0 {
        let p = (b / a).ln() / 2f64.ln();
        if (p - fallback).abs() < 0.1 {
            return p;
        }
    }
    fallback
}

pub fn integrate_improper<F: Fn(f64) -> f64>(f: F, lo: f64, opts: &ImproperOptions) -> Result<ConvergenceReport> {
    let limits: Vec<f64> = opts.upper_limits.iter().cloned().filter(|&u| u > lo).collect();
    if limits.len() < 2 {
        return Err(HuntError::InvalidParameter("need at least two upper limits above lo".into()));
    }
    let qopts = QuadOptions { rel_tol: opts.quad_rel, abs_tol: 1e-15, max_subdivisions: 4000, ..Default::default() };
    let mut samples = Vec::with_capacity(limits.len());
    let mut partial = 0.0;
    let mut quad_err = 0.0;
    let mut prev = lo;
    for &u in &limits {
        let r = integrate_with(&f, prev, u, &qopts).or_else(|e| match e {
            HuntError::MaxSubdivisions { estimate, error } if error <= 1e-6 * estimate.abs().max(1e-300) => {
                Ok(super::quad::QuadResult { value: estimate, error, evaluations: 0 })
            }
            HuntError::MaxSubdivisions { estimate, error } => Err(HuntError::QuadratureFailure { estimate, error }),
            other => Err(other),
        })?;
        partial += r.value;
        quad_err += r.error;
        samples.push((u, partial));
        prev = u;
    }

    let umax = *limits.last().unwrap();
    let zs = log_grid((umax / 100.0).log10(), umax.log10(), 12);
    let vals: Vec<f64> = zs.iter().map(|&z| f(z).abs()).collect();
    if vals.iter().all(|&v| v == 0.0) {
        let (_, last) = *samples.last().unwrap();
        return Ok(ConvergenceReport {
            verdict: ConvergenceVerdict::Converges { value: last, err: quad_err },
            samples,
            tail_exponent: f64::NEG_INFINITY,
        });
    }
    let logs: Vec<f64> = vals.iter().map(|v| v.max(1e-300).ln()).collect();
    let lz: Vec<f64> = zs.iter().map(|z| z.ln()).collect();
    let p = linear_fit(&lz, &logs).slope;

    let verdict = if p < -1.0 - opts.margin {
        let extrapolate = |u: f64, part: f64| {
            let pl = local_exponent(&f, u, p);
            part + f(u) * u / (-(pl + 1.0))
        };
        let n = samples.len();
        let (u1, s1) = samples[n - 2];
        let (u2, s2) = samples[n - 1];
        let e1 = extrapolate(u1, s1);
        let e2 = extrapolate(u2, s2);
        let diff = (e2 - e1).abs();
        if diff <= opts.cauchy_rel * e2.abs() + 1e-12 {
            ConvergenceVerdict::Converges { value: e2, err: diff + quad_err }
        } else {
            ConvergenceVerdict::Inconclusive
        }
    } else if p >= -1.0 + opts.margin {
        ConvergenceVerdict::Diverges { tail_exponent: p }
    } else {
        ConvergenceVerdict::Inconclusive
    };
    Ok(ConvergenceReport { verdict, samples, tail_exponent: p })
}
