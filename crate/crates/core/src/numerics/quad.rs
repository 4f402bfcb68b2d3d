//! Adaptive Gauss-Kronrod quadrature on finite intervals.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::gauss::{G7_WEIGHTS, GK15_NODES, GK15_WEIGHTS};
use crate::error::{HuntError, Result};

/// Which endpoints carry an integrable algebraic singularity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SingularEndpoints {
    #[default]
    None,
    Left,
    Right,
    Both,
}

#[derive(Debug, Clone)]
pub struct QuadOptions {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
    pub singular: SingularEndpoints,
}

impl Default for QuadOptions {
    fn default() -> Self {
        Self { rel_tol: 1e-10, abs_tol: 1e-14, max_subdivisions: 2000, singular: SingularEndpoints::None }
    }
}

impl QuadOptions {
    pub fn with_tol(tol: f64) -> Self {
        Self { rel_tol: tol, abs_tol: tol * 1e-4, ..Self::default() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
}

struct Segment {
    lo: f64,
    hi: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.partial_cmp(&other.error).unwrap_or(Ordering::Equal)
    }
}

fn gk15<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64) -> (f64, f64) {
    let c = 0.5 * (lo + hi);
    let h = 0.5 * (hi - lo);
    let fc = f(c);
    let mut kron = fc * GK15_WEIGHTS[7];
    let mut gauss = fc * G7_WEIGHTS[3];
    for i in 0..7 {
        let dx = h * GK15_NODES[i];
        let s = f(c - dx) + f(c + dx);
        kron += GK15_WEIGHTS[i] * s;
        if i % 2 == 1 {
            gauss += G7_WEIGHTS[i / 2] * s;
        }
    }
    (kron * h, ((kron - gauss) * h).abs())
}

/// Integrates `f` over `[lo, hi]` to `max(rel_tol * |I|, abs_tol)`.
pub fn integrate_adaptive<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, tol: f64) -> Result<QuadResult> {
    integrate_with(&f, lo, hi, &QuadOptions::with_tol(tol))
}

pub fn integrate_with<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64, opts: &QuadOptions) -> Result<QuadResult> {
    if lo == hi {
        return Ok(QuadResult { value: 0.0, error: 0.0, evaluations: 0 });
    }
    if lo > hi {
        let r = integrate_with(f, hi, lo, opts)?;
        return Ok(QuadResult { value: -r.value, ..r });
    }
    let width = hi - lo;
    match opts.singular {
        SingularEndpoints::None => gk_adaptive(f, lo, hi, opts),
        // x = lo + w u^2 removes an x^{-1/2}-type singularity at lo
        SingularEndpoints::Left => {
            let g = |u: f64| 2.0 * width * u * f(lo + width * u * u);
            gk_adaptive(&g, 0.0, 1.0, opts)
        }
        SingularEndpoints::Right => {
            let g = |u: f64| 2.0 * width * u * f(hi - width * u * u);
            gk_adaptive(&g, 0.0, 1.0, opts)
        }
        SingularEndpoints::Both => {
            let mid = 0.5 * (lo + hi);
            let left = QuadOptions { singular: SingularEndpoints::Left, ..opts.clone() };
            let right = QuadOptions { singular: SingularEndpoints::Right, ..opts.clone() };
            let a = integrate_with(f, lo, mid, &left)?;
            let b = integrate_with(f, mid, hi, &right)?;
            Ok(QuadResult {
                value: a.value + b.value,
                error: a.error + b.error,
                evaluations: a.evaluations + b.evaluations,
            })
        }
    }
}

fn gk_adaptive<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64, opts: &QuadOptions) -> Result<QuadResult> {
    let (v, e) = gk15(f, lo, hi);
    let mut heap = BinaryHeap::new();
    heap.push(Segment { lo, hi, value: v, error: e });
    let mut total = v;
    let mut total_err = e;
    let mut evaluations = 15;
    let mut subdivisions = 1;
    loop {
        if !total.is_finite() || !total_err.is_finite() {
            return Err(HuntError::EvaluationFailure(format!(
                "non-finite integrand on [{lo}, {hi}]"
            )));
        }
        if total_err <= opts.abs_tol.max(opts.rel_tol * total.abs()) {
            break;
        }
        if subdivisions >= opts.max_subdivisions {
            return Err(HuntError::MaxSubdivisions { estimate: total, error: total_err });
        }
        let worst = heap.pop().expect("heap never empty");
        let mid = 0.5 * (worst.lo + worst.hi);
        if mid <= worst.lo || mid >= worst.hi {
            // interval exhausted at machine precision
            heap.push(Segment { error: 0.0, ..worst });
            total_err = heap.iter().map(|s| s.error).sum();
            if total_err == 0.0 {
                break;
            }
            continue;
        }
        let (v1, e1) = gk15(f, worst.lo, mid);
        let (v2, e2) = gk15(f, mid, worst.hi);
        evaluations += 30;
        subdivisions += 1;
        total += v1 + v2 - worst.value;
        total_err += e1 + e2 - worst.error;
        heap.push(Segment { lo: worst.lo, hi: mid, value: v1, error: e1 });
        heap.push(Segment { lo: mid, hi: worst.hi, value: v2, error: e2 });
        if subdivisions % 64 == 0 {
            // refresh sums to shed accumulated rounding
            total = heap.iter().map(|s| s.value).sum();
            total_err = heap.iter().map(|s| s.error).sum();
        }
    }
    let value: f64 = heap.iter().map(|s| s.value).sum();
    Ok(QuadResult { value, error: total_err.max(0.0), evaluations })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn polynomial_and_trig_examples() {
        let r = integrate_adaptive(|x| x * x, 0.0, 1.0, 1e-12).unwrap();
        assert!((r.value - 1.0 / 3.0).abs() < 1e-10);
        let r = integrate_adaptive(f64::sin, 0.0, PI, 1e-12).unwrap();
        assert!((r.value - 2.0).abs() < 1e-10);
    }

    #[test]
    fn cubics_are_exact() {
        for &(a, b, c, d) in &[(1.0, -2.0, 3.0, 0.5), (0.0, 4.0, 0.0, -1.0), (2.5, 0.0, -7.0, 3.0)] {
            let f = |x: f64| a + b * x + c * x * x + d * x * x * x;
            let exact = |x: f64| a * x + b * x * x / 2.0 + c * x.powi(3) / 3.0 + d * x.powi(4) / 4.0;
            let r = integrate_adaptive(f, -1.3, 2.1, 1e-12).unwrap();
            assert!((r.value - (exact(2.1) - exact(-1.3))).abs() < 1e-12);
        }
    }

    #[test]
    fn declared_endpoint_singularity() {
        let opts = QuadOptions { singular: SingularEndpoints::Left, ..QuadOptions::with_tol(1e-10) };
        let r = integrate_with(&|x: f64| 1.0 / x.sqrt(), 0.0, 1.0, &opts).unwrap();
        assert!((r.value - 2.0).abs() < 1e-8);
    }

    #[test]
    fn reversed_bounds_flip_sign() {
        let r = integrate_adaptive(|x| x, 1.0, 0.0, 1e-12).unwrap();
        assert!((r.value + 0.5).abs() < 1e-14);
    }

    #[test]
    fn subdivision_limit_reported() {
        let opts = QuadOptions { max_subdivisions: 3, ..QuadOptions::with_tol(1e-15) };
        let err = integrate_with(&|x: f64| (1.0 / x).sin(), 1e-6, 1.0, &opts).unwrap_err();
        assert!(matches!(err, HuntError::MaxSubdivisions { .. }));
    }
}
