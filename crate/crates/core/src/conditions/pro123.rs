//! The lambda-limit characterisation of (H), evaluated for one test measure nu.

use super::diagram::GrowthFunctionFamily;
use super::sampling::Settings;
use super::verdict::{Status, Verdict};
use crate::error::{HuntError, Result};
use crate::exponent::{measure_fourier, one_energy, ExponentHandle};
use crate::model::FiniteMeasure;
use crate::numerics::{default_lambda_grid, gauss_legendre, integrate_adaptive, limit_lambda, log_grid, LimitVerdict};

const GL_ORDER: usize = 10;
const NODE_BUDGET: usize = 4_000_000;

struct Sampled {
    /// quadrature weight times |nu_hat|^2, zero outside {B > A f(A)}
    weight: Vec<f64>,
    b2: Vec<f64>,
    zmax: f64,
    /// (B, |nu_hat|^2 mean, exponent of B) at the top when the region reaches it
    tail: Option<(f64, f64, f64)>,
}

fn bandwidth(h: &ExponentHandle, nu: &FiniteMeasure) -> f64 {
    let xs: Vec<f64> = nu.atoms.iter().filter(|a| a.w > 0.0).map(|a| a.x[0]).collect();
    let spread = xs.iter().flat_map(|x| xs.iter().map(move |y| (x - y).abs())).fold(0.0, f64::max);
    let jumps = h.triplet().mu.parts().atoms.iter().map(|a| a.x[0].abs()).fold(0.0, f64::max);
    spread + 2.0 * jumps
}

fn sample(h: &ExponentHandle, nu: &FiniteMeasure, f: GrowthFunctionFamily, zmax: f64, s: &Settings) -> Result<Sampled> {
    let w = bandwidth(h, nu);
    let mut edges = vec![0.0];
    edges.extend(log_grid(s.zmin_exp, zmax.log10(), s.per_decade));
    let (gx, gw) = gauss_legendre(GL_ORDER);
    let mut nodes = Vec::new();
    let mut weights = Vec::new();
    for pair in edges.windows(2) {
        let (lo, hi) = (pair[0], pair[1]);
        let m = if w > 0.0 { ((hi - lo) * w / std::f64::consts::PI).ceil().max(1.0) as usize } else { 1 };
        if nodes.len() + m * GL_ORDER > NODE_BUDGET {
            return Err(HuntError::Unsupported(format!(
                "|nu_hat|^2 oscillates too fast to resolve up to z = {zmax:e}"
            )));
        }
        let step = (hi - lo) / m as f64;
        for k in 0..m {
            let a = lo + k as f64 * step;
            for (x, wt) in gx.iter().zip(&gw) {
                nodes.push(a + 0.5 * step * (x + 1.0));
                weights.push(0.5 * step * wt);
            }
        }
    }
    let parts = h.parts_grid(&nodes)?;
    let mut weight = Vec::with_capacity(nodes.len());
    let mut b2 = Vec::with_capacity(nodes.len());
    for ((z, wt), p) in nodes.iter().zip(&weights).zip(&parts) {
        let inside = p.b > p.a * f.eval(p.a);
        let nf = measure_fourier(nu, &[*z]).norm_sqr();
        weight.push(if inside { wt * nf } else { 0.0 });
        b2.push(p.b * p.b);
    }
    let top = h.parts1(zmax)?;
    let tail = if top.b > top.a * f.eval(top.a) {
        let below = h.parts1(zmax / 10f64.sqrt())?;
        let p = (top.b / below.b).ln() / 10f64.sqrt().ln();
        let mean = if w > 0.0 {
            nu.atoms.iter().map(|a| a.w * a.w).sum()
        } else {
            measure_fourier(nu, &[zmax]).norm_sqr()
        };
        Some((top.b, mean, p))
    } else {
        None
    };
    Ok(Sampled { weight, b2, zmax, tail })
}

impl Sampled {
    /// int over R of lambda/(lambda^2 + B^2) |nu_hat|^2 on the region.
    fn value(&self, lambda: f64) -> Result<f64> {
        let body: f64 = self.weight.iter().zip(&self.b2).map(|(w, b2)| w * lambda / (lambda * lambda + b2)).sum();
        let tail = match self.tail {
            None => 0.0,
            Some((_, _, p)) if p <= 0.55 => {
                return Err(HuntError::EvaluationFailure(format!("B grows like z^{p:.2}; tail not integrable")));
            }
            Some((bz, mean, p)) => {
                // B(z) ~ bz (z/zmax)^p beyond zmax, u = ln(z / zmax)
                let g = |u: f64| lambda / (lambda * lambda + bz * bz * (2.0 * p * u).exp()) * self.zmax * u.exp();
                let umax = (60.0 / (2.0 * p - 1.0)).min(700.0);
                mean * integrate_adaptive(g, 0.0, umax, 1e-10)?.value
            }
        };
        Ok(2.0 * (body + tail))
    }
}

/// Holds for this nu when the integral tends to zero as lambda grows.
pub fn pro123_limit(h: &ExponentHandle, nu: &FiniteMeasure, f: GrowthFunctionFamily, s: &Settings) -> Verdict {
    if h.dim() != 1 {
        return Verdict::unknown("pro123", "implemented for one-dimensional processes only");
    }
    let energy = match one_energy(nu, h, s.zmax, 1e-8) {
        Ok(r) if r.converges() => r,
        Ok(_) => return Verdict::unknown("pro123", "nu not of finite 1-energy"),
        Err(e) => return Verdict::unknown("pro123", format!("1-energy evaluation failed: {e}")),
    };
    let grid = default_lambda_grid();
    let top_lambda = grid.last().copied().unwrap_or(1e6);
    let oscillating = bandwidth(h, nu) > 0.0;
    let zmax = if oscillating { s.zmax } else { s.zmax.max(1e3 * top_lambda) };
    let run = || -> Result<_> {
        let sampled = sample(h, nu, f, zmax, s)?;
        limit_lambda(|l| sampled.value(l), &grid, s.tol)
    };
    let report = match run() {
        Ok(r) => r,
        Err(e) => return Verdict::unknown("pro123", format!("evaluation failed: {e}")),
    };
    let status = match report.verdict {
        LimitVerdict::TendsToZero => Status::Holds,
        LimitVerdict::Positive { .. } => Status::Fails,
        LimitVerdict::Inconclusive => Status::Unknown,
    };
    let mut v = Verdict::new(status, "pro123")
        .with("family", f)
        .with("limit", report.verdict)
        .with("values", &report.values)
        .with("one_energy", energy.value())
        .with("zmax", zmax)
        .caveat("evidence for this nu only; a single test measure cannot certify (H)")
        .caveat("the characterisation assumes resolvent densities");
    if oscillating {
        v = v.caveat("tail beyond zmax uses the mean of |nu_hat|^2");
    }
    v
}
