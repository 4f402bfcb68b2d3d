//! Conditions on the small jumps of a one-dimensional Levy measure.

use statrs::function::gamma::{gamma, gamma_ur};

use super::sampling::Settings;
use super::verdict::{Status, Verdict};
use crate::error::Result;
use crate::model::{dominates, truncated_moment, variation_integral, Kernel, LevyComponent, LevyMeasure, LevyTriplet, Side, TypeAlphaBetaDensity};
use crate::numerics::{liminf_ratio, ConvergenceReport, ConvergenceVerdict, LiminfReport};

fn one_dim(rule: &str, t: &LevyTriplet) -> Option<Verdict> {
    (t.dim != 1).then(|| Verdict::unknown(rule, "defined for one-dimensional processes only"))
}

/// Hypotheses of the one-sided domination criterion: Q = 0, infinite
/// variation of the positive jumps, int_(0,delta) x nu(dx) < inf and
/// reflected negative jumps <= k mu_+ + nu.
pub fn check_thm25(t: &LevyTriplet, k: f64, delta: f64, nu: &LevyMeasure) -> Verdict {
    if let Some(v) = one_dim("thm25", t) {
        return v;
    }
    let base = |status| Verdict::new(status, "thm25").with("k", k).with("delta", delta);
    if !(k >= 0.0 && delta > 0.0) {
        return base(Status::Unknown).caveat("k must be >= 0 and delta > 0");
    }
    let nu_parts = nu.parts().cleaned();
    if !nu_parts.side(Side::Neg).cleaned().is_empty() {
        return base(Status::Unknown).caveat("nu must live on (0, inf)");
    }
    let gaussian = t.q[(0, 0)];
    if gaussian > 0.0 {
        return base(Status::Fails).with("q", gaussian).with("failed", "Q = 0");
    }
    let var_plus = variation_integral(&t.mu, Side::Pos);
    if var_plus.is_finite() {
        return base(Status::Fails).with("variation_plus", var_plus).with("failed", "int (1 ∧ x) mu_+(dx) = inf");
    }
    let nu_first: f64 = nu_parts.pieces.iter().map(|p| p.moment_between(1.0, 0.0, delta)).sum::<f64>()
        + nu_parts.atoms.iter().filter(|a| a.x[0] < delta).map(|a| a.w * a.x[0]).sum::<f64>();
    if !nu_first.is_finite() {
        return base(Status::Fails).with("nu_first_moment", "infinite").with("failed", "int_(0,delta) x nu(dx) < inf");
    }
    let parts = t.mu.parts();
    let lhs = parts.side(Side::Neg).reflected().cleaned();
    let mut rhs = parts.side(Side::Pos).scaled(k);
    rhs.extend(nu_parts);
    let d = dominates(&lhs, &rhs.cleaned());
    let status = if d.holds { Status::Holds } else { Status::Unknown };
    let mut v = base(status)
        .with("variation_plus", "infinite")
        .with("nu_first_moment", nu_first)
        .with("domination_points", d.points_checked)
        .with("max_violation", d.max_violation);
    if let Some(r) = d.reason {
        v = v.caveat(format!("domination not verified: {r}"));
    }
    v
}

fn ratio_report(t: &LevyTriplet, s: &Settings, denom: impl Fn(f64) -> f64) -> Result<LiminfReport> {
    liminf_ratio(|eps| Ok(truncated_moment(&t.mu, 2.0, eps)? / denom(eps)), 4..=s.eps_min_exp, s.eps_window)
}

fn liminf_verdict(rule: &str, r: Result<LiminfReport>) -> Verdict {
    match r {
        Ok(r) => {
            let status = if r.estimate > 1e-3 && r.trend_slope >= -0.01 {
                Status::Holds
            } else if r.estimate < 1e-3 && r.trend_slope <= -0.05 || r.estimate == 0.0 {
                Status::Fails
            } else {
                Status::Unknown
            };
            let finest = r.grid.last().map(|g| g.0).unwrap_or(f64::NAN);
            Verdict::new(status, rule)
                .with("estimate", r.estimate)
                .with("trend_slope", r.trend_slope)
                .with("finest_eps", finest)
                .with("grid", &r.grid)
                .caveat("liminf read on a finite epsilon grid")
        }
        Err(e) => Verdict::unknown(rule, format!("evaluation failed: {e}")),
    }
}

/// liminf int_{-eps}^{eps} x^2 mu(dx) / (eps / |log eps|) > 0.
pub fn check_thm26(t: &LevyTriplet, s: &Settings) -> Verdict {
    if let Some(v) = one_dim("thm26", t) {
        return v;
    }
    liminf_verdict("thm26", ratio_report(t, s, |e| e / e.ln().abs()))
}

/// The same test with denominator eps / (|log eps| log|log eps|).
pub fn check_loglog_local(t: &LevyTriplet, s: &Settings) -> Verdict {
    if let Some(v) = one_dim("loglog", t) {
        return v;
    }
    liminf_verdict("loglog", ratio_report(t, s, |e| e / (e.ln().abs() * e.ln().abs().ln())))
}

/// int_T^inf e^{-b t} t^{s-1} dt for b > 0.
fn upper_gamma_integral(s: f64, b: f64, t: f64) -> f64 {
    if t <= 0.0 {
        return gamma(s) / b.powf(s);
    }
    gamma(s) * gamma_ur(s, b * t) / b.powf(s)
}

/// Mass on (-1, 1) of nu_alpha(dx) = |x| |log|x||^{1+alpha} mu(dx).
///
/// Each power piece integrates in closed form after x = e^{-t}; the
/// log-singular kernel always gives infinite mass. The reported tail exponent
/// is that of the integrand in the variable 1/|x|, so divergence means >= -1.
pub fn nu_alpha_mass(mu: &LevyMeasure, alpha: f64) -> ConvergenceReport {
    let parts = mu.parts().cleaned();
    let s = 2.0 + alpha;
    let mass_between = |lo: f64, hi: f64| -> (f64, Option<f64>) {
        let mut total = 0.0;
        let mut worst: Option<f64> = None;
        for p in &parts.pieces {
            let a = p.lo.max(lo);
            let b = p.hi.min(hi).min(1.0);
            if b <= a {
                continue;
            }
            match p.kernel {
                Kernel::Power(k) => {
                    // int_a^b x^{-k} (-log x)^{1+alpha} dx = int e^{-(1-k)t} t^{1+alpha} dt over t in (-ln b, -ln a)
                    let beta = 1.0 - k;
                    let (t0, t1) = (-b.ln(), -a.ln());
                    if beta <= 0.0 && a == 0.0 {
                        worst = Some(worst.map_or(k - 2.0, |w: f64| w.max(k - 2.0)));
                        total = f64::INFINITY;
                        continue;
                    }
                    let v = if beta > 0.0 {
                        upper_gamma_integral(s, beta, t0) - if t1.is_finite() { upper_gamma_integral(s, beta, t1) } else { 0.0 }
                    } else {
                        crate::numerics::integrate_adaptive(|t| (-beta * t).exp() * t.powf(1.0 + alpha), t0, t1, 1e-10)
                            .map(|r| r.value)
                            .unwrap_or(f64::NAN)
                    };
                    total += p.coef * v;
                }
                Kernel::LogSingular => {
                    // |log x|^alpha / x near the origin
                    if a == 0.0 {
                        worst = Some(worst.map_or(-1.0, |w: f64| w.max(-1.0)));
                        total = f64::INFINITY;
                    } else {
                        let (t0, t1) = (-b.ln(), -a.ln());
                        total += p.coef * (t1.powf(1.0 + alpha) - t0.powf(1.0 + alpha)) / (1.0 + alpha);
                    }
                }
            }
        }
        for at in &parts.atoms {
            let r = at.x[0].abs();
            if r >= lo && r < hi && r < 1.0 {
                total += at.w * r * r.ln().abs().powf(1.0 + alpha);
            }
        }
        (total, worst)
    };
    let (full, worst) = mass_between(0.0, 1.0);
    let samples: Vec<(f64, f64)> = (1..=40).map(|j| {
        let eps = 2f64.powi(-j);
        (eps, mass_between(eps, 1.0).0)
    }).collect();
    match worst {
        Some(p) => ConvergenceReport { verdict: ConvergenceVerdict::Diverges { tail_exponent: p }, samples, tail_exponent: p },
        None => {
            let lead = parts.pieces.iter().filter(|p| p.lo == 0.0).map(|p| p.kernel.activity_index() - 2.0).fold(f64::NEG_INFINITY, f64::max);
            ConvergenceReport { verdict: ConvergenceVerdict::Converges { value: full, err: 1e-12 * full.abs() }, samples, tail_exponent: lead }
        }
    }
}

/// Verdict form of the nu_alpha mass: holds when nu_alpha is an infinite measure.
pub fn check_nu_alpha(t: &LevyTriplet, alpha: f64) -> Verdict {
    if let Some(v) = one_dim("nu-alpha", t) {
        return v;
    }
    if !(alpha > 0.0) {
        return Verdict::unknown("nu-alpha", "alpha must be positive");
    }
    let r = nu_alpha_mass(&t.mu, alpha);
    let status = if r.diverges() { Status::Holds } else { Status::Fails };
    Verdict::new(status, "nu-alpha")
        .with("alpha", alpha)
        .with("mass", r.value().map(serde_json::Value::from).unwrap_or_else(|| "infinite".into()))
        .with("tail_exponent", r.tail_exponent)
}

/// 1/(c x^{1+alpha}) <= rho(x) <= c / x^{1+beta} at 64 log-spaced points of (0, 1].
pub fn check_type_alpha_beta(d: &TypeAlphaBetaDensity) -> Verdict {
    let mut worst_low: f64 = f64::INFINITY;
    let mut worst_high: f64 = f64::INFINITY;
    let mut violated_at = None;
    for i in 0..64 {
        let x = 10f64.powf(-12.0 * i as f64 / 63.0);
        let rho = d.rho(x);
        let low = 1.0 / (d.c * x.powf(1.0 + d.alpha));
        let high = d.c / x.powf(1.0 + d.beta);
        let (ml, mh) = (rho / low, high / rho);
        worst_low = worst_low.min(ml);
        worst_high = worst_high.min(mh);
        if (ml < 1.0 - 1e-12 || mh < 1.0 - 1e-12) && violated_at.is_none() {
            violated_at = Some(x);
        }
    }
    let status = if violated_at.is_none() { Status::Holds } else { Status::Fails };
    let mut v = Verdict::new(status, "type-ab")
        .with("alpha", d.alpha)
        .with("beta", d.beta)
        .with("c", d.c)
        .with("min_lower_margin", worst_low)
        .with("min_upper_margin", worst_high);
    if let Some(x) = violated_at {
        v = v.with("violated_at", x);
    }
    v
}

/// Finds a type-(alpha, beta) component in the measure and checks it.
pub fn check_type_ab_triplet(t: &LevyTriplet) -> Verdict {
    let found = t.mu.components.iter().find_map(|c| match c {
        LevyComponent::TypeAlphaBeta(d) => Some(d),
        _ => None,
    });
    match found {
        Some(d) => check_type_alpha_beta(d),
        None => Verdict::unknown("type-ab", "no type-(alpha, beta) density component in the measure"),
    }
}
