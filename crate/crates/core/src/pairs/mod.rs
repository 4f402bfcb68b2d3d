//! Conditions on two independent processes X1, X2 under which X1 + X2 inherits (H).

use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};

use crate::conditions::{
    beta2, bg_indices, bounded_for, or_unknown, GrowthFunctionFamily, Profile, RatioTest, Settings, Status, Verdict,
    BG_UNCERTAINTY, FINITE_GRID_CAVEAT,
};
use crate::error::{HuntError, Result};
use crate::exponent::{ExponentHandle, PsiParts};
use crate::numerics::{integrate_improper, ImproperOptions};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairEvidence {
    pub c_est: f64,
    pub gamma: f64,
    /// (z, ratio) samples of the deciding ratio
    pub grids: Vec<(f64, f64)>,
}

fn sample_pair(h1: &ExponentHandle, h2: &ExponentHandle, s: &Settings) -> Result<(Profile, Profile)> {
    if h1.dim() != h2.dim() {
        return Err(HuntError::DimensionMismatch { expected: h1.dim(), got: h2.dim() });
    }
    let zs = s.z_grid();
    Ok((Profile::sample(h1, &zs)?, Profile::sample(h2, &zs)?))
}

fn im_domination_ratio(p1: &PsiParts, p2: &PsiParts) -> f64 {
    p2.im.abs() / (1.0 + p1.re + p2.re)
}

/// sup |Im psi2| / (1 + Re psi1 + Re psi2), bounded or not.
pub fn check_im_domination(h1: &ExponentHandle, h2: &ExponentHandle, s: &Settings) -> Verdict {
    or_unknown("im-domination", (|| {
        let (p1, p2) = sample_pair(h1, h2, s)?;
        let rs = p1.max_pair_ratio(&p2, im_domination_ratio);
        let test = bounded_for(h2, &p1.zs, &rs, s.fit_decades);
        let ev = PairEvidence { c_est: test.sup, gamma: lemma314_gamma(test.sup.max(1e-12)), grids: thin(&p1.zs, &rs) };
        Ok(Verdict::new(test.status, "im-domination")
            .with("c_est", test.sup)
            .with("upper_slope", test.upper_slope)
            .with("pair", ev)
            .caveat(FINITE_GRID_CAVEAT))
    })())
}

/// Every 24th sample, enough to plot the ratio.
fn thin(zs: &[f64], rs: &[f64]) -> Vec<(f64, f64)> {
    zs.iter().zip(rs).step_by(24).map(|(z, r)| (*z, *r)).collect()
}

/// A gamma strictly inside {gamma in (0, 1/4): (1 - gamma)(1 + 1/(4c^2)) > 1}.
pub fn lemma314_gamma(c: f64) -> f64 {
    0.5 * (0.25f64).min(1.0 / (4.0 * c * c + 1.0))
}

/// Random search for psi1, psi2 with Re >= 0 and |Im psi2| <= c(1 + Re psi1 + Re psi2)
/// violating |1 + psi1 + psi2|^2 >= gamma |1 + psi1|^2.
pub fn verify_lemma314(c: f64, gamma: f64, samples: usize, seed: u64) -> Verdict {
    let mut rng = StdRng::seed_from_u64(seed);
    let log_uniform = |rng: &mut StdRng, zero_prob: f64| -> f64 {
        if rng.gen::<f64>() < zero_prob {
            0.0
        } else {
            10f64.powf(rng.gen_range(-3.0..6.0))
        }
    };
    let mut violations = 0usize;
    let mut min_ratio = f64::INFINITY;
    let mut witness = None;
    for _ in 0..samples {
        let r1 = log_uniform(&mut rng, 0.25);
        let r2 = log_uniform(&mut rng, 0.25);
        let y1 = log_uniform(&mut rng, 0.05) * if rng.gen::<bool>() { 1.0 } else { -1.0 };
        let bound = c * (1.0 + r1 + r2);
        // mostly opposed to Im psi1, which is where the inequality is tight
        let toward = if rng.gen::<f64>() < 0.8 { -y1.signum() } else { y1.signum() };
        let y2 = toward * bound * rng.gen::<f64>().sqrt();
        let psi1 = Complex64::new(r1, y1);
        let psi2 = Complex64::new(r2, y2);
        let lhs = (1.0 + psi1 + psi2).norm_sqr();
        let rhs = (1.0 + psi1).norm_sqr();
        let ratio = lhs / rhs;
        if ratio < min_ratio {
            min_ratio = ratio;
        }
        if lhs < gamma * rhs * (1.0 - 1e-12) {
            violations += 1;
            witness.get_or_insert((psi1, psi2));
        }
    }
    let status = if violations == 0 { Status::Holds } else { Status::Fails };
    let mut v = Verdict::new(status, "lem314")
        .with("c", c)
        .with("gamma", gamma)
        .with("samples", samples)
        .with("violations", violations)
        .with("min_ratio", min_ratio);
    if let Some((a, b)) = witness {
        v = v.with("counterexample", [[a.re, a.im], [b.re, b.im]]);
    }
    v
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Pro312Variant {
    I,
    Ii,
    Iii,
}

impl Pro312Variant {
    pub fn rule(self) -> &'static str {
        match self {
            Pro312Variant::I => "pro312-i",
            Pro312Variant::Ii => "pro312-ii",
            Pro312Variant::Iii => "pro312-iii",
        }
    }
}

fn t1(p1: &PsiParts) -> f64 {
    1.0 + p1.re + p1.im * p1.im / (1.0 + p1.re)
}

/// Each variant as a list of named ratios that must stay bounded.
fn pro312_ratios(variant: Pro312Variant) -> Vec<(&'static str, fn(&PsiParts, &PsiParts) -> f64)> {
    let abs_bound: fn(&PsiParts, &PsiParts) -> f64 = |p1, p2| p2.re.hypot(p2.im) / (1.0 + p1.re);
    let re_bound: fn(&PsiParts, &PsiParts) -> f64 = |p1, p2| p2.re / t1(p1);
    let im_bound: fn(&PsiParts, &PsiParts) -> f64 = im_domination_ratio;
    let im_sq_bound: fn(&PsiParts, &PsiParts) -> f64 = |p1, p2| p2.im * p2.im / ((1.0 + p1.re + p2.re) * t1(p1));
    match variant {
        Pro312Variant::I => vec![("abs", abs_bound)],
        Pro312Variant::Ii => vec![("re", re_bound), ("im", im_bound)],
        Pro312Variant::Iii => vec![("re", re_bound), ("im_sq", im_sq_bound)],
    }
}

fn combine(tests: &[RatioTest]) -> Status {
    if tests.iter().all(|t| t.status == Status::Holds) {
        Status::Holds
    } else if tests.iter().any(|t| t.status == Status::Fails) {
        Status::Fails
    } else {
        Status::Unknown
    }
}

/// Boundedness of the ratios of one variant; the evidence carries each constant
/// and their maximum `c`.
pub fn check_pro312(h1: &ExponentHandle, h2: &ExponentHandle, variant: Pro312Variant, s: &Settings) -> Verdict {
    let rule = variant.rule();
    or_unknown(rule, (|| {
        let (p1, p2) = sample_pair(h1, h2, s)?;
        let mut tests = Vec::new();
        let mut v = Verdict::new(Status::Unknown, rule);
        for (name, f) in pro312_ratios(variant) {
            let rs = p1.max_pair_ratio(&p2, f);
            let t = bounded_for(h2, &p1.zs, &rs, s.fit_decades);
            v = v.with(&format!("c_{name}"), t.sup).with(&format!("slope_{name}"), t.upper_slope);
            tests.push(t);
        }
        v.status = combine(&tests);
        let c = tests.iter().map(|t| t.sup).fold(0.0, f64::max);
        Ok(v.with("c", c).with("variant", variant).caveat(FINITE_GRID_CAVEAT))
    })())
}

/// Pointwise Re(1/(1+psi1+psi2)) >= Re(1/(1+psi1)) / (2 + 3c); returns the number
/// of grid points where it fails and the smallest observed margin.
pub fn pro312_consequence(h1: &ExponentHandle, h2: &ExponentHandle, c: f64, s: &Settings) -> Result<(usize, f64)> {
    let (p1, p2) = sample_pair(h1, h2, s)?;
    let mut bad = 0;
    let mut margin = f64::INFINITY;
    for (r1, r2) in p1.rays.iter().zip(&p2.rays) {
        for (a, b) in r1.iter().zip(r2) {
            let sum = Complex64::new(1.0 + a.re + b.re, a.im + b.im);
            let lhs = sum.inv().re;
            let rhs = Complex64::new(1.0 + a.re, a.im).inv().re / (2.0 + 3.0 * c);
            margin = margin.min(lhs / rhs);
            if lhs < rhs * (1.0 - 1e-12) {
                bad += 1;
            }
        }
    }
    Ok((bad, margin))
}

/// Caller-supplied split Im psi1 = phi11 + phi12 (one-dimensional).
pub struct SplitWitness {
    pub phi11: Box<dyn Fn(f64) -> f64 + Send + Sync>,
    pub phi12: Box<dyn Fn(f64) -> f64 + Send + Sync>,
}

impl std::fmt::Debug for SplitWitness {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("SplitWitness")
    }
}

impl SplitWitness {
    /// phi11 = Im psi1 read from `h1`, phi12 = 0.
    pub fn trivial(h1: std::sync::Arc<ExponentHandle>) -> Self {
        Self { phi11: Box::new(move |z| h1.psi1(z).map(|p| p.im).unwrap_or(f64::NAN)), phi12: Box::new(|_| 0.0) }
    }
}

/// The split-witness criterion. Errors with InvalidWitness when phi11 + phi12
/// differs from Im psi1 on the grid.
pub fn check_pro43(
    h1: &ExponentHandle,
    h2: &ExponentHandle,
    witness: &SplitWitness,
    f: GrowthFunctionFamily,
    s: &Settings,
) -> Result<Verdict> {
    if h1.dim() != 1 || h2.dim() != 1 {
        return Ok(Verdict::unknown("pro43", "implemented for one-dimensional processes only"));
    }
    let zs: Vec<f64> = s.z_grid().iter().flat_map(|&z| [z, -z]).collect();
    let q1 = h1.parts_grid(&zs)?;
    let q2 = h2.parts_grid(&zs)?;
    let mut worst_split: f64 = 0.0;
    for (z, p) in zs.iter().zip(&q1) {
        let dev = ((witness.phi11)(*z) + (witness.phi12)(*z) - p.im).abs() / p.im.abs().max(1.0);
        if !(dev <= 1e-9) {
            worst_split = if dev.is_nan() { f64::INFINITY } else { worst_split.max(dev) };
        }
    }
    if worst_split > 0.0 {
        return Err(HuntError::InvalidWitness(worst_split));
    }
    let a_bound = zs.iter().zip(&q1).filter(|(z, p)| (witness.phi11)(**z).abs() > (1.0 + p.re) * f.eval(1.0 + p.re)).count();
    let c_bound = q1
        .iter()
        .zip(&q2)
        .filter(|(p1, p2)| {
            let a = 1.0 + p1.re + p2.re;
            p2.im.abs() > a * f.eval(a)
        })
        .count();
    let phi12_max = zs.iter().map(|z| (witness.phi12)(*z).abs()).fold(0.0, f64::max);
    let integral = if phi12_max == 0.0 {
        Status::Holds
    } else {
        let g = |z: f64| -> f64 {
            [z, -z]
                .iter()
                .map(|&w| match h1.psi1(w) {
                    Ok(p) => (witness.phi12)(w).abs() / (1.0 + p).norm_sqr(),
                    Err(_) => f64::NAN,
                })
                .sum()
        };
        let r = integrate_improper(g, 0.0, &ImproperOptions::up_to(s.zmax))?;
        if r.converges() {
            Status::Holds
        } else if r.diverges() {
            Status::Fails
        } else {
            Status::Unknown
        }
    };
    let status = if a_bound > 0 || c_bound > 0 || integral == Status::Fails {
        Status::Fails
    } else if integral == Status::Holds {
        Status::Holds
    } else {
        Status::Unknown
    };
    Ok(Verdict::new(status, "pro43")
        .with("family", f)
        .with("phi11_violations", a_bound)
        .with("im2_violations", c_bound)
        .with("phi12_integral", integral)
        .caveat(FINITE_GRID_CAVEAT))
}

/// beta_2 of X2 raised to account for its Gaussian part and, with finite
/// variation, its effective drift, since both enter |psi2(z)|.
pub fn effective_beta2(h2: &ExponentHandle) -> f64 {
    let t = h2.triplet();
    if t.has_gaussian_part() {
        return 2.0;
    }
    let b = beta2(&t.mu);
    match t.adjusted_drift() {
        Some(d) if d.iter().any(|x| x.abs() > 0.0) => b.max(1.0),
        _ => b,
    }
}

/// The index rule: holds when beta_2(X2) + 0.05 < beta_1''(X1), fails when
/// beta_2(X2) - 0.05 >= beta_1''(X1). Fails means the rule does not apply.
pub fn check_bg_rule(h1: &ExponentHandle, h2: &ExponentHandle, s: &Settings) -> Verdict {
    or_unknown("bg-rule", (|| {
        let b1 = bg_indices(h1, s)?;
        let b2 = effective_beta2(h2);
        let v = Verdict::new(Status::Unknown, "bg-rule").with("beta2", b2).with("uncertainty", BG_UNCERTAINTY);
        let Some(b1pp) = b1.beta1pp else {
            return Ok(v.caveat("beta_1'' fit inconclusive"));
        };
        let status = if b2 + BG_UNCERTAINTY < b1pp {
            Status::Holds
        } else if b2 - BG_UNCERTAINTY >= b1pp {
            Status::Fails
        } else {
            Status::Unknown
        };
        Ok(Verdict { status, ..v }.with("beta1pp", b1pp))
    })())
}

#[cfg(test)]
mod tests;
