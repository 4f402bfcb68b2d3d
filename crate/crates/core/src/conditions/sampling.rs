//! Evaluation of psi along rays and the ratio tests built on it.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::verdict::Status;
use crate::error::Result;
use crate::exponent::{ExponentHandle, PsiParts};
use crate::numerics::grid::LOG_FLOOR;
use crate::numerics::{envelope_trend, log_grid, Trend};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Settings {
    /// log10 of the smallest |z| sampled
    pub zmin_exp: f64,
    pub zmax: f64,
    pub per_decade: usize,
    /// the epsilon grid runs over 2^-4 ..= 2^-eps_min_exp
    pub eps_min_exp: u32,
    pub eps_window: usize,
    /// threshold for the lambda limit
    pub tol: f64,
    /// decades at the top of the z grid used for trend fits
    pub fit_decades: f64,
}

impl Default for Settings {
    fn default() -> Self {
        Self { zmin_exp: -2.0, zmax: 1e6, per_decade: 96, eps_min_exp: 40, eps_window: 8, tol: 1e-4, fit_decades: 2.0 }
    }
}

impl Settings {
    pub fn z_grid(&self) -> Vec<f64> {
        log_grid(self.zmin_exp, self.zmax.log10(), self.per_decade)
    }
}

/// Unit directions used to sample psi in R^n. One direction suffices in
/// one dimension since |Im psi| and Re psi are even.
pub fn directions(n: usize) -> Vec<Vec<f64>> {
    if n == 1 {
        return vec![vec![1.0]];
    }
    let mut out = Vec::new();
    for i in 0..n {
        let mut e = vec![0.0; n];
        e[i] = 1.0;
        out.push(e);
    }
    out.push(vec![1.0 / (n as f64).sqrt(); n]);
    for k in 1..=4 {
        let v: Vec<f64> = (0..n).map(|i| (1.0 + 0.7 * (k * (i + 1)) as f64).cos()).collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        out.push(v.into_iter().map(|x| x / norm).collect());
    }
    out
}

/// psi parts at every radius of the grid along every direction.
#[derive(Debug, Clone)]
pub struct Profile {
    pub zs: Vec<f64>,
    /// rays[d][i] is the value at zs[i] along direction d
    pub rays: Vec<Vec<PsiParts>>,
}

impl Profile {
    pub fn sample(h: &ExponentHandle, zs: &[f64]) -> Result<Self> {
        let dirs = directions(h.dim());
        let mut rays = Vec::with_capacity(dirs.len());
        for d in &dirs {
            let ray = if h.dim() == 1 {
                h.parts_grid(zs)?
            } else {
                zs.par_iter()
                    .map(|&r| h.parts(&d.iter().map(|x| x * r).collect::<Vec<_>>()))
                    .collect::<Result<Vec<_>>>()?
            };
            rays.push(ray);
        }
        Ok(Self { zs: zs.to_vec(), rays })
    }

    /// Worst case over directions of an upper-bound ratio.
    pub fn max_ratio(&self, f: impl Fn(&PsiParts) -> f64) -> Vec<f64> {
        (0..self.zs.len()).map(|i| self.rays.iter().map(|r| f(&r[i])).fold(f64::NEG_INFINITY, f64::max)).collect()
    }

    /// Worst case over directions of a lower-bound ratio.
    pub fn min_ratio(&self, f: impl Fn(&PsiParts) -> f64) -> Vec<f64> {
        (0..self.zs.len()).map(|i| self.rays.iter().map(|r| f(&r[i])).fold(f64::INFINITY, f64::min)).collect()
    }

    /// Ratio of two profiles sampled on the same grid, worst case over directions.
    pub fn max_pair_ratio(&self, other: &Profile, f: impl Fn(&PsiParts, &PsiParts) -> f64) -> Vec<f64> {
        (0..self.zs.len())
            .map(|i| self.rays.iter().zip(&other.rays).map(|(a, b)| f(&a[i], &b[i])).fold(f64::NEG_INFINITY, f64::max))
            .collect()
    }
}

/// Outcome of a ratio test with the numbers that decided it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RatioTest {
    pub status: Status,
    pub sup: f64,
    pub tail_sup: f64,
    pub tail_inf: f64,
    pub upper_slope: f64,
    pub lower_slope: f64,
}

impl RatioTest {
    fn from_trend(status: Status, t: &Trend) -> Self {
        Self {
            status,
            sup: t.sup,
            tail_sup: t.tail_sup,
            tail_inf: t.tail_inf,
            upper_slope: t.upper_slope,
            lower_slope: t.lower_slope,
        }
    }
}

pub const BOUNDED_SLOPE: f64 = 0.02;
pub const GROWING_SLOPE: f64 = 0.05;

/// Is the ratio bounded as |z| grows? The bound is the observed sup.
pub fn bounded(zs: &[f64], rs: &[f64], fit_decades: f64) -> RatioTest {
    let t = envelope_trend(zs, rs, fit_decades);
    let status = if t.sup <= 1e-12 || t.upper_slope <= BOUNDED_SLOPE {
        Status::Holds
    } else if t.upper_slope >= GROWING_SLOPE {
        Status::Fails
    } else {
        Status::Unknown
    };
    RatioTest::from_trend(status, &t)
}

/// For a bounded exponent every ratio over A >= 1 is bounded; the sampled
/// envelope of an almost periodic ratio can still appear to creep upwards.
pub fn bounded_for(h: &ExponentHandle, zs: &[f64], rs: &[f64], fit_decades: f64) -> RatioTest {
    let mut t = bounded(zs, rs, fit_decades);
    if h.triplet().has_bounded_exponent() {
        t.status = Status::Holds;
    }
    t
}

/// Is liminf of the ratio positive as |z| grows?
pub fn positive_liminf(zs: &[f64], rs: &[f64], fit_decades: f64) -> RatioTest {
    let t = envelope_trend(zs, rs, fit_decades);
    let status = if t.tail_inf >= 1e-3 && t.lower_slope >= -0.01 {
        Status::Holds
    } else if t.tail_sup <= LOG_FLOOR || t.upper_slope <= -GROWING_SLOPE {
        Status::Fails
    } else {
        Status::Unknown
    };
    RatioTest::from_trend(status, &t)
}

/// Does the ratio tend to infinity as |z| grows?
pub fn diverging(zs: &[f64], rs: &[f64], fit_decades: f64) -> RatioTest {
    let t = envelope_trend(zs, rs, fit_decades);
    let status = if t.lower_slope >= GROWING_SLOPE {
        Status::Holds
    } else if t.upper_slope <= 0.0 {
        Status::Fails
    } else {
        Status::Unknown
    };
    RatioTest::from_trend(status, &t)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> Vec<f64> {
        Settings::default().z_grid()
    }

    #[test]
    fn default_grid_spans_eight_decades() {
        let zs = grid();
        assert_eq!(zs.len(), 8 * 96 + 1);
        assert!((zs[0] - 1e-2).abs() < 1e-15 && (zs[zs.len() - 1] - 1e6).abs() < 1e-6);
    }

    #[test]
    fn bounded_ratio_classes() {
        let zs = grid();
        let decay: Vec<f64> = zs.iter().map(|z| z / (1.0 + z * z / 2.0)).collect();
        let r = bounded(&zs, &decay, 2.0);
        assert_eq!(r.status, Status::Holds);
        assert!((r.sup - 0.5f64.sqrt()).abs() < 1e-3);
        let lin: Vec<f64> = zs.clone();
        assert_eq!(bounded(&zs, &lin, 2.0).status, Status::Fails);
        let log: Vec<f64> = zs.iter().map(|z| (2.0 + z).ln()).collect();
        assert_eq!(bounded(&zs, &log, 2.0).status, Status::Fails);
    }

    #[test]
    fn liminf_and_divergence_classes() {
        let zs = grid();
        let up: Vec<f64> = zs.iter().map(|z| z.sqrt() / (1.0 + z).ln().max(1e-3)).collect();
        assert_eq!(diverging(&zs, &up, 2.0).status, Status::Holds);
        assert_eq!(positive_liminf(&zs, &up, 2.0).status, Status::Holds);
        let down: Vec<f64> = zs.iter().map(|z| z.ln() / z.sqrt()).collect();
        assert_eq!(positive_liminf(&zs, &down, 2.0).status, Status::Fails);
        let flat: Vec<f64> = zs.iter().map(|z| 3.0 * (1.0 - z.cos()) / (1.0 + z).ln()).collect();
        assert_eq!(diverging(&zs, &flat, 2.0).status, Status::Fails);
    }

    #[test]
    fn directions_are_unit() {
        for d in directions(3) {
            assert!((d.iter().map(|x| x * x).sum::<f64>() - 1.0).abs() < 1e-12);
        }
        assert_eq!(directions(1), vec![vec![1.0]]);
    }
}
