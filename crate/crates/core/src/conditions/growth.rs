//! Growth of Re psi at infinity and the Blumenthal-Getoor-type indices.

use serde::{Deserialize, Serialize};

use super::diagram::{hw_test, or_unknown};
use super::sampling::{positive_liminf, Profile, Settings};
use super::verdict::{Status, Verdict, FINITE_GRID_CAVEAT};
use crate::exponent::ExponentHandle;
use crate::model::{activity_index, LevyMeasure};
use crate::numerics::{envelope_trend, log_grid};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GrowthVariant {
    /// liminf Re psi(z) / (|z| / log|z|) > 0
    Log,
    /// Re psi(z) / log(1 + |z|) -> inf
    Hw,
}

pub fn check_repsi_growth(h: &ExponentHandle, variant: GrowthVariant, s: &Settings) -> Verdict {
    let rule = match variant {
        GrowthVariant::Log => "repsi-log",
        GrowthVariant::Hw => "hw",
    };
    or_unknown(rule, (|| {
        let p = Profile::sample(h, &s.z_grid())?;
        let test = match variant {
            GrowthVariant::Hw => hw_test(&p, s),
            GrowthVariant::Log => {
                let re = p.min_ratio(|q| q.re);
                let (zs, rs): (Vec<f64>, Vec<f64>) =
                    p.zs.iter().zip(re).filter(|(z, _)| **z >= 10.0).map(|(z, r)| (*z, r * z.ln() / z)).unzip();
                positive_liminf(&zs, &rs, s.fit_decades)
            }
        };
        Ok(Verdict::new(test.status, rule)
            .with("tail_inf", test.tail_inf)
            .with("tail_sup", test.tail_sup)
            .with("lower_slope", test.lower_slope)
            .with("upper_slope", test.upper_slope)
            .caveat(FINITE_GRID_CAVEAT))
    })())
}

pub const BG_UNCERTAINTY: f64 = 0.05;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BgIndices {
    /// sup{alpha: Re psi(z) / |z|^alpha -> inf}, or None when the fit is inconclusive
    pub beta1pp: Option<f64>,
    /// inf{alpha: int_{|x|<1} |x|^alpha mu(dx) < inf}
    pub beta2: f64,
    pub uncertainty: f64,
    pub upper_slope: f64,
    pub lower_slope: f64,
}

/// beta_2 from the singularity of the measure at the origin.
pub fn beta2(mu: &LevyMeasure) -> f64 {
    activity_index(mu)
}

/// Both indices of one process; beta_1'' is the slope of log Re psi against
/// log |z| over 10^2 ..= 10^6 (or up to zmax).
pub fn bg_indices(h: &ExponentHandle, s: &Settings) -> crate::error::Result<BgIndices> {
    let top = s.zmax.log10();
    let zs = log_grid(top - 4.0, top, s.per_decade);
    let p = Profile::sample(h, &zs)?;
    let re = p.min_ratio(|q| q.re);
    let t = envelope_trend(&zs, &re, 4.0);
    let beta1pp = if t.upper_slope <= 0.02 {
        Some(0.0)
    } else if (t.upper_slope - t.lower_slope).abs() <= 2.0 * BG_UNCERTAINTY {
        Some(t.lower_slope.clamp(0.0, 2.0))
    } else {
        None
    };
    Ok(BgIndices {
        beta1pp,
        beta2: beta2(&h.triplet().mu),
        uncertainty: BG_UNCERTAINTY,
        upper_slope: t.upper_slope,
        lower_slope: t.lower_slope,
    })
}

pub fn check_bg(h: &ExponentHandle, s: &Settings) -> Verdict {
    or_unknown("bg", (|| {
        let b = bg_indices(h, s)?;
        let status = if b.beta1pp.is_some() { Status::Holds } else { Status::Unknown };
        Ok(Verdict::new(status, "bg")
            .with("beta1pp", b.beta1pp)
            .with("beta2", b.beta2)
            .with("uncertainty", b.uncertainty)
            .with("upper_slope", b.upper_slope)
            .with("lower_slope", b.lower_slope)
            .caveat("status reports whether both indices were estimated"))
    })())
}
