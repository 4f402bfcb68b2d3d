//! liminf of a ratio as epsilon decreases through 2^-j.

use serde::Serialize;

use super::grid::{linear_fit, LOG_FLOOR};
use crate::error::{HuntError, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LiminfReport {
    /// minimum of the ratio over the tail window
    pub estimate: f64,
    /// fitted d log(ratio) / d log(1/eps) over the tail window
    pub trend_slope: f64,
    /// (eps, ratio), eps decreasing
    pub grid: Vec<(f64, f64)>,
}

pub const DEFAULT_J_RANGE: std::ops::RangeInclusive<u32> = 4..=40;
pub const DEFAULT_WINDOW: usize = 8;

pub fn liminf_ratio<G>(g: G, j_range: std::ops::RangeInclusive<u32>, window: usize) -> Result<LiminfReport>
where
    G: Fn(f64) -> Result<f64>,
{
    let mut grid = Vec::new();
    for j in j_range {
        let eps = 2f64.powi(-(j as i32));
        let v = g(eps)?;
        if !v.is_finite() {
            return Err(HuntError::EvaluationFailure(format!("ratio not finite at eps = 2^-{j}")));
        }
        grid.push((eps, v));
    }
    if grid.len() < 2 || window < 2 {
        return Err(HuntError::InvalidParameter("liminf grid needs at least two points".into()));
    }
    let tail = &grid[grid.len().saturating_sub(window)..];
    // a monotone tail is read off at the finest eps, otherwise its infimum
    let rising = tail.windows(2).all(|w| w[1].1 >= w[0].1);
    let falling = tail.windows(2).all(|w| w[1].1 <= w[0].1);
    let estimate = if rising || falling {
        tail[tail.len() - 1].1
    } else {
        tail.iter().map(|&(_, r)| r).fold(f64::INFINITY, f64::min)
    };
    let xs: Vec<f64> = tail.iter().map(|&(e, _)| (1.0 / e).ln()).collect();
    let ys: Vec<f64> = tail.iter().map(|&(_, r)| r.abs().max(LOG_FLOOR).ln()).collect();
    let trend_slope = linear_fit(&xs, &ys).slope;
    Ok(LiminfReport { estimate, trend_slope, grid })
}
