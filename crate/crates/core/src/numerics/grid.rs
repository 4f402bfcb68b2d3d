//! Log grids, least-squares fits and envelope trends for asymptotic ratio tests.

/// Geometric grid 10^lo_exp ..= 10^hi_exp with `per_decade` points per decade.
pub fn log_grid(lo_exp: f64, hi_exp: f64, per_decade: usize) -> Vec<f64> {
    let n = ((hi_exp - lo_exp) * per_decade as f64).round() as usize;
    (0..=n)
        .map(|i| 10f64.powf(lo_exp + (hi_exp - lo_exp) * i as f64 / n.max(1) as f64))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
}

pub fn linear_fit(xs: &[f64], ys: &[f64]) -> LinearFit {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for (x, y) in xs.iter().zip(ys) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
        syy += (y - my) * (y - my);
    }
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let r2 = if syy > 0.0 && sxx > 0.0 { sxy * sxy / (sxx * syy) } else { 1.0 };
    LinearFit { slope, intercept: my - slope * mx, r2 }
}

/// Values below this are treated as numerically zero on a log scale.
pub const LOG_FLOOR: f64 = 1e-14;

/// Envelope summary of a positive ratio sampled on an increasing log grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Trend {
    /// sup over the whole grid
    pub sup: f64,
    /// sup over the last decade
    pub tail_sup: f64,
    /// inf over the last decade
    pub tail_inf: f64,
    /// slope of log(block max) against log z over the fit window
    pub upper_slope: f64,
    /// slope of log(block min) against log z over the fit window
    pub lower_slope: f64,
    pub upper_r2: f64,
}

/// Fits block-max and block-min envelopes over the last `fit_decades` decades.
/// Blocks are a quarter decade wide.
pub fn envelope_trend(zs: &[f64], rs: &[f64], fit_decades: f64) -> Trend {
    assert_eq!(zs.len(), rs.len());
    let zmax = *zs.last().expect("non-empty grid");
    let sup = rs.iter().cloned().fold(0.0, f64::max);
    let tail: Vec<usize> = (0..zs.len()).filter(|&i| zs[i] >= zmax / 10.0 * (1.0 - 1e-12)).collect();
    let tail_sup = tail.iter().map(|&i| rs[i]).fold(0.0, f64::max);
    let tail_inf = tail.iter().map(|&i| rs[i]).fold(f64::INFINITY, f64::min);

    let start = zmax / 10f64.powf(fit_decades);
    let block = 10f64.powf(0.25);
    let mut centers = Vec::new();
    let mut maxes = Vec::new();
    let mut mins = Vec::new();
    let mut lo = start;
    while lo < zmax * (1.0 - 1e-12) {
        let hi = lo * block;
        let idx: Vec<usize> = (0..zs.len())
            .filter(|&i| zs[i] >= lo * (1.0 - 1e-12) && zs[i] <= hi * (1.0 + 1e-12))
            .collect();
        if !idx.is_empty() {
            centers.push((lo * hi).sqrt().ln());
            maxes.push(idx.iter().map(|&i| rs[i]).fold(0.0, f64::max).max(LOG_FLOOR).ln());
            mins.push(idx.iter().map(|&i| rs[i]).fold(f64::INFINITY, f64::min).max(LOG_FLOOR).ln());
        }
        lo = hi;
    }
    let up = linear_fit(&centers, &maxes);
    let down = linear_fit(&centers, &mins);
    Trend {
        sup,
        tail_sup,
        tail_inf,
        upper_slope: up.slope,
        lower_slope: down.slope,
        upper_r2: up.r2,
    }
}
