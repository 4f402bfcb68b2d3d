//! Limits as lambda -> infinity sampled on a geometric grid.

use serde::Serialize;

use crate::error::{HuntError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LimitVerdict {
    TendsToZero,
    Positive { floor: f64 },
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LimitReport {
    pub values: Vec<(f64, f64)>,
    pub verdict: LimitVerdict,
}

pub const DEFAULT_LIMIT_TOL: f64 = 1e-4;

/// 10^1 ..= 10^6 in half-decade steps.
pub fn default_lambda_grid() -> Vec<f64> {
    (2..=12).map(|k| 10f64.powf(k as f64 / 2.0)).collect()
}

pub fn limit_lambda<H>(h: H, lambda_grid: &[f64], tol: f64) -> Result<LimitReport>
where
    H: Fn(f64) -> Result<f64>,
{
    if lambda_grid.len() < 3 {
        return Err(HuntError::InvalidParameter("lambda grid needs three points".into()));
    }
    let mut values = Vec::with_capacity(lambda_grid.len());
    for &l in lambda_grid {
        let v = h(l)?;
        if !v.is_finite() || v < -1e-12 {
            return Err(HuntError::EvaluationFailure(format!("h({l}) = {v}")));
        }
        values.push((l, v.max(0.0)));
    }
    let n = values.len();
    let last3 = [values[n - 3].1, values[n - 2].1, values[n - 1].1];
    let non_increasing = last3[0] >= last3[1] && last3[1] >= last3[2];
    let final_value = last3[2];
    let verdict = if non_increasing && final_value < tol {
        LimitVerdict::TendsToZero
    } else if final_value > 10.0 * tol && final_value >= 0.8 * values[n.saturating_sub(5)].1 {
        LimitVerdict::Positive { floor: final_value }
    } else {
        LimitVerdict::Inconclusive
    };
    Ok(LimitReport { values, verdict })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let g = default_lambda_grid();
        assert_eq!(limit_lambda(|l| Ok(1.0 / l), &g, DEFAULT_LIMIT_TOL).unwrap().verdict, LimitVerdict::TendsToZero);
        assert_eq!(
            limit_lambda(|_| Ok(0.3), &g, DEFAULT_LIMIT_TOL).unwrap().verdict,
            LimitVerdict::Positive { floor: 0.3 }
        );
        assert_eq!(
            limit_lambda(|l| Ok(l / (l * l + 1.0)), &g, DEFAULT_LIMIT_TOL).unwrap().verdict,
            LimitVerdict::TendsToZero
        );
    }

    #[test]
    fn slow_decay_is_inconclusive() {
        let g = default_lambda_grid();
        let r = limit_lambda(|l| Ok(1.0 / l.ln()), &g, DEFAULT_LIMIT_TOL).unwrap();
        assert_eq!(r.verdict, LimitVerdict::Inconclusive);
    }
}
