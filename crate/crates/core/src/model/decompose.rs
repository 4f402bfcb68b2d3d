//! Domination checks and the two exact decompositions of a triplet.

use super::component::{MeasureParts, Side};
use super::measure::{leading_singularity, LevyMeasure};
use super::triplet::LevyTriplet;
use crate::error::{HuntError, Result};
use crate::numerics::log_grid;

const GRID_POINTS: usize = 256;
const REL_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct Domination {
    pub holds: bool,
    /// Largest lhs - rhs density excess seen, or the offending atom weight.
    pub max_violation: f64,
    pub points_checked: usize,
    pub reason: Option<String>,
}

/// Decides lhs <= rhs: atom by atom, and density by density on a 256-point
/// log grid plus a comparison of the leading singularities at the origin.
/// Only 1-D measures are compared.
pub fn dominates(lhs: &MeasureParts, rhs: &MeasureParts) -> Domination {
    let mut out = Domination { holds: true, max_violation: 0.0, points_checked: 0, reason: None };
    for a in &lhs.atoms {
        let w: f64 = rhs
            .atoms
            .iter()
            .filter(|b| b.x.iter().zip(&a.x).all(|(u, v)| (u - v).abs() <= 1e-12 * (1.0 + u.abs())))
            .map(|b| b.w)
            .sum();
        if a.w > w * (1.0 + REL_TOL) {
            out.holds = false;
            out.max_violation = out.max_violation.max(a.w - w);
            out.reason = Some(format!("atom at {:?} exceeds dominating weight", a.x));
        }
    }
    if lhs.pieces.is_empty() {
        return out;
    }
    for side in [Side::Pos, Side::Neg] {
        let l = lhs.clone().side_only(side);
        if l.pieces.is_empty() {
            continue;
        }
        let r = rhs.clone().side_only(side);
        if let Some(ls) = leading_singularity(&l) {
            match leading_singularity(&r) {
                Some(rs) if rs >= ls => {}
                _ => {
                    out.holds = false;
                    out.max_violation = f64::INFINITY;
                    out.reason = Some(format!("{side:?} singularity at 0 is not dominated"));
                    return out;
                }
            }
        }
        let top = l.pieces.iter().map(|p| p.hi).fold(0.0, f64::max);
        let top = if top.is_finite() { top } else { 1e3 };
        let lo_exp = -12.0;
        let hi_exp = top.log10();
        let per_decade = (GRID_POINTS as f64 / (hi_exp - lo_exp)).ceil() as usize;
        let grid = log_grid(lo_exp, hi_exp, per_decade.max(1));
        let sign = side.sign();
        for &x in &grid {
            let dl = l.density(sign * x);
            let dr = r.density(sign * x);
            out.points_checked += 1;
            if dl > dr * (1.0 + REL_TOL) + 1e-300 {
                out.holds = false;
                if dl - dr > out.max_violation {
                    out.max_violation = dl - dr;
                    out.reason = Some(format!("density exceeded at x = {}", sign * x));
                }
            }
        }
    }
    out
}

impl MeasureParts {
    fn side_only(self, side: Side) -> MeasureParts {
        MeasureParts { pieces: self.pieces.into_iter().filter(|p| p.side == side).collect(), atoms: vec![] }
    }
}

/// Two triplets whose exponents add up to the original one.
#[derive(Debug, Clone)]
pub struct CompensatedSplit {
    pub first: LevyTriplet,
    pub second: LevyTriplet,
}

/// Builds the symmetric measure mu2 = (mu_bar_minus - nu)^+ on (0, delta) and
/// its mirror, and splits t into (a, 0, mu - mu2) + (0, 0, mu2).
/// `hypothesis_ok` must come from the caller's hypothesis check.
pub fn decompose_thm25(t: &LevyTriplet, delta: f64, nu: &LevyMeasure, hypothesis_ok: bool) -> Result<CompensatedSplit> {
    if !hypothesis_ok {
        return Err(HuntError::HypothesisNotVerified(
            "domination of the reflected negative jumps was not verified".into(),
        ));
    }
    if t.dim != 1 {
        return Err(HuntError::DimensionMismatch { expected: 1, got: t.dim });
    }
    let parts = t.mu.parts();
    let mbar = parts.side(Side::Neg).reflected().restricted(0.0, delta);
    let nu_parts = nu.parts().restricted(0.0, delta);
    let half = mbar.positive_part_minus(&nu_parts)?;
    let mut mu2 = half.clone();
    mu2.extend(half.reflected());
    let mu2 = mu2.cleaned();
    let mu1 = parts.subtract(&mu2)?;
    let first = LevyTriplet::from_matrix(t.a.clone(), t.q.clone(), LevyMeasure::from_parts(&mu1))?;
    let second = LevyTriplet::scalar(0.0, 0.0, LevyMeasure::from_parts(&mu2))?;
    Ok(CompensatedSplit { first, second })
}

/// Removes a finite sub-measure mu1 <= mu, returning (a', Q, mu - mu1) with
/// a' = a + int_{|x|<1} x mu1(dx), together with the compound-Poisson part
/// written in the same truncated convention.
pub fn decompose_pro35(t: &LevyTriplet, mu1: &LevyMeasure) -> Result<CompensatedSplit> {
    let p1 = mu1.parts();
    let mass = p1.total_mass();
    if !mass.is_finite() {
        return Err(HuntError::InfiniteMass);
    }
    for c in &mu1.components {
        c.validate(t.dim)?;
    }
    let rest = t.mu.parts().subtract(&p1)?;
    let shift = super::measure::small_jump_mean(mu1, t.dim);
    let a_prime: Vec<f64> = t.a.iter().zip(&shift).map(|(a, s)| a + s).collect();
    let first = LevyTriplet::from_matrix(a_prime, t.q.clone(), LevyMeasure::from_parts(&rest))?;
    let a_cp: Vec<f64> = shift.iter().map(|s| -s).collect();
    let zero = nalgebra::DMatrix::zeros(t.dim, t.dim);
    let second = LevyTriplet::from_matrix(a_cp, zero, mu1.clone())?;
    Ok(CompensatedSplit { first, second })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::component::{Atom, LevyComponent};

    fn power(alpha: f64, cp: f64, cm: f64, r: f64) -> LevyComponent {
        LevyComponent::StablePower { alpha, c_plus: cp, c_minus: cm, cutoff: r }
    }

    #[test]
    fn thm25_moves_symmetric_part() {
        let t = LevyTriplet::scalar(0.0, 0.0, LevyMeasure::new(vec![power(1.0, 1.0, 0.5, f64::INFINITY)])).unwrap();
        let s = decompose_thm25(&t, 0.5, &LevyMeasure::zero(), true).unwrap();
        // oracle: direct subtraction of densities
        for x in [-0.4, -0.1, 0.1, 0.4] {
            assert!((s.second.mu.density(x) - 0.5 / (x * x)).abs() < 1e-12);
        }
        assert_eq!(s.second.mu.density(0.7), 0.0);
        for x in [-3.0, -0.7, -0.3] {
            let expect = if x > -0.5 { 0.0 } else { 0.5 / (x * x) };
            assert!((s.first.mu.density(x) - expect).abs() < 1e-12);
        }
        assert!((s.first.mu.density(0.3) - 0.5 / 0.09).abs() < 1e-12);
        assert!((s.first.mu.density(2.0) - 0.25).abs() < 1e-12);
    }

    #[test]
    fn thm25_nothing_to_move() {
        let t = LevyTriplet::scalar(0.3, 0.0, LevyMeasure::new(vec![power(1.0, 1.0, 0.0, 1.0)])).unwrap();
        let s = decompose_thm25(&t, 0.5, &LevyMeasure::zero(), true).unwrap();
        assert!(s.second.mu.is_zero());
        assert_eq!(s.first.mu.parts(), t.mu.parts());
        let nu = LevyMeasure::new(vec![power(1.0, 2.0, 0.0, 0.5)]);
        let t = LevyTriplet::scalar(0.0, 0.0, LevyMeasure::new(vec![power(1.0, 1.0, 1.0, 1.0)])).unwrap();
        assert!(decompose_thm25(&t, 0.5, &nu, true).unwrap().second.mu.is_zero());
        assert!(matches!(
            decompose_thm25(&t, 0.5, &nu, false),
            Err(HuntError::HypothesisNotVerified(_))
        ));
    }

    #[test]
    fn pro35_drift_shift() {
        let mu = LevyMeasure::new(vec![
            power(1.5, 1.0, 1.0, 1.0),
            LevyComponent::Atoms(vec![Atom::scalar(0.5, 2.0), Atom::scalar(2.0, 3.0)]),
        ]);
        let t = LevyTriplet::scalar(0.0, 0.0, mu).unwrap();
        let s = decompose_pro35(&t, &LevyMeasure::new(vec![LevyComponent::Atoms(vec![Atom::scalar(0.5, 2.0)])])).unwrap();
        assert_eq!(s.first.a, vec![1.0]);
        let s = decompose_pro35(&t, &LevyMeasure::new(vec![LevyComponent::Atoms(vec![Atom::scalar(2.0, 3.0)])])).unwrap();
        assert_eq!(s.first.a, vec![0.0]);
        let bad = LevyMeasure::new(vec![LevyComponent::Atoms(vec![Atom::scalar(2.0, 4.0)])]);
        assert!(matches!(decompose_pro35(&t, &bad), Err(HuntError::NotDominated(_))));
        let inf = LevyMeasure::new(vec![power(1.5, 1.0, 0.0, 1.0)]);
        assert!(matches!(decompose_pro35(&t, &inf), Err(HuntError::InfiniteMass)));
    }

    #[test]
    fn pro35_full_removal() {
        let mu = LevyMeasure::new(vec![LevyComponent::Atoms(vec![Atom::scalar(-0.25, 4.0)])]);
        let t = LevyTriplet::scalar(0.5, 1.0, mu.clone()).unwrap();
        let s = decompose_pro35(&t, &mu).unwrap();
        assert!(s.first.mu.is_zero());
        assert_eq!(s.first.a, vec![-0.5]);
    }

    #[test]
    fn domination_grid() {
        let lhs = LevyMeasure::new(vec![power(1.0, 0.5, 0.0, f64::INFINITY)]).parts();
        let rhs = LevyMeasure::new(vec![power(1.0, 0.5, 0.0, f64::INFINITY)]).parts();
        assert!(dominates(&lhs, &rhs).holds);
        let weaker = LevyMeasure::new(vec![power(0.5, 10.0, 0.0, f64::INFINITY)]).parts();
        let d = dominates(&lhs, &weaker);
        assert!(!d.holds);
        let tail = LevyMeasure::new(vec![power(1.0, 1.0, 0.0, 1.0)]).parts();
        assert!(!dominates(&lhs, &tail).holds);
    }
}
