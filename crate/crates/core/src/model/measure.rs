use serde::Serialize;

use super::component::{Atom, Kernel, LevyComponent, MeasureParts, Side};
use crate::error::{HuntError, Result};

/// A value in [0, inf].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum ExtendedReal {
    Finite(f64),
    Infinite,
}

impl ExtendedReal {
    pub fn from_f64(v: f64) -> Self {
        if v.is_finite() {
            ExtendedReal::Finite(v)
        } else {
            ExtendedReal::Infinite
        }
    }
    pub fn is_finite(&self) -> bool {
        matches!(self, ExtendedReal::Finite(_))
    }
    pub fn to_f64(&self) -> f64 {
        match *self {
            ExtendedReal::Finite(v) => v,
            ExtendedReal::Infinite => f64::INFINITY,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct LevyMeasure {
    pub components: Vec<LevyComponent>,
}

impl LevyMeasure {
    pub fn new(components: Vec<LevyComponent>) -> Self {
        Self { components }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_parts(parts: &MeasureParts) -> Self {
        Self { components: parts.to_components() }
    }

    pub fn parts(&self) -> MeasureParts {
        let mut out = MeasureParts::default();
        for c in &self.components {
            out.extend(c.parts());
        }
        out.cleaned()
    }

    pub fn is_zero(&self) -> bool {
        self.parts().is_empty()
    }

    pub fn total_mass(&self) -> ExtendedReal {
        ExtendedReal::from_f64(self.parts().total_mass())
    }

    pub fn density(&self, x: f64) -> f64 {
        self.parts().density(x)
    }

    /// Restriction to one open half-line.
    pub fn side(&self, side: Side) -> LevyMeasure {
        LevyMeasure::from_parts(&self.parts().side(side))
    }

    pub fn reflected(&self) -> LevyMeasure {
        LevyMeasure::from_parts(&self.parts().reflected())
    }

    pub fn plus(&self, other: &LevyMeasure) -> LevyMeasure {
        let mut c = self.components.clone();
        c.extend(other.components.iter().cloned());
        LevyMeasure::new(c)
    }

    /// True when some component is absolutely continuous.
    pub fn has_density_part(&self) -> bool {
        !self.parts().pieces.is_empty()
    }
}

/// Finite measure given by atoms, used for compound-Poisson parts and
/// auxiliary measures.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteMeasure {
    pub atoms: Vec<Atom>,
}

impl FiniteMeasure {
    pub fn new(atoms: Vec<Atom>) -> Result<Self> {
        for a in &atoms {
            if !(a.w >= 0.0) || !a.w.is_finite() {
                return Err(HuntError::InvalidParameter("finite measure weights must be finite and >= 0".into()));
            }
        }
        Ok(Self { atoms })
    }
    pub fn total_mass(&self) -> f64 {
        self.atoms.iter().map(|a| a.w).sum()
    }
    pub fn to_levy(&self) -> LevyMeasure {
        LevyMeasure::new(vec![LevyComponent::Atoms(self.atoms.clone())])
    }
}

/// int (1 ∧ |x|) mu(dx) over one side of the origin.
pub fn variation_integral(mu: &LevyMeasure, side: Side) -> ExtendedReal {
    let parts = mu.parts().side(side);
    let mut total = 0.0;
    for p in &parts.pieces {
        total += p.moment_between(1.0, 0.0, 1.0) + p.moment_between(0.0, 1.0, f64::INFINITY);
    }
    for a in &parts.atoms {
        total += a.w * a.x[0].abs().min(1.0);
    }
    ExtendedReal::from_f64(total)
}

/// int_{|x| < eps} |x|^p mu(dx). Errors when the integral diverges at 0.
pub fn truncated_moment(mu: &LevyMeasure, p: f64, eps: f64) -> Result<f64> {
    let parts = mu.parts();
    let mut total = 0.0;
    for piece in &parts.pieces {
        if piece.lo == 0.0 && !piece.kernel.moment_finite_at_zero(p) {
            return Err(HuntError::NonIntegrable { p });
        }
        total += piece.moment_between(p, 0.0, eps);
    }
    for a in &parts.atoms {
        let r = a.norm();
        if r < eps {
            total += a.w * r.powf(p);
        }
    }
    Ok(total)
}

/// int_{|x|<1} x mu(dx) (componentwise for atoms in R^n). Infinite entries
/// mean the small-jump first moment diverges.
pub fn small_jump_mean(mu: &LevyMeasure, dim: usize) -> Vec<f64> {
    let parts = mu.parts();
    let mut m = vec![0.0; dim];
    for p in &parts.pieces {
        let v = p.moment_between(1.0, 0.0, 1.0);
        m[0] += p.side.sign() * v;
    }
    for a in &parts.atoms {
        if a.norm() < 1.0 {
            for (mi, xi) in m.iter_mut().zip(&a.x) {
                *mi += a.w * xi;
            }
        }
    }
    m
}

/// Whether int_{|x|<1} |x| mu(dx) is finite.
pub fn has_finite_variation_jumps(mu: &LevyMeasure) -> bool {
    mu.parts().pieces.iter().all(|p| p.lo > 0.0 || p.kernel.moment_finite_at_zero(1.0))
}

/// (mu restricted to (0, inf), mu restricted to (-inf, 0)).
pub fn split_pm(mu: &LevyMeasure) -> (LevyMeasure, LevyMeasure) {
    (mu.side(Side::Pos), mu.side(Side::Neg))
}

/// Largest activity index among kernels singular at the origin (0 if none).
pub fn activity_index(mu: &LevyMeasure) -> f64 {
    mu.parts()
        .pieces
        .iter()
        .filter(|p| p.lo == 0.0)
        .map(|p| p.kernel.activity_index())
        .fold(0.0, f64::max)
}

/// Strongest singularity at the origin among the pieces, as (power, log power).
pub fn leading_singularity(parts: &MeasureParts) -> Option<(f64, f64)> {
    parts
        .pieces
        .iter()
        .filter(|p| p.lo == 0.0)
        .map(|p| p.kernel.singularity())
        .fold(None, |acc: Option<(f64, f64)>, s| match acc {
            Some(a) if (a.0, a.1) >= (s.0, s.1) => Some(a),
            _ => Some(s),
        })
}

pub fn kernel_families(parts: &MeasureParts) -> Vec<Kernel> {
    let mut out: Vec<Kernel> = Vec::new();
    for p in &parts.pieces {
        if !out.iter().any(|k| k.same_family(&p.kernel)) {
            out.push(p.kernel);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn stable(alpha: f64, cp: f64, cm: f64, r: f64) -> LevyMeasure {
        LevyMeasure::new(vec![LevyComponent::StablePower { alpha, c_plus: cp, c_minus: cm, cutoff: r }])
    }

    #[test]
    fn variation_of_half_stable_is_two() {
        let mu = stable(0.5, 1.0, 1.0, 1.0);
        assert_eq!(variation_integral(&mu, Side::Pos), ExtendedReal::Finite(2.0));
        let mu = stable(0.5, 1.0, 1.0, f64::INFINITY);
        // int_0^1 x^{-1/2} + int_1^inf x^{-3/2} = 2 + 2
        let v = variation_integral(&mu, Side::Neg).to_f64();
        assert!((v - 4.0).abs() < 1e-14);
        assert_eq!(variation_integral(&stable(1.5, 1.0, 0.0, 1.0), Side::Pos), ExtendedReal::Infinite);
    }

    #[test]
    fn truncated_moment_closed_form() {
        let mu = stable(1.5, 2.0, 1.0, 1.0);
        let eps: f64 = 0.01;
        let m = truncated_moment(&mu, 2.0, eps).unwrap();
        assert!((m - 3.0 * eps.powf(0.5) / 0.5).abs() < 1e-14);
        assert!(matches!(truncated_moment(&mu, 1.0, eps), Err(HuntError::NonIntegrable { .. })));
    }

    #[test]
    fn split_sums_back() {
        let mu = stable(1.2, 1.0, 0.3, 2.0).plus(&LevyMeasure::new(vec![LevyComponent::Atoms(vec![
            Atom::scalar(0.5, 1.0),
            Atom::scalar(-2.0, 0.25),
        ])]));
        let (p, m) = split_pm(&mu);
        let back = p.plus(&m);
        for x in [-1.9, -0.4, 0.01, 0.7, 1.99] {
            assert!((back.density(x) - mu.density(x)).abs() < 1e-12);
        }
        assert_eq!(back.parts().atoms.len(), 2);
    }

    #[test]
    fn small_jump_mean_of_one_sided_power() {
        // int_0^1 x * x^{-1.5} dx = 2
        let mu = stable(0.5, 1.0, 0.0, 1.0);
        assert!((small_jump_mean(&mu, 1)[0] - 2.0).abs() < 1e-14);
        assert!(!has_finite_variation_jumps(&stable(1.0, 1.0, 0.0, 1.0)));
    }
}
