use nalgebra::{DMatrix, DVector, SymmetricEigen};

use super::measure::{has_finite_variation_jumps, small_jump_mean, LevyMeasure};
use crate::error::{HuntError, Result};

const SYMMETRY_TOL: f64 = 1e-12;
const PSD_TOL: f64 = 1e-10;

/// Validated generating triplet (a, Q, mu) of a Levy process on R^dim.
#[derive(Debug, Clone)]
pub struct LevyTriplet {
    pub dim: usize,
    pub a: Vec<f64>,
    pub q: DMatrix<f64>,
    pub mu: LevyMeasure,
    q_eigenvalues: DVector<f64>,
    q_eigenvectors: DMatrix<f64>,
}

impl PartialEq for LevyTriplet {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.a == other.a && self.q == other.q && self.mu == other.mu
    }
}

pub fn validate_triplet(a: Vec<f64>, q: Vec<Vec<f64>>, mu: LevyMeasure) -> Result<LevyTriplet> {
    let dim = a.len();
    if dim == 0 {
        return Err(HuntError::InvalidParameter("dimension must be at least 1".into()));
    }
    if q.len() != dim {
        return Err(HuntError::DimensionMismatch { expected: dim, got: q.len() });
    }
    for row in &q {
        if row.len() != dim {
            return Err(HuntError::DimensionMismatch { expected: dim, got: row.len() });
        }
    }
    let qm = DMatrix::from_fn(dim, dim, |i, j| q[i][j]);
    LevyTriplet::from_matrix(a, qm, mu)
}

impl LevyTriplet {
    pub fn new(a: Vec<f64>, q: Vec<Vec<f64>>, mu: LevyMeasure) -> Result<Self> {
        validate_triplet(a, q, mu)
    }

    /// One-dimensional shorthand.
    pub fn scalar(a: f64, q: f64, mu: LevyMeasure) -> Result<Self> {
        validate_triplet(vec![a], vec![vec![q]], mu)
    }

    pub fn from_matrix(a: Vec<f64>, q: DMatrix<f64>, mu: LevyMeasure) -> Result<Self> {
        let dim = a.len();
        if q.nrows() != dim || q.ncols() != dim {
            return Err(HuntError::DimensionMismatch { expected: dim, got: q.nrows() });
        }
        if a.iter().chain(q.iter()).any(|v| !v.is_finite()) {
            return Err(HuntError::InvalidParameter("drift and Gaussian part must be finite".into()));
        }
        let scale = q.iter().fold(1.0f64, |m, v| m.max(v.abs()));
        let asym = (&q - q.transpose()).iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if asym > SYMMETRY_TOL * scale {
            return Err(HuntError::NonSymmetricQ(asym));
        }
        let sym = (&q + q.transpose()) * 0.5;
        let eig = SymmetricEigen::new(sym.clone());
        let min = eig.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min);
        if min < -PSD_TOL * scale {
            return Err(HuntError::NegativeEigenvalue(min));
        }
        for c in &mu.components {
            c.validate(dim)?;
        }
        let eigenvalues = eig.eigenvalues.map(|v| v.max(0.0));
        Ok(Self { dim, a, q: sym, mu, q_eigenvalues: eigenvalues, q_eigenvectors: eig.eigenvectors })
    }

    pub fn q_eigenvalues(&self) -> &DVector<f64> {
        &self.q_eigenvalues
    }

    pub fn q_eigenvectors(&self) -> &DMatrix<f64> {
        &self.q_eigenvectors
    }

    pub fn q_rank(&self) -> usize {
        let top = self.q_eigenvalues.iter().cloned().fold(0.0, f64::max);
        self.q_eigenvalues.iter().filter(|&&v| v > PSD_TOL * top.max(1.0)).count()
    }

    pub fn has_gaussian_part(&self) -> bool {
        self.q_eigenvalues.iter().any(|&v| v > 0.0)
    }

    /// <z, Qz>
    pub fn quadratic(&self, z: &[f64]) -> f64 {
        let zv = DVector::from_column_slice(z);
        zv.dot(&(&self.q * &zv))
    }

    /// a' = a + int_{|x|<1} x mu(dx); None when the small jumps have infinite variation.
    pub fn adjusted_drift(&self) -> Option<Vec<f64>> {
        if !has_finite_variation_jumps(&self.mu) {
            return None;
        }
        let m = small_jump_mean(&self.mu, self.dim);
        Some(self.a.iter().zip(&m).map(|(a, m)| a + m).collect())
    }

    /// psi is bounded exactly when Q = 0, mu is finite and a' = 0.
    pub fn has_bounded_exponent(&self) -> bool {
        !self.has_gaussian_part()
            && self.mu.total_mass().is_finite()
            && self.adjusted_drift().is_some_and(|d| d.iter().all(|x| x.abs() <= 1e-12))
    }

    pub fn with_measure(&self, mu: LevyMeasure) -> Result<Self> {
        Self::from_matrix(self.a.clone(), self.q.clone(), mu)
    }
}

/// Triplet of X1 + X2 for independent X1, X2.
pub fn sum_triplets(t1: &LevyTriplet, t2: &LevyTriplet) -> Result<LevyTriplet> {
    if t1.dim != t2.dim {
        return Err(HuntError::DimensionMismatch { expected: t1.dim, got: t2.dim });
    }
    let a = t1.a.iter().zip(&t2.a).map(|(x, y)| x + y).collect();
    LevyTriplet::from_matrix(a, &t1.q + &t2.q, t1.mu.plus(&t2.mu))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::component::{Atom, LevyComponent};

    #[test]
    fn rejects_bad_gaussian_parts() {
        let e = validate_triplet(vec![0.0, 0.0], vec![vec![1.0, 0.5], vec![0.4, 1.0]], LevyMeasure::zero());
        assert!(matches!(e, Err(HuntError::NonSymmetricQ(_))));
        let e = validate_triplet(vec![0.0, 0.0], vec![vec![1.0, 2.0], vec![2.0, 1.0]], LevyMeasure::zero());
        assert!(matches!(e, Err(HuntError::NegativeEigenvalue(v)) if (v + 1.0).abs() < 1e-12));
        let e = validate_triplet(vec![0.0], vec![vec![1.0], vec![0.0]], LevyMeasure::zero());
        assert!(matches!(e, Err(HuntError::DimensionMismatch { .. })));
    }

    #[test]
    fn rejects_bad_measures() {
        let mu = LevyMeasure::new(vec![LevyComponent::StablePower { alpha: 2.5, c_plus: 1.0, c_minus: 1.0, cutoff: 1.0 }]);
        assert!(matches!(LevyTriplet::scalar(0.0, 0.0, mu), Err(HuntError::NonIntegrableLevyMeasure(_))));
        let mu = LevyMeasure::new(vec![LevyComponent::Atoms(vec![Atom::new(vec![0.0, 0.0], 1.0)])]);
        assert!(matches!(
            validate_triplet(vec![0.0; 2], vec![vec![0.0; 2]; 2], mu),
            Err(HuntError::AtomAtOrigin)
        ));
    }

    #[test]
    fn sum_adds_each_part() {
        let mu1 = LevyMeasure::new(vec![LevyComponent::Atoms(vec![Atom::scalar(1.0, 2.0)])]);
        let t1 = LevyTriplet::scalar(1.0, 0.5, mu1).unwrap();
        let t2 = LevyTriplet::scalar(-0.25, 2.0, LevyMeasure::zero()).unwrap();
        let s = sum_triplets(&t1, &t2).unwrap();
        assert_eq!(s.a, vec![0.75]);
        assert_eq!(s.q[(0, 0)], 2.5);
        assert_eq!(s.mu.parts().atoms.len(), 1);
    }

    #[test]
    fn adjusted_drift_of_subordinator() {
        let mu = LevyMeasure::new(vec![LevyComponent::StablePower { alpha: 0.5, c_plus: 1.0, c_minus: 0.0, cutoff: 1.0 }]);
        let t = LevyTriplet::scalar(-2.0, 0.0, mu).unwrap();
        assert!(t.adjusted_drift().unwrap()[0].abs() < 1e-14);
    }
}
