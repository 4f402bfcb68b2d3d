//! The Levy-Khintchine exponent psi(z) and the derived quantities A and B.
//!
//! Convention: E exp(i<z, X_t>) = exp(-t psi(z)) with
//! psi(z) = i<a,z> + <z,Qz>/2 + int (1 - e^{i<z,x>} + i<z,x> 1_{|x|<1}) mu(dx).

pub mod engine;

use std::collections::HashMap;
use std::sync::RwLock;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{HuntError, Result};
use crate::model::{Atom, FiniteMeasure, LevyTriplet};
use crate::numerics::{integrate_improper, ConvergenceReport, ImproperOptions};
use engine::{combine, has_closed_form, pair_pieces, piece_transform, stable_closed_form, PairedPiece};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    /// Closed forms where available (infinite-support power pieces), engine otherwise.
    ClosedForm,
    QuadratureOnly,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PsiParts {
    #[serde(rename = "A")]
    pub a: f64,
    #[serde(rename = "B")]
    pub b: f64,
    pub re: f64,
    pub im: f64,
}

impl PsiParts {
    pub fn from_psi(psi: Complex64) -> Self {
        let a = 1.0 + psi.re;
        Self { a, b: a.hypot(psi.im), re: psi.re, im: psi.im }
    }
}

const CACHE_LIMIT: usize = 1 << 20;

pub struct ExponentHandle {
    triplet: LevyTriplet,
    strategy: Strategy,
    pieces: Vec<PairedPiece>,
    atoms: Vec<Atom>,
    cache: RwLock<HashMap<Vec<u64>, Complex64>>,
}

impl std::fmt::Debug for ExponentHandle {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ExponentHandle").field("triplet", &self.triplet).field("strategy", &self.strategy).finish()
    }
}

impl ExponentHandle {
    pub fn new(triplet: LevyTriplet) -> Self {
        Self::with_strategy(triplet, Strategy::ClosedForm)
    }

    pub fn with_strategy(triplet: LevyTriplet, strategy: Strategy) -> Self {
        let parts = triplet.mu.parts();
        Self {
            pieces: pair_pieces(&parts),
            atoms: parts.atoms,
            triplet,
            strategy,
            cache: RwLock::new(HashMap::new()),
        }
    }

    pub fn triplet(&self) -> &LevyTriplet {
        &self.triplet
    }

    pub fn dim(&self) -> usize {
        self.triplet.dim
    }

    pub fn strategy(&self) -> Strategy {
        self.strategy
    }

    pub fn psi(&self, z: &[f64]) -> Result<Complex64> {
        if z.len() != self.triplet.dim {
            return Err(HuntError::DimensionMismatch { expected: self.triplet.dim, got: z.len() });
        }
        if z.iter().all(|&v| v == 0.0) {
            return Ok(Complex64::new(0.0, 0.0));
        }
        let key: Vec<u64> = z.iter().map(|v| v.to_bits()).collect();
        if let Some(v) = self.cache.read().unwrap().get(&key) {
            return Ok(*v);
        }
        let v = self.compute(z)?;
        let mut cache = self.cache.write().unwrap();
        if cache.len() >= CACHE_LIMIT {
            cache.clear();
        }
        cache.insert(key, v);
        Ok(v)
    }

    pub fn psi1(&self, z: f64) -> Result<Complex64> {
        self.psi(&[z])
    }

    pub fn parts(&self, z: &[f64]) -> Result<PsiParts> {
        Ok(PsiParts::from_psi(self.psi(z)?))
    }

    pub fn parts1(&self, z: f64) -> Result<PsiParts> {
        self.parts(&[z])
    }

    /// 1-D evaluation over a grid, in parallel.
    pub fn psi_grid(&self, zs: &[f64]) -> Result<Vec<Complex64>> {
        zs.par_iter().map(|&z| self.psi1(z)).collect()
    }

    pub fn parts_grid(&self, zs: &[f64]) -> Result<Vec<PsiParts>> {
        zs.par_iter().map(|&z| self.parts1(z)).collect()
    }

    fn compute(&self, z: &[f64]) -> Result<Complex64> {
        let t = &self.triplet;
        let drift: f64 = t.a.iter().zip(z).map(|(a, z)| a * z).sum();
        let mut psi = Complex64::new(0.5 * t.quadratic(z), drift);
        for atom in &self.atoms {
            let theta: f64 = atom.x.iter().zip(z).map(|(x, z)| x * z).sum();
            let comp = if atom.norm() < 1.0 { theta } else { 0.0 };
            let half = (0.5 * theta).sin();
            psi += atom.w * Complex64::new(2.0 * half * half, comp - theta.sin());
        }
        if !self.pieces.is_empty() {
            let z0 = z[0];
            let za = z0.abs();
            let mut acc = Complex64::new(0.0, 0.0);
            if za > 0.0 {
                for pp in &self.pieces {
                    let f = match (self.strategy, pp.kernel) {
                        (Strategy::ClosedForm, crate::model::Kernel::Power(alpha)) if has_closed_form(pp) => {
                            stable_closed_form(alpha, za)
                        }
                        _ => piece_transform(pp.kernel, pp.lo, pp.hi, za),
                    };
                    acc += combine(pp, f);
                }
            }
            psi += if z0 < 0.0 { acc.conj() } else { acc };
        }
        if !psi.re.is_finite() || !psi.im.is_finite() {
            return Err(HuntError::EvaluationFailure(format!("psi({z:?}) = {psi}")));
        }
        if psi.re < -1e-9 * psi.norm().max(1.0) {
            return Err(HuntError::EvaluationFailure(format!("negative Re psi({z:?}) = {}", psi.re)));
        }
        Ok(psi)
    }
}

pub fn evaluate_psi(h: &ExponentHandle, z: &[f64]) -> Result<Complex64> {
    h.psi(z)
}

pub fn psi_parts(h: &ExponentHandle, z: &[f64]) -> Result<PsiParts> {
    h.parts(z)
}

/// nu_hat(z) = int e^{i<z,x>} nu(dx).
pub fn measure_fourier(nu: &FiniteMeasure, z: &[f64]) -> Complex64 {
    nu.atoms
        .iter()
        .map(|a| {
            let theta: f64 = a.x.iter().zip(z).map(|(x, z)| x * z).sum();
            Complex64::from_polar(a.w, theta)
        })
        .sum()
}

/// int_R A(z)/B(z)^2 |nu_hat(z)|^2 dz, one-dimensional only.
pub fn one_energy(nu: &FiniteMeasure, h: &ExponentHandle, zmax: f64, tol: f64) -> Result<ConvergenceReport> {
    if h.dim() != 1 {
        return Err(HuntError::Unsupported("1-energy is implemented for n = 1 only".into()));
    }
    let failure = RwLock::new(None);
    let f = |z: f64| match h.parts1(z) {
        Ok(p) => p.a / (p.b * p.b) * measure_fourier(nu, &[z]).norm_sqr(),
        Err(e) => {
            *failure.write().unwrap() = Some(e);
            f64::NAN
        }
    };
    let mut opts = ImproperOptions::up_to(zmax);
    opts.quad_rel = tol;
    let half = integrate_improper(f, 0.0, &opts);
    if let Some(e) = failure.into_inner().unwrap() {
        return Err(e);
    }
    let mut report = half?;
    report.double();
    Ok(report)
}
