//! Case assignment for one-dimensional processes and the Kesten hitting tests.

use std::sync::RwLock;

use serde::{Deserialize, Serialize};

use crate::conditions::Settings;
use crate::error::{HuntError, Result};
use crate::exponent::ExponentHandle;
use crate::model::{variation_integral, LevyTriplet, Side};
use crate::numerics::{integrate_improper, ConvergenceReport, ImproperOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CaseLabel {
    A,
    B,
    C1,
    C2,
    C3,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BretagnolleCase {
    pub case: CaseLabel,
    /// a' = a + int_{|x|<1} x mu(dx), finite variation only
    pub a_prime: Option<f64>,
    pub compound_poisson: bool,
    pub charges_negative: bool,
    pub charges_positive: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HittingSet {
    AllReals,
    Empty,
    PositiveHalfLine,
    NegativeHalfLine,
    Unknown,
}

const DRIFT_TOL: f64 = 1e-12;

/// Compound Poisson here means Q = 0, finite Levy measure and no drift
/// (a' = 0); a pure drift or a drifted compound Poisson process is not one.
pub fn is_compound_poisson(t: &LevyTriplet) -> bool {
    t.has_bounded_exponent()
}

pub fn bretagnolle_case(t: &LevyTriplet) -> Result<BretagnolleCase> {
    if t.dim != 1 {
        return Err(HuntError::DimensionMismatch { expected: 1, got: t.dim });
    }
    let parts = t.mu.parts();
    let charges_negative = !parts.side(Side::Neg).cleaned().is_empty();
    let charges_positive = !parts.side(Side::Pos).cleaned().is_empty();
    let compound_poisson = is_compound_poisson(t);
    let base = |case, a_prime| BretagnolleCase { case, a_prime, compound_poisson, charges_negative, charges_positive };
    if t.q[(0, 0)] > 0.0 {
        return Ok(base(CaseLabel::A, None));
    }
    let total = variation_integral(&t.mu, Side::Pos).to_f64() + variation_integral(&t.mu, Side::Neg).to_f64();
    if !total.is_finite() {
        return Ok(base(CaseLabel::B, None));
    }
    let ap = t.adjusted_drift().map(|d| d[0]).unwrap_or(0.0);
    let case = if ap.abs() <= DRIFT_TOL {
        CaseLabel::C1
    } else {
        // jumps only on the side the labels call "with the drift"; a' < 0 is the mirror image
        let against = if ap > 0.0 { charges_negative } else { charges_positive };
        if against {
            CaseLabel::C3
        } else {
            CaseLabel::C2
        }
    };
    Ok(base(case, Some(ap)))
}

/// The hitting set implied by the case alone (None when the case does not decide it).
pub fn case_hitting_set(c: &BretagnolleCase) -> Option<HittingSet> {
    match c.case {
        CaseLabel::A => Some(HittingSet::AllReals),
        CaseLabel::C1 if !c.compound_poisson => Some(HittingSet::Empty),
        CaseLabel::C2 if !c.compound_poisson => Some(if c.a_prime.unwrap_or(0.0) > 0.0 {
            HittingSet::PositiveHalfLine
        } else {
            HittingSet::NegativeHalfLine
        }),
        CaseLabel::C3 if !c.compound_poisson => Some(HittingSet::AllReals),
        _ => None,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KestenResult {
    pub hitting_set: HittingSet,
    /// the variation shortcut fired
    pub shortcut: bool,
    pub integral: Option<ConvergenceReport>,
}

/// For Case B: finite variation on one side gives C = R; otherwise the
/// integral int_0^inf Re(1/(1+psi)) dz decides.
pub fn kesten_hitting(h: &ExponentHandle, s: &Settings) -> Result<KestenResult> {
    let t = h.triplet();
    let c = bretagnolle_case(t)?;
    if c.case != CaseLabel::B {
        return Err(HuntError::InvalidParameter(format!("Kesten tests apply to case B, not {:?}", c.case)));
    }
    if variation_integral(&t.mu, Side::Pos).is_finite() || variation_integral(&t.mu, Side::Neg).is_finite() {
        return Ok(KestenResult { hitting_set: HittingSet::AllReals, shortcut: true, integral: None });
    }
    let failure = RwLock::new(None);
    let f = |z: f64| match h.parts1(z) {
        Ok(p) => p.a / (p.b * p.b),
        Err(e) => {
            *failure.write().unwrap() = Some(e);
            f64::NAN
        }
    };
    let r = integrate_improper(f, 0.0, &ImproperOptions::up_to(s.zmax));
    if let Some(e) = failure.into_inner().unwrap() {
        return Err(e);
    }
    let r = r?;
    let hitting_set = if r.converges() {
        HittingSet::AllReals
    } else if r.diverges() {
        HittingSet::Empty
    } else {
        HittingSet::Unknown
    };
    Ok(KestenResult { hitting_set, shortcut: false, integral: Some(r) })
}
