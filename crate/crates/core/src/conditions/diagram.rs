//! Checkers for the classical sufficient conditions of the implication diagram.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::{Deserialize, Serialize};

use super::sampling::{bounded_for, diverging, Profile, RatioTest, Settings};
use super::verdict::{Status, Verdict, FINITE_GRID_CAVEAT};
use crate::error::Result;
use crate::exponent::{ExponentHandle, PsiParts};
use crate::model::{LevyTriplet, MeasureParts, Side};

/// Growth functions f with int_N^inf (lambda f(lambda))^{-1} d lambda = inf.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", content = "c", rename_all = "snake_case")]
pub enum GrowthFunctionFamily {
    /// f = c; the integral is c^{-1} log lambda
    Constant(f64),
    /// f = c log(2 + lambda); the integral grows like c^{-1} log log lambda
    Log(f64),
    /// f = c log(2 + lambda) log log(e + lambda); the integral grows like c^{-1} log log log lambda
    LogLogLog(f64),
}

impl GrowthFunctionFamily {
    pub const SEARCH_ORDER: [GrowthFunctionFamily; 3] =
        [GrowthFunctionFamily::Constant(1.0), GrowthFunctionFamily::Log(1.0), GrowthFunctionFamily::LogLogLog(1.0)];

    pub fn constant(&self) -> f64 {
        match *self {
            GrowthFunctionFamily::Constant(c) | GrowthFunctionFamily::Log(c) | GrowthFunctionFamily::LogLogLog(c) => c,
        }
    }

    pub fn with_constant(&self, c: f64) -> Self {
        match self {
            GrowthFunctionFamily::Constant(_) => GrowthFunctionFamily::Constant(c),
            GrowthFunctionFamily::Log(_) => GrowthFunctionFamily::Log(c),
            GrowthFunctionFamily::LogLogLog(_) => GrowthFunctionFamily::LogLogLog(c),
        }
    }

    /// The family member with c = 1.
    pub fn shape(&self, lambda: f64) -> f64 {
        match self {
            GrowthFunctionFamily::Constant(_) => 1.0,
            GrowthFunctionFamily::Log(_) => (2.0 + lambda).ln(),
            GrowthFunctionFamily::LogLogLog(_) => (2.0 + lambda).ln() * (std::f64::consts::E + lambda).ln().ln(),
        }
    }

    pub fn eval(&self, lambda: f64) -> f64 {
        self.constant() * self.shape(lambda)
    }

    pub fn name(&self) -> &'static str {
        match self {
            GrowthFunctionFamily::Constant(_) => "constant",
            GrowthFunctionFamily::Log(_) => "log",
            GrowthFunctionFamily::LogLogLog(_) => "logloglog",
        }
    }
}

/// Turns a numerical failure into an Unknown verdict.
pub(crate) fn or_unknown(rule: &str, r: Result<Verdict>) -> Verdict {
    r.unwrap_or_else(|e| Verdict::unknown(rule, format!("numerical failure: {e}")))
}

fn ratio_verdict(rule: &str, test: RatioTest) -> Verdict {
    Verdict::new(test.status, rule)
        .with("c_est", test.sup)
        .with("upper_slope", test.upper_slope)
        .with("tail_sup", test.tail_sup)
        .caveat(FINITE_GRID_CAVEAT)
}

/// Hartman-Wintner growth Re psi / log(1 + |z|) -> inf on an already sampled profile.
pub(crate) fn hw_test(p: &Profile, s: &Settings) -> RatioTest {
    let rs = p.min_ratio(|q| q.re);
    let rs: Vec<f64> = p.zs.iter().zip(rs).map(|(z, r)| r / (1.0 + z).ln()).collect();
    diverging(&p.zs, &rs, s.fit_decades)
}

fn density_gate(v: Verdict, p: &Profile, s: &Settings) -> Verdict {
    if hw_test(p, s).status == Status::Holds {
        v.with("density_gate", "hw")
    } else {
        v.caveat("resolvent densities not established by the Hartman-Wintner check")
    }
}

pub fn check_nd(t: &LevyTriplet) -> Verdict {
    let min = t.q_eigenvalues().iter().cloned().fold(f64::INFINITY, f64::min);
    let status = if min > 1e-10 { Status::Holds } else { Status::Fails };
    Verdict::new(status, "nd").with("min_eigenvalue", min).with("rank", t.q_rank())
}

/// mu equals its reflection, compared piece by piece and atom by atom.
fn reflection_invariant(parts: &MeasureParts) -> bool {
    let a = parts.clone().cleaned();
    let b = parts.clone().reflected().cleaned();
    let close = |x: f64, y: f64| x == y || (x - y).abs() <= 1e-12 * x.abs().max(y.abs());
    let pieces_match = a.pieces.len() == b.pieces.len()
        && a.pieces.iter().all(|p| {
            b.pieces.iter().any(|q| {
                p.side == q.side && p.kernel.same_family(&q.kernel) && close(p.lo, q.lo) && close(p.hi, q.hi) && close(p.coef, q.coef)
            })
        });
    let atoms_match = a.atoms.len() == b.atoms.len()
        && a.atoms.iter().all(|x| {
            b.atoms.iter().any(|y| close(x.w, y.w) && x.x.iter().zip(&y.x).all(|(u, v)| (u - v).abs() <= 1e-12 * (1.0 + u.abs())))
        });
    pieces_match && atoms_match
}

pub fn check_sym(h: &ExponentHandle, s: &Settings) -> Verdict {
    or_unknown("sym", (|| {
        let t = h.triplet();
        let structural = t.a.iter().all(|&a| a == 0.0) && reflection_invariant(&t.mu.parts());
        let p = Profile::sample(h, &s.z_grid())?;
        let max_im = p.max_ratio(|q| q.im.abs()).into_iter().fold(0.0, f64::max);
        let status = if structural && max_im < 1e-9 { Status::Holds } else { Status::Fails };
        let v = Verdict::new(status, "sym").with("structurally_symmetric", structural).with("max_abs_im", max_im);
        Ok(density_gate(v, &p, s))
    })())
}

fn kf_ratio(q: &PsiParts) -> f64 {
    q.im.abs() / q.a
}

pub fn check_kf(h: &ExponentHandle, s: &Settings) -> Verdict {
    or_unknown("kf", (|| {
        let p = Profile::sample(h, &s.z_grid())?;
        let test = bounded_for(h, &p.zs, &p.max_ratio(kf_ratio), s.fit_decades);
        Ok(density_gate(ratio_verdict("kf", test), &p, s))
    })())
}

fn rao_test(h: &ExponentHandle, p: &Profile, f: GrowthFunctionFamily, s: &Settings) -> RatioTest {
    bounded_for(h, &p.zs, &p.max_ratio(|q| q.im.abs() / (q.a * f.shape(q.a))), s.fit_decades)
}

/// With `family = None` the families are tried in order Constant, Log, LogLogLog.
pub fn check_rao(h: &ExponentHandle, family: Option<GrowthFunctionFamily>, s: &Settings) -> Verdict {
    or_unknown("rao", (|| {
        let p = Profile::sample(h, &s.z_grid())?;
        let mut smallest = None;
        for f in GrowthFunctionFamily::SEARCH_ORDER {
            let test = rao_test(h, &p, f, s);
            if test.status == Status::Holds {
                smallest = Some(f.with_constant(test.sup));
                break;
            }
        }
        let requested = family.unwrap_or_else(|| smallest.unwrap_or(GrowthFunctionFamily::LogLogLog(1.0)));
        let test = rao_test(h, &p, requested, s);
        let mut v = ratio_verdict("rao", test.clone()).with("family", requested.name()).with("smallest_family", smallest);
        if family.is_some() && test.status == Status::Holds {
            v = v.with("given_constant_suffices", requested.constant() >= test.sup);
        }
        Ok(density_gate(v, &p, s))
    })())
}

pub fn check_cba(h: &ExponentHandle, s: &Settings) -> Verdict {
    or_unknown("cba", (|| {
        let p = Profile::sample(h, &s.z_grid())?;
        let rs = p.max_ratio(|q| {
            let l = (2.0 + q.b).ln();
            q.b / (q.a * l * l.ln())
        });
        Ok(density_gate(ratio_verdict("cba", bounded_for(h, &p.zs, &rs, s.fit_decades)), &p, s))
    })())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RangeCertificate {
    /// c = |y| + 1 with sqrt(M) y = x
    Constant { c: f64, y: Vec<f64> },
    /// unit kernel vector of M along which x has a component
    KernelDirection { v: Vec<f64>, component: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RangeMembership {
    pub member: bool,
    pub certificate: RangeCertificate,
}

/// Is x in the range of sqrt(M) for a symmetric positive semidefinite M?
pub fn range_member(m: &DMatrix<f64>, x: &[f64]) -> RangeMembership {
    let eig = SymmetricEigen::new(m.clone());
    range_member_eigen(&eig.eigenvalues, &eig.eigenvectors, x)
}

pub(crate) fn range_member_eigen(values: &DVector<f64>, vectors: &DMatrix<f64>, x: &[f64]) -> RangeMembership {
    let xv = DVector::from_column_slice(x);
    let mut y = DVector::zeros(x.len());
    let mut worst: Option<(usize, f64)> = None;
    for (k, &lam) in values.iter().enumerate() {
        let v = vectors.column(k);
        let comp = v.dot(&xv);
        if lam < 1e-10 {
            if comp.abs() >= 1e-9 && worst.is_none_or(|(_, c)| comp.abs() > c.abs()) {
                worst = Some((k, comp));
            }
        } else {
            y += v * (comp / lam.sqrt());
        }
    }
    match worst {
        Some((k, comp)) => RangeMembership {
            member: false,
            certificate: RangeCertificate::KernelDirection { v: vectors.column(k).iter().cloned().collect(), component: comp },
        },
        None => RangeMembership {
            member: true,
            certificate: RangeCertificate::Constant { c: y.norm() + 1.0, y: y.iter().cloned().collect() },
        },
    }
}

pub fn check_s(t: &LevyTriplet) -> Verdict {
    let member = |x: &[f64]| range_member_eigen(t.q_eigenvalues(), t.q_eigenvectors(), x);
    let parts = t.mu.parts();
    let gaussian_1d = t.dim == 1 && t.q[(0, 0)] > 1e-10;
    let mut off_mass = 0.0;
    let mut b: Vec<f64> = t.a.iter().map(|a| -a).collect();
    if !gaussian_1d {
        for p in &parts.pieces {
            off_mass += p.moment_between(0.0, 0.0, f64::INFINITY);
            b[0] -= p.side.sign() * p.moment_between(1.0, 0.0, 1.0);
        }
    }
    for a in &parts.atoms {
        if !member(&a.x).member {
            off_mass += a.w;
            if a.norm() < 1.0 {
                for (bi, xi) in b.iter_mut().zip(&a.x) {
                    *bi -= a.w * xi;
                }
            }
        }
    }
    if !off_mass.is_finite() {
        return Verdict::new(Status::Fails, "s").with("off_range_mass", "infinite");
    }
    let m = member(&b);
    let status = if m.member { Status::Holds } else { Status::Fails };
    Verdict::new(status, "s").with("off_range_mass", off_mass).with("b", &b).with("certificate", &m.certificate)
}

/// Reflection invariance of the measure, exposed for the structural checks.
pub fn is_reflection_invariant(t: &LevyTriplet) -> bool {
    reflection_invariant(&t.mu.parts())
}

/// Whether the measure charges only one side of the origin (1-D).
pub fn one_sided(t: &LevyTriplet) -> Option<Side> {
    let parts = t.mu.parts();
    let pos = !parts.side(Side::Pos).cleaned().is_empty();
    let neg = !parts.side(Side::Neg).cleaned().is_empty();
    match (pos, neg) {
        (true, false) => Some(Side::Pos),
        (false, true) => Some(Side::Neg),
        _ => None,
    }
}
