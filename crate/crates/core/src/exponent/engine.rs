//! Per-piece evaluation of int (1 - e^{izx} + izx 1_{x<1}) k(x) dx over (lo, hi), z > 0.
//!
//! Near the origin (zx <= 1/2) the integrand is expanded in powers of zx and
//! integrated term by term with closed-form moments. Above that the
//! non-oscillatory part is closed form and the Fourier part goes through
//! the Legendre/Bessel panel engine, with an asymptotic tail for infinite
//! power supports.

use num_complex::Complex64;

use crate::model::{Kernel, MeasureParts, Side};
use crate::numerics::oscillatory::{fourier_panel, geometric_panels};
use crate::special::{gamma, EULER_GAMMA};

const SERIES_LIMIT: f64 = 0.5;
const TAIL_START: f64 = 40.0;

/// A density piece with both of its sides: c_pos k(x) on (lo, hi) and
/// c_neg k(-x) on (-hi, -lo).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairedPiece {
    pub kernel: Kernel,
    pub lo: f64,
    pub hi: f64,
    pub c_pos: f64,
    pub c_neg: f64,
}

pub fn pair_pieces(parts: &MeasureParts) -> Vec<PairedPiece> {
    let mut out: Vec<PairedPiece> = Vec::new();
    for p in &parts.pieces {
        let found = out
            .iter_mut()
            .find(|q| q.kernel.same_family(&p.kernel) && q.lo == p.lo && q.hi == p.hi);
        let slot = match found {
            Some(q) => q,
            None => {
                out.push(PairedPiece { kernel: p.kernel, lo: p.lo, hi: p.hi, c_pos: 0.0, c_neg: 0.0 });
                out.last_mut().unwrap()
            }
        };
        match p.side {
            Side::Pos => slot.c_pos += p.coef,
            Side::Neg => slot.c_neg += p.coef,
        }
    }
    out
}

/// Combines the positive-side transform f with its mirror: the negative side
/// contributes conj(f).
pub fn combine(pp: &PairedPiece, f: Complex64) -> Complex64 {
    Complex64::new((pp.c_pos + pp.c_neg) * f.re, (pp.c_pos - pp.c_neg) * f.im)
}

pub fn has_closed_form(pp: &PairedPiece) -> bool {
    matches!(pp.kernel, Kernel::Power(_)) && pp.lo == 0.0 && pp.hi.is_infinite()
}

/// Closed form of the transform for x^{-1-alpha} on (0, inf).
pub fn stable_closed_form(alpha: f64, z: f64) -> Complex64 {
    if (alpha - 1.0).abs() < 1e-12 {
        return Complex64::new(std::f64::consts::FRAC_PI_2 * z, z * (z.ln() - 1.0 + EULER_GAMMA));
    }
    let g = gamma(1.0 - alpha) / alpha;
    let za = z.powf(alpha);
    let h = std::f64::consts::FRAC_PI_2 * alpha;
    Complex64::new(za * g * h.cos(), z / (1.0 - alpha) - za * g * h.sin())
}

/// -sum_{n >= n0} (iz)^n / n! M_n on (a, b).
fn series_part(k: Kernel, a: f64, b: f64, z: f64, n0: u32) -> Complex64 {
    if b <= a {
        return Complex64::new(0.0, 0.0);
    }
    let iz = Complex64::new(0.0, z);
    let mut pow = Complex64::new(1.0, 0.0);
    let mut fact = 1.0;
    for n in 1..n0 {
        pow *= iz;
        fact *= n as f64;
    }
    let mut sum = Complex64::new(0.0, 0.0);
    for n in n0..80 {
        pow *= iz;
        fact *= n as f64;
        let m = k.moment(n as f64, a, b);
        let term = pow * (m / fact);
        sum += term;
        if n > n0 + 1 && term.norm() <= 1e-18 * sum.norm() {
            break;
        }
    }
    -sum
}

/// int_W^inf e^{iy} y^{-s} dy for W >= 40 by its asymptotic expansion.
fn oscillatory_tail(s: f64, w: f64) -> Complex64 {
    let mut sum = Complex64::new(0.0, 0.0);
    let mut term = Complex64::new(1.0, 0.0);
    let mut prev = f64::INFINITY;
    for k in 0..200 {
        if k > 0 {
            term *= Complex64::new(0.0, -(s + (k - 1) as f64) / w);
        }
        let mag = term.norm();
        if mag > prev {
            break;
        }
        sum += term;
        prev = mag;
        if mag < 1e-18 * sum.norm() {
            break;
        }
    }
    Complex64::new(0.0, 1.0) * Complex64::from_polar(1.0, w) * w.powf(-s) * sum
}

/// Panels for the Fourier part; the log kernel gets extra splits as the
/// interval approaches x = 1 where 1/|log x| blows up.
fn panels(k: Kernel, lo: f64, hi: f64) -> Vec<(f64, f64)> {
    let base = geometric_panels(lo, hi);
    match k {
        Kernel::Power(_) => base,
        Kernel::LogSingular => {
            let mut out = Vec::with_capacity(base.len());
            for (p, q) in base {
                let width = 0.5 * (1.0 - q);
                let m = ((q - p) / width).ceil().max(1.0) as usize;
                let h = (q - p) / m as f64;
                for j in 0..m {
                    out.push((p + j as f64 * h, if j + 1 == m { q } else { p + (j + 1) as f64 * h }));
                }
            }
            out
        }
    }
}

fn fourier(k: Kernel, lo: f64, hi: f64, z: f64) -> Complex64 {
    let f = |x: f64| k.eval(x);
    panels(k, lo, hi).into_iter().map(|(p, q)| fourier_panel(&f, p, q, z)).sum()
}

/// Transform of the unit-coefficient positive-side piece k on (lo, hi), z > 0.
pub fn piece_transform(k: Kernel, lo: f64, hi: f64, z: f64) -> Complex64 {
    let xs = SERIES_LIMIT / z;
    let mut total = Complex64::new(0.0, 0.0);
    // series region (lo, min(hi, xs)), split at the truncation point 1
    let s_hi = hi.min(xs);
    if s_hi > lo {
        total += series_part(k, lo, s_hi.min(1.0), z, 2);
        total += series_part(k, lo.max(1.0), s_hi, z, 1);
    }
    let u = lo.max(xs);
    if u < hi {
        let mut non_osc = Complex64::new(k.moment(0.0, u, hi), 0.0);
        if u < 1.0 {
            non_osc += Complex64::new(0.0, z * k.moment(1.0, u, hi.min(1.0)));
        }
        let osc = if hi.is_finite() {
            fourier(k, u, hi, z)
        } else {
            let alpha = match k {
                Kernel::Power(a) => a,
                Kernel::LogSingular => unreachable!("log kernel has bounded support"),
            };
            let t = u.max(TAIL_START / z);
            let mut o = if t > u { fourier(k, u, t, z) } else { Complex64::new(0.0, 0.0) };
            o += z.powf(alpha) * oscillatory_tail(1.0 + alpha, z * t);
            o
        };
        total += non_osc - osc;
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::HuntError;
    use crate::numerics::integrate_adaptive;

    fn quad<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> f64 {
        match integrate_adaptive(f, a, b, 1e-12) {
            Ok(r) => r.value,
            Err(HuntError::MaxSubdivisions { estimate, error }) if error < 1e-12 * estimate.abs().max(1.0) => estimate,
            Err(e) => panic!("{e}"),
        }
    }

    // Oracle: adaptive quadrature of the real and imaginary integrands in t = -ln x.
    fn brute(k: Kernel, lo: f64, hi: f64, z: f64) -> Complex64 {
        let re = |x: f64| (2.0 * (0.5 * z * x).sin().powi(2)) * k.eval(x);
        let im = |x: f64| {
            let y = z * x;
            let v = if x >= 1.0 {
                -y.sin()
            } else if y < 1e-2 {
                y.powi(3) / 6.0 - y.powi(5) / 120.0 + y.powi(7) / 5040.0
            } else {
                y - y.sin()
            };
            v * k.eval(x)
        };
        let mut r = 0.0;
        let mut i = 0.0;
        let mut edges = vec![lo.max(1e-30)];
        let mut e = edges[0];
        while e < hi {
            e = (e * 2.0).min(hi);
            if e > 1.0 && edges.last().map_or(false, |l| *l < 1.0) {
                edges.push(1.0);
            }
            edges.push(e);
        }
        // keep a handful of oscillations per subinterval
        let width = 30.0 / z;
        for w in edges.windows(2) {
            let m = ((w[1] - w[0]) / width).ceil().max(1.0) as usize;
            let h = (w[1] - w[0]) / m as f64;
            for j in 0..m {
                let (a, b) = (w[0] + j as f64 * h, if j + 1 == m { w[1] } else { w[0] + (j + 1) as f64 * h });
                r += quad(&re, a, b);
                i += quad(&im, a, b);
            }
        }
        Complex64::new(r, i)
    }

    #[test]
    fn finite_pieces_match_brute_force() {
        for &(k, lo, hi) in &[
            (Kernel::Power(1.5), 0.0, 1.0),
            (Kernel::Power(0.5), 0.0, 3.0),
            (Kernel::Power(1.0), 0.2, 50.0),
            (Kernel::LogSingular, 0.0, 0.5),
            (Kernel::LogSingular, 0.1, 0.9),
        ] {
            for &z in &[0.05, 0.7, 3.0, 40.0, 900.0] {
                let got = piece_transform(k, lo, hi, z);
                let want = brute(k, lo, hi, z);
                let err = (got - want).norm() / want.norm().max(1e-300);
                assert!(err < 1e-8, "{k:?} ({lo},{hi}) z={z}: {got} vs {want}");
            }
        }
    }

    #[test]
    fn closed_form_matches_engine() {
        for &alpha in &[0.3, 0.5, 0.999, 1.0, 1.2, 1.5, 1.9] {
            for &z in &[0.1, 1.0, 7.0, 100.0] {
                let cf = stable_closed_form(alpha, z);
                let q = piece_transform(Kernel::Power(alpha), 0.0, f64::INFINITY, z);
                let err = (cf - q).norm() / cf.norm();
                assert!(err < 1e-9, "alpha={alpha} z={z}: {cf} vs {q}");
            }
        }
    }

    #[test]
    fn tail_expansion_matches_panels() {
        // int_40^80 + int_80^inf compared with int_40^inf
        let s = 1.7;
        let f = |y: f64| y.powf(-s);
        let mid: Complex64 = geometric_panels(40.0, 80.0).into_iter().map(|(p, q)| fourier_panel(&f, p, q, 1.0)).sum();
        let a = oscillatory_tail(s, 40.0);
        let b = mid + oscillatory_tail(s, 80.0);
        assert!((a - b).norm() < 1e-13);
    }
}
