//! Fourier integrals of smooth, non-oscillating weights.
//!
//! On each panel the weight is expanded in Legendre polynomials from a
//! Gauss-Legendre sample and integrated against e^{i z x} exactly through
//! the moments  int_{-1}^{1} e^{i w t} P_k(t) dt = 2 i^k j_k(w).  The cost is
//! independent of how many oscillations a panel holds.

use num_complex::Complex64;
use std::sync::LazyLock;

use super::gauss::{gauss_legendre, legendre_all};

pub const PANEL_ORDER: usize = 20;

struct PanelTable {
    nodes: Vec<f64>,
    // weights[j] * (2k+1)/2 * P_k(t_j), row-major by k
    projection: Vec<Vec<f64>>,
}

static TABLE: LazyLock<PanelTable> = LazyLock::new(|| {
    let (nodes, weights) = gauss_legendre(PANEL_ORDER);
    let p: Vec<Vec<f64>> = nodes.iter().map(|&t| legendre_all(PANEL_ORDER, t)).collect();
    let projection = (0..PANEL_ORDER)
        .map(|k| {
            (0..PANEL_ORDER)
                .map(|j| weights[j] * (2.0 * k as f64 + 1.0) / 2.0 * p[j][k])
                .collect()
        })
        .collect();
    PanelTable { nodes, projection }
});

/// j_0(w) ..= j_{n-1}(w) for w >= 0.
pub fn spherical_bessel_all(w: f64, n: usize) -> Vec<f64> {
    let mut out = vec![0.0; n];
    if n == 0 {
        return out;
    }
    if w == 0.0 {
        out[0] = 1.0;
        return out;
    }
    if w < 1.0 {
        let mut lead = 1.0; // w^k / (2k+1)!!
        let h = -0.5 * w * w;
        for (k, slot) in out.iter_mut().enumerate() {
            if k > 0 {
                lead *= w / (2.0 * k as f64 + 1.0);
            }
            let mut sum = 1.0;
            let mut term = 1.0;
            for m in 1..30 {
                term *= h / (m as f64 * (2.0 * (k + m) as f64 + 1.0));
                sum += term;
                if term.abs() < 1e-18 {
                    break;
                }
            }
            *slot = lead * sum;
        }
        return out;
    }
    let (s, c) = w.sin_cos();
    let j0 = s / w;
    let j1 = s / (w * w) - c / w;
    if w > n as f64 {
        out[0] = j0;
        if n > 1 {
            out[1] = j1;
        }
        for k in 1..n.saturating_sub(1) {
            out[k + 1] = (2.0 * k as f64 + 1.0) / w * out[k] - out[k - 1];
        }
        return out;
    }
    // Miller backward recurrence
    let start = n + 20 + w as usize;
    let mut next = 0.0;
    let mut cur = 1e-30;
    let mut vals = vec![0.0; start + 1];
    vals[start] = cur;
    for k in (1..=start).rev() {
        let prev = (2.0 * k as f64 + 1.0) / w * cur - next;
        next = cur;
        cur = prev;
        vals[k - 1] = cur;
        if cur.abs() > 1e250 {
            for v in vals.iter_mut().skip(k - 1) {
                *v *= 1e-250;
            }
            next *= 1e-250;
            cur *= 1e-250;
        }
    }
    let scale = if j0.abs() >= j1.abs() { j0 / vals[0] } else { j1 / vals[1] };
    for k in 0..n {
        out[k] = vals[k] * scale;
    }
    out
}

/// int_p^q e^{i z x} f(x) dx on one panel.
pub fn fourier_panel<F: Fn(f64) -> f64>(f: &F, p: f64, q: f64, z: f64) -> Complex64 {
    let t = &*TABLE;
    let m = 0.5 * (p + q);
    let h = 0.5 * (q - p);
    let samples: Vec<f64> = t.nodes.iter().map(|&s| f(m + h * s)).collect();
    let bessel = spherical_bessel_all((z * h).abs(), PANEL_ORDER);
    let sign = if z * h < 0.0 { -1.0 } else { 1.0 };
    let mut acc = Complex64::new(0.0, 0.0);
    let powers = [
        Complex64::new(1.0, 0.0),
        Complex64::new(0.0, 1.0),
        Complex64::new(-1.0, 0.0),
        Complex64::new(0.0, -1.0),
    ];
    for k in 0..PANEL_ORDER {
        let coeff: f64 = t.projection[k].iter().zip(&samples).map(|(a, b)| a * b).sum();
        // j_k(-w) = (-1)^k j_k(w)
        let jk = if k % 2 == 1 { sign * bessel[k] } else { bessel[k] };
        acc += powers[k % 4] * (2.0 * coeff * jk);
    }
    Complex64::from_polar(h, z * m) * acc
}

/// int_lo^hi e^{i z x} f(x) dx for 0 < lo < hi < inf on panels of ratio <= 2.
pub fn fourier_geometric<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64, z: f64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for (p, q) in geometric_panels(lo, hi) {
        acc += fourier_panel(f, p, q, z);
    }
    acc
}

/// Plain Gauss-Legendre integral of f over panels of ratio <= 2.
pub fn smooth_geometric<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64) -> f64 {
    fourier_geometric(f, lo, hi, 0.0).re
}

pub fn geometric_panels(lo: f64, hi: f64) -> Vec<(f64, f64)> {
    assert!(lo > 0.0 && hi > lo && hi.is_finite());
    let mut out = Vec::new();
    let mut p = lo;
    while p < hi {
        let q = (2.0 * p).min(hi);
        // avoid a sliver panel at the end
        let q = if q < hi && hi < 2.0 * q && hi - q < 0.25 * (q - p) { hi } else { q };
        out.push((p, q));
        p = q;
    }
    out
}
