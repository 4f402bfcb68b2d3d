//! Exponential integrals and a few small helpers used by closed-form moments.

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Exponential integral E1(x) for x > 0. Returns +inf at 0.
pub fn e1(x: f64) -> f64 {
    if x <= 0.0 {
        return f64::INFINITY;
    }
    if x > 700.0 {
        return 0.0;
    }
    if x <= 1.0 {
        // power series
        let mut sum = 0.0;
        let mut term = 1.0;
        for k in 1..200 {
            term *= -x / k as f64;
            let add = term / k as f64;
            sum += add;
            if add.abs() < 1e-17 * sum.abs().max(1e-300) {
                break;
            }
        }
        -EULER_GAMMA - x.ln() - sum
    } else {
        // modified Lentz continued fraction
        let tiny = 1e-300;
        let mut b = x + 1.0;
        let mut c = 1.0 / tiny;
        let mut d = 1.0 / b;
        let mut h = d;
        for i in 1..500 {
            let an = -((i * i) as f64);
            b += 2.0;
            d = 1.0 / (an * d + b);
            c = b + an / c;
            let del = c * d;
            h *= del;
            if (del - 1.0).abs() < 1e-16 {
                break;
            }
        }
        h * (-x).exp()
    }
}

/// Exponential integral Ei(x) for x > 0.
pub fn ei(x: f64) -> f64 {
    if x <= 0.0 {
        return f64::NEG_INFINITY;
    }
    if x > 709.0 {
        return f64::INFINITY;
    }
    if x < 40.0 {
        let mut sum = 0.0;
        let mut term = 1.0;
        for k in 1..400 {
            term *= x / k as f64;
            let add = term / k as f64;
            sum += add;
            if add < 1e-17 * sum {
                break;
            }
        }
        EULER_GAMMA + x.ln() + sum
    } else {
        let mut sum = 1.0;
        let mut term = 1.0;
        for k in 1..60 {
            let next = term * k as f64 / x;
            if next > term {
                break;
            }
            term = next;
            sum += term;
            if term < 1e-17 {
                break;
            }
        }
        x.exp() / x * sum
    }
}

pub fn gamma(x: f64) -> f64 {
    statrs::function::gamma::gamma(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    // Independent oracle: midpoint sum of e^{-t}/t on [x, 60] in the variable s = ln t.
    fn e1_oracle(x: f64) -> f64 {
        let (a, b) = (x.ln(), 60f64.ln());
        let n = 200_000;
        let h = (b - a) / n as f64;
        (0..n)
            .map(|i| {
                let s = a + (i as f64 + 0.5) * h;
                (-(s.exp())).exp() * h
            })
            .sum()
    }

    #[test]
    fn e1_matches_oracle() {
        for &x in &[0.05, 0.5, 1.0, 1.5, 3.0, 10.0, 25.0] {
            let o = e1_oracle(x);
            assert!((e1(x) - o).abs() <= 1e-8 * o.max(1e-12), "x={x}: {} vs {o}", e1(x));
        }
    }

    #[test]
    fn ei_series_and_asymptotic_agree_at_switch() {
        // the jump across the switch must match Ei' = e^x / x
        let h = 1e-4;
        let below = ei(40.0 - h);
        let above = ei(40.0 + h);
        let slope = 40f64.exp() / 40.0;
        assert!((above - below - 2.0 * h * slope).abs() / above < 1e-9);
        // Ei(1) = 1.8951178163559368
        assert!((ei(1.0) - 1.895_117_816_355_936_8).abs() < 1e-13);
    }
}
