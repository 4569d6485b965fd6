//! Log-domain special functions for far-tail survival evaluation.

use std::f64::consts::PI;

use statrs::function::{erf, gamma};

/// `ln I0(z)` for `z >= 0`.
pub fn ln_bessel_i0(z: f64) -> f64 {
    let z = z.abs();
    if z < 20.0 {
        // power series, all terms positive
        let q = z * z / 4.0;
        let mut term = 1.0;
        let mut sum = 1.0;
        let mut j = 1.0;
        while term > sum * 1e-17 {
            term *= q / (j * j);
            sum += term;
            j += 1.0;
        }
        sum.ln()
    } else {
        // Hankel asymptotic expansion of e^{-z} sqrt(2 pi z) I0(z)
        let inv = 1.0 / (8.0 * z);
        let mut term = 1.0;
        let mut sum = 1.0;
        for j in 1..12 {
            let odd = (2 * j - 1) as f64;
            term *= odd * odd * inv / j as f64;
            sum += term;
            if term < 1e-17 {
                break;
            }
        }
        z - 0.5 * (2.0 * PI * z).ln() + sum.ln()
    }
}

/// `ln erfc(x)`, finite well past the point where `erfc` underflows.
pub fn ln_erfc(x: f64) -> f64 {
    if x < 5.0 {
        return erf::erfc(x).ln();
    }
    // erfc(x) = exp(-x^2)/sqrt(pi) * 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + ...))))
    let mut tail = x;
    for n in (1..=120).rev() {
        tail = x + (n as f64 / 2.0) / tail;
    }
    -x * x - 0.5 * PI.ln() - tail.ln()
}

/// `ln Q(a, x)`, the regularized upper incomplete gamma, for `a > 0`, `x >= 0`.
pub fn ln_gamma_q(a: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x < a + 1.0 {
        return gamma::gamma_ur(a, x).ln();
    }
    // modified Lentz on the continued fraction for Gamma(a, x)
    let tiny = 1e-300;
    let mut b = x + 1.0 - a;
    let mut c = 1.0 / tiny;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..500 {
        let an = -(i as f64) * (i as f64 - a);
        b += 2.0;
        d = an * d + b;
        if d.abs() < tiny {
            d = tiny;
        }
        c = b + an / c;
        if c.abs() < tiny {
            c = tiny;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < 1e-16 {
            break;
        }
    }
    -x + a * x.ln() - gamma::ln_gamma(a) + h.ln()
}

/// Numerically stable `ln(sum(exp(xs)))`.
pub fn log_sum_exp(xs: &[f64]) -> f64 {
    let max = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return max;
    }
    max + xs.iter().map(|&v| (v - max).exp()).sum::<f64>().ln()
}
