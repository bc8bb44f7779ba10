//! Special functions needed by the position-space Green function.

use std::f64::consts::PI;

/// Bessel function of the first kind, order one.
///
/// Power series below `|x| = 12`, Hankel asymptotic expansion above (truncated
/// at its smallest term). Absolute error stays below about `1e-12`.
pub fn bessel_j1(x: f64) -> f64 {
    if x < 0.0 {
        return -bessel_j1(-x);
    }
    if x < 12.0 {
        let h = 0.5 * x;
        let h2 = h * h;
        let mut term = h;
        let mut sum = term;
        let mut k = 1.0;
        loop {
            term *= -h2 / (k * (k + 1.0));
            sum += term;
            if term.abs() < 1e-17 * sum.abs().max(1e-300) {
                break;
            }
            k += 1.0;
        }
        sum
    } else {
        let mu = 4.0;
        let mut a = 1.0;
        let mut p = 1.0;
        let mut q = 0.0;
        let mut xpow = 1.0;
        let mut last = f64::INFINITY;
        for k in 1..60 {
            let kf = k as f64;
            a *= (mu - (2.0 * kf - 1.0).powi(2)) / (kf * 8.0);
            xpow *= x;
            let t = a / xpow;
            if t.abs() > last || t.abs() < 1e-18 {
                break;
            }
            last = t.abs();
            // a_k enters P for even k, Q for odd k, with alternating signs
            match k % 4 {
                1 => q += t,
                2 => p -= t,
                3 => q -= t,
                _ => p += t,
            }
        }
        let chi = x - 0.75 * PI;
        (2.0 / (PI * x)).sqrt() * (p * chi.cos() - q * chi.sin())
    }
}
