//! Retarded Green function of `(□² + ω²) G = -δ⁴` in three representations.
//!
//! * momentum space: `Ḡ(q) = -1 / (ω² - q·q - iε q⁴)`, with
//!   `g̃(t) = ∫ dq⁴/(2π) Ḡ e^{-i q⁴ t}`;
//! * spatial Fourier / time domain: `g̃(t; k) = -θ(t) sin(Ωt)/Ω`, `Ω = √(k² + ω²)`;
//! * position space: `G = θ(t) [ -δ(s²)/(2π) + ω J₁(ωs)/(4πs) θ(s²) ]`,
//!   `s² = t² - r²`. Only the regular tail is evaluated pointwise.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{domain, Result};
use crate::minkowski::FourVector;
use crate::special::bessel_j1;

/// Coefficient of `θ(t) δ(s²)` in the position-space Green function.
pub const LIGHT_CONE_COEFFICIENT: f64 = -1.0 / (2.0 * PI);

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GreenSpec {
    omega: f64,
    eps: f64,
}

impl GreenSpec {
    pub fn new(omega: f64, eps: f64) -> Result<Self> {
        if !(omega >= 0.0) {
            return Err(domain(format!("omega must be >= 0, got {omega}")));
        }
        if !(eps > 0.0) {
            return Err(domain(format!("regulator must be > 0, got {eps}")));
        }
        Ok(Self { omega, eps })
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn green_momentum(&self, q: &FourVector) -> Complex64 {
        let den = Complex64::new(self.omega * self.omega - q.square(), -self.eps * q.time());
        -den.inv()
    }

    pub fn green_time_kernel(&self, k: f64, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        let big = (k * k + self.omega * self.omega).sqrt();
        if big == 0.0 {
            -t
        } else {
            -(big * t).sin() / big
        }
    }

    /// `∂g̃/∂t`; jumps from `0` to `-1` at `t = 0`.
    pub fn green_time_kernel_dt(&self, k: f64, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        let big = (k * k + self.omega * self.omega).sqrt();
        -(big * t).cos()
    }

    pub fn green_position_regular(&self, dx: &FourVector) -> f64 {
        green_tail(self.omega, dx)
    }
}

/// Regular inside-cone part `ω J₁(ωs)/(4πs)` for `t > 0, s² > 0`, else zero.
pub fn green_tail(omega: f64, dx: &FourVector) -> f64 {
    let s2 = dx.square();
    if dx.time() <= 0.0 || s2 <= 0.0 || omega == 0.0 {
        return 0.0;
    }
    let s = s2.sqrt();
    omega * bessel_tail_ratio(omega, s) / (4.0 * PI)
}

/// `J₁(ωs)/s`, finite as `s → 0`.
#[inline]
pub(crate) fn bessel_tail_ratio(omega: f64, s: f64) -> f64 {
    let x = omega * s;
    if x < 1e-8 {
        0.5 * omega
    } else {
        bessel_j1(x) / s
    }
}
