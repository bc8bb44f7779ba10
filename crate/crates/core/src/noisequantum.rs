//! Plane-wave structure of the noise polarization and the c-number form of the
//! noise-field commutator.
//!
//! `Y_N` is expanded over plane waves with bivector amplitudes `B(ω, k⃗)`;
//! with ladder operators the amplitudes become `Σ_{λ,λ'} b_{λλ'} η(λ,λ')`
//! and the commutator of `K_N = (1/4π) ∫dω f(ω) Y_N(ω)` with itself reduces to
//!
//! `[K_N, K_N](x, x') = (4/16π²) ∫ dω F S N S Fᵀ · i D_ω(x - x')`,
//!
//! where `N` is the λ-summed ladder weight in pair slots, `S = diag(s_I)` and
//! `D_ω` is the odd mass-`ω` kernel
//! `D_ω(Δx) = ∫ d³k sin(k⃗·Δx⃗ - ΩΔt) / (2(2π)³Ω)`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::minkowski::{
    build_tetrad, Bivector, ComplexBivector, FourVector, PairTensor, Tetrad, METRIC, PAIR_SIGNATURE,
};
use crate::quadrature::CompositeRule;
use crate::susceptibility::SusceptibilityEvaluator;

const C0: Complex64 = Complex64::new(0.0, 0.0);

/// `(ω, |k|)` quadrature for mode sums. The `k̂` sphere is integrated
/// analytically.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeGrid {
    pub omega_nodes: Vec<f64>,
    pub omega_weights: Vec<f64>,
    pub k_nodes: Vec<f64>,
    pub k_weights: Vec<f64>,
    pub k_max: f64,
    /// Relative size of the truncation tail above which a warning is attached.
    pub tail_tolerance: f64,
}

impl ModeGrid {
    pub const DEFAULT_K_MAX: f64 = 50.0;
    pub const K_PANEL: f64 = 0.5;
    pub const K_ORDER: usize = 16;

    pub fn new(e: &SusceptibilityEvaluator, k_max: f64) -> Result<Self> {
        if !(k_max > 0.0) {
            return Err(crate::error::domain(format!("k_max must be > 0, got {k_max}")));
        }
        let rule = CompositeRule::uniform(0.0, k_max, Self::K_PANEL, Self::K_ORDER);
        Ok(Self {
            omega_nodes: e.grid().nodes.clone(),
            omega_weights: e.grid().weights.clone(),
            k_nodes: rule.nodes,
            k_weights: rule.weights,
            k_max,
            tail_tolerance: 1e-2,
        })
    }

    pub fn for_evaluator(e: &SusceptibilityEvaluator) -> Self {
        Self::new(e, Self::DEFAULT_K_MAX).expect("default cutoff is positive")
    }
}

/// Contraction weight of `[b_{λ₁λ₂}, b†_{λ₁'λ₂'}]` per unit `δ(k⃗ - k⃗') δ(ω - ω')`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct LadderContraction;

impl LadderContraction {
    pub fn weight(&self, l1: usize, l2: usize, l1p: usize, l2p: usize) -> f64 {
        let g = |a: usize, b: usize| if a == b { METRIC[a] } else { 0.0 };
        g(l1, l1p) * g(l2, l2p) - g(l1, l2p) * g(l2, l1p)
    }

    /// `N_IJ = Σ_{λ₁λ₂} Σ_{λ₁'λ₂'} weight · η_I(λ₁,λ₂) η_J(λ₁',λ₂')` over all
    /// ordered labels.
    pub fn noise_structure(&self, tetrad: &Tetrad) -> PairTensor {
        let labels: Vec<(usize, usize)> = (0..4).flat_map(|a| (0..4).map(move |b| (a, b))).collect();
        let mut n = [[0.0; 6]; 6];
        for &(l1, l2) in &labels {
            let a = tetrad.eta(l1, l2);
            for &(l1p, l2p) in &labels {
                let w = self.weight(l1, l2, l1p, l2p);
                if w == 0.0 {
                    continue;
                }
                let b = tetrad.eta(l1p, l2p);
                for i in 0..6 {
                    for j in 0..6 {
                        n[i][j] += w * a.0[i] * b.0[j];
                    }
                }
            }
        }
        PairTensor::from_real(n)
    }
}

/// One plane-wave component of the noise polarization.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseMode {
    pub omega: f64,
    pub k: [f64; 3],
    /// Quadrature weight of the `d³k dω` measure carried by this node.
    pub weight: f64,
    pub b: ComplexBivector,
}

impl NoiseMode {
    pub fn frequency(&self) -> f64 {
        (self.k.iter().map(|c| c * c).sum::<f64>() + self.omega * self.omega).sqrt()
    }

    fn phase(&self, x: &FourVector) -> Complex64 {
        let kx: f64 = (0..3).map(|i| self.k[i] * x[i]).sum();
        Complex64::from_polar(1.0, kx - self.frequency() * x.time())
    }
}

/// Classical amplitudes `B^{αβ}(ω, k⃗)` on a set of quadrature nodes.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct NoiseAmplitude {
    pub modes: Vec<NoiseMode>,
}

fn norm_32() -> f64 {
    (2.0 * PI).powf(-1.5)
}

impl NoiseAmplitude {
    pub fn new(modes: Vec<NoiseMode>) -> Self {
        Self { modes }
    }

    /// Both plane-wave terms summed in complex arithmetic; the imaginary part
    /// is round-off only.
    pub fn evaluate_yn_complex(&self, x: &FourVector) -> ComplexBivector {
        let mut out = [C0; 6];
        for m in &self.modes {
            let p = m.phase(x);
            for (slot, b) in out.iter_mut().zip(&m.b.0) {
                *slot += (b * p + b.conj() * p.conj()) * m.weight;
            }
        }
        Bivector(out.map(|c| c * norm_32()))
    }

    /// `Y_N(x) = (2π)^{-3/2} Σ w [B e^{i(k⃗·x⃗ - Ωt)} + c.c.]`.
    pub fn evaluate_yn(&self, x: &FourVector) -> Bivector {
        let mut out = [0.0; 6];
        for m in &self.modes {
            let p = m.phase(x);
            for (slot, b) in out.iter_mut().zip(&m.b.0) {
                *slot += 2.0 * (b * p).re * m.weight;
            }
        }
        Bivector(out.map(|c| c * norm_32()))
    }

    pub fn evaluate_yn_dt(&self, x: &FourVector) -> Bivector {
        let mut out = [0.0; 6];
        for m in &self.modes {
            let p = m.phase(x);
            let big = m.frequency();
            for (slot, b) in out.iter_mut().zip(&m.b.0) {
                *slot += 2.0 * (Complex64::new(0.0, -big) * b * p).re * m.weight;
            }
        }
        Bivector(out.map(|c| c * norm_32()))
    }
}

/// `Y_N` and `∂_t Y_N` sampled on a periodic cube `[0, L)³` with `n` points per
/// axis at a fixed time. Index order is `(ix·n + iy)·n + iz`.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldSamples {
    pub box_len: f64,
    pub n: usize,
    pub t: f64,
    pub y: Vec<Bivector>,
    pub dy: Vec<Bivector>,
}

impl FieldSamples {
    pub fn spacing(&self) -> f64 {
        self.box_len / self.n as f64
    }

    pub fn point(&self, ix: usize, iy: usize, iz: usize) -> FourVector {
        let h = self.spacing();
        FourVector::new(ix as f64 * h, iy as f64 * h, iz as f64 * h, self.t)
    }

    /// Samples `a` at time `t`.
    pub fn sample(a: &NoiseAmplitude, box_len: f64, n: usize, t: f64) -> Self {
        let mut y = Vec::with_capacity(n * n * n);
        let mut dy = Vec::with_capacity(n * n * n);
        let h = box_len / n as f64;
        for ix in 0..n {
            for iy in 0..n {
                for iz in 0..n {
                    let x = FourVector::new(ix as f64 * h, iy as f64 * h, iz as f64 * h, t);
                    y.push(a.evaluate_yn(&x));
                    dy.push(a.evaluate_yn_dt(&x));
                }
            }
        }
        Self { box_len, n, t, y, dy }
    }

    /// Quadrature weight `(2π/L)³` per lattice mode, which makes
    /// [`extract_b`] the exact inverse of [`NoiseAmplitude::evaluate_yn`].
    pub fn mode_weight(&self) -> f64 {
        (2.0 * PI / self.box_len).powi(3)
    }
}

/// `B e^{-iΩt} = ½ (2π)^{-3/2} ∫ d³x [Y_N + (i/Ω) ∂_t Y_N] e^{-ik⃗·x⃗}` by the
/// lattice sum; `k⃗` must be a resolved lattice wavevector.
pub fn extract_b(samples: &FieldSamples, omega: f64, k: [f64; 3]) -> Result<ComplexBivector> {
    let n = samples.n;
    let expected = n * n * n;
    if samples.y.len() != expected || samples.dy.len() != expected {
        return Err(crate::error::domain("sample count does not match the grid"));
    }
    let unit = 2.0 * PI / samples.box_len;
    for c in k {
        let m = c / unit;
        let nearest = m.round();
        if (m - nearest).abs() > 1e-9 * nearest.abs().max(1.0) || 2.0 * nearest.abs() >= n as f64 {
            return Err(Error::UnresolvedMode(format!(
                "k = {k:?} is not a lattice wavevector below Nyquist for L = {}, n = {n}",
                samples.box_len
            )));
        }
    }
    let big = (k.iter().map(|c| c * c).sum::<f64>() + omega * omega).sqrt();
    if big == 0.0 {
        return Err(Error::UnresolvedMode("Ω = 0 mode has no time dependence".into()));
    }
    let h = samples.spacing();
    let mut acc = [C0; 6];
    let mut idx = 0;
    for ix in 0..n {
        for iy in 0..n {
            for iz in 0..n {
                let kx = h * (k[0] * ix as f64 + k[1] * iy as f64 + k[2] * iz as f64);
                let p = Complex64::from_polar(1.0, -kx);
                for (s, slot) in acc.iter_mut().enumerate() {
                    let v = Complex64::new(samples.y[idx].0[s], samples.dy[idx].0[s] / big);
                    *slot += v * p;
                }
                idx += 1;
            }
        }
    }
    let pref = 0.5 * norm_32() * h * h * h;
    let shift = Complex64::from_polar(1.0, big * samples.t);
    Ok(Bivector(acc.map(|c| c * pref * shift)))
}

/// Mode-sum value with a truncation estimate.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeSumResult {
    pub value: PairTensor,
    pub tail_estimate: f64,
    pub warning: Option<String>,
}

/// `D_ω(Δx)` on the radial `k` grid, with the estimated truncation error.
///
/// After the angular integral `D = -(1/4π²r) ∫₀^∞ dk sin(kr) k sin(Ωt)/Ω`.
/// The three leading large-`k` terms of `k sin(Ωt)/Ω`,
/// `sin kt + (at/2) cos(kt)/k - (a²t²/8 + a/2) sin(kt)/k²` with `a = ω²`,
/// are subtracted and integrated in closed form.
pub fn pauli_jordan_kernel(omega: f64, dx: &FourVector, grid: &ModeGrid) -> (f64, f64) {
    let t = dx.time();
    if t == 0.0 {
        return (0.0, 0.0);
    }
    if t < 0.0 {
        let (d, tail) = pauli_jordan_kernel(omega, &(-*dx), grid);
        return (-d, tail);
    }
    let r = dx.spatial_norm();
    let a = omega * omega;
    let c = a * a * t * t / 8.0 + a / 2.0;
    let radial = |k: f64| if r < 1e-12 { k } else { (k * r).sin() / r };
    let remainder = |k: f64| {
        let big = (k * k + a).sqrt();
        let (st, ct) = (k * t).sin_cos();
        k * (big * t).sin() / big - st - 0.5 * a * t * ct / k + c * st / (k * k)
    };
    let mut integral = 0.0;
    for (k, w) in grid.k_nodes.iter().zip(&grid.k_weights) {
        integral += w * radial(*k) * remainder(*k);
    }
    // closed forms divided by r: ∫ sin(kr) cos(kt)/k = (π/4)(sgn(r+t) + sgn(r-t)),
    // ∫ sin(kr) sin(kt)/k² = (π/2) min(r, t); ∫ sin(kr) sin(kt) vanishes off the cone
    let (a2, a3) = if r < 1e-12 {
        (0.0, PI / 2.0)
    } else {
        let sgn = |v: f64| if v > 0.0 { 1.0 } else if v < 0.0 { -1.0 } else { 0.0 };
        ((PI / 4.0) * (1.0 + sgn(r - t)) / r, (PI / 2.0) * r.min(t) / r)
    };
    let total = integral + 0.5 * a * t * a2 - c * a3;
    let pref = 1.0 / (4.0 * PI * PI);
    // the truncated remainder oscillates with frequency at least |t - r|, so its
    // integral beyond k_max is about one amplitude over that frequency
    let k_max = grid.k_max;
    let amplitude = (0..32)
        .map(|i| k_max - ModeGrid::K_PANEL * i as f64 / 32.0)
        .map(|k| (remainder(k) * radial(k)).abs())
        .fold(0.0, f64::max);
    let probe = amplitude / (t - r).abs().max(1.0 / k_max);
    (-pref * total, pref * probe)
}

/// `[K_N^{μν}(x), K_N^{αβ}(x')]` from the plane-wave expansion and the ladder
/// contraction rules.
pub fn commutator_kn_modesum(
    e: &SusceptibilityEvaluator,
    grid: &ModeGrid,
    x: &FourVector,
    xp: &FourVector,
) -> Result<ModeSumResult> {
    let zero = ModeSumResult { value: PairTensor::zero(), tail_estimate: 0.0, warning: None };
    if e.is_vacuum() {
        return Ok(zero);
    }
    let dx = *x - *xp;
    if dx.time() == 0.0 {
        return Ok(zero);
    }
    if (dx.square()).abs() < 1e-12 * dx.time() * dx.time() {
        return Err(crate::error::domain("separation on the light cone: the kernel is singular there"));
    }
    let tetrad = build_tetrad([0.0, 0.0, 1.0])?;
    let n = LadderContraction.noise_structure(&tetrad);
    let mut sns = PairTensor::zero();
    for i in 0..6 {
        for j in 0..6 {
            sns.0[i][j] = n.0[i][j] * PAIR_SIGNATURE[i] * PAIR_SIGNATURE[j];
        }
    }
    let mut value = [[C0; 6]; 6];
    let mut tail = 0.0;
    for (w, wt) in grid.omega_nodes.iter().zip(&grid.omega_weights) {
        let f = e.coupling(*w)?;
        if f.is_zero() {
            continue;
        }
        let (d, d_tail) = pauli_jordan_kernel(*w, &dx, grid);
        let scale = wt * 4.0 / (16.0 * PI * PI);
        // F · SNS · Fᵀ
        let mut fs = [[C0; 6]; 6];
        for i in 0..6 {
            for k in 0..6 {
                fs[i][k] = (0..6).map(|j| f.0[i][j] * sns.0[j][k]).sum();
            }
        }
        let mut mag: f64 = 0.0;
        for i in 0..6 {
            for l in 0..6 {
                let m: Complex64 = (0..6).map(|k| fs[i][k] * f.0[l][k]).sum();
                mag = mag.max(m.norm());
                value[i][l] += m * Complex64::new(0.0, d * scale);
            }
        }
        tail += mag * d_tail * scale;
    }
    let value = PairTensor(value);
    let scale = value.max_abs();
    let warning = (tail > grid.tail_tolerance * scale).then(|| {
        format!(
            "radial cutoff k_max = {} leaves an estimated tail {tail:.3e} against max |value| {scale:.3e}",
            grid.k_max
        )
    });
    Ok(ModeSumResult { value, tail_estimate: tail, warning })
}

/// `(i/π) [θ(t - t') χ(x, x') - θ(t' - t) χ^T(x', x)]` with `χ` the regular
/// part of the spacetime susceptibility.
pub fn commutator_kn_reference(e: &SusceptibilityEvaluator, x: &FourVector, xp: &FourVector) -> PairTensor {
    let i_pi = Complex64::new(0.0, 1.0 / PI);
    let dt = x.time() - xp.time();
    if dt > 0.0 {
        e.chi_spacetime(x, xp).scale_complex(i_pi)
    } else if dt < 0.0 {
        e.chi_spacetime(xp, x).pair_transpose().scale_complex(-i_pi)
    } else {
        PairTensor::zero()
    }
}
