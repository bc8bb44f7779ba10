//! Susceptibility tensor of a homogeneous medium,
//! `χ^{μναβ}(x, x') = (1/8π) ∫₀^{ω_max} dω G(ω, x - x') [f∘f]^{μναβ}(ω)`,
//! in spacetime and in momentum space, optionally boosted.
//!
//! The frequency integral runs on a fixed composite Gauss–Legendre grid that
//! is graded around every spectral line and near `ω = 0`. In momentum space
//! the pole of `Ḡ` at `ω* = √(q·q)` is removed by subtraction; the remaining
//! principal value and the `±iπ` residue are added analytically.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::coupling::CouplingModel;
use crate::error::{Error, Result};
use crate::greens::{bessel_tail_ratio, LIGHT_CONE_COEFFICIENT};
use crate::minkowski::{cdot, Boost, CFourVector, FourVector, Lorentz, PairTensor, PAIRS, PAIR_SIGNATURE};
use crate::quadrature::CompositeRule;

/// Gauss–Legendre order per panel of the frequency grid.
pub const OMEGA_PANEL_ORDER: usize = 16;

/// Frequency quadrature on `[0, ω_max]`.
#[derive(Debug, Clone, PartialEq)]
pub struct OmegaGrid {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub cutoff: f64,
}

impl OmegaGrid {
    pub fn for_model(model: &CouplingModel) -> Self {
        Self::with_cutoff(model, model.natural_cutoff())
    }

    pub fn with_cutoff(model: &CouplingModel, cutoff: f64) -> Self {
        let w = cutoff;
        let mut breaks = vec![0.0, w];
        // geometric grading towards zero for small |q·q|
        let mut b = 1e-6 * w;
        while b < 0.05 * w {
            breaks.push(b);
            b *= 4.0;
        }
        for (w0, gamma) in model.lines() {
            let step = 0.5 * gamma;
            for j in -20..=20 {
                breaks.push(w0 + j as f64 * step);
            }
            let mut off = 10.0 * gamma;
            while off < w {
                breaks.push(w0 + off * 1.5);
                breaks.push(w0 - off * 1.5);
                off *= 1.5;
            }
        }
        breaks.extend(model.kinks());
        let max_panel = w / 40.0;
        let fill = (w / max_panel).round() as usize;
        breaks.extend((1..fill).map(|i| w * i as f64 / fill as f64));
        breaks.retain(|x| *x >= 0.0 && *x <= w);
        breaks.sort_by(|a, b| a.partial_cmp(b).unwrap());
        breaks.dedup_by(|a, b| (*a - *b).abs() < 1e-12 * w);
        let rule = CompositeRule::from_breaks(&breaks, OMEGA_PANEL_ORDER);
        Self { nodes: rule.nodes, weights: rule.weights, cutoff: w }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SusceptibilityEvaluator {
    model: CouplingModel,
    grid: OmegaGrid,
    contractions: Vec<PairTensor>,
    vacuum: bool,
    /// Maps rest-frame components of the medium to the current frame.
    frame: Option<Lorentz>,
}

fn czero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

impl SusceptibilityEvaluator {
    pub fn new(model: CouplingModel) -> Self {
        let grid = OmegaGrid::for_model(&model);
        Self::with_grid(model, grid)
    }

    pub fn with_grid(model: CouplingModel, grid: OmegaGrid) -> Self {
        let contractions = grid
            .nodes
            .iter()
            .map(|&w| model.self_contraction(w).expect("grid nodes are non-negative"))
            .collect();
        let vacuum = model.is_vacuum();
        Self { model, grid, contractions, vacuum, frame: None }
    }

    pub fn model(&self) -> &CouplingModel {
        &self.model
    }

    pub fn grid(&self) -> &OmegaGrid {
        &self.grid
    }

    /// `[f∘f](ω_i)` at every grid node (unboosted).
    pub fn contractions(&self) -> &[PairTensor] {
        &self.contractions
    }

    pub fn frame(&self) -> Option<&Lorentz> {
        self.frame.as_ref()
    }

    pub fn is_vacuum(&self) -> bool {
        self.vacuum
    }

    fn to_frame(&self, t: PairTensor) -> PairTensor {
        match &self.frame {
            Some(l) => l.apply_pair(&t),
            None => t,
        }
    }

    fn weighted_sum(&self, kernel: impl Fn(f64) -> Complex64) -> PairTensor {
        let mut acc = PairTensor::zero();
        for ((w, wt), c) in self.grid.nodes.iter().zip(&self.grid.weights).zip(&self.contractions) {
            let k = kernel(*w) * *wt;
            if k == czero() {
                continue;
            }
            for i in 0..6 {
                for j in i..6 {
                    acc.0[i][j] += c.0[i][j] * k;
                }
            }
        }
        // f∘f is pair-symmetric, so only the upper triangle is accumulated
        for i in 0..6 {
            for j in 0..i {
                acc.0[i][j] = acc.0[j][i];
            }
        }
        acc
    }

    /// Retarded spacetime kernel, regular (inside-cone) part only.
    pub fn chi_spacetime(&self, x: &FourVector, xp: &FourVector) -> PairTensor {
        let mut dx = *x - *xp;
        if let Some(l) = &self.frame {
            dx = l.inverse().apply(&dx);
        }
        let s2 = dx.square();
        if self.vacuum || dx.time() <= 0.0 || s2 <= 0.0 {
            return PairTensor::zero();
        }
        let s = s2.sqrt();
        let pref = 1.0 / (8.0 * PI) / (4.0 * PI);
        let rest = self.weighted_sum(|w| Complex64::new(pref * w * bessel_tail_ratio(w, s), 0.0));
        self.to_frame(rest)
    }

    /// Coefficient tensor of `θ(t) δ(s²)` in `χ(x, x')`; the singular part is
    /// never sampled pointwise.
    pub fn light_cone_weight(&self) -> PairTensor {
        let pref = LIGHT_CONE_COEFFICIENT / (8.0 * PI);
        self.to_frame(self.weighted_sum(|_| Complex64::new(pref, 0.0)))
    }

    /// Coupling tensor `f(ω)` expressed in the current frame.
    pub fn coupling(&self, omega: f64) -> Result<PairTensor> {
        Ok(self.to_frame(self.model.eval(omega)?))
    }

    pub fn chi_momentum(&self, q: &FourVector) -> PairTensor {
        self.chi_momentum_complex(&q.to_complex())
    }

    /// `χ̱(q)` for a possibly complex wavevector. Real `q·q` inside the pole
    /// range uses the retarded prescription selected by the sign of `Re q⁴`;
    /// complex `q·q` is integrated directly (first sheet).
    pub fn chi_momentum_complex(&self, q: &CFourVector) -> PairTensor {
        if self.vacuum {
            return PairTensor::zero();
        }
        let q_rest = match &self.frame {
            Some(l) => l.inverse().apply_complex(q),
            None => *q,
        };
        let qq = cdot(&q_rest, &q_rest);
        let rest = if qq.im.abs() > 1e-14 * qq.norm() {
            self.weighted_sum(|w| -(Complex64::new(w * w, 0.0) - qq).inv())
        } else {
            self.chi_real_invariant(qq.re, q_rest[3].re)
        };
        self.to_frame(rest.scale(1.0 / (8.0 * PI)))
    }

    /// `∫ dω Ḡ C` (no 1/8π) for real `q·q`.
    fn chi_real_invariant(&self, qq: f64, q4: f64) -> PairTensor {
        let cutoff = self.grid.cutoff;
        let pole = if qq > 0.0 { qq.sqrt() } else { 0.0 };
        if qq <= 0.0 || pole >= cutoff {
            return self.weighted_sum(|w| Complex64::new(-1.0 / (w * w - qq), 0.0));
        }
        // ∫ C/((ω-a)(ω+a)) = ∫ (h - h(a))/(ω - a) + h(a)[ln((W-a)/a) + iπ sgn q⁴],  h = C/(ω+a)
        let c_pole = self.model.self_contraction(pole).expect("pole is positive");
        let h_pole = c_pole.scale(1.0 / (2.0 * pole));
        let near = 1e-9 * cutoff;
        let mut acc = PairTensor::zero();
        let mut h_prime: Option<PairTensor> = None;
        for ((w, wt), c) in self.grid.nodes.iter().zip(&self.grid.weights).zip(&self.contractions) {
            let d = w - pole;
            let quotient = if d.abs() < near {
                *h_prime.get_or_insert_with(|| {
                    let delta = 1e-5 * cutoff;
                    let hp = |x: f64| self.model.self_contraction(x).unwrap().scale(1.0 / (x + pole));
                    (hp(pole + delta) - hp((pole - delta).max(0.0))).scale(1.0 / (2.0 * delta))
                })
            } else {
                (c.scale(1.0 / (w + pole)) - h_pole).scale(1.0 / d)
            };
            acc = acc + quotient.scale(*wt);
        }
        let sgn = if q4 >= 0.0 { 1.0 } else { -1.0 };
        let log_term = Complex64::new(((cutoff - pole) / pole).ln(), PI * sgn);
        (acc + h_pole.scale_complex(log_term)).scale(-1.0)
    }

    /// Evaluator for the same medium moving with velocity `v`:
    /// `χ̱'(q) = Λ⊗Λ⊗Λ⊗Λ · χ̱(Λ⁻¹q)`, with `Λ` carrying the medium's rest
    /// four-velocity to `γ(v, 1)`.
    pub fn boosted(&self, v: [f64; 3]) -> Result<Self> {
        let passive = Boost::new(v.map(|c| -c))?;
        if passive.is_identity() {
            return Ok(self.clone());
        }
        let active = *passive.matrix();
        let frame = match &self.frame {
            Some(l) => active.compose(l),
            None => active,
        };
        Ok(Self { frame: Some(frame), ..self.clone() })
    }

    /// Electric and magnetic scalar responses at `q = (0, 0, 0, q⁴)`: averages
    /// of `s_I χ̱_{II}` over the pairs containing the time slot and over the
    /// purely spatial pairs. Equal for `f ∝ Id`.
    pub fn rest_frame_scalars(&self, q4: f64) -> Result<(Complex64, Complex64)> {
        if self.frame.is_some() {
            return Err(Error::RestFrameOnly);
        }
        let chi = self.chi_momentum(&FourVector::new(0.0, 0.0, 0.0, q4));
        let mut e = czero();
        let mut m = czero();
        for (i, &(_, b)) in PAIRS.iter().enumerate() {
            let v = chi.0[i][i] * PAIR_SIGNATURE[i];
            if b == 3 {
                e += v;
            } else {
                m += v;
            }
        }
        Ok((e / 3.0, m / 3.0))
    }
}
