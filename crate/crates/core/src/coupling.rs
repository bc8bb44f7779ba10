//! Coupling-tensor models `f^{μναβ}(ω)` that define a homogeneous medium.

use crate::error::{domain, Result};
use crate::minkowski::{FourVector, PairTensor, METRIC};
use num_complex::Complex64;

/// Lorentzian oscillator-strength profile
/// `g(ω) = c₀ √(γω / ((ω₀² - ω²)² + γ²ω²))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LorentzianProfile {
    pub strength: f64,
    pub resonance: f64,
    pub width: f64,
}

impl LorentzianProfile {
    pub fn new(strength: f64, resonance: f64, width: f64) -> Result<Self> {
        if !(strength >= 0.0 && strength.is_finite()) {
            return Err(domain(format!("c0 must be >= 0, got {strength}")));
        }
        if !(resonance > 0.0 && resonance.is_finite()) {
            return Err(domain(format!("omega0 must be > 0, got {resonance}")));
        }
        if !(width > 0.0 && width.is_finite()) {
            return Err(domain(format!("gamma must be > 0, got {width}")));
        }
        Ok(Self { strength, resonance, width })
    }

    pub fn value_sq(&self, omega: f64) -> f64 {
        let (c0, w0, g) = (self.strength, self.resonance, self.width);
        let d = w0 * w0 - omega * omega;
        c0 * c0 * g * omega / (d * d + g * g * omega * omega)
    }

    pub fn value(&self, omega: f64) -> f64 {
        self.value_sq(omega).sqrt()
    }

    /// Default upper frequency cutoff `ω₀ + 40γ`.
    pub fn cutoff(&self) -> f64 {
        self.resonance + 40.0 * self.width
    }

    pub fn is_off(&self) -> bool {
        self.strength == 0.0
    }
}

/// Sampled coupling tensor, linearly interpolated and zero outside the sample window.
#[derive(Debug, Clone, PartialEq)]
pub struct TabulatedCoupling {
    samples: Vec<(f64, PairTensor)>,
}

impl TabulatedCoupling {
    pub fn new(samples: Vec<(f64, PairTensor)>) -> Result<Self> {
        if samples.len() < 2 {
            return Err(domain("tabulated coupling needs at least two samples"));
        }
        if samples[0].0 < 0.0 {
            return Err(domain("tabulated frequencies must be >= 0"));
        }
        if samples.windows(2).any(|p| !(p[1].0 > p[0].0)) {
            return Err(domain("tabulated frequencies must be strictly increasing"));
        }
        Ok(Self { samples })
    }

    pub fn samples(&self) -> &[(f64, PairTensor)] {
        &self.samples
    }

    pub fn range(&self) -> (f64, f64) {
        (self.samples[0].0, self.samples[self.samples.len() - 1].0)
    }

    fn eval(&self, omega: f64) -> PairTensor {
        let (lo, hi) = self.range();
        if omega < lo || omega > hi {
            return PairTensor::zero();
        }
        let idx = self.samples.partition_point(|s| s.0 <= omega).clamp(1, self.samples.len() - 1);
        let (w0, m0) = &self.samples[idx - 1];
        let (w1, m1) = &self.samples[idx];
        let t = (omega - w0) / (w1 - w0);
        m0.scale(1.0 - t) + m1.scale(t)
    }
}

/// Medium definition through its coupling tensor.
#[derive(Debug, Clone, PartialEq)]
pub enum CouplingModel {
    Vacuum,
    /// `f = g(ω) Id`. Built from the metric alone, hence Lorentz invariant.
    IsotropicLorentzian(LorentzianProfile),
    /// `f = g_e(ω) P_e(u) + g_m(ω) P_m(u)`: separate electric and magnetic
    /// response in the rest frame of the four-velocity `u`.
    EmSplit {
        electric: LorentzianProfile,
        magnetic: LorentzianProfile,
        four_velocity: FourVector,
    },
    Tabulated(TabulatedCoupling),
}

/// `(P_e)^{μναβ} = u^ν u^β g^{μα} - u^μ u^β g^{να} - u^ν u^α g^{μβ} + u^μ u^α g^{νβ}`.
pub fn electric_projector(u: &FourVector) -> PairTensor {
    let g = |a: usize, b: usize| if a == b { METRIC[a] } else { 0.0 };
    PairTensor::from_fn(|m, n, a, b| {
        let v = u[n] * u[b] * g(m, a) - u[m] * u[b] * g(n, a) - u[n] * u[a] * g(m, b)
            + u[m] * u[a] * g(n, b);
        Complex64::new(v, 0.0)
    })
}

/// `P_m = Id - P_e`.
pub fn magnetic_projector(u: &FourVector) -> PairTensor {
    PairTensor::identity() - electric_projector(u)
}

fn check_omega(omega: f64) -> Result<()> {
    if omega >= 0.0 {
        Ok(())
    } else {
        Err(domain(format!("frequency must be >= 0, got {omega}")))
    }
}

impl CouplingModel {
    /// Em-split model; `u` must be a future-pointing unit timelike vector.
    pub fn em_split(
        electric: LorentzianProfile,
        magnetic: LorentzianProfile,
        four_velocity: FourVector,
    ) -> Result<Self> {
        if (four_velocity.square() - 1.0).abs() > 1e-10 || four_velocity.time() <= 0.0 {
            return Err(domain("four-velocity must satisfy u·u = 1 with u⁴ > 0"));
        }
        Ok(Self::EmSplit { electric, magnetic, four_velocity })
    }

    pub fn is_vacuum(&self) -> bool {
        match self {
            Self::Vacuum => true,
            Self::IsotropicLorentzian(p) => p.is_off(),
            Self::EmSplit { electric, magnetic, .. } => electric.is_off() && magnetic.is_off(),
            Self::Tabulated(t) => t.samples.iter().all(|s| s.1.is_zero()),
        }
    }

    pub fn eval(&self, omega: f64) -> Result<PairTensor> {
        check_omega(omega)?;
        Ok(match self {
            Self::Vacuum => PairTensor::zero(),
            Self::IsotropicLorentzian(p) => PairTensor::identity().scale(p.value(omega)),
            Self::EmSplit { electric, magnetic, four_velocity } => {
                let pe = electric_projector(four_velocity);
                let pm = PairTensor::identity() - pe;
                pe.scale(electric.value(omega)) + pm.scale(magnetic.value(omega))
            }
            Self::Tabulated(t) => t.eval(omega),
        })
    }

    /// `f^{μνδσ} f^{αβ}_{δσ}` at one frequency.
    pub fn self_contraction(&self, omega: f64) -> Result<PairTensor> {
        let f = self.eval(omega)?;
        Ok(f.contract(&f))
    }

    /// Upper limit of the frequency integrals.
    pub fn natural_cutoff(&self) -> f64 {
        match self {
            Self::Vacuum => 1.0,
            Self::IsotropicLorentzian(p) => p.cutoff(),
            Self::EmSplit { electric, magnetic, .. } => {
                [electric, magnetic].iter().filter(|p| !p.is_off()).map(|p| p.cutoff()).fold(1.0, f64::max)
            }
            Self::Tabulated(t) => t.range().1,
        }
    }

    /// Frequency interval outside of which the coupling vanishes (up to the
    /// integration cutoff).
    pub fn support(&self) -> (f64, f64) {
        match self {
            Self::Tabulated(t) => t.range(),
            _ => (0.0, self.natural_cutoff()),
        }
    }

    /// `(resonance, width)` of every active spectral line, used to grade grids.
    pub fn lines(&self) -> Vec<(f64, f64)> {
        match self {
            Self::Vacuum | Self::Tabulated(_) => Vec::new(),
            Self::IsotropicLorentzian(p) => vec![(p.resonance, p.width)],
            Self::EmSplit { electric, magnetic, .. } => [electric, magnetic]
                .iter()
                .filter(|p| !p.is_off())
                .map(|p| (p.resonance, p.width))
                .collect(),
        }
    }

    /// Frequencies where the model has kinks (tabulated sample points).
    pub fn kinks(&self) -> Vec<f64> {
        match self {
            Self::Tabulated(t) => t.samples.iter().map(|s| s.0).collect(),
            _ => Vec::new(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn profile() -> LorentzianProfile {
        LorentzianProfile::new(0.1, 1.0, 0.1).unwrap()
    }

    fn random_u(rng: &mut ChaCha8Rng) -> FourVector {
        let v: [f64; 3] = std::array::from_fn(|_| rng.gen_range(-0.5..0.5));
        let g = 1.0 / (1.0 - v.iter().map(|c| c * c).sum::<f64>()).sqrt();
        FourVector::from_spatial(v.map(|c| g * c), g)
    }

    #[test]
    fn vacuum_is_zero() {
        let m = CouplingModel::Vacuum;
        assert!(m.eval(3.0).unwrap().is_zero());
        assert!(m.self_contraction(0.5).unwrap().is_zero());
    }

    #[test]
    fn negative_frequency_rejected() {
        assert!(CouplingModel::Vacuum.eval(-1e-9).is_err());
    }

    #[test]
    fn profile_at_resonance() {
        let p = profile();
        let want = 0.1 / (0.1f64 * 1.0).sqrt();
        assert!((p.value(1.0) - want).abs() < 1e-15);
        assert!(LorentzianProfile::new(0.1, 0.0, 0.1).is_err());
        assert!(LorentzianProfile::new(0.1, 1.0, -0.1).is_err());
    }

    #[test]
    fn isotropic_self_contraction_doubles() {
        let p = profile();
        let m = CouplingModel::IsotropicLorentzian(p);
        let c = m.self_contraction(0.7).unwrap();
        let want = PairTensor::identity().scale(2.0 * p.value_sq(0.7));
        assert!(c.max_abs_diff(&want) < 1e-15);
    }

    #[test]
    fn projector_algebra() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let u = random_u(&mut rng);
            let pe = electric_projector(&u);
            let pm = magnetic_projector(&u);
            assert!(pe.contract(&pe).max_abs_diff(&pe.scale(2.0)) < 1e-12);
            assert!(pm.contract(&pm).max_abs_diff(&pm.scale(2.0)) < 1e-12);
            assert!(pe.contract(&pm).max_abs() < 1e-12);
            assert!((pe + pm).max_abs_diff(&PairTensor::identity()) < 1e-12);
        }
    }

    #[test]
    fn rest_projector_selects_time_pairs() {
        let pe = electric_projector(&FourVector::rest_velocity());
        for (i, &(_, b)) in crate::minkowski::PAIRS.iter().enumerate() {
            for j in 0..6 {
                let v = pe.0[i][j];
                if i == j && b == 3 {
                    assert_eq!(v, PairTensor::identity().0[i][i]);
                } else {
                    assert_eq!(v.norm(), 0.0);
                }
            }
        }
    }

    #[test]
    fn equal_profiles_reduce_to_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let p = profile();
        for _ in 0..10 {
            let m = CouplingModel::em_split(p, p, random_u(&mut rng)).unwrap();
            let w = rng.gen_range(0.0..4.0);
            let want = PairTensor::identity().scale(p.value(w));
            assert!(m.eval(w).unwrap().max_abs_diff(&want) < 1e-12);
        }
    }

    #[test]
    fn em_split_contraction_is_pair_symmetric() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let e = LorentzianProfile::new(0.3, 1.0, 0.1).unwrap();
        let m = LorentzianProfile::new(0.1, 2.0, 0.3).unwrap();
        let model = CouplingModel::em_split(e, m, random_u(&mut rng)).unwrap();
        let c = model.self_contraction(1.3).unwrap();
        assert!(c.max_abs_diff(&c.pair_transpose()) < 1e-12);
    }

    #[test]
    fn tabulated_interpolates_and_clamps() {
        let a = PairTensor::identity();
        let t = TabulatedCoupling::new(vec![(1.0, a), (2.0, a.scale(3.0))]).unwrap();
        let m = CouplingModel::Tabulated(t);
        assert!(m.eval(1.5).unwrap().max_abs_diff(&a.scale(2.0)) < 1e-15);
        assert!(m.eval(0.5).unwrap().is_zero());
        assert!(m.eval(2.5).unwrap().is_zero());
        assert!(TabulatedCoupling::new(vec![(1.0, a), (1.0, a)]).is_err());
    }
}
