//! Fixtures shared by the kernel benchmarks.

use covar_medium::{CouplingModel, FourVector, LorentzianProfile, PairTensor, SusceptibilityEvaluator};

pub fn lorentzian_evaluator() -> SusceptibilityEvaluator {
    let p = LorentzianProfile::new(0.1, 1.0, 0.1).expect("valid profile");
    SusceptibilityEvaluator::new(CouplingModel::IsotropicLorentzian(p))
}

/// Rest-frame dielectric: electric response only.
pub fn dielectric_evaluator() -> SusceptibilityEvaluator {
    let e = LorentzianProfile::new(0.3, 1.0, 0.1).expect("valid profile");
    let m = LorentzianProfile::new(0.0, 1.0, 0.1).expect("valid profile");
    SusceptibilityEvaluator::new(
        CouplingModel::em_split(e, m, FourVector::rest_velocity()).expect("rest velocity"),
    )
}

/// Deterministic dense pair tensor.
pub fn dense_pair_tensor(seed: f64) -> PairTensor {
    PairTensor::from_real(std::array::from_fn(|i| {
        std::array::from_fn(|j| ((i * 6 + j) as f64 * 0.37 + seed).sin())
    }))
}
