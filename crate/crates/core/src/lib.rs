//! Covariant electrodynamics of moving, polarizable and magnetizable media.
//!
//! The medium is a continuum of antisymmetric oscillator tensors labelled by a
//! frequency `ω`, coupled to the four-potential through a rank-4 coupling
//! tensor `f^{μναβ}(ω)`. This crate builds the retarded susceptibility tensor
//! from that coupling, assembles the momentum-space wave operator and its
//! dispersion roots, and checks the noise-polarization commutator against the
//! susceptibility.
//!
//! Conventions used throughout:
//!
//! * `c = ħ = 1`.
//! * Four-vectors are stored in the slot order `(x, y, z, t)` with metric
//!   `diag(-1, -1, -1, +1)`.
//! * Antisymmetric rank-2 tensors use the six lexicographic pair slots
//!   `(0,1) (0,2) (0,3) (1,2) (1,3) (2,3)`.

pub mod coupling;
pub mod dispersion;
pub mod error;
pub mod greens;
pub mod minkowski;
pub mod noisequantum;
pub mod quadrature;
pub mod special;
pub mod susceptibility;

pub use coupling::{CouplingModel, LorentzianProfile, TabulatedCoupling};
pub use dispersion::{DispersionRoot, ModeFunction, RootClass, RootSearchOptions, RootWindow};
pub use error::{Error, Result};
pub use greens::GreenSpec;
pub use minkowski::{Bivector, Boost, CFourVector, FourVector, Lorentz, PairTensor, Tetrad};
pub use noisequantum::{LadderContraction, ModeGrid, ModeSumResult, NoiseAmplitude};
pub use susceptibility::{OmegaGrid, SusceptibilityEvaluator};

pub use num_complex::Complex64;
