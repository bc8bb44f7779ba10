//! Minkowski tensor algebra: metric, pair-index bookkeeping, bivectors,
//! pair tensors in 6×6 form, tetrads and Lorentz boosts.
//!
//! Slots are ordered `(x, y, z, t)` and the metric is `diag(-1, -1, -1, +1)`,
//! so the timelike slot is `3`. A [`PairTensor`] stores `T^{μναβ}` with both
//! index pairs restricted to `μ < ν`, `α < β`; the remaining components follow
//! from antisymmetry.

use std::ops::{Add, Index, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{domain, Error, Result};

/// Diagonal of the metric `g_{μμ}` in slot order.
pub const METRIC: [f64; 4] = [-1.0, -1.0, -1.0, 1.0];

/// Lexicographic pair slots.
pub const PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

/// `s_I = g_{μμ} g_{νν}` for each pair slot `I = (μ, ν)`.
pub const PAIR_SIGNATURE: [f64; 6] = [1.0, 1.0, -1.0, 1.0, -1.0, -1.0];

const C0: Complex64 = Complex64::new(0.0, 0.0);

/// Pair slot and orientation sign of the ordered index pair `(μ, ν)`.
pub fn pair_index(mu: usize, nu: usize) -> Result<(usize, f64)> {
    if mu > 3 {
        return Err(Error::SlotOutOfRange(mu));
    }
    if nu > 3 {
        return Err(Error::SlotOutOfRange(nu));
    }
    if mu == nu {
        return Err(Error::DegeneratePair(mu));
    }
    let (a, b, sign) = if mu < nu { (mu, nu, 1.0) } else { (nu, mu, -1.0) };
    let slot = PAIRS.iter().position(|&p| p == (a, b)).expect("pair table is complete");
    Ok((slot, sign))
}

/// Like [`pair_index`] but maps the diagonal to `None` instead of an error.
#[inline]
pub(crate) fn pair_slot(mu: usize, nu: usize) -> Option<(usize, f64)> {
    if mu == nu {
        None
    } else {
        pair_index(mu, nu).ok()
    }
}

/// Real contravariant four-vector `(x, y, z, t)`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FourVector(pub [f64; 4]);

/// Complex four-vector; used when dispersion roots push the wavevector off the real axis.
pub type CFourVector = [Complex64; 4];

impl FourVector {
    pub const fn new(x: f64, y: f64, z: f64, t: f64) -> Self {
        Self([x, y, z, t])
    }

    pub const fn from_spatial(v: [f64; 3], t: f64) -> Self {
        Self([v[0], v[1], v[2], t])
    }

    pub const fn rest_velocity() -> Self {
        Self([0.0, 0.0, 0.0, 1.0])
    }

    pub fn time(&self) -> f64 {
        self.0[3]
    }

    pub fn spatial(&self) -> [f64; 3] {
        [self.0[0], self.0[1], self.0[2]]
    }

    pub fn spatial_norm(&self) -> f64 {
        let s = self.spatial();
        (s[0] * s[0] + s[1] * s[1] + s[2] * s[2]).sqrt()
    }

    /// `a·b = -a₁b₁ - a₂b₂ - a₃b₃ + a₄b₄`.
    pub fn dot(&self, other: &Self) -> f64 {
        (0..4).map(|i| METRIC[i] * self.0[i] * other.0[i]).sum()
    }

    pub fn square(&self) -> f64 {
        self.dot(self)
    }

    /// Covariant components `a_μ = g_{μμ} a^μ`.
    pub fn lower(&self) -> [f64; 4] {
        [-self.0[0], -self.0[1], -self.0[2], self.0[3]]
    }

    pub fn to_complex(&self) -> CFourVector {
        self.0.map(|c| Complex64::new(c, 0.0))
    }
}

impl Index<usize> for FourVector {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl Add for FourVector {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self(std::array::from_fn(|i| self.0[i] + o.0[i]))
    }
}

impl Sub for FourVector {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self(std::array::from_fn(|i| self.0[i] - o.0[i]))
    }
}

impl Neg for FourVector {
    type Output = Self;
    fn neg(self) -> Self {
        Self(self.0.map(|c| -c))
    }
}

impl Mul<f64> for FourVector {
    type Output = Self;
    fn mul(self, s: f64) -> Self {
        Self(self.0.map(|c| c * s))
    }
}

/// Minkowski product of complex four-vectors (no conjugation).
pub fn cdot(a: &CFourVector, b: &CFourVector) -> Complex64 {
    (0..4).map(|i| a[i] * b[i] * METRIC[i]).sum()
}

/// Antisymmetric rank-2 tensor `T^{μν}` stored as its six pair components.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bivector<T = f64>(pub [T; 6]);

pub type ComplexBivector = Bivector<Complex64>;

impl<T> Bivector<T>
where
    T: Copy + Default + Neg<Output = T>,
{
    pub fn zero() -> Self {
        Self([T::default(); 6])
    }

    /// Component `T^{μν}` for any ordered slot pair (zero on the diagonal).
    pub fn get(&self, mu: usize, nu: usize) -> T {
        match pair_slot(mu, nu) {
            None => T::default(),
            Some((i, s)) if s > 0.0 => self.0[i],
            Some((i, _)) => -self.0[i],
        }
    }

    pub fn to_full(&self) -> [[T; 4]; 4] {
        std::array::from_fn(|mu| std::array::from_fn(|nu| self.get(mu, nu)))
    }

    /// Reads the upper triangle of a 4×4 array; the lower triangle is ignored.
    pub fn from_full(full: &[[T; 4]; 4]) -> Self {
        Self(PAIRS.map(|(a, b)| full[a][b]))
    }
}

impl Bivector<f64> {
    /// `a^μ b^ν - a^ν b^μ`.
    pub fn wedge(a: &FourVector, b: &FourVector) -> Self {
        Self(PAIRS.map(|(m, n)| a[m] * b[n] - a[n] * b[m]))
    }

    /// Full contraction `A^{μν} B_{μν}` over all ordered pairs.
    pub fn contract(&self, other: &Self) -> f64 {
        2.0 * (0..6).map(|i| PAIR_SIGNATURE[i] * self.0[i] * other.0[i]).sum::<f64>()
    }

    pub fn scale(&self, s: f64) -> Self {
        Self(self.0.map(|c| c * s))
    }

    pub fn to_complex(&self) -> ComplexBivector {
        Bivector(self.0.map(|c| Complex64::new(c, 0.0)))
    }
}

/// Full rank-4 array `T^{μναβ}`.
pub type Rank4 = [[[[Complex64; 4]; 4]; 4]; 4];

/// Rank-4 tensor antisymmetric in its first and in its last index pair,
/// stored as `M[I][J]` over pair slots.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairTensor(pub [[Complex64; 6]; 6]);

impl Default for PairTensor {
    fn default() -> Self {
        Self::zero()
    }
}

impl PairTensor {
    pub const fn zero() -> Self {
        Self([[C0; 6]; 6])
    }

    /// `Id^{μναβ} = g^{μα} g^{νβ} - g^{μβ} g^{να}`, diagonal `s_I` in pair form.
    ///
    /// Acting on a bivector with a full double contraction it doubles it.
    pub fn identity() -> Self {
        let mut m = Self::zero();
        for (i, s) in PAIR_SIGNATURE.iter().enumerate() {
            m.0[i][i] = Complex64::new(*s, 0.0);
        }
        m
    }

    pub fn from_real(m: [[f64; 6]; 6]) -> Self {
        Self(m.map(|row| row.map(|c| Complex64::new(c, 0.0))))
    }

    /// Builds from a component function evaluated on `μ<ν`, `α<β` only.
    pub fn from_fn(mut f: impl FnMut(usize, usize, usize, usize) -> Complex64) -> Self {
        let mut m = Self::zero();
        for (i, &(a, b)) in PAIRS.iter().enumerate() {
            for (j, &(c, d)) in PAIRS.iter().enumerate() {
                m.0[i][j] = f(a, b, c, d);
            }
        }
        m
    }

    pub fn from_rank4(t: &Rank4) -> Self {
        Self::from_fn(|a, b, c, d| t[a][b][c][d])
    }

    /// Component `T^{μναβ}` for arbitrary slots.
    pub fn get(&self, mu: usize, nu: usize, alpha: usize, beta: usize) -> Complex64 {
        match (pair_slot(mu, nu), pair_slot(alpha, beta)) {
            (Some((i, si)), Some((j, sj))) => self.0[i][j] * (si * sj),
            _ => C0,
        }
    }

    pub fn to_rank4(&self) -> Box<Rank4> {
        let mut t = Box::new([[[[C0; 4]; 4]; 4]; 4]);
        for (mu, a) in t.iter_mut().enumerate() {
            for (nu, b) in a.iter_mut().enumerate() {
                for (al, c) in b.iter_mut().enumerate() {
                    for (be, d) in c.iter_mut().enumerate() {
                        *d = self.get(mu, nu, al, be);
                    }
                }
            }
        }
        t
    }

    /// `C^{μναβ} = A^{μνδσ} g_{δδ'} g_{σσ'} B^{αβδ'σ'}`, summed over all ordered
    /// `(δ, σ)`. In pair form this is `2 A S Bᵀ` with `S = diag(s_I)`.
    pub fn contract(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for i in 0..6 {
            for k in 0..6 {
                let mut acc = C0;
                for j in 0..6 {
                    acc += self.0[i][j] * other.0[k][j] * PAIR_SIGNATURE[j];
                }
                out.0[i][k] = acc * 2.0;
            }
        }
        out
    }

    /// Swaps the two index pairs: `T^{αβμν}`.
    pub fn pair_transpose(&self) -> Self {
        Self(std::array::from_fn(|i| std::array::from_fn(|j| self.0[j][i])))
    }

    /// All four indices lowered.
    pub fn lowered(&self) -> Self {
        Self(std::array::from_fn(|i| {
            std::array::from_fn(|j| self.0[i][j] * (PAIR_SIGNATURE[i] * PAIR_SIGNATURE[j]))
        }))
    }

    pub fn scale(&self, s: f64) -> Self {
        Self(self.0.map(|row| row.map(|c| c * s)))
    }

    pub fn scale_complex(&self, s: Complex64) -> Self {
        Self(self.0.map(|row| row.map(|c| c * s)))
    }

    pub fn conj(&self) -> Self {
        Self(self.0.map(|row| row.map(|c| c.conj())))
    }

    /// Largest modulus over the 36 stored components.
    pub fn max_abs(&self) -> f64 {
        self.0.iter().flatten().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (*self - *other).max_abs()
    }

    pub fn max_imag(&self) -> f64 {
        self.0.iter().flatten().map(|c| c.im.abs()).fold(0.0, f64::max)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().flatten().all(|c| *c == C0)
    }

    /// Double contraction with a bivector over the last pair:
    /// `T^{μναβ} Y_{αβ}` summed over all ordered `(α, β)`.
    pub fn act(&self, y: &ComplexBivector) -> ComplexBivector {
        Bivector(std::array::from_fn(|i| {
            2.0 * (0..6).map(|j| self.0[i][j] * y.0[j] * PAIR_SIGNATURE[j]).sum::<Complex64>()
        }))
    }
}

impl Add for PairTensor {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self(std::array::from_fn(|i| std::array::from_fn(|j| self.0[i][j] + o.0[i][j])))
    }
}

impl Sub for PairTensor {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self(std::array::from_fn(|i| std::array::from_fn(|j| self.0[i][j] - o.0[i][j])))
    }
}

/// Free-function form of [`PairTensor::contract`].
pub fn pair_contract(a: &PairTensor, b: &PairTensor) -> PairTensor {
    a.contract(b)
}

/// Orthonormal four-leg frame attached to a spatial direction `k̂`.
///
/// Legs `0..=2` are spatial with leg 2 along `k̂`; leg 3 is the time axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tetrad {
    pub legs: [FourVector; 4],
    pub direction: [f64; 3],
}

fn norm3(v: [f64; 3]) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

/// Gram–Schmidt completion seeded from the axis on which `k̂` has the smallest
/// component (first such axis on ties).
pub fn build_tetrad(direction: [f64; 3]) -> Result<Tetrad> {
    let len = norm3(direction);
    if len == 0.0 || (len - 1.0).abs() > 1e-12 {
        return Err(Error::NotUnitDirection(len));
    }
    let k = direction.map(|c| c / len);
    let seed_axis = (0..3)
        .min_by(|&a, &b| k[a].abs().partial_cmp(&k[b].abs()).unwrap())
        .unwrap();
    let mut e0 = [0.0; 3];
    e0[seed_axis] = 1.0;
    let proj = k[seed_axis];
    for i in 0..3 {
        e0[i] -= proj * k[i];
    }
    let n0 = norm3(e0);
    let e0 = e0.map(|c| c / n0);
    let e1 = cross(k, e0);
    Ok(Tetrad {
        legs: [
            FourVector::from_spatial(e0, 0.0),
            FourVector::from_spatial(e1, 0.0),
            FourVector::from_spatial(k, 0.0),
            FourVector::rest_velocity(),
        ],
        direction: k,
    })
}

impl Tetrad {
    /// Largest deviation from `ε(λ)·ε(λ') = g_{λλ'}`.
    pub fn orthonormality_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for l in 0..4 {
            for lp in 0..4 {
                let target = if l == lp { METRIC[l] } else { 0.0 };
                worst = worst.max((self.legs[l].dot(&self.legs[lp]) - target).abs());
            }
        }
        worst
    }

    /// Largest deviation from `Σ_λ g_{λλ} ε_σ(λ) ε_σ'(λ) = g_{σσ'}`.
    pub fn completeness_residual(&self) -> f64 {
        let lowered = self.legs.map(|e| e.lower());
        let mut worst: f64 = 0.0;
        for s in 0..4 {
            for sp in 0..4 {
                let sum: f64 = (0..4).map(|l| METRIC[l] * lowered[l][s] * lowered[l][sp]).sum();
                let target = if s == sp { METRIC[s] } else { 0.0 };
                worst = worst.max((sum - target).abs());
            }
        }
        worst
    }

    /// `η(λ, λ')` for any ordered labels; antisymmetric, zero on the diagonal.
    pub fn eta(&self, l: usize, lp: usize) -> Bivector {
        Bivector::wedge(&self.legs[l], &self.legs[lp]).scale(std::f64::consts::FRAC_1_SQRT_2)
    }
}

/// The six basis bivectors `η(λ, λ')`, `λ < λ'`, in pair-slot order.
pub fn eta_basis(t: &Tetrad) -> [Bivector; 6] {
    PAIRS.map(|(l, lp)| t.eta(l, lp))
}

/// General Lorentz matrix `Λ^μ_ν` acting on contravariant components.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lorentz(pub [[f64; 4]; 4]);

impl Lorentz {
    pub fn identity() -> Self {
        Self(std::array::from_fn(|i| std::array::from_fn(|j| if i == j { 1.0 } else { 0.0 })))
    }

    /// `self · other` (apply `other` first).
    pub fn compose(&self, other: &Self) -> Self {
        Self(std::array::from_fn(|i| {
            std::array::from_fn(|j| (0..4).map(|k| self.0[i][k] * other.0[k][j]).sum())
        }))
    }

    /// `Λ⁻¹ = g Λᵀ g`.
    pub fn inverse(&self) -> Self {
        Self(std::array::from_fn(|i| {
            std::array::from_fn(|j| METRIC[i] * self.0[j][i] * METRIC[j])
        }))
    }

    /// Largest entry of `|Λᵀ g Λ - g|`.
    pub fn metric_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for a in 0..4 {
            for b in 0..4 {
                let s: f64 = (0..4).map(|m| self.0[m][a] * METRIC[m] * self.0[m][b]).sum();
                let target = if a == b { METRIC[a] } else { 0.0 };
                worst = worst.max((s - target).abs());
            }
        }
        worst
    }

    pub fn determinant(&self) -> f64 {
        nalgebra::Matrix4::from_fn(|i, j| self.0[i][j]).determinant()
    }

    pub fn apply(&self, v: &FourVector) -> FourVector {
        FourVector(std::array::from_fn(|i| (0..4).map(|j| self.0[i][j] * v.0[j]).sum()))
    }

    pub fn apply_complex(&self, v: &CFourVector) -> CFourVector {
        std::array::from_fn(|i| (0..4).map(|j| v[j] * self.0[i][j]).sum())
    }

    /// Induced 6×6 action on bivectors: `R_{IJ} = Λ^a_c Λ^b_d - Λ^a_d Λ^b_c`.
    pub fn bivector_matrix(&self) -> [[f64; 6]; 6] {
        let l = &self.0;
        std::array::from_fn(|i| {
            let (a, b) = PAIRS[i];
            std::array::from_fn(|j| {
                let (c, d) = PAIRS[j];
                l[a][c] * l[b][d] - l[a][d] * l[b][c]
            })
        })
    }

    pub fn apply_bivector(&self, y: &Bivector) -> Bivector {
        let r = self.bivector_matrix();
        Bivector(std::array::from_fn(|i| (0..6).map(|j| r[i][j] * y.0[j]).sum()))
    }

    /// All four indices transformed: `R M Rᵀ`.
    pub fn apply_pair(&self, t: &PairTensor) -> PairTensor {
        let r = self.bivector_matrix();
        let mut tmp = [[C0; 6]; 6];
        for i in 0..6 {
            for j in 0..6 {
                tmp[i][j] = (0..6).map(|k| t.0[k][j] * r[i][k]).sum();
            }
        }
        PairTensor(std::array::from_fn(|i| {
            std::array::from_fn(|j| (0..6).map(|k| tmp[i][k] * r[j][k]).sum())
        }))
    }
}

/// Pure boost to the frame that moves with `velocity` relative to the current
/// one (passive convention: a particle at rest acquires velocity `-v`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Boost {
    velocity: [f64; 3],
    matrix: Lorentz,
}

impl Boost {
    pub fn new(velocity: [f64; 3]) -> Result<Self> {
        let v2 = velocity.iter().map(|c| c * c).sum::<f64>();
        if !v2.is_finite() || v2 >= 1.0 {
            return Err(domain(format!("boost speed must be < 1, got {}", v2.sqrt())));
        }
        let gamma = 1.0 / (1.0 - v2).sqrt();
        let mut m = Lorentz::identity();
        if v2 > 0.0 {
            // (γ - 1)/v² = γ²/(γ + 1) avoids cancellation at small v
            let k = gamma * gamma / (gamma + 1.0);
            for i in 0..3 {
                for j in 0..3 {
                    m.0[i][j] += k * velocity[i] * velocity[j];
                }
                m.0[i][3] = -gamma * velocity[i];
                m.0[3][i] = -gamma * velocity[i];
            }
            m.0[3][3] = gamma;
        }
        Ok(Self { velocity, matrix: m })
    }

    pub fn velocity(&self) -> [f64; 3] {
        self.velocity
    }

    pub fn gamma(&self) -> f64 {
        self.matrix.0[3][3]
    }

    pub fn matrix(&self) -> &Lorentz {
        &self.matrix
    }

    pub fn is_identity(&self) -> bool {
        self.velocity == [0.0; 3]
    }
}

/// Anything carrying free Minkowski indices.
pub trait LorentzCovariant: Sized {
    fn transformed(&self, l: &Lorentz) -> Self;
}

impl LorentzCovariant for FourVector {
    fn transformed(&self, l: &Lorentz) -> Self {
        l.apply(self)
    }
}

impl LorentzCovariant for Bivector {
    fn transformed(&self, l: &Lorentz) -> Self {
        l.apply_bivector(self)
    }
}

impl LorentzCovariant for PairTensor {
    fn transformed(&self, l: &Lorentz) -> Self {
        l.apply_pair(self)
    }
}

/// Transforms every free index of `t` with the boost matrix.
pub fn boost_apply<T: LorentzCovariant + Clone>(boost: &Boost, t: &T) -> T {
    if boost.is_identity() {
        return t.clone();
    }
    t.transformed(boost.matrix())
}
