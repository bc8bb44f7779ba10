#![allow(dead_code)]

//! Independent oracles shared by the integration tests: explicit index sums
//! over full rank-4 arrays and a finite-difference wave solver.

use covar_medium::coupling::{CouplingModel, LorentzianProfile};
use covar_medium::minkowski::{Rank4, METRIC};
use covar_medium::{Complex64, FourVector, PairTensor, SusceptibilityEvaluator};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

pub fn unit_direction(r: &mut ChaCha8Rng) -> [f64; 3] {
    loop {
        let v: [f64; 3] = std::array::from_fn(|_| r.gen_range(-1.0..1.0));
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if n > 0.1 && n <= 1.0 {
            return v.map(|x| x / n);
        }
    }
}

pub fn four_vector(r: &mut ChaCha8Rng, scale: f64) -> FourVector {
    FourVector(std::array::from_fn(|_| r.gen_range(-scale..scale)))
}

pub fn velocity(r: &mut ChaCha8Rng, max: f64) -> [f64; 3] {
    let d = unit_direction(r);
    let s = r.gen_range(0.0..max);
    d.map(|x| x * s)
}

pub fn pair_tensor(r: &mut ChaCha8Rng) -> PairTensor {
    PairTensor(std::array::from_fn(|_| {
        std::array::from_fn(|_| Complex64::new(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0)))
    }))
}

/// `g^{μν}` (numerically equal to `g_{μν}`).
pub fn g(a: usize, b: usize) -> f64 {
    if a == b {
        METRIC[a]
    } else {
        0.0
    }
}

/// `C^{μναβ} = Σ_{δσ} A^{μνδσ} g_{δδ} g_{σσ} B^{αβδσ}` over the full arrays.
pub fn brute_contract(a: &Rank4, b: &Rank4) -> Box<Rank4> {
    let mut out = Box::new([[[[c(0.0); 4]; 4]; 4]; 4]);
    for m in 0..4 {
        for n in 0..4 {
            for al in 0..4 {
                for be in 0..4 {
                    let mut acc = c(0.0);
                    for d in 0..4 {
                        for s in 0..4 {
                            acc += a[m][n][d][s] * b[al][be][d][s] * (g(d, d) * g(s, s));
                        }
                    }
                    out[m][n][al][be] = acc;
                }
            }
        }
    }
    out
}

pub fn rank4_max_diff(a: &Rank4, b: &Rank4) -> f64 {
    let mut worst: f64 = 0.0;
    for m in 0..4 {
        for n in 0..4 {
            for al in 0..4 {
                for be in 0..4 {
                    worst = worst.max((a[m][n][al][be] - b[m][n][al][be]).norm());
                }
            }
        }
    }
    worst
}

/// `L_νσ = -(q·q) g_νσ + 8π Σ_{μα} q^μ q^α χ_{μνασ}` from the full array.
pub fn brute_wave_operator(chi: &PairTensor, q: &[Complex64; 4]) -> [[Complex64; 4]; 4] {
    let full = chi.to_rank4();
    let qq: Complex64 = (0..4).map(|i| q[i] * q[i] * METRIC[i]).sum();
    let mut l = [[c(0.0); 4]; 4];
    for n in 0..4 {
        for s in 0..4 {
            let mut acc = c(0.0);
            for m in 0..4 {
                for a in 0..4 {
                    let low = METRIC[m] * METRIC[n] * METRIC[a] * METRIC[s];
                    acc += q[m] * q[a] * full[m][n][a][s] * low;
                }
            }
            l[n][s] = -qq * g(n, s) + acc * (8.0 * std::f64::consts::PI);
        }
    }
    l
}

/// Laplace expansion of a 4×4 determinant.
pub fn det4(m: &[[Complex64; 4]; 4]) -> Complex64 {
    fn det3(m: [[Complex64; 3]; 3]) -> Complex64 {
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }
    let mut acc = c(0.0);
    for col in 0..4 {
        let minor: [[Complex64; 3]; 3] = std::array::from_fn(|i| {
            let row = i + 1;
            let cols: Vec<usize> = (0..4).filter(|&k| k != col).collect();
            std::array::from_fn(|j| m[row][cols[j]])
        });
        let sign = if col % 2 == 0 { 1.0 } else { -1.0 };
        acc += m[0][col] * det3(minor) * sign;
    }
    acc
}

pub fn lorentzian() -> SusceptibilityEvaluator {
    SusceptibilityEvaluator::new(CouplingModel::IsotropicLorentzian(
        LorentzianProfile::new(0.1, 1.0, 0.1).unwrap(),
    ))
}

/// Rest-frame isotropic dielectric: electric line only.
pub fn dielectric() -> SusceptibilityEvaluator {
    let e = LorentzianProfile::new(0.3, 1.0, 0.1).unwrap();
    let m = LorentzianProfile::new(0.0, 1.0, 0.1).unwrap();
    SusceptibilityEvaluator::new(CouplingModel::em_split(e, m, FourVector::rest_velocity()).unwrap())
}

/// Radially reduced explicit leapfrog solve of `(∂_t² - ∇² + ω²) φ = 0` with
/// `φ(0) = 0`, `∂_t φ(0) = -ρ`, `ρ` a normalized Gaussian of width `sigma`.
/// This is the retarded solution of `(□² + ω²) G = -δ⁴` smeared by `ρ`.
/// Returns `φ(t, r)` at the requested points (`r` on grid nodes).
pub struct RadialWaveSolve {
    pub dr: f64,
    pub dt: f64,
    pub r_max: f64,
    pub sigma: f64,
}

impl RadialWaveSolve {
    pub fn standard() -> Self {
        Self { dr: 0.005, dt: 0.0025, r_max: 10.0, sigma: 0.05 }
    }

    pub fn run(&self, omega: f64, points: &[(f64, f64)]) -> Vec<f64> {
        let n = (self.r_max / self.dr).round() as usize;
        let r: Vec<f64> = (0..=n).map(|i| i as f64 * self.dr).collect();
        let norm = (2.0 * std::f64::consts::PI * self.sigma * self.sigma).powf(-1.5);
        let rho = |x: f64| norm * (-x * x / (2.0 * self.sigma * self.sigma)).exp();
        // u = r φ obeys u_tt = u_rr - ω² u with u(0, t) = 0
        let v0: Vec<f64> = r.iter().map(|&x| -x * rho(x)).collect();
        let lap = |u: &[f64], i: usize| (u[i + 1] - 2.0 * u[i] + u[i - 1]) / (self.dr * self.dr);
        let mut prev = vec![0.0; n + 1];
        // second-order start: u(dt) = dt v0 + dt³/6 (v0'' - ω² v0)
        let mut cur = vec![0.0; n + 1];
        for i in 1..n {
            cur[i] = self.dt * v0[i] + self.dt.powi(3) / 6.0 * (lap(&v0, i) - omega * omega * v0[i]);
        }
        let t_end = points.iter().map(|p| p.0).fold(0.0, f64::max);
        let steps = (t_end / self.dt).round() as usize;
        let mut out = vec![f64::NAN; points.len()];
        let mut next = vec![0.0; n + 1];
        let k2 = self.dt * self.dt;
        for step in 1..=steps {
            let t = step as f64 * self.dt;
            for (j, &(tp, rp)) in points.iter().enumerate() {
                if (tp - t).abs() < 0.5 * self.dt {
                    let i = (rp / self.dr).round() as usize;
                    out[j] = cur[i] / r[i];
                }
            }
            if step == steps {
                break;
            }
            for i in 1..n {
                next[i] = 2.0 * cur[i] - prev[i] + k2 * (lap(&cur, i) - omega * omega * cur[i]);
            }
            next[0] = 0.0;
            next[n] = 0.0;
            std::mem::swap(&mut prev, &mut cur);
            std::mem::swap(&mut cur, &mut next);
        }
        out
    }
}
