//! Momentum-space wave operator
//! `L_νσ(q) = -(q·q) g_νσ + 8π q^μ q^α χ̱_{μνασ}(q)`, its inverse, the mode
//! functions `Z_ναβ`, and the complex refractive-index roots of `det L`.
//!
//! Roots are located by the argument principle on nested rectangles in the
//! complex `n` plane. Once a rectangle's circumscribed circle encloses exactly
//! the rectangle's zeros, the contour moments `Σ (ρ - c)^p` give the cluster,
//! which is then refined on shrinking circles and Newton-polished.

use std::f64::consts::PI;

use nalgebra::Matrix4;
use num_complex::Complex64;

use crate::error::{domain, Error, Result};
use crate::minkowski::{cdot, CFourVector, PairTensor, METRIC, PAIRS, PAIR_SIGNATURE};
use crate::susceptibility::SusceptibilityEvaluator;

pub type Matrix4c = Matrix4<Complex64>;

const C0: Complex64 = Complex64::new(0.0, 0.0);

/// Polished zeros closer than this (relative) are reported as one degenerate root.
pub const MERGE_TOL: f64 = 1e-6;

/// `q^μ X_{μν} = Σ_I X_I c[I][ν]` for a bivector `X` stored by pair slot.
fn pair_coefficients(q: &CFourVector) -> [[Complex64; 4]; 6] {
    let mut c = [[C0; 4]; 6];
    for (i, &(a, b)) in PAIRS.iter().enumerate() {
        c[i][b] += q[a];
        c[i][a] -= q[b];
    }
    c
}

/// Assembles `L_νσ(q)` (both indices covariant) through the 6×6 pair form.
pub fn assemble_l(e: &SusceptibilityEvaluator, q: &CFourVector) -> Matrix4c {
    let chi = e.chi_momentum_complex(q).lowered();
    assemble_l_from_chi(&chi, q)
}

/// Same as [`assemble_l`] for an already evaluated, fully lowered `χ̱`.
pub fn assemble_l_from_chi(chi_lower: &PairTensor, q: &CFourVector) -> Matrix4c {
    let qq = cdot(q, q);
    let c = pair_coefficients(q);
    let mut tmp = [[C0; 4]; 6];
    for i in 0..6 {
        for s in 0..4 {
            tmp[i][s] = (0..6).map(|j| chi_lower.0[i][j] * c[j][s]).sum();
        }
    }
    Matrix4c::from_fn(|n, s| {
        let medium: Complex64 = (0..6).map(|i| c[i][n] * tmp[i][s]).sum();
        let metric = if n == s { -qq * METRIC[n] } else { C0 };
        metric + medium * (8.0 * PI)
    })
}

/// Inverse and condition estimate `σ_max/σ_min`.
pub fn invert_l(l: &Matrix4c) -> Result<(Matrix4c, f64)> {
    let sv = l.singular_values();
    let smax = sv.max();
    let smin = sv.min();
    let cond = if smin > 0.0 { smax / smin } else { f64::INFINITY };
    if !(smin > 1e-12 * smax) {
        return Err(Error::OnShell { cond });
    }
    let inv = l.try_inverse().ok_or(Error::OnShell { cond })?;
    Ok((inv, cond))
}

/// `Z_{ναβ}(k⃗, ω)`, stored as `z[ν][J]` with `J` the pair slot of `(α, β)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeFunction {
    pub k: [f64; 3],
    pub omega: f64,
    pub z: [[Complex64; 6]; 4],
}

impl ModeFunction {
    pub fn get(&self, nu: usize, alpha: usize, beta: usize) -> Complex64 {
        match crate::minkowski::pair_slot(alpha, beta) {
            None => C0,
            Some((j, s)) => self.z[nu][j] * s,
        }
    }
}

/// `Z_ναβ = f^{μσ}_{αβ}(ω) [i q_μ L⁻¹_νσ(q)]` at `q = (k⃗, √(k² + ω²))`.
pub fn mode_function(e: &SusceptibilityEvaluator, k: [f64; 3], omega: f64) -> Result<ModeFunction> {
    let k2 = k.iter().map(|c| c * c).sum::<f64>();
    let q = [k[0], k[1], k[2], (k2 + omega * omega).sqrt()].map(|c| Complex64::new(c, 0.0));
    let f = e.coupling(omega)?;
    let (linv, _) = invert_l(&assemble_l(e, &q))?;
    let q_low: [Complex64; 4] = std::array::from_fn(|i| q[i] * METRIC[i]);
    let mut z = [[C0; 6]; 4];
    for (nu, row) in z.iter_mut().enumerate() {
        let bracket: [Complex64; 6] =
            PAIRS.map(|(a, b)| q_low[a] * linv[(nu, b)] - q_low[b] * linv[(nu, a)]);
        for (j, slot) in row.iter_mut().enumerate() {
            let s: Complex64 = (0..6).map(|i| f.0[i][j] * bracket[i]).sum();
            *slot = Complex64::new(0.0, 1.0) * s * PAIR_SIGNATURE[j];
        }
    }
    Ok(ModeFunction { k, omega, z })
}

/// Rectangle in the complex refractive-index plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootWindow {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
}

impl RootWindow {
    pub fn new(re_min: f64, re_max: f64, im_min: f64, im_max: f64) -> Result<Self> {
        if !(re_max > re_min && im_max > im_min) {
            return Err(domain("root window must have positive extent"));
        }
        Ok(Self { re_min, re_max, im_min, im_max })
    }

    fn diameter(&self) -> f64 {
        (self.re_max - self.re_min).hypot(self.im_max - self.im_min)
    }

    fn center(&self) -> Complex64 {
        Complex64::new(0.5 * (self.re_min + self.re_max), 0.5 * (self.im_min + self.im_max))
    }

    fn corners(&self) -> [Complex64; 4] {
        [
            Complex64::new(self.re_min, self.im_min),
            Complex64::new(self.re_max, self.im_min),
            Complex64::new(self.re_max, self.im_max),
            Complex64::new(self.re_min, self.im_max),
        ]
    }

    fn split(&self) -> [RootWindow; 2] {
        // off-centre cut keeps the seam away from symmetric root placements
        let t = 0.5 + 0.013_7;
        if self.re_max - self.re_min >= self.im_max - self.im_min {
            let m = self.re_min + t * (self.re_max - self.re_min);
            [RootWindow { re_max: m, ..*self }, RootWindow { re_min: m, ..*self }]
        } else {
            let m = self.im_min + t * (self.im_max - self.im_min);
            [RootWindow { im_max: m, ..*self }, RootWindow { im_min: m, ..*self }]
        }
    }

    fn contains(&self, z: Complex64) -> bool {
        z.re >= self.re_min && z.re <= self.re_max && z.im >= self.im_min && z.im <= self.im_max
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootSearchOptions {
    pub max_depth: usize,
    /// Relative tolerance on `|det L| / ‖L‖⁴` for the final polish.
    pub newton_tol: f64,
    pub max_newton_iter: usize,
    /// Angle below which a null vector counts as parallel to `q`.
    pub gauge_angle: f64,
}

impl Default for RootSearchOptions {
    fn default() -> Self {
        Self { max_depth: 40, newton_tol: 1e-12, max_newton_iter: 50, gauge_angle: 1e-8 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RootClass {
    Gauge,
    Physical,
}

impl RootClass {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Gauge => "gauge",
            Self::Physical => "physical",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DispersionRoot {
    pub n: Complex64,
    pub multiplicity: usize,
    pub class: RootClass,
}

/// `q = (n q⁴ k̂, q⁴)`.
pub fn wavevector(direction: [f64; 3], q4: f64, n: Complex64) -> CFourVector {
    [
        n * (q4 * direction[0]),
        n * (q4 * direction[1]),
        n * (q4 * direction[2]),
        Complex64::new(q4, 0.0),
    ]
}

struct DetFn<'a> {
    e: &'a SusceptibilityEvaluator,
    direction: [f64; 3],
    q4: f64,
}

impl DetFn<'_> {
    fn matrix(&self, n: Complex64) -> Matrix4c {
        assemble_l(self.e, &wavevector(self.direction, self.q4, n))
    }

    fn eval(&self, n: Complex64) -> Complex64 {
        self.matrix(n).determinant()
    }
}

fn unwrap_step(prev: f64, next: f64) -> f64 {
    let mut d = next - prev;
    while d > PI {
        d -= 2.0 * PI;
    }
    while d < -PI {
        d += 2.0 * PI;
    }
    d
}

/// Winding number of `det` around the rectangle, or `None` if a zero sits
/// (numerically) on the boundary.
fn winding_rect(f: &DetFn<'_>, w: &RootWindow) -> Option<i64> {
    let corners = w.corners();
    let mut total = 0.0;
    for k in 0..4 {
        let (a, b) = (corners[k], corners[(k + 1) % 4]);
        total += edge_phase(f, a, b, 24)?;
    }
    let turns = total / (2.0 * PI);
    let rounded = turns.round();
    if (turns - rounded).abs() > 0.05 {
        return None;
    }
    Some(rounded as i64)
}

/// Value and Newton distance `|f/f'|`, a lower bound on the distance to the
/// nearest simple zero (half of it for a double zero).
fn probe(f: &DetFn<'_>, z: Complex64) -> Option<(Complex64, f64)> {
    let v = f.eval(z);
    if v.norm() == 0.0 || !v.norm().is_finite() {
        return None;
    }
    let h = 1e-7 * z.norm().max(1.0);
    let dv = (f.eval(z + h) - v) / h;
    let rho = if dv.norm() == 0.0 { f64::INFINITY } else { v.norm() / dv.norm() };
    Some((v, rho))
}

fn edge_phase(f: &DetFn<'_>, a: Complex64, b: Complex64, samples: usize) -> Option<f64> {
    let mut total = 0.0;
    let mut prev = (a, probe(f, a)?);
    for i in 1..=samples {
        let z = a + (b - a) * (i as f64 / samples as f64);
        let next = (z, probe(f, z)?);
        total += segment_phase(f, prev, next, 0)?;
        prev = next;
    }
    Some(total)
}

type Sample = (Complex64, (Complex64, f64));

/// Phase change along a segment, bisecting until the step is small and the
/// segment is shorter than the distance to any nearby zero.
fn segment_phase(f: &DetFn<'_>, a: Sample, b: Sample, depth: usize) -> Option<f64> {
    let (za, (va, ra)) = a;
    let (zb, (vb, rb)) = b;
    let d = unwrap_step(va.arg(), vb.arg());
    let len = (zb - za).norm();
    if d.abs() < PI / 4.0 && len <= ra.min(rb) {
        return Some(d);
    }
    if depth > 40 {
        return None;
    }
    let zm = (za + zb) * 0.5;
    let m = (zm, probe(f, zm)?);
    Some(segment_phase(f, a, m, depth + 1)? + segment_phase(f, m, b, depth + 1)?)
}

/// Cluster of `m` zeros inside a circle, from contour moments.
struct Circle {
    center: Complex64,
    radius: f64,
}

/// Winding number and centered power sums `σ_p = Σ (ρ - c)^p`, `p = 1..=m`.
fn circle_moments(f: &DetFn<'_>, c: &Circle) -> Option<(i64, Vec<Complex64>)> {
    let mut n = 64;
    loop {
        let values: Vec<Complex64> = (0..n)
            .map(|k| {
                let th = 2.0 * PI * k as f64 / n as f64;
                f.eval(c.center + Complex64::from_polar(c.radius, th))
            })
            .collect();
        if values.iter().any(|v| v.norm() == 0.0 || !v.norm().is_finite()) {
            return None;
        }
        let mut arg = values[0].arg();
        let mut unwrapped = vec![arg];
        let mut max_step: f64 = 0.0;
        for k in 1..=n {
            let d = unwrap_step(values[(k - 1) % n].arg(), values[k % n].arg());
            max_step = max_step.max(d.abs());
            arg += d;
            if k < n {
                unwrapped.push(arg);
            }
        }
        if max_step > PI / 3.0 && n < 2048 {
            n *= 2;
            continue;
        }
        let winding = ((arg - unwrapped[0]) / (2.0 * PI)).round() as i64;
        if winding <= 0 {
            return Some((winding, Vec::new()));
        }
        // log φ with φ = f / (z - c)^m, periodic on the circle
        let m = winding as f64;
        let logs: Vec<Complex64> = (0..n)
            .map(|k| {
                let th = 2.0 * PI * k as f64 / n as f64;
                Complex64::new(values[k].norm().ln() - m * c.radius.ln(), unwrapped[k] - m * th)
            })
            .collect();
        let sums = (1..=winding as usize)
            .map(|p| {
                let acc: Complex64 = logs
                    .iter()
                    .enumerate()
                    .map(|(k, l)| l * Complex64::from_polar(1.0, p as f64 * 2.0 * PI * k as f64 / n as f64))
                    .sum();
                -acc * (p as f64 * c.radius.powi(p as i32) / n as f64)
            })
            .collect();
        return Some((winding, sums));
    }
}

/// Roots of the monic polynomial whose power sums are `sums`.
fn roots_from_power_sums(sums: &[Complex64]) -> Vec<Complex64> {
    let m = sums.len();
    let mut e = vec![Complex64::new(1.0, 0.0)];
    for k in 1..=m {
        let mut acc = C0;
        for i in 1..=k {
            let sign = if i % 2 == 1 { 1.0 } else { -1.0 };
            acc += e[k - i] * sums[i - 1] * sign;
        }
        e.push(acc / k as f64);
    }
    // p(w) = Σ (-1)^k e_k w^{m-k}
    let coeff: Vec<Complex64> = (0..=m).map(|k| if k % 2 == 0 { e[k] } else { -e[k] }).collect();
    if m == 1 {
        return vec![-coeff[1]];
    }
    let eval = |w: Complex64| coeff.iter().fold(C0, |acc, c| acc * w + c);
    let scale = sums.iter().map(|s| s.norm()).fold(1e-300, f64::max).powf(1.0 / m as f64);
    let seed = Complex64::new(0.4, 0.9) * scale.max(1e-12);
    let mut r: Vec<Complex64> = (0..m).map(|k| seed.powu(k as u32 + 1)).collect();
    for _ in 0..500 {
        let mut delta: f64 = 0.0;
        for i in 0..m {
            let mut den = Complex64::new(1.0, 0.0);
            for j in 0..m {
                if i != j {
                    den *= r[i] - r[j];
                }
            }
            if den.norm() == 0.0 {
                den = Complex64::new(1e-300, 0.0);
            }
            let step = eval(r[i]) / den;
            r[i] -= step;
            delta = delta.max(step.norm());
        }
        if delta < 1e-15 * scale.max(1e-300) {
            break;
        }
    }
    r
}

struct Cluster {
    center: Complex64,
    multiplicity: usize,
}

fn resolve_circle(f: &DetFn<'_>, circle: &Circle, expect: i64) -> Option<Vec<Cluster>> {
    let (winding, sums) = circle_moments(f, circle)?;
    if winding != expect || winding <= 0 {
        return None;
    }
    let m = winding as usize;
    let roots = roots_from_power_sums(&sums);
    let centroid = circle.center + sums[0] / m as f64;
    let spread = roots.iter().map(|r| (circle.center + r - centroid).norm()).fold(0.0, f64::max);
    // an m-fold zero perturbed by ε splits by ε^{1/m}; its centroid does not
    let tol = 10.0 * circle.radius * 1e-13_f64.powf(1.0 / m as f64);
    if spread < tol {
        return Some(vec![Cluster { center: centroid, multiplicity: m }]);
    }
    // split into groups of numerically coincident roots
    let mut clusters: Vec<(Complex64, usize)> = Vec::new();
    for r in roots {
        let z = circle.center + r;
        match clusters.iter_mut().find(|(c, k)| (*c / *k as f64 - z).norm() < tol) {
            Some(entry) => {
                entry.0 += z;
                entry.1 += 1;
            }
            None => clusters.push((z, 1)),
        }
    }
    Some(
        clusters
            .into_iter()
            .map(|(sum, k)| Cluster { center: sum / k as f64, multiplicity: k })
            .collect(),
    )
}

/// Shrinking-circle refinement of one cluster, then Newton polish for simple zeros.
fn refine_cluster(f: &DetFn<'_>, mut cl: Cluster, start_radius: f64, opts: &RootSearchOptions) -> Complex64 {
    let mut radius = start_radius;
    for _ in 0..4 {
        radius *= 0.05;
        if radius < 1e-10 * cl.center.norm().max(1.0) {
            break;
        }
        let circle = Circle { center: cl.center, radius };
        match resolve_circle(f, &circle, cl.multiplicity as i64) {
            Some(v) if v.len() == 1 => cl.center = v[0].center,
            _ => break,
        }
    }
    if cl.multiplicity == 1 {
        let mut n = cl.center;
        for _ in 0..opts.max_newton_iter {
            let l = f.matrix(n);
            let d = l.determinant();
            let norm4 = l.norm().powi(4).max(1e-300);
            if d.norm() / norm4 < opts.newton_tol * 1e-3 {
                break;
            }
            let h = 1e-6 * n.norm().max(1.0);
            let dp = (f.eval(n + h) - f.eval(n - h)) / (2.0 * h);
            if dp.norm() == 0.0 {
                break;
            }
            let step = d / dp;
            n -= step;
            if step.norm() < 1e-15 * n.norm().max(1.0) {
                break;
            }
        }
        // keep the moment estimate if Newton wandered off
        if (n - cl.center).norm() < radius.max(1e-9) {
            cl.center = n;
        }
    }
    cl.center
}

fn classify(
    e: &SusceptibilityEvaluator,
    direction: [f64; 3],
    q4: f64,
    n: Complex64,
    opts: &RootSearchOptions,
) -> RootClass {
    let q = wavevector(direction, q4, n);
    let l = assemble_l(e, &q);
    let svd = l.svd(false, true);
    let v_t = svd.v_t.expect("requested V");
    let smax = svd.singular_values.max();
    let threshold = 1e-7 * smax.max(q4 * q4);
    let qn = q.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    let mut null_dim = 0;
    let mut all_parallel = true;
    for (i, s) in svd.singular_values.iter().enumerate() {
        if *s > threshold {
            continue;
        }
        null_dim += 1;
        let v: Vec<Complex64> = (0..4).map(|j| v_t[(i, j)].conj()).collect();
        let vn = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        let overlap: Complex64 = (0..4).map(|j| v[j].conj() * q[j]).sum();
        let cos = (overlap.norm() / (vn * qn)).min(1.0);
        let sin = (1.0 - cos * cos).max(0.0).sqrt();
        if sin > opts.gauge_angle.sqrt() {
            all_parallel = false;
        }
    }
    if null_dim == 1 && all_parallel {
        RootClass::Gauge
    } else {
        RootClass::Physical
    }
}

/// Rejects windows that touch the cut where `q·q = q⁴²(1 - n²)` is real and
/// inside the coupling's frequency support squared.
fn check_branch_cut(e: &SusceptibilityEvaluator, q4: f64, w: &RootWindow) -> Result<()> {
    if e.is_vacuum() {
        return Ok(());
    }
    let lo = e.model().support().0;
    let hi = e.grid().cutoff;
    let overlaps = |a: f64, b: f64, c: f64, d: f64| a <= d && c <= b;
    // n² ranges over [1 - hi²/q4², 1 - lo²/q4²]
    let (n2_min, n2_max) = (1.0 - (hi / q4).powi(2), 1.0 - (lo / q4).powi(2));
    if n2_max >= 0.0 && w.im_min <= 0.0 && w.im_max >= 0.0 {
        let (r1, r2) = (n2_min.max(0.0).sqrt(), n2_max.sqrt());
        if overlaps(w.re_min, w.re_max, r1, r2) || overlaps(w.re_min, w.re_max, -r2, -r1) {
            return Err(domain(format!("root window crosses the branch cut {r1} <= |n| <= {r2} on the real axis")));
        }
    }
    if n2_min < 0.0 && w.re_min <= 0.0 && w.re_max >= 0.0 {
        let (y1, y2) = ((-n2_max).max(0.0).sqrt(), (-n2_min).sqrt());
        if overlaps(w.im_min, w.im_max, y1, y2) || overlaps(w.im_min, w.im_max, -y2, -y1) {
            return Err(domain(format!("root window crosses the branch cut {y1} <= |Im n| <= {y2} on the imaginary axis")));
        }
    }
    Ok(())
}

/// Complex refractive indices `n` with `det L(n q⁴ k̂, q⁴) = 0` inside `window`.
///
/// Degenerate roots are reported once with their multiplicity. Results are
/// sorted by `(Re n, Im n)`.
pub fn dispersion_roots(
    e: &SusceptibilityEvaluator,
    direction: [f64; 3],
    q4: f64,
    window: &RootWindow,
    opts: &RootSearchOptions,
) -> Result<Vec<DispersionRoot>> {
    let len = direction.iter().map(|c| c * c).sum::<f64>().sqrt();
    if (len - 1.0).abs() > 1e-12 {
        return Err(Error::NotUnitDirection(len));
    }
    if !(q4 > 0.0) {
        return Err(domain(format!("frequency must be > 0, got {q4}")));
    }
    check_branch_cut(e, q4, window)?;
    let f = DetFn { e, direction, q4 };
    let mut found: Vec<(Complex64, usize)> = Vec::new();
    let mut stack: Vec<(RootWindow, usize, Option<i64>)> = vec![(*window, 0, None)];
    let mut boxes = 0usize;
    while let Some((w, depth, known)) = stack.pop() {
        boxes += 1;
        if boxes > 20_000 {
            return Err(Error::NoConvergence(format!("box budget exhausted near {:?}", w)));
        }
        let winding = match known.or_else(|| winding_rect(&f, &w)) {
            Some(k) => k,
            None if depth == 0 => {
                return Err(Error::NoConvergence(format!(
                    "zero of det L on the boundary of the search window {:?}",
                    w
                )))
            }
            None => {
                return Err(Error::NoConvergence(format!("zero on a subdivision seam at depth {depth}")));
            }
        };
        if winding < 0 {
            return Err(Error::NoConvergence(format!(
                "negative winding {winding} in {:?}: det L has a pole or cut inside",
                w
            )));
        }
        if winding == 0 {
            continue;
        }
        let circle = Circle { center: w.center(), radius: 0.5 * w.diameter() * 1.02 };
        if let Some(clusters) = resolve_circle(&f, &circle, winding) {
            if clusters.iter().all(|c| w.contains(c.center)) {
                for cl in clusters {
                    let mult = cl.multiplicity;
                    let n = refine_cluster(&f, cl, circle.radius, opts);
                    found.push((n, mult));
                }
                continue;
            }
        }
        if depth >= opts.max_depth {
            return Err(Error::NoConvergence(format!(
                "max depth {} reached with winding {winding} in {:?}",
                opts.max_depth, w
            )));
        }
        let halves = w.split();
        let first = winding_rect(&f, &halves[0]);
        let second = first.map(|a| winding - a);
        stack.push((halves[1], depth + 1, second));
        stack.push((halves[0], depth + 1, first));
    }
    // a degenerate zero may come back as a tight group of simple ones
    let mut merged: Vec<(Complex64, usize)> = Vec::new();
    for (n, m) in found {
        let close = merged.iter_mut().find(|(c, _)| (*c - n).norm() < MERGE_TOL * c.norm().max(1.0));
        match close {
            Some((c, k)) => {
                *c = (*c * *k as f64 + n * m as f64) / (*k + m) as f64;
                *k += m;
            }
            None => merged.push((n, m)),
        }
    }
    let mut roots: Vec<DispersionRoot> = merged
        .into_iter()
        .map(|(n, multiplicity)| DispersionRoot {
            n,
            multiplicity,
            class: classify(e, direction, q4, n, opts),
        })
        .collect();
    roots.sort_by(|a, b| {
        a.n.re.partial_cmp(&b.n.re).unwrap().then(a.n.im.partial_cmp(&b.n.im).unwrap())
    });
    Ok(roots)
}
