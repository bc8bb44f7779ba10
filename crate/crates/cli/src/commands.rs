//! Subcommand pipelines. Each writes its tables under the output directory
//! with `{:.16e}` floats and `\n` line endings.

use std::fs;
use std::path::{Path, PathBuf};

use covar_medium::dispersion::{assemble_l, dispersion_roots};
use covar_medium::greens::green_tail;
use covar_medium::minkowski::{build_tetrad, METRIC};
use covar_medium::noisequantum::{commutator_kn_modesum, commutator_kn_reference};
use covar_medium::{
    Complex64, FourVector, GreenSpec, ModeGrid, PairTensor, RootClass, RootSearchOptions, RootWindow,
    SusceptibilityEvaluator,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::config::RunConfig;
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Chi,
    Dispersion,
    Green,
    Verify,
    BoostScan,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOptions {
    pub seed: u64,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self { seed: 1 }
    }
}

/// Files written and, for `verify`, the names of failed checks.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Outcome {
    pub files: Vec<(PathBuf, usize)>,
    pub failures: Vec<String>,
}

fn runtime(e: impl std::fmt::Display) -> CliError {
    CliError::Runtime(e.to_string())
}

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn unit(d: [f64; 3]) -> [f64; 3] {
    let n = d.iter().map(|c| c * c).sum::<f64>().sqrt();
    d.map(|c| c / n)
}

pub fn evaluator(cfg: &RunConfig) -> Result<SusceptibilityEvaluator, CliError> {
    let e = SusceptibilityEvaluator::new(cfg.medium.coupling_model());
    if cfg.boost == [0.0; 3] {
        Ok(e)
    } else {
        e.boosted(cfg.boost).map_err(runtime)
    }
}

fn window(cfg: &RunConfig) -> Result<RootWindow, CliError> {
    let w = cfg.sweep.window;
    RootWindow::new(w[0], w[1], w[2], w[3]).map_err(runtime)
}

fn write_table(dir: &Path, name: &str, header: &str, rows: &[String]) -> Result<(PathBuf, usize), CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
    let path = dir.join(name);
    let mut text = String::with_capacity(64 * (rows.len() + 1));
    text.push_str(header);
    text.push('\n');
    for r in rows {
        text.push_str(r);
        text.push('\n');
    }
    fs::write(&path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    Ok((path, rows.len()))
}

pub fn run(cmd: Command, cfg: &RunConfig, opts: &RunOptions) -> Result<Outcome, CliError> {
    let dir = Path::new(&cfg.output.dir);
    match cmd {
        Command::Chi => chi(cfg, dir),
        Command::Dispersion => dispersion(cfg, dir),
        Command::Green => green(cfg, dir),
        Command::Verify => verify(cfg, dir, opts),
        Command::BoostScan => boost_scan(cfg, dir),
    }
}

fn chi(cfg: &RunConfig, dir: &Path) -> Result<Outcome, CliError> {
    let e = evaluator(cfg)?;
    let d = unit(cfg.sweep.directions[0]);
    let k = cfg.sweep.k;
    let blocks: Vec<Vec<String>> = cfg
        .sweep
        .q4
        .values()
        .par_iter()
        .map(|&q4| {
            let chi = e.chi_momentum(&FourVector::new(k * d[0], k * d[1], k * d[2], q4));
            let mut rows = Vec::with_capacity(36);
            for i in 0..6 {
                for j in 0..6 {
                    let v = chi.0[i][j];
                    rows.push(format!("{},{i},{j},{},{}", num(q4), num(v.re), num(v.im)));
                }
            }
            rows
        })
        .collect();
    let rows: Vec<String> = blocks.into_iter().flatten().collect();
    let file = write_table(dir, "chi.csv", "q4,pair_i,pair_j,re,im", &rows)?;
    Ok(Outcome { files: vec![file], failures: Vec::new() })
}

fn dispersion(cfg: &RunConfig, dir: &Path) -> Result<Outcome, CliError> {
    let e = evaluator(cfg)?;
    let w = window(cfg)?;
    let opts = RootSearchOptions::default();
    let tasks: Vec<([f64; 3], f64)> = cfg
        .sweep
        .directions
        .iter()
        .flat_map(|d| cfg.sweep.q4.values().into_iter().map(move |q4| (unit(*d), q4)))
        .collect();
    let blocks: Vec<Vec<String>> = tasks
        .par_iter()
        .map(|&(d, q4)| {
            let roots = dispersion_roots(&e, d, q4, &w, &opts).map_err(runtime)?;
            Ok(roots
                .iter()
                .map(|r| {
                    format!(
                        "{},{},{},{},{},{},{},{}",
                        num(d[0]),
                        num(d[1]),
                        num(d[2]),
                        num(q4),
                        num(r.n.re),
                        num(r.n.im),
                        r.multiplicity,
                        r.class.as_str()
                    )
                })
                .collect())
        })
        .collect::<Result<_, CliError>>()?;
    let rows: Vec<String> = blocks.into_iter().flatten().collect();
    let file = write_table(dir, "dispersion.csv", "dx,dy,dz,q4,re_n,im_n,multiplicity,class", &rows)?;
    Ok(Outcome { files: vec![file], failures: Vec::new() })
}

fn green(cfg: &RunConfig, dir: &Path) -> Result<Outcome, CliError> {
    let s = &cfg.sweep;
    let (times, radii) = (s.times.values(), s.radii.values());
    let mut position = Vec::new();
    let mut time = Vec::new();
    for &omega in &s.green_omega {
        let spec = GreenSpec::new(omega, 1e-12).map_err(runtime)?;
        for &t in &times {
            for &r in &radii {
                let g = green_tail(omega, &FourVector::new(r, 0.0, 0.0, t));
                position.push(format!("{},{},{},{}", num(omega), num(t), num(r), num(g)));
            }
            let (g, dg) = (spec.green_time_kernel(s.k, t), spec.green_time_kernel_dt(s.k, t));
            time.push(format!("{},{},{},{},{}", num(omega), num(s.k), num(t), num(g), num(dg)));
        }
    }
    let files = vec![
        write_table(dir, "green_position.csv", "omega,t,r,regular", &position)?,
        write_table(dir, "green_time.csv", "omega,k,t,kernel,kernel_dt", &time)?,
    ];
    Ok(Outcome { files, failures: Vec::new() })
}

struct Check {
    name: &'static str,
    pass: bool,
    detail: String,
}

fn max_rel(a: &PairTensor, b: &PairTensor) -> f64 {
    let diff = a.max_abs_diff(b);
    if diff == 0.0 {
        0.0
    } else {
        diff / a.max_abs().max(b.max_abs())
    }
}

fn check_completeness(rng: &mut ChaCha8Rng) -> Result<Check, CliError> {
    let mut worst: f64 = 0.0;
    for _ in 0..200 {
        let d = random_direction(rng);
        let t = build_tetrad(d).map_err(runtime)?;
        worst = worst.max(t.orthonormality_residual()).max(t.completeness_residual());
    }
    let tol = 1e-14;
    Ok(Check {
        name: "completeness",
        pass: worst <= tol,
        detail: format!("max tetrad residual {worst:.3e} over 200 directions (tol {tol:.0e})"),
    })
}

fn random_direction(rng: &mut ChaCha8Rng) -> [f64; 3] {
    loop {
        let v: [f64; 3] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
        let n = v.iter().map(|c| c * c).sum::<f64>().sqrt();
        if n > 0.1 && n <= 1.0 {
            return v.map(|c| c / n);
        }
    }
}

fn check_causality(e: &SusceptibilityEvaluator, rng: &mut ChaCha8Rng) -> Check {
    let origin = FourVector::default();
    let mut outside = 0;
    let mut nonzero = 0;
    while outside < 200 {
        let x = FourVector(std::array::from_fn(|_| rng.gen_range(-3.0..3.0)));
        if x.time() > 0.0 && x.square() > 0.0 {
            continue;
        }
        outside += 1;
        if !e.chi_spacetime(&x, &origin).is_zero() {
            nonzero += 1;
        }
    }
    Check {
        name: "causality",
        pass: nonzero == 0,
        detail: format!("{nonzero} of {outside} past or spacelike separations give nonzero chi"),
    }
}

fn check_gauge(e: &SusceptibilityEvaluator, rng: &mut ChaCha8Rng) -> Check {
    let mut worst: f64 = 0.0;
    for _ in 0..200 {
        let q = FourVector(std::array::from_fn(|_| rng.gen_range(-2.0..2.0)));
        let l = assemble_l(e, &q.to_complex());
        let qn = q.0.iter().map(|c| c * c).sum::<f64>().sqrt();
        let scale = l.norm().max(1.0) * qn;
        for i in 0..4 {
            let lq: Complex64 = (0..4).map(|j| l[(i, j)] * q[j]).sum();
            worst = worst.max((lq + q.square() * q[i] * METRIC[i]).norm() / scale);
        }
    }
    let tol = 1e-12;
    Check {
        name: "gauge-identity",
        pass: worst <= tol,
        detail: format!("max |L q + (q.q) q| / (|L| |q|) = {worst:.3e} over 200 wavevectors (tol {tol:.0e})"),
    }
}

fn check_boosts(e: &SusceptibilityEvaluator, rng: &mut ChaCha8Rng) -> Result<Check, CliError> {
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let d = random_direction(rng);
        let (a, b) = (rng.gen_range(0.0..0.5), rng.gen_range(0.0..0.5));
        let q = FourVector(std::array::from_fn(|_| rng.gen_range(-2.0..2.0)));
        let there_and_back = e.boosted(d.map(|c| a * c)).and_then(|m| m.boosted(d.map(|c| -a * c)));
        let twice = e.boosted(d.map(|c| a * c)).and_then(|m| m.boosted(d.map(|c| b * c)));
        let once = e.boosted(d.map(|c| c * (a + b) / (1.0 + a * b)));
        let base = e.chi_momentum(&q);
        worst = worst.max(max_rel(&there_and_back.map_err(runtime)?.chi_momentum(&q), &base));
        worst = worst.max(max_rel(&twice.map_err(runtime)?.chi_momentum(&q), &once.map_err(runtime)?.chi_momentum(&q)));
    }
    let tol = 1e-10;
    Ok(Check {
        name: "boost-covariance",
        pass: worst <= tol,
        detail: format!("max relative deviation {worst:.3e} over 50 inverse and collinear boost pairs (tol {tol:.0e})"),
    })
}

fn check_commutator(e: &SusceptibilityEvaluator, cfg: &RunConfig) -> Result<Check, CliError> {
    let grid = ModeGrid::new(e, cfg.sweep.k_max).map_err(runtime)?;
    let points: Vec<FourVector> = [1.0, 1.5, 2.0]
        .iter()
        .flat_map(|&t| [0.0, 0.25, 0.5].map(|z| FourVector::new(0.0, 0.0, z, t)))
        .collect();
    let origin = FourVector::default();
    let results: Vec<(PairTensor, PairTensor, f64, bool)> = points
        .par_iter()
        .map(|x| {
            let m = commutator_kn_modesum(e, &grid, x, &origin).map_err(runtime)?;
            Ok((m.value, commutator_kn_reference(e, x, &origin), m.tail_estimate, m.warning.is_some()))
        })
        .collect::<Result<_, CliError>>()?;
    let scale = results.iter().map(|r| r.1.max_abs()).fold(0.0, f64::max);
    let diff = results.iter().map(|r| r.0.max_abs_diff(&r.1)).fold(0.0, f64::max);
    let tail = results.iter().map(|r| r.2).fold(0.0, f64::max);
    let warnings = results.iter().filter(|r| r.3).count();
    let measured = if scale > 0.0 { diff / scale } else { diff };
    let tol = cfg.output.tolerance;
    Ok(Check {
        name: "commutator",
        pass: measured <= tol,
        detail: format!(
            "mode sum vs (i/pi) chi: relative Linf {measured:.3e} over 9 points (tol {tol:.0e}); \
             k_max {}, tail estimate {:.3e}, {warnings} truncation warnings",
            grid.k_max,
            if scale > 0.0 { tail / scale } else { tail }
        ),
    })
}

fn chi_is_zero(e: &SusceptibilityEvaluator) -> bool {
    let qs = [FourVector::new(0.0, 0.0, 0.0, 1.0), FourVector::new(0.3, -0.2, 0.5, 0.7)];
    let xs = [FourVector::new(0.0, 0.0, 0.5, 2.0), FourVector::new(0.2, 0.1, 0.0, 1.0)];
    qs.iter().all(|q| e.chi_momentum(q).is_zero())
        && xs.iter().all(|x| e.chi_spacetime(x, &FourVector::default()).is_zero())
}

fn verify(cfg: &RunConfig, dir: &Path, opts: &RunOptions) -> Result<Outcome, CliError> {
    let e = evaluator(cfg)?;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let checks = vec![
        check_commutator(&e, cfg)?,
        check_completeness(&mut rng)?,
        check_causality(&e, &mut rng),
        check_boosts(&e, &mut rng)?,
        check_gauge(&e, &mut rng),
    ];
    let b = cfg.boost;
    let mut rows = vec![
        format!("medium: {}; boost: {} {} {}; seed: {}", cfg.medium.name(), b[0], b[1], b[2], opts.seed),
        format!("chi identically zero: {}", if chi_is_zero(&e) { "yes" } else { "no" }),
    ];
    let mut failures = Vec::new();
    for c in &checks {
        rows.push(format!("{} {}: {}", if c.pass { "PASS" } else { "FAIL" }, c.name, c.detail));
        if !c.pass {
            failures.push(c.name.to_string());
        }
    }
    rows.push(format!("overall: {}", if failures.is_empty() { "PASS" } else { "FAIL" }));
    let header = rows.remove(0);
    let file = write_table(dir, "verify.txt", &header, &rows)?;
    Ok(Outcome { files: vec![file], failures })
}

fn boost_scan(cfg: &RunConfig, dir: &Path) -> Result<Outcome, CliError> {
    // always starts from the medium's own rest frame; [boost] is not applied
    let rest = SusceptibilityEvaluator::new(cfg.medium.coupling_model());
    let d = unit(cfg.sweep.directions[0]);
    let w = window(cfg)?;
    let opts = RootSearchOptions::default();
    let mut tasks = Vec::new();
    for q40 in cfg.sweep.q4.values() {
        let roots = dispersion_roots(&rest, d, q40, &w, &opts).map_err(runtime)?;
        let branches: Vec<f64> = roots
            .iter()
            .filter(|r| r.class == RootClass::Physical && r.n.im.abs() <= 1e-9 * r.n.norm().max(1.0))
            .map(|r| r.n.re)
            .collect();
        if branches.is_empty() {
            return Err(CliError::Runtime(format!("no transparent physical root in the window at q4 = {q40}")));
        }
        for (b, n0) in branches.into_iter().enumerate() {
            for &v in &cfg.sweep.speeds {
                tasks.push((b, q40, n0, v));
            }
        }
    }
    let rows: Vec<String> = tasks
        .par_iter()
        .map(|&(b, q40, n0, v)| {
            let gamma = 1.0 / (1.0 - v * v).sqrt();
            let q4 = gamma * q40 * (1.0 + v * n0);
            let u0 = 1.0 / n0;
            let predicted = (1.0 + u0 * v) / (u0 + v);
            let moving = rest.boosted(d.map(|c| v * c)).map_err(runtime)?;
            let roots = dispersion_roots(&moving, d, q4, &w, &opts).map_err(runtime)?;
            let best = roots
                .iter()
                .min_by(|x, y| (x.n.re - predicted).abs().total_cmp(&(y.n.re - predicted).abs()))
                .ok_or_else(|| CliError::Runtime(format!("no root in the window at v = {v}, q4 = {q4}")))?;
            Ok(format!(
                "{b},{},{},{},{},{},{}",
                num(q40),
                num(v),
                num(q4),
                num(best.n.re),
                num(best.n.im),
                num(predicted)
            ))
        })
        .collect::<Result<_, CliError>>()?;
    let file = write_table(dir, "boost_scan.csv", "branch,q4_rest,v,q4,re_n,im_n,re_n_predicted", &rows)?;
    Ok(Outcome { files: vec![file], failures: Vec::new() })
}
