//! Line-oriented run configuration.
//!
//! ```text
//! # comment
//! [medium]
//! model = isotropic_lorentzian
//! c0 = 0.1
//! omega0 = 1.0
//! gamma = 0.1
//!
//! [boost]
//! v = 0.3 0 0
//!
//! [sweep]
//! q4 = 0.5 1.5 11
//! directions = 0 0 1; 1 0 0
//!
//! [output]
//! dir = out
//! ```
//!
//! Every key belongs to exactly one section; unknown keys, keys that the
//! selected model does not use, and repeated keys are errors.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

use covar_medium::coupling::{electric_projector, magnetic_projector, CouplingModel, TabulatedCoupling};
use covar_medium::{FourVector, LorentzianProfile, PairTensor};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError {
    pub line: Option<usize>,
    pub message: String,
}

impl ConfigError {
    fn at(line: usize, message: impl Into<String>) -> Self {
        Self { line: Some(line), message: message.into() }
    }

    fn field(name: &str, message: impl fmt::Display) -> Self {
        Self { line: None, message: format!("{name}: {message}") }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self { line: Some(n), message } => write!(f, "line {n}: {message}"),
            Self { line: None, message } => f.write_str(message),
        }
    }
}

impl std::error::Error for ConfigError {}

/// Which fixed tensor shape a tabulated coupling is scaled by.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Projector {
    Identity,
    Electric,
    Magnetic,
}

impl Projector {
    fn as_str(&self) -> &'static str {
        match self {
            Self::Identity => "identity",
            Self::Electric => "electric",
            Self::Magnetic => "magnetic",
        }
    }

    fn tensor(&self) -> PairTensor {
        let u = FourVector::rest_velocity();
        match self {
            Self::Identity => PairTensor::identity(),
            Self::Electric => electric_projector(&u),
            Self::Magnetic => magnetic_projector(&u),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum MediumSpec {
    Vacuum,
    IsotropicLorentzian(LorentzianProfile),
    /// Electric and magnetic lines in the frame moving with `velocity`.
    EmSplit { electric: LorentzianProfile, magnetic: LorentzianProfile, velocity: [f64; 3] },
    /// `f(ω) = g(ω) P` with `g` linearly interpolated between samples.
    Tabulated { projector: Projector, omega: Vec<f64>, g: Vec<f64> },
}

impl MediumSpec {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Vacuum => "vacuum",
            Self::IsotropicLorentzian(_) => "isotropic_lorentzian",
            Self::EmSplit { .. } => "em_split",
            Self::Tabulated { .. } => "tabulated",
        }
    }

    pub fn coupling_model(&self) -> CouplingModel {
        match self {
            Self::Vacuum => CouplingModel::Vacuum,
            Self::IsotropicLorentzian(p) => CouplingModel::IsotropicLorentzian(*p),
            Self::EmSplit { electric, magnetic, velocity } => {
                CouplingModel::em_split(*electric, *magnetic, four_velocity(*velocity))
                    .expect("velocity validated at parse time")
            }
            Self::Tabulated { projector, omega, g } => {
                let p = projector.tensor();
                let samples = omega.iter().zip(g).map(|(w, g)| (*w, p.scale(*g))).collect();
                CouplingModel::Tabulated(TabulatedCoupling::new(samples).expect("samples validated at parse time"))
            }
        }
    }
}

fn four_velocity(v: [f64; 3]) -> FourVector {
    let gamma = 1.0 / (1.0 - v.iter().map(|c| c * c).sum::<f64>()).sqrt();
    FourVector::new(gamma * v[0], gamma * v[1], gamma * v[2], gamma)
}

/// `count` evenly spaced values from `start` to `stop` inclusive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Linspace {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl Linspace {
    pub fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.start];
        }
        let step = (self.stop - self.start) / (self.count - 1) as f64;
        (0..self.count).map(|i| if i + 1 == self.count { self.stop } else { self.start + step * i as f64 }).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    /// Frequencies `q⁴`; rest-frame frequencies for `boost-scan`.
    pub q4: Linspace,
    /// Wavevector magnitude along the first direction for `chi`, and the `k`
    /// of the `green` time-kernel table.
    pub k: f64,
    pub directions: Vec<[f64; 3]>,
    /// `re_min re_max im_min im_max` of the refractive-index search window.
    pub window: [f64; 4],
    pub speeds: Vec<f64>,
    pub k_max: f64,
    pub green_omega: Vec<f64>,
    pub times: Linspace,
    pub radii: Linspace,
}

impl Default for SweepSpec {
    fn default() -> Self {
        Self {
            q4: Linspace { start: 0.5, stop: 0.5, count: 1 },
            k: 0.0,
            directions: vec![[0.0, 0.0, 1.0]],
            window: [1.001, 3.0, -0.5, 0.5],
            speeds: vec![0.0, 0.1, 0.2],
            k_max: 50.0,
            green_omega: vec![1.0],
            times: Linspace { start: 0.5, stop: 3.0, count: 6 },
            radii: Linspace { start: 0.0, stop: 2.0, count: 5 },
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutputSpec {
    pub dir: String,
    /// Relative tolerance of the mode-sum commutator check in `verify`.
    pub tolerance: f64,
}

impl Default for OutputSpec {
    fn default() -> Self {
        Self { dir: ".".into(), tolerance: 1e-2 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub medium: MediumSpec,
    pub boost: [f64; 3],
    pub sweep: SweepSpec,
    pub output: OutputSpec,
}

struct Entry {
    line: usize,
    value: String,
    used: bool,
}

/// Keys of one section, consumed as they are interpreted.
struct Section {
    header_line: usize,
    entries: BTreeMap<String, Entry>,
}

impl Section {
    fn take(&mut self, key: &str) -> Option<(usize, String)> {
        self.entries.get_mut(key).map(|e| {
            e.used = true;
            (e.line, e.value.clone())
        })
    }

    fn finish(self, name: &str, context: &str) -> Result<(), ConfigError> {
        match self.entries.iter().filter(|(_, e)| !e.used).min_by_key(|(_, e)| e.line) {
            Some((k, e)) => Err(ConfigError::at(e.line, format!("unknown key `{k}` in [{name}]{context}"))),
            None => Ok(()),
        }
    }
}

const SECTIONS: [&str; 4] = ["medium", "boost", "sweep", "output"];

fn split_sections(text: &str) -> Result<BTreeMap<String, Section>, ConfigError> {
    let mut sections: BTreeMap<String, Section> = BTreeMap::new();
    let mut current: Option<String> = None;
    for (i, raw) in text.lines().enumerate() {
        let n = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('[') {
            let name = rest
                .strip_suffix(']')
                .ok_or_else(|| ConfigError::at(n, format!("malformed section header `{line}`")))?
                .trim();
            if !SECTIONS.contains(&name) {
                return Err(ConfigError::at(n, format!("unknown section [{name}]")));
            }
            if sections.contains_key(name) {
                return Err(ConfigError::at(n, format!("repeated section [{name}]")));
            }
            sections.insert(name.to_string(), Section { header_line: n, entries: BTreeMap::new() });
            current = Some(name.to_string());
            continue;
        }
        let (key, value) =
            line.split_once('=').ok_or_else(|| ConfigError::at(n, format!("expected `key = value`, got `{line}`")))?;
        let (key, value) = (key.trim(), value.trim());
        if key.is_empty() || key.contains(char::is_whitespace) {
            return Err(ConfigError::at(n, format!("invalid key `{key}`")));
        }
        let name = current.as_ref().ok_or_else(|| ConfigError::at(n, "key outside of any section"))?;
        let section = sections.get_mut(name).expect("current section exists");
        if section.entries.contains_key(key) {
            return Err(ConfigError::at(n, format!("repeated key `{key}` in [{name}]")));
        }
        section.entries.insert(key.to_string(), Entry { line: n, value: value.to_string(), used: false });
    }
    Ok(sections)
}

fn parse_f64(line: usize, key: &str, s: &str) -> Result<f64, ConfigError> {
    match s.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(ConfigError::at(line, format!("{key}: expected a finite number, got `{s}`"))),
    }
}

fn parse_list(line: usize, key: &str, s: &str) -> Result<Vec<f64>, ConfigError> {
    s.split_whitespace().map(|t| parse_f64(line, key, t)).collect()
}

fn parse_array<const N: usize>(line: usize, key: &str, s: &str) -> Result<[f64; N], ConfigError> {
    let v = parse_list(line, key, s)?;
    v.try_into().map_err(|v: Vec<f64>| ConfigError::at(line, format!("{key}: expected {N} numbers, got {}", v.len())))
}

fn parse_linspace(line: usize, key: &str, s: &str) -> Result<Linspace, ConfigError> {
    let parts: Vec<&str> = s.split_whitespace().collect();
    let bad = || ConfigError::at(line, format!("{key}: expected `start stop count`, got `{s}`"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let start = parse_f64(line, key, parts[0])?;
    let stop = parse_f64(line, key, parts[1])?;
    let count: usize = parts[2].parse().map_err(|_| bad())?;
    if count == 0 {
        return Err(ConfigError::at(line, format!("{key}: count must be >= 1")));
    }
    if stop < start || (count == 1 && stop != start) {
        return Err(ConfigError::at(line, format!("{key}: need start <= stop, and start = stop for one point")));
    }
    Ok(Linspace { start, stop, count })
}

fn check_velocity(line: usize, key: &str, v: [f64; 3]) -> Result<(), ConfigError> {
    let speed = v.iter().map(|c| c * c).sum::<f64>().sqrt();
    if speed >= 1.0 {
        return Err(ConfigError::at(line, format!("{key}: speed must be < 1, got {speed}")));
    }
    Ok(())
}

fn lorentzian(sec: &mut Section, prefix: &str) -> Result<LorentzianProfile, ConfigError> {
    let mut get = |name: &str| -> Result<(usize, f64), ConfigError> {
        let key = format!("{prefix}{name}");
        let (line, v) = sec
            .take(&key)
            .ok_or_else(|| ConfigError::at(sec.header_line, format!("[medium] is missing `{key}`")))?;
        Ok((line, parse_f64(line, &key, &v)?))
    };
    let (_, c0) = get("c0")?;
    let (line, omega0) = get("omega0")?;
    let (_, gamma) = get("gamma")?;
    LorentzianProfile::new(c0, omega0, gamma)
        .map_err(|e| ConfigError::at(line, format!("medium.{prefix}: {e}")))
}

fn parse_medium(mut sec: Section) -> Result<MediumSpec, ConfigError> {
    let (line, model) =
        sec.take("model").ok_or_else(|| ConfigError::at(sec.header_line, "[medium] is missing `model`"))?;
    let medium = match model.as_str() {
        "vacuum" => MediumSpec::Vacuum,
        "isotropic_lorentzian" => MediumSpec::IsotropicLorentzian(lorentzian(&mut sec, "")?),
        "em_split" => {
            let electric = lorentzian(&mut sec, "electric_")?;
            let magnetic = lorentzian(&mut sec, "magnetic_")?;
            let velocity = match sec.take("velocity") {
                Some((l, v)) => {
                    let v = parse_array::<3>(l, "velocity", &v)?;
                    check_velocity(l, "medium.velocity", v)?;
                    v
                }
                None => [0.0; 3],
            };
            MediumSpec::EmSplit { electric, magnetic, velocity }
        }
        "tabulated" => {
            let projector = match sec.take("projector") {
                None => Projector::Identity,
                Some((l, p)) => match p.as_str() {
                    "identity" => Projector::Identity,
                    "electric" => Projector::Electric,
                    "magnetic" => Projector::Magnetic,
                    other => return Err(ConfigError::at(l, format!("projector: unknown value `{other}`"))),
                },
            };
            let (lw, w) = sec.take("omega").ok_or_else(|| ConfigError::at(sec.header_line, "[medium] is missing `omega`"))?;
            let (lg, g) = sec.take("g").ok_or_else(|| ConfigError::at(sec.header_line, "[medium] is missing `g`"))?;
            let omega = parse_list(lw, "omega", &w)?;
            let g = parse_list(lg, "g", &g)?;
            if omega.len() != g.len() {
                return Err(ConfigError::at(lg, format!("g: {} values for {} frequencies", g.len(), omega.len())));
            }
            let samples = omega.iter().map(|w| (*w, PairTensor::zero())).collect();
            TabulatedCoupling::new(samples).map_err(|e| ConfigError::at(lw, format!("medium.omega: {e}")))?;
            MediumSpec::Tabulated { projector, omega, g }
        }
        other => return Err(ConfigError::at(line, format!("model: unknown value `{other}`"))),
    };
    sec.finish("medium", &format!(" for model {}", medium.name()))?;
    Ok(medium)
}

fn parse_sweep(mut sec: Section) -> Result<SweepSpec, ConfigError> {
    let mut s = SweepSpec::default();
    if let Some((l, v)) = sec.take("q4") {
        s.q4 = parse_linspace(l, "q4", &v)?;
        if s.q4.start <= 0.0 {
            return Err(ConfigError::at(l, "sweep.q4: frequencies must be > 0"));
        }
    }
    if let Some((l, v)) = sec.take("k") {
        s.k = parse_f64(l, "k", &v)?;
        if s.k < 0.0 {
            return Err(ConfigError::at(l, "sweep.k: must be >= 0"));
        }
    }
    if let Some((l, v)) = sec.take("directions") {
        s.directions = v.split(';').map(|d| parse_array::<3>(l, "directions", d)).collect::<Result<_, _>>()?;
        if s.directions.iter().any(|d| d.iter().all(|c| *c == 0.0)) {
            return Err(ConfigError::at(l, "sweep.directions: zero vector"));
        }
    }
    if let Some((l, v)) = sec.take("window") {
        s.window = parse_array::<4>(l, "window", &v)?;
        let w = s.window;
        if !(w[0] < w[1] && w[2] < w[3]) {
            return Err(ConfigError::at(l, "sweep.window: need re_min < re_max and im_min < im_max"));
        }
    }
    if let Some((l, v)) = sec.take("speeds") {
        s.speeds = parse_list(l, "speeds", &v)?;
        if s.speeds.is_empty() || s.speeds.iter().any(|v| !(0.0..1.0).contains(v)) {
            return Err(ConfigError::at(l, "sweep.speeds: need one or more speeds in [0, 1)"));
        }
    }
    if let Some((l, v)) = sec.take("k_max") {
        s.k_max = parse_f64(l, "k_max", &v)?;
        if s.k_max <= 0.0 {
            return Err(ConfigError::at(l, "sweep.k_max: must be > 0"));
        }
    }
    if let Some((l, v)) = sec.take("green_omega") {
        s.green_omega = parse_list(l, "green_omega", &v)?;
        if s.green_omega.is_empty() || s.green_omega.iter().any(|w| *w < 0.0) {
            return Err(ConfigError::at(l, "sweep.green_omega: need one or more values >= 0"));
        }
    }
    if let Some((l, v)) = sec.take("times") {
        s.times = parse_linspace(l, "times", &v)?;
    }
    if let Some((l, v)) = sec.take("radii") {
        s.radii = parse_linspace(l, "radii", &v)?;
        if s.radii.start < 0.0 {
            return Err(ConfigError::at(l, "sweep.radii: must be >= 0"));
        }
    }
    sec.finish("sweep", "")?;
    Ok(s)
}

fn parse_output(mut sec: Section) -> Result<OutputSpec, ConfigError> {
    let mut o = OutputSpec::default();
    if let Some((l, v)) = sec.take("dir") {
        if v.is_empty() {
            return Err(ConfigError::at(l, "output.dir: empty path"));
        }
        o.dir = v;
    }
    if let Some((l, v)) = sec.take("tolerance") {
        o.tolerance = parse_f64(l, "tolerance", &v)?;
        if o.tolerance <= 0.0 {
            return Err(ConfigError::at(l, "output.tolerance: must be > 0"));
        }
    }
    sec.finish("output", "")?;
    Ok(o)
}

pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let mut sections = split_sections(text)?;
    let medium = sections.remove("medium").ok_or_else(|| ConfigError::field("missing section", "medium"))?;
    let medium = parse_medium(medium)?;
    let boost = match sections.remove("boost") {
        Some(mut sec) => {
            let v = match sec.take("v") {
                Some((l, v)) => {
                    let v = parse_array::<3>(l, "v", &v)?;
                    check_velocity(l, "boost.v", v)?;
                    v
                }
                None => [0.0; 3],
            };
            sec.finish("boost", "")?;
            v
        }
        None => [0.0; 3],
    };
    let sweep = sections.remove("sweep").map(parse_sweep).transpose()?.unwrap_or_default();
    let output = sections.remove("output").map(parse_output).transpose()?.unwrap_or_default();
    Ok(RunConfig { medium, boost, sweep, output })
}

fn join(v: &[f64]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

fn linspace(l: &Linspace) -> String {
    format!("{} {} {}", l.start, l.stop, l.count)
}

impl fmt::Display for RunConfig {
    /// Canonical form with every key spelled out; parses back to `self`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        writeln!(s, "[medium]")?;
        writeln!(s, "model = {}", self.medium.name())?;
        let line = |s: &mut String, prefix: &str, p: &LorentzianProfile| -> fmt::Result {
            writeln!(s, "{prefix}c0 = {}", p.strength)?;
            writeln!(s, "{prefix}omega0 = {}", p.resonance)?;
            writeln!(s, "{prefix}gamma = {}", p.width)
        };
        match &self.medium {
            MediumSpec::Vacuum => {}
            MediumSpec::IsotropicLorentzian(p) => line(&mut s, "", p)?,
            MediumSpec::EmSplit { electric, magnetic, velocity } => {
                line(&mut s, "electric_", electric)?;
                line(&mut s, "magnetic_", magnetic)?;
                writeln!(s, "velocity = {}", join(velocity))?;
            }
            MediumSpec::Tabulated { projector, omega, g } => {
                writeln!(s, "projector = {}", projector.as_str())?;
                writeln!(s, "omega = {}", join(omega))?;
                writeln!(s, "g = {}", join(g))?;
            }
        }
        writeln!(s, "\n[boost]\nv = {}", join(&self.boost))?;
        let w = &self.sweep;
        writeln!(s, "\n[sweep]")?;
        writeln!(s, "q4 = {}", linspace(&w.q4))?;
        writeln!(s, "k = {}", w.k)?;
        let dirs: Vec<String> = w.directions.iter().map(|d| join(d)).collect();
        writeln!(s, "directions = {}", dirs.join("; "))?;
        writeln!(s, "window = {}", join(&w.window))?;
        writeln!(s, "speeds = {}", join(&w.speeds))?;
        writeln!(s, "k_max = {}", w.k_max)?;
        writeln!(s, "green_omega = {}", join(&w.green_omega))?;
        writeln!(s, "times = {}", linspace(&w.times))?;
        writeln!(s, "radii = {}", linspace(&w.radii))?;
        writeln!(s, "\n[output]\ndir = {}\ntolerance = {}", self.output.dir, self.output.tolerance)?;
        f.write_str(&s)
    }
}
