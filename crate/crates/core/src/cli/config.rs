//! Run configuration in a flat `section.key = value` grammar.
//!
//! ```text
//! # comment
//! material.rho = 1.0
//! material.mu = 1.0
//! material.nu = 0.25            # or material.lambda
//! source.kind = 3d-point        # 3d-point | 2d-inplane | 2d-antiplane
//! trajectory.preset = uniform
//! trajectory.position = 0, 0, 0
//! trajectory.velocity = 0.3, 0, 0
//! force.preset = ramp
//! force.q = 0, 0, 1
//! force.t_on = 0
//! force.rise = 0.5
//! grid.x1 = -2, 2, 41           # start, end, count
//! grid.t = 1, 3, 3
//! ```
//!
//! Lengths, times and densities are in any consistent unit system.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::kinematics::{ForceProfile, Trajectory};
use crate::lineforce2d::Plane;
use crate::material::Material;
use crate::options::Tolerances;
use crate::Vec3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SourceKind {
    Point3d,
    InPlane2d,
    AntiPlane2d,
}

impl SourceKind {
    pub fn plane(self) -> Option<Plane> {
        match self {
            SourceKind::Point3d => None,
            SourceKind::InPlane2d => Some(Plane::InPlane),
            SourceKind::AntiPlane2d => Some(Plane::AntiPlane),
        }
    }
}

impl FromStr for SourceKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "3d-point" => Ok(SourceKind::Point3d),
            "2d-inplane" => Ok(SourceKind::InPlane2d),
            "2d-antiplane" => Ok(SourceKind::AntiPlane2d),
            _ => Err(format!("expected 3d-point, 2d-inplane or 2d-antiplane, got `{s}`")),
        }
    }
}

impl fmt::Display for SourceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SourceKind::Point3d => "3d-point",
            SourceKind::InPlane2d => "2d-inplane",
            SourceKind::AntiPlane2d => "2d-antiplane",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(format!("expected csv or json, got `{s}`")),
        }
    }
}

/// Evenly spaced samples `start, end, count`; a single sample sits at `start`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    pub start: f64,
    pub end: f64,
    pub count: usize,
}

impl Axis {
    pub fn point(v: f64) -> Self {
        Self { start: v, end: v, count: 1 }
    }

    pub fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.start];
        }
        let step = (self.end - self.start) / (self.count - 1) as f64;
        (0..self.count).map(|i| if i + 1 == self.count { self.end } else { self.start + step * i as f64 }).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub x1: Axis,
    pub x2: Axis,
    pub x3: Axis,
    pub t: Axis,
}

impl GridSpec {
    pub fn len(&self) -> usize {
        self.x1.count * self.x2.count * self.x3.count * self.t.count
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Events in time-major order, then x₁, x₂, x₃ lexicographically.
    pub fn events(&self) -> Vec<(Vec3, f64)> {
        let (a, b, c) = (self.x1.values(), self.x2.values(), self.x3.values());
        let mut out = Vec::with_capacity(self.len());
        for t in self.t.values() {
            for &x1 in &a {
                for &x2 in &b {
                    for &x3 in &c {
                        out.push((Vec3::new(x1, x2, x3), t));
                    }
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub material: Material,
    pub source: SourceKind,
    pub trajectory: Trajectory,
    pub force: ForceProfile,
    pub grid: GridSpec,
    pub tolerances: Tolerances,
    pub output: Option<PathBuf>,
    pub format: Format,
    pub seed: u64,
    /// SHA-256 of the configuration text, hex encoded.
    pub hash: String,
}

/// Built-in trajectory and force presets with their keys.
pub const PRESETS: &[(&str, &str, &str)] = &[
    ("trajectory", "static", "position"),
    ("trajectory", "uniform", "position, velocity"),
    ("trajectory", "oscillatory", "position, drift, amplitude, omega, phase"),
    ("trajectory", "accelerating", "position, t0, t1, velocity"),
    ("trajectory", "tabulated", "times, positions"),
    ("force", "constant", "q, t_on"),
    ("force", "harmonic", "mean, amplitude, omega, phase, t_on"),
    ("force", "ramp", "q, t_on, rise"),
    ("force", "pulse", "q, t_on, duration"),
    ("force", "polynomial", "coeffs, t_on"),
];

struct Entries {
    values: BTreeMap<String, (usize, String)>,
    used: BTreeSet<String>,
    errors: Vec<String>,
}

fn parse_f64(s: &str) -> Result<f64, String> {
    match s.trim() {
        "inf" | "+inf" => Ok(f64::INFINITY),
        "-inf" => Ok(f64::NEG_INFINITY),
        v => v.parse::<f64>().map_err(|_| format!("`{v}` is not a number")),
    }
}

fn parse_list(s: &str) -> Result<Vec<f64>, String> {
    s.split(',').map(parse_f64).collect()
}

fn parse_vec3(s: &str) -> Result<Vec3, String> {
    match parse_list(s)?.as_slice() {
        &[a, b, c] => Ok(Vec3::new(a, b, c)),
        v => Err(format!("expected 3 components, got {}", v.len())),
    }
}

fn parse_vec3_list(s: &str) -> Result<Vec<Vec3>, String> {
    s.split(';').map(parse_vec3).collect()
}

fn parse_axis(s: &str) -> Result<Axis, String> {
    let v = parse_list(s)?;
    let [start, end, count] = v.as_slice() else {
        return Err(format!("expected `start, end, count`, got {} values", v.len()));
    };
    if !(start.is_finite() && end.is_finite()) {
        return Err("axis bounds must be finite".into());
    }
    if !(*count >= 1.0 && count.fract() == 0.0) {
        return Err(format!("count must be a positive integer, got {count}"));
    }
    Ok(Axis { start: *start, end: *end, count: *count as usize })
}

impl Entries {
    fn parse(text: &str) -> Self {
        let mut e = Entries { values: BTreeMap::new(), used: BTreeSet::new(), errors: Vec::new() };
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let n = i + 1;
            let Some((k, v)) = line.split_once('=') else {
                e.errors.push(format!("line {n}: expected `section.key = value`"));
                continue;
            };
            let key = k.trim().to_string();
            if key.split('.').count() != 2 || key.split('.').any(str::is_empty) {
                e.errors.push(format!("line {n}: key `{key}` is not of the form section.key"));
                continue;
            }
            if let Some((first, _)) = e.values.get(&key) {
                e.errors.push(format!("line {n}: `{key}` already set on line {first}"));
                continue;
            }
            e.values.insert(key, (n, v.trim().to_string()));
        }
        e
    }

    fn has(&self, key: &str) -> bool {
        self.values.contains_key(key)
    }

    fn get<T>(&mut self, key: &str, parse: impl Fn(&str) -> Result<T, String>) -> Option<T> {
        let (line, raw) = self.values.get(key)?.clone();
        self.used.insert(key.to_string());
        match parse(&raw) {
            Ok(v) => Some(v),
            Err(msg) => {
                self.errors.push(format!("line {line}: {key}: {msg}"));
                None
            }
        }
    }

    fn or<T>(&mut self, key: &str, default: T, parse: impl Fn(&str) -> Result<T, String>) -> T {
        self.get(key, parse).unwrap_or(default)
    }

    fn require<T>(&mut self, key: &str, parse: impl Fn(&str) -> Result<T, String>) -> Option<T> {
        if !self.has(key) {
            self.errors.push(format!("missing `{key}`"));
            return None;
        }
        self.get(key, parse)
    }

    fn positive(&mut self, key: &str, default: f64) -> f64 {
        let v = self.or(key, default, parse_f64);
        if !(v > 0.0 && v.is_finite()) {
            self.errors.push(format!("{key} must be positive and finite, got {v}"));
        }
        v
    }

    fn finish(mut self) -> Vec<String> {
        for (k, (line, _)) in &self.values {
            if !self.used.contains(k) {
                self.errors.push(format!("line {line}: unknown or unused key `{k}`"));
            }
        }
        self.errors
    }
}

fn text(s: &str) -> Result<String, String> {
    Ok(s.to_string())
}

fn material(e: &mut Entries) -> Option<Material> {
    let rho = e.positive("material.rho", 1.0);
    let mu = e.positive("material.mu", 1.0);
    let m = match (e.has("material.lambda"), e.has("material.nu")) {
        (true, true) => {
            e.used.insert("material.nu".into());
            e.used.insert("material.lambda".into());
            e.errors.push("set either material.lambda or material.nu, not both".into());
            return None;
        }
        (_, true) => Material::from_poisson(rho, mu, e.get("material.nu", parse_f64)?),
        _ => Material::new(rho, e.or("material.lambda", 1.0, parse_f64), mu),
    };
    m.map_err(|err| e.errors.push(err.to_string())).ok()
}

fn trajectory(e: &mut Entries) -> Option<Trajectory> {
    let preset = e.or("trajectory.preset", "static".to_string(), text);
    let position = e.or("trajectory.position", Vec3::zeros(), parse_vec3);
    let traj = match preset.as_str() {
        "static" => Ok(Trajectory::stationary(position)),
        "uniform" => Ok(Trajectory::uniform(position, e.require("trajectory.velocity", parse_vec3)?)),
        "oscillatory" => Ok(Trajectory::oscillatory(
            position,
            e.or("trajectory.drift", Vec3::zeros(), parse_vec3),
            e.require("trajectory.amplitude", parse_vec3)?,
            e.require("trajectory.omega", parse_f64)?,
            e.or("trajectory.phase", 0.0, parse_f64),
        )),
        "accelerating" => Trajectory::accelerating(
            position,
            e.require("trajectory.t0", parse_f64)?,
            e.require("trajectory.t1", parse_f64)?,
            e.require("trajectory.velocity", parse_vec3)?,
        ),
        "tabulated" => {
            let times = e.require("trajectory.times", parse_list)?;
            let positions = e.require("trajectory.positions", parse_vec3_list)?;
            Trajectory::tabulated(times, positions)
        }
        other => {
            e.errors.push(format!("unknown trajectory preset `{other}`"));
            return None;
        }
    };
    let traj = match (traj, e.get("trajectory.vmax", parse_f64)) {
        (Ok(t), Some(v)) => t.with_declared_vmax(v),
        (t, _) => t,
    };
    traj.map_err(|err| e.errors.push(err.to_string())).ok()
}

fn force(e: &mut Entries, default_on: f64) -> Option<ForceProfile> {
    let preset = e.or("force.preset", "constant".to_string(), text);
    let t_on = |e: &mut Entries, d: f64| e.or("force.t_on", d, parse_f64);
    let prof = match preset.as_str() {
        "constant" => {
            let q = e.or("force.q", Vec3::z(), parse_vec3);
            ForceProfile::constant(q, t_on(e, default_on))
        }
        "harmonic" => ForceProfile::harmonic(
            e.or("force.mean", Vec3::zeros(), parse_vec3),
            e.require("force.amplitude", parse_vec3)?,
            e.require("force.omega", parse_f64)?,
            e.or("force.phase", 0.0, parse_f64),
            t_on(e, default_on),
        ),
        "ramp" => ForceProfile::ramp(
            e.or("force.q", Vec3::z(), parse_vec3),
            t_on(e, 0.0),
            e.require("force.rise", parse_f64)?,
        ),
        "pulse" => ForceProfile::pulse(
            e.or("force.q", Vec3::z(), parse_vec3),
            t_on(e, 0.0),
            e.require("force.duration", parse_f64)?,
        ),
        "polynomial" => ForceProfile::polynomial(e.require("force.coeffs", parse_vec3_list)?, t_on(e, 0.0)),
        other => {
            e.errors.push(format!("unknown force preset `{other}`"));
            return None;
        }
    };
    prof.map_err(|err| e.errors.push(err.to_string())).ok()
}

fn tolerances(e: &mut Entries) -> Tolerances {
    let d = Tolerances::default();
    let nodes = e.or("tolerances.nodes", d.nodes as f64, parse_f64);
    let panels = e.or("tolerances.max_panels", d.max_panels as f64, parse_f64);
    for (k, v) in [("tolerances.nodes", nodes), ("tolerances.max_panels", panels)] {
        if !(v >= 1.0 && v.fract() == 0.0 && v <= 1e7) {
            e.errors.push(format!("{k} must be a positive integer, got {v}"));
        }
    }
    Tolerances {
        retarded: e.positive("tolerances.retarded", d.retarded),
        kappa: e.positive("tolerances.kappa", d.kappa),
        history: e.positive("tolerances.history", d.history),
        length_scale: e.positive("tolerances.length_scale", d.length_scale),
        nodes: nodes.max(1.0) as usize,
        max_panels: panels.max(1.0) as usize,
    }
}

/// Parses and validates a configuration, reporting every violation at once.
pub fn parse_config(text_in: &str) -> Result<RunConfig> {
    let mut e = Entries::parse(text_in);
    let source = e.or("source.kind", SourceKind::Point3d, SourceKind::from_str);
    let mat = material(&mut e);
    let traj = trajectory(&mut e);
    let default_on = if source == SourceKind::Point3d { f64::NEG_INFINITY } else { 0.0 };
    let prof = force(&mut e, default_on);
    let grid = GridSpec {
        x1: e.or("grid.x1", Axis::point(0.0), parse_axis),
        x2: e.or("grid.x2", Axis::point(0.0), parse_axis),
        x3: e.or("grid.x3", Axis::point(1.0), parse_axis),
        t: e.or("grid.t", Axis::point(0.0), parse_axis),
    };
    let tolerances = tolerances(&mut e);
    let output = e.get("output.path", |s| Ok(PathBuf::from(s)));
    let format = e.or("output.format", Format::Csv, Format::from_str);
    let seed = e.or("run.seed", 0.0, parse_f64);
    if !(seed >= 0.0 && seed.fract() == 0.0 && seed < 2f64.powi(53)) {
        e.errors.push(format!("run.seed must be a non-negative integer, got {seed}"));
    }

    if let (Some(m), Some(t)) = (&mat, &traj) {
        if t.vmax() >= m.c_t {
            e.errors.push(Error::Supersonic { vmax: t.vmax(), speed: m.c_t }.to_string());
        }
    }
    if let Some(p) = &prof {
        if source != SourceKind::Point3d && !p.t_on().is_finite() {
            e.errors.push("finite switch-on required in 2D (force.t_on)".into());
        }
    }
    let errors = e.finish();
    if !errors.is_empty() {
        return Err(Error::Config(errors));
    }
    let hash = Sha256::digest(text_in.as_bytes()).iter().map(|b| format!("{b:02x}")).collect();
    Ok(RunConfig {
        material: mat.expect("no errors"),
        source,
        trajectory: traj.expect("no errors"),
        force: prof.expect("no errors"),
        grid,
        tolerances,
        output,
        format,
        seed: seed as u64,
        hash,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config_gets_defaults() {
        let c = parse_config("material.mu = 1\n").unwrap();
        assert_eq!(c.source, SourceKind::Point3d);
        assert!(c.trajectory.is_stationary());
        assert!(c.force.is_steady());
        assert_eq!(c.grid.events(), vec![(Vec3::new(0.0, 0.0, 1.0), 0.0)]);
        assert_eq!(c.format, Format::Csv);
        assert_eq!(c.hash.len(), 64);
    }

    #[test]
    fn supersonic_is_rejected() {
        let err = parse_config("trajectory.preset = uniform\ntrajectory.velocity = 1.2, 0, 0\n").unwrap_err();
        assert!(err.to_string().contains("supersonic trajectory"), "{err}");
    }

    #[test]
    fn infinite_history_rejected_in_2d() {
        let err = parse_config("source.kind = 2d-inplane\nforce.t_on = -inf\n").unwrap_err();
        assert!(err.to_string().contains("finite switch-on required in 2D"), "{err}");
    }

    #[test]
    fn all_violations_are_collected() {
        let text = "material.rho = -1\nbogus.key = 3\ngrid.t = 0, 1, 0\nforce.preset = pulse\nnot a line\n";
        let Err(Error::Config(v)) = parse_config(text) else { panic!("expected config error") };
        assert!(v.len() >= 5, "{v:?}");
        assert!(v.iter().any(|m| m.contains("bogus.key")));
        assert!(v.iter().any(|m| m.contains("force.duration")));
    }

    #[test]
    fn axis_values_hit_both_ends() {
        let a = Axis { start: -1.0, end: 1.0, count: 5 };
        assert_eq!(a.values(), vec![-1.0, -0.5, 0.0, 0.5, 1.0]);
        let g = GridSpec { x1: a, x2: Axis::point(0.0), x3: Axis { start: 0.0, end: 1.0, count: 2 }, t: Axis::point(2.0) };
        assert_eq!(g.events().len(), g.len());
        assert_eq!(g.events()[1].0, Vec3::new(-1.0, 0.0, 1.0));
    }
}
