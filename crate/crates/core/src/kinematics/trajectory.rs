//! Source worldlines s(t) with their velocity and acceleration.

use std::fmt;

use nalgebra::Rotation3;
use serde::{Deserialize, Serialize};

use super::spline::CubicSpline3;
use crate::error::{Error, Result};
use crate::{Mat3, Vec3};

/// Number of samples used to spot-check a declared maximum speed.
pub const VMAX_SAMPLES: usize = 10_000;

/// Position, velocity and acceleration of the source at one instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Motion {
    pub position: Vec3,
    pub velocity: Vec3,
    pub acceleration: Vec3,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TrajectoryKind {
    Static,
    Uniform,
    Oscillatory,
    PiecewisePolynomial,
    Tabulated,
}

impl fmt::Display for TrajectoryKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            TrajectoryKind::Static => "static",
            TrajectoryKind::Uniform => "uniform",
            TrajectoryKind::Oscillatory => "oscillatory",
            TrajectoryKind::PiecewisePolynomial => "piecewise-polynomial",
            TrajectoryKind::Tabulated => "tabulated",
        };
        f.write_str(s)
    }
}

/// Polynomial pieces in the local variable `t - breaks[i]`, continued by
/// uniform motion outside `[breaks[0], breaks[last]]`.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewisePath {
    breaks: Vec<f64>,
    coeffs: Vec<Vec<Vec3>>,
}

impl PiecewisePath {
    pub fn new(breaks: Vec<f64>, coeffs: Vec<Vec<Vec3>>) -> Result<Self> {
        if breaks.len() < 2 || coeffs.len() != breaks.len() - 1 {
            return Err(Error::InvalidSource("piecewise path needs n+1 breaks for n pieces".into()));
        }
        if breaks.windows(2).any(|w| !(w[1] > w[0])) || breaks.iter().any(|b| !b.is_finite()) {
            return Err(Error::InvalidSource("piecewise breaks must be finite and increasing".into()));
        }
        if coeffs.iter().any(|c| c.is_empty()) {
            return Err(Error::InvalidSource("empty polynomial piece".into()));
        }
        let path = Self { breaks, coeffs };
        // position and velocity must be continuous across interior breaks
        for i in 1..path.coeffs.len() {
            let h = path.breaks[i] - path.breaks[i - 1];
            let (sl, vl, _) = poly_eval(&path.coeffs[i - 1], h);
            let (sr, vr, _) = poly_eval(&path.coeffs[i], 0.0);
            let scale = 1.0 + sl.norm() + vl.norm();
            if (sl - sr).norm() > 1e-9 * scale || (vl - vr).norm() > 1e-9 * scale {
                return Err(Error::InvalidSource(format!(
                    "piecewise path is not C¹ at t = {}",
                    path.breaks[i]
                )));
            }
        }
        Ok(path)
    }

    pub fn breaks(&self) -> &[f64] {
        &self.breaks
    }

    fn eval(&self, t: f64) -> (Vec3, Vec3, Vec3) {
        let first = self.breaks[0];
        let last = *self.breaks.last().unwrap();
        if t < first {
            let (s, v, _) = poly_eval(&self.coeffs[0], 0.0);
            return (s + v * (t - first), v, Vec3::zeros());
        }
        if t > last {
            let n = self.coeffs.len();
            let (s, v, _) = poly_eval(&self.coeffs[n - 1], last - self.breaks[n - 1]);
            return (s + v * (t - last), v, Vec3::zeros());
        }
        let i = self.breaks.partition_point(|&b| b <= t).clamp(1, self.coeffs.len()) - 1;
        poly_eval(&self.coeffs[i], t - self.breaks[i])
    }
}

/// Horner evaluation of a vector polynomial and its first two derivatives.
fn poly_eval(c: &[Vec3], x: f64) -> (Vec3, Vec3, Vec3) {
    let mut p = Vec3::zeros();
    let mut dp = Vec3::zeros();
    let mut ddp = Vec3::zeros();
    for coef in c.iter().rev() {
        ddp = ddp * x + dp * 2.0;
        dp = dp * x + p;
        p = p * x + coef;
    }
    (p, dp, ddp)
}

#[derive(Debug, Clone, PartialEq)]
enum Path {
    Static { position: Vec3 },
    Uniform { position: Vec3, velocity: Vec3 },
    Oscillatory { center: Vec3, drift: Vec3, amplitude: Vec3, omega: f64, phase: f64 },
    Piecewise(PiecewisePath),
    Tabulated(CubicSpline3),
}

/// A rigid-motion and time-shift change of frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Frame {
    pub rotation: Mat3,
    pub offset: Vec3,
    pub time_shift: f64,
}

impl Default for Frame {
    fn default() -> Self {
        Self { rotation: Mat3::identity(), offset: Vec3::zeros(), time_shift: 0.0 }
    }
}

impl Frame {
    pub fn new(rotation: Rotation3<f64>, offset: Vec3, time_shift: f64) -> Self {
        Self { rotation: rotation.into_inner(), offset, time_shift }
    }

    /// `other` applied after `self`.
    pub fn then(&self, other: &Frame) -> Frame {
        Frame {
            rotation: other.rotation * self.rotation,
            offset: other.rotation * self.offset + other.offset,
            time_shift: self.time_shift + other.time_shift,
        }
    }

    pub fn point(&self, x: &Vec3) -> Vec3 {
        self.rotation * x + self.offset
    }
}

/// Source worldline together with its declared supremum speed.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    path: Path,
    frame: Frame,
    vmax: f64,
}

impl Trajectory {
    pub fn stationary(position: Vec3) -> Self {
        Self { path: Path::Static { position }, frame: Frame::default(), vmax: 0.0 }
    }

    /// s(t) = position + velocity·t.
    pub fn uniform(position: Vec3, velocity: Vec3) -> Self {
        Self { path: Path::Uniform { position, velocity }, frame: Frame::default(), vmax: velocity.norm() }
    }

    /// s(t) = center + drift·t + amplitude·sin(ωt + φ).
    pub fn oscillatory(center: Vec3, drift: Vec3, amplitude: Vec3, omega: f64, phase: f64) -> Self {
        let vmax = drift.norm() + amplitude.norm() * omega.abs();
        Self {
            path: Path::Oscillatory { center, drift, amplitude, omega, phase },
            frame: Frame::default(),
            vmax,
        }
    }

    pub fn piecewise(path: PiecewisePath) -> Self {
        let mut traj = Self { path: Path::Piecewise(path), frame: Frame::default(), vmax: 0.0 };
        traj.vmax = traj.sampled_vmax();
        traj
    }

    /// At rest at `start` until `t0`, then a smooth speed-up (C² position)
    /// to `velocity` reached at `t1`, uniform afterwards.
    pub fn accelerating(start: Vec3, t0: f64, t1: f64, velocity: Vec3) -> Result<Self> {
        if !(t1 > t0) {
            return Err(Error::InvalidSource("acceleration phase needs t1 > t0".into()));
        }
        let d = t1 - t0;
        // V = v·(3τ² − 2τ³), τ = (t − t0)/d
        let coeffs = vec![
            start,
            Vec3::zeros(),
            Vec3::zeros(),
            velocity / (d * d),
            -velocity / (2.0 * d * d * d),
        ];
        let path = PiecewisePath::new(vec![t0, t1], vec![coeffs])?;
        let mut traj = Self::piecewise(path);
        traj.vmax = velocity.norm();
        Ok(traj)
    }

    pub fn tabulated(times: Vec<f64>, positions: Vec<Vec3>) -> Result<Self> {
        let spline = CubicSpline3::new(times, positions)?;
        let mut traj = Self { path: Path::Tabulated(spline), frame: Frame::default(), vmax: 0.0 };
        traj.vmax = traj.sampled_vmax();
        Ok(traj)
    }

    /// Overrides the declared supremum speed; rejected if sampling finds a
    /// faster point.
    pub fn with_declared_vmax(mut self, vmax: f64) -> Result<Self> {
        let sampled = self.sampled_vmax();
        if vmax < sampled * (1.0 - 1e-12) {
            return Err(Error::InvalidSource(format!(
                "declared vmax {vmax} is below the sampled speed {sampled}"
            )));
        }
        self.vmax = vmax;
        Ok(self)
    }

    pub fn kind(&self) -> TrajectoryKind {
        match self.path {
            Path::Static { .. } => TrajectoryKind::Static,
            Path::Uniform { .. } => TrajectoryKind::Uniform,
            Path::Oscillatory { .. } => TrajectoryKind::Oscillatory,
            Path::Piecewise(_) => TrajectoryKind::PiecewisePolynomial,
            Path::Tabulated(_) => TrajectoryKind::Tabulated,
        }
    }

    pub fn vmax(&self) -> f64 {
        self.vmax
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    /// True when the source never moves.
    pub fn is_stationary(&self) -> bool {
        match &self.path {
            Path::Static { .. } => true,
            Path::Uniform { velocity, .. } => velocity.norm() == 0.0,
            Path::Oscillatory { drift, amplitude, omega, .. } => {
                drift.norm() == 0.0 && (amplitude.norm() == 0.0 || *omega == 0.0)
            }
            _ => self.vmax == 0.0,
        }
    }

    /// Time interval on which the path is defined.
    pub fn domain(&self) -> (f64, f64) {
        match &self.path {
            Path::Tabulated(sp) => (sp.start() + self.frame.time_shift, sp.end() + self.frame.time_shift),
            _ => (f64::NEG_INFINITY, f64::INFINITY),
        }
    }

    /// Instants where the acceleration may be discontinuous.
    pub fn breakpoints(&self) -> Vec<f64> {
        match &self.path {
            Path::Piecewise(p) => p.breaks().iter().map(|b| b + self.frame.time_shift).collect(),
            _ => Vec::new(),
        }
    }

    /// Same worldline seen in a transformed frame.
    pub fn transformed(&self, frame: &Frame) -> Self {
        Self { path: self.path.clone(), frame: self.frame.then(frame), vmax: self.vmax }
    }

    pub fn eval(&self, t: f64) -> Result<Motion> {
        if !t.is_finite() {
            return Err(Error::InvalidSource(format!("trajectory queried at non-finite time {t}")));
        }
        let tl = t - self.frame.time_shift;
        let (s, v, a) = match &self.path {
            Path::Static { position } => (*position, Vec3::zeros(), Vec3::zeros()),
            Path::Uniform { position, velocity } => (position + velocity * tl, *velocity, Vec3::zeros()),
            Path::Oscillatory { center, drift, amplitude, omega, phase } => {
                let arg = omega * tl + phase;
                let (sn, cs) = arg.sin_cos();
                (
                    center + drift * tl + amplitude * sn,
                    drift + amplitude * (omega * cs),
                    -amplitude * (omega * omega * sn),
                )
            }
            Path::Piecewise(p) => p.eval(tl),
            Path::Tabulated(sp) => sp.eval(tl).map_err(|e| match e {
                Error::Extrapolation { t: _, start, end } => Error::Extrapolation {
                    t,
                    start: start + self.frame.time_shift,
                    end: end + self.frame.time_shift,
                },
                other => other,
            })?,
        };
        let r = &self.frame.rotation;
        Ok(Motion { position: r * s + self.frame.offset, velocity: r * v, acceleration: r * a })
    }

    /// (s(t1) − s(t0), V(t1) − V(t0)) without cancellation for close instants.
    pub fn increment(&self, t1: f64, t0: f64) -> Result<(Vec3, Vec3)> {
        let dt = t1 - t0;
        let (ds, dv) = match &self.path {
            Path::Static { .. } => (Vec3::zeros(), Vec3::zeros()),
            Path::Uniform { velocity, .. } => (velocity * dt, Vec3::zeros()),
            Path::Oscillatory { drift, amplitude, omega, phase, .. } => {
                let shift = self.frame.time_shift;
                let mid = omega * (0.5 * (t1 + t0) - shift) + phase;
                let half = 0.5 * omega * dt;
                let (sm, cm) = mid.sin_cos();
                let sh = half.sin();
                (drift * dt + amplitude * (2.0 * cm * sh), amplitude * (-2.0 * omega * sm * sh))
            }
            _ => {
                let a = self.eval(t1)?;
                let b = self.eval(t0)?;
                return Ok((a.position - b.position, a.velocity - b.velocity));
            }
        };
        let r = &self.frame.rotation;
        Ok((r * ds, r * dv))
    }

    /// Largest |V| over `VMAX_SAMPLES` points of the relevant time window.
    pub fn sampled_vmax(&self) -> f64 {
        let (lo, hi) = match &self.path {
            Path::Tabulated(sp) => (sp.start(), sp.end()),
            Path::Piecewise(p) => {
                let b = p.breaks();
                (b[0], *b.last().unwrap())
            }
            Path::Oscillatory { omega, .. } if *omega != 0.0 => (0.0, 2.0 * std::f64::consts::PI / omega.abs()),
            _ => (0.0, 1.0),
        };
        let shift = self.frame.time_shift;
        (0..VMAX_SAMPLES)
            .filter_map(|i| {
                let t = lo + (hi - lo) * i as f64 / (VMAX_SAMPLES - 1) as f64;
                self.eval(t + shift).ok().map(|m| m.velocity.norm())
            })
            .fold(0.0, f64::max)
    }

    /// Checks the declared vmax against sampling.
    pub fn spot_check_vmax(&self) -> bool {
        self.sampled_vmax() <= self.vmax * (1.0 + 1e-9) + 1e-300
    }
}
