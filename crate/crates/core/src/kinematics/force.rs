//! Force magnitude profiles Q(t).

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::{Mat3, Vec3};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProfileKind {
    Constant,
    Harmonic,
    Ramp,
    Pulse,
    Polynomial,
}

impl fmt::Display for ProfileKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ProfileKind::Constant => "constant",
            ProfileKind::Harmonic => "harmonic",
            ProfileKind::Ramp => "ramp",
            ProfileKind::Pulse => "pulse",
            ProfileKind::Polynomial => "polynomial",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Shape {
    Constant { q: Vec3 },
    /// mean + amplitude·sin(ωt + φ)
    Harmonic { mean: Vec3, amplitude: Vec3, omega: f64, phase: f64 },
    /// q·smoothstep((t − t_on)/rise)
    Ramp { q: Vec3, rise: f64 },
    /// q·sin²(π(t − t_on)/duration) on [t_on, t_on + duration]
    Pulse { q: Vec3, duration: f64 },
    /// Σ c_k (t − t_on)^k, or Σ c_k t^k when t_on = −∞
    Polynomial { coeffs: Vec<Vec3> },
}

/// Force vector Q(t) switched on at `t_on` (Q ≡ 0 before).
#[derive(Debug, Clone, PartialEq)]
pub struct ForceProfile {
    shape: Shape,
    t_on: f64,
    rotation: Mat3,
    time_shift: f64,
}

impl ForceProfile {
    fn build(shape: Shape, t_on: f64) -> Result<Self> {
        if t_on.is_nan() || t_on == f64::INFINITY {
            return Err(Error::InvalidSource(format!("invalid switch-on time {t_on}")));
        }
        Ok(Self { shape, t_on, rotation: Mat3::identity(), time_shift: 0.0 })
    }

    fn need_finite_on(t_on: f64, what: &str) -> Result<()> {
        if t_on.is_finite() {
            Ok(())
        } else {
            Err(Error::InvalidSource(format!("{what} profile needs a finite switch-on time")))
        }
    }

    pub fn constant(q: Vec3, t_on: f64) -> Result<Self> {
        Self::build(Shape::Constant { q }, t_on)
    }

    /// Constant force acting for all time.
    pub fn steady(q: Vec3) -> Self {
        Self::build(Shape::Constant { q }, f64::NEG_INFINITY).unwrap()
    }

    pub fn harmonic(mean: Vec3, amplitude: Vec3, omega: f64, phase: f64, t_on: f64) -> Result<Self> {
        Self::build(Shape::Harmonic { mean, amplitude, omega, phase }, t_on)
    }

    pub fn ramp(q: Vec3, t_on: f64, rise: f64) -> Result<Self> {
        Self::need_finite_on(t_on, "ramp")?;
        if !(rise > 0.0 && rise.is_finite()) {
            return Err(Error::InvalidSource("ramp rise time must be positive".into()));
        }
        Self::build(Shape::Ramp { q, rise }, t_on)
    }

    pub fn pulse(q: Vec3, t_on: f64, duration: f64) -> Result<Self> {
        Self::need_finite_on(t_on, "pulse")?;
        if !(duration > 0.0 && duration.is_finite()) {
            return Err(Error::InvalidSource("pulse duration must be positive".into()));
        }
        Self::build(Shape::Pulse { q, duration }, t_on)
    }

    pub fn polynomial(coeffs: Vec<Vec3>, t_on: f64) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidSource("polynomial profile needs coefficients".into()));
        }
        if !t_on.is_finite() && coeffs.len() > 1 {
            return Err(Error::InvalidSource(
                "a non-constant polynomial force acting for all time is unbounded".into(),
            ));
        }
        Self::build(Shape::Polynomial { coeffs }, t_on)
    }

    pub fn kind(&self) -> ProfileKind {
        match self.shape {
            Shape::Constant { .. } => ProfileKind::Constant,
            Shape::Harmonic { .. } => ProfileKind::Harmonic,
            Shape::Ramp { .. } => ProfileKind::Ramp,
            Shape::Pulse { .. } => ProfileKind::Pulse,
            Shape::Polynomial { .. } => ProfileKind::Polynomial,
        }
    }

    /// Switch-on time in the evaluation frame.
    pub fn t_on(&self) -> f64 {
        self.t_on + self.time_shift
    }

    /// Constant force present for all time (the static limit).
    pub fn is_steady(&self) -> bool {
        self.t_on == f64::NEG_INFINITY
            && match &self.shape {
                Shape::Constant { .. } => true,
                Shape::Polynomial { coeffs } => coeffs.len() == 1,
                Shape::Harmonic { amplitude, omega, .. } => amplitude.norm() == 0.0 || *omega == 0.0,
                _ => false,
            }
    }

    /// Value of a steady profile.
    pub fn steady_value(&self) -> Option<Vec3> {
        if !self.is_steady() {
            return None;
        }
        self.eval(0.0).ok().map(|(q, _)| q)
    }

    /// Last instant with nonzero force, if the profile has compact support.
    pub fn support_end(&self) -> Option<f64> {
        match &self.shape {
            Shape::Pulse { duration, .. } => Some(self.t_on() + duration),
            _ => None,
        }
    }

    /// Same profile with its vector rotated and time axis shifted.
    pub fn transformed(&self, rotation: &Mat3, time_shift: f64) -> Self {
        let mut p = self.clone();
        p.rotation = rotation * self.rotation;
        p.time_shift += time_shift;
        p
    }

    /// Q scaled by `k`.
    pub fn scaled(&self, k: f64) -> Self {
        let mut p = self.clone();
        p.rotation *= k;
        p
    }

    /// (Q(t), Q̇(t)); zero before switch-on.
    pub fn eval(&self, t: f64) -> Result<(Vec3, Vec3)> {
        if !t.is_finite() {
            return Err(Error::InvalidSource(format!("force queried at non-finite time {t}")));
        }
        let tl = t - self.time_shift;
        if tl < self.t_on {
            return Ok((Vec3::zeros(), Vec3::zeros()));
        }
        let tau = tl - self.t_on;
        let (q, qd) = match &self.shape {
            Shape::Constant { q } => (*q, Vec3::zeros()),
            Shape::Harmonic { mean, amplitude, omega, phase } => {
                let (s, c) = (omega * tl + phase).sin_cos();
                (mean + amplitude * s, amplitude * (omega * c))
            }
            Shape::Ramp { q, rise } => {
                let x = (tau / rise).min(1.0);
                if x >= 1.0 {
                    (*q, Vec3::zeros())
                } else {
                    (q * (x * x * (3.0 - 2.0 * x)), q * (6.0 * x * (1.0 - x) / rise))
                }
            }
            Shape::Pulse { q, duration } => {
                if tau > *duration {
                    (Vec3::zeros(), Vec3::zeros())
                } else {
                    let w = std::f64::consts::PI / duration;
                    let (s, c) = (w * tau).sin_cos();
                    (q * (s * s), q * (2.0 * w * s * c))
                }
            }
            Shape::Polynomial { coeffs } => {
                let x = if self.t_on.is_finite() { tau } else { tl };
                let mut p = Vec3::zeros();
                let mut dp = Vec3::zeros();
                for c in coeffs.iter().rev() {
                    dp = dp * x + p;
                    p = p * x + c;
                }
                (p, dp)
            }
        };
        Ok((self.rotation * q, self.rotation * qd))
    }

    /// Instants where Q or Q̇ may be discontinuous, in increasing order.
    pub fn breakpoints(&self) -> Vec<f64> {
        let on = self.t_on();
        if !on.is_finite() {
            return Vec::new();
        }
        match &self.shape {
            Shape::Ramp { rise, .. } => vec![on, on + rise],
            Shape::Pulse { duration, .. } => vec![on, on + duration],
            _ => vec![on],
        }
    }

    /// Jumps ΔQ = Q(b⁺) − Q(b⁻) at the breakpoints where Q itself jumps.
    pub fn jumps(&self) -> Vec<(f64, Vec3)> {
        let on = self.t_on();
        if !on.is_finite() {
            return Vec::new();
        }
        let (q, _) = self.eval(on).expect("finite time");
        if q == Vec3::zeros() {
            Vec::new()
        } else {
            vec![(on, q)]
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn profiles() -> Vec<ForceProfile> {
        vec![
            ForceProfile::constant(Vec3::new(1.0, 2.0, 3.0), 0.5).unwrap(),
            ForceProfile::harmonic(Vec3::z(), Vec3::new(0.3, 0.0, 0.1), 2.5, 0.3, -1.0).unwrap(),
            ForceProfile::ramp(Vec3::new(0.0, 1.0, 0.0), 0.0, 0.7).unwrap(),
            ForceProfile::pulse(Vec3::new(1.0, 0.0, 1.0), 0.2, 0.9).unwrap(),
            ForceProfile::polynomial(vec![Vec3::x(), Vec3::y(), Vec3::z() * 0.5], 0.0).unwrap(),
        ]
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let h = 1e-5;
        for p in profiles() {
            for t in [0.05, 0.33, 0.61, 0.8, 1.4, 3.0] {
                let (_, qd) = p.eval(t).unwrap();
                let fd = (p.eval(t + h).unwrap().0 - p.eval(t - h).unwrap().0) / (2.0 * h);
                assert!((fd - qd).norm() < 1e-6 * (1.0 + qd.norm()), "{:?} at {t}", p.kind());
            }
        }
    }

    #[test]
    fn vanishes_before_switch_on() {
        for p in profiles() {
            let (q, qd) = p.eval(p.t_on() - 1e-9).unwrap();
            assert_eq!(q, Vec3::zeros());
            assert_eq!(qd, Vec3::zeros());
        }
    }

    #[test]
    fn pulse_has_compact_support() {
        let p = ForceProfile::pulse(Vec3::x(), 1.0, 2.0).unwrap();
        assert_eq!(p.eval(3.5).unwrap().0, Vec3::zeros());
        assert_eq!(p.support_end(), Some(3.0));
        assert!(p.jumps().is_empty());
    }

    #[test]
    fn jumps_and_breakpoints() {
        let p = ForceProfile::constant(Vec3::x(), 2.0).unwrap();
        assert_eq!(p.jumps(), vec![(2.0, Vec3::x())]);
        let p = p.transformed(&Mat3::identity(), 1.0);
        assert_eq!(p.breakpoints(), vec![3.0]);
        let s = ForceProfile::steady(Vec3::y());
        assert!(s.is_steady());
        assert!(s.jumps().is_empty());
        assert_eq!(s.steady_value(), Some(Vec3::y()));
    }

    #[test]
    fn rejects_unbounded_shapes() {
        assert!(ForceProfile::ramp(Vec3::x(), f64::NEG_INFINITY, 1.0).is_err());
        assert!(ForceProfile::polynomial(vec![Vec3::x(), Vec3::x()], f64::NEG_INFINITY).is_err());
        assert!(ForceProfile::pulse(Vec3::x(), 0.0, 0.0).is_err());
    }
}
