//! Random source and observer generators shared by the checks.

use nalgebra::{Rotation3, Unit};
use rand::Rng;

use super::fd::front_distance;
use crate::kinematics::{ForceProfile, Trajectory};
use crate::material::Material;
use crate::Vec3;

/// One source and one observation event.
#[derive(Debug, Clone)]
pub struct Case {
    pub mat: Material,
    pub traj: Trajectory,
    pub prof: ForceProfile,
    pub x: Vec3,
    pub t: f64,
}

pub fn random_material<R: Rng>(rng: &mut R) -> Material {
    let rho = rng.random_range(0.5..2.0);
    let mu = rng.random_range(0.5..2.0);
    let nu = rng.random_range(0.05..0.45);
    Material::from_poisson(rho, mu, nu).expect("sampled moduli are admissible")
}

pub fn random_unit<R: Rng>(rng: &mut R) -> Vec3 {
    loop {
        let v = Vec3::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        let n = v.norm();
        if n > 0.1 && n <= 1.0 {
            return v / n;
        }
    }
}

pub fn random_vector<R: Rng>(rng: &mut R, scale: f64) -> Vec3 {
    random_unit(rng) * (scale * rng.random_range(0.3..1.0))
}

pub fn random_rotation<R: Rng>(rng: &mut R) -> Rotation3<f64> {
    let axis = Unit::new_normalize(random_unit(rng));
    Rotation3::from_axis_angle(&axis, rng.random_range(-std::f64::consts::PI..std::f64::consts::PI))
}

fn flatten(v: Vec3, planar: bool) -> Vec3 {
    if planar {
        Vec3::new(v.x, v.y, 0.0)
    } else {
        v
    }
}

fn planar_unit<R: Rng>(rng: &mut R) -> Vec3 {
    let a = rng.random_range(-std::f64::consts::PI..std::f64::consts::PI);
    Vec3::new(a.cos(), a.sin(), 0.0)
}

/// Uniform, oscillatory or smoothly accelerating motion with speed at most
/// `frac`·cT; confined to the x₁x₂ plane when `planar`.
pub fn random_smooth_trajectory<R: Rng>(rng: &mut R, mat: &Material, frac: f64, planar: bool) -> Trajectory {
    let speed = frac * mat.c_t * rng.random_range(0.2..1.0);
    let dir = |rng: &mut R| if planar { planar_unit(rng) } else { random_unit(rng) };
    let start = flatten(random_vector(rng, 0.5), planar);
    match rng.random_range(0..3) {
        0 => Trajectory::uniform(start, dir(rng) * speed),
        1 => {
            let omega = rng.random_range(0.5..2.0);
            let share = rng.random_range(0.0..0.7);
            let drift = dir(rng) * (share * speed);
            let amplitude = dir(rng) * ((1.0 - share) * speed / omega);
            Trajectory::oscillatory(start, drift, amplitude, omega, rng.random_range(0.0..6.0))
        }
        _ => {
            let t0 = rng.random_range(-3.0..-1.0);
            let t1 = t0 + rng.random_range(0.5..2.0);
            Trajectory::accelerating(start, t0, t1, dir(rng) * speed).expect("t1 > t0")
        }
    }
}

/// Harmonic force acting for all time or a smooth ramp switched on in the
/// past. `finite` forces a finite switch-on.
pub fn random_smooth_profile<R: Rng>(rng: &mut R, finite: bool) -> ForceProfile {
    let q = random_vector(rng, 1.0);
    if !finite && rng.random_bool(0.5) {
        ForceProfile::harmonic(q, random_vector(rng, 0.5), rng.random_range(0.5..2.0), rng.random_range(0.0..6.0), f64::NEG_INFINITY)
            .expect("valid harmonic profile")
    } else {
        ForceProfile::ramp(q, rng.random_range(-4.0..-2.0), rng.random_range(0.5..2.0)).expect("valid ramp")
    }
}

/// Smooth subsonic case with the observer at distance R ∈ [0.5, 3] from the
/// current source position and at least 0.1·R from every wavefront.
pub fn smooth_case<R: Rng>(rng: &mut R, frac: f64, planar: bool) -> Case {
    loop {
        let mat = random_material(rng);
        let traj = random_smooth_trajectory(rng, &mat, frac, planar);
        let prof = random_smooth_profile(rng, planar);
        let t = rng.random_range(0.0..3.0);
        let dir = if planar { planar_unit(rng) } else { random_unit(rng) };
        let r = rng.random_range(0.5..3.0);
        let x = traj.eval(t).expect("analytic trajectory").position + dir * r;
        if front_distance(&mat, &traj, &prof, &x, t) >= 0.1 * r {
            return Case { mat, traj, prof, x, t };
        }
    }
}
