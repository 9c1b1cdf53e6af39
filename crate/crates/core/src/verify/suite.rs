use std::f64::consts::PI;

use nalgebra::{Rotation3, Unit};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::cases::{random_material, random_rotation, random_unit, random_vector, smooth_case, Case};
use super::fd::{fd_consistency, fd_step, front_distance, rel_err};
use super::mollified::{convergence_order, mollified_convolution_u};
use super::navier::navier_residual;
use super::superposition::line_superposition_u;
use super::{CheckReport, SampleRecord};
use crate::error::{Error, Result};
use crate::kinematics::{retarded_time, retarded_time_bisection, ForceProfile, Frame, RetardedOptions, Trajectory};
use crate::lineforce2d::{antiplane_displacement, antiplane_fields, evaluate_2d, inplane_displacement, Plane, Vec2};
use crate::material::Material;
use crate::options::Tolerances;
use crate::pointforce3d::{
    kelvin_displacement, kelvin_gradient, lw_displacement, radiation_split, stokes_displacement, stokes_gradient,
};
use crate::{Mat3, Vec3};

/// A configured source checked at given observation events.
#[derive(Debug, Clone)]
pub struct SuiteSource {
    pub mat: Material,
    pub traj: Trajectory,
    pub prof: ForceProfile,
    /// `None` for a point force.
    pub plane: Option<Plane>,
    pub events: Vec<(Vec3, f64)>,
}

#[derive(Debug, Clone, Default)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Overrides the per-check sample count.
    pub samples: Option<usize>,
    /// Runs only the named checks; all when `None`.
    pub checks: Option<Vec<String>>,
    /// Perturbs the fields fed to the consistency checks so that they fail.
    pub corrupt: bool,
    pub source: Option<SuiteSource>,
}

type Runner = fn(&mut ChaCha8Rng, usize, &SuiteConfig) -> Vec<SampleRecord>;

struct Check {
    name: &'static str,
    tolerance: f64,
    samples: usize,
    run: Runner,
}

const CHECKS: &[Check] = &[
    Check { name: "equivariance.2d", tolerance: 1e-10, samples: 4, run: equivariance_2d },
    Check { name: "equivariance.3d", tolerance: 1e-10, samples: 8, run: equivariance_3d },
    Check { name: "fd-consistency.2d", tolerance: 1e-4, samples: 4, run: fd_2d },
    Check { name: "fd-consistency.3d", tolerance: 1e-5, samples: 10, run: fd_3d },
    Check { name: "limits.kelvin", tolerance: 1e-12, samples: 20, run: kelvin },
    Check { name: "limits.stokes", tolerance: 1e-10, samples: 20, run: stokes },
    Check { name: "linearity", tolerance: 1e-10, samples: 6, run: linearity },
    Check { name: "lineforce.afterglow", tolerance: 0.0, samples: 3, run: afterglow },
    Check { name: "lineforce.antiplane-closed-form", tolerance: 1e-8, samples: 20, run: antiplane_closed_form },
    Check { name: "lineforce.antiplane-derivatives", tolerance: 1e-6, samples: 20, run: antiplane_derivatives },
    Check { name: "lineforce.superposition", tolerance: 1e-3, samples: 2, run: superposition },
    Check { name: "mollified.agreement", tolerance: 1e-4, samples: 2, run: mollified_agreement },
    Check { name: "mollified.order", tolerance: 0.2, samples: 2, run: mollified_order },
    Check { name: "navier.residual", tolerance: 1e-3, samples: 10, run: navier },
    Check { name: "radiation.far-field", tolerance: 1e-2, samples: 3, run: far_field },
    Check { name: "radiation.uniform", tolerance: 0.0, samples: 5, run: uniform_radiation },
    Check { name: "retarded.solver", tolerance: 1e-12, samples: 200, run: retarded },
    Check { name: "source.fd-consistency", tolerance: 1e-4, samples: 6, run: source_fd },
];

/// Names of all checks, sorted.
pub fn check_names() -> Vec<&'static str> {
    CHECKS.iter().map(|c| c.name).collect()
}

fn fnv1a(s: &str) -> u64 {
    s.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| (h ^ b as u64).wrapping_mul(0x0000_0100_0000_01b3))
}

/// Runs the selected checks in parallel. Each check draws from its own
/// generator seeded by (seed, name), so results do not depend on scheduling.
pub fn run_check_suite(config: &SuiteConfig) -> Result<Vec<CheckReport>> {
    if let Some(src) = &config.source {
        if src.traj.vmax() >= src.mat.c_t {
            return Err(Error::Supersonic { vmax: src.traj.vmax(), speed: src.mat.c_t });
        }
        if src.plane.is_some() && !src.prof.t_on().is_finite() {
            return Err(Error::UnboundedHistory);
        }
    }
    let selected: Vec<&Check> = CHECKS
        .iter()
        .filter(|c| config.checks.as_ref().is_none_or(|names| names.iter().any(|n| n == c.name)))
        .filter(|c| c.name != "source.fd-consistency" || config.source.is_some())
        .collect();
    let mut reports: Vec<CheckReport> = selected
        .par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed ^ fnv1a(c.name));
            let n = config.samples.unwrap_or(c.samples);
            CheckReport::from_samples(c.name, c.tolerance, (c.run)(&mut rng, n, config))
        })
        .collect();
    reports.sort_by(|a, b| a.name.cmp(&b.name));
    Ok(reports)
}

fn record(label: String, r: Result<f64>) -> SampleRecord {
    match r {
        Ok(rel_err) => SampleRecord { label, rel_err },
        Err(e) => SampleRecord { label: format!("{label}: {e}"), rel_err: f64::INFINITY },
    }
}

fn fine() -> Tolerances {
    Tolerances { kappa: 1e-13, history: 1e-12, ..Tolerances::default() }
}

fn separation(c: &Case) -> Result<f64> {
    Ok((c.x - c.traj.eval(c.t)?.position).norm())
}

fn retarded(rng: &mut ChaCha8Rng, n: usize, _: &SuiteConfig) -> Vec<SampleRecord> {
    let opts = RetardedOptions::default();
    (0..n)
        .map(|i| {
            let mat = random_material(rng);
            let traj = super::cases::random_smooth_trajectory(rng, &mat, 0.95, false);
            let x = random_vector(rng, 5.0);
            let t = rng.random_range(-5.0..5.0);
            let (kl, kt) = (mat.kappa_l(), mat.kappa_t());
            let k1 = rng.random_range(kl..kt);
            let k2 = k1 + 0.25 * (kt - k1);
            let r = (|| {
                let a = retarded_time(&traj, &x, t, k1, &opts)?;
                let b = retarded_time_bisection(&traj, &x, t, k1, &opts)?;
                let c = retarded_time(&traj, &x, t, k2, &opts)?;
                if !(a.pc > 0.0 && c.pc > 0.0 && c.t_ret < a.t_ret) {
                    return Ok(f64::INFINITY);
                }
                Ok((a.t_ret - b.t_ret).abs() / a.t_ret.abs().max(1.0))
            })();
            record(format!("#{i} {}", traj.kind()), r)
        })
        .collect()
}

fn kelvin(rng: &mut ChaCha8Rng, n: usize, _: &SuiteConfig) -> Vec<SampleRecord> {
    let tol = Tolerances::default();
    (0..n)
        .map(|i| {
            let mat = random_material(rng);
            let q = random_vector(rng, 2.0);
            let rvec = random_vector(rng, 3.0);
            let traj = Trajectory::stationary(Vec3::zeros());
            let prof = ForceProfile::steady(q);
            let r = (|| {
                let s = radiation_split(&mat, &traj, &prof, &rvec, 0.0, &tol)?;
                let u = kelvin_displacement(&mat, &q, &rvec)?;
                let b = kelvin_gradient(&mat, &q, &rvec)?;
                Ok(rel_err(&s.u, &u).max(rel_err(&s.beta, &b)))
            })();
            record(format!("#{i}"), r)
        })
        .collect()
}

fn random_profile(rng: &mut ChaCha8Rng) -> ForceProfile {
    let q = random_vector(rng, 1.0);
    let t_on = rng.random_range(-3.0..-1.0);
    match rng.random_range(0..4) {
        0 => ForceProfile::constant(q, t_on).unwrap(),
        1 => ForceProfile::harmonic(q, random_vector(rng, 1.0), rng.random_range(0.5..3.0), 0.4, t_on).unwrap(),
        2 => ForceProfile::ramp(q, t_on, rng.random_range(0.3..2.0)).unwrap(),
        _ => ForceProfile::pulse(q, t_on, rng.random_range(1.0..3.0)).unwrap(),
    }
}

fn stokes(rng: &mut ChaCha8Rng, n: usize, _: &SuiteConfig) -> Vec<SampleRecord> {
    let tol = Tolerances::default();
    (0..n)
        .map(|i| {
            let mat = random_material(rng);
            let p = random_vector(rng, 1.0);
            let traj = Trajectory::stationary(p);
            let prof = random_profile(rng);
            let x = p + random_vector(rng, 2.0);
            let t = rng.random_range(0.0..2.0);
            let r = (|| {
                let s = radiation_split(&mat, &traj, &prof, &x, t, &tol)?;
                let u = stokes_displacement(&mat, &prof, &(x - p), t, &tol)?;
                let b = stokes_gradient(&mat, &prof, &(x - p), t, &tol)?;
                Ok(rel_err(&s.u, &u).max(rel_err(&s.beta, &b)))
            })();
            record(format!("#{i} {}", prof.kind()), r)
        })
        .collect()
}

fn fd_3d(rng: &mut ChaCha8Rng, n: usize, cfg: &SuiteConfig) -> Vec<SampleRecord> {
    let tol = fine();
    (0..n)
        .map(|i| {
            let c = smooth_case(rng, 0.8, false);
            let r = (|| {
                let h = fd_step(separation(&c)?, front_distance(&c.mat, &c.traj, &c.prof, &c.x, c.t))?;
                let s = radiation_split(&c.mat, &c.traj, &c.prof, &c.x, c.t, &tol)?;
                let fd = fd_consistency(
                    |y: &Vec3, t| lw_displacement(&c.mat, &c.traj, &c.prof, y, t, &tol),
                    &c.x,
                    c.t,
                    h,
                    h / c.mat.c_l,
                )?;
                let v = if cfg.corrupt { s.v * 1.1 } else { s.v };
                Ok(rel_err(&s.beta, &fd.beta).max(rel_err(&v, &fd.v)))
            })();
            record(format!("#{i} {} {}", c.traj.kind(), c.prof.kind()), r)
        })
        .collect()
}

fn navier(rng: &mut ChaCha8Rng, n: usize, cfg: &SuiteConfig) -> Vec<SampleRecord> {
    let tol = fine();
    let k = if cfg.corrupt { 1.1 } else { 1.0 };
    (0..n)
        .map(|i| {
            let c = smooth_case(rng, 0.8, false);
            let r = (|| {
                let h = fd_step(separation(&c)?, front_distance(&c.mat, &c.traj, &c.prof, &c.x, c.t))?;
                let res = navier_residual(
                    &c.mat,
                    |y: &Vec3, t| {
                        let s = radiation_split(&c.mat, &c.traj, &c.prof, y, t, &tol)?;
                        Ok((s.beta * k, s.v))
                    },
                    &c.x,
                    c.t,
                    h,
                    h / c.mat.c_l,
                )?;
                Ok(res.relative)
            })();
            record(format!("#{i} {} {}", c.traj.kind(), c.prof.kind()), r)
        })
        .collect()
}

/// Moving or resting source with a harmonic force, observer at unit-order
/// distance; used by the mollification checks.
fn mollified_case(rng: &mut ChaCha8Rng, i: usize) -> Case {
    let mat = random_material(rng);
    let speed = 0.5 * mat.c_t * rng.random_range(0.2..1.0);
    let traj = match i % 4 {
        0 => Trajectory::stationary(Vec3::zeros()),
        1 => Trajectory::uniform(Vec3::zeros(), random_unit(rng) * speed),
        2 => Trajectory::accelerating(Vec3::zeros(), -1.5, -0.5, random_unit(rng) * speed).unwrap(),
        _ => Trajectory::oscillatory(Vec3::zeros(), Vec3::zeros(), random_unit(rng) * (speed / 1.5), 1.5, 0.3),
    };
    let prof = ForceProfile::harmonic(
        random_vector(rng, 1.0),
        random_vector(rng, 0.5),
        rng.random_range(1.0..2.0),
        rng.random_range(0.0..6.0),
        f64::NEG_INFINITY,
    )
    .unwrap();
    let t = rng.random_range(0.0..2.0);
    let x = traj.eval(t).unwrap().position + random_unit(rng) * rng.random_range(0.8..2.0);
    Case { mat, traj, prof, x, t }
}

pub(crate) const MOLLIFIER_WIDTHS: [f64; 4] = [0.02, 0.01, 0.005, 0.0025];

fn mollified_errors(c: &Case) -> Result<Vec<f64>> {
    let exact = lw_displacement(&c.mat, &c.traj, &c.prof, &c.x, c.t, &fine())?;
    MOLLIFIER_WIDTHS
        .iter()
        .map(|&e| Ok((mollified_convolution_u(&c.mat, &c.traj, &c.prof, &c.x, c.t, e)? - exact).norm() / exact.norm()))
        .collect()
}

fn mollified_agreement(rng: &mut ChaCha8Rng, n: usize, _: &SuiteConfig) -> Vec<SampleRecord> {
    (0..n)
        .map(|i| {
            let c = mollified_case(rng, i);
            record(format!("#{i} {}", c.traj.kind()), mollified_errors(&c).map(|e| e[e.len() - 1]))
        })
        .collect()
}

fn mollified_order(rng: &mut ChaCha8Rng, n: usize, _: &SuiteConfig) -> Vec<SampleRecord> {
    (0..n)
        .map(|i| {
            let c = mollified_case(rng, i);
            let r = mollified_errors(&c).map(|e| (convergence_order(&MOLLIFIER_WIDTHS, &e) - 2.0).abs());
            record(format!("#{i} {}", c.traj.kind()), r)
        })
        .collect()
}

fn uniform_radiation(rng: &mut ChaCha8Rng, n: usize, _: &SuiteConfig) -> Vec<SampleRecord> {
    let tol = Tolerances::default();
    (0..n)
        .map(|i| {
            let mat = random_material(rng);
            let traj = Trajectory::uniform(random_vector(rng, 1.0), random_unit(rng) * (0.9 * mat.c_t));
            let prof = random_profile(rng);
            let t = rng.random_range(0.0..2.0);
            let x = traj.eval(t).unwrap().position + random_vector(rng, 2.0);
            let r = radiation_split(&mat, &traj, &prof, &x, t, &tol).map(|s| {
                let p = s.parts.expect("split requested");
                p.beta_acc.amax().max(p.v_acc.amax())
            });
            record(format!("#{i}"), r)
        })
        .collect()
}

/// Ratio |β_acc(2R, t + R/c_T)| / |β_acc(R, t)| for a small oscillating
/// source with c_L = 2 c_T, at a distance where both wave families arrive in
/// phase at the two observers.
pub(crate) fn far_field_ratio(n: &Vec3, amplitude: &Vec3, q: &Vec3, phase: f64) -> Result<f64> {
    let mat = Material::from_poisson(1.0, 1.0, 1.0 / 3.0)?;
    let omega = 10.0;
    let traj = Trajectory::oscillatory(Vec3::zeros(), Vec3::zeros(), *amplitude, omega, phase);
    let prof = ForceProfile::steady(*q);
    let kt = mat.kappa_t();
    let r = 4.0 * PI * 80.0 / (omega * kt);
    let t1 = r * kt + (PI / 2.0 - phase) / omega;
    // the slowness integrand oscillates ~ωR(κ_T − κ_L) times
    let tol = Tolerances { kappa: 1e-8, max_panels: 20_000, ..Tolerances::default() };
    let near = radiation_split(&mat, &traj, &prof, &(n * r), t1, &tol)?.parts.expect("split requested");
    let far = radiation_split(&mat, &traj, &prof, &(n * (2.0 * r)), t1 + r * kt, &tol)?.parts.expect("split requested");
    Ok(far.beta_acc.norm() / near.beta_acc.norm())
}

fn far_field(rng: &mut ChaCha8Rng, n: usize, _: &SuiteConfig) -> Vec<SampleRecord> {
    (0..n)
        .map(|i| {
            let dir = random_unit(rng);
            let amp = (dir + random_vector(rng, 0.5)).normalize() * 0.01;
            let q = random_unit(rng);
            let r = far_field_ratio(&dir, &amp, &q, rng.random_range(0.0..6.0)).map(|ratio| (ratio - 0.5).abs() / 0.5);
            record(format!("#{i}"), r)
        })
        .collect()
}

fn antiplane_case(rng: &mut ChaCha8Rng) -> (Material, ForceProfile, Vec2, f64, f64) {
    let mat = random_material(rng);
    let prof = ForceProfile::constant(Vec3::new(0.0, 0.0, 2.0 * PI * mat.rho * mat.c_t * mat.c_t), 0.0).unwrap();
    let a = rng.random_range(-PI..PI);
    let r = rng.random_range(0.2..3.0);
    let t = r / mat.c_t * rng.random_range(1.05..10.0);
    (mat, prof, Vec2::new(a.cos(), a.sin()) * r, r, t)
}

fn antiplane_closed_form(rng: &mut ChaCha8Rng, n: usize, _: &SuiteConfig) -> Vec<SampleRecord> {
    let tol = fine();
    let traj = Trajectory::stationary(Vec3::zeros());
    (0..n)
        .map(|i| {
            let (mat, prof, x, r, t) = antiplane_case(rng);
            let exact = (mat.c_t * t / r).acosh();
            let res = antiplane_displacement(&mat, &traj, &prof, &x, t, &tol).map(|u| (u - exact).abs() / exact);
            record(format!("#{i} r={r:.3} t={t:.3}"), res)
        })
        .collect()
}

fn antiplane_derivatives(rng: &mut ChaCha8Rng, n: usize, _: &SuiteConfig) -> Vec<SampleRecord> {
    let tol = fine();
    let traj = Trajectory::stationary(Vec3::zeros());
    (0..n)
        .map(|i| {
            let (mat, prof, x, r, t) = antiplane_case(rng);
            let ct = mat.c_t * t;
            let root = (ct * ct - r * r).sqrt();
            let v = mat.c_t / root;
            let b = x * (-ct / (r * r * root));
            let res = antiplane_fields(&mat, &traj, &prof, &x, t, &tol)
                .map(|(bn, vn)| ((vn - v).abs() / v.abs()).max(rel_err(&bn, &b)));
            record(format!("#{i} r={r:.3} t={t:.3}"), res)
        })
        .collect()
}

fn afterglow(_: &mut ChaCha8Rng, n: usize, _: &SuiteConfig) -> Vec<SampleRecord> {
    let tol = Tolerances::default();
    let mat = Material::from_poisson(1.0, 1.0, 0.25).unwrap();
    let traj = Trajectory::stationary(Vec3::zeros());
    let prof = ForceProfile::pulse(Vec3::new(1.0, 0.5, 1.0), 0.0, 0.5).unwrap();
    let x = Vec2::new(0.6, 0.8);
    // trailing transversal front passes at t = 1.5
    (0..n)
        .map(|i| {
            let t = 1.6 + 0.7 * i as f64;
            let r = (|| {
                let p3 = lw_displacement(&mat, &traj, &prof, &Vec3::new(x.x, x.y, 0.0), t, &tol)?;
                let ui = inplane_displacement(&mat, &traj, &prof, &x, t, &tol)?;
                let ua = antiplane_displacement(&mat, &traj, &prof, &x, t, &tol)?;
                let ok = p3.amax() <= 1e-12 && ui.amax() > 1e-12 && ua.abs() > 1e-12;
                Ok(if ok { 0.0 } else { 1.0 })
            })();
            record(format!("t={t:.2}"), r)
        })
        .collect()
}

fn superposition(rng: &mut ChaCha8Rng, n: usize, _: &SuiteConfig) -> Vec<SampleRecord> {
    let tol = Tolerances { history: 1e-10, ..Tolerances::default() };
    let traj = Trajectory::stationary(Vec3::zeros());
    (0..n)
        .map(|i| {
            let mat = random_material(rng);
            let prof = ForceProfile::constant(random_vector(rng, 1.0), 0.0).unwrap();
            let a = rng.random_range(-PI..PI);
            let r = rng.random_range(0.5..2.0);
            let x = Vec2::new(a.cos(), a.sin()) * r;
            let t = r * mat.kappa_l() * rng.random_range(1.2..3.0);
            let res = (|| {
                let o = line_superposition_u(&mat, &traj, &prof, &x, t, 1e-8)?;
                let ui = inplane_displacement(&mat, &traj, &prof, &x, t, &tol)?;
                let ua = antiplane_displacement(&mat, &traj, &prof, &x, t, &tol)?;
                Ok(rel_err(&Vec3::new(ui.x, ui.y, ua), &o))
            })();
            record(format!("#{i} r={r:.3} t={t:.3}"), res)
        })
        .collect()
}

fn both_planes(c: &Case, x: &Vec2, t: f64, tol: &Tolerances) -> Result<(Vec3, Mat3, Vec3)> {
    let a = evaluate_2d(&c.mat, &c.traj, &c.prof, x, t, Plane::InPlane, tol)?;
    let b = evaluate_2d(&c.mat, &c.traj, &c.prof, x, t, Plane::AntiPlane, tol)?;
    Ok((a.u + b.u, a.beta + b.beta, a.v + b.v))
}

fn fd_2d(rng: &mut ChaCha8Rng, n: usize, _: &SuiteConfig) -> Vec<SampleRecord> {
    let tol = fine();
    (0..n)
        .map(|i| {
            let c = smooth_case(rng, 0.8, true);
            let x2 = Vec2::new(c.x.x, c.x.y);
            let r = (|| {
                let h = fd_step(separation(&c)?, front_distance(&c.mat, &c.traj, &c.prof, &c.x, c.t))?;
                let (_, beta, v) = both_planes(&c, &x2, c.t, &tol)?;
                let fd = fd_consistency(
                    |y: &Vec3, t| Ok(both_planes(&c, &Vec2::new(y.x, y.y), t, &tol)?.0),
                    &c.x,
                    c.t,
                    h,
                    h / c.mat.c_l,
                )?;
                Ok(rel_err(&beta, &fd.beta).max(rel_err(&v, &fd.v)))
            })();
            record(format!("#{i} {} {}", c.traj.kind(), c.prof.kind()), r)
        })
        .collect()
}

fn equivariance_3d(rng: &mut ChaCha8Rng, n: usize, _: &SuiteConfig) -> Vec<SampleRecord> {
    let tol = fine();
    (0..n)
        .map(|i| {
            let c = smooth_case(rng, 0.8, false);
            let rot = random_rotation(rng);
            let frame = Frame::new(rot, random_vector(rng, 3.0), rng.random_range(-2.0..2.0));
            let rm = frame.rotation;
            let r = (|| {
                let a = radiation_split(&c.mat, &c.traj, &c.prof, &c.x, c.t, &tol)?;
                let traj = c.traj.transformed(&frame);
                let prof = c.prof.transformed(&rm, frame.time_shift);
                let b = radiation_split(&c.mat, &traj, &prof, &frame.point(&c.x), c.t + frame.time_shift, &tol)?;
                Ok(rel_err(&b.u, &(rm * a.u))
                    .max(rel_err(&b.beta, &(rm * a.beta * rm.transpose())))
                    .max(rel_err(&b.v, &(rm * a.v))))
            })();
            record(format!("#{i} {} {}", c.traj.kind(), c.prof.kind()), r)
        })
        .collect()
}

fn equivariance_2d(rng: &mut ChaCha8Rng, n: usize, _: &SuiteConfig) -> Vec<SampleRecord> {
    let tol = fine();
    (0..n)
        .map(|i| {
            let c = smooth_case(rng, 0.8, true);
            let rot = Rotation3::from_axis_angle(&Unit::new_normalize(Vec3::z()), rng.random_range(-PI..PI));
            let offset = Vec3::new(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0), 0.0);
            let frame = Frame::new(rot, offset, rng.random_range(-2.0..2.0));
            let rm = frame.rotation;
            let r = (|| {
                let (ua, ba, va) = both_planes(&c, &Vec2::new(c.x.x, c.x.y), c.t, &tol)?;
                let moved = Case {
                    traj: c.traj.transformed(&frame),
                    prof: c.prof.transformed(&rm, frame.time_shift),
                    ..c.clone()
                };
                let y = frame.point(&c.x);
                let (ub, bb, vb) = both_planes(&moved, &Vec2::new(y.x, y.y), c.t + frame.time_shift, &tol)?;
                Ok(rel_err(&ub, &(rm * ua))
                    .max(rel_err(&bb, &(rm * ba * rm.transpose())))
                    .max(rel_err(&vb, &(rm * va))))
            })();
            record(format!("#{i} {} {}", c.traj.kind(), c.prof.kind()), r)
        })
        .collect()
}

fn linearity(rng: &mut ChaCha8Rng, n: usize, _: &SuiteConfig) -> Vec<SampleRecord> {
    let tol = fine();
    (0..n)
        .map(|i| {
            let planar = i % 2 == 1;
            let base = smooth_case(rng, 0.8, planar);
            let t_on = rng.random_range(-4.0..-2.0);
            let (mean, amp) = (random_vector(rng, 1.0), random_vector(rng, 1.0));
            let (omega, phase) = (rng.random_range(0.5..2.0), rng.random_range(0.0..6.0));
            let k = rng.random_range(-3.0..3.0);
            let with = |prof: ForceProfile| Case { prof, ..base.clone() };
            let full = with(ForceProfile::harmonic(mean, amp, omega, phase, t_on).unwrap());
            let c1 = with(ForceProfile::constant(mean, t_on).unwrap());
            let c2 = with(ForceProfile::harmonic(Vec3::zeros(), amp, omega, phase, t_on).unwrap());
            let scaled = with(full.prof.scaled(k));
            let eval = |c: &Case| -> Result<(Vec3, Mat3, Vec3)> {
                if planar {
                    both_planes(c, &Vec2::new(c.x.x, c.x.y), c.t, &tol)
                } else {
                    let s = radiation_split(&c.mat, &c.traj, &c.prof, &c.x, c.t, &tol)?;
                    Ok((s.u, s.beta, s.v))
                }
            };
            let r = (|| {
                let f = eval(&full)?;
                let a = eval(&c1)?;
                let b = eval(&c2)?;
                let s = eval(&scaled)?;
                Ok(rel_err(&(a.0 + b.0), &f.0)
                    .max(rel_err(&(a.1 + b.1), &f.1))
                    .max(rel_err(&(a.2 + b.2), &f.2))
                    .max(rel_err(&s.0, &(f.0 * k)))
                    .max(rel_err(&s.1, &(f.1 * k)))
                    .max(rel_err(&s.2, &(f.2 * k))))
            })();
            record(format!("#{i} {}", if planar { "2d" } else { "3d" }), r)
        })
        .collect()
}

fn source_fd(_: &mut ChaCha8Rng, n: usize, cfg: &SuiteConfig) -> Vec<SampleRecord> {
    let Some(src) = &cfg.source else { return Vec::new() };
    let tol = fine();
    let stride = (src.events.len() / n.max(1)).max(1);
    let c = Case { mat: src.mat, traj: src.traj.clone(), prof: src.prof.clone(), x: Vec3::zeros(), t: 0.0 };
    let fields = |x: &Vec3, t: f64| -> Result<(Vec3, Mat3, Vec3)> {
        match src.plane {
            None => {
                let s = radiation_split(&src.mat, &src.traj, &src.prof, x, t, &tol)?;
                Ok((s.u, s.beta, s.v))
            }
            Some(plane) => {
                let s = evaluate_2d(&src.mat, &src.traj, &src.prof, &Vec2::new(x.x, x.y), t, plane, &tol)?;
                Ok((s.u, s.beta, s.v))
            }
        }
    };
    src.events
        .iter()
        .step_by(stride)
        .take(n)
        .filter_map(|(x, t)| {
            let x = if src.plane.is_some() { Vec3::new(x.x, x.y, 0.0) } else { *x };
            let label = format!("x=({:.3}, {:.3}, {:.3}) t={t:.3}", x.x, x.y, x.z);
            let sep = match src.traj.eval(*t) {
                Ok(m) => (x - m.position).norm(),
                Err(e) => return Some(record(label, Err(e))),
            };
            // events next to a front or on the source admit no differencing step
            let h = fd_step(sep, front_distance(&c.mat, &c.traj, &c.prof, &x, *t)).ok()?;
            let r = (|| {
                let (u, beta, v) = fields(&x, *t)?;
                if u.amax() == 0.0 {
                    return Ok(0.0);
                }
                let fd = fd_consistency(|y: &Vec3, s| Ok(fields(y, s)?.0), &x, *t, h, h / src.mat.c_l)?;
                let v = if cfg.corrupt { v * 1.1 } else { v };
                Ok(rel_err(&beta, &fd.beta).max(rel_err(&v, &fd.v)))
            })();
            Some(record(label, r))
        })
        .collect()
}
