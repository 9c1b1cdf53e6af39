//! Acceptance suite. Each criterion prints one PASS/FAIL line with its worst
//! error, tolerance and runtime; the process fails if any criterion fails.

use std::f64::consts::PI;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use elastowave::cli::{FieldGrid, COLUMNS};
use elastowave::kinematics::{
    retarded_time, retarded_time_bisection, ForceProfile, Frame, RetardedOptions, Trajectory,
};
use elastowave::lineforce2d::{antiplane_displacement, antiplane_fields, evaluate_2d, inplane_displacement, Plane, Vec2};
use elastowave::pointforce3d::{lw_displacement, lw_distortion, radiation_split, stokes_displacement, stokes_gradient};
use elastowave::verify::cases::{random_material, random_rotation, random_smooth_trajectory, random_unit, random_vector, smooth_case, Case};
use elastowave::verify::{
    convergence_order, fd_consistency, fd_step, front_distance, mollified_convolution_u, navier_residual, rel_err,
};
use elastowave::{Mat3, Material, Tolerances, Vec3};
use nalgebra::{Rotation3, Unit};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Named error metric against its threshold.
struct Metric {
    name: &'static str,
    value: f64,
    tol: f64,
}

impl Metric {
    fn ok(&self) -> bool {
        self.value <= self.tol
    }
}

type Outcome = Result<Vec<Metric>, String>;

fn m(name: &'static str, value: f64, tol: f64) -> Metric {
    Metric { name, value: if value.is_nan() { f64::INFINITY } else { value }, tol }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn fine() -> Tolerances {
    Tolerances { kappa: 1e-12, history: 1e-12, ..Tolerances::default() }
}

fn separation(c: &Case) -> f64 {
    (c.x - c.traj.eval(c.t).unwrap().position).norm()
}

fn stokes_limit() -> Outcome {
    let mut r = rng(1);
    let tol = Tolerances::default();
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let mat = random_material(&mut r);
        let p = random_vector(&mut r, 1.0);
        let q = random_vector(&mut r, 1.0);
        let t_on = r.random_range(-3.0..-1.0);
        let prof = match r.random_range(0..4) {
            0 => ForceProfile::constant(q, t_on),
            1 => ForceProfile::harmonic(q, random_vector(&mut r, 1.0), r.random_range(0.5..3.0), 0.3, t_on),
            2 => ForceProfile::ramp(q, t_on, r.random_range(0.3..2.0)),
            _ => ForceProfile::polynomial(vec![q, random_vector(&mut r, 1.0), random_vector(&mut r, 0.3)], t_on),
        }
        .unwrap();
        let traj = Trajectory::stationary(p);
        let x = p + random_vector(&mut r, 2.0);
        let t = r.random_range(0.0..2.0);
        let u = lw_displacement(&mat, &traj, &prof, &x, t, &tol).map_err(|e| e.to_string())?;
        let b = lw_distortion(&mat, &traj, &prof, &x, t, &tol).map_err(|e| e.to_string())?;
        let us = stokes_displacement(&mat, &prof, &(x - p), t, &tol).map_err(|e| e.to_string())?;
        let bs = stokes_gradient(&mat, &prof, &(x - p), t, &tol).map_err(|e| e.to_string())?;
        worst = worst.max(rel_err(&u, &us)).max(rel_err(&b, &bs));
    }
    Ok(vec![m("max rel err", worst, 1e-10)])
}

/// Static point-force solution and its gradient, written out by hand.
fn kelvin_oracle(mat: &Material, q: &Vec3, x: &Vec3) -> (Vec3, Mat3) {
    let r = x.norm();
    let c = 1.0 / (16.0 * PI * mat.mu * (1.0 - mat.nu));
    let a = 3.0 - 4.0 * mat.nu;
    let xq = x.dot(q);
    let u = (q * (a / r) + x * (xq / r.powi(3))) * c;
    let mut b = Mat3::zeros();
    for i in 0..3 {
        for k in 0..3 {
            let d = if i == k { 1.0 } else { 0.0 };
            b[(i, k)] = c
                * (-a * q[i] * x[k] / r.powi(3) + (d * xq + x[i] * q[k]) / r.powi(3)
                    - 3.0 * x[i] * xq * x[k] / r.powi(5));
        }
    }
    (u, b)
}

fn kelvin_limit() -> Outcome {
    let mut r = rng(2);
    let tol = Tolerances::default();
    let traj = Trajectory::stationary(Vec3::zeros());
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let mat = Material::from_poisson(r.random_range(0.5..3.0), r.random_range(0.2..5.0), r.random_range(0.0..0.49))
            .map_err(|e| e.to_string())?;
        let q = random_vector(&mut r, 3.0);
        let x = random_unit(&mut r) * r.random_range(0.1..10.0);
        let prof = ForceProfile::steady(q);
        let u = lw_displacement(&mat, &traj, &prof, &x, 0.0, &tol).map_err(|e| e.to_string())?;
        let b = lw_distortion(&mat, &traj, &prof, &x, 0.0, &tol).map_err(|e| e.to_string())?;
        let (uk, bk) = kelvin_oracle(&mat, &q, &x);
        worst = worst.max(rel_err(&u, &uk)).max(rel_err(&b, &bk));
    }
    let mat = Material::from_poisson(1.0, 1.0, 0.25).map_err(|e| e.to_string())?;
    let prof = ForceProfile::steady(Vec3::z());
    let x = Vec3::z();
    let u3 = lw_displacement(&mat, &traj, &prof, &x, 0.0, &tol).map_err(|e| e.to_string())?.z;
    let b33 = lw_distortion(&mat, &traj, &prof, &x, 0.0, &tol).map_err(|e| e.to_string())?[(2, 2)];
    let w = 1.0 / (4.0 * PI);
    let canonical = ((u3 - w).abs() / w).max((b33 + w).abs() / w);
    Ok(vec![m("max rel err", worst, 1e-12), m("u3, b33 vs 1/(4 pi)", canonical, 1e-12)])
}

fn fd_consistency_3d() -> Outcome {
    let mut r = rng(3);
    let tol = fine();
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let c = smooth_case(&mut r, 0.8, false);
        let h = fd_step(separation(&c), front_distance(&c.mat, &c.traj, &c.prof, &c.x, c.t)).map_err(|e| e.to_string())?;
        let s = radiation_split(&c.mat, &c.traj, &c.prof, &c.x, c.t, &tol).map_err(|e| e.to_string())?;
        let fd = fd_consistency(
            |y: &Vec3, t| lw_displacement(&c.mat, &c.traj, &c.prof, y, t, &tol),
            &c.x,
            c.t,
            h,
            h / c.mat.c_l,
        )
        .map_err(|e| e.to_string())?;
        worst = worst.max(rel_err(&s.beta, &fd.beta)).max(rel_err(&s.v, &fd.v));
    }
    Ok(vec![m("max rel err", worst, 1e-5)])
}

fn navier() -> Outcome {
    let mut r = rng(4);
    let tol = fine();
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let c = smooth_case(&mut r, 0.8, false);
        let h = fd_step(separation(&c), front_distance(&c.mat, &c.traj, &c.prof, &c.x, c.t)).map_err(|e| e.to_string())?;
        let res = navier_residual(
            &c.mat,
            |y: &Vec3, t| {
                let s = radiation_split(&c.mat, &c.traj, &c.prof, y, t, &tol)?;
                Ok((s.beta, s.v))
            },
            &c.x,
            c.t,
            h,
            h / c.mat.c_l,
        )
        .map_err(|e| e.to_string())?;
        worst = worst.max(res.relative);
    }
    Ok(vec![m("max relative residual", worst, 1e-3)])
}

fn mollified() -> Outcome {
    let mut r = rng(5);
    let widths = [0.02, 0.01, 0.005, 0.0025];
    let (mut finest, mut slope_dev) = (0.0f64, 0.0f64);
    for i in 0..5 {
        let mat = random_material(&mut r);
        let speed = 0.5 * mat.c_t;
        let traj = match i {
            0 => Trajectory::stationary(Vec3::zeros()),
            1 => Trajectory::uniform(Vec3::zeros(), random_unit(&mut r) * speed),
            2 => Trajectory::accelerating(Vec3::zeros(), -1.5, -0.5, random_unit(&mut r) * speed).unwrap(),
            3 => Trajectory::oscillatory(Vec3::zeros(), Vec3::zeros(), random_unit(&mut r) * (speed / 1.5), 1.5, 0.2),
            _ => Trajectory::accelerating(Vec3::zeros(), 0.0, 1.0, random_unit(&mut r) * speed).unwrap(),
        };
        let prof = ForceProfile::harmonic(
            random_vector(&mut r, 1.0),
            random_vector(&mut r, 0.5),
            r.random_range(1.0..2.0),
            r.random_range(0.0..6.0),
            f64::NEG_INFINITY,
        )
        .unwrap();
        let t = if i == 4 { 1.4 } else { r.random_range(0.0..2.0) };
        let x = traj.eval(t).unwrap().position + random_unit(&mut r) * r.random_range(0.8..2.0);
        let exact = lw_displacement(&mat, &traj, &prof, &x, t, &fine()).map_err(|e| e.to_string())?;
        let mut errs = Vec::new();
        for &e in &widths {
            let u = mollified_convolution_u(&mat, &traj, &prof, &x, t, e).map_err(|e| e.to_string())?;
            errs.push((u - exact).norm() / exact.norm());
        }
        finest = finest.max(errs[3]);
        slope_dev = slope_dev.max((convergence_order(&widths, &errs) - 2.0).abs());
    }
    Ok(vec![m("rel err at finest eps", finest, 1e-4), m("|order - 2|", slope_dev, 0.2)])
}

fn radiation() -> Outcome {
    let mut r = rng(6);
    let tol = Tolerances::default();
    let mut acc = 0.0f64;
    for _ in 0..10 {
        let mat = random_material(&mut r);
        let traj = Trajectory::uniform(random_vector(&mut r, 1.0), random_unit(&mut r) * (0.9 * mat.c_t));
        let prof = ForceProfile::ramp(random_vector(&mut r, 1.0), -2.0, 0.7).unwrap();
        let t = r.random_range(0.0..2.0);
        let x = traj.eval(t).unwrap().position + random_vector(&mut r, 2.0);
        let p = radiation_split(&mat, &traj, &prof, &x, t, &tol).map_err(|e| e.to_string())?.parts.unwrap();
        acc = acc.max(p.beta_acc.amax()).max(p.v_acc.amax());
    }

    // cL = 2 cT; R chosen so that T and L waves both arrive in phase at R
    // and 2R, with observation times shifted by R/cT
    let mat = Material::from_poisson(1.0, 1.0, 1.0 / 3.0).unwrap();
    let omega = 10.0;
    let kt = mat.kappa_t();
    let dist = 4.0 * PI * 80.0 / (omega * kt);
    let tol = Tolerances { kappa: 1e-8, max_panels: 20_000, ..Tolerances::default() };
    let mut ratio_dev = 0.0f64;
    for _ in 0..3 {
        let n = random_unit(&mut r);
        let amp = (n + random_vector(&mut r, 0.5)).normalize() * 0.01;
        let phase = r.random_range(0.0..6.0);
        let traj = Trajectory::oscillatory(Vec3::zeros(), Vec3::zeros(), amp, omega, phase);
        let prof = ForceProfile::steady(random_unit(&mut r));
        let t1 = dist * kt + (PI / 2.0 - phase) / omega;
        let near = radiation_split(&mat, &traj, &prof, &(n * dist), t1, &tol).map_err(|e| e.to_string())?;
        let far = radiation_split(&mat, &traj, &prof, &(n * (2.0 * dist)), t1 + dist * kt, &tol)
            .map_err(|e| e.to_string())?;
        let ratio = far.parts.unwrap().beta_acc.norm() / near.parts.unwrap().beta_acc.norm();
        ratio_dev = ratio_dev.max((ratio - 0.5).abs() / 0.5);
    }
    Ok(vec![m("|acc part|, uniform motion", acc, 0.0), m("far-field ratio deviation", ratio_dev, 1e-2)])
}

fn retarded_solver() -> Outcome {
    let mut r = rng(7);
    let opts = RetardedOptions::default();
    let mut worst = 0.0f64;
    let mut violations = 0usize;
    for _ in 0..1000 {
        let mat = random_material(&mut r);
        let traj = random_smooth_trajectory(&mut r, &mat, 0.95, false);
        let x = random_vector(&mut r, 5.0);
        let t = r.random_range(-5.0..5.0);
        let (kl, kt) = (mat.kappa_l(), mat.kappa_t());
        let mut ks: Vec<f64> = (0..3).map(|_| r.random_range(kl..=kt)).collect();
        ks.sort_by(f64::total_cmp);
        let mut prev = f64::INFINITY;
        for &k in &ks {
            let a = retarded_time(&traj, &x, t, k, &opts).map_err(|e| e.to_string())?;
            let b = retarded_time_bisection(&traj, &x, t, k, &opts).map_err(|e| e.to_string())?;
            worst = worst.max((a.t_ret - b.t_ret).abs() / a.t_ret.abs().max(1.0));
            let residual = t - a.t_ret - k * (x - traj.eval(a.t_ret).unwrap().position).norm();
            worst = worst.max(residual.abs() / t.abs().max(1.0));
            if !(a.pc > 0.0 && b.pc > 0.0 && a.t_ret <= prev) {
                violations += 1;
            }
            prev = a.t_ret;
        }
    }
    Ok(vec![m("newton vs bisection", worst, 1e-12), m("monotonicity / P_c violations", violations as f64, 0.0)])
}

fn antiplane_closed_form() -> Outcome {
    let mut r = rng(8);
    let tol = Tolerances::default();
    let traj = Trajectory::stationary(Vec3::zeros());
    let (mut eu, mut ed) = (0.0f64, 0.0f64);
    for _ in 0..100 {
        let mat = random_material(&mut r);
        let q0 = 2.0 * PI * mat.rho * mat.c_t * mat.c_t;
        let prof = ForceProfile::constant(Vec3::new(0.0, 0.0, q0), 0.0).unwrap();
        let a = r.random_range(-PI..PI);
        let rr = r.random_range(0.2..3.0);
        let x = Vec2::new(a.cos(), a.sin()) * rr;
        let t = rr / mat.c_t * r.random_range(1.02..20.0);
        let ct = mat.c_t * t;
        let u = antiplane_displacement(&mat, &traj, &prof, &x, t, &tol).map_err(|e| e.to_string())?;
        let (b, v) = antiplane_fields(&mat, &traj, &prof, &x, t, &tol).map_err(|e| e.to_string())?;
        let root = (ct * ct - rr * rr).sqrt();
        eu = eu.max((u - (ct / rr).acosh()).abs());
        let v_exact = mat.c_t / root;
        let br_exact = -ct / (rr * root);
        let br = b.dot(&x) / rr;
        let bt = b.dot(&Vec2::new(-x.y, x.x)) / rr;
        ed = ed
            .max((v - v_exact).abs() / v_exact)
            .max((br - br_exact).abs() / br_exact.abs())
            .max(bt.abs() / br_exact.abs());
    }
    Ok(vec![m("u3 abs err", eu, 1e-8), m("v3, beta3r rel err", ed, 1e-6)])
}

fn afterglow() -> Outcome {
    let tol = Tolerances::default();
    let mat = Material::from_poisson(1.0, 1.0, 0.25).unwrap();
    let traj = Trajectory::stationary(Vec3::zeros());
    let prof = ForceProfile::pulse(Vec3::new(1.0, 0.5, 1.0), 0.0, 0.5).unwrap();
    let x = Vec2::new(0.6, 0.8);
    let x3 = Vec3::new(0.6, 0.8, 0.0);
    let err = |e: elastowave::Error| e.to_string();
    // the pulse is felt in 3D while the transversal wave passes
    let during = lw_displacement(&mat, &traj, &prof, &x3, 1.2, &tol).map_err(err)?.amax();
    // trailing transversal front passes at t = 1.5
    let mut misclassified = if during > 1e-12 { 0 } else { 1 };
    let mut window = 0.0;
    for i in 1..=30 {
        let t = 1.5 + 0.1 * i as f64;
        let p = lw_displacement(&mat, &traj, &prof, &x3, t, &tol).map_err(err)?.amax();
        let ui = inplane_displacement(&mat, &traj, &prof, &x, t, &tol).map_err(err)?.amax();
        let ua = antiplane_displacement(&mat, &traj, &prof, &x, t, &tol).map_err(err)?.abs();
        if p > 1e-12 || ui <= 1e-12 || ua <= 1e-12 {
            misclassified += 1;
        } else {
            window = t - 1.5;
        }
    }
    println!("      2D tail persists at least {window:.1} time units after the trailing front; 3D field is zero there");
    Ok(vec![m("misclassified events", misclassified as f64, 0.0)])
}

fn all_fields(c: &Case, planar: bool, x: &Vec3, t: f64, tol: &Tolerances) -> Result<(Vec3, Mat3, Vec3), String> {
    if planar {
        let x2 = Vec2::new(x.x, x.y);
        let a = evaluate_2d(&c.mat, &c.traj, &c.prof, &x2, t, Plane::InPlane, tol).map_err(|e| e.to_string())?;
        let b = evaluate_2d(&c.mat, &c.traj, &c.prof, &x2, t, Plane::AntiPlane, tol).map_err(|e| e.to_string())?;
        Ok((a.u + b.u, a.beta + b.beta, a.v + b.v))
    } else {
        let s = radiation_split(&c.mat, &c.traj, &c.prof, x, t, tol).map_err(|e| e.to_string())?;
        Ok((s.u, s.beta, s.v))
    }
}

fn triple_err(a: &(Vec3, Mat3, Vec3), b: &(Vec3, Mat3, Vec3)) -> f64 {
    rel_err(&a.0, &b.0).max(rel_err(&a.1, &b.1)).max(rel_err(&a.2, &b.2))
}

fn equivariance_linearity() -> Outcome {
    let mut r = rng(10);
    let tol = Tolerances { kappa: 1e-13, history: 1e-12, ..Tolerances::default() };
    let (mut eq, mut lin) = (0.0f64, 0.0f64);
    for i in 0..12 {
        let planar = i % 2 == 1;
        let c = smooth_case(&mut r, 0.8, planar);
        let (rot, offset) = if planar {
            let rot = Rotation3::from_axis_angle(&Unit::new_normalize(Vec3::z()), r.random_range(-PI..PI));
            (rot, Vec3::new(r.random_range(-2.0..2.0), r.random_range(-2.0..2.0), 0.0))
        } else {
            (random_rotation(&mut r), random_vector(&mut r, 3.0))
        };
        let frame = Frame::new(rot, offset, r.random_range(-2.0..2.0));
        let rm = frame.rotation;
        let base = all_fields(&c, planar, &c.x, c.t, &tol)?;
        let moved = Case { traj: c.traj.transformed(&frame), prof: c.prof.transformed(&rm, frame.time_shift), ..c.clone() };
        let seen = all_fields(&moved, planar, &frame.point(&c.x), c.t + frame.time_shift, &tol)?;
        eq = eq.max(triple_err(&seen, &(rm * base.0, rm * base.1 * rm.transpose(), rm * base.2)));

        let t_on = r.random_range(-4.0..-2.0);
        let (mean, amp) = (random_vector(&mut r, 1.0), random_vector(&mut r, 1.0));
        let (omega, phase, k) = (r.random_range(0.5..2.0), r.random_range(0.0..6.0), r.random_range(-3.0..3.0));
        let with = |prof: ForceProfile| Case { prof, ..c.clone() };
        let full = with(ForceProfile::harmonic(mean, amp, omega, phase, t_on).unwrap());
        let f = all_fields(&full, planar, &c.x, c.t, &tol)?;
        let a = all_fields(&with(ForceProfile::constant(mean, t_on).unwrap()), planar, &c.x, c.t, &tol)?;
        let b = all_fields(&with(ForceProfile::harmonic(Vec3::zeros(), amp, omega, phase, t_on).unwrap()), planar, &c.x, c.t, &tol)?;
        let s = all_fields(&with(full.prof.scaled(k)), planar, &c.x, c.t, &tol)?;
        lin = lin.max(triple_err(&(a.0 + b.0, a.1 + b.1, a.2 + b.2), &f)).max(triple_err(&s, &(f.0 * k, f.1 * k, f.2 * k)));
    }
    Ok(vec![m("equivariance rel err", eq, 1e-10), m("linearity rel err", lin, 1e-10)])
}

const CLI_CONFIG: &str = "\
material.mu = 1
material.nu = 0.25
trajectory.preset = oscillatory
trajectory.amplitude = 0.2, 0, 0.1
trajectory.omega = 1.5
force.preset = harmonic
force.mean = 0, 0, 1
force.amplitude = 0.3, 0, 0
force.omega = 2
grid.x1 = 1, 2, 2
grid.x2 = -1, 1, 2
grid.x3 = 0.5, 1, 2
grid.t = 1, 2, 2
";

fn cli_reproducibility() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let cfg = dir.path().join("run.conf");
    std::fs::write(&cfg, CLI_CONFIG).map_err(|e| e.to_string())?;
    let run = |out: &str, threads: &str| -> Result<String, String> {
        let path = dir.path().join(out);
        let status = Command::new(env!("CARGO_BIN_EXE_elastowave"))
            .args(["sample", "--seed", "42", "--threads", threads, "--config"])
            .arg(&cfg)
            .arg("--out")
            .arg(&path)
            .status()
            .map_err(|e| e.to_string())?;
        if !status.success() {
            return Err(format!("sample exited with {status}"));
        }
        std::fs::read_to_string(&path).map_err(|e| e.to_string())
    };
    let a = run("a.csv", "1")?;
    let b = run("b.csv", "4")?;
    let grid = FieldGrid::from_csv(&a).map_err(|e| e.to_string())?;
    let mut bad = 0usize;
    bad += usize::from(a != b);
    bad += usize::from(grid.to_csv() != a);
    bad += usize::from(grid.rows.len() != 16);
    bad += usize::from(a.lines().nth(1) != Some(COLUMNS.join(",").as_str()));
    bad += usize::from(!a.starts_with(&format!("# elastowave {} config_hash=", env!("CARGO_PKG_VERSION"))));
    bad += grid.rows.iter().filter(|r| r.mask || r.u.iter().all(|v| *v == 0.0)).count();
    Ok(vec![m("schema / reproducibility violations", bad as f64, 0.0)])
}

struct Criterion {
    id: u32,
    name: &'static str,
    budget: Duration,
    run: fn() -> Outcome,
}

fn main() -> ExitCode {
    let criteria = [
        Criterion { id: 1, name: "stokes-limit", budget: Duration::from_secs(5), run: stokes_limit },
        Criterion { id: 2, name: "kelvin-limit", budget: Duration::from_secs(2), run: kelvin_limit },
        Criterion { id: 3, name: "fd-consistency", budget: Duration::from_secs(60), run: fd_consistency_3d },
        Criterion { id: 4, name: "navier-residual", budget: Duration::from_secs(60), run: navier },
        Criterion { id: 5, name: "mollified-convergence", budget: Duration::from_secs(120), run: mollified },
        Criterion { id: 6, name: "radiation-structure", budget: Duration::from_secs(10), run: radiation },
        Criterion { id: 7, name: "retarded-solver", budget: Duration::from_secs(5), run: retarded_solver },
        Criterion { id: 8, name: "antiplane-closed-form", budget: Duration::from_secs(5), run: antiplane_closed_form },
        Criterion { id: 9, name: "afterglow-2d", budget: Duration::from_secs(10), run: afterglow },
        Criterion { id: 10, name: "equivariance-linearity", budget: Duration::from_secs(10), run: equivariance_linearity },
        Criterion { id: 11, name: "cli-reproducibility", budget: Duration::from_secs(5), run: cli_reproducibility },
    ];
    let filters: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for c in &criteria {
        if !filters.is_empty() && !filters.iter().any(|f| c.name.contains(f.as_str()) || "acceptance".contains(f.as_str())) {
            continue;
        }
        let start = Instant::now();
        let outcome = (c.run)();
        let elapsed = start.elapsed();
        let in_time = elapsed <= c.budget;
        let (pass, detail) = match &outcome {
            Ok(metrics) => (
                in_time && metrics.iter().all(Metric::ok),
                metrics.iter().map(|m| format!("{}={:.3e} (tol {:.0e})", m.name, m.value, m.tol)).collect::<Vec<_>>().join(", "),
            ),
            Err(e) => (false, format!("error: {e}")),
        };
        if !pass {
            failed += 1;
        }
        println!(
            "[{}] {:>2} {:<24} {:>7.2}s / {:>3}s  {detail}",
            if pass { "PASS" } else { "FAIL" },
            c.id,
            c.name,
            elapsed.as_secs_f64(),
            c.budget.as_secs()
        );
    }
    println!("acceptance: {} failed", failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
