//! Fields of a point force moving along a subsonic worldline in 3D.
//!
//! The displacement is the sum of a transversal term evaluated at the
//! transversal retarded time, a longitudinal term at the longitudinal
//! retarded time and an integral over the slowness κ ∈ [1/c_L, 1/c_T] in
//! between. Each term has the form
//!
//! ```text
//! c · (a δ_ij + b n_i n_j) Q_j(t′) / P,    P = R − κ V·R
//! ```
//!
//! with (a, b, c) = (1, −1, κ_T²), (0, 1, κ_L²) and (−1, 3, κ). Distortion and
//! velocity follow by differentiating each term analytically through the
//! retarded time. Where Q jumps (for example at switch-on) the slowness
//! integrand is discontinuous at a moving κ and contributes an extra
//! boundary term.

mod limits;

use std::ops::Range;

use crate::error::{Error, Result};
use crate::kinematics::{retarded_time, ForceProfile, RetardedState, Trajectory};
use crate::material::Material;
use crate::options::Tolerances;
use crate::quadrature::{integrate, AdaptiveOptions, GaussLegendre};
use crate::{Mat3, Vec3};

pub use limits::{
    kelvin_displacement, kelvin_gradient, stokes_displacement, stokes_gradient, stokes_gradient_parts,
    stokes_velocity, KELVIN_R_MIN,
};

/// Fraction of c_T up to which accuracy is guaranteed.
pub const ACCURACY_SPEED_FRACTION: f64 = 0.95;

/// β and v grouped by the physical origin of each term.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Parts {
    /// Terms depending on position and velocity only.
    pub beta_vel: Mat3,
    /// Terms proportional to the source acceleration.
    pub beta_acc: Mat3,
    /// Terms proportional to Q̇, including impulsive contributions from jumps of Q.
    pub beta_qdot: Mat3,
    pub v_vel: Vec3,
    pub v_acc: Vec3,
    pub v_qdot: Vec3,
}

impl Parts {
    pub fn beta(&self) -> Mat3 {
        self.beta_vel + self.beta_acc + self.beta_qdot
    }

    pub fn v(&self) -> Vec3 {
        self.v_vel + self.v_acc + self.v_qdot
    }
}

/// Displacement, distortion β_ik = ∂_k u_i and particle velocity at one event.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldSample {
    pub u: Vec3,
    pub beta: Mat3,
    pub v: Vec3,
    pub parts: Option<Parts>,
}

impl FieldSample {
    pub fn zero() -> Self {
        Self { u: Vec3::zeros(), beta: Mat3::zeros(), v: Vec3::zeros(), parts: Some(Parts::default()) }
    }
}

/// Fixed Gauss–Legendre rule over the slowness interval.
#[derive(Debug, Clone, PartialEq)]
pub struct KappaQuadrature {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl KappaQuadrature {
    pub fn new(mat: &Material, n: usize) -> Self {
        let rule = GaussLegendre::new(n);
        let (nodes, weights) = rule.mapped(mat.kappa_l(), mat.kappa_t()).unzip();
        Self { nodes, weights }
    }
}

/// Adaptive integral of `f` over κ ∈ [1/c_L, 1/c_T].
pub fn kappa_integrate<const N: usize, F>(f: F, mat: &Material, tol: f64) -> Result<[f64; N]>
where
    F: FnMut(f64) -> Result<[f64; N]>,
{
    let opts = AdaptiveOptions { rel_tol: tol, ..AdaptiveOptions::default() };
    let groups: Vec<Range<usize>> = (0..N).map(|k| k..k + 1).collect();
    Ok(integrate(f, &[mat.kappa_l(), mat.kappa_t()], &groups, &opts)?.value)
}

// flat layout of the accumulated field
const U: usize = 0;
const B_VEL: usize = 3;
const B_ACC: usize = 12;
const B_QD: usize = 21;
const V_VEL: usize = 30;
const V_ACC: usize = 33;
const V_QD: usize = 36;
const FULL: usize = 39;

const TRANSVERSE: (f64, f64) = (1.0, -1.0);
const LONGITUDINAL: (f64, f64) = (0.0, 1.0);
const INTERMEDIATE: (f64, f64) = (-1.0, 3.0);

/// Adds `c·(aδ + b nn)Q/P` and, for a full layout, its derivatives.
fn add_term(out: &mut [f64], st: &RetardedState, q: &Vec3, qd: &Vec3, (a, b): (f64, f64), c: f64) {
    let rv = st.rvec;
    let r = st.r;
    let r2 = r * r;
    let p = st.pc;
    let ip = 1.0 / p;
    let rq = rv.dot(q);
    let mq = q * a + rv * (b * rq / r2);
    for i in 0..3 {
        out[U + i] += c * mq[i] * ip;
    }
    if out.len() < FULL {
        return;
    }
    let k = st.slowness;
    let v = st.velocity;
    let vr = v.dot(&rv);
    let ar = st.acceleration.dot(&rv);
    let v2 = v.norm_squared();
    let ip3 = ip * ip * ip;
    let mqd = qd * a + rv * (b * rv.dot(qd) / r2);

    let split = |drv: Vec3, dr: f64, dtp: f64, dip_vel: f64, dip_acc: f64| {
        let dnq = (drv * rq + rv * drv.dot(q)) / r2 - rv * (2.0 * rq * dr / (r2 * r));
        (dnq * (b * ip) + mq * dip_vel, mq * dip_acc, mqd * (dtp * ip))
    };

    for kk in 0..3 {
        let rk = rv[kk];
        let mut drv = v * (k * rk * ip);
        drv[kk] += 1.0;
        let dip_vel = -((1.0 - k * k * v2) * rk - k * p * v[kk]) * ip3;
        let dip_acc = -k * k * ar * rk * ip3;
        let (vel, acc, qdot) = split(drv, rk * ip, -k * rk * ip, dip_vel, dip_acc);
        for i in 0..3 {
            out[B_VEL + 3 * i + kk] += c * vel[i];
            out[B_ACC + 3 * i + kk] += c * acc[i];
            out[B_QD + 3 * i + kk] += c * qdot[i];
        }
    }
    let dip_vel = (vr - k * r * v2) * ip3;
    let dip_acc = k * r * ar * ip3;
    let (vel, acc, qdot) = split(-v * (r * ip), -vr * ip, r * ip, dip_vel, dip_acc);
    for i in 0..3 {
        out[V_VEL + i] += c * vel[i];
        out[V_ACC + i] += c * acc[i];
        out[V_QD + i] += c * qdot[i];
    }
}

/// Boundary term of the slowness integral where Q jumps by `dq`.
fn add_jump(out: &mut [f64], st: &RetardedState, dq: &Vec3) {
    let kb = st.slowness;
    let rv = st.rvec;
    let r = st.r;
    let (a, b) = INTERMEDIATE;
    let g = (dq * a + rv * (b * rv.dot(dq) / (r * r))) * (kb / st.pc);
    for kk in 0..3 {
        let s = -kb * rv[kk] / (r * r);
        for i in 0..3 {
            out[B_QD + 3 * i + kk] += g[i] * s;
        }
    }
    for i in 0..3 {
        out[V_QD + i] += g[i] / r;
    }
}

struct Plan {
    /// Upper end of the active slowness range (κ_T or the switch-on slowness).
    k_hi: f64,
    /// Slowness sub-intervals.
    breaks: Vec<f64>,
    /// States at the instants where Q jumps, with the jump.
    jumps: Vec<(RetardedState, Vec3)>,
}

pub(crate) fn check_subsonic(mat: &Material, traj: &Trajectory) -> Result<()> {
    if traj.vmax() >= mat.c_t {
        return Err(Error::Supersonic { vmax: traj.vmax(), speed: mat.c_t });
    }
    Ok(())
}

/// True when the source speed exceeds the guaranteed-accuracy range.
pub fn accuracy_flagged(mat: &Material, traj: &Trajectory) -> bool {
    traj.vmax() > ACCURACY_SPEED_FRACTION * mat.c_t
}

/// State of the source at a given emission instant `b`, seen from `x` at `t`.
fn state_at(traj: &Trajectory, x: &Vec3, t: f64, b: f64, r_min: f64) -> Result<RetardedState> {
    let m = traj.eval(b)?;
    let rvec = x - m.position;
    let r = rvec.norm();
    if r < r_min || r == 0.0 {
        return Err(Error::SingularPoint { distance: r, r_min });
    }
    let kappa = (t - b) / r;
    Ok(RetardedState {
        t_ret: b,
        rvec,
        r,
        n: rvec / r,
        pc: r - kappa * m.velocity.dot(&rvec),
        slowness: kappa,
        position: m.position,
        velocity: m.velocity,
        acceleration: m.acceleration,
    })
}

fn plan(
    mat: &Material,
    traj: &Trajectory,
    prof: &ForceProfile,
    x: &Vec3,
    t: f64,
    tol: &Tolerances,
) -> Result<Option<Plan>> {
    check_subsonic(mat, traj)?;
    let (dom_lo, dom_hi) = traj.domain();
    let t_on = prof.t_on();
    if t_on < dom_lo {
        return Err(Error::InvalidSource(
            "the force must switch on at or after the first tabulated instant".into(),
        ));
    }
    let (kl, kt) = (mat.kappa_l(), mat.kappa_t());
    let mut k_hi = kt;
    if t_on.is_finite() {
        if t <= t_on {
            return Ok(None);
        }
        let k_on = (t - t_on) / (x - traj.eval(t_on)?.position).norm();
        if k_on <= kl {
            return Ok(None);
        }
        k_hi = k_hi.min(k_on);
    }

    let mut breaks = vec![kl, k_hi];
    let mut instants = prof.breakpoints();
    instants.extend(traj.breakpoints());
    for b in instants {
        if !(b < t && b >= dom_lo && b <= dom_hi) {
            continue;
        }
        let kb = (t - b) / (x - traj.eval(b)?.position).norm();
        if kb > kl && kb < k_hi {
            breaks.push(kb);
        }
    }
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();

    let mut jumps = Vec::new();
    for (b, dq) in prof.jumps() {
        if !(b < t && b >= dom_lo && b <= dom_hi) {
            continue;
        }
        let kb = (t - b) / (x - traj.eval(b)?.position).norm();
        if kb > kl && kb < kt {
            jumps.push((state_at(traj, x, t, b, tol.r_min())?, dq));
        }
    }
    Ok(Some(Plan { k_hi, breaks, jumps }))
}

fn accumulate<const N: usize>(
    mat: &Material,
    traj: &Trajectory,
    prof: &ForceProfile,
    x: &Vec3,
    t: f64,
    tol: &Tolerances,
) -> Result<Option<[f64; N]>> {
    let Some(plan) = plan(mat, traj, prof, x, t, tol)? else {
        return Ok(None);
    };
    let ropts = tol.retarded_options();
    let (kl, kt) = (mat.kappa_l(), mat.kappa_t());
    let mut acc = [0.0; N];

    if plan.k_hi >= kt {
        let st = retarded_time(traj, x, t, kt, &ropts)?;
        let (q, qd) = prof.eval(st.t_ret)?;
        add_term(&mut acc, &st, &q, &qd, TRANSVERSE, kt * kt);
    }
    let st = retarded_time(traj, x, t, kl, &ropts)?;
    let (q, qd) = prof.eval(st.t_ret)?;
    add_term(&mut acc, &st, &q, &qd, LONGITUDINAL, kl * kl);

    let groups: &[Range<usize>] =
        if N == FULL { &[U..U + 3, B_VEL..B_QD + 9, V_VEL..V_QD + 3] } else { &[U..U + 3] };
    let integral = integrate::<N, _>(
        |kappa| {
            let st = retarded_time(traj, x, t, kappa, &ropts)?;
            let (q, qd) = prof.eval(st.t_ret)?;
            let mut out = [0.0; N];
            add_term(&mut out, &st, &q, &qd, INTERMEDIATE, kappa);
            Ok(out)
        },
        &plan.breaks,
        groups,
        &tol.kappa_options(),
    )?;
    for k in 0..N {
        acc[k] += integral.value[k];
    }
    if N == FULL {
        for (st, dq) in &plan.jumps {
            add_jump(&mut acc, st, dq);
        }
    }
    let scale = 1.0 / (4.0 * std::f64::consts::PI * mat.rho);
    for a in &mut acc {
        *a *= scale;
    }
    Ok(Some(acc))
}

/// Displacement u(x, t). Zero before the first arrival.
pub fn lw_displacement(
    mat: &Material,
    traj: &Trajectory,
    prof: &ForceProfile,
    x: &Vec3,
    t: f64,
    tol: &Tolerances,
) -> Result<Vec3> {
    Ok(accumulate::<3>(mat, traj, prof, x, t, tol)?.map_or_else(Vec3::zeros, |a| Vec3::new(a[0], a[1], a[2])))
}

/// Displacement, distortion and velocity with their decomposition into
/// velocity-, acceleration- and force-rate terms.
pub fn radiation_split(
    mat: &Material,
    traj: &Trajectory,
    prof: &ForceProfile,
    x: &Vec3,
    t: f64,
    tol: &Tolerances,
) -> Result<FieldSample> {
    let Some(a) = accumulate::<FULL>(mat, traj, prof, x, t, tol)? else {
        return Ok(FieldSample::zero());
    };
    let mat3 = |o: usize| Mat3::from_row_slice(&a[o..o + 9]);
    let vec3 = |o: usize| Vec3::new(a[o], a[o + 1], a[o + 2]);
    let parts = Parts {
        beta_vel: mat3(B_VEL),
        beta_acc: mat3(B_ACC),
        beta_qdot: mat3(B_QD),
        v_vel: vec3(V_VEL),
        v_acc: vec3(V_ACC),
        v_qdot: vec3(V_QD),
    };
    Ok(FieldSample { u: vec3(U), beta: parts.beta(), v: parts.v(), parts: Some(parts) })
}

/// Alias of [`radiation_split`]; all fields share the retarded states.
pub fn evaluate(
    mat: &Material,
    traj: &Trajectory,
    prof: &ForceProfile,
    x: &Vec3,
    t: f64,
    tol: &Tolerances,
) -> Result<FieldSample> {
    radiation_split(mat, traj, prof, x, t, tol)
}

/// Elastic distortion β_ik = ∂_k u_i.
pub fn lw_distortion(
    mat: &Material,
    traj: &Trajectory,
    prof: &ForceProfile,
    x: &Vec3,
    t: f64,
    tol: &Tolerances,
) -> Result<Mat3> {
    Ok(radiation_split(mat, traj, prof, x, t, tol)?.beta)
}

/// Particle velocity ∂_t u.
pub fn lw_velocity(
    mat: &Material,
    traj: &Trajectory,
    prof: &ForceProfile,
    x: &Vec3,
    t: f64,
    tol: &Tolerances,
) -> Result<Vec3> {
    Ok(radiation_split(mat, traj, prof, x, t, tol)?.v)
}
