//! Retarded-time solver for t − t′ − κ|x − s(t′)| = 0.

use super::trajectory::{Motion, Trajectory};
use crate::error::{Error, Result};
use crate::Vec3;

/// Solution of the retarded-time condition together with the source
/// geometry at that instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RetardedState {
    pub t_ret: f64,
    /// x − s(t_ret)
    pub rvec: Vec3,
    pub r: f64,
    pub n: Vec3,
    /// Doppler denominator R − κ V·R.
    pub pc: f64,
    pub slowness: f64,
    pub position: Vec3,
    pub velocity: Vec3,
    pub acceleration: Vec3,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RetardedOptions {
    /// Relative residual tolerance.
    pub tol: f64,
    /// Singular-point cutoff distance.
    pub r_min: f64,
    pub max_iter: usize,
}

impl Default for RetardedOptions {
    fn default() -> Self {
        Self { tol: 1e-12, r_min: 1e-9, max_iter: 200 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Method {
    Newton,
    Bisection,
}

/// Solves for the retarded time seen by the event (x, t) through waves of
/// slowness κ, with a bracketed Newton iteration.
///
/// ```
/// use elastowave::kinematics::{retarded_time, RetardedOptions, Trajectory};
/// use elastowave::Vec3;
/// let traj = Trajectory::uniform(Vec3::zeros(), Vec3::new(0.5, 0.0, 0.0));
/// let st = retarded_time(&traj, &Vec3::new(1.0, 0.0, 0.0), 0.0, 1.0, &RetardedOptions::default()).unwrap();
/// assert!((st.t_ret + 2.0).abs() < 1e-12);
/// assert!((st.pc - 1.0).abs() < 1e-12);
/// ```
pub fn retarded_time(
    traj: &Trajectory,
    x: &Vec3,
    t: f64,
    slowness: f64,
    opts: &RetardedOptions,
) -> Result<RetardedState> {
    solve_with(|s| traj.eval(s), traj.domain(), traj.vmax(), x, t, slowness, opts, Method::Newton)
}

/// Plain bisection down to floating-point resolution. Slow; used as a
/// reference for [`retarded_time`].
pub fn retarded_time_bisection(
    traj: &Trajectory,
    x: &Vec3,
    t: f64,
    slowness: f64,
    opts: &RetardedOptions,
) -> Result<RetardedState> {
    solve_with(|s| traj.eval(s), traj.domain(), traj.vmax(), x, t, slowness, opts, Method::Bisection)
}

/// Retarded time for a source restricted to the (x₁, x₂) plane.
pub fn retarded_time_planar(
    traj: &Trajectory,
    x: &Vec3,
    t: f64,
    slowness: f64,
    opts: &RetardedOptions,
) -> Result<RetardedState> {
    let xp = Vec3::new(x[0], x[1], 0.0);
    solve_with(|s| traj.eval(s).map(planar), traj.domain(), traj.vmax(), &xp, t, slowness, opts, Method::Newton)
}

pub(crate) fn planar(mut m: Motion) -> Motion {
    m.position[2] = 0.0;
    m.velocity[2] = 0.0;
    m.acceleration[2] = 0.0;
    m
}

#[allow(clippy::too_many_arguments)]
fn solve_with<M>(
    motion: M,
    (dom_lo, dom_hi): (f64, f64),
    vmax: f64,
    x: &Vec3,
    t: f64,
    kappa: f64,
    opts: &RetardedOptions,
    method: Method,
) -> Result<RetardedState>
where
    M: Fn(f64) -> Result<Motion>,
{
    if !(kappa > 0.0 && t.is_finite()) {
        return Err(Error::InvalidSource(format!("bad retarded-time query: t = {t}, κ = {kappa}")));
    }
    let vk = kappa * vmax;
    if vk >= 1.0 {
        return Err(Error::Supersonic { vmax, speed: 1.0 / kappa });
    }
    let residual = |s: f64| -> Result<(f64, f64)> {
        let m = motion(s)?;
        let rv = x - m.position;
        let r = rv.norm();
        let f = t - s - kappa * r;
        let fp = if r > 0.0 { -1.0 + kappa * rv.dot(&m.velocity) / r } else { -1.0 };
        Ok((f, fp))
    };

    let anchor = t.min(dom_hi);
    let (f_anchor, _) = residual(anchor)?;
    if f_anchor > 0.0 {
        // the signal would have to leave after the last tabulated instant
        return Err(Error::Extrapolation { t, start: dom_lo, end: dom_hi });
    }
    let base = -f_anchor;

    let mut lo = (anchor - base / (1.0 - vk)).max(dom_lo);
    let mut f_lo = residual(lo)?.0;
    let mut expand = 0;
    while f_lo < 0.0 {
        if lo <= dom_lo || expand > 64 {
            return Err(Error::NoRetardation { t });
        }
        lo = (anchor - 2.0 * (anchor - lo)).max(dom_lo);
        f_lo = residual(lo)?.0;
        expand += 1;
    }
    let mut hi = (anchor - base / (1.0 + vk)).max(lo);
    let mut f_hi = residual(hi)?.0;
    if f_hi > 0.0 {
        hi = anchor;
        f_hi = f_anchor;
    }

    let root = if f_lo == 0.0 {
        lo
    } else if f_hi == 0.0 {
        hi
    } else {
        match method {
            Method::Bisection => bisect(&residual, lo, hi)?,
            Method::Newton => newton(&residual, lo, hi, t, opts)?,
        }
    };

    let m = motion(root)?;
    let rvec = x - m.position;
    let r = rvec.norm();
    if r < opts.r_min || r == 0.0 {
        return Err(Error::SingularPoint { distance: r, r_min: opts.r_min });
    }
    Ok(RetardedState {
        t_ret: root,
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

fn bisect<F>(residual: &F, mut lo: f64, mut hi: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<(f64, f64)>,
{
    for _ in 0..400 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let (f, _) = residual(mid)?;
        if f == 0.0 {
            return Ok(mid);
        }
        if f > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

fn newton<F>(residual: &F, mut lo: f64, mut hi: f64, t: f64, opts: &RetardedOptions) -> Result<f64>
where
    F: Fn(f64) -> Result<(f64, f64)>,
{
    let mut x = 0.5 * (lo + hi);
    for _ in 0..opts.max_iter {
        let (f, fp) = residual(x)?;
        if f == 0.0 {
            return Ok(x);
        }
        if f > 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        let step = x - f / fp;
        let inside = fp < 0.0 && step > lo && step < hi;
        if f.abs() <= opts.tol * (t - x).max(1.0) {
            // one polishing step; convergence is quadratic here
            if inside {
                let (fs, _) = residual(step)?;
                if fs.abs() <= f.abs() {
                    return Ok(step);
                }
            }
            return Ok(x);
        }
        if hi - lo <= 4.0 * f64::EPSILON * lo.abs().max(hi.abs()) {
            return Ok(x);
        }
        x = if inside { step } else { 0.5 * (lo + hi) };
    }
    Err(Error::RootSolver { iterations: opts.max_iter })
}
