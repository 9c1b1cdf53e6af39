//! Fields of line forces parallel to x₃ moving in the (x₁, x₂) plane.
//!
//! The displacement is a history integral over emission times t′ up to a
//! retarded time, with inverse-square-root behaviour at that upper limit.
//! Every history segment is integrated in the variable w with
//! t′ = t_ret − w², which turns the endpoint singularity into a smooth
//! integrand. Gradient and time derivative are obtained in the same pass by
//! carrying forward-mode derivatives with respect to (x₁, x₂, t) through the
//! integrand, plus the boundary terms generated by the moving limits and by
//! jumps of Q.

use std::f64::consts::PI;

use nalgebra::{Matrix2, Vector2};
use serde::{Deserialize, Serialize};

use crate::dual::Dual;
use crate::error::{Error, Result};
use crate::kinematics::{planar, retarded_time_planar, ForceProfile, RetardedState, Trajectory};
use crate::material::Material;
use crate::options::Tolerances;
use crate::pointforce3d::check_subsonic;
use crate::quadrature::integrate;
use crate::{Mat3, Vec3};

pub type Vec2 = Vector2<f64>;
pub type Mat2 = Matrix2<f64>;

type D = Dual<3>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Plane {
    InPlane,
    AntiPlane,
}

/// Line-force fields embedded in 3D component layout; components that do
/// not exist for the given plane are zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldSample2D {
    pub plane: Plane,
    pub u: Vec3,
    pub beta: Mat3,
    pub v: Vec3,
}

/// Geometry of one history instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineHistoryNode {
    pub tprime: f64,
    pub tbar: f64,
    pub rvec: Vec2,
    /// sqrt(t̄² − R²/c_T²), `None` before the signal can have left.
    pub s_t: Option<f64>,
    pub s_l: Option<f64>,
}

impl LineHistoryNode {
    pub fn new(mat: &Material, traj: &Trajectory, x: &Vec2, t: f64, tprime: f64) -> Result<Self> {
        let m = planar(traj.eval(tprime)?);
        let rvec = Vec2::new(x[0] - m.position[0], x[1] - m.position[1]);
        let r = rvec.norm();
        let tbar = t - tprime;
        let s = |k: f64| {
            let a = tbar - k * r;
            (a >= 0.0).then(|| (a * (tbar + k * r)).sqrt())
        };
        Ok(Self { tprime, tbar, rvec, s_t: s(mat.kappa_t()), s_l: s(mat.kappa_l()) })
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Kernel {
    /// Both wave types present (emission before the transversal front).
    Combined,
    /// Longitudinal contribution only.
    Longitudinal,
    AntiPlane,
}

/// Upper limit of a history segment with its derivatives.
#[derive(Clone, Copy)]
struct Limit {
    st: RetardedState,
    t: D,
}

impl Limit {
    fn new(st: RetardedState) -> Self {
        let ip = 1.0 / st.pc;
        let k = st.slowness;
        Self { st, t: D::new(st.t_ret, [-k * st.rvec[0] * ip, -k * st.rvec[1] * ip, st.r * ip]) }
    }
}

struct Segment {
    kernel: Kernel,
    upper: Limit,
    /// lower limit and its derivatives
    lower: D,
}

struct Ctx<'a> {
    traj: &'a Trajectory,
    prof: &'a ForceProfile,
    x: Vec2,
    t: f64,
    kl: f64,
    kt: f64,
}

fn dvec(re: Vec3, rate: Vec3, tp: &D) -> [D; 2] {
    [0, 1].map(|a| D::new(re[a], tp.eps.map(|e| rate[a] * e)))
}

fn dot(a: &[D; 2], b: &[D; 2]) -> D {
    a[0] * b[0] + a[1] * b[1]
}

/// Kernel value; `inv_*` are 1/S or 2w/S, `s_l_w` is S_L or 2w·S_L.
#[allow(clippy::too_many_arguments)]
fn kernel(
    kind: Kernel,
    q: &[D; 3],
    rv: &[D; 2],
    r2: D,
    tbar: D,
    (s_l, s_t): (D, D),
    (inv_l, inv_t): (D, D),
    s_l_w: D,
    (kl, kt): (f64, f64),
) -> [D; 2] {
    if kind == Kernel::AntiPlane {
        return [q[2] * inv_t, D::constant(0.0)];
    }
    let rq = rv[0] * q[0] + rv[1] * q[1];
    let ir2 = r2.recip();
    // Q_β N_αβ / R², Q_α / R²
    let nq = [rv[0] * rq * ir2 * ir2, rv[1] * rq * ir2 * ir2];
    let dq = [q[0] * ir2, q[1] * ir2];
    match kind {
        Kernel::Combined => {
            let a = r2 * (kl * kl);
            let b = r2 * (kt * kt);
            let t2 = tbar * tbar;
            let kk = ((a + b) * t2 - a * b) / (t2 + s_l * s_t);
            [0, 1].map(|i| kk * (nq[i] * inv_l - (nq[i] - dq[i]) * inv_t))
        }
        Kernel::Longitudinal => {
            let t2 = tbar * tbar;
            [0, 1].map(|i| nq[i] * t2 * inv_l + (nq[i] - dq[i]) * s_l_w)
        }
        Kernel::AntiPlane => unreachable!(),
    }
}

impl Ctx<'_> {
    fn force(&self, tp: &D) -> Result<[D; 3]> {
        let (q, qd) = self.prof.eval(tp.re)?;
        Ok([0, 1, 2].map(|a| D::new(q[a], tp.eps.map(|e| qd[a] * e))))
    }

    fn observer(&self) -> [D; 2] {
        [D::variable(self.x[0], 0), D::variable(self.x[1], 1)]
    }

    /// Integrand in w for a segment.
    fn integrand(&self, seg: &Segment, w: f64) -> Result<[D; 2]> {
        let up = &seg.upper;
        let w2 = w * w;
        let mut tp = up.t;
        tp.re -= w2;
        let m = planar(self.traj.eval(tp.re)?);
        let (ds, dv) = self.traj.increment(up.st.t_ret, tp.re)?;
        let (ds, dv) = (planar_vec(ds), planar_vec(dv));
        let xo = self.observer();
        let sp = dvec(m.position, m.velocity, &tp);
        let rp = [xo[0] - sp[0], xo[1] - sp[1]];
        let rr = [0, 1].map(|a| xo[a] - D::new(up.st.position[a], up.t.eps.map(|e| up.st.velocity[a] * e)));
        let disp = dvec(ds, dv, &tp);
        let r2 = dot(&rp, &rp);
        let rnorm = r2.sqrt();
        let rrnorm = dot(&rr, &rr).sqrt();
        let proj = dot(&disp, &[rp[0] + rr[0], rp[1] + rr[1]]) / (rnorm + rrnorm);
        let mut tbar = -tp + self.t;
        tbar.eps[2] += 1.0;

        let ku = up.st.slowness;
        let f_w2 = 1.0 - proj * (ku / w2);
        let g = tbar + rnorm * ku;
        let root = (f_w2 * g).sqrt();
        // S and 2w/S at the singular slowness
        let s_u = root * w;
        let inv_u = root.recip() * 2.0;
        let q = self.force(&tp)?;
        let (kl, kt) = (self.kl, self.kt);
        let val = match seg.kernel {
            Kernel::AntiPlane => kernel(seg.kernel, &q, &rp, r2, tbar, (s_u, s_u), (inv_u, inv_u), s_u, (kl, kt)),
            Kernel::Longitudinal => {
                kernel(seg.kernel, &q, &rp, r2, tbar, (s_u, s_u), (inv_u, D::constant(0.0)), s_u * (2.0 * w), (kl, kt))
            }
            Kernel::Combined => {
                let s_l = ((tbar - rnorm * kl) * (tbar + rnorm * kl)).sqrt();
                let inv_l = s_l.recip() * (2.0 * w);
                kernel(seg.kernel, &q, &rp, r2, tbar, (s_l, s_u), (inv_l, inv_u), s_l, (kl, kt))
            }
        };
        Ok(val)
    }

    /// Kernel times Q in t′ at a regular emission instant; only values.
    fn kernel_at(&self, kind: Kernel, tprime: f64, q: Vec3) -> Result<[f64; 2]> {
        let m = planar(self.traj.eval(tprime)?);
        let rv = [D::constant(self.x[0] - m.position[0]), D::constant(self.x[1] - m.position[1])];
        let r2 = dot(&rv, &rv);
        let r = r2.re.sqrt();
        let tbar = self.t - tprime;
        if r2.re == 0.0 && kind == Kernel::Combined {
            // limit R → 0 of the combined kernel
            let c = (self.kl * self.kl + self.kt * self.kt) / (2.0 * tbar);
            return Ok([q[0] * c, q[1] * c]);
        }
        let s = |k: f64| ((tbar - k * r) * (tbar + k * r)).max(0.0).sqrt();
        let (s_l, s_t) = (s(self.kl), s(self.kt));
        let qd = [D::constant(q[0]), D::constant(q[1]), D::constant(q[2])];
        let c = D::constant;
        let inv = |x: f64| if x > 0.0 { 1.0 / x } else { 0.0 };
        let v = kernel(
            kind,
            &qd,
            &rv,
            r2,
            c(tbar),
            (c(s_l), c(s_t)),
            (c(inv(s_l)), c(inv(s_t))),
            c(s_l),
            (self.kl, self.kt),
        );
        Ok([v[0].re, v[1].re])
    }
}

fn planar_vec(mut v: Vec3) -> Vec3 {
    v[2] = 0.0;
    v
}

fn history_segments(
    mat: &Material,
    traj: &Trajectory,
    prof: &ForceProfile,
    x: &Vec2,
    t: f64,
    plane: Plane,
    tol: &Tolerances,
) -> Result<Vec<Segment>> {
    check_subsonic(mat, traj)?;
    let t_on = prof.t_on();
    if !t_on.is_finite() {
        return Err(Error::UnboundedHistory);
    }
    if t_on < traj.domain().0 {
        return Err(Error::InvalidSource(
            "the force must switch on at or after the first tabulated instant".into(),
        ));
    }
    if t <= t_on {
        return Ok(Vec::new());
    }
    let xo = Vec3::new(x[0], x[1], 0.0);
    let r_on = (xo - planar(traj.eval(t_on)?).position).norm();
    let k_on = (t - t_on) / r_on;
    let (kl, kt) = (mat.kappa_l(), mat.kappa_t());
    let ropts = tol.retarded_options();
    let on = D::constant(t_on);
    let mut segs = Vec::new();
    match plane {
        Plane::AntiPlane => {
            if k_on > kt {
                let lt = Limit::new(retarded_time_planar(traj, &xo, t, kt, &ropts)?);
                segs.push(Segment { kernel: Kernel::AntiPlane, upper: lt, lower: on });
            }
        }
        Plane::InPlane => {
            if k_on <= kl {
                return Ok(segs);
            }
            let ll = Limit::new(retarded_time_planar(traj, &xo, t, kl, &ropts)?);
            if k_on > kt {
                let lt = Limit::new(retarded_time_planar(traj, &xo, t, kt, &ropts)?);
                segs.push(Segment { kernel: Kernel::Combined, upper: lt, lower: on });
                segs.push(Segment { kernel: Kernel::Longitudinal, upper: ll, lower: lt.t });
            } else {
                segs.push(Segment { kernel: Kernel::Longitudinal, upper: ll, lower: on });
            }
        }
    }
    Ok(segs)
}

/// Value and (∂₁, ∂₂, ∂_t) derivatives of the two history-integral
/// components, before the material prefactor.
fn history(
    mat: &Material,
    traj: &Trajectory,
    prof: &ForceProfile,
    x: &Vec2,
    t: f64,
    plane: Plane,
    tol: &Tolerances,
) -> Result<[D; 2]> {
    let segs = history_segments(mat, traj, prof, x, t, plane, tol)?;
    let ctx = Ctx { traj, prof, x: *x, t, kl: mat.kappa_l(), kt: mat.kappa_t() };
    let mut total = [D::constant(0.0); 2];
    let mut instants = prof.breakpoints();
    instants.extend(traj.breakpoints());
    for seg in &segs {
        let t_ret = seg.upper.st.t_ret;
        let t_lo = seg.lower.re;
        let span = t_ret - t_lo;
        if !(span > 0.0) {
            continue;
        }
        let mut breaks = vec![0.0, (0.1 * span).sqrt(), span.sqrt()];
        for &b in &instants {
            if b > t_lo && b < t_ret {
                breaks.push((t_ret - b).sqrt());
            }
        }
        breaks.sort_by(f64::total_cmp);
        breaks.dedup();
        let res = integrate::<8, _>(
            |w| {
                let v = ctx.integrand(seg, w)?;
                let mut out = [0.0; 8];
                for a in 0..2 {
                    out[a] = v[a].re;
                    out[2 + 3 * a..5 + 3 * a].copy_from_slice(&v[a].eps);
                }
                Ok(out)
            },
            &breaks,
            &[0..2, 2..8],
            &tol.history_options(),
        )?;
        let v = res.value;
        for a in 0..2 {
            total[a] += D::new(v[a], [v[2 + 3 * a], v[3 + 3 * a], v[4 + 3 * a]]);
        }

        // moving lower limit
        let (q_lo, _) = prof.eval(t_lo)?;
        let g = ctx.kernel_at(seg.kernel, t_lo, q_lo)?;
        let rate = seg.upper.t - seg.lower;
        for a in 0..2 {
            for j in 0..3 {
                total[a].eps[j] += g[a] * rate.eps[j];
            }
        }
        // jumps of Q strictly inside the segment
        for (b, dq) in prof.jumps() {
            if b > t_lo && b < t_ret {
                let g = ctx.kernel_at(seg.kernel, b, dq)?;
                for a in 0..2 {
                    for j in 0..3 {
                        total[a].eps[j] += g[a] * seg.upper.t.eps[j];
                    }
                }
            }
        }
    }
    Ok(total)
}

/// Anti-plane displacement u₃.
pub fn antiplane_displacement(
    mat: &Material,
    traj: &Trajectory,
    prof: &ForceProfile,
    x: &Vec2,
    t: f64,
    tol: &Tolerances,
) -> Result<f64> {
    Ok(antiplane(mat, traj, prof, x, t, tol)?.0)
}

/// Anti-plane distortion (β₃₁, β₃₂) and velocity v₃.
pub fn antiplane_fields(
    mat: &Material,
    traj: &Trajectory,
    prof: &ForceProfile,
    x: &Vec2,
    t: f64,
    tol: &Tolerances,
) -> Result<(Vec2, f64)> {
    let (_, b, v) = antiplane(mat, traj, prof, x, t, tol)?;
    Ok((b, v))
}

fn antiplane(
    mat: &Material,
    traj: &Trajectory,
    prof: &ForceProfile,
    x: &Vec2,
    t: f64,
    tol: &Tolerances,
) -> Result<(f64, Vec2, f64)> {
    let h = history(mat, traj, prof, x, t, Plane::AntiPlane, tol)?[0];
    let c = 1.0 / (2.0 * PI * mat.rho * mat.c_t * mat.c_t);
    Ok((c * h.re, Vec2::new(c * h.eps[0], c * h.eps[1]), c * h.eps[2]))
}

/// In-plane displacement, distortion β_αγ = ∂_γ u_α and velocity.
pub fn inplane_fields(
    mat: &Material,
    traj: &Trajectory,
    prof: &ForceProfile,
    x: &Vec2,
    t: f64,
    tol: &Tolerances,
) -> Result<(Vec2, Mat2, Vec2)> {
    let h = history(mat, traj, prof, x, t, Plane::InPlane, tol)?;
    let c = 1.0 / (2.0 * PI * mat.rho);
    let u = Vec2::new(h[0].re, h[1].re) * c;
    let beta = Mat2::new(h[0].eps[0], h[0].eps[1], h[1].eps[0], h[1].eps[1]) * c;
    let v = Vec2::new(h[0].eps[2], h[1].eps[2]) * c;
    Ok((u, beta, v))
}

pub fn inplane_displacement(
    mat: &Material,
    traj: &Trajectory,
    prof: &ForceProfile,
    x: &Vec2,
    t: f64,
    tol: &Tolerances,
) -> Result<Vec2> {
    Ok(inplane_fields(mat, traj, prof, x, t, tol)?.0)
}

pub fn inplane_distortion(
    mat: &Material,
    traj: &Trajectory,
    prof: &ForceProfile,
    x: &Vec2,
    t: f64,
    tol: &Tolerances,
) -> Result<Mat2> {
    Ok(inplane_fields(mat, traj, prof, x, t, tol)?.1)
}

pub fn inplane_velocity(
    mat: &Material,
    traj: &Trajectory,
    prof: &ForceProfile,
    x: &Vec2,
    t: f64,
    tol: &Tolerances,
) -> Result<Vec2> {
    Ok(inplane_fields(mat, traj, prof, x, t, tol)?.2)
}

/// Fields of either line-force type in 3D component layout.
pub fn evaluate_2d(
    mat: &Material,
    traj: &Trajectory,
    prof: &ForceProfile,
    x: &Vec2,
    t: f64,
    plane: Plane,
    tol: &Tolerances,
) -> Result<FieldSample2D> {
    let mut s = FieldSample2D { plane, u: Vec3::zeros(), beta: Mat3::zeros(), v: Vec3::zeros() };
    match plane {
        Plane::InPlane => {
            let (u, b, v) = inplane_fields(mat, traj, prof, x, t, tol)?;
            for a in 0..2 {
                s.u[a] = u[a];
                s.v[a] = v[a];
                for g in 0..2 {
                    s.beta[(a, g)] = b[(a, g)];
                }
            }
        }
        Plane::AntiPlane => {
            let (u, b, v) = antiplane(mat, traj, prof, x, t, tol)?;
            s.u[2] = u;
            s.v[2] = v;
            s.beta[(2, 0)] = b[0];
            s.beta[(2, 1)] = b[1];
        }
    }
    Ok(s)
}
