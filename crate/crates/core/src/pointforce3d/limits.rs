//! Closed forms for a force at a fixed position.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::kinematics::ForceProfile;
use crate::material::Material;
use crate::options::Tolerances;
use crate::quadrature::integrate;
use crate::{Mat3, Vec3};

/// Cutoff distance below which the static formulas report a singular point.
pub const KELVIN_R_MIN: f64 = 1e-9;

fn distance(rvec: &Vec3, r_min: f64) -> Result<f64> {
    let r = rvec.norm();
    if r < r_min || r == 0.0 {
        return Err(Error::SingularPoint { distance: r, r_min });
    }
    Ok(r)
}

/// Static displacement of a constant point force Q at offset `rvec`.
///
/// ```
/// use elastowave::{pointforce3d::kelvin_displacement, Material, Vec3};
/// let m = Material::from_poisson(1.0, 1.0, 0.25).unwrap();
/// let u = kelvin_displacement(&m, &Vec3::z(), &Vec3::x()).unwrap();
/// assert!((u.z - 1.0 / (6.0 * std::f64::consts::PI)).abs() < 1e-15);
/// ```
pub fn kelvin_displacement(mat: &Material, q: &Vec3, rvec: &Vec3) -> Result<Vec3> {
    let r = distance(rvec, KELVIN_R_MIN)?;
    let c = 1.0 / (16.0 * PI * mat.mu * (1.0 - mat.nu) * r);
    Ok((q * (3.0 - 4.0 * mat.nu) + rvec * (rvec.dot(q) / (r * r))) * c)
}

/// Gradient of [`kelvin_displacement`] with respect to the observer.
pub fn kelvin_gradient(mat: &Material, q: &Vec3, rvec: &Vec3) -> Result<Mat3> {
    let r = distance(rvec, KELVIN_R_MIN)?;
    let c = -1.0 / (16.0 * PI * mat.mu * (1.0 - mat.nu) * r * r * r);
    let rq = rvec.dot(q);
    let a = 3.0 - 4.0 * mat.nu;
    let mut beta = Mat3::zeros();
    for i in 0..3 {
        for k in 0..3 {
            beta[(i, k)] = c
                * (a * q[i] * rvec[k] - if i == k { rq } else { 0.0 } - q[k] * rvec[i]
                    + 3.0 * rvec[i] * rq * rvec[k] / (r * r));
        }
    }
    Ok(beta)
}

/// Retarded force values and the slowness integrals
/// J = ∫ κ Q(t − κR) dκ and K = ∫ Q(t − κR) dκ.
struct Stokes {
    q_t: Vec3,
    qd_t: Vec3,
    q_l: Vec3,
    qd_l: Vec3,
    j: Vec3,
    k: Vec3,
}

fn stokes_parts(mat: &Material, prof: &ForceProfile, r: f64, t: f64, tol: &Tolerances) -> Result<Stokes> {
    let (kl, kt) = (mat.kappa_l(), mat.kappa_t());
    let (q_t, qd_t) = prof.eval(t - kt * r)?;
    let (q_l, qd_l) = prof.eval(t - kl * r)?;
    let mut s = Stokes { q_t, qd_t, q_l, qd_l, j: Vec3::zeros(), k: Vec3::zeros() };
    if let Some(q) = prof.steady_value() {
        s.j = q * (0.5 * (kt * kt - kl * kl));
        s.k = q * (kt - kl);
        return Ok(s);
    }
    let mut k_hi = kt;
    let t_on = prof.t_on();
    if t_on.is_finite() {
        k_hi = k_hi.min((t - t_on) / r);
    }
    if k_hi <= kl {
        return Ok(s);
    }
    let mut breaks = vec![kl, k_hi];
    for b in prof.breakpoints() {
        let kb = (t - b) / r;
        if kb > kl && kb < k_hi {
            breaks.push(kb);
        }
    }
    breaks.sort_by(f64::total_cmp);
    let res = integrate::<6, _>(
        |kappa| {
            let (q, _) = prof.eval(t - kappa * r)?;
            Ok([kappa * q[0], kappa * q[1], kappa * q[2], q[0], q[1], q[2]])
        },
        &breaks,
        &[0..3, 3..6],
        &tol.kappa_options(),
    )?;
    let v = res.value;
    s.j = Vec3::new(v[0], v[1], v[2]);
    s.k = Vec3::new(v[3], v[4], v[5]);
    Ok(s)
}

/// Displacement of a fixed point force with time-dependent magnitude.
pub fn stokes_displacement(
    mat: &Material,
    prof: &ForceProfile,
    rvec: &Vec3,
    t: f64,
    tol: &Tolerances,
) -> Result<Vec3> {
    let r = distance(rvec, tol.r_min())?;
    let s = stokes_parts(mat, prof, r, t, tol)?;
    let n = rvec / r;
    let (kl, kt) = (mat.kappa_l(), mat.kappa_t());
    let far = (s.q_t - n * n.dot(&s.q_t)) * (kt * kt) + n * (n.dot(&s.q_l) * kl * kl);
    let near = n * (3.0 * n.dot(&s.j)) - s.j;
    Ok((far + near) / (4.0 * PI * mat.rho * r))
}

/// Distortion of the fixed point force split into the terms in Q (near
/// field, ~1/R²) and the terms in Q̇ (far field, ~1/R).
pub fn stokes_gradient_parts(
    mat: &Material,
    prof: &ForceProfile,
    rvec: &Vec3,
    t: f64,
    tol: &Tolerances,
) -> Result<(Mat3, Mat3)> {
    let r = distance(rvec, tol.r_min())?;
    let s = stokes_parts(mat, prof, r, t, tol)?;
    let (kl, kt) = (mat.kappa_l(), mat.kappa_t());
    let r3 = r * r * r;
    let r4 = r3 * r;
    let r5 = r4 * r;
    let w = s.q_l * (kl * kl) - s.q_t * (kt * kt);
    let wd = s.qd_l * (kl * kl * kl) - s.qd_t * (kt * kt * kt);
    let delta = |a: usize, b: usize| if a == b { 1.0 } else { 0.0 };
    let mut near = Mat3::zeros();
    let mut far = Mat3::zeros();
    for i in 0..3 {
        for k in 0..3 {
            let (mut nq, mut fq) = (0.0, 0.0);
            for j in 0..3 {
                let rrr = rvec[i] * rvec[j] * rvec[k];
                let sym = delta(i, j) * rvec[k] + delta(j, k) * rvec[i] + delta(i, k) * rvec[j];
                nq += 3.0 * (5.0 * rrr / r5 - sym / r3) * s.j[j];
                nq += (6.0 * rrr / r5 - sym / r3) * w[j];
                nq += delta(i, j) * rvec[k] * kt * kt / r3 * s.q_t[j];
                fq += delta(i, j) * rvec[k] * kt * kt / r3 * r * kt * s.qd_t[j];
                fq += rrr / r4 * wd[j];
            }
            near[(i, k)] = nq;
            far[(i, k)] = fq;
        }
    }
    let c = -1.0 / (4.0 * PI * mat.rho);
    Ok((near * c, far * c))
}

/// Distortion β_ik = ∂_k u_i of the fixed point force.
pub fn stokes_gradient(mat: &Material, prof: &ForceProfile, rvec: &Vec3, t: f64, tol: &Tolerances) -> Result<Mat3> {
    let (near, far) = stokes_gradient_parts(mat, prof, rvec, t, tol)?;
    Ok(near + far)
}

/// Particle velocity of the fixed point force.
pub fn stokes_velocity(mat: &Material, prof: &ForceProfile, rvec: &Vec3, t: f64, tol: &Tolerances) -> Result<Vec3> {
    let r = distance(rvec, tol.r_min())?;
    let s = stokes_parts(mat, prof, r, t, tol)?;
    let n = rvec / r;
    let (kl, kt) = (mat.kappa_l(), mat.kappa_t());
    // ∂_t J by parts in κ
    let dj = (s.q_l * kl - s.q_t * kt + s.k) / r;
    let far = (s.qd_t - n * n.dot(&s.qd_t)) * (kt * kt) + n * (n.dot(&s.qd_l) * kl * kl);
    let near = n * (3.0 * n.dot(&dj)) - dj;
    Ok((far + near) / (4.0 * PI * mat.rho * r))
}
