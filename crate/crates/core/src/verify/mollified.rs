use std::f64::consts::{PI, SQRT_2};

use crate::error::{Error, Result};
use crate::kinematics::{retarded_time, ForceProfile, Trajectory};
use crate::material::Material;
use crate::options::Tolerances;
use crate::quadrature::{integrate, AdaptiveOptions};
use crate::{Mat3, Vec3};

/// Gaussian half-widths kept on each side of a pulse.
const WIDTHS: f64 = 12.0;

fn gauss(z: f64, eps: f64) -> f64 {
    (-0.5 * (z / eps).powi(2)).exp() / (eps * (2.0 * PI).sqrt())
}

fn gauss_cdf(z: f64, eps: f64) -> f64 {
    0.5 * (1.0 + libm::erf(z / (eps * SQRT_2)))
}

/// Smoothed Green tensor G_ε(r, τ): every δ(τ − κr) of the impulse response
/// replaced by a Gaussian of standard deviation `eps`, the intermediate
/// slowness integral taken in closed form.
pub fn mollified_green(mat: &Material, rvec: &Vec3, tau: f64, eps: f64) -> Mat3 {
    let r = rvec.norm();
    let n = rvec / r;
    let nn = n * n.transpose();
    let id = Mat3::identity();
    let (kl, kt) = (mat.kappa_l(), mat.kappa_t());
    let (zl, zt) = (tau - kl * r, tau - kt * r);
    // ∫_{κL}^{κT} κ φ(τ − κ r) dκ
    let near = (tau * (gauss_cdf(zl, eps) - gauss_cdf(zt, eps)) + eps * eps * (gauss(zl, eps) - gauss(zt, eps)))
        / (r * r);
    let g = (id - nn) * (kt * kt * gauss(zt, eps)) + nn * (kl * kl * gauss(zl, eps)) + (nn * 3.0 - id) * near;
    g / (4.0 * PI * mat.rho * r)
}

/// Displacement from the time convolution of the smoothed Green tensor with
/// the moving force, u_ε = ∫ G_ε(x − s(t′), t − t′)·Q(t′) dt′.
///
/// Equals the exact field convolved in time with the Gaussian, so the
/// deviation from the exact field is O(ε²).
pub fn mollified_convolution_u(
    mat: &Material,
    traj: &Trajectory,
    prof: &ForceProfile,
    x: &Vec3,
    t: f64,
    eps: f64,
) -> Result<Vec3> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::InvalidSource(format!("mollification width must be positive, got {eps}")));
    }
    if traj.vmax() >= mat.c_t {
        return Err(Error::Supersonic { vmax: traj.vmax(), speed: mat.c_t });
    }
    let tol = Tolerances::default();
    let ropts = tol.retarded_options();
    let (kl, kt) = (mat.kappa_l(), mat.kappa_t());
    let margin = WIDTHS * eps / (1.0 - kt * traj.vmax());
    let (dom_lo, dom_hi) = traj.domain();
    let t_on = prof.t_on().max(dom_lo);

    let late = retarded_time(traj, x, t + margin, kl, &ropts)?.t_ret;
    let early = match retarded_time(traj, x, t - margin, kt, &ropts) {
        Ok(s) => s.t_ret,
        Err(Error::NoRetardation { .. } | Error::Extrapolation { .. }) if t_on.is_finite() => t_on,
        Err(e) => return Err(e),
    };
    let lo = early.max(t_on);
    let hi = late.min(dom_hi);
    if !(hi > lo) {
        return Ok(Vec3::zeros());
    }

    let mut breaks = vec![lo, hi];
    for kappa in [kl, kt] {
        for dt in [-margin, margin] {
            if let Ok(s) = retarded_time(traj, x, t + dt, kappa, &ropts) {
                breaks.push(s.t_ret);
            }
        }
    }
    breaks.extend(prof.breakpoints());
    breaks.extend(traj.breakpoints());
    breaks.retain(|b| *b >= lo && *b <= hi);
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();

    let opts = AdaptiveOptions { nodes: 16, rel_tol: 1e-13, max_panels: 4000 };
    let integral = integrate::<3, _>(
        |tp| {
            let m = traj.eval(tp)?;
            let (q, _) = prof.eval(tp)?;
            let u = mollified_green(mat, &(x - m.position), t - tp, eps) * q;
            Ok([u[0], u[1], u[2]])
        },
        &breaks,
        &[0..3],
        &opts,
    )?;
    let [a, b, c] = integral.value;
    Ok(Vec3::new(a, b, c))
}

/// Least-squares slope of log(err) against log(eps).
pub fn convergence_order(eps: &[f64], err: &[f64]) -> f64 {
    let n = eps.len() as f64;
    let xs: Vec<f64> = eps.iter().map(|e| e.ln()).collect();
    let ys: Vec<f64> = err.iter().map(|e| e.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}
