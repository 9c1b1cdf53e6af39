use crate::error::{Error, Result};
use crate::kinematics::{ForceProfile, Trajectory};
use crate::material::Material;
use crate::{Mat3, Vec3};

/// Richardson-extrapolated central differences of a displacement field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FdEstimate {
    pub beta: Mat3,
    pub v: Vec3,
    /// |extrapolated − D(h/2)| per entry.
    pub beta_err: Mat3,
    pub v_err: Vec3,
    pub h: f64,
    pub h_t: f64,
}

/// Distance from (x, t) to the nearest wavefront emitted at an instant where
/// the source or the force changes abruptly, in length units.
pub fn front_distance(mat: &Material, traj: &Trajectory, prof: &ForceProfile, x: &Vec3, t: f64) -> f64 {
    let mut instants = prof.breakpoints();
    instants.extend(traj.breakpoints());
    let mut d = f64::INFINITY;
    for b in instants {
        if b >= t {
            continue;
        }
        let Ok(m) = traj.eval(b) else { continue };
        let r = (x - m.position).norm();
        for c in [mat.c_l, mat.c_t] {
            d = d.min((r - c * (t - b)).abs());
        }
    }
    d
}

/// Step for differencing at an event at distance `r` from the source and
/// `front` from the nearest wavefront.
pub fn fd_step(r: f64, front: f64) -> Result<f64> {
    let h = (1e-2 * r).min(front / 10.0);
    if h < 1e-4 * r {
        return Err(Error::WavefrontTooClose { distance: front });
    }
    Ok(h)
}

fn central<F>(field: &F, x: &Vec3, t: f64, h: f64, h_t: f64) -> Result<(Mat3, Vec3)>
where
    F: Fn(&Vec3, f64) -> Result<Vec3>,
{
    let mut beta = Mat3::zeros();
    for k in 0..3 {
        let mut e = Vec3::zeros();
        e[k] = h;
        let d = (field(&(x + e), t)? - field(&(x - e), t)?) / (2.0 * h);
        beta.set_column(k, &d);
    }
    let v = (field(x, t + h_t)? - field(x, t - h_t)?) / (2.0 * h_t);
    Ok((beta, v))
}

/// Gradient and time derivative of `field` from central differences with
/// spatial step `h` and time step `h_t`, Richardson-extrapolated from the
/// pair (h, h/2).
pub fn fd_consistency<F>(field: F, x: &Vec3, t: f64, h: f64, h_t: f64) -> Result<FdEstimate>
where
    F: Fn(&Vec3, f64) -> Result<Vec3>,
{
    let (b1, v1) = central(&field, x, t, h, h_t)?;
    let (b2, v2) = central(&field, x, t, 0.5 * h, 0.5 * h_t)?;
    let beta = (b2 * 4.0 - b1) / 3.0;
    let v = (v2 * 4.0 - v1) / 3.0;
    Ok(FdEstimate { beta, v, beta_err: (beta - b2).abs(), v_err: (v - v2).abs(), h, h_t })
}

/// max |a − b| / max |b|, or max |a − b| when b vanishes.
pub fn rel_err<const R: usize, const C: usize>(
    a: &nalgebra::SMatrix<f64, R, C>,
    b: &nalgebra::SMatrix<f64, R, C>,
) -> f64 {
    let d = (a - b).amax();
    let s = b.amax();
    if s > 0.0 {
        d / s
    } else {
        d
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_field_is_differenced_exactly() {
        let m = Mat3::new(1.0, 2.0, 3.0, -1.0, 0.5, 0.0, 0.25, -2.0, 4.0);
        let w = Vec3::new(0.3, -0.1, 2.0);
        let est = fd_consistency(|x: &Vec3, t: f64| Ok(m * x + w * t), &Vec3::new(0.4, 1.0, -2.0), 0.7, 0.1, 0.05)
            .unwrap();
        assert!((est.beta - m).amax() < 1e-13);
        assert!((est.v - w).amax() < 1e-13);
    }

    #[test]
    fn step_selection() {
        assert_eq!(fd_step(1.0, 10.0).unwrap(), 1e-2);
        assert_eq!(fd_step(1.0, 0.01).unwrap(), 1e-3);
        assert!(matches!(fd_step(1.0, 1e-4), Err(Error::WavefrontTooClose { .. })));
    }
}
