use crate::error::{Error, Result};
use crate::kinematics::{ForceProfile, Trajectory};
use crate::lineforce2d::Vec2;
use crate::material::Material;
use crate::options::Tolerances;
use crate::pointforce3d::lw_displacement;
use crate::quadrature::{integrate, AdaptiveOptions};
use crate::Vec3;

/// Displacement of a line force along x₃ built by integrating point-force
/// fields over the line, u(x, t) = ∫ u_point((x₁, x₂, z), t) dz.
///
/// All three components are returned: the in-plane part from (Q₁, Q₂) and
/// the anti-plane part from Q₃.
pub fn line_superposition_u(
    mat: &Material,
    traj: &Trajectory,
    prof: &ForceProfile,
    x: &Vec2,
    t: f64,
    rel_tol: f64,
) -> Result<Vec3> {
    let t_on = prof.t_on();
    if !t_on.is_finite() {
        return Err(Error::UnboundedHistory);
    }
    if t <= t_on {
        return Ok(Vec3::zeros());
    }
    let tol = Tolerances::default();
    let s_on = traj.eval(t_on)?.position;
    let reach = (mat.c_l + traj.vmax()) * (t - t_on);
    let (z_lo, z_hi) = (s_on.z - reach, s_on.z + reach);

    let mut breaks = vec![z_lo, z_hi];
    let mut instants = prof.breakpoints();
    instants.extend(traj.breakpoints());
    for b in instants {
        if b >= t {
            continue;
        }
        let s = traj.eval(b)?.position;
        let rho2 = (x.x - s.x).powi(2) + (x.y - s.y).powi(2);
        for c in [mat.c_l, mat.c_t] {
            let h2 = (c * (t - b)).powi(2) - rho2;
            if h2 > 0.0 {
                breaks.push(s.z - h2.sqrt());
                breaks.push(s.z + h2.sqrt());
            }
        }
        breaks.push(s.z);
    }
    breaks.retain(|z| *z >= z_lo && *z <= z_hi);
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();

    let opts = AdaptiveOptions { nodes: 16, rel_tol, max_panels: 2000 };
    let integral = integrate::<3, _>(
        |z| {
            let u = lw_displacement(mat, traj, prof, &Vec3::new(x.x, x.y, z), t, &tol)?;
            Ok([u[0], u[1], u[2]])
        },
        &breaks,
        &[0..2, 2..3],
        &opts,
    )?;
    let [a, b, c] = integral.value;
    Ok(Vec3::new(a, b, c))
}
