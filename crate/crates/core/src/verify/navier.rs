use crate::error::Result;
use crate::material::Material;
use crate::{Mat3, Vec3};

/// Residual of ρ ∂_t v − μ ∂_k β_ik − (λ+μ) ∂_i β_kk at one event.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NavierResidual {
    pub residual: Vec3,
    /// Largest magnitude among the three retained terms.
    pub scale: f64,
    pub relative: f64,
}

fn d4<T, F>(f: F, h: f64) -> Result<T>
where
    F: Fn(f64) -> Result<T>,
    T: std::ops::Sub<Output = T> + std::ops::Add<Output = T> + std::ops::Mul<f64, Output = T>,
{
    let (p2, p1, m1, m2) = (f(2.0 * h)?, f(h)?, f(-h)?, f(-2.0 * h)?);
    Ok(((p1 - m1) * 8.0 - (p2 - m2)) * (1.0 / (12.0 * h)))
}

/// Evaluates the isotropic equation of motion with fourth-order central
/// stencils on the distortion and velocity returned by `fields`.
pub fn navier_residual<F>(mat: &Material, fields: F, x: &Vec3, t: f64, h: f64, h_t: f64) -> Result<NavierResidual>
where
    F: Fn(&Vec3, f64) -> Result<(Mat3, Vec3)>,
{
    let dv = d4(|s| Ok(fields(x, t + s)?.1), h_t)?;
    let mut div_beta = Vec3::zeros();
    let mut grad_tr = Vec3::zeros();
    for k in 0..3 {
        let mut e = Vec3::zeros();
        e[k] = 1.0;
        let db = d4(|s| Ok(fields(&(x + e * s), t)?.0), h)?;
        div_beta += db.column(k);
        grad_tr[k] = db.trace();
    }
    let inertia = dv * mat.rho;
    let shear = div_beta * mat.mu;
    let bulk = grad_tr * (mat.lam + mat.mu);
    let residual = inertia - shear - bulk;
    let scale = inertia.amax().max(shear.amax()).max(bulk.amax());
    let relative = if scale > 0.0 { residual.amax() / scale } else { 0.0 };
    Ok(NavierResidual { residual, scale, relative })
}
