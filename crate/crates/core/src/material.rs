//! Isotropic linear-elastic media.
//!
//! A [`Material`] stores the Lamé constants together with the derived wave
//! speeds and Poisson ratio. All derived values are computed once at
//! construction because the field evaluators read them in their innermost
//! loops.

use nalgebra::SMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Homogeneous isotropic elastic medium (SI units).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Material {
    /// Mass density ρ [kg/m³].
    pub rho: f64,
    /// Lamé λ [Pa].
    pub lam: f64,
    /// Shear modulus μ [Pa].
    pub mu: f64,
    /// Longitudinal (P) wave speed [m/s].
    pub c_l: f64,
    /// Transversal (S) wave speed [m/s].
    pub c_t: f64,
    /// Poisson ratio.
    pub nu: f64,
}

impl Material {
    /// Builds a material from density and the two Lamé constants.
    ///
    /// ```
    /// let m = elastowave::Material::new(1.0, 1.0, 1.0).unwrap();
    /// assert!((m.c_l - 3f64.sqrt()).abs() < 1e-15);
    /// assert_eq!(m.c_t, 1.0);
    /// assert_eq!(m.nu, 0.25);
    /// ```
    pub fn new(rho: f64, lam: f64, mu: f64) -> Result<Self> {
        if !(rho.is_finite() && lam.is_finite() && mu.is_finite()) {
            return Err(Error::InvalidMaterial("constants must be finite".into()));
        }
        if rho <= 0.0 {
            return Err(Error::InvalidMaterial(format!("density must be positive, got {rho}")));
        }
        if mu <= 0.0 {
            return Err(Error::InvalidMaterial(format!("shear modulus must be positive, got {mu}")));
        }
        // bulk modulus λ + 2μ/3 must not be negative
        if 3.0 * lam + 2.0 * mu < 0.0 {
            return Err(Error::InvalidMaterial(format!(
                "bulk modulus λ + 2μ/3 = {} is negative",
                lam + 2.0 * mu / 3.0
            )));
        }
        let c_l = ((2.0 * mu + lam) / rho).sqrt();
        let c_t = (mu / rho).sqrt();
        let nu = lam / (2.0 * (lam + mu));
        Ok(Self { rho, lam, mu, c_l, c_t, nu })
    }

    /// Builds a material from density, shear modulus and Poisson ratio,
    /// using λ = 2μν/(1−2ν).
    pub fn from_poisson(rho: f64, mu: f64, nu: f64) -> Result<Self> {
        if !(nu > -1.0 && nu < 0.5) {
            return Err(Error::InvalidMaterial(format!(
                "Poisson ratio must lie in (-1, 0.5), got {nu}"
            )));
        }
        let lam = 2.0 * mu * nu / (1.0 - 2.0 * nu);
        let mut m = Self::new(rho, lam, mu)?;
        // keep the user's ν rather than the round-tripped one
        m.nu = nu;
        Ok(m)
    }

    /// Transversal slowness 1/c_T.
    #[inline]
    pub fn kappa_t(&self) -> f64 {
        1.0 / self.c_t
    }

    /// Longitudinal slowness 1/c_L.
    #[inline]
    pub fn kappa_l(&self) -> f64 {
        1.0 / self.c_l
    }

    /// Isotropic Hooke law σ_ij = λ δ_ij tr β + μ (β_ij + β_ji).
    ///
    /// Works for 3×3 distortions and for the 2×2 in-plane block.
    pub fn stress<const D: usize>(&self, beta: &SMatrix<f64, D, D>) -> SMatrix<f64, D, D> {
        SMatrix::<f64, D, D>::identity() * (self.lam * beta.trace())
            + (beta + beta.transpose()) * self.mu
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::{Matrix2, Matrix3};

    #[test]
    fn wave_speeds() {
        let m = Material::new(1.0, 1.0, 1.0).unwrap();
        assert_eq!(m.c_t, 1.0);
        assert!((m.c_l - 1.732_050_8).abs() < 1e-7);
        assert_eq!(m.nu, 0.25);

        let m = Material::new(4.0, 0.0, 1.0).unwrap();
        assert_eq!(m.c_t, 0.5);
        assert!((m.c_l - 0.707_106_8).abs() < 1e-7);
        assert!(m.c_t < m.c_l);
    }

    #[test]
    fn rejects_bad_constants() {
        assert!(Material::new(1.0, 1.0, 0.0).is_err());
        assert!(Material::new(0.0, 1.0, 1.0).is_err());
        assert!(Material::new(1.0, -1.0, 1.0).is_err());
        assert!(Material::new(f64::NAN, 1.0, 1.0).is_err());
    }

    #[test]
    fn poisson_construction() {
        let m = Material::from_poisson(1.0, 1.0, 0.25).unwrap();
        assert!((m.lam - 1.0).abs() < 1e-15);
        let m = Material::from_poisson(1.0, 1.0, 0.0).unwrap();
        assert_eq!(m.lam, 0.0);
        assert!(Material::from_poisson(1.0, 1.0, 0.5).is_err());
        assert!(Material::from_poisson(1.0, 1.0, -1.0).is_err());
    }

    #[test]
    fn stiffness_examples() {
        let m = Material::new(1.0, 1.0, 1.0).unwrap();
        let s = m.stress(&Matrix3::identity());
        assert_eq!(s, Matrix3::identity() * 5.0);

        let anti = Matrix3::new(0.0, 1.0, -2.0, -1.0, 0.0, 0.5, 2.0, -0.5, 0.0);
        assert_eq!(m.stress(&anti), Matrix3::zeros());

        let m = Material::new(1.0, 2.0, 3.0).unwrap();
        let mut b = Matrix3::zeros();
        b[(0, 1)] = 1.0;
        let s = m.stress(&b);
        let mut expect = Matrix3::zeros();
        expect[(0, 1)] = 3.0;
        expect[(1, 0)] = 3.0;
        assert_eq!(s, expect);

        let s2 = m.stress(&Matrix2::identity());
        assert_eq!(s2, Matrix2::identity() * (2.0 * 2.0 + 6.0));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn poisson_round_trip(rho in 0.1f64..10.0, mu in 0.1f64..10.0, nu in -0.9f64..0.49) {
                let a = Material::from_poisson(rho, mu, nu).unwrap();
                let b = Material::new(rho, a.lam, mu).unwrap();
                let scale = a.lam.abs().max(mu);
                prop_assert!((b.lam - a.lam).abs() <= 1e-14 * scale);
                prop_assert!((b.nu - nu).abs() <= 1e-12);
                prop_assert!(a.c_t < a.c_l);
            }

            #[test]
            fn stress_symmetries(v in proptest::collection::vec(-5.0f64..5.0, 9),
                                 lam in 0.0f64..5.0, mu in 0.1f64..5.0) {
                let m = Material::new(1.0, lam, mu).unwrap();
                let b = Matrix3::from_row_slice(&v);
                let s = m.stress(&b);
                let st = m.stress(&b.transpose());
                prop_assert!((s - st).amax() <= 1e-12 * (1.0 + s.amax()));
                prop_assert!((s - s.transpose()).amax() <= 1e-12 * (1.0 + s.amax()));
            }
        }
    }
}
