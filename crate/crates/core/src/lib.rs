//! Exact elastodynamic fields of non-uniformly moving point and line forces
//! in an unbounded isotropic medium.

pub mod cli;
pub mod dual;
pub mod error;
pub mod kinematics;
pub mod lineforce2d;
pub mod material;
pub mod options;
pub mod pointforce3d;
pub mod quadrature;
pub mod verify;

pub use error::{Error, Result};
pub use material::Material;
pub use options::Tolerances;

pub type Vec3 = nalgebra::Vector3<f64>;
pub type Mat3 = nalgebra::Matrix3<f64>;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/material.md")]
    mod material {}
    #[doc = include_str!("../../../book/src/kinematics.md")]
    mod kinematics {}
    #[doc = include_str!("../../../book/src/point-force.md")]
    mod point_force {}
    #[doc = include_str!("../../../book/src/radiation.md")]
    mod radiation {}
    #[doc = include_str!("../../../book/src/limits.md")]
    mod limits {}
    #[doc = include_str!("../../../book/src/line-force.md")]
    mod line_force {}
    #[doc = include_str!("../../../book/src/verification.md")]
    mod verification {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
