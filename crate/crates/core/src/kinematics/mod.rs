//! Source worldlines, force profiles and retarded times.

mod force;
mod retarded;
mod spline;
mod trajectory;

pub use force::{ForceProfile, ProfileKind};
pub(crate) use retarded::planar;
pub use retarded::{retarded_time, retarded_time_bisection, retarded_time_planar, RetardedOptions, RetardedState};
pub use spline::CubicSpline3;
pub use trajectory::{Frame, Motion, PiecewisePath, Trajectory, TrajectoryKind, VMAX_SAMPLES};
