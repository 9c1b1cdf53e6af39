use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::{RunConfig, SourceKind, PRESETS};
use super::grid::{FieldGrid, GridRow};
use crate::error::{Error, Result};
use crate::lineforce2d::{evaluate_2d, Vec2};
use crate::pointforce3d::{kelvin_displacement, kelvin_gradient, radiation_split, stokes_displacement, stokes_gradient};
use crate::verify::{rel_err, run_check_suite, CheckReport, SuiteConfig, SuiteSource};
use crate::{Mat3, Vec3};

fn arrays(u: &Vec3, beta: &Mat3, v: &Vec3) -> ([f64; 3], [[f64; 3]; 3], [f64; 3]) {
    let b = |i: usize| [beta[(i, 0)], beta[(i, 1)], beta[(i, 2)]];
    ([u.x, u.y, u.z], [b(0), b(1), b(2)], [v.x, v.y, v.z])
}

/// Samples displacement, distortion and velocity on the configured grid.
/// Events on the source give masked rows; other failures abort.
pub fn cmd_sample(config: &RunConfig) -> Result<FieldGrid> {
    let tol = &config.tolerances;
    let rows: Vec<Result<GridRow>> = config
        .grid
        .events()
        .par_iter()
        .map(|(x, t)| {
            let xa = [x.x, x.y, x.z];
            let fields = match config.source.plane() {
                None => radiation_split(&config.material, &config.trajectory, &config.force, x, *t, tol)
                    .map(|s| (s.u, s.beta, s.v)),
                Some(plane) => {
                    let x2 = Vec2::new(x.x, x.y);
                    evaluate_2d(&config.material, &config.trajectory, &config.force, &x2, *t, plane, tol)
                        .map(|s| (s.u, s.beta, s.v))
                }
            };
            match fields {
                Ok((u, beta, v)) => {
                    let (u, beta, v) = arrays(&u, &beta, &v);
                    let row = GridRow { x: xa, t: *t, u, beta, v, mask: false };
                    if row.u.iter().chain(row.beta.iter().flatten()).chain(&row.v).all(|z| z.is_finite()) {
                        Ok(row)
                    } else {
                        Err(Error::Quadrature { achieved: f64::INFINITY, requested: tol.kappa })
                    }
                }
                Err(Error::SingularPoint { .. }) => Ok(GridRow::masked(xa, *t)),
                Err(e) => Err(e),
            }
        })
        .collect();
    Ok(FieldGrid {
        version: env!("CARGO_PKG_VERSION").to_string(),
        config_hash: config.hash.clone(),
        rows: rows.into_iter().collect::<Result<_>>()?,
    })
}

/// Largest number of grid events handed to the configured-source check.
const VALIDATE_EVENTS: usize = 64;

/// Runs the check suite, including finite-difference checks of the
/// configured source at grid events. Returns (all passed, reports).
pub fn cmd_validate(config: Option<&RunConfig>, seed: u64, corrupt: bool) -> Result<(bool, Vec<CheckReport>)> {
    let source = config.map(|c| {
        let events = c.grid.events();
        let stride = (events.len() / VALIDATE_EVENTS).max(1);
        SuiteSource {
            mat: c.material,
            traj: c.trajectory.clone(),
            prof: c.force.clone(),
            plane: c.source.plane(),
            events: events.into_iter().step_by(stride).collect(),
        }
    });
    let reports = run_check_suite(&SuiteConfig { seed, samples: None, checks: None, corrupt, source })?;
    Ok((reports.iter().all(|r| r.pass), reports))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitsReport {
    pub n_points: usize,
    pub stokes_max_rel_dev: f64,
    /// Present for forces constant for all time.
    pub kelvin_max_rel_dev: Option<f64>,
}

/// Compares the moving-source fields at rest with the Stokes solution and,
/// for a permanent constant force, with the Kelvin solution.
pub fn cmd_limits(config: &RunConfig) -> Result<LimitsReport> {
    if config.source != SourceKind::Point3d {
        return Err(Error::Config(vec!["limits compare point-force fields; source.kind must be 3d-point".into()]));
    }
    if !config.trajectory.is_stationary() {
        return Err(Error::Config(vec!["limits require a stationary source".into()]));
    }
    let tol = &config.tolerances;
    let (mat, traj, prof) = (&config.material, &config.trajectory, &config.force);
    let steady = prof.steady_value();
    let per_point: Vec<Option<(f64, Option<f64>)>> = config
        .grid
        .events()
        .par_iter()
        .map(|(x, t)| {
            let p = traj.eval(*t)?.position;
            let rvec = x - p;
            let s = match radiation_split(mat, traj, prof, x, *t, tol) {
                Err(Error::SingularPoint { .. }) => return Ok(None),
                other => other?,
            };
            let stokes = rel_err(&s.u, &stokes_displacement(mat, prof, &rvec, *t, tol)?)
                .max(rel_err(&s.beta, &stokes_gradient(mat, prof, &rvec, *t, tol)?));
            let kelvin = match steady {
                Some(q) => Some(
                    rel_err(&s.u, &kelvin_displacement(mat, &q, &rvec)?)
                        .max(rel_err(&s.beta, &kelvin_gradient(mat, &q, &rvec)?)),
                ),
                None => None,
            };
            Ok(Some((stokes, kelvin)))
        })
        .collect::<Result<_>>()?;
    let valid: Vec<_> = per_point.into_iter().flatten().collect();
    Ok(LimitsReport {
        n_points: valid.len(),
        stokes_max_rel_dev: valid.iter().map(|v| v.0).fold(0.0, f64::max),
        kelvin_max_rel_dev: steady.map(|_| valid.iter().filter_map(|v| v.1).fold(0.0, f64::max)),
    })
}

/// Human-readable list of presets and their keys.
pub fn cmd_presets() -> String {
    let mut out = String::new();
    for (section, name, keys) in PRESETS {
        out.push_str(&format!("{section}.preset = {name:<13} keys: {keys}\n"));
    }
    out
}
