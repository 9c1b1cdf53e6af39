//! Natural cubic splines for tabulated source paths.

use crate::error::{Error, Result};
use crate::Vec3;

/// Componentwise natural cubic spline through `(times[i], values[i])`.
///
/// The interpolant is C², so velocity and acceleration derived from it are
/// continuous.
#[derive(Debug, Clone, PartialEq)]
pub struct CubicSpline3 {
    times: Vec<f64>,
    values: Vec<Vec3>,
    second: Vec<Vec3>,
}

impl CubicSpline3 {
    pub fn new(times: Vec<f64>, values: Vec<Vec3>) -> Result<Self> {
        let n = times.len();
        if n < 2 || values.len() != n {
            return Err(Error::InvalidSource(
                "a tabulated path needs at least two (time, position) samples".into(),
            ));
        }
        if times.windows(2).any(|w| !(w[1] > w[0])) || times.iter().any(|t| !t.is_finite()) {
            return Err(Error::InvalidSource("tabulated times must be finite and strictly increasing".into()));
        }
        // Thomas algorithm for the natural-spline second derivatives
        let mut second = vec![Vec3::zeros(); n];
        if n > 2 {
            let m = n - 2;
            let mut diag = vec![0.0; m];
            let mut upper = vec![0.0; m];
            let mut rhs = vec![Vec3::zeros(); m];
            for i in 1..n - 1 {
                let h0 = times[i] - times[i - 1];
                let h1 = times[i + 1] - times[i];
                diag[i - 1] = 2.0 * (h0 + h1);
                upper[i - 1] = h1;
                rhs[i - 1] = ((values[i + 1] - values[i]) / h1 - (values[i] - values[i - 1]) / h0) * 6.0;
            }
            for i in 1..m {
                let lower = times[i + 1] - times[i];
                let w = lower / diag[i - 1];
                diag[i] -= w * upper[i - 1];
                let prev = rhs[i - 1];
                rhs[i] -= prev * w;
            }
            let mut sol = vec![Vec3::zeros(); m];
            sol[m - 1] = rhs[m - 1] / diag[m - 1];
            for i in (0..m - 1).rev() {
                sol[i] = (rhs[i] - sol[i + 1] * upper[i]) / diag[i];
            }
            second[1..(m + 1)].copy_from_slice(&sol[..m]);
        }
        Ok(Self { times, values, second })
    }

    pub fn start(&self) -> f64 {
        self.times[0]
    }

    pub fn end(&self) -> f64 {
        *self.times.last().unwrap()
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn values(&self) -> &[Vec3] {
        &self.values
    }

    /// Position, first and second derivative at `t`.
    pub fn eval(&self, t: f64) -> Result<(Vec3, Vec3, Vec3)> {
        let (start, end) = (self.start(), self.end());
        if !(t >= start && t <= end) {
            return Err(Error::Extrapolation { t, start, end });
        }
        let i = match self.times.partition_point(|&x| x <= t) {
            0 => 0,
            k if k >= self.times.len() => self.times.len() - 2,
            k => k - 1,
        };
        let (t0, t1) = (self.times[i], self.times[i + 1]);
        let h = t1 - t0;
        let a = (t1 - t) / h;
        let b = (t - t0) / h;
        let (y0, y1) = (self.values[i], self.values[i + 1]);
        let (m0, m1) = (self.second[i], self.second[i + 1]);
        let s = y0 * a + y1 * b + (m0 * (a * a * a - a) + m1 * (b * b * b - b)) * (h * h / 6.0);
        let v = (y1 - y0) / h + (m1 * (3.0 * b * b - 1.0) - m0 * (3.0 * a * a - 1.0)) * (h / 6.0);
        let acc = m0 * a + m1 * b;
        Ok((s, v, acc))
    }
}
