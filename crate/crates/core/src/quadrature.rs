//! Gauss–Legendre rules and a globally adaptive integrator.
//!
//! The integrator works on fixed-size vector integrands `[f64; N]` whose
//! components are partitioned into *groups* (for example displacement,
//! distortion and velocity). Each group must meet the relative tolerance on
//! its own, so a small but physically distinct component (an acceleration
//! part, say) is not drowned by a large neighbour.
//!
//! Every panel is integrated with the rule over the whole panel and over
//! its two halves; the difference serves as the error estimate, and the
//! panel with the worst normalised error is split until all groups
//! converge.

use std::ops::Range;
use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Largest rule order served from the static cache.
const MAX_CACHED: usize = 64;

/// Nodes and weights of an `n`-point Gauss–Legendre rule on [-1, 1].
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Computes the rule by Newton iteration on the Legendre polynomial.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "a quadrature rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        let nf = n as f64;
        for i in 0..m {
            // Tricomi initial guess
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() <= 1e-16 * x.abs().max(1.0) {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Self { nodes, weights }
    }

    /// Shared instance for orders up to 64.
    pub fn cached(n: usize) -> &'static GaussLegendre {
        static RULES: [OnceLock<GaussLegendre>; MAX_CACHED + 1] =
            [const { OnceLock::new() }; MAX_CACHED + 1];
        assert!(n >= 1 && n <= MAX_CACHED, "cached rules cover 1..=64 nodes");
        RULES[n].get_or_init(|| GaussLegendre::new(n))
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Nodes and weights mapped onto [a, b].
    pub fn mapped(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(&x, &w)| (mid + half * x, half * w))
    }

    /// Applies the rule on [a, b] to a vector integrand; also returns the
    /// integral of the componentwise absolute value.
    pub fn apply<const N: usize, F>(&self, a: f64, b: f64, f: &mut F) -> Result<([f64; N], [f64; N])>
    where
        F: FnMut(f64) -> Result<[f64; N]>,
    {
        let mut sum = [0.0; N];
        let mut abs = [0.0; N];
        for (x, w) in self.mapped(a, b) {
            let y = f(x)?;
            for k in 0..N {
                sum[k] += w * y[k];
                abs[k] += w * y[k].abs();
            }
        }
        Ok((sum, abs))
    }
}

/// Legendre polynomial P_n(x) and its derivative by the three-term recurrence.
fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let nf = n as f64;
    let d = nf * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Settings of the adaptive integrator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdaptiveOptions {
    /// Nodes per panel.
    pub nodes: usize,
    /// Relative tolerance per component group.
    pub rel_tol: f64,
    /// Upper bound on the number of panels.
    pub max_panels: usize,
}

impl Default for AdaptiveOptions {
    fn default() -> Self {
        Self { nodes: 16, rel_tol: 1e-10, max_panels: 400 }
    }
}

/// Result of an adaptive integration.
#[derive(Debug, Clone)]
pub struct Integral<const N: usize> {
    pub value: [f64; N],
    /// Estimated absolute error per group.
    pub error: Vec<f64>,
    pub panels: usize,
    pub evaluations: usize,
}

struct Panel<const N: usize> {
    a: f64,
    b: f64,
    coarse: [f64; N],
    left: [f64; N],
    right: [f64; N],
    abs: [f64; N],
    score: f64,
}

fn group_norm<const N: usize>(v: &[f64; N], g: &Range<usize>) -> f64 {
    v[g.clone()].iter().fold(0.0f64, |m, x| m.max(x.abs()))
}

fn make_panel<const N: usize, F>(
    rule: &GaussLegendre,
    f: &mut F,
    evaluations: &mut usize,
    a: f64,
    b: f64,
    coarse: Option<[f64; N]>,
) -> Result<Panel<N>>
where
    F: FnMut(f64) -> Result<[f64; N]>,
{
    let coarse = match coarse {
        Some(c) => c,
        None => {
            *evaluations += rule.len();
            rule.apply(a, b, f)?.0
        }
    };
    let m = 0.5 * (a + b);
    let (left, la) = rule.apply(a, m, f)?;
    let (right, ra) = rule.apply(m, b, f)?;
    *evaluations += 2 * rule.len();
    let mut abs = [0.0; N];
    for k in 0..N {
        abs[k] = la[k] + ra[k];
    }
    Ok(Panel { a, b, coarse, left, right, abs, score: 0.0 })
}

/// Integrates `f` over the union of the intervals delimited by `breaks`
/// (sorted ascending; at least two entries). The integrand is never
/// evaluated at a break point, so jumps there are harmless.
pub fn integrate<const N: usize, F>(
    mut f: F,
    breaks: &[f64],
    groups: &[Range<usize>],
    opts: &AdaptiveOptions,
) -> Result<Integral<N>>
where
    F: FnMut(f64) -> Result<[f64; N]>,
{
    assert!(breaks.len() >= 2, "need at least one interval");
    let rule = if opts.nodes <= MAX_CACHED {
        std::borrow::Cow::Borrowed(GaussLegendre::cached(opts.nodes))
    } else {
        std::borrow::Cow::Owned(GaussLegendre::new(opts.nodes))
    };
    let eps_floor = 50.0 * f64::EPSILON;
    let mut evaluations = 0usize;

    let mut panels: Vec<Panel<N>> = Vec::new();
    for w in breaks.windows(2) {
        let (a, b) = (w[0], w[1]);
        if b > a {
            panels.push(make_panel(&rule, &mut f, &mut evaluations, a, b, None)?);
        }
    }

    loop {
        let mut total = [0.0; N];
        let mut abs_total = [0.0; N];
        for p in &panels {
            for k in 0..N {
                total[k] += p.left[k] + p.right[k];
                abs_total[k] += p.abs[k];
            }
        }
        let targets: Vec<f64> = groups
            .iter()
            .map(|g| {
                (opts.rel_tol * group_norm(&total, g)).max(eps_floor * group_norm(&abs_total, g))
            })
            .collect();
        let mut errors = vec![0.0; groups.len()];
        let mut worst = (0usize, 0.0f64);
        for (i, p) in panels.iter_mut().enumerate() {
            let mut diff = [0.0; N];
            for k in 0..N {
                diff[k] = p.coarse[k] - (p.left[k] + p.right[k]);
            }
            let mut score = 0.0f64;
            for (gi, g) in groups.iter().enumerate() {
                let e = group_norm(&diff, g);
                errors[gi] += e;
                if e > 0.0 {
                    let s = if targets[gi] > 0.0 { e / targets[gi] } else { f64::INFINITY };
                    score = score.max(s);
                }
            }
            p.score = score;
            if score > worst.1 {
                worst = (i, score);
            }
        }
        let converged = errors.iter().zip(&targets).all(|(e, t)| e <= t);
        if converged || panels.is_empty() {
            return Ok(Integral { value: total, error: errors, panels: panels.len(), evaluations });
        }
        if panels.len() >= opts.max_panels {
            let achieved = groups
                .iter()
                .zip(&errors)
                .map(|(g, e)| {
                    let n = group_norm(&total, g);
                    if n > 0.0 { e / n } else { *e }
                })
                .fold(0.0, f64::max);
            return Err(Error::Quadrature { achieved, requested: opts.rel_tol });
        }
        let p = panels.swap_remove(worst.0);
        let m = 0.5 * (p.a + p.b);
        if !(m > p.a && m < p.b) {
            // panel cannot be split further in floating point
            let achieved = worst.1 * opts.rel_tol;
            return Err(Error::Quadrature { achieved, requested: opts.rel_tol });
        }
        panels.push(make_panel(&rule, &mut f, &mut evaluations, p.a, m, Some(p.left))?);
        panels.push(make_panel(&rule, &mut f, &mut evaluations, m, p.b, Some(p.right))?);
    }
}

/// Scalar convenience wrapper around [`integrate`].
pub fn integrate_scalar<F>(mut f: F, a: f64, b: f64, opts: &AdaptiveOptions) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    let r = integrate::<1, _>(|x| Ok([f(x)]), &[a, b], &[0..1], opts)?;
    Ok(r.value[0])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rule_integrates_polynomials_exactly() {
        for n in [1usize, 2, 5, 16, 31] {
            let rule = GaussLegendre::new(n);
            let wsum: f64 = rule.weights().iter().sum();
            assert!((wsum - 2.0).abs() < 1e-14, "n = {n}");
            // x^(2n-1) and x^(2n-2) are integrated exactly
            let deg = 2 * n - 2;
            let s: f64 = rule
                .nodes()
                .iter()
                .zip(rule.weights())
                .map(|(x, w)| w * x.powi(deg as i32))
                .sum();
            let exact = 2.0 / (deg as f64 + 1.0);
            assert!((s - exact).abs() < 1e-13, "n = {n}: {s} vs {exact}");
            assert!(rule.nodes().windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn sixteen_point_nodes() {
        // largest node of the 16-point rule (tabulated value)
        let rule = GaussLegendre::cached(16);
        assert!((rule.nodes()[15] - 0.989_400_934_991_649_9).abs() < 1e-15);
        assert!((rule.weights()[15] - 0.027_152_459_411_754_1).abs() < 1e-15);
    }

    #[test]
    fn adaptive_handles_peaks() {
        let opts = AdaptiveOptions { rel_tol: 1e-12, ..Default::default() };
        let v = integrate_scalar(|x| 1.0 / (1e-4 + x * x), -1.0, 1.0, &opts).unwrap();
        let exact = 2.0 * (1.0f64 / 1e-2).atan() / 1e-2;
        assert!((v - exact).abs() <= 1e-11 * exact);
    }

    #[test]
    fn adaptive_square_root_endpoint() {
        let opts = AdaptiveOptions { rel_tol: 1e-10, max_panels: 2000, ..Default::default() };
        let v = integrate_scalar(|x| x.sqrt(), 0.0, 1.0, &opts).unwrap();
        assert!((v - 2.0 / 3.0).abs() < 1e-10);
    }

    #[test]
    fn groups_converge_independently() {
        let opts = AdaptiveOptions::default();
        let r = integrate::<2, _>(
            |x| Ok([x.cos(), 1e-9 * (5.0 * x).sin()]),
            &[0.0, 1.0, 2.0],
            &[0..1, 1..2],
            &opts,
        )
        .unwrap();
        assert!((r.value[0] - 2f64.sin()).abs() < 1e-12);
        let exact = 1e-9 * (1.0 - 10f64.cos()) / 5.0;
        assert!((r.value[1] - exact).abs() < 1e-10 * exact.abs());
    }

    #[test]
    fn zero_integrand_converges_immediately() {
        let r = integrate::<3, _>(|_| Ok([0.0; 3]), &[0.0, 1.0], &[0..3], &Default::default()).unwrap();
        assert_eq!(r.value, [0.0; 3]);
        assert_eq!(r.panels, 1);
    }

    #[test]
    fn reports_non_convergence() {
        let opts = AdaptiveOptions { rel_tol: 1e-14, max_panels: 3, nodes: 2 };
        let e = integrate_scalar(|x| (50.0 * x).sin().abs(), 0.0, 1.0, &opts).unwrap_err();
        assert!(matches!(e, Error::Quadrature { .. }));
    }
}
