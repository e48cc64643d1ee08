//! Non-asymptotic bounds on `s_n = E|w_n - w_bar|^2` for strongly convex
//! problems, the recursion bound they are derived from, and empirical rate
//! fitting over seed ensembles.
//!
//! Exponential factors are evaluated in log space. When an intermediate
//! exponent overflows the bound is `+inf`, which is still a valid (vacuous)
//! upper bound.

use alloc::vec::Vec;

use crate::error::{invalid, Error, Result};
use crate::solver::RunTrace;

/// Below this `|c|` the logarithmic branch of [`phi`] is used.
pub const PHI_BRANCH_EPS: f64 = 1e-12;

/// `phi_c(t) = (t^c - 1) / c`, and `log t` for `c = 0`.
pub fn phi(c: f64, t: f64) -> Result<f64> {
    if !(t > 0.0) || !t.is_finite() || !c.is_finite() {
        return Err(Error::Domain("phi needs t > 0"));
    }
    Ok(phi_unchecked(c, t))
}

fn phi_unchecked(c: f64, t: f64) -> f64 {
    let lt = libm::log(t);
    if c.abs() < PHI_BRANCH_EPS {
        // log t + c log^2 t / 2, the first terms of expm1(c log t) / c.
        lt + 0.5 * c * lt * lt
    } else {
        libm::expm1(c * lt) / c
    }
}

/// `exp(log_a) `, returning zero for `a = 0` without forming `0 * inf`.
fn exp_or_zero(scale: f64, log_factor: f64) -> f64 {
    if scale == 0.0 {
        0.0
    } else {
        libm::exp(libm::log(scale) + log_factor)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundParams {
    pub theta: f64,
    pub c1: f64,
    pub lambda_inf: f64,
    pub alpha_sup: f64,
    pub sigma_sq: f64,
    pub mu: f64,
    pub nu: f64,
    pub epsilon: f64,
    pub grad_at_sol_norm: f64,
    pub t: f64,
    pub c: f64,
    pub tau: f64,
    pub n0: usize,
    /// `E|w_{n0} - w_bar|^2`, supplied by the caller.
    pub s_n0: f64,
}

impl BoundParams {
    pub fn with_s_n0(mut self, s_n0: f64) -> Result<Self> {
        if !(s_n0 >= 0.0) || !s_n0.is_finite() {
            return Err(invalid("s_n0 must be finite and nonnegative"));
        }
        self.s_n0 = s_n0;
        Ok(self)
    }

    /// Smallest `n` at which [`theorem1_bound`] may be evaluated.
    pub fn first_valid_n(&self) -> usize {
        2 * self.n0
    }
}

/// Smallest integer `n0 > 1` with `m * n0^(-theta) <= 1`.
pub fn smallest_n0(m: f64, theta: f64) -> usize {
    let mut n0 = libm::ceil(libm::pow(m, 1.0 / theta)).max(2.0) as usize;
    // Correct for rounding in the power on either side.
    while m * libm::pow(n0 as f64, -theta) > 1.0 {
        n0 += 1;
    }
    while n0 > 2 && m * libm::pow((n0 - 1) as f64, -theta) <= 1.0 {
        n0 -= 1;
    }
    n0
}

#[allow(clippy::too_many_arguments)]
pub fn theorem1_constants(
    theta: f64,
    c1: f64,
    lambda_inf: f64,
    alpha_sup: f64,
    sigma_sq: f64,
    mu: f64,
    nu: f64,
    epsilon: f64,
    grad_at_sol_norm: f64,
) -> Result<BoundParams> {
    if !(mu >= 0.0) || !(nu >= 0.0) || !mu.is_finite() || !nu.is_finite() {
        return Err(invalid("mu and nu must be nonnegative"));
    }
    if !(mu + nu > 0.0) {
        return Err(Error::StrongConvexityRequired);
    }
    if !(theta > 0.0 && theta <= 1.0) {
        return Err(invalid("theta must lie in (0, 1]"));
    }
    if !(c1 > 0.0) || !c1.is_finite() {
        return Err(invalid("c1 must be positive"));
    }
    if !(lambda_inf > 0.0 && lambda_inf <= 1.0) {
        return Err(invalid("lambda_inf must lie in (0, 1]"));
    }
    if !(alpha_sup >= 0.0) || !alpha_sup.is_finite() {
        return Err(invalid("alpha_sup must be nonnegative"));
    }
    if !(sigma_sq > 0.0) || !sigma_sq.is_finite() {
        return Err(invalid("sigma_sq must be positive"));
    }
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(invalid("epsilon must lie in (0, 1)"));
    }
    if !(grad_at_sol_norm >= 0.0) || !grad_at_sol_norm.is_finite() {
        return Err(invalid("gradient norm must be nonnegative"));
    }
    let t = 1.0 - libm::pow(2.0, theta - 1.0);
    let c = 2.0 * c1 * lambda_inf * (nu + mu * epsilon) / ((1.0 + nu) * (1.0 + nu));
    let tau = 2.0 * sigma_sq * c1 * c1 * (1.0 + alpha_sup * grad_at_sol_norm) / (c * c);
    Ok(BoundParams {
        theta,
        c1,
        lambda_inf,
        alpha_sup,
        sigma_sq,
        mu,
        nu,
        epsilon,
        grad_at_sol_norm,
        t,
        c,
        tau,
        n0: smallest_n0(c.max(c1), theta),
        s_n0: 0.0,
    })
}

/// Upper bound on `s_{n+1}` for `n >= 2 n0`.
pub fn theorem1_bound(p: &BoundParams, n: usize) -> Result<f64> {
    if n < 2 * p.n0 {
        return Err(Error::BoundRange { n, n0: p.n0 });
    }
    let nf = n as f64;
    let (c, tau, s) = (p.c, p.tau, p.s_n0);
    if p.theta < 1.0 {
        let th = p.theta;
        let decay = -c * p.t * libm::pow(nf + 1.0, 1.0 - th) / (1.0 - th);
        let noise = tau * c * c * phi_unchecked(1.0 - 2.0 * th, nf) * libm::exp(decay);
        let start = exp_or_zero(s, c * p.n0 as f64 / (1.0 - th) + decay);
        let tail = libm::pow(2.0, th) * tau * c / libm::pow(nf - 2.0, th);
        Ok(noise + start + tail)
    } else {
        let start = s * libm::pow(p.n0 as f64 / (nf + 1.0), c);
        let noise = libm::pow(2.0, c) * tau * c * c / libm::pow(nf + 1.0, c) * phi_unchecked(c - 1.0, nf);
        Ok(start + noise)
    }
}

/// Closed form for `theta = 1`, `c = 2`: `n0^2 s_n0 / (n+1)^2 + 8 sigma^2 K (1+nu)^4 / (lambda^2 (mu eps + nu)^2)`
/// with `K = 1 + alpha |grad L(w_bar)|`.
pub fn corollary_bound(p: &BoundParams, n: usize) -> f64 {
    let n0 = p.n0 as f64;
    let k = 1.0 + p.alpha_sup * p.grad_at_sol_norm;
    let nu1 = 1.0 + p.nu;
    let den = p.lambda_inf * (p.mu * p.epsilon + p.nu);
    n0 * n0 * p.s_n0 / ((n as f64 + 1.0) * (n as f64 + 1.0))
        + 8.0 * p.sigma_sq * k * nu1 * nu1 * nu1 * nu1 / (den * den)
}

/// Bound on `s_{n+1}` for the recursion `s_{n+1} <= (1 - eta_n) s_n + tau eta_n^2`
/// with `eta_n = c n^(-alpha)`, valid for `n >= 2 n0`.
pub fn lemma_a2_bound(alpha: f64, c: f64, tau: f64, s_n0: f64, n0: usize, n: usize) -> Result<f64> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(invalid("alpha must lie in (0, 1]"));
    }
    if !(c > 0.0) || !c.is_finite() || !(tau >= 0.0) || !tau.is_finite() {
        return Err(invalid("c must be positive and tau nonnegative"));
    }
    if !(s_n0 >= 0.0) || !s_n0.is_finite() {
        return Err(invalid("s_n0 must be finite and nonnegative"));
    }
    if n0 == 0 {
        return Err(invalid("n0 must be positive"));
    }
    let eta = c * libm::pow(n0 as f64, -alpha);
    if eta > 1.0 {
        return Err(Error::N0TooSmall { eta });
    }
    if n < 2 * n0 {
        return Err(Error::BoundRange { n, n0 });
    }
    let nf = n as f64;
    let n0f = n0 as f64;
    if alpha < 1.0 {
        let t = 1.0 - libm::pow(2.0, alpha - 1.0);
        let decay = -c * t * libm::pow(nf + 1.0, 1.0 - alpha) / (1.0 - alpha);
        let noise = exp_or_zero(tau * c * c * phi_unchecked(1.0 - 2.0 * alpha, nf), decay);
        let start = exp_or_zero(s_n0, c * libm::pow(n0f, 1.0 - alpha) / (1.0 - alpha) + decay);
        let tail = if tau == 0.0 {
            0.0
        } else {
            tau * libm::pow(2.0, alpha) * c / libm::pow(nf - 2.0, alpha)
        };
        Ok(noise + start + tail)
    } else {
        let start = s_n0 * libm::pow(n0f / (nf + 1.0), c);
        let noise = if tau == 0.0 {
            0.0
        } else {
            tau * c * c / libm::pow(nf + 1.0, c) * libm::pow(1.0 + 1.0 / n0f, c) * phi_unchecked(c - 1.0, nf)
        };
        Ok(start + noise)
    }
}

/// Seed-averaged squared distance at one recorded index.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnsemblePoint {
    pub n: usize,
    pub mean_sq_dist: f64,
    /// Standard error of the mean.
    pub std_error: f64,
    pub mean_dist: f64,
    pub std_dist: f64,
}

/// Mean and spread of `|w_n - w_bar|` and its square over an ensemble, at
/// every index recorded by all traces.
pub fn ensemble_statistics(traces: &[RunTrace]) -> Result<Vec<EnsemblePoint>> {
    let first = traces.first().ok_or(Error::MissingIterates)?;
    let m = traces.len() as f64;
    let mut out = Vec::new();
    for (i, rec) in first.records.iter().enumerate() {
        let n = rec.n;
        let mut d = Vec::with_capacity(traces.len());
        for t in traces {
            let r = t.records.get(i).filter(|r| r.n == n).or_else(|| t.record_at(n));
            match r.and_then(|r| r.iterate.dist_to_ref) {
                Some(x) => d.push(x),
                None => break,
            }
        }
        if d.len() != traces.len() {
            continue;
        }
        let mean_dist = d.iter().sum::<f64>() / m;
        let mean_sq_dist = d.iter().map(|x| x * x).sum::<f64>() / m;
        let (var_d, var_sq) = if traces.len() > 1 {
            (
                d.iter().map(|x| (x - mean_dist) * (x - mean_dist)).sum::<f64>() / (m - 1.0),
                d.iter().map(|x| (x * x - mean_sq_dist) * (x * x - mean_sq_dist)).sum::<f64>() / (m - 1.0),
            )
        } else {
            (0.0, 0.0)
        };
        out.push(EnsemblePoint {
            n,
            mean_sq_dist,
            std_error: libm::sqrt(var_sq / m),
            mean_dist,
            std_dist: libm::sqrt(var_d),
        });
    }
    if out.is_empty() {
        return Err(Error::MissingIterates);
    }
    Ok(out)
}

/// Minimum ensemble size accepted by [`empirical_rate`].
pub const MIN_RATE_SEEDS: usize = 30;

/// Least-squares slope of `log E|w_n - w_bar|^2` against `log n` over `n_lo..=n_hi`.
pub fn empirical_rate(traces: &[RunTrace], window: (usize, usize)) -> Result<f64> {
    if traces.len() < MIN_RATE_SEEDS {
        return Err(invalid("empirical_rate needs at least 30 seeds"));
    }
    let (lo, hi) = window;
    if lo == 0 || lo >= hi {
        return Err(Error::DegenerateWindow(alloc::format!("invalid window [{lo}, {hi}]")));
    }
    let stats = ensemble_statistics(traces)?;
    let last = stats.last().map_or(0, |p| p.n);
    if hi > last {
        return Err(Error::DegenerateWindow(alloc::format!(
            "window end {hi} beyond last recorded index {last}"
        )));
    }
    let mut pts = Vec::new();
    for p in stats.iter().filter(|p| p.n >= lo && p.n <= hi) {
        if !(p.mean_sq_dist > 0.0) {
            return Err(Error::DegenerateWindow(alloc::format!(
                "zero mean squared distance at n = {}",
                p.n
            )));
        }
        pts.push((libm::log(p.n as f64), libm::log(p.mean_sq_dist)));
    }
    if pts.len() < 2 {
        return Err(Error::DegenerateWindow("fewer than two recorded points".into()));
    }
    Ok(slope(&pts))
}

/// Ordinary least-squares slope.
pub fn slope(pts: &[(f64, f64)]) -> f64 {
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    sxy / sxx
}
