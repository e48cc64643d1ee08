//! Stochastic gradient oracles.
//!
//! An oracle returns an estimate `G_n` of `grad L(w_n)` that is unbiased and
//! whose variance obeys `E|G_n - grad L(w_n)|^2 <= sigma^2 (1 + alpha |grad L(w_n)|^2)`.
//! Oracles are immutable; the random stream is owned by whoever drives them.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt::Debug;

use crate::error::{check_dim, invalid, Error, Result};
use crate::rng::SpgRng;
use crate::smooth::SmoothTerm;
use crate::vector::{dist_sq, norm_sq};

/// Smallest `sigma^2` ever reported, so step-size conditions never divide by zero.
pub const SIGMA_SQ_FLOOR: f64 = 1e-12;

/// Constants `(sigma^2, alpha)` witnessing the variance condition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VarianceCertificate {
    sigma_sq: f64,
    alpha: f64,
}

impl VarianceCertificate {
    /// `sigma_sq` below [`SIGMA_SQ_FLOOR`] is raised to the floor.
    pub fn new(sigma_sq: f64, alpha: f64) -> Result<Self> {
        if !(sigma_sq >= 0.0) || !(alpha >= 0.0) || !sigma_sq.is_finite() || !alpha.is_finite() {
            return Err(invalid("certificate constants must be nonnegative and finite"));
        }
        Ok(Self {
            sigma_sq: sigma_sq.max(SIGMA_SQ_FLOOR),
            alpha,
        })
    }

    pub fn sigma_sq(&self) -> f64 {
        self.sigma_sq
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// `sigma^2 (1 + alpha |g|^2)`.
    pub fn variance_bound(&self, grad_norm_sq: f64) -> f64 {
        self.sigma_sq * (1.0 + self.alpha * grad_norm_sq)
    }
}

pub trait GradientOracle: Debug + Send + Sync {
    fn dimension(&self) -> usize;

    /// Seed of the oracle's own stream (see [`OracleStream`]).
    fn seed(&self) -> u64;

    /// Writes `G_n` at `w` into `out`, drawing randomness from `rng`.
    fn estimate_into(&self, w: &[f64], n: usize, rng: &mut SpgRng, out: &mut [f64]);

    /// The gradient the estimates are unbiased for.
    fn exact_gradient_into(&self, w: &[f64], out: &mut [f64]);

    /// Analytic certificate, when one is known.
    fn certificate(&self) -> Option<VarianceCertificate>;

    /// True when every estimate equals the exact gradient.
    fn is_exact(&self) -> bool {
        false
    }
}

/// An oracle paired with a stream seeded from [`GradientOracle::seed`].
pub struct OracleStream<'a> {
    oracle: &'a dyn GradientOracle,
    rng: SpgRng,
    n: usize,
}

impl<'a> OracleStream<'a> {
    pub fn new(oracle: &'a dyn GradientOracle) -> Self {
        Self::with_seed(oracle, oracle.seed())
    }

    pub fn with_seed(oracle: &'a dyn GradientOracle, seed: u64) -> Self {
        Self {
            oracle,
            rng: SpgRng::new(seed),
            n: 0,
        }
    }

    pub fn next_into(&mut self, w: &[f64], out: &mut [f64]) {
        self.n += 1;
        self.oracle.estimate_into(w, self.n, &mut self.rng, out);
    }

    pub fn next(&mut self, w: &[f64]) -> Vec<f64> {
        let mut g = vec![0.0; self.oracle.dimension()];
        self.next_into(w, &mut g);
        g
    }
}

/// `G_n = grad L(w_n)`; the noiseless oracle.
#[derive(Debug, Clone)]
pub struct ExactOracle {
    smooth: Arc<dyn SmoothTerm>,
}

impl ExactOracle {
    pub fn new(smooth: Arc<dyn SmoothTerm>) -> Self {
        Self { smooth }
    }
}

impl GradientOracle for ExactOracle {
    fn dimension(&self) -> usize {
        self.smooth.dimension()
    }

    fn seed(&self) -> u64 {
        0
    }

    fn estimate_into(&self, w: &[f64], _n: usize, _rng: &mut SpgRng, out: &mut [f64]) {
        self.smooth.gradient_into(w, out);
    }

    fn exact_gradient_into(&self, w: &[f64], out: &mut [f64]) {
        self.smooth.gradient_into(w, out);
    }

    fn certificate(&self) -> Option<VarianceCertificate> {
        VarianceCertificate::new(0.0, 0.0).ok()
    }

    fn is_exact(&self) -> bool {
        true
    }
}

/// `G_n = grad L(w_n) + s_n` with `s_n` i.i.d. `N(0, noise_std^2 I)`.
#[derive(Debug, Clone)]
pub struct AdditiveGaussianOracle {
    smooth: Arc<dyn SmoothTerm>,
    noise_std: f64,
    seed: u64,
    alpha: f64,
}

pub fn additive_gaussian_oracle(
    smooth: Arc<dyn SmoothTerm>,
    noise_std: f64,
    seed: u64,
) -> Result<AdditiveGaussianOracle> {
    if !(noise_std > 0.0) || !noise_std.is_finite() {
        return Err(invalid("noise_std must be positive and finite"));
    }
    Ok(AdditiveGaussianOracle {
        smooth,
        noise_std,
        seed,
        alpha: 0.0,
    })
}

impl AdditiveGaussianOracle {
    /// Declares the `alpha` carried by the certificate. The additive noise
    /// satisfies the bound for every `alpha >= 0`.
    pub fn with_declared_alpha(mut self, alpha: f64) -> Result<Self> {
        if !(alpha >= 0.0) || !alpha.is_finite() {
            return Err(invalid("alpha must be nonnegative"));
        }
        self.alpha = alpha;
        Ok(self)
    }

    pub fn noise_std(&self) -> f64 {
        self.noise_std
    }
}

impl GradientOracle for AdditiveGaussianOracle {
    fn dimension(&self) -> usize {
        self.smooth.dimension()
    }

    fn seed(&self) -> u64 {
        self.seed
    }

    fn estimate_into(&self, w: &[f64], _n: usize, rng: &mut SpgRng, out: &mut [f64]) {
        self.smooth.gradient_into(w, out);
        for o in out.iter_mut() {
            *o += self.noise_std * rng.normal();
        }
    }

    fn exact_gradient_into(&self, w: &[f64], out: &mut [f64]) {
        self.smooth.gradient_into(w, out);
    }

    fn certificate(&self) -> Option<VarianceCertificate> {
        let d = self.dimension() as f64;
        VarianceCertificate::new(d * self.noise_std * self.noise_std, self.alpha).ok()
    }
}

/// `G_n = grad L_{i(n)}(w_n)` with `i(n)` uniform on the components; unbiased
/// for the mean `(1/m) sum_i L_i`.
#[derive(Debug, Clone)]
pub struct FiniteSumOracle {
    components: Vec<Arc<dyn SmoothTerm>>,
    seed: u64,
    certificate: Option<VarianceCertificate>,
}

pub fn finite_sum_oracle(components: Vec<Arc<dyn SmoothTerm>>, seed: u64) -> Result<FiniteSumOracle> {
    let first = components.first().ok_or(Error::EmptyComponents)?;
    let d = first.dimension();
    for c in &components {
        check_dim(d, c.dimension())?;
    }
    Ok(FiniteSumOracle {
        components,
        seed,
        certificate: None,
    })
}

impl FiniteSumOracle {
    pub fn with_certificate(mut self, cert: VarianceCertificate) -> Self {
        self.certificate = Some(cert);
        self
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    /// Exact sampling variance `(1/m) sum_i |grad L_i(w) - grad L(w)|^2`.
    pub fn exact_variance(&self, w: &[f64]) -> f64 {
        let d = self.dimension();
        let mut mean = vec![0.0; d];
        self.exact_gradient_into(w, &mut mean);
        let mut g = vec![0.0; d];
        let mut acc = 0.0;
        for c in &self.components {
            c.gradient_into(w, &mut g);
            acc += dist_sq(&g, &mean);
        }
        acc / self.components.len() as f64
    }
}

impl GradientOracle for FiniteSumOracle {
    fn dimension(&self) -> usize {
        self.components[0].dimension()
    }

    fn seed(&self) -> u64 {
        self.seed
    }

    fn estimate_into(&self, w: &[f64], _n: usize, rng: &mut SpgRng, out: &mut [f64]) {
        let i = if self.components.len() == 1 {
            0
        } else {
            rng.index(self.components.len())
        };
        self.components[i].gradient_into(w, out);
    }

    fn exact_gradient_into(&self, w: &[f64], out: &mut [f64]) {
        if self.components.len() == 1 {
            self.components[0].gradient_into(w, out);
            return;
        }
        let m = self.components.len() as f64;
        let mut g = vec![0.0; out.len()];
        out.iter_mut().for_each(|o| *o = 0.0);
        for c in &self.components {
            c.gradient_into(w, &mut g);
            for (o, x) in out.iter_mut().zip(&g) {
                *o += x;
            }
        }
        out.iter_mut().for_each(|o| *o /= m);
    }

    fn certificate(&self) -> Option<VarianceCertificate> {
        if self.components.len() == 1 {
            return VarianceCertificate::new(0.0, 0.0).ok();
        }
        self.certificate
    }

    fn is_exact(&self) -> bool {
        self.components.len() == 1
    }
}

/// Per-probe Monte-Carlo statistics of an oracle.
#[derive(Debug, Clone)]
pub struct ProbeStats {
    pub exact: Vec<f64>,
    pub mean: Vec<f64>,
    /// Per-component sample standard deviation.
    pub std: Vec<f64>,
    /// Sample mean of `|G - grad L(w)|^2`.
    pub mean_sq_error: f64,
    pub samples: usize,
}

/// Draws `samples` estimates at the frozen point `w`.
pub fn probe_statistics(oracle: &dyn GradientOracle, w: &[f64], samples: usize, rng: &mut SpgRng) -> Result<ProbeStats> {
    if samples < 2 {
        return Err(invalid("need at least two samples"));
    }
    let d = oracle.dimension();
    check_dim(d, w.len())?;
    let mut exact = vec![0.0; d];
    oracle.exact_gradient_into(w, &mut exact);
    let mut g = vec![0.0; d];
    // Accumulate deviations from the exact gradient for numerical stability.
    let mut s1 = vec![0.0; d];
    let mut s2 = vec![0.0; d];
    let mut mse = 0.0;
    for k in 0..samples {
        oracle.estimate_into(w, k + 1, rng, &mut g);
        if g.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite("oracle sample"));
        }
        for i in 0..d {
            let e = g[i] - exact[i];
            s1[i] += e;
            s2[i] += e * e;
        }
        mse += dist_sq(&g, &exact);
    }
    let m = samples as f64;
    let mean: Vec<f64> = s1.iter().zip(&exact).map(|(s, x)| x + s / m).collect();
    let std = s1
        .iter()
        .zip(&s2)
        .map(|(a, b)| libm::sqrt(((b - a * a / m) / (m - 1.0)).max(0.0)))
        .collect();
    Ok(ProbeStats {
        exact,
        mean,
        std,
        mean_sq_error: mse / m,
        samples,
    })
}

impl ProbeStats {
    /// Unbiasedness: every component of the sample mean lies within
    /// `4 std / sqrt(M)` of the exact gradient.
    pub fn unbiased(&self) -> bool {
        let m = libm::sqrt(self.samples as f64);
        self.mean
            .iter()
            .zip(&self.exact)
            .zip(&self.std)
            .all(|((a, b), s)| libm::fabs(a - b) <= 4.0 * s / m)
    }

    /// Variance bound: `mean_sq_error <= sigma^2 (1 + alpha |grad L|^2) (1 + 3/sqrt(M))`.
    pub fn within_certificate(&self, cert: &VarianceCertificate) -> bool {
        let slack = 1.0 + 3.0 / libm::sqrt(self.samples as f64);
        self.mean_sq_error <= cert.variance_bound(norm_sq(&self.exact)) * slack
    }
}

/// Fits `(sigma^2, alpha)` so the variance condition holds on every probe
/// with 10% slack.
///
/// `alpha` comes from a nonnegative least-squares fit of the empirical
/// variance against `|grad L|^2`; `sigma^2` is then the smallest value that
/// covers all probes, floored at [`SIGMA_SQ_FLOOR`].
pub fn estimate_certificate(
    oracle: &dyn GradientOracle,
    probe_points: &[Vec<f64>],
    samples: usize,
) -> Result<VarianceCertificate> {
    if samples < 1000 {
        return Err(invalid("estimate_certificate needs at least 1000 samples"));
    }
    if probe_points.is_empty() {
        return Err(invalid("no probe points"));
    }
    let mut rng = SpgRng::new(oracle.seed());
    let mut xs = Vec::with_capacity(probe_points.len());
    let mut vs = Vec::with_capacity(probe_points.len());
    for w in probe_points {
        let st = probe_statistics(oracle, w, samples, &mut rng)?;
        xs.push(norm_sq(&st.exact));
        vs.push(st.mean_sq_error);
    }
    let (c0, c1) = nonneg_line_fit(&xs, &vs);
    let alpha = if c1 > 0.0 {
        c1 / c0.max(SIGMA_SQ_FLOOR)
    } else {
        0.0
    };
    let sigma_sq = xs
        .iter()
        .zip(&vs)
        .map(|(x, v)| 1.1 * v / (1.0 + alpha * x))
        .fold(0.0f64, f64::max);
    VarianceCertificate::new(sigma_sq, alpha)
}

/// Least squares `v ~ c0 + c1 x` with `c0, c1 >= 0`.
fn nonneg_line_fit(x: &[f64], v: &[f64]) -> (f64, f64) {
    let m = x.len() as f64;
    let mx = x.iter().sum::<f64>() / m;
    let mv = v.iter().sum::<f64>() / m;
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    let sxv: f64 = x.iter().zip(v).map(|(a, b)| (a - mx) * (b - mv)).sum();
    let c1 = if sxx > 0.0 { sxv / sxx } else { 0.0 };
    let c0 = mv - c1 * mx;
    if c1 <= 0.0 {
        return (mv.max(0.0), 0.0);
    }
    if c0 < 0.0 {
        // Through the origin.
        let sxx0: f64 = x.iter().map(|a| a * a).sum();
        let sxv0: f64 = x.iter().zip(v).map(|(a, b)| a * b).sum();
        return (0.0, if sxx0 > 0.0 { (sxv0 / sxx0).max(0.0) } else { 0.0 });
    }
    (c0, c1)
}
