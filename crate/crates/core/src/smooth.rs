//! Smooth convex terms with exact gradients and certified constants.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt::Debug;

use crate::error::{check_dim, check_finite, invalid, Result};
use crate::vector::{dot, norm, Matrix};

/// A differentiable convex function with a `beta`-Lipschitz gradient that is
/// `mu`-strongly convex (`mu` may be zero).
pub trait SmoothTerm: Debug + Send + Sync {
    fn dimension(&self) -> usize;

    fn value(&self, w: &[f64]) -> f64;

    fn gradient_into(&self, w: &[f64], out: &mut [f64]);

    /// Lipschitz constant `beta` of the gradient.
    fn lipschitz(&self) -> f64;

    /// Strong convexity modulus `mu`.
    fn strong_convexity(&self) -> f64;

    fn gradient(&self, w: &[f64]) -> Vec<f64> {
        let mut g = vec![0.0; self.dimension()];
        self.gradient_into(w, &mut g);
        g
    }
}

/// `L(w) = (curvature / 2) |w - center|^2`.
#[derive(Debug, Clone)]
pub struct Quadratic {
    center: Vec<f64>,
    curvature: f64,
}

impl Quadratic {
    pub fn new(center: Vec<f64>, curvature: f64) -> Result<Self> {
        if !(curvature > 0.0) || !curvature.is_finite() {
            return Err(invalid("curvature must be positive and finite"));
        }
        if center.is_empty() {
            return Err(invalid("center must have positive dimension"));
        }
        check_finite(&center, "quadratic center")?;
        Ok(Self { center, curvature })
    }

    pub fn center(&self) -> &[f64] {
        &self.center
    }
}

impl SmoothTerm for Quadratic {
    fn dimension(&self) -> usize {
        self.center.len()
    }

    fn value(&self, w: &[f64]) -> f64 {
        0.5 * self.curvature * crate::vector::dist_sq(w, &self.center)
    }

    fn gradient_into(&self, w: &[f64], out: &mut [f64]) {
        for ((o, &x), &c) in out.iter_mut().zip(w).zip(&self.center) {
            *o = self.curvature * (x - c);
        }
    }

    fn lipschitz(&self) -> f64 {
        self.curvature
    }

    fn strong_convexity(&self) -> f64 {
        self.curvature
    }
}

/// Extreme eigenvalues of a symmetric positive semidefinite operator given
/// by its action, via power iteration.
#[derive(Debug, Clone, Copy)]
pub struct PowerIteration {
    pub tolerance: f64,
    pub max_iterations: usize,
}

impl Default for PowerIteration {
    fn default() -> Self {
        Self {
            tolerance: 1e-10,
            max_iterations: 10_000,
        }
    }
}

impl PowerIteration {
    /// Largest eigenvalue. Stops once the residual `|Av - lambda v|` falls
    /// below `tolerance * lambda`.
    pub fn largest<F>(&self, dim: usize, mut apply: F) -> f64
    where
        F: FnMut(&[f64], &mut [f64]),
    {
        // Deterministic start with no symmetry that could hide an eigenvector.
        let mut v: Vec<f64> = (0..dim).map(|i| 1.0 + 0.01 * libm::sqrt(i as f64 + 1.0)).collect();
        let nv = norm(&v);
        v.iter_mut().for_each(|x| *x /= nv);
        let mut av = vec![0.0; dim];
        let mut lambda = 0.0;
        for _ in 0..self.max_iterations {
            apply(&v, &mut av);
            lambda = dot(&v, &av);
            let resid: f64 = av
                .iter()
                .zip(&v)
                .map(|(a, x)| (a - lambda * x) * (a - lambda * x))
                .sum();
            let n_av = norm(&av);
            if n_av == 0.0 {
                return 0.0;
            }
            if libm::sqrt(resid) <= self.tolerance * libm::fabs(lambda) {
                break;
            }
            for (x, a) in v.iter_mut().zip(&av) {
                *x = a / n_av;
            }
        }
        lambda
    }
}

/// `L(w) = 1/(2N) |X w - y|^2 + (ridge / 2) |w|^2`.
#[derive(Debug, Clone)]
pub struct LeastSquares {
    design: Matrix,
    targets: Vec<f64>,
    ridge: f64,
    beta: f64,
    mu: f64,
}

/// Builds the least-squares term for an `N x p` design.
pub fn least_squares_term(design: Matrix, targets: Vec<f64>, nu_ridge: f64) -> Result<LeastSquares> {
    LeastSquares::new(design, targets, nu_ridge)
}

impl LeastSquares {
    pub fn new(design: Matrix, targets: Vec<f64>, ridge: f64) -> Result<Self> {
        if design.rows() == 0 || design.cols() == 0 {
            return Err(invalid("design must have at least one row and one column"));
        }
        check_dim(design.rows(), targets.len())?;
        if !(ridge >= 0.0) || !ridge.is_finite() {
            return Err(invalid("ridge must be nonnegative and finite"));
        }
        check_finite(&targets, "least-squares targets")?;
        let (lmax, lmin) = gram_extremes(&design);
        Ok(Self {
            design,
            targets,
            ridge,
            beta: lmax + ridge,
            mu: lmin + ridge,
        })
    }

    pub fn design(&self) -> &Matrix {
        &self.design
    }

    pub fn targets(&self) -> &[f64] {
        &self.targets
    }

    pub fn ridge(&self) -> f64 {
        self.ridge
    }

    /// One single-row term per sample, `L_i(w) = 1/2 (x_i^T w - y_i)^2 + (ridge/2)|w|^2`,
    /// whose mean equals `self`.
    pub fn split_rows(&self) -> Vec<LeastSquares> {
        (0..self.design.rows())
            .map(|i| {
                let row = Matrix::from_row_major(1, self.design.cols(), self.design.row(i).to_vec())
                    .expect("row has design width");
                LeastSquares::new(row, vec![self.targets[i]], self.ridge).expect("valid row term")
            })
            .collect()
    }
}

/// Largest and smallest eigenvalues of `X^T X / N`.
fn gram_extremes(design: &Matrix) -> (f64, f64) {
    let n = design.rows() as f64;
    let p = design.cols();
    let mut tmp = vec![0.0; design.rows()];
    let pi = PowerIteration::default();
    let lmax = pi.largest(p, |v, out| {
        design.mul_vec_into(v, &mut tmp);
        design.mul_t_vec_into(&tmp, out);
        out.iter_mut().for_each(|o| *o /= n);
    });
    if lmax == 0.0 {
        return (0.0, 0.0);
    }
    // Shifted operator lmax I - A has top eigenvalue lmax - lmin.
    let shifted = pi.largest(p, |v, out| {
        design.mul_vec_into(v, &mut tmp);
        design.mul_t_vec_into(&tmp, out);
        for (o, &x) in out.iter_mut().zip(v) {
            *o = lmax * x - *o / n;
        }
    });
    (lmax, (lmax - shifted).max(0.0))
}

impl SmoothTerm for LeastSquares {
    fn dimension(&self) -> usize {
        self.design.cols()
    }

    fn value(&self, w: &[f64]) -> f64 {
        let n = self.design.rows() as f64;
        let mut r = 0.0;
        for (i, &y) in self.targets.iter().enumerate() {
            let e = dot(self.design.row(i), w) - y;
            r += e * e;
        }
        r / (2.0 * n) + 0.5 * self.ridge * dot(w, w)
    }

    fn gradient_into(&self, w: &[f64], out: &mut [f64]) {
        let n = self.design.rows() as f64;
        out.iter_mut().for_each(|o| *o = 0.0);
        for (i, &y) in self.targets.iter().enumerate() {
            let row = self.design.row(i);
            let e = dot(row, w) - y;
            for (o, &a) in out.iter_mut().zip(row) {
                *o += a * e;
            }
        }
        for (o, &x) in out.iter_mut().zip(w) {
            *o = *o / n + self.ridge * x;
        }
    }

    fn lipschitz(&self) -> f64 {
        self.beta
    }

    fn strong_convexity(&self) -> f64 {
        self.mu
    }
}

/// `L(w) = 1/2 |h * w - y|^2 + (ridge / 2) |w|^2` with circular convolution.
#[derive(Debug, Clone)]
pub struct CircularConvolution {
    /// Nonzero kernel taps as `(offset, value)`.
    taps: Vec<(usize, f64)>,
    observation: Vec<f64>,
    ridge: f64,
    beta: f64,
    mu: f64,
}

/// Builds the circular deconvolution term. `kernel[j]` multiplies a shift by
/// `j` samples; it is zero-padded to the observation length.
pub fn convolution_term(kernel: &[f64], observation: Vec<f64>, nu_ridge: f64) -> Result<CircularConvolution> {
    CircularConvolution::new(kernel, observation, nu_ridge)
}

impl CircularConvolution {
    pub fn new(kernel: &[f64], observation: Vec<f64>, ridge: f64) -> Result<Self> {
        let n = observation.len();
        if kernel.is_empty() || n == 0 {
            return Err(invalid("kernel and observation must be non-empty"));
        }
        if kernel.len() > n {
            return Err(crate::Error::DimensionMismatch {
                expected: n,
                found: kernel.len(),
            });
        }
        if !(ridge >= 0.0) || !ridge.is_finite() {
            return Err(invalid("ridge must be nonnegative and finite"));
        }
        check_finite(kernel, "convolution kernel")?;
        check_finite(&observation, "convolution observation")?;
        let taps: Vec<(usize, f64)> = kernel
            .iter()
            .enumerate()
            .filter(|(_, &h)| h != 0.0)
            .map(|(j, &h)| (j, h))
            .collect();
        let (lmax, lmin) = spectrum_extremes(&taps, n);
        Ok(Self {
            taps,
            observation,
            ridge,
            beta: lmax + ridge,
            mu: lmin + ridge,
        })
    }

    pub fn observation(&self) -> &[f64] {
        &self.observation
    }

    /// `out = h * w`
    pub fn convolve_into(&self, w: &[f64], out: &mut [f64]) {
        let n = w.len();
        out.iter_mut().for_each(|o| *o = 0.0);
        for &(j, h) in &self.taps {
            // out[i] += h w[i - j]
            for i in 0..n {
                let k = if i >= j { i - j } else { i + n - j };
                out[i] += h * w[k];
            }
        }
    }

    /// `out = h~ * r` (adjoint of the convolution).
    pub fn correlate_into(&self, r: &[f64], out: &mut [f64]) {
        let n = r.len();
        out.iter_mut().for_each(|o| *o = 0.0);
        for &(j, h) in &self.taps {
            for i in 0..n {
                let k = if i + j < n { i + j } else { i + j - n };
                out[i] += h * r[k];
            }
        }
    }
}

/// Largest and smallest `|h^(k)|^2` over the DFT frequencies.
fn spectrum_extremes(taps: &[(usize, f64)], n: usize) -> (f64, f64) {
    let mut lmax = 0.0f64;
    let mut lmin = f64::INFINITY;
    for k in 0..n {
        let (mut re, mut im) = (0.0, 0.0);
        for &(j, h) in taps {
            let ang = -2.0 * PI * ((j * k) % n) as f64 / n as f64;
            re += h * libm::cos(ang);
            im += h * libm::sin(ang);
        }
        let m = re * re + im * im;
        lmax = lmax.max(m);
        lmin = lmin.min(m);
    }
    (lmax, lmin)
}

impl SmoothTerm for CircularConvolution {
    fn dimension(&self) -> usize {
        self.observation.len()
    }

    fn value(&self, w: &[f64]) -> f64 {
        let mut hw = vec![0.0; w.len()];
        self.convolve_into(w, &mut hw);
        let r: f64 = hw
            .iter()
            .zip(&self.observation)
            .map(|(a, y)| (a - y) * (a - y))
            .sum();
        0.5 * r + 0.5 * self.ridge * dot(w, w)
    }

    fn gradient_into(&self, w: &[f64], out: &mut [f64]) {
        let mut resid = vec![0.0; w.len()];
        self.convolve_into(w, &mut resid);
        for (r, y) in resid.iter_mut().zip(&self.observation) {
            *r -= y;
        }
        self.correlate_into(&resid, out);
        for (o, &x) in out.iter_mut().zip(w) {
            *o += self.ridge * x;
        }
    }

    fn lipschitz(&self) -> f64 {
        self.beta
    }

    fn strong_convexity(&self) -> f64 {
        self.mu
    }
}
