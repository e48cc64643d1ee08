//! Synthetic data for the regression and deconvolution experiments.

use std::f64::consts::PI;

use anyhow::{bail, ensure, Result};
use spg_core::vector::{zero_count, Matrix};
use spg_core::SpgRng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dictionary {
    /// `phi_k(x) = x^(k-1)` on `[-1, 1]`.
    Polynomial,
    /// `p = 2q + 1`; `cos((k-1)x)` for `k <= q`, then sines on `[0, 2 pi]`.
    /// With `shifted_sines` the sine for index `k` is `sin((k-q)x)`,
    /// otherwise `sin(kx)`.
    Trigonometric { shifted_sines: bool },
}

impl Dictionary {
    pub fn domain(&self) -> (f64, f64) {
        match self {
            Dictionary::Polynomial => (-1.0, 1.0),
            Dictionary::Trigonometric { .. } => (0.0, 2.0 * PI),
        }
    }

    pub fn validate(&self, p: usize) -> Result<()> {
        ensure!(p >= 1, "dictionary size must be positive");
        if let Dictionary::Trigonometric { .. } = self {
            ensure!(p % 2 == 1, "trigonometric dictionary needs odd p = 2q + 1, got {p}");
        }
        Ok(())
    }

    pub fn row(&self, x: f64, p: usize) -> Result<Vec<f64>> {
        self.validate(p)?;
        let (lo, hi) = self.domain();
        if !(lo..=hi).contains(&x) {
            bail!("x = {x} outside [{lo}, {hi}]");
        }
        Ok(match *self {
            Dictionary::Polynomial => {
                let mut r = Vec::with_capacity(p);
                let mut v = 1.0;
                for _ in 0..p {
                    r.push(v);
                    v *= x;
                }
                r
            }
            Dictionary::Trigonometric { shifted_sines } => {
                let q = (p - 1) / 2;
                (1..=p)
                    .map(|k| {
                        if k <= q {
                            ((k - 1) as f64 * x).cos()
                        } else if shifted_sines {
                            ((k - q) as f64 * x).sin()
                        } else {
                            (k as f64 * x).sin()
                        }
                    })
                    .collect()
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DataGenSpec {
    pub dictionary: Dictionary,
    pub p: usize,
    pub n_samples: usize,
    pub true_weights: Vec<f64>,
    pub label_noise_std: f64,
    pub data_seed: u64,
}

#[derive(Debug, Clone)]
pub struct RegressionData {
    pub inputs: Vec<f64>,
    pub design: Matrix,
    pub targets: Vec<f64>,
}

pub fn gen_regression_data(spec: &DataGenSpec) -> Result<RegressionData> {
    spec.dictionary.validate(spec.p)?;
    ensure!(spec.n_samples >= 1, "need at least one sample");
    ensure!(
        spec.true_weights.len() == spec.p,
        "true weights have length {}, expected {}",
        spec.true_weights.len(),
        spec.p
    );
    ensure!(spec.label_noise_std >= 0.0, "label noise must be nonnegative");
    let (lo, hi) = spec.dictionary.domain();
    let mut rng = SpgRng::new(spec.data_seed);
    let mut inputs = Vec::with_capacity(spec.n_samples);
    let mut data = Vec::with_capacity(spec.n_samples * spec.p);
    let mut targets = Vec::with_capacity(spec.n_samples);
    for _ in 0..spec.n_samples {
        let x = rng.uniform_range(lo, hi);
        let row = spec.dictionary.row(x, spec.p)?;
        let clean: f64 = row.iter().zip(&spec.true_weights).map(|(a, b)| a * b).sum();
        let noise = if spec.label_noise_std > 0.0 {
            spec.label_noise_std * rng.normal()
        } else {
            0.0
        };
        inputs.push(x);
        targets.push(clean + noise);
        data.extend(row);
    }
    Ok(RegressionData {
        inputs,
        design: Matrix::from_row_major(spec.n_samples, spec.p, data)?,
        targets,
    })
}

/// Discrete Gaussian kernel with standard deviation `std` samples, truncated
/// at `4 std` and normalized to unit sum, laid out for circular convolution
/// of length `n` (negative offsets wrap to the end).
pub fn gaussian_kernel(std: f64, n: usize) -> Result<Vec<f64>> {
    ensure!(std > 0.0 && std.is_finite(), "kernel std must be positive");
    let r = (4.0 * std).ceil() as usize;
    ensure!(2 * r < n, "kernel support {} exceeds signal length {n}", 2 * r + 1);
    let mut h = vec![0.0; n];
    let mut total = 0.0;
    for j in 0..=2 * r {
        let off = j as f64 - r as f64;
        let v = (-0.5 * (off / std).powi(2)).exp();
        total += v;
        h[(j + n - r) % n] += v;
    }
    h.iter_mut().for_each(|v| *v /= total);
    Ok(h)
}

/// Sparse `+-` spike train with `spikes` nonzeros at distinct uniform positions.
pub fn spike_signal(length: usize, spikes: usize, amp: (f64, f64), rng: &mut SpgRng) -> Result<Vec<f64>> {
    ensure!(spikes <= length, "more spikes than samples");
    ensure!(amp.0 > 0.0 && amp.0 <= amp.1, "spike amplitudes need 0 < lo <= hi");
    // Partial Fisher-Yates over the positions.
    let mut pos: Vec<usize> = (0..length).collect();
    for i in 0..spikes {
        let j = i + rng.index(length - i);
        pos.swap(i, j);
    }
    let mut w = vec![0.0; length];
    for &p in &pos[..spikes] {
        let sign = if rng.uniform() < 0.5 { -1.0 } else { 1.0 };
        w[p] = sign * rng.uniform_range(amp.0, amp.1);
    }
    debug_assert_eq!(zero_count(&w, 0.0), length - spikes);
    Ok(w)
}

/// Circular convolution `(h * w)_i = sum_j h_j w_{i-j}`.
pub fn circular_convolve(h: &[f64], w: &[f64]) -> Vec<f64> {
    let n = w.len();
    let mut out = vec![0.0; n];
    for (j, &hj) in h.iter().enumerate().filter(|(_, v)| **v != 0.0) {
        for (i, o) in out.iter_mut().enumerate() {
            *o += hj * w[(i + n - j) % n];
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_rows() {
        assert_eq!(Dictionary::Polynomial.row(0.0, 6).unwrap(), vec![1.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
        assert_eq!(Dictionary::Polynomial.row(0.5, 3).unwrap(), vec![1.0, 0.5, 0.25]);
        assert_eq!(Dictionary::Polynomial.row(1.0, 4).unwrap(), vec![1.0; 4]);
        assert!(Dictionary::Polynomial.row(2.0, 3).is_err());
    }

    #[test]
    fn trig_row_at_zero() {
        let r = Dictionary::Trigonometric { shifted_sines: false }.row(0.0, 7).unwrap();
        assert_eq!(r, vec![1.0, 1.0, 1.0, 0.0, 0.0, 0.0, 0.0]);
        assert!(Dictionary::Trigonometric { shifted_sines: false }.row(0.0, 6).is_err());
    }

    #[test]
    fn trig_sine_indexing() {
        let x = 0.3;
        let printed = Dictionary::Trigonometric { shifted_sines: false }.row(x, 5).unwrap();
        let shifted = Dictionary::Trigonometric { shifted_sines: true }.row(x, 5).unwrap();
        // q = 2: cosines of 0x, 1x, then sines of 3x, 4x, 5x (printed) or 1x, 2x, 3x.
        assert_eq!(printed[2], (3.0 * x).sin());
        assert_eq!(printed[4], (5.0 * x).sin());
        assert_eq!(shifted[2], x.sin());
        assert_eq!(shifted[4], (3.0 * x).sin());
    }

    #[test]
    fn noiseless_targets_follow_model() {
        let spec = DataGenSpec {
            dictionary: Dictionary::Polynomial,
            p: 6,
            n_samples: 9,
            true_weights: vec![3.0, 2.0, 1.0, 0.0, 1.0, 0.0],
            label_noise_std: 0.0,
            data_seed: 5,
        };
        let d = gen_regression_data(&spec).unwrap();
        for (i, &x) in d.inputs.iter().enumerate() {
            let y = 3.0 + 2.0 * x + x * x + x.powi(4);
            assert!((d.targets[i] - y).abs() < 1e-12);
        }
        let again = gen_regression_data(&spec).unwrap();
        assert_eq!(d.targets, again.targets);
    }

    #[test]
    fn kernel_is_normalized_and_symmetric() {
        let h = gaussian_kernel(4.0, 64).unwrap();
        assert!((h.iter().sum::<f64>() - 1.0).abs() < 1e-14);
        for j in 1..=16 {
            assert!((h[j] - h[64 - j]).abs() < 1e-15);
        }
        assert_eq!(h[17], 0.0);
        assert!(gaussian_kernel(4.0, 20).is_err());
    }

    #[test]
    fn spikes_have_requested_support() {
        let mut rng = SpgRng::new(3);
        let w = spike_signal(1024, 31, (10.0, 30.0), &mut rng).unwrap();
        assert_eq!(zero_count(&w, 0.0), 993);
        assert!(w.iter().all(|&x| x == 0.0 || (10.0..=30.0).contains(&x.abs())));
    }

    #[test]
    fn convolution_with_impulse() {
        let mut h = vec![0.0; 5];
        h[1] = 1.0;
        assert_eq!(circular_convolve(&h, &[1.0, 2.0, 3.0, 4.0, 5.0]), vec![5.0, 1.0, 2.0, 3.0, 4.0]);
    }
}
