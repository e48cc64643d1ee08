//! Proximity operators.
//!
//! For a convex `f` and a scale `gamma > 0`,
//! `prox_{gamma f}(z) = argmin_v gamma f(v) + 1/2 |v - z|^2`.
//! All built-in regularizers are separable and have closed forms.

use alloc::vec::Vec;
use core::fmt::Debug;

use crate::error::{check_dim, check_finite, invalid, Error, Result};
use crate::vector::sign;

/// Soft-thresholding of a scalar.
#[inline]
pub fn soft_threshold(x: f64, t: f64) -> f64 {
    let a = libm::fabs(x) - t;
    if a > 0.0 {
        sign(x) * a
    } else {
        0.0
    }
}

/// Prox of `threshold * |.|_1`.
pub fn prox_l1(z: &[f64], threshold: f64) -> Result<Vec<f64>> {
    if !(threshold > 0.0) || !threshold.is_finite() {
        return Err(invalid("threshold must be positive and finite"));
    }
    check_finite(z, "prox_l1")?;
    Ok(z.iter().map(|&x| soft_threshold(x, threshold)).collect())
}

/// Prox of `gamma * (omega |.|_1 + nu/2 |.|^2)`: soft-threshold by `gamma omega`
/// then shrink by `1 + gamma nu`.
pub fn prox_elastic_net(z: &[f64], gamma: f64, omega: f64, nu: f64) -> Result<Vec<f64>> {
    if !(gamma > 0.0) || !gamma.is_finite() {
        return Err(invalid("gamma must be positive and finite"));
    }
    if !(omega >= 0.0) || !(nu >= 0.0) || !omega.is_finite() || !nu.is_finite() {
        return Err(invalid("omega and nu must be nonnegative and finite"));
    }
    check_finite(z, "prox_elastic_net")?;
    let shrink = 1.0 + gamma * nu;
    Ok(z.iter()
        .map(|&x| soft_threshold(x, gamma * omega) / shrink)
        .collect())
}

/// Euclidean projection onto the box `[lower, upper]`.
pub fn prox_box(z: &[f64], lower: &[f64], upper: &[f64]) -> Result<Vec<f64>> {
    check_dim(z.len(), lower.len())?;
    check_dim(z.len(), upper.len())?;
    check_finite(z, "prox_box")?;
    if let Some(i) = lower.iter().zip(upper).position(|(l, u)| !(l <= u)) {
        return Err(Error::EmptyBox(i));
    }
    Ok(z.iter()
        .zip(lower.iter().zip(upper))
        .map(|(&x, (&l, &u))| x.clamp(l, u))
        .collect())
}

/// A proper lower semicontinuous convex function with a closed-form prox.
pub trait Regularizer: Debug + Send + Sync {
    /// Value at `w`; `f64::INFINITY` outside the domain.
    fn value(&self, w: &[f64]) -> f64;

    /// Writes `prox_{gamma R}(z)` into `out`. Inputs are assumed finite and of
    /// matching length; callers validate.
    fn prox_into(&self, z: &[f64], gamma: f64, out: &mut [f64]);

    /// Strong convexity modulus `nu`.
    fn strong_convexity(&self) -> f64;

    /// Euclidean distance from `v` to the subdifferential of `R` at `w`
    /// (`f64::INFINITY` when the subdifferential is empty).
    fn subgradient_distance(&self, w: &[f64], v: &[f64]) -> f64;

    fn prox(&self, z: &[f64], gamma: f64) -> Vec<f64> {
        let mut out = alloc::vec![0.0; z.len()];
        self.prox_into(z, gamma, &mut out);
        out
    }
}

/// `R = 0`.
#[derive(Debug, Clone, Copy, Default)]
pub struct NoRegularizer;

impl Regularizer for NoRegularizer {
    fn value(&self, _w: &[f64]) -> f64 {
        0.0
    }

    fn prox_into(&self, z: &[f64], _gamma: f64, out: &mut [f64]) {
        out.copy_from_slice(z);
    }

    fn strong_convexity(&self) -> f64 {
        0.0
    }

    fn subgradient_distance(&self, _w: &[f64], v: &[f64]) -> f64 {
        crate::vector::norm(v)
    }
}

/// `R(w) = l1 |w - c|_1 + (l2 / 2) |w - c|^2`, with `c = 0` unless a center is given.
#[derive(Debug, Clone)]
pub struct ElasticNet {
    l1: f64,
    l2: f64,
    center: Option<Vec<f64>>,
}

impl ElasticNet {
    pub fn new(l1: f64, l2: f64) -> Result<Self> {
        if !(l1 >= 0.0) || !(l2 >= 0.0) || !l1.is_finite() || !l2.is_finite() {
            return Err(invalid("elastic-net weights must be nonnegative and finite"));
        }
        Ok(Self {
            l1,
            l2,
            center: None,
        })
    }

    pub fn l1_only(l1: f64) -> Result<Self> {
        Self::new(l1, 0.0)
    }

    pub fn with_center(mut self, center: Vec<f64>) -> Result<Self> {
        check_finite(&center, "elastic-net center")?;
        self.center = Some(center);
        Ok(self)
    }

    pub fn l1_weight(&self) -> f64 {
        self.l1
    }

    pub fn l2_weight(&self) -> f64 {
        self.l2
    }

    pub fn center(&self) -> Option<&[f64]> {
        self.center.as_deref()
    }

    #[inline]
    fn c(&self, i: usize) -> f64 {
        self.center.as_ref().map_or(0.0, |c| c[i])
    }
}

impl Regularizer for ElasticNet {
    fn value(&self, w: &[f64]) -> f64 {
        w.iter()
            .enumerate()
            .map(|(i, &x)| {
                let d = x - self.c(i);
                self.l1 * libm::fabs(d) + 0.5 * self.l2 * d * d
            })
            .sum()
    }

    fn prox_into(&self, z: &[f64], gamma: f64, out: &mut [f64]) {
        let t = gamma * self.l1;
        let shrink = 1.0 + gamma * self.l2;
        match &self.center {
            None => {
                for (o, &x) in out.iter_mut().zip(z) {
                    *o = soft_threshold(x, t) / shrink;
                }
            }
            Some(c) => {
                for ((o, &x), &ci) in out.iter_mut().zip(z).zip(c) {
                    *o = ci + soft_threshold(x - ci, t) / shrink;
                }
            }
        }
    }

    fn strong_convexity(&self) -> f64 {
        self.l2
    }

    fn subgradient_distance(&self, w: &[f64], v: &[f64]) -> f64 {
        let mut acc = 0.0;
        for (i, (&x, &g)) in w.iter().zip(v).enumerate() {
            let d = x - self.c(i);
            let gap = if d != 0.0 {
                g - (self.l2 * d + self.l1 * sign(d))
            } else {
                (libm::fabs(g) - self.l1).max(0.0)
            };
            acc += gap * gap;
        }
        libm::sqrt(acc)
    }
}

/// Indicator of the box `[lower, upper]`.
#[derive(Debug, Clone)]
pub struct BoxIndicator {
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl BoxIndicator {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        check_dim(lower.len(), upper.len())?;
        if let Some(i) = lower.iter().zip(&upper).position(|(l, u)| !(l <= u)) {
            return Err(Error::EmptyBox(i));
        }
        Ok(Self { lower, upper })
    }

    pub fn contains(&self, w: &[f64]) -> bool {
        w.iter()
            .zip(self.lower.iter().zip(&self.upper))
            .all(|(&x, (&l, &u))| l <= x && x <= u)
    }
}

impl Regularizer for BoxIndicator {
    fn value(&self, w: &[f64]) -> f64 {
        if self.contains(w) {
            0.0
        } else {
            f64::INFINITY
        }
    }

    fn prox_into(&self, z: &[f64], _gamma: f64, out: &mut [f64]) {
        for ((o, &x), (&l, &u)) in out.iter_mut().zip(z).zip(self.lower.iter().zip(&self.upper)) {
            *o = x.clamp(l, u);
        }
    }

    fn strong_convexity(&self) -> f64 {
        0.0
    }

    fn subgradient_distance(&self, w: &[f64], v: &[f64]) -> f64 {
        if !self.contains(w) {
            return f64::INFINITY;
        }
        // Normal cone of the box, componentwise.
        let mut acc = 0.0;
        for ((&x, &g), (&l, &u)) in w.iter().zip(v).zip(self.lower.iter().zip(&self.upper)) {
            let gap = match (x == l, x == u) {
                (true, true) => 0.0,
                (true, false) => g.max(0.0),
                (false, true) => (-g).max(0.0),
                (false, false) => g,
            };
            acc += gap * gap;
        }
        libm::sqrt(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn l1_examples() {
        assert_eq!(prox_l1(&[3.0, -0.5, 0.0], 1.0).unwrap(), vec![2.0, 0.0, 0.0]);
        assert_eq!(prox_l1(&[0.0, 0.0], 5.0).unwrap(), vec![0.0, 0.0]);
        assert_eq!(prox_l1(&[-4.0], 1.5).unwrap(), vec![-2.5]);
    }

    #[test]
    fn l1_rejects_bad_input() {
        assert_eq!(
            prox_l1(&[f64::NAN], 1.0),
            Err(Error::NonFinite("prox_l1"))
        );
        assert!(prox_l1(&[1.0], 0.0).is_err());
    }

    #[test]
    fn elastic_net_examples() {
        assert_eq!(prox_elastic_net(&[2.0], 1.0, 1.0, 1.0).unwrap(), vec![0.5]);
        let x = [1.25, -7.0, 0.0];
        assert_eq!(prox_elastic_net(&x, 0.3, 0.0, 0.0).unwrap(), x.to_vec());
        assert!(prox_elastic_net(&[f64::INFINITY], 1.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn elastic_net_without_ridge_is_l1() {
        let z = [3.5, -0.2, 0.7, -9.0];
        assert_eq!(
            prox_elastic_net(&z, 0.7, 1.3, 0.0).unwrap(),
            prox_l1(&z, 0.7 * 1.3).unwrap()
        );
    }

    #[test]
    fn box_examples() {
        assert_eq!(
            prox_box(&[5.0, -3.0], &[0.0, 0.0], &[1.0, 1.0]).unwrap(),
            vec![1.0, 0.0]
        );
        assert_eq!(
            prox_box(&[0.25, 0.5], &[0.0, 0.0], &[1.0, 1.0]).unwrap(),
            vec![0.25, 0.5]
        );
        assert_eq!(
            prox_box(&[0.0], &[1.0], &[0.0]),
            Err(Error::EmptyBox(0))
        );
    }

    #[test]
    fn centered_elastic_net_shifts() {
        let r = ElasticNet::l1_only(0.02).unwrap().with_center(vec![10.0]).unwrap();
        let p = r.prox(&[11.0], 1.0);
        assert!((p[0] - 10.98).abs() < 1e-12);
        assert_eq!(r.prox(&[10.01], 1.0), vec![10.0]);
        assert_eq!(r.value(&[10.0]), 0.0);
    }

    #[test]
    fn prox_output_satisfies_optimality() {
        let r = ElasticNet::new(0.4, 0.3).unwrap();
        let z = [2.0, -0.1, 0.0, -3.0];
        let gamma = 0.8;
        let p = r.prox(&z, gamma);
        let v: Vec<f64> = z.iter().zip(&p).map(|(a, b)| (a - b) / gamma).collect();
        assert!(r.subgradient_distance(&p, &v) < 1e-12);

        let b = BoxIndicator::new(vec![-1.0; 4], vec![1.0; 4]).unwrap();
        let p = b.prox(&z, gamma);
        let v: Vec<f64> = z.iter().zip(&p).map(|(a, b)| (a - b) / gamma).collect();
        assert_eq!(b.subgradient_distance(&p, &v), 0.0);
        assert_eq!(b.value(&[2.0, 0.0, 0.0, 0.0]), f64::INFINITY);
    }
}
