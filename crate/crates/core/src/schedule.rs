//! Step-size and relaxation schedules, and the admissibility checks the
//! convergence results rely on.

use crate::error::{invalid, Result};
use crate::oracle::VarianceCertificate;

/// Step size `gamma_n` for `n >= 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StepSize {
    /// `c1 * n^(-theta)`, `theta` in `(0, 1]`.
    Power { c1: f64, theta: f64 },
    /// `a / (n + b)`.
    Shifted { a: f64, b: f64 },
    Constant(f64),
}

impl StepSize {
    pub fn validate(&self) -> Result<()> {
        match *self {
            StepSize::Power { c1, theta } => {
                if !(c1 > 0.0) || !c1.is_finite() {
                    return Err(invalid("c1 must be positive"));
                }
                if !(theta > 0.0 && theta <= 1.0) {
                    return Err(invalid("theta must lie in (0, 1]"));
                }
            }
            StepSize::Shifted { a, b } => {
                if !(a > 0.0) || !(b > 0.0) || !a.is_finite() || !b.is_finite() {
                    return Err(invalid("shifted schedule needs a, b > 0"));
                }
            }
            StepSize::Constant(g) => {
                if !(g > 0.0) || !g.is_finite() {
                    return Err(invalid("constant step must be positive"));
                }
            }
        }
        Ok(())
    }

    pub fn at(&self, n: usize) -> f64 {
        let nf = n as f64;
        match *self {
            StepSize::Power { c1, theta } => {
                if theta == 1.0 {
                    c1 / nf
                } else {
                    c1 * libm::pow(nf, -theta)
                }
            }
            StepSize::Shifted { a, b } => a / (nf + b),
            StepSize::Constant(g) => g,
        }
    }

    /// Exponent `e` with `gamma_n ~ n^e` as `n -> infinity`.
    pub fn decay_exponent(&self) -> f64 {
        match *self {
            StepSize::Power { theta, .. } => -theta,
            StepSize::Shifted { .. } => -1.0,
            StepSize::Constant(_) => 0.0,
        }
    }
}

/// Relaxation `lambda_n` in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Relaxation {
    Constant(f64),
    /// `lambda1 * n^(-exponent)`.
    Power { lambda1: f64, exponent: f64 },
}

impl Default for Relaxation {
    fn default() -> Self {
        Relaxation::Constant(1.0)
    }
}

impl Relaxation {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Relaxation::Constant(l) => {
                if !(0.0..=1.0).contains(&l) {
                    return Err(invalid("lambda must lie in [0, 1]"));
                }
            }
            Relaxation::Power { lambda1, exponent } => {
                if !(lambda1 > 0.0 && lambda1 <= 1.0) || !(exponent >= 0.0) {
                    return Err(invalid("power relaxation needs lambda1 in (0, 1] and exponent >= 0"));
                }
            }
        }
        Ok(())
    }

    pub fn at(&self, n: usize) -> f64 {
        match *self {
            Relaxation::Constant(l) => l,
            Relaxation::Power { lambda1, exponent } => {
                if exponent == 0.0 {
                    lambda1
                } else {
                    lambda1 * libm::pow(n as f64, -exponent)
                }
            }
        }
    }

    /// `inf_n lambda_n`.
    pub fn infimum(&self) -> f64 {
        match *self {
            Relaxation::Constant(l) => l,
            Relaxation::Power { lambda1, exponent } => {
                if exponent == 0.0 {
                    lambda1
                } else {
                    0.0
                }
            }
        }
    }

    pub fn decay_exponent(&self) -> f64 {
        match *self {
            Relaxation::Constant(0.0) => f64::NEG_INFINITY,
            Relaxation::Constant(_) => 0.0,
            Relaxation::Power { exponent, .. } => -exponent,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepSchedule {
    pub step: StepSize,
    pub relaxation: Relaxation,
}

impl StepSchedule {
    pub fn new(step: StepSize, relaxation: Relaxation) -> Result<Self> {
        step.validate()?;
        relaxation.validate()?;
        Ok(Self { step, relaxation })
    }

    pub fn unrelaxed(step: StepSize) -> Result<Self> {
        Self::new(step, Relaxation::Constant(1.0))
    }

    pub fn gamma(&self, n: usize) -> f64 {
        self.step.at(n)
    }

    pub fn lambda(&self, n: usize) -> f64 {
        self.relaxation.at(n)
    }
}

/// Outcome of [`check_step_condition`].
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionReport {
    pub horizon: usize,
    /// `(1 - eps) / (beta (1 + 2 sigma^2 alpha))`.
    pub a3_step_limit: f64,
    /// First `n <= horizon` with `gamma_n` above the limit.
    pub first_a3_violation: Option<usize>,
    /// Exponent of `lambda_n gamma_n`; the series diverges iff it is `>= -1`.
    pub relaxed_step_exponent: f64,
    /// Exponent of `chi_n^2 = lambda_n gamma_n^2 (1 + 2 alpha |grad L(w_bar)|^2)`;
    /// summable iff `< -1`.
    pub chi_sq_exponent: f64,
    pub relaxed_step_sum_diverges: bool,
    pub chi_sq_summable: bool,
}

impl ConditionReport {
    pub fn a3_satisfied(&self) -> bool {
        self.first_a3_violation.is_none()
    }

    pub fn a4_satisfied(&self) -> bool {
        self.relaxed_step_sum_diverges && self.chi_sq_summable
    }
}

/// Checks the step-size bound for `n = 1..=horizon` and the two summability
/// requirements by comparing decay exponents with the harmonic series.
pub fn check_step_condition(
    schedule: &StepSchedule,
    beta: f64,
    cert: &VarianceCertificate,
    epsilon: f64,
    horizon: usize,
) -> Result<ConditionReport> {
    if !(beta > 0.0) || !beta.is_finite() {
        return Err(invalid("beta must be positive"));
    }
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(invalid("epsilon must lie in (0, 1)"));
    }
    if horizon == 0 {
        return Err(invalid("horizon must be at least 1"));
    }
    let limit = (1.0 - epsilon) / (beta * (1.0 + 2.0 * cert.sigma_sq() * cert.alpha()));
    let first_a3_violation = (1..=horizon).find(|&n| {
        let g = schedule.gamma(n);
        !(g > 0.0 && g <= limit)
    });
    let le = schedule.relaxation.decay_exponent();
    let ge = schedule.step.decay_exponent();
    let relaxed_step_exponent = le + ge;
    let chi_sq_exponent = le + 2.0 * ge;
    Ok(ConditionReport {
        horizon,
        a3_step_limit: limit,
        first_a3_violation,
        relaxed_step_exponent,
        chi_sq_exponent,
        relaxed_step_sum_diverges: relaxed_step_exponent >= -1.0,
        chi_sq_summable: chi_sq_exponent < -1.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cert(sigma_sq: f64, alpha: f64) -> VarianceCertificate {
        VarianceCertificate::new(sigma_sq, alpha).unwrap()
    }

    #[test]
    fn constant_step_within_limit() {
        let s = StepSchedule::unrelaxed(StepSize::Constant(0.5)).unwrap();
        let r = check_step_condition(&s, 1.0, &cert(0.0, 0.0), 0.4, 100).unwrap();
        assert!(r.a3_satisfied());
        assert!((r.a3_step_limit - 0.6).abs() < 1e-9);
    }

    #[test]
    fn harmonic_step_passes_summability() {
        let s = StepSchedule::unrelaxed(StepSize::Power { c1: 2.0, theta: 1.0 }).unwrap();
        let r = check_step_condition(&s, 1.0, &cert(1.0, 0.0), 0.5, 10).unwrap();
        assert_eq!(r.relaxed_step_exponent, -1.0);
        assert_eq!(r.chi_sq_exponent, -2.0);
        assert!(r.a4_satisfied());
        // gamma_1 = 2 > 0.5, gamma_4 = 0.5 is the first admissible value.
        assert_eq!(r.first_a3_violation, Some(1));
    }

    #[test]
    fn sqrt_step_fails_chi_summability() {
        let s = StepSchedule::unrelaxed(StepSize::Power { c1: 0.1, theta: 0.5 }).unwrap();
        let r = check_step_condition(&s, 1.0, &cert(1.0, 0.0), 0.5, 10).unwrap();
        assert!(r.relaxed_step_sum_diverges);
        assert!(!r.chi_sq_summable);
    }

    #[test]
    fn limit_shrinks_with_alpha() {
        let s = StepSchedule::unrelaxed(StepSize::Constant(0.3)).unwrap();
        let r = check_step_condition(&s, 1.0, &cert(1.0, 1.0), 0.1, 5).unwrap();
        assert!((r.a3_step_limit - 0.3).abs() < 1e-12);
        assert!(r.a3_satisfied());
        let r = check_step_condition(&s, 1.0, &cert(1.0, 1.01), 0.1, 5).unwrap();
        assert_eq!(r.first_a3_violation, Some(1));
    }

    #[test]
    fn schedules_reject_bad_parameters() {
        assert!(StepSchedule::unrelaxed(StepSize::Power { c1: 1.0, theta: 1.5 }).is_err());
        assert!(StepSchedule::unrelaxed(StepSize::Constant(0.0)).is_err());
        assert!(StepSchedule::new(StepSize::Constant(1.0), Relaxation::Constant(1.2)).is_err());
    }

    #[test]
    fn shifted_and_power_values() {
        assert_eq!(StepSize::Shifted { a: 15.0, b: 100.0 }.at(50), 0.1);
        assert_eq!(StepSize::Power { c1: 3.0, theta: 1.0 }.at(4), 0.75);
        assert!((StepSize::Power { c1: 2.0, theta: 0.5 }.at(4) - 1.0).abs() < 1e-15);
        assert_eq!(Relaxation::Power { lambda1: 1.0, exponent: 0.5 }.infimum(), 0.0);
    }
}
