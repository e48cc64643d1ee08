use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{check_dim, check_finite, Error, Result};
use crate::prox::Regularizer;
use crate::smooth::SmoothTerm;

/// `minimize T(w) = L(w) + R(w)` with an optional known minimizer.
#[derive(Debug, Clone)]
pub struct CompositeProblem {
    smooth: Arc<dyn SmoothTerm>,
    reg: Arc<dyn Regularizer>,
    reference: Option<Vec<f64>>,
}

impl CompositeProblem {
    pub fn new(smooth: Arc<dyn SmoothTerm>, reg: Arc<dyn Regularizer>) -> Self {
        Self {
            smooth,
            reg,
            reference: None,
        }
    }

    pub fn with_reference(mut self, w_bar: Vec<f64>) -> Result<Self> {
        check_dim(self.dimension(), w_bar.len())?;
        check_finite(&w_bar, "reference solution")?;
        self.reference = Some(w_bar);
        Ok(self)
    }

    pub fn dimension(&self) -> usize {
        self.smooth.dimension()
    }

    pub fn smooth(&self) -> &Arc<dyn SmoothTerm> {
        &self.smooth
    }

    pub fn regularizer(&self) -> &Arc<dyn Regularizer> {
        &self.reg
    }

    pub fn reference(&self) -> Option<&[f64]> {
        self.reference.as_deref()
    }

    pub fn objective(&self, w: &[f64]) -> f64 {
        self.smooth.value(w) + self.reg.value(w)
    }

    /// `mu + nu`, required to be positive by the strongly convex bounds.
    pub fn strong_convexity(&self) -> f64 {
        self.smooth.strong_convexity() + self.reg.strong_convexity()
    }

    pub fn require_strongly_convex(&self) -> Result<()> {
        if self.strong_convexity() > 0.0 {
            Ok(())
        } else {
            Err(Error::StrongConvexityRequired)
        }
    }

    /// Distance from `0` to `grad L(w) + dR(w)`; zero exactly at minimizers.
    pub fn optimality_residual(&self, w: &[f64]) -> f64 {
        let g = self.smooth.gradient(w);
        let neg: Vec<f64> = g.iter().map(|x| -x).collect();
        self.reg.subgradient_distance(w, &neg)
    }

    /// `|w - prox_{gamma R}(w - gamma grad L(w))|`, the forward-backward fixed-point residual.
    pub fn fixed_point_residual(&self, w: &[f64], gamma: f64) -> f64 {
        let g = self.smooth.gradient(w);
        let z: Vec<f64> = w.iter().zip(&g).map(|(x, d)| x - gamma * d).collect();
        let mut p = vec![0.0; w.len()];
        self.reg.prox_into(&z, gamma, &mut p);
        crate::vector::dist(w, &p)
    }
}
