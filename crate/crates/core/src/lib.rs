//! Stochastic proximal gradient (SPG) toolkit.
//!
//! The crate solves composite problems `minimize L(w) + R(w)` where `L` is
//! smooth with a Lipschitz gradient and `R` has a cheap proximity operator.
//! It provides:
//!
//! * proximity operators with certified constants ([`prox`]),
//! * smooth terms with exact gradients ([`smooth`]),
//! * seeded stochastic gradient oracles with variance certificates ([`oracle`]),
//! * the relaxed SPG iteration, FOBOS averaging and a deterministic
//!   forward-backward reference solver ([`solver`]),
//! * step-size schedules and their admissibility checks ([`schedule`]),
//! * non-asymptotic convergence bounds as executable formulas ([`bounds`]).
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod bounds;
pub mod error;
pub mod oracle;
pub mod problem;
pub mod prox;
pub mod rng;
pub mod schedule;
pub mod smooth;
pub mod solver;
pub mod vector;

pub use error::{Error, Result};
pub use oracle::{GradientOracle, VarianceCertificate};
pub use problem::CompositeProblem;
pub use prox::Regularizer;
pub use rng::SpgRng;
pub use schedule::{Relaxation, StepSchedule, StepSize};
pub use smooth::SmoothTerm;
pub use solver::{RunTrace, SolverConfig};
