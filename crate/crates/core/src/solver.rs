//! Relaxed stochastic proximal gradient iteration and its deterministic
//! forward-backward counterpart.
//!
//! One SPG step reads
//!
//! ```text
//! z_n     = w_n - gamma_n G_n
//! y_n     = prox_{gamma_n R}(z_n)
//! w_{n+1} = (1 - lambda_n) w_n + lambda_n y_n
//! ```
//!
//! Iterates are indexed from `w_1` (the starting point). A run with budget
//! `iterations` performs that many updates and ends at `w_{iterations+1}`.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{check_dim, check_finite, invalid, Error, Result};
use crate::oracle::GradientOracle;
use crate::problem::CompositeProblem;
use crate::prox::Regularizer;
use crate::rng::{SpgRng, RNG_ID};
use crate::schedule::{StepSchedule, StepSize};
use crate::vector::{dist, norm, zero_count};

/// Components with `|w_i| <= ZERO_TOL` count as zero.
pub const ZERO_TOL: f64 = 1e-12;

/// Iterates with a larger norm abort the run.
pub const DIVERGENCE_NORM: f64 = 1e12;

/// Largest dimension for which full iterate snapshots are kept by default.
pub const SNAPSHOT_MAX_DIM: usize = 64;

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    pub schedule: StepSchedule,
    pub iterations: usize,
    /// The `epsilon` of the step-size condition; only used by checks.
    pub epsilon: f64,
    /// `None` picks 1 for `d <= 64` and 10 otherwise.
    pub record_every: Option<usize>,
    /// `None` keeps snapshots when `d <= 64`.
    pub keep_iterates: Option<bool>,
    /// Weights `eta_k` of a running FOBOS average maintained during the run.
    pub averaging: Option<StepSize>,
    pub zero_tol: f64,
}

impl SolverConfig {
    pub fn new(schedule: StepSchedule, iterations: usize) -> Self {
        Self {
            schedule,
            iterations,
            epsilon: 0.1,
            record_every: None,
            keep_iterates: None,
            averaging: None,
            zero_tol: ZERO_TOL,
        }
    }

    pub fn with_epsilon(mut self, epsilon: f64) -> Self {
        self.epsilon = epsilon;
        self
    }

    pub fn with_record_every(mut self, every: usize) -> Self {
        self.record_every = Some(every);
        self
    }

    pub fn with_iterates(mut self, keep: bool) -> Self {
        self.keep_iterates = Some(keep);
        self
    }

    pub fn with_averaging(mut self, weights: StepSize) -> Self {
        self.averaging = Some(weights);
        self
    }

    pub fn validate(&self) -> Result<()> {
        self.schedule.step.validate()?;
        self.schedule.relaxation.validate()?;
        if self.iterations == 0 {
            return Err(invalid("iterations must be at least 1"));
        }
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return Err(invalid("epsilon must lie in (0, 1)"));
        }
        if self.record_every == Some(0) {
            return Err(invalid("record_every must be positive"));
        }
        if let Some(w) = &self.averaging {
            w.validate()?;
        }
        Ok(())
    }

    fn resolved(&self, dim: usize) -> (usize, bool) {
        let every = self
            .record_every
            .unwrap_or(if dim <= SNAPSHOT_MAX_DIM { 1 } else { 10 });
        let keep = self.keep_iterates.unwrap_or(dim <= SNAPSHOT_MAX_DIM);
        (every, keep)
    }
}

/// Summary of one point along a run.
#[derive(Debug, Clone, PartialEq)]
pub struct PointRecord {
    pub dist_to_ref: Option<f64>,
    pub objective: f64,
    pub zero_count: usize,
    pub point: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceRecord {
    pub n: usize,
    pub iterate: PointRecord,
    /// The running FOBOS average `w_n^(av)` when averaging is enabled.
    pub average: Option<PointRecord>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceMeta {
    pub seed: Option<u64>,
    pub schedule: Option<StepSchedule>,
    /// Constant forward-backward step, for deterministic runs.
    pub fb_step: Option<f64>,
    pub averaging: Option<StepSize>,
    pub rng_id: &'static str,
    pub iterations: usize,
    /// Update index at which a fixed-point early exit fired.
    pub early_exit: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunTrace {
    pub records: Vec<TraceRecord>,
    pub final_iterate: Vec<f64>,
    pub final_average: Option<Vec<f64>>,
    pub meta: TraceMeta,
}

impl RunTrace {
    pub fn last(&self) -> &TraceRecord {
        self.records.last().expect("a trace has at least one record")
    }

    pub fn record_at(&self, n: usize) -> Option<&TraceRecord> {
        self.records
            .binary_search_by_key(&n, |r| r.n)
            .ok()
            .map(|i| &self.records[i])
    }

    /// True when every iterate `w_1..w_last` has a snapshot.
    pub fn has_all_iterates(&self) -> bool {
        self.records
            .iter()
            .enumerate()
            .all(|(i, r)| r.n == i + 1 && r.iterate.point.is_some())
    }
}

/// Running `eta`-weighted mean `(sum eta_k)^-1 sum eta_k w_k`.
#[derive(Debug, Clone)]
pub struct RunningAverage {
    weights: StepSize,
    total: f64,
    mean: Vec<f64>,
    count: usize,
}

impl RunningAverage {
    pub fn new(weights: StepSize, dim: usize) -> Self {
        Self {
            weights,
            total: 0.0,
            mean: vec![0.0; dim],
            count: 0,
        }
    }

    /// Adds `w_{count+1}`.
    pub fn push(&mut self, w: &[f64]) {
        self.count += 1;
        let eta = self.weights.at(self.count);
        self.total += eta;
        let r = eta / self.total;
        for (m, &x) in self.mean.iter_mut().zip(w) {
            *m += r * (x - *m);
        }
    }

    pub fn mean(&self) -> &[f64] {
        &self.mean
    }
}

/// One relaxed proximal gradient step without validation.
#[inline]
pub(crate) fn step_into(reg: &dyn Regularizer, w: &[f64], g: &[f64], gamma: f64, lambda: f64, z: &mut [f64], out: &mut [f64]) {
    for ((zi, &wi), &gi) in z.iter_mut().zip(w).zip(g) {
        *zi = wi - gamma * gi;
    }
    reg.prox_into(z, gamma, out);
    // lambda = 1 takes y_n as is, so noiseless SPG matches forward-backward bit for bit.
    if lambda != 1.0 {
        for (o, &wi) in out.iter_mut().zip(w) {
            *o = (1.0 - lambda) * wi + lambda * *o;
        }
    }
}

/// `(1 - lambda) w + lambda prox_{gamma R}(w - gamma g)`.
pub fn spg_step(problem: &CompositeProblem, w: &[f64], g: &[f64], gamma: f64, lambda: f64) -> Result<Vec<f64>> {
    let d = problem.dimension();
    check_dim(d, w.len())?;
    check_dim(d, g.len())?;
    if !(gamma > 0.0) || !gamma.is_finite() {
        return Err(invalid("gamma must be positive"));
    }
    if !(0.0..=1.0).contains(&lambda) {
        return Err(invalid("lambda must lie in [0, 1]"));
    }
    if check_finite(w, "iterate").is_err() || check_finite(g, "gradient").is_err() {
        return Err(Error::Diverged { step: 0 });
    }
    let mut z = vec![0.0; d];
    let mut out = vec![0.0; d];
    step_into(problem.regularizer().as_ref(), w, g, gamma, lambda, &mut z, &mut out);
    Ok(out)
}

struct Recorder<'a> {
    problem: &'a CompositeProblem,
    every: usize,
    keep: bool,
    zero_tol: f64,
    last: usize,
    records: Vec<TraceRecord>,
}

impl<'a> Recorder<'a> {
    fn wants(&self, n: usize) -> bool {
        n == 1 || n == self.last || n.is_multiple_of(self.every)
    }

    fn point(&self, w: &[f64]) -> PointRecord {
        PointRecord {
            dist_to_ref: self.problem.reference().map(|r| dist(w, r)),
            objective: self.problem.objective(w),
            zero_count: zero_count(w, self.zero_tol),
            point: self.keep.then(|| w.to_vec()),
        }
    }

    fn record(&mut self, n: usize, w: &[f64], avg: Option<&RunningAverage>) {
        let iterate = self.point(w);
        let average = avg.map(|a| self.point(a.mean()));
        self.records.push(TraceRecord { n, iterate, average });
    }
}

fn validate_start(problem: &CompositeProblem, w1: &[f64]) -> Result<()> {
    check_dim(problem.dimension(), w1.len())?;
    check_finite(w1, "starting point")
}

fn guard(w: &[f64], step: usize) -> Result<()> {
    if w.iter().any(|x| !x.is_finite()) || norm(w) > DIVERGENCE_NORM {
        Err(Error::Diverged { step })
    } else {
        Ok(())
    }
}

/// Runs SPG from `w1` for `config.iterations` updates. Deterministic in
/// `(seed, w1, config)`.
pub fn run_spg(
    problem: &CompositeProblem,
    oracle: &dyn GradientOracle,
    config: &SolverConfig,
    seed: u64,
    w1: &[f64],
) -> Result<RunTrace> {
    config.validate()?;
    validate_start(problem, w1)?;
    check_dim(problem.dimension(), oracle.dimension())?;
    let d = problem.dimension();
    let (every, keep) = config.resolved(d);
    let last = config.iterations + 1;
    let mut rec = Recorder {
        problem,
        every,
        keep,
        zero_tol: config.zero_tol,
        last,
        records: Vec::new(),
    };
    let mut avg = config.averaging.map(|w| RunningAverage::new(w, d));
    let reg = problem.regularizer().as_ref();
    let mut rng = SpgRng::new(seed);
    let mut w = w1.to_vec();
    let (mut g, mut z, mut next) = (vec![0.0; d], vec![0.0; d], vec![0.0; d]);
    for n in 1..=last {
        if let Some(a) = avg.as_mut() {
            a.push(&w);
        }
        if rec.wants(n) {
            rec.record(n, &w, avg.as_ref());
        }
        if n == last {
            break;
        }
        oracle.estimate_into(&w, n, &mut rng, &mut g);
        if g.iter().any(|x| !x.is_finite()) {
            return Err(Error::Diverged { step: n });
        }
        let gamma = config.schedule.gamma(n);
        let lambda = config.schedule.lambda(n);
        step_into(reg, &w, &g, gamma, lambda, &mut z, &mut next);
        guard(&next, n)?;
        core::mem::swap(&mut w, &mut next);
    }
    Ok(RunTrace {
        records: rec.records,
        final_iterate: w,
        final_average: avg.map(|a| a.mean),
        meta: TraceMeta {
            seed: Some(seed),
            schedule: Some(config.schedule),
            fb_step: None,
            averaging: config.averaging,
            rng_id: RNG_ID,
            iterations: config.iterations,
            early_exit: None,
        },
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ForwardBackwardOptions {
    pub step: f64,
    pub iterations: usize,
    /// Stop once `|w_{n+1} - w_n| <= tol`.
    pub early_exit_tol: Option<f64>,
    pub record_every: Option<usize>,
    pub keep_iterates: Option<bool>,
    pub zero_tol: f64,
}

impl ForwardBackwardOptions {
    pub fn new(step: f64, iterations: usize) -> Self {
        Self {
            step,
            iterations,
            early_exit_tol: None,
            record_every: None,
            keep_iterates: None,
            zero_tol: ZERO_TOL,
        }
    }
}

/// Deterministic forward-backward `w_{n+1} = prox_{gamma R}(w_n - gamma grad L(w_n))`.
pub fn run_forward_backward(problem: &CompositeProblem, step: f64, iterations: usize, w1: &[f64]) -> Result<RunTrace> {
    run_forward_backward_with(problem, &ForwardBackwardOptions::new(step, iterations), w1)
}

pub fn run_forward_backward_with(problem: &CompositeProblem, opts: &ForwardBackwardOptions, w1: &[f64]) -> Result<RunTrace> {
    validate_start(problem, w1)?;
    if !(opts.step > 0.0) || !opts.step.is_finite() {
        return Err(invalid("step must be positive"));
    }
    let beta = problem.smooth().lipschitz();
    // Allow for rounding in the power-iteration estimate of beta.
    if opts.step * beta > 1.0 + 1e-9 {
        return Err(invalid("forward-backward step must not exceed 1/beta"));
    }
    if opts.iterations == 0 {
        return Err(invalid("iterations must be at least 1"));
    }
    let d = problem.dimension();
    let every = opts
        .record_every
        .unwrap_or(if d <= SNAPSHOT_MAX_DIM { 1 } else { 10 });
    let keep = opts.keep_iterates.unwrap_or(d <= SNAPSHOT_MAX_DIM);
    let mut last = opts.iterations + 1;
    let mut rec = Recorder {
        problem,
        every,
        keep,
        zero_tol: opts.zero_tol,
        last,
        records: Vec::new(),
    };
    let smooth = problem.smooth().as_ref();
    let reg = problem.regularizer().as_ref();
    let mut w = w1.to_vec();
    let (mut g, mut z, mut next) = (vec![0.0; d], vec![0.0; d], vec![0.0; d]);
    let mut early_exit = None;
    let mut n = 1;
    loop {
        if rec.wants(n) {
            rec.record(n, &w, None);
        }
        if n == last {
            break;
        }
        smooth.gradient_into(&w, &mut g);
        step_into(reg, &w, &g, opts.step, 1.0, &mut z, &mut next);
        guard(&next, n)?;
        let moved = dist(&w, &next);
        core::mem::swap(&mut w, &mut next);
        n += 1;
        if let Some(tol) = opts.early_exit_tol {
            if moved <= tol && n < last {
                early_exit = Some(n - 1);
                last = n;
                rec.last = n;
            }
        }
    }
    Ok(RunTrace {
        records: rec.records,
        final_iterate: w,
        final_average: None,
        meta: TraceMeta {
            seed: None,
            schedule: None,
            fb_step: Some(opts.step),
            averaging: None,
            rng_id: RNG_ID,
            iterations: opts.iterations,
            early_exit,
        },
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct AveragedPoint {
    pub n: usize,
    pub point: Vec<f64>,
}

/// FOBOS averages `w_n^(av) = (sum_k eta_k)^-1 sum_k eta_k w_k` with `eta_k = c1 / k`.
///
/// Uses the iterate snapshots when the trace holds every iterate; otherwise
/// falls back to the running average the solver recorded, provided it used
/// the same weights.
pub fn fobos_average(trace: &RunTrace, c1: f64) -> Result<Vec<AveragedPoint>> {
    if !(c1 > 0.0) || !c1.is_finite() {
        return Err(invalid("C1 must be positive"));
    }
    let weights = StepSize::Power { c1, theta: 1.0 };
    if trace.has_all_iterates() && !trace.records.is_empty() {
        let d = trace.records[0].iterate.point.as_ref().map_or(0, Vec::len);
        let mut acc = RunningAverage::new(weights, d);
        return Ok(trace
            .records
            .iter()
            .map(|r| {
                acc.push(r.iterate.point.as_deref().expect("checked above"));
                AveragedPoint {
                    n: r.n,
                    point: acc.mean().to_vec(),
                }
            })
            .collect());
    }
    if trace.meta.averaging == Some(weights) {
        let out: Vec<AveragedPoint> = trace
            .records
            .iter()
            .filter_map(|r| {
                r.average
                    .as_ref()
                    .and_then(|a| a.point.clone())
                    .map(|point| AveragedPoint { n: r.n, point })
            })
            .collect();
        if !out.is_empty() {
            return Ok(out);
        }
    }
    Err(Error::MissingIterates)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{additive_gaussian_oracle, ExactOracle};
    use crate::prox::{ElasticNet, NoRegularizer};
    use crate::schedule::Relaxation;
    use crate::smooth::Quadratic;
    use alloc::sync::Arc;

    fn half_norm() -> CompositeProblem {
        CompositeProblem::new(Arc::new(Quadratic::new(vec![0.0], 1.0).unwrap()), Arc::new(NoRegularizer))
    }

    fn abs_problem() -> CompositeProblem {
        CompositeProblem::new(
            Arc::new(Quadratic::new(vec![0.0], 1.0).unwrap()),
            Arc::new(ElasticNet::l1_only(1.0).unwrap()),
        )
    }

    fn toy(mu: f64) -> CompositeProblem {
        CompositeProblem::new(
            Arc::new(Quadratic::new(vec![10.0], mu).unwrap()),
            Arc::new(ElasticNet::l1_only(0.02).unwrap().with_center(vec![10.0]).unwrap()),
        )
        .with_reference(vec![10.0])
        .unwrap()
    }

    #[test]
    fn plain_gradient_step() {
        assert_eq!(spg_step(&half_norm(), &[4.0], &[4.0], 0.5, 1.0).unwrap(), vec![2.0]);
    }

    #[test]
    fn relaxed_l1_step() {
        assert_eq!(spg_step(&abs_problem(), &[3.0], &[0.0], 1.0, 0.5).unwrap(), vec![2.5]);
    }

    #[test]
    fn zero_relaxation_keeps_iterate() {
        for (g, gamma) in [(7.0, 0.1), (-3.0, 2.0), (0.0, 1.0)] {
            assert_eq!(spg_step(&abs_problem(), &[1.75], &[g], gamma, 0.0).unwrap(), vec![1.75]);
        }
    }

    #[test]
    fn step_rejects_non_finite() {
        assert_eq!(
            spg_step(&abs_problem(), &[1.0], &[f64::NAN], 1.0, 1.0),
            Err(Error::Diverged { step: 0 })
        );
    }

    #[test]
    fn forward_backward_quadratic_one_step() {
        let p = CompositeProblem::new(Arc::new(Quadratic::new(vec![10.0], 1.0).unwrap()), Arc::new(NoRegularizer));
        let t = run_forward_backward(&p, 1.0, 3, &[-4.0]).unwrap();
        assert_eq!(t.record_at(2).unwrap().iterate.point.as_deref(), Some(&[10.0][..]));
    }

    #[test]
    fn forward_backward_rejects_long_step() {
        assert!(run_forward_backward(&toy(1.0), 1.5, 3, &[0.0]).is_err());
    }

    #[test]
    fn forward_backward_toy_fixed_point() {
        let t = run_forward_backward(&toy(1.0), 1.0, 50, &[0.0]).unwrap();
        assert_eq!(t.final_iterate, vec![10.0]);
    }

    #[test]
    fn forward_backward_early_exit() {
        let mut o = ForwardBackwardOptions::new(1.0, 1000);
        o.early_exit_tol = Some(1e-12);
        let t = run_forward_backward_with(&toy(1.0), &o, &[0.0]).unwrap();
        assert!(t.meta.early_exit.is_some());
        assert!(t.records.len() < 10);
        assert_eq!(t.last().iterate.dist_to_ref, Some(0.0));
    }

    #[test]
    fn noiseless_spg_equals_forward_backward() {
        let p = toy(0.7);
        let oracle = ExactOracle::new(p.smooth().clone());
        let cfg = SolverConfig::new(StepSchedule::unrelaxed(StepSize::Constant(0.9)).unwrap(), 200);
        let spg = run_spg(&p, &oracle, &cfg, 3, &[-2.0]).unwrap();
        let fb = run_forward_backward(&p, 0.9, 200, &[-2.0]).unwrap();
        assert_eq!(spg.records.len(), fb.records.len());
        for (a, b) in spg.records.iter().zip(&fb.records) {
            assert_eq!(a.iterate.point, b.iterate.point);
        }
    }

    #[test]
    fn minimizer_is_fixed_under_exact_gradients() {
        let p = toy(1.0);
        let oracle = ExactOracle::new(p.smooth().clone());
        let cfg = SolverConfig::new(StepSchedule::unrelaxed(StepSize::Power { c1: 1.0, theta: 1.0 }).unwrap(), 100);
        let t = run_spg(&p, &oracle, &cfg, 0, &[10.0]).unwrap();
        assert!(t.records.iter().all(|r| r.iterate.point.as_deref() == Some(&[10.0][..])));
    }

    #[test]
    fn spg_is_deterministic_per_seed() {
        let p = toy(1.0);
        let oracle = additive_gaussian_oracle(p.smooth().clone(), 0.3, 0).unwrap();
        let cfg = SolverConfig::new(StepSchedule::unrelaxed(StepSize::Power { c1: 1.0, theta: 1.0 }).unwrap(), 300);
        let a = run_spg(&p, &oracle, &cfg, 17, &[0.0]).unwrap();
        let b = run_spg(&p, &oracle, &cfg, 17, &[0.0]).unwrap();
        let c = run_spg(&p, &oracle, &cfg, 18, &[0.0]).unwrap();
        assert_eq!(a, b);
        assert_ne!(a.final_iterate, c.final_iterate);
    }

    #[test]
    fn divergence_is_reported_with_step() {
        let p = half_norm();
        let oracle = ExactOracle::new(p.smooth().clone());
        // gamma = 3 makes w_{n+1} = -2 w_n.
        let cfg = SolverConfig::new(StepSchedule::unrelaxed(StepSize::Constant(3.0)).unwrap(), 100);
        match run_spg(&p, &oracle, &cfg, 0, &[1.0]) {
            Err(Error::Diverged { step }) => assert_eq!(step, 40),
            other => panic!("expected divergence, got {other:?}"),
        }
    }

    #[test]
    fn trace_decimation_and_bounds() {
        let p = toy(1.0);
        let oracle = additive_gaussian_oracle(p.smooth().clone(), 0.1, 0).unwrap();
        let cfg = SolverConfig::new(StepSchedule::unrelaxed(StepSize::Constant(0.5)).unwrap(), 95)
            .with_record_every(10);
        let t = run_spg(&p, &oracle, &cfg, 1, &[0.0]).unwrap();
        let ns: Vec<usize> = t.records.iter().map(|r| r.n).collect();
        assert_eq!(ns, vec![1, 10, 20, 30, 40, 50, 60, 70, 80, 90, 96]);
        assert!(t.records.iter().all(|r| r.iterate.zero_count <= 1));
        assert!(!t.has_all_iterates());
    }

    #[test]
    fn fobos_two_term_mean() {
        let p = half_norm();
        let oracle = ExactOracle::new(p.smooth().clone());
        // gamma = 1 on (1/2)w^2 jumps to 0: w_1 = 2, w_2 = 0.
        let cfg = SolverConfig::new(StepSchedule::unrelaxed(StepSize::Constant(1.0)).unwrap(), 1);
        let t = run_spg(&p, &oracle, &cfg, 0, &[2.0]).unwrap();
        let av = fobos_average(&t, 1.0).unwrap();
        assert_eq!(av[0].point, vec![2.0]);
        assert!((av[1].point[0] - 4.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn fobos_of_constant_iterates() {
        let p = toy(1.0);
        let oracle = ExactOracle::new(p.smooth().clone());
        let cfg = SolverConfig::new(StepSchedule::unrelaxed(StepSize::Constant(0.5)).unwrap(), 40);
        let t = run_spg(&p, &oracle, &cfg, 0, &[10.0]).unwrap();
        for a in fobos_average(&t, 2.5).unwrap() {
            assert!((a.point[0] - 10.0).abs() < 1e-12);
        }
    }

    #[test]
    fn fobos_needs_iterates_or_average() {
        let p = toy(1.0);
        let oracle = ExactOracle::new(p.smooth().clone());
        let cfg = SolverConfig::new(StepSchedule::unrelaxed(StepSize::Constant(0.5)).unwrap(), 40)
            .with_iterates(false);
        let t = run_spg(&p, &oracle, &cfg, 0, &[0.0]).unwrap();
        assert_eq!(fobos_average(&t, 1.0), Err(Error::MissingIterates));

        let cfg = cfg.with_averaging(StepSize::Power { c1: 1.0, theta: 1.0 }).with_iterates(true).with_record_every(5);
        let t = run_spg(&p, &oracle, &cfg, 0, &[0.0]).unwrap();
        let av = fobos_average(&t, 1.0).unwrap();
        assert_eq!(av.len(), t.records.len());
    }

    #[test]
    fn relaxation_slows_progress() {
        let p = toy(1.0);
        let oracle = ExactOracle::new(p.smooth().clone());
        let full = SolverConfig::new(StepSchedule::unrelaxed(StepSize::Constant(0.5)).unwrap(), 10);
        let half = SolverConfig::new(
            StepSchedule::new(StepSize::Constant(0.5), Relaxation::Constant(0.5)).unwrap(),
            10,
        );
        let a = run_spg(&p, &oracle, &full, 0, &[0.0]).unwrap();
        let b = run_spg(&p, &oracle, &half, 0, &[0.0]).unwrap();
        assert!(a.last().iterate.dist_to_ref < b.last().iterate.dist_to_ref);
    }
}
