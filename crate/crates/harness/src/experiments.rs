//! The three experiment families: a scalar toy problem, dictionary
//! regression and sparse deconvolution.

use std::sync::Arc;

use anyhow::{ensure, Context, Result};
use log::warn;
use rayon::prelude::*;
use spg_core::bounds::{theorem1_constants, BoundParams};
use spg_core::oracle::{
    additive_gaussian_oracle, estimate_certificate, finite_sum_oracle, ExactOracle, SIGMA_SQ_FLOOR,
};
use spg_core::prox::ElasticNet;
use spg_core::schedule::{check_step_condition, ConditionReport};
use spg_core::smooth::{convolution_term, least_squares_term, Quadratic};
use spg_core::solver::{run_forward_backward_with, ForwardBackwardOptions};
use spg_core::vector::dist_sq;
use spg_core::{
    CompositeProblem, GradientOracle, Relaxation, RunTrace, SmoothTerm, SolverConfig, SpgRng, StepSchedule,
    StepSize, VarianceCertificate,
};

use crate::data::{
    circular_convolve, gaussian_kernel, gen_regression_data, spike_signal, DataGenSpec, Dictionary, RegressionData,
};

/// Seeds `base, base + 1, ..., base + count - 1`.
pub fn seed_range(base: u64, count: usize) -> Result<Vec<u64>> {
    ensure!(count >= 1, "need at least one seed");
    let end = base.checked_add(count as u64 - 1).context("seed range overflows u64")?;
    Ok((base..=end).collect())
}

fn check_seeds(seeds: &[u64]) -> Result<()> {
    ensure!(!seeds.is_empty(), "seed list is empty");
    let mut sorted = seeds.to_vec();
    sorted.sort_unstable();
    ensure!(sorted.windows(2).all(|w| w[0] != w[1]), "seed list has duplicates");
    Ok(())
}

/// Runs one SPG trace per seed in parallel. Output order follows `seeds`.
pub fn run_ensemble(
    problem: &CompositeProblem,
    oracle: &dyn GradientOracle,
    config: &SolverConfig,
    seeds: &[u64],
    w1: &[f64],
) -> Result<Vec<RunTrace>> {
    check_seeds(seeds)?;
    seeds
        .par_iter()
        .map(|&s| spg_core::solver::run_spg(problem, oracle, config, s, w1).with_context(|| format!("seed {s}")))
        .collect()
}

/// Checks the step-size conditions. Violations are logged and ignored when
/// `force` is set and fatal otherwise.
pub fn check_schedule(
    schedule: &StepSchedule,
    beta: f64,
    cert: &VarianceCertificate,
    epsilon: f64,
    horizon: usize,
    force: bool,
) -> Result<ConditionReport> {
    let r = check_step_condition(schedule, beta, cert, epsilon, horizon)?;
    let mut problems = Vec::new();
    if let Some(n) = r.first_a3_violation {
        problems.push(format!(
            "gamma_{n} = {} exceeds the step limit {}",
            schedule.gamma(n),
            r.a3_step_limit
        ));
    }
    if !r.relaxed_step_sum_diverges {
        problems.push("sum of lambda_n gamma_n converges".to_string());
    }
    if !r.chi_sq_summable {
        problems.push("sum of chi_n^2 diverges".to_string());
    }
    if !problems.is_empty() {
        let msg = format!("schedule violates the convergence conditions: {}", problems.join("; "));
        ensure!(force, "{msg}; refusing to run in strict mode");
        warn!("{msg}; continuing (use --strict to refuse)");
    }
    Ok(r)
}

fn oracle_for(smooth: Arc<dyn SmoothTerm>, noise_std: f64, seed: u64) -> Result<Box<dyn GradientOracle>> {
    Ok(if noise_std > 0.0 {
        Box::new(additive_gaussian_oracle(smooth, noise_std, seed)?)
    } else {
        Box::new(ExactOracle::new(smooth))
    })
}

fn certificate_or_floor(oracle: &dyn GradientOracle) -> VarianceCertificate {
    oracle
        .certificate()
        .unwrap_or_else(|| VarianceCertificate::new(SIGMA_SQ_FLOOR, 0.0).expect("floor certificate"))
}

// ---------------------------------------------------------------------------
// Toy problem

pub const TOY_MINIMIZER: f64 = 10.0;
pub const TOY_L1: f64 = 0.02;

/// `L(w) = (mu/2)(w - 10)^2`, `R(w) = l1 |w - 10| + (nu/2)(w - 10)^2`; the
/// minimizer is 10 for any `mu, nu >= 0` with `mu + nu > 0`.
pub fn toy_problem(mu: f64, nu: f64, l1: f64) -> Result<CompositeProblem> {
    ensure!(mu > 0.0, "toy problem needs mu > 0");
    let smooth = Arc::new(Quadratic::new(vec![TOY_MINIMIZER], mu)?);
    let reg = Arc::new(ElasticNet::new(l1, nu)?.with_center(vec![TOY_MINIMIZER])?);
    Ok(CompositeProblem::new(smooth, reg).with_reference(vec![TOY_MINIMIZER])?)
}

#[derive(Debug, Clone)]
pub struct ToyConfig {
    pub mu: f64,
    pub nu: f64,
    pub l1: f64,
    pub schedule: StepSchedule,
    /// Standard deviation of the additive gradient noise; 0 gives exact gradients.
    pub noise_std: f64,
    pub seeds: Vec<u64>,
    pub iterations: usize,
    pub w1: f64,
    /// FOBOS weights `C1 / k`, tracked alongside the run.
    pub fobos_c1: Option<f64>,
    pub epsilon: f64,
    pub force: bool,
}

impl ToyConfig {
    /// The comparison setup: `mu = 1`, `gamma_n = 1/n`, noise variance 0.1,
    /// 100 seeds, 1000 iterates, FOBOS with `C1 = 1`.
    pub fn comparison() -> Self {
        Self {
            mu: 1.0,
            nu: 0.0,
            l1: TOY_L1,
            schedule: StepSchedule::unrelaxed(StepSize::Power { c1: 1.0, theta: 1.0 }).expect("valid"),
            noise_std: 0.1f64.sqrt(),
            seeds: (0..100).collect(),
            iterations: 999,
            w1: 0.0,
            fobos_c1: Some(1.0),
            epsilon: 0.5,
            force: true,
        }
    }
}

#[derive(Debug)]
pub struct ToyOutcome {
    pub problem: CompositeProblem,
    pub certificate: VarianceCertificate,
    pub report: ConditionReport,
    pub traces: Vec<RunTrace>,
}

pub fn run_toy(cfg: &ToyConfig) -> Result<ToyOutcome> {
    let problem = toy_problem(cfg.mu, cfg.nu, cfg.l1)?;
    ensure!(cfg.noise_std >= 0.0, "noise std must be nonnegative");
    let oracle = oracle_for(problem.smooth().clone(), cfg.noise_std, 0)?;
    let certificate = certificate_or_floor(oracle.as_ref());
    let report = check_schedule(
        &cfg.schedule,
        problem.smooth().lipschitz(),
        &certificate,
        cfg.epsilon,
        cfg.iterations,
        cfg.force,
    )?;
    let mut sc = SolverConfig::new(cfg.schedule, cfg.iterations).with_epsilon(cfg.epsilon);
    if let Some(c1) = cfg.fobos_c1 {
        sc = sc.with_averaging(StepSize::Power { c1, theta: 1.0 });
    }
    let traces = run_ensemble(&problem, oracle.as_ref(), &sc, &cfg.seeds, &[cfg.w1])?;
    Ok(ToyOutcome {
        problem,
        certificate,
        report,
        traces,
    })
}

/// Bound constants for a toy configuration with power steps. The additive
/// noise has `sigma^2 = noise_std^2`, `alpha = 0` and `grad L(10) = 0`.
pub fn toy_bound_params(cfg: &ToyConfig) -> Result<BoundParams> {
    let (c1, theta) = match cfg.schedule.step {
        StepSize::Power { c1, theta } => (c1, theta),
        _ => anyhow::bail!("the convergence bound needs gamma_n = c1 n^-theta"),
    };
    let lambda_inf = cfg.schedule.relaxation.infimum();
    ensure!(
        matches!(cfg.schedule.relaxation, Relaxation::Constant(_)) && lambda_inf > 0.0,
        "the convergence bound needs a constant positive relaxation"
    );
    let sigma_sq = (cfg.noise_std * cfg.noise_std).max(SIGMA_SQ_FLOOR);
    Ok(theorem1_constants(
        theta, c1, lambda_inf, 0.0, sigma_sq, cfg.mu, cfg.nu, cfg.epsilon, 0.0,
    )?)
}

/// Seed-averaged `|w_n0 - 10|^2` over the given pilot seeds.
pub fn estimate_s_n0(cfg: &ToyConfig, n0: usize, pilot_seeds: &[u64]) -> Result<f64> {
    let problem = toy_problem(cfg.mu, cfg.nu, cfg.l1)?;
    let oracle = oracle_for(problem.smooth().clone(), cfg.noise_std, 0)?;
    if n0 == 1 {
        return Ok((cfg.w1 - TOY_MINIMIZER).powi(2));
    }
    let sc = SolverConfig::new(cfg.schedule, n0 - 1).with_epsilon(cfg.epsilon);
    let traces = run_ensemble(&problem, oracle.as_ref(), &sc, pilot_seeds, &[cfg.w1])?;
    let sum: f64 = traces.iter().map(|t| dist_sq(&t.final_iterate, &[TOY_MINIMIZER])).sum();
    Ok(sum / traces.len() as f64)
}

// ---------------------------------------------------------------------------
// Regression

#[derive(Debug, Clone)]
pub struct RegressionConfig {
    pub name: &'static str,
    pub data: DataGenSpec,
    pub mu: f64,
    pub omega: f64,
    pub step: StepSize,
    pub fobos_weights: StepSize,
    pub seeds: Vec<u64>,
    pub iterations: usize,
    pub fb_iterations: usize,
    pub epsilon: f64,
    pub force: bool,
}

pub const LABEL_NOISE_VAR: f64 = 0.3;

impl RegressionConfig {
    pub fn poly() -> Self {
        Self {
            name: "regression-poly",
            data: DataGenSpec {
                dictionary: Dictionary::Polynomial,
                p: 6,
                n_samples: 9,
                true_weights: vec![3.0, 2.0, 1.0, 0.0, 1.0, 0.0],
                label_noise_std: LABEL_NOISE_VAR.sqrt(),
                data_seed: 0,
            },
            mu: 0.1,
            omega: 0.01,
            step: StepSize::Shifted { a: 15.0, b: 100.0 },
            fobos_weights: StepSize::Shifted { a: 15.0, b: 100.0 },
            seeds: (0..20).collect(),
            iterations: 5000,
            fb_iterations: 50_000,
            epsilon: 0.1,
            force: true,
        }
    }

    pub fn trig(shifted_sines: bool) -> Self {
        Self {
            name: "regression-trig",
            data: DataGenSpec {
                dictionary: Dictionary::Trigonometric { shifted_sines },
                p: 21,
                n_samples: 32,
                true_weights: vec![
                    0.0, 0.2, 0.0, 0.5, 1.0, -1.0, 0.0, 1.0, 2.0, 0.5, 0.0, 0.0, -0.1, -2.5, 1.0, 0.0, 0.0, -1.0, 0.9,
                    -0.5, 0.0,
                ],
                label_noise_std: LABEL_NOISE_VAR.sqrt(),
                data_seed: 0,
            },
            mu: 0.01,
            omega: 0.01,
            step: StepSize::Shifted { a: 10.0, b: 100.0 },
            fobos_weights: StepSize::Shifted { a: 10.0, b: 100.0 },
            ..Self::poly()
        }
    }
}

/// `1/(2N) |X w - y|^2 + 1/2 sum(mu w_k^2 + omega |w_k|)`: the data term is
/// `L`, the elastic net (l1 weight `omega/2`, modulus `mu`) is `R`.
pub fn regression_problem(data: &RegressionData, mu: f64, omega: f64) -> Result<(CompositeProblem, Vec<Arc<dyn SmoothTerm>>)> {
    ensure!(mu > 0.0 && omega >= 0.0, "need mu > 0 and omega >= 0");
    let ls = least_squares_term(data.design.clone(), data.targets.clone(), 0.0)?;
    let rows: Vec<Arc<dyn SmoothTerm>> = ls
        .split_rows()
        .into_iter()
        .map(|r| Arc::new(r) as Arc<dyn SmoothTerm>)
        .collect();
    let reg = Arc::new(ElasticNet::new(0.5 * omega, mu)?);
    Ok((CompositeProblem::new(Arc::new(ls), reg), rows))
}

/// Forward-backward with step `1/beta` from the origin.
pub fn reference_solution(problem: &CompositeProblem, iterations: usize) -> Result<(Vec<f64>, RunTrace)> {
    let beta = problem.smooth().lipschitz();
    let mut opts = ForwardBackwardOptions::new(1.0 / beta, iterations);
    opts.record_every = Some(iterations.max(1));
    opts.keep_iterates = Some(false);
    let t = run_forward_backward_with(problem, &opts, &vec![0.0; problem.dimension()])?;
    Ok((t.final_iterate.clone(), t))
}

#[derive(Debug)]
pub struct RegressionOutcome {
    pub data: RegressionData,
    pub problem: CompositeProblem,
    pub reference_trace: RunTrace,
    pub certificate: VarianceCertificate,
    pub report: ConditionReport,
    pub traces: Vec<RunTrace>,
}

pub fn run_regression(cfg: &RegressionConfig) -> Result<RegressionOutcome> {
    let data = gen_regression_data(&cfg.data)?;
    let (problem, rows) = regression_problem(&data, cfg.mu, cfg.omega)?;
    let (w_bar, reference_trace) = reference_solution(&problem, cfg.fb_iterations)?;
    let problem = problem.with_reference(w_bar.clone())?;
    let oracle = finite_sum_oracle(rows, cfg.data.data_seed)?;
    // Probe at the reference and at random points around it.
    let mut rng = SpgRng::new(cfg.data.data_seed ^ 0x5eed);
    let mut probes = vec![w_bar.clone()];
    for _ in 0..7 {
        probes.push(w_bar.iter().map(|x| x + rng.uniform_range(-2.0, 2.0)).collect());
    }
    let certificate = estimate_certificate(&oracle, &probes, 2000)?;
    let oracle = oracle.with_certificate(certificate);
    let schedule = StepSchedule::unrelaxed(cfg.step)?;
    let report = check_schedule(
        &schedule,
        problem.smooth().lipschitz(),
        &certificate,
        cfg.epsilon,
        cfg.iterations,
        cfg.force,
    )?;
    let sc = SolverConfig::new(schedule, cfg.iterations)
        .with_epsilon(cfg.epsilon)
        .with_averaging(cfg.fobos_weights);
    let traces = run_ensemble(&problem, &oracle, &sc, &cfg.seeds, &vec![0.0; problem.dimension()])?;
    Ok(RegressionOutcome {
        data,
        problem,
        reference_trace,
        certificate,
        report,
        traces,
    })
}

// ---------------------------------------------------------------------------
// Deconvolution

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeconvInit {
    Zero,
    Observation,
}

#[derive(Debug, Clone)]
pub struct DeconvConfig {
    pub length: usize,
    pub kernel_std: f64,
    pub spikes: usize,
    pub amplitude: (f64, f64),
    pub obs_noise_var: f64,
    pub grad_noise_var: f64,
    pub l1: f64,
    pub ridge: f64,
    pub step: StepSize,
    pub fobos_weights: StepSize,
    pub seeds: Vec<u64>,
    pub iterations: usize,
    pub fb_iterations: usize,
    pub data_seed: u64,
    pub init: DeconvInit,
    pub epsilon: f64,
    pub force: bool,
}

/// Nonzero count of the full-size ground truth (1024 samples, 993 zeros).
pub const PAPER_SPIKES: usize = 31;
pub const PAPER_LENGTH: usize = 1024;

impl DeconvConfig {
    pub fn paper() -> Self {
        Self {
            length: PAPER_LENGTH,
            kernel_std: 4.0,
            spikes: PAPER_SPIKES,
            amplitude: (10.0, 30.0),
            obs_noise_var: 0.06,
            grad_noise_var: 0.01,
            l1: 1.0,
            ridge: 0.02,
            step: StepSize::Shifted { a: 3.0, b: 100.0 },
            fobos_weights: StepSize::Shifted { a: 3.0, b: 100.0 },
            seeds: vec![0],
            iterations: 4999,
            fb_iterations: 10_000,
            data_seed: 0,
            init: DeconvInit::Zero,
            epsilon: 0.1,
            force: true,
        }
    }

    /// Same setup at `length` samples, keeping the spike density.
    pub fn scaled(length: usize) -> Self {
        Self {
            length,
            spikes: scaled_spikes(length),
            ..Self::paper()
        }
    }
}

pub fn scaled_spikes(length: usize) -> usize {
    ((length * PAPER_SPIKES) as f64 / PAPER_LENGTH as f64).round() as usize
}

#[derive(Debug)]
pub struct DeconvOutcome {
    pub truth: Vec<f64>,
    pub kernel: Vec<f64>,
    pub observation: Vec<f64>,
    pub problem: CompositeProblem,
    pub reference_trace: RunTrace,
    pub certificate: VarianceCertificate,
    pub report: ConditionReport,
    pub traces: Vec<RunTrace>,
}

/// `L(w) = 1/2 |y - h * w|^2 + (ridge/2)|w|^2`, `R = l1 |w|_1`.
pub fn deconv_problem(kernel: &[f64], observation: Vec<f64>, l1: f64, ridge: f64) -> Result<CompositeProblem> {
    let smooth = Arc::new(convolution_term(kernel, observation, ridge)?);
    Ok(CompositeProblem::new(smooth, Arc::new(ElasticNet::l1_only(l1)?)))
}

pub fn run_deconv(cfg: &DeconvConfig) -> Result<DeconvOutcome> {
    ensure!(cfg.length >= 8, "deconvolution needs length >= 8");
    ensure!(cfg.obs_noise_var >= 0.0 && cfg.grad_noise_var >= 0.0, "noise variances must be nonnegative");
    let kernel = gaussian_kernel(cfg.kernel_std, cfg.length)?;
    let mut rng = SpgRng::new(cfg.data_seed);
    let truth = spike_signal(cfg.length, cfg.spikes, cfg.amplitude, &mut rng)?;
    let obs_std = cfg.obs_noise_var.sqrt();
    let observation: Vec<f64> = circular_convolve(&kernel, &truth)
        .into_iter()
        .map(|v| if obs_std > 0.0 { v + obs_std * rng.normal() } else { v })
        .collect();
    let problem = deconv_problem(&kernel, observation.clone(), cfg.l1, cfg.ridge)?;
    let (w_bar, reference_trace) = reference_solution(&problem, cfg.fb_iterations)?;
    let problem = problem.with_reference(w_bar)?;
    let oracle = oracle_for(problem.smooth().clone(), cfg.grad_noise_var.sqrt(), cfg.data_seed)?;
    let certificate = certificate_or_floor(oracle.as_ref());
    let schedule = StepSchedule::unrelaxed(cfg.step)?;
    let report = check_schedule(
        &schedule,
        problem.smooth().lipschitz(),
        &certificate,
        cfg.epsilon,
        cfg.iterations,
        cfg.force,
    )?;
    let sc = SolverConfig::new(schedule, cfg.iterations)
        .with_epsilon(cfg.epsilon)
        .with_averaging(cfg.fobos_weights);
    let w1 = match cfg.init {
        DeconvInit::Zero => vec![0.0; cfg.length],
        DeconvInit::Observation => observation.clone(),
    };
    let traces = run_ensemble(&problem, oracle.as_ref(), &sc, &cfg.seeds, &w1)?;
    Ok(DeconvOutcome {
        truth,
        kernel,
        observation,
        problem,
        reference_trace,
        certificate,
        report,
        traces,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seed_ranges() {
        assert_eq!(seed_range(5, 3).unwrap(), vec![5, 6, 7]);
        assert!(seed_range(0, 0).is_err());
        assert!(seed_range(u64::MAX, 2).is_err());
        assert!(check_seeds(&[1, 2, 1]).is_err());
    }

    #[test]
    fn toy_minimizer_is_ten_for_any_ridge() {
        for nu in [0.0, 0.5, 2.0] {
            let p = toy_problem(0.3, nu, TOY_L1).unwrap();
            assert_eq!(p.optimality_residual(&[10.0]), 0.0);
        }
        assert!(toy_problem(0.0, 1.0, TOY_L1).is_err());
    }

    #[test]
    fn violations_need_force() {
        let s = StepSchedule::unrelaxed(StepSize::Power { c1: 1.0, theta: 1.0 }).unwrap();
        let cert = VarianceCertificate::new(0.1, 0.0).unwrap();
        assert!(check_schedule(&s, 1.0, &cert, 0.5, 10, false).is_err());
        assert!(check_schedule(&s, 1.0, &cert, 0.5, 10, true).is_ok());
        let ok = StepSchedule::unrelaxed(StepSize::Power { c1: 0.5, theta: 1.0 }).unwrap();
        assert!(check_schedule(&ok, 1.0, &cert, 0.5, 10, false).is_ok());
    }

    #[test]
    fn scaled_spike_counts() {
        assert_eq!(scaled_spikes(1024), 31);
        assert_eq!(scaled_spikes(128), 4);
    }
}
