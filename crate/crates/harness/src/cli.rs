//! Command-line front end. `parse` and `execute` are split so tests can drive
//! the CLI in-process.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use anyhow::{bail, ensure, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use log::{info, warn};
use serde_json::{json, Value};
use spg_core::bounds::{
    corollary_bound, ensemble_statistics, theorem1_bound, theorem1_constants, BoundParams,
};
use spg_core::oracle::SIGMA_SQ_FLOOR;
use spg_core::rng::RNG_ID;
use spg_core::schedule::{check_step_condition, ConditionReport};
use spg_core::vector::zero_count;
use spg_core::{Relaxation, RunTrace, StepSchedule, StepSize, VarianceCertificate};

use crate::config::expand_config;
use crate::data::Dictionary;
use crate::experiments::{
    estimate_s_n0, run_deconv, run_regression, run_toy, scaled_spikes, seed_range, toy_bound_params, DeconvConfig,
    DeconvInit, RegressionConfig, ToyConfig, TOY_L1,
};
use crate::output::{
    ensure_dir, write_json, write_rows, write_sparsity_csv, write_summary_csv, write_trace_csv, Series,
};

/// Offset between main seeds and the pilot seeds used to estimate `s_n0`.
pub const PILOT_SEED_OFFSET: u64 = 1_000_000;

const NOISE_NOTE: &str = "noise given as N(0, v) is read as variance v; std = sqrt(v)";

#[derive(Debug, Parser)]
#[command(name = "spg", version, about = "Stochastic proximal gradient experiments")]
#[command(args_override_self = true)]
pub struct Cli {
    /// Flat `key = value` file of flags for the subcommand; command-line flags win.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Scalar toy problem (mu/2)|w-10|^2 + 0.02|w-10| with additive gradient noise.
    Toy(ToyArgs),
    /// Elastic-net dictionary regression with an incremental gradient oracle.
    Regression(RegressionArgs),
    /// Sparse deconvolution with a Gaussian kernel.
    Deconv(DeconvArgs),
    /// Evaluate the convergence bound for given constants.
    Bound(BoundArgs),
    /// Check a step-size schedule against the convergence conditions.
    CheckConditions(CheckArgs),
}

#[derive(Debug, Args, Clone)]
pub struct RunCommon {
    /// Number of seeds.
    #[arg(long, default_value_t = 1)]
    pub seeds: usize,
    /// First seed; seeds are base, base+1, ...
    #[arg(long, default_value_t = 0)]
    pub seed_base: u64,
    /// Refuse to run when the schedule violates the convergence conditions
    /// (default: log a warning and continue).
    #[arg(long)]
    pub strict: bool,
    /// Output directory.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct ToyArgs {
    /// Strong convexity of L; several values give one subdirectory each.
    #[arg(long, value_delimiter = ',', default_value = "1")]
    pub mu: Vec<f64>,
    /// Ridge modulus in R, centred at 10.
    #[arg(long, default_value_t = 0.0)]
    pub nu: f64,
    #[arg(long, default_value_t = TOY_L1)]
    pub l1: f64,
    /// gamma_n = c1 n^-theta.
    #[arg(long, default_value_t = 1.0)]
    pub theta: f64,
    #[arg(long, default_value_t = 1.0)]
    pub c1: f64,
    /// Constant relaxation lambda.
    #[arg(long, default_value_t = 1.0)]
    pub lambda: f64,
    /// Gradient noise standard deviation (default sqrt(0.1)).
    #[arg(long, conflicts_with = "noise_var")]
    pub noise_std: Option<f64>,
    /// Gradient noise variance.
    #[arg(long)]
    pub noise_var: Option<f64>,
    /// Number of iterates w_1..w_N.
    #[arg(long, default_value_t = 1000)]
    pub iters: usize,
    #[arg(long, default_value_t = 0.0)]
    pub w1: f64,
    /// FOBOS weights eta_k = C1/k.
    #[arg(long, default_value_t = 1.0)]
    pub fobos_c1: f64,
    #[arg(long)]
    pub no_fobos: bool,
    #[arg(long, default_value_t = 0.5)]
    pub epsilon: f64,
    /// Fixed s_n0 for the bound column instead of a pilot estimate.
    #[arg(long)]
    pub s_n0: Option<f64>,
    #[command(flatten)]
    pub common: RunCommon,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum RegressionPreset {
    Poly,
    Trig,
}

#[derive(Debug, Args)]
pub struct RegressionArgs {
    #[arg(long, value_enum, default_value = "poly")]
    pub preset: RegressionPreset,
    /// Use sin((k-q)x) for the sine atoms of the trigonometric dictionary.
    #[arg(long)]
    pub trig_shifted_sines: bool,
    #[arg(long)]
    pub mu: Option<f64>,
    #[arg(long)]
    pub omega: Option<f64>,
    /// Number of iterates w_1..w_N.
    #[arg(long, default_value_t = 5000)]
    pub iters: usize,
    /// Forward-backward iterations for the reference solution.
    #[arg(long, default_value_t = 50_000)]
    pub fb_iters: usize,
    #[arg(long, default_value_t = 0)]
    pub data_seed: u64,
    #[arg(long, default_value_t = 0.1)]
    pub epsilon: f64,
    #[command(flatten)]
    pub common: RunCommon,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum DeconvPreset {
    /// 1024 samples, 5000 iterates.
    Full,
    /// 128 samples, 2000 iterates.
    Desk,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum InitArg {
    Zero,
    Observation,
}

#[derive(Debug, Args)]
pub struct DeconvArgs {
    #[arg(long, value_enum, default_value = "full")]
    pub preset: DeconvPreset,
    #[arg(long)]
    pub length: Option<usize>,
    #[arg(long, default_value_t = 4.0)]
    pub kernel_std: f64,
    /// Nonzeros in the ground truth (default keeps 31 per 1024 samples).
    #[arg(long)]
    pub spikes: Option<usize>,
    #[arg(long, default_value_t = 10.0)]
    pub amp_lo: f64,
    #[arg(long, default_value_t = 30.0)]
    pub amp_hi: f64,
    #[arg(long, default_value_t = 0.06)]
    pub obs_noise_var: f64,
    #[arg(long, default_value_t = 0.01)]
    pub grad_noise_var: f64,
    #[arg(long, default_value_t = 1.0)]
    pub l1: f64,
    #[arg(long, default_value_t = 0.02)]
    pub ridge: f64,
    /// Number of iterates w_1..w_N.
    #[arg(long)]
    pub iters: Option<usize>,
    #[arg(long, default_value_t = 10_000)]
    pub fb_iters: usize,
    #[arg(long, default_value_t = 0)]
    pub data_seed: u64,
    #[arg(long, value_enum, default_value = "zero")]
    pub init: InitArg,
    #[arg(long, default_value_t = 0.1)]
    pub epsilon: f64,
    #[command(flatten)]
    pub common: RunCommon,
}

#[derive(Debug, Args)]
pub struct BoundArgs {
    #[arg(long)]
    pub theta: f64,
    #[arg(long)]
    pub c1: f64,
    #[arg(long, default_value_t = 1.0)]
    pub lambda: f64,
    #[arg(long)]
    pub mu: f64,
    #[arg(long, default_value_t = 0.0)]
    pub nu: f64,
    #[arg(long)]
    pub epsilon: f64,
    #[arg(long)]
    pub sigma_sq: f64,
    #[arg(long, default_value_t = 0.0)]
    pub alpha_sup: f64,
    /// Norm of grad L at the solution.
    #[arg(long, default_value_t = 0.0)]
    pub grad_norm: f64,
    #[arg(long)]
    pub s_n0: f64,
    #[arg(long)]
    pub n_max: usize,
    /// Write bound.csv and meta.json here instead of printing the table.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[arg(long)]
    pub beta: f64,
    #[arg(long, default_value_t = 0.0)]
    pub sigma_sq: f64,
    #[arg(long, default_value_t = 0.0)]
    pub alpha: f64,
    #[arg(long)]
    pub epsilon: f64,
    /// gamma_n = c1 n^-theta.
    #[arg(long, requires = "c1", conflicts_with_all = ["a", "gamma"])]
    pub theta: Option<f64>,
    #[arg(long)]
    pub c1: Option<f64>,
    /// gamma_n = a / (n + b).
    #[arg(long, requires = "b", conflicts_with = "gamma")]
    pub a: Option<f64>,
    #[arg(long)]
    pub b: Option<f64>,
    /// Constant step.
    #[arg(long)]
    pub gamma: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    pub lambda: f64,
    #[arg(long)]
    pub horizon: usize,
    /// Also write the report to meta.json here.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Parses `argv` after expanding any `--config` file.
pub fn parse<I, T>(argv: I) -> Result<Cli, ParseFailure>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    let argv = expand_config(argv.into_iter().map(Into::into).collect()).map_err(ParseFailure::Config)?;
    Cli::try_parse_from(argv).map_err(ParseFailure::Clap)
}

#[derive(Debug)]
pub enum ParseFailure {
    Config(anyhow::Error),
    Clap(clap::Error),
}

/// Runs a parsed command; returns the one-line summary.
pub fn execute(cli: Cli) -> Result<String> {
    match cli.command {
        Command::Toy(a) => toy(a),
        Command::Regression(a) => regression(a),
        Command::Deconv(a) => deconv(a),
        Command::Bound(a) => bound(a),
        Command::CheckConditions(a) => check_conditions(a),
    }
}

/// Convenience for tests: parse and execute.
pub fn run<I, T>(argv: I) -> Result<String>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    match parse(argv) {
        Ok(cli) => execute(cli),
        Err(ParseFailure::Config(e)) => Err(e),
        Err(ParseFailure::Clap(e)) => Err(anyhow::anyhow!(e.to_string())),
    }
}

// ---------------------------------------------------------------------------
// JSON helpers

fn step_json(s: &StepSize) -> Value {
    match *s {
        StepSize::Power { c1, theta } => json!({"kind": "power", "c1": c1, "theta": theta}),
        StepSize::Shifted { a, b } => json!({"kind": "shifted", "a": a, "b": b}),
        StepSize::Constant(g) => json!({"kind": "constant", "gamma": g}),
    }
}

fn schedule_json(s: &StepSchedule) -> Value {
    let relaxation = match s.relaxation {
        Relaxation::Constant(l) => json!({"kind": "constant", "lambda": l}),
        Relaxation::Power { lambda1, exponent } => json!({"kind": "power", "lambda1": lambda1, "exponent": exponent}),
    };
    json!({"step": step_json(&s.step), "relaxation": relaxation})
}

fn report_json(r: &ConditionReport) -> Value {
    json!({
        "horizon": r.horizon,
        "step_limit": r.a3_step_limit,
        "first_step_violation": r.first_a3_violation,
        "relaxed_step_exponent": r.relaxed_step_exponent,
        "chi_sq_exponent": r.chi_sq_exponent,
        "relaxed_step_sum_diverges": r.relaxed_step_sum_diverges,
        "chi_sq_summable": r.chi_sq_summable,
        "step_bound_satisfied": r.a3_satisfied(),
        "summability_satisfied": r.a4_satisfied(),
    })
}

fn cert_json(c: &VarianceCertificate) -> Value {
    json!({"sigma_sq": c.sigma_sq(), "alpha": c.alpha()})
}

fn bound_json(p: &BoundParams) -> Value {
    json!({
        "theta": p.theta, "c1": p.c1, "lambda_inf": p.lambda_inf, "alpha_sup": p.alpha_sup,
        "sigma_sq": p.sigma_sq, "mu": p.mu, "nu": p.nu, "epsilon": p.epsilon,
        "grad_at_sol_norm": p.grad_at_sol_norm, "t": p.t, "c": p.c, "tau": p.tau,
        "n0": p.n0, "s_n0": p.s_n0, "first_valid_n": p.first_valid_n(),
    })
}

fn seeds_json(seeds: &[u64]) -> Value {
    json!({"count": seeds.len(), "first": seeds[0], "last": seeds[seeds.len() - 1]})
}

fn updates(iters: usize) -> Result<usize> {
    ensure!(iters >= 1, "--iters must be at least 1");
    Ok(iters - 1)
}

fn final_mean_dist(traces: &[RunTrace], which: Series) -> Option<f64> {
    let vals: Vec<f64> = traces
        .iter()
        .filter_map(|t| {
            let r = t.last();
            match which {
                Series::Iterate => r.iterate.dist_to_ref,
                Series::Average => r.average.as_ref().and_then(|a| a.dist_to_ref),
            }
        })
        .collect();
    (!vals.is_empty()).then(|| vals.iter().sum::<f64>() / vals.len() as f64)
}

fn write_run_outputs(
    dir: &Path,
    seeds: &[u64],
    traces: &[RunTrace],
    bound: impl Fn(usize) -> Option<f64>,
) -> Result<()> {
    ensure_dir(dir)?;
    write_trace_csv(&dir.join("trace.csv"), seeds, traces, Series::Iterate)?;
    if traces.iter().any(|t| t.meta.averaging.is_some()) {
        write_trace_csv(&dir.join("fobos.csv"), seeds, traces, Series::Average)?;
    }
    let stats = ensemble_statistics(traces)?;
    write_summary_csv(&dir.join("summary.csv"), &stats, bound)
}

// ---------------------------------------------------------------------------
// Subcommands

fn toy(a: ToyArgs) -> Result<String> {
    let seeds = seed_range(a.common.seed_base, a.common.seeds)?;
    let noise_std = match (a.noise_std, a.noise_var) {
        (Some(s), _) => s,
        (None, Some(v)) => {
            ensure!(v >= 0.0, "--noise-var must be nonnegative");
            v.sqrt()
        }
        (None, None) => 0.1f64.sqrt(),
    };
    ensure!(!a.mu.is_empty(), "--mu needs at least one value");
    let schedule = StepSchedule::new(StepSize::Power { c1: a.c1, theta: a.theta }, Relaxation::Constant(a.lambda))?;
    let iterations = updates(a.iters)?;
    let multi = a.mu.len() > 1;
    let mut parts = Vec::new();
    for &mu in &a.mu {
        let cfg = ToyConfig {
            mu,
            nu: a.nu,
            l1: a.l1,
            schedule,
            noise_std,
            seeds: seeds.clone(),
            iterations,
            w1: a.w1,
            fobos_c1: (!a.no_fobos).then_some(a.fobos_c1),
            epsilon: a.epsilon,
            force: !a.common.strict,
        };
        let outcome = run_toy(&cfg)?;
        let dir = if multi { a.common.out.join(format!("mu_{mu}")) } else { a.common.out.clone() };

        // Bound column: constants from the run, s_n0 from a pilot ensemble unless given.
        let (params, s_n0_source) = match toy_bound_params(&cfg) {
            Ok(p) => {
                let (s, src) = match a.s_n0 {
                    Some(s) => (s, json!("given")),
                    None => {
                        let pilot = seed_range(a.common.seed_base.saturating_add(PILOT_SEED_OFFSET), seeds.len())?;
                        let s = estimate_s_n0(&cfg, p.n0, &pilot)?;
                        (s, json!({"pilot_seeds": seeds_json(&pilot), "n0": p.n0}))
                    }
                };
                (Some(p.with_s_n0(s)?), src)
            }
            Err(e) => {
                warn!("no bound column for mu = {mu}: {e}");
                (None, Value::Null)
            }
        };
        let bound = |n: usize| params.as_ref().and_then(|p| theorem1_bound(p, n).ok());
        write_run_outputs(&dir, &seeds, &outcome.traces, bound)?;
        let meta = json!({
            "command": "toy",
            "problem": {"mu": mu, "nu": a.nu, "l1": a.l1, "minimizer": 10.0},
            "schedule": schedule_json(&schedule),
            "iterates": a.iters,
            "updates": iterations,
            "w1": a.w1,
            "seeds": seeds_json(&seeds),
            "gradient_noise": {"std": noise_std, "variance": noise_std * noise_std, "interpretation": NOISE_NOTE},
            "fobos": (!a.no_fobos).then(|| step_json(&StepSize::Power { c1: a.fobos_c1, theta: 1.0 })),
            "epsilon": a.epsilon,
            "certificate": cert_json(&outcome.certificate),
            "condition_check": report_json(&outcome.report),
            "strict": a.common.strict,
            "reference": {"value": [10.0], "provenance": "analytic minimizer"},
            "bound": params.as_ref().map(bound_json),
            "s_n0_source": s_n0_source,
            "rng": RNG_ID,
        });
        write_json(&dir.join("meta.json"), &meta)?;
        let m = final_mean_dist(&outcome.traces, Series::Iterate).unwrap_or(f64::NAN);
        parts.push(format!("mu={mu}: mean |w-10| {m:.4e}"));
        info!("toy mu = {mu} written to {}", dir.display());
    }
    Ok(format!(
        "toy: {} seeds, {} iterates; {} -> {}",
        seeds.len(),
        a.iters,
        parts.join(", "),
        a.common.out.display()
    ))
}

fn regression(a: RegressionArgs) -> Result<String> {
    let mut cfg = match a.preset {
        RegressionPreset::Poly => RegressionConfig::poly(),
        RegressionPreset::Trig => RegressionConfig::trig(a.trig_shifted_sines),
    };
    if a.trig_shifted_sines && matches!(a.preset, RegressionPreset::Poly) {
        warn!("--trig-shifted-sines has no effect on the polynomial preset");
    }
    if let Some(mu) = a.mu {
        cfg.mu = mu;
    }
    if let Some(omega) = a.omega {
        cfg.omega = omega;
    }
    cfg.seeds = seed_range(a.common.seed_base, a.common.seeds)?;
    cfg.iterations = updates(a.iters)?;
    cfg.fb_iterations = a.fb_iters;
    cfg.data.data_seed = a.data_seed;
    cfg.epsilon = a.epsilon;
    cfg.force = !a.common.strict;
    let out = run_regression(&cfg)?;
    let dir = &a.common.out;
    write_run_outputs(dir, &cfg.seeds, &out.traces, |_| None)?;
    let w_bar = out.problem.reference().expect("reference set").to_vec();
    let dictionary = match cfg.data.dictionary {
        Dictionary::Polynomial => json!({"kind": "polynomial", "domain": [-1.0, 1.0]}),
        Dictionary::Trigonometric { shifted_sines } => {
            json!({"kind": "trigonometric", "domain": [0.0, 2.0 * std::f64::consts::PI], "shifted_sines": shifted_sines})
        }
    };
    let meta = json!({
        "command": "regression",
        "preset": cfg.name,
        "data": {
            "dictionary": dictionary,
            "p": cfg.data.p,
            "n_samples": cfg.data.n_samples,
            "true_weights": cfg.data.true_weights,
            "label_noise": {"std": cfg.data.label_noise_std, "variance": cfg.data.label_noise_std.powi(2), "interpretation": NOISE_NOTE},
            "data_seed": cfg.data.data_seed,
        },
        "objective": {"data_term": "1/(2N)|Xw - y|^2", "l1_weight": 0.5 * cfg.omega, "l2_modulus": cfg.mu, "mu": cfg.mu, "omega": cfg.omega},
        "schedule": schedule_json(&StepSchedule::unrelaxed(cfg.step)?),
        "fobos": step_json(&cfg.fobos_weights),
        "iterates": a.iters,
        "updates": cfg.iterations,
        "w1": "zero",
        "seeds": seeds_json(&cfg.seeds),
        "oracle": "incremental: one uniformly drawn sample per step",
        "epsilon": cfg.epsilon,
        "certificate": cert_json(&out.certificate),
        "certificate_source": "estimated at 8 probes, 2000 samples each",
        "condition_check": report_json(&out.report),
        "strict": a.common.strict,
        "reference": {
            "value": w_bar,
            "provenance": "forward-backward from 0 with step 1/beta",
            "iterations": cfg.fb_iterations,
            "beta": out.problem.smooth().lipschitz(),
            "optimality_residual": out.problem.optimality_residual(&w_bar),
            "objective": out.problem.objective(&w_bar),
        },
        "rng": RNG_ID,
    });
    write_json(&dir.join("meta.json"), &meta)?;
    Ok(format!(
        "{}: {} seeds, {} iterates; mean |w-w_bar| SPG {:.4e}, FOBOS {:.4e} -> {}",
        cfg.name,
        cfg.seeds.len(),
        a.iters,
        final_mean_dist(&out.traces, Series::Iterate).unwrap_or(f64::NAN),
        final_mean_dist(&out.traces, Series::Average).unwrap_or(f64::NAN),
        dir.display()
    ))
}

fn deconv(a: DeconvArgs) -> Result<String> {
    let (length, iters) = match a.preset {
        DeconvPreset::Full => (1024, 5000),
        DeconvPreset::Desk => (128, 2000),
    };
    let length = a.length.unwrap_or(length);
    let iters = a.iters.unwrap_or(iters);
    let mut cfg = DeconvConfig::scaled(length);
    cfg.kernel_std = a.kernel_std;
    cfg.spikes = a.spikes.unwrap_or(scaled_spikes(length));
    cfg.amplitude = (a.amp_lo, a.amp_hi);
    cfg.obs_noise_var = a.obs_noise_var;
    cfg.grad_noise_var = a.grad_noise_var;
    cfg.l1 = a.l1;
    cfg.ridge = a.ridge;
    cfg.seeds = seed_range(a.common.seed_base, a.common.seeds)?;
    cfg.iterations = updates(iters)?;
    cfg.fb_iterations = a.fb_iters;
    cfg.data_seed = a.data_seed;
    cfg.init = match a.init {
        InitArg::Zero => DeconvInit::Zero,
        InitArg::Observation => DeconvInit::Observation,
    };
    cfg.epsilon = a.epsilon;
    cfg.force = !a.common.strict;
    let out = run_deconv(&cfg)?;
    let dir = &a.common.out;
    write_run_outputs(dir, &cfg.seeds, &out.traces, |_| None)?;
    write_sparsity_csv(&dir.join("sparsity.csv"), &cfg.seeds, &out.traces)?;
    let w_bar = out.problem.reference().expect("reference set").to_vec();
    let zero_tol = spg_core::solver::ZERO_TOL;
    let truth_zeros = zero_count(&out.truth, 0.0);
    let ref_zeros = zero_count(&w_bar, zero_tol);
    write_rows(
        &dir.join("signals.csv"),
        &["i", "truth", "observation", "reference", "kernel"],
        &(0..length)
            .map(|i| {
                vec![
                    i.to_string(),
                    out.truth[i].to_string(),
                    out.observation[i].to_string(),
                    w_bar[i].to_string(),
                    out.kernel[i].to_string(),
                ]
            })
            .collect::<Vec<_>>(),
    )?;
    let meta = json!({
        "command": "deconv",
        "length": length,
        "kernel": {"kind": "gaussian", "std": cfg.kernel_std, "truncation": "4 std", "normalization": "unit sum"},
        "ground_truth": {"spikes": cfg.spikes, "amplitude": [cfg.amplitude.0, cfg.amplitude.1], "sign": "uniform +-1", "zero_count": truth_zeros},
        "observation_noise": {"variance": cfg.obs_noise_var, "interpretation": NOISE_NOTE},
        "gradient_noise": {"variance": cfg.grad_noise_var, "interpretation": NOISE_NOTE},
        "objective": {"data_term": "1/2 |y - h*w|^2", "ridge_in_smooth_term": cfg.ridge, "l1": cfg.l1},
        "schedule": schedule_json(&StepSchedule::unrelaxed(cfg.step)?),
        "fobos": step_json(&cfg.fobos_weights),
        "iterates": iters,
        "updates": cfg.iterations,
        "w1": match cfg.init { DeconvInit::Zero => "zero", DeconvInit::Observation => "observation" },
        "seeds": seeds_json(&cfg.seeds),
        "data_seed": cfg.data_seed,
        "epsilon": cfg.epsilon,
        "certificate": cert_json(&out.certificate),
        "condition_check": report_json(&out.report),
        "strict": a.common.strict,
        "zero_tol": zero_tol,
        "reference": {
            "provenance": "forward-backward from 0 with step 1/beta; values in signals.csv",
            "iterations": cfg.fb_iterations,
            "beta": out.problem.smooth().lipschitz(),
            "zero_count": ref_zeros,
            "optimality_residual": out.problem.optimality_residual(&w_bar),
        },
        "rng": RNG_ID,
    });
    write_json(&dir.join("meta.json"), &meta)?;
    let t0 = &out.traces[0];
    let last = t0.last();
    Ok(format!(
        "deconv: length {length}, {iters} iterates; zeros truth {truth_zeros}, reference {ref_zeros}, SPG {}, FOBOS {} (seed {}) -> {}",
        last.iterate.zero_count,
        last.average.as_ref().map(|x| x.zero_count).unwrap_or(0),
        cfg.seeds[0],
        dir.display()
    ))
}

fn bound(a: BoundArgs) -> Result<String> {
    let p = theorem1_constants(
        a.theta, a.c1, a.lambda, a.alpha_sup, a.sigma_sq, a.mu, a.nu, a.epsilon, a.grad_norm,
    )?
    .with_s_n0(a.s_n0)?;
    let first = p.first_valid_n();
    ensure!(a.n_max >= first, "--n-max {} is below the first valid n = 2 n0 = {first}", a.n_max);
    let harmonic = a.theta == 1.0;
    let mut rows = Vec::with_capacity(a.n_max - first + 1);
    for n in first..=a.n_max {
        let mut r = vec![n.to_string(), theorem1_bound(&p, n)?.to_string()];
        if harmonic {
            r.push(corollary_bound(&p, n).to_string());
        }
        rows.push(r);
    }
    let header: &[&str] = if harmonic { &["n", "bound", "corollary_bound"] } else { &["n", "bound"] };
    let params = bound_json(&p);
    match &a.out {
        Some(dir) => {
            ensure_dir(dir)?;
            write_rows(&dir.join("bound.csv"), header, &rows)?;
            write_json(&dir.join("meta.json"), &json!({"command": "bound", "params": params}))?;
        }
        None => {
            println!("param,value");
            if let Value::Object(m) = &params {
                for (k, v) in m {
                    println!("{k},{v}");
                }
            }
            println!();
            println!("{}", header.join(","));
            for r in &rows {
                println!("{}", r.join(","));
            }
        }
    }
    Ok(format!(
        "bound: c = {}, t = {}, tau = {}, n0 = {}; bound({}) = {:.6e}",
        p.c,
        p.t,
        p.tau,
        p.n0,
        a.n_max,
        theorem1_bound(&p, a.n_max)?
    ))
}

fn check_conditions(a: CheckArgs) -> Result<String> {
    let step = match (a.theta, a.c1, a.a, a.b, a.gamma) {
        (Some(theta), Some(c1), None, None, None) => StepSize::Power { c1, theta },
        (None, None, Some(x), Some(y), None) => StepSize::Shifted { a: x, b: y },
        (None, None, None, None, Some(g)) => StepSize::Constant(g),
        _ => bail!("give exactly one schedule: --theta/--c1, --a/--b, or --gamma"),
    };
    let schedule = StepSchedule::new(step, Relaxation::Constant(a.lambda))?;
    let sigma_sq = if a.sigma_sq == 0.0 { 0.0 } else { a.sigma_sq.max(SIGMA_SQ_FLOOR) };
    let cert = VarianceCertificate::new(sigma_sq, a.alpha)?;
    let r = check_step_condition(&schedule, a.beta, &cert, a.epsilon, a.horizon)?;
    let a3 = match r.first_a3_violation {
        None => format!("A3 satisfied for all n <= {} (step limit {})", r.horizon, r.a3_step_limit),
        Some(n) => format!(
            "A3 violated first at n = {n}: gamma = {} > limit {}",
            schedule.gamma(n),
            r.a3_step_limit
        ),
    };
    let a4 = if r.a4_satisfied() {
        "A4 satisfied".to_string()
    } else {
        let mut why = Vec::new();
        if !r.relaxed_step_sum_diverges {
            why.push("sum lambda_n gamma_n converges");
        }
        if !r.chi_sq_summable {
            why.push("sum chi_n^2 diverges");
        }
        format!("A4 violated: {}", why.join(", "))
    };
    if let Some(dir) = &a.out {
        ensure_dir(dir)?;
        let meta = json!({
            "command": "check-conditions",
            "beta": a.beta,
            "certificate": cert_json(&cert),
            "epsilon": a.epsilon,
            "schedule": schedule_json(&schedule),
            "report": report_json(&r),
        });
        write_json(&dir.join("meta.json"), &meta)?;
    }
    Ok(format!("{a3}; {a4}"))
}
