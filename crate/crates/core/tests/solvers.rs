#![allow(clippy::needless_range_loop)]

use std::sync::Arc;

use spg_core::oracle::{additive_gaussian_oracle, ExactOracle};
use spg_core::prox::{ElasticNet, NoRegularizer};
use spg_core::schedule::check_step_condition;
use spg_core::smooth::{least_squares_term, Quadratic};
use spg_core::solver::{fobos_average, run_forward_backward, run_spg, RunningAverage};
use spg_core::vector::{norm, Matrix};
use spg_core::{CompositeProblem, GradientOracle, SmoothTerm, SolverConfig, SpgRng, StepSchedule, StepSize};

fn toy(mu: f64) -> CompositeProblem {
    CompositeProblem::new(
        Arc::new(Quadratic::new(vec![10.0], mu).unwrap()),
        Arc::new(ElasticNet::l1_only(0.02).unwrap().with_center(vec![10.0]).unwrap()),
    )
    .with_reference(vec![10.0])
    .unwrap()
}

fn mean_and_se(xs: &[f64]) -> (f64, f64) {
    let m = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / m;
    let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (m - 1.0);
    (mean, (var / m).sqrt())
}

#[test]
fn toy_error_decreases_and_settles() {
    let p = toy(1.0);
    let oracle = additive_gaussian_oracle(p.smooth().clone(), 0.1, 0).unwrap();
    let cfg = SolverConfig::new(StepSchedule::unrelaxed(StepSize::Power { c1: 1.0, theta: 1.0 }).unwrap(), 999);
    let traces: Vec<_> = (0..100).map(|s| run_spg(&p, &oracle, &cfg, s, &[0.0]).unwrap()).collect();
    let mean_at = |n: usize| {
        traces.iter().map(|t| t.record_at(n).unwrap().iterate.dist_to_ref.unwrap()).sum::<f64>() / 100.0
    };
    let checkpoints = [1, 3, 10, 30, 100, 300, 1000];
    for w in checkpoints.windows(2) {
        assert!(mean_at(w[1]) < mean_at(w[0]), "{} -> {}", w[0], w[1]);
    }
    assert!(mean_at(1000) < 0.1);
}

#[test]
fn quasi_fejer_in_expectation() {
    // gamma_n = 0.5 / n meets the step bound with eps = 0.5 since beta = 1.
    let p = toy(1.0);
    let noise_std = 0.1f64.sqrt();
    let oracle = additive_gaussian_oracle(p.smooth().clone(), noise_std, 0).unwrap();
    let sched = StepSchedule::unrelaxed(StepSize::Power { c1: 0.5, theta: 1.0 }).unwrap();
    let cert = oracle.certificate().unwrap();
    let report = check_step_condition(&sched, p.smooth().lipschitz(), &cert, 0.5, 500).unwrap();
    assert!(report.a3_satisfied() && report.a4_satisfied());

    let seeds = 200;
    let iters = 500;
    let cfg = SolverConfig::new(sched, iters).with_epsilon(0.5);
    let traces: Vec<_> = (0..seeds).map(|s| run_spg(&p, &oracle, &cfg, s, &[0.0]).unwrap()).collect();
    let mut ok = 0;
    for n in 1..=iters {
        let gamma = sched.gamma(n);
        let chi_sq = gamma * gamma;
        let diffs: Vec<f64> = traces
            .iter()
            .map(|t| {
                let a = t.records[n - 1].iterate.dist_to_ref.unwrap();
                let b = t.records[n].iterate.dist_to_ref.unwrap();
                b * b - a * a - 2.0 * cert.sigma_sq() * chi_sq
            })
            .collect();
        let (mean, se) = mean_and_se(&diffs);
        if mean <= 3.0 * se {
            ok += 1;
        }
    }
    assert!(ok as f64 >= 0.95 * iters as f64, "{ok} of {iters}");

    // Boundedness of every path.
    let cap = 10.0 * (0.0 + 10.0 + 1.0);
    for t in &traces {
        assert!(t.records.iter().all(|r| norm(r.iterate.point.as_ref().unwrap()) < cap));
    }
}

#[test]
fn fobos_running_average_matches_direct_sum() {
    let mut rng = SpgRng::new(21);
    let iterates: Vec<Vec<f64>> = (0..50).map(|_| (0..3).map(|_| rng.uniform_range(-5.0, 5.0)).collect()).collect();
    let c1 = 1.7;
    let mut acc = RunningAverage::new(StepSize::Power { c1, theta: 1.0 }, 3);
    for (k, w) in iterates.iter().enumerate() {
        acc.push(w);
        let mut num = [0.0; 3];
        let mut den = 0.0;
        for (j, v) in iterates[..=k].iter().enumerate() {
            let eta = c1 / (j + 1) as f64;
            den += eta;
            for i in 0..3 {
                num[i] += eta * v[i];
            }
        }
        for i in 0..3 {
            let direct = num[i] / den;
            assert!((acc.mean()[i] - direct).abs() <= 1e-12 * direct.abs().max(1e-300) + 1e-15);
        }
    }

    // Same through a recorded trace.
    let p = toy(1.0);
    let oracle = additive_gaussian_oracle(p.smooth().clone(), 1.0, 0).unwrap();
    let cfg = SolverConfig::new(StepSchedule::unrelaxed(StepSize::Constant(0.3)).unwrap(), 49);
    let t = run_spg(&p, &oracle, &cfg, 8, &[0.0]).unwrap();
    let av = fobos_average(&t, 1.0).unwrap();
    let xs: Vec<f64> = t.records.iter().map(|r| r.iterate.point.as_ref().unwrap()[0]).collect();
    for (k, a) in av.iter().enumerate() {
        let den: f64 = (1..=k + 1).map(|j| 1.0 / j as f64).sum();
        let num: f64 = xs[..=k].iter().enumerate().map(|(j, x)| x / (j + 1) as f64).sum();
        assert!((a.point[0] - num / den).abs() <= 1e-12 * (num / den).abs());
    }
}

#[test]
fn forward_backward_elastic_net_optimality() {
    let mut rng = SpgRng::new(31);
    let data: Vec<f64> = (0..30).map(|_| rng.uniform_range(-1.0, 1.0)).collect();
    let targets: Vec<f64> = (0..10).map(|_| rng.uniform_range(-2.0, 2.0)).collect();
    let ls = least_squares_term(Matrix::from_row_major(10, 3, data).unwrap(), targets, 0.0).unwrap();
    let beta = ls.lipschitz();
    let p = CompositeProblem::new(Arc::new(ls), Arc::new(ElasticNet::new(0.1, 0.05).unwrap()));
    let t = run_forward_backward(&p, 1.0 / beta, 20_000, &[0.0; 3]).unwrap();
    let w = &t.final_iterate;
    // Componentwise subgradient interval check of 0 in grad L + dR.
    let g = p.smooth().gradient(w);
    for i in 0..3 {
        let r = g[i] + 0.05 * w[i];
        if w[i] != 0.0 {
            assert!((r + 0.1 * w[i].signum()).abs() <= 1e-6);
        } else {
            assert!(r.abs() <= 0.1 + 1e-6);
        }
    }
}

#[test]
fn ridge_placement_gives_same_minimizer() {
    let mut rng = SpgRng::new(41);
    let data: Vec<f64> = (0..24).map(|_| rng.uniform_range(-1.0, 1.0)).collect();
    let targets: Vec<f64> = (0..6).map(|_| rng.uniform_range(-2.0, 2.0)).collect();
    let design = Matrix::from_row_major(6, 4, data).unwrap();
    let in_l = least_squares_term(design.clone(), targets.clone(), 0.3).unwrap();
    let in_r = least_squares_term(design, targets, 0.0).unwrap();
    let step = 1.0 / in_l.lipschitz();
    let a = CompositeProblem::new(Arc::new(in_l), Arc::new(ElasticNet::new(0.05, 0.0).unwrap()));
    let b = CompositeProblem::new(Arc::new(in_r), Arc::new(ElasticNet::new(0.05, 0.3).unwrap()));
    let wa = run_forward_backward(&a, step, 20_000, &[0.0; 4]).unwrap().final_iterate;
    let wb = run_forward_backward(&b, step, 20_000, &[0.0; 4]).unwrap().final_iterate;
    for (x, y) in wa.iter().zip(&wb) {
        assert!((x - y).abs() < 1e-9, "{wa:?} vs {wb:?}");
    }
}

#[test]
fn noiseless_spg_matches_forward_backward_on_least_squares() {
    let mut rng = SpgRng::new(51);
    let data: Vec<f64> = (0..40).map(|_| rng.uniform_range(-1.0, 1.0)).collect();
    let targets: Vec<f64> = (0..8).map(|_| rng.uniform_range(-2.0, 2.0)).collect();
    let ls: Arc<dyn SmoothTerm> = Arc::new(least_squares_term(Matrix::from_row_major(8, 5, data).unwrap(), targets, 0.0).unwrap());
    let step = 1.0 / ls.lipschitz();
    let p = CompositeProblem::new(ls.clone(), Arc::new(ElasticNet::new(0.005, 0.1).unwrap()));
    let cfg = SolverConfig::new(StepSchedule::unrelaxed(StepSize::Constant(step)).unwrap(), 2000);
    let spg = run_spg(&p, &ExactOracle::new(ls), &cfg, 1, &[1.0; 5]).unwrap();
    let fb = run_forward_backward(&p, step, 2000, &[1.0; 5]).unwrap();
    assert_eq!(spg.final_iterate, fb.final_iterate);
    for (a, b) in spg.records.iter().zip(&fb.records) {
        assert_eq!(a.iterate, b.iterate);
    }
}

#[test]
fn unregularized_quadratic_converges() {
    let p = CompositeProblem::new(Arc::new(Quadratic::new(vec![3.0, -1.0], 2.0).unwrap()), Arc::new(NoRegularizer));
    let t = run_forward_backward(&p, 0.25, 200, &[0.0, 0.0]).unwrap();
    assert!((t.final_iterate[0] - 3.0).abs() < 1e-12);
    assert!((t.final_iterate[1] + 1.0).abs() < 1e-12);
}
