use spg_core::smooth::{convolution_term, least_squares_term, Quadratic};
use spg_core::vector::{dist, dist_sq, dot, Matrix};
use spg_core::{SmoothTerm, SpgRng};

fn random_vec(rng: &mut SpgRng, d: usize, scale: f64) -> Vec<f64> {
    (0..d).map(|_| rng.uniform_range(-scale, scale)).collect()
}

fn check_gradient_invariants(term: &dyn SmoothTerm, rng: &mut SpgRng) {
    let d = term.dimension();
    let (beta, mu) = (term.lipschitz(), term.strong_convexity());
    for _ in 0..50 {
        let w = random_vec(rng, d, 3.0);
        let u = random_vec(rng, d, 3.0);
        let gw = term.gradient(&w);
        let gu = term.gradient(&u);
        let dg: Vec<f64> = gw.iter().zip(&gu).map(|(a, b)| a - b).collect();
        let dx: Vec<f64> = w.iter().zip(&u).map(|(a, b)| a - b).collect();
        let inner = dot(&dg, &dx);
        let tol = 1e-9 * (1.0 + dist_sq(&w, &u));
        assert!(dist(&gw, &gu) <= beta * dist(&w, &u) * (1.0 + 1e-8) + 1e-12);
        assert!(inner >= mu * dist_sq(&w, &u) - tol);
        assert!(inner >= dist_sq(&gw, &gu) / beta - tol);
        // Central differences of the value.
        let h = 1e-5;
        for i in 0..d {
            let mut wp = w.clone();
            let mut wm = w.clone();
            wp[i] += h;
            wm[i] -= h;
            let fd = (term.value(&wp) - term.value(&wm)) / (2.0 * h);
            assert!((fd - gw[i]).abs() <= 1e-5 * (1.0 + gw[i].abs()), "component {i}: {fd} vs {}", gw[i]);
        }
    }
}

#[test]
fn quadratic_invariants() {
    let mut rng = SpgRng::new(1);
    check_gradient_invariants(&Quadratic::new(vec![10.0, -2.0], 0.7).unwrap(), &mut rng);
}

#[test]
fn least_squares_invariants() {
    let mut rng = SpgRng::new(2);
    for &(n, p, ridge) in &[(9usize, 6usize, 0.0), (20, 4, 0.1), (3, 5, 0.05)] {
        let design = Matrix::from_row_major(n, p, random_vec(&mut rng, n * p, 1.0)).unwrap();
        let targets = random_vec(&mut rng, n, 2.0);
        let term = least_squares_term(design, targets, ridge).unwrap();
        check_gradient_invariants(&term, &mut rng);
    }
}

#[test]
fn least_squares_constants_bracket_rayleigh_quotients() {
    let mut rng = SpgRng::new(3);
    let design = Matrix::from_row_major(12, 5, random_vec(&mut rng, 60, 1.0)).unwrap();
    let term = least_squares_term(design.clone(), vec![0.0; 12], 0.0).unwrap();
    let mut xv = vec![0.0; 12];
    for _ in 0..2000 {
        let v = random_vec(&mut rng, 5, 1.0);
        design.mul_vec_into(&v, &mut xv);
        let q = dot(&xv, &xv) / 12.0 / dot(&v, &v);
        assert!(q <= term.lipschitz() * (1.0 + 1e-8));
        assert!(q >= term.strong_convexity() * (1.0 - 1e-8));
    }
}

#[test]
fn convolution_invariants() {
    let mut rng = SpgRng::new(4);
    let kernel = [0.5, 0.3, 0.0, 0.2];
    let obs = random_vec(&mut rng, 16, 1.0);
    let term = convolution_term(&kernel, obs, 0.02).unwrap();
    check_gradient_invariants(&term, &mut rng);
    // Constant signals are scaled by the kernel sum.
    assert!(term.lipschitz() <= 1.0 + 0.02 + 1e-12);
}

#[test]
fn convolution_beta_matches_dft_brute_force() {
    let kernel = [0.25, 0.5, 0.25];
    let n = 8;
    let term = convolution_term(&kernel, vec![0.0; n], 0.0).unwrap();
    let mut lmax: f64 = 0.0;
    let mut lmin = f64::INFINITY;
    for k in 0..n {
        let (mut re, mut im) = (0.0, 0.0);
        for (j, h) in kernel.iter().enumerate() {
            let a = -2.0 * std::f64::consts::PI * (j * k) as f64 / n as f64;
            re += h * a.cos();
            im += h * a.sin();
        }
        let m = re * re + im * im;
        lmax = lmax.max(m);
        lmin = lmin.min(m);
    }
    assert!((term.lipschitz() - lmax).abs() < 1e-12);
    assert!((term.strong_convexity() - lmin).abs() < 1e-12);
}
