mod common;

use common::{random_alpha, random_tfr, random_vec, rng};
use ndarray::Array2;
use num_complex::Complex64;
use proptest::prelude::*;
use tycoon_core::functional::log_space;
use tycoon_core::solver::prox_l1;
use tycoon_core::{
    eval_h, grad_smooth, ChirpTrack, DerivMethod, MuSchedule, SampledSignal, TFGrid, TFMatrix,
    TycoonParams,
};

fn smooth_params(method: DerivMethod) -> TycoonParams {
    TycoonParams {
        lambda_tilde: 1.0,
        deriv_method: method,
        ..TycoonParams::default()
    }
}

#[test]
fn gradient_matches_central_differences() {
    let mut r = rng(21);
    let g = TFGrid::new(16, 0.1).unwrap();
    for draw in 0..10 {
        let method = if draw % 2 == 0 { DerivMethod::Spectral } else { DerivMethod::FiniteDifference };
        let params = smooth_params(method);
        let mu_tilde = 0.3;
        let f = random_tfr(g, &mut r);
        let alpha = random_alpha(g.cols(), &mut r);
        let signal = SampledSignal::new(random_vec(g.cols(), &mut r), g.dt()).unwrap();
        let grad = grad_smooth(&f, &alpha, &signal, params.mu(mu_tilde), method).unwrap();
        let h = |v: &Array2<Complex64>| {
            let t = TFMatrix::from_values(g, v.clone()).unwrap();
            eval_h(&t, &alpha, &signal, &params, mu_tilde).unwrap().without_alpha()
        };
        let step = 1e-4;
        let gmax = grad.values().iter().map(|z| z.re.abs().max(z.im.abs())).fold(0.0, f64::max);
        for ((n, m), z) in grad.values().indexed_iter() {
            for (unit, analytic) in [(Complex64::new(1.0, 0.0), z.re), (Complex64::new(0.0, 1.0), z.im)] {
                let mut plus = f.values().clone();
                let mut minus = f.values().clone();
                plus[[n, m]] += unit * step;
                minus[[n, m]] -= unit * step;
                let fd = (h(&plus) - h(&minus)) / (2.0 * step);
                let rel = (fd - analytic).abs() / analytic.abs().max(1e-3 * gmax);
                assert!(rel <= 1e-5, "draw {draw} ({n},{m}): fd {fd} vs {analytic}");
            }
        }
    }
}

#[test]
fn objective_terms_are_nonnegative_and_scaled() {
    let mut r = rng(22);
    let g = TFGrid::new(12, 0.2).unwrap();
    let f = random_tfr(g, &mut r);
    let alpha = random_alpha(g.cols(), &mut r);
    let signal = SampledSignal::new(random_vec(g.cols(), &mut r), g.dt()).unwrap();
    let params = TycoonParams {
        lambda_tilde: 0.4,
        ..TycoonParams::default()
    };
    let terms = eval_h(&f, &alpha, &signal, &params, 2.0).unwrap();
    assert!(terms.data_term >= 0.0 && terms.transport_term >= 0.0);
    assert!(terms.l1_term >= 0.0 && terms.alpha_term >= 0.0);
    let l1: f64 = f.values().iter().map(|z| z.norm()).sum();
    let lambda = 2.0 * (1.0 - 0.4);
    assert!((terms.l1_term - lambda * g.dt() * g.dw() * l1).abs() < 1e-10 * terms.l1_term);
    let ridge = params.gamma * g.dt() * alpha.values().dot(alpha.values());
    assert!((terms.alpha_term - ridge).abs() < 1e-14);
    let sum = terms.data_term + terms.transport_term + terms.l1_term + terms.alpha_term;
    assert!((terms.total - sum).abs() < 1e-12 * sum);
}

#[test]
fn exact_representation_has_zero_data_term() {
    let g = TFGrid::new(10, 0.1).unwrap();
    let samples = ndarray::Array1::from_shape_fn(g.cols(), |m| (m as f64).sin());
    let signal = SampledSignal::new(samples.clone(), g.dt()).unwrap();
    let mut v = Array2::zeros(g.shape());
    for m in 0..g.cols() {
        v[[0, m]] = Complex64::new(samples[m] / (2.0 * g.dw()), 0.0);
    }
    let f = TFMatrix::from_values(g, v).unwrap();
    let terms = eval_h(&f, &ChirpTrack::zeros(g.cols()), &signal, &TycoonParams::default(), 1.0).unwrap();
    assert!(terms.data_term < 1e-24);
}

#[test]
fn prox_satisfies_subgradient_condition() {
    let mut r = rng(23);
    let g = TFGrid::new(199, 0.1).unwrap();
    assert!(g.rows() * g.cols() >= 10_000);
    let input = random_tfr(g, &mut r);
    for tau in [0.0, 0.3, 0.9] {
        let out = prox_l1(&input, tau).unwrap();
        for (x, p) in input.values().iter().zip(out.values()) {
            // x - p must lie in tau * subdifferential of |.| at p
            let diff = x - p;
            if p.norm() > 0.0 {
                assert!((diff - p / p.norm() * tau).norm() <= 1e-12);
            } else {
                assert!(diff.norm() <= tau + 1e-12);
            }
        }
    }
    assert!(prox_l1(&input, -1.0).is_err());
}

#[test]
fn schedule_resolution() {
    let v = log_space(1.0, 1e-4, 5).unwrap();
    for (a, b) in v.iter().zip([1.0, 1e-1, 1e-2, 1e-3, 1e-4]) {
        assert!((a / b - 1.0).abs() < 1e-12);
    }
    let signal = SampledSignal::new(ndarray::Array1::from_elem(11, 2.0), 0.5).unwrap();
    let energy = 0.5 * 4.0 * 11.0;
    let rel = MuSchedule::Relative { start: 1e-2, end: 1e-4, count: 3 }.resolve(&signal).unwrap();
    assert!((rel[0] - 1e-2 * energy).abs() < 1e-12 && (rel[2] - 1e-4 * energy).abs() < 1e-12);
    assert!(MuSchedule::Explicit(vec![1.0, 2.0]).resolve(&signal).is_err());
    assert!(MuSchedule::Explicit(vec![]).resolve(&signal).is_err());
}

#[test]
fn invalid_parameters_are_rejected() {
    let base = TycoonParams::default();
    assert!(base.validate().is_ok());
    for bad in [
        TycoonParams { lambda_tilde: 1.5, ..base.clone() },
        TycoonParams { gamma: 0.0, ..base.clone() },
        TycoonParams { eps1: 0.0, ..base.clone() },
        TycoonParams { power_iters: 5, ..base.clone() },
        TycoonParams { noise_std: Some(-1.0), ..base.clone() },
        TycoonParams { max_inner_iters: 0, ..base.clone() },
    ] {
        assert!(bad.validate().is_err());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn h_is_nonnegative(seed in 0u64..1_000_000, m in 4usize..20, lt in 0.0f64..=1.0, mt in 1e-6f64..10.0) {
        let mut r = rng(seed);
        let g = TFGrid::new(m, 0.1).unwrap();
        let f = random_tfr(g, &mut r);
        let alpha = random_alpha(g.cols(), &mut r);
        let signal = SampledSignal::new(random_vec(g.cols(), &mut r), g.dt()).unwrap();
        let params = TycoonParams { lambda_tilde: lt, ..TycoonParams::default() };
        let h = eval_h(&f, &alpha, &signal, &params, mt).unwrap();
        prop_assert!(h.total >= 0.0 && h.total.is_finite());
    }

    #[test]
    fn prox_shrinks_magnitude_and_keeps_phase(re in -5.0f64..5.0, im in -5.0f64..5.0, tau in 0.0f64..3.0) {
        let g = TFGrid::new(4, 1.0).unwrap();
        let mut v = Array2::zeros(g.shape());
        v[[1, 2]] = Complex64::new(re, im);
        let out = prox_l1(&TFMatrix::from_values(g, v).unwrap(), tau).unwrap();
        let z = out.values()[[1, 2]];
        let mag = Complex64::new(re, im).norm();
        prop_assert!((z.norm() - (mag - tau).max(0.0)).abs() < 1e-12);
        if z.norm() > 0.0 {
            prop_assert!((z / z.norm() - Complex64::new(re, im) / mag).norm() < 1e-9);
        }
    }
}
