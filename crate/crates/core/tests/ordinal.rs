mod common;

use common::{irls_logistic, sample_cumulative_logit};
use noisy_channel::analysis::{fit_cumulative_logit, CumulativeLogit, DesignRow, FitOptions, Predictor};
use noisy_channel::error::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn names(k: usize) -> Vec<String> {
    (0..k).map(|i| format!("x{i}")).collect()
}

fn model(n: usize, thresholds: &[f64], beta: &[f64], seed: u64) -> CumulativeLogit {
    let s = sample_cumulative_logit(n, thresholds, beta, seed);
    CumulativeLogit::new(&s.responses, s.x, names(beta.len())).unwrap()
}

#[test]
fn gradient_matches_central_differences() {
    let m = model(400, &[-1.5, -0.3, 0.6, 1.8], &[0.7, -0.4, 0.2], 1);
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let h = 1e-5;
    for _ in 0..20 {
        let params: Vec<f64> = (0..m.n_params()).map(|_| rng.random_range(-1.0..1.0)).collect();
        let analytic = m.gradient(&params);
        let numeric: Vec<f64> = (0..params.len())
            .map(|j| {
                let mut up = params.clone();
                let mut down = params.clone();
                up[j] += h;
                down[j] -= h;
                (m.log_likelihood(&up) - m.log_likelihood(&down)) / (2.0 * h)
            })
            .collect();
        let diff: f64 = analytic
            .iter()
            .zip(&numeric)
            .map(|(a, b)| (a - b).powi(2))
            .sum::<f64>()
            .sqrt();
        let norm: f64 = analytic.iter().map(|a| a * a).sum::<f64>().sqrt();
        assert!(diff / norm < 1e-4, "relative error {}", diff / norm);
    }
}

#[test]
fn binary_case_is_logistic_regression() {
    let s = sample_cumulative_logit(800, &[0.3], &[1.1, -0.6], 3);
    let m = CumulativeLogit::new(&s.responses, s.x.clone(), names(2)).unwrap();
    let fit = m.fit(&FitOptions::default()).unwrap();
    assert!(fit.converged);
    // P(Y = 1) = sigmoid(theta - x . beta): intercept theta, slopes -beta
    let y: Vec<bool> = s.responses.iter().map(|r| *r == 1).collect();
    let w = irls_logistic(&y, &s.x);
    assert!((fit.thresholds[0] - w[0]).abs() < 1e-4);
    assert!((fit.coefficient("x0").unwrap() + w[1]).abs() < 1e-4);
    assert!((fit.coefficient("x1").unwrap() + w[2]).abs() < 1e-4);
}

#[test]
fn recovers_generating_parameters() {
    let thresholds = [-2.4, -1.3, -0.4, 0.5, 1.4, 2.5];
    let beta = [0.8, -0.5, 0.3];
    let fit = model(5000, &thresholds, &beta, 4).fit(&FitOptions::default()).unwrap();
    assert!(fit.converged);
    for (name, truth) in names(3).iter().zip(beta) {
        let got = fit.coefficient(name).unwrap();
        assert!((got - truth).abs() < 0.1, "{name}: {got} vs {truth}");
    }
    for (got, truth) in fit.thresholds.iter().zip(thresholds) {
        assert!((got - truth).abs() < 0.15);
    }
    assert!(fit.thresholds.windows(2).all(|w| w[0] < w[1]));
    assert!(fit.log_likelihood <= 0.0);
}

#[test]
fn negating_a_predictor_negates_its_coefficient() {
    let s = sample_cumulative_logit(600, &[-1.0, 0.0, 1.2], &[0.9, 0.4], 5);
    let flipped: Vec<Vec<f64>> = s.x.iter().map(|r| vec![-r[0], r[1]]).collect();
    let a = CumulativeLogit::new(&s.responses, s.x.clone(), names(2))
        .unwrap()
        .fit(&FitOptions::default())
        .unwrap();
    let b = CumulativeLogit::new(&s.responses, flipped, names(2))
        .unwrap()
        .fit(&FitOptions::default())
        .unwrap();
    assert!((a.coefficient("x0").unwrap() + b.coefficient("x0").unwrap()).abs() < 1e-6);
    assert!((a.coefficient("x1").unwrap() - b.coefficient("x1").unwrap()).abs() < 1e-6);
    assert!((a.log_likelihood - b.log_likelihood).abs() < 1e-6);
}

fn design(n: usize, seed: u64) -> Vec<DesignRow> {
    let s = sample_cumulative_logit(n, &[-2.0, -1.0, 0.0, 0.8, 1.6, 2.6], &[0.3, 0.1, 0.6, -0.1, 0.4], seed);
    s.responses
        .iter()
        .zip(&s.x)
        .enumerate()
        .map(|(i, (r, x))| DesignRow {
            response: *r,
            slor_z: x[0],
            order_z: x[1],
            baseline_z: x[2],
            fmax_z: x[3],
            fmean_z: x[4],
            participant_id: format!("p{}", i % 20),
        })
        .collect()
}

#[test]
fn nested_models_do_not_lose_likelihood() {
    let d = design(1500, 6);
    let base = [Predictor::Slor, Predictor::Order, Predictor::Baseline];
    let small = fit_cumulative_logit(&d, &base, &FitOptions::default()).unwrap();
    let mut more = base.to_vec();
    more.push(Predictor::FMean);
    let large = fit_cumulative_logit(&d, &more, &FitOptions::default()).unwrap();
    assert!(large.log_likelihood >= small.log_likelihood - 1e-6);
    assert_eq!(small.data_fingerprint, large.data_fingerprint);
    assert!(large.coefficient("fmean").unwrap() > 0.0);
}

#[test]
fn too_few_rows_for_the_parameter_count() {
    let d = design(60, 7);
    let err = fit_cumulative_logit(&d, &Predictor::ALL, &FitOptions::default()).unwrap_err();
    assert!(matches!(err, Error::InsufficientData(_)), "{err}");
}

#[test]
fn iteration_cap_reports_non_convergence() {
    let d = design(500, 8);
    let options = FitOptions {
        max_iterations: 2,
        ..FitOptions::default()
    };
    let fit = fit_cumulative_logit(&d, &Predictor::ALL, &options).unwrap();
    assert!(!fit.converged);
    assert!(fit.grad_norm >= options.gradient_tolerance);
}
