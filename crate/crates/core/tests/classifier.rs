use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use seqppi::classifier::svm::{self, objective, objective_subgradient, Samples};
use seqppi::classifier::{LinearModel, Standardizer, SvmParams};
use seqppi::scales::ScaleVariant;

fn random_problem(seed: u64, n: usize, dim: usize) -> (Vec<Vec<f64>>, Vec<bool>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rows: Vec<Vec<f64>> = (0..n)
        .map(|_| (0..dim).map(|_| rng.gen_range(-3.0..3.0)).collect())
        .collect();
    let mut labels: Vec<bool> = (0..n).map(|_| rng.gen()).collect();
    labels[0] = true;
    labels[1] = false;
    (rows, labels)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn subgradient_matches_finite_differences(
        seed in any::<u64>(),
        n in 2usize..12,
        dim in 1usize..5,
        c in 0.01f64..10.0,
    ) {
        let (rows, labels) = random_problem(seed, n, dim);
        let s = Samples::new(&rows, &labels).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        let w: Vec<f64> = (0..dim).map(|_| rng.gen_range(-2.0..2.0)).collect();
        let b: f64 = rng.gen_range(-1.0..1.0);
        // the hinge is not differentiable where a margin equals 1
        let near_kink = (0..n).any(|i| {
            let m = s.target(i) * (w.iter().zip(s.row(i)).map(|(a, x)| a * x).sum::<f64>() + b);
            (m - 1.0).abs() < 1e-3
        });
        prop_assume!(!near_kink);

        let (gw, gb) = objective_subgradient(&w, b, &s, c);
        let h = 1e-6;
        let rel = |num: f64, g: f64| (num - g).abs() / g.abs().max(1.0);
        for k in 0..dim {
            let (mut wp, mut wm) = (w.clone(), w.clone());
            wp[k] += h;
            wm[k] -= h;
            let num = (objective(&wp, b, &s, c) - objective(&wm, b, &s, c)) / (2.0 * h);
            prop_assert!(rel(num, gw[k]) < 1e-5, "w[{}]: {} vs {}", k, num, gw[k]);
        }
        let num = (objective(&w, b + h, &s, c) - objective(&w, b - h, &s, c)) / (2.0 * h);
        prop_assert!(rel(num, gb) < 1e-5, "b: {} vs {}", num, gb);
    }

    #[test]
    fn epochs_never_increase_the_objective(seed in any::<u64>(), n in 4usize..40, c in 0.1f64..10.0) {
        let (rows, labels) = random_problem(seed, n, 3);
        let s = Samples::new(&rows, &labels).unwrap();
        let params = SvmParams { c, epochs: 60, tol: 0.0, seed };
        let fit = svm::train(&s, &params).unwrap();
        let j0 = objective(&[0.0; 3], 0.0, &s, c);
        for pair in fit.objective_history.windows(2) {
            prop_assert!(pair[1] <= pair[0] + 1e-6 * j0, "{} -> {}", pair[0], pair[1]);
        }
    }

    #[test]
    fn flipping_labels_negates_the_model(seed in any::<u64>(), n in 2usize..30) {
        let (rows, labels) = random_problem(seed, n, 4);
        let s = Samples::new(&rows, &labels).unwrap();
        let params = SvmParams { epochs: 50, seed, ..Default::default() };
        let a = svm::train(&s, &params).unwrap();
        let b = svm::train(&s.with_flipped_labels(), &params).unwrap();
        for (x, y) in a.weights.iter().zip(&b.weights) {
            prop_assert!((x + y).abs() <= 1e-9);
        }
        prop_assert!((a.bias + b.bias).abs() <= 1e-9);
    }

    #[test]
    fn training_is_deterministic(seed in any::<u64>()) {
        let (rows, labels) = random_problem(seed, 25, 3);
        let params = SvmParams { epochs: 30, seed, ..Default::default() };
        let a = LinearModel::fit(&rows, &labels, &params, true, ScaleVariant::PaperVerbatim).unwrap();
        let b = LinearModel::fit(&rows, &labels, &params, true, ScaleVariant::PaperVerbatim).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn standardized_training_columns_are_centered(seed in any::<u64>(), n in 1usize..60) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rows: Vec<Vec<f64>> = (0..n)
            .map(|_| vec![rng.gen_range(-1e3..1e3), rng.gen_range(0.0..1e-3), 7.5])
            .collect();
        let st = Standardizer::fit(&rows).unwrap();
        let z: Vec<Vec<f64>> = rows.iter().map(|r| st.apply(r)).collect();
        for k in 0..3 {
            let mean = z.iter().map(|r| r[k]).sum::<f64>() / n as f64;
            prop_assert!(mean.abs() < 1e-9);
            let var = z.iter().map(|r| (r[k] - mean).powi(2)).sum::<f64>() / n as f64;
            let constant = rows.iter().all(|r| r[k] == rows[0][k]);
            if constant {
                prop_assert!(z.iter().all(|r| r[k] == 0.0));
            } else {
                prop_assert!((var.sqrt() - 1.0).abs() < 1e-9);
            }
        }
    }
}

#[test]
fn separable_data_is_fit_without_hinge_loss() {
    for seed in 0..10u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut rows = Vec::new();
        let mut labels = Vec::new();
        for i in 0..20 {
            let pos = i % 2 == 0;
            let x0: f64 = rng.gen_range(0.5..2.0) * if pos { 1.0 } else { -1.0 };
            rows.push(vec![x0, rng.gen_range(-2.0..2.0)]);
            labels.push(pos);
        }
        let s = Samples::new(&rows, &labels).unwrap();
        let fit = svm::train(&s, &SvmParams { c: 100.0, seed, ..Default::default() }).unwrap();
        let hinge = svm::mean_hinge_loss(&fit.weights, fit.bias, &s);
        assert!(hinge < 1e-3, "seed {seed}: mean hinge {hinge}");
    }
}

fn trained_model(standardize: bool) -> (LinearModel, Vec<Vec<f64>>) {
    let (rows, labels) = random_problem(99, 40, 14);
    let rows: Vec<Vec<f64>> = rows
        .into_iter()
        .enumerate()
        .map(|(i, r)| r.into_iter().map(|x| x * (1.0 + i as f64) + 10.0).collect())
        .collect();
    let params = SvmParams { epochs: 40, seed: 5, ..Default::default() };
    let m = LinearModel::fit(&rows, &labels, &params, standardize, ScaleVariant::CorrectedY).unwrap();
    (m, rows)
}

#[test]
fn decision_matches_direct_dot_product() {
    for standardize in [true, false] {
        let (m, rows) = trained_model(standardize);
        for x in &rows {
            let mut oracle = m.bias;
            for k in 0..x.len() {
                oracle += m.weights[k] * (x[k] - m.standardizer.means()[k]) / m.standardizer.stds()[k];
            }
            let d = m.decision(x).unwrap();
            assert!((d - oracle).abs() <= 1e-12 * oracle.abs().max(1.0));
        }
    }
}

#[test]
fn reloaded_model_gives_identical_decisions() {
    let (m, _) = trained_model(true);
    let mut buf = Vec::new();
    m.save(&mut buf).unwrap();
    let back = LinearModel::load(buf.as_slice()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..50 {
        let x: Vec<f64> = (0..14).map(|_| rng.gen_range(-50.0..50.0)).collect();
        assert_eq!(m.decision(&x).unwrap().to_bits(), back.decision(&x).unwrap().to_bits());
    }
    // saving the reloaded model reproduces the file byte for byte
    let mut again = Vec::new();
    back.save(&mut again).unwrap();
    assert_eq!(buf, again);
}
