use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use seqppi::classifier::{train_model, SvmParams};
use seqppi::evaluation::*;
use seqppi::features::{FeatureMatrix, FeatureVector};
use seqppi::scales::ScaleVariant;
use seqppi::sequences::{InteractionRecord, Label, ProteinId};

fn lab(bit: bool) -> Label {
    if bit {
        Label::Interacting
    } else {
        Label::NonInteracting
    }
}

fn div(a: usize, b: usize) -> Option<f64> {
    (b > 0).then(|| a as f64 / b as f64)
}

#[test]
fn exhaustive_metrics_oracle() {
    let mut checked = 0;
    for len in 1..=6usize {
        for pm in 0u32..(1 << len) {
            for lm in 0u32..(1 << len) {
                let preds: Vec<Label> = (0..len).map(|i| lab(pm >> i & 1 == 1)).collect();
                let truth: Vec<Label> = (0..len).map(|i| lab(lm >> i & 1 == 1)).collect();
                let (mut tp, mut fp, mut fn_, mut tn) = (0, 0, 0, 0);
                for i in 0..len {
                    match (pm >> i & 1, lm >> i & 1) {
                        (1, 1) => tp += 1,
                        (1, 0) => fp += 1,
                        (0, 1) => fn_ += 1,
                        _ => tn += 1,
                    }
                }
                let cm = confusion(&preds, &truth).unwrap();
                assert_eq!((cm.tp, cm.fp, cm.fn_, cm.tn), (tp, fp, fn_, tn));
                assert_eq!(cm.total(), len);

                let m = metrics(&cm);
                let p = div(tp, tp + fp);
                let r = div(tp, tp + fn_);
                assert_eq!(m.precision, p);
                assert_eq!(m.recall, r);
                assert_eq!(m.accuracy, div(tp + tn, len));
                match (p, r) {
                    (Some(p), Some(r)) if p + r > 0.0 => {
                        let f = m.f1.unwrap();
                        assert!((f - 2.0 * p * r / (p + r)).abs() <= 1e-12);
                    }
                    (Some(_), Some(_)) => assert_eq!(m.f1, Some(0.0)),
                    _ => assert_eq!(m.f1, None),
                }

                let flipped: Vec<Label> = preds.iter().map(|&l| lab(!l.is_positive())).collect();
                let cf = confusion(&flipped, &truth).unwrap();
                assert_eq!(cf, cm.with_flipped_predictions());
                assert_eq!((cf.tp, cf.fn_, cf.fp, cf.tn), (cm.fn_, cm.tp, cm.tn, cm.fp));
                checked += 1;
            }
        }
    }
    assert_eq!(checked, (1..=6).map(|l| 1usize << (2 * l)).sum::<usize>());
}

#[test]
fn worked_confusion_example() {
    let b = |v: &[u8]| v.iter().map(|&x| Label::from_u8(x).unwrap()).collect::<Vec<_>>();
    let cm = confusion(&b(&[1, 1, 1, 0, 0, 1, 0, 0, 0, 0]), &b(&[1, 1, 1, 1, 1, 0, 0, 0, 0, 0])).unwrap();
    assert_eq!((cm.tp, cm.fn_, cm.fp, cm.tn), (3, 2, 1, 4));
    let m = metrics(&cm);
    assert!((m.precision.unwrap() - 0.75).abs() < 1e-15);
    assert!((m.recall.unwrap() - 0.6).abs() < 1e-15);
    assert!((m.accuracy.unwrap() - 0.7).abs() < 1e-15);
    assert!((m.f1.unwrap() - 2.0 / 3.0).abs() < 1e-12);
}

#[test]
fn published_c1_row_is_self_consistent() {
    // precision 0.667 and recall 0.623 round to an F1 of 0.644
    let f = f1_score(0.667, 0.623);
    assert!((f - 0.6443).abs() <= 0.0015, "{f}");
}

#[test]
fn confusion_rejects_bad_input() {
    assert!(matches!(confusion(&[], &[]), Err(EvalError::Empty)));
    assert!(matches!(
        confusion(&[Label::Interacting], &[]),
        Err(EvalError::LengthMismatch { .. })
    ));
}

#[test]
fn summary_skips_undefined_values() {
    let s = MetricSummary::from_values([Some(0.5), None, Some(1.0), None]);
    assert_eq!(s.defined, 2);
    assert_eq!(s.undefined, 2);
    assert_eq!(s.mean, Some(0.75));
    assert_eq!(s.std, Some(0.25));
    let empty = MetricSummary::from_values([None, None]);
    assert_eq!((empty.mean, empty.std, empty.undefined), (None, None, 2));
}

fn arb_labels() -> impl Strategy<Value = (Vec<Label>, usize)> {
    (2usize..8, 0usize..40, 0usize..40).prop_flat_map(|(k, extra_pos, extra_neg)| {
        let n_pos = k + extra_pos;
        let n_neg = k + extra_neg;
        let base: Vec<Label> = std::iter::repeat(Label::Interacting)
            .take(n_pos)
            .chain(std::iter::repeat(Label::NonInteracting).take(n_neg))
            .collect();
        (Just(base).prop_shuffle(), Just(k))
    })
}

proptest! {
    #[test]
    fn folds_partition_and_stratify((labels, k) in arb_labels(), seed in any::<u64>()) {
        let folds = stratified_folds(&labels, k, seed).unwrap();
        prop_assert_eq!(folds.len(), k);
        let mut all: Vec<usize> = folds.iter().flatten().copied().collect();
        all.sort_unstable();
        prop_assert_eq!(all, (0..labels.len()).collect::<Vec<_>>());
        for class in [Label::Interacting, Label::NonInteracting] {
            let sizes: Vec<usize> = folds
                .iter()
                .map(|f| f.iter().filter(|&&i| labels[i] == class).count())
                .collect();
            prop_assert!(sizes.iter().max().unwrap() - sizes.iter().min().unwrap() <= 1);
        }
        for f in &folds {
            prop_assert!(f.windows(2).all(|w| w[0] < w[1]));
        }
        prop_assert_eq!(&folds, &stratified_folds(&labels, k, seed).unwrap());
    }

    #[test]
    fn infeasible_k_is_an_error((labels, _) in arb_labels()) {
        let n_pos = labels.iter().filter(|l| l.is_positive()).count();
        let n_neg = labels.len() - n_pos;
        let k = n_pos.min(n_neg) + 1;
        prop_assert!(matches!(stratified_folds(&labels, k, 0), Err(EvalError::InvalidK { .. })), "expected InvalidK");
        prop_assert!(matches!(stratified_folds(&labels, 1, 0), Err(EvalError::InvalidK { .. })), "expected InvalidK");
    }
}

#[test]
fn ten_folds_of_a_balanced_4000() {
    let labels: Vec<Label> = (0..4000).map(|i| lab(i % 2 == 0)).collect();
    for f in stratified_folds(&labels, 10, 3).unwrap() {
        assert_eq!(f.len(), 400);
        assert_eq!(f.iter().filter(|&&i| labels[i].is_positive()).count(), 200);
    }
    let tiny = [Label::Interacting, Label::NonInteracting, Label::Interacting, Label::NonInteracting];
    for f in stratified_folds(&tiny, 2, 9).unwrap() {
        assert_eq!(f.len(), 2);
        assert_eq!(f.iter().filter(|&&i| tiny[i].is_positive()).count(), 1);
    }
}

/// Balanced blobs whose class means differ by `sep` standard deviations in
/// every component, with component offsets so standardizing matters.
fn blobs(n_per_class: usize, sep: f64, seed: u64) -> FeatureMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let noise = Normal::new(0.0, 1.0).unwrap();
    let mut rows = Vec::new();
    for i in 0..2 * n_per_class {
        let positive = i % 2 == 0;
        let mut v = [0.0; 14];
        for (k, x) in v.iter_mut().enumerate() {
            let centre = if positive { sep / 2.0 } else { -sep / 2.0 };
            *x = 10.0 * k as f64 + centre + noise.sample(&mut rng);
        }
        let rec = InteractionRecord::new(
            ProteinId::new(format!("a{i}")).unwrap(),
            ProteinId::new(format!("b{i}")).unwrap(),
            lab(positive),
        );
        rows.push((rec, FeatureVector::new(v)));
    }
    FeatureMatrix { rows }
}

fn params(seed: u64) -> SvmParams {
    SvmParams { epochs: 50, seed, ..Default::default() }
}

#[test]
fn cv_standardizer_sees_only_training_rows() {
    let m = blobs(60, 1.0, 11);
    let report = kfold_cv(&m, 5, 4, &params(4), true, ScaleVariant::PaperVerbatim).unwrap();
    let labels: Vec<Label> = m.labels().collect();
    let folds = stratified_folds(&labels, 5, 4).unwrap();
    let global: Vec<f64> = (0..14)
        .map(|k| m.vectors().map(|v| v.as_slice()[k]).sum::<f64>() / m.len() as f64)
        .collect();
    for (fold, test) in report.folds.iter().zip(&folds) {
        assert_eq!(fold.test_rows, test.len());
        assert_eq!(fold.train_rows + fold.test_rows, m.len());
        let train: Vec<usize> = (0..m.len()).filter(|i| !test.contains(i)).collect();
        for k in 0..14 {
            let mean = train.iter().map(|&i| m.rows[i].1.as_slice()[k]).sum::<f64>() / train.len() as f64;
            assert!((fold.standardizer_means[k] - mean).abs() <= 1e-9 * mean.abs().max(1.0));
        }
        assert!(fold.standardizer_means.iter().zip(&global).any(|(a, b)| a != b));
        assert_eq!(fold.confusion.total(), test.len());
    }
}

#[test]
fn cv_is_deterministic_and_summarises_folds() {
    let m = blobs(50, 1.5, 2);
    let a = kfold_cv(&m, 10, 7, &params(7), true, ScaleVariant::CorrectedY).unwrap();
    let b = kfold_cv(&m, 10, 7, &params(7), true, ScaleVariant::CorrectedY).unwrap();
    assert_eq!(a, b);
    let acc: Vec<f64> = a.folds.iter().map(|f| f.metrics.accuracy.unwrap()).collect();
    let mean = acc.iter().sum::<f64>() / acc.len() as f64;
    assert!((a.summary.accuracy.mean.unwrap() - mean).abs() < 1e-12);
    assert_eq!(a.summary.accuracy.defined, 10);
    for f in &a.folds {
        if let (Some(p), Some(r), Some(f1)) = (f.metrics.precision, f.metrics.recall, f.metrics.f1) {
            if p + r > 0.0 {
                assert!((f1 - 2.0 * p * r / (p + r)).abs() <= 1e-12);
            }
        }
    }
}

#[test]
fn separable_blobs_cross_validate_well() {
    let m = blobs(100, 6.0, 5);
    let report = kfold_cv(&m, 10, 1, &params(1), true, ScaleVariant::PaperVerbatim).unwrap();
    let cv_acc = report.summary.accuracy.mean.unwrap();
    assert!(cv_acc >= 0.95, "cv accuracy {cv_acc}");

    // a model fit on everything does at least as well on its own data
    let labels: Vec<Label> = m.labels().collect();
    let model = train_model(&m, &params(1), true, ScaleVariant::PaperVerbatim).unwrap();
    let preds: Vec<Label> = m.vectors().map(|v| model.predict(v.as_slice()).unwrap()).collect();
    let full = metrics(&confusion(&preds, &labels).unwrap()).accuracy.unwrap();
    assert!(full >= 0.95, "full-fit accuracy {full}");
}

#[test]
fn cv_rejects_too_many_folds() {
    let m = blobs(3, 1.0, 0);
    let err = kfold_cv(&m, 4, 0, &params(0), true, ScaleVariant::PaperVerbatim).unwrap_err();
    assert!(matches!(err, EvalError::InvalidK { k: 4, .. }));
}

#[test]
fn table_marks_undefined_metrics() {
    let undefined = metrics(&ConfusionMatrix { tp: 0, fp: 0, fn_: 0, tn: 3 });
    let perfect = metrics(&ConfusionMatrix { tp: 2, fp: 0, fn_: 0, tn: 2 });
    let text = render_metrics_table(&[("C1".into(), perfect), ("C3".into(), undefined)]);
    assert!(text.contains("1.0000"));
    assert!(text.contains("undefined"));
}
