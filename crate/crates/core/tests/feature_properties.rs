mod common;

use common::diagram;
use otto_tem::mlkit::{logreg_train_traced, roc_auc, Dataset, LogRegConfig, Row};
use otto_tem::ssm::ssm_features;
use otto_tem::vectorize::{
    persistence_image, persistence_silhouette, ImageGrid, PersistenceWeight,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

fn pairs(max: usize) -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec(
        (0.0f64..0.8, 0.001f64..0.6).prop_map(|(b, p)| (b, b + p)),
        0..=max,
    )
}

fn grid() -> ImageGrid {
    ImageGrid::new(40, 40, (0.0, 1.0), (0.0, 1.0), 0.02).unwrap()
}

fn weight() -> impl Strategy<Value = PersistenceWeight> {
    prop_oneof![
        Just(PersistenceWeight::Linear),
        Just(PersistenceWeight::Sqrt),
        Just(PersistenceWeight::Constant)
    ]
}

proptest! {
    #[test]
    fn vectorizations_are_additive(a in pairs(5), b in pairs(5), w in weight()) {
        let (da, db) = (diagram(&a), diagram(&b));
        let both = da.union(&db).unwrap();
        let g = grid();
        let (ia, ib, iu) = (
            persistence_image(&da, &g, w).unwrap(),
            persistence_image(&db, &g, w).unwrap(),
            persistence_image(&both, &g, w).unwrap(),
        );
        for k in 0..iu.pixels.len() {
            prop_assert!((iu.pixels[k] - ia.pixels[k] - ib.pixels[k]).abs() < 1e-12);
        }
        let dom = (0.0, 1.5);
        let (sa, sb, su) = (
            persistence_silhouette(&da, 100, dom).unwrap(),
            persistence_silhouette(&db, 100, dom).unwrap(),
            persistence_silhouette(&both, 100, dom).unwrap(),
        );
        for k in 0..100 {
            prop_assert!((su.values[k] - sa.values[k] - sb.values[k]).abs() < 1e-12);
        }
    }

    #[test]
    fn image_is_locally_stable(b in 0.05f64..0.9, p in 0.05f64..0.9, db in -1e-6f64..1e-6, dp in -1e-6f64..1e-6) {
        let g = grid();
        let i0 = persistence_image(&diagram(&[(b, b + p)]), &g, PersistenceWeight::Linear).unwrap();
        let i1 = persistence_image(&diagram(&[(b + db, b + db + p + dp)]), &g, PersistenceWeight::Linear).unwrap();
        let worst = i0.pixels.iter().zip(&i1.pixels).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
        prop_assert!(worst <= 1e-4);
    }

    #[test]
    fn silhouette_slope_is_bounded(a in pairs(6)) {
        let d = diagram(&a);
        let s = persistence_silhouette(&d, 100, (0.0, 1.5)).unwrap();
        let dx = 1.5 / 99.0;
        let bound: f64 = a.iter().map(|(b, d)| (d - b).sqrt()).sum::<f64>() * dx;
        for w in s.values.windows(2) {
            prop_assert!((w[1] - w[0]).abs() <= bound + 1e-12);
        }
    }

    #[test]
    fn images_scale_coherently(a in pairs(4)) {
        let g1 = ImageGrid::new(40, 40, (0.0, 1.0), (0.0, 1.0), 0.02).unwrap();
        let g2 = ImageGrid::new(40, 40, (0.0, 2.0), (0.0, 2.0), 0.04).unwrap();
        let doubled: Vec<(f64, f64)> = a.iter().map(|&(b, d)| (2.0 * b, 2.0 * d)).collect();
        let i1 = persistence_image(&diagram(&a), &g1, PersistenceWeight::Linear).unwrap();
        let i2 = persistence_image(&diagram(&doubled), &g2, PersistenceWeight::Linear).unwrap();
        // the linear weight doubles with persistence; the cell integrals are otherwise unchanged
        for k in 0..i1.pixels.len() {
            prop_assert!((i2.pixels[k] - 2.0 * i1.pixels[k]).abs() < 1e-12);
        }
    }

    #[test]
    fn ssm_scale_and_shift(c in 0.1f64..10.0, shift in -5.0f64..5.0, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x: Vec<f64> = (0..256).map(|_| StandardNormal.sample(&mut rng)).collect();
        let f = ssm_features(&x, 1.0).unwrap();
        let scaled = ssm_features(&x.iter().map(|v| c * v).collect::<Vec<_>>(), 1.0).unwrap();
        let rel = |a: f64, b: f64| (a - b).abs() <= 1e-9 * a.abs().max(b.abs()).max(1.0);
        prop_assert!(rel(scaled.std_dev, c * f.std_dev) && rel(scaled.peak_to_peak, c * f.peak_to_peak) && rel(scaled.rms, c * f.rms));
        prop_assert!(rel(scaled.skewness, f.skewness) && rel(scaled.kurtosis, f.kurtosis));
        prop_assert!(rel(scaled.spectral_centroid, f.spectral_centroid));
        let moved = ssm_features(&x.iter().map(|v| v + shift).collect::<Vec<_>>(), 1.0).unwrap();
        prop_assert!(rel(moved.std_dev, f.std_dev) && rel(moved.peak_to_peak, f.peak_to_peak));
        prop_assert!(rel(moved.skewness, f.skewness) && rel(moved.kurtosis, f.kurtosis));
    }

    #[test]
    fn auc_ignores_monotone_transforms(
        scores in prop::collection::vec(-3.0f64..3.0, 4..40),
        seed in any::<u64>(),
    ) {
        let labels: Vec<u8> = (0..scores.len()).map(|i| ((seed >> (i % 64)) & 1) as u8).collect();
        prop_assume!(labels.contains(&0) && labels.contains(&1));
        let auc = roc_auc(&scores, &labels).unwrap().auc;
        let warped: Vec<f64> = scores.iter().map(|s| (2.0 * s).exp() + s.powi(3)).collect();
        prop_assert!((roc_auc(&warped, &labels).unwrap().auc - auc).abs() < 1e-12);
        let flipped: Vec<f64> = scores.iter().map(|s| -s).collect();
        prop_assert!((roc_auc(&flipped, &labels).unwrap().auc + auc - 1.0).abs() < 1e-12);
        prop_assert!((0.0..=1.0).contains(&auc));
    }

    #[test]
    fn training_loss_never_increases(
        rows in prop::collection::vec((prop::collection::vec(-5.0f64..5.0, 3), 0u8..2), 6..40),
    ) {
        prop_assume!(rows.iter().any(|r| r.1 == 0) && rows.iter().any(|r| r.1 == 1));
        let data = Dataset::new(rows.into_iter().map(|(f, l)| Row { features: f, label: l, amplitude: 0.0 }).collect()).unwrap();
        let cfg = LogRegConfig { epochs: 100, ..Default::default() };
        let (_, trace) = logreg_train_traced(&data, &cfg).unwrap();
        for w in trace.losses.windows(2) {
            prop_assert!(w[1] <= w[0] + 1e-12);
        }
    }
}

#[test]
fn gaussian_moments() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let x: Vec<f64> = (0..100_000)
        .map(|_| StandardNormal.sample(&mut rng))
        .collect();
    let f = ssm_features(&x, 1.0).unwrap();
    assert!(f.skewness.abs() <= 0.05, "{}", f.skewness);
    assert!((2.9..=3.1).contains(&f.kurtosis), "{}", f.kurtosis);
}
