use curvboot::dataset::DesignMatrix;
use curvboot::ols::{confidence_interval, fit};
use curvboot::stats::dot;
use proptest::prelude::*;

fn design(n: usize, seed: &[f64]) -> (DesignMatrix<f64>, Vec<f64>) {
    // Deterministic well-spread regressors built from the proptest values.
    let rows: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            let t = i as f64 / n as f64;
            let s = seed[i % seed.len()];
            vec![t * 10.0 + s, (t * 7.0).sin() * 3.0 + 0.1 * s, (i % 3) as f64 + s * s * 0.01]
        })
        .collect();
    let y = rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            // Fixed pattern keeps the residual variance away from zero.
            let noise = ((i * 37) % 11) as f64 - 5.0;
            2.0 + 1.5 * r[0] - 0.7 * r[1] + 0.3 * r[2] + noise + seed[(i * 7) % seed.len()]
        })
        .collect();
    (DesignMatrix::from_regressors(&rows, &["x1", "x2", "x3"]).unwrap(), y)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn residuals_orthogonal_to_columns(seed in proptest::collection::vec(-5.0f64..5.0, 5..30), n in 12usize..80) {
        let (x, y) = design(n, &seed);
        let f = fit(&x, &y).unwrap();
        let scale = y.iter().map(|v| v.abs()).fold(1.0, f64::max) * n as f64;
        for j in 0..x.cols() {
            let col = x.column(j);
            let col_scale = col.iter().map(|v| v.abs()).fold(1.0, f64::max);
            prop_assert!(dot(&f.residuals, &col).abs() <= 1e-9 * scale * col_scale);
        }
    }

    #[test]
    fn fit_passes_through_centroid(seed in proptest::collection::vec(-5.0f64..5.0, 5..30), n in 12usize..80) {
        let (x, y) = design(n, &seed);
        let f = fit(&x, &y).unwrap();
        let mean_y = y.iter().sum::<f64>() / n as f64;
        let pred: f64 = (0..x.cols())
            .map(|j| f.coefficients[j] * x.column(j).iter().sum::<f64>() / n as f64)
            .sum();
        prop_assert!((pred - mean_y).abs() <= 1e-9 * mean_y.abs().max(1.0));
    }

    #[test]
    fn response_scaling_scales_coefficients(seed in proptest::collection::vec(-5.0f64..5.0, 5..30), n in 12usize..80, c in 0.01f64..100.0, shift in -50.0f64..50.0) {
        let (x, y) = design(n, &seed);
        let base = fit(&x, &y).unwrap();
        let ys: Vec<f64> = y.iter().map(|v| c * v + shift).collect();
        let scaled = fit(&x, &ys).unwrap();
        for j in 0..x.cols() {
            let expect = c * base.coefficients[j] + if j == 0 { shift } else { 0.0 };
            prop_assert!((scaled.coefficients[j] - expect).abs() <= 1e-8 * expect.abs().max(c));
            if j > 0 {
                // t statistics and R² are invariant to affine response changes.
                prop_assert!((scaled.t_stats[j] - base.t_stats[j]).abs() <= 1e-7 * base.t_stats[j].abs().max(1.0));
            }
        }
        prop_assert!((scaled.r2 - base.r2).abs() <= 1e-9);
    }

    #[test]
    fn regressor_scaling_inverts_coefficient(seed in proptest::collection::vec(-5.0f64..5.0, 5..30), n in 12usize..80, c in 0.01f64..100.0) {
        let (x, y) = design(n, &seed);
        let base = fit(&x, &y).unwrap();
        let rows: Vec<Vec<f64>> = (0..n).map(|i| {
            let r = x.row(i);
            vec![c * r[1], r[2], r[3]]
        }).collect();
        let xs = DesignMatrix::from_regressors(&rows, &["x1", "x2", "x3"]).unwrap();
        let scaled = fit(&xs, &y).unwrap();
        let expect = base.coefficients[1] / c;
        prop_assert!((scaled.coefficients[1] - expect).abs() <= 1e-8 * expect.abs().max(1e-6));
        let a = confidence_interval(&base, 1, 0.95).unwrap();
        let b = confidence_interval(&scaled, 1, 0.95).unwrap();
        prop_assert!((b.width() * c - a.width()).abs() <= 1e-7 * a.width());
    }

    #[test]
    fn single_precision_tracks_double(seed in proptest::collection::vec(-5.0f64..5.0, 5..30), n in 20usize..60) {
        let (x, y) = design(n, &seed);
        let f64fit = fit(&x, &y).unwrap();
        let x32 = x.cast::<f32>();
        let y32: Vec<f32> = y.iter().map(|&v| v as f32).collect();
        let f32fit = fit(&x32, &y32).unwrap();
        let scale = f64fit.coefficients.iter().map(|v| v.abs()).fold(1.0, f64::max);
        for (a, b) in f64fit.coefficients.iter().zip(&f32fit.coefficients) {
            prop_assert!((a - *b as f64).abs() <= 1e-2 * scale);
        }
    }
}
