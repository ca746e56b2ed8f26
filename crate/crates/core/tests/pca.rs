use codecid::pca::{pca_fit, pca_transform, Retain, Standardizer};
use proptest::prelude::*;

fn matrix() -> impl Strategy<Value = Vec<Vec<f64>>> {
    (3usize..30, 1usize..6).prop_flat_map(|(n, f)| prop::collection::vec(prop::collection::vec(-100.0f64..100.0, f), n))
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

proptest! {
    #[test]
    fn components_are_orthonormal(x in matrix()) {
        let m = pca_fit(&x).unwrap();
        for i in 0..m.components.len() {
            for j in 0..m.components.len() {
                let want = if i == j { 1.0 } else { 0.0 };
                prop_assert!((dot(&m.components[i], &m.components[j]) - want).abs() < 1e-9);
            }
        }
        for w in m.explained_variance.windows(2) {
            prop_assert!(w[0] >= w[1]);
        }
    }

    #[test]
    fn projections_are_centred_and_uncorrelated(x in matrix()) {
        let m = pca_fit(&x).unwrap();
        let f = m.input_dim();
        let y = pca_transform(&x, &m, Retain::Components(f)).unwrap();
        let n = y.len() as f64;
        let scale = m.explained_variance[0].max(1.0);
        for a in 0..f {
            let mean = y.iter().map(|r| r[a]).sum::<f64>() / n;
            prop_assert!(mean.abs() < 1e-9 * scale.sqrt().max(1.0));
            for b in 0..f {
                let cov = y.iter().map(|r| r[a] * r[b]).sum::<f64>() / (n - 1.0);
                let want = if a == b { m.explained_variance[a] } else { 0.0 };
                prop_assert!((cov - want).abs() < 1e-8 * scale);
            }
        }
        let centre = m.project_row(&m.feature_means, f).unwrap();
        prop_assert!(centre.iter().all(|v| v.abs() < 1e-9));
    }

    #[test]
    fn reconstruction_error_nonincreasing_in_k(x in matrix()) {
        let m = pca_fit(&x).unwrap();
        let f = m.input_dim();
        let mut prev = f64::INFINITY;
        for k in 1..=f {
            let err: f64 = x
                .iter()
                .map(|r| {
                    let rec = m.reconstruct_row(&m.project_row(r, k).unwrap());
                    r.iter().zip(&rec).map(|(a, b)| (a - b).powi(2)).sum::<f64>()
                })
                .sum();
            prop_assert!(err <= prev + 1e-6 * (1.0 + prev.min(1e12)));
            prev = err;
        }
        prop_assert!(prev < 1e-6 * x.len() as f64 * 1e4);
    }

    #[test]
    fn row_order_invariant(x in matrix(), rot in 0usize..30) {
        let mut y = x.clone();
        let r = rot % y.len();
        y.rotate_left(r);
        let a = pca_fit(&x).unwrap();
        let b = pca_fit(&y).unwrap();
        for (u, v) in a.explained_variance.iter().zip(&b.explained_variance) {
            prop_assert!((u - v).abs() < 1e-7 * (1.0 + u.abs()));
        }
    }

    #[test]
    fn standardized_columns(x in matrix()) {
        let s = Standardizer::fit(&x).unwrap();
        let z = s.transform(&x).unwrap();
        let n = z.len() as f64;
        for j in 0..s.output_dim() {
            let mean = z.iter().map(|r| r[j]).sum::<f64>() / n;
            let var = z.iter().map(|r| (r[j] - mean).powi(2)).sum::<f64>() / n;
            prop_assert!(mean.abs() < 1e-9);
            prop_assert!((var - 1.0).abs() < 1e-9);
        }
    }
}

#[test]
fn collinear_pair_keeps_one_component() {
    let x: Vec<Vec<f64>> = (0..50).map(|i| vec![i as f64 * 0.5, i as f64 * 0.5 + 3.0]).collect();
    let m = pca_fit(&x).unwrap();
    assert_eq!(m.n_components(Retain::VarianceFraction(0.95)).unwrap(), 1);
    assert_eq!(m.n_components(Retain::VarianceFraction(1.0)).unwrap(), 2);
}
