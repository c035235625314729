mod common;

use common::{rng, uniform_matrix};
use levy_nmf::separation::{rank1_components, wiener_separate, ComponentSet};
use levy_nmf::NonnegMatrix;
use proptest::prelude::*;

fn parts(seed: u64, rows: usize, cols: usize, k: usize, zero_some: bool) -> ComponentSet<f64> {
    let mut r = rng(seed);
    let lo = if zero_some { 0.0 } else { 1e-3 };
    ComponentSet::new((0..k).map(|_| uniform_matrix(&mut r, rows, cols, lo, 3.0)).collect()).unwrap()
}

fn scaled(set: &ComponentSet<f64>, c: f64) -> ComponentSet<f64> {
    ComponentSet::new(set.parts().iter().map(|p| p.map(|v| v * c).unwrap()).collect()).unwrap()
}

proptest! {
    #[test]
    fn estimates_add_up_to_the_mixture(seed in any::<u64>(), rows in 1usize..10, cols in 1usize..10, k in 1usize..5, zeros in any::<bool>()) {
        let x = uniform_matrix(&mut rng(seed ^ 1), rows, cols, 0.0, 10.0);
        let set = parts(seed, rows, cols, k, zeros);
        let est = wiener_separate(&x, &set, 1e-12).unwrap();
        for ((r, c), &xv) in x.as_array().indexed_iter() {
            let sum: f64 = est.iter().map(|e| e.get(r, c)).sum();
            prop_assert!((sum - xv).abs() <= 1e-12 * xv.max(1e-300) * k as f64);
            prop_assert!(est.iter().all(|e| e.get(r, c) >= 0.0));
        }
    }

    #[test]
    fn common_rescaling_leaves_estimates_alone(seed in any::<u64>(), c in 1e-6f64..1e6) {
        let x = uniform_matrix(&mut rng(seed ^ 2), 4, 5, 0.0, 10.0);
        let set = parts(seed, 4, 5, 3, false);
        let a = wiener_separate(&x, &set, 1e-12).unwrap();
        let b = wiener_separate(&x, &scaled(&set, c), 1e-12).unwrap();
        for (ea, eb) in a.iter().zip(&b) {
            for (u, v) in ea.iter().zip(eb.iter()) {
                prop_assert!((u - v).abs() <= 1e-12 * u.abs().max(1e-300));
            }
        }
    }

    #[test]
    fn growing_a_part_never_shrinks_its_estimate(seed in any::<u64>(), boost in 1.0f64..100.0) {
        let x = uniform_matrix(&mut rng(seed ^ 3), 3, 3, 0.0, 10.0);
        let set = parts(seed, 3, 3, 3, false);
        let mut grown = set.parts().to_vec();
        grown[0] = grown[0].map(|v| v * boost).unwrap();
        let before = wiener_separate(&x, &set, 1e-12).unwrap();
        let after = wiener_separate(&x, &ComponentSet::new(grown).unwrap(), 1e-12).unwrap();
        for (b, a) in before[0].iter().zip(after[0].iter()) {
            prop_assert!(a >= b * (1.0 - 1e-15));
        }
    }
}

#[test]
fn rank1_parts_rebuild_the_product() {
    let mut r = rng(5);
    let f = common::random_factors(&mut r, 6, 4, 3);
    let set = rank1_components(&f);
    assert_eq!(set.len(), 3);
    let total = set.total();
    let product = f.product();
    for (a, b) in total.iter().zip(product.iter()) {
        assert!((a - b).abs() <= 1e-12 * b);
    }
    let x: NonnegMatrix<f64> = f.product();
    let est = wiener_separate(&x, &set, 1e-12).unwrap();
    for (e, p) in est.iter().zip(set.parts()) {
        for (u, v) in e.iter().zip(p.iter()) {
            assert!((u - v).abs() <= 1e-12 * v);
        }
    }
}
