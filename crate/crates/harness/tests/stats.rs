use ipkit::stats::*;
use ipkit_core::fredholm::tw2_cdf;
use ipkit_core::samplers::sample_plancherel;
use ipkit_core::symcore::Partition;
use ipkit_core::RngStream;
use proptest::prelude::*;
use rand::Rng;

fn logistic(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

#[test]
fn ks_of_own_distribution_is_small() {
    let mut rng = RngStream::new(5);
    let xs: Vec<f64> = (0..10_000).map(|_| {
        let u: f64 = rng.random_range(1e-12..1.0);
        (u / (1.0 - u)).ln()
    }).collect();
    let d = ks_distance(&EmpiricalCDF::new(xs).unwrap(), &logistic).unwrap();
    assert!(d <= 0.03, "{d}");
}

#[test]
fn ks_single_sample_at_median() {
    let e = EmpiricalCDF::new(vec![0.0]).unwrap();
    assert!((ks_distance(&e, &logistic).unwrap() - 0.5).abs() < 1e-15);
}

#[test]
fn ks_rejects_empty_and_bad_cdfs() {
    let empty = EmpiricalCDF::new(vec![]).unwrap();
    assert!(empty.is_empty());
    assert!(ks_distance(&empty, &logistic).is_err());
    let e = EmpiricalCDF::new(vec![0.0, 1.0, 2.0]).unwrap();
    assert!(ks_distance(&e, &|x| -logistic(x)).is_err());
    assert!(ks_distance(&e, &|x| 1.0 - logistic(x)).is_err());
    assert!(EmpiricalCDF::new(vec![0.0, f64::NAN]).is_err());
}

#[test]
fn empirical_cdf_steps() {
    let e = EmpiricalCDF::new(vec![3.0, 1.0, 2.0, 2.0]).unwrap();
    assert_eq!(e.values(), [1.0, 2.0, 2.0, 3.0]);
    assert_eq!(e.eval(0.5), 0.0);
    assert_eq!(e.eval(2.0), 0.75);
    assert_eq!(e.eval(10.0), 1.0);
}

#[test]
fn empty_diagram_profile_is_a_step() {
    let us = [-0.5, -0.1, 0.1, 0.5];
    let p = limit_shape_profile(&Partition::empty(), 100.0, &us, 0.05).unwrap();
    assert_eq!(p, [1.0, 1.0, 0.0, 0.0]);
    assert!(limit_shape_profile(&Partition::empty(), 10.0, &us, 0.05).is_err());
}

#[test]
fn limit_curve_values() {
    assert!(vkls_density(-1.99) >= 0.95);
    assert!((vkls_density(-1.99) - 0.968).abs() < 1e-3);
    assert_eq!(vkls_density(0.0), 0.5);
    assert_eq!(vkls_density(3.0), 0.0);
}

#[test]
fn edge_statistic_examples() {
    assert_eq!(edge_statistic(&Partition::row(800), 400.0), 0.0);
    assert!((edge_statistic(&Partition::row(815), 400.0) - 2.0358).abs() < 1e-3);
}

#[test]
fn profile_of_one_large_sample_near_curve() {
    let theta = 60.0;
    let l = sample_plancherel(theta, &mut RngStream::new(9)).unwrap();
    let us: Vec<f64> = (-15..=15).map(|i| i as f64 * 0.1).collect();
    let p = limit_shape_profile(&l, theta, &us, 0.1).unwrap();
    for (u, d) in us.iter().zip(p) {
        assert!((d - vkls_density(*u)).abs() < 0.2, "u={u}: {d}");
    }
}

#[test]
fn mean_and_stderr() {
    let (m, s) = mean_stderr(&[1.0, 2.0, 3.0, 4.0]);
    assert_eq!(m, 2.5);
    assert!((s - (5.0f64 / 12.0).sqrt()).abs() < 1e-15);
}

#[test]
fn ks_against_tracy_widom_of_a_shifted_sample_is_large() {
    let xs: Vec<f64> = (0..200).map(|i| 3.0 + i as f64 * 0.01).collect();
    let d = ks_distance(&EmpiricalCDF::new(xs).unwrap(), &|x| tw2_cdf(x).unwrap()).unwrap();
    assert!(d > 0.9);
}

proptest! {
    #[test]
    fn ks_is_order_independent(mut xs in proptest::collection::vec(-5.0f64..5.0, 1..50), seed in 0u64..100) {
        let a = ks_distance(&EmpiricalCDF::new(xs.clone()).unwrap(), &logistic).unwrap();
        let mut rng = RngStream::new(seed);
        for i in (1..xs.len()).rev() {
            xs.swap(i, rng.random_range(0..=i));
        }
        let b = ks_distance(&EmpiricalCDF::new(xs).unwrap(), &logistic).unwrap();
        prop_assert_eq!(a, b);
        prop_assert!((0.0..=1.0).contains(&a));
    }

    #[test]
    fn mean_is_order_independent(xs in proptest::collection::vec(-5.0f64..5.0, 2..50)) {
        let (m, s) = mean_stderr(&xs);
        let mut r = xs.clone();
        r.reverse();
        let (m2, s2) = mean_stderr(&r);
        prop_assert!((m - m2).abs() < 1e-12 && (s - s2).abs() < 1e-12);
    }
}
