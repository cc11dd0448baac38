use ipkit_core::detcore::{corr_det, corr_oracle_partitions, site_occupied};
use ipkit_core::kernels::*;
use ipkit_core::symcore::*;

/// Truncated Schur measure: weights s_λ(ρ1)s_λ(ρ2)/H(ρ1;ρ2) for |λ| ≤ m.
fn schur_measure(r1: &Specialization, r2: &Specialization, m: u32) -> Vec<(Partition, f64)> {
    let h = pair_h(r1, r2).unwrap();
    partitions_up_to(m, None).unwrap().into_iter().map(|l| {
        let w = schur_spec(&l, r1) * schur_spec(&l, r2) / h;
        (l, w)
    }).collect()
}

#[test]
fn trivial_second_specialization_gives_empty_diagram() {
    let r1 = Specialization::thoma(vec![0.3], vec![0.2], 0.4).unwrap();
    let r2 = Specialization::trivial();
    let pair = ContourPair::default_for(&r1, &r2).unwrap();
    assert!((schur_kernel(&r1, &r2, -1, -1, &pair).unwrap() - 1.0).abs() < 1e-12);
    assert!(schur_kernel(&r1, &r2, 0, 0, &pair).unwrap().abs() < 1e-12);
}

#[test]
fn plancherel_small_theta_against_enumeration() {
    let theta = 0.5;
    let g = Specialization::pure_gamma(theta).unwrap();
    let measure = schur_measure(&g, &g, 12);
    let pair = ContourPair::new(PLANCHEREL_INNER, PLANCHEREL_OUTER, 64);
    let w = plancherel_kernel_contour(theta, &[0, 1], &pair, 1e-12).unwrap();
    let oracle = corr_oracle_partitions(&measure, &[0]).unwrap();
    assert!((w.get(0, 0).unwrap() - oracle).abs() < 1e-8);
    // frozen oracle value; (1 − J_0(1)²)/2
    assert!((oracle - 0.2072362502431680).abs() < 1e-12);
    let k = w.to_kernel_matrix();
    let rho2 = corr_det(&k, &[0.5, 1.5]).unwrap();
    assert!((rho2 - corr_oracle_partitions(&measure, &[0, 1]).unwrap()).abs() < 1e-8);
    assert!(w.max_imag < 1e-9);
}

#[test]
fn plancherel_theta_to_zero() {
    let k = plancherel_kernel(1e-4, -1, -1).unwrap();
    assert!((k - 1.0).abs() < 1e-7);
}

#[test]
fn schur_kernel_matches_plancherel_under_gamma() {
    let g = Specialization::pure_gamma(0.5).unwrap();
    let pair = ContourPair::new(PLANCHEREL_INNER, PLANCHEREL_OUTER, 64);
    let sites = [-2, -1, 0, 1, 2];
    let a = schur_kernel_window(&g, &g, &sites, &pair, 1e-12).unwrap();
    let b = plancherel_kernel_contour(0.5, &sites, &pair, 1e-12).unwrap();
    let s = SeriesKernel::plancherel(0.5).unwrap();
    for &i in &sites {
        for &j in &sites {
            assert!((a.get(i, j).unwrap() - b.get(i, j).unwrap()).abs() < 1e-12);
            assert!((s.get(i, j) - b.get(i, j).unwrap()).abs() < 1e-12);
        }
    }
}

#[test]
fn general_schur_kernel_against_enumeration() {
    let r1 = Specialization::thoma(vec![0.35, 0.1], vec![0.2], 0.3).unwrap();
    let r2 = Specialization::thoma(vec![0.25], vec![0.3, 0.1], 0.2).unwrap();
    let measure = schur_measure(&r1, &r2, 22);
    let sites: Vec<i64> = (-3..=3).collect();
    let pair = ContourPair::default_for(&r1, &r2).unwrap();
    let w = schur_kernel_window(&r1, &r2, &sites, &pair, 1e-12).unwrap();
    let series = SeriesKernel::schur(&r1, &r2).unwrap();
    let k = w.to_kernel_matrix();
    for &i in &sites {
        assert!((w.get(i, i).unwrap() - series.get(i, i)).abs() < 1e-11);
        for &j in &sites {
            if i < j {
                // the kernel itself need not be symmetric, its 2x2 minors are fixed
                let r = corr_det(&k, &[site_value(i), site_value(j)]).unwrap();
                let o = corr_oracle_partitions(&measure, &[i, j]).unwrap();
                assert!((r - o).abs() < 1e-8, "{i} {j}: {r} {o}");
            }
        }
    }
}

#[test]
fn contour_radius_independence_and_doubling() {
    let r1 = Specialization::thoma(vec![0.3], vec![], 0.4).unwrap();
    let r2 = Specialization::thoma(vec![0.2], vec![0.1], 0.0).unwrap();
    let sites = [-2, 0, 1, 3];
    let a = schur_kernel_window(&r1, &r2, &sites, &ContourPair::new(0.5, 1.4, 64), 1e-12).unwrap();
    let b = schur_kernel_window(&r1, &r2, &sites, &ContourPair::new(0.8, 2.5, 64), 1e-12).unwrap();
    assert!(a.doubling_change <= 1e-9 && b.doubling_change <= 1e-9);
    for i in 0..sites.len() {
        for j in 0..sites.len() {
            assert!((a.values[i][j] - b.values[i][j]).abs() < 1e-9);
        }
    }
}

#[test]
fn contour_violation_rejected() {
    let r1 = Specialization::single_alpha(0.8).unwrap();
    let r2 = Specialization::single_alpha(0.5).unwrap();
    let bad = ContourPair::new(0.7, 1.1, 64);
    assert_eq!(schur_kernel(&r1, &r2, 0, 0, &bad).unwrap_err().code(), "validation");
    let few = ContourPair::new(0.9, 1.1, 32);
    assert!(schur_kernel(&r1, &r2, 0, 0, &few).is_err());
}

#[test]
fn density_bounds_and_limits() {
    for theta in [0.5, 3.0, 20.0] {
        let k = SeriesKernel::plancherel(theta).unwrap();
        for m in -60..60 {
            let d = k.get(m, m);
            assert!((-1e-12..=1.0 + 1e-12).contains(&d));
        }
        assert!((k.get(-60, -60) - 1.0).abs() < 1e-9);
        assert!(k.get(60, 60).abs() < 1e-9);
    }
    let lambda = Partition::new(vec![3, 1]).unwrap();
    assert!(site_occupied(&lambda, 2) && site_occupied(&lambda, -1) && !site_occupied(&lambda, 0));
}

#[test]
fn sine_examples() {
    use std::f64::consts::PI;
    assert_eq!(sine_kernel(PI / 2.0, 3, 3), 0.5);
    assert!((sine_kernel(PI / 2.0, 1, 0) - 1.0 / PI).abs() < 1e-15);
    assert!(sine_kernel(PI - 1e-12, 4, 1).abs() < 1e-12);
    assert!((sine_kernel(PI, 2, 2) - 1.0).abs() < 1e-15);
}

#[test]
fn airy_functions_against_series() {
    for i in 0..=90 {
        let x = -10.0 + 0.2 * i as f64;
        let (a, d) = airy_ai_pair(x);
        let (sa, sd) = airy_series(x);
        assert!((a - sa).abs() < 1e-13 && (d - sd).abs() < 1e-13, "x={x}");
    }
    // frozen reference values
    assert!((airy_ai(8.0) - 4.6922076160992316e-8).abs() < 1e-20);
    assert!((airy_ai_prime(-2.0) - 0.61825902074169104).abs() < 1e-14);
}

#[test]
fn airy_kernel_examples() {
    for (x, y) in [(0.3, -1.2), (2.0, 0.5), (-1.0, 1.0)] {
        assert!((airy_kernel(x, y).unwrap() - airy_kernel(y, x).unwrap()).abs() < 1e-9);
    }
    let (_, d0) = airy_series(0.0);
    assert!((airy_kernel(0.0, 0.0).unwrap() - d0 * d0).abs() < 1e-8);
    assert!(airy_kernel(5.0, 5.0).unwrap().abs() < 1e-6);
    for (x, y) in [(1.0, -1.0), (2.0, 2.0), (-3.0, 0.5)] {
        assert!((airy_kernel(x, y).unwrap() - airy_kernel_closed(x, y)).abs() < 1e-10);
    }
}

#[test]
fn bulk_limit() {
    let d = bulk_deviation(400.0, 0.0, 3).unwrap();
    assert!(d <= 0.02, "{d}");
    let k = SeriesKernel::plancherel(400.0).unwrap();
    assert!((k.get(0, 0) - 0.5).abs() < 0.01);
    for u in [-1.9, 1.9] {
        assert!(bulk_deviation(400.0, u, 3).unwrap().is_finite());
    }
    assert!(bulk_deviation(100.0, 0.0, 3).unwrap() >= d);
    assert!(bulk_deviation(5.0, 0.0, 3).is_err());
}

#[test]
fn edge_limit() {
    let d4 = edge_deviation(1e4, &[(0.0, 0.0)]).unwrap();
    assert!(d4 <= 0.02, "{d4}");
    let k = SeriesKernel::plancherel(1e4).unwrap();
    let s = edge_site(1e4, 6.0);
    assert!(1e4f64.cbrt() * k.get(s, s) <= 1e-4);
    assert!(airy_kernel(6.0, 6.0).unwrap() <= 1e-4);
    let pts = [(0.0, 0.0), (1.0, -1.0), (2.0, 2.0)];
    assert!(edge_deviation(1e4, &pts).unwrap() < edge_deviation(1e3, &pts).unwrap());
}
