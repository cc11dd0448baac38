use ipkit_core::fredholm::{q_laplace_det, q_pochhammer_inf_real, ZetaKernelSpec};
use ipkit_core::macdonald::*;
use ipkit_core::samplers::{qtasep_run, smallest_row};
use ipkit_core::symcore::*;
use ipkit_core::RngStream;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::Rng;
use std::collections::HashMap;

fn part(rows: &[u32]) -> Partition {
    Partition::new(rows.to_vec()).unwrap()
}

fn qt(q: f64, t: f64) -> QTParams {
    QTParams::new(q, t).unwrap()
}

/// Kostka number by peeling horizontal strips of sizes μ_last, …, μ_1.
fn kostka(lambda: &Partition, mu: &Partition) -> u64 {
    if mu.is_empty() {
        return lambda.is_empty() as u64;
    }
    let k = mu.rows()[mu.len() - 1];
    let rest = Partition::new(mu.rows()[..mu.len() - 1].to_vec()).unwrap();
    subpartitions_of(lambda)
        .into_iter()
        .filter(|nu| lambda.size() - nu.size() == k && lambda.is_horizontal_strip_over(nu))
        .map(|nu| kostka(&nu, &rest))
        .sum()
}

fn z_from_multiplicities(lambda: &Partition) -> f64 {
    let mut counts: HashMap<u32, u32> = HashMap::new();
    for &r in lambda.rows() {
        *counts.entry(r).or_default() += 1;
    }
    counts.iter().map(|(&i, &m)| (i as f64).powi(m as i32) * (1..=m).product::<u32>() as f64).product()
}

fn random_point(n: usize, rng: &mut RngStream) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(0.2..2.0)).collect()
}

#[test]
fn params_validation() {
    assert!(QTParams::new(0.0, 0.5).is_err());
    assert!(QTParams::new(1.0, 0.5).is_err());
    assert!(QTParams::new(0.5, 1.0).is_err());
    assert!(QTParams::new(0.5, -0.1).is_err());
    assert!(QTParams::new(0.5, 0.0).unwrap().is_whittaker());
}

#[test]
fn scalar_product_examples() {
    let p = qt(0.3, 0.6);
    assert_eq!(qt_inner(&part(&[2]), &part(&[1, 1]), &p), 0.0);
    assert!((qt_inner(&part(&[1]), &part(&[1]), &p) - 0.7 / 0.4).abs() < 1e-15);
    let l = part(&[2, 1, 1]);
    assert_eq!(z_from_multiplicities(&l), 4.0);
    let want = 4.0 * (1.0 - 0.09) / (1.0 - 0.36) * (0.7 / 0.4f64).powi(2);
    assert!((qt_inner(&l, &l, &p) - want).abs() < 1e-13);
    for l in partitions_up_to(8, None).unwrap() {
        assert_eq!(l.z(), z_from_multiplicities(&l));
    }
}

#[test]
fn p_of_one_box_is_p1() {
    for (q, t) in [(0.2, 0.7), (0.5, 0.0), (0.9, 0.1)] {
        let p = macdonald_P(&part(&[1]), 3, &qt(q, t)).unwrap();
        assert_eq!(p.power.len(), 1);
        assert!((p.power[&part(&[1])] - 1.0).abs() < 1e-15);
    }
}

#[test]
fn two_box_closed_form() {
    let (q, t) = (0.3, 0.5);
    let p = macdonald_P(&part(&[2]), 2, &qt(q, t)).unwrap();
    let c = (1.0 + q) * (1.0 - t) / (1.0 - q * t);
    assert!((p.monomial[&part(&[2])] - 1.0).abs() < 1e-13);
    assert!((p.monomial[&part(&[1, 1])] - c).abs() < 1e-13);
}

#[test]
fn schur_at_q_equal_t() {
    let p = macdonald_P(&part(&[2, 1]), 3, &qt(0.37, 0.37)).unwrap();
    assert!((p.monomial[&part(&[2, 1])] - 1.0).abs() < 1e-12);
    assert!((p.monomial[&part(&[1, 1, 1])] - 2.0).abs() < 1e-12);
    assert_eq!(p.monomial.len(), 2);
    for l in partitions_up_to(7, None).unwrap() {
        let n = l.len().clamp(1, 5);
        let p = macdonald_P(&l, n, &qt(0.61, 0.61)).unwrap();
        for mu in partitions_of(l.size(), Some(n)).unwrap() {
            let got = p.monomial.get(&mu).copied().unwrap_or(0.0);
            assert!((got - kostka(&l, &mu) as f64).abs() < 1e-10, "{l} {mu}: {got}");
        }
    }
}

#[test]
fn evaluation_matches_schur_at_q_equal_t() {
    let mut rng = RngStream::new(5);
    for l in partitions_up_to(5, Some(3)).unwrap() {
        let p = macdonald_P(&l, 3, &qt(0.45, 0.45)).unwrap();
        let x = random_point(3, &mut rng);
        let want: f64 = schur_eval(&l, &x);
        assert!((p.eval(&x).unwrap() - want).abs() < 1e-10 * want.abs().max(1.0));
    }
}

#[test]
fn orthogonality_and_triangularity() {
    let params = qt(0.3, 0.5);
    let a = macdonald_P(&part(&[2]), 2, &params).unwrap();
    let b = macdonald_P(&part(&[1, 1]), 2, &params).unwrap();
    assert!(a.inner(&b).abs() <= 1e-12);
    for n in 1..=6 {
        let ps: Vec<MacPoly> =
            partitions_of(n, None).unwrap().iter().map(|l| macdonald_P(l, 5, &params).unwrap()).collect();
        for (i, p) in ps.iter().enumerate() {
            for r in &ps[..i] {
                assert!(p.inner(r).abs() <= 1e-10, "{} {}", p.lambda, r.lambda);
            }
            for (mu, c) in &p.monomial {
                if c.abs() > 1e-12 {
                    assert!(mu.dominated_by(&p.lambda), "{mu} not below {}", p.lambda);
                }
            }
            if p.lambda.len() <= 5 {
                assert!((p.monomial[&p.lambda] - 1.0).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn budget_limits() {
    assert!(matches!(macdonald_P(&part(&[9]), 2, &qt(0.3, 0.5)), Err(ipkit_core::Error::Budget(_))));
    assert!(matches!(macdonald_P(&part(&[2]), 6, &qt(0.3, 0.5)), Err(ipkit_core::Error::Budget(_))));
}

#[test]
fn d1_on_constants() {
    for n in 1..=4 {
        let p = qt(0.4, 0.3);
        let x: Vec<f64> = (0..n).map(|i| 1.0 + 0.3 * i as f64).collect();
        let v = apply_d1(&|_| 1.0, &p, &x).unwrap();
        let want = (1.0 - 0.3f64.powi(n as i32)) / 0.7;
        assert!((v - want).abs() < 1e-12);
        assert!((apply_d1(&|_| 1.0, &qt(0.4, 0.0), &x).unwrap() - 1.0).abs() < 1e-12);
    }
    assert!((d1_eigenvalue(&Partition::empty(), 3, &qt(0.4, 0.0)) - 1.0).abs() < 1e-15);
}

#[test]
fn eigenrelation_residuals() {
    let mut rng = RngStream::new(9);
    let p = qt(0.35, 0.55);
    for _ in 0..20 {
        let x = random_point(2, &mut rng);
        assert!(eigen_check(&part(&[1]), 2, &p, &x).unwrap() <= 1e-9);
    }
    for n in 1..=3 {
        for l in partitions_up_to(4, Some(n)).unwrap() {
            for params in [p, qt(0.6, 0.0), qt(0.2, 0.8)] {
                let x = random_point(n, &mut rng);
                let r = eigen_check(&l, n, &params, &x).unwrap();
                assert!(r <= 1e-9, "{l} N={n}: {r}");
            }
        }
    }
}

#[test]
fn eigenrelation_at_coincident_point() {
    let r = eigen_check(&part(&[2, 1]), 3, &qt(0.35, 0.55), &[0.7, 0.7, 1.3]).unwrap();
    assert!(r <= 1e-6, "{r}");
}

#[test]
fn pair_kernel_examples() {
    let p = qt(0.3, 0.6);
    let r = Specialization::thoma(vec![0.4, 0.2], vec![0.1], 0.3).unwrap();
    assert_eq!(qt_pair_h(&r, &Specialization::trivial(), &p).unwrap(), 1.0);
    let r2 = Specialization::thoma(vec![0.5], vec![0.3], 0.2).unwrap();
    let schur = pair_h(&r, &r2).unwrap();
    assert!((qt_pair_h(&r, &r2, &qt(0.45, 0.45)).unwrap() - schur).abs() <= 1e-12 * schur);
    // product form for α variables
    let (x, y) = ([0.4, 0.2], [0.5, 0.3]);
    let mut want = 1.0;
    for a in x {
        for b in y {
            want *= q_pochhammer_inf_real(0.6 * a * b, 0.3) / q_pochhammer_inf_real(a * b, 0.3);
        }
    }
    let got = qt_pair_h(&Specialization::finite(x.to_vec()).unwrap(), &Specialization::finite(y.to_vec()).unwrap(), &p)
        .unwrap();
    assert!((got - want).abs() < 1e-13 * want);
    assert!(qt_pair_h(&Specialization::ones(1), &Specialization::ones(1), &p).is_err());
}

#[test]
fn whittaker_plancherel_normalizer() {
    let (n, tau) = (2usize, 0.3);
    let p = qt(0.4, 0.0);
    let rho = macdonald_plancherel(tau, &p).unwrap();
    let h = qt_pair_h(&Specialization::ones(n), &rho, &p).unwrap();
    assert!((h - (n as f64 * tau).exp()).abs() < 1e-13);
    // Σ_λ P_λ(1^N) Q_λ(ρ) over |λ| ≤ 8
    let mut s = 0.0;
    for l in partitions_up_to(8, Some(n)).unwrap() {
        let pl = macdonald_P(&l, n, &p).unwrap();
        let g = rho.gamma();
        let qv = pl.b() * pl.eval_power_sums(|k| if k == 1 { g } else { 0.0 });
        s += pl.eval(&vec![1.0; n]).unwrap() * qv;
    }
    // the dropped λ have |λ| > 8, which has Poisson(Nτ) weight ≈ 1.6e-8
    assert!((s - h).abs() < 1e-7, "{s} vs {h}");
}

#[test]
fn cauchy_identity_single_variables() {
    let p = qt(0.3, 0.6);
    let (x, y) = (0.5, 0.4);
    let mut s = 0.0;
    for n in 0..=8 {
        let pl = macdonald_P(&Partition::row(n), 1, &p).unwrap();
        let py = macdonald_P(&Partition::row(n), 1, &p).unwrap();
        s += pl.eval(&[x]).unwrap() * py.b() * py.eval(&[y]).unwrap();
    }
    let want = q_pochhammer_inf_real(0.6 * x * y, 0.3) / q_pochhammer_inf_real(x * y, 0.3);
    // dropped terms are O((xy)^9)
    assert!((s - want).abs() < 10.0 * (x * y).powi(9), "{s} vs {want}");
}

#[test]
fn whittaker_closed_forms_match_gram_schmidt() {
    let q = 0.45;
    let p = qt(q, 0.0);
    let tau = 0.7;
    for n in 1..=3usize {
        let ones = qw_p_ones_table(n, 6, q);
        let qtab = qw_plancherel_q_table(n, 6, tau, q);
        for l in partitions_up_to(6, Some(n)).unwrap() {
            let pl = macdonald_P(&l, n, &p).unwrap();
            let direct = pl.eval(&vec![1.0; n]).unwrap();
            assert!((ones[&l] - direct).abs() < 1e-10 * direct.max(1.0), "{l}");
            assert!((qw_b(&l, q) - pl.b()).abs() < 1e-10 * pl.b());
            let g = tau * (1.0 - q);
            let qv = pl.b() * pl.eval_power_sums(|k| if k == 1 { g } else { 0.0 });
            assert!((qtab[&l] - qv).abs() < 1e-12, "{l}: {} vs {qv}", qtab[&l]);
            assert_eq!(qw_p_ones(&l, n, q), ones[&l]);
        }
    }
    // branching against the two-variable polynomial
    assert!((qw_branching(&part(&[2]), &part(&[1]), q) - (1.0 + q)).abs() < 1e-15);
    assert_eq!(qw_branching(&part(&[2]), &part(&[3]), q), 0.0);
    assert!((q_binomial(4, 2, q) - (1.0 + q * q) * (1.0 + q + q * q)).abs() < 1e-14);
}

#[test]
fn oracle_examples() {
    let p = qt(0.4, 0.0);
    for (n, tau) in [(1usize, 0.5), (2, 0.5), (3, 0.8)] {
        let one = macdonald_expectation_oracle(&|_| 1.0, n, &p, tau, 40).unwrap();
        assert!((one.value - 1.0).abs() <= one.tail_bound + 1e-12, "{}", one.value);
        let empty = macdonald_expectation_oracle(&|l| l.is_empty() as u8 as f64, n, &p, tau, 40).unwrap();
        assert!((empty.value - (-(n as f64) * tau).exp()).abs() < 1e-15);
    }
    let tau = 0.5;
    let m = macdonald_expectation_oracle(&|l| 0.4f64.powi(l.part(0) as i32), 1, &p, tau, 40).unwrap();
    assert!((m.value - (-0.6 * tau).exp()).abs() < 1e-8);
    assert!(macdonald_expectation_oracle(&|_| 1.0, 1, &qt(0.4, 0.2), tau, 40).is_err());
    assert!(matches!(
        macdonald_expectation_oracle(&|_| 1.0, 2, &p, 5.0, 10),
        Err(ipkit_core::Error::Budget(_))
    ));
}

fn oracle_moment(k: i32, n: usize, q: f64, tau: f64) -> f64 {
    macdonald_expectation_oracle(&|l| q.powi(k * l.part(n - 1) as i32), n, &qt(q, 0.0), tau, 40).unwrap().value
}

#[test]
fn q_moment_examples() {
    for (q, tau) in [(0.4, 0.3), (0.5, 0.5), (0.8, 2.0)] {
        let m = q_moment(1, 1, &qt(q, 0.0), tau).unwrap();
        assert!((m - ((q - 1.0) * tau).exp()).abs() < 1e-10);
    }
    for k in 1..=3 {
        for n in 1..=3 {
            assert!((q_moment(k, n, &qt(0.5, 0.0), 0.0).unwrap() - 1.0).abs() < 1e-10);
        }
    }
    let got = q_moment(1, 2, &qt(0.5, 0.0), 0.5).unwrap();
    assert!((got - oracle_moment(1, 2, 0.5, 0.5)).abs() <= 1e-6, "{got}");
}

#[test]
fn higher_moments_match_oracle() {
    for (k, n, q, tau) in [(2usize, 2usize, 0.5, 0.5), (2, 3, 0.6, 0.4), (3, 2, 0.5, 0.3)] {
        let got = q_moment(k, n, &qt(q, 0.0), tau).unwrap();
        let want = oracle_moment(k as i32, n, q, tau);
        assert!((got - want).abs() <= 1e-6, "k={k} N={n}: {got} vs {want}");
    }
}

#[test]
fn q_moment_monotone() {
    let p = qt(0.5, 0.0);
    for n in 1..=2 {
        let mut last_tau = f64::INFINITY;
        for i in 0..6 {
            let tau = 0.25 * i as f64;
            let m = q_moment(1, n, &p, tau).unwrap();
            assert!(m <= last_tau + 1e-12);
            last_tau = m;
            let mut last_k = f64::INFINITY;
            for k in 1..=3 {
                let v = q_moment(k, n, &p, tau).unwrap();
                assert!(v > 0.0 && v <= last_k + 1e-12);
                last_k = v;
            }
        }
    }
}

#[test]
fn q_moment_radius_independence() {
    let p = qt(0.5, 0.0);
    let base = NestedContourSpec::default_for(2, 0.5);
    let a = q_moment_with(2, 2, &p, 0.5, &base).unwrap();
    let mut moved = base.clone();
    moved.radii[0] = 0.5 * (moved.radii[0] + 0.95);
    moved.radii[1] *= 0.8;
    let b = q_moment_with(2, 2, &p, 0.5, &moved).unwrap();
    assert!((a - b).abs() <= 1e-8);
    let bad = NestedContourSpec { radii: vec![0.3, 0.25], nodes: vec![32, 32] };
    assert!(q_moment_with(2, 2, &p, 0.5, &bad).is_err());
    assert!(q_moment(1, 1, &qt(0.5, 0.3), 0.5).is_err());
}

#[test]
fn q_laplace_matches_oracle() {
    for (n, q, tau, zeta) in [(1usize, 0.4f64, 0.5, -1.0), (2, 0.5, 0.5, -1.0), (2, 0.4, 0.8, -2.5)] {
        let want = macdonald_expectation_oracle(
            &|l| 1.0 / q_pochhammer_inf_real(zeta * q.powi(l.part(n - 1) as i32), q),
            n,
            &qt(q, 0.0),
            tau,
            40,
        )
        .unwrap()
        .value;
        let got = q_laplace_det(&ZetaKernelSpec::new(Complex64::new(zeta, 0.0), q, tau, n)).unwrap();
        assert!((got.re - want).abs() <= 1e-4, "N={n}: {got} vs {want}");
    }
}

#[test]
fn qtasep_smallest_row_moment() {
    let (n, q, tau) = (2usize, 0.5, 0.5);
    let runs = 1_000_000;
    let root = RngStream::new(2024);
    let mut sum = 0.0;
    let mut sq = 0.0;
    for r in 0..runs {
        let tr = qtasep_run(n, q, tau, &mut root.split(r)).unwrap();
        let v = q.powi(smallest_row(&tr.last) as i32);
        sum += v;
        sq += v * v;
    }
    let mean = sum / runs as f64;
    let sd = ((sq / runs as f64 - mean * mean) / runs as f64).sqrt();
    let want = q_moment(1, n, &qt(q, 0.0), tau).unwrap();
    assert!((mean - want).abs() <= 3.0 * sd, "{mean} vs {want} (sd {sd})");
}

#[test]
fn oy_polymer_examples() {
    let root = RngStream::new(77);
    let one = oy_polymer_mc(1, 1.0, 200_000, &root).unwrap();
    assert!((one.mean - 0.5f64.exp()).abs() <= 3.0 * one.stderr, "{one:?}");
    let two = oy_polymer_mc(2, 1.0, 200_000, &root.split(1)).unwrap();
    assert!((two.mean - 0.5f64.exp()).abs() <= 3.0 * two.stderr, "{two:?}");
    let three = oy_polymer_mc(3, 2.0, 200_000, &root.split(2)).unwrap();
    assert!((three.mean - 2.0 * 1f64.exp()).abs() <= 3.0 * three.stderr, "{three:?}");
    let tiny = oy_polymer_mc(3, 1e-6, 1000, &root).unwrap();
    assert!(tiny.mean < 1e-11);
    assert!(oy_polymer_mc(11, 1.0, 10, &root).is_err());
    assert!(oy_polymer_mc(2, 6.0, 10, &root).is_err());
}

#[test]
fn oy_polymer_thread_independent() {
    let root = RngStream::new(3);
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| oy_polymer_mc(4, 1.5, 5000, &root).unwrap())
    };
    assert_eq!(run(1), run(4));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn eigenrelation_random(q in 0.05f64..0.95, t in 0.0f64..0.95, seed in 0u64..1000) {
        let mut rng = RngStream::new(seed);
        let x = random_point(3, &mut rng);
        for l in [part(&[2, 1]), part(&[3]), part(&[1, 1, 1])] {
            prop_assert!(eigen_check(&l, 3, &qt(q, t), &x).unwrap() <= 1e-8);
        }
    }

    #[test]
    fn oracle_normalized(q in 0.05f64..0.95, tau in 0.0f64..1.5, n in 1usize..4) {
        let o = macdonald_expectation_oracle(&|_| 1.0, n, &qt(q, 0.0), tau, 30).unwrap();
        prop_assert!((o.value - 1.0).abs() <= o.tail_bound + 1e-11);
    }
}
