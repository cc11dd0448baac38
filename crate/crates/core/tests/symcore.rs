use ipkit_core::symcore::*;
use num_bigint::BigUint;
use proptest::prelude::*;

fn p(rows: &[u32]) -> Partition {
    Partition::new(rows.to_vec()).unwrap()
}

/// Standard tableaux counted by filling boxes one at a time.
fn count_standard(lambda: &Partition) -> u64 {
    fn go(shape: &mut Vec<u32>, target: &[u32]) -> u64 {
        if shape.as_slice() == target {
            return 1;
        }
        let mut total = 0;
        for i in 0..target.len() {
            let ok_row = shape[i] < target[i];
            let ok_col = i == 0 || shape[i - 1] > shape[i];
            if ok_row && ok_col {
                shape[i] += 1;
                total += go(shape, target);
                shape[i] -= 1;
            }
        }
        total
    }
    go(&mut vec![0; lambda.len()], lambda.rows())
}

/// Semistandard tableaux with entries ≤ n, by brute-force filling in reading order.
fn count_semistandard(lambda: &Partition, n: u32) -> u64 {
    let cells: Vec<(usize, usize)> =
        (0..lambda.len()).flat_map(|r| (0..lambda.part(r) as usize).map(move |c| (r, c))).collect();
    let mut t = vec![vec![0u32; lambda.first() as usize]; lambda.len()];
    fn go(k: usize, cells: &[(usize, usize)], t: &mut Vec<Vec<u32>>, n: u32) -> u64 {
        if k == cells.len() {
            return 1;
        }
        let (r, c) = cells[k];
        let lo_row = if c > 0 { t[r][c - 1] } else { 1 };
        let lo_col = if r > 0 { t[r - 1][c] + 1 } else { 1 };
        let mut total = 0;
        for v in lo_row.max(lo_col)..=n {
            t[r][c] = v;
            total += go(k + 1, cells, t, n);
        }
        total
    }
    go(0, &cells, &mut t, n)
}

#[test]
fn schur_examples() {
    assert!((schur_eval(&p(&[1]), &[2.5, -1.0]) - 1.5).abs() < 1e-15);
    assert!((schur_eval(&p(&[2, 1]), &[1.0, 1.0]) - count_semistandard(&p(&[2, 1]), 2) as f64).abs() < 1e-12);
    assert_eq!(schur_eval(&Partition::empty(), &[0.1, 7.0, 2.0]), 1.0);
}

#[test]
fn dim_matches_enumeration() {
    for n in 0..=8 {
        for l in partitions_of(n, None).unwrap() {
            assert_eq!(dim_std(&l), BigUint::from(count_standard(&l)), "{l}");
            for nv in 1..=3 {
                assert_eq!(dim_ssyt(&l, nv), BigUint::from(count_semistandard(&l, nv)), "{l} N={nv}");
            }
        }
    }
}

#[test]
fn dim_ssyt_matches_schur_at_ones() {
    for l in partitions_up_to(6, Some(4)).unwrap() {
        let v = schur_jacobi_trudi(&l, &[1.0; 4]);
        let exact: f64 = dim_ssyt(&l, 4).to_string().parse().unwrap();
        assert!((v - exact).abs() < 1e-9 * exact.max(1.0));
    }
}

#[test]
fn burnside_small() {
    for n in 1..=8u32 {
        let s: BigUint = partitions_of(n, None).unwrap().iter().map(|l| dim_std(l).pow(2)).sum();
        assert_eq!(s, factorial(n));
    }
}

#[test]
fn cauchy_identity_truncation() {
    let (x, y) = (0.5, 0.5);
    let sx = Specialization::single_alpha(x).unwrap();
    let sy = Specialization::single_alpha(y).unwrap();
    let exact = pair_h(&sx, &sy).unwrap();
    for m in [5u32, 10, 20] {
        let s: f64 = partitions_up_to(m, None).unwrap().iter().map(|l| schur_spec(l, &sx) * schur_spec(l, &sy)).sum();
        let bound = (x * y).powi(m as i32 + 1) / (1.0 - x * y);
        assert!((exact - s).abs() <= bound * 1.0001 + 1e-15, "M={m}");
    }
    assert!((exact - 4.0 / 3.0).abs() < 1e-15);
}

#[test]
fn skew_cauchy_identity() {
    // Σ_λ s_{λ/μ}(a) s_{λ/ν}(b) = H(a;b) Σ_κ s_{μ/κ}(b) s_{ν/κ}(a)
    let a = Specialization::single_alpha(0.3).unwrap();
    let b = Specialization::single_alpha(0.4).unwrap();
    let h = pair_h(&a, &b).unwrap();
    let small = partitions_up_to(4, None).unwrap();
    let big = partitions_up_to(30, None).unwrap();
    for mu in &small {
        for nu in &small {
            let lhs: f64 = big.iter().map(|l| skew_schur_spec(l, mu, &a) * skew_schur_spec(l, nu, &b)).sum();
            let rhs: f64 = small.iter().map(|k| skew_schur_spec(mu, k, &b) * skew_schur_spec(nu, k, &a)).sum::<f64>() * h;
            assert!((lhs - rhs).abs() <= 1e-8, "{mu} {nu}: {lhs} {rhs}");
        }
    }
}

#[test]
fn branching_rule_exact() {
    let x = Specialization::finite(vec![0.7, 0.2]).unwrap();
    let y = Specialization::finite(vec![0.5]).unwrap();
    let xy = x.union(&y);
    let all = partitions_up_to(6, None).unwrap();
    for l in &all {
        for m in all.iter().filter(|m| l.contains(m)) {
            let direct = skew_schur_spec(l, m, &xy);
            let split: f64 = all.iter().map(|n| skew_schur_spec(l, n, &x) * skew_schur_spec(n, m, &y)).sum();
            assert!((direct - split).abs() <= 1e-12 * direct.max(1.0), "{l}/{m}");
        }
    }
}

#[test]
fn strip_supports() {
    let a = Specialization::single_alpha(0.6).unwrap();
    let b = Specialization::single_beta(0.6).unwrap();
    let all = partitions_up_to(6, None).unwrap();
    for l in &all {
        for m in &all {
            let va = skew_schur_spec(l, m, &a);
            let vb = skew_schur_spec(l, m, &b);
            let n = l.size() as i32 - m.size() as i32;
            assert_eq!(va, if l.is_horizontal_strip_over(m) { 0.6f64.powi(n) } else { 0.0 });
            assert_eq!(vb, if l.is_vertical_strip_over(m) { 0.6f64.powi(n) } else { 0.0 });
        }
    }
}

#[test]
fn gamma_specialization_gives_dimension() {
    // s_λ(γ) = γ^{|λ|} dim λ / |λ|!
    let g = Specialization::pure_gamma(1.3).unwrap();
    for l in partitions_up_to(7, None).unwrap() {
        let n = l.size();
        let f: f64 = factorial(n).to_string().parse().unwrap();
        let expected = 1.3f64.powi(n as i32) * dim_std_f64(&l) / f;
        assert!((schur_spec(&l, &g) - expected).abs() < 1e-12 * expected.max(1.0));
    }
}

fn small_partition() -> impl Strategy<Value = Partition> {
    (0u32..=6).prop_flat_map(|n| {
        let all = partitions_of(n, Some(4)).unwrap();
        (0..all.len()).prop_map(move |i| all[i].clone())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn bialternant_agrees_with_jacobi_trudi(l in small_partition(), x in proptest::collection::vec(-2.0f64..2.0, 1..=4)) {
        let mut xs = x.clone();
        xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        prop_assume!(xs.windows(2).all(|w| w[1] - w[0] > 0.05));
        let a = schur_bialternant(&l, &x);
        let b = schur_jacobi_trudi(&l, &x);
        let scale: f64 = schur_jacobi_trudi(&l, &x.iter().map(|v| v.abs()).collect::<Vec<_>>()).max(1e-300);
        prop_assert!((a - b).abs() <= 1e-10 * scale.max(b.abs()), "{} {} {}", l, a, b);
    }

    #[test]
    fn conjugate_is_involution(l in small_partition()) {
        prop_assert_eq!(l.conjugate().conjugate(), l.clone());
        prop_assert_eq!(l.conjugate().size(), l.size());
    }

    #[test]
    fn thoma_specializations_are_positive(
        a in proptest::collection::vec(0.0f64..0.9, 0..3),
        b in proptest::collection::vec(0.0f64..0.9, 0..3),
        g in 0.0f64..2.0,
        l in small_partition(),
        m in small_partition(),
    ) {
        let s = Specialization::thoma(a, b, g).unwrap();
        prop_assert!(skew_schur_spec(&l, &m, &s) >= 0.0);
    }

    #[test]
    fn partition_json_round_trip(l in small_partition()) {
        let txt = serde_json::to_string(&l).unwrap();
        let back: Partition = serde_json::from_str(&txt).unwrap();
        prop_assert_eq!(back, l);
    }
}

#[test]
fn superset_and_subset_enumeration() {
    let nu = Partition::new(vec![2, 1]).unwrap();
    for m in 0..6u32 {
        let got = supersets_of(&nu, m, None);
        let want: Vec<Partition> = partitions_of(3 + m, None).unwrap().into_iter().filter(|p| p.contains(&nu)).collect();
        let mut g = got.clone();
        g.sort();
        let mut w = want.clone();
        w.sort();
        assert_eq!(g, w, "m={m}");
        let hooked = supersets_of(&nu, m, Some((1, 1)));
        let want_h: Vec<&Partition> = want.iter().filter(|p| p.part(1) <= 1).collect();
        assert_eq!(hooked.len(), want_h.len());
    }
    let subs = subpartitions_of(&Partition::new(vec![3, 2, 2]).unwrap());
    let want = partitions_up_to(7, None).unwrap().into_iter().filter(|p| Partition::new(vec![3, 2, 2]).unwrap().contains(p)).count();
    assert_eq!(subs.len(), want);
}
