use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;

use fraczeta::error::Error;
use fraczeta::geometry::{cantor_set, TubeMode};
use fraczeta::quasi::{
    common_support, exponent_vector, hyperfractal_truncation, integer_relation, rationally_independent, two_qp_set, ExponentVector,
};
use fraczeta::zeta::tube_abscissa;

/// Some nonzero `c ∈ [-10, 10]^k` with `Σ c_i e_i = 0`.
fn brute_force_dependent(vs: &[ExponentVector]) -> bool {
    let support = common_support(vs);
    let rows: Vec<Vec<i64>> = vs.iter().map(|v| v.aligned(&support)).collect();
    let k = rows.len();
    let mut c = vec![-10i64; k];
    loop {
        if c.iter().any(|&x| x != 0)
            && (0..support.len()).all(|j| (0..k).map(|i| c[i] * rows[i][j]).sum::<i64>() == 0)
        {
            return true;
        }
        let mut i = 0;
        while i < k && c[i] == 10 {
            c[i] = -10;
            i += 1;
        }
        if i == k {
            return false;
        }
        c[i] += 1;
    }
}

#[test]
fn independence_examples() {
    let e = |m| exponent_vector(m).unwrap();
    assert!(rationally_independent(&[e(2), e(3)]));
    assert!(!rationally_independent(&[e(2), e(4)]));
    assert!(rationally_independent(&[e(2), e(6)]));
    // 12 · 18 = 6^3 · 1: (2,1) + (1,2) = 3 (1,1)
    assert!(!rationally_independent(&[e(6), e(12), e(18)]));
}

#[test]
fn independence_matches_brute_force_on_small_sets() {
    let ms: Vec<u64> = (2..=40).collect();
    for (i, &a) in ms.iter().enumerate() {
        for &b in &ms[i + 1..] {
            let vs = [exponent_vector(a).unwrap(), exponent_vector(b).unwrap()];
            if common_support(&vs).len() <= 3 {
                assert_eq!(rationally_independent(&vs), !brute_force_dependent(&vs), "{a} {b}");
            }
        }
    }
    for triple in [[2, 3, 6], [2, 3, 5], [4, 6, 9], [12, 18, 30], [8, 27, 6], [10, 15, 6], [2, 12, 18]] {
        let vs: Vec<_> = triple.iter().map(|&m| exponent_vector(m).unwrap()).collect();
        assert_eq!(rationally_independent(&vs), !brute_force_dependent(&vs), "{triple:?}");
    }
}

proptest! {
    #[test]
    fn factorization_reconstructs(m in 2u64..1_000_000) {
        let v = exponent_vector(m).unwrap();
        prop_assert_eq!(v.value(), m.into());
        prop_assert!(v.primes.windows(2).all(|w| w[0] < w[1]));
    }

    // exponents <= 2 on three primes keep every minimal relation inside [-10, 10]
    #[test]
    fn triples_match_brute_force(es in prop::collection::vec(prop::collection::vec(0u32..=2, 3), 1..=3)) {
        let ms: Vec<u64> = es.iter().map(|e| 2u64.pow(e[0]) * 3u64.pow(e[1]) * 5u64.pow(e[2])).collect();
        prop_assume!(ms.iter().all(|&m| m >= 2));
        let vs: Vec<_> = ms.iter().map(|&m| exponent_vector(m).unwrap()).collect();
        prop_assert_eq!(rationally_independent(&vs), !brute_force_dependent(&vs));
        if let Some(c) = integer_relation(&vs) {
            let support = common_support(&vs);
            for j in 0..support.len() {
                prop_assert_eq!(vs.iter().zip(&c).map(|(v, ci)| ci * v.aligned(&support)[j]).sum::<i64>(), 0);
            }
        }
    }

    #[test]
    fn ratios_stay_below_one_over_m(m in 2u64..50, d in 0.05f64..0.95) {
        let Ok(r) = two_qp_set(m, m + 1, d, 1.0) else { return Ok(()) };
        prop_assert!(r.a1 < 1.0 / m as f64 && r.a2 < 1.0 / (m + 1) as f64);
        prop_assert!(r.t1 > 0.0 && r.t2 > 0.0);
    }
}

#[test]
fn two_three_half() {
    let r = two_qp_set(2, 3, 0.5, 4.0).unwrap();
    assert_eq!((r.a1, r.a2), (0.25, 1.0 / 9.0));
    assert!((r.t1 - 4f64.ln()).abs() < 1e-15 && (r.t2 - 9f64.ln()).abs() < 1e-15);
    let p1 = 2.0 * std::f64::consts::PI / 4f64.ln();
    let p2 = 2.0 * std::f64::consts::PI / 9f64.ln();
    let mut expect: Vec<f64> = [0.0, p1, -p1, p2, -p2].into_iter().filter(|y: &f64| y.abs() <= 4.0).collect();
    expect.sort_by(f64::total_cmp);
    let got: Vec<f64> = r.principal_dims.iter().map(|z| z.im).collect();
    assert_eq!(got.len(), 3);
    let wide = two_qp_set(2, 3, 0.5, 5.0).unwrap();
    assert_eq!(wide.principal_dims.len(), 5);
    for (g, e) in got.iter().zip(&expect) {
        assert!((g - e).abs() < 1e-14);
    }
    assert!(r.principal_dims.iter().all(|z| z.re == 0.5));
    assert_eq!(r.transcendence, "asserted-by-theorem");
}

#[test]
fn dependent_pair_is_refused() {
    match two_qp_set(2, 4, 0.5, 4.0) {
        Err(Error::DependentExponents { relation }) => assert_eq!(relation, vec![2, -1]),
        other => panic!("{other:?}"),
    }
}

#[test]
fn components_have_dimension_d() {
    let r = two_qp_set(2, 3, 0.5, 0.0).unwrap();
    for (m, a) in [(2, r.a1), (3, r.a2)] {
        let c = cantor_set(m, a).unwrap();
        let d = tube_abscissa(&c, TubeMode::Inner, c.saturation()).unwrap();
        assert!((d - 0.5).abs() < 0.01, "{d}");
    }
}

#[test]
fn densification() {
    let cs = [0.5, 0.25, 0.125];
    let gaps: Vec<f64> = (1..=3)
        .map(|k| hyperfractal_truncation(0.5, k, &[2, 3, 5], &cs, 20.0, 8).unwrap().min_gap)
        .collect();
    assert!(gaps[2] < gaps[1] && gaps[1] < gaps[0], "{gaps:?}");
}

#[test]
fn single_component_is_its_scaled_string() {
    let h = hyperfractal_truncation(0.5, 1, &[2], &[0.5], 20.0, 6).unwrap();
    assert_eq!(h.merged.count(), h.component_strings[0].count());
    for (a, b) in h.merged.entries().iter().zip(h.component_strings[0].entries()) {
        assert_eq!(a.1, b.1);
        assert!((a.0 - b.0).abs() <= 1e-16 * b.0);
    }
}

#[test]
fn equal_lengths_add_multiplicities() {
    // first gaps: 3/4 · (1/2) · 1 ... chosen so both components start at 1/4
    let h = hyperfractal_truncation(0.5, 2, &[2, 3], &[0.5, 0.75], 20.0, 4).unwrap();
    assert!(h.exact_merge);
    let first = h.merged.entries()[0];
    assert!((first.0 - 0.25).abs() < 1e-16);
    assert_eq!(first.1, 1 + 2);
}

#[test]
fn merged_total_is_exact() {
    // a gap string of C^(m, a) cut after L levels has total 1 - (m a)^L; here a = 1/m²
    let levels = 10;
    let (ms, cs) = ([2u64, 3, 5], [(1, 2), (1, 4), (1, 8)]);
    let c_f: Vec<f64> = cs.iter().map(|&(p, q)| p as f64 / q as f64).collect();
    let h = hyperfractal_truncation(0.5, 3, &ms, &c_f, 20.0, levels).unwrap();
    let q = |p: i64, d: i64| BigRational::new(p.into(), d.into());
    let expect = ms.iter().zip(cs).fold(BigRational::zero(), |acc, (&m, (p, d))| {
        acc + q(p, d) * (q(1, 1) - q(1, m as i64).pow(levels as i32))
    });
    assert_eq!(h.exact_total().unwrap(), expect);
}
