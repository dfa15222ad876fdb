use num_bigint::BigUint;
use proptest::prelude::*;

use fraczeta::dims::default_grid;
use fraczeta::geometry::{
    a_string_set, cantor_set, carpet, cell_boundary, flat_drum, fractal_nest, string_set, FractalString, SetDescriptor,
    TubeMode,
};

fn catalog() -> Vec<(&'static str, SetDescriptor)> {
    vec![
        ("cantor(2,1/3)", cantor_set(2, 1.0 / 3.0).unwrap()),
        ("cantor(3,1/5)", cantor_set(3, 0.2).unwrap()),
        ("carpet2", carpet(2).unwrap()),
        ("carpet3", carpet(3).unwrap()),
        ("square boundary", cell_boundary(2, 1.0).unwrap()),
        ("a-string(1)", a_string_set(1.0, None).unwrap()),
        ("a-string(1/2, 50)", a_string_set(0.5, Some(50)).unwrap()),
        ("nest(1/2)", fractal_nest(0.5, None).unwrap()),
        ("nest(1, 4)", fractal_nest(1.0, Some(4)).unwrap()),
        ("flat drum", flat_drum()),
        ("string", string_set(FractalString::new(vec![(0.5, 1), (0.1, 3)]).unwrap())),
    ]
}

#[test]
fn tubes_are_nondecreasing_and_bounded() {
    for (name, set) in catalog() {
        let omega = set.region_volume();
        let grid = default_grid(1e-5, 2.0).unwrap();
        let mut prev = 0.0;
        for &t in &grid {
            let v = set.tube_volume(t, TubeMode::Inner).unwrap();
            assert!(v >= prev - 1e-12 * omega, "{name}: V({t}) = {v} < {prev}");
            assert!(v <= omega * (1.0 + 1e-12), "{name}: V({t}) = {v} > |Ω| = {omega}");
            prev = v;
        }
    }
}

#[test]
fn saturated_ladder_tubes_fill_the_region() {
    for set in [cantor_set(2, 1.0 / 3.0).unwrap(), cantor_set(4, 0.1).unwrap(), carpet(2).unwrap(), carpet(3).unwrap()] {
        let largest = set.ladder().unwrap().first_gap;
        for t in [0.5 * largest * (1.0 + 1e-12), 0.6 * largest, 3.0] {
            assert_eq!(set.tube_volume(t, TubeMode::Inner).unwrap(), set.region_volume());
        }
    }
}

#[test]
fn ladder_recursions_hold_exactly() {
    let big = |x: u64| BigUint::from(x);
    for m in 2u32..6 {
        let l = cantor_set(m, 0.5 / f64::from(m)).unwrap().ladder().unwrap();
        for k in 1..30 {
            assert_eq!(l.exact_count(k), big(u64::from(m) - 1) * big(u64::from(m)).pow(k - 1));
            assert!(l.level(k + 1).gap < l.level(k).gap);
        }
    }
    let c2 = carpet(2).unwrap().ladder().unwrap();
    let c3 = carpet(3).unwrap().ladder().unwrap();
    for k in 1..30 {
        assert_eq!(c2.exact_count(k), big(8).pow(k - 1));
        assert_eq!(c3.exact_count(k), big(26).pow(k - 1));
        assert!(c2.level(k + 1).gap < c2.level(k).gap);
    }
}

/// `|A_t ∩ Ω|` by counting midpoints of an `n^dim` grid within distance `t`.
fn grid_tube(set: &SetDescriptor, t: f64, n: usize) -> f64 {
    let h = 1.0 / n as f64;
    let inside = match set.ambient_dim() {
        1 => (0..n).filter(|&i| set.distance(&[(i as f64 + 0.5) * h]) < t).count(),
        _ => (0..n * n)
            .filter(|&ij| set.distance(&[((ij / n) as f64 + 0.5) * h, ((ij % n) as f64 + 0.5) * h]) < t)
            .count(),
    };
    inside as f64 * h.powi(set.ambient_dim() as i32)
}

#[test]
fn ladder_tubes_agree_with_distance_counts() {
    for (set, n) in [(carpet(2).unwrap(), 729), (cantor_set(2, 1.0 / 3.0).unwrap(), 1_000_000)] {
        for t in [0.3, 0.1, 0.03] {
            let exact = set.tube_volume(t, TubeMode::Inner).unwrap();
            let counted = grid_tube(&set, t, n);
            // each hole loses at most one cell layer on its boundary
            let tol = 8.0 / n as f64;
            assert!((exact - counted).abs() <= tol, "t = {t}: {exact} vs {counted}");
        }
    }
}

fn lipschitz_sets() -> Vec<SetDescriptor> {
    vec![
        cantor_set(2, 1.0 / 3.0).unwrap(),
        carpet(2).unwrap(),
        carpet(3).unwrap(),
        a_string_set(1.0, None).unwrap(),
        fractal_nest(0.5, None).unwrap(),
        cell_boundary(2, 1.0).unwrap(),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn distance_is_one_lipschitz(which in 0usize..6, x in prop::array::uniform3(-0.2f64..1.2), y in prop::array::uniform3(-0.2f64..1.2)) {
        let set = &lipschitz_sets()[which];
        let n = set.ambient_dim() as usize;
        let gap = x[..n].iter().zip(&y[..n]).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
        let dx = set.distance(&x[..n]);
        let dy = set.distance(&y[..n]);
        prop_assert!(dx >= 0.0 && dy >= 0.0);
        prop_assert!((dx - dy).abs() <= gap + 1e-12, "{} vs {} at separation {}", dx, dy, gap);
    }

    #[test]
    fn scaled_carpet_tube_is_homogeneous(lambda in 0.1f64..5.0, t in 1e-4f64..0.2) {
        let c = carpet(2).unwrap();
        let v = c.scaled(lambda).tube_volume(lambda * t, TubeMode::Inner).unwrap();
        let w = c.tube_volume(t, TubeMode::Inner).unwrap() * lambda * lambda;
        prop_assert!((v - w).abs() <= 1e-12 * w);
    }
}
