use num_complex::Complex64;
use std::f64::consts::PI;

use fraczeta::geometry::{cantor_set, carpet, cell_boundary, string_set, FractalString, SetDescriptor, Tube, TubeMode};
use fraczeta::spectrum::{fourier_residues, poles, residue_analytic, residue_contour_form, spray_dims, Window};
use fraczeta::tubeformula::tube_zeta_poles;
use fraczeta::zeta::{closed_form, tube_zeta_closed, MeromorphicForm};

fn catalog_forms() -> Vec<(&'static str, SetDescriptor, MeromorphicForm)> {
    let sets = vec![
        ("cantor(2,1/3)", cantor_set(2, 1.0 / 3.0).unwrap()),
        ("cantor(3,1/5)", cantor_set(3, 0.2).unwrap()),
        ("carpet2", carpet(2).unwrap()),
        ("carpet3", carpet(3).unwrap()),
        ("cube boundary", cell_boundary(3, 1.0).unwrap()),
        ("string", string_set(FractalString::new(vec![(0.5, 1), (0.25, 2)]).unwrap())),
    ];
    sets.into_iter()
        .map(|(name, set)| {
            let form = closed_form(&set, TubeMode::Inner, set.saturation()).unwrap();
            (name, set, form)
        })
        .collect()
}

fn window() -> Window {
    Window::new(-3.0, 3.5, 30.0).unwrap()
}

#[test]
fn contour_residues_match_analytic_ones() {
    for (name, _, form) in catalog_forms() {
        let ps = poles(&form, &window()).unwrap();
        assert!(!ps.is_empty(), "{name}");
        for p in &ps {
            let contour = residue_contour_form(&form, p.omega).unwrap();
            let analytic = residue_analytic(&form, p.omega).unwrap();
            assert!((contour - analytic).norm() <= 1e-9 * analytic.norm().max(1.0), "{name} at {}: {contour} vs {analytic}", p.omega);
            assert!((analytic - p.residue).norm() <= 1e-14 * analytic.norm());
        }
    }
}

#[test]
fn catalog_poles_are_simple_with_nonzero_residues() {
    for (name, _, form) in catalog_forms() {
        for p in poles(&form, &window()).unwrap() {
            assert_eq!(p.order, 1, "{name} at {}", p.omega);
            assert!(p.residue.is_finite() && p.residue.norm() > 0.0, "{name} at {}", p.omega);
        }
    }
}

#[test]
fn pole_sets_are_closed_under_conjugation() {
    for (name, _, form) in catalog_forms() {
        let ps = poles(&form, &window()).unwrap();
        for p in &ps {
            let mate = ps
                .iter()
                .find(|q| (q.omega - p.omega.conj()).norm() < 1e-10)
                .unwrap_or_else(|| panic!("{name}: no conjugate for {}", p.omega));
            assert!((mate.residue - p.residue.conj()).norm() <= 1e-12 * p.residue.norm());
        }
    }
}

#[test]
fn carpet_poles_sit_on_the_lattice_and_at_integers() {
    let c = carpet(2).unwrap();
    let form = closed_form(&c, TubeMode::Inner, 0.5).unwrap();
    let ps = poles(&form, &Window::new(-1.0, 3.0, 20.0).unwrap()).unwrap();
    let d = 8f64.ln() / 3f64.ln();
    let p = 2.0 * PI / 3f64.ln();
    for q in &ps {
        let on_line = (q.omega.re - d).abs() < 1e-12 && ((q.omega.im / p).round() * p - q.omega.im).abs() < 1e-10;
        let integer = q.omega.im == 0.0 && [0.0, 1.0].contains(&q.omega.re);
        assert!(on_line || integer, "{}", q.omega);
    }
    // 2 k p <= 20 gives |k| <= 3
    assert_eq!(ps.iter().filter(|q| (q.omega.re - d).abs() < 1e-12).count(), 7);
    assert!((ps.iter().find(|q| q.omega == Complex64::new(d, 0.0)).unwrap().residue.re - 0.145050).abs() < 1e-6);
}

#[test]
fn repeated_ratio_sprays_reproduce_catalog_lattices() {
    for (set, ratios) in [
        (cantor_set(2, 1.0 / 3.0).unwrap(), vec![1.0 / 3.0; 2]),
        (cantor_set(3, 0.2).unwrap(), vec![0.2; 3]),
        (carpet(3).unwrap(), vec![1.0 / 3.0; 26]),
    ] {
        let d = set.known_dimension().unwrap();
        let w = Window::new(d - 0.5, d + 0.5, 40.0).unwrap();
        let form = closed_form(&set, TubeMode::Inner, set.saturation()).unwrap();
        let expect = poles(&form, &Window::new(d - 1e-6, d + 1e-6, 40.0).unwrap()).unwrap();
        let got = spray_dims(&ratios, &w).unwrap();
        assert_eq!(got.poles.len(), expect.len(), "D = {d}");
        let lat = got.lattice.unwrap();
        assert!((lat.base - ratios[0]).abs() < 1e-15);
        for e in &expect {
            let nearest = got.poles.iter().map(|p| (p.omega - e.omega).norm()).fold(f64::INFINITY, f64::min);
            assert!(nearest <= 1e-10, "D = {d}: {} missed by {nearest}", e.omega);
        }
    }
}

#[test]
fn nonlattice_roots_solve_the_moment_equation() {
    let ratios = [0.5, 1.0 / 3.0];
    let got = spray_dims(&ratios, &Window::new(-2.0, 1.0, 40.0).unwrap()).unwrap();
    assert!(got.lattice.is_none());
    assert!(got.poles.len() > 10);
    for p in &got.poles {
        let m: Complex64 = ratios.iter().map(|&r| (p.omega * r.ln()).exp()).sum();
        assert!((m - 1.0).norm() < 1e-10, "{}", p.omega);
        // the real root is the unique root of maximal real part
        assert!(p.omega.re <= 0.787885 + 1e-6);
    }
}

#[test]
fn tube_zeta_residues_divide_by_n_minus_omega() {
    let c = carpet(2).unwrap();
    let form = closed_form(&c, TubeMode::Inner, 0.5).unwrap();
    let ps = poles(&form, &Window::new(1.0, 2.5, 25.0).unwrap()).unwrap();
    let tilde = tube_zeta_poles(&ps, 2).unwrap();
    for (p, q) in ps.iter().zip(&tilde).filter(|(p, _)| p.omega.im != 0.0) {
        assert_eq!(p.omega, q.omega);
        let expect = p.residue / (2.0 - p.omega);
        assert!((q.residue - expect).norm() <= 1e-14 * expect.norm());
        let tz = |s: Complex64| tube_zeta_closed(&c, s, 0.5, TubeMode::Inner).unwrap_or_default();
        let contour = fraczeta::spectrum::residue_contour(tz, p.omega, 0.3, 256).unwrap();
        assert!((contour - expect).norm() <= 1e-9 * expect.norm(), "{}: {contour} vs {expect}", p.omega);
    }
}

#[test]
fn fourier_coefficients_of_cantor_envelopes() {
    let c = cantor_set(3, 0.2).unwrap();
    let d = 3f64.ln() / 5f64.ln();
    let period = 5f64.ln();
    let report = fourier_residues(&Tube::new(&c, TubeMode::Full).unwrap(), 1, d, period, 4).unwrap();
    let form = closed_form(&c, TubeMode::Full, 1.0).unwrap();
    for k in -4..=4i64 {
        let s = Complex64::new(d, 2.0 * PI * k as f64 / period);
        let expect = form.residue(s).unwrap() / (1.0 - s);
        let got = report.coefficient(k).unwrap();
        assert!((got - expect).norm() <= 1e-6 * expect.norm(), "k = {k}: {got} vs {expect}");
    }
    assert!(report.g_min < report.g_mean && report.g_mean < report.g_max);
    assert!((report.coefficient(0).unwrap().re - report.g_mean).abs() < 1e-12);
}

#[test]
fn fourier_rejects_wrong_periods() {
    let c = cantor_set(2, 1.0 / 3.0).unwrap();
    let d = 2f64.ln() / 3f64.ln();
    let tube = Tube::new(&c, TubeMode::Full).unwrap();
    assert!(fourier_residues(&tube, 1, d, 0.7 * 3f64.ln(), 2).is_err());
    assert!(fourier_residues(&tube, 1, d, -1.0, 2).is_err());
}
