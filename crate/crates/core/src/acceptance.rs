//! The acceptance matrix: fourteen end-to-end checks, each runnable alone.

use num_complex::Complex64;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::f64::consts::PI;
use std::time::Instant;

use crate::dims::{content_envelope, default_grid, relative_box_dim_fit};
use crate::error::{Error, Result};
use crate::geometry::{a_string, a_string_set, cantor_set, carpet, flat_drum, FnTube, Rfd, SetDescriptor, Tube, TubeMode};
use crate::quasi::{common_support, exponent_vector, hyperfractal_truncation, rationally_independent, two_qp_set, ExponentVector};
use crate::spectrum::{fourier_residues, poles, residue_contour_form, spray_dims, PoleDatum, Window};
use crate::tubeformula::{exact_integer_terms, measurability_check, tube_formula, Measurability};
use crate::zeta::{
    closed_form, functional_eq_residual, hp_integrability_probe, scaling_check, scaling_check_exact, scaling_check_mc,
    tube_abscissa, tube_zeta_residue_at, HpOptions, Verdict,
};

/// Outcome of one criterion.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Outcome {
    pub id: u32,
    pub suite: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

impl std::fmt::Display for Outcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "[{tag}] {:>2} {:<20} {:.2}s  {}", self.id, self.suite, self.seconds, self.detail)
    }
}

type Check = fn() -> Result<(bool, String)>;

/// `(id, suite name, check)` for every criterion.
pub const SUITES: [(u32, &str, Check); 14] = [
    (1, "carpet-tube", carpet_tube),
    (2, "carpet3", carpet3),
    (3, "residue-sandwich", residue_sandwich),
    (4, "a-string", a_string_residue),
    (5, "abscissa", abscissa),
    (6, "functional-equation", functional_equation),
    (7, "scaling", scaling),
    (8, "harvey-polking", harvey_polking),
    (9, "spray", spray),
    (10, "fourier", fourier),
    (11, "measurability", measurability),
    (12, "quasiperiodic", quasiperiodic),
    (13, "hyperfractal", hyperfractal),
    (14, "flat", flat),
];

pub fn suite_names() -> Vec<&'static str> {
    SUITES.iter().map(|s| s.1).collect()
}

/// Runs the named suite, or every suite for `"all"`.
pub fn run(suite: &str) -> Result<Vec<Outcome>> {
    let chosen: Vec<_> = SUITES.iter().filter(|s| suite == "all" || s.1 == suite).collect();
    if chosen.is_empty() {
        return Err(Error::Domain(format!("unknown suite {suite}; expected one of {:?} or all", suite_names())));
    }
    Ok(chosen.into_iter().map(|&(id, name, check)| run_one(id, name, check)).collect())
}

fn run_one(id: u32, suite: &'static str, check: Check) -> Outcome {
    let start = Instant::now();
    let (passed, detail) = match check() {
        Ok(r) => r,
        Err(e) => (false, format!("error: {e}")),
    };
    Outcome {
        id,
        suite,
        passed,
        detail,
        seconds: start.elapsed().as_secs_f64(),
    }
}

fn log3(x: f64) -> f64 {
    x.ln() / 3f64.ln()
}

fn carpet_tube() -> Result<(bool, String)> {
    let start = Instant::now();
    let c = carpet(2)?;
    let mut worst: f64 = 0.0;
    for t in [0.3, 0.1, 0.03, 0.01] {
        worst = worst.max(tube_formula(&c, TubeMode::Inner, t, 50)?.abs_error);
    }
    let secs = start.elapsed().as_secs_f64();
    Ok((worst <= 1e-6 && secs < 1.0, format!("max |formula - hole sum| = {worst:.3e}")))
}

fn carpet3() -> Result<(bool, String)> {
    let c = carpet(3)?;
    let form = closed_form(&c, TubeMode::Inner, c.saturation())?;
    let q = |n: i64, d: i64| BigRational::new(n.into(), d.into());
    let coeffs_ok = exact_integer_terms(&form, 3) == Some(vec![(1, q(-6, 17)), (2, q(12, 23)), (3, q(-8, 25))]);
    let mut res_err: f64 = 0.0;
    for (r, expect) in [(0.0, -24.0 / 25.0), (1.0, 24.0 / 23.0), (2.0, -6.0 / 17.0)] {
        res_err = res_err.max((form.residue(Complex64::new(r, 0.0))? - expect).norm());
    }
    let tube_err = tube_formula(&c, TubeMode::Inner, 0.1, 50)?.abs_error;
    Ok((
        coeffs_ok && res_err <= 1e-12 && tube_err <= 1e-6,
        format!("exact coefficients {coeffs_ok}, residue error {res_err:.1e}, tube error {tube_err:.1e}"),
    ))
}

fn residue_sandwich() -> Result<(bool, String)> {
    let c = carpet(2)?;
    let d = log3(8.0);
    let form = closed_form(&c, TubeMode::Inner, c.saturation())?;
    let res = form.residue(Complex64::new(d, 0.0))?;
    let contour = residue_contour_form(&form, Complex64::new(d, 0.0))?;
    // res at D from the per-level sum: 2^(-D) · 8 / (8 ln 3 · D (D - 1))
    let oracle = 2f64.powf(-d) / (3f64.ln() * d * (d - 1.0));
    let (lo, hi) = ((2.0 - d) * 1.350670, (2.0 - d) * 1.355617);
    let ok = (res.re - oracle).abs() <= 1e-4
        && (res.re - 0.14506).abs() <= 1e-4
        && (contour - res).norm() <= 1e-8
        && lo <= res.re
        && res.re <= hi;
    Ok((ok, format!("res = {:.6} in [{lo:.6}, {hi:.6}], contour {:.6}", res.re, contour.re)))
}

fn a_string_residue() -> Result<(bool, String)> {
    let start = Instant::now();
    let content = 2.0 * 2f64.sqrt();
    let s = a_string(1.0, 1_000_000)?;
    let tube = FnTube {
        dim: 1,
        f: move |t: f64| s.inner_tube(t),
    };
    let env = content_envelope(&tube, 0.5, &default_grid(1e-6, 1e-3)?)?;
    let env_ok = (env.lower / content - 1.0).abs() <= 0.01 && (env.upper / content - 1.0).abs() <= 0.01;
    let a = a_string_set(1.0, None)?;
    let res = tube_zeta_residue_at(&Tube::inner(&a), 0.5, a.saturation(), &[0.02, 0.04, 0.06, 0.08])?;
    let res_ok = (res / content - 1.0).abs() <= 0.01;
    let secs = start.elapsed().as_secs_f64();
    Ok((
        env_ok && res_ok && secs < 10.0,
        format!(
            "envelope [{:.5}, {:.5}], res(ζ̃, 1/2) = {res:.5}, 2√2 = {content:.5}",
            env.lower, env.upper
        ),
    ))
}

fn abscissa() -> Result<(bool, String)> {
    let cases: Vec<(String, SetDescriptor, f64)> = vec![
        ("cantor".into(), cantor_set(2, 1.0 / 3.0)?, log3(2.0)),
        ("carpet2".into(), carpet(2)?, log3(8.0)),
        ("a=1/2".into(), a_string_set(0.5, None)?, 1.0 / 1.5),
        ("a=1".into(), a_string_set(1.0, None)?, 0.5),
        ("a=2".into(), a_string_set(2.0, None)?, 1.0 / 3.0),
    ];
    let mut ok = true;
    let mut parts = Vec::new();
    for (name, desc, expect) in cases {
        let d = tube_abscissa(&desc, TubeMode::Inner, desc.saturation())?;
        ok &= (d - expect).abs() <= 0.01;
        parts.push(format!("{name} {d:.4}/{expect:.4}"));
    }
    Ok((ok, parts.join(", ")))
}

fn functional_equation() -> Result<(bool, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst: f64 = 0.0;
    for (desc, d) in [(cantor_set(2, 1.0 / 3.0)?, log3(2.0)), (carpet(2)?, log3(8.0)), (carpet(3)?, log3(26.0))] {
        for _ in 0..10 {
            let s = Complex64::new(d + 0.2 + rng.random::<f64>(), 20.0 * rng.random::<f64>() - 10.0);
            worst = worst.max(functional_eq_residual(&desc, TubeMode::Inner, s, desc.saturation())?);
        }
    }
    Ok((worst <= 1e-7, format!("max residual {worst:.2e} over 30 points")))
}

fn scaling() -> Result<(bool, String)> {
    let mut ok = true;
    let mut max_numeric: f64 = 0.0;
    let mut max_sigma: f64 = 0.0;
    for (desc, d) in [(cantor_set(2, 1.0 / 3.0)?, log3(2.0)), (carpet(2)?, log3(8.0))] {
        let s = Complex64::new(d + 0.5, 0.0);
        for (i, lambda) in [1.0 / 3.0, 2.0].into_iter().enumerate() {
            ok &= scaling_check_exact(&desc, lambda)?;
            max_numeric = max_numeric.max(scaling_check(&desc, lambda, s)?);
            let (diff, se) = scaling_check_mc(&desc, lambda, s, 1_000_000, 7 + i as u64)?;
            max_sigma = max_sigma.max(diff / se);
        }
    }
    ok &= max_numeric <= 1e-13 && max_sigma <= 3.0;
    Ok((
        ok,
        format!("closed forms rescale exactly; float difference {max_numeric:.1e}; Monte Carlo within {max_sigma:.2} σ"),
    ))
}

fn harvey_polking() -> Result<(bool, String)> {
    let c = cantor_set(2, 1.0 / 3.0)?;
    let depths = [10, 50, 200, 400];
    let opts = HpOptions::default();
    let below = hp_integrability_probe(&c, 0.3, &depths, opts)?.verdict;
    let above = hp_integrability_probe(&c, 0.4, &depths, opts)?.verdict;
    Ok((
        below == Verdict::Convergent && above == Verdict::Divergent,
        format!("γ = 0.3: {below:?}, γ = 0.4: {above:?}"),
    ))
}

/// Real root of `Σ r^s = 1` on `[0, 1]` by plain bisection.
fn bisect_real_root(ratios: &[f64]) -> f64 {
    let f = |s: f64| ratios.iter().map(|r| r.powf(s)).sum::<f64>() - 1.0;
    let (mut a, mut b) = (0.0, 1.0);
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if f(m) > 0.0 {
            a = m;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

fn spray() -> Result<(bool, String)> {
    let tau = 60.0;
    let w = Window::new(-2.0, 2.0, tau)?;
    let lattice = spray_dims(&[1.0 / 3.0; 8], &w)?.poles;
    let c = carpet(2)?;
    let form = closed_form(&c, TubeMode::Inner, c.saturation())?;
    let d = log3(8.0);
    let expect: Vec<PoleDatum> = poles(&form, &Window::new(d - 1e-6, d + 1e-6, tau)?)?;
    let mut lattice_err: f64 = if lattice.len() == expect.len() { 0.0 } else { f64::INFINITY };
    for b in &expect {
        let nearest = lattice.iter().map(|a| (a.omega - b.omega).norm()).fold(f64::INFINITY, f64::min);
        lattice_err = lattice_err.max(nearest);
    }
    let ratios = [0.5, 1.0 / 3.0];
    let mixed = spray_dims(&ratios, &w)?.poles;
    let oracle = bisect_real_root(&ratios);
    let real = mixed
        .iter()
        .filter(|p| p.omega.im == 0.0)
        .map(|p| p.omega.re)
        .fold(f64::NEG_INFINITY, f64::max);
    let moment_err = |rs: &[f64], ps: &[PoleDatum]| {
        ps.iter()
            .map(|p| (rs.iter().map(|&r| (p.omega * r.ln()).exp()).sum::<Complex64>() - 1.0).norm())
            .fold(0.0, f64::max)
    };
    let root_err = moment_err(&[1.0 / 3.0; 8], &lattice).max(moment_err(&ratios, &mixed));
    let ok = lattice_err <= 1e-10
        && (real - oracle).abs() <= 1e-5
        && (real - 0.78788).abs() <= 1e-5
        && root_err <= 1e-10;
    Ok((
        ok,
        format!(
            "lattice error {lattice_err:.1e} over {} roots, real root {real:.6} (bisection {oracle:.6}), max |Σ r^ω - 1| = {root_err:.1e}",
            lattice.len()
        ),
    ))
}

fn fourier() -> Result<(bool, String)> {
    let c = cantor_set(2, 1.0 / 3.0)?;
    let d = log3(2.0);
    let period = 3f64.ln();
    let report = fourier_residues(&Tube::new(&c, TubeMode::Full)?, 1, d, period, 5)?;
    let form = closed_form(&c, TubeMode::Full, 0.5)?;
    let mut worst: f64 = 0.0;
    let mut res0 = 0.0;
    for k in -5..=5i64 {
        let s = Complex64::new(d, 2.0 * PI * k as f64 / period);
        let analytic = form.residue(s)? / (1.0 - s);
        let got = report.coefficient(k).unwrap_or_default();
        worst = worst.max((got - analytic).norm() / analytic.norm());
        if k == 0 {
            res0 = analytic.re;
        }
    }
    let mean_ok = (report.g_mean - res0).abs() <= 1e-3 * res0;
    let strict = report.g_min < res0 && res0 < report.g_max;
    Ok((
        worst <= 1e-3 && mean_ok && strict,
        format!(
            "max relative error {worst:.1e}; min G {:.5} < res {res0:.5} < max G {:.5}",
            report.g_min, report.g_max
        ),
    ))
}

fn measurability() -> Result<(bool, String)> {
    let c = cantor_set(2, 1.0 / 3.0)?;
    let d = log3(2.0);
    let form = closed_form(&c, TubeMode::Inner, c.saturation())?;
    let line = poles(&form, &Window::new(d - 1e-6, d + 1e-6, 30.0)?)?;
    let cantor = measurability_check(&line, d)?.verdict;
    let single = PoleDatum {
        omega: Complex64::new(0.5, 0.0),
        order: 1,
        residue: Complex64::new(2.0 * 2f64.sqrt() * 0.5, 0.0),
    };
    let simple = measurability_check(&[single], 0.5)?.verdict;
    Ok((
        cantor == Measurability::Nonmeasurable && simple == Measurability::Measurable,
        format!("cantor: {cantor:?}, single simple pole: {simple:?}"),
    ))
}

/// Some nonzero `c ∈ [-10, 10]^k` with `Σ c_i e_i = 0`.
fn small_relation_exists(vs: &[ExponentVector]) -> bool {
    let support = common_support(vs);
    let rows: Vec<Vec<i64>> = vs.iter().map(|v| v.aligned(&support)).collect();
    let k = rows.len();
    let mut c = vec![-10i64; k];
    loop {
        if c.iter().any(|&x| x != 0) && (0..support.len()).all(|j| (0..k).map(|i| c[i] * rows[i][j]).sum::<i64>() == 0) {
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

fn quasiperiodic() -> Result<(bool, String)> {
    let r = two_qp_set(2, 3, 0.5, 6.0)?;
    let (p1, p2) = (2.0 * PI / r.t1, 2.0 * PI / r.t2);
    let mut expect = vec![0.0, p1, -p1, p2, -p2, 2.0 * p2, -2.0 * p2];
    expect.retain(|y: &f64| y.abs() <= 6.0);
    expect.sort_by(f64::total_cmp);
    let dims_ok = r.principal_dims.len() == expect.len()
        && r.principal_dims.iter().zip(&expect).all(|(z, y)| z.re == 0.5 && (z.im - y).abs() < 1e-14);
    let accepted = r.a1 == 0.25 && r.a2 == 1.0 / 9.0 && dims_ok;
    let refused = matches!(two_qp_set(2, 4, 0.5, 6.0), Err(Error::DependentExponents { .. }));
    // every m | 900: exponents <= 2 on {2, 3, 5}, where minimal relations fit in [-10, 10]
    let ms: Vec<u64> = (2..=900).filter(|m| 900 % m == 0).collect();
    let mut sets: Vec<Vec<u64>> = Vec::new();
    for i in 0..ms.len() {
        sets.push(vec![ms[i]]);
        for j in i + 1..ms.len() {
            sets.push(vec![ms[i], ms[j]]);
            for l in j + 1..ms.len() {
                sets.push(vec![ms[i], ms[j], ms[l]]);
            }
        }
    }
    let mut agree = true;
    for set in &sets {
        let vs: Vec<_> = set.iter().map(|&m| exponent_vector(m)).collect::<Result<_>>()?;
        agree &= rationally_independent(&vs) != small_relation_exists(&vs);
    }
    let checked = sets.len();
    Ok((
        accepted && refused && agree,
        format!("(2,3,1/2) accepted: {accepted}, (2,4) refused: {refused}, brute force agrees on {checked} sets: {agree}"),
    ))
}

fn hyperfractal() -> Result<(bool, String)> {
    let cs = [0.5, 0.25, 0.125];
    let gaps: Vec<f64> = (1..=3)
        .map(|k| hyperfractal_truncation(0.5, k, &[2, 3, 5], &cs, 20.0, 8).map(|h| h.min_gap))
        .collect::<Result<_>>()?;
    Ok((gaps[2] < gaps[1] && gaps[1] < gaps[0], format!("min gap over K = 1, 2, 3: {gaps:.4?}")))
}

fn flat() -> Result<(bool, String)> {
    let rfd = Rfd::new(flat_drum());
    let mut ds = Vec::new();
    for t_min in [1e-2, 3e-3, 1e-3] {
        ds.push(relative_box_dim_fit(&rfd, &default_grid(t_min, 1.0)?)?.d);
    }
    let decreasing = ds.windows(2).all(|w| w[1] < w[0]);
    Ok((decreasing && ds[2] < -5.0, format!("dim estimates at t_min = 1e-2, 3e-3, 1e-3: {ds:.2?}")))
}
