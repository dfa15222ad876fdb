use num_complex::Complex64;

use super::closed::closed_form;
use super::form::{Geometric, MeromorphicForm, Term, POLE_EPS};
use crate::error::{domain, Error, Result};
use crate::geometry::{FractalString, GapLadder, SetDescriptor, SetKind, TubeMode};
use crate::quad::GaussLegendre;
use crate::sum::ComplexNeumaier;

/// `ζ_L(s) = Σ_j mult_j ℓ_j^s` for a finite string.
pub fn geometric_zeta(string: &FractalString, s: Complex64) -> Complex64 {
    let mut acc = ComplexNeumaier::new();
    for &(l, m) in string.entries() {
        acc.add((s * l.ln()).exp() * m as f64);
    }
    acc.total()
}

/// Geometric zeta of the gap string of a one-dimensional ladder, summed in
/// closed form: `c_1 g_1^s / (1 - ρ λ^s)`.
pub fn ladder_geometric_form(ladder: &GapLadder) -> Result<MeromorphicForm> {
    if ladder.hole_dim != 1 {
        return domain("geometric zeta needs a one-dimensional ladder");
    }
    let q = 1.0 / ladder.gap_ratio;
    Ok(MeromorphicForm::new(vec![Term::new(
        ladder.first_count as f64,
        1.0,
        ladder.first_gap * q,
        Vec::new(),
        Some(Geometric {
            q,
            m: ladder.count_ratio as f64,
        }),
    )]))
}

/// Geometric zeta of the gap string of `desc`.
///
/// Cantor strings are continued analytically through their closed form;
/// the infinite a-string is summed directly with an integral tail and is
/// rejected at or left of its abscissa `1/(1+a)`.
pub fn geometric_zeta_desc(desc: &SetDescriptor, s: Complex64) -> Result<Complex64> {
    match desc.kind() {
        SetKind::Cantor { .. } => ladder_geometric_form(&desc.ladder().unwrap())?.eval(s),
        SetKind::String { string } => Ok(geometric_zeta(string, s) * (s * desc.scale().ln()).exp()),
        SetKind::AString { a } => Ok(a_string_zeta(*a, s)? * (s * desc.scale().ln()).exp()),
        SetKind::Union { parts } => {
            let mut acc = ComplexNeumaier::new();
            for p in parts {
                acc.add(geometric_zeta_desc(p, s)?);
            }
            Ok(acc.total() * (s * desc.scale().ln()).exp())
        }
        _ => Err(Error::NoClosedForm("geometric zeta of a non-string set".into())),
    }
}

/// `Σ_{j>=1} (j^(-a) - (j+1)^(-a))^s`: direct sum to `J`, then Euler–Maclaurin.
fn a_string_zeta(a: f64, s: Complex64) -> Result<Complex64> {
    let abscissa = 1.0 / (1.0 + a);
    if s.re <= abscissa + POLE_EPS {
        return Err(Error::Divergent(s.re, abscissa));
    }
    if (s - 1.0).norm() == 0.0 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    let len = |x: f64| crate::geometry::a_string_length(a, x);
    let f = |x: f64| (s * len(x).ln()).exp();
    const J: u64 = 4096;
    let mut acc = ComplexNeumaier::new();
    for j in 1..J {
        acc.add(f(j as f64));
    }
    // ∫_J^∞ f in u = ln x, marched in Gauss panels until the integrand is negligible
    let jf = J as f64;
    let rule = GaussLegendre::new(20);
    let freq = (1.0 + a) * s.im.abs();
    let width = (0.5f64).min(2.0 / freq.max(1e-12));
    let decay = (1.0 + a) * s.re - 1.0;
    let mut tail = ComplexNeumaier::new();
    let mut u = jf.ln();
    for _ in 0..1_000_000 {
        let piece = rule.integrate_complex(u, u + width, |u: f64| f(u.exp()) * u.exp());
        tail.add(piece);
        u += width;
        // the rest is bounded by the current panel over the exponential decay rate
        let rest = (f(u.exp()) * u.exp()).norm() / decay;
        if rest <= 1e-17 * tail.total().norm().max(1e-300) {
            break;
        }
    }
    acc.add(tail.total());
    acc.add(f(jf) * 0.5);
    // -f'(J)/12 by a central difference
    let h = 1e-3 * jf;
    acc.add(-(f(jf + h) - f(jf - h)) / (2.0 * h) / 12.0);
    Ok(acc.total())
}

/// `gen(s) / (1 - Σ_j r_j^s)`.
pub fn spray_zeta(gen: &MeromorphicForm, ratios: &[f64], s: Complex64) -> Result<Complex64> {
    if ratios.is_empty() || ratios.iter().any(|&r| !(r > 0.0 && r < 1.0)) {
        return domain("spray ratios must lie in (0, 1)");
    }
    let mut f = Complex64::new(0.0, 0.0);
    let mut df = Complex64::new(0.0, 0.0);
    for &r in ratios {
        let p = (s * r.ln()).exp();
        f += p;
        df += p * r.ln();
    }
    let den = 1.0 - f;
    // a Newton step estimates the distance to the nearest root of the denominator
    let step = den / df;
    if step.norm() < POLE_EPS {
        return Err(Error::PoleProximity { s, pole: s + step });
    }
    Ok(gen.eval(s)? / den)
}

/// `|ζ_{λA}(s, λΩ) - λ^s ζ_A(s, Ω)|` from the closed forms.
pub fn scaling_check(desc: &SetDescriptor, lambda: f64, s: Complex64) -> Result<f64> {
    if !(lambda > 0.0) {
        return domain("scaling factor must be positive");
    }
    let scaled = desc.scaled(lambda);
    let lhs = closed_form(&scaled, TubeMode::Inner, scaled.saturation())?.eval(s)?;
    let rhs = closed_form(desc, TubeMode::Inner, desc.saturation())?.eval(s)? * (s * lambda.ln()).exp();
    Ok((lhs - rhs).norm())
}

/// Whether the closed form of `λA` is exactly `λ^s` times that of `A`,
/// compared as rational data rather than values.
pub fn scaling_check_exact(desc: &SetDescriptor, lambda: f64) -> Result<bool> {
    if !(lambda > 0.0) {
        return domain("scaling factor must be positive");
    }
    let scaled = desc.scaled(lambda);
    let lhs = closed_form(&scaled, TubeMode::Inner, scaled.saturation())?;
    let rhs = closed_form(desc, TubeMode::Inner, desc.saturation())?;
    Ok(rhs.is_exact_rescaling(&lhs, lambda))
}

/// Monte Carlo version of [`scaling_check`]: the scaled drum is sampled and
/// compared with `λ^s` times the closed form of the original.
/// Returns `(difference, standard error)`.
pub fn scaling_check_mc(desc: &SetDescriptor, lambda: f64, s: Complex64, n: usize, seed: u64) -> Result<(f64, f64)> {
    if !(lambda > 0.0) {
        return domain("scaling factor must be positive");
    }
    let scaled = desc.scaled(lambda);
    let mc = super::mc::distance_zeta_mc(&scaled, TubeMode::Inner, s, scaled.saturation(), n, seed)?;
    let rhs = closed_form(desc, TubeMode::Inner, desc.saturation())?.eval(s)? * (s * lambda.ln()).exp();
    Ok(((mc.value - rhs).norm(), mc.error()))
}
