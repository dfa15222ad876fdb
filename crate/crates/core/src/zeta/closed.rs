use num_complex::Complex64;
use std::f64::consts::PI;

use super::form::{Geometric, MeromorphicForm, Term};
use crate::error::{domain, Error, Result};
use crate::geometry::{GapLadder, SetDescriptor, SetKind, TubeMode};

/// `2^N N!`: per-hole constant in `∫_hole d^(s-N) = c_N 2^(-s) g^s / Π_{i<N}(s-i)`.
fn hole_constant(n: u32) -> f64 {
    match n {
        1 => 2.0,
        2 => 8.0,
        _ => 48.0,
    }
}

fn hole_roots(n: u32) -> Vec<f64> {
    (0..n).map(f64::from).collect()
}

/// Distance zeta of one open cube of side `g` relative to itself.
pub fn hole_form(n: u32, g: f64, mult: f64) -> MeromorphicForm {
    MeromorphicForm::new(vec![Term::new(mult * hole_constant(n), 2.0, g, hole_roots(n), None)])
}

/// Sum of hole zetas over a gap ladder, with the level series summed in closed form.
pub fn ladder_form(ladder: &GapLadder) -> MeromorphicForm {
    let n = ladder.hole_dim;
    let q = 1.0 / ladder.gap_ratio;
    MeromorphicForm::new(vec![Term::new(
        ladder.first_count as f64 * hole_constant(n),
        2.0,
        ladder.first_gap * q,
        hole_roots(n),
        Some(Geometric {
            q,
            m: ladder.count_ratio as f64,
        }),
    )])
}

/// Outer collar of a cube of side `l` in dimension `n`, out to distance `delta`.
pub fn collar_form(n: u32, l: f64, delta: f64) -> MeromorphicForm {
    let term = |c: f64, root: f64| Term::new(c, 1.0, delta, vec![root], None);
    MeromorphicForm::new(match n {
        1 => vec![term(2.0, 0.0)],
        2 => vec![term(2.0 * PI, 0.0), term(4.0 * l / delta, 1.0)],
        _ => vec![
            term(4.0 * PI, 0.0),
            term(6.0 * PI * l / delta, 1.0),
            term(6.0 * l * l / (delta * delta), 2.0),
        ],
    })
}

/// Closed form of the distance zeta function `ζ_A(s, A_δ ∩ Ω)` (inner) or `ζ_A(s, A_δ)` (full).
///
/// The inner form needs `δ` past the saturation radius, where it no longer
/// depends on `δ`. The full carpet forms need `δ` strictly past it.
pub fn closed_form(desc: &SetDescriptor, mode: TubeMode, delta: f64) -> Result<MeromorphicForm> {
    if !(delta > 0.0) {
        return domain("δ must be positive");
    }
    let sat = desc.saturation();
    // the saturation radius carries a few ulps of rounding
    let slack = 8.0 * f64::EPSILON * sat;
    let strict = mode == TubeMode::Full && matches!(desc.kind(), SetKind::Carpet { .. });
    if delta < sat - slack || (strict && delta <= sat + slack) {
        return domain(format!("closed form needs δ {} {sat}, got {delta}", if strict { ">" } else { ">=" }));
    }
    let inner = unit_inner_form(desc)?.scaled(desc.scale());
    Ok(match mode {
        TubeMode::Inner => inner,
        TubeMode::Full => inner.extended(collar_form(desc.ambient_dim(), desc.scale(), delta)),
    })
}

fn unit_inner_form(desc: &SetDescriptor) -> Result<MeromorphicForm> {
    match desc.kind() {
        SetKind::Cantor { .. } | SetKind::Carpet { .. } => Ok(ladder_form(&desc.unit_ladder())),
        SetKind::CellBoundary { dim } => Ok(hole_form(*dim, 1.0, 1.0)),
        SetKind::String { string } => Ok(MeromorphicForm::new(
            string
                .entries()
                .iter()
                .map(|&(g, m)| Term::new(2.0 * m as f64, 2.0, g, vec![0.0], None))
                .collect(),
        )),
        SetKind::Union { parts } => {
            let mut out = MeromorphicForm::default();
            for p in parts {
                out = out.extended(unit_inner_form(p)?.scaled(p.scale()));
            }
            Ok(out)
        }
        SetKind::AString { .. } => Err(Error::NoClosedForm("the infinite a-string".into())),
        SetKind::Nest { .. } => Err(Error::NoClosedForm("the fractal nest".into())),
        SetKind::FlatDrum => Err(Error::NoClosedForm("the flat drum".into())),
    }
}

/// `ζ_A(s)` from the closed form.
pub fn distance_zeta_closed(desc: &SetDescriptor, s: Complex64, delta: f64, mode: TubeMode) -> Result<Complex64> {
    closed_form(desc, mode, delta)?.eval(s)
}

/// `ζ̃_A(s)` from the closed form of `ζ_A` through the functional equation.
pub fn tube_zeta_closed(desc: &SetDescriptor, s: Complex64, delta: f64, mode: TubeMode) -> Result<Complex64> {
    let n = f64::from(desc.ambient_dim());
    if (s - n).norm() < super::form::POLE_EPS {
        return domain("s = N needs the limiting form of the functional equation");
    }
    let z = distance_zeta_closed(desc, s, delta, mode)?;
    let v = desc.tube_volume(delta, mode)?;
    Ok((z - (Complex64::new(delta, 0.0).ln() * (s - n)).exp() * v) / (n - s))
}
