//! Fractal tube formulas: tube volumes rebuilt from complex dimensions and
//! residues, checked against exact hole sums.

use num_complex::Complex64;
use num_rational::BigRational;
use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::geometry::{SetDescriptor, TubeMode};
use crate::spectrum::{poles, spray_dims, PoleDatum, Window};
use crate::sum::{pairwise_sum, pairwise_sum_complex};
use crate::zeta::{closed_form, hole_form, MeromorphicForm, POLE_EPS};

/// Default symmetric truncation `|k| <= K` of the pole lattice.
pub const DEFAULT_K: u32 = 50;

/// Largest imaginary part tolerated in a formula value.
pub const IMAG_TOL: f64 = 1e-10;

/// Spray words enumerated before the oracle falls back to a deeper truncation.
pub const MAX_WORDS: usize = 10_000_000;

/// A tube formula evaluated at one `t`, next to an independent oracle.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TubeFormulaReport {
    pub t: f64,
    pub truncation_k: u32,
    pub formula_value: f64,
    pub formula_imag: f64,
    pub oracle_value: f64,
    pub abs_error: f64,
    /// `|t^(N-ω) res(ζ, ω) / (N-ω)|` for each pole, in pole order.
    pub term_magnitudes: Vec<f64>,
    /// False when the oracle is the formula itself at a deeper truncation.
    pub oracle_exact: bool,
}

impl TubeFormulaReport {
    fn new(t: f64, k: u32, value: Complex64, terms: Vec<f64>, oracle: f64, exact: bool) -> Self {
        Self {
            t,
            truncation_k: k,
            formula_value: value.re,
            formula_imag: value.im,
            oracle_value: oracle,
            abs_error: (value.re - oracle).abs(),
            term_magnitudes: terms,
            oracle_exact: exact,
        }
    }
}

/// Smallest lattice spacing among the geometric factors of `form`.
fn lattice_period(form: &MeromorphicForm) -> Option<f64> {
    form.terms()
        .iter()
        .filter_map(|t| t.geometric.map(|g| g.period()))
        .reduce(f64::min)
}

/// Window holding the lattice points `|k| <= K` of `form`, and its real poles
/// down to `sigma_left`.
pub fn lattice_window(form: &MeromorphicForm, sigma_left: f64, sigma_right: f64, k: u32) -> Result<Window> {
    let tau = lattice_period(form).map_or(0.5, |p| (f64::from(k) + 0.5) * p);
    Window::new(sigma_left, sigma_right, tau)
}

/// Sup of the `t` for which the residue expansion of `form` is exact.
///
/// Each term `coeff · base^(-s) scale^s / ...` multiplied by `t^(N-s)` decays
/// to the left exactly when `t < scale / base`.
pub fn validity_bound(form: &MeromorphicForm) -> f64 {
    form.terms()
        .iter()
        .map(|t| t.scale / t.base)
        .fold(f64::INFINITY, f64::min)
}

/// `Σ_ω t^(N-ω) res(ζ, ω) / (N-ω)` over simple poles, and the term sizes.
pub fn residue_sum(poles: &[PoleDatum], n: u32, t: f64) -> Result<(Complex64, Vec<f64>)> {
    if !(t > 0.0) {
        return domain("t must be positive");
    }
    let nf = f64::from(n);
    let mut terms = Vec::with_capacity(poles.len());
    for p in poles {
        if p.order != 1 {
            return Err(Error::HigherOrderPole {
                omega: p.omega,
                order: p.order,
            });
        }
        if (p.omega - nf).norm() < POLE_EPS {
            return domain("a pole at s = N is not supported by the tube formula");
        }
        let w = nf - p.omega;
        terms.push((w * t.ln()).exp() * p.residue / w);
    }
    let mags = terms.iter().map(|z| z.norm()).collect();
    Ok((pairwise_sum_complex(&terms), mags))
}

fn check_real(v: Complex64) -> Result<()> {
    if v.im.abs() > IMAG_TOL * v.re.abs().max(1.0) {
        return domain(format!("tube formula has imaginary part {}", v.im));
    }
    Ok(())
}

/// The truncated tube formula for the poles of `form` inside `w`, against `oracle`.
///
/// `poles` must be poles of `form`; each is checked to be simple there.
/// The reported `truncation_k` counts lattice points `|k| <= K` covered by `w`.
pub fn truncated_tube(
    poles: &[PoleDatum],
    form: &MeromorphicForm,
    n: u32,
    t: f64,
    w: &Window,
    oracle: f64,
) -> Result<TubeFormulaReport> {
    let bound = validity_bound(form);
    if !(t < bound) {
        return domain(format!("the tube formula holds for t < {bound}, got {t}"));
    }
    let inside: Vec<PoleDatum> = poles.iter().filter(|p| w.contains(p.omega)).copied().collect();
    for p in &inside {
        match form.order_at(p.omega) {
            0 => return Err(Error::NotAPole(p.omega)),
            1 => {}
            order => return Err(Error::HigherOrderPole { omega: p.omega, order }),
        }
    }
    let (value, mags) = residue_sum(&inside, n, t)?;
    check_real(value)?;
    let k = lattice_period(form).map_or(0, |p| (w.tau_max / p).floor() as u32);
    Ok(TubeFormulaReport::new(t, k, value, mags, oracle, true))
}

/// Tube formula of a catalog set at `t`, truncated to `|k| <= K`, against the
/// exact tube volume.
pub fn tube_formula(desc: &SetDescriptor, mode: TubeMode, t: f64, k: u32) -> Result<TubeFormulaReport> {
    let delta = match mode {
        TubeMode::Inner => desc.saturation(),
        // the collar expansion needs t < δ
        TubeMode::Full => desc.saturation().max(t) * 2.0 + 1.0,
    };
    let form = closed_form(desc, mode, delta)?;
    let n = desc.ambient_dim();
    let w = lattice_window(&form, -0.5, f64::from(n) - 1e-3, k)?;
    let ps = poles(&form, &w)?;
    let oracle = desc.tube_volume(t, mode)?;
    truncated_tube(&ps, &form, n, t, &w, oracle)
}

/// Exact coefficients `res(ζ, r)/(N - r)` of the terms `t^(N-r)` at the
/// integer poles `r` in `0..N`, as `(N - r, coefficient)`; `None` unless
/// every contributing term is rational.
pub fn exact_integer_terms(form: &MeromorphicForm, n: u32) -> Option<Vec<(u32, BigRational)>> {
    (0..n)
        .rev()
        .map(|r| {
            let res = form.exact_residue(i64::from(r))?;
            Some((n - r, res / BigRational::from_integer((n - r).into())))
        })
        .collect()
}

/// Poles of the tube zeta function from those of the distance zeta function:
/// `res(ζ̃, ω) = res(ζ, ω) / (N - ω)`.
pub fn tube_zeta_poles(poles: &[PoleDatum], n: u32) -> Result<Vec<PoleDatum>> {
    let nf = f64::from(n);
    poles
        .iter()
        .map(|p| {
            if (p.omega - nf).norm() < POLE_EPS {
                return domain("a pole at s = N is not supported by the tube formula");
            }
            Ok(PoleDatum {
                residue: p.residue / (nf - p.omega),
                ..*p
            })
        })
        .collect()
}

/// `Σ_ω t^(N-ω) res(ζ̃, ω)` over the tube-zeta poles in `w`.
pub fn tube_via_tubezeta(tube_poles: &[PoleDatum], n: u32, t: f64, w: &Window) -> Result<f64> {
    if !(t > 0.0) {
        return domain("t must be positive");
    }
    let nf = f64::from(n);
    let mut terms = Vec::new();
    for p in tube_poles.iter().filter(|p| w.contains(p.omega)) {
        if p.order != 1 {
            return Err(Error::HigherOrderPole {
                omega: p.omega,
                order: p.order,
            });
        }
        terms.push(((nf - p.omega) * t.ln()).exp() * p.residue);
    }
    let v = pairwise_sum_complex(&terms);
    check_real(v)?;
    Ok(v.re)
}

/// An open `N`-cube of side `side` relative to itself: the generator of a
/// self-similar spray, with inner tube `side^N - (side - 2t)_+^N`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SprayGenerator {
    pub dim: u32,
    pub side: f64,
}

impl SprayGenerator {
    pub fn cell(dim: u32, side: f64) -> Result<Self> {
        if !(1..=3).contains(&dim) {
            return Err(Error::UnsupportedDimension(dim));
        }
        if !(side > 0.0) {
            return domain("generator side must be positive");
        }
        Ok(Self { dim, side })
    }

    pub fn zeta(&self) -> MeromorphicForm {
        hole_form(self.dim, self.side, 1.0)
    }

    pub fn inradius(&self) -> f64 {
        0.5 * self.side
    }

    pub fn volume(&self) -> f64 {
        self.side.powi(self.dim as i32)
    }

    /// Inner tube of the copy scaled by `lambda`.
    fn tube(&self, lambda: f64, t: f64) -> f64 {
        let g = lambda * self.side;
        let n = self.dim as i32;
        g.powi(n) - (g - 2.0 * t).max(0.0).powi(n)
    }
}

/// Exact inner tube of the spray: a sum over ratio words, where a word whose
/// copy is already filled contributes its whole subtree in closed form.
/// Returns `None` past [`MAX_WORDS`] words.
pub fn spray_oracle(gen: &SprayGenerator, ratios: &[f64], t: f64) -> Option<f64> {
    let n = gen.dim as i32;
    // equal ratios collapse to one branch with a multiplicity
    let mut groups: Vec<(f64, f64)> = Vec::new();
    for &r in ratios {
        match groups.iter_mut().find(|(g, _)| *g == r) {
            Some(entry) => entry.1 += 1.0,
            None => groups.push((r, 1.0)),
        }
    }
    let moment: f64 = groups.iter().map(|&(r, m)| m * r.powi(n)).sum();
    let subtree = 1.0 / (1.0 - moment);
    let mut parts = Vec::new();
    let mut stack = vec![(1.0f64, 1.0f64)];
    let mut words = 0usize;
    while let Some((lambda, weight)) = stack.pop() {
        words += 1;
        if words > MAX_WORDS {
            return None;
        }
        if lambda * gen.side <= 2.0 * t {
            parts.push(weight * gen.volume() * lambda.powi(n) * subtree);
            continue;
        }
        parts.push(weight * gen.tube(lambda, t));
        for &(r, m) in &groups {
            stack.push((lambda * r, weight * m));
        }
    }
    parts.sort_by(f64::total_cmp);
    Some(pairwise_sum(&parts))
}

/// Spray zeta residues: roots of `1 - Σ r_j^s` carry `gen(ω) / (-Σ r_j^ω log r_j)`,
/// generator poles carry `res(gen, ω) / (1 - Σ r_j^ω)`.
pub fn spray_poles(gen: &MeromorphicForm, ratios: &[f64], w: &Window) -> Result<Vec<PoleDatum>> {
    let dims = spray_dims(ratios, w)?;
    let mut out = Vec::new();
    for p in &dims.poles {
        if gen.order_at(p.omega) > 0 {
            return domain(format!("generator pole coincides with a spray root at {}", p.omega));
        }
        out.push(PoleDatum {
            residue: gen.eval(p.omega)? * p.residue,
            ..*p
        });
    }
    for p in gen.poles(w)? {
        let den: Complex64 = 1.0 - ratios.iter().map(|&r| (p.omega * r.ln()).exp()).sum::<Complex64>();
        if den.norm() < POLE_EPS {
            return domain(format!("generator pole coincides with a spray root at {}", p.omega));
        }
        out.push(PoleDatum {
            residue: p.residue / den,
            ..p
        });
    }
    crate::spectrum::sort_poles(&mut out);
    Ok(out)
}

/// Tube formula of a self-similar spray against the word-sum oracle.
pub fn spray_tube(gen: &SprayGenerator, ratios: &[f64], t: f64, w: &Window) -> Result<TubeFormulaReport> {
    let form = gen.zeta();
    let r_min = ratios.iter().copied().fold(1.0, f64::min);
    let bound = validity_bound(&form) / r_min;
    if !(t < bound) {
        return domain(format!("the spray tube formula holds for t < {bound}, got {t}"));
    }
    let ps = spray_poles(&form, ratios, w)?;
    let (value, mags) = residue_sum(&ps, gen.dim, t)?;
    check_real(value)?;
    let (oracle, exact) = match spray_oracle(gen, ratios, t) {
        Some(v) => (v, true),
        None => {
            let deeper = Window::new(w.sigma_left, w.sigma_right, 2.0 * w.tau_max)?;
            let (v, _) = residue_sum(&spray_poles(&form, ratios, &deeper)?, gen.dim, t)?;
            (v.re, false)
        }
    };
    let k = ps.iter().filter(|p| p.omega.im > 0.0).count() as u32;
    Ok(TubeFormulaReport::new(t, k, value, mags, oracle, exact))
}

/// Minkowski measurability read off the critical line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Measurability {
    Measurable,
    Nonmeasurable,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeasurabilityReport {
    pub verdict: Measurability,
    /// Poles on the critical line other than a simple pole at `D`.
    pub offending: Vec<PoleDatum>,
}

/// Measurable iff the only pole on `Re s = D` is a simple pole at `D` itself.
pub fn measurability_check(principal: &[PoleDatum], d: f64) -> Result<MeasurabilityReport> {
    let on_line: Vec<&PoleDatum> = principal.iter().filter(|p| (p.omega.re - d).abs() < 1e-9).collect();
    if on_line.is_empty() {
        return domain(format!("no pole on the critical line Re s = {d}"));
    }
    let is_d = |p: &PoleDatum| (p.omega - d).norm() < 1e-9;
    let offending: Vec<PoleDatum> = on_line.iter().filter(|p| !(is_d(p) && p.order == 1)).map(|p| **p).collect();
    let has_d = on_line.iter().any(|p| is_d(p) && p.order == 1);
    let verdict = if has_d && offending.is_empty() {
        Measurability::Measurable
    } else {
        Measurability::Nonmeasurable
    };
    Ok(MeasurabilityReport { verdict, offending })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{carpet, cell_boundary};

    #[test]
    fn square_hole_polynomial() {
        // no lattice: 4t - 4t² exactly
        let sq = cell_boundary(2, 1.0).unwrap();
        let r = tube_formula(&sq, TubeMode::Inner, 0.2, 0).unwrap();
        assert!((r.formula_value - (0.8 - 0.16)).abs() < 1e-15);
        assert_eq!(r.truncation_k, 0);
    }

    #[test]
    fn beyond_validity_is_rejected() {
        let c = carpet(2).unwrap();
        assert!(tube_formula(&c, TubeMode::Inner, 0.5, 5).is_err());
    }

    #[test]
    fn empty_critical_line_is_rejected() {
        assert!(measurability_check(&[], 0.5).is_err());
    }

    #[test]
    fn oracle_counts_collapsed_words() {
        let g = SprayGenerator::cell(1, 1.0).unwrap();
        // saturated from the root: Σ_w ℓ_w = 1/(1 - Σ r)
        let v = spray_oracle(&g, &[0.5, 0.25], 10.0).unwrap();
        assert!((v - 4.0).abs() < 1e-15);
    }
}
