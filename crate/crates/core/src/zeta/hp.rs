use serde::Serialize;
use std::f64::consts::LN_2;

use crate::error::{domain, Result};
use crate::geometry::{SetDescriptor, Tube, TubeFunction};
use crate::quad::GaussLegendre;
use crate::sum::Neumaier;

/// Outcome of an integrability probe for `∫_Ω d(x, A)^(-γ) dx`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Convergent,
    Divergent,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HpReport {
    pub verdict: Verdict,
    /// `(depth, partial integral)` pairs.
    pub partial_sums: Vec<(u32, f64)>,
}

/// Settings for [`hp_integrability_probe`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HpOptions {
    /// Relative change between the two deepest truncations accepted as Cauchy.
    pub cauchy_tol: f64,
    /// Growth over the shallowest truncation that counts as divergence.
    pub blowup: f64,
}

impl Default for HpOptions {
    fn default() -> Self {
        Self {
            cauchy_tol: 1e-6,
            blowup: 10.0,
        }
    }
}

/// Partial integrals of `d(x, A)^(-γ)` over `Ω` along deepening truncations.
///
/// Ladder sets are truncated after `depth` levels of holes; other sets are
/// cut off at `d(x, A) > δ 2^(-depth)` with `δ` the saturation radius.
pub fn hp_integrability_probe(desc: &SetDescriptor, gamma: f64, depths: &[u32], opts: HpOptions) -> Result<HpReport> {
    if depths.len() < 2 {
        return domain("integrability probe needs at least two depths");
    }
    let mut depths = depths.to_vec();
    depths.sort_unstable();
    depths.dedup();
    let n = f64::from(desc.ambient_dim());
    let s = n - gamma;
    let partial_sums: Vec<(u32, f64)> = match desc.ladder() {
        Some(ladder) => {
            if s <= n - 1.0 {
                // a single hole already carries a nonintegrable singularity on its boundary
                let partial_sums = depths.iter().map(|&k| (k, f64::INFINITY)).collect();
                return Ok(HpReport {
                    verdict: Verdict::Divergent,
                    partial_sums,
                });
            }
            let c = match ladder.hole_dim {
                1 => 2.0,
                2 => 8.0,
                _ => 48.0,
            };
            let poly: f64 = (0..ladder.hole_dim).map(|i| s - f64::from(i)).product();
            let per_hole = |g: f64| c * (s * (g / 2.0).ln()).exp() / poly;
            let max = *depths.last().unwrap();
            let mut acc = Neumaier::new();
            let mut out = Vec::new();
            let mut next = 0;
            for level in ladder.levels().take(max as usize) {
                acc.add(level.count * per_hole(level.gap));
                if level.index == depths[next] {
                    out.push((level.index, acc.total()));
                    next += 1;
                }
            }
            out
        }
        None => {
            let tube = Tube::inner(desc);
            let delta = desc.saturation();
            depths.iter().map(|&k| (k, truncated_integral(&tube, gamma, delta, k))).collect()
        }
    };
    let verdict = judge(&partial_sums, opts);
    Ok(HpReport { verdict, partial_sums })
}

/// `∫_{Ω ∩ {d > ε}} d^(-γ) = δ^(-γ) V(δ) - ε^(-γ) V(ε) + γ ∫_ε^δ t^(-γ-1) V(t) dt`, with `ε = δ 2^(-k)`.
fn truncated_integral(tube: &dyn TubeFunction, gamma: f64, delta: f64, k: u32) -> f64 {
    let rule = GaussLegendre::new(20);
    let eps = delta * 2f64.powi(-(k as i32));
    let mut acc = Neumaier::new();
    acc.add(delta.powf(-gamma) * tube.volume(delta));
    acc.add(-eps.powf(-gamma) * tube.volume(eps));
    for j in 0..k {
        let hi = delta.ln() - f64::from(j) * LN_2;
        let lo = hi - LN_2;
        acc.add(gamma * rule.integrate(lo, hi, |tau| (-gamma * tau).exp() * tube.volume(tau.exp())));
    }
    acc.total().max(0.0)
}

fn judge(sums: &[(u32, f64)], opts: HpOptions) -> Verdict {
    let first = sums[0].1;
    let last = sums[sums.len() - 1].1;
    let prev = sums[sums.len() - 2].1;
    if !last.is_finite() || last > opts.blowup * first.abs().max(f64::MIN_POSITIVE) {
        return Verdict::Divergent;
    }
    if (last - prev).abs() <= opts.cauchy_tol * last.abs() {
        return Verdict::Convergent;
    }
    Verdict::Inconclusive
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{cantor_set, cell_boundary};

    const DEPTHS: [u32; 4] = [10, 50, 200, 400];

    #[test]
    fn cantor_threshold() {
        let c = cantor_set(2, 1.0 / 3.0).unwrap();
        let opts = HpOptions::default();
        assert_eq!(hp_integrability_probe(&c, 0.3, &DEPTHS, opts).unwrap().verdict, Verdict::Convergent);
        assert_eq!(hp_integrability_probe(&c, 0.4, &DEPTHS, opts).unwrap().verdict, Verdict::Divergent);
        let r = hp_integrability_probe(&c, 0.0, &DEPTHS, opts).unwrap();
        assert_eq!(r.verdict, Verdict::Convergent);
        assert!((r.partial_sums[3].1 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn tube_based_probe_on_a_square() {
        // boundary of a square: integrable iff γ < 1
        let sq = cell_boundary(2, 1.0).unwrap();
        let opts = HpOptions::default();
        let depths = [10, 40, 80, 120];
        assert_eq!(hp_integrability_probe(&sq, 0.5, &depths, opts).unwrap().verdict, Verdict::Convergent);
        assert_eq!(hp_integrability_probe(&sq, 1.2, &depths, opts).unwrap().verdict, Verdict::Divergent);
    }
}
