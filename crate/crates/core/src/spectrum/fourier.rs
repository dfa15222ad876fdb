use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::PI;

use crate::error::{domain, Error, Result};
use crate::geometry::TubeFunction;
use crate::sum::{pairwise_sum, pairwise_sum_complex};

const NODES: usize = 1 << 16;
const PERIOD_TOL: f64 = 1e-9;

/// Fourier data of the periodic envelope `G(τ) = V(e^(-τ)) e^(τ(N-D))`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FourierReport {
    /// `(k, (1/T) Ĝ(k/T))` for `-kmax <= k <= kmax`.
    pub coefficients: Vec<(i64, Complex64)>,
    pub g_min: f64,
    pub g_max: f64,
    /// Mean of `G` over one period; equals the `k = 0` coefficient.
    pub g_mean: f64,
}

impl FourierReport {
    pub fn coefficient(&self, k: i64) -> Option<Complex64> {
        self.coefficients.iter().find(|(j, _)| *j == k).map(|&(_, c)| c)
    }
}

/// Fourier coefficients `(1/T) ∫_0^T e^(-2πikτ/T) G(τ) dτ` of the envelope.
///
/// `G` is sampled on `[τ0, τ0 + T)` with `τ0 = 4T` (deep enough to lie in
/// the periodic regime of the catalog sets) and checked against its values
/// one period later.
pub fn fourier_residues(tube: &dyn TubeFunction, n: u32, d: f64, period: f64, kmax: i64) -> Result<FourierReport> {
    if !(period > 0.0) {
        return domain("period must be positive");
    }
    let tau0 = 4.0 * period;
    let h = period / NODES as f64;
    let nd = f64::from(n) - d;
    let g = |tau: f64| tube.log_volume((-tau).exp()).exp() * (tau * nd).exp();
    let samples: Vec<f64> = (0..NODES).into_par_iter().map(|j| g(tau0 + j as f64 * h)).collect();
    let deviation = (0..NODES)
        .step_by(NODES / 256)
        .map(|j| {
            let a = samples[j];
            let b = g(tau0 + period + j as f64 * h);
            (a - b).abs() / a.abs().max(1e-300)
        })
        .fold(0.0, f64::max);
    if !(deviation <= PERIOD_TOL) {
        return Err(Error::Periodicity(deviation));
    }
    let coefficients = (-kmax..=kmax)
        .into_par_iter()
        .map(|k| {
            let terms: Vec<Complex64> = samples
                .iter()
                .enumerate()
                .map(|(j, &v)| Complex64::from_polar(v, -2.0 * PI * (k * j as i64).rem_euclid(NODES as i64) as f64 / NODES as f64))
                .collect();
            (k, pairwise_sum_complex(&terms) / NODES as f64)
        })
        .collect();
    let g_min = samples.iter().copied().fold(f64::INFINITY, f64::min);
    let g_max = samples.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let g_mean = pairwise_sum(&samples) / NODES as f64;
    Ok(FourierReport {
        coefficients,
        g_min,
        g_max,
        g_mean,
    })
}
