//! Minkowski content envelopes and box-dimension fits from tube volumes.

use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::LN_10;

use crate::error::{domain, Error, Result};
use crate::geometry::{Rfd, Tube, TubeFunction};
use crate::sum::Neumaier;

/// Points per decade of [`default_grid`].
pub const POINTS_PER_DECADE: usize = 64;

/// Decades at the small end of the grid over which the envelope is taken.
const ENVELOPE_DECADES: f64 = 2.0;

/// Grid sup and inf of `V(t) / t^(N-D)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ContentEnvelope {
    pub d: f64,
    pub lower: f64,
    pub upper: f64,
    pub t_range: (f64, f64),
}

impl ContentEnvelope {
    /// `(upper - lower) / lower`.
    pub fn relative_width(&self) -> f64 {
        (self.upper - self.lower) / self.lower
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lower <= x && x <= self.upper
    }
}

/// Least-squares box-dimension estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DimFit {
    pub d: f64,
    pub slope_std_err: f64,
    pub points_used: usize,
}

/// One sample of the tube function, as written by the CLI.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TubeSample {
    pub t: f64,
    pub volume: f64,
    pub log_t: f64,
    pub log_v: f64,
}

/// Geometric grid on `[t_min, t_max]` with [`POINTS_PER_DECADE`] points per decade.
pub fn default_grid(t_min: f64, t_max: f64) -> Result<Vec<f64>> {
    geometric_grid(t_min, t_max, POINTS_PER_DECADE)
}

/// Geometric grid on `[t_min, t_max]`, both ends included.
pub fn geometric_grid(t_min: f64, t_max: f64, per_decade: usize) -> Result<Vec<f64>> {
    if !(t_min > 0.0 && t_min < t_max && t_max.is_finite()) || per_decade == 0 {
        return domain(format!("grid needs 0 < t_min < t_max, got [{t_min}, {t_max}]"));
    }
    let (lo, hi) = (t_min.ln(), t_max.ln());
    let n = (((hi - lo) / LN_10) * per_decade as f64).ceil().max(1.0) as usize;
    Ok((0..=n).map(|i| (lo + (hi - lo) * i as f64 / n as f64).exp()).collect())
}

fn sorted(grid: &[f64]) -> Result<Vec<f64>> {
    if grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    if grid.iter().any(|&t| !(t > 0.0 && t.is_finite())) {
        return domain("grid points must be positive and finite");
    }
    let mut g = grid.to_vec();
    g.sort_by(f64::total_cmp);
    Ok(g)
}

/// Samples of `V` on the grid, in increasing `t`.
pub fn sample(tube: &dyn TubeFunction, grid: &[f64]) -> Result<Vec<TubeSample>> {
    let g = sorted(grid)?;
    Ok(g.par_iter()
        .map(|&t| {
            let log_v = tube.log_volume(t);
            TubeSample {
                t,
                volume: log_v.exp(),
                log_t: t.ln(),
                log_v,
            }
        })
        .collect())
}

/// Inf and sup of `V(t) / t^(N-D)` over the final two decades of the grid.
///
/// These are grid estimates of the lower and upper `D`-dimensional
/// Minkowski contents; nothing is certified.
pub fn content_envelope(tube: &dyn TubeFunction, d: f64, grid: &[f64]) -> Result<ContentEnvelope> {
    let n = f64::from(tube.ambient_dim());
    if d > n {
        return domain(format!("trial dimension {d} exceeds the ambient dimension {n}"));
    }
    let g = sorted(grid)?;
    let cut = g[0] * 10f64.powf(ENVELOPE_DECADES);
    let mut tail: Vec<f64> = g.into_iter().take_while(|&t| t <= cut).collect();
    // the extremes of V(t)/t^(N-D) sit at the kinks of V, which a grid misses
    let (lo, hi) = (tail[0], tail[tail.len() - 1]);
    tail.extend(tube.breakpoints(lo, hi).into_iter().filter(|&b| b > lo && b < hi));
    let ratios: Vec<f64> = tail
        .par_iter()
        .map(|&t| (tube.log_volume(t) - (n - d) * t.ln()).exp())
        .collect();
    if ratios.iter().any(|r| r.is_nan()) {
        return domain("tube function returned NaN on the grid");
    }
    let lower = ratios.iter().copied().fold(f64::INFINITY, f64::min);
    let upper = ratios.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(ContentEnvelope {
        d,
        lower,
        upper,
        t_range: (lo, hi),
    })
}

/// Box dimension `N - β` from the least-squares slope `β` of `log V` against `log t`.
///
/// The largest half-decade of the grid is dropped to avoid saturation, and for
/// numerical tubes also the smallest half-decade. Negative estimates are
/// returned unchanged.
pub fn box_dim_fit(tube: &dyn TubeFunction, grid: &[f64]) -> Result<DimFit> {
    let g = sorted(grid)?;
    let (t_min, t_max) = (g[0], g[g.len() - 1]);
    if g.len() < 8 || (t_max / t_min).log10() < 2.0 - 1e-9 {
        return Err(Error::DegenerateGrid(format!(
            "fit needs at least 8 points over 2 decades, got {} points over [{t_min}, {t_max}]",
            g.len()
        )));
    }
    let half = 10f64.sqrt();
    let lo = if tube.is_numeric() { t_min * half } else { t_min };
    let hi = t_max / half;
    let used: Vec<f64> = g.into_iter().filter(|&t| t >= lo && t <= hi).collect();
    let ys: Vec<f64> = used.par_iter().map(|&t| tube.log_volume(t)).collect();
    let xs: Vec<f64> = used.iter().map(|t| t.ln()).collect();
    if ys.iter().any(|y| !y.is_finite()) {
        return domain("tube volume vanished or failed on the fit range");
    }
    let (slope, se) = least_squares(&xs, &ys);
    Ok(DimFit {
        d: f64::from(tube.ambient_dim()) - slope,
        slope_std_err: se,
        points_used: used.len(),
    })
}

/// Slope and its standard error, with compensated accumulators.
fn least_squares(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = |v: &[f64]| {
        let mut acc = Neumaier::new();
        v.iter().for_each(|&x| acc.add(x));
        acc.total() / n
    };
    let (mx, my) = (mean(xs), mean(ys));
    let (mut sxx, mut sxy) = (Neumaier::new(), Neumaier::new());
    for (&x, &y) in xs.iter().zip(ys) {
        sxx.add((x - mx) * (x - mx));
        sxy.add((x - mx) * (y - my));
    }
    let slope = sxy.total() / sxx.total();
    let mut rss = Neumaier::new();
    for (&x, &y) in xs.iter().zip(ys) {
        let r = y - my - slope * (x - mx);
        rss.add(r * r);
    }
    let se = if n > 2.0 {
        (rss.total() / (n - 2.0) / sxx.total()).sqrt()
    } else {
        f64::NAN
    };
    (slope, se)
}

fn check_inside(rfd: &Rfd, grid: &[f64]) -> Result<()> {
    let sat = rfd.set.saturation();
    match grid.iter().copied().fold(0.0, f64::max) {
        t if t >= sat => domain(format!("grid reaches t = {t}, beyond the saturation radius {sat}")),
        _ => Ok(()),
    }
}

/// [`content_envelope`] for the relative tube `|A_t ∩ Ω|`.
pub fn relative_content_envelope(rfd: &Rfd, d: f64, grid: &[f64]) -> Result<ContentEnvelope> {
    check_inside(rfd, grid)?;
    content_envelope(&Tube::inner(&rfd.set), d, grid)
}

/// [`box_dim_fit`] for the relative tube `|A_t ∩ Ω|`.
pub fn relative_box_dim_fit(rfd: &Rfd, grid: &[f64]) -> Result<DimFit> {
    check_inside(rfd, grid)?;
    box_dim_fit(&Tube::inner(&rfd.set), grid)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::FnTube;

    #[test]
    fn grid_has_both_ends() {
        let g = default_grid(1e-4, 1e-2).unwrap();
        assert_eq!(g.len(), 129);
        assert!((g[0] - 1e-4).abs() < 1e-18 && (g[128] - 1e-2).abs() < 1e-16);
    }

    #[test]
    fn pure_power_fit_is_exact() {
        let tube = FnTube {
            dim: 2,
            f: |t: f64| 3.0 * t.powf(0.75),
        };
        let fit = box_dim_fit(&tube, &default_grid(1e-5, 1e-1).unwrap()).unwrap();
        assert!((fit.d - 1.25).abs() < 1e-12);
        assert!(fit.slope_std_err < 1e-12);
        let env = content_envelope(&tube, 1.25, &default_grid(1e-5, 1e-1).unwrap()).unwrap();
        assert!((env.lower - 3.0).abs() < 1e-12 && (env.upper - 3.0).abs() < 1e-12);
        assert!(env.t_range.1 <= 1e-3 && env.t_range.1 > 0.96e-3);
    }

    #[test]
    fn short_grids_are_degenerate() {
        let tube = FnTube { dim: 1, f: |t: f64| t };
        assert!(matches!(box_dim_fit(&tube, &default_grid(1e-2, 1e-1).unwrap()), Err(Error::DegenerateGrid(_))));
        assert!(matches!(box_dim_fit(&tube, &[]), Err(Error::EmptyGrid)));
    }
}
