use std::f64::consts::LN_2;

use crate::error::{domain, Error, Result};
use crate::geometry::{SetDescriptor, Tube, TubeFunction, TubeMode};
use crate::quad::GaussLegendre;

/// Dyadic blocks used to judge divergence of the tube zeta integral.
const FIRST_BLOCK: u32 = 40;
const LAST_BLOCK: u32 = 200;

/// Bisection for the abscissa of convergence on `[lo, hi]`.
///
/// `diverges(σ)` must report divergence of the defining integral or series
/// at real `σ`; it must hold at `lo` and fail at `hi`.
pub fn abscissa_scan<F>(diverges: F, lo: f64, hi: f64, tol: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<bool>,
{
    if !(lo < hi) {
        return domain("abscissa bracket must satisfy lo < hi");
    }
    if !diverges(lo)? {
        return Err(Error::NonBracketing(format!("converges already at the lower end σ = {lo}")));
    }
    if diverges(hi)? {
        return Err(Error::NonBracketing(format!("diverges still at the upper end σ = {hi}")));
    }
    let (mut a, mut b) = (lo, hi);
    while b - a > tol {
        let mid = 0.5 * (a + b);
        if diverges(mid)? {
            a = mid;
        } else {
            b = mid;
        }
    }
    Ok(0.5 * (a + b))
}

/// Least-squares slope of `log B_j` against `j`, where
/// `B_j = ∫_{δ 2^(-j-1)}^{δ 2^(-j)} t^(σ-N-1) V(t) dt`.
/// The integral converges at 0 exactly when the blocks decay, i.e. slope < 0.
pub fn block_slope(tube: &dyn TubeFunction, sigma: f64, delta: f64) -> f64 {
    let rule = GaussLegendre::new(20);
    let n = f64::from(tube.ambient_dim());
    let mut sx = 0.0;
    let mut sy = 0.0;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    let mut count = 0.0;
    for j in FIRST_BLOCK..=LAST_BLOCK {
        let hi = delta.ln() - f64::from(j) * LN_2;
        let lo = hi - LN_2;
        // integrate the block scaled by its left endpoint to stay in range
        let lv0 = tube.log_volume(lo.exp());
        let shift = (sigma - n) * lo + lv0;
        let b = rule.integrate(lo, hi, |tau| ((sigma - n) * tau + tube.log_volume(tau.exp()) - shift).exp());
        let y = b.ln() + shift;
        let x = f64::from(j);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        count += 1.0;
    }
    (count * sxy - sx * sy) / (count * sxx - sx * sx)
}

/// Abscissa of convergence of the tube zeta function of `desc` (which
/// coincides with that of the distance zeta function).
pub fn tube_abscissa(desc: &SetDescriptor, mode: TubeMode, delta: f64) -> Result<f64> {
    let tube = Tube::new(desc, mode)?;
    let n = f64::from(desc.ambient_dim());
    abscissa_scan(|sigma| Ok(block_slope(&tube, sigma, delta) >= 0.0), -1.0, n + 0.5, 1e-4)
}
