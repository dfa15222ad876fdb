use num_complex::Complex64;
use serde::{Serialize, Serializer};
use std::f64::consts::LN_2;

use super::closed::distance_zeta_closed;
use crate::error::{domain, Error, Result};
use crate::geometry::{SetDescriptor, Tube, TubeFunction, TubeMode};
use crate::quad::GaussLegendre;
use crate::sum::ComplexNeumaier;

/// Smallest `t` the panel march will reach before giving up.
const T_FLOOR: f64 = 1e-300;

/// A numerically estimated zeta value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZetaEstimate {
    pub value: Complex64,
    /// Standard error of a Monte Carlo mean.
    pub std_err: Option<f64>,
    /// Error bound of a quadrature.
    pub quad_err: Option<f64>,
    /// Samples or quadrature nodes used.
    pub samples: u64,
}

impl ZetaEstimate {
    /// Standard error or quadrature bound, whichever applies.
    pub fn error(&self) -> f64 {
        self.std_err.or(self.quad_err).unwrap_or(0.0)
    }
}

impl Serialize for ZetaEstimate {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Flat {
            re: f64,
            im: f64,
            stderr: f64,
            n: u64,
        }
        Flat {
            re: self.value.re,
            im: self.value.im,
            stderr: self.error(),
            n: self.samples,
        }
        .serialize(serializer)
    }
}

/// `∫_0^δ t^(s-N-1) V(t) dt` by Gauss–Legendre on dyadic panels in `log t`,
/// marching toward 0 until a power-law tail estimate drops below `tol`
/// relative to the running total.
pub fn tube_zeta_quad(tube: &dyn TubeFunction, s: Complex64, delta: f64, tol: f64) -> Result<ZetaEstimate> {
    if !(delta > 0.0 && tol > 0.0) {
        return domain("δ and tolerance must be positive");
    }
    let n = f64::from(tube.ambient_dim());
    let sn = s - n;
    let fine = GaussLegendre::new(20);
    let coarse = GaussLegendre::new(10);
    // extra subdivisions keep the oscillating factor resolved for large |Im s|
    let pieces = ((s.im.abs() * LN_2) / 2.0).ceil().max(1.0) as usize;
    let integrand = |tau: f64| (sn * tau).exp() * tube.volume(tau.exp());
    let mut acc = ComplexNeumaier::new();
    let mut err = 0.0;
    let mut evals = 0u64;
    let mut hi = delta.ln();
    loop {
        let lo = hi - LN_2;
        let mut cuts: Vec<f64> = tube.breakpoints(lo.exp(), hi.exp()).into_iter().map(f64::ln).collect();
        cuts.push(lo);
        cuts.push(hi);
        cuts.sort_by(f64::total_cmp);
        for w in cuts.windows(2) {
            let (a, b) = (w[0], w[1]);
            if b <= a {
                continue;
            }
            let step = (b - a) / pieces as f64;
            for p in 0..pieces {
                let (pa, pb) = (a + p as f64 * step, a + (p + 1) as f64 * step);
                let g = fine.integrate_complex(pa, pb, integrand);
                let c = coarse.integrate_complex(pa, pb, integrand);
                acc.add(g);
                err += (g - c).norm();
                evals += 30;
            }
        }
        // tail ∫_0^{t_lo} with V(t) ≈ V(t_lo) (t / t_lo)^β
        let t_lo = lo.exp();
        let lv = tube.log_volume(t_lo);
        let lv2 = tube.log_volume(2.0 * t_lo);
        let beta = (lv2 - lv) / LN_2;
        let beta_prev = (tube.log_volume(4.0 * t_lo) - lv2) / LN_2;
        let (tail, spread) = if lv.is_finite() {
            let head = (sn * lo + lv).exp();
            (head / (sn + beta), (head / (sn + beta) - head / (sn + beta_prev)).norm())
        } else {
            (Complex64::new(0.0, 0.0), 0.0)
        };
        let total = acc.total();
        // deep enough, a tail with a stable exponent is trusted even when it is not yet small
        let settled = t_lo < 1e-20 * delta && spread <= tol * total.norm();
        if tail.norm() <= tol * total.norm() || settled || !lv.is_finite() {
            return Ok(ZetaEstimate {
                value: total + tail,
                std_err: None,
                quad_err: Some(err + spread.max(if settled { 0.0 } else { tail.norm() })),
                samples: evals,
            });
        }
        if t_lo < T_FLOOR || !total.is_finite() {
            return Err(Error::Nonconvergence(format!(
                "tube zeta quadrature at s = {s}: tail {:.3e} still above tolerance at t = {t_lo:.3e}",
                tail.norm()
            )));
        }
        hi = lo;
    }
}

/// [`tube_zeta_quad`] for a catalog set.
pub fn tube_zeta_quad_desc(desc: &SetDescriptor, mode: TubeMode, s: Complex64, delta: f64, tol: f64) -> Result<ZetaEstimate> {
    let tube = Tube::new(desc, mode)?;
    tube_zeta_quad(&tube, s, delta, tol)
}

/// `|ζ_A(s) - δ^(s-N) V(δ) - (N - s) ζ̃_A(s)|` with the closed form on the
/// left and quadrature for the tube zeta.
pub fn functional_eq_residual(desc: &SetDescriptor, mode: TubeMode, s: Complex64, delta: f64) -> Result<f64> {
    let n = f64::from(desc.ambient_dim());
    let z = distance_zeta_closed(desc, s, delta, mode)?;
    let v = desc.tube_volume(delta, mode)?;
    let head = (Complex64::new(delta.ln(), 0.0) * (s - n)).exp() * v;
    if (s - n).norm() == 0.0 {
        return Ok((z - head).norm());
    }
    let tz = tube_zeta_quad_desc(desc, mode, s, delta, 1e-12)?;
    Ok((z - head - (n - s) * tz.value).norm())
}

/// `ζ_A(s)` computed from the tube through the functional equation:
/// `δ^(s-N) V(δ) + (N - s) ζ̃_A(s)`.
pub fn distance_zeta_via_tube(tube: &dyn TubeFunction, s: Complex64, delta: f64, tol: f64) -> Result<ZetaEstimate> {
    let n = f64::from(tube.ambient_dim());
    let head = (Complex64::new(delta.ln(), 0.0) * (s - n)).exp() * tube.volume(delta);
    let tz = tube_zeta_quad(tube, s, delta, tol)?;
    Ok(ZetaEstimate {
        value: head + (n - s) * tz.value,
        std_err: None,
        quad_err: tz.quad_err.map(|e| e * (n - s).norm()),
        samples: tz.samples,
    })
}

/// Estimate of `res(ζ̃_A, D)` as the limit of `ε ζ̃_A(D + ε)`, with `ζ_A`
/// evaluated through the functional equation and the limit taken by Neville
/// extrapolation over the given `ε` values.
pub fn tube_zeta_residue_at(tube: &dyn TubeFunction, d: f64, delta: f64, eps: &[f64]) -> Result<f64> {
    if eps.len() < 2 {
        return domain("extrapolation needs at least two ε values");
    }
    let n = f64::from(tube.ambient_dim());
    let mut ys = Vec::with_capacity(eps.len());
    for &e in eps {
        let z = distance_zeta_via_tube(tube, Complex64::new(d + e, 0.0), delta, 1e-10)?;
        ys.push(e * z.value.re);
    }
    Ok(neville_at_zero(eps, &ys) / (n - d))
}

fn neville_at_zero(xs: &[f64], ys: &[f64]) -> f64 {
    let mut p = ys.to_vec();
    let k = xs.len();
    for level in 1..k {
        for i in 0..k - level {
            let (xi, xj) = (xs[i], xs[i + level]);
            p[i] = (xj * p[i] - xi * p[i + 1]) / (xj - xi);
        }
    }
    p[0]
}
