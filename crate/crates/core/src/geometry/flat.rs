//! The flat region `{0 < x < 1, 0 < y < e^(-1/x)}` seen from the origin.
//!
//! Its tube volume decays like `t^2 e^(-1/t)`, which underflows long before
//! `t = 10^-3`, so everything here works with logarithms.

use std::sync::OnceLock;

use crate::quad::{adaptive, GaussLegendre};

const REL_TOL: f64 = 1e-10;

/// `∫_0^1 e^(-1/x) dx`.
pub fn region_area() -> f64 {
    static AREA: OnceLock<f64> = OnceLock::new();
    *AREA.get_or_init(|| log_profile_integral(1.0).exp() * (-1.0f64).exp())
}

/// `ln ∫_0^c e^(1/c - 1/x) dx`, via `y = 1/x - 1/c`: `∫_0^∞ e^(-y) / (y + 1/c)^2 dy`.
fn log_profile_integral(c: f64) -> f64 {
    let b = 1.0 / c;
    let q = adaptive(|y: f64| (-y).exp() / ((y + b) * (y + b)), 0.0, 60.0, REL_TOL, 0.0, 40);
    q.value.ln()
}

/// `ln |B_t(0) ∩ Ω|`.
pub fn log_tube(t: f64) -> f64 {
    if t > 1.0 {
        return direct_tube(t).ln();
    }
    // crossing point x* = t - u of e^(-1/x) and sqrt(t^2 - x^2), found in v = ln u
    let g = |v: f64| {
        let u = v.exp();
        -1.0 / (t - u) - 0.5 * (v + (2.0 * t - u).ln())
    };
    let mut hi = t.ln() - 1e-15;
    let mut lo = -2.0 / t - (2.0 * t).ln() - 10.0;
    while g(hi) > 0.0 {
        hi = 0.5 * (hi + t.ln());
    }
    for _ in 0..300 {
        let mid = 0.5 * (lo + hi);
        if g(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if (hi - lo).abs() < 1e-14 * hi.abs().max(1.0) {
            break;
        }
    }
    let v = 0.5 * (lo + hi);
    let u = v.exp();
    let x_star = t - u;
    // area under the graph up to x*
    let left = -1.0 / x_star + log_profile_integral(x_star);
    // circular cap: ∫_0^u sqrt(w (2t - w)) dw = u^{3/2} ∫_0^1 2 r^2 sqrt(2t - u r^2) dr
    let rule = GaussLegendre::new(24);
    let cap = 1.5 * v + rule.integrate(0.0, 1.0, |r| 2.0 * r * r * (2.0 * t - u * r * r).sqrt()).ln();
    log_add(left, cap)
}

fn log_add(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

/// Plain quadrature of `min(e^(-1/x), sqrt(t^2 - x^2))`, usable once nothing underflows.
fn direct_tube(t: f64) -> f64 {
    let top = t.min(1.0);
    let h = |x: f64| {
        if x <= 0.0 {
            0.0
        } else {
            (-1.0 / x).exp().min((t * t - x * x).max(0.0).sqrt())
        }
    };
    adaptive(h, 0.0, top, REL_TOL, 0.0, 50).value
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn area_matches_exponential_integral() {
        // e^{-1} - E_1(1)
        assert!((region_area() - 0.148_495_506_775_922_05).abs() < 1e-10);
    }

    #[test]
    fn log_tube_matches_high_precision_values() {
        // 40-digit quadrature split at the crossing point
        let reference = [
            (0.9, -2.229_719_253_739_129_2),
            (0.5, -4.016_626_874_626_668),
            (0.3, -6.164_236_823_842_606_8),
            (0.1, -14.775_168_472_157_602),
        ];
        for (t, lv) in reference {
            assert!((log_tube(t) - lv).abs() < 1e-9, "t={t}: {}", log_tube(t));
        }
        assert!((direct_tube(0.9).ln() + 2.229_719_253_739_129_2).abs() < 1e-7);
    }

    #[test]
    fn log_tube_is_finite_deep_down() {
        let l = log_tube(1e-3);
        assert!(l.is_finite());
        assert!((l + 1000.0).abs() < 20.0, "{l}");
        assert!(log_tube(5e-4) < l);
    }
}
