use nalgebra::DMatrix;
use num_complex::Complex64;
use num_integer::Integer;
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::PI;

use super::{sort_poles, PoleDatum, Window};
use crate::error::{domain, Result};

const COMMENSURABLE_TOL: f64 = 1e-12;
const CF_DEPTH: usize = 40;
const MAX_DENOMINATOR: i64 = 10_000;
const MAX_DEGREE: i64 = 4096;
const DEDUP: f64 = 1e-9;
const ROOT_TOL: f64 = 1e-10;

/// Lattice structure of a ratio list: `r_j = r^(k_j)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Lattice {
    pub base: f64,
    pub exponents: Vec<u64>,
}

/// Roots of `Σ r_j^s = 1` inside a window.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SprayDims {
    pub poles: Vec<PoleDatum>,
    pub lattice: Option<Lattice>,
    /// Newton seeds that did not converge to a root inside the window.
    pub failed_seeds: usize,
}

/// `Σ r_j^s` and its derivative.
fn moment(ratios: &[f64], s: Complex64) -> (Complex64, Complex64) {
    let mut f = Complex64::new(0.0, 0.0);
    let mut df = Complex64::new(0.0, 0.0);
    for &r in ratios {
        let lr = r.ln();
        let p = (s * lr).exp();
        f += p;
        df += p * lr;
    }
    (f, df)
}

/// Residue of `1/(1 - Σ r_j^s)` at a simple root `omega`.
pub(crate) fn spray_residue(ratios: &[f64], omega: Complex64) -> Complex64 {
    let (_, df) = moment(ratios, omega);
    -1.0 / df
}

/// Best rational approximation `p/q` of `x` by continued fractions.
fn commensurate(x: f64) -> Option<(i64, i64)> {
    let (mut h0, mut h1) = (0i64, 1i64);
    let (mut k0, mut k1) = (1i64, 0i64);
    let mut r = x;
    for _ in 0..CF_DEPTH {
        let a = r.floor();
        if a.abs() > 1e12 {
            return None;
        }
        let a = a as i64;
        let h2 = a.checked_mul(h1)?.checked_add(h0)?;
        let k2 = a.checked_mul(k1)?.checked_add(k0)?;
        if k2 > MAX_DENOMINATOR {
            return None;
        }
        if (x - h2 as f64 / k2 as f64).abs() <= COMMENSURABLE_TOL * x.abs().max(1.0) {
            return Some((h2, k2));
        }
        let frac = r - a as f64;
        if frac <= 0.0 {
            return None;
        }
        r = 1.0 / frac;
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
    }
    None
}

/// Detects `r_j = r^(k_j)` with integer `k_j`.
fn detect_lattice(ratios: &[f64]) -> Option<Lattice> {
    let l1 = ratios[0].ln();
    let fracs: Vec<(i64, i64)> = ratios.iter().map(|r| commensurate(r.ln() / l1)).collect::<Option<_>>()?;
    let lcm = fracs.iter().fold(1i64, |acc, &(_, q)| acc.lcm(&q));
    let ns: Vec<i64> = fracs.iter().map(|&(p, q)| p * (lcm / q)).collect();
    if ns.iter().any(|&n| n <= 0) {
        return None;
    }
    let g = ns.iter().fold(0i64, |acc, &n| acc.gcd(&n));
    let exponents: Vec<u64> = ns.iter().map(|&n| (n / g) as u64).collect();
    if *exponents.iter().max()? as i64 > MAX_DEGREE {
        return None;
    }
    let base = (l1 * g as f64 / lcm as f64).exp();
    Some(Lattice { base, exponents })
}

/// Complex dimensions of a self-similar spray with scaling ratios `ratios`:
/// the roots of `Σ r_j^s = 1` in `w`, each with the residue of `1/(1 - Σ r_j^s)`.
pub fn spray_dims(ratios: &[f64], w: &Window) -> Result<SprayDims> {
    if ratios.is_empty() {
        return domain("spray needs at least one ratio");
    }
    if ratios.iter().any(|&r| !(r > 0.0 && r < 1.0)) {
        return domain("spray ratios must lie in (0, 1)");
    }
    let lattice = detect_lattice(ratios);
    let (candidates, failed) = match &lattice {
        Some(lat) => (lattice_roots(lat, w), 0),
        None => newton_roots(ratios, w),
    };
    let mut poles: Vec<PoleDatum> = Vec::new();
    for s in candidates {
        let s = polish(ratios, s);
        let (f, _) = moment(ratios, s);
        if (f - 1.0).norm() > ROOT_TOL || !w.contains(s) {
            continue;
        }
        if poles.iter().any(|p| (p.omega - s).norm() < DEDUP) {
            continue;
        }
        poles.push(PoleDatum {
            omega: s,
            order: 1,
            residue: spray_residue(ratios, s),
        });
    }
    sort_poles(&mut poles);
    Ok(SprayDims {
        poles,
        lattice,
        failed_seeds: failed,
    })
}

fn polish(ratios: &[f64], mut s: Complex64) -> Complex64 {
    for _ in 0..4 {
        let (f, df) = moment(ratios, s);
        let step = (f - 1.0) / df;
        if !step.is_finite() {
            break;
        }
        s -= step;
        if step.norm() < 1e-16 * s.norm().max(1.0) {
            break;
        }
    }
    s
}

/// Roots of `Σ_j z^(k_j) = 1` via the companion matrix, mapped back through
/// every branch of `s = log z / log r` that lands in the window.
fn lattice_roots(lat: &Lattice, w: &Window) -> Vec<Complex64> {
    let degree = *lat.exponents.iter().max().unwrap() as usize;
    // coefficients c_0..c_degree of P(z) = Σ z^k_j - 1
    let mut c = vec![0.0; degree + 1];
    c[0] = -1.0;
    for &k in &lat.exponents {
        c[k as usize] += 1.0;
    }
    let lead = c[degree];
    let zs: Vec<Complex64> = if degree == 1 {
        vec![Complex64::new(-c[0] / lead, 0.0)]
    } else {
        let mut m = DMatrix::<f64>::zeros(degree, degree);
        for i in 1..degree {
            m[(i, i - 1)] = 1.0;
        }
        for i in 0..degree {
            m[(i, degree - 1)] = -c[i] / lead;
        }
        m.complex_eigenvalues().iter().copied().collect()
    };
    let ln_r = lat.base.ln();
    let mut out = Vec::new();
    for z in zs {
        let z = newton_poly(&c, z);
        let sigma = z.norm().ln() / ln_r;
        if sigma < w.sigma_left - 1e-9 || sigma > w.sigma_right + 1e-9 {
            continue;
        }
        let arg = z.arg();
        // Im s = (arg z + 2πn) / ln r, |Im s| <= tau_max
        let span = w.tau_max * ln_r.abs();
        let n_lo = ((-span - arg) / (2.0 * PI)).ceil() as i64;
        let n_hi = ((span - arg) / (2.0 * PI)).floor() as i64;
        for n in n_lo..=n_hi {
            out.push(Complex64::new(sigma, (arg + 2.0 * PI * n as f64) / ln_r));
        }
    }
    out
}

fn newton_poly(c: &[f64], mut z: Complex64) -> Complex64 {
    for _ in 0..8 {
        let mut p = Complex64::new(0.0, 0.0);
        let mut dp = Complex64::new(0.0, 0.0);
        for &ci in c.iter().rev() {
            dp = dp * z + p;
            p = p * z + ci;
        }
        let step = p / dp;
        if !step.is_finite() {
            break;
        }
        z -= step;
        if step.norm() < 1e-17 * z.norm().max(1e-300) {
            break;
        }
    }
    z
}

fn newton_roots(ratios: &[f64], w: &Window) -> (Vec<Complex64>, usize) {
    let (ds, dt) = (0.1, 0.25);
    let ns = ((w.sigma_right - w.sigma_left) / ds).floor() as i64;
    let nt = (w.tau_max / dt).floor() as i64;
    let seeds: Vec<Complex64> = (0..=ns)
        .flat_map(|i| (-nt..=nt).map(move |j| Complex64::new(w.sigma_left + i as f64 * ds, j as f64 * dt)))
        .collect();
    let results: Vec<Option<Complex64>> = seeds
        .par_iter()
        .map(|&seed| {
            let mut s = seed;
            for _ in 0..60 {
                let (f, df) = moment(ratios, s);
                let step = (f - 1.0) / df;
                if !step.is_finite() {
                    return None;
                }
                s -= step;
                if step.norm() < 1e-14 * s.norm().max(1.0) {
                    return w.contains(s).then_some(s);
                }
            }
            None
        })
        .collect();
    let failed = results.iter().filter(|r| r.is_none()).count();
    (results.into_iter().flatten().collect(), failed)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn commensurability_test() {
        assert_eq!(commensurate(1.0), Some((1, 1)));
        assert_eq!(commensurate(2.0), Some((2, 1)));
        assert_eq!(commensurate(1.5), Some((3, 2)));
        assert!(commensurate(2f64.ln() / 3f64.ln()).is_none());
    }

    #[test]
    fn lattice_of_powers_of_one_half() {
        let lat = detect_lattice(&[0.5, 0.25, 0.125]).unwrap();
        assert!((lat.base - 0.5).abs() < 1e-15);
        assert_eq!(lat.exponents, vec![1, 2, 3]);
        let lat = detect_lattice(&[0.25, 0.125]).unwrap();
        assert!((lat.base - 0.5).abs() < 1e-15);
        assert_eq!(lat.exponents, vec![2, 3]);
    }

    #[test]
    fn two_halves_give_dimension_one() {
        let w = Window::new(-2.0, 2.0, 0.0).unwrap();
        let d = spray_dims(&[0.5, 0.5], &w).unwrap();
        assert_eq!(d.poles.len(), 1);
        assert!((d.poles[0].omega - 1.0).norm() < 1e-15);
    }

    #[test]
    fn golden_lattice_has_real_and_shifted_roots() {
        // z + z^2 = 1 with z = 2^{-s}: z = (√5 - 1)/2 and z = -(√5 + 1)/2
        let w = Window::new(-2.0, 2.0, 10.0).unwrap();
        let d = spray_dims(&[0.5, 0.25], &w).unwrap();
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        let real = phi.ln() / 2f64.ln();
        assert!(d.poles.iter().any(|p| (p.omega - real).norm() < 1e-12));
        let neg = -phi.ln() / 2f64.ln();
        assert!(d.poles.iter().any(|p| (p.omega.re - neg).abs() < 1e-12 && p.omega.im.abs() > 1.0));
    }
}
