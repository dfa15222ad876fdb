//! Complex dimensions: poles of closed forms, residues, spray roots, and
//! Fourier coefficients of periodic tube envelopes.

mod fourier;
mod spray;

pub use fourier::{fourier_residues, FourierReport};
pub use spray::{spray_dims, Lattice, SprayDims};

use num_complex::Complex64;
use serde::{Deserialize, Serialize, Serializer};
use std::f64::consts::PI;

use crate::error::{domain, Error, Result};
use crate::sum::ComplexNeumaier;
use crate::zeta::MeromorphicForm;

/// A vertical strip `sigma_left <= Re s <= sigma_right`, cut at `|Im s| <= tau_max`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub sigma_left: f64,
    pub sigma_right: f64,
    pub tau_max: f64,
}

impl Window {
    pub fn new(sigma_left: f64, sigma_right: f64, tau_max: f64) -> Result<Self> {
        if !(sigma_left <= sigma_right) {
            return domain(format!("window needs sigma_left <= sigma_right, got {sigma_left} > {sigma_right}"));
        }
        if !(tau_max >= 0.0) {
            return domain("window height must be nonnegative");
        }
        Ok(Self {
            sigma_left,
            sigma_right,
            tau_max,
        })
    }

    pub fn contains(&self, z: Complex64) -> bool {
        z.re >= self.sigma_left && z.re <= self.sigma_right && z.im.abs() <= self.tau_max
    }
}

/// A complex dimension with its order and residue.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoleDatum {
    pub omega: Complex64,
    pub order: u32,
    pub residue: Complex64,
}

impl Serialize for PoleDatum {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Flat {
            re: f64,
            im: f64,
            order: u32,
            res_re: f64,
            res_im: f64,
        }
        Flat {
            re: self.omega.re,
            im: self.omega.im,
            order: self.order,
            res_re: self.residue.re,
            res_im: self.residue.im,
        }
        .serialize(serializer)
    }
}

pub(crate) fn sort_poles(poles: &mut [PoleDatum]) {
    poles.sort_by(|a, b| a.omega.re.total_cmp(&b.omega.re).then(a.omega.im.total_cmp(&b.omega.im)));
}

/// Poles of `form` inside `w`, sorted by `(Re, Im)`.
pub fn poles(form: &MeromorphicForm, w: &Window) -> Result<Vec<PoleDatum>> {
    let mut out = form.poles(w)?;
    sort_poles(&mut out);
    Ok(out)
}

/// Residue of `form` at the simple pole `omega`.
pub fn residue_analytic(form: &MeromorphicForm, omega: Complex64) -> Result<Complex64> {
    form.residue(omega)
}

/// `(1/2πi) ∮_{|s-ω|=radius} f(s) ds` by the trapezoid rule on `nodes` and
/// `2 nodes` points; the two must agree, or another singularity is suspected.
pub fn residue_contour<F>(f: F, omega: Complex64, radius: f64, nodes: usize) -> Result<Complex64>
where
    F: Fn(Complex64) -> Complex64,
{
    if !(radius > 0.0) || nodes < 4 {
        return domain("contour needs a positive radius and at least 4 nodes");
    }
    let ring = |n: usize| {
        let mut acc = ComplexNeumaier::new();
        for j in 0..n {
            let e = Complex64::from_polar(radius, 2.0 * PI * j as f64 / n as f64);
            acc.add(f(omega + e) * e);
        }
        acc.total() / n as f64
    };
    let coarse = ring(nodes);
    let fine = ring(2 * nodes);
    let diff = (fine - coarse).norm();
    if !diff.is_finite() || diff > 1e-9 * fine.norm().max(1.0) {
        return Err(Error::ContourUnstable(diff));
    }
    Ok(fine)
}

/// Default contour radius at `omega`: half the distance to the nearest other
/// singularity of `form`, capped at 0.5.
pub fn default_radius(form: &MeromorphicForm, omega: Complex64) -> f64 {
    let reach = 2.0 + omega.im.abs();
    let w = Window {
        sigma_left: omega.re - reach,
        sigma_right: omega.re + reach,
        tau_max: reach + omega.im.abs(),
    };
    let nearest = form
        .singularities(&w)
        .into_iter()
        .map(|z| (z - omega).norm())
        .filter(|&d| d > crate::zeta::POLE_EPS)
        .fold(f64::INFINITY, f64::min);
    (0.5 * nearest).min(0.5)
}

/// Contour residue of a closed form with the default radius and 256 nodes.
pub fn residue_contour_form(form: &MeromorphicForm, omega: Complex64) -> Result<Complex64> {
    let radius = default_radius(form, omega);
    residue_contour(|s| form.eval_unchecked(s), omega, radius, 256)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn contour_of_entire_function_vanishes() {
        let r = residue_contour(|s: Complex64| s.exp(), Complex64::new(0.3, 1.0), 0.5, 64).unwrap();
        assert!(r.norm() < 1e-14);
    }

    #[test]
    fn contour_finds_simple_pole() {
        let r = residue_contour(|s: Complex64| 3.0 / (s - 1.0), Complex64::new(1.0, 0.0), 0.5, 64).unwrap();
        assert!((r - 3.0).norm() < 1e-14);
    }

    #[test]
    fn window_validation() {
        assert!(Window::new(1.0, 0.0, 1.0).is_err());
        let w = Window::new(-1.0, 1.0, 0.0).unwrap();
        assert!(w.contains(Complex64::new(0.0, 0.0)));
        assert!(!w.contains(Complex64::new(0.0, 0.1)));
    }
}
