use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::rational::{approx_rational, MAX_DENOMINATOR};
use crate::spectrum::{PoleDatum, Window};
use crate::sum::ComplexNeumaier;

/// Distance below which `s` counts as sitting on a pole.
pub const POLE_EPS: f64 = 1e-9;

/// The factor `q^s - m` in a term's denominator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Geometric {
    pub q: f64,
    pub m: f64,
}

impl Geometric {
    fn log_q(&self) -> f64 {
        self.q.ln()
    }

    /// Real part of the lattice `{s : q^s = m}`.
    pub fn abscissa(&self) -> f64 {
        self.m.ln() / self.log_q()
    }

    /// Vertical spacing of the lattice.
    pub fn period(&self) -> f64 {
        2.0 * PI / self.log_q().abs()
    }

    pub fn lattice_point(&self, k: i64) -> Complex64 {
        Complex64::new(self.abscissa(), k as f64 * self.period())
    }

    /// Lattice point within [`POLE_EPS`] of `s`, if any.
    fn nearest(&self, s: Complex64) -> Option<Complex64> {
        let k = (s.im / self.period()).round() as i64;
        let w = self.lattice_point(k);
        ((s - w).norm() < POLE_EPS).then_some(w)
    }
}

/// Rational data for a term, when every parameter is a small fraction.
#[derive(Debug, Clone, PartialEq)]
struct ExactTerm {
    coeff: BigRational,
    ratio: BigRational,
    roots: Vec<i64>,
    geometric: Option<(BigRational, BigRational)>,
}

/// `coeff · base^(-s) · scale^s / (Π_i (s - r_i) · (q^s - m))`; the
/// geometric factor is optional.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Term {
    pub coeff: f64,
    pub base: f64,
    pub scale: f64,
    pub roots: Vec<f64>,
    pub geometric: Option<Geometric>,
    #[serde(skip)]
    exact: Option<ExactTerm>,
}

impl Term {
    pub fn new(coeff: f64, base: f64, scale: f64, roots: Vec<f64>, geometric: Option<Geometric>) -> Self {
        assert!(base > 0.0 && scale > 0.0, "term base and scale must be positive");
        if let Some(g) = geometric {
            assert!(g.q > 0.0 && g.q != 1.0 && g.m > 0.0, "geometric factor needs q > 0, q != 1, m > 0");
        }
        let mut term = Self {
            coeff,
            base,
            scale,
            roots,
            geometric,
            exact: None,
        };
        term.exact = term.recover_exact();
        term
    }

    fn recover_exact(&self) -> Option<ExactTerm> {
        let q = |x: f64| approx_rational(x, MAX_DENOMINATOR);
        let roots = self
            .roots
            .iter()
            .map(|&r| (r.fract() == 0.0 && r.abs() < 1e9).then_some(r as i64))
            .collect::<Option<Vec<_>>>()?;
        let geometric = match self.geometric {
            Some(g) => Some((q(g.q)?, q(g.m)?)),
            None => None,
        };
        Some(ExactTerm {
            coeff: q(self.coeff)?,
            ratio: q(self.scale)? / q(self.base)?,
            roots,
            geometric,
        })
    }

    fn log_ratio(&self) -> f64 {
        self.scale.ln() - self.base.ln()
    }

    /// Value at `s`, without any pole checks.
    pub fn eval_unchecked(&self, s: Complex64) -> Complex64 {
        let num = (s * self.log_ratio()).exp() * self.coeff;
        let mut den = Complex64::one();
        for &r in &self.roots {
            den *= s - r;
        }
        if let Some(g) = self.geometric {
            den *= (s * g.log_q()).exp() - g.m;
        }
        num / den
    }

    fn scaled(&self, lambda: f64) -> Self {
        Term::new(self.coeff, self.base, self.scale * lambda, self.roots.clone(), self.geometric)
    }

    /// Order of the pole of this term at `s` (0 when regular there).
    fn order_at(&self, s: Complex64) -> u32 {
        let roots = self.roots.iter().filter(|&&r| (s - r).norm() < POLE_EPS).count() as u32;
        let lattice = self.geometric.and_then(|g| g.nearest(s)).is_some() as u32;
        roots + lattice
    }

    /// Residue of a simple pole at (or within [`POLE_EPS`] of) `s`.
    fn simple_residue(&self, s: Complex64) -> Complex64 {
        if let Some(&r) = self.roots.iter().find(|&&r| (s - r).norm() < POLE_EPS) {
            let w = Complex64::new(r, 0.0);
            let mut den = Complex64::one();
            let mut skipped = false;
            for &ri in &self.roots {
                if !skipped && ri == r {
                    skipped = true;
                    continue;
                }
                den *= w - ri;
            }
            if let Some(g) = self.geometric {
                den *= (w * g.log_q()).exp() - g.m;
            }
            return (w * self.log_ratio()).exp() * self.coeff / den;
        }
        if let Some(w) = self.geometric.and_then(|g| g.nearest(s)) {
            let g = self.geometric.unwrap();
            let mut den = Complex64::new(g.m * g.log_q(), 0.0);
            for &ri in &self.roots {
                den *= w - ri;
            }
            return (w * self.log_ratio()).exp() * self.coeff / den;
        }
        Complex64::zero()
    }

    fn exact_residue(&self, r: i64) -> Option<BigRational> {
        let ex = self.exact.as_ref()?;
        if !ex.roots.contains(&r) {
            return Some(BigRational::zero());
        }
        let mut den = BigRational::one();
        let mut skipped = false;
        for &ri in &ex.roots {
            if !skipped && ri == r {
                skipped = true;
                continue;
            }
            den *= BigRational::from_integer(BigInt::from(r - ri));
        }
        if let Some((q, m)) = &ex.geometric {
            let g = rational_pow(q, r) - m;
            if g.is_zero() {
                return None;
            }
            den *= g;
        }
        if den.is_zero() {
            return None;
        }
        Some(&ex.coeff * rational_pow(&ex.ratio, r) / den)
    }
}

fn rational_pow(x: &BigRational, e: i64) -> BigRational {
    let mut out = BigRational::one();
    let base = if e < 0 { x.recip() } else { x.clone() };
    for _ in 0..e.unsigned_abs() {
        out *= &base;
    }
    out
}

/// A closed-form meromorphic function: a finite sum of [`Term`]s.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct MeromorphicForm {
    terms: Vec<Term>,
}

impl MeromorphicForm {
    pub fn new(terms: Vec<Term>) -> Self {
        Self { terms }
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn push(&mut self, term: Term) {
        self.terms.push(term);
    }

    pub fn extended(mut self, other: MeromorphicForm) -> Self {
        self.terms.extend(other.terms);
        self
    }

    /// `s ↦ λ^s f(s)`.
    pub fn scaled(&self, lambda: f64) -> Self {
        Self {
            terms: self.terms.iter().map(|t| t.scaled(lambda)).collect(),
        }
    }

    /// Whether `other` is `s ↦ λ^s f(s)` term by term, decided in exact
    /// rational arithmetic. `false` when any datum is not a small fraction.
    pub fn is_exact_rescaling(&self, other: &MeromorphicForm, lambda: f64) -> bool {
        let Some(l) = approx_rational(lambda, MAX_DENOMINATOR) else {
            return false;
        };
        self.terms.len() == other.terms.len()
            && self.terms.iter().zip(&other.terms).all(|(a, b)| match (&a.exact, &b.exact) {
                (Some(x), Some(y)) => {
                    x.coeff == y.coeff && x.roots == y.roots && x.geometric == y.geometric && &x.ratio * &l == y.ratio
                }
                _ => false,
            })
    }

    /// Value at `s`; fails within [`POLE_EPS`] of a pole of any term.
    pub fn eval(&self, s: Complex64) -> Result<Complex64> {
        if let Some(pole) = self.nearby_singularity(s) {
            return Err(Error::PoleProximity { s, pole });
        }
        Ok(self.eval_unchecked(s))
    }

    pub fn eval_unchecked(&self, s: Complex64) -> Complex64 {
        let mut acc = ComplexNeumaier::new();
        for t in &self.terms {
            acc.add(t.eval_unchecked(s));
        }
        acc.total()
    }

    fn nearby_singularity(&self, s: Complex64) -> Option<Complex64> {
        for t in &self.terms {
            if let Some(&r) = t.roots.iter().find(|&&r| (s - r).norm() < POLE_EPS) {
                return Some(Complex64::new(r, 0.0));
            }
            if let Some(w) = t.geometric.and_then(|g| g.nearest(s)) {
                return Some(w);
            }
        }
        None
    }

    /// Pole order at `s` (0 if `s` is not a singularity of any term).
    pub fn order_at(&self, s: Complex64) -> u32 {
        self.terms.iter().map(|t| t.order_at(s)).max().unwrap_or(0)
    }

    /// Residue at the simple pole `omega`.
    pub fn residue(&self, omega: Complex64) -> Result<Complex64> {
        match self.order_at(omega) {
            0 => Err(Error::NotAPole(omega)),
            1 => {
                let mut acc = ComplexNeumaier::new();
                for t in &self.terms {
                    acc.add(t.simple_residue(omega));
                }
                Ok(acc.total())
            }
            order => Err(Error::HigherOrderPole { omega, order }),
        }
    }

    /// Exact residue at an integer pole, when every contributing term is rational.
    pub fn exact_residue(&self, r: i64) -> Option<BigRational> {
        let mut acc = BigRational::zero();
        for t in &self.terms {
            acc += t.exact_residue(r)?;
        }
        Some(acc)
    }

    /// Candidate singularities inside `w`, deduplicated and sorted by `(Re, Im)`.
    pub fn singularities(&self, w: &Window) -> Vec<Complex64> {
        let mut out: Vec<Complex64> = Vec::new();
        for t in &self.terms {
            for &r in &t.roots {
                let z = Complex64::new(r, 0.0);
                if w.contains(z) {
                    out.push(z);
                }
            }
            if let Some(g) = t.geometric {
                let sigma = g.abscissa();
                if sigma >= w.sigma_left && sigma <= w.sigma_right {
                    let kmax = (w.tau_max / g.period()).floor() as i64;
                    for k in -kmax..=kmax {
                        let z = g.lattice_point(k);
                        if w.contains(z) {
                            out.push(z);
                        }
                    }
                }
            }
        }
        out.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        let mut dedup: Vec<Complex64> = Vec::with_capacity(out.len());
        for z in out {
            if !dedup.iter().any(|p| (p - z).norm() < POLE_EPS) {
                dedup.push(z);
            }
        }
        dedup
    }

    /// Poles inside `w` with their residues. Singularities whose residues
    /// cancel across terms are dropped as removable.
    pub fn poles(&self, w: &Window) -> Result<Vec<PoleDatum>> {
        let mut out = Vec::new();
        for z in self.singularities(w) {
            let order = self.order_at(z);
            if order > 1 {
                return Err(Error::HigherOrderPole { omega: z, order });
            }
            let residue = self.residue(z)?;
            let scale = self
                .terms
                .iter()
                .map(|t| t.simple_residue(z).norm())
                .fold(0.0, f64::max);
            if residue.norm() <= 1e-13 * scale {
                continue;
            }
            out.push(PoleDatum {
                omega: z,
                order,
                residue,
            });
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn carpet3() -> MeromorphicForm {
        MeromorphicForm::new(vec![Term::new(
            48.0,
            2.0,
            1.0,
            vec![0.0, 1.0, 2.0],
            Some(Geometric { q: 3.0, m: 26.0 }),
        )])
    }

    #[test]
    fn exact_integer_residues() {
        let f = carpet3();
        let r = |n: i64, d: i64| BigRational::new(n.into(), d.into());
        assert_eq!(f.exact_residue(0), Some(r(-24, 25)));
        assert_eq!(f.exact_residue(1), Some(r(24, 23)));
        assert_eq!(f.exact_residue(2), Some(r(-6, 17)));
        assert_eq!(f.exact_residue(5), Some(r(0, 1)));
    }

    #[test]
    fn value_at_three_is_unit_volume() {
        let v = carpet3().eval(Complex64::new(3.0, 0.0)).unwrap();
        assert!((v - 1.0).norm() < 1e-14);
    }

    #[test]
    fn pole_proximity_is_reported() {
        let f = carpet3();
        assert!(matches!(f.eval(Complex64::new(1.0 + 1e-12, 0.0)), Err(Error::PoleProximity { .. })));
        let d = 26f64.ln() / 3f64.ln();
        assert!(f.eval(Complex64::new(d, 0.0)).is_err());
    }

    #[test]
    fn cancelling_residues_are_removable() {
        let f = MeromorphicForm::new(vec![
            Term::new(1.0, 1.0, 1.0, vec![0.0], None),
            Term::new(-1.0, 1.0, 1.0, vec![0.0], None),
        ]);
        let w = Window::new(-1.0, 1.0, 1.0).unwrap();
        assert!(f.poles(&w).unwrap().is_empty());
    }

    #[test]
    fn double_pole_is_rejected() {
        let f = MeromorphicForm::new(vec![Term::new(1.0, 1.0, 1.0, vec![0.0, 0.0], None)]);
        assert!(matches!(f.residue(Complex64::zero()), Err(Error::HigherOrderPole { order: 2, .. })));
        assert!(matches!(f.residue(Complex64::new(0.5, 0.0)), Err(Error::NotAPole(_))));
    }
}
