//! Gauss–Legendre rules and a simple adaptive integrator built on them.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::sum::{ComplexNeumaier, Neumaier};

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss–Legendre rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = (n + 1) / 2;
        for i in 0..m {
            // Tricomi's initial guess, then Newton on P_n.
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Mapped nodes and weights on `[a, b]`.
    pub fn mapped(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(&x, &w)| (mid + half * x, half * w))
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        let mut acc = Neumaier::new();
        for (x, w) in self.mapped(a, b) {
            acc.add(w * f(x));
        }
        acc.total()
    }

    pub fn integrate_complex<F: FnMut(f64) -> Complex64>(&self, a: f64, b: f64, mut f: F) -> Complex64 {
        let mut acc = ComplexNeumaier::new();
        for (x, w) in self.mapped(a, b) {
            acc.add(f(x) * w);
        }
        acc.total()
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
}

/// Adaptive bisection comparing a 10-point and a 20-point Gauss–Legendre rule
/// on each subinterval. Stops when the estimated error on every accepted
/// interval is below `rel_tol * |total|` (or below `abs_floor`).
pub fn adaptive<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    rel_tol: f64,
    abs_floor: f64,
    max_depth: usize,
) -> Quadrature {
    let coarse = GaussLegendre::new(10);
    let fine = GaussLegendre::new(20);
    let mut evaluations = 0;
    let mut estimate = |lo: f64, hi: f64, evals: &mut usize| {
        let c = coarse.integrate(lo, hi, &mut f);
        let g = fine.integrate(lo, hi, &mut f);
        *evals += 30;
        (g, (g - c).abs())
    };
    let (first, first_err) = estimate(a, b, &mut evaluations);
    let mut stack = vec![(a, b, first, first_err, 0usize)];
    let mut total = Neumaier::new();
    let mut error = Neumaier::new();
    let scale = first.abs().max(abs_floor);
    while let Some((lo, hi, val, err, depth)) = stack.pop() {
        let width_share = (hi - lo) / (b - a);
        if err <= (rel_tol * scale).max(abs_floor) * width_share || depth >= max_depth {
            total.add(val);
            error.add(err);
            continue;
        }
        let mid = 0.5 * (lo + hi);
        let (l, le) = estimate(lo, mid, &mut evaluations);
        let (r, re) = estimate(mid, hi, &mut evaluations);
        stack.push((lo, mid, l, le, depth + 1));
        stack.push((mid, hi, r, re, depth + 1));
    }
    Quadrature {
        value: total.total(),
        error: error.total(),
        evaluations,
    }
}
