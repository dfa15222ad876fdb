use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::sum::compensated_sum;

/// A bounded fractal string: nonincreasing lengths with multiplicities.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FractalString {
    entries: Vec<(f64, u64)>,
    total: f64,
}

impl FractalString {
    /// Builds a string from `(length, multiplicity)` pairs, sorting them into
    /// nonincreasing order. Equal lengths are kept as separate entries; use
    /// [`FractalString::merged`] to combine them.
    pub fn new(mut entries: Vec<(f64, u64)>) -> Result<Self> {
        for &(len, mult) in &entries {
            if !(len.is_finite() && len > 0.0) {
                return domain(format!("string length {len} must be positive and finite"));
            }
            if mult == 0 {
                return domain("multiplicities must be positive");
            }
        }
        entries.sort_by(|a, b| b.0.total_cmp(&a.0));
        let total = compensated_sum(entries.iter().map(|&(l, m)| l * m as f64));
        Ok(Self { entries, total })
    }

    pub fn empty() -> Self {
        Self {
            entries: Vec::new(),
            total: 0.0,
        }
    }

    pub fn entries(&self) -> &[(f64, u64)] {
        &self.entries
    }

    pub fn total(&self) -> f64 {
        self.total
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Number of gaps counted with multiplicity.
    pub fn count(&self) -> u64 {
        self.entries.iter().map(|&(_, m)| m).sum()
    }

    pub fn largest(&self) -> Option<f64> {
        self.entries.first().map(|&(l, _)| l)
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            entries: self.entries.iter().map(|&(l, m)| (l * factor, m)).collect(),
            total: self.total * factor,
        }
    }

    /// Multiset union: lengths that agree to within `rel_tol` share one entry
    /// whose multiplicity is the sum of the contributing multiplicities.
    pub fn merged(strings: &[FractalString], rel_tol: f64) -> Self {
        let mut all: Vec<(f64, u64)> = strings.iter().flat_map(|s| s.entries.iter().copied()).collect();
        all.sort_by(|a, b| b.0.total_cmp(&a.0));
        let mut out: Vec<(f64, u64)> = Vec::with_capacity(all.len());
        for (len, mult) in all {
            match out.last_mut() {
                Some((prev, m)) if (*prev - len).abs() <= rel_tol * prev.abs() => *m += mult,
                _ => out.push((len, mult)),
            }
        }
        let total = compensated_sum(out.iter().map(|&(l, m)| l * m as f64));
        Self { entries: out, total }
    }

    /// Inner tube of the realized string: each gap of length `l` contributes
    /// `min(l, 2t)`.
    pub fn inner_tube(&self, t: f64) -> f64 {
        compensated_sum(self.entries.iter().map(|&(l, m)| m as f64 * l.min(2.0 * t)))
    }

    /// Distance from `x` to the boundary points of the canonical realization
    /// inside `[0, total]`, where the gaps are laid out from the right in
    /// nonincreasing order (so the smallest gaps accumulate at 0).
    pub fn distance(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return -x;
        }
        if x >= self.total {
            return x - self.total;
        }
        // walk from the left: smallest entries first
        let mut start = 0.0;
        for &(len, mult) in self.entries.iter().rev() {
            let span = len * mult as f64;
            if x <= start + span {
                let local = x - start;
                let i = ((local / len).floor()).min(mult as f64 - 1.0).max(0.0);
                let v = local - i * len;
                return v.min(len - v).max(0.0);
            }
            start += span;
        }
        0.0
    }
}

/// The a-string `l_j = j^(-a) - (j+1)^(-a)`, truncated after `terms` lengths.
pub fn a_string(a: f64, terms: u64) -> Result<FractalString> {
    if !(a.is_finite() && a > 0.0) {
        return domain(format!("a-string exponent must be positive, got {a}"));
    }
    if terms == 0 {
        return domain("a-string needs at least one term");
    }
    let entries = (1..=terms).map(|j| (a_string_length(a, j as f64), 1)).collect();
    FractalString::new(entries)
}

/// `x^(-a) - (x+1)^(-a)` evaluated without cancellation.
pub(crate) fn a_string_length(a: f64, x: f64) -> f64 {
    x.powf(-a) * -(-a * (1.0 / x).ln_1p()).exp_m1()
}

/// Real solution `x >= 0` of `a_string_length(a, x) = target` along the
/// decreasing branch; returns 0 if even the first length is below `target`.
pub(crate) fn a_string_index(a: f64, target: f64) -> f64 {
    if a_string_length(a, 1.0) <= target {
        return 0.0;
    }
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    while a_string_length(a, hi.exp()) > target {
        lo = hi;
        hi *= 2.0;
        if hi > 1e4 {
            return f64::INFINITY;
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if a_string_length(a, mid.exp()) > target {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-15 * hi.max(1.0) {
            break;
        }
    }
    lo.exp()
}

/// Number of a-string lengths strictly greater than `target`.
pub(crate) fn a_string_count_above(a: f64, target: f64) -> f64 {
    let x = a_string_index(a, target);
    if !x.is_finite() {
        return x;
    }
    let mut n = x.floor();
    if n < 9.0e15 {
        while n >= 1.0 && a_string_length(a, n) <= target {
            n -= 1.0;
        }
        while a_string_length(a, n + 1.0) > target {
            n += 1.0;
        }
    }
    n.max(0.0)
}
