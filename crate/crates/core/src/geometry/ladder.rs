use num_bigint::BigUint;
use num_traits::Pow;
use serde::{Deserialize, Serialize};

use crate::sum::Neumaier;

/// Self-similar gap structure: level `k >= 1` has
/// `first_count * count_ratio^(k-1)` open holes (intervals, squares or cubes)
/// of side `first_gap * gap_ratio^(k-1)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapLadder {
    pub hole_dim: u32,
    pub first_count: u64,
    pub count_ratio: u64,
    pub first_gap: f64,
    pub gap_ratio: f64,
}

/// One level of a [`GapLadder`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Level {
    pub index: u32,
    pub count: f64,
    pub gap: f64,
}

impl GapLadder {
    pub(crate) fn new(hole_dim: u32, first_count: u64, count_ratio: u64, first_gap: f64, gap_ratio: f64) -> Self {
        Self {
            hole_dim,
            first_count,
            count_ratio,
            first_gap,
            gap_ratio,
        }
    }

    pub fn level(&self, k: u32) -> Level {
        assert!(k >= 1, "ladder levels start at 1");
        let e = f64::from(k - 1);
        Level {
            index: k,
            count: self.first_count as f64 * (self.count_ratio as f64).powf(e),
            gap: self.first_gap * self.gap_ratio.powf(e),
        }
    }

    /// Levels in order; the iterator is infinite.
    pub fn levels(&self) -> impl Iterator<Item = Level> + '_ {
        (1..).map(move |k| self.level(k))
    }

    /// Exact count of holes at level `k`.
    pub fn exact_count(&self, k: u32) -> BigUint {
        BigUint::from(self.first_count) * BigUint::from(self.count_ratio).pow(k - 1)
    }

    /// `count_ratio * gap_ratio^N`; the ladder has finite total hole volume iff this is < 1.
    pub fn volume_ratio(&self) -> f64 {
        self.count_ratio as f64 * self.gap_ratio.powi(self.hole_dim as i32)
    }

    pub fn total_hole_volume(&self) -> f64 {
        self.first_count as f64 * self.first_gap.powi(self.hole_dim as i32) / (1.0 - self.volume_ratio())
    }

    /// Number of levels whose gap exceeds `threshold`.
    pub fn levels_above(&self, threshold: f64) -> u32 {
        if self.first_gap <= threshold {
            return 0;
        }
        let est = ((threshold / self.first_gap).ln() / self.gap_ratio.ln()).floor().max(0.0) as u32;
        let mut k = est.max(1);
        while k > 1 && self.level(k).gap <= threshold {
            k -= 1;
        }
        while self.level(k + 1).gap > threshold {
            k += 1;
        }
        k
    }

    /// Similarity dimension of the hole lattice: `log(count_ratio) / log(1/gap_ratio)`.
    pub fn dimension(&self) -> f64 {
        (self.count_ratio as f64).ln() / (1.0 / self.gap_ratio).ln()
    }

    /// Inner tube volume `Σ_holes |hole ∩ {d < t}|`.
    ///
    /// Levels with gap `> 2t` contribute `g^N (1 - (1 - 2t/g)^N)` per hole; all deeper
    /// levels are completely filled and summed as a geometric tail. Terms are
    /// assembled in log space so that deep levels neither overflow nor cancel.
    pub fn inner_tube(&self, t: f64) -> f64 {
        let nf = f64::from(self.hole_dim);
        let open = self.levels_above(2.0 * t);
        let ln_c1 = (self.first_count as f64).ln();
        let ln_rho = (self.count_ratio as f64).ln();
        let ln_g1 = self.first_gap.ln();
        let ln_lam = self.gap_ratio.ln();
        let mut acc = Neumaier::new();
        for k in 1..=open {
            let e = f64::from(k - 1);
            let ln_g = ln_g1 + e * ln_lam;
            let g = ln_g.exp();
            let frac = -(nf * (-2.0 * t / g).ln_1p()).exp_m1();
            acc.add((ln_c1 + e * ln_rho + nf * ln_g + frac.ln()).exp());
        }
        let ratio = self.volume_ratio();
        let ln_tail = ln_c1 + nf * ln_g1 + f64::from(open) * ratio.ln() - (1.0 - ratio).ln();
        acc.add(ln_tail.exp());
        acc.total()
    }

    /// Kinks of the inner tube: `t = g_k / 2` inside `(lo, hi)`.
    pub fn breakpoints(&self, lo: f64, hi: f64) -> Vec<f64> {
        let mut out = Vec::new();
        for level in self.levels() {
            let b = 0.5 * level.gap;
            if b <= lo {
                break;
            }
            if b < hi {
                out.push(b);
            }
        }
        out
    }

    pub(crate) fn scaled(&self, factor: f64) -> Self {
        let mut out = self.clone();
        out.first_gap *= factor;
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn carpet_ladder() -> GapLadder {
        GapLadder::new(2, 1, 8, 1.0 / 3.0, 1.0 / 3.0)
    }

    #[test]
    fn counts_follow_recursion_exactly() {
        let l = carpet_ladder();
        for k in 1..40 {
            assert_eq!(l.exact_count(k + 1), l.exact_count(k) * BigUint::from(8u32));
        }
        assert_eq!(l.exact_count(2), BigUint::from(8u32));
    }

    #[test]
    fn levels_above_counts_strictly_larger_gaps() {
        let l = GapLadder::new(1, 1, 2, 1.0 / 3.0, 1.0 / 3.0);
        assert_eq!(l.levels_above(0.5), 0);
        assert_eq!(l.levels_above(0.2), 1);
        assert_eq!(l.levels_above(1.0 / 9.0), 1);
        assert_eq!(l.levels_above(0.1), 2);
    }

    #[test]
    fn tube_at_saturation_is_total_volume() {
        let l = carpet_ladder();
        assert!((l.inner_tube(0.2) - 1.0).abs() < 1e-15);
        assert!((l.total_hole_volume() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn deep_tube_stays_finite() {
        let l = carpet_ladder();
        let v = l.inner_tube(1e-250);
        assert!(v.is_finite() && v > 0.0);
        let d = l.dimension();
        let g = v / 1e-250f64.powf(2.0 - d);
        assert!(g > 1.3 && g < 1.4, "{g}");
    }
}
