use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use super::flat;
use super::ladder::GapLadder;
use super::string::{a_string, a_string_count_above, a_string_length, FractalString};
use crate::error::{domain, Error, Result};
use crate::sum::{compensated_sum, Neumaier};

/// Which neighbourhood a tube volume refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum TubeMode {
    /// `|A_t ∩ Ω|`, the neighbourhood relative to the reference region.
    #[default]
    Inner,
    /// `|A_t|`, the full Euclidean neighbourhood.
    Full,
}

/// Catalog of supported sets, in unit coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SetKind {
    /// Generalized Cantor set `C^(m,a)` in `[0, 1]`.
    Cantor { m: u32, a: f64 },
    /// Sierpiński carpet in the unit square (`dim = 2`) or its analog in the unit cube.
    Carpet { dim: u32 },
    /// The boundary of the unit cell `[0,1]^dim`, relative to the cell.
    CellBoundary { dim: u32 },
    /// The infinite a-string realized as `{j^(-a) : j >= 1} ∪ {0}` in `[0, 1]`.
    AString { a: f64 },
    /// Concentric circles of radii `k^(-a)` inside the unit disk; `rings = None` means infinitely many.
    Nest { a: f64, rings: Option<u64> },
    /// The origin relative to the region `{0 < x < 1, 0 < y < e^(-1/x)}`.
    FlatDrum,
    /// A fractal string in its canonical realization in `[0, total]`.
    String { string: FractalString },
    /// Disjoint union of one-dimensional sets.
    Union { parts: Vec<SetDescriptor> },
}

/// A catalog set `A` together with its reference region `Ω`, placed by a
/// scale factor and a translation along the first axis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SetDescriptor {
    kind: SetKind,
    scale: f64,
    offset: f64,
}

/// A relative fractal drum `(A, Ω)`: the set and its reference region.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Rfd {
    pub set: SetDescriptor,
}

impl Rfd {
    pub fn new(set: SetDescriptor) -> Self {
        Self { set }
    }

    pub fn region_volume(&self) -> f64 {
        self.set.region_volume()
    }

    pub fn tube_volume(&self, t: f64) -> Result<f64> {
        self.set.tube_volume(t, TubeMode::Inner)
    }
}

/// `C^(m,a)`: `m` copies scaled by `a`, with `m - 1` equal gaps of `h = (1 - m a)/(m - 1)`.
pub fn cantor_set(m: u32, a: f64) -> Result<SetDescriptor> {
    if m < 2 {
        return domain(format!("cantor set needs m >= 2, got {m}"));
    }
    if !(a > 0.0 && a * f64::from(m) < 1.0) {
        return domain(format!("cantor set needs 0 < a < 1/m, got a = {a}, m = {m}"));
    }
    Ok(SetDescriptor::unit(SetKind::Cantor { m, a }))
}

pub fn carpet(dim: u32) -> Result<SetDescriptor> {
    match dim {
        2 | 3 => Ok(SetDescriptor::unit(SetKind::Carpet { dim })),
        other => Err(Error::UnsupportedDimension(other)),
    }
}

/// `(∂[0,side]^dim, [0,side]^dim)` for `dim` in 1..=3.
pub fn cell_boundary(dim: u32, side: f64) -> Result<SetDescriptor> {
    if !(1..=3).contains(&dim) {
        return Err(Error::UnsupportedDimension(dim));
    }
    if !(side > 0.0 && side.is_finite()) {
        return domain("cell side must be positive");
    }
    Ok(SetDescriptor::unit(SetKind::CellBoundary { dim }).scaled(side))
}

/// The a-string as a set: infinite (`terms = None`) or truncated after `terms` lengths.
pub fn a_string_set(a: f64, terms: Option<u64>) -> Result<SetDescriptor> {
    match terms {
        None => {
            if !(a.is_finite() && a > 0.0) {
                return domain(format!("a-string exponent must be positive, got {a}"));
            }
            Ok(SetDescriptor::unit(SetKind::AString { a }))
        }
        Some(j) => Ok(string_set(a_string(a, j)?)),
    }
}

pub fn fractal_nest(a: f64, rings: Option<u64>) -> Result<SetDescriptor> {
    if !(a.is_finite() && a > 0.0) {
        return domain(format!("nest exponent must be positive, got {a}"));
    }
    if rings == Some(0) {
        return domain("a nest needs at least one circle");
    }
    Ok(SetDescriptor::unit(SetKind::Nest { a, rings }))
}

pub fn flat_drum() -> SetDescriptor {
    SetDescriptor::unit(SetKind::FlatDrum)
}

pub fn string_set(string: FractalString) -> SetDescriptor {
    SetDescriptor::unit(SetKind::String { string })
}

/// Union of one-dimensional parts; each part keeps its own placement.
pub fn union(parts: Vec<SetDescriptor>) -> Result<SetDescriptor> {
    if parts.is_empty() {
        return domain("union of no sets");
    }
    if parts.iter().any(|p| p.ambient_dim() != 1) {
        return domain("unions are only supported on the line");
    }
    Ok(SetDescriptor::unit(SetKind::Union { parts }))
}

/// Nest radii `k^(-a)` for `k = 1..=count`.
pub fn nest_radii(a: f64, count: u64) -> Vec<f64> {
    (1..=count).map(|k| (k as f64).powf(-a)).collect()
}

impl SetDescriptor {
    fn unit(kind: SetKind) -> Self {
        Self {
            kind,
            scale: 1.0,
            offset: 0.0,
        }
    }

    pub fn kind(&self) -> &SetKind {
        &self.kind
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    /// The same set dilated by `factor` about the origin.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            kind: self.kind.clone(),
            scale: self.scale * factor,
            offset: self.offset * factor,
        }
    }

    /// The same set translated by `dx` along the first axis.
    pub fn translated(&self, dx: f64) -> Self {
        Self {
            kind: self.kind.clone(),
            scale: self.scale,
            offset: self.offset + dx,
        }
    }

    pub fn ambient_dim(&self) -> u32 {
        match &self.kind {
            SetKind::Carpet { dim } | SetKind::CellBoundary { dim } => *dim,
            SetKind::Nest { .. } | SetKind::FlatDrum => 2,
            _ => 1,
        }
    }

    /// Gap ladder in world coordinates, for self-similar sets.
    pub fn ladder(&self) -> Option<GapLadder> {
        let unit = match &self.kind {
            SetKind::Cantor { m, a } => {
                let h = (1.0 - f64::from(*m) * a) / f64::from(m - 1);
                GapLadder::new(1, u64::from(m - 1), u64::from(*m), h, *a)
            }
            SetKind::Carpet { dim: 2 } => GapLadder::new(2, 1, 8, 1.0 / 3.0, 1.0 / 3.0),
            SetKind::Carpet { .. } => GapLadder::new(3, 1, 26, 1.0 / 3.0, 1.0 / 3.0),
            _ => return None,
        };
        Some(unit.scaled(self.scale))
    }

    /// Box dimension of the set relative to its region, when known in closed form.
    pub fn known_dimension(&self) -> Option<f64> {
        match &self.kind {
            SetKind::Cantor { .. } | SetKind::Carpet { .. } => self.ladder().map(|l| l.dimension()),
            SetKind::CellBoundary { dim } => Some(f64::from(dim - 1)),
            SetKind::AString { a } => Some(1.0 / (1.0 + a)),
            SetKind::Nest { a, rings: None } => Some((2.0 / (1.0 + a)).max(1.0)),
            SetKind::Nest { .. } => Some(1.0),
            SetKind::FlatDrum => Some(f64::NEG_INFINITY),
            SetKind::String { .. } => Some(0.0),
            SetKind::Union { parts } => parts
                .iter()
                .map(|p| p.known_dimension())
                .try_fold(f64::NEG_INFINITY, |acc, d| d.map(|d| acc.max(d))),
        }
    }

    /// `|Ω|`.
    pub fn region_volume(&self) -> f64 {
        let n = self.ambient_dim() as i32;
        let unit = match &self.kind {
            SetKind::Cantor { .. } | SetKind::Carpet { .. } | SetKind::CellBoundary { .. } | SetKind::AString { .. } => 1.0,
            SetKind::Nest { .. } => PI,
            SetKind::FlatDrum => flat::region_area(),
            SetKind::String { string } => string.total(),
            SetKind::Union { parts } => compensated_sum(parts.iter().map(|p| p.region_volume())),
        };
        unit * self.scale.powi(n)
    }

    /// Largest `t` at which the inner tube is still growing; beyond it `|A_t ∩ Ω| = |Ω|`.
    pub fn saturation(&self) -> f64 {
        let unit = match &self.kind {
            SetKind::Cantor { .. } | SetKind::Carpet { .. } => 0.5 * self.unit_ladder().first_gap,
            SetKind::CellBoundary { .. } => 0.5,
            SetKind::AString { a } => 0.5 * a_string_length(*a, 1.0),
            SetKind::Nest { a, rings } => {
                let gap = 0.5 * a_string_length(*a, 1.0);
                match rings {
                    Some(1) => 1.0,
                    Some(k) => gap.max((*k as f64).powf(-a)),
                    None => gap,
                }
            }
            SetKind::FlatDrum => (1.0 + (-2.0f64).exp()).sqrt(),
            SetKind::String { string } => 0.5 * string.largest().unwrap_or(0.0),
            SetKind::Union { parts } => {
                return parts.iter().map(|p| p.saturation()).fold(0.0, f64::max) * self.scale;
            }
        };
        unit * self.scale
    }

    pub fn supports(&self, mode: TubeMode) -> bool {
        match mode {
            TubeMode::Inner => true,
            TubeMode::Full => !matches!(self.kind, SetKind::FlatDrum),
        }
    }

    /// Tube volume `|A_t ∩ Ω|` (inner) or `|A_t|` (full).
    pub fn tube_volume(&self, t: f64, mode: TubeMode) -> Result<f64> {
        if !(t > 0.0) {
            return domain(format!("tube radius must be positive, got {t}"));
        }
        if !self.supports(mode) {
            return domain("full tube is not available for this set");
        }
        if let SetKind::FlatDrum = self.kind {
            return Ok(self.log_tube_volume(t, mode)?.exp());
        }
        let n = self.ambient_dim() as i32;
        let u = t / self.scale;
        Ok(self.scale.powi(n) * self.unit_tube(u, mode))
    }

    /// Natural log of the tube volume; finite even where the volume underflows.
    pub fn log_tube_volume(&self, t: f64, mode: TubeMode) -> Result<f64> {
        if !(t > 0.0) {
            return domain(format!("tube radius must be positive, got {t}"));
        }
        match self.kind {
            SetKind::FlatDrum => {
                if mode == TubeMode::Full {
                    return domain("full tube is not available for this set");
                }
                let n = f64::from(self.ambient_dim());
                Ok(n * self.scale.ln() + flat::log_tube(t / self.scale))
            }
            _ => Ok(self.tube_volume(t, mode)?.ln()),
        }
    }

    fn unit_tube(&self, t: f64, mode: TubeMode) -> f64 {
        let inner = match &self.kind {
            SetKind::Cantor { .. } | SetKind::Carpet { .. } => {
                // ladder() already carries the scale, so rebuild it at unit scale
                let ladder = self.unit_ladder();
                // the holes exhaust the unit cell once every one of them is covered
                if 2.0 * t >= ladder.first_gap {
                    1.0
                } else {
                    ladder.inner_tube(t)
                }
            }
            SetKind::CellBoundary { dim } => {
                let n = *dim as i32;
                1.0 - (1.0 - 2.0 * t).max(0.0).powi(n)
            }
            SetKind::AString { a } => {
                let n = a_string_count_above(*a, 2.0 * t);
                2.0 * t * n + (n + 1.0).powf(-a)
            }
            SetKind::Nest { a, rings } => nest_inner_tube(*a, *rings, t),
            SetKind::FlatDrum => flat::log_tube(t).exp(),
            SetKind::String { string } => string.inner_tube(t),
            SetKind::Union { parts } => {
                compensated_sum(parts.iter().map(|p| p.tube_volume(t, TubeMode::Inner).unwrap_or(0.0)))
            }
        };
        match mode {
            TubeMode::Inner => inner,
            TubeMode::Full => inner + self.unit_outer(t),
        }
    }

    pub(crate) fn unit_ladder(&self) -> GapLadder {
        self.ladder().expect("ladder set").scaled(1.0 / self.scale)
    }

    /// Volume of `A_t` outside the region, in unit coordinates.
    fn unit_outer(&self, t: f64) -> f64 {
        match &self.kind {
            SetKind::Carpet { dim } | SetKind::CellBoundary { dim } => cube_collar(*dim, 1.0, t),
            SetKind::Nest { .. } => PI * t * (2.0 + t),
            // one-dimensional sets, unions included, sit on a single interval
            _ => 2.0 * t,
        }
    }

    /// Interval spanned by the region along the first axis, in world coordinates.
    pub fn extent(&self) -> (f64, f64) {
        let (lo, hi) = match &self.kind {
            SetKind::Nest { .. } => (-1.0, 1.0),
            SetKind::String { string } => (0.0, string.total()),
            SetKind::Union { parts } => {
                let lo = parts.iter().map(|p| p.extent().0).fold(f64::INFINITY, f64::min);
                let hi = parts.iter().map(|p| p.extent().1).fold(f64::NEG_INFINITY, f64::max);
                (lo, hi)
            }
            _ => (0.0, 1.0),
        };
        (self.offset + self.scale * lo, self.offset + self.scale * hi)
    }

    /// Axis-aligned box containing `Ω` (and `A_margin` when `margin > 0`).
    pub fn bounding_box(&self, margin: f64) -> (Vec<f64>, Vec<f64>) {
        let n = self.ambient_dim() as usize;
        let (x0, x1) = self.extent();
        let mut lo = vec![x0 - margin; n];
        let mut hi = vec![x1 + margin; n];
        for i in 1..n {
            let (a, b) = match self.kind {
                SetKind::Nest { .. } => (-1.0, 1.0),
                SetKind::FlatDrum => (0.0, (-1.0f64).exp()),
                _ => (0.0, 1.0),
            };
            lo[i] = a * self.scale - margin;
            hi[i] = b * self.scale + margin;
        }
        (lo, hi)
    }

    /// Whether `x` lies in the reference region `Ω`.
    pub fn in_region(&self, x: &[f64]) -> bool {
        let u: Vec<f64> = self.to_unit(x);
        match &self.kind {
            SetKind::Nest { .. } => u.iter().map(|v| v * v).sum::<f64>() < 1.0,
            SetKind::FlatDrum => u[0] > 0.0 && u[0] < 1.0 && u[1] > 0.0 && u[1] < (-1.0 / u[0]).exp(),
            SetKind::String { string } => u[0] > 0.0 && u[0] < string.total(),
            SetKind::Union { parts } => parts.iter().any(|p| p.in_region(&u)),
            _ => u.iter().all(|&v| v > 0.0 && v < 1.0),
        }
    }

    fn to_unit(&self, x: &[f64]) -> Vec<f64> {
        let n = self.ambient_dim() as usize;
        (0..n)
            .map(|i| {
                let v = x.get(i).copied().unwrap_or(0.0);
                if i == 0 {
                    (v - self.offset) / self.scale
                } else {
                    v / self.scale
                }
            })
            .collect()
    }

    /// Euclidean distance from `x` to the set `A`.
    pub fn distance(&self, x: &[f64]) -> f64 {
        let u = self.to_unit(x);
        self.scale * self.unit_distance(&u)
    }

    fn unit_distance(&self, u: &[f64]) -> f64 {
        match &self.kind {
            SetKind::Cantor { m, a } => cantor_distance(*m, *a, u[0]),
            SetKind::Carpet { dim } => carpet_distance(*dim as usize, u),
            SetKind::CellBoundary { .. } => {
                let out = outside_cube(u);
                if out > 0.0 {
                    out
                } else {
                    u.iter().map(|&v| v.min(1.0 - v)).fold(f64::INFINITY, f64::min).max(0.0)
                }
            }
            SetKind::AString { a } => a_string_distance(*a, u[0]),
            SetKind::Nest { a, rings } => nest_distance(*a, *rings, u[0].hypot(u[1])),
            SetKind::FlatDrum => u[0].hypot(u[1]),
            SetKind::String { string } => string.distance(u[0]),
            SetKind::Union { parts } => parts.iter().map(|p| p.distance(u)).fold(f64::INFINITY, f64::min),
        }
    }

    /// Values of `t` inside `(lo, hi)` where the tube function has a kink.
    /// Sets with too many kinks in the range report none.
    pub fn breakpoints(&self, lo: f64, hi: f64) -> Vec<f64> {
        const CAP: usize = 64;
        let mut out: Vec<f64> = match &self.kind {
            SetKind::Cantor { .. } | SetKind::Carpet { .. } => self.ladder().unwrap().breakpoints(lo, hi),
            SetKind::CellBoundary { .. } => vec![0.5 * self.scale],
            SetKind::String { string } => string.entries().iter().map(|&(l, _)| 0.5 * l * self.scale).collect(),
            SetKind::AString { a } | SetKind::Nest { a, .. } => (1..=CAP as u64 + 1)
                .map(|j| 0.5 * a_string_length(*a, j as f64) * self.scale)
                .collect(),
            SetKind::FlatDrum => Vec::new(),
            SetKind::Union { parts } => parts.iter().flat_map(|p| p.breakpoints(lo, hi)).collect(),
        };
        out.retain(|&b| b > lo && b < hi);
        out.sort_by(f64::total_cmp);
        out.dedup();
        if out.len() > CAP {
            out.clear();
        }
        out
    }
}

/// Volume of the outer collar `{x ∉ Q : d(x, Q) < t}` of a cube `Q` of side `l`.
pub(crate) fn cube_collar(dim: u32, l: f64, t: f64) -> f64 {
    match dim {
        1 => 2.0 * t,
        2 => 4.0 * l * t + PI * t * t,
        _ => 6.0 * l * l * t + 3.0 * PI * l * t * t + 4.0 / 3.0 * PI * t * t * t,
    }
}

fn outside_cube(u: &[f64]) -> f64 {
    u.iter().map(|&v| (-v).max(v - 1.0).max(0.0).powi(2)).sum::<f64>().sqrt()
}

fn cantor_distance(m: u32, a: f64, mut u: f64) -> f64 {
    if u <= 0.0 {
        return -u;
    }
    if u >= 1.0 {
        return u - 1.0;
    }
    let h = (1.0 - f64::from(m) * a) / f64::from(m - 1);
    let period = a + h;
    let mut factor = 1.0;
    for _ in 0..2000 {
        let i = (u / period).floor().clamp(0.0, f64::from(m - 1));
        let v = u - i * period;
        if v <= a {
            u = v / a;
            factor *= a;
            if factor < 1e-300 {
                return 0.0;
            }
            continue;
        }
        return factor * (v - a).min(period - v).max(0.0);
    }
    0.0
}

fn carpet_distance(n: usize, u: &[f64]) -> f64 {
    let out = outside_cube(u);
    if out > 0.0 {
        return out;
    }
    let mut w: Vec<f64> = u.to_vec();
    let mut factor = 1.0;
    for _ in 0..700 {
        let cells: Vec<f64> = w.iter().map(|&v| (3.0 * v).floor().clamp(0.0, 2.0)).collect();
        if cells.iter().all(|&c| c == 1.0) {
            let d = w
                .iter()
                .map(|&v| {
                    let local = 3.0 * v - 1.0;
                    local.min(1.0 - local)
                })
                .fold(f64::INFINITY, f64::min)
                .max(0.0);
            return factor * d / 3.0;
        }
        for i in 0..n {
            w[i] = 3.0 * w[i] - cells[i];
        }
        factor /= 3.0;
        if factor < 1e-300 {
            break;
        }
    }
    0.0
}

fn a_string_distance(a: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return -x;
    }
    if x >= 1.0 {
        return x - 1.0;
    }
    let mut j = x.powf(-1.0 / a).floor().max(1.0);
    while j > 1.0 && j.powf(-a) < x {
        j -= 1.0;
    }
    while (j + 1.0).powf(-a) > x {
        j += 1.0;
    }
    (j.powf(-a) - x).min(x - (j + 1.0).powf(-a)).max(0.0)
}

fn nest_distance(a: f64, rings: Option<u64>, rho: f64) -> f64 {
    if rho >= 1.0 {
        return rho - 1.0;
    }
    if let Some(k) = rings {
        let inner = (k as f64).powf(-a);
        if rho <= inner {
            return inner - rho;
        }
    }
    a_string_distance(a, rho)
}

/// `|A_t ∩ D|` for the nest relative to the unit disk `D`: the disk minus the
/// uncovered annuli `(r_{k+1} + t, r_k - t)` and, for finitely many circles,
/// the uncovered core of radius `r_K - t`.
fn nest_inner_tube(a: f64, rings: Option<u64>, t: f64) -> f64 {
    let open = a_string_count_above(a, 2.0 * t);
    let gaps = match rings {
        Some(k) => (open as u64).min(k - 1),
        None => open as u64,
    };
    let mut uncovered = Neumaier::new();
    for k in 1..=gaps {
        let r_hi = (k as f64).powf(-a);
        let r_lo = ((k + 1) as f64).powf(-a);
        let w = a_string_length(a, k as f64);
        uncovered.add((w - 2.0 * t) * (r_hi + r_lo));
    }
    if let Some(k) = rings {
        let core = (k as f64).powf(-a) - t;
        if core > 0.0 {
            uncovered.add(core * core);
        }
    }
    PI * (1.0 - uncovered.total()).max(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cantor_parameters() {
        let c = cantor_set(3, 0.2).unwrap();
        let l = c.ladder().unwrap();
        assert!((l.first_gap - 0.2).abs() < 1e-15);
        assert_eq!(l.first_count, 2);
        assert!(cantor_set(2, 0.5).is_err());
        assert!(cantor_set(1, 0.2).is_err());
    }

    #[test]
    fn carpet_dimensions() {
        assert!(carpet(4).is_err());
        let c = carpet(3).unwrap();
        assert_eq!(c.ladder().unwrap().level(1).count, 1.0);
    }

    #[test]
    fn hand_tube_values() {
        let c2 = carpet(2).unwrap();
        assert!((c2.tube_volume(0.1, TubeMode::Inner).unwrap() - 221.0 / 225.0).abs() < 1e-15);
        let c = cantor_set(2, 1.0 / 3.0).unwrap();
        assert!((c.tube_volume(1.0 / 18.0, TubeMode::Inner).unwrap() - 7.0 / 9.0).abs() < 1e-15);
        assert_eq!(c.tube_volume(0.2, TubeMode::Inner).unwrap(), 1.0);
        assert!(c.tube_volume(0.0, TubeMode::Inner).is_err());
    }

    #[test]
    fn hand_distances() {
        let c2 = carpet(2).unwrap();
        assert!((c2.distance(&[0.5, 0.5]) - 1.0 / 6.0).abs() < 1e-15);
        assert_eq!(c2.distance(&[1.0 / 3.0, 0.5]), 0.0);
        let c = cantor_set(2, 1.0 / 3.0).unwrap();
        assert!((c.distance(&[0.5]) - 1.0 / 6.0).abs() < 1e-15);
        assert!((c.distance(&[1.5 / 9.0]) - 0.5 / 9.0).abs() < 1e-15);
        assert_eq!(c.distance(&[0.0]), 0.0);
    }

    #[test]
    fn full_carpet_tube_at_half() {
        let c2 = carpet(2).unwrap();
        let v = c2.tube_volume(0.5, TubeMode::Full).unwrap();
        assert!((v - (3.0 + PI / 4.0)).abs() < 1e-14);
    }

    #[test]
    fn nest_radii_by_hand() {
        let r = nest_radii(1.0, 3);
        assert_eq!(r, vec![1.0, 0.5, 1.0 / 3.0]);
        let r = nest_radii(0.5, 2);
        assert!((r[1] - 0.5f64.sqrt()).abs() < 1e-15);
        assert!(fractal_nest(0.0, Some(2)).is_err());
    }

    #[test]
    fn finite_nest_tube_against_annuli() {
        // radii 1, 1/2, 1/3 with t = 0.05: annuli (0.55, 0.95) and (0.3833, 0.45), core 0.2833
        let nest = fractal_nest(1.0, Some(3)).unwrap();
        let t = 0.05;
        let hole = |lo: f64, hi: f64| PI * (hi * hi - lo * lo);
        let expect = PI - hole(0.5 + t, 1.0 - t) - hole(1.0 / 3.0 + t, 0.5 - t) - PI * (1.0 / 3.0 - t).powi(2);
        assert!((nest.tube_volume(t, TubeMode::Inner).unwrap() - expect).abs() < 1e-14);
    }

    #[test]
    fn infinite_a_string_tube_matches_truncated_string() {
        let exact = a_string_set(1.0, None).unwrap();
        let truncated = a_string_set(1.0, Some(200_000)).unwrap();
        for &t in &[0.2, 0.01, 1e-4] {
            let v = exact.tube_volume(t, TubeMode::Inner).unwrap();
            // the truncated string misses the tail below (J+1)^(-1)
            let w = truncated.tube_volume(t, TubeMode::Inner).unwrap() + 1.0 / 200_001.0;
            assert!((v - w).abs() < 1e-9, "t={t}: {v} vs {w}");
        }
    }

    #[test]
    fn scaling_the_carpet_scales_the_tube() {
        let c = carpet(2).unwrap();
        let s = c.scaled(2.0);
        let a = s.tube_volume(0.04, TubeMode::Inner).unwrap();
        let b = 4.0 * c.tube_volume(0.02, TubeMode::Inner).unwrap();
        assert!((a - b).abs() < 1e-14);
        assert_eq!(s.region_volume(), 4.0);
    }

    #[test]
    fn union_adds_parts() {
        let a = cantor_set(2, 0.25).unwrap();
        let b = cantor_set(3, 1.0 / 9.0).unwrap().translated(1.0);
        let u = union(vec![a.clone(), b.clone()]).unwrap();
        let t = 0.01;
        let expect = a.tube_volume(t, TubeMode::Inner).unwrap() + b.tube_volume(t, TubeMode::Inner).unwrap();
        assert_eq!(u.tube_volume(t, TubeMode::Inner).unwrap(), expect);
        assert_eq!(u.region_volume(), 2.0);
        assert_eq!(u.distance(&[1.0]), 0.0);
        assert!((u.distance(&[1.5]) - b.distance(&[1.5])).abs() < 1e-15);
    }
}
