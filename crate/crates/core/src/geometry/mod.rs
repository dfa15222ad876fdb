//! Catalog sets, their reference regions, and exact distance and tube oracles.

mod descriptor;
mod flat;
mod ladder;
mod string;

pub use descriptor::{
    a_string_set, cantor_set, carpet, cell_boundary, flat_drum, fractal_nest, nest_radii, string_set, union, Rfd,
    SetDescriptor, SetKind, TubeMode,
};
pub use flat::region_area as flat_region_area;
pub use ladder::{GapLadder, Level};
pub use string::{a_string, FractalString};
pub(crate) use string::a_string_length;

use crate::error::Result;

/// Inner tube volume `|A_t ∩ Ω|`.
pub fn tube_volume(desc: &SetDescriptor, t: f64) -> Result<f64> {
    desc.tube_volume(t, TubeMode::Inner)
}

/// Euclidean distance from `x` to the set.
pub fn distance(desc: &SetDescriptor, x: &[f64]) -> f64 {
    desc.distance(x)
}

/// A tube function `t ↦ V(t)` in ambient dimension `N`.
pub trait TubeFunction: Sync {
    fn ambient_dim(&self) -> u32;

    fn volume(&self, t: f64) -> f64;

    fn log_volume(&self, t: f64) -> f64 {
        self.volume(t).ln()
    }

    /// Kinks of `V` inside `(lo, hi)`, used to split quadrature panels.
    fn breakpoints(&self, _lo: f64, _hi: f64) -> Vec<f64> {
        Vec::new()
    }

    /// Whether the volume comes from numerical quadrature rather than a closed form.
    fn is_numeric(&self) -> bool {
        false
    }
}

/// The tube function of a descriptor in a fixed mode.
#[derive(Debug, Clone, Copy)]
pub struct Tube<'a> {
    desc: &'a SetDescriptor,
    mode: TubeMode,
}

impl<'a> Tube<'a> {
    pub fn new(desc: &'a SetDescriptor, mode: TubeMode) -> Result<Self> {
        if !desc.supports(mode) {
            return crate::error::domain("full tube is not available for this set");
        }
        Ok(Self { desc, mode })
    }

    pub fn inner(desc: &'a SetDescriptor) -> Self {
        Self {
            desc,
            mode: TubeMode::Inner,
        }
    }

    pub fn descriptor(&self) -> &'a SetDescriptor {
        self.desc
    }

    pub fn mode(&self) -> TubeMode {
        self.mode
    }
}

impl TubeFunction for Tube<'_> {
    fn ambient_dim(&self) -> u32 {
        self.desc.ambient_dim()
    }

    fn volume(&self, t: f64) -> f64 {
        self.desc.tube_volume(t, self.mode).unwrap_or(f64::NAN)
    }

    fn log_volume(&self, t: f64) -> f64 {
        self.desc.log_tube_volume(t, self.mode).unwrap_or(f64::NAN)
    }

    fn breakpoints(&self, lo: f64, hi: f64) -> Vec<f64> {
        self.desc.breakpoints(lo, hi)
    }

    fn is_numeric(&self) -> bool {
        matches!(self.desc.kind(), SetKind::FlatDrum)
    }
}

/// Wraps a closure as a tube function.
pub struct FnTube<F> {
    pub dim: u32,
    pub f: F,
}

impl<F: Fn(f64) -> f64 + Sync> TubeFunction for FnTube<F> {
    fn ambient_dim(&self) -> u32 {
        self.dim
    }

    fn volume(&self, t: f64) -> f64 {
        (self.f)(t)
    }
}
