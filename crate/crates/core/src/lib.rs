//! Fractal zeta functions, complex dimensions and fractal tube formulas for
//! a catalog of self-similar and related sets.
//!
//! ```
//! use fraczeta::geometry::{carpet, TubeMode};
//! use fraczeta::tubeformula::tube_formula;
//!
//! let c = carpet(2)?;
//! let report = tube_formula(&c, TubeMode::Inner, 0.1, 50)?;
//! assert!((report.oracle_value - 221.0 / 225.0).abs() < 1e-15);
//! assert!(report.abs_error < 1e-6);
//! # Ok::<(), fraczeta::Error>(())
//! ```
//!
//! The guide in `book/` walks through each module.

pub mod acceptance;
pub mod dims;
pub mod error;
pub mod geometry;
pub mod quad;
pub mod quasi;
pub mod rational;
pub mod spectrum;
pub mod sum;
pub mod tubeformula;
pub mod zeta;

pub use error::{Error, Result};
