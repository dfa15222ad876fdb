//! The chapters of `book/src`, one module each, so that `cargo test` runs
//! every listing in the guide as a doctest.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/sets-and-tubes.md")]
pub mod sets_and_tubes {}

#[doc = include_str!("../../../book/src/dimensions.md")]
pub mod dimensions {}

#[doc = include_str!("../../../book/src/zeta-functions.md")]
pub mod zeta_functions {}

#[doc = include_str!("../../../book/src/complex-dimensions.md")]
pub mod complex_dimensions {}

#[doc = include_str!("../../../book/src/tube-formulas.md")]
pub mod tube_formulas {}

#[doc = include_str!("../../../book/src/quasiperiodic.md")]
pub mod quasiperiodic {}

#[doc = include_str!("../../../book/src/command-line.md")]
pub mod command_line {}

#[doc = include_str!("../../../book/src/verification.md")]
pub mod verification {}

#[doc = include_str!("../../../README.md")]
pub mod readme {}
