//! Distance, tube, geometric, relative and spray zeta functions.

mod abscissa;
mod closed;
mod form;
mod geometric;
mod hp;
mod mc;
mod tubezeta;

pub use abscissa::{abscissa_scan, block_slope, tube_abscissa};
pub use closed::{closed_form, collar_form, distance_zeta_closed, hole_form, ladder_form, tube_zeta_closed};
pub use form::{Geometric, MeromorphicForm, Term, POLE_EPS};
pub use geometric::{
    geometric_zeta, geometric_zeta_desc, ladder_geometric_form, scaling_check, scaling_check_exact, scaling_check_mc, spray_zeta,
};
pub use hp::{hp_integrability_probe, HpOptions, HpReport, Verdict};
pub use mc::distance_zeta_mc;
pub use tubezeta::{
    distance_zeta_via_tube, functional_eq_residual, tube_zeta_quad, tube_zeta_quad_desc, tube_zeta_residue_at,
    ZetaEstimate,
};
