//! Projective models, truncated Čech complexes and cohomology lattices.

pub mod cech;
pub mod charpoly;
pub mod cohomology;
pub mod invariance;
pub mod linalg;
pub mod model;
pub mod morphism;

pub use cech::{cech_complex, CechEngine, Sheaf, StructureComplex, TruncatedCechComplex, Window};
pub use model::{blowup_model, build_proj_model, product_with_p1, ProjModel, Transition};
pub use charpoly::{charpoly_integrality, quasi_unipotence_check, CharpolyReport, QuasiUnipotence};
pub use cohomology::{cohomology_lattice, compare_generic, generic_fiber_cohomology, Cohomology, GenericReport, LatticeReport};
pub use morphism::{morphism_action, ActionReport, Morphism};
pub use invariance::{invariance_suite, pullback_check, shift_and_sandwich, InvarianceCheck, InvarianceConfig, InvarianceReport};
