//! Truncated rigid-analytic kernel: Tate-algebra chunks, sup valuations on
//! polydiscs and annuli, Cousin splitting and the Čech homotopy on `P^n`.

pub mod chunk;
pub mod cousin;
pub mod pn;

pub use chunk::{gauss_valuation, sup_valuation, vq_membership, Factor, PolydiscDomain, TateChunk};
pub use cousin::{cousin_solve, random_cocycle, rigid_cech_disc, Cocycles, CousinSplit, RigidCechReport, SplitRecord};
pub use pn::{pn_cech_homotopy, pn_window_cohomology, random_cochain, Contraction, RigidCochain, WindowCohomology};
