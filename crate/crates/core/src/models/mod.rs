//! Integral models: affine charts, normalization, tame sections and witnesses.

pub mod chart;
pub mod ga;
pub mod normalize;
pub mod witness;

pub use chart::{blowup_chart, verify_chart, Chart, ChartDiagnostics};
pub use ga::{ga_membership, ga_sections, GaMembership, GaSectionModule, LaurentElement, MembershipCertificate};
pub use normalize::{normalize, Fraction, NormalizationData, NORMALIZATION_CAP};
pub use witness::{place_witness_search, Witness, WitnessSearch};
