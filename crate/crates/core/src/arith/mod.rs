//! Exact arithmetic over `k`, `R = k[t]_(t)` and `K = k((t))`.

pub mod field;
pub mod newton;
pub mod scalar;
pub mod series;
pub mod upoly;

pub use field::{BaseField, Fe};
pub use newton::{newton_polygon, KPoly, NewtonPolygon, Segment};
pub use scalar::{Scalar, Valuation};
pub use series::TruncatedSeries;
pub use upoly::UPoly;
