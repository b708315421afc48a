//! Link-diagram invariants, unlinking-type bounds and crossing-change search.
//!
//! The series algebra and the Milnor engine are generic over the coefficient
//! ring; the aliases below fix the common choices.

pub mod bounds;
pub mod catalog;
pub mod cli;
pub mod diagram;
pub mod magnus;
pub mod milnor;
pub mod scalar;
pub mod search;

pub use catalog::{catalog_link, CatalogSpec, KnotType};
pub use diagram::{parse_pd, Crossing, DiagramError, LinkDiagram, PdCode, PlanarBuilder, Violation};
pub use magnus::{magnus_inverse, magnus_mul, MagnusError, MagnusSeries};

/// Series with machine-integer coefficients.
pub type Series = MagnusSeries<i64>;
/// Series with 128-bit coefficients, for long words at high degree.
pub type WideSeries = MagnusSeries<i128>;
/// Series with arbitrary-precision coefficients.
pub type BigSeries = MagnusSeries<num_bigint::BigInt>;
