//! Exact table algebras, association schemes, wedge products and duality.
//!
//! Structure constants are arbitrary-precision rationals throughout.
//! Floating point is confined to [`duality`], where character values are
//! computed numerically and snapped back to exact rationals when possible.

pub mod algebra;
pub mod closed;
pub mod duality;
pub mod dualwedge;
pub mod hom;
pub mod io;
pub mod iso;
mod linalg;
pub mod oracle;
pub mod report;
pub mod scalar;
pub mod scheme;
pub mod schemewedge;
pub mod suite;
pub mod wedge;

pub use algebra::{ElementVector, Mode, RawAlgebra, TableAlgebra};
pub use closed::{ClosedSubset, DoubleCosetPartition, Quotient};
pub use hom::TableHomomorphism;
pub use report::{Check, Status, ValidationReport};
pub use scalar::Scalar;
pub use scheme::AssociationScheme;
