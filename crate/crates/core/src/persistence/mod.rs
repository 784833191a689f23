//! Persistent homology over a prime field: chains, column reduction,
//! diagrams with representative cycles.

pub mod chain;
pub mod diagram;
pub mod field;
pub mod reduce;

pub use chain::{boundary, simplex_boundary, Chain};
pub use diagram::{Bar, PersistenceDiagram};
pub use field::PrimeField;
pub use reduce::{reduce, reduce_with_metric};
