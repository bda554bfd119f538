//! Finite-dimensional quantum property lattices: projections and their
//! lattice operations, Lüders measurements and compatibility relations,
//! certainty/predictability/objectivity domains of pure states, and a
//! three-valued statement semantics with completeness audits.

pub mod campaign;
pub mod domains;
pub mod error;
pub mod lattice;
pub mod measurement;
pub mod numerics;
pub mod sampling;
pub mod semantics;

pub use error::{QlatError, Result};
pub use numerics::{Hermitian, Ket, Projection, Tolerances};
