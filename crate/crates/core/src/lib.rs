//! Exact computation of Rankin-type invariants of Construction A lattices.

pub mod codes;
pub mod denssub;
pub mod enumeration;
pub mod error;
pub mod exact;
pub mod invariants;
pub mod lattices;
pub mod linalg;
pub mod paperbench;

pub use error::{Error, Result};
pub use exact::{BigRational, ExactRadical};
