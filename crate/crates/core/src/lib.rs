//! Workbench for symmetric intersecting set families: constructions,
//! verification, exact counting and search.

pub mod arith;
pub mod bounds;
pub mod combinatorics;
pub mod error;
pub mod family;
pub mod geometry;
pub mod oracle;
pub mod runs;
pub mod symmetry;

pub use error::{Error, Result};
pub use family::{SetFamily, SubsetMask};
