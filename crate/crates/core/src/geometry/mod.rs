//! Finite fields, finite geometries and the intersecting families they carry.

pub mod extremal;
pub mod field;
pub mod linalg;
pub mod singer;
pub mod space;

pub use extremal::{
    is_maximal_intersecting, is_maximal_intersecting_with_budget, line_superset_bound,
    LineSupersetBound,
};
pub use field::{prime_power, FiniteField};
pub use linalg::gaussian_binomial;
pub use singer::{singer_cycle, singer_difference_set};
pub use space::{
    dual_affine_family, dual_affine_family_with_witness, geometry_symmetry_witness,
    geometry_symmetry_witness_for, pg_flat_family, pg_flat_family_with_witness, Flat,
    IncidenceSpace, SpaceKind,
};
