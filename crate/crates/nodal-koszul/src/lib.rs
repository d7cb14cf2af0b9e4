//! Exact-arithmetic Koszul cohomology on nodal curves.
//!
//! Everything runs over the rationals: curves are glued chains and cycles of
//! rational components, line bundles are degree vectors plus node gluings,
//! and every cohomology dimension is a rank of an explicit sparse matrix.
//! On top of the engine sit verifiers for the statements this kind of model
//! can certify: maximal-rank status of the quadric multiplication map,
//! generic-vanishing certificates, secant-quadric witnesses, and the
//! genus-raising induction that chains them together.
//!
//! See the `examples/` directory for one runnable program per capability,
//! and the `nodal-koszul` binary for batch runs driven by a JSON config.

// elimination kernels index several rows of one matrix at once; range
// loops are the clearest form for that
#![allow(clippy::needless_range_loop)]

pub mod bridge;
pub mod bundle;
pub mod curve;
pub mod error;
pub mod forms;
pub mod koszul;
pub mod linalg;
pub mod rat;
pub mod residue;
pub mod runner;
pub mod sections;
pub mod verify;

pub use bridge::{attach_bridge, general_point_pair};
pub use bundle::{divisor_bundle, dualizing_bundle, twist_by_points, LineBundle, Model};
pub use curve::{Branch, CPoint, NodalCurve, Node, PointOnCurve, Sampler};
pub use error::{Error, Result};
pub use koszul::{
    betti_table, chi_expected, kernel_bundle_h0, koszul_differential, twisted_k00, BettiTable,
    KoszulCell, KoszulSystem,
};
pub use linalg::{binomial, wedge_map_matrix, RatMatrix, WedgeIndex};
pub use rat::{rat, rat_int, Rat};
pub use residue::h0_residue_oracle;
pub use sections::{
    h0_basis, is_base_point_free, multiply, vanishing_subspace, Section, SectionSpace,
};

/// Version stamp recorded in every artifact and cache entry.
pub const ENGINE_VERSION: &str = env!("CARGO_PKG_VERSION");
