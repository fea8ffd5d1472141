//! Real hypersurfaces in the complex projective and hyperbolic planes.
//!
//! The library works with shape operators in the canonical frame
//! `(W, X, Y = φX)` and provides curvature invariants with independent trace
//! oracles, pointwise classification predicates, the homogeneous Hopf
//! catalog, ODE constructions of non-Hopf examples, framed curves in the
//! unitary group of the ambient Hermitian form, and a small engine for
//! exterior differential systems on the frame bundle.
//!
//! Each capability has a runnable example:
//!
//! ```bash
//! cargo run --example star_ricci_invariants
//! cargo run --example classify_points
//! cargo run --example takagi_montiel_catalog
//! cargo run --example berndt_orbits
//! cargo run --example pseudo_ryan_construction
//! cargo run --example framed_curve
//! cargo run --example hopf_eds_cartan
//! cargo run --example non_hopf_tableaux
//! ```

pub mod catalog;
pub mod cli;
pub mod conditions;
pub mod curves;
pub mod eds;
pub mod error;
pub mod geometry;
pub mod ode;
pub mod profile;
pub mod verify;
