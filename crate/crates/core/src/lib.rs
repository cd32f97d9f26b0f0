//! Pseudo-spectral laboratory for the gravity water wave problem on a
//! square torus in the Zakharov formulation.
//!
//! The crate is organized by subsystem:
//!
//! * [`grid`]: torus geometry, transforms, multipliers, decompositions, norms.
//! * [`paracalc`]: paraproducts for x-dependent symbols and the good unknown.
//! * [`dtn`]: Dirichlet-to-Neumann operator, explicit orders and the
//!   boundary-flattened fixed-point solver.
//! * [`zakharov`]: evolution, energy and Taylor-coefficient diagnostics.
//! * [`normalform`]: quadratic multipliers, phases, profiles and boundary terms.
//! * [`dispersion`]: linear propagation experiments.

pub mod dispersion;
pub mod dtn;
pub mod error;
pub mod grid;
pub mod normalform;
pub mod ops;
pub mod paracalc;
pub mod zakharov;

pub use error::{Error, Result};
