//! Quaternionic numerical range of complex matrices.
//!
//! For a complex matrix `A` the quaternionic numerical range `W_H(A)` is
//! determined, up to similarity, by its upper bild `B+(A) = W_H(A) ∩ C+`.
//! This crate computes `B+(A)` as the convex hull of the upper halves of
//! the complex numerical ranges of `A` and `A*` together with the two real
//! extremes `v_min`, `v_max` of `B(A) ∩ R`, and checks the result against
//! direct Monte-Carlo sampling of `q*Aq` over the quaternionic unit sphere.
//!
//! Module map:
//!
//! * [`quat`]: quaternion scalars, vectors, matrices and the form `q*Aq`.
//! * [`linalg`]: Jacobi Hermitian eigensolver, canonical form `A = H + Si`,
//!   complexification and definiteness classes.
//! * [`geometry`]: planar convex regions (hull, clipping, support, Hausdorff).
//! * [`crange`]: two-sided polygonal enclosures of `W_C(A)`.
//! * [`band`]: the real band `[v_min, v_max]` by constrained optimization.
//! * [`bild`]: upper bild assembly, membership and the numerical radius.
//! * [`oracle`]: sampling oracle, validation and the two counterexample demos.

pub mod band;
pub mod bild;
pub mod crange;
mod error;
pub mod geometry;
pub mod linalg;
pub mod oracle;
pub mod quat;
pub(crate) mod rng;

pub use error::{Error, Result};
pub use num_complex::Complex64;

/// Version tag written into every JSON document the crate serializes.
pub const SCHEMA_VERSION: u32 = 1;
