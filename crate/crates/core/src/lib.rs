//! Numerical reconstruction of a slit-disk domain that bounds the univalent
//! Bloch-Landau constant from above.
//!
//! The pipeline runs, bottom-up:
//!
//! * [`special_fn`]: elliptic integrals, the nome, the theta function `Θ` and
//!   the Jacobi Zeta function, all in real double precision.
//! * [`fedorov`]: the explicit minimal-capacity continuum through
//!   `0, c, e^{±iα}` (capacity, branch point `b`, quadratic differential and
//!   trajectory tracing).
//! * [`mapping`]: the Koebe/`ψ`/affine chain that turns a slit disk
//!   `Ω_{z₀,R}` into the complement of that continuum, and the resulting
//!   bound.
//! * [`geometry`]: the tangent-circle choice of `w`, assembly of the full
//!   six-slit, six-arc domain and a numerical inradius check.
//! * [`optimize`]: one-dimensional minimization of the bound over `R`.
//! * [`symcheck`]: walk-on-spheres harmonic measure and two-sided symmetry
//!   checks for arcs inside the unit disk.
//!
//! The crate is `no_std` and only needs `alloc`. The `std` feature is for
//! callers that want `std::error::Error` on [`Error`].
#![cfg_attr(not(feature = "std"), no_std)]
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

extern crate alloc;

mod error;
pub mod fedorov;
pub mod geometry;
pub mod mapping;
pub mod optimize;
pub mod polyline;
pub mod special_fn;
pub mod symcheck;

pub use error::{Error, Result};
pub use num_complex::Complex64;

/// Lower bound for the univalent Bloch-Landau constant (Xiong).
pub const LOWER_BOUND_XIONG: f64 = 0.570884;
/// Goodman's upper bound.
pub const UPPER_BOUND_GOODMAN: f64 = 0.65647;
/// Beller-Hummel upper bound.
pub const UPPER_BOUND_BELLER_HUMMEL: f64 = 0.6564155;
/// The improved upper bound reproduced by this crate, as stated to 7 digits.
pub const UPPER_BOUND_IMPROVED: f64 = 0.6563937;
/// Optimal outer radius of the slit-disk family.
pub const R_OPTIMAL: f64 = 4.054_635_8;
/// Derivative value at [`R_OPTIMAL`] (correct to 10 decimal places).
pub const BOUND_AT_R_OPTIMAL: f64 = 0.656_393_613_152_19;
