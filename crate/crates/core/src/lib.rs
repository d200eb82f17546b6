//! Weighted `(α, β)` operator norms and numerical radius inequalities for
//! dense complex matrices.
//!
//! For nonnegative weights `(α, β) ≠ (0, 0)` the norm is
//!
//! ```text
//! ‖T‖_{α,β} = sup_{‖x‖=1} sqrt(α |<Tx, x>|² + β ‖Tx‖²)
//! ```
//!
//! which interpolates the numerical radius `(1, 0)`, the operator norm
//! `(0, 1)` and the modified Davis-Wielandt radius `(1, 1)`. The crate
//! computes it together with the classical quantities it is compared with,
//! evaluates a catalog of upper and lower bounds, and verifies the
//! inequalities between them on user-supplied and random matrices.

pub mod error;
pub mod linalg;
pub mod norms;
pub mod optimize;
pub mod rng;
pub mod alphabeta;
pub mod bounds;
pub mod harness;

pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, CVector, Subspace};
