//! Projection-method discretizations of the neural field equation
//!
//! `∂_t u = -u + ∫_Ω w(x, y) f(u(y, t)) dy + ξ(x, t)`
//!
//! together with manufactured test problems, time integrators and a
//! convergence-study harness.

pub mod error;
pub mod harness;
pub mod model;
pub mod problems;
pub mod projection;
pub mod quadrature;
pub mod schemes;
pub mod timestep;

pub use error::{Error, Result};
