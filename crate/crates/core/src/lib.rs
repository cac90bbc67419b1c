//! Splitting decisions for quaternion algebras over Q and for cyclic symbol
//! algebras over cyclotomic local fields.
//!
//! * [`padic`]: Hilbert symbols at every place and brute-force solvability
//!   oracles.
//! * [`quaternion`]: splitting of `H_Q(a, b)` and the `x^2 + n y^2`
//!   congruence criteria.
//! * [`cyclotomic`]: arithmetic in `Z[xi_q]`, prime decomposition and the
//!   q-th power residue character.
//! * [`localnorm`]: norm membership in unramified local extensions.

pub mod arith;
pub mod cli;
pub mod cyclotomic;
pub mod error;
pub mod localnorm;
pub mod padic;
pub mod quaternion;

pub use error::{Error, Result};
