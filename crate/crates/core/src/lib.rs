//! Exact arithmetic for the Carlitz module over `A = F_q[t]`.
//!
//! The crate computes Bernoulli-Carlitz numbers modulo a prime `p` of `A`,
//! characteristic-zero L-values of powers of the Teichmüller character over
//! truncated Witt vectors, and the local logarithmic-derivative expansion in
//! the `p`-th cyclotomic function field. The `herbrand` module combines them
//! into a per-prime eigenspace classification and a scanner for irregular
//! primes.

pub mod algebra;
pub mod carlitz;
pub mod error;
pub mod herbrand;
pub mod localfield;
pub mod lseries;
pub mod witt;

pub use error::{Error, Result};
