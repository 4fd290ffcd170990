//! The Carlitz module `phi: A -> End(G_a)`, `t -> t + F`.

pub mod bernoulli;
pub mod twisted;

pub use bernoulli::{bc_numbers, cyclotomic_poly, exp_coeffs, irregular_indices, BcVector, PolyOverA};
pub use twisted::{FrobeniusRing, QSeriesRing, TwistedPoly, TwistedRing};
