//! Exact arithmetic foundations: `F_q`, `A = F_q[t]`, residue fields `A/p`
//! and truncated power series over either.

pub mod field;
pub mod gf;
pub mod poly;
pub mod residue;
pub mod series;

pub use field::{FieldDescriptor, Fq};
pub use gf::{FieldElem, Gf};
pub use poly::{Degree, Poly, PolyRing};
pub use residue::{ResidueElem, ResidueField};
pub use series::{SeriesRing, TruncSeries};

/// `F_q` element.
pub type FqElem = FieldElem;
