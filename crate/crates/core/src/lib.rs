//! Exact equivariant K-theory of torus actions: representation rings of
//! diagonalizable groups, localization at support primes, cyclotomic
//! decompositions over `Z[1/r]`, and fixed-point formulas on smooth complete
//! toric varieties.

pub mod characters;
pub mod corpus;
pub mod cyclotomic;
pub mod error;
pub mod lattice;
pub mod localization;
pub mod lrr;
pub mod rep_ring;
pub mod toric;

pub use characters::{Character, CharacterGroup, Evaluation, PrimeSupport, Subgroup};
pub use error::{Error, Result};
pub use localization::{LocalizedElement, MultiplicativeSet};
pub use rep_ring::{EquivariantBundleClass, RingElement};
pub use toric::{CartierData, Fan, Polytope};
