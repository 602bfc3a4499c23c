//! Exact computations in the Burnside Tambara functor of a cyclic p-group.

pub mod arith;
pub mod error;
pub mod expr;
pub mod ideals;
pub mod lattice;
pub mod oracle;
pub mod primality;
pub mod ring;
pub mod spectrum;
pub mod verify;

pub use error::{Error, Result};
pub use ring::{Element, FCoords, GroupParams};
pub use lattice::{Index, IntMap, Lattice, QuotientInvariants};
