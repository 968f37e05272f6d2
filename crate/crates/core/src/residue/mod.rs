//! Truncated local rings `O_F/p_F^n` in both characteristics, Deligne triplets,
//! truncation isomorphisms and the transfer of Eisenstein polynomials.

mod eisenstein;
mod field;
mod iso;
mod ring;
mod triplet;

use thiserror::Error;

pub use eisenstein::EisensteinPoly;
pub use field::{
    is_irreducible_small, residue_polynomial, FieldConfig, FieldDescriptor, FieldKind,
};
pub use iso::TruncIso;
pub use ring::{RingElem, RingOp, TruncatedRing};
pub use triplet::DeligneTriplet;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RingError {
    #[error("ring mismatch")]
    Mismatch,
    #[error("not a unit")]
    NotUnit,
    #[error("not divisible by the requested power of the uniformizer")]
    NotDivisible,
    #[error("level order violated for reduce/lift")]
    LevelOrder,
    #[error("ring of size {size} exceeds the supported maximum")]
    TooLarge { size: u64 },
    #[error("invalid field descriptor: {0}")]
    InvalidDescriptor(String),
    #[error("not an isomorphism: {0}")]
    NotAnIsomorphism(String),
    #[error("not an Eisenstein polynomial: {0}")]
    NotEisenstein(String),
}
