//! Congruence Hecke algebras `H(G(F), K_m)` of small matrix groups, computed
//! exactly over truncated models `O_F/p_F^n` of non-archimedean local fields,
//! together with the comparison map between the algebras of two close fields.

pub mod cosets;
pub mod error;
pub mod group;
pub mod hecke;
pub mod residue;
pub mod root_datum;
pub mod transfer;
