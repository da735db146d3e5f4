//! Stable lattices of 2×2 representations over `ℤ/p^N`.
//!
//! A representation is a finite list of generators in `GL_2(ℤ/p^N)`;
//! statements about "the group" are checked on all words of bounded length
//! in the generators and their inverses.

mod matrix;
mod reduce;
mod search;

pub use matrix::{Mat2, MatRep};
pub use reduce::{
    extract_cocycle, p_conjugate, p_conjugate_inverse, reduce, semisimplification_signature,
    CharPolyCount, CocycleTable, Line, ReductionReport, ReductionType, Signature, StableLines,
};
pub use search::{
    lattice_search, lattice_search_with_budget, CharacterOrder, Conjugator, LatticeSearch, Outcome,
    PrepStep, DEFAULT_NODE_BUDGET,
};

/// Default word length for group-level checks.
pub const DEFAULT_WORD_LEN: usize = 4;
