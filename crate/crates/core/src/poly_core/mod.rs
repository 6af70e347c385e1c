//! The polynomial ring `R = Q[f_1, ..., f_n]`, its reflection action and the Frobenius
//! structure of `R` over the invariants `R^J`.

mod action;
mod frobenius;
mod poly;

use thiserror::Error;

pub use action::{
    demazure, demazure_word, invariant_split, is_fixed_by, is_invariant, reflect, restrict_to,
};
pub use frobenius::{beta, dual_bases, longest_word, partial_parabolic, DualBasisPair, ParabolicTensor};
pub use poly::{coeff, ratio, Coeff, Monomial, MultiPoly, MAX_VARS};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("at most 8 variables are supported, got {0}")]
    TooManyVariables(usize),
    #[error("cannot parse polynomial: {0}")]
    Parse(String),
    #[error("division by f{var} left a remainder")]
    InexactDivision { var: usize },
    #[error("variable index {0} out of range")]
    IndexOutOfRange(usize),
    #[error("word {0} is not reduced")]
    NotReduced(String),
    #[error("no dual basis found for {0}")]
    NoDualBasis(String),
}
