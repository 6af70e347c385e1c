//! Bott-Samelson bimodules, their morphisms, and the diagrammatic generators.

mod diagram;
mod element;
mod hom;
mod morphism;
pub mod relations;

use thiserror::Error;

use crate::poly_core::PolyError;

pub use diagram::{path_diagram, six_loop_scalar, six_side_maps, six_valent, Diagram, Gen};
pub use element::{join_label, label_degree, normal_form, right_mul_label, split_label, BSElement, Coords, Label};
pub use hom::{graded_dim, hom_dim_at_degree, hom_space, predicted_hom_dim, HomSpace, MAX_HOM_UNKNOWNS};
pub use morphism::{BSMorphism, MAX_WORD_LEN};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BsError {
    #[error("word of length {0} is too long to expand")]
    TooLarge(usize),
    #[error("expected {expected} columns, got {got}")]
    Shape { expected: usize, got: usize },
    #[error("entry at ({row:b}, {col:b}) should have degree {expected}: {entry}")]
    Degree { row: Label, col: Label, expected: i32, entry: String },
    #[error("cannot compose {left} with {right}")]
    Mismatch { left: String, right: String },
    #[error("{0}")]
    Colours(String),
    #[error("linear solve failed: {0}")]
    Solve(String),
    #[error("diagram has no stored flip")]
    NotFlippable,
    #[error("resource bound exceeded: {0} unknowns")]
    ResourceBound(usize),
    #[error(transparent)]
    Poly(#[from] PolyError),
}
