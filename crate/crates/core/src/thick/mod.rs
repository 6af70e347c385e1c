//! The idempotent cutting `B_J` out of a reduced expression of `w_J`, and the thick calculus
//! built on it: thick trivalent vertices, the thick dot, and the summand certificates.

mod projector;
mod summand;
mod trivalent;
mod verythick;

use thiserror::Error;

use crate::bsmod::BsError;
use crate::coxeter::CoxeterError;
use crate::exprgraph::GraphError;
use crate::poly_core::PolyError;

pub use projector::{path_morphism, random_rank, z, zbar, ProjectorFamily, RankEstimate, VStep};
pub use summand::{
    all_dots, graded_class, hom_to_r_certificate, hom_to_r_dim, hom_to_r_upper_bound, split_cbi, summand_rank, verify_split, verify_xi, xi, xi_bar,
    SplitCBi,
};
pub use trivalent::{
    a_thick, abort_morphism, aborted_trivalents, verify_a_properties, verify_aborted_trivalents, verify_aborted_v, z_along,
    Anchor, Side, ThickTrivalent,
};
pub use verythick::{very_thick_action_check, very_thick_merge};

#[derive(Debug, Error)]
pub enum ThickError {
    #[error("{0} is not a connected index set")]
    Disconnected(String),
    #[error("index {index} is not in {parabolic}")]
    NotInParabolic { index: usize, parabolic: String },
    #[error("linear solve failed: {0}")]
    Solve(String),
    #[error("{0} is beyond the configured resource bound")]
    ResourceBound(String),
    #[error(transparent)]
    Bimodule(#[from] BsError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Coxeter(#[from] CoxeterError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}
