//! Exact computations with Soergel bimodules in type A.
//!
//! The crate is layered bottom-up: [`poly_core`] (polynomials and Demazure operators),
//! [`coxeter`] (words and permutations), [`hecke`] (the Hecke algebra), [`exprgraph`]
//! (reduced-expression graphs and named paths), [`bsmod`] (Bott-Samelson bimodules and
//! the diagrammatic generators as explicit matrices), [`thick`] (the idempotent cutting out
//! `B_J` and the thick calculus) and [`induced`] (the induced trivial module).

pub mod bsmod;
pub mod coxeter;
pub mod exprgraph;
pub mod hecke;
pub mod induced;
pub mod linalg;
pub mod poly_core;
pub mod report;
pub mod thick;
pub mod suites;
