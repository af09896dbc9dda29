//! Exact-arithmetic toolkit for weighted dual graphs of rational curves
//! and cyclic quotient surface singularities.
//!
//! The crate computes, over the rationals and with no floating point,
//! the contraction data of germs of surfaces along configurations of
//! smooth rational curves: pullbacks, discrepancies, intersection
//! numbers on the contracted surface, singular-point recognition through
//! Hirzebruch-Jung continued fractions, and the condition checklists
//! that decide which germs arise from divisorial contractions to
//! threefold points of compound A type. A bounded generalized Pell
//! solver drives the complete enumeration of the semistable class.
//!
//! Modules:
//! - [`exact`]: rationals, continued fractions, Pell scanning, exact
//!   linear algebra;
//! - [`quotient`]: cyclic quotient singularities and their recognizers;
//! - [`graph`]: weighted dual graphs and intersection theory;
//! - [`germ`]: full analysis of a germ;
//! - [`classify`]: per-class condition checklists and invariants;
//! - [`enumerate`]: catalogs (Pell correspondence and bounded search);
//! - [`io`]: graph documents, reports, DOT.

pub mod classify;
pub mod enumerate;
mod error;
pub mod exact;
pub mod germ;
pub mod graph;
pub mod io;
pub mod quotient;

pub use error::{Error, Result};
