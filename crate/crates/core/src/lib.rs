//! Poncelet 3-periodic families, Kimberling triangle centers and their loci.

pub mod error;
pub mod centers;
pub mod expr;
pub mod families;
pub mod fixtures;
pub mod formulas;
pub mod geometry;
pub mod locus;

pub use error::{Error, ParseError, Result};
pub use geometry::{ConicFit, ConicKind, PlaneComplex, Tolerances, Uvw};
