//! Decision and witness toolkit for Lipschitz normal embedding of complex
//! curve and hypersurface germs.
//!
//! The crate decides, for a germ given by polynomial equations, whether its
//! inner and outer metrics are bi-Lipschitz equivalent (the germ is
//! *normally embedded*), and backs each verdict with checkable data: a
//! certificate for a non-embedding witness plane, or a pair of arcs whose
//! distance ratio is measured numerically.
//!
//! Module layout
//! - [`poly`], [`parse`], [`scalar`], [`linalg`]: exact arithmetic over the
//!   Gaussian rationals;
//! - [`puiseux`]: certified fractional power series for plane curve branches;
//! - [`cone`]: tangent cone analysis and reduced structure;
//! - [`curve`]: the plane and space curve decision procedures;
//! - [`slicer`]: plane sections of hypersurfaces and the search for
//!   non-embedded slices;
//! - [`witness`]: numeric arc pairs exhibiting inner/outer divergence;
//! - [`cli`]: the `lne` command line.

pub mod ball;
pub mod cli;
pub mod cone;
pub mod curve;
pub mod dyadic;
pub mod error;
pub mod linalg;
pub mod parse;
pub mod poly;
pub mod puiseux;
pub mod report;
pub mod roots;
pub mod scalar;
pub mod slicer;
pub mod tol;
pub mod witness;

pub use error::{Error, Result};
