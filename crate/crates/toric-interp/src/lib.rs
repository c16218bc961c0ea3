//! Exact lattice-point interpolation on dilated triangles and weighted
//! projective planes.
//!
//! The crate decides, with exact integer/rational arithmetic only, whether
//! linear systems of curves with a prescribed multiplicity at a general point
//! are empty, produces machine-checkable certificates either way, and builds
//! on that to answer classification questions for blow-ups of weighted
//! projective planes P(a,b,c) at a general point.
//!
//! Module map:
//! - [`exact`]: big integers/rationals, generalized binomials, isqrt, the
//!   multiplicity threshold `m_min`, and the 62-bit Montgomery prime field
//!   with the fixed prime list used by certified rank runs.
//! - [`lattice`]: points, rational triangles, affine unimodular maps, support
//!   sets (lattice points of dilated triangles, weighted-degree monomial
//!   exponents), and the shear/translate normalization of slope-criterion
//!   triangles.
//! - [`interp`]: the two row-per-point interpolation matrices (derivative
//!   values and coordinate powers), modular and fraction-free exact rank with
//!   certificates, exact kernels, emptiness and point-separation decisions.
//! - [`gk`]: the slope criterion for triangles of width < 1, the curve
//!   interpolation matrix M, its determinant law, and explicit witness curves
//!   through all-but-the-leftmost lattice point, verified by evaluation.
//! - [`classify`]: the Mori-dream-space rule table for P(a,b,c), negative-class
//!   search, verdicts with citations, and the coprime-triple scan.
//! - [`text`]: the textual formats (triangle spec, rationals, CLI lists).

pub mod classify;
pub mod cli;
pub mod error;
pub mod exact;
pub mod gk;
pub mod interp;
pub mod lattice;
pub mod text;

pub use error::{Error, Result};
