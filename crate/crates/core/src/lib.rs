//! Symbolic-numeric toolkit for germs of holomorphic vector fields on the
//! complex plane.
//!
//! The algebraic core is generic over a [`Scalar`] coefficient field; the
//! aliases below fix the two fields used in practice: exact Gaussian
//! rationals and double precision complex floats.

pub mod blowup;
pub mod catalog;
pub mod error;
pub mod germ;
pub mod hirzebruch;
pub mod mr;
pub mod numflow;
pub mod onedim;
pub mod scalar;
pub mod series;

pub use error::{GermError, Result};
pub use scalar::{format_scalar, GaussRat, Scalar, C32, C64};
pub use germ::{lie_bracket, derive_along, VectorFieldGerm};
pub use series::{Jet1, Jet2, Laurent2, Var, DEFAULT_DEGREE};

pub type ExactJet1 = Jet1<GaussRat>;
pub type ExactJet2 = Jet2<GaussRat>;
pub type FloatJet1 = Jet1<C64>;
pub type FloatJet2 = Jet2<C64>;
