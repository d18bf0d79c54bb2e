//! Exact and floating-point verification of proper rational maps between
//! complex unit balls and Siegel upper-half spaces.

pub mod catalog;
pub mod engine;
pub mod error;
pub mod jet;
pub mod lft;
pub mod linalg;
pub mod maps;
pub mod monomial;
pub mod normal_form;
pub mod normalize;
pub mod pipeline;
pub mod poly;
pub mod scalar;
pub mod simplex;
pub mod spans;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use poly::{Herm, HermPoly, Holo, HoloPoly, Mono};
pub use scalar::{rat, GaussianRational, Mode, Scalar};

pub type ExactHolo = HoloPoly<GaussianRational>;
pub type ExactHerm = HermPoly<GaussianRational>;
pub type FloatHolo = HoloPoly<Complex64>;
pub type FloatHerm = HermPoly<Complex64>;
