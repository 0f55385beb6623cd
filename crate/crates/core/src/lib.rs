//! Exact orthosymplectic-equivariant quantization over `R^{p+q|2r}`.

pub mod cli;
pub mod error;
pub mod geom;
pub mod linalg;
pub mod ospalg;
pub mod par;
pub mod quantizer;
pub mod rational;
pub mod structops;
pub mod verify;
pub mod superalg;
pub mod weyl;

pub use error::{Error, Result};
pub use rational::Rational;
pub use superalg::{Monomial, Parity, SpaceSignature, SuperPolynomial};
