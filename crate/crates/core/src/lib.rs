pub mod cli;
pub mod dirichlet;
pub mod error;
pub mod kernel;
pub mod monomial;
pub mod psd;
pub mod quadrature;
pub mod rng;
pub mod sarason;
pub mod series;
pub mod space;
pub mod special;
pub mod subspace;

pub use error::{Error, Result};
