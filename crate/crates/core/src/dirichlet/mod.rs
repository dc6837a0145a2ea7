//! Weighted Dirichlet spaces `D_alpha = D(mu_alpha)`.

pub mod blaschke;
pub mod demo;
pub mod local;
pub mod measure;
pub mod s1;
