pub mod cli;
pub mod convolution;
pub mod densities;
pub mod error;
pub mod functionals;
pub mod hermite;
pub mod profile;
mod jet;
pub mod quadrature;
pub mod report;
pub mod support;
pub mod verify;
