//! Crossed modules of matrix Lie groups, their derived graded Lie groups and
//! algebras, and the Cartan calculus of the trivial synthetic principal
//! 2-bundle, checked numerically against Grassmann-embedding oracles.

pub mod crossed_module;
pub mod derived;
pub mod error;
pub mod graded_coeff;
pub mod harness;
pub mod matrix_lie;
pub mod residual;
pub mod sampling;
pub mod synthetic_bundle;

pub use error::{Error, Result};
