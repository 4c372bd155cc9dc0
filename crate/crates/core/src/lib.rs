pub mod error;
pub mod harness;
pub mod linalg;
pub mod matrix;
pub mod optim;
pub mod polar;
pub mod problems;
pub mod random;

pub use error::{Error, Result};
pub use matrix::DenseMatrix;
