//! Numerical toolkit for deciding whether a Levy process hits points.

pub mod catalog;
pub mod classifier;
pub mod conditions;
pub mod error;
pub mod exponent;
pub mod model;
pub mod numerics;
pub mod pairs;
pub mod report;
pub mod special;

pub use error::{HuntError, Result};
