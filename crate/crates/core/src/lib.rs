//! Exact series and differential-operator algebra for the Kontsevich-Witten
//! and Hodge tau-functions.

pub mod bivariate;
pub mod error;
pub mod exact;
pub mod ops;
pub mod report;
pub mod series;
pub mod tau;
pub mod verify;

pub use error::{Error, Result};
