//! Growth regressions with a quadratic in government spending, unit-root and
//! residual diagnostics, and the growth-maximizing spending share.

pub mod armey;
pub mod config;
pub mod dataset;
pub mod diagnostics;
pub mod error;
pub mod numerics;
pub mod ols;
pub mod pipeline;
pub mod plot;
pub mod report;
pub mod simulate;
pub mod unitroot;

pub use error::{Error, Result};
