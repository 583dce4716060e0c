//! Caching-aided rate splitting for a two-class (center/edge) downlink:
//! system model, coded-caching placement and delivery, closed-form SINR
//! distributions, conditional achieved rates, and an independent
//! Monte-Carlo simulator used as an oracle for the analysis.

pub mod caching;
pub mod config;
pub mod distributions;
pub mod error;
pub mod model;
pub mod montecarlo;
pub mod quadrature;
pub mod rates;
pub mod special;
pub mod sweep;
pub mod validation;

pub use error::{CrsError, Result};
