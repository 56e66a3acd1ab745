//! Simulation and analysis of Gaussian Haar-based multifractional processes.
//!
//! The crate covers the whole workflow around multifractional time series:
//!
//! - [`sim`]: Brownian motion and bridges, fractional Gaussian noise, fractional Brownian
//!   motion and bridges, and the Haar-wavelet series process with time-varying Hurst function.
//! - [`expr`]: a small expression language for Hurst functions of `t`.
//! - [`estimation`]: time-varying Hurst and local fractal dimension estimates from
//!   generalized quadratic variations, plus local-linear smoothing.
//! - [`covariance`]: theoretical and empirical covariance matrices.
//! - [`clustering`]: hierarchical and k-means clustering of realizations by roughness.
//! - [`geom`]: sojourn measure, excursion area, RSI, crossings, streaks and extrema.
//!
//! The `mfrac` binary and the JSON service in [`api`] are thin layers over these modules.

pub mod api;
pub mod bench;
pub mod cli;
pub mod clustering;
pub mod covariance;
pub mod error;
pub mod estimation;
pub mod expr;
pub mod geom;
pub mod io;
pub mod plot;
pub mod series;
pub mod sim;

pub use error::{Error, Result};
pub use series::{GridSpec, TimeSeries};
pub use sim::{HurstSpec, SimSeed};
