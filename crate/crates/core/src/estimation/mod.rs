//! Time-varying Hurst and local fractal dimension estimation.

mod gqv;
mod loess;

pub use gqv::{
    estimate_hurst, estimate_lfd, gqv_coefficients, EstimatorParams, GridPolicy, HurstEstimate,
    Quantity,
};
pub use loess::{loess, smooth_estimate, DEFAULT_SPAN};
