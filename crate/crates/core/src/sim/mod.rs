//! Simulation of Brownian, fractional and Haar-based multifractional processes.

mod classical;
mod ghbmp;
mod hurst;
mod innovations;
pub(crate) mod kernel;
mod process;

pub use classical::{
    fgn_autocovariance, simulate_bbridge, simulate_bm, simulate_fbbridge, simulate_fbm,
    simulate_fgn,
};
pub use ghbmp::{
    simulate_ghbmp, simulate_ghbmp_with, GhbmpTerms, DEFAULT_TRUNCATION, MAX_TRUNCATION,
};
pub use hurst::{HurstSpec, HURST_EPS};
pub use innovations::{InnovationSource, SeededInnovations, SimSeed, ZeroInnovations};
pub use kernel::haar_kernel;
pub use process::{simulate_process, ProcessConfig, ProcessHurst, ProcessKind, Simulation};
