//! One entry point for every supported process, used by the command line and the service.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{
    simulate_bbridge, simulate_bm, simulate_fbbridge, simulate_fbm, simulate_fgn, simulate_ghbmp,
    HurstSpec, SimSeed,
};
use crate::error::{Error, Result};
use crate::series::{GridSpec, TimeSeries};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProcessKind {
    Bm,
    Bbridge,
    Fbm,
    Fbbridge,
    Fgn,
    Ghbmp,
}

impl ProcessKind {
    pub const ALL: [ProcessKind; 6] = [
        ProcessKind::Bm,
        ProcessKind::Bbridge,
        ProcessKind::Fbm,
        ProcessKind::Fbbridge,
        ProcessKind::Fgn,
        ProcessKind::Ghbmp,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ProcessKind::Bm => "bm",
            ProcessKind::Bbridge => "bbridge",
            ProcessKind::Fbm => "fbm",
            ProcessKind::Fbbridge => "fbbridge",
            ProcessKind::Fgn => "fgn",
            ProcessKind::Ghbmp => "ghbmp",
        }
    }

    /// Whether the process needs a constant Hurst parameter.
    pub fn needs_constant_hurst(self) -> bool {
        matches!(
            self,
            ProcessKind::Fbm | ProcessKind::Fbbridge | ProcessKind::Fgn
        )
    }

    pub fn has_terminal(self) -> bool {
        matches!(self, ProcessKind::Bbridge | ProcessKind::Fbbridge)
    }
}

impl fmt::Display for ProcessKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.name())
    }
}

impl FromStr for ProcessKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ProcessKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::domain(format!("unknown process kind `{s}`")))
    }
}

/// Hurst input of a simulation.
#[derive(Debug, Clone)]
pub enum ProcessHurst {
    None,
    Constant(f64),
    Function(HurstSpec),
}

/// A fully specified simulation.
#[derive(Debug, Clone)]
pub struct ProcessConfig {
    pub kind: ProcessKind,
    pub grid: GridSpec,
    pub hurst: ProcessHurst,
    pub trunc: u32,
    pub terminal: f64,
    pub seed: SimSeed,
}

/// Simulated path plus the number of Hurst values that had to be clamped.
#[derive(Debug, Clone)]
pub struct Simulation {
    pub series: TimeSeries,
    pub clamped: usize,
}

fn constant(cfg: &ProcessConfig) -> Result<f64> {
    match &cfg.hurst {
        ProcessHurst::Constant(h) => Ok(*h),
        _ => Err(Error::domain(format!(
            "{} needs a constant Hurst parameter",
            cfg.kind
        ))),
    }
}

/// Run the configured simulation. fGn is indexed by sample number `0..n`.
pub fn simulate_process(cfg: &ProcessConfig) -> Result<Simulation> {
    let series = match cfg.kind {
        ProcessKind::Bm => simulate_bm(&cfg.grid, cfg.seed)?,
        ProcessKind::Bbridge => simulate_bbridge(&cfg.grid, cfg.terminal, cfg.seed)?,
        ProcessKind::Fbm => simulate_fbm(&cfg.grid, constant(cfg)?, cfg.seed)?,
        ProcessKind::Fbbridge => {
            simulate_fbbridge(&cfg.grid, constant(cfg)?, cfg.terminal, cfg.seed)?
        }
        ProcessKind::Fgn => {
            let n = cfg.grid.times()?.len();
            let x = simulate_fgn(n, constant(cfg)?, cfg.seed)?;
            TimeSeries::new((0..n).map(|i| i as f64).collect(), x)?
        }
        ProcessKind::Ghbmp => {
            let spec = match &cfg.hurst {
                ProcessHurst::Function(h) => h.clone(),
                ProcessHurst::Constant(h) => HurstSpec::constant(*h),
                ProcessHurst::None => {
                    return Err(Error::domain("ghbmp needs a Hurst function"));
                }
            };
            let series = simulate_ghbmp(&cfg.grid, &spec, cfg.trunc, cfg.seed)?;
            let clamped = (0..=cfg.trunc).map(|j| spec.level_values(j).1).sum();
            return Ok(Simulation { series, clamped });
        }
    };
    Ok(Simulation { series, clamped: 0 })
}
