//! Relative Strength Index with Wilder smoothing.

use crate::error::{Error, Result};

/// RSI of a price sequence; the first `period` entries are `None`.
///
/// The first averages are plain means of the first `period` gains and losses, later ones use
/// `avg = (avg * (period - 1) + current) / period`. A zero average loss gives 100.
pub fn rs_index(prices: &[f64], period: usize) -> Result<Vec<Option<f64>>> {
    if period == 0 {
        return Err(Error::domain("RSI period must be at least 1"));
    }
    if prices.len() < period + 1 {
        return Err(Error::InsufficientData {
            needed: period + 1,
            got: prices.len(),
        });
    }
    if prices.iter().any(|p| !p.is_finite()) {
        return Err(Error::Data("prices must be finite".into()));
    }
    let changes: Vec<f64> = prices.windows(2).map(|w| w[1] - w[0]).collect();
    let p = period as f64;
    let mut gain = changes[..period].iter().map(|c| c.max(0.0)).sum::<f64>() / p;
    let mut loss = changes[..period].iter().map(|c| (-c).max(0.0)).sum::<f64>() / p;
    let rsi = |gain: f64, loss: f64| {
        if loss == 0.0 {
            100.0
        } else {
            100.0 - 100.0 / (1.0 + gain / loss)
        }
    };
    let mut out = vec![None; period];
    out.push(Some(rsi(gain, loss)));
    for c in &changes[period..] {
        gain = (gain * (p - 1.0) + c.max(0.0)) / p;
        loss = (loss * (p - 1.0) + (-c).max(0.0)) / p;
        out.push(Some(rsi(gain, loss)));
    }
    Ok(out)
}
