//! Level-set statistics of a path and the relative strength index of a price list.

use mfrac::geom::{
    cross_count, exc_area, extremum, rs_index, sojourn, streak_stats, Direction, Extreme,
    LevelQuery,
};
use mfrac::sim::simulate_fbm;
use mfrac::{GridSpec, SimSeed};

fn main() -> mfrac::Result<()> {
    let x = simulate_fbm(&GridSpec::dyadic(12), 0.7, SimSeed(5))?;
    let q = LevelQuery::new(0.0, Direction::Greater);
    let streaks = streak_stats(&x, &q)?;
    let max = extremum(&x, Extreme::Max);

    println!("time above 0:      {:.4}", sojourn(&x, &q)?);
    println!("excursion area:    {:.4}", exc_area(&x, &q)?);
    println!("crossings of 0:    {}", cross_count(&x, 0.0));
    println!(
        "longest streak:    {:.4} ({} streaks)",
        streaks.longest, streaks.count
    );
    println!("maximum:           {:.4} at t = {:.4}", max.value, max.time);

    let prices = [
        44.34, 44.09, 44.15, 43.61, 44.33, 44.83, 45.10, 45.42, 45.84, 46.08,
    ];
    let rsi = rs_index(&prices, 5)?;
    for (p, r) in prices.iter().zip(&rsi) {
        match r {
            Some(v) => println!("{p:7.2}  RSI {v:6.2}"),
            None => println!("{p:7.2}"),
        }
    }
    Ok(())
}
