//! Group realizations by their estimated Hurst functions.

use mfrac::api::simulate_families;
use mfrac::clustering::{
    adjusted_rand_index, hclust_hurst, kmeans_hurst, HclustOptions, KmeansOptions,
};
use mfrac::{HurstSpec, SimSeed};

fn main() -> mfrac::Result<()> {
    let families = [HurstSpec::constant(0.2), HurstSpec::constant(0.8)];
    let (paths, truth) = simulate_families(&families, 5, 2049, 15, 1)?;

    let hc = hclust_hurst(
        &paths,
        &HclustOptions {
            k: Some(2),
            ..Default::default()
        },
    )?;
    let km = kmeans_hurst(
        &paths,
        &KmeansOptions {
            nstart: 5,
            ..KmeansOptions::new(2, SimSeed(1))
        },
    )?;

    println!("truth:  {truth:?}");
    println!(
        "hclust: {:?}  ARI {:.3}",
        hc.cluster,
        adjusted_rand_index(&truth, &hc.cluster)?
    );
    println!(
        "kmeans: {:?}  ARI {:.3}",
        km.cluster,
        adjusted_rand_index(&truth, &km.cluster)?
    );
    Ok(())
}
