use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

/// Seed for every stochastic routine. Equal seeds and parameters give bit-identical output.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SimSeed(pub u64);

impl SimSeed {
    /// Independent generator for a named stream of this seed.
    pub fn rng(self, stream: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.0);
        rng.set_stream(stream);
        rng
    }

    /// Derive a child seed, e.g. one per realization in a batch.
    pub fn child(self, index: u64) -> SimSeed {
        // splitmix64 finalizer over (seed, index)
        let mut z = self
            .0
            .wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        SimSeed(z ^ (z >> 31))
    }
}

impl From<u64> for SimSeed {
    fn from(v: u64) -> Self {
        SimSeed(v)
    }
}

// Stream ids. GHBMP levels use `GHBMP_STREAM_BASE + j`.
pub(crate) const BM_STREAM: u64 = 1;
pub(crate) const FGN_STREAM: u64 = 2;
pub(crate) const GHBMP_STREAM_BASE: u64 = 1 << 32;

/// Source of the Gaussian coefficients `ε_{j,k}` of the wavelet series.
pub trait InnovationSource: Sync {
    /// All `2^level` coefficients of one level, indexed by translate `k`.
    fn level(&self, level: u32) -> Vec<f64>;
}

/// Standard normal coefficients; level `j` is drawn from its own stream, so `ε_{j,k}`
/// depends only on `(seed, j, k)`.
#[derive(Debug, Clone, Copy)]
pub struct SeededInnovations(pub SimSeed);

impl InnovationSource for SeededInnovations {
    fn level(&self, level: u32) -> Vec<f64> {
        let mut rng = self.0.rng(GHBMP_STREAM_BASE + level as u64);
        (0..1usize << level)
            .map(|_| StandardNormal.sample(&mut rng))
            .collect()
    }
}

/// All-zero coefficients.
#[derive(Debug, Clone, Copy, Default)]
pub struct ZeroInnovations;

impl InnovationSource for ZeroInnovations {
    fn level(&self, level: u32) -> Vec<f64> {
        vec![0.0; 1usize << level]
    }
}

pub(crate) fn normals(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| StandardNormal.sample(rng)).collect()
}
