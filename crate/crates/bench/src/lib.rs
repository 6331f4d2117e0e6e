//! Inputs shared by the benchmarks in `benches/`.

use leaftrack::simulator::{DetectorNoise, EmbeddingNoise};
use leaftrack::{CostMatrix, ScenarioConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Uniform `[0, 1)` costs.
pub fn random_costs(rows: usize, cols: usize, seed: u64) -> CostMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    CostMatrix::from_fn(rows, cols, |_, _| rng.random_range(0.0..1.0))
}

/// A scenario with misses, false positives, births, deaths and appearance
/// noise, sized by leaf count and sequence length.
pub fn noisy_scenario(n_leaves: u32, n_frames: u32, seed: u64) -> ScenarioConfig {
    ScenarioConfig {
        n_frames,
        n_leaves,
        birth_window: (n_frames / 3).max(1),
        senescence_prob: 0.3,
        occlusion_prob: 0.05,
        detector: DetectorNoise { miss_prob: 0.05, fp_rate: 1.0, box_jitter_std: 3.0, ..Default::default() },
        embedding: EmbeddingNoise { noise_std: 0.044, drift_rate: 0.02, shared_appearance: 0.25 },
        seed,
        ..Default::default()
    }
}
