//! Seeded, spherically uniform unit vectors.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::embedding::EmbeddingVector;
use crate::error::Result;

/// Normalized i.i.d. standard Gaussians, which are uniform on the sphere.
pub fn random_unit_vector<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Result<EmbeddingVector> {
    loop {
        let raw: Vec<f64> = (0..dim).map(|_| rng.sample(StandardNormal)).collect();
        match EmbeddingVector::normalize(&raw) {
            Err(crate::Error::ZeroVector { .. }) => continue,
            other => return other,
        }
    }
}

/// Deterministic stream of unit vectors for a given seed.
#[derive(Debug, Clone)]
pub struct SyntheticSource {
    rng: ChaCha8Rng,
}

impl SyntheticSource {
    pub fn new(seed: u64) -> Self {
        SyntheticSource {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn unit_vector(&mut self, dim: usize) -> Result<EmbeddingVector> {
        random_unit_vector(&mut self.rng, dim)
    }

    /// Standard Gaussian entries, not normalized.
    pub fn gaussian(&mut self, dim: usize) -> Vec<f64> {
        (0..dim).map(|_| self.rng.sample(StandardNormal)).collect()
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }
}
