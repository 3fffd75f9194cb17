//! Seeded random element generation: two uniform random complete prefix
//! codes of equal size, a uniform random bijection between them, and
//! independent flip bits.
//!
//! A random prefix code of size m is drawn by repeatedly expanding a
//! uniformly chosen leaf starting from the root; m must be 1 mod (n-1)
//! to be reachable. The generator is ChaCha8 so seeds reproduce across
//! platforms.

use num_rational::Ratio;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::address::Arity;
use crate::element::{Element, Rule};
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct SamplerConfig {
    pub arity: Arity,
    /// Number of rules; must be 1 mod (n-1).
    pub partition_size: usize,
    /// Exact probability that each rule carries a flip.
    pub flip_probability: Ratio<u32>,
    pub seed: u64,
}

impl SamplerConfig {
    pub fn validate(&self) -> Result<()> {
        let n = self.arity.get() as usize;
        if self.partition_size == 0 || (self.partition_size - 1) % (n - 1) != 0 {
            return Err(Error::InvalidPartitionSize {
                size: self.partition_size,
                arity: self.arity.get(),
            });
        }
        if self.flip_probability > Ratio::from_integer(1) {
            return Err(Error::InvalidProbability);
        }
        Ok(())
    }
}

fn random_prefix_code(rng: &mut ChaCha8Rng, arity: Arity, size: usize) -> Vec<Vec<u8>> {
    let mut leaves: Vec<Vec<u8>> = vec![Vec::new()];
    while leaves.len() < size {
        let idx = rng.gen_range(0..leaves.len());
        let leaf = leaves.swap_remove(idx);
        for d in 0..arity.get() as u8 {
            let mut w = leaf.clone();
            w.push(d);
            leaves.push(w);
        }
    }
    leaves
}

/// Draw one element; deterministic per config.
pub fn sample_element(cfg: &SamplerConfig) -> Result<Element> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let domains = random_prefix_code(&mut rng, cfg.arity, cfg.partition_size);
    let mut ranges = random_prefix_code(&mut rng, cfg.arity, cfg.partition_size);
    ranges.shuffle(&mut rng);
    let rules = domains
        .into_iter()
        .zip(ranges)
        .map(|(domain, range)| {
            let flip = rng.gen_range(0..*cfg.flip_probability.denom())
                < *cfg.flip_probability.numer();
            Rule { domain, range, flip }
        })
        .collect();
    Element::new(cfg.arity, rules)
}
