//! Seeded random streams shared by every stochastic operation.
//!
//! A [`SeededRng`] is a ChaCha20 keystream whose 256-bit key is expanded from
//! a 64-bit seed with SplitMix64. Child streams are derived from the parent
//! *seed* (never from its position), so `derive(k)` returns the same stream no
//! matter how many draws the parent has already produced:
//!
//! ```text
//! child_seed = splitmix64(splitmix64(seed) ^ splitmix64(key ^ 0xD1B5_4A32_D192_ED03))
//! ```
//!
//! String keys are reduced to `u64` by taking the first eight bytes of their
//! SHA-256 digest, little-endian. Transcendental functions used by the
//! samplers come from `libm` so draws are bit-identical across targets.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use sha2::{Digest, Sha256};

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;
const DERIVE_SALT: u64 = 0xD1B5_4A32_D192_ED03;

/// One step of the SplitMix64 output function applied to `x + gamma`.
pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(GOLDEN_GAMMA);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Stable 64-bit key for a string (first 8 bytes of SHA-256, little-endian).
pub fn stable_hash(key: &str) -> u64 {
    let digest = Sha256::digest(key.as_bytes());
    let mut bytes = [0u8; 8];
    bytes.copy_from_slice(&digest[..8]);
    u64::from_le_bytes(bytes)
}

/// Mixing function used by [`SeededRng::derive`].
pub fn mix_seed(seed: u64, key: u64) -> u64 {
    splitmix64(splitmix64(seed) ^ splitmix64(key ^ DERIVE_SALT))
}

#[derive(Debug, Clone)]
pub struct SeededRng {
    seed: u64,
    inner: ChaCha20Rng,
}

impl SeededRng {
    pub fn new(seed: u64) -> Self {
        let mut key = [0u8; 32];
        let mut state = seed;
        for chunk in key.chunks_exact_mut(8) {
            let word = splitmix64(state);
            state = state.wrapping_add(GOLDEN_GAMMA);
            chunk.copy_from_slice(&word.to_le_bytes());
        }
        Self {
            seed,
            inner: ChaCha20Rng::from_seed(key),
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Independent child stream keyed by `(self.seed, key)`.
    pub fn derive(&self, key: u64) -> SeededRng {
        SeededRng::new(mix_seed(self.seed, key))
    }

    pub fn derive_str(&self, key: &str) -> SeededRng {
        self.derive(stable_hash(key))
    }

    /// Uniform draw in `[0, 1)` with 53 bits of precision.
    pub fn uniform(&mut self) -> f64 {
        (self.inner.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform draw in `[-1, 1)`.
    pub fn signed_unit(&mut self) -> f64 {
        2.0 * self.uniform() - 1.0
    }

    /// Uniform integer in `[0, n)`. Panics when `n == 0`.
    pub fn below(&mut self, n: u64) -> u64 {
        assert!(n > 0, "below(0)");
        self.inner.random_range(0..n)
    }

    /// Uniform integer in the inclusive range `[lo, hi]`.
    pub fn int_inclusive(&mut self, lo: i64, hi: i64) -> i64 {
        assert!(lo <= hi, "empty range {lo}..={hi}");
        let span = (hi - lo) as u64 + 1;
        lo + self.below(span) as i64
    }

    pub fn coin(&mut self) -> bool {
        self.inner.next_u32() & 1 == 1
    }

    /// Standard normal draw (Box-Muller, cosine branch only).
    pub fn standard_normal(&mut self) -> f64 {
        let u1 = 1.0 - self.uniform();
        let u2 = self.uniform();
        libm::sqrt(-2.0 * libm::log(u1)) * libm::cos(std::f64::consts::TAU * u2)
    }

    pub fn normal(&mut self, mean: f64, std: f64) -> f64 {
        mean + std * self.standard_normal()
    }

    /// Poisson draw. Knuth's product method below a mean of 30, a rounded
    /// normal approximation above it.
    pub fn poisson(&mut self, mean: f64) -> f64 {
        if mean <= 0.0 {
            return 0.0;
        }
        if mean < 30.0 {
            let limit = libm::exp(-mean);
            let mut k = 0.0;
            let mut p = self.uniform();
            while p > limit {
                k += 1.0;
                p *= self.uniform();
            }
            k
        } else {
            libm::round(self.normal(mean, libm::sqrt(mean))).max(0.0)
        }
    }
}

impl RngCore for SeededRng {
    fn next_u32(&mut self) -> u32 {
        self.inner.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.inner.fill_bytes(dst)
    }
}
