//! Counter-based SplitMix64 generator.
//!
//! Output `k` of stream `seed` is `mix(seed + (k + 1) * 0x9E3779B97F4A7C15)`
//! with the SplitMix64 finaliser:
//!
//! ```text
//! z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//! z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//! z =  z ^ (z >> 31)
//! ```
//!
//! All arithmetic wraps modulo 2^64, so draws are identical on every platform
//! and any draw can be computed directly from its index. Uniforms use the top
//! 53 bits: `u = ((z >> 11) + 0.5) * 2^-53`, which lies strictly inside (0, 1).

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

#[inline]
fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Stateless access to the stream `seed`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CounterRng {
    seed: u64,
}

impl CounterRng {
    pub fn new(seed: u64) -> Self {
        Self { seed }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Raw 64-bit output at position `counter`.
    #[inline]
    pub fn u64_at(&self, counter: u64) -> u64 {
        mix(self
            .seed
            .wrapping_add(counter.wrapping_add(1).wrapping_mul(GOLDEN_GAMMA)))
    }

    /// Uniform draw in the open interval (0, 1) at position `counter`.
    #[inline]
    pub fn uniform_at(&self, counter: u64) -> f64 {
        ((self.u64_at(counter) >> 11) as f64 + 0.5) * (1.0 / 9_007_199_254_740_992.0)
    }
}
