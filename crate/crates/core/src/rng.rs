//! SplitMix64 generator used by every sampled routine.
//!
//! Contract: the state advances by `0x9E3779B97F4A7C15` per draw and each
//! output is the state passed through the mixer
//! `z ^= z >> 30; z *= 0xBF58476D1CE4E5B9; z ^= z >> 27; z *= 0x94D049BB133111EB; z ^= z >> 31`
//! (all arithmetic wrapping). Sample `j` of a seeded search draws from its own
//! generator whose seed is output number `j` (0-based) of `SplitMix64::new(seed)`,
//! so results do not depend on how samples are split across workers.
//! Uniform reals are `(next_u64() >> 11) * 2^-53`; `k`-bit integers are the top
//! `k` bits of `next_u64()`.

const GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    /// Generator for sample `index` of a search seeded with `seed`.
    pub fn for_sample(seed: u64, index: u64) -> Self {
        Self::new(mix(seed.wrapping_add(GAMMA.wrapping_mul(index.wrapping_add(1)))))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GAMMA);
        mix(self.state)
    }

    /// Uniform on `[0, 1)`.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform on `[lo, hi)`.
    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }

    /// Uniform integer in `0..2^bits`, `1 <= bits <= 63`.
    pub fn next_bits(&mut self, bits: u32) -> u64 {
        debug_assert!((1..64).contains(&bits));
        self.next_u64() >> (64 - bits)
    }

    pub fn next_bool(&mut self) -> bool {
        self.next_bits(1) == 1
    }
}
