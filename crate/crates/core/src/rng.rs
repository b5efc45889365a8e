//! Deterministic xorshift64* generator.
//!
//! Every random quantity on an experiment path comes from this generator so
//! runs can be replayed bit-exactly in any language. The full recipe:
//!
//! * seeding: `state = splitmix64(seed)`; a zero result is replaced by
//!   `0x9E37_79B9_7F4A_7C15` (xorshift cannot leave the zero state).
//!   `splitmix64(z)`: `z += 0x9E37_79B9_7F4A_7C15;
//!   z = (z ^ (z >> 30)) * 0xBF58_476D_1CE4_E5B9;
//!   z = (z ^ (z >> 27)) * 0x94D0_49BB_1331_11EB; z ^ (z >> 31)`.
//! * step: `x ^= x >> 12; x ^= x << 25; x ^= x >> 27;
//!   out = x * 0x2545_F491_4F6C_DD1D` (all arithmetic wrapping, mod 2^64).
//! * unit draw: `(out >> 11) as f64 * 2^-53`, in `[0, 1)`.
//! * symmetric draw in `[-r, r]`: `-r + 2r * unit`.
//! * index below `n`: `out % n`.

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;
const MULTIPLIER: u64 = 0x2545_F491_4F6C_DD1D;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct XorShift64Star {
    state: u64,
}

impl XorShift64Star {
    pub fn new(seed: u64) -> Self {
        let state = match splitmix64(seed) {
            0 => GOLDEN,
            s => s,
        };
        Self { state }
    }

    pub fn next_u64(&mut self) -> u64 {
        let mut x = self.state;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        self.state = x;
        x.wrapping_mul(MULTIPLIER)
    }

    /// Uniform draw in `[0, 1)` with 53 random bits.
    pub fn next_unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform draw in `[-half_width, half_width]`.
    pub fn next_symmetric(&mut self, half_width: f64) -> f64 {
        -half_width + 2.0 * half_width * self.next_unit()
    }

    pub fn next_below(&mut self, n: usize) -> usize {
        assert!(n > 0, "next_below(0)");
        (self.next_u64() % n as u64) as usize
    }

    /// Fisher-Yates: for `i` from `len-1` down to 1, swap `i` with `next_below(i+1)`.
    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = self.next_below(i + 1);
            items.swap(i, j);
        }
    }
}
