//! Counter-based random streams.
//!
//! Every draw is a pure function of `(seed, tag, counter)`, so a stream can be
//! re-opened at any position and independent streams never interfere. The
//! mixer is the SplitMix64 finalizer applied to a combined key.

use rand::RngCore;

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

#[inline]
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Hash of a `(seed, tag)` pair, used as the key of a stream.
#[inline]
pub fn stream_key(seed: u64, tag: u64) -> u64 {
    mix64(
        seed.wrapping_add(GOLDEN).wrapping_mul(3) ^ mix64(tag.wrapping_add(0x632B_E59B_D9B4_E019)),
    )
}

/// The `counter`-th 64-bit word of stream `(seed, tag)`.
#[inline]
pub fn word(seed: u64, tag: u64, counter: u64) -> u64 {
    word_keyed(stream_key(seed, tag), counter)
}

#[inline]
pub(crate) fn word_keyed(key: u64, counter: u64) -> u64 {
    mix64(key ^ counter.wrapping_add(1).wrapping_mul(GOLDEN))
}

/// Uniform double in `[0, 1)` with 53 random bits.
#[inline]
pub fn uniform(seed: u64, tag: u64, counter: u64) -> f64 {
    to_unit(word(seed, tag, counter))
}

#[inline]
pub(crate) fn to_unit(w: u64) -> f64 {
    (w >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Derive a child seed, e.g. one per Monte Carlo trial.
#[inline]
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    word(seed, 0xD1B5_4A32_D192_ED03, index)
}

/// Sequential view over one stream; implements [`RngCore`] so it can drive
/// `rand` algorithms such as shuffles.
#[derive(Debug, Clone)]
pub struct CounterRng {
    key: u64,
    counter: u64,
}

impl CounterRng {
    pub fn new(seed: u64, tag: u64) -> Self {
        Self {
            key: stream_key(seed, tag),
            counter: 0,
        }
    }

    pub fn position(&self) -> u64 {
        self.counter
    }

    pub fn seek(&mut self, counter: u64) {
        self.counter = counter;
    }

    /// Uniform in `[0, 1)`.
    pub fn next_f64(&mut self) -> f64 {
        to_unit(self.next_u64())
    }

    /// Uniform in `(0, 1]`, safe to pass to `ln`.
    pub fn next_open_f64(&mut self) -> f64 {
        1.0 - self.next_f64()
    }
}

impl RngCore for CounterRng {
    fn next_u32(&mut self) -> u32 {
        (self.next_u64() >> 32) as u32
    }

    fn next_u64(&mut self) -> u64 {
        let w = word_keyed(self.key, self.counter);
        self.counter += 1;
        w
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        for chunk in dst.chunks_mut(8) {
            let bytes = self.next_u64().to_le_bytes();
            chunk.copy_from_slice(&bytes[..chunk.len()]);
        }
    }
}
