//! Counter-based random streams.
//!
//! Every stream is SplitMix64 run from a key derived from the pair
//! `(master_seed, stream_index)`. Output `k` is `mix64(key + (k + 1)·γ)`, so a
//! stream is a pure function of its key and counter: identical pairs replay
//! identical sequences on every platform, and any draw can be recomputed
//! without replaying its predecessors.

const GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;
const STREAM_SALT: u64 = 0xD1B5_4A32_D192_ED03;

/// The SplitMix64 output finalizer (Stafford variant 13).
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Plain SplitMix64, exposed so the published test vectors can be checked.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GAMMA);
        mix64(self.state)
    }
}

/// A reproducible random stream keyed by `(master_seed, stream_index)`.
#[derive(Debug, Clone)]
pub struct RngStream {
    master_seed: u64,
    stream_index: u64,
    inner: SplitMix64,
}

impl RngStream {
    pub fn new(master_seed: u64, stream_index: u64) -> Self {
        let key = mix64(mix64(master_seed) ^ mix64(stream_index ^ STREAM_SALT));
        Self {
            master_seed,
            stream_index,
            inner: SplitMix64::new(key),
        }
    }

    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }

    pub fn stream_index(&self) -> u64 {
        self.stream_index
    }

    /// Child stream whose key depends on this stream's key and `index`, not
    /// on how many values this stream has already produced.
    pub fn fork(&self, index: u64) -> RngStream {
        let parent_key = mix64(mix64(self.master_seed) ^ mix64(self.stream_index ^ STREAM_SALT));
        RngStream::new(parent_key, index)
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    /// Uniform on `[0, 1)` with 53 random bits.
    #[inline]
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform on the open interval `(0, 1)`.
    #[inline]
    pub fn next_open_f64(&mut self) -> f64 {
        ((self.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform on `[-1, 1)`.
    #[inline]
    pub fn next_signed_f64(&mut self) -> f64 {
        2.0 * self.next_f64() - 1.0
    }

    #[inline]
    pub fn next_sign(&mut self) -> f64 {
        if self.next_u64() >> 63 == 0 {
            1.0
        } else {
            -1.0
        }
    }

    /// Two independent standard normals by the Marsaglia polar method.
    pub fn next_gaussian_pair(&mut self) -> (f64, f64) {
        loop {
            let u = self.next_signed_f64();
            let v = self.next_signed_f64();
            let s = u * u + v * v;
            if s > 0.0 && s < 1.0 {
                let factor = (-2.0 * s.ln() / s).sqrt();
                return (u * factor, v * factor);
            }
        }
    }
}
