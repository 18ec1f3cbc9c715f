//! SplitMix64: the documented generator behind all experiment sampling.
//!
//! Chosen so instance streams can be reproduced from the seed in any
//! language with a dozen lines: `state += 0x9e3779b97f4a7c15;
//! z = state; z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9;
//! z = (z ^ (z >> 27)) * 0x94d049bb133111eb; return z ^ (z >> 31)`.
//! Doubles take the top 53 bits over 2^53.

#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    /// Uniform in `[0, 1)`.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    /// Uniform index below `bound`.
    pub fn next_index(&mut self, bound: usize) -> usize {
        debug_assert!(bound > 0);
        (self.next_u64() % bound as u64) as usize
    }

    /// Random planar unit vector via Box-Muller.
    pub fn next_unit_vector_2d(&mut self) -> [f64; 2] {
        loop {
            let u1 = 1.0 - self.next_f64(); // (0, 1]
            let u2 = self.next_f64();
            let r = (-2.0 * u1.ln()).sqrt();
            let (s, c) = (std::f64::consts::TAU * u2).sin_cos();
            let v = [r * c, r * s];
            let norm = (v[0] * v[0] + v[1] * v[1]).sqrt();
            if norm > 1e-12 {
                return [v[0] / norm, v[1] / norm];
            }
        }
    }
}
