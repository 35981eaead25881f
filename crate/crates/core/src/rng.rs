//! Deterministic random number generation.
//!
//! The generator is xoshiro256++ with SplitMix64 seed expansion, fixed for
//! the lifetime of this crate: a seed fully determines every downstream draw
//! on any platform and at any thread count. All randomness in the workspace
//! flows through [`Rng`] so that experiment runs are reproducible bit for bit.

const SPLITMIX_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 finalizer, also used for seed derivation.
fn splitmix_mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives an independent seed from a base seed, a stream tag, and an index.
///
/// Sessions use this so that, for example, learner initialization at round t
/// and query-strategy randomness never share a stream: changing the learner
/// cannot perturb a random query sequence.
pub fn derive_seed(base: u64, tag: u64, index: u64) -> u64 {
    let mut z = base;
    z = splitmix_mix(z ^ tag.wrapping_mul(SPLITMIX_GAMMA));
    z = splitmix_mix(z ^ index.wrapping_mul(0xD1B5_4A32_D192_ED03));
    z
}

/// xoshiro256++ generator seeded through SplitMix64.
#[derive(Debug, Clone)]
pub struct Rng {
    seed: u64,
    state: [u64; 4],
}

impl Rng {
    pub fn new(seed: u64) -> Self {
        let mut sm = seed;
        let mut next = || {
            sm = sm.wrapping_add(SPLITMIX_GAMMA);
            splitmix_mix(sm)
        };
        let state = [next(), next(), next(), next()];
        Rng { seed, state }
    }

    /// The seed this generator was constructed from.
    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn next_u64(&mut self) -> u64 {
        let s = &mut self.state;
        let result = s[0].wrapping_add(s[3]).rotate_left(23).wrapping_add(s[0]);
        let t = s[1] << 17;
        s[2] ^= s[0];
        s[3] ^= s[1];
        s[1] ^= s[2];
        s[0] ^= s[3];
        s[2] ^= t;
        s[3] = s[3].rotate_left(45);
        result
    }

    /// Uniform in [0, 1) with 53 random mantissa bits.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform index in [0, n). Lemire multiply-shift with rejection, so the
    /// distribution is exactly uniform rather than modulo-biased.
    pub fn next_index(&mut self, n: usize) -> usize {
        assert!(n > 0, "next_index: empty range");
        let n = n as u64;
        let threshold = n.wrapping_neg() % n;
        loop {
            let m = u128::from(self.next_u64()) * u128::from(n);
            if (m as u64) >= threshold {
                return (m >> 64) as usize;
            }
        }
    }

    /// Standard normal deviate via Box-Muller.
    pub fn next_normal(&mut self) -> f64 {
        let u1 = self.next_f64();
        let u2 = self.next_f64();
        // 1 - u1 lies in (0, 1], keeping the log finite.
        let r = (-2.0 * (1.0 - u1).ln()).sqrt();
        r * (std::f64::consts::TAU * u2).cos()
    }

    /// In-place Fisher-Yates shuffle.
    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = self.next_index(i + 1);
            items.swap(i, j);
        }
    }
}
