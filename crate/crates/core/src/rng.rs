//! Deterministic substream seeding.
//!
//! Every random quantity in the toolkit is drawn from a ChaCha stream derived
//! from `(master seed, purpose, index)`. Workers that own distinct indices
//! never share a stream, so Monte Carlo results are bit-identical for a fixed
//! `(seed, trials)` pair regardless of how trials are scheduled.

use ndarray::{Array1, Array2};
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

/// Independent stream families, one per kind of randomness.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StreamPurpose {
    UserDrop,
    FastFading,
    TrainingNoise,
    UplinkSymbols,
    UplinkNoise,
    DownlinkSymbols,
    DownlinkNoise,
    RateTrial,
    DualityInstance,
    Validation,
}

impl StreamPurpose {
    fn tag(self) -> u64 {
        match self {
            StreamPurpose::UserDrop => 1,
            StreamPurpose::FastFading => 2,
            StreamPurpose::TrainingNoise => 3,
            StreamPurpose::UplinkSymbols => 4,
            StreamPurpose::UplinkNoise => 5,
            StreamPurpose::DownlinkSymbols => 6,
            StreamPurpose::DownlinkNoise => 7,
            StreamPurpose::RateTrial => 8,
            StreamPurpose::DualityInstance => 9,
            StreamPurpose::Validation => 10,
        }
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Derive the generator for `(master, purpose, index)`.
pub fn substream(master: u64, purpose: StreamPurpose, index: u64) -> ChaCha8Rng {
    let mut words = [0u64; 4];
    let mut state = splitmix64(master);
    state = splitmix64(state ^ purpose.tag());
    state = splitmix64(state ^ index);
    for w in &mut words {
        state = splitmix64(state);
        *w = state;
    }
    let mut seed = [0u8; 32];
    for (chunk, w) in seed.chunks_exact_mut(8).zip(words) {
        chunk.copy_from_slice(&w.to_le_bytes());
    }
    ChaCha8Rng::from_seed(seed)
}

/// One draw from the unit-variance circular complex Gaussian CN(0, 1).
pub fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Length-`n` vector of i.i.d. CN(0, 1) entries.
pub fn complex_normal_vec<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Array1<Complex64> {
    Array1::from_shape_fn(n, |_| complex_normal(rng))
}

/// `rows x cols` matrix of i.i.d. CN(0, 1) entries, drawn row-major.
pub fn complex_normal_mat<R: Rng + ?Sized>(
    rng: &mut R,
    rows: usize,
    cols: usize,
) -> Array2<Complex64> {
    Array2::from_shape_fn((rows, cols), |_| complex_normal(rng))
}
