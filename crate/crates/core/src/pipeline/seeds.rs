//! Counter-based seed derivation: seeds depend only on (master, stream, index),
//! never on generation order.

/// Independent streams drawn from one master seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stream {
    Amplitude = 1,
    Trajectory = 2,
    Labels = 3,
    Folds = 4,
    Sweep = 5,
}

/// One round of the SplitMix64 output function.
pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn derive_seed(master: u64, stream: Stream, index: u64) -> u64 {
    splitmix64(splitmix64(master ^ (stream as u64).wrapping_mul(0xD6E8_FEB8_6659_FD93)) ^ index)
}

/// A uniform draw in [0, 1) from a derived seed, using the top 53 bits.
pub fn unit_uniform(seed: u64) -> f64 {
    (splitmix64(seed) >> 11) as f64 / (1u64 << 53) as f64
}
