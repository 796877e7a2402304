//! Deterministic seeding for parallel Monte-Carlo work.
//!
//! Every parallel loop splits its work into fixed-size chunks and seeds one
//! generator per chunk from `(seed, stream, chunk)`. Results are reduced in
//! chunk order, so the outcome depends only on the seed, never on scheduling.

use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

/// Default seed used by the command line when none is given.
pub const DEFAULT_SEED: u64 = 0xC0FFEE;

pub type SimRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SimRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent generator for chunk `chunk` of stream `stream`.
pub fn chunk_rng(seed: u64, stream: u64, chunk: u64) -> SimRng {
    let mut r = ChaCha8Rng::seed_from_u64(splitmix(seed ^ splitmix(stream)));
    r.set_stream(chunk);
    r
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Uniform point on the unit sphere `S^{n-1}` via normalized Gaussians.
pub fn unit_vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> DVector<f64> {
    loop {
        let v = DVector::from_fn(n, |_, _| rng.sample::<f64, _>(StandardNormal));
        let norm = v.norm();
        if norm > 1e-12 {
            return v / norm;
        }
    }
}
