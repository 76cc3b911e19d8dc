//! Seeding, samplers and direction sets.
//!
//! Every randomized estimator takes one root seed. Work is split into fixed-size
//! batches; batch `i` of stream `s` draws from a ChaCha8 generator seeded with
//! `derive_seed(root, s, i)`, a splitmix64 chain. Batches may run on any number
//! of threads and are reduced in index order, so results are bit-identical
//! regardless of the thread pool.

use crate::linalg::Point;
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use statrs::distribution::{ContinuousCDF, Normal};

/// Samples per batch for Monte Carlo estimators.
pub const BATCH: usize = 8192;

/// Stream tags, one per estimator family.
pub mod stream {
    pub const VOLUME: u64 = 1;
    pub const INERTIA: u64 = 2;
    pub const SECTION: u64 = 3;
    pub const SYMDIFF: u64 = 4;
    pub const CAP_CLOUD: u64 = 5;
    pub const OVERSHOOT: u64 = 6;
    pub const DIRECTIONS: u64 = 7;
    pub const GREEDY: u64 = 8;
    pub const CORPUS: u64 = 9;
    pub const FLOATING: u64 = 10;
    pub const LINE: u64 = 11;
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Sub-seed for `(stream, index)` under `root`.
pub fn derive_seed(root: u64, stream: u64, index: u64) -> u64 {
    splitmix64(splitmix64(splitmix64(root) ^ stream.wrapping_mul(0xD6E8_FEB8_6659_FD93)) ^ index)
}

pub fn rng_for(root: u64, stream: u64, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(root, stream, index))
}

/// Runs `f(batch_index, batch_len)` over `total` samples split into [`BATCH`]-sized
/// batches, in parallel, returning per-batch results in batch order.
pub fn run_batches<T, F>(total: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64, usize) -> T + Sync,
{
    let batches = total.div_ceil(BATCH);
    (0..batches)
        .into_par_iter()
        .map(|b| {
            let len = BATCH.min(total - b * BATCH);
            f(b as u64, len)
        })
        .collect()
}

pub fn gaussian_vector<R: Rng>(rng: &mut R, d: usize) -> Point {
    DVector::from_fn(d, |_, _| rng.sample::<f64, _>(StandardNormal))
}

pub fn uniform_on_sphere<R: Rng>(rng: &mut R, d: usize) -> Point {
    loop {
        let g = gaussian_vector(rng, d);
        let n = g.norm();
        if n > 1e-12 {
            return g / n;
        }
    }
}

/// Writes a uniform sample from the ball `B(center, radius)` into `out`.
pub fn uniform_in_ball<R: Rng>(rng: &mut R, center: &Point, radius: f64, out: &mut Point) {
    let d = center.len();
    let mut norm2 = 0.0;
    for k in 0..d {
        let g: f64 = rng.sample(StandardNormal);
        out[k] = g;
        norm2 += g * g;
    }
    let u: f64 = rng.random();
    let scale = radius * u.powf(1.0 / d as f64) / norm2.sqrt().max(1e-300);
    for k in 0..d {
        out[k] = center[k] + out[k] * scale;
    }
}

/// Haar-random rotation matrix.
pub fn random_rotation<R: Rng>(rng: &mut R, d: usize) -> DMatrix<f64> {
    let g = DMatrix::from_fn(d, d, |_, _| rng.sample::<f64, _>(StandardNormal));
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for k in 0..d {
        if r[(k, k)] < 0.0 {
            let col = -q.column(k);
            q.set_column(k, &col);
        }
    }
    q
}

fn radical_inverse(mut i: u64, base: u64) -> f64 {
    let inv = 1.0 / base as f64;
    let mut f = inv;
    let mut r = 0.0;
    while i > 0 {
        r += f * (i % base) as f64;
        i /= base;
        f *= inv;
    }
    r
}

const PRIMES: [u64; 8] = [2, 3, 5, 7, 11, 13, 17, 19];

/// Deterministic, well-spread unit directions in `R^d`.
///
/// * `d = 2`: the angles `2πk/m`;
/// * `d = 3`: the Fibonacci sphere lattice;
/// * `d ≥ 4`: Halton points pushed through the inverse normal CDF and normalized.
///
/// For `d ≥ 4` the sets are nested in `m` (prefixes of one sequence).
pub fn sphere_directions(d: usize, m: usize) -> Vec<Point> {
    match d {
        2 => (0..m)
            .map(|k| {
                let a = 2.0 * std::f64::consts::PI * k as f64 / m as f64;
                DVector::from_vec(vec![a.cos(), a.sin()])
            })
            .collect(),
        3 => {
            let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
            (0..m)
                .map(|k| {
                    let z = 1.0 - (2 * k + 1) as f64 / m as f64;
                    let r = (1.0 - z * z).max(0.0).sqrt();
                    let phi = golden * k as f64;
                    DVector::from_vec(vec![r * phi.cos(), r * phi.sin(), z])
                })
                .collect()
        }
        _ => {
            let normal = Normal::new(0.0, 1.0).expect("standard normal");
            let mut out = Vec::with_capacity(m);
            let mut i = 1u64;
            while out.len() < m {
                let g = DVector::from_fn(d, |k, _| normal.inverse_cdf(radical_inverse(i, PRIMES[k % PRIMES.len()])));
                i += 1;
                let n = g.norm();
                if n > 1e-9 {
                    out.push(g / n);
                }
            }
            out
        }
    }
}

/// [`sphere_directions`] under a seed-derived random rotation (`seed == 0` keeps the base set).
pub fn rotated_directions(d: usize, m: usize, seed: u64) -> Vec<Point> {
    let dirs = sphere_directions(d, m);
    if seed == 0 {
        return dirs;
    }
    let mut rng = rng_for(seed, stream::DIRECTIONS, 0);
    let q = random_rotation(&mut rng, d);
    dirs.into_iter().map(|u| &q * u).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeds_differ_by_stream_and_index() {
        let a = derive_seed(1, 1, 0);
        assert_ne!(a, derive_seed(1, 1, 1));
        assert_ne!(a, derive_seed(1, 2, 0));
        assert_ne!(a, derive_seed(2, 1, 0));
        assert_eq!(a, derive_seed(1, 1, 0));
    }

    #[test]
    fn batches_cover_total_in_order() {
        let lens = run_batches(3 * BATCH + 5, |b, len| (b, len));
        assert_eq!(lens.len(), 4);
        assert_eq!(lens[3], (3, 5));
        assert!(lens.iter().take(3).all(|&(_, l)| l == BATCH));
    }

    #[test]
    fn directions_are_unit() {
        for d in 2..=5 {
            for u in sphere_directions(d, 37) {
                assert!((u.norm() - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn ball_samples_stay_inside() {
        let mut rng = rng_for(3, 0, 0);
        let c = DVector::from_vec(vec![1.0, -2.0, 0.5]);
        let mut p = c.clone();
        for _ in 0..1000 {
            uniform_in_ball(&mut rng, &c, 2.0, &mut p);
            assert!((&p - &c).norm() <= 2.0 + 1e-12);
        }
    }

    #[test]
    fn rotation_is_orthogonal() {
        let mut rng = rng_for(9, 0, 0);
        let q = random_rotation(&mut rng, 4);
        let e = (q.transpose() * &q - DMatrix::identity(4, 4)).norm();
        assert!(e < 1e-12);
    }
}
