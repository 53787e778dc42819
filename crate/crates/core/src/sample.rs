//! Seeded random inputs for the verification suites.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exactla::{LinMap, Matrix, Scalar, Space, Vector};

pub type TrialRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> TrialRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent generator for one trial of one check. The stream is derived
/// from the check name and the trial counter, so trials can run in any order.
pub fn trial_rng(seed: u64, check: &str, trial: u64) -> TrialRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ fnv1a(check));
    rng.set_stream(trial);
    rng
}

fn fnv1a(s: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in s.bytes() {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    h
}

/// A small rational `p/q` with `|p| ≤ 4`, `1 ≤ q ≤ 3`.
pub fn scalar<R: Rng + ?Sized>(rng: &mut R) -> Scalar {
    let p = rng.gen_range(-4..=4);
    let q = rng.gen_range(1..=3);
    Scalar::new(p, q)
}

pub fn nonzero_scalar<R: Rng + ?Sized>(rng: &mut R) -> Scalar {
    loop {
        let s = scalar(rng);
        if !s.is_zero() {
            return s;
        }
    }
}

pub fn vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vector {
    (0..n).map(|_| scalar(rng)).collect()
}

pub fn nonzero_vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vector {
    assert!(n > 0, "no nonzero vectors in the zero space");
    loop {
        let v = vector(rng, n);
        if !v.is_zero() {
            return v;
        }
    }
}

pub fn matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> Matrix {
    Matrix::from_rows(
        (0..rows).map(|_| (0..cols).map(|_| scalar(rng)).collect()).collect(),
        cols,
    )
}

pub fn linmap<R: Rng + ?Sized>(rng: &mut R, domain: &Space, codomain: &Space) -> LinMap {
    LinMap::new(domain.clone(), codomain.clone(), matrix(rng, codomain.dim, domain.dim))
        .expect("random map has the requested shape")
}

/// Integer matrix with entries in `[-3, 3]`, resampled until invertible.
pub fn invertible_matrix<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Matrix {
    loop {
        let m = Matrix::from_rows(
            (0..n)
                .map(|_| (0..n).map(|_| Scalar::from_int(rng.gen_range(-3..=3))).collect())
                .collect(),
            n,
        );
        if m.rank() == n {
            return m;
        }
    }
}

pub fn invertible_map<R: Rng + ?Sized>(rng: &mut R, space: &Space) -> LinMap {
    LinMap::new(space.clone(), space.clone(), invertible_matrix(rng, space.dim)).expect("square map")
}

pub fn dim<R: Rng + ?Sized>(rng: &mut R, lo: usize, hi: usize) -> usize {
    rng.gen_range(lo..=hi)
}
