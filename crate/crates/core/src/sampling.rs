//! Seeded random inputs for fuzzing. All randomness comes from an explicit
//! seed through ChaCha8, so outputs are reproducible across platforms.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exactlin::{int, is_independent, BilinearForm, FormKind, Matrix, Vector};

pub const ENTRY_BOUND: i64 = 9;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Per-trial seed derived from a run seed; distinct trials get unrelated streams.
pub fn trial_seed(seed: u64, trial: u64) -> u64 {
    // splitmix64 finalizer
    let mut z = seed
        .wrapping_mul(0x9E37_79B9_7F4A_7C15)
        .wrapping_add(trial.wrapping_mul(0xBF58_476D_1CE4_E5B9))
        .wrapping_add(0x94D0_49BB_1331_11EB);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn random_int_vector(rng: &mut impl Rng, n: usize, bound: i64) -> Vector {
    (0..n)
        .map(|_| int(rng.random_range(-bound..=bound)))
        .collect()
}

/// `n` random independent vectors in `Q^n`, drawn all at once and redrawn
/// until independent.
pub fn random_basis(rng: &mut impl Rng, n: usize, bound: i64) -> Vec<Vector> {
    loop {
        let vs: Vec<Vector> = (0..n).map(|_| random_int_vector(rng, n, bound)).collect();
        if is_independent(&vs, n) {
            return vs;
        }
    }
}

pub fn random_invertible(rng: &mut impl Rng, n: usize, bound: i64) -> Matrix {
    Matrix::from_columns(&random_basis(rng, n, bound), n)
}

/// Random skew form of rank `2 * pairs` on `Q^{2 pairs + extra}`: the
/// standard form pulled back along a random small-integer change of basis.
pub fn random_skew_form(rng: &mut impl Rng, pairs: usize, extra: usize) -> BilinearForm {
    let n = 2 * pairs + extra;
    let p = random_invertible(rng, n, 2);
    let j = BilinearForm::standard_skew(pairs, extra);
    let g = &(&p.transpose() * j.gram()) * &p;
    BilinearForm::new(g, FormKind::Skew).expect("pullback of a skew form is skew")
}

/// Random complementary pair `(U, W)` with `dim U = m`, `dim W = n - m`.
pub fn random_decomposition(rng: &mut impl Rng, n: usize, m: usize) -> (Vec<Vector>, Vec<Vector>) {
    let mut basis = random_basis(rng, n, 3);
    let w = basis.split_off(m);
    (basis, w)
}
