//! Deterministic inputs shared by the benchmarks.

use latgen::exactmat::ExactMatrix;
use latgen::sampling::{random_parallelepiped, Parallelepiped, RngStream};

/// Row-major `rows x cols` entries uniform on `[-bound, bound]`.
pub fn random_entries(seed: u64, rows: usize, cols: usize, bound: i128) -> Vec<i128> {
    let mut rng = RngStream::new(seed, 0);
    (0..rows * cols).map(|_| rng.int_in(-bound, bound)).collect()
}

pub fn random_matrix(seed: u64, rows: usize, cols: usize, bound: i128) -> ExactMatrix {
    let e = random_entries(seed, rows, cols, bound);
    ExactMatrix::from_entries(rows, cols, e.into_iter().map(Into::into).collect()).expect("shape matches")
}

pub fn parallelepiped(seed: u64, n: usize, c: i128) -> Parallelepiped {
    random_parallelepiped(n, c, &mut RngStream::new(seed, 0)).expect("nondegenerate draw").0
}
