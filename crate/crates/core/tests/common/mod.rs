#![allow(dead_code)]

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qstab_core::linalg::ComplexMatrix;
use qstab_core::states::DensityMatrix;

pub fn random_hermitian(dim: usize, seed: u64) -> ComplexMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let entries: Vec<Complex64> = (0..dim * dim)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    let a = ComplexMatrix::from_row_major(dim, &entries).unwrap();
    a.add(&a.adjoint()).unwrap().scale(0.5)
}

pub fn random_psd(dim: usize, seed: u64) -> ComplexMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let entries: Vec<Complex64> = (0..dim * dim)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    let a = ComplexMatrix::from_row_major(dim, &entries).unwrap();
    a.matmul(&a.adjoint()).unwrap()
}

pub fn random_density(dim: usize, seed: u64) -> DensityMatrix {
    let m = random_psd(dim, seed);
    let tr = m.trace().re;
    DensityMatrix::new(m.scale(1.0 / tr)).unwrap()
}

/// Traces out the last qubit.
pub fn partial_trace_last(rho: &DensityMatrix) -> DensityMatrix {
    let half = rho.dim() / 2;
    let m = rho.matrix();
    let entries: Vec<Complex64> = (0..half)
        .flat_map(|i| (0..half).map(move |j| m.get(2 * i, 2 * j) + m.get(2 * i + 1, 2 * j + 1)))
        .collect();
    DensityMatrix::new(ComplexMatrix::from_row_major(half, &entries).unwrap()).unwrap()
}
