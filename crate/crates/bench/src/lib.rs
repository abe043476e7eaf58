//! Shared inputs for the benchmarks. Every generator is seeded, so runs
//! compare like with like.

use opkit::random::random_hermitian;
use opkit::ComplexMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn hermitian(n: usize, seed: u64) -> ComplexMatrix {
    random_hermitian(&mut ChaCha8Rng::seed_from_u64(seed), n)
}

/// `k` copies of one random `n × n` block: the commutant is `M_k ⊗ I_n`.
pub fn amplified_generator(n: usize, k: usize, seed: u64) -> ComplexMatrix {
    let x = opkit::random::random_matrix(&mut ChaCha8Rng::seed_from_u64(seed), n, n);
    ComplexMatrix::identity(k).kron(&x)
}
