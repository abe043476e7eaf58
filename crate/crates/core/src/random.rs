//! Seeded random generators for test matrices, states and maps.
//!
//! Entries are drawn from the standard normal distribution (ziggurat sampler
//! from `rand_distr`), so everything is reproducible from a seed.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::matrix::{ComplexMatrix, C64};

pub fn normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.sample(StandardNormal)
}

pub fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::new(normal(rng), normal(rng))
}

pub fn random_vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<C64> {
    (0..n).map(|_| complex_normal(rng)).collect()
}

/// Ginibre matrix (i.i.d. complex normal entries).
pub fn random_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| complex_normal(rng))
}

pub fn random_hermitian<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    random_matrix(rng, n, n).real_part()
}

/// Unitary from Gram-Schmidt on a Ginibre matrix.
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    let g = random_matrix(rng, n, n);
    let mut cols: Vec<Vec<C64>> = Vec::with_capacity(n);
    for v in g.columns() {
        let mut w = v;
        for _ in 0..2 {
            for u in &cols {
                let c = crate::matrix::inner(u, &w);
                w = crate::matrix::axpy(-c, u, &w);
            }
        }
        cols.push(crate::matrix::normalized(&w));
    }
    ComplexMatrix::from_columns(&cols).expect("square")
}

/// Density matrix `GG*/tr(GG*)` of the given rank.
pub fn random_density<R: Rng + ?Sized>(rng: &mut R, n: usize, rank: usize) -> ComplexMatrix {
    let g = random_matrix(rng, n, rank);
    let m = &g * &g.adjoint();
    let t = m.trace().expect("square").re;
    m.scale_real(1.0 / t)
}

/// Kraus family `{K_i}` (each `m×n`) with `Σ K_i K_i* = I_m`, i.e. a unital map
/// `A ↦ Σ K_i A K_i*` from `M_n` to `M_m`.
pub fn random_unital_kraus<R: Rng + ?Sized>(rng: &mut R, n: usize, m: usize, count: usize) -> Vec<ComplexMatrix> {
    let raw: Vec<ComplexMatrix> = (0..count).map(|_| random_matrix(rng, m, n)).collect();
    let mut s = ComplexMatrix::zeros(m, m);
    for k in &raw {
        s = &s + &(k * &k.adjoint());
    }
    // S^{-1/2} via the spectral decomposition of the positive definite S.
    let e = crate::linalg::eigh(&s).expect("square");
    let mut inv_sqrt = ComplexMatrix::zeros(m, m);
    for (k, &lam) in e.values.iter().enumerate() {
        let v = e.vector(k);
        inv_sqrt = &inv_sqrt + &ComplexMatrix::outer(&v, &v).scale_real(1.0 / lam.sqrt());
    }
    raw.iter().map(|k| &inv_sqrt * k).collect()
}
