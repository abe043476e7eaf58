//! Dense linear-algebra kernels backing the operator modules.

mod eigh;
mod lu;
mod svd;

pub use eigh::{eigh, eigh_jacobi, eigh_tridiagonal, eigvalsh, HermitianEigen, JACOBI_MAX_DIM};
pub use lu::{inverse, solve, Lu};
pub use svd::{null_space, rank, svd, Svd};

use crate::error::Result;
use crate::matrix::{ComplexMatrix, C64};

/// Orthogonal projection onto the span of the eigenvectors of a Hermitian
/// matrix whose eigenvalues satisfy `keep`.
pub fn spectral_subspace_projection(a: &ComplexMatrix, keep: impl Fn(f64) -> bool) -> Result<ComplexMatrix> {
    let e = eigh(a)?;
    let n = a.rows();
    let mut p = ComplexMatrix::zeros(n, n);
    for (k, &lam) in e.values.iter().enumerate() {
        if keep(lam) {
            let v = e.vector(k);
            p = &p + &ComplexMatrix::outer(&v, &v);
        }
    }
    Ok(p)
}

/// Coordinates of `x` in the (not necessarily orthogonal) family `basis`,
/// least squares in the Frobenius inner product. Returns the coordinates and
/// the residual `‖x − Σ c_i b_i‖_max`.
pub fn expand_in_basis(basis: &[ComplexMatrix], x: &ComplexMatrix) -> Result<(Vec<C64>, f64)> {
    let cols: Vec<Vec<C64>> = basis.iter().map(ComplexMatrix::vec).collect();
    let a = ComplexMatrix::from_columns(&cols)?;
    let coords = svd(&a)?.solve_least_squares(&x.vec(), 1e-12);
    let mut recon = ComplexMatrix::zeros(x.rows(), x.cols());
    for (c, b) in coords.iter().zip(basis) {
        recon = &recon + &b.scale(*c);
    }
    let res = recon.max_dist(x);
    Ok((coords, res))
}
