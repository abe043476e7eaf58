//! Lattice operations on orthogonal projections.

use super::{ComplexMatrix, Tolerance};
use crate::error::{Error, Result};
use crate::linalg::spectral_subspace_projection;

/// Eigenvalue cutoff separating a PSD operator's kernel from its range.
const RANK_CUTOFF: f64 = 1e-8;

fn ensure_projection(p: &ComplexMatrix, tol: Tolerance) -> Result<()> {
    let residual = p.projection_residual()?;
    if !tol.accepts(residual, 1.0) {
        return Err(Error::NotProjection { residual });
    }
    Ok(())
}

fn ensure_pair(p: &ComplexMatrix, q: &ComplexMatrix, tol: Tolerance) -> Result<()> {
    ensure_projection(p, tol)?;
    ensure_projection(q, tol)?;
    if p.shape() != q.shape() {
        return Err(Error::DimMismatch(format!("{:?} vs {:?}", p.shape(), q.shape())));
    }
    Ok(())
}

/// `P ∧ Q`: projection onto `range(P) ∩ range(Q)`, computed as the kernel
/// of `(I − P) + (I − Q)`.
pub fn meet(p: &ComplexMatrix, q: &ComplexMatrix, tol: Tolerance) -> Result<ComplexMatrix> {
    ensure_pair(p, q, tol)?;
    let id = ComplexMatrix::identity(p.rows());
    let s = &(&id - p) + &(&id - q);
    spectral_subspace_projection(&s, |lam| lam <= RANK_CUTOFF)
}

/// `P ∨ Q`: projection onto `range(P) + range(Q)`, the range of `P + Q`.
pub fn join(p: &ComplexMatrix, q: &ComplexMatrix, tol: Tolerance) -> Result<ComplexMatrix> {
    ensure_pair(p, q, tol)?;
    spectral_subspace_projection(&(p + q), |lam| lam > RANK_CUTOFF)
}

/// `P ≤ Q` ⟺ `PQ = P`.
pub fn leq(p: &ComplexMatrix, q: &ComplexMatrix, tol: Tolerance) -> Result<bool> {
    ensure_pair(p, q, tol)?;
    Ok(tol.accepts((p * q).max_dist(p), 1.0))
}

/// `P + Q` is a projection ⟺ `PQ = 0`.
pub fn sum_is_projection(p: &ComplexMatrix, q: &ComplexMatrix, tol: Tolerance) -> Result<bool> {
    ensure_pair(p, q, tol)?;
    Ok(tol.accepts((p * q).max_norm(), 1.0))
}
