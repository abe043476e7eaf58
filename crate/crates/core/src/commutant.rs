//! Commutants of finite sets of matrices, Schur irreducibility and
//! multiplicity detection.
//!
//! The commutant `{X : XA = AX for all generators A}` is the null space of the
//! stacked Sylvester map `X ↦ (XA_i − A_iX)_i`, computed on the row-major
//! vectorization with a singular-value cutoff of `1e-10·σ_max`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::svd;
use crate::matrix::{ComplexMatrix, Tolerance, C64};
use crate::spectral::spectral_decompose;

/// Relative singular-value cutoff for commutant rank decisions.
pub const NULL_SPACE_CUTOFF: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CommutantReport {
    pub dimension: usize,
    /// Orthonormal in the Hilbert-Schmidt inner product.
    pub basis: Vec<ComplexMatrix>,
    pub is_abelian: bool,
    /// `Some(k)` when the commutant is a factor (scalar center) of dimension `k²`,
    /// i.e. isomorphic to `M_k`.
    pub matrix_block_size: Option<usize>,
}

fn common_dim(generators: &[ComplexMatrix]) -> Result<usize> {
    let first = generators
        .first()
        .ok_or_else(|| Error::InvalidArgument("commutant needs at least one generator".into()))?;
    let n = first.ensure_square()?;
    for g in generators {
        g.ensure_square()?;
        if g.rows() != n {
            return Err(Error::DimMismatch(format!("generator of dim {} among dim {n}", g.rows())));
        }
    }
    Ok(n)
}

/// The matrix of `X ↦ (XA_i − A_iX)_i` on row-major `vec(X)`.
fn sylvester_stack(generators: &[ComplexMatrix], n: usize) -> ComplexMatrix {
    let nn = n * n;
    let mut m = ComplexMatrix::zeros(nn * generators.len(), nn);
    for (g, a) in generators.iter().enumerate() {
        let r0 = g * nn;
        for i in 0..n {
            for j in 0..n {
                let row = r0 + i * n + j;
                // (XA)_ij = Σ_k X_ik A_kj
                for k in 0..n {
                    m[(row, i * n + k)] += a[(k, j)];
                }
                // (AX)_ij = Σ_k A_ik X_kj
                for k in 0..n {
                    m[(row, k * n + j)] -= a[(i, k)];
                }
            }
        }
    }
    m
}

/// Null-space basis of the commutation constraints, without the structural
/// analysis done by [`commutant`].
pub fn commutant_basis(generators: &[ComplexMatrix]) -> Result<Vec<ComplexMatrix>> {
    let n = common_dim(generators)?;
    let m = sylvester_stack(generators, n);
    // The cutoff scales with the generators, not with the Sylvester map: a
    // scalar generator carrying rounding noise must still give the full algebra.
    let scale = generators.iter().map(ComplexMatrix::frobenius_norm).fold(0.0, f64::max);
    let ns = svd(&m)?.null_space_below(NULL_SPACE_CUTOFF * scale);
    ns.iter().map(|v| ComplexMatrix::from_vec(n, n, v.clone())).collect()
}

pub fn commutant(generators: &[ComplexMatrix]) -> Result<CommutantReport> {
    let basis = commutant_basis(generators)?;
    let dimension = basis.len();
    let tol = Tolerance::default();
    let is_abelian = basis
        .iter()
        .enumerate()
        .all(|(i, x)| basis[i + 1..].iter().all(|y| tol.accepts(x.commutator(y).map(|c| c.max_norm()).unwrap_or(f64::INFINITY), 1.0)));

    let k = (dimension as f64).sqrt().round() as usize;
    let matrix_block_size = if dimension == 1 {
        Some(1)
    } else if k * k == dimension && !is_abelian {
        // Center = commutant ∩ its own commutant.
        let mut joint = generators.to_vec();
        joint.extend(basis.iter().cloned());
        let center_dim = commutant_basis(&joint)?.len();
        (center_dim == 1).then_some(k)
    } else {
        None
    };
    Ok(CommutantReport { dimension, basis, is_abelian, matrix_block_size })
}

/// Generators together with their adjoints.
pub fn star_closure(generators: &[ComplexMatrix]) -> Vec<ComplexMatrix> {
    let mut out = generators.to_vec();
    out.extend(generators.iter().map(ComplexMatrix::adjoint));
    out
}

/// Schur: the *-closed set generated by `generators` acts irreducibly iff its
/// commutant is one-dimensional. Adjoints are appended automatically.
pub fn is_irreducible(generators: &[ComplexMatrix]) -> Result<bool> {
    Ok(commutant_basis(&star_closure(generators))?.len() == 1)
}

/// Commutant of `{A ⊕ … ⊕ A (k copies) : A ∈ M_n}`, which is `M_k ⊗ I_n`
/// (dimension `k²`) in the block ordering used by [`amplify`].
pub fn multiplicity_of_identity_amplification(k: usize, n: usize) -> Result<CommutantReport> {
    if k == 0 || n == 0 {
        return Err(Error::InvalidArgument("k and n must be at least 1".into()));
    }
    let gens: Vec<ComplexMatrix> = full_matrix_basis(n).iter().map(|a| amplify(a, k)).collect();
    commutant(&gens)
}

/// `A ⊕ … ⊕ A` (`k` copies), i.e. `I_k ⊗ A`.
pub fn amplify(a: &ComplexMatrix, k: usize) -> ComplexMatrix {
    ComplexMatrix::identity(k).kron(a)
}

/// Matrix units `e_ij` of `M_n`, ordered row-major.
pub fn full_matrix_basis(n: usize) -> Vec<ComplexMatrix> {
    (0..n).flat_map(|i| (0..n).map(move |j| ComplexMatrix::unit(n, i, j))).collect()
}

/// A projection in the commutant other than `0` and `I`, if one exists.
///
/// Only meaningful for *-closed generator sets, whose commutant is a
/// *-algebra: any non-scalar Hermitian element then has a non-trivial
/// spectral projection that again commutes with the generators.
pub fn nontrivial_commutant_projection(generators: &[ComplexMatrix]) -> Result<Option<ComplexMatrix>> {
    let basis = commutant_basis(&star_closure(generators))?;
    for x in &basis {
        for h in [x.real_part(), x.imag_part()] {
            let s = spectral_decompose(&h, Some(1e-8))?;
            if s.eigenvalues.len() > 1 {
                return Ok(Some(s.projections[0].clone()));
            }
        }
    }
    Ok(None)
}

/// Basis (Hilbert-Schmidt orthonormal) of the unital algebra generated by
/// `generators`, optionally including adjoints.
pub fn generated_algebra(generators: &[ComplexMatrix], star: bool) -> Result<Vec<ComplexMatrix>> {
    let n = common_dim(generators)?;
    let mut basis: Vec<ComplexMatrix> = Vec::new();
    let push = |basis: &mut Vec<ComplexMatrix>, x: &ComplexMatrix| -> bool {
        let mut w = x.clone();
        for _ in 0..2 {
            for b in basis.iter() {
                let c: C64 = b.data().iter().zip(w.data()).map(|(p, q)| p.conj() * q).sum();
                w = &w - &b.scale(c);
            }
        }
        let nrm = w.frobenius_norm();
        if nrm > 1e-9 * x.frobenius_norm().max(1.0) {
            basis.push(w.scale_real(1.0 / nrm));
            true
        } else {
            false
        }
    };
    push(&mut basis, &ComplexMatrix::identity(n));
    let seeds = if star { star_closure(generators) } else { generators.to_vec() };
    for g in &seeds {
        push(&mut basis, g);
    }
    loop {
        let snapshot = basis.clone();
        let mut grew = false;
        for a in &snapshot {
            for g in &seeds {
                grew |= push(&mut basis, &(a * g));
            }
        }
        if !grew {
            break;
        }
    }
    Ok(basis)
}
