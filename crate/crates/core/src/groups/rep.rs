use std::f64::consts::PI;
use std::sync::Arc;

use serde::Serialize;

use super::FiniteGroup;
use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, Tolerance, C64};

/// Unitary representation `g ↦ π(g)`, indexed by element.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Rep {
    #[serde(skip)]
    group: Arc<FiniteGroup>,
    pub dim: usize,
    pub matrices: Vec<ComplexMatrix>,
}

impl Rep {
    /// Checks `π(gh) = π(g)π(h)` on all pairs and unitarity of each `π(g)`.
    pub fn new(group: Arc<FiniteGroup>, matrices: Vec<ComplexMatrix>, tol: Tolerance) -> Result<Self> {
        if matrices.len() != group.order() {
            return Err(Error::InvalidRep(format!("{} matrices for group of order {}", matrices.len(), group.order())));
        }
        let dim = matrices[0].ensure_square()?;
        if matrices.iter().any(|m| m.shape() != (dim, dim)) {
            return Err(Error::InvalidRep("matrices of unequal size".into()));
        }
        let rep = Rep { group, dim, matrices };
        let r = rep.homomorphism_residual();
        if !tol.accepts(r, 1.0) {
            return Err(Error::InvalidRep(format!("not a homomorphism (residual {r:.3e})")));
        }
        for (g, m) in rep.matrices.iter().enumerate() {
            if !m.is_unitary(tol)? {
                return Err(Error::InvalidRep(format!("π({g}) is not unitary")));
            }
        }
        Ok(rep)
    }

    /// One-dimensional representation from a character table.
    pub fn from_character(group: Arc<FiniteGroup>, values: &[C64], tol: Tolerance) -> Result<Self> {
        let ms = values.iter().map(|v| ComplexMatrix::diag(&[*v])).collect();
        Self::new(group, ms, tol)
    }

    pub fn trivial(group: Arc<FiniteGroup>) -> Self {
        let matrices = vec![ComplexMatrix::identity(1); group.order()];
        Rep { group, dim: 1, matrices }
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    /// `max_{g,h} ‖π(gh) − π(g)π(h)‖_max`.
    pub fn homomorphism_residual(&self) -> f64 {
        let g = &self.group;
        let mut worst: f64 = 0.0;
        for a in 0..g.order() {
            for b in 0..g.order() {
                worst = worst.max(self.matrices[g.mul(a, b)].max_dist(&(&self.matrices[a] * &self.matrices[b])));
            }
        }
        worst
    }

    pub fn character(&self) -> Vec<C64> {
        self.matrices.iter().map(|m| m.trace().unwrap_or_default()).collect()
    }
}

/// `⟨χ, ψ⟩ = |G|⁻¹ Σ_g conj(χ(g)) ψ(g)`.
pub fn character_inner(chi: &[C64], psi: &[C64]) -> C64 {
    let n = chi.len() as f64;
    chi.iter().zip(psi).map(|(a, b)| a.conj() * b).sum::<C64>() / n
}

/// `χ_l(k) = e^{2πikl/N}` on `ℤ_N`.
pub fn cyclic_character(n: usize, l: usize) -> Vec<C64> {
    (0..n).map(|k| C64::from_polar(1.0, 2.0 * PI * ((k * l) % n) as f64 / n as f64)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_characters_are_reps_and_orthonormal() {
        let n = 6;
        let g = Arc::new(FiniteGroup::cyclic(n).unwrap());
        for l in 0..n {
            let chi = cyclic_character(n, l);
            assert!(Rep::from_character(g.clone(), &chi, Tolerance::default()).is_ok());
            for m in 0..n {
                let ip = character_inner(&chi, &cyclic_character(n, m));
                let want = if l == m { 1.0 } else { 0.0 };
                assert!((ip - C64::new(want, 0.0)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn non_homomorphism_rejected() {
        let g = Arc::new(FiniteGroup::cyclic(3).unwrap());
        let vals = [C64::new(1.0, 0.0), C64::new(-1.0, 0.0), C64::new(1.0, 0.0)];
        assert!(matches!(Rep::from_character(g, &vals, Tolerance::default()), Err(Error::InvalidRep(_))));
    }
}
