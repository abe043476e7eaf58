use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{FiniteGroup, Rep};
use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, Tolerance, C64};

/// Representation `L` of a subgroup `Γ ≤ G`, given on the elements of `Γ`
/// as indices into `G`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubgroupRep {
    pub elements: Vec<usize>,
    pub matrices: Vec<ComplexMatrix>,
}

impl SubgroupRep {
    fn lookup(&self, g: usize) -> Option<&ComplexMatrix> {
        self.elements.iter().position(|&x| x == g).map(|i| &self.matrices[i])
    }
}

/// `Ind_Γ^G L` on functions `f: G → V` with `f(ξg) = L(ξ) f(g)`, stored by
/// their values on the right-coset representatives, together with the
/// multiplication system `P(ψ)` for functions `ψ` on `Γ\G`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InducedRep {
    pub rep: Rep,
    pub subgroup: Vec<usize>,
    /// Minimal element of each right coset `Γx`, ascending.
    pub representatives: Vec<usize>,
    /// Index of the coset containing each element of `G`.
    pub coset_of: Vec<usize>,
    pub block_dim: usize,
}

/// `(U_g f)(x) = f(xg)`. On coset representatives `r_i`, block `(i, j)` of
/// `U_g` is `L(r_i g r_j⁻¹)` when `r_i g ∈ Γ r_j` and zero otherwise.
pub fn induce(group: Arc<FiniteGroup>, l: &SubgroupRep, tol: Tolerance) -> Result<InducedRep> {
    let g = &group;
    if l.elements.len() != l.matrices.len() {
        return Err(Error::InvalidRep("one matrix per subgroup element required".into()));
    }
    if !g.is_subgroup(&l.elements) {
        return Err(Error::NotSubgroup(format!("{:?}", l.elements)));
    }
    let d = l.matrices.first().map_or(Ok(0), ComplexMatrix::ensure_square)?;
    for &x in &l.elements {
        for &y in &l.elements {
            let (lx, ly, lxy) = (l.lookup(x).unwrap(), l.lookup(y).unwrap(), l.lookup(g.mul(x, y)).unwrap());
            if lx.shape() != (d, d) || ly.shape() != (d, d) || !tol.accepts(lxy.max_dist(&(lx * ly)), 1.0) {
                return Err(Error::InvalidRep("subgroup matrices are not a representation".into()));
            }
        }
    }

    let n = g.order();
    let mut coset_of = vec![usize::MAX; n];
    let mut representatives = Vec::new();
    for x in 0..n {
        if coset_of[x] == usize::MAX {
            for &gamma in &l.elements {
                coset_of[g.mul(gamma, x)] = representatives.len();
            }
            representatives.push(x);
        }
    }
    let m = representatives.len();

    let matrices = (0..n)
        .map(|el| {
            let mut u = ComplexMatrix::zeros(m * d, m * d);
            for (i, &ri) in representatives.iter().enumerate() {
                let y = g.mul(ri, el);
                let j = coset_of[y];
                let xi = g.mul(y, g.inv(representatives[j]));
                u.set_block(i * d, j * d, l.lookup(xi).expect("r_i g r_j⁻¹ lies in Γ"));
            }
            u
        })
        .collect();
    let rep = Rep::new(group.clone(), matrices, tol)?;
    Ok(InducedRep { rep, subgroup: l.elements.clone(), representatives, coset_of, block_dim: d })
}

impl InducedRep {
    pub fn index(&self) -> usize {
        self.representatives.len()
    }

    /// `(P(ψ)f)(x) = ψ(Γx) f(x)`: block diagonal with `ψ(coset i)·I`.
    pub fn multiplication_operator(&self, psi: &[C64]) -> Result<ComplexMatrix> {
        if psi.len() != self.index() {
            return Err(Error::DimMismatch(format!("ψ has {} values for {} cosets", psi.len(), self.index())));
        }
        let d = self.block_dim;
        let diag: Vec<C64> = psi.iter().flat_map(|&v| std::iter::repeat(v).take(d)).collect();
        Ok(ComplexMatrix::diag(&diag))
    }

    /// `ψ(·g)`: the coset function `Γx ↦ ψ(Γxg)`.
    pub fn translate(&self, psi: &[C64], g: usize) -> Vec<C64> {
        let grp = self.rep.group();
        self.representatives.iter().map(|&r| psi[self.coset_of[grp.mul(r, g)]]).collect()
    }

    /// `max ‖U_g P(ψ) U_{g⁻¹} − P(ψ(·g))‖_max` over all `g` and the indicator
    /// functions `ψ` of single cosets.
    pub fn covariance_residual(&self) -> f64 {
        let grp = self.rep.group();
        let m = self.index();
        let mut worst: f64 = 0.0;
        for i in 0..m {
            let mut psi = vec![C64::default(); m];
            psi[i] = C64::new(1.0, 0.0);
            let p = self.multiplication_operator(&psi).expect("sized");
            for g in 0..grp.order() {
                let lhs = &(&self.rep.matrices[g] * &p) * &self.rep.matrices[grp.inv(g)];
                let rhs = self.multiplication_operator(&self.translate(&psi, g)).expect("sized");
                worst = worst.max(lhs.max_dist(&rhs));
            }
        }
        worst
    }
}
