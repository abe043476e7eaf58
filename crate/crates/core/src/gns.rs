//! GNS representations of states on finite-dimensional matrix *-algebras,
//! purity, and the Radon–Nikodym operator of a dominated functional.
//!
//! The pre-Hilbert space is the algebra itself with the sesquilinear form
//! `⟨a, b⟩ = s(a* b)`. In coordinates over the algebra basis `b_1 … b_k` this
//! is the moment matrix `G_ij = s(b_i* b_j)`. The quotient by the null space
//! is realized by keeping the eigenvectors of `G` with eigenvalue above
//! `1e-10·λ_max`; each kept eigenvector `u` with eigenvalue `μ` gives the
//! `G`-orthonormal vector `u/√μ`.

use serde::{Deserialize, Serialize};

use crate::commutant::{commutant, commutant_basis, full_matrix_basis, generated_algebra};
use crate::error::{Error, Result};
use crate::linalg::{eigh, eigvalsh, svd, Svd};
use crate::matrix::{trace_pairing, ComplexMatrix, Tolerance, C64};

/// Relative eigenvalue cutoff defining the null space of the moment matrix.
pub const GRAM_CUTOFF: f64 = 1e-10;

/// Linear basis of a unital *-subalgebra of `M_n`; `basis[0] = I_n`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "AlgebraJson", into = "AlgebraJson")]
pub struct StarAlgebra {
    ambient_dim: usize,
    basis: Vec<ComplexMatrix>,
    /// SVD of the matrix whose columns are the vectorized basis elements.
    coords: Svd,
}

impl PartialEq for StarAlgebra {
    fn eq(&self, other: &Self) -> bool {
        self.basis == other.basis
    }
}

#[derive(Serialize, Deserialize)]
struct AlgebraJson {
    ambient_dim: usize,
    basis: Vec<ComplexMatrix>,
}

impl TryFrom<AlgebraJson> for StarAlgebra {
    type Error = Error;
    fn try_from(j: AlgebraJson) -> Result<Self> {
        let a = StarAlgebra::new(j.basis)?;
        if a.ambient_dim != j.ambient_dim {
            return Err(Error::DimMismatch(format!("ambient_dim {} but basis of dim {}", j.ambient_dim, a.ambient_dim)));
        }
        Ok(a)
    }
}

impl From<StarAlgebra> for AlgebraJson {
    fn from(a: StarAlgebra) -> Self {
        AlgebraJson { ambient_dim: a.ambient_dim, basis: a.basis }
    }
}

impl StarAlgebra {
    /// Validates linear independence, `basis[0] = I`, and closure under
    /// products and adjoints.
    pub fn new(basis: Vec<ComplexMatrix>) -> Result<Self> {
        let first = basis.first().ok_or_else(|| Error::NotAnAlgebra("empty basis".into()))?;
        let n = first.ensure_square()?;
        for b in &basis {
            if b.shape() != (n, n) {
                return Err(Error::DimMismatch(format!("basis element {:?} in dim {n}", b.shape())));
            }
        }
        if first.max_dist(&ComplexMatrix::identity(n)) > 1e-12 {
            return Err(Error::NotAnAlgebra("first basis element must be the identity".into()));
        }
        let cols: Vec<Vec<C64>> = basis.iter().map(ComplexMatrix::vec).collect();
        let coords = svd(&ComplexMatrix::from_columns(&cols)?)?;
        let rank = coords.rank(1e-10);
        if rank < basis.len() {
            return Err(Error::NotAnAlgebra(format!("basis has rank {rank} < {}", basis.len())));
        }
        let alg = StarAlgebra { ambient_dim: n, basis, coords };
        for (i, x) in alg.basis.iter().enumerate() {
            let r = alg.expand(&x.adjoint()).1;
            if r > 1e-9 * x.max_norm().max(1.0) {
                return Err(Error::NotAnAlgebra(format!("adjoint of basis element {i} leaves the span (residual {r:.3e})")));
            }
            for (j, y) in alg.basis.iter().enumerate() {
                let xy = x * y;
                let r = alg.expand(&xy).1;
                if r > 1e-9 * xy.max_norm().max(1.0) {
                    return Err(Error::NotAnAlgebra(format!("product of basis elements {i},{j} leaves the span (residual {r:.3e})")));
                }
            }
        }
        Ok(alg)
    }

    /// `M_n` with basis `I` followed by the matrix units `e_ij`, `(i,j) ≠ (0,0)`.
    pub fn full(n: usize) -> Result<Self> {
        let mut basis = vec![ComplexMatrix::identity(n)];
        basis.extend(full_matrix_basis(n).into_iter().skip(1));
        Self::new(basis)
    }

    /// Diagonal matrices: `I`, then `e_ii` for `i ≥ 1`.
    pub fn diagonal(n: usize) -> Result<Self> {
        let mut basis = vec![ComplexMatrix::identity(n)];
        basis.extend((1..n).map(|i| ComplexMatrix::unit(n, i, i)));
        Self::new(basis)
    }

    /// `{I_k ⊗ A : A ∈ M_n}` acting on `ℂ^{kn}`.
    pub fn amplified(n: usize, k: usize) -> Result<Self> {
        let full = Self::full(n)?;
        let id = ComplexMatrix::identity(k);
        Self::new(full.basis.iter().map(|b| id.kron(b)).collect())
    }

    /// Unital *-algebra generated by `generators`.
    pub fn generated_by(generators: &[ComplexMatrix]) -> Result<Self> {
        let mut basis = generated_algebra(generators, true)?;
        let n = basis[0].rows();
        basis[0] = ComplexMatrix::identity(n);
        Self::new(basis)
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[ComplexMatrix] {
        &self.basis
    }

    /// Coordinates of `x` in the basis and the residual `‖x − Σ c_i b_i‖_max`.
    pub fn expand(&self, x: &ComplexMatrix) -> (Vec<C64>, f64) {
        let c = self.coords.solve_least_squares(&x.vec(), 1e-12);
        (c.clone(), self.combine(&c).max_dist(x))
    }

    pub fn combine(&self, coords: &[C64]) -> ComplexMatrix {
        let n = self.ambient_dim;
        coords.iter().zip(&self.basis).fold(ComplexMatrix::zeros(n, n), |acc, (c, b)| &acc + &b.scale(*c))
    }

    /// Matrix of `x ↦ b·x` on basis coordinates.
    fn left_multiplication(&self, b: &ComplexMatrix) -> ComplexMatrix {
        let k = self.dim();
        let cols: Vec<Vec<C64>> = self.basis.iter().map(|bj| self.expand(&(b * bj)).0).collect();
        ComplexMatrix::from_columns(&cols).unwrap_or_else(|_| ComplexMatrix::zeros(k, k))
    }
}

/// Positive functional `A ↦ tr(Aρ)` on an algebra; a state when `s(I) = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct State {
    pub algebra: StarAlgebra,
    pub density: ComplexMatrix,
}

/// `{"density": matrix}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityJson {
    pub density: ComplexMatrix,
}

fn moment_matrix(algebra: &StarAlgebra, rho: &ComplexMatrix) -> ComplexMatrix {
    let b = algebra.basis();
    let k = b.len();
    let adj: Vec<ComplexMatrix> = b.iter().map(ComplexMatrix::adjoint).collect();
    ComplexMatrix::from_fn(k, k, |i, j| trace_pairing(&(&adj[i] * &b[j]), rho).unwrap_or_default())
}

/// Smallest eigenvalue of the moment matrix: `min s(A*A)` over `A` with unit
/// coordinate norm.
fn min_moment(algebra: &StarAlgebra, rho: &ComplexMatrix) -> Result<f64> {
    Ok(eigvalsh(&moment_matrix(algebra, rho))?[0])
}

impl State {
    /// Fails with [`Error::NotAState`] unless `ρ` is Hermitian, `s(I) = 1` and
    /// `s(A*A) ≥ −tol` on the algebra.
    pub fn new(algebra: StarAlgebra, density: ComplexMatrix, tol: Tolerance) -> Result<Self> {
        let n = algebra.ambient_dim();
        if density.shape() != (n, n) {
            return Err(Error::DimMismatch(format!("density {:?} for ambient dim {n}", density.shape())));
        }
        let h = density.hermitian_residual()?;
        if !tol.accepts(h, density.max_norm()) {
            return Err(Error::NotAState(format!("density not Hermitian (residual {h:.3e})")));
        }
        let norm = density.trace()?;
        if !tol.accepts((norm - C64::new(1.0, 0.0)).norm(), 1.0) {
            return Err(Error::NotAState(format!("s(I) = {norm} ≠ 1")));
        }
        let m = min_moment(&algebra, &density)?;
        if m < -tol.bound(1.0) {
            return Err(Error::NotAState(format!("s(A*A) = {m:.3e} < 0 on the algebra")));
        }
        Ok(State { algebra, density })
    }

    /// `s(x) = tr(xρ)`.
    pub fn eval(&self, x: &ComplexMatrix) -> C64 {
        trace_pairing(x, &self.density).unwrap_or_default()
    }

    /// Vector state `A ↦ ⟨v, Av⟩` for a unit vector `v`.
    pub fn vector_state(algebra: StarAlgebra, v: &[C64], tol: Tolerance) -> Result<Self> {
        Self::new(algebra, ComplexMatrix::outer(v, v), tol)
    }

    /// Normalized trace `A ↦ tr(A)/n`.
    pub fn tracial(algebra: StarAlgebra) -> Result<Self> {
        let n = algebra.ambient_dim();
        Self::new(algebra, ComplexMatrix::identity(n).scale_real(1.0 / n as f64), Tolerance::default())
    }
}

/// `(π, H = ℂ^d, Ω)` with `π(b_i)` stored for each algebra basis element.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GnsTriple {
    pub rep_dim: usize,
    pub pi: Vec<ComplexMatrix>,
    pub omega: Vec<C64>,
    /// Moment matrix `G_ij = s(b_i* b_j)`.
    pub gram: ComplexMatrix,
    #[serde(skip)]
    algebra: StarAlgebra,
}

pub fn gns_construct(s: &State) -> Result<GnsTriple> {
    let alg = &s.algebra;
    let g = moment_matrix(alg, &s.density);
    let eig = eigh(&g)?;
    let top = eig.values.last().copied().unwrap_or(0.0);
    if top <= 0.0 {
        return Err(Error::NotAState("moment matrix vanishes".into()));
    }
    // G-orthonormal representatives f_k = u_k/√μ_k of the quotient.
    let f: Vec<Vec<C64>> = eig
        .values
        .iter()
        .enumerate()
        .rev()
        .filter(|(_, &mu)| mu > GRAM_CUTOFF * top)
        .map(|(k, &mu)| eig.vector(k).into_iter().map(|z| z / mu.sqrt()).collect())
        .collect();
    let d = f.len();
    let f_mat = ComplexMatrix::from_columns(&f)?;
    // Row k of `coord` maps a coefficient vector c to ⟨f_k, c⟩_G = f_k* G c.
    let coord = &f_mat.adjoint() * &g;

    let pi: Vec<ComplexMatrix> = alg.basis().iter().map(|b| &(&coord * &alg.left_multiplication(b)) * &f_mat).collect();
    let omega = coord.column(0);
    Ok(GnsTriple { rep_dim: d, pi, omega, gram: g, algebra: alg.clone() })
}

impl GnsTriple {
    /// `π(x)` for any `x` in the algebra (by linearity over the basis).
    pub fn pi_of(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        let (c, r) = self.algebra.expand(x);
        if r > 1e-9 * x.max_norm().max(1.0) {
            return Err(Error::NotAnAlgebra(format!("element outside the algebra (residual {r:.3e})")));
        }
        let d = self.rep_dim;
        Ok(c.iter().zip(&self.pi).fold(ComplexMatrix::zeros(d, d), |acc, (ci, p)| &acc + &p.scale(*ci)))
    }

    /// `⟨Ω, XΩ⟩`.
    pub fn vector_functional(&self, x: &ComplexMatrix) -> C64 {
        let xo = x.apply(&self.omega).unwrap_or_default();
        crate::matrix::inner(&self.omega, &xo)
    }

    /// `max_b |s(b) − ⟨Ω, π(b)Ω⟩|` over the basis.
    pub fn gns_identity_residual(&self, s: &State) -> f64 {
        self.algebra
            .basis()
            .iter()
            .zip(&self.pi)
            .map(|(b, p)| (s.eval(b) - self.vector_functional(p)).norm())
            .fold(0.0, f64::max)
    }

    /// Worst of `‖π(b_i b_j) − π(b_i)π(b_j)‖_max` and `‖π(b_i*) − π(b_i)*‖_max`.
    pub fn representation_residual(&self) -> Result<f64> {
        let b = self.algebra.basis();
        let mut worst: f64 = 0.0;
        for (i, bi) in b.iter().enumerate() {
            worst = worst.max(self.pi_of(&bi.adjoint())?.max_dist(&self.pi[i].adjoint()));
            for (j, bj) in b.iter().enumerate() {
                worst = worst.max(self.pi_of(&(bi * bj))?.max_dist(&(&self.pi[i] * &self.pi[j])));
            }
        }
        Ok(worst)
    }

    /// Rank of the matrix with columns `π(b_i)Ω`; equals `d` for a cyclic `Ω`.
    pub fn cyclic_rank(&self) -> Result<usize> {
        let cols: Vec<Vec<C64>> = self.pi.iter().map(|p| p.apply(&self.omega)).collect::<Result<_>>()?;
        Ok(svd(&ComplexMatrix::from_columns(&cols)?)?.rank(1e-10))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PurityVerdict {
    pub pure: bool,
    pub commutant_dimension: usize,
    /// Non-scalar element of `π(𝔄)′` when the state is not pure.
    pub witness: Option<ComplexMatrix>,
}

/// A state is pure iff its GNS representation is irreducible.
pub fn is_pure(s: &State) -> Result<PurityVerdict> {
    let t = gns_construct(s)?;
    let report = commutant(&t.pi)?;
    let d = t.rep_dim;
    let witness = report.basis.iter().find_map(|x| {
        let scalar = ComplexMatrix::identity(d).scale(x.trace().unwrap_or_default() / d as f64);
        (x.max_dist(&scalar) > 1e-8).then(|| x.clone())
    });
    Ok(PurityVerdict { pure: report.dimension == 1, commutant_dimension: report.dimension, witness })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadonNikodym {
    /// `A ∈ π(𝔄)′` with `t(b) = ⟨Ω, π(b)AΩ⟩`.
    pub operator: ComplexMatrix,
    /// `max_b |t(b) − ⟨Ω, π(b)AΩ⟩|`.
    pub residual: f64,
    pub commutant_dimension: usize,
}

/// Operator `0 ≤ A ≤ I` in the commutant of the GNS representation of `s`
/// representing the positive functional `t(X) = tr(X σ)` dominated by `s`.
pub fn radon_nikodym(s: &State, t_density: &ComplexMatrix, tol: Tolerance) -> Result<RadonNikodym> {
    let alg = &s.algebra;
    let n = alg.ambient_dim();
    if t_density.shape() != (n, n) {
        return Err(Error::DimMismatch(format!("functional density {:?} for ambient dim {n}", t_density.shape())));
    }
    let tmin = min_moment(alg, t_density)?;
    if tmin < -tol.bound(1.0) {
        return Err(Error::NotAState(format!("t is not positive: t(A*A) = {tmin:.3e}")));
    }
    let diff = min_moment(alg, &(&s.density - t_density))?;
    if diff < -tol.bound(1.0) {
        return Err(Error::NotDominated { defect: -diff });
    }

    let triple = gns_construct(s)?;
    let comm = commutant_basis(&triple.pi)?;
    let k = alg.dim();
    let rhs: Vec<C64> = alg.basis().iter().map(|b| trace_pairing(b, t_density).unwrap_or_default()).collect();
    // M_ij = ⟨Ω, π(b_i) C_j Ω⟩
    let m = ComplexMatrix::from_fn(k, comm.len(), |i, j| triple.vector_functional(&(&triple.pi[i] * &comm[j])));
    let x = svd(&m)?.solve_least_squares(&rhs, 1e-12);
    let d = triple.rep_dim;
    let a = x.iter().zip(&comm).fold(ComplexMatrix::zeros(d, d), |acc, (c, cj)| &acc + &cj.scale(*c));
    let residual = triple
        .pi
        .iter()
        .zip(&rhs)
        .map(|(p, t)| (triple.vector_functional(&(p * &a)) - t).norm())
        .fold(0.0, f64::max);
    Ok(RadonNikodym { operator: a, residual, commutant_dimension: comm.len() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{ONE, ZERO};
    use crate::random::random_density;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    #[test]
    fn corner_state_on_diagonal_algebra() {
        let alg = StarAlgebra::diagonal(2).unwrap();
        let s = State::vector_state(alg, &[ONE, ZERO], tol()).unwrap();
        let t = gns_construct(&s).unwrap();
        assert_eq!(t.rep_dim, 1);
        assert!((t.omega[0].norm() - 1.0).abs() < 1e-12);
        let a = ComplexMatrix::diag_real(&[3.0, -7.0]);
        let pa = t.pi_of(&a).unwrap();
        assert!((pa[(0, 0)] - C64::new(3.0, 0.0)).norm() < 1e-12);
        assert!(is_pure(&s).unwrap().pure);
    }

    #[test]
    fn vector_state_on_m2() {
        let s = State::vector_state(StarAlgebra::full(2).unwrap(), &[ONE, ZERO], tol()).unwrap();
        let t = gns_construct(&s).unwrap();
        assert_eq!(t.rep_dim, 2);
        assert!(t.gns_identity_residual(&s) < 1e-12);
        assert!(t.representation_residual().unwrap() < 1e-12);
        assert_eq!(t.cyclic_rank().unwrap(), 2);
        let v = is_pure(&s).unwrap();
        assert!(v.pure && v.witness.is_none());
    }

    #[test]
    fn tracial_state_on_m2() {
        let s = State::tracial(StarAlgebra::full(2).unwrap()).unwrap();
        let t = gns_construct(&s).unwrap();
        assert_eq!(t.rep_dim, 4);
        assert!(t.gns_identity_residual(&s) < 1e-12);
        assert!(t.representation_residual().unwrap() < 1e-12);
        let v = is_pure(&s).unwrap();
        assert!(!v.pure);
        assert_eq!(v.commutant_dimension, 4);
        let w = v.witness.unwrap();
        for p in &t.pi {
            assert!(w.commutator(p).unwrap().max_norm() < 1e-10);
        }
    }

    #[test]
    fn radon_nikodym_examples() {
        let s = State::tracial(StarAlgebra::full(2).unwrap()).unwrap();
        let id = ComplexMatrix::identity(4);
        let same = radon_nikodym(&s, &s.density, tol()).unwrap();
        assert!(same.operator.max_dist(&id) < 1e-10);
        let half = radon_nikodym(&s, &s.density.scale_real(0.5), tol()).unwrap();
        assert!(half.operator.max_dist(&id.scale_real(0.5)) < 1e-10);

        let r = radon_nikodym(&s, &ComplexMatrix::diag_real(&[0.5, 0.0]), tol()).unwrap();
        assert!(r.residual < 1e-10);
        let ev = eigvalsh(&r.operator.real_part()).unwrap();
        for (e, want) in ev.iter().zip([0.0, 0.0, 1.0, 1.0]) {
            assert!((e - want).abs() < 1e-10, "{ev:?}");
        }
        let g = gns_construct(&s).unwrap();
        for p in &g.pi {
            assert!(r.operator.commutator(p).unwrap().max_norm() < 1e-10);
        }
    }

    #[test]
    fn not_dominated() {
        let s = State::vector_state(StarAlgebra::full(2).unwrap(), &[ONE, ZERO], tol()).unwrap();
        let r = radon_nikodym(&s, &ComplexMatrix::diag_real(&[0.0, 0.5]), tol());
        assert!(matches!(r, Err(Error::NotDominated { .. })));
    }

    #[test]
    fn invalid_states_rejected() {
        let alg = StarAlgebra::full(2).unwrap();
        assert!(matches!(
            State::new(alg.clone(), ComplexMatrix::diag_real(&[1.0, 1.0]), tol()),
            Err(Error::NotAState(_))
        ));
        assert!(matches!(
            State::new(alg, ComplexMatrix::diag_real(&[1.5, -0.5]), tol()),
            Err(Error::NotAState(_))
        ));
        // ρ need not be PSD, only its restriction to the algebra.
        let diag = StarAlgebra::diagonal(2).unwrap();
        let rho = ComplexMatrix::from_real_rows(&[&[0.5, 3.0], &[3.0, 0.5]]);
        assert!(State::new(diag, rho, tol()).is_ok());
    }

    #[test]
    fn non_algebra_rejected() {
        let basis = vec![ComplexMatrix::identity(2), ComplexMatrix::unit(2, 0, 1)];
        assert!(matches!(StarAlgebra::new(basis), Err(Error::NotAnAlgebra(_))));
        let basis = vec![ComplexMatrix::unit(2, 0, 0), ComplexMatrix::unit(2, 1, 1)];
        assert!(matches!(StarAlgebra::new(basis), Err(Error::NotAnAlgebra(_))));
    }

    #[test]
    fn algebra_json_round_trip() {
        let a = StarAlgebra::diagonal(3).unwrap();
        let j = serde_json::to_string(&a).unwrap();
        assert!(j.contains("\"ambient_dim\":3"));
        let b: StarAlgebra = serde_json::from_str(&j).unwrap();
        assert_eq!(a.basis(), b.basis());
    }

    #[test]
    fn amplified_tracial_state() {
        let alg = StarAlgebra::amplified(2, 2).unwrap();
        let s = State::tracial(alg).unwrap();
        let t = gns_construct(&s).unwrap();
        assert_eq!(t.rep_dim, 4);
        assert!(t.gns_identity_residual(&s) < 1e-12);
    }

    #[test]
    fn random_states_are_faithful() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in [2, 3] {
            for rank in 1..=n {
                let rho = random_density(&mut rng, n, rank);
                let s = State::new(StarAlgebra::full(n).unwrap(), rho, tol()).unwrap();
                let t = gns_construct(&s).unwrap();
                assert_eq!(t.rep_dim, n * rank);
                assert!(t.gns_identity_residual(&s) < 1e-10);
                assert!(t.representation_residual().unwrap() < 1e-9);
                assert_eq!(is_pure(&s).unwrap().pure, rank == 1);
            }
        }
    }
}
