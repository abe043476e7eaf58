//! Grid models of symmetric differential operators: deficiency indices,
//! the Cayley transform, the one-parameter family of self-adjoint
//! extensions of `(1/i)d/dx`, and truncated Heisenberg matrices.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{eigvalsh, inverse, svd};
use crate::matrix::{inner, norm, ComplexMatrix, C64, I, ONE, ZERO};

/// Singular-value threshold separating deficiency directions from
/// discretization error.
pub const DEFICIENCY_THRESHOLD: f64 = 1e-6;

/// Smallest grid accepted by [`momentum_operator`].
pub const MIN_GRID: usize = 16;

/// Maximal operator `A*` sampled on a grid.
///
/// `matrix` maps grid values (`grid_size` columns) to values at the output
/// points; `sample` is the restriction of the identity to those same output
/// points, so `A* − λ` is `matrix − λ·sample`. The minimal domain is the
/// range of `domain_projector`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridOperator {
    pub grid_size: usize,
    pub step: f64,
    pub matrix: ComplexMatrix,
    pub sample: ComplexMatrix,
    pub domain_projector: ComplexMatrix,
}

impl GridOperator {
    /// Nodes `x_k = k·h`.
    pub fn nodes(&self) -> Vec<f64> {
        (0..self.grid_size).map(|k| k as f64 * self.step).collect()
    }

    /// Bounded Hermitian matrix viewed as an everywhere-defined operator.
    pub fn bounded(h: ComplexMatrix) -> Result<Self> {
        let n = h.ensure_square()?;
        let step = if n > 1 { 1.0 / (n - 1) as f64 } else { 1.0 };
        Ok(GridOperator { grid_size: n, step, matrix: h, sample: ComplexMatrix::identity(n), domain_projector: ComplexMatrix::identity(n) })
    }

    /// `P A* P` restricted to the minimal domain.
    pub fn compressed(&self) -> ComplexMatrix {
        let p = &self.domain_projector;
        &(p * &(&self.sample.adjoint() * &self.matrix)) * p
    }

    fn shifted(&self, lambda: C64) -> ComplexMatrix {
        &self.matrix - &self.sample.scale(lambda)
    }

    pub fn minimal_domain_dim(&self) -> usize {
        self.domain_projector.trace().map_or(0, |t| t.re.round() as usize)
    }
}

/// `P = (1/i)·d/dx` on `[0,1]` with `N` nodes `x_k = k/(N−1)`: central
/// differences inside, second-order one-sided stencils `(−3,4,−1)/(2h)` and
/// `(1,−4,3)/(2h)` at the ends. The minimal domain vanishes at both ends.
pub fn momentum_operator(n: usize) -> Result<GridOperator> {
    if n < MIN_GRID {
        return Err(Error::GridTooSmall { got: n, min: MIN_GRID });
    }
    let h = 1.0 / (n - 1) as f64;
    let c = 1.0 / (2.0 * h);
    let mut d = ComplexMatrix::zeros(n, n);
    for k in 1..n - 1 {
        d[(k, k - 1)] = C64::new(-c, 0.0);
        d[(k, k + 1)] = C64::new(c, 0.0);
    }
    for (j, w) in [-3.0, 4.0, -1.0].iter().enumerate() {
        d[(0, j)] = C64::new(w * c, 0.0);
        d[(n - 1, n - 3 + j)] = C64::new(-[-1.0, 4.0, -3.0][j] * c, 0.0);
    }
    let mut proj = ComplexMatrix::identity(n);
    proj[(0, 0)] = ZERO;
    proj[(n - 1, n - 1)] = ZERO;
    Ok(GridOperator { grid_size: n, step: h, matrix: d.scale(-I), sample: ComplexMatrix::identity(n), domain_projector: proj })
}

/// `−d²/dx²` on `[0,1]` with the three-point stencil, evaluated at interior
/// nodes only: a real operator, so complex conjugation commutes with it.
pub fn laplacian_operator(n: usize) -> Result<GridOperator> {
    if n < MIN_GRID {
        return Err(Error::GridTooSmall { got: n, min: MIN_GRID });
    }
    let h = 1.0 / (n - 1) as f64;
    let w = 1.0 / (h * h);
    let mut m = ComplexMatrix::zeros(n - 2, n);
    let mut sample = ComplexMatrix::zeros(n - 2, n);
    for r in 0..n - 2 {
        m[(r, r)] = C64::new(-w, 0.0);
        m[(r, r + 1)] = C64::new(2.0 * w, 0.0);
        m[(r, r + 2)] = C64::new(-w, 0.0);
        sample[(r, r + 1)] = ONE;
    }
    // Minimal domain: f and f′ vanish at both ends.
    let mut proj = ComplexMatrix::identity(n);
    for k in [0, 1, n - 2, n - 1] {
        proj[(k, k)] = ZERO;
    }
    Ok(GridOperator { grid_size: n, step: h, matrix: m, sample, domain_projector: proj })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DeficiencyData {
    pub d_plus: usize,
    pub d_minus: usize,
    /// Orthonormal basis of `N(A* − i)`.
    pub basis_plus: Vec<Vec<C64>>,
    /// Orthonormal basis of `N(A* + i)`.
    pub basis_minus: Vec<Vec<C64>>,
    /// Smallest singular value above the threshold, for each sign; the gap
    /// to the threshold shows the count is not a rounding artefact.
    pub gap_plus: f64,
    pub gap_minus: f64,
}

fn deficiency_space(op: &GridOperator, lambda: C64) -> Result<(Vec<Vec<C64>>, f64)> {
    let s = svd(&op.shifted(lambda))?;
    let small: Vec<usize> = (0..s.s.len()).filter(|&k| s.s[k] <= DEFICIENCY_THRESHOLD).collect();
    let gap = s.s.iter().copied().filter(|&x| x > DEFICIENCY_THRESHOLD).fold(f64::INFINITY, f64::min);
    Ok((small.iter().map(|&k| s.v.column(k)).collect(), gap))
}

/// `d_± = dim N(A* ∓ i)`, counted as singular values of `A* ∓ i` at or
/// below [`DEFICIENCY_THRESHOLD`].
pub fn deficiency(op: &GridOperator) -> Result<DeficiencyData> {
    let (basis_plus, gap_plus) = deficiency_space(op, I)?;
    let (basis_minus, gap_minus) = deficiency_space(op, -I)?;
    Ok(DeficiencyData { d_plus: basis_plus.len(), d_minus: basis_minus.len(), basis_plus, basis_minus, gap_plus, gap_minus })
}

/// `(dim minimal domain, d₊, d₋, dim maximal domain)`.
pub fn von_neumann_count(op: &GridOperator, d: &DeficiencyData) -> (usize, usize, usize, usize) {
    (op.minimal_domain_dim(), d.d_plus, d.d_minus, op.grid_size)
}

/// `sup_k |v_k − c·w_k|` after the least-squares complex scaling `c` of
/// `w` onto `v`, with `v` normalized to unit sup-norm.
pub fn sup_distance_up_to_scale(v: &[C64], w: &[C64]) -> f64 {
    let vmax = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let v: Vec<C64> = v.iter().map(|z| z / vmax).collect();
    let c = inner(w, &v) / inner(w, w);
    v.iter().zip(w).map(|(a, b)| (a - c * b).norm()).fold(0.0, f64::max)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CayleyImage {
    /// `C_A (A+i)x = (A−i)x`.
    pub image: Vec<C64>,
    /// `|‖(A+i)x‖² − ‖Ax‖² − ‖x‖²| / (‖Ax‖² + ‖x‖²)`.
    pub pythagoras_residual: f64,
    /// `|‖(A−i)x‖ − ‖(A+i)x‖| / ‖(A+i)x‖`.
    pub isometry_residual: f64,
}

/// Cayley transform `C_A = (A−i)(A+i)⁻¹` applied to `(A+i)x` for `x` in the
/// minimal domain.
pub fn cayley(op: &GridOperator, x: &[C64]) -> Result<CayleyImage> {
    let n = op.grid_size;
    if x.len() != n {
        return Err(Error::DimMismatch(format!("vector of length {} on grid of {n}", x.len())));
    }
    let px = op.domain_projector.apply(x)?;
    let off = crate::matrix::sup_dist(&px, x);
    if off > 1e-12 * x.iter().map(|z| z.norm()).fold(1.0, f64::max) {
        return Err(Error::OutsideDomain(off));
    }
    let ax = op.compressed().apply(x)?;
    let plus: Vec<C64> = ax.iter().zip(x).map(|(a, b)| a + I * b).collect();
    let minus: Vec<C64> = ax.iter().zip(x).map(|(a, b)| a - I * b).collect();
    let (np, nm, na, nx) = (norm(&plus), norm(&minus), norm(&ax), norm(x));
    let base = na * na + nx * nx;
    let pythagoras_residual = if base > 0.0 { (np * np - base).abs() / base } else { 0.0 };
    let isometry_residual = if np > 0.0 { (nm - np).abs() / np } else { 0.0 };
    Ok(CayleyImage { image: minus, pythagoras_residual, isometry_residual })
}

/// `(H − i)(H + i)⁻¹` for a Hermitian matrix `H`: unitary, with eigenvalues
/// `(λ−i)/(λ+i)`.
pub fn cayley_matrix(h: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = h.ensure_square()?;
    let id = ComplexMatrix::identity(n).scale(I);
    Ok(&(h - &id) * &inverse(&(h + &id))?)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExtensionSpectrum {
    pub theta: f64,
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// `‖A − A*‖_max` of the extension matrix; zero means a real spectrum.
    pub hermitian_residual: f64,
}

impl ExtensionSpectrum {
    pub fn nearest(&self, target: f64) -> f64 {
        self.eigenvalues.iter().map(|e| (e - target).abs()).fold(f64::INFINITY, f64::min)
    }

    /// `max_{|n| ≤ n_max} dist(θ + 2πn, spectrum)`.
    pub fn formula_error(&self, n_max: i32) -> f64 {
        (-n_max..=n_max).map(|k| self.nearest(self.theta + 2.0 * PI * f64::from(k))).fold(0.0, f64::max)
    }
}

/// Extension matrix of `(1/i)d/dx` with `f(1) = e^{iθ}f(0)`: nodes
/// `x_k = k/N`, fourth-order central stencil `(1,−8,8,−1)/(12h)`, and the
/// entries that wrap past the right (left) end multiplied by `e^{iθ}` (`e^{−iθ}`).
pub fn extension_matrix(n: usize, theta: f64) -> Result<ComplexMatrix> {
    if n < MIN_GRID {
        return Err(Error::GridTooSmall { got: n, min: MIN_GRID });
    }
    let h = 1.0 / n as f64;
    let twist = C64::from_polar(1.0, theta);
    let mut d = ComplexMatrix::zeros(n, n);
    for k in 0..n {
        for (off, w) in [(-2i64, 1.0), (-1, -8.0), (1, 8.0), (2, -1.0)] {
            let j = k as i64 + off;
            let phase = if j >= n as i64 {
                twist
            } else if j < 0 {
                twist.conj()
            } else {
                ONE
            };
            d[(k, j.rem_euclid(n as i64) as usize)] += phase * (w / (12.0 * h));
        }
    }
    Ok(d.scale(-I))
}

/// Spectrum of the self-adjoint extension with boundary phase `θ`, for an
/// operator with deficiency indices `(1,1)`.
pub fn self_adjoint_extension(op: &GridOperator, indices: &DeficiencyData, theta: f64) -> Result<ExtensionSpectrum> {
    if indices.d_plus != indices.d_minus {
        return Err(Error::IndexMismatch { d_plus: indices.d_plus, d_minus: indices.d_minus });
    }
    if indices.d_plus != 1 {
        return Err(Error::InvalidArgument(format!("extensions are parametrized by U(1) only for indices (1,1), got ({0},{0})", indices.d_plus)));
    }
    let m = extension_matrix(op.grid_size, theta)?;
    let hermitian_residual = m.hermitian_residual()?;
    Ok(ExtensionSpectrum { theta, eigenvalues: eigvalsh(&m)?, hermitian_residual })
}

/// Truncated Heisenberg matrices.
///
/// `p_printed`/`q_printed` follow the classical display: `P` symmetric
/// tridiagonal with off-diagonal `1, √2, √3, …` and `Q = (1/i)·` the same
/// pattern with the sub-diagonal negated. They satisfy `[P,Q] = 2i` on the
/// interior block. `p`/`q` are the canonical pair `(a+a†)/√2` and
/// `i(a−a†)/√2`, which satisfy `[P,Q] = (1/i)I` on the interior block and
/// `P² + Q² = aa† + a†a`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HeisenbergPair {
    pub p_printed: ComplexMatrix,
    pub q_printed: ComplexMatrix,
    pub p: ComplexMatrix,
    pub q: ComplexMatrix,
}

/// Annihilation operator `a e_k = √k e_{k−1}` truncated to `n` levels.
pub fn annihilation(n: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, n, |i, j| if j == i + 1 { C64::new((j as f64).sqrt(), 0.0) } else { ZERO })
}

pub fn heisenberg_pq(n: usize) -> Result<HeisenbergPair> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("truncation dimension must be at least 2, got {n}")));
    }
    let a = annihilation(n);
    let ad = a.adjoint();
    let p_printed = &a + &ad;
    let q_printed = (&a - &ad).scale(-I);
    let r = 0.5f64.sqrt();
    let p = p_printed.scale_real(r);
    let q = (&a - &ad).scale(I * r);
    Ok(HeisenbergPair { p_printed, q_printed, p, q })
}

/// `max |([P,Q] − (1/i)I)_{jk}|` over the upper-left `(n−1)×(n−1)` block.
pub fn commutator_interior_residual(p: &ComplexMatrix, q: &ComplexMatrix, expected: C64) -> Result<f64> {
    let c = p.commutator(q)?;
    let m = c.rows() - 1;
    let want = ComplexMatrix::identity(m).scale(expected);
    Ok(c.block(0, 0, m, m).max_dist(&want))
}

/// Eigenvalues of the `n×n` compression of `P² + Q²`, computed from the
/// canonical pair at `n+1` levels so that no truncation artefact enters the
/// kept block. Equals `{1, 3, …, 2n−1}`.
pub fn oscillator_check(n: usize) -> Result<Vec<f64>> {
    let pair = heisenberg_pq(n + 1)?;
    let h = &(&pair.p * &pair.p) + &(&pair.q * &pair.q);
    eigvalsh(&h.block(0, 0, n, n))
}

/// Eigenvalues of `P_n² + Q_n²` built from the `n`-level truncations; the top
/// eigenvalue is spoiled (`n` instead of `2n−1`).
pub fn oscillator_truncated(n: usize) -> Result<Vec<f64>> {
    let pair = heisenberg_pq(n)?;
    eigvalsh(&(&(&pair.p * &pair.p) + &(&pair.q * &pair.q)))
}

/// `−d²/dx² + x²` with the three-point stencil on a uniform grid (Dirichlet
/// outside the grid).
pub fn position_oscillator(x: &[f64]) -> ComplexMatrix {
    let n = x.len();
    let h = if n > 1 { x[1] - x[0] } else { 1.0 };
    let w = 1.0 / (h * h);
    ComplexMatrix::from_fn(n, n, |i, j| {
        if i == j {
            C64::new(2.0 * w + x[i] * x[i], 0.0)
        } else if i.abs_diff(j) == 1 {
            C64::new(-w, 0.0)
        } else {
            ZERO
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{random_hermitian, random_vector};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn samples(n: usize, f: impl Fn(f64) -> C64) -> Vec<C64> {
        (0..n).map(|k| f(k as f64 / (n - 1) as f64)).collect()
    }

    #[test]
    fn momentum_on_plane_wave_and_constant() {
        let n = 256;
        let op = momentum_operator(n).unwrap();
        let f = samples(n, |x| C64::from_polar(1.0, 2.0 * PI * x));
        let pf = op.matrix.apply(&f).unwrap();
        // central-difference error (2π)³h²/6
        let h = op.step;
        let bound = (2.0 * PI).powi(3) * h * h / 6.0 * 1.01;
        for k in 1..n - 1 {
            assert!((pf[k] - f[k] * (2.0 * PI)).norm() <= bound);
        }
        let one = op.matrix.apply(&vec![ONE; n]).unwrap();
        assert!(one.iter().all(|z| z.norm() < 1e-9));
    }

    #[test]
    fn grid_too_small() {
        assert_eq!(momentum_operator(8), Err(Error::GridTooSmall { got: 8, min: 16 }));
    }

    #[test]
    fn symmetric_on_minimal_domain() {
        let n = 64;
        let op = momentum_operator(n).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let mut f = random_vector(&mut rng, n);
        let mut g = random_vector(&mut rng, n);
        for v in [&mut f, &mut g] {
            v[0] = ZERO;
            v[n - 1] = ZERO;
        }
        let lhs = inner(&op.matrix.apply(&f).unwrap(), &g);
        let rhs = inner(&f, &op.matrix.apply(&g).unwrap());
        assert!((lhs - rhs).norm() <= 1e-8);
        assert!(op.compressed().hermitian_residual().unwrap() < 1e-12);
    }

    #[test]
    fn momentum_deficiency() {
        let op = momentum_operator(64).unwrap();
        let d = deficiency(&op).unwrap();
        assert_eq!((d.d_plus, d.d_minus), (1, 1));
        assert!(d.gap_plus > 1.0 && d.gap_minus > 1.0);
        let ep = samples(64, |x| C64::new((-x).exp(), 0.0));
        let em = samples(64, |x| C64::new(x.exp(), 0.0));
        assert!(sup_distance_up_to_scale(&d.basis_plus[0], &ep) < 1e-3);
        assert!(sup_distance_up_to_scale(&d.basis_minus[0], &em) < 1e-3);
        let cos = inner(&d.basis_plus[0], &d.basis_minus[0]).norm();
        assert!(cos < 0.95);
        assert_eq!(von_neumann_count(&op, &d), (62, 1, 1, 64));
    }

    #[test]
    fn hermitian_matrix_has_no_deficiency() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let op = GridOperator::bounded(random_hermitian(&mut rng, 6)).unwrap();
        let d = deficiency(&op).unwrap();
        assert_eq!((d.d_plus, d.d_minus), (0, 0));
    }

    #[test]
    fn real_laplacian_has_equal_indices() {
        let op = laplacian_operator(32).unwrap();
        let d = deficiency(&op).unwrap();
        assert_eq!((d.d_plus, d.d_minus), (2, 2));
        // Conjugation maps N(A* − i) onto N(A* + i).
        for v in &d.basis_plus {
            let conj: Vec<C64> = v.iter().map(|z| z.conj()).collect();
            let r = op.shifted(-I).apply(&conj).unwrap();
            assert!(norm(&r) < 1e-6);
        }
    }

    #[test]
    fn cayley_isometry() {
        let n = 64;
        let op = momentum_operator(n).unwrap();
        let zero = cayley(&op, &vec![ZERO; n]).unwrap();
        assert!(zero.image.iter().all(|z| *z == ZERO));
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let mut x = random_vector(&mut rng, n);
        x[0] = ZERO;
        x[n - 1] = ZERO;
        let c = cayley(&op, &x).unwrap();
        assert!(c.pythagoras_residual <= 1e-8 && c.isometry_residual <= 1e-8);
        let mut y = x.clone();
        y[0] = ONE;
        assert!(matches!(cayley(&op, &y), Err(Error::OutsideDomain(_))));
    }

    #[test]
    fn cayley_matrix_spectral_mapping() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let h = random_hermitian(&mut rng, 5);
        let c = cayley_matrix(&h).unwrap();
        assert!(c.is_unitary(crate::matrix::Tolerance::default()).unwrap());
        let s = crate::spectral::spectral_decompose(&h, None).unwrap();
        let mapped = crate::spectral::functional_calculus(&s, |l| (C64::new(l, 0.0) - I) / (C64::new(l, 0.0) + I));
        assert!(mapped.max_dist(&c) < 1e-12);
    }

    #[test]
    fn extension_spectra() {
        let op = momentum_operator(128).unwrap();
        let d = DeficiencyData { d_plus: 1, d_minus: 1, basis_plus: vec![], basis_minus: vec![], gap_plus: 1.0, gap_minus: 1.0 };
        for theta in [0.0, PI, PI / 2.0] {
            let s = self_adjoint_extension(&op, &d, theta).unwrap();
            assert_eq!(s.hermitian_residual, 0.0);
            assert!(s.formula_error(3) < 1e-3, "θ={theta}: {}", s.formula_error(3));
        }
        let bad = DeficiencyData { d_minus: 0, ..d };
        assert!(matches!(self_adjoint_extension(&op, &bad, 0.0), Err(Error::IndexMismatch { d_plus: 1, d_minus: 0 })));
    }

    #[test]
    fn heisenberg_matrices() {
        let pair = heisenberg_pq(2).unwrap();
        assert!(pair.p_printed.max_dist(&ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]])) < 1e-15);
        let pair = heisenberg_pq(4).unwrap();
        assert!((pair.p_printed[(1, 2)].re - 2f64.sqrt()).abs() < 1e-15);
        assert!((pair.p_printed[(2, 3)].re - 3f64.sqrt()).abs() < 1e-15);
        assert!(pair.q_printed.is_hermitian(crate::matrix::Tolerance::default()).unwrap());
        assert!(commutator_interior_residual(&pair.p_printed, &pair.q_printed, C64::new(0.0, 2.0)).unwrap() < 1e-12);
        assert!(commutator_interior_residual(&pair.p, &pair.q, -I).unwrap() < 1e-12);
        // The full commutator is traceless, so the defect sits in the corner.
        let c = pair.p.commutator(&pair.q).unwrap();
        assert!(c.trace().unwrap().norm() < 1e-12);
        assert!((c[(3, 3)] - C64::new(0.0, 3.0)).norm() < 1e-12);
    }

    #[test]
    fn oscillator_levels() {
        let ev = oscillator_check(2).unwrap();
        assert!((ev[0] - 1.0).abs() < 1e-14 && (ev[1] - 3.0).abs() < 1e-14);
        let ev = oscillator_check(16).unwrap();
        assert!((ev[0] - 1.0).abs() < 1e-12 && (ev[3] - 7.0).abs() < 1e-12);
        let tr = oscillator_truncated(16).unwrap();
        assert!((tr[0] - 1.0).abs() < 1e-12);
        assert!((tr.iter().cloned().fold(0.0, f64::max) - 29.0).abs() < 1e-9);
    }
}
