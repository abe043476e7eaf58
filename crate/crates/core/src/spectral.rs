//! Spectral decomposition of Hermitian matrices as a finite projection-valued
//! measure, functional calculus, and dyadic step-function approximation.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::eigh;
use crate::matrix::{ComplexMatrix, Tolerance, C64};

/// Distinct eigenvalues (strictly decreasing), their spectral projections and
/// multiplicities. `Σ P_i = I`, `P_i P_j = 0` for `i ≠ j`, `rank P_i = s_i`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralData {
    pub eigenvalues: Vec<f64>,
    pub multiplicities: Vec<usize>,
    pub projections: Vec<ComplexMatrix>,
}

/// Default clustering tolerance `1e-8 · max(1, ‖A‖_max)`.
pub fn default_group_tol(a: &ComplexMatrix) -> f64 {
    1e-8 * a.max_norm().max(1.0)
}

/// `A = Σ λ_i P_i` with eigenvalues closer than `group_tol` merged into one
/// cluster.
pub fn spectral_decompose(a: &ComplexMatrix, group_tol: Option<f64>) -> Result<SpectralData> {
    let n = a.ensure_square()?;
    let residual = a.hermitian_residual()?;
    if !Tolerance::default().accepts(residual, a.max_norm()) {
        return Err(Error::NotHermitian { residual });
    }
    let group_tol = group_tol.unwrap_or_else(|| default_group_tol(a));
    let eig = eigh(a)?;

    // Walk eigenvalues from the top; a gap larger than group_tol opens a new cluster.
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    for k in (0..n).rev() {
        match clusters.last_mut() {
            Some(c) if eig.values[*c.last().unwrap()] - eig.values[k] <= group_tol => c.push(k),
            _ => clusters.push(vec![k]),
        }
    }

    let mut eigenvalues = Vec::with_capacity(clusters.len());
    let mut multiplicities = Vec::with_capacity(clusters.len());
    let mut projections = Vec::with_capacity(clusters.len());
    for c in clusters {
        let mean = c.iter().map(|&k| eig.values[k]).sum::<f64>() / c.len() as f64;
        let mut p = ComplexMatrix::zeros(n, n);
        for &k in &c {
            let v = eig.vector(k);
            for i in 0..n {
                for j in 0..n {
                    p[(i, j)] += v[i] * v[j].conj();
                }
            }
        }
        eigenvalues.push(mean);
        multiplicities.push(c.len());
        projections.push(p);
    }
    Ok(SpectralData { eigenvalues, multiplicities, projections })
}

impl SpectralData {
    pub fn dim(&self) -> usize {
        self.projections.first().map_or(0, ComplexMatrix::rows)
    }

    /// `Σ λ_i P_i`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        functional_calculus(self, |x| C64::new(x, 0.0))
    }

    /// Checks the PVM invariants: each `P_i` a projection, pairwise orthogonal,
    /// summing to `I`, with `rank P_i = s_i`. Returns the worst residual.
    pub fn validate(&self) -> f64 {
        let n = self.dim();
        let mut worst: f64 = 0.0;
        let mut sum = ComplexMatrix::zeros(n, n);
        for (i, p) in self.projections.iter().enumerate() {
            worst = worst.max(p.projection_residual().unwrap_or(f64::INFINITY));
            worst = worst.max((p.trace().map(|t| t.re).unwrap_or(f64::NAN) - self.multiplicities[i] as f64).abs());
            for q in &self.projections[i + 1..] {
                worst = worst.max((p * q).max_norm());
            }
            sum = &sum + p;
        }
        worst.max(sum.max_dist(&ComplexMatrix::identity(n)))
    }
}

/// `P(E) = Σ_{λ_i ∈ E} P_i` for a set given by its indicator.
pub fn pvm_evaluate(s: &SpectralData, set: impl Fn(f64) -> bool) -> ComplexMatrix {
    let n = s.dim();
    s.eigenvalues
        .iter()
        .zip(&s.projections)
        .filter(|(&lam, _)| set(lam))
        .fold(ComplexMatrix::zeros(n, n), |acc, (_, p)| &acc + p)
}

/// `f(A) = Σ f(λ_i) P_i`.
pub fn functional_calculus(s: &SpectralData, f: impl Fn(f64) -> C64) -> ComplexMatrix {
    let n = s.dim();
    s.eigenvalues
        .iter()
        .zip(&s.projections)
        .fold(ComplexMatrix::zeros(n, n), |acc, (&lam, p)| &acc + &p.scale(f(lam)))
}

/// Dyadic lower step approximation `s_n` of `f(x) = x·χ_[0,M](x)`.
///
/// `s_n(x) = i·2⁻ⁿ` on `[i·2⁻ⁿ, (i+1)·2⁻ⁿ)` for `x < n` and `s_n(x) = n` for
/// `x ≥ n`, composed with `f`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepFunction {
    pub level: u32,
    /// Left endpoints of the dyadic cells inside `[0, min(M, n)]`.
    pub breakpoints: Vec<f64>,
    /// Value on `[breakpoints[i], breakpoints[i+1])`.
    pub values: Vec<f64>,
    /// Value taken for `x ≥ n` (equal to `n`).
    pub cap: f64,
    /// Support bound `M` of the approximated function.
    pub support: f64,
}

impl StepFunction {
    pub fn eval(&self, x: f64) -> f64 {
        if !(0.0..=self.support).contains(&x) {
            return 0.0;
        }
        if x >= self.cap {
            return self.cap;
        }
        let w = (-(self.level as f64)).exp2();
        (x / w).floor() * w
    }
}

/// Largest supported level; keeps `2^n` well inside `f64` integer range.
pub const MAX_STEP_LEVEL: u32 = 40;

pub fn approximate_by_steps(support: f64, level: u32) -> Result<StepFunction> {
    if level < 1 || level > MAX_STEP_LEVEL {
        return Err(Error::BadLevel(level));
    }
    if !(support >= 0.0) || !support.is_finite() {
        return Err(Error::InvalidArgument(format!("support bound must be finite and >= 0, got {support}")));
    }
    let cap = level as f64;
    let w = (-(level as f64)).exp2();
    let top = support.min(cap);
    // Cell count can be huge for large levels; only materialize a bounded prefix.
    let cells = ((top / w).ceil() as usize).min(1 << 16);
    let breakpoints: Vec<f64> = (0..cells).map(|i| i as f64 * w).collect();
    let values = breakpoints.clone();
    Ok(StepFunction { level, breakpoints, values, cap, support })
}
