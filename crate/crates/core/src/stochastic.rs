//! Karhunen–Loève decomposition of Brownian motion on `[0,1]`.
//!
//! The covariance operator `(Kf)(t) = ∫₀¹ min(s,t) f(s) ds` is discretized
//! with the midpoint rule on `t_k = (k − ½)/N`, `k = 1..N`. Its exact
//! eigenpairs are `λ_n = ((n − ½)π)⁻²` and `φ_n(t) = √2 sin((n − ½)πt)`,
//! the solutions of `−u″ = λ⁻¹u`, `u(0) = 0`, `u′(1) = 0`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::eigh;
use crate::matrix::{ComplexMatrix, C64};
use crate::random::normal;

/// Midpoint nodes `t_k = (k − ½)/N`.
pub fn grid(n: usize) -> Vec<f64> {
    (1..=n).map(|k| (k as f64 - 0.5) / n as f64).collect()
}

/// `K_{jk} = min(t_j, t_k)/N`, symmetric positive definite.
pub fn kernel_matrix(n: usize) -> ComplexMatrix {
    let t = grid(n);
    let w = 1.0 / n as f64;
    ComplexMatrix::from_fn(n, n, |j, k| C64::new(t[j].min(t[k]) * w, 0.0))
}

/// `λ_n = ((n − ½)π)⁻²` for `n ≥ 1`.
pub fn exact_eigenvalue(n: usize) -> f64 {
    let x = (n as f64 - 0.5) * std::f64::consts::PI;
    1.0 / (x * x)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KlBasis {
    pub grid: Vec<f64>,
    /// Decreasing, positive.
    pub eigenvalues: Vec<f64>,
    /// `φ_n(t_k)`, normalized so that `Σ_k φ_n(t_k)²/N = 1` and `φ_n(t_1) > 0`.
    pub eigenfunctions: Vec<Vec<f64>>,
    /// `tr K = Σ_k t_k/N`, equal to `½` on the midpoint grid.
    pub trace: f64,
}

impl KlBasis {
    pub fn modes(&self) -> usize {
        self.eigenvalues.len()
    }

    /// `tr K − Σ_{n ≤ m} λ_n`.
    pub fn truncation_error(&self) -> f64 {
        self.trace - self.eigenvalues.iter().sum::<f64>()
    }
}

/// Top `m` eigenpairs of the discretized covariance kernel on `N` nodes.
pub fn kl_decompose(n: usize, m: usize) -> Result<KlBasis> {
    if n == 0 || m == 0 || m > n {
        return Err(Error::BadModeCount { modes: m, grid: n });
    }
    let k = kernel_matrix(n);
    let trace = k.trace()?.re;
    let e = eigh(&k)?;
    let scale = (n as f64).sqrt();
    let mut eigenvalues = Vec::with_capacity(m);
    let mut eigenfunctions = Vec::with_capacity(m);
    for idx in (n - m..n).rev() {
        let v = e.vector(idx);
        // Eigenvectors of a real symmetric matrix are real up to a phase.
        let phase = v.iter().copied().max_by(|a, b| a.norm().total_cmp(&b.norm())).map_or(C64::new(1.0, 0.0), |z| z / z.norm());
        let mut f: Vec<f64> = v.iter().map(|z| (z / phase).re * scale).collect();
        if f[0] < 0.0 {
            f.iter_mut().for_each(|x| *x = -*x);
        }
        eigenvalues.push(e.values[idx]);
        eigenfunctions.push(f);
    }
    Ok(KlBasis { grid: grid(n), eigenvalues, eigenfunctions, trace })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OdeCheck {
    /// `u = Kf` on the grid.
    pub u: Vec<f64>,
    /// `max |−(u_{j+1} − 2u_j + u_{j−1})/h² − f_j|` over interior nodes.
    pub residual: f64,
    /// Linear extrapolation of `u` to `t = 0`.
    pub boundary_value: f64,
}

/// Applies the discretized kernel to `f` and checks `−u″ = f`, `u(0) = 0`.
pub fn kernel_solves_ode(f: &[f64]) -> Result<OdeCheck> {
    let n = f.len();
    if n < 3 {
        return Err(Error::GridTooSmall { got: n, min: 3 });
    }
    let t = grid(n);
    let w = 1.0 / n as f64;
    let u: Vec<f64> = (0..n).map(|j| (0..n).map(|k| t[j].min(t[k]) * f[k]).sum::<f64>() * w).collect();
    let h2 = w * w;
    let residual = (1..n - 1).map(|j| (-(u[j + 1] - 2.0 * u[j] + u[j - 1]) / h2 - f[j]).abs()).fold(0.0, f64::max);
    // t_1 = h/2, t_2 = 3h/2.
    let boundary_value = u[0] - 0.5 * (u[1] - u[0]);
    Ok(OdeCheck { u, residual, boundary_value })
}

/// Sampled paths `B(t_k) = Σ_n √λ_n φ_n(t_k) Z_n`; `paths[p][k]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathEnsemble {
    pub grid: Vec<f64>,
    pub paths: Vec<Vec<f64>>,
}

/// Paths from explicit coefficients, `z[p][n]` for path `p` and mode `n`.
pub fn paths_from_coefficients(basis: &KlBasis, z: &[Vec<f64>]) -> Result<PathEnsemble> {
    let m = basis.modes();
    let n = basis.grid.len();
    let amp: Vec<f64> = basis.eigenvalues.iter().map(|l| l.max(0.0).sqrt()).collect();
    let paths = z
        .iter()
        .map(|zp| {
            if zp.len() != m {
                return Err(Error::DimMismatch(format!("{} coefficients for {m} modes", zp.len())));
            }
            let mut path = vec![0.0; n];
            for (mode, (&a, &zn)) in amp.iter().zip(zp).enumerate() {
                let c = a * zn;
                for (x, phi) in path.iter_mut().zip(&basis.eigenfunctions[mode]) {
                    *x += c * phi;
                }
            }
            Ok(path)
        })
        .collect::<Result<_>>()?;
    Ok(PathEnsemble { grid: basis.grid.clone(), paths })
}

/// `count` paths with i.i.d. standard normal coefficients drawn from
/// ChaCha8 seeded with `seed`; identical seeds give identical paths.
pub fn sample_paths(basis: &KlBasis, count: usize, seed: u64) -> Result<PathEnsemble> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let z: Vec<Vec<f64>> = (0..count).map(|_| (0..basis.modes()).map(|_| normal(&mut rng)).collect()).collect();
    paths_from_coefficients(basis, &z)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CovarianceReport {
    pub paths: usize,
    /// `max_{s,t} |Ĉov(B_s, B_t) − min(s,t)|`.
    pub max_covariance_deviation: f64,
    /// `max_{s<t} |V̂ar(B_t − B_s) − (t − s)|`.
    pub max_increment_deviation: f64,
    /// Sample variance at the last node.
    pub terminal_variance: f64,
    /// Its target `t_N`.
    pub terminal_time: f64,
}

/// Empirical covariance of the ensemble against `min(s,t)`.
pub fn covariance_check(ens: &PathEnsemble) -> Result<CovarianceReport> {
    let p = ens.paths.len();
    if p < 2 {
        return Err(Error::InvalidArgument(format!("covariance needs at least 2 paths, got {p}")));
    }
    let n = ens.grid.len();
    let mut mean = vec![0.0; n];
    for path in &ens.paths {
        for (m, x) in mean.iter_mut().zip(path) {
            *m += x / p as f64;
        }
    }
    let mut cov = vec![0.0; n * n];
    let mut centered = vec![0.0; n];
    for path in &ens.paths {
        for k in 0..n {
            centered[k] = path[k] - mean[k];
        }
        for i in 0..n {
            let ci = centered[i];
            for j in i..n {
                cov[i * n + j] += ci * centered[j];
            }
        }
    }
    let denom = (p - 1) as f64;
    let t = &ens.grid;
    let (mut cov_dev, mut inc_dev): (f64, f64) = (0.0, 0.0);
    for i in 0..n {
        for j in i..n {
            let c = cov[i * n + j] / denom;
            cov_dev = cov_dev.max((c - t[i].min(t[j])).abs());
            if j > i {
                let var = (cov[i * n + i] + cov[j * n + j]) / denom - 2.0 * c;
                inc_dev = inc_dev.max((var - (t[j] - t[i])).abs());
            }
        }
    }
    Ok(CovarianceReport {
        paths: p,
        max_covariance_deviation: cov_dev,
        max_increment_deviation: inc_dev,
        terminal_variance: cov[n * n - 1] / denom,
        terminal_time: t[n - 1],
    })
}
