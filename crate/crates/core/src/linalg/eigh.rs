//! Hermitian eigensolvers.
//!
//! Two independent routes are provided:
//! - cyclic complex Jacobi rotations, accurate and simple, used for small
//!   matrices;
//! - Householder reduction to a real symmetric tridiagonal matrix followed by
//!   implicit QL with Wilkinson-style shifts, used for the large grid
//!   operators.
//!
//! [`eigh`] dispatches on size. Both routes are exposed so tests can check one
//! against the other.

use crate::error::Result;
use crate::matrix::{ComplexMatrix, C64, ONE, ZERO};

/// Eigenpairs of a Hermitian matrix, eigenvalues ascending.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    /// Columns are orthonormal eigenvectors matching `values`.
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    pub fn vector(&self, k: usize) -> Vec<C64> {
        self.vectors.column(k)
    }

    /// `Σ λ_k v_k v_k*`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let n = self.vectors.rows();
        let mut out = ComplexMatrix::zeros(n, n);
        for (k, &lam) in self.values.iter().enumerate() {
            let v = self.vector(k);
            for i in 0..n {
                let vi = v[i] * lam;
                for j in 0..n {
                    out[(i, j)] += vi * v[j].conj();
                }
            }
        }
        out
    }
}

/// Size above which [`eigh`] switches from Jacobi to tridiagonal QL.
pub const JACOBI_MAX_DIM: usize = 48;

/// Hermitian eigendecomposition. Only the Hermitian part of `a` is used.
pub fn eigh(a: &ComplexMatrix) -> Result<HermitianEigen> {
    let n = a.ensure_square()?;
    if n <= JACOBI_MAX_DIM {
        eigh_jacobi(a)
    } else {
        eigh_tridiagonal(a)
    }
}

/// Eigenvalues only (ascending). Skips eigenvector accumulation for large inputs.
pub fn eigvalsh(a: &ComplexMatrix) -> Result<Vec<f64>> {
    let n = a.ensure_square()?;
    if n <= JACOBI_MAX_DIM {
        return Ok(eigh_jacobi(a)?.values);
    }
    let (d, e, _) = householder_tridiagonal(a, false);
    let mut d = d;
    let mut e = e;
    tql(&mut d, &mut e, None);
    d.sort_by(f64::total_cmp);
    Ok(d)
}

pub fn eigh_jacobi(a: &ComplexMatrix) -> Result<HermitianEigen> {
    let n = a.ensure_square()?;
    let mut m = a.real_part();
    let mut v = ComplexMatrix::identity(n);
    let scale = m.frobenius_norm().max(f64::MIN_POSITIVE);

    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| m[(i, j)].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= 1e-15 * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[(p, q)];
                let r = apq.norm();
                if r <= 1e-300 || r <= 1e-18 * scale {
                    m[(p, q)] = ZERO;
                    m[(q, p)] = ZERO;
                    continue;
                }
                let phase = apq / r; // e^{iφ}
                let app = m[(p, p)].re;
                let aqq = m[(q, q)].re;
                let tau = (aqq - app) / (2.0 * r);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // G = diag(1, e^{-iφ}) · [[c, s], [-s, c]] acting on the (p, q) plane.
                let gpp = C64::new(c, 0.0);
                let gpq = C64::new(s, 0.0);
                let gqp = -phase.conj() * s;
                let gqq = phase.conj() * c;
                // m ← m G
                for k in 0..n {
                    let mkp = m[(k, p)];
                    let mkq = m[(k, q)];
                    m[(k, p)] = mkp * gpp + mkq * gqp;
                    m[(k, q)] = mkp * gpq + mkq * gqq;
                }
                // m ← G* m
                for k in 0..n {
                    let mpk = m[(p, k)];
                    let mqk = m[(q, k)];
                    m[(p, k)] = gpp.conj() * mpk + gqp.conj() * mqk;
                    m[(q, k)] = gpq.conj() * mpk + gqq.conj() * mqk;
                }
                m[(p, q)] = ZERO;
                m[(q, p)] = ZERO;
                m[(p, p)] = C64::new(m[(p, p)].re, 0.0);
                m[(q, q)] = C64::new(m[(q, q)].re, 0.0);
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * gpp + vkq * gqp;
                    v[(k, q)] = vkp * gpq + vkq * gqq;
                }
            }
        }
    }
    let values: Vec<f64> = (0..n).map(|i| m[(i, i)].re).collect();
    Ok(sorted(values, v))
}

pub fn eigh_tridiagonal(a: &ComplexMatrix) -> Result<HermitianEigen> {
    a.ensure_square()?;
    let (mut d, mut e, q) = householder_tridiagonal(a, true);
    let q = q.expect("vectors requested");
    let n = d.len();
    let mut z = vec![0.0; n * n];
    for i in 0..n {
        z[i * n + i] = 1.0;
    }
    tql(&mut d, &mut e, Some(&mut z));
    // eigenvectors of A are Q·Z (Q already carries the phase normalization)
    let mut vectors = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        for k in 0..n {
            let qik = q[(i, k)];
            if qik == ZERO {
                continue;
            }
            for j in 0..n {
                vectors[(i, j)] += qik * z[k * n + j];
            }
        }
    }
    Ok(sorted(d, vectors))
}

fn sorted(values: Vec<f64>, vectors: ComplexMatrix) -> HermitianEigen {
    let n = values.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
    let vals = order.iter().map(|&i| values[i]).collect();
    let vecs = ComplexMatrix::from_fn(vectors.rows(), n, |r, c| vectors[(r, order[c])]);
    HermitianEigen { values: vals, vectors: vecs }
}

/// Reduces Hermitian `a` to a real symmetric tridiagonal matrix.
///
/// Returns diagonal `d`, subdiagonal `e` (with `e[i] = T[i+1, i]`, `e[n-1] = 0`)
/// and, if requested, the unitary `Q` with `Q* A Q = T`.
fn householder_tridiagonal(a: &ComplexMatrix, want_q: bool) -> (Vec<f64>, Vec<f64>, Option<ComplexMatrix>) {
    let n = a.rows();
    let mut m = a.real_part();
    let mut q = want_q.then(|| ComplexMatrix::identity(n));

    for k in 0..n.saturating_sub(2) {
        let x: Vec<C64> = ((k + 1)..n).map(|i| m[(i, k)]).collect();
        let xnorm = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let tail: f64 = x[1..].iter().map(|z| z.norm_sqr()).sum();
        if tail <= 1e-300 || xnorm == 0.0 {
            continue;
        }
        let x0 = x[0];
        let phase = if x0.norm() > 0.0 { x0 / x0.norm() } else { ONE };
        let alpha = -phase * xnorm;
        let mut v = x.clone();
        v[0] -= alpha;
        let vnorm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for z in &mut v {
            *z /= vnorm;
        }
        let off = k + 1;
        // m ← H m with H = I − 2vv* on rows k+1..n
        for j in 0..n {
            let s: C64 = v.iter().enumerate().map(|(i, vi)| vi.conj() * m[(off + i, j)]).sum();
            if s == ZERO {
                continue;
            }
            for (i, vi) in v.iter().enumerate() {
                m[(off + i, j)] -= *vi * s * 2.0;
            }
        }
        // m ← m H on cols k+1..n
        for i in 0..n {
            let s: C64 = v.iter().enumerate().map(|(j, vj)| m[(i, off + j)] * vj).sum();
            if s == ZERO {
                continue;
            }
            for (j, vj) in v.iter().enumerate() {
                m[(i, off + j)] -= s * vj.conj() * 2.0;
            }
        }
        if let Some(q) = q.as_mut() {
            for i in 0..n {
                let s: C64 = v.iter().enumerate().map(|(j, vj)| q[(i, off + j)] * vj).sum();
                if s == ZERO {
                    continue;
                }
                for (j, vj) in v.iter().enumerate() {
                    q[(i, off + j)] -= s * vj.conj() * 2.0;
                }
            }
        }
    }

    // Phase normalization D so that D* T D has real non-negative subdiagonal.
    let d: Vec<f64> = (0..n).map(|i| m[(i, i)].re).collect();
    let mut e = vec![0.0; n];
    let mut delta = vec![ONE; n];
    for i in 0..n.saturating_sub(1) {
        let sub = m[(i + 1, i)];
        let r = sub.norm();
        e[i] = r;
        delta[i + 1] = if r > 0.0 { delta[i] * sub / r } else { delta[i] };
    }
    if let Some(q) = q.as_mut() {
        for i in 0..n {
            for j in 0..n {
                q[(i, j)] *= delta[j];
            }
        }
    }
    (d, e, q)
}

/// Implicit QL on a symmetric tridiagonal matrix (EISPACK `tql2` scheme).
///
/// `z`, when given, is an `n×n` row-major matrix whose columns are rotated
/// alongside.
fn tql(d: &mut [f64], e: &mut [f64], mut z: Option<&mut Vec<f64>>) {
    let n = d.len();
    if n == 0 {
        return;
    }
    let eps = f64::EPSILON;
    let mut f = 0.0;
    let mut tst1: f64 = 0.0;
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n - 1 {
            if e[m].abs() <= eps * tst1 {
                break;
            }
            m += 1;
        }
        if m > l {
            let mut iter = 0;
            loop {
                iter += 1;
                if iter > 200 {
                    break;
                }
                let mut g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for di in d.iter_mut().skip(l + 2) {
                    *di -= h;
                }
                f += h;

                p = d[m];
                let mut c = 1.0;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0;
                let mut s2 = 0.0;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    g = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    if let Some(z) = z.as_deref_mut() {
                        for k in 0..n {
                            let zk1 = z[k * n + i + 1];
                            let zk = z[k * n + i];
                            z[k * n + i + 1] = s * zk + c * zk1;
                            z[k * n + i] = c * zk - s * zk1;
                        }
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }
}
