//! One-sided (Hestenes) Jacobi SVD.
//!
//! Small singular values come out with absolute accuracy on the order of
//! `ε·‖A‖`, which is what rank and null-space decisions need: squaring the
//! matrix would push a `1e-10` singular-value cutoff below round-off.

use crate::error::Result;
use crate::matrix::{ComplexMatrix, C64, ZERO};

/// Thin SVD `A = U diag(s) V*` with `V` square (`cols × cols`).
///
/// Singular values are sorted descending. Columns of `U` belonging to zero
/// singular values are left as zero vectors.
#[derive(Debug, Clone)]
pub struct Svd {
    pub u: ComplexMatrix,
    pub s: Vec<f64>,
    pub v: ComplexMatrix,
}

impl Svd {
    pub fn max_singular(&self) -> f64 {
        self.s.first().copied().unwrap_or(0.0)
    }

    /// Number of singular values above `rel_cutoff · σ_max`.
    pub fn rank(&self, rel_cutoff: f64) -> usize {
        let thr = rel_cutoff * self.max_singular();
        self.s.iter().filter(|&&x| x > thr).count()
    }

    /// Orthonormal basis (as vectors) of the null space at the given cutoff.
    pub fn null_space(&self, rel_cutoff: f64) -> Vec<Vec<C64>> {
        let r = self.rank(rel_cutoff);
        (r..self.s.len()).map(|k| self.v.column(k)).collect()
    }

    /// Null space counting singular values at or below the absolute `threshold`.
    pub fn null_space_below(&self, threshold: f64) -> Vec<Vec<C64>> {
        (0..self.s.len()).filter(|&k| self.s[k] <= threshold).map(|k| self.v.column(k)).collect()
    }

    /// Minimum-norm least-squares solution of `A x = b`.
    pub fn solve_least_squares(&self, b: &[C64], rel_cutoff: f64) -> Vec<C64> {
        let r = self.rank(rel_cutoff);
        let n = self.v.rows();
        let mut x = vec![ZERO; n];
        for k in 0..r {
            let uk = self.u.column(k);
            let coef: C64 = uk.iter().zip(b).map(|(u, bi)| u.conj() * bi).sum::<C64>() / self.s[k];
            for i in 0..n {
                x[i] += coef * self.v[(i, k)];
            }
        }
        x
    }
}

pub fn svd(a: &ComplexMatrix) -> Result<Svd> {
    let (m, n) = a.shape();
    // Work on columns.
    let mut cols: Vec<Vec<C64>> = a.columns();
    let mut v = ComplexMatrix::identity(n);
    let eps = 1e-15;

    for _sweep in 0..80 {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let alpha: f64 = cols[p].iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = cols[q].iter().map(|z| z.norm_sqr()).sum();
                let gamma: C64 = cols[p].iter().zip(&cols[q]).map(|(x, y)| x.conj() * y).sum();
                let g = gamma.norm();
                if g <= eps * (alpha * beta).sqrt() || g < 1e-300 {
                    continue;
                }
                rotated = true;
                let phase = gamma / g;
                let tau = (beta - alpha) / (2.0 * g);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let gpp = C64::new(c, 0.0);
                let gpq = C64::new(s, 0.0);
                let gqp = -phase.conj() * s;
                let gqq = phase.conj() * c;
                for k in 0..m {
                    let xp = cols[p][k];
                    let xq = cols[q][k];
                    cols[p][k] = xp * gpp + xq * gqp;
                    cols[q][k] = xp * gpq + xq * gqq;
                }
                for k in 0..n {
                    let vp = v[(k, p)];
                    let vq = v[(k, q)];
                    v[(k, p)] = vp * gpp + vq * gqp;
                    v[(k, q)] = vp * gpq + vq * gqq;
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let norms: Vec<f64> = cols.iter().map(|c| c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| norms[j].total_cmp(&norms[i]));
    let s: Vec<f64> = order.iter().map(|&i| norms[i]).collect();
    let smax = s.first().copied().unwrap_or(0.0);
    let u = ComplexMatrix::from_fn(m, n, |i, k| {
        let src = order[k];
        if norms[src] > 1e-300 && norms[src] > 1e-300 * smax {
            cols[src][i] / norms[src]
        } else {
            ZERO
        }
    });
    let v = ComplexMatrix::from_fn(n, n, |i, k| v[(i, order[k])]);
    Ok(Svd { u, s, v })
}

/// Numerical rank with singular-value cutoff `rel_cutoff · σ_max`.
pub fn rank(a: &ComplexMatrix, rel_cutoff: f64) -> Result<usize> {
    Ok(svd(a)?.rank(rel_cutoff))
}

/// Orthonormal null-space basis with singular-value cutoff `rel_cutoff · σ_max`.
pub fn null_space(a: &ComplexMatrix, rel_cutoff: f64) -> Result<Vec<Vec<C64>>> {
    Ok(svd(a)?.null_space(rel_cutoff))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::random_matrix;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn reconstructs_tall_and_wide() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for (m, n) in [(6, 4), (4, 6), (5, 5)] {
            let a = random_matrix(&mut rng, m, n);
            let d = svd(&a).unwrap();
            let sigma = ComplexMatrix::diag_real(&d.s);
            let us = &d.u * &sigma;
            let rec = &us * &d.v.adjoint();
            assert!(rec.max_dist(&a) < 1e-12, "{m}x{n}");
            assert_eq!(d.rank(1e-10), m.min(n));
        }
    }

    #[test]
    fn null_space_of_rank_one() {
        let a = ComplexMatrix::from_real_rows(&[&[1.0, 2.0, 3.0], &[2.0, 4.0, 6.0]]);
        let ns = null_space(&a, 1e-10).unwrap();
        assert_eq!(ns.len(), 2);
        for v in ns {
            let av = a.apply(&v).unwrap();
            assert!(crate::matrix::norm(&av) < 1e-12);
        }
    }

    #[test]
    fn least_squares_matches_exact_solution() {
        let a = ComplexMatrix::from_real_rows(&[&[2.0, 1.0], &[1.0, 3.0], &[0.0, 1.0]]);
        let x = [C64::new(1.0, 1.0), C64::new(-2.0, 0.5)];
        let b = a.apply(&x).unwrap();
        let got = svd(&a).unwrap().solve_least_squares(&b, 1e-12);
        assert!(crate::matrix::sup_dist(&got, &x) < 1e-12);
    }
}
