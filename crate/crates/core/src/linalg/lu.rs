use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, C64};

/// LU factorization with partial pivoting, `PA = LU`, stored compactly.
#[derive(Debug, Clone)]
pub struct Lu {
    lu: ComplexMatrix,
    perm: Vec<usize>,
}

impl Lu {
    pub fn new(a: &ComplexMatrix) -> Result<Self> {
        let n = a.ensure_square()?;
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let scale = a.max_norm().max(f64::MIN_POSITIVE);
        for k in 0..n {
            let (piv, pmax) = (k..n)
                .map(|i| (i, lu[(i, k)].norm()))
                .max_by(|x, y| x.1.total_cmp(&y.1))
                .expect("non-empty");
            if pmax <= 1e-14 * scale {
                return Err(Error::Singular);
            }
            if piv != k {
                for j in 0..n {
                    let t = lu[(k, j)];
                    lu[(k, j)] = lu[(piv, j)];
                    lu[(piv, j)] = t;
                }
                perm.swap(k, piv);
            }
            let d = lu[(k, k)];
            for i in (k + 1)..n {
                let f = lu[(i, k)] / d;
                lu[(i, k)] = f;
                if f == C64::new(0.0, 0.0) {
                    continue;
                }
                for j in (k + 1)..n {
                    let u = lu[(k, j)];
                    lu[(i, j)] -= f * u;
                }
            }
        }
        Ok(Self { lu, perm })
    }

    pub fn solve(&self, b: &[C64]) -> Result<Vec<C64>> {
        let n = self.lu.rows();
        if b.len() != n {
            return Err(Error::DimMismatch(format!("rhs length {} for dim {n}", b.len())));
        }
        let mut x: Vec<C64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            for k in 0..i {
                let l = self.lu[(i, k)];
                x[i] = x[i] - l * x[k];
            }
        }
        for i in (0..n).rev() {
            for k in (i + 1)..n {
                let u = self.lu[(i, k)];
                x[i] = x[i] - u * x[k];
            }
            x[i] /= self.lu[(i, i)];
        }
        Ok(x)
    }

    pub fn solve_matrix(&self, b: &ComplexMatrix) -> Result<ComplexMatrix> {
        let cols = b.columns().iter().map(|c| self.solve(c)).collect::<Result<Vec<_>>>()?;
        ComplexMatrix::from_columns(&cols)
    }
}

pub fn solve(a: &ComplexMatrix, b: &[C64]) -> Result<Vec<C64>> {
    Lu::new(a)?.solve(b)
}

pub fn inverse(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = a.ensure_square()?;
    Lu::new(a)?.solve_matrix(&ComplexMatrix::identity(n))
}
