use super::{ComplexMatrix, C64};
use crate::error::{Error, Result};
use crate::linalg::svd;

/// Inner product used by [`gram_schmidt`].
#[derive(Debug, Clone, PartialEq)]
pub enum InnerProduct {
    /// `⟨u, v⟩ = Σ conj(u_k) v_k`
    Standard,
    /// `⟨u, v⟩ = Σ w_k conj(u_k) v_k` with positive weights, e.g. quadrature
    /// weights times a density.
    Weighted(Vec<f64>),
}

impl InnerProduct {
    pub fn inner(&self, u: &[C64], v: &[C64]) -> C64 {
        match self {
            Self::Standard => super::inner(u, v),
            Self::Weighted(w) => u.iter().zip(v).zip(w).map(|((a, b), &wk)| a.conj() * b * wk).sum(),
        }
    }

    pub fn norm(&self, u: &[C64]) -> f64 {
        self.inner(u, u).re.max(0.0).sqrt()
    }

    fn check(&self, len: usize) -> Result<()> {
        if let Self::Weighted(w) = self {
            if w.len() != len {
                return Err(Error::DimMismatch(format!("{} weights for vectors of length {len}", w.len())));
            }
            if w.iter().any(|&x| !(x > 0.0)) {
                return Err(Error::InvalidArgument("weights must be positive".into()));
            }
        }
        Ok(())
    }
}

/// Orthonormalizes `vectors` in order (modified Gram-Schmidt with one
/// re-orthogonalization pass).
///
/// Output `k` lies in the span of inputs `0..=k`. Fails with
/// [`Error::DependentInput`] when the Gram matrix is rank deficient at a
/// `1e-10` relative singular-value cutoff (after normalizing each input).
pub fn gram_schmidt(vectors: &[Vec<C64>], ip: &InnerProduct) -> Result<Vec<Vec<C64>>> {
    let Some(len) = vectors.first().map(Vec::len) else {
        return Ok(Vec::new());
    };
    if vectors.iter().any(|v| v.len() != len) {
        return Err(Error::DimMismatch("vectors of unequal length".into()));
    }
    ip.check(len)?;

    // Rank test on W^{1/2}·[v_1/‖v_1‖ ...], whose Gram matrix is the one of the inputs.
    let sqrt_w: Vec<f64> = match ip {
        InnerProduct::Standard => vec![1.0; len],
        InnerProduct::Weighted(w) => w.iter().map(|x| x.sqrt()).collect(),
    };
    let cols: Vec<Vec<C64>> = vectors
        .iter()
        .map(|v| {
            let n = ip.norm(v);
            let n = if n > 0.0 { n } else { 1.0 };
            v.iter().zip(&sqrt_w).map(|(z, s)| z * *s / n).collect()
        })
        .collect();
    let rank = svd(&ComplexMatrix::from_columns(&cols)?)?.rank(1e-10);
    if rank < vectors.len() || vectors.iter().any(|v| ip.norm(v) == 0.0) {
        return Err(Error::DependentInput { rank, count: vectors.len() });
    }

    let mut out: Vec<Vec<C64>> = Vec::with_capacity(vectors.len());
    for v in vectors {
        let mut w = v.clone();
        for _pass in 0..2 {
            for u in &out {
                let c = ip.inner(u, &w);
                for (wk, uk) in w.iter_mut().zip(u) {
                    *wk -= c * uk;
                }
            }
        }
        let n = ip.norm(&w);
        out.push(w.into_iter().map(|z| z / n).collect());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{ONE, ZERO};

    fn re(v: &[f64]) -> Vec<C64> {
        crate::matrix::real_vector(v)
    }

    #[test]
    fn one_elimination_step() {
        let out = gram_schmidt(&[vec![ONE, ZERO], vec![ONE, ONE]], &InnerProduct::Standard).unwrap();
        assert!(crate::matrix::sup_dist(&out[0], &[ONE, ZERO]) < 1e-15);
        assert!(crate::matrix::sup_dist(&out[1], &[ZERO, ONE]) < 1e-15);
    }

    #[test]
    fn dependent_input_rejected() {
        let r = gram_schmidt(&[re(&[1.0, 2.0]), re(&[2.0, 4.0])], &InnerProduct::Standard);
        assert!(matches!(r, Err(Error::DependentInput { rank: 1, count: 2 })));
    }

    #[test]
    fn shifted_legendre_on_unit_interval() {
        // Trapezoid weights on [0,1]; oracle: ∫1 = 1, ∫x = 1/2, ∫x² = 1/3 give
        // the orthonormal pair {1, √12 (x − 1/2)}.
        let n = 2001;
        let h = 1.0 / (n - 1) as f64;
        let xs: Vec<f64> = (0..n).map(|k| k as f64 * h).collect();
        let mut w = vec![h; n];
        w[0] = h / 2.0;
        w[n - 1] = h / 2.0;
        let ones = re(&vec![1.0; n]);
        let lin = re(&xs);
        let out = gram_schmidt(&[ones, lin], &InnerProduct::Weighted(w)).unwrap();
        for (k, &x) in xs.iter().enumerate() {
            assert!((out[0][k].re - 1.0).abs() < 1e-12);
            assert!((out[1][k].re - 12f64.sqrt() * (x - 0.5)).abs() < 1e-6);
        }
    }

    #[test]
    fn weight_length_checked() {
        let r = gram_schmidt(&[re(&[1.0, 0.0])], &InnerProduct::Weighted(vec![1.0]));
        assert!(matches!(r, Err(Error::DimMismatch(_))));
    }
}
