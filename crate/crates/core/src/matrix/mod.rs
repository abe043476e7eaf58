//! Dense complex matrices.
//!
//! [`ComplexMatrix`] is the carrier for every object in the crate: operators,
//! density matrices, representations, Choi matrices. Storage is row-major and
//! every operation returns a fresh value; nothing mutates through a shared
//! reference.

mod gram_schmidt;
mod lattice;
mod serde_impl;

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub use gram_schmidt::{gram_schmidt, InnerProduct};
pub use lattice::{join, leq, meet, sum_is_projection};

/// Complex scalar used throughout the crate.
pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// Absolute/relative tolerance pair used by every predicate.
///
/// A residual `r` measured against a quantity of size `scale` is accepted when
/// `r <= abs_tol + rel_tol * scale`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Tolerance {
    pub abs_tol: f64,
    pub rel_tol: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self { abs_tol: 1e-9, rel_tol: 1e-9 }
    }
}

impl Tolerance {
    pub fn new(abs_tol: f64, rel_tol: f64) -> Result<Self> {
        if !(abs_tol >= 0.0 && rel_tol >= 0.0) {
            return Err(Error::InvalidArgument(format!(
                "tolerances must be non-negative, got ({abs_tol}, {rel_tol})"
            )));
        }
        Ok(Self { abs_tol, rel_tol })
    }

    /// Purely absolute tolerance.
    pub fn absolute(abs_tol: f64) -> Self {
        Self { abs_tol, rel_tol: 0.0 }
    }

    pub fn bound(&self, scale: f64) -> f64 {
        self.abs_tol + self.rel_tol * scale
    }

    pub fn accepts(&self, residual: f64, scale: f64) -> bool {
        residual <= self.bound(scale)
    }

    /// The same tolerance multiplied by `factor` (e.g. the `10·tol` bounds).
    pub fn scaled(&self, factor: f64) -> Self {
        Self { abs_tol: self.abs_tol * factor, rel_tol: self.rel_tol * factor }
    }
}

/// Dense complex matrix in row-major order.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    pub fn from_vec(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { ONE } else { ZERO })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Builds a matrix from real row slices. Panics on ragged input.
    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Self::from_fn(r, c, |i, j| C64::new(rows[i][j], 0.0))
    }

    /// Builds a matrix from complex row slices. Panics on ragged input.
    pub fn from_rows(rows: &[&[C64]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Self::from_fn(r, c, |i, j| rows[i][j])
    }

    pub fn diag(entries: &[C64]) -> Self {
        let n = entries.len();
        Self::from_fn(n, n, |i, j| if i == j { entries[i] } else { ZERO })
    }

    pub fn diag_real(entries: &[f64]) -> Self {
        let n = entries.len();
        Self::from_fn(n, n, |i, j| if i == j { C64::new(entries[i], 0.0) } else { ZERO })
    }

    /// Matrix unit `e_ij` of size `n`.
    pub fn unit(n: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zeros(n, n);
        m[(i, j)] = ONE;
        m
    }

    /// Column vector.
    pub fn column_vector(v: &[C64]) -> Self {
        Self { rows: v.len(), cols: 1, data: v.to_vec() }
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[Vec<C64>]) -> Result<Self> {
        let ncols = cols.len();
        let nrows = cols.first().map_or(0, Vec::len);
        if cols.iter().any(|c| c.len() != nrows) {
            return Err(Error::DimMismatch("columns of unequal length".into()));
        }
        Ok(Self::from_fn(nrows, ncols, |i, j| cols[j][i]))
    }

    /// Rank-one operator `|x⟩⟨y|`.
    pub fn outer(x: &[C64], y: &[C64]) -> Self {
        Self::from_fn(x.len(), y.len(), |i, j| x[i] * y[j].conj())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    pub fn into_data(self) -> Vec<C64> {
        self.data
    }

    pub fn ensure_square(&self) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(Error::NonSquare { rows: self.rows, cols: self.cols })
        }
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn row(&self, i: usize) -> &[C64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn columns(&self) -> Vec<Vec<C64>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn diagonal(&self) -> Vec<C64> {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).collect()
    }

    /// Conjugate transpose: `(A*)_ij = conj(A_ji)`.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn conj(&self) -> Self {
        self.map(|z| z.conj())
    }

    pub fn map(&self, f: impl Fn(C64) -> C64) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&z| f(z)).collect() }
    }

    pub fn scale(&self, s: C64) -> Self {
        self.map(|z| z * s)
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.map(|z| z * s)
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        Ok(self.zip_with(other, |a, b| a + b))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        Ok(self.zip_with(other, |a, b| a - b))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            let out_row = &mut out.data[i * other.cols..(i + 1) * other.cols];
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == ZERO {
                    continue;
                }
                let b_row = &other.data[k * other.cols..(k + 1) * other.cols];
                for (o, &b) in out_row.iter_mut().zip(b_row) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn apply(&self, v: &[C64]) -> Result<Vec<C64>> {
        if v.len() != self.cols {
            return Err(Error::DimMismatch(format!(
                "vector of length {} for {}x{} matrix",
                v.len(),
                self.rows,
                self.cols
            )));
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(&a, &b)| a * b).sum())
            .collect())
    }

    fn zip_with(&self, other: &Self, f: impl Fn(C64, C64) -> C64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect(),
        }
    }

    fn check_same_shape(&self, other: &Self) -> Result<()> {
        if self.shape() != other.shape() {
            return Err(Error::DimMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    /// Kronecker product; row index of `A⊗B` is `i_A * rows(B) + i_B`.
    pub fn kron(&self, other: &Self) -> Self {
        let (r2, c2) = other.shape();
        Self::from_fn(self.rows * r2, self.cols * c2, |i, j| {
            self[(i / r2, j / c2)] * other[(i % r2, j % c2)]
        })
    }

    /// Block-diagonal direct sum `A ⊕ B`.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let mut out = Self::zeros(self.rows + other.rows, self.cols + other.cols);
        out.set_block(0, 0, self);
        out.set_block(self.rows, self.cols, other);
        out
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |i, j| self[(r0 + i, c0 + j)])
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, b: &Self) {
        for i in 0..b.rows {
            for j in 0..b.cols {
                self[(r0 + i, c0 + j)] = b[(i, j)];
            }
        }
    }

    pub fn trace(&self) -> Result<C64> {
        let n = self.ensure_square()?;
        Ok((0..n).map(|i| self[(i, i)]).sum())
    }

    /// Largest entry modulus.
    pub fn max_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `‖A − B‖_max`; shapes must agree.
    pub fn max_dist(&self, other: &Self) -> f64 {
        assert_eq!(self.shape(), other.shape(), "max_dist shape mismatch");
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    /// `AB − BA`.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.checked_mul(other)?.checked_sub(&other.checked_mul(self)?)
    }

    /// Hermitian part `(A + A*)/2`.
    pub fn real_part(&self) -> Self {
        (self + &self.adjoint()).scale_real(0.5)
    }

    /// `(A − A*)/(2i)`, Hermitian.
    pub fn imag_part(&self) -> Self {
        (self - &self.adjoint()).scale(C64::new(0.0, -0.5))
    }

    pub fn hermitian_residual(&self) -> Result<f64> {
        self.ensure_square()?;
        Ok(self.max_dist(&self.adjoint()))
    }

    pub fn is_hermitian(&self, tol: Tolerance) -> Result<bool> {
        let r = self.hermitian_residual()?;
        Ok(tol.accepts(r, self.max_norm()))
    }

    pub fn is_unitary(&self, tol: Tolerance) -> Result<bool> {
        let n = self.ensure_square()?;
        let id = Self::identity(n);
        let r = (&self.adjoint() * self).max_dist(&id).max((self * &self.adjoint()).max_dist(&id));
        Ok(tol.accepts(r, 1.0))
    }

    /// Self-adjoint idempotent: `A = A* = A²`.
    pub fn is_projection(&self, tol: Tolerance) -> Result<bool> {
        Ok(tol.accepts(self.projection_residual()?, 1.0))
    }

    pub fn projection_residual(&self) -> Result<f64> {
        let h = self.hermitian_residual()?;
        Ok(h.max((self * self).max_dist(self)))
    }

    /// Integer power by repeated squaring.
    pub fn pow(&self, mut e: u32) -> Result<Self> {
        let n = self.ensure_square()?;
        let mut base = self.clone();
        let mut acc = Self::identity(n);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        Ok(acc)
    }

    /// Row-major vectorization.
    pub fn vec(&self) -> Vec<C64> {
        self.data.clone()
    }

    pub fn from_vec_square(v: &[C64]) -> Result<Self> {
        let n = (v.len() as f64).sqrt().round() as usize;
        Self::from_vec(n, n, v.to_vec())
    }
}

/// `tr(A)`.
pub fn trace(a: &ComplexMatrix) -> Result<C64> {
    a.trace()
}

/// `tr(Aρ)`: the value of the normal state with density `ρ` at `A`.
pub fn trace_pairing(a: &ComplexMatrix, rho: &ComplexMatrix) -> Result<C64> {
    let n = a.ensure_square()?;
    rho.ensure_square()?;
    if rho.rows() != n {
        return Err(Error::DimMismatch(format!("operator dim {n} vs density dim {}", rho.rows())));
    }
    // tr(Aρ) = Σ_ij A_ij ρ_ji, without forming the product.
    let mut s = ZERO;
    for i in 0..n {
        for j in 0..n {
            s += a[(i, j)] * rho[(j, i)];
        }
    }
    Ok(s)
}

/// `⟨x, y⟩`, conjugate-linear in the first slot.
pub fn inner(x: &[C64], y: &[C64]) -> C64 {
    assert_eq!(x.len(), y.len(), "inner product length mismatch");
    x.iter().zip(y).map(|(a, b)| a.conj() * b).sum()
}

pub fn norm(x: &[C64]) -> f64 {
    x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn normalized(x: &[C64]) -> Vec<C64> {
    let n = norm(x);
    x.iter().map(|z| z / n).collect()
}

pub fn axpy(a: C64, x: &[C64], y: &[C64]) -> Vec<C64> {
    x.iter().zip(y).map(|(&xi, &yi)| a * xi + yi).collect()
}

pub fn sup_dist(x: &[C64], y: &[C64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
}

pub fn real_vector(x: &[f64]) -> Vec<C64> {
    x.iter().map(|&r| C64::new(r, 0.0)).collect()
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

// Operator impls panic on shape mismatch; the `checked_*` methods are the
// fallible versions.
impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.checked_add(rhs).expect("matrix add")
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.checked_sub(rhs).expect("matrix sub")
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.checked_mul(rhs).expect("matrix mul")
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        self.map(|z| -z)
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for z in self.row(i) {
                write!(f, "{:>10.4}{:+.4}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Pauli matrices, handy in tests and examples.
pub mod pauli {
    use super::{ComplexMatrix, C64};

    pub fn x() -> ComplexMatrix {
        ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]])
    }

    pub fn y() -> ComplexMatrix {
        let i = C64::new(0.0, 1.0);
        let z = C64::new(0.0, 0.0);
        ComplexMatrix::from_rows(&[&[z, -i], &[i, z]])
    }

    pub fn z() -> ComplexMatrix {
        ComplexMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, -1.0]])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn adjoint_examples() {
        assert_eq!(ComplexMatrix::identity(2).adjoint(), ComplexMatrix::identity(2));
        let n = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]);
        assert_eq!(n.adjoint(), ComplexMatrix::from_real_rows(&[&[0.0, 0.0], &[1.0, 0.0]]));
        let a = ComplexMatrix::from_rows(&[&[ZERO, I], &[ZERO, ZERO]]);
        assert_eq!(a.adjoint(), ComplexMatrix::from_rows(&[&[ZERO, ZERO], &[-I, ZERO]]));
    }

    #[test]
    fn predicates_on_pauli_and_projector() {
        let tol = Tolerance::default();
        let x = pauli::x();
        assert!(x.is_hermitian(tol).unwrap());
        assert!(x.is_unitary(tol).unwrap());
        assert!(!x.is_projection(tol).unwrap());
        let p = ComplexMatrix::from_real_rows(&[&[0.5, 0.5], &[0.5, 0.5]]);
        assert!(p.is_projection(tol).unwrap());
    }

    #[test]
    fn phase_unitary_from_projection() {
        // U(z) = zP + (I − P) is unitary exactly when |z| = 1.
        let tol = Tolerance::default();
        let p = ComplexMatrix::diag_real(&[1.0, 0.0]);
        let id = ComplexMatrix::identity(2);
        let u = |z: C64| &p.scale(z) + &(&id - &p);
        assert!(u(I).is_unitary(tol).unwrap());
        assert!(!u(c(2.0, 0.0)).is_unitary(tol).unwrap());
    }

    #[test]
    fn non_square_predicates_error() {
        let a = ComplexMatrix::zeros(2, 3);
        assert_eq!(
            a.is_hermitian(Tolerance::default()),
            Err(Error::NonSquare { rows: 2, cols: 3 })
        );
        assert!(a.trace().is_err());
    }

    #[test]
    fn trace_examples() {
        assert_eq!(ComplexMatrix::identity(5).trace().unwrap(), c(5.0, 0.0));
        let e1 = vec![ONE, ZERO];
        let e2 = vec![ZERO, ONE];
        // tr(|ξ⟩⟨η|) = ⟨η, ξ⟩
        assert_eq!(ComplexMatrix::outer(&e1, &e2).trace().unwrap(), ZERO);
        assert_eq!(ComplexMatrix::outer(&e1, &e1).trace().unwrap(), ONE);
        let rho = ComplexMatrix::diag_real(&[0.75, 0.25]);
        assert_eq!(trace_pairing(&pauli::z(), &rho).unwrap(), c(0.5, 0.0));
        assert!(trace_pairing(&pauli::z(), &ComplexMatrix::identity(3)).is_err());
    }

    #[test]
    fn kron_index_convention() {
        let a = ComplexMatrix::from_real_rows(&[&[1.0, 2.0], &[3.0, 4.0]]);
        let id = ComplexMatrix::identity(2);
        let k = a.kron(&id);
        assert_eq!(k[(2, 0)], c(3.0, 0.0));
        assert_eq!(k[(3, 1)], c(3.0, 0.0));
        assert_eq!(k[(2, 1)], ZERO);
    }

    #[test]
    fn from_vec_rejects_bad_length() {
        assert!(ComplexMatrix::from_vec(2, 2, vec![ONE; 3]).is_err());
    }
}
