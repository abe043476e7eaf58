//! Completely positive maps `φ: M_n → M_m` in Kraus, Choi and superoperator
//! form, with the minimal Stinespring dilation.
//!
//! Conventions:
//! - Kraus: `φ(A) = Σ K A K*` with each `K` of shape `m×n`.
//! - Choi: `C = Σ_ij φ(e_ij) ⊗ e_ij`, so `C[(a,i),(b,j)] = φ(e_ij)[a,b]` with
//!   row index `a·n + i`.
//! - Superoperator: `vec(φ(X)) = S vec(X)` for row-major `vec`, so
//!   `S[(a,b),(i,j)] = φ(e_ij)[a,b]`.
//! - Stinespring: `V: ℂ^m → ℂ^n ⊗ ℂ^r`, `π(A) = A ⊗ I_r`, and
//!   `V[(a,i),b] = conj(K_i[b,a])`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{eigh, svd};
use crate::matrix::{ComplexMatrix, Tolerance, C64};

/// Relative eigenvalue cutoff for the Choi rank.
pub const CHOI_RANK_CUTOFF: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub enum MapForm {
    Kraus(Vec<ComplexMatrix>),
    Choi(ComplexMatrix),
    Super(ComplexMatrix),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MapJson", into = "MapJson")]
pub struct CPMap {
    in_dim: usize,
    out_dim: usize,
    form: MapForm,
}

#[derive(Serialize, Deserialize)]
struct MapJson {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    in_dim: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    out_dim: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    kraus: Option<Vec<ComplexMatrix>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    choi: Option<ComplexMatrix>,
    #[serde(rename = "super", skip_serializing_if = "Option::is_none", default)]
    superop: Option<ComplexMatrix>,
}

impl TryFrom<MapJson> for CPMap {
    type Error = Error;
    fn try_from(j: MapJson) -> Result<Self> {
        match (j.kraus, j.choi, j.superop) {
            (Some(k), None, None) => {
                let map = CPMap::from_kraus(k)?;
                if j.in_dim.is_some_and(|n| n != map.in_dim) || j.out_dim.is_some_and(|m| m != map.out_dim) {
                    return Err(Error::DimMismatch("declared dimensions disagree with the Kraus operators".into()));
                }
                Ok(map)
            }
            (None, Some(c), None) => {
                let n = match j.in_dim {
                    Some(n) => n,
                    None => square_root(c.rows())?,
                };
                let map = CPMap::from_choi(c, n)?;
                if j.out_dim.is_some_and(|m| m != map.out_dim) {
                    return Err(Error::DimMismatch("declared out_dim disagrees with the Choi matrix".into()));
                }
                Ok(map)
            }
            (None, None, Some(s)) => {
                let n = j.in_dim.map_or_else(|| square_root(s.cols()), Ok)?;
                let m = j.out_dim.map_or_else(|| square_root(s.rows()), Ok)?;
                CPMap::from_super(s, n, m)
            }
            _ => Err(Error::InvalidArgument("map needs exactly one of kraus, choi, super".into())),
        }
    }
}

impl From<CPMap> for MapJson {
    fn from(m: CPMap) -> Self {
        let (kraus, choi, superop) = match m.form {
            MapForm::Kraus(k) => (Some(k), None, None),
            MapForm::Choi(c) => (None, Some(c), None),
            MapForm::Super(s) => (None, None, Some(s)),
        };
        MapJson { in_dim: Some(m.in_dim), out_dim: Some(m.out_dim), kraus, choi, superop }
    }
}

fn square_root(len: usize) -> Result<usize> {
    let r = (len as f64).sqrt().round() as usize;
    if r * r != len {
        return Err(Error::DimMismatch(format!("{len} is not a square; give in_dim explicitly")));
    }
    Ok(r)
}

impl CPMap {
    pub fn from_kraus(ops: Vec<ComplexMatrix>) -> Result<Self> {
        let first = ops.first().ok_or_else(|| Error::InvalidArgument("empty Kraus family".into()))?;
        let (m, n) = first.shape();
        if ops.iter().any(|k| k.shape() != (m, n)) {
            return Err(Error::DimMismatch("Kraus operators of unequal shape".into()));
        }
        Ok(CPMap { in_dim: n, out_dim: m, form: MapForm::Kraus(ops) })
    }

    /// `choi` is `(m·n)×(m·n)`; `in_dim = n`.
    pub fn from_choi(choi: ComplexMatrix, in_dim: usize) -> Result<Self> {
        let size = choi.ensure_square()?;
        if in_dim == 0 || size % in_dim != 0 {
            return Err(Error::DimMismatch(format!("Choi size {size} not divisible by in_dim {in_dim}")));
        }
        Ok(CPMap { in_dim, out_dim: size / in_dim, form: MapForm::Choi(choi) })
    }

    pub fn from_super(s: ComplexMatrix, in_dim: usize, out_dim: usize) -> Result<Self> {
        if s.shape() != (out_dim * out_dim, in_dim * in_dim) {
            return Err(Error::DimMismatch(format!("superoperator {:?} for {in_dim} -> {out_dim}", s.shape())));
        }
        Ok(CPMap { in_dim, out_dim, form: MapForm::Super(s) })
    }

    pub fn identity(n: usize) -> Self {
        CPMap { in_dim: n, out_dim: n, form: MapForm::Kraus(vec![ComplexMatrix::identity(n)]) }
    }

    /// `A ↦ Aᵀ`: positive but not completely positive.
    pub fn transpose(n: usize) -> Self {
        let mut s = ComplexMatrix::zeros(n * n, n * n);
        for i in 0..n {
            for j in 0..n {
                s[(j * n + i, i * n + j)] = C64::new(1.0, 0.0);
            }
        }
        CPMap { in_dim: n, out_dim: n, form: MapForm::Super(s) }
    }

    /// `A ↦ diag(A)`.
    pub fn dephasing(n: usize) -> Self {
        let ops = (0..n).map(|i| ComplexMatrix::unit(n, i, i)).collect();
        CPMap { in_dim: n, out_dim: n, form: MapForm::Kraus(ops) }
    }

    /// `A ↦ tr(A)·I/n`.
    pub fn depolarizing(n: usize) -> Self {
        let choi = ComplexMatrix::identity(n * n).scale_real(1.0 / n as f64);
        CPMap { in_dim: n, out_dim: n, form: MapForm::Choi(choi) }
    }

    pub fn in_dim(&self) -> usize {
        self.in_dim
    }

    pub fn out_dim(&self) -> usize {
        self.out_dim
    }

    pub fn form(&self) -> &MapForm {
        &self.form
    }

    /// `φ(e_ij)`.
    fn image_of_unit(&self, i: usize, j: usize) -> ComplexMatrix {
        let (n, m) = (self.in_dim, self.out_dim);
        match &self.form {
            MapForm::Kraus(ops) => ComplexMatrix::from_fn(m, m, |a, b| ops.iter().map(|k| k[(a, i)] * k[(b, j)].conj()).sum()),
            MapForm::Choi(c) => ComplexMatrix::from_fn(m, m, |a, b| c[(a * n + i, b * n + j)]),
            MapForm::Super(s) => ComplexMatrix::from_fn(m, m, |a, b| s[(a * m + b, i * n + j)]),
        }
    }

    pub fn apply(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        let (n, m) = (self.in_dim, self.out_dim);
        if x.shape() != (n, n) {
            return Err(Error::DimMismatch(format!("input {:?} for map on M_{n}", x.shape())));
        }
        Ok(match &self.form {
            MapForm::Kraus(ops) => ops.iter().fold(ComplexMatrix::zeros(m, m), |acc, k| &acc + &(&(k * x) * &k.adjoint())),
            MapForm::Super(s) => ComplexMatrix::from_vec(m, m, s.apply(&x.vec())?)?,
            MapForm::Choi(_) => {
                let mut out = ComplexMatrix::zeros(m, m);
                for i in 0..n {
                    for j in 0..n {
                        if x[(i, j)] != C64::default() {
                            out = &out + &self.image_of_unit(i, j).scale(x[(i, j)]);
                        }
                    }
                }
                out
            }
        })
    }

    pub fn to_super(&self) -> ComplexMatrix {
        if let MapForm::Super(s) = &self.form {
            return s.clone();
        }
        let (n, m) = (self.in_dim, self.out_dim);
        let mut s = ComplexMatrix::zeros(m * m, n * n);
        for i in 0..n {
            for j in 0..n {
                let img = self.image_of_unit(i, j);
                for a in 0..m {
                    for b in 0..m {
                        s[(a * m + b, i * n + j)] = img[(a, b)];
                    }
                }
            }
        }
        s
    }

    /// `‖φ(I_n) − I_m‖_max`.
    pub fn unital_residual(&self) -> f64 {
        self.apply(&ComplexMatrix::identity(self.in_dim))
            .map(|p| p.max_dist(&ComplexMatrix::identity(self.out_dim)))
            .unwrap_or(f64::INFINITY)
    }

    /// `max_ij ‖φ(e_ij) − ψ(e_ij)‖_max`.
    pub fn distance(&self, other: &CPMap) -> Result<f64> {
        if (self.in_dim, self.out_dim) != (other.in_dim, other.out_dim) {
            return Err(Error::DimMismatch("maps between different matrix algebras".into()));
        }
        Ok(self.to_super().max_dist(&other.to_super()))
    }
}

/// `C = Σ_ij φ(e_ij) ⊗ e_ij`.
pub fn choi_of(map: &CPMap) -> ComplexMatrix {
    if let MapForm::Choi(c) = &map.form {
        return c.clone();
    }
    let (n, m) = (map.in_dim, map.out_dim);
    let mut c = ComplexMatrix::zeros(m * n, m * n);
    for i in 0..n {
        for j in 0..n {
            let img = map.image_of_unit(i, j);
            for a in 0..m {
                for b in 0..m {
                    c[(a * n + i, b * n + j)] = img[(a, b)];
                }
            }
        }
    }
    c
}

/// Smallest eigenvalue of the Hermitian part of the Choi matrix, or `None`
/// when the Choi matrix is not Hermitian within `tol`.
fn choi_min_eigenvalue(choi: &ComplexMatrix, tol: Tolerance) -> Result<Option<f64>> {
    let h = choi.hermitian_residual()?;
    if !tol.accepts(h, choi.max_norm()) {
        return Ok(None);
    }
    Ok(Some(crate::linalg::eigvalsh(&choi.real_part())?[0]))
}

/// Choi matrix Hermitian and PSD within `tol`.
pub fn is_completely_positive(map: &CPMap, tol: Tolerance) -> Result<bool> {
    let c = choi_of(map);
    Ok(choi_min_eigenvalue(&c, tol)?.is_some_and(|l| l >= -tol.bound(c.max_norm())))
}

/// Canonical Kraus family from a PSD Choi matrix: one operator per
/// eigenvalue above `1e-10·λ_max` (descending), scaled by `√λ`, with the
/// largest-magnitude entry made real positive.
pub fn kraus_from_choi(choi: &ComplexMatrix, in_dim: usize, tol: Tolerance) -> Result<Vec<ComplexMatrix>> {
    let size = choi.ensure_square()?;
    if in_dim == 0 || size % in_dim != 0 {
        return Err(Error::DimMismatch(format!("Choi size {size} not divisible by in_dim {in_dim}")));
    }
    let (n, m) = (in_dim, size / in_dim);
    let min = choi_min_eigenvalue(choi, tol)?.unwrap_or(f64::NEG_INFINITY);
    if min < -tol.bound(choi.max_norm()) {
        return Err(Error::NotCp { min_eigenvalue: min });
    }
    let e = eigh(&choi.real_part())?;
    let top = e.values.last().copied().unwrap_or(0.0);
    let mut ops = Vec::new();
    for k in (0..size).rev() {
        let mu = e.values[k];
        if mu <= CHOI_RANK_CUTOFF * top || mu <= 0.0 {
            break;
        }
        let v = e.vector(k);
        let (_, pivot) = v
            .iter()
            .enumerate()
            .fold((0.0, C64::new(1.0, 0.0)), |(best, z), (_, w)| if w.norm() > best + 1e-12 { (w.norm(), *w) } else { (best, z) });
        let phase = pivot.conj() / pivot.norm();
        ops.push(ComplexMatrix::from_fn(m, n, |a, i| v[a * n + i] * phase * mu.sqrt()));
    }
    Ok(ops)
}

/// Minimal Kraus family of a CP map.
pub fn to_kraus(map: &CPMap, tol: Tolerance) -> Result<Vec<ComplexMatrix>> {
    kraus_from_choi(&choi_of(map), map.in_dim, tol)
}

/// Eigenvector data certifying failure of complete positivity: with
/// `A_i = e_{0i}` and `v_i[a] = w[a·n + i]`,
/// `Σ_ij ⟨v_i, φ(A_i* A_j) v_j⟩ = λ_min(C) < 0`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CpWitness {
    pub operators: Vec<ComplexMatrix>,
    pub vectors: Vec<Vec<C64>>,
    pub value: f64,
}

pub fn cp_witness(map: &CPMap, tol: Tolerance) -> Result<Option<CpWitness>> {
    let c = choi_of(map);
    if choi_min_eigenvalue(&c, tol)?.is_none() {
        return Err(Error::NotHermitian { residual: c.hermitian_residual()? });
    }
    let e = eigh(&c.real_part())?;
    if e.values[0] >= -tol.bound(c.max_norm()) {
        return Ok(None);
    }
    let (n, m) = (map.in_dim, map.out_dim);
    let w = e.vector(0);
    let operators = (0..n).map(|i| ComplexMatrix::unit(n, 0, i)).collect();
    let vectors = (0..n).map(|i| (0..m).map(|a| w[a * n + i]).collect()).collect();
    Ok(Some(CpWitness { operators, vectors, value: e.values[0] }))
}

/// `Σ_ij ⟨v_i, φ(A_i* A_j) v_j⟩`.
pub fn block_form(map: &CPMap, ops: &[ComplexMatrix], vectors: &[Vec<C64>]) -> Result<C64> {
    let mut total = C64::default();
    for (ai, vi) in ops.iter().zip(vectors) {
        for (aj, vj) in ops.iter().zip(vectors) {
            let img = map.apply(&(&ai.adjoint() * aj))?;
            total += crate::matrix::inner(vi, &img.apply(vj)?);
        }
    }
    Ok(total)
}

/// `[φ(A_i* A_j)]_ij` as a block matrix.
pub fn block_matrix(map: &CPMap, ops: &[ComplexMatrix]) -> Result<ComplexMatrix> {
    let (k, m) = (ops.len(), map.out_dim);
    let mut out = ComplexMatrix::zeros(k * m, k * m);
    for (i, ai) in ops.iter().enumerate() {
        for (j, aj) in ops.iter().enumerate() {
            out.set_block(i * m, j * m, &map.apply(&(&ai.adjoint() * aj))?);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StinespringDilation {
    pub in_dim: usize,
    pub out_dim: usize,
    pub rank: usize,
    /// `(in_dim·rank) × out_dim` isometry.
    pub v: ComplexMatrix,
}

impl StinespringDilation {
    /// Dilation built from a Kraus family.
    pub fn from_kraus(ops: &[ComplexMatrix]) -> Result<Self> {
        let map = CPMap::from_kraus(ops.to_vec())?;
        let (n, m, r) = (map.in_dim, map.out_dim, ops.len());
        let v = ComplexMatrix::from_fn(n * r, m, |row, b| {
            let (a, i) = (row / r, row % r);
            ops[i][(b, a)].conj()
        });
        Ok(StinespringDilation { in_dim: n, out_dim: m, rank: r, v })
    }

    /// `π(A) = A ⊗ I_r`.
    pub fn pi(&self, a: &ComplexMatrix) -> ComplexMatrix {
        a.kron(&ComplexMatrix::identity(self.rank))
    }

    /// `V* π(A) V`.
    pub fn compress(&self, a: &ComplexMatrix) -> ComplexMatrix {
        &(&self.v.adjoint() * &self.pi(a)) * &self.v
    }

    /// `‖V*V − I‖_max`.
    pub fn isometry_residual(&self) -> f64 {
        (&self.v.adjoint() * &self.v).max_dist(&ComplexMatrix::identity(self.out_dim))
    }

    /// Columns `π(e_ij) V e_b` spanning the minimal dilation space.
    pub fn spanning_vectors(&self) -> ComplexMatrix {
        let n = self.in_dim;
        let mut cols = Vec::with_capacity(n * n * self.out_dim);
        for i in 0..n {
            for j in 0..n {
                let pv = &self.pi(&ComplexMatrix::unit(n, i, j)) * &self.v;
                cols.extend(pv.columns());
            }
        }
        ComplexMatrix::from_columns(&cols).expect("equal lengths")
    }
}

/// Minimal Stinespring dilation of a unital CP map.
pub fn stinespring(map: &CPMap, tol: Tolerance) -> Result<StinespringDilation> {
    let ops = to_kraus(map, tol)?;
    let residual = map.unital_residual();
    if !tol.accepts(residual, 1.0) {
        return Err(Error::NotUnital { residual });
    }
    StinespringDilation::from_kraus(&ops)
}

/// Least-squares `W` with `W·X1 = X2`; returns `W` and `‖W·X1 − X2‖_max`.
pub fn least_squares_intertwiner(x1: &ComplexMatrix, x2: &ComplexMatrix) -> Result<(ComplexMatrix, f64)> {
    if x1.cols() != x2.cols() {
        return Err(Error::DimMismatch("spanning families of different length".into()));
    }
    // W X1 = X2  ⟺  X1* W* = X2*, solved column by column.
    let s = svd(&x1.adjoint())?;
    let cols: Vec<Vec<C64>> = x2.adjoint().columns().iter().map(|b| s.solve_least_squares(b, 1e-12)).collect();
    let w = ComplexMatrix::from_columns(&cols)?.adjoint();
    let res = (&w * x1).max_dist(x2);
    Ok((w, res))
}

/// Unitary `W` with `W π₁(A) V₁ = π₂(A) V₂` for two minimal dilations of the
/// same map.
pub fn dilation_equivalence(d1: &StinespringDilation, d2: &StinespringDilation, tol: Tolerance) -> Result<ComplexMatrix> {
    if (d1.in_dim, d1.out_dim) != (d2.in_dim, d2.out_dim) {
        return Err(Error::NotSameMap { residual: f64::INFINITY });
    }
    let n = d1.in_dim;
    let mut residual: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            let e = ComplexMatrix::unit(n, i, j);
            residual = residual.max(d1.compress(&e).max_dist(&d2.compress(&e)));
        }
    }
    if !tol.accepts(residual, 1.0) {
        return Err(Error::NotSameMap { residual });
    }
    let (x1, x2) = (d1.spanning_vectors(), d2.spanning_vectors());
    for x in [&x1, &x2] {
        let r = svd(x)?.rank(1e-10);
        if r != x.rows() {
            return Err(Error::NotMinimal(format!("spanning vectors have rank {r} in dimension {}", x.rows())));
        }
    }
    let (w, res) = least_squares_intertwiner(&x1, &x2)?;
    if !tol.accepts(res, 1.0) || !w.is_unitary(tol)? {
        return Err(Error::NotSameMap { residual: res });
    }
    Ok(w)
}
