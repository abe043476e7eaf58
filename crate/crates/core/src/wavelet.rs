//! Haar wavelets on `[0,1]` and the matrix of multiplication by `t`, computed
//! exactly.
//!
//! `ψ_{k,l} = 2^{k/2}(χ_{[l2⁻ᵏ,(l+½)2⁻ᵏ)} − χ_{[(l+½)2⁻ᵏ,(l+1)2⁻ᵏ)})`. The
//! amplitude `2^{k/2}` is irrational for odd `k`, so inner products live in
//! `ℚ(√2)` rather than `ℚ`; [`QSqrt2`] represents them exactly.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::Ratio;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, C64};

pub type Q = Ratio<i128>;

/// Exact element `a + b√2` of `ℚ(√2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct QSqrt2 {
    pub a: Q,
    pub b: Q,
}

impl QSqrt2 {
    pub fn new(a: Q, b: Q) -> Self {
        QSqrt2 { a, b }
    }

    pub fn rational(a: Q) -> Self {
        QSqrt2 { a, b: Q::zero() }
    }

    pub fn int(n: i128) -> Self {
        Self::rational(Q::from_integer(n))
    }

    pub fn frac(p: i128, q: i128) -> Self {
        Self::rational(Q::new(p, q))
    }

    /// `2^{k/2}`.
    pub fn sqrt2_pow(k: u32) -> Self {
        let base = Q::from_integer(1i128 << (k / 2));
        if k % 2 == 0 {
            QSqrt2 { a: base, b: Q::zero() }
        } else {
            QSqrt2 { a: Q::zero(), b: base }
        }
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn to_f64(&self) -> f64 {
        self.a.to_f64().unwrap_or(f64::NAN) + self.b.to_f64().unwrap_or(f64::NAN) * std::f64::consts::SQRT_2
    }

    /// `(a + b√2)(a − b√2) = a² − 2b²`.
    fn norm(&self) -> Q {
        self.a * self.a - Q::from_integer(2) * self.b * self.b
    }

    /// Exact sign: `a + b√2` compared with zero without rounding.
    pub fn signum(&self) -> i32 {
        let (sa, sb) = (sign(&self.a), sign(&self.b));
        if sa == sb || sb == 0 {
            return sa;
        }
        if sa == 0 {
            return sb;
        }
        // Opposite signs: the larger of a² and 2b² wins.
        let n = self.norm();
        if n.is_positive() {
            sa
        } else if n.is_negative() {
            sb
        } else {
            0
        }
    }

    pub fn abs(&self) -> Self {
        if self.signum() < 0 {
            -*self
        } else {
            *self
        }
    }
}

fn sign(q: &Q) -> i32 {
    if q.is_positive() {
        1
    } else if q.is_negative() {
        -1
    } else {
        0
    }
}

impl Add for QSqrt2 {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        QSqrt2 { a: self.a + o.a, b: self.b + o.b }
    }
}

impl Sub for QSqrt2 {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        QSqrt2 { a: self.a - o.a, b: self.b - o.b }
    }
}

impl Neg for QSqrt2 {
    type Output = Self;
    fn neg(self) -> Self {
        QSqrt2 { a: -self.a, b: -self.b }
    }
}

impl Mul for QSqrt2 {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let two = Q::from_integer(2);
        QSqrt2 { a: self.a * o.a + two * self.b * o.b, b: self.a * o.b + self.b * o.a }
    }
}

impl Mul<Q> for QSqrt2 {
    type Output = Self;
    fn mul(self, q: Q) -> Self {
        QSqrt2 { a: self.a * q, b: self.b * q }
    }
}

impl std::iter::Sum for QSqrt2 {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(QSqrt2::default(), |acc, x| acc + x)
    }
}

impl fmt::Display for QSqrt2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.a.is_zero(), self.b.is_zero()) {
            (_, true) => write!(f, "{}", self.a),
            (true, false) => write!(f, "{}√2", self.b),
            (false, false) if self.b.is_negative() => write!(f, "{} - {}√2", self.a, -self.b),
            (false, false) => write!(f, "{} + {}√2", self.a, self.b),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct QSqrt2Json {
    rational: String,
    sqrt2: String,
    value: f64,
}

impl Serialize for QSqrt2 {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        QSqrt2Json { rational: self.a.to_string(), sqrt2: self.b.to_string(), value: self.to_f64() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for QSqrt2 {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = QSqrt2Json::deserialize(d)?;
        let parse = |s: &str| s.parse::<Q>().map_err(serde::de::Error::custom);
        Ok(QSqrt2 { a: parse(&j.rational)?, b: parse(&j.sqrt2)? })
    }
}

/// `φ₀` or `ψ_{k,l}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum HaarIndex {
    Scaling,
    Wavelet { k: u32, l: u64 },
}

impl HaarIndex {
    /// `None` for `φ₀`, `Some(k)` for `ψ_{k,l}`.
    pub fn level(&self) -> Option<u32> {
        match self {
            HaarIndex::Scaling => None,
            HaarIndex::Wavelet { k, .. } => Some(*k),
        }
    }

    /// Pieces `([x₀, x₁), value)` of the step function.
    pub fn pieces(&self) -> Vec<(Q, Q, QSqrt2)> {
        match *self {
            HaarIndex::Scaling => vec![(Q::zero(), Q::one(), QSqrt2::int(1))],
            HaarIndex::Wavelet { k, l } => {
                let w = Q::new(1, 1i128 << k);
                let x0 = w * Q::from_integer(l as i128);
                let mid = x0 + w / Q::from_integer(2);
                let amp = QSqrt2::sqrt2_pow(k);
                vec![(x0, mid, amp), (mid, x0 + w, -amp)]
            }
        }
    }
}

/// `φ₀` followed by `ψ_{k,l}` for `0 ≤ k ≤ J`, `0 ≤ l < 2ᵏ`, lexicographic.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HaarBasis {
    pub max_level: u32,
    pub functions: Vec<HaarIndex>,
}

/// Largest level whose exact arithmetic stays far from `i128` overflow.
pub const MAX_LEVEL: u32 = 20;

pub fn haar_basis(j: u32) -> Result<HaarBasis> {
    if j > MAX_LEVEL {
        return Err(Error::InvalidArgument(format!("level {j} exceeds {MAX_LEVEL}")));
    }
    let mut functions = vec![HaarIndex::Scaling];
    for k in 0..=j {
        functions.extend((0..1u64 << k).map(|l| HaarIndex::Wavelet { k, l }));
    }
    Ok(HaarBasis { max_level: j, functions })
}

impl HaarBasis {
    pub fn len(&self) -> usize {
        self.functions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.functions.is_empty()
    }

    /// Exact Gram matrix `⟨u_a, u_b⟩`.
    pub fn gram(&self) -> Vec<Vec<QSqrt2>> {
        self.pairwise(|x0, x1| x1 - x0)
    }

    fn pairwise(&self, weight: impl Fn(Q, Q) -> Q) -> Vec<Vec<QSqrt2>> {
        let pieces: Vec<_> = self.functions.iter().map(HaarIndex::pieces).collect();
        pieces.iter().map(|p| pieces.iter().map(|q| pair_integral(p, q, &weight)).collect()).collect()
    }

    /// Exact coefficients `⟨u_a, f⟩` of a step function.
    pub fn coefficients(&self, f: &DyadicStep) -> Vec<QSqrt2> {
        let fp = f.pieces();
        self.functions.iter().map(|u| pair_integral(&u.pieces(), &fp, &|x0, x1| x1 - x0)).collect()
    }
}

/// `Σ c_p c_q ∫_{I_p ∩ I_q} w` with `w` given by its integral over `[x₀, x₁)`.
fn pair_integral(p: &[(Q, Q, QSqrt2)], q: &[(Q, Q, QSqrt2)], weight: &impl Fn(Q, Q) -> Q) -> QSqrt2 {
    let mut acc = QSqrt2::default();
    for (a0, a1, ca) in p {
        for (b0, b1, cb) in q {
            let (x0, x1) = (*a0.max(b0), *a1.min(b1));
            if x0 < x1 {
                acc = acc + (*ca * *cb) * weight(x0, x1);
            }
        }
    }
    acc
}

/// Real step function with rational values on the `n` cells `[i/n, (i+1)/n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DyadicStep {
    pub values: Vec<Q>,
}

impl DyadicStep {
    fn pieces(&self) -> Vec<(Q, Q, QSqrt2)> {
        let n = self.values.len() as i128;
        self.values
            .iter()
            .enumerate()
            .map(|(i, v)| (Q::new(i as i128, n), Q::new(i as i128 + 1, n), QSqrt2::rational(*v)))
            .collect()
    }

    /// `‖f‖² = Σ v_i²/n`.
    pub fn norm_squared(&self) -> Q {
        let n = Q::from_integer(self.values.len() as i128);
        self.values.iter().map(|v| v * v).sum::<Q>() / n
    }
}

/// `Σ_a ⟨u_a, f⟩²` minus `‖f‖²`, exactly. Zero whenever `f` is constant on
/// cells of width `2^{−(J+1)}`.
pub fn parseval_defect(basis: &HaarBasis, f: &DyadicStep) -> QSqrt2 {
    let c = basis.coefficients(f);
    c.iter().map(|x| *x * *x).sum::<QSqrt2>() - QSqrt2::rational(f.norm_squared())
}

/// `M_{ab} = ⟨u_a, t·u_b⟩`, exact and symmetric.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OperatorMatrix {
    pub basis: HaarBasis,
    pub entries: Vec<Vec<QSqrt2>>,
}

pub fn mt_matrix(basis: &HaarBasis) -> OperatorMatrix {
    let half = Q::new(1, 2);
    let entries = basis.pairwise(|x0, x1| (x1 * x1 - x0 * x0) * half);
    OperatorMatrix { basis: basis.clone(), entries }
}

impl OperatorMatrix {
    pub fn to_matrix(&self) -> ComplexMatrix {
        let n = self.entries.len();
        ComplexMatrix::from_fn(n, n, |i, j| C64::new(self.entries[i][j].to_f64(), 0.0))
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.entries.len();
        (0..n).all(|i| (0..i).all(|j| self.entries[i][j] == self.entries[j][i]))
    }

    /// Entries not in `ℚ`, as `(row, col)`.
    pub fn irrational_entries(&self) -> Vec<(usize, usize)> {
        let n = self.entries.len();
        (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).filter(|&(i, j)| !self.entries[i][j].is_rational()).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LevelPairMax {
    /// `None` stands for `φ₀`.
    pub level_a: Option<u32>,
    pub level_b: Option<u32>,
    pub max_abs: QSqrt2,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecayReport {
    /// Diagonal of `M`: the support centers `(2l+1)2^{−(k+1)}` and `½`.
    pub diagonal: Vec<QSqrt2>,
    /// Level pairs `a ≤ b` (with `φ₀` first), off-diagonal entries only.
    pub level_pairs: Vec<LevelPairMax>,
    pub max_off_diagonal: QSqrt2,
    /// Least-squares slope of `log₂ max|M_{ab}|` against `max(k, k′)` over
    /// pairs with a nonzero maximum; about `−3/2` for Haar.
    pub decay_slope: f64,
}

pub fn diagonal_plus_compact_report(m: &OperatorMatrix) -> DecayReport {
    let funcs = &m.basis.functions;
    let n = funcs.len();
    let diagonal: Vec<QSqrt2> = (0..n).map(|i| m.entries[i][i]).collect();
    let mut levels: Vec<Option<u32>> = vec![None];
    levels.extend((0..=m.basis.max_level).map(Some));

    let mut level_pairs = Vec::new();
    let mut max_off = QSqrt2::default();
    for (ia, &la) in levels.iter().enumerate() {
        for &lb in &levels[ia..] {
            let mut best = QSqrt2::default();
            for i in (0..n).filter(|&i| funcs[i].level() == la) {
                for j in (0..n).filter(|&j| j != i && funcs[j].level() == lb) {
                    let v = m.entries[i][j].abs();
                    if (v - best).signum() > 0 {
                        best = v;
                    }
                }
            }
            if (best - max_off).signum() > 0 {
                max_off = best;
            }
            level_pairs.push(LevelPairMax { level_a: la, level_b: lb, max_abs: best });
        }
    }

    let pts: Vec<(f64, f64)> = level_pairs
        .iter()
        .filter(|p| !p.max_abs.is_zero())
        .map(|p| (p.level_a.max(p.level_b).map_or(0.0, f64::from), p.max_abs.to_f64().log2()))
        .collect();
    let decay_slope = slope(&pts);
    DecayReport { diagonal, level_pairs, max_off_diagonal: max_off, decay_slope }
}

fn slope(pts: &[(f64, f64)]) -> f64 {
    let n = pts.len() as f64;
    if pts.len() < 2 {
        return f64::NAN;
    }
    let (mx, my) = pts.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x / n, b + y / n));
    let sxy: f64 = pts.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = pts.iter().map(|(x, _)| (x - mx) * (x - mx)).sum();
    sxy / sxx
}
