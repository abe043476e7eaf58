use std::f64::consts::PI;
use std::sync::Arc;

use super::FiniteGroup;
use crate::error::{Error, Result};
use crate::matrix::C64;

/// Element of the group algebra `ℂ[G]`, a complex function on `G`.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupAlgebraElement {
    group: Arc<FiniteGroup>,
    pub coeffs: Vec<C64>,
}

impl GroupAlgebraElement {
    pub fn new(group: Arc<FiniteGroup>, coeffs: Vec<C64>) -> Result<Self> {
        if coeffs.len() != group.order() {
            return Err(Error::DimMismatch(format!("{} coefficients for group of order {}", coeffs.len(), group.order())));
        }
        Ok(GroupAlgebraElement { group, coeffs })
    }

    pub fn delta(group: Arc<FiniteGroup>, g: usize) -> Self {
        let mut coeffs = vec![C64::default(); group.order()];
        coeffs[g] = C64::new(1.0, 0.0);
        GroupAlgebraElement { group, coeffs }
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    fn same_group(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.group, &other.group) || self.group == other.group {
            Ok(())
        } else {
            Err(Error::GroupMismatch)
        }
    }

    /// `(a⋆b)(g) = Σ_{xy=g} a(x) b(y)`.
    pub fn convolve(&self, other: &Self) -> Result<Self> {
        self.same_group(other)?;
        let g = &self.group;
        let mut out = vec![C64::default(); g.order()];
        for (x, ax) in self.coeffs.iter().enumerate() {
            if *ax == C64::default() {
                continue;
            }
            for (y, by) in other.coeffs.iter().enumerate() {
                out[g.mul(x, y)] += ax * by;
            }
        }
        Ok(GroupAlgebraElement { group: self.group.clone(), coeffs: out })
    }

    /// `a*(g) = conj(a(g⁻¹))`.
    pub fn involution(&self) -> Self {
        let coeffs = (0..self.group.order()).map(|g| self.coeffs[self.group.inv(g)].conj()).collect();
        GroupAlgebraElement { group: self.group.clone(), coeffs }
    }

    pub fn max_dist(&self, other: &Self) -> f64 {
        crate::matrix::sup_dist(&self.coeffs, &other.coeffs)
    }
}

/// `ζ^{m}` for `ζ = e^{2πi/N}`, with the exponent reduced mod `N` first.
fn root_of_unity(m: usize, n: usize) -> C64 {
    C64::from_polar(1.0, 2.0 * PI * (m % n) as f64 / n as f64)
}

/// `(Uf)(l) = N^{-1/2} Σ_k ζ^{kl} f(k)` with `ζ = e^{2πi/N}`.
///
/// `U` is unitary and `U(a⋆b) = √N·(Ua)⊙(Ub)` for cyclic convolution.
pub fn dft_cyclic(f: &[C64]) -> Vec<C64> {
    let n = f.len();
    let scale = 1.0 / (n as f64).sqrt();
    (0..n)
        .map(|l| f.iter().enumerate().map(|(k, fk)| root_of_unity(k * l, n) * fk).sum::<C64>() * scale)
        .collect()
}

/// Finitely supported two-sided sequence `a_start, a_{start+1}, …`.
#[derive(Debug, Clone, PartialEq)]
pub struct Sequence {
    pub start: i64,
    pub coeffs: Vec<C64>,
}

impl Sequence {
    pub fn new(start: i64, coeffs: Vec<C64>) -> Self {
        Sequence { start, coeffs }
    }

    pub fn delta(n: i64) -> Self {
        Sequence { start: n, coeffs: vec![C64::new(1.0, 0.0)] }
    }

    pub fn l1_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).sum()
    }

    /// `(a⋆b)_n = Σ_k a_k b_{n−k}`.
    pub fn convolve(&self, other: &Self) -> Self {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Sequence { start: self.start + other.start, coeffs: Vec::new() };
        }
        let mut out = vec![C64::default(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Sequence { start: self.start + other.start, coeffs: out }
    }
}

/// Largest accepted `||z| − 1|`.
pub const UNIT_CIRCLE_TOL: f64 = 1e-9;

/// `φ_z(a) = Σ a_n zⁿ` for `|z| = 1`; a character of `l¹(ℤ)` bounded by `‖a‖₁`.
pub fn gelfand_l1(a: &Sequence, z: C64) -> Result<C64> {
    if (z.norm() - 1.0).abs() > UNIT_CIRCLE_TOL {
        return Err(Error::OffCircle(z.norm()));
    }
    // Horner in z from the top coefficient, then shift by z^start.
    let poly = a.coeffs.iter().rev().fold(C64::default(), |acc, c| acc * z + c);
    let shift = i32::try_from(a.start).map_err(|_| Error::InvalidArgument("sequence offset out of range".into()))?;
    Ok(poly * z.powi(shift))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{norm, real_vector, sup_dist};

    #[test]
    fn dft_examples() {
        let s = 0.5f64.sqrt();
        let u = dft_cyclic(&real_vector(&[1.0, 0.0]));
        assert!(sup_dist(&u, &real_vector(&[s, s])) < 1e-15);
        let u = dft_cyclic(&real_vector(&[0.0, 1.0, 0.0, 0.0]));
        let want = [C64::new(0.5, 0.0), C64::new(0.0, 0.5), C64::new(-0.5, 0.0), C64::new(0.0, -0.5)];
        assert!(sup_dist(&u, &want) < 1e-15);
    }

    #[test]
    fn dft_convolution_identity() {
        let n = 8;
        let g = Arc::new(FiniteGroup::cyclic(n).unwrap());
        let a: Vec<C64> = (0..n).map(|k| C64::new(k as f64, 1.0 - k as f64 * 0.5)).collect();
        let b: Vec<C64> = (0..n).map(|k| C64::new((k * k) as f64 * 0.1, -1.0)).collect();
        let ab = GroupAlgebraElement::new(g.clone(), a.clone())
            .unwrap()
            .convolve(&GroupAlgebraElement::new(g, b.clone()).unwrap())
            .unwrap();
        let lhs = dft_cyclic(&ab.coeffs);
        let (ua, ub) = (dft_cyclic(&a), dft_cyclic(&b));
        let rhs: Vec<C64> = ua.iter().zip(&ub).map(|(x, y)| x * y * (n as f64).sqrt()).collect();
        assert!(sup_dist(&lhs, &rhs) < 1e-12);
        assert!((norm(&ua) - norm(&a)).abs() < 1e-12);
    }

    #[test]
    fn convolution_on_z4() {
        let g = Arc::new(FiniteGroup::cyclic(4).unwrap());
        let a = GroupAlgebraElement::new(g.clone(), real_vector(&[1.0, 1.0, 0.0, 0.0])).unwrap();
        let e = GroupAlgebraElement::delta(g.clone(), 0);
        assert_eq!(a.convolve(&e).unwrap(), a);
        let d1 = GroupAlgebraElement::delta(g.clone(), 1);
        let d3 = GroupAlgebraElement::delta(g.clone(), 3);
        assert_eq!(d1.convolve(&d3).unwrap(), e);
        assert_eq!(d1.involution(), d3);
    }

    #[test]
    fn group_mismatch() {
        let a = GroupAlgebraElement::delta(Arc::new(FiniteGroup::cyclic(4).unwrap()), 0);
        let b = GroupAlgebraElement::delta(Arc::new(FiniteGroup::cyclic(3).unwrap()), 0);
        assert_eq!(a.convolve(&b), Err(Error::GroupMismatch));
    }

    #[test]
    fn gelfand_examples() {
        let i = C64::new(0.0, 1.0);
        assert_eq!(gelfand_l1(&Sequence::delta(0), i).unwrap(), C64::new(1.0, 0.0));
        assert!((gelfand_l1(&Sequence::delta(1), i).unwrap() - i).norm() < 1e-15);
        assert!((gelfand_l1(&Sequence::delta(-1), i).unwrap() + i).norm() < 1e-15);
        assert!(matches!(gelfand_l1(&Sequence::delta(0), C64::new(2.0, 0.0)), Err(Error::OffCircle(_))));
    }

    #[test]
    fn gelfand_is_multiplicative() {
        let a = Sequence::new(0, real_vector(&[1.0, 1.0]));
        let ab = a.convolve(&a);
        assert_eq!(ab.coeffs, real_vector(&[1.0, 2.0, 1.0]));
        for k in 0..16 {
            let z = root_of_unity(k, 16);
            let lhs = gelfand_l1(&ab, z).unwrap();
            let rhs = gelfand_l1(&a, z).unwrap().powi(2);
            assert!((lhs - rhs).norm() < 1e-12);
            assert!(lhs.norm() <= ab.l1_norm() + 1e-12);
        }
    }
}
