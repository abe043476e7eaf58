//! The `ax+b` group `{(a,b) : a > 0}` with `(a,b)(a′,b′) = (aa′, b+ab′)`,
//! left Haar measure `da db/a²`, right Haar measure `da db/a` and modular
//! function `Δ(a,b) = 1/a`; plus coadjoint orbits under `Ad*_g = [[1,0],[a,1]]`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AxbElement {
    pub a: f64,
    pub b: f64,
}

impl AxbElement {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a > 0.0) || !a.is_finite() || !b.is_finite() {
            return Err(Error::InvalidArgument(format!("ax+b element needs a > 0, got ({a}, {b})")));
        }
        Ok(AxbElement { a, b })
    }

    pub fn mul(self, o: Self) -> Self {
        AxbElement { a: self.a * o.a, b: self.b + self.a * o.b }
    }

    pub fn inv(self) -> Self {
        AxbElement { a: 1.0 / self.a, b: -self.b / self.a }
    }

    /// `Δ = dλ_L/dλ_R = 1/a`.
    pub fn modular(self) -> f64 {
        1.0 / self.a
    }
}

/// Smooth bump `exp(−1/(1−r²))` on the ellipse
/// `r² = ((a−a₀)/ρ_a)² + ((b−b₀)/ρ_b)² < 1`, zero outside.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bump {
    pub center: (f64, f64),
    pub radius: (f64, f64),
}

impl Bump {
    pub fn eval(&self, g: AxbElement) -> f64 {
        let u = (g.a - self.center.0) / self.radius.0;
        let v = (g.b - self.center.1) / self.radius.1;
        let r2 = u * u + v * v;
        if r2 < 1.0 {
            (-1.0 / (1.0 - r2)).exp()
        } else {
            0.0
        }
    }

    /// Corners of the bounding box of the support.
    fn corners(&self) -> [AxbElement; 4] {
        let (a0, b0) = self.center;
        let (ra, rb) = self.radius;
        [(a0 - ra, b0 - rb), (a0 - ra, b0 + rb), (a0 + ra, b0 - rb), (a0 + ra, b0 + rb)].map(|(a, b)| AxbElement { a, b })
    }
}

/// Trapezoidal grid with `n` points per axis on `[a_min,a_max]×[b_min,b_max]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rectangle {
    pub a_min: f64,
    pub a_max: f64,
    pub b_min: f64,
    pub b_max: f64,
    pub n: usize,
}

impl Rectangle {
    fn contains_box(&self, pts: &[AxbElement]) -> bool {
        pts.iter().all(|p| p.a > self.a_min && p.a < self.a_max && p.b > self.b_min && p.b < self.b_max)
    }

    fn steps(&self) -> (f64, f64) {
        let m = (self.n - 1) as f64;
        ((self.a_max - self.a_min) / m, (self.b_max - self.b_min) / m)
    }

    /// Trapezoidal sum of `w(g)` and a curvature-based error estimate
    /// `max|∂²w|·(h_a² + h_b²)·area/12`.
    fn integrate(&self, w: impl Fn(AxbElement) -> f64) -> (f64, f64) {
        let (ha, hb) = self.steps();
        let n = self.n;
        let vals: Vec<f64> = (0..n * n)
            .map(|k| w(AxbElement { a: self.a_min + (k / n) as f64 * ha, b: self.b_min + (k % n) as f64 * hb }))
            .collect();
        let wt = |i: usize| if i == 0 || i == n - 1 { 0.5 } else { 1.0 };
        let mut sum = 0.0;
        let mut curv: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                sum += wt(i) * wt(j) * vals[i * n + j];
                if i > 0 && i + 1 < n {
                    curv = curv.max((vals[(i + 1) * n + j] - 2.0 * vals[i * n + j] + vals[(i - 1) * n + j]).abs() / (ha * ha));
                }
                if j > 0 && j + 1 < n {
                    curv = curv.max((vals[i * n + j + 1] - 2.0 * vals[i * n + j] + vals[i * n + j - 1]).abs() / (hb * hb));
                }
            }
        }
        let area = (self.a_max - self.a_min) * (self.b_max - self.b_min);
        (sum * ha * hb, curv * (ha * ha + hb * hb) * area / 12.0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HaarReport {
    /// `∫ f dλ_L`.
    pub left_integral: f64,
    /// `|∫ f(h⁻¹g) dλ_L(g) − ∫ f dλ_L|`.
    pub left_residual: f64,
    /// `∫ f dλ_R`.
    pub right_integral: f64,
    /// `|∫ f(gh⁻¹) dλ_R(g) − ∫ f dλ_R|`.
    pub right_residual: f64,
    /// `Δ(h) = 1/a′`.
    pub modular: f64,
    /// `|∫ f(gh⁻¹) dλ_L(g) − Δ(h)·∫ f dλ_L|`.
    pub modular_residual: f64,
    /// Largest curvature-based trapezoid error estimate (not a certified bound).
    pub error_estimate: f64,
}

/// Checks left invariance of `dλ_L`, right invariance of `dλ_R` and the
/// modular relation by trapezoidal quadrature of translates of `f`.
pub fn axb_haar_check(f: &Bump, h: AxbElement, rect: &Rectangle) -> Result<HaarReport> {
    if rect.n < 3 || !(rect.a_min > 0.0) || rect.a_max <= rect.a_min || rect.b_max <= rect.b_min {
        return Err(Error::InvalidArgument("quadrature rectangle must satisfy 0 < a_min < a_max, b_min < b_max, n ≥ 3".into()));
    }
    if !(f.radius.0 > 0.0 && f.radius.1 > 0.0) {
        return Err(Error::InvalidArgument("bump radii must be positive".into()));
    }
    let corners = f.corners();
    // Supports of f, f(h⁻¹·) and f(·h⁻¹) are S, hS and Sh; their corner images bound them.
    let left: Vec<AxbElement> = corners.iter().map(|&c| h.mul(c)).collect();
    let right: Vec<AxbElement> = corners.iter().map(|&c| c.mul(h)).collect();
    for (name, pts) in [("f", &corners[..]), ("f(h⁻¹g)", &left[..]), ("f(gh⁻¹)", &right[..])] {
        if !rect.contains_box(pts) {
            return Err(Error::SupportOutOfDomain(format!("support of {name} leaves the quadrature rectangle")));
        }
    }
    let hi = h.inv();
    let dl = |g: AxbElement| 1.0 / (g.a * g.a);
    let dr = |g: AxbElement| 1.0 / g.a;

    let (l0, e1) = rect.integrate(|g| f.eval(g) * dl(g));
    let (l1, e2) = rect.integrate(|g| f.eval(hi.mul(g)) * dl(g));
    let (r0, e3) = rect.integrate(|g| f.eval(g) * dr(g));
    let (r1, e4) = rect.integrate(|g| f.eval(g.mul(hi)) * dr(g));
    let (m1, e5) = rect.integrate(|g| f.eval(g.mul(hi)) * dl(g));
    Ok(HaarReport {
        left_integral: l0,
        left_residual: (l1 - l0).abs(),
        right_integral: r0,
        right_residual: (r1 - r0).abs(),
        modular: h.modular(),
        modular_residual: (m1 - h.modular() * l0).abs(),
        error_estimate: [e1, e2, e3, e4, e5].into_iter().fold(0.0, f64::max),
    })
}

/// Point `[ξ, η]` of the dual of the Lie algebra.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoadjointPoint {
    pub xi: f64,
    pub eta: f64,
}

impl CoadjointPoint {
    /// `Ad*_g [ξ, η] = [[1,0],[a,1]]·[ξ, η] = [ξ, aξ + η]`.
    pub fn act(self, a: f64) -> Self {
        CoadjointPoint { xi: self.xi, eta: a * self.xi + self.eta }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum OrbitKind {
    /// The vertical line `x = ξ`.
    VerticalLine { xi: f64 },
    FixedPoint { eta: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoadjointOrbit {
    pub kind: OrbitKind,
    pub samples: Vec<CoadjointPoint>,
    /// Every sample satisfies the classification.
    pub consistent: bool,
}

pub fn coadjoint_orbit(p: CoadjointPoint, a_values: &[f64]) -> CoadjointOrbit {
    let samples: Vec<CoadjointPoint> = a_values.iter().map(|&a| p.act(a)).collect();
    let (kind, consistent) = if p.xi != 0.0 {
        let on_line = samples.iter().all(|s| s.xi == p.xi);
        (OrbitKind::VerticalLine { xi: p.xi }, on_line)
    } else {
        (OrbitKind::FixedPoint { eta: p.eta }, samples.iter().all(|s| *s == p))
    };
    CoadjointOrbit { kind, samples, consistent }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup() -> (Bump, Rectangle) {
        let f = Bump { center: (1.0, 0.0), radius: (0.5, 0.5) };
        let rect = Rectangle { a_min: 0.25, a_max: 3.5, b_min: -1.0, b_max: 2.5, n: 400 };
        (f, rect)
    }

    #[test]
    fn identity_translation_is_exact() {
        let (f, rect) = setup();
        let r = axb_haar_check(&f, AxbElement::new(1.0, 0.0).unwrap(), &rect).unwrap();
        assert_eq!(r.left_residual, 0.0);
        assert_eq!(r.right_residual, 0.0);
        assert_eq!(r.modular, 1.0);
    }

    #[test]
    fn translation_by_two_one() {
        let (f, rect) = setup();
        let r = axb_haar_check(&f, AxbElement::new(2.0, 1.0).unwrap(), &rect).unwrap();
        assert!(r.left_residual <= 1e-6, "{r:?}");
        assert!(r.right_residual <= 1e-6, "{r:?}");
        assert!(r.modular_residual <= 1e-6, "{r:?}");
        assert_eq!(r.modular, 0.5);
        // Left and right Haar integrals of a non-symmetric f differ.
        assert!((r.left_integral - r.right_integral).abs() > 1e-3);
    }

    #[test]
    fn support_outside_rectangle() {
        let (f, rect) = setup();
        let r = axb_haar_check(&f, AxbElement::new(5.0, 0.0).unwrap(), &rect);
        assert!(matches!(r, Err(Error::SupportOutOfDomain(_))));
    }

    #[test]
    fn group_laws() {
        let g = AxbElement::new(2.0, 1.0).unwrap();
        let h = AxbElement::new(0.5, -3.0).unwrap();
        let e = g.mul(g.inv());
        assert!((e.a - 1.0).abs() < 1e-15 && e.b.abs() < 1e-15);
        assert!((g.mul(h).modular() - g.modular() * h.modular()).abs() < 1e-15);
    }

    #[test]
    fn coadjoint_examples() {
        let grid: Vec<f64> = (-5..=5).map(f64::from).collect();
        let o = coadjoint_orbit(CoadjointPoint { xi: 1.0, eta: 0.0 }, &grid);
        assert_eq!(o.kind, OrbitKind::VerticalLine { xi: 1.0 });
        assert!(o.consistent);
        let o = coadjoint_orbit(CoadjointPoint { xi: 0.0, eta: 5.0 }, &grid);
        assert_eq!(o.kind, OrbitKind::FixedPoint { eta: 5.0 });
        assert!(o.consistent);
        assert_eq!(CoadjointPoint { xi: 2.0, eta: 3.0 }.act(1.0), CoadjointPoint { xi: 2.0, eta: 5.0 });
    }
}
