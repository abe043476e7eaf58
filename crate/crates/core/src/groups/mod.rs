//! Finite groups by multiplication table, semidirect products, the finite
//! Heisenberg group, group algebras, induced representations and the
//! continuous `ax+b` group.

mod algebra;
mod axb;
mod induced;
mod rep;

pub use algebra::{dft_cyclic, gelfand_l1, GroupAlgebraElement, Sequence};
pub use axb::{
    axb_haar_check, coadjoint_orbit, AxbElement, Bump, CoadjointOrbit, CoadjointPoint, HaarReport, OrbitKind, Rectangle,
};
pub use induced::{induce, InducedRep, SubgroupRep};
pub use rep::{character_inner, cyclic_character, Rep};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Group given by its multiplication table `mult[g][h] = g·h`.
///
/// Invariants: every row and column is a permutation of `0..order`; the
/// product is associative; `identity` and `inv` satisfy the group laws.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "GroupJson", into = "GroupJson")]
pub struct FiniteGroup {
    order: usize,
    mult: Vec<Vec<usize>>,
    inv: Vec<usize>,
    identity: usize,
    labels: Option<Vec<String>>,
}

#[derive(Serialize, Deserialize)]
struct GroupJson {
    order: usize,
    mult: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<String>>,
}

impl TryFrom<GroupJson> for FiniteGroup {
    type Error = Error;
    fn try_from(j: GroupJson) -> Result<Self> {
        if j.mult.len() != j.order {
            return Err(Error::InvalidGroup(format!("order {} but {} table rows", j.order, j.mult.len())));
        }
        FiniteGroup::new(j.mult, j.labels)
    }
}

impl From<FiniteGroup> for GroupJson {
    fn from(g: FiniteGroup) -> Self {
        GroupJson { order: g.order, mult: g.mult, labels: g.labels }
    }
}

impl FiniteGroup {
    pub fn new(mult: Vec<Vec<usize>>, labels: Option<Vec<String>>) -> Result<Self> {
        let n = mult.len();
        if n == 0 {
            return Err(Error::InvalidGroup("empty table".into()));
        }
        for (g, row) in mult.iter().enumerate() {
            if row.len() != n || !is_permutation(row.iter().copied(), n) {
                return Err(Error::InvalidGroup(format!("row {g} is not a permutation")));
            }
        }
        for h in 0..n {
            if !is_permutation((0..n).map(|g| mult[g][h]), n) {
                return Err(Error::InvalidGroup(format!("column {h} is not a permutation")));
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|g| mult[e][g] == g && mult[g][e] == g))
            .ok_or_else(|| Error::InvalidGroup("no identity".into()))?;
        for a in 0..n {
            for b in 0..n {
                let ab = mult[a][b];
                for c in 0..n {
                    if mult[ab][c] != mult[a][mult[b][c]] {
                        return Err(Error::InvalidGroup(format!("not associative at ({a},{b},{c})")));
                    }
                }
            }
        }
        // Latin square with identity: each row contains e exactly once.
        let inv: Vec<usize> = (0..n).map(|g| mult[g].iter().position(|&x| x == identity).unwrap()).collect();
        if let Some(l) = &labels {
            if l.len() != n {
                return Err(Error::InvalidGroup(format!("{} labels for order {n}", l.len())));
            }
        }
        Ok(FiniteGroup { order: n, mult, inv, identity, labels })
    }

    /// `ℤ_n` with `k ↦ k mod n`.
    pub fn cyclic(n: usize) -> Result<Self> {
        Self::new((0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect(), None)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, g: usize, h: usize) -> usize {
        self.mult[g][h]
    }

    pub fn inv(&self, g: usize) -> usize {
        self.inv[g]
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn label(&self, g: usize) -> String {
        self.labels.as_ref().map_or_else(|| g.to_string(), |l| l[g].clone())
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.mult
    }

    /// `g h g⁻¹`.
    pub fn conjugate(&self, g: usize, h: usize) -> usize {
        self.mul(self.mul(g, h), self.inv(g))
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..a).all(|b| self.mult[a][b] == self.mult[b][a]))
    }

    pub fn center(&self) -> Vec<usize> {
        (0..self.order).filter(|&z| (0..self.order).all(|g| self.mult[z][g] == self.mult[g][z])).collect()
    }

    /// Contains `e`, closed under products and inverses.
    pub fn is_subgroup(&self, elements: &[usize]) -> bool {
        let mut member = vec![false; self.order];
        for &x in elements {
            if x >= self.order {
                return false;
            }
            member[x] = true;
        }
        member[self.identity]
            && elements.iter().all(|&x| member[self.inv[x]] && elements.iter().all(|&y| member[self.mult[x][y]]))
    }

    pub fn is_normal_subgroup(&self, elements: &[usize]) -> bool {
        let mut member = vec![false; self.order];
        elements.iter().for_each(|&x| member[x] = true);
        self.is_subgroup(elements) && (0..self.order).all(|g| elements.iter().all(|&h| member[self.conjugate(g, h)]))
    }
}

/// Each of `0..n` occurs exactly once among the `n` items.
fn is_permutation(items: impl Iterator<Item = usize>, n: usize) -> bool {
    let mut seen = vec![false; n];
    items.into_iter().all(|x| x < n && !std::mem::replace(&mut seen[x], true))
}

/// `H ⋊_φ K` together with the coordinates `index = h + |H|·k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SemidirectProduct {
    pub group: FiniteGroup,
    pub h: FiniteGroup,
    pub k: FiniteGroup,
}

impl SemidirectProduct {
    pub fn index(&self, h: usize, k: usize) -> usize {
        h + self.h.order() * k
    }

    pub fn pair(&self, g: usize) -> (usize, usize) {
        (g % self.h.order(), g / self.h.order())
    }

    /// Image of `H` as `{(h, e)}`.
    pub fn normal_factor(&self) -> Vec<usize> {
        (0..self.h.order()).map(|h| self.index(h, self.k.identity())).collect()
    }

    /// Image of `K` as `{(e, k)}`.
    pub fn complement(&self) -> Vec<usize> {
        (0..self.k.order()).map(|k| self.index(self.h.identity(), k)).collect()
    }
}

/// `(h₁,k₁)(h₂,k₂) = (h₁·φ_{k₁}(h₂), k₁k₂)`; `action[k][h] = φ_k(h)`.
///
/// Fails with [`Error::NotAnAction`] unless each `φ_k` is an automorphism of
/// `H` and `k ↦ φ_k` is a homomorphism.
pub fn semidirect_product(h: &FiniteGroup, k: &FiniteGroup, action: &[Vec<usize>]) -> Result<SemidirectProduct> {
    let (nh, nk) = (h.order(), k.order());
    if action.len() != nk {
        return Err(Error::NotAnAction(format!("{} automorphisms for |K| = {nk}", action.len())));
    }
    for (ki, phi) in action.iter().enumerate() {
        if phi.len() != nh || !is_permutation(phi.iter().copied(), nh) {
            return Err(Error::NotAnAction(format!("φ_{ki} is not a bijection of H")));
        }
        for a in 0..nh {
            for b in 0..nh {
                if phi[h.mul(a, b)] != h.mul(phi[a], phi[b]) {
                    return Err(Error::NotAnAction(format!("φ_{ki} is not multiplicative")));
                }
            }
        }
    }
    for k1 in 0..nk {
        for k2 in 0..nk {
            let k12 = k.mul(k1, k2);
            if (0..nh).any(|x| action[k12][x] != action[k1][action[k2][x]]) {
                return Err(Error::NotAnAction(format!("φ_{k1}∘φ_{k2} ≠ φ_{k12}")));
            }
        }
    }
    let n = nh * nk;
    let mult = (0..n)
        .map(|g1| {
            let (h1, k1) = (g1 % nh, g1 / nh);
            (0..n)
                .map(|g2| {
                    let (h2, k2) = (g2 % nh, g2 / nh);
                    h.mul(h1, action[k1][h2]) + nh * k.mul(k1, k2)
                })
                .collect()
        })
        .collect();
    let group = FiniteGroup::new(mult, None)?;
    Ok(SemidirectProduct { group, h: h.clone(), k: k.clone() })
}

/// `ℤ_m × ℤ_n` with `(x,y) ↦ x·n + y`.
pub fn cyclic_product(m: usize, n: usize) -> Result<FiniteGroup> {
    let order = m * n;
    let mult = (0..order)
        .map(|g| (0..order).map(|h| ((g / n + h / n) % m) * n + (g % n + h % n) % n).collect())
        .collect();
    FiniteGroup::new(mult, None)
}

/// Finite Heisenberg group over `ℤ_p`:
/// `(a,b,c)(a′,b′,c′) = (a+a′, b+b′, c+c′+ab′)`, element index `a·p² + b·p + c`.
///
/// Built as `ℤ_p² ⋊ ℤ_p` with `H = {(b,c)}`, `K = {a}` and `φ_a(b,c) = (b, c+ab)`.
pub fn heisenberg_group(p: usize) -> Result<FiniteGroup> {
    if p < 2 {
        return Err(Error::InvalidArgument(format!("p must be at least 2, got {p}")));
    }
    let h = cyclic_product(p, p)?;
    let k = FiniteGroup::cyclic(p)?;
    let action: Vec<Vec<usize>> = (0..p)
        .map(|a| (0..p * p).map(|bc| (bc / p) * p + (bc % p + a * (bc / p)) % p).collect())
        .collect();
    let sd = semidirect_product(&h, &k, &action)?;
    let labels = (0..p * p * p).map(|g| format!("({},{},{})", g / (p * p), (g / p) % p, g % p)).collect();
    FiniteGroup::new(sd.group.mult, Some(labels))
}

/// Index of `(a,b,c)` in [`heisenberg_group`].
pub fn heisenberg_index(p: usize, a: usize, b: usize, c: usize) -> usize {
    (a % p) * p * p + (b % p) * p + c % p
}
