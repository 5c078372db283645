//! Anchored bi-Γ-sets built from double cosets, the Γ-product and ω.
//!
//! Bi-sets are infinite, so nothing is enumerated: an element of the Γ-product
//! ΓaΓ ×_Γ ΓbΓ is the class of a pair (v, w) under (vγ, w) ~ (v, γw), and
//! its canonical form is the unique (i, j, δ) with [v, w] = [g_i, h_j·δ].

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::arith::GroupElement;
use crate::cosets::CosetDecomposition;
use crate::error::{Error, Result};
use crate::hecke_ring::{DoubleCoset, ProductWitness};

/// Formal disjoint union of double cosets, anchored by inclusion in GL₂(Q)⁺.
#[derive(Clone, Debug)]
pub struct AnchoredBiSet {
    pub components: Vec<Arc<DoubleCoset>>,
}

/// A matrix lying in one named component.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BiSetElement {
    pub component: usize,
    pub matrix: GroupElement,
}

impl AnchoredBiSet {
    pub fn new(components: Vec<Arc<DoubleCoset>>) -> Self {
        AnchoredBiSet { components }
    }

    pub fn element(&self, component: usize, matrix: GroupElement) -> Result<BiSetElement> {
        let c = self
            .components
            .get(component)
            .ok_or_else(|| Error::NotInCoset(format!("no component {component}")))?;
        if !c.contains(&matrix) {
            return Err(Error::NotInCoset(format!("{matrix} ∉ {}", c.label())));
        }
        Ok(BiSetElement { component, matrix })
    }

    /// The anchor is the inclusion, so m(γ·v·δ) = γ·m(v)·δ holds on the nose.
    pub fn anchor(&self, v: &BiSetElement) -> GroupElement {
        v.matrix.clone()
    }

    pub fn left(&self, gamma: &GroupElement, v: &BiSetElement) -> BiSetElement {
        BiSetElement {
            component: v.component,
            matrix: gamma.mul(&v.matrix),
        }
    }

    pub fn right(&self, v: &BiSetElement, delta: &GroupElement) -> BiSetElement {
        BiSetElement {
            component: v.component,
            matrix: v.matrix.mul(delta),
        }
    }
}

/// Canonical form [g_i, h_j·δ] of an element of the Γ-product.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ProductElement {
    pub i: usize,
    pub j: usize,
    pub delta: GroupElement,
}

impl fmt::Display for ProductElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.i, self.j, self.delta)
    }
}

/// ΓaΓ ×_Γ ΓbΓ, described through the two decompositions.
#[derive(Clone, Debug)]
pub struct GammaProduct {
    pub left: Arc<CosetDecomposition>,
    pub right: Arc<CosetDecomposition>,
}

impl GammaProduct {
    pub fn new(left: Arc<CosetDecomposition>, right: Arc<CosetDecomposition>) -> Result<Self> {
        if left.group() != right.group() {
            return Err(Error::GroupMismatch(left.group().to_string(), right.group().to_string()));
        }
        Ok(GammaProduct { left, right })
    }

    pub fn from_witness(w: &ProductWitness) -> Self {
        GammaProduct {
            left: w.left.clone(),
            right: w.right.clone(),
        }
    }

    /// [v, w] = [g_i·γ', w] = [g_i, γ'·w] = [g_i, h_j·δ].
    pub fn canonicalize(&self, v: &GroupElement, w: &GroupElement) -> Result<ProductElement> {
        let (i, gamma) = self
            .left
            .split(v)
            .ok_or_else(|| Error::NotInCoset(format!("{v} in the left factor")))?;
        let (j, delta) = self
            .right
            .split(&gamma.mul(w))
            .ok_or_else(|| Error::NotInCoset(format!("{w} in the right factor")))?;
        Ok(ProductElement { i, j, delta })
    }

    /// Product anchor m(v)·m(w) = g_i·h_j·δ.
    pub fn anchor(&self, x: &ProductElement) -> GroupElement {
        self.left.rep(x.i).mul(self.right.rep(x.j)).mul(&x.delta)
    }

    pub fn left_act(&self, gamma: &GroupElement, x: &ProductElement) -> Result<ProductElement> {
        let h = self.right.rep(x.j).mul(&x.delta);
        self.canonicalize(&gamma.mul(self.left.rep(x.i)), &h)
    }

    pub fn right_act(&self, x: &ProductElement, delta: &GroupElement) -> ProductElement {
        ProductElement {
            i: x.i,
            j: x.j,
            delta: x.delta.mul(delta),
        }
    }

    pub fn label_action(&self, gamma: &GroupElement, ij: (usize, usize)) -> Result<(usize, usize)> {
        label_action(&self.left, &self.right, gamma, ij)
    }
}

/// γ·(i, j) = (γ(i), t^g_i(γ)(j)).
pub fn label_action(
    left: &CosetDecomposition,
    right: &CosetDecomposition,
    gamma: &GroupElement,
    (i, j): (usize, usize),
) -> Result<(usize, usize)> {
    if !left.group().contains(gamma) {
        return Err(Error::NotInGroup(gamma.to_string()));
    }
    let (i2, t) = left
        .split(&gamma.mul(left.rep(i)))
        .ok_or_else(|| Error::Inconsistent(format!("{gamma} moved coset {i} out of the left factor")))?;
    let j2 = right
        .find(&t.mul(right.rep(j)))
        .ok_or_else(|| Error::Inconsistent(format!("t_{i}({gamma}) moved coset {j} out of the right factor")))?;
    Ok((i2, j2))
}

/// ω(γ·z_{(k,ℓ)}·δ) = [γ·g_{i(k,ℓ)}, h_{j(k,ℓ)}·δ].
pub fn omega(
    w: &ProductWitness,
    (k, l): (usize, usize),
    gamma: &GroupElement,
    delta: &GroupElement,
) -> Result<ProductElement> {
    let group = w.left.group();
    for x in [gamma, delta] {
        if !group.contains(x) {
            return Err(Error::NotInGroup(x.to_string()));
        }
    }
    let (i, j) = w.orbits[k].pairs[l];
    let prod = GammaProduct::from_witness(w);
    prod.canonicalize(&gamma.mul(w.left.rep(i)), &w.right.rep(j).mul(delta))
}

/// ω evaluated on a bare matrix x ∈ Γz_kΓ, through the normal form
/// x = γ^k_n·z_k·(z_k⁻¹·γ^k_n⁻¹·x) coming from the decomposition of Γz_kΓ.
/// Agrees with [`omega`] for every (γ, δ) exactly when ω is well defined.
pub fn omega_at(w: &ProductWitness, (k, l): (usize, usize), x: &GroupElement) -> Result<ProductElement> {
    let orbit = &w.orbits[k];
    let dec = orbit.coset.decomposition();
    let (n, rest) = dec
        .split(x)
        .ok_or_else(|| Error::NotInCoset(format!("{x} ∉ {}", orbit.coset.label())))?;
    omega(w, (k, l), &orbit.transversal()[n], &rest)
}

/// Preimage of a canonical form under Ω = ⊔_{k,ℓ} ω_{(k,ℓ)}: the component
/// (k, ℓ) and a matrix y in Γz_kΓ with ω(y) = x (y built as γ^k_n·z·c⁻¹·δ).
pub fn omega_inverse(w: &ProductWitness, table: &LabelBijection, x: &ProductElement) -> Result<((usize, usize), GroupElement)> {
    let &(n, k, l) = table
        .inverse
        .get(&(x.i, x.j))
        .ok_or_else(|| Error::Inconsistent(format!("label ({}, {}) not hit by the bijection", x.i, x.j)))?;
    let gamma = &w.orbits[k].transversal()[n];
    let at = omega(w, (k, l), gamma, &GroupElement::identity())?;
    debug_assert_eq!((at.i, at.j), (x.i, x.j));
    let y = gamma.mul(&w.anchor(k, l)).mul(&at.delta.inverse()).mul(&x.delta);
    Ok(((k, l), y))
}

/// The finite map (n, k, ℓ) ↦ γ^k_n·(i(k,ℓ), j(k,ℓ)) and its inverse.
#[derive(Clone, Debug)]
pub struct LabelBijection {
    pub forward: Vec<((usize, usize, usize), (usize, usize))>,
    pub inverse: HashMap<(usize, usize), (usize, usize, usize)>,
}

/// Builds the map and checks it is injective and onto I×J.
pub fn label_bijection(w: &ProductWitness) -> Result<LabelBijection> {
    let mut forward = Vec::new();
    let mut inverse = HashMap::new();
    for (k, orbit) in w.orbits.iter().enumerate() {
        for (l, &pair) in orbit.pairs.iter().enumerate() {
            for (n, gamma) in orbit.transversal().iter().enumerate() {
                let image = label_action(&w.left, &w.right, gamma, pair)?;
                if let Some(prev) = inverse.insert(image, (n, k, l)) {
                    return Err(Error::Inconsistent(format!(
                        "labels {prev:?} and {:?} both map to {image:?}",
                        (n, k, l)
                    )));
                }
                forward.push(((n, k, l), image));
            }
        }
    }
    let total = w.left.degree() * w.right.degree();
    if inverse.len() != total {
        return Err(Error::Inconsistent(format!("bijection hits {} of {total} labels", inverse.len())));
    }
    Ok(LabelBijection { forward, inverse })
}

/// Orbits of the label action of Γ on I×J, found by closing under the generators.
pub fn label_orbits(w: &ProductWitness) -> Result<Vec<BTreeSet<(usize, usize)>>> {
    let gens = w.left.group().generators()?;
    let mut seen = HashSet::new();
    let mut orbits = Vec::new();
    for i in 0..w.left.degree() {
        for j in 0..w.right.degree() {
            if !seen.insert((i, j)) {
                continue;
            }
            let mut orbit = BTreeSet::from([(i, j)]);
            let mut queue = VecDeque::from([(i, j)]);
            while let Some(p) = queue.pop_front() {
                for g in gens {
                    let q = label_action(&w.left, &w.right, g, p)?;
                    if seen.insert(q) {
                        orbit.insert(q);
                        queue.push_back(q);
                    }
                }
            }
            orbits.push(orbit);
        }
    }
    Ok(orbits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::congruence::CongruenceSubgroup;
    use crate::hecke_ring::shimura_product;
    use crate::random::WordSampler;

    fn m(s: &str) -> GroupElement {
        s.parse().unwrap()
    }

    fn witness(g: &CongruenceSubgroup, a: &str, b: &str) -> ProductWitness {
        let a = DoubleCoset::new(g, &m(a)).unwrap();
        let b = DoubleCoset::new(g, &m(b)).unwrap();
        shimura_product(&a, &b).unwrap().1
    }

    #[test]
    fn canonical_forms() {
        let g = CongruenceSubgroup::sl2z();
        let w = witness(&g, "1,0;0,2", "1,0;0,3");
        let prod = GammaProduct::from_witness(&w);
        let mut sampler = WordSampler::new(&g, 3).unwrap();
        for i in 0..w.left.degree() {
            for j in 0..w.right.degree() {
                let x = prod.canonicalize(w.left.rep(i), w.right.rep(j)).unwrap();
                assert_eq!((x.i, x.j), (i, j));
                assert!(x.delta.is_identity());
                // [g_iγ, h_jδ] = [g_{γ(i)}... ] via the right factor's cocycle.
                let (gamma, delta) = (sampler.element(), sampler.element());
                let lhs = prod.canonicalize(&w.left.rep(i).mul(&gamma), &w.right.rep(j).mul(&delta)).unwrap();
                let cocycle = w.right.cocycle(&gamma).unwrap();
                assert_eq!(lhs.i, i);
                assert_eq!(lhs.j, cocycle.permutation[j]);
                assert_eq!(lhs.delta, cocycle.values[j].mul(&delta));
            }
        }
    }

    #[test]
    fn equivalence_soundness() {
        for g in [CongruenceSubgroup::sl2z(), CongruenceSubgroup::gamma0(11).unwrap()] {
            let w = witness(&g, "1,0;0,2", "1,0;0,3");
            let prod = GammaProduct::from_witness(&w);
            let mut sampler = WordSampler::new(&g, 11).unwrap();
            for _ in 0..100 {
                let v = sampler.element().mul(w.left.rep(sampler.index(w.left.degree()))).mul(&sampler.element());
                let u = sampler.element().mul(w.right.rep(sampler.index(w.right.degree()))).mul(&sampler.element());
                let gamma = sampler.element();
                let x = prod.canonicalize(&v, &u).unwrap();
                assert_eq!(prod.canonicalize(&v.mul(&gamma), &gamma.inverse().mul(&u)).unwrap(), x);
                assert_eq!(prod.anchor(&x), v.mul(&u));
            }
        }
    }

    #[test]
    fn label_action_is_an_action() {
        let g = CongruenceSubgroup::gamma0(11).unwrap();
        let w = witness(&g, "1,0;0,2", "1,0;0,3");
        let mut sampler = WordSampler::new(&g, 5).unwrap();
        for _ in 0..100 {
            let (g1, g2) = (sampler.element(), sampler.element());
            let ij = (sampler.index(w.left.degree()), sampler.index(w.right.degree()));
            let lhs = label_action(&w.left, &w.right, &g1.mul(&g2), ij).unwrap();
            let inner = label_action(&w.left, &w.right, &g2, ij).unwrap();
            assert_eq!(lhs, label_action(&w.left, &w.right, &g1, inner).unwrap());
        }
        assert_eq!(label_action(&w.left, &w.right, &GroupElement::identity(), (1, 2)).unwrap(), (1, 2));
        assert!(matches!(
            label_action(&w.left, &w.right, &m("1,1;1,2"), (0, 0)),
            Err(Error::NotInGroup(_))
        ));
    }

    #[test]
    fn bijections() {
        let g = CongruenceSubgroup::sl2z();
        for (b, size) in [("1,0;0,3", 12), ("1,0;0,2", 9)] {
            let w = witness(&g, "1,0;0,2", b);
            let table = label_bijection(&w).unwrap();
            assert_eq!(table.forward.len(), size);
            assert_eq!(table.inverse.len(), size);
        }
    }

    #[test]
    fn orbit_sizes_of_t2_squared() {
        // K = 2 double cosets but the orbits are {6, 3}: the three pairs landing
        // on 2·Γ form one orbit, while the witness counts them as m = 3 copies.
        let w = witness(&CongruenceSubgroup::sl2z(), "1,0;0,2", "1,0;0,2");
        let mut sizes: Vec<usize> = label_orbits(&w).unwrap().iter().map(|o| o.len()).collect();
        sizes.sort();
        assert_eq!(sizes, vec![3, 6]);
        let total: usize = w.orbits.iter().map(|o| o.m * o.d()).sum();
        assert_eq!(total, 9);
    }

    #[test]
    fn omega_values() {
        let g = CongruenceSubgroup::sl2z();
        let w = witness(&g, "1,0;0,2", "1,0;0,3");
        let id = GroupElement::identity();
        let x = omega(&w, (0, 0), &id, &id).unwrap();
        assert_eq!((x.i, x.j), w.orbits[0].pairs[0]);
        assert!(x.delta.is_identity());
        let labels: HashSet<(usize, usize)> = w.orbits[0]
            .transversal()
            .iter()
            .map(|gamma| {
                let x = omega(&w, (0, 0), gamma, &id).unwrap();
                (x.i, x.j)
            })
            .collect();
        assert_eq!(labels.len(), 12);
    }

    #[test]
    fn omega_is_bi_equivariant_and_respects_anchors() {
        let g = CongruenceSubgroup::sl2z();
        let w = witness(&g, "1,0;0,2", "1,0;0,3");
        let prod = GammaProduct::from_witness(&w);
        let mut sampler = WordSampler::new(&g, 9).unwrap();
        for _ in 0..100 {
            let (gamma, delta, g0, d0) = (sampler.element(), sampler.element(), sampler.element(), sampler.element());
            let x = omega(&w, (0, 0), &gamma, &delta).unwrap();
            assert_eq!(prod.anchor(&x), gamma.mul(&w.anchor(0, 0)).mul(&delta));
            let moved = omega(&w, (0, 0), &g0.mul(&gamma), &delta.mul(&d0)).unwrap();
            assert_eq!(moved, prod.right_act(&prod.left_act(&g0, &x).unwrap(), &d0));
            // m = 1 here, so ω only depends on the matrix γ·z·δ.
            let y = gamma.mul(&w.anchor(0, 0)).mul(&delta);
            assert_eq!(omega_at(&w, (0, 0), &y).unwrap(), x);
        }
    }

    #[test]
    fn omega_inverse_round_trip() {
        let g = CongruenceSubgroup::gamma0(11).unwrap();
        let w = witness(&g, "1,0;0,2", "1,0;0,3");
        let prod = GammaProduct::from_witness(&w);
        let table = label_bijection(&w).unwrap();
        let mut sampler = WordSampler::new(&g, 1).unwrap();
        for _ in 0..50 {
            let x = ProductElement {
                i: sampler.index(w.left.degree()),
                j: sampler.index(w.right.degree()),
                delta: sampler.element(),
            };
            let ((k, l), y) = omega_inverse(&w, &table, &x).unwrap();
            assert!(w.orbits[k].coset.contains(&y));
            assert_eq!(prod.anchor(&x), y);
            assert_eq!(omega_at(&w, (k, l), &y).unwrap(), x);
        }
    }
}
