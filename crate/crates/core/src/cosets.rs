//! Right-coset decompositions ΓaΓ = ⊔ a_i·Γ and the permutation cocycle.
//!
//! The integral matrix `a` plays the role of g⁻¹ in the usual formulation, so
//! `a_i = δ_i·a` with the δ_i a transversal of Γ ∩ aΓa⁻¹ in Γ. For
//! `γ ∈ Γ` the index action `i ↦ γ(i)` is defined by `γ·a_i·Γ = a_{γ(i)}·Γ`
//! and the cocycle is `t_i(γ) = a_{γ(i)}⁻¹·γ·a_i`.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::arith::GroupElement;
use crate::congruence::CongruenceSubgroup;
use crate::error::{Error, Result};

pub const DEFAULT_CAP: usize = 10_000;

/// Canonical label of a right coset `x·Γ` for Γ = Γ₀(N) (or SL₂(Z)).
///
/// `x = H·u` with `H = [[p, 0], [q, r]]` the column Hermite form of `x`
/// (`p, r > 0`, `0 ≤ q < r`) and `u ∈ SL₂(Z)`; `u·Γ₀(N)` is recorded by the
/// P¹(Z/N) class of the first column of `u`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CosetKey {
    pub p: BigInt,
    pub q: BigInt,
    pub r: BigInt,
    pub label: usize,
}

impl fmt::Display for CosetKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "H[{},0;{},{}]#{}", self.p, self.q, self.r, self.label)
    }
}

/// Column Hermite form `(p, q, r)` and the unimodular `u` with `x = H·u`.
fn column_hermite(x: &GroupElement) -> Option<([BigInt; 3], [BigInt; 4])> {
    let [a, b, c, d] = x.integer_entries().ok()?;
    let e = a.extended_gcd(&b);
    let (g, s, t) = if e.gcd.is_negative() {
        (-e.gcd, -e.x, -e.y)
    } else {
        (e.gcd, e.x, e.y)
    };
    if g.is_zero() {
        return None;
    }
    // (a, b)·[[s, -b/g], [t, a/g]] = (g, 0)
    let u1 = [s, -(&b / &g), t, &a / &g];
    let q0 = &c * &u1[0] + &d * &u1[2];
    let r = &c * &u1[1] + &d * &u1[3];
    if !r.is_positive() {
        return None;
    }
    let k = q0.div_floor(&r);
    let q = &q0 - &k * &r;
    // total column transform U = u1·[[1, 0], [-k, 1]]
    let big_u = [
        &u1[0] - &k * &u1[1],
        u1[1].clone(),
        &u1[2] - &k * &u1[3],
        u1[3].clone(),
    ];
    // u = U⁻¹ (det U = 1)
    let u = [
        big_u[3].clone(),
        -big_u[1].clone(),
        -big_u[2].clone(),
        big_u[0].clone(),
    ];
    Some(([g, q, r], u))
}

/// Canonical key of `x·Γ`, or `None` when `x` is not integral or Γ has no
/// P¹ description.
pub fn coset_key(group: &CongruenceSubgroup, x: &GroupElement) -> Option<CosetKey> {
    let table = group.p1()?;
    let ([p, q, r], u) = column_hermite(x)?;
    let label = table.index_of(&u[0], &u[2])?;
    Some(CosetKey { p, q, r, label })
}

/// Whether `x ∈ Γ ∩ aΓa⁻¹`, the stabilizer of the coset `a·Γ`.
pub fn stabilizer_contains(group: &CongruenceSubgroup, a: &GroupElement, x: &GroupElement) -> bool {
    group.contains(x) && group.contains(&a.inverse().mul(x).mul(a))
}

/// `ΓaΓ = ⊔_{i<d} a_i·Γ` together with `δ_i = a_i·a⁻¹ ∈ Γ`.
#[derive(Clone)]
pub struct CosetDecomposition {
    group: CongruenceSubgroup,
    a: GroupElement,
    reps: Vec<GroupElement>,
    deltas: Vec<GroupElement>,
    keys: Vec<CosetKey>,
    lookup: HashMap<CosetKey, usize>,
}

impl fmt::Debug for CosetDecomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CosetDecomposition")
            .field("group", &self.group)
            .field("a", &self.a)
            .field("reps", &self.reps)
            .finish()
    }
}

#[derive(Serialize)]
struct DecompositionJson<'a> {
    degree: usize,
    a: &'a GroupElement,
    reps: &'a [GroupElement],
    deltas: &'a [GroupElement],
}

impl Serialize for CosetDecomposition {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        DecompositionJson {
            degree: self.degree(),
            a: &self.a,
            reps: &self.reps,
            deltas: &self.deltas,
        }
        .serialize(serializer)
    }
}

/// Breadth-first enumeration of the right cosets in ΓaΓ under left
/// multiplication by the generators of Γ.
pub fn decompose(group: &CongruenceSubgroup, a: &GroupElement, cap: usize) -> Result<CosetDecomposition> {
    if !a.is_integral() {
        return Err(Error::NonIntegral(a.to_string()));
    }
    let gens = group.generators()?;
    let start_key = coset_key(group, a).ok_or_else(|| Error::Unsupported(format!("coset keys for {group}")))?;
    let mut reps = vec![a.clone()];
    let mut keys = vec![start_key.clone()];
    let mut lookup = HashMap::from([(start_key, 0usize)]);
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        for s in gens {
            let y = s.mul(&reps[i]);
            let key = coset_key(group, &y).expect("left translates of integral matrices stay integral");
            if lookup.contains_key(&key) {
                continue;
            }
            if reps.len() >= cap {
                return Err(Error::CapExceeded { cap });
            }
            lookup.insert(key.clone(), reps.len());
            queue.push_back(reps.len());
            reps.push(y);
            keys.push(key);
        }
    }
    // a stays first so that δ_1 = 1; the rest are ordered by canonical key.
    let mut order: Vec<usize> = (1..reps.len()).collect();
    order.sort_by(|&x, &y| keys[x].cmp(&keys[y]));
    order.insert(0, 0);
    let reps: Vec<GroupElement> = order.iter().map(|&i| reps[i].clone()).collect();
    let keys: Vec<CosetKey> = order.iter().map(|&i| keys[i].clone()).collect();
    let lookup = keys.iter().cloned().enumerate().map(|(i, k)| (k, i)).collect();
    let a_inv = a.inverse();
    let deltas = reps.iter().map(|r| r.mul(&a_inv)).collect();
    let dec = CosetDecomposition {
        group: group.clone(),
        a: a.clone(),
        reps,
        deltas,
        keys,
        lookup,
    };
    if cfg!(debug_assertions) {
        dec.verify()?;
    }
    Ok(dec)
}

/// Permutation `i ↦ γ(i)` and values `t_i(γ)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cocycle {
    pub gamma: GroupElement,
    pub permutation: Vec<usize>,
    pub values: Vec<GroupElement>,
}

impl CosetDecomposition {
    pub fn group(&self) -> &CongruenceSubgroup {
        &self.group
    }

    /// The representative the decomposition was built from.
    pub fn a(&self) -> &GroupElement {
        &self.a
    }

    pub fn degree(&self) -> usize {
        self.reps.len()
    }

    pub fn reps(&self) -> &[GroupElement] {
        &self.reps
    }

    pub fn rep(&self, i: usize) -> &GroupElement {
        &self.reps[i]
    }

    pub fn deltas(&self) -> &[GroupElement] {
        &self.deltas
    }

    pub fn keys(&self) -> &[CosetKey] {
        &self.keys
    }

    /// Least canonical key among the right cosets; a bi-Γ-invariant label.
    pub fn min_key(&self) -> &CosetKey {
        self.keys.iter().min().expect("non-empty decomposition")
    }

    /// Index `i` with `a_i⁻¹·x ∈ Γ`.
    pub fn find(&self, x: &GroupElement) -> Option<usize> {
        let key = coset_key(&self.group, x)?;
        let i = *self.lookup.get(&key)?;
        debug_assert!(self.group.contains(&self.reps[i].inverse().mul(x)));
        Some(i)
    }

    /// Index of the coset holding `x` together with `a_i⁻¹·x ∈ Γ`.
    pub fn split(&self, x: &GroupElement) -> Option<(usize, GroupElement)> {
        let i = self.find(x)?;
        Some((i, self.reps[i].inverse().mul(x)))
    }

    pub fn contains(&self, x: &GroupElement) -> bool {
        self.find(x).is_some()
    }

    /// `i ↦ γ(i)`; `γ` must lie in Γ.
    pub fn permutation(&self, gamma: &GroupElement) -> Result<Vec<usize>> {
        if !self.group.contains(gamma) {
            return Err(Error::NotInGroup(gamma.to_string()));
        }
        self.reps
            .iter()
            .map(|r| {
                self.find(&gamma.mul(r))
                    .ok_or_else(|| Error::Inconsistent(format!("{gamma}·{r} left the double coset")))
            })
            .collect()
    }

    pub fn cocycle(&self, gamma: &GroupElement) -> Result<Cocycle> {
        let permutation = self.permutation(gamma)?;
        let values = permutation
            .iter()
            .zip(&self.reps)
            .map(|(&j, a_i)| self.reps[j].inverse().mul(gamma).mul(a_i))
            .collect();
        Ok(Cocycle {
            gamma: gamma.clone(),
            permutation,
            values,
        })
    }

    /// Checks every structural invariant with exact membership tests.
    pub fn verify(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::Inconsistent(msg));
        let d = self.degree();
        if self.deltas.len() != d || self.keys.len() != d {
            return fail("length mismatch".into());
        }
        if !self.deltas[0].is_identity() {
            return fail("delta_1 is not the identity".into());
        }
        for (i, (r, delta)) in self.reps.iter().zip(&self.deltas).enumerate() {
            if !self.group.contains(delta) || &delta.mul(&self.a) != r {
                return fail(format!("delta_{i} is not a group element with a_i = delta_i a"));
            }
        }
        for i in 0..d {
            let inv = self.reps[i].inverse();
            for j in (i + 1)..d {
                if self.group.contains(&inv.mul(&self.reps[j])) {
                    return fail(format!("cosets {i} and {j} coincide"));
                }
            }
        }
        for gamma in self.group.generators()? {
            for (i, r) in self.reps.iter().enumerate() {
                let y = gamma.mul(r);
                let hit = self
                    .reps
                    .iter()
                    .any(|a_j| self.group.contains(&a_j.inverse().mul(&y)));
                if !hit {
                    return fail(format!("generator {gamma} moves coset {i} outside the list"));
                }
            }
        }
        Ok(())
    }
}

/// Shared handle used by the ring and bi-set layers.
pub type SharedDecomposition = Arc<CosetDecomposition>;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::WordSampler;

    fn m(s: &str) -> GroupElement {
        s.parse().unwrap()
    }

    /// Brute-force list of integral matrices of determinant n in column
    /// Hermite form; each right SL₂(Z)-coset of determinant n has exactly one.
    fn hermite_list(n: i64) -> Vec<GroupElement> {
        let mut out = Vec::new();
        for p in 1..=n {
            if n % p != 0 {
                continue;
            }
            let r = n / p;
            for q in 0..r {
                out.push(GroupElement::from_ints(p, 0, q, r).unwrap());
            }
        }
        out
    }

    #[test]
    fn stabilizer_examples() {
        let g = CongruenceSubgroup::sl2z();
        let a = m("1,0;0,2");
        assert!(stabilizer_contains(&g, &a, &GroupElement::identity()));
        assert!(stabilizer_contains(&g, &a, &m("1,1;0,1")));
        assert!(!stabilizer_contains(&g, &a, &m("1,0;1,1")));
        assert!(stabilizer_contains(&g, &a, &m("1,0;2,1")));
    }

    #[test]
    fn trivial_decomposition() {
        let g = CongruenceSubgroup::sl2z();
        let dec = decompose(&g, &GroupElement::identity(), DEFAULT_CAP).unwrap();
        assert_eq!(dec.degree(), 1);
        assert!(dec.rep(0).is_identity());
    }

    #[test]
    fn degree_two_matches_brute_force() {
        let g = CongruenceSubgroup::sl2z();
        let dec = decompose(&g, &m("1,0;0,2"), DEFAULT_CAP).unwrap();
        assert_eq!(dec.degree(), 3);
        // Brute force: the Hermite list is pairwise inequivalent and every
        // representative matches exactly one of them.
        let brute = hermite_list(2);
        assert_eq!(brute.len(), 3);
        for (i, x) in brute.iter().enumerate() {
            for y in &brute[i + 1..] {
                assert!(!g.contains(&x.inverse().mul(y)));
            }
        }
        for r in dec.reps() {
            let hits = brute.iter().filter(|h| g.contains(&h.inverse().mul(r))).count();
            assert_eq!(hits, 1);
        }
        // diag(1,2)Γ and [[1,1],[0,2]]Γ are the same left-translate coset.
        assert_eq!(dec.find(&m("1,1;0,2")), dec.find(&m("1,0;0,2")));
        assert_ne!(dec.find(&m("2,0;0,1")), dec.find(&m("1,0;0,2")));
    }

    #[test]
    fn sl2z_degrees_are_p_plus_one() {
        let g = CongruenceSubgroup::sl2z();
        for p in [2, 3, 5, 7, 11, 13] {
            let dec = decompose(&g, &GroupElement::diag(1, p).unwrap(), DEFAULT_CAP).unwrap();
            assert_eq!(dec.degree() as i64, p + 1);
            dec.verify().unwrap();
        }
        let dec = decompose(&g, &GroupElement::diag(1, 4).unwrap(), DEFAULT_CAP).unwrap();
        assert_eq!(dec.degree(), 6);
    }

    #[test]
    fn gamma0_degrees() {
        let g = CongruenceSubgroup::gamma0(11).unwrap();
        assert_eq!(decompose(&g, &m("1,0;0,2"), DEFAULT_CAP).unwrap().degree(), 3);
        assert_eq!(decompose(&g, &m("1,0;0,3"), DEFAULT_CAP).unwrap().degree(), 4);
        assert_eq!(decompose(&g, &m("2,0;0,2"), DEFAULT_CAP).unwrap().degree(), 1);
        // Bad prime: Γ₀(11)·diag(1,11)·Γ₀(11) has 11 cosets.
        assert_eq!(decompose(&g, &m("1,0;0,11"), DEFAULT_CAP).unwrap().degree(), 11);
    }

    #[test]
    fn errors() {
        let g = CongruenceSubgroup::sl2z();
        assert!(matches!(decompose(&g, &m("1,0;0,1/2"), 10), Err(Error::NonIntegral(_))));
        assert_eq!(
            decompose(&g, &GroupElement::diag(1, 13).unwrap(), 5).unwrap_err(),
            Error::CapExceeded { cap: 5 }
        );
        let dec = decompose(&g, &m("1,0;0,2"), DEFAULT_CAP).unwrap();
        assert!(matches!(dec.cocycle(&m("1,0;0,2")), Err(Error::NotInGroup(_))));
    }

    #[test]
    fn deterministic_order() {
        let g = CongruenceSubgroup::gamma0(11).unwrap();
        let a = m("1,0;0,5");
        let x = decompose(&g, &a, DEFAULT_CAP).unwrap();
        let y = decompose(&g, &a, DEFAULT_CAP).unwrap();
        assert_eq!(x.reps(), y.reps());
    }

    #[test]
    fn cocycle_of_identity_and_t() {
        let g = CongruenceSubgroup::sl2z();
        let dec = decompose(&g, &m("1,0;0,2"), DEFAULT_CAP).unwrap();
        let c = dec.cocycle(&GroupElement::identity()).unwrap();
        assert_eq!(c.permutation, vec![0, 1, 2]);
        assert!(c.values.iter().all(|t| t.is_identity()));
        // T fixes diag(1,2)Γ and swaps the other two cosets (brute-force
        // lattice check: index-2 sublattices {y even}, {x even}, {x ≡ y}).
        let c = dec.cocycle(&GroupElement::t()).unwrap();
        let fixed = dec.find(&m("1,0;0,2")).unwrap();
        let x_even = dec.find(&m("2,0;0,1")).unwrap();
        let diagonal = dec.find(&m("1,0;1,2")).unwrap();
        assert_eq!(c.permutation[fixed], fixed);
        assert_eq!(c.permutation[x_even], diagonal);
        assert_eq!(c.permutation[diagonal], x_even);
        for (i, t) in c.values.iter().enumerate() {
            assert!(g.contains(t));
            assert!(g.contains(&dec.a().conjugate(t)));
            assert_eq!(dec.rep(c.permutation[i]).mul(t), GroupElement::t().mul(dec.rep(i)));
        }
    }

    fn check_relations(group: CongruenceSubgroup, a: &str, seed: u64) {
        let dec = decompose(&group, &m(a), DEFAULT_CAP).unwrap();
        let mut words = WordSampler::new(&group, seed).unwrap();
        for _ in 0..30 {
            let (g1, g2) = (words.element(), words.element());
            let c1 = dec.cocycle(&g1).unwrap();
            let c2 = dec.cocycle(&g2).unwrap();
            let c12 = dec.cocycle(&g1.mul(&g2)).unwrap();
            let cinv = dec.cocycle(&g1.inverse()).unwrap();
            for i in 0..dec.degree() {
                assert_eq!(c12.permutation[i], c1.permutation[c2.permutation[i]]);
                assert_eq!(c12.values[i], c1.values[c2.permutation[i]].mul(&c2.values[i]));
                assert_eq!(cinv.values[i], c1.values[cinv.permutation[i]].inverse());
            }
        }
    }

    #[test]
    fn cocycle_relations_sl2z() {
        check_relations(CongruenceSubgroup::sl2z(), "1,0;0,2", 1);
    }

    #[test]
    fn cocycle_relations_gamma0() {
        check_relations(CongruenceSubgroup::gamma0(11).unwrap(), "1,0;0,3", 2);
    }

    #[test]
    fn coset_key_is_right_invariant() {
        let g = CongruenceSubgroup::gamma0(6).unwrap();
        let mut words = WordSampler::new(&g, 3).unwrap();
        let x = m("3,1;4,6");
        let k = coset_key(&g, &x).unwrap();
        for _ in 0..40 {
            let y = x.mul(&words.element());
            assert_eq!(coset_key(&g, &y).unwrap(), k);
        }
        // Translating by an element outside Γ₀(6) changes the key.
        assert_ne!(coset_key(&g, &x.mul(&GroupElement::s())).unwrap(), k);
    }
}
