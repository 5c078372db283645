//! Congruence subgroups of SL₂(Z), the P¹(Z/N) coset table, and Schreier
//! generators for Γ₀(N).
//!
//! The groups here need not be torsion-free (SL₂(Z) and Γ₀(N) for small N
//! contain elliptic elements and −I); none of the coset combinatorics
//! depends on that.

use std::collections::VecDeque;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::arith::GroupElement;
use crate::error::{Error, Result};
use crate::oracle;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GroupKind {
    Sl2z,
    Gamma0,
    Gamma1,
    Gamma,
}

fn mod_n(x: &BigInt, n: u64) -> u64 {
    x.mod_floor(&BigInt::from(n)).to_u64().unwrap()
}

fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

/// Points of P¹(Z/N) with the right action of S and T on row vectors `(c, d)`.
///
/// Each point is stored by its canonical representative: the lexicographically
/// least `(u·c, u·d) mod N` over units `u`.
#[derive(Clone, Debug)]
pub struct P1Table {
    level: u64,
    points: Vec<(u64, u64)>,
    lookup: Vec<u32>,
    s_action: Vec<usize>,
    t_action: Vec<usize>,
}

const NO_POINT: u32 = u32::MAX;

impl P1Table {
    pub fn new(level: u64) -> P1Table {
        assert!(level >= 1, "level must be positive");
        let n = level;
        let units: Vec<u64> = (0..n).filter(|&u| gcd(u, n) == 1).collect();
        let mut lookup = vec![NO_POINT; (n * n) as usize];
        let mut points = Vec::new();
        for c in 0..n {
            for d in 0..n {
                if gcd(gcd(c, d), n) != 1 {
                    continue;
                }
                if lookup[(c * n + d) as usize] != NO_POINT {
                    continue;
                }
                // (c, d) is the first member of its class reached in lexicographic
                // order, hence the canonical representative.
                let idx = points.len() as u32;
                points.push((c, d));
                for &u in &units {
                    let (uc, ud) = (u * c % n, u * d % n);
                    lookup[(uc * n + ud) as usize] = idx;
                }
            }
        }
        let mut table = P1Table {
            level: n,
            points,
            lookup,
            s_action: Vec::new(),
            t_action: Vec::new(),
        };
        table.s_action = (0..table.len())
            .map(|i| table.apply(i, &GroupElement::s()))
            .collect();
        table.t_action = (0..table.len())
            .map(|i| table.apply(i, &GroupElement::t()))
            .collect();
        table
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn point(&self, i: usize) -> (u64, u64) {
        self.points[i]
    }

    pub fn points(&self) -> &[(u64, u64)] {
        &self.points
    }

    pub fn index_u64(&self, c: u64, d: u64) -> Option<usize> {
        let n = self.level;
        let v = self.lookup[((c % n) * n + d % n) as usize];
        (v != NO_POINT).then_some(v as usize)
    }

    /// Index of the class of `(c : d)`, if it is a point of P¹(Z/N).
    pub fn index_of(&self, c: &BigInt, d: &BigInt) -> Option<usize> {
        self.index_u64(mod_n(c, self.level), mod_n(d, self.level))
    }

    /// `(c, d) · g` for integral `g`.
    pub fn apply(&self, i: usize, g: &GroupElement) -> usize {
        let [a, b, c, d] = g
            .integer_entries()
            .expect("P¹ action needs an integral matrix");
        let (x, y) = self.points[i];
        let (x, y) = (BigInt::from(x), BigInt::from(y));
        self.index_of(&(&x * &a + &y * &c), &(&x * &b + &y * &d))
            .expect("P¹ action must preserve primitivity")
    }

    pub fn s_action(&self) -> &[usize] {
        &self.s_action
    }

    pub fn t_action(&self) -> &[usize] {
        &self.t_action
    }

    /// The coset Γ₀(N)·g of an element of SL₂(Z) is labelled by its bottom row.
    pub fn right_coset_of(&self, g: &GroupElement) -> Option<usize> {
        let [_, _, c, d] = g.integer_entries().ok()?;
        self.index_of(&c, &d)
    }
}

/// Complete P¹(Z/N) table with the right actions of S and T.
pub fn coset_action(level: u64) -> Arc<P1Table> {
    Arc::new(P1Table::new(level))
}

/// Γ ⊂ SL₂(Z) of one of the four standard congruence kinds.
#[derive(Clone)]
pub struct CongruenceSubgroup {
    kind: GroupKind,
    level: u64,
    index: u64,
    p1: Option<Arc<P1Table>>,
    generators: Option<Arc<Vec<GroupElement>>>,
}

impl PartialEq for CongruenceSubgroup {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind && self.level == other.level
    }
}
impl Eq for CongruenceSubgroup {}

impl fmt::Debug for CongruenceSubgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for CongruenceSubgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            GroupKind::Sl2z => write!(f, "SL2(Z)"),
            GroupKind::Gamma0 => write!(f, "Gamma0({})", self.level),
            GroupKind::Gamma1 => write!(f, "Gamma1({})", self.level),
            GroupKind::Gamma => write!(f, "Gamma({})", self.level),
        }
    }
}

/// JSON form `{"kind": "gamma0", "level": 11}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupSpec {
    pub kind: GroupKind,
    pub level: u64,
}

impl CongruenceSubgroup {
    pub fn new(kind: GroupKind, level: u64) -> Result<Self> {
        if level == 0 {
            return Err(Error::Unsupported("level must be positive".into()));
        }
        if kind == GroupKind::Sl2z && level != 1 {
            return Err(Error::Unsupported("SL2(Z) has level 1".into()));
        }
        let (index, p1) = match kind {
            GroupKind::Sl2z | GroupKind::Gamma0 => {
                let table = coset_action(level);
                let index = oracle::index_gamma0(level);
                if table.len() as u64 != index {
                    return Err(Error::Inconsistent(format!(
                        "P1(Z/{level}) has {} points, index formula gives {index}",
                        table.len()
                    )));
                }
                (index, Some(table))
            }
            GroupKind::Gamma1 => (oracle::index_gamma1(level), None),
            GroupKind::Gamma => (oracle::index_gamma_full(level), None),
        };
        let mut group = CongruenceSubgroup {
            kind,
            level,
            index,
            p1,
            generators: None,
        };
        if let Some(table) = &group.p1 {
            let gens = schreier_generators(table);
            if let Some(bad) = gens.iter().find(|g| !group.contains(g)) {
                return Err(Error::Inconsistent(format!("Schreier generator {bad} not in {group}")));
            }
            group.generators = Some(Arc::new(gens));
        }
        Ok(group)
    }

    pub fn sl2z() -> Self {
        Self::new(GroupKind::Sl2z, 1).expect("SL2(Z) construction")
    }

    pub fn gamma0(level: u64) -> Result<Self> {
        if level == 1 {
            return Ok(Self::sl2z());
        }
        Self::new(GroupKind::Gamma0, level)
    }

    pub fn gamma1(level: u64) -> Result<Self> {
        Self::new(GroupKind::Gamma1, level)
    }

    pub fn gamma(level: u64) -> Result<Self> {
        Self::new(GroupKind::Gamma, level)
    }

    pub fn from_spec(spec: GroupSpec) -> Result<Self> {
        match spec.kind {
            GroupKind::Gamma0 => Self::gamma0(spec.level),
            kind => Self::new(kind, spec.level),
        }
    }

    pub fn spec(&self) -> GroupSpec {
        GroupSpec {
            kind: self.kind,
            level: self.level,
        }
    }

    pub fn kind(&self) -> GroupKind {
        self.kind
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    /// Index in SL₂(Z).
    pub fn index(&self) -> u64 {
        self.index
    }

    pub fn is_sl2z(&self) -> bool {
        self.kind == GroupKind::Sl2z
    }

    /// The P¹(Z/N) table, for the kinds that are described by it.
    pub fn p1(&self) -> Option<&Arc<P1Table>> {
        self.p1.as_ref()
    }

    pub fn contains(&self, x: &GroupElement) -> bool {
        let Ok([a, b, c, d]) = x.integer_entries() else {
            return false;
        };
        if !(&a * &d - &b * &c).is_one() {
            return false;
        }
        let n = self.level;
        let r = |v: &BigInt| mod_n(v, n);
        match self.kind {
            GroupKind::Sl2z => true,
            GroupKind::Gamma0 => r(&c) == 0,
            GroupKind::Gamma1 => r(&c) == 0 && r(&a) == 1 % n && r(&d) == 1 % n,
            GroupKind::Gamma => r(&b) == 0 && r(&c) == 0 && r(&a) == 1 % n && r(&d) == 1 % n,
        }
    }

    /// Generators of Γ, cached at construction.
    pub fn generators(&self) -> Result<&[GroupElement]> {
        self.generators
            .as_deref()
            .map(|v| v.as_slice())
            .ok_or_else(|| Error::Unsupported(format!("generators of {self}")))
    }
}

/// Schreier generators t_r·s·t_{r·s}⁻¹ for s ∈ {S, T}, with the transversal
/// built by breadth-first search from (0 : 1).
fn schreier_generators(table: &P1Table) -> Vec<GroupElement> {
    let (transversal, _) = transversal(table);
    let gens = [GroupElement::s(), GroupElement::t()];
    let mut out: Vec<GroupElement> = Vec::new();
    for (r, t_r) in transversal.iter().enumerate() {
        for (k, s) in gens.iter().enumerate() {
            let target = if k == 0 { table.s_action[r] } else { table.t_action[r] };
            let g = t_r.mul(s).mul(&transversal[target].inverse());
            if !g.is_identity() && !out.contains(&g) {
                out.push(g);
            }
        }
    }
    if out.is_empty() {
        out.push(GroupElement::identity());
    }
    out
}

/// BFS transversal `t_r` with `Γ₀(N)·t_r` the coset labelled `r`, plus the
/// BFS visiting order.
pub fn transversal(table: &P1Table) -> (Vec<GroupElement>, Vec<usize>) {
    let start = table.index_u64(0, 1).expect("(0:1) is a point");
    let mut reps: Vec<Option<GroupElement>> = vec![None; table.len()];
    reps[start] = Some(GroupElement::identity());
    let mut order = vec![start];
    let mut queue = VecDeque::from([start]);
    while let Some(r) = queue.pop_front() {
        let t_r = reps[r].clone().unwrap();
        for (target, s) in [
            (table.s_action[r], GroupElement::s()),
            (table.t_action[r], GroupElement::t()),
        ] {
            if reps[target].is_none() {
                reps[target] = Some(t_r.mul(&s));
                order.push(target);
                queue.push_back(target);
            }
        }
    }
    let reps = reps
        .into_iter()
        .map(|r| r.expect("S and T act transitively on P1(Z/N)"))
        .collect();
    (reps, order)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::WordSampler;

    fn m(s: &str) -> GroupElement {
        s.parse().unwrap()
    }

    #[test]
    fn membership_examples() {
        let g = CongruenceSubgroup::gamma0(11).unwrap();
        assert!(g.contains(&m("1,1;0,1")));
        assert!(!g.contains(&m("0,-1;1,0")));
        assert!(!g.contains(&m("2,0;0,1/2")));
        assert!(!g.contains(&m("1,0;0,2")));
        let g1 = CongruenceSubgroup::gamma1(5).unwrap();
        assert!(g1.contains(&m("1,1;5,6")));
        assert!(!g1.contains(&m("2,1;5,3")));
        let gf = CongruenceSubgroup::gamma(3).unwrap();
        assert!(!gf.contains(&m("2,1;3,2")));
        assert!(gf.contains(&m("4,3;9,7")));
        assert!(gf.contains(&m("1,3;0,1")));
        assert!(!gf.contains(&m("1,1;0,1")));
    }

    #[test]
    fn coset_table_sizes() {
        assert_eq!(coset_action(1).len(), 1);
        assert_eq!(coset_action(11).len(), 12);
        assert_eq!(coset_action(14).len(), 24);
        for n in 1..=30 {
            let t = coset_action(n);
            assert_eq!(t.len() as u64, oracle::index_gamma0(n), "N = {n}");
            // S and T act by permutations.
            let mut s = t.s_action().to_vec();
            s.sort();
            s.dedup();
            assert_eq!(s.len(), t.len());
            let mut tt = t.t_action().to_vec();
            tt.sort();
            tt.dedup();
            assert_eq!(tt.len(), t.len());
        }
    }

    #[test]
    fn orbit_of_zero_one_is_everything() {
        for n in 1..=30 {
            let t = coset_action(n);
            let (_, order) = transversal(&t);
            assert_eq!(order.len(), t.len());
        }
    }

    #[test]
    fn canonical_representatives() {
        let t = coset_action(12);
        // (5 : 10) ~ (1 : 2) since 5 is a unit mod 12.
        assert_eq!(t.index_u64(5, 10), t.index_u64(1, 2));
        assert_eq!(t.point(t.index_u64(5, 10).unwrap()), (1, 2));
        assert_eq!(t.index_u64(2, 4), None);
    }

    #[test]
    fn sl2z_generators_are_s_and_t() {
        let g = CongruenceSubgroup::sl2z();
        assert_eq!(g.generators().unwrap(), &[GroupElement::s(), GroupElement::t()]);
    }

    #[test]
    fn schreier_certificate() {
        for n in [2, 11, 14, 15] {
            let g = CongruenceSubgroup::gamma0(n).unwrap();
            let table = g.p1().unwrap();
            let (reps, _) = transversal(table);
            for (r, t_r) in reps.iter().enumerate() {
                assert_eq!(table.right_coset_of(t_r), Some(r));
                for (s, target) in [(GroupElement::s(), table.s_action()[r]), (GroupElement::t(), table.t_action()[r])] {
                    assert!(g.contains(&t_r.mul(&s).mul(&reps[target].inverse())));
                }
            }
            let gens = g.generators().unwrap();
            assert!(gens.len() <= 2 * table.len());
            assert!(gens.iter().all(|x| g.contains(x)));
        }
    }

    #[test]
    fn words_in_generators_stay_in_group() {
        let g = CongruenceSubgroup::gamma0(14).unwrap();
        let mut sampler = WordSampler::new(&g, 7).unwrap();
        for _ in 0..50 {
            assert!(g.contains(&sampler.element()));
        }
    }

    #[test]
    fn gamma0_two_generators_reach_every_stabilizer_coset() {
        // Every generator fixes the coset (0:1), and the BFS transversal
        // reaches all three cosets, so the generated group is the full stabilizer.
        let g = CongruenceSubgroup::gamma0(2).unwrap();
        let table = g.p1().unwrap();
        let start = table.index_u64(0, 1).unwrap();
        for x in g.generators().unwrap() {
            assert_eq!(table.apply(start, x), start);
        }
        assert_eq!(table.len(), 3);
    }

    #[test]
    fn unsupported_generators() {
        let g = CongruenceSubgroup::gamma1(5).unwrap();
        assert!(matches!(g.generators(), Err(Error::Unsupported(_))));
        assert!(CongruenceSubgroup::new(GroupKind::Sl2z, 3).is_err());
    }
}
