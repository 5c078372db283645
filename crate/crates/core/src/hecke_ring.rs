//! The Hecke ring Z[Γ, S]: double cosets, formal sums and the Shimura product.
//!
//! A product [ΓaΓ]·[ΓbΓ] is computed from the |I|·|J| products g_i·h_j of the
//! two right-coset decompositions. Those are bucketed by right coset, the
//! buckets grouped into double cosets, and each double coset k gets the
//! multiplicity m_k = #{(i, j) : g_i·h_j·Γ = z_k·Γ}. The witness keeps every
//! choice that was made so the bi-set layer can replay the counting argument.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use crate::arith::GroupElement;
use crate::congruence::CongruenceSubgroup;
use crate::cosets::{coset_key, decompose, CosetDecomposition, CosetKey, DEFAULT_CAP};
use crate::error::{Error, Result};

/// Bi-Γ-invariant name of a double coset.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CosetLabel {
    /// Elementary divisors; complete invariant for SL₂(Z).
    Smith(BigInt, BigInt),
    /// Least right-coset key inside the double coset (Γ₀(N)).
    MinCoset(CosetKey),
}

impl fmt::Display for CosetLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CosetLabel::Smith(d1, d2) => write!(f, "[{d1},{d2}]"),
            CosetLabel::MinCoset(k) => write!(f, "{k}"),
        }
    }
}

impl Serialize for CosetLabel {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Γ·a·Γ with its cached right-coset decomposition.
#[derive(Clone, Debug)]
pub struct DoubleCoset {
    label: CosetLabel,
    smith: (BigInt, BigInt),
    dec: Arc<CosetDecomposition>,
}

impl DoubleCoset {
    pub fn new(group: &CongruenceSubgroup, a: &GroupElement) -> Result<Arc<DoubleCoset>> {
        Self::with_cap(group, a, DEFAULT_CAP)
    }

    pub fn with_cap(group: &CongruenceSubgroup, a: &GroupElement, cap: usize) -> Result<Arc<DoubleCoset>> {
        let dec = Arc::new(decompose(group, a, cap)?);
        Self::from_decomposition(dec)
    }

    pub fn from_decomposition(dec: Arc<CosetDecomposition>) -> Result<Arc<DoubleCoset>> {
        let sf = dec.a().smith_form()?;
        let smith = (sf.d1, sf.d2);
        let label = if dec.group().is_sl2z() {
            CosetLabel::Smith(smith.0.clone(), smith.1.clone())
        } else {
            CosetLabel::MinCoset(dec.min_key().clone())
        };
        Ok(Arc::new(DoubleCoset { label, smith, dec }))
    }

    pub fn label(&self) -> &CosetLabel {
        &self.label
    }

    pub fn smith(&self) -> (&BigInt, &BigInt) {
        (&self.smith.0, &self.smith.1)
    }

    pub fn group(&self) -> &CongruenceSubgroup {
        self.dec.group()
    }

    pub fn rep(&self) -> &GroupElement {
        self.dec.a()
    }

    pub fn decomposition(&self) -> &Arc<CosetDecomposition> {
        &self.dec
    }

    pub fn degree(&self) -> usize {
        self.dec.degree()
    }

    pub fn contains(&self, x: &GroupElement) -> bool {
        self.dec.contains(x)
    }
}

#[derive(Serialize)]
struct DoubleCosetJson<'a> {
    label: &'a CosetLabel,
    smith: [String; 2],
    rep: &'a GroupElement,
    degree: usize,
}

impl Serialize for DoubleCoset {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        DoubleCosetJson {
            label: &self.label,
            smith: [self.smith.0.to_string(), self.smith.1.to_string()],
            rep: self.rep(),
            degree: self.degree(),
        }
        .serialize(s)
    }
}

/// b ∈ ΓaΓ, decided by coset membership; over SL₂(Z) the Smith pairs are
/// compared as well and must agree with the membership answer.
pub fn double_coset_eq(group: &CongruenceSubgroup, a: &GroupElement, b: &GroupElement) -> Result<bool> {
    for x in [a, b] {
        if !x.is_integral() {
            return Err(Error::NonIntegral(x.to_string()));
        }
    }
    let member = a.det() == b.det() && decompose(group, a, DEFAULT_CAP)?.contains(b);
    if group.is_sl2z() {
        let (sa, sb) = (a.smith_form()?, b.smith_form()?);
        let fast = (sa.d1, sa.d2) == (sb.d1, sb.d2);
        if fast != member {
            return Err(Error::Inconsistent(format!("Smith pairs and coset membership disagree on {a} vs {b}")));
        }
    }
    Ok(member)
}

/// One double coset Γz_kΓ of a product, with everything the counting argument uses.
#[derive(Clone, Debug)]
pub struct OrbitWitness {
    pub z: GroupElement,
    pub coset: Arc<DoubleCoset>,
    pub m: usize,
    /// (i(k,ℓ), j(k,ℓ)) for ℓ = 1..m_k, in increasing order.
    pub pairs: Vec<(usize, usize)>,
}

impl OrbitWitness {
    pub fn d(&self) -> usize {
        self.coset.degree()
    }

    /// γ^k_n with γ^k_n·z_k·Γ the n-th right coset; γ^k_1 = 1.
    pub fn transversal(&self) -> &[GroupElement] {
        self.coset.decomposition().deltas()
    }
}

#[derive(Clone, Debug)]
pub struct ProductWitness {
    pub left: Arc<CosetDecomposition>,
    pub right: Arc<CosetDecomposition>,
    pub orbits: Vec<OrbitWitness>,
}

impl ProductWitness {
    /// Σ_k m_k·d_k = |I|·|J|.
    pub fn check_counts(&self) -> Result<()> {
        let total: usize = self.orbits.iter().map(|o| o.m * o.d()).sum();
        let expected = self.left.degree() * self.right.degree();
        if total != expected {
            return Err(Error::Inconsistent(format!("sum m_k d_k = {total}, |I||J| = {expected}")));
        }
        Ok(())
    }

    /// z_{(k,ℓ)} = g_{i(k,ℓ)}·h_{j(k,ℓ)}, the anchor of the chosen pair.
    pub fn anchor(&self, k: usize, l: usize) -> GroupElement {
        let (i, j) = self.orbits[k].pairs[l];
        self.left.rep(i).mul(self.right.rep(j))
    }
}

#[derive(Serialize)]
struct OrbitJson<'a> {
    label: &'a CosetLabel,
    z: &'a GroupElement,
    m: usize,
    d: usize,
    pairs: &'a [(usize, usize)],
    transversal: &'a [GroupElement],
}

#[derive(Serialize)]
struct WitnessJson<'a> {
    left_degree: usize,
    right_degree: usize,
    orbits: Vec<OrbitJson<'a>>,
}

impl Serialize for ProductWitness {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        WitnessJson {
            left_degree: self.left.degree(),
            right_degree: self.right.degree(),
            orbits: self
                .orbits
                .iter()
                .map(|o| OrbitJson {
                    label: o.coset.label(),
                    z: &o.z,
                    m: o.m,
                    d: o.d(),
                    pairs: &o.pairs,
                    transversal: o.transversal(),
                })
                .collect(),
        }
        .serialize(s)
    }
}

/// Finite Z-linear combination of double cosets, keyed by canonical label.
#[derive(Clone, Debug)]
pub struct HeckeElement {
    group: CongruenceSubgroup,
    terms: BTreeMap<CosetLabel, (Arc<DoubleCoset>, BigInt)>,
}

impl PartialEq for HeckeElement {
    fn eq(&self, other: &Self) -> bool {
        self.group == other.group
            && self.terms.len() == other.terms.len()
            && self
                .terms
                .iter()
                .zip(&other.terms)
                .all(|((l1, (_, c1)), (l2, (_, c2)))| l1 == l2 && c1 == c2)
    }
}

impl Eq for HeckeElement {}

impl HeckeElement {
    pub fn zero(group: &CongruenceSubgroup) -> Self {
        HeckeElement {
            group: group.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn unit(group: &CongruenceSubgroup) -> Result<Self> {
        Self::from_matrix(group, &GroupElement::identity())
    }

    pub fn from_coset(coset: Arc<DoubleCoset>) -> Self {
        let mut x = Self::zero(coset.group());
        x.add_term(coset, BigInt::one());
        x
    }

    pub fn from_matrix(group: &CongruenceSubgroup, a: &GroupElement) -> Result<Self> {
        Ok(Self::from_coset(DoubleCoset::new(group, a)?))
    }

    /// [Γ·diag(1, n)·Γ].
    pub fn t(group: &CongruenceSubgroup, n: i64) -> Result<Self> {
        Self::from_matrix(group, &GroupElement::diag(1, n)?)
    }

    /// [Γ·diag(n, n)·Γ].
    pub fn t_nn(group: &CongruenceSubgroup, n: i64) -> Result<Self> {
        Self::from_matrix(group, &GroupElement::diag(n, n)?)
    }

    /// Classical T(n): every double coset of determinant n, i.e. Σ [diag(d1, d2)]
    /// over d1 | d2, d1·d2 = n. Differs from `t` exactly when n is not squarefree.
    pub fn t_classical(group: &CongruenceSubgroup, n: i64) -> Result<Self> {
        let level = group.level() as i64;
        if n < 1 || num_integer::gcd(n, level) != 1 {
            return Err(Error::BadDeterminant {
                det: n.to_string(),
                level: group.level(),
            });
        }
        let mut out = Self::zero(group);
        for d1 in (1..).take_while(|d| d * d <= n) {
            if n % (d1 * d1) == 0 {
                out = out.add(&Self::from_matrix(group, &GroupElement::diag(d1, n / d1)?)?)?;
            }
        }
        Ok(out)
    }

    pub fn group(&self) -> &CongruenceSubgroup {
        &self.group
    }

    pub fn add_term(&mut self, coset: Arc<DoubleCoset>, coeff: BigInt) {
        let label = coset.label().clone();
        let entry = self.terms.entry(label.clone()).or_insert((coset, BigInt::zero()));
        entry.1 += coeff;
        if entry.1.is_zero() {
            self.terms.remove(&label);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Arc<DoubleCoset>, &BigInt)> {
        self.terms.values().map(|(c, k)| (c, k))
    }

    pub fn coeff(&self, label: &CosetLabel) -> BigInt {
        self.terms.get(label).map(|t| t.1.clone()).unwrap_or_default()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &HeckeElement) -> Result<HeckeElement> {
        same_group(&self.group, &other.group)?;
        let mut out = self.clone();
        for (c, k) in other.terms() {
            out.add_term(c.clone(), k.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, k: &BigInt) -> HeckeElement {
        let mut out = Self::zero(&self.group);
        for (c, v) in self.terms() {
            out.add_term(c.clone(), v * k);
        }
        out
    }

    /// Σ coeff·deg over the terms.
    pub fn degree(&self) -> BigInt {
        self.terms().map(|(c, k)| k * BigInt::from(c.degree())).sum()
    }

    pub fn mul(&self, other: &HeckeElement) -> Result<HeckeElement> {
        hecke_mul(self, other)
    }
}

impl fmt::Display for HeckeElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (n, (label, (_, k))) in self.terms.iter().enumerate() {
            if n > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{k}*{label}")?;
        }
        Ok(())
    }
}

#[derive(Serialize)]
struct TermJson<'a> {
    label: &'a CosetLabel,
    coeff: String,
    rep: &'a GroupElement,
    degree: usize,
}

impl Serialize for HeckeElement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let terms: Vec<TermJson> = self
            .terms
            .iter()
            .map(|(label, (c, k))| TermJson {
                label,
                coeff: k.to_string(),
                rep: c.rep(),
                degree: c.degree(),
            })
            .collect();
        terms.serialize(s)
    }
}

fn same_group(a: &CongruenceSubgroup, b: &CongruenceSubgroup) -> Result<()> {
    if a != b {
        return Err(Error::GroupMismatch(a.to_string(), b.to_string()));
    }
    Ok(())
}

/// [ΓaΓ]·[ΓbΓ] = Σ_k m_k·[Γz_kΓ] with the full witness.
pub fn shimura_product(a: &DoubleCoset, b: &DoubleCoset) -> Result<(HeckeElement, ProductWitness)> {
    shimura_product_with_cap(a, b, DEFAULT_CAP)
}

pub fn shimura_product_with_cap(a: &DoubleCoset, b: &DoubleCoset, cap: usize) -> Result<(HeckeElement, ProductWitness)> {
    let group = a.group();
    same_group(group, b.group())?;
    let (left, right) = (a.decomposition(), b.decomposition());
    let mut buckets: BTreeMap<CosetKey, (GroupElement, Vec<(usize, usize)>)> = BTreeMap::new();
    for (i, g) in left.reps().iter().enumerate() {
        for (j, h) in right.reps().iter().enumerate() {
            let x = g.mul(h);
            let key = coset_key(group, &x).ok_or_else(|| Error::Unsupported(format!("coset keys for {group}")))?;
            // (i, j) are visited in increasing order, so the stored matrix is the least pair's.
            buckets.entry(key).or_insert_with(|| (x, Vec::new())).1.push((i, j));
        }
    }
    let mut assigned: HashMap<CosetKey, usize> = HashMap::new();
    let mut orbits = Vec::new();
    let mut result = HeckeElement::zero(group);
    for (key, (z, pairs)) in &buckets {
        if assigned.contains_key(key) {
            continue;
        }
        let k = orbits.len();
        let coset = DoubleCoset::with_cap(group, z, cap)?;
        let m = pairs.len();
        for other in coset.decomposition().keys() {
            // Every right coset of Γz_kΓ occurs among the products, each m_k times.
            let count = buckets.get(other).map_or(0, |b| b.1.len());
            if count != m {
                return Err(Error::Inconsistent(format!(
                    "multiplicity of {} is {m} on {key} but {count} on {other}",
                    coset.label()
                )));
            }
            assigned.insert(other.clone(), k);
        }
        result.add_term(coset.clone(), BigInt::from(m));
        orbits.push(OrbitWitness {
            z: z.clone(),
            coset,
            m,
            pairs: pairs.clone(),
        });
    }
    let witness = ProductWitness {
        left: left.clone(),
        right: right.clone(),
        orbits,
    };
    witness.check_counts()?;
    Ok((result, witness))
}

/// Bilinear extension of the Shimura product.
pub fn hecke_mul(x: &HeckeElement, y: &HeckeElement) -> Result<HeckeElement> {
    same_group(&x.group, &y.group)?;
    let mut out = HeckeElement::zero(&x.group);
    for (a, ka) in x.terms() {
        for (b, kb) in y.terms() {
            let (prod, _) = shimura_product(a, b)?;
            let k = ka * kb;
            for (c, kc) in prod.terms() {
                out.add_term(c.clone(), kc * &k);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::WordSampler;

    fn m(s: &str) -> GroupElement {
        s.parse().unwrap()
    }

    fn smith(d1: i64, d2: i64) -> CosetLabel {
        CosetLabel::Smith(BigInt::from(d1), BigInt::from(d2))
    }

    #[test]
    fn double_coset_equality() {
        let g = CongruenceSubgroup::sl2z();
        let a = m("1,0;0,4");
        assert!(double_coset_eq(&g, &a, &a).unwrap());
        assert!(double_coset_eq(&g, &a, &m("1,2;0,4")).unwrap());
        assert!(!double_coset_eq(&g, &a, &m("2,0;0,2")).unwrap());
        assert!(double_coset_eq(&g, &a, &m("2,1;3,2").mul(&a).mul(&m("1,3;0,1"))).unwrap());
        assert!(matches!(double_coset_eq(&g, &m("1/2,0;0,2"), &a), Err(Error::NonIntegral(_))));
    }

    #[test]
    fn t2_squared() {
        let g = CongruenceSubgroup::sl2z();
        let t2 = DoubleCoset::new(&g, &m("1,0;0,2")).unwrap();
        let (prod, w) = shimura_product(&t2, &t2).unwrap();
        // The diag(2,2) coset is hit by three of the nine products, not two.
        assert_eq!(prod.coeff(&smith(1, 4)), BigInt::from(1));
        assert_eq!(prod.coeff(&smith(2, 2)), BigInt::from(3));
        assert_eq!(prod.len(), 2);
        assert_eq!(w.orbits.iter().map(|o| (o.m, o.d())).collect::<Vec<_>>(), vec![(1, 6), (3, 1)]);
        assert_eq!(prod.degree(), BigInt::from(9));
    }

    #[test]
    fn t2_t3() {
        let g = CongruenceSubgroup::sl2z();
        let t2 = DoubleCoset::new(&g, &m("1,0;0,2")).unwrap();
        let t3 = DoubleCoset::new(&g, &m("1,0;0,3")).unwrap();
        let (prod, w) = shimura_product(&t2, &t3).unwrap();
        assert_eq!(prod.len(), 1);
        assert_eq!(prod.coeff(&smith(1, 6)), BigInt::from(1));
        assert_eq!(w.orbits.len(), 1);
        assert_eq!((w.orbits[0].m, w.orbits[0].d()), (1, 12));
        assert!(w.orbits[0].transversal()[0].is_identity());
    }

    #[test]
    fn classical_relation() {
        for g in [CongruenceSubgroup::sl2z(), CongruenceSubgroup::gamma0(11).unwrap()] {
            for p in [2i64, 3, 5] {
                let tp = HeckeElement::t(&g, p).unwrap();
                let lhs = tp.mul(&tp).unwrap();
                let rhs = HeckeElement::t_classical(&g, p * p)
                    .unwrap()
                    .add(&HeckeElement::t_nn(&g, p).unwrap().scale(&BigInt::from(p)))
                    .unwrap();
                assert_eq!(lhs, rhs, "p = {p}");
            }
        }
        let g = CongruenceSubgroup::sl2z();
        assert_eq!(HeckeElement::t_classical(&g, 6).unwrap(), HeckeElement::t(&g, 6).unwrap());
        assert_eq!(HeckeElement::t_classical(&g, 8).unwrap().len(), 2);
        assert!(HeckeElement::t_classical(&CongruenceSubgroup::gamma0(11).unwrap(), 22).is_err());
    }

    #[test]
    fn unit_and_commutativity() {
        for g in [CongruenceSubgroup::sl2z(), CongruenceSubgroup::gamma0(11).unwrap()] {
            let one = HeckeElement::unit(&g).unwrap();
            let t2 = HeckeElement::t(&g, 2).unwrap();
            let t3 = HeckeElement::t(&g, 3).unwrap();
            assert_eq!(one.mul(&t2).unwrap(), t2);
            assert_eq!(t2.mul(&one).unwrap(), t2);
            assert_eq!(one.degree(), BigInt::one());
            assert_eq!(t2.mul(&t3).unwrap(), t3.mul(&t2).unwrap());
            let lhs = t2.mul(&t2).unwrap().mul(&t2).unwrap();
            let rhs = t2.mul(&t2.mul(&t2).unwrap()).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn degree_is_multiplicative() {
        let g = CongruenceSubgroup::gamma0(11).unwrap();
        let gens: Vec<HeckeElement> = [(1, 2), (1, 3), (1, 5), (2, 2)]
            .iter()
            .map(|&(x, y)| HeckeElement::from_matrix(&g, &GroupElement::diag(x, y).unwrap()).unwrap())
            .collect();
        for x in &gens {
            for y in &gens {
                let xy = x.mul(y).unwrap();
                assert_eq!(xy.degree(), x.degree() * y.degree());
            }
        }
    }

    #[test]
    fn label_is_bi_invariant() {
        for g in [CongruenceSubgroup::sl2z(), CongruenceSubgroup::gamma0(6).unwrap()] {
            let a = m("1,0;0,5");
            let base = DoubleCoset::new(&g, &a).unwrap();
            let mut sampler = WordSampler::new(&g, 7).unwrap();
            for _ in 0..100 {
                let (x, y) = (sampler.element(), sampler.element());
                let c = DoubleCoset::new(&g, &x.mul(&a).mul(&y)).unwrap();
                assert_eq!(c.label(), base.label());
            }
        }
    }

    #[test]
    fn group_mismatch() {
        let a = DoubleCoset::new(&CongruenceSubgroup::sl2z(), &m("1,0;0,2")).unwrap();
        let b = DoubleCoset::new(&CongruenceSubgroup::gamma0(11).unwrap(), &m("1,0;0,2")).unwrap();
        assert!(matches!(shimura_product(&a, &b), Err(Error::GroupMismatch(..))));
    }
}
