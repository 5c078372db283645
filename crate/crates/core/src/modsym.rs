//! Weight-2 modular symbols for Γ₀(N) and Hecke operators as integer matrices.
//!
//! Manin symbols are the points (c : d) of P¹(Z/N); the symbol of (c : d) is
//! the path {g·0, g·∞} for any g ∈ SL₂(Z) with bottom row ≡ (c, d). The space
//! is the free quotient of Z[P¹(Z/N)] by x + x·S and x + x·R + x·R².
//!
//! For ΓaΓ = ⊔ a_i·Γ the operator is x ↦ Σ_i adj(a_i)·x on paths, which is
//! well defined on Γ\H because ΓaΓ = ⊔ Γ·a_i⁻¹ as well. Matrices use row
//! vectors: row k is the image of basis element k, so composing operators
//! multiplies matrices left to right and matrix(A⋆B) = matrix(A)·matrix(B).

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::arith::{Cusp, GroupElement};
use crate::congruence::{CongruenceSubgroup, P1Table};
use crate::cosets::CosetDecomposition;
use crate::error::{Error, Result};
use crate::hecke_ring::HeckeElement;
use crate::linalg::{self, IntMat};
use crate::oracle;
use crate::report::CheckReport;

/// The quotient of the Manin-symbol module by the relations.
#[derive(Clone, Debug)]
pub struct ManinBasis {
    pub level: u64,
    pub p1: Arc<P1Table>,
    /// Relation vectors over the symbols (2-term, then 3-term).
    pub relations: IntMat,
    /// Rank of the relation matrix.
    pub rank: usize,
    pub dim: usize,
    /// `coords[s]`: quotient coordinates of symbol s.
    coords: IntMat,
    /// `lifts[k]`: basis element k as an integer combination of symbols.
    lifts: IntMat,
    /// `dual[l]`: functionals on symbols vanishing on relations, dual to the lifts.
    dual: IntMat,
    /// `matrices[s]`: some g ∈ SL₂(Z) with bottom row in class s.
    matrices: Vec<GroupElement>,
}

/// Γ₀(N)-classes of cusps and the boundary map.
#[derive(Clone, Debug)]
pub struct CuspClassSet {
    /// a/c representatives, one per class.
    pub reps: Vec<Cusp>,
    /// Class of g·∞ for the symbol s.
    pub class_of_symbol: Vec<usize>,
    /// dim × |classes|: row k is ∂ of basis element k.
    pub boundary: IntMat,
}

#[derive(Clone, Debug)]
pub struct ModularSymbols {
    pub group: CongruenceSubgroup,
    pub basis: ManinBasis,
    pub cusps: CuspClassSet,
    /// Rows: a Z-basis of the cuspidal lattice, in basis coordinates.
    pub cuspidal: IntMat,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HeckeMatrix {
    pub label: String,
    pub cuspidal: bool,
    #[serde(serialize_with = "ser_matrix")]
    pub matrix: IntMat,
}

fn ser_matrix<S: serde::Serializer>(m: &IntMat, s: S) -> std::result::Result<S::Ok, S::Error> {
    let rows: Vec<Vec<String>> = m.iter().map(|r| r.iter().map(ToString::to_string).collect()).collect();
    rows.serialize(s)
}

/// Some g ∈ SL₂(Z) with bottom row ≡ (c, d) mod N.
fn lift_to_sl2(c: u64, d: u64, n: u64) -> GroupElement {
    let c = if c == 0 { n as i64 } else { c as i64 };
    let mut d = d as i64;
    while c.gcd(&d) != 1 {
        d += n as i64;
    }
    // a·d − b·c = 1
    let e = d.extended_gcd(&c);
    let (a, b) = (e.x * e.gcd, -e.y * e.gcd);
    GroupElement::from_ints(a, b, c, d).expect("determinant one")
}

/// g ∈ SL₂(Z) with g·∞ = x.
fn matrix_at_cusp(x: &Cusp) -> GroupElement {
    let (a, c) = x.lowest_terms();
    let e = a.extended_gcd(&c);
    let (s, t) = if e.gcd.is_negative() { (-e.x, -e.y) } else { (e.x, e.y) };
    // a·s + c·t = 1, so [[a, −t], [c, s]] has determinant one.
    GroupElement::from_bigints(a, -t, c, s).expect("determinant one")
}

/// Σ terms of {∞, r}: one Manin symbol index per convergent, all with sign +1.
fn infinity_to(p1: &P1Table, r: &Cusp) -> Vec<usize> {
    let Cusp::Finite(r) = r else {
        return Vec::new();
    };
    let (mut num, mut den) = (r.numer().clone(), r.denom().clone());
    let (mut p2, mut p1_) = (BigInt::zero(), BigInt::one());
    let (mut q2, mut q1) = (BigInt::one(), BigInt::zero());
    let mut out = Vec::new();
    loop {
        let (ak, rem) = num.div_mod_floor(&den);
        let p = &ak * &p1_ + &p2;
        let q = &ak * &q1 + &q2;
        // {p_{k−1}/q_{k−1}, p_k/q_k} = g·{0, ∞} with g = [[p_k, p_{k−1}], [q_k, q_{k−1}]],
        // negating the first column when det g = −1.
        let det = &p * &q1 - &p1_ * &q;
        let c = if det.is_negative() { -q.clone() } else { q.clone() };
        out.push(p1.index_of(&c, &q1).expect("convergent denominators are coprime"));
        p2 = std::mem::replace(&mut p1_, p);
        q2 = std::mem::replace(&mut q1, q);
        if rem.is_zero() {
            break;
        }
        num = std::mem::replace(&mut den, rem);
    }
    out
}

impl ManinBasis {
    pub fn new(level: u64) -> ManinBasis {
        let p1 = crate::congruence::coset_action(level);
        let m = p1.len();
        let r = GroupElement::from_ints(0, -1, 1, -1).expect("R");
        let mut relations = Vec::new();
        let mut seen = vec![false; m];
        for s in 0..m {
            if !seen[s] {
                let t = p1.s_action()[s];
                seen[s] = true;
                seen[t] = true;
                let mut row = vec![BigInt::zero(); m];
                row[s] += 1;
                row[t] += 1;
                relations.push(row);
            }
        }
        let mut seen = vec![false; m];
        for s in 0..m {
            if !seen[s] {
                let t = p1.apply(s, &r);
                let u = p1.apply(t, &r);
                for x in [s, t, u] {
                    seen[x] = true;
                }
                let mut row = vec![BigInt::zero(); m];
                for x in [s, t, u] {
                    row[x] += 1;
                }
                relations.push(row);
            }
        }
        let red = linalg::column_reduce(&relations, m);
        let rank = red.rank;
        let dim = m - rank;
        let coords = red.v.iter().map(|row| row[rank..].to_vec()).collect();
        let lifts = red.v_inv[rank..].to_vec();
        let dual = (rank..m).map(|j| red.v.iter().map(|row| row[j].clone()).collect()).collect();
        let matrices = (0..m)
            .map(|s| {
                let (c, d) = p1.point(s);
                lift_to_sl2(c, d, level)
            })
            .collect();
        ManinBasis {
            level,
            p1,
            relations,
            rank,
            dim,
            coords,
            lifts,
            dual,
            matrices,
        }
    }

    pub fn symbols(&self) -> usize {
        self.p1.len()
    }

    pub fn symbol_matrix(&self, s: usize) -> &GroupElement {
        &self.matrices[s]
    }

    pub fn lifts(&self) -> &IntMat {
        &self.lifts
    }

    /// Quotient coordinates of the symbol s.
    pub fn coords(&self, s: usize) -> &[BigInt] {
        &self.coords[s]
    }

    /// {α, β} as signed Manin symbols: {∞, β} − {∞, α}.
    pub fn path_symbols(&self, alpha: &Cusp, beta: &Cusp) -> Vec<(usize, i64)> {
        let mut out: Vec<(usize, i64)> = infinity_to(&self.p1, beta).into_iter().map(|s| (s, 1)).collect();
        out.extend(infinity_to(&self.p1, alpha).into_iter().map(|s| (s, -1)));
        out
    }

    /// {α, β} in quotient coordinates.
    pub fn path_reduce(&self, alpha: &Cusp, beta: &Cusp) -> Vec<BigInt> {
        let mut v = vec![BigInt::zero(); self.dim];
        for (s, sign) in self.path_symbols(alpha, beta) {
            for (x, c) in v.iter_mut().zip(&self.coords[s]) {
                *x += c * sign;
            }
        }
        v
    }

    /// Symbol-level matrix of x ↦ Σ_i adj(a_i)·x (row s = image of symbol s).
    fn symbol_operator(&self, dec: &CosetDecomposition) -> IntMat {
        let m = self.symbols();
        let adj: Vec<GroupElement> = dec.reps().iter().map(GroupElement::adjugate).collect();
        let mut out = linalg::zeros(m, m);
        for (s, g) in self.matrices.iter().enumerate() {
            let (zero, inf) = (g.act(&Cusp::integer(0)), g.act(&Cusp::Infinity));
            for h in &adj {
                for (t, sign) in self.path_symbols(&h.act(&zero), &h.act(&inf)) {
                    out[s][t] += sign;
                }
            }
        }
        out
    }
}

impl CuspClassSet {
    fn new(basis: &ManinBasis) -> CuspClassSet {
        let p1 = &basis.p1;
        let m = p1.len();
        let mut class_of_symbol = vec![usize::MAX; m];
        let mut reps = Vec::new();
        for s in 0..m {
            if class_of_symbol[s] != usize::MAX {
                continue;
            }
            let k = reps.len();
            reps.push(basis.matrices[s].act(&Cusp::Infinity));
            let mut t = s;
            while class_of_symbol[t] == usize::MAX {
                class_of_symbol[t] = k;
                t = p1.t_action()[t];
            }
        }
        let mut cusps = CuspClassSet {
            reps,
            class_of_symbol,
            boundary: Vec::new(),
        };
        let symbol_boundary: IntMat = (0..m)
            .map(|s| {
                let mut row = vec![BigInt::zero(); cusps.reps.len()];
                row[cusps.class_of_symbol[s]] += 1;
                row[cusps.class_of_symbol[p1.s_action()[s]]] -= 1;
                row
            })
            .collect();
        cusps.boundary = linalg::mul(&basis.lifts, &symbol_boundary);
        cusps
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    /// Class of an arbitrary cusp.
    pub fn class_of(&self, basis: &ManinBasis, x: &Cusp) -> usize {
        let g = matrix_at_cusp(x);
        let s = basis.p1.right_coset_of(&g).expect("SL₂(Z) bottom rows are primitive");
        self.class_of_symbol[s]
    }
}

fn check_level(dec: &CosetDecomposition, level: u64) -> Result<()> {
    let det = dec.a().det();
    let d = det.to_integer();
    if !det.is_integer() || !d.gcd(&BigInt::from(level)).is_one() {
        return Err(Error::BadDeterminant {
            det: det.to_string(),
            level,
        });
    }
    Ok(())
}

impl ModularSymbols {
    pub fn new(level: u64) -> Result<ModularSymbols> {
        let group = CongruenceSubgroup::gamma0(level)?;
        let basis = ManinBasis::new(level);
        let cusps = CuspClassSet::new(&basis);
        let cuspidal = linalg::left_kernel(&cusps.boundary, basis.dim);
        Ok(ModularSymbols {
            group,
            basis,
            cusps,
            cuspidal,
        })
    }

    pub fn level(&self) -> u64 {
        self.basis.level
    }

    pub fn dim(&self) -> usize {
        self.basis.dim
    }

    pub fn cuspidal_dim(&self) -> usize {
        self.cuspidal.len()
    }

    /// Matrix of x ↦ Σ_i adj(a_i)·x on the full space.
    pub fn hecke_matrix(&self, dec: &CosetDecomposition) -> Result<HeckeMatrix> {
        self.check_group(dec)?;
        let sym = self.basis.symbol_operator(dec);
        let matrix = linalg::mul(&linalg::mul(&self.basis.lifts, &sym), &self.basis.coords);
        Ok(HeckeMatrix {
            label: dec.a().to_string(),
            cuspidal: false,
            matrix,
        })
    }

    fn check_group(&self, dec: &CosetDecomposition) -> Result<()> {
        if dec.group() != &self.group {
            return Err(Error::GroupMismatch(dec.group().to_string(), self.group.to_string()));
        }
        check_level(dec, self.level())
    }

    /// Σ coeff·matrix over the terms of a Hecke-ring element.
    pub fn element_matrix(&self, x: &HeckeElement) -> Result<HeckeMatrix> {
        let d = self.dim();
        let mut m = linalg::zeros(d, d);
        for (c, k) in x.terms() {
            m = linalg::add(&m, &linalg::scale(&self.hecke_matrix(c.decomposition())?.matrix, k));
        }
        Ok(HeckeMatrix {
            label: x.to_string(),
            cuspidal: false,
            matrix: m,
        })
    }

    /// The induced action on cusp classes: row c = Σ_i [adj(a_i)·rep_c].
    pub fn cusp_matrix(&self, dec: &CosetDecomposition) -> Result<IntMat> {
        self.check_group(dec)?;
        let n = self.cusps.len();
        let mut out = linalg::zeros(n, n);
        for (c, x) in self.cusps.reps.iter().enumerate() {
            for a in dec.reps() {
                out[c][self.cusps.class_of(&self.basis, &a.adjugate().act(x))] += 1;
            }
        }
        Ok(out)
    }

    /// Restriction to the cuspidal lattice, in the basis `self.cuspidal`.
    pub fn restrict_cuspidal(&self, t: &HeckeMatrix) -> Result<HeckeMatrix> {
        let rhs = linalg::mul(&self.cuspidal, &t.matrix);
        let label = t.label.clone();
        if self.cuspidal.is_empty() {
            return Ok(HeckeMatrix {
                label,
                cuspidal: true,
                matrix: Vec::new(),
            });
        }
        let x = linalg::solve_left(&self.cuspidal, &rhs)
            .ok_or_else(|| Error::Inconsistent(format!("{label} does not preserve the cuspidal subspace")))?;
        let matrix = linalg::to_integral(&x)
            .ok_or_else(|| Error::Inconsistent(format!("{label} is not integral on the cuspidal lattice")))?;
        Ok(HeckeMatrix {
            label,
            cuspidal: true,
            matrix,
        })
    }

    pub fn t_p(&self, p: i64) -> Result<HeckeMatrix> {
        let coset = crate::hecke_ring::DoubleCoset::new(&self.group, &GroupElement::diag(1, p)?)?;
        self.hecke_matrix(coset.decomposition())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EigenData {
    #[serde(serialize_with = "ser_ints")]
    pub charpoly: Vec<BigInt>,
    pub eigenvalues: Vec<(String, usize)>,
}

fn ser_ints<S: serde::Serializer>(v: &[BigInt], s: S) -> std::result::Result<S::Ok, S::Error> {
    let v: Vec<String> = v.iter().map(ToString::to_string).collect();
    v.serialize(s)
}

/// Characteristic polynomial (c_0 first) and integer roots with multiplicity.
pub fn eigen_data(t: &HeckeMatrix) -> EigenData {
    let charpoly = linalg::charpoly(&t.matrix);
    let eigenvalues = linalg::integer_roots(&charpoly)
        .into_iter()
        .map(|(r, k)| (r.to_string(), k))
        .collect();
    EigenData { charpoly, eigenvalues }
}

/// ⟨T_a x, φ⟩ = ⟨x, T_{a'} φ⟩ with a' = adj(a), where the dual action is
/// computed separately on functionals over Manin symbols.
pub fn pairing_adjointness_check(space: &ModularSymbols, a: &GroupElement) -> Result<CheckReport> {
    let mut r = CheckReport::new("pairing-adjoint");
    let coset = crate::hecke_ring::DoubleCoset::new(&space.group, a)?;
    let adj_coset = crate::hecke_ring::DoubleCoset::new(&space.group, &a.adjugate())?;
    let t = space.hecke_matrix(coset.decomposition())?.matrix;
    check_level(adj_coset.decomposition(), space.level())?;
    let sym = space.basis.symbol_operator(adj_coset.decomposition());
    let b = &space.basis;
    // Pairing matrix between lifts and dual functionals (identity by construction).
    let pairing = linalg::mul(&b.lifts, &linalg::transpose(&b.dual));
    r.record(pairing == linalg::identity(b.dim), || "lifts and dual basis are not dual".into());
    // T'φ_l = sym·φ_l as a functional; express it in the dual basis.
    let images: IntMat = b.dual.iter().map(|phi| linalg::vec_mul(phi, &linalg::transpose(&sym))).collect();
    for (l, img) in images.iter().enumerate() {
        let kills_relations = b.relations.iter().all(|rel| rel.iter().zip(img).map(|(x, y)| x * y).sum::<BigInt>().is_zero());
        r.record(kills_relations, || format!("T' of dual vector {l} does not vanish on relations"));
    }
    let dual_matrix = linalg::solve_left(&b.dual, &images)
        .and_then(|x| linalg::to_integral(&x))
        .ok_or_else(|| Error::Inconsistent("dual action leaves the dual lattice".into()))?;
    // ⟨T x_k, φ_l⟩ = (T·P)[k][l] and ⟨x_k, T'φ_l⟩ = (P·Dᵀ)[k][l].
    let lhs = linalg::mul(&t, &pairing);
    let rhs = linalg::mul(&pairing, &linalg::transpose(&dual_matrix));
    r.record(lhs == rhs, || format!("transpose identity fails for {a}"));
    Ok(r)
}

/// matrix(A⋆B) = matrix(A)·matrix(B) = matrix(B)·matrix(A).
pub fn ring_hom_check(space: &ModularSymbols, a: &HeckeElement, b: &HeckeElement) -> Result<CheckReport> {
    let mut r = CheckReport::new("ring-hom");
    let prod = a.mul(b)?;
    let (ma, mb, mab) = (space.element_matrix(a)?, space.element_matrix(b)?, space.element_matrix(&prod)?);
    let ab = linalg::mul(&ma.matrix, &mb.matrix);
    let ba = linalg::mul(&mb.matrix, &ma.matrix);
    r.record(mab.matrix == ab, || format!("matrix({a} * {b}) != matrix·matrix"));
    r.record(mab.matrix == ba, || format!("matrix({a} * {b}) != reversed product"));
    Ok(r)
}

/// Boundary compatibility ∂∘T = T_cusp∘∂ and the eigenvalue deg(T) on the
/// boundary image.
pub fn boundary_checks(space: &ModularSymbols, dec: &CosetDecomposition) -> Result<Vec<CheckReport>> {
    let t = space.hecke_matrix(dec)?;
    let tc = space.cusp_matrix(dec)?;
    let bd = &space.cusps.boundary;
    let mut compat = CheckReport::new("boundary-compatible");
    compat.record(linalg::mul(&t.matrix, bd) == linalg::mul(bd, &tc), || format!("{}", dec.a()));
    let mut eis = CheckReport::new("boundary-eigenvalue");
    let deg = BigInt::from(dec.degree());
    eis.record(linalg::mul(bd, &tc) == linalg::scale(bd, &deg), || {
        format!("{} does not act by {deg} on the boundary image", dec.a())
    });
    Ok(vec![compat, eis])
}

/// Dimension and cusp count against the genus formula.
pub fn dimension_check(space: &ModularSymbols) -> CheckReport {
    let n = space.level();
    let mut r = CheckReport::new(format!("dimension-{n}"));
    r.record(space.dim() as u64 == oracle::modular_symbols_dimension(n), || {
        format!("dim {} vs oracle {}", space.dim(), oracle::modular_symbols_dimension(n))
    });
    r.record(space.cusps.len() as u64 == oracle::cusp_count(n), || {
        format!("{} cusp classes vs oracle {}", space.cusps.len(), oracle::cusp_count(n))
    });
    r.record(space.cuspidal_dim() as u64 == 2 * oracle::genus(n), || {
        format!("cuspidal dim {} vs 2g = {}", space.cuspidal_dim(), 2 * oracle::genus(n))
    });
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hecke_ring::DoubleCoset;
    use crate::oracle::{ap_oracle, Curve};
    use rand::{Rng, SeedableRng};

    fn b(x: i64) -> BigInt {
        BigInt::from(x)
    }

    #[test]
    fn dimensions() {
        for n in [1, 11, 14, 15, 17, 23, 37] {
            let space = ModularSymbols::new(n).unwrap();
            assert!(dimension_check(&space).passed(), "N = {n}");
            assert!(linalg::mul(&space.cuspidal, &space.cusps.boundary).iter().flatten().all(Zero::is_zero));
        }
        let s11 = ModularSymbols::new(11).unwrap();
        assert_eq!((s11.dim(), s11.cusps.len(), s11.cuspidal_dim()), (3, 2, 2));
        assert_eq!(ModularSymbols::new(1).unwrap().dim(), 0);
    }

    #[test]
    fn paths() {
        let s = ModularSymbols::new(11).unwrap();
        let basis = &s.basis;
        let zero = Cusp::integer(0);
        assert!(basis.path_reduce(&zero, &zero).iter().all(Zero::is_zero));
        let identity_symbol = basis.p1.index_u64(0, 1).unwrap();
        assert_eq!(basis.path_reduce(&zero, &Cusp::Infinity), basis.coords(identity_symbol).to_vec());
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(4);
        let mut q = || Cusp::Finite(crate::arith::ratio(rng.gen_range(-60..60), rng.gen_range(1..40)));
        for _ in 0..100 {
            let (x, y, z) = (q(), q(), q());
            let lhs: Vec<BigInt> = basis
                .path_reduce(&x, &y)
                .iter()
                .zip(basis.path_reduce(&y, &z))
                .map(|(u, v)| u + v)
                .collect();
            assert_eq!(lhs, basis.path_reduce(&x, &z));
        }
    }

    #[test]
    fn hecke_on_level_eleven() {
        let s = ModularSymbols::new(11).unwrap();
        let id = DoubleCoset::new(&s.group, &GroupElement::identity()).unwrap();
        assert_eq!(s.hecke_matrix(id.decomposition()).unwrap().matrix, linalg::identity(3));
        for p in [2i64, 3, 5, 7, 13] {
            let t = s.t_p(p).unwrap();
            let tc = s.restrict_cuspidal(&t).unwrap();
            let ap = ap_oracle(&Curve::C11A1, p as u64).unwrap();
            let data = eigen_data(&tc);
            assert_eq!(data.charpoly, vec![b(ap * ap), b(-2 * ap), b(1)], "p = {p}");
            assert_eq!(data.eigenvalues, vec![(ap.to_string(), 2)]);
            let coset = DoubleCoset::new(&s.group, &GroupElement::diag(1, p).unwrap()).unwrap();
            for r in boundary_checks(&s, coset.decomposition()).unwrap() {
                assert!(r.passed(), "{r:?}");
            }
            assert!(pairing_adjointness_check(&s, &GroupElement::diag(1, p).unwrap()).unwrap().passed());
        }
        let tr: BigInt = (0..2).map(|i| s.restrict_cuspidal(&s.t_p(2).unwrap()).unwrap().matrix[i][i].clone()).sum();
        assert_eq!(tr, b(-4));
    }

    #[test]
    fn ring_homomorphism_and_recursion() {
        let s = ModularSymbols::new(11).unwrap();
        let t = |n| HeckeElement::t(&s.group, n).unwrap();
        for (x, y) in [(2, 2), (2, 3), (3, 5)] {
            assert!(ring_hom_check(&s, &t(x), &t(y)).unwrap().passed());
        }
        for p in [2i64, 3] {
            let tp = s.t_p(p).unwrap().matrix;
            let tpp = s.element_matrix(&HeckeElement::t_nn(&s.group, p).unwrap()).unwrap().matrix;
            let tp2 = s.element_matrix(&HeckeElement::t_classical(&s.group, p * p).unwrap()).unwrap().matrix;
            assert_eq!(tp2, linalg::add(&linalg::mul(&tp, &tp), &linalg::scale(&tpp, &b(-p))));
        }
    }

    #[test]
    fn bad_determinant() {
        let s = ModularSymbols::new(11).unwrap();
        let c = DoubleCoset::new(&s.group, &GroupElement::diag(1, 11).unwrap()).unwrap();
        assert!(matches!(s.hecke_matrix(c.decomposition()), Err(Error::BadDeterminant { .. })));
    }

    #[test]
    fn level_one_and_fifteen() {
        let s = ModularSymbols::new(1).unwrap();
        assert_eq!(s.restrict_cuspidal(&s.t_p(2).unwrap()).unwrap().matrix.len(), 0);
        let s = ModularSymbols::new(15).unwrap();
        assert_eq!(s.cuspidal_dim(), 2);
        let t2 = s.t_p(2).unwrap();
        let t7 = s.t_p(7).unwrap();
        assert_eq!(linalg::mul(&t2.matrix, &t7.matrix), linalg::mul(&t7.matrix, &t2.matrix));
        // 15a has a_2 = −1.
        assert_eq!(eigen_data(&s.restrict_cuspidal(&t2).unwrap()).eigenvalues, vec![("-1".into(), 2)]);
    }
}
