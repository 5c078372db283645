//! Named, seeded verification suites (the `verify` subcommand).

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;

use crate::arith::GroupElement;
use crate::bimodule::{coset_checks, heckemod_check, tensor_checks, Algebra, Context};
use crate::bisets::{label_action, label_bijection, label_orbits, omega, omega_at, GammaProduct};
use crate::congruence::CongruenceSubgroup;
use crate::cosets::CosetDecomposition;
use crate::error::{Error, Result};
use crate::hecke_ring::{shimura_product, DoubleCoset, HeckeElement};
use crate::linalg;
use crate::modsym::{boundary_checks, dimension_check, eigen_data, pairing_adjointness_check, ring_hom_check, ModularSymbols};
use crate::oracle::{ap_oracle, Curve};
use crate::random::WordSampler;
use crate::report::CheckReport;

pub const SUITES: [&str; 8] = ["bieq", "cocycle", "commute", "eigs", "heckemod", "ring-hom", "shimura-witness", "unitary"];

pub const PRIMES: [i64; 5] = [2, 3, 5, 7, 13];

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub group: CongruenceSubgroup,
    pub a: GroupElement,
    pub b: GroupElement,
    pub seed: u64,
    pub trials: usize,
}

impl SuiteConfig {
    pub fn new(group: CongruenceSubgroup) -> Self {
        SuiteConfig {
            group,
            a: GroupElement::diag(1, 2).expect("diag"),
            b: GroupElement::diag(1, 3).expect("diag"),
            seed: 0,
            trials: 20,
        }
    }

    fn level(&self) -> u64 {
        self.group.level()
    }

    fn good_primes(&self) -> Vec<i64> {
        PRIMES.iter().copied().filter(|&p| self.level() % p as u64 != 0).collect()
    }
}

/// Runs one suite, or every suite for `"all"` (check names are then prefixed).
pub fn run(name: &str, cfg: &SuiteConfig) -> Result<Vec<CheckReport>> {
    if name == "all" {
        let mut out = Vec::new();
        for s in SUITES {
            out.extend(run(s, cfg)?.into_iter().map(|r| r.prefixed(s)));
        }
        return Ok(out);
    }
    match name {
        "cocycle" => cocycle(cfg),
        "bieq" => bieq(cfg),
        "shimura-witness" => shimura_witness(cfg),
        "unitary" => unitary(cfg),
        "heckemod" => heckemod(cfg),
        "ring-hom" => ring_hom(cfg),
        "commute" => commute(cfg),
        "eigs" => eigs(cfg),
        other => Err(Error::Unsupported(format!("unknown suite {other}"))),
    }
}

/// t_i(γ₁γ₂) = t_{γ₂(i)}(γ₁)·t_i(γ₂) and t_i(γ⁻¹) = t_{γ⁻¹(i)}(γ)⁻¹.
pub fn cocycle_checks(dec: &CosetDecomposition, seed: u64, trials: usize) -> Result<Vec<CheckReport>> {
    let group = dec.group();
    let mut s = WordSampler::new(group, seed)?;
    let mut product = CheckReport::new("cocycle-product");
    let mut inverse = CheckReport::new("cocycle-inverse");
    for _ in 0..trials {
        let (g1, g2) = (s.element(), s.element());
        let (c1, c2, c12) = (dec.cocycle(&g1)?, dec.cocycle(&g2)?, dec.cocycle(&g1.mul(&g2))?);
        let ok = (0..dec.degree()).all(|i| {
            let j = c2.permutation[i];
            c12.permutation[i] == c1.permutation[j]
                && c12.values[i] == c1.values[j].mul(&c2.values[i])
                && group.contains(&c12.values[i])
        });
        product.record(ok, || format!("gamma1 {g1}, gamma2 {g2}"));

        let ginv = g1.inverse();
        let cinv = dec.cocycle(&ginv)?;
        let ok = (0..dec.degree()).all(|i| {
            let j = cinv.permutation[i];
            cinv.values[i] == c1.values[j].inverse()
        });
        inverse.record(ok, || format!("gamma {g1}"));
    }
    Ok(vec![product, inverse])
}

fn cocycle(cfg: &SuiteConfig) -> Result<Vec<CheckReport>> {
    let mut out = Vec::new();
    for (tag, m) in [("a", &cfg.a), ("b", &cfg.b)] {
        let c = DoubleCoset::new(&cfg.group, m)?;
        out.extend(cocycle_checks(c.decomposition(), cfg.seed, cfg.trials)?.into_iter().map(|r| r.prefixed(tag)));
    }
    Ok(out)
}

fn bieq(cfg: &SuiteConfig) -> Result<Vec<CheckReport>> {
    let (ca, cb) = (DoubleCoset::new(&cfg.group, &cfg.a)?, DoubleCoset::new(&cfg.group, &cfg.b)?);
    let (_, w) = shimura_product(&ca, &cb)?;
    let prod = GammaProduct::from_witness(&w);
    let mut s = WordSampler::new(&cfg.group, cfg.seed)?;

    let mut bij = CheckReport::new("label-bijection");
    bij.record_result(label_bijection(&w));
    if bij.trials == 0 {
        bij.record(true, String::new);
    }

    let mut orbits = CheckReport::new("orbit-count");
    if let Some(os) = orbits.record_result(label_orbits(&w)) {
        let total: usize = os.iter().map(|o| o.len()).sum();
        orbits.record(total == w.left.degree() * w.right.degree(), || format!("orbits cover {total} labels"));
    }

    let mut sound = CheckReport::new("canonical-form-sound");
    let mut action = CheckReport::new("label-action");
    let mut anchors = CheckReport::new("omega-anchor");
    let mut equiv = CheckReport::new("omega-bi-equivariant");
    let mut defined: BTreeMap<String, CheckReport> = BTreeMap::new();
    for _ in 0..cfg.trials {
        let i = s.index(w.left.degree());
        let j = s.index(w.right.degree());
        let (v, u, gamma) = (w.left.rep(i).mul(&s.element()), s.element().mul(w.right.rep(j)), s.element());
        let ok = prod.canonicalize(&v.mul(&gamma), &gamma.inverse().mul(&u))? == prod.canonicalize(&v, &u)?;
        sound.record(ok, || format!("v {v}, w {u}, gamma {gamma}"));

        let (g1, g2) = (s.element(), s.element());
        let lhs = label_action(&w.left, &w.right, &g1.mul(&g2), (i, j))?;
        let rhs = label_action(&w.left, &w.right, &g1, label_action(&w.left, &w.right, &g2, (i, j))?)?;
        action.record(lhs == rhs, || format!("({i}, {j}) under {g1}, {g2}"));

        for (k, orbit) in w.orbits.iter().enumerate() {
            for l in 0..orbit.m {
                let (gamma, delta, g0, d0) = (s.element(), s.element(), s.element(), s.element());
                let x = omega(&w, (k, l), &gamma, &delta)?;
                let ok = prod.anchor(&x) == gamma.mul(&w.anchor(k, l)).mul(&delta);
                anchors.record(ok, || format!("component ({k}, {l})"));
                let moved = omega(&w, (k, l), &g0.mul(&gamma), &delta.mul(&d0))?;
                let ok = moved == prod.right_act(&prod.left_act(&g0, &x)?, &d0);
                equiv.record(ok, || format!("component ({k}, {l})"));
                // ω only sees the matrix γ·z·δ if it is well defined on Γz_kΓ.
                let y = gamma.mul(&w.anchor(k, l)).mul(&delta);
                let name = format!("omega-well-defined/{}#{}", orbit.coset.label(), l + 1);
                let r = defined.entry(name.clone()).or_insert_with(|| CheckReport::new(name));
                let at = omega_at(&w, (k, l), &y)?;
                r.record(at == x, || {
                    format!("m = {}, d = {}: {} and {} give different classes", orbit.m, orbit.d(), x, at)
                });
            }
        }
    }
    let mut out = vec![bij, orbits, sound, action, anchors, equiv];
    out.extend(defined.into_values());
    Ok(out)
}

/// Witness identity, bijection and degree multiplicativity on a product.
pub fn witness_checks(a: &DoubleCoset, b: &DoubleCoset, r: &mut CheckReport) -> Result<()> {
    let (prod, w) = shimura_product(a, b)?;
    let name = || format!("{} * {}", a.label(), b.label());
    r.record(w.check_counts().is_ok(), || format!("{}: sum m_k d_k != |I||J|", name()));
    r.record(label_bijection(&w).is_ok(), || format!("{}: label map is not a bijection", name()));
    r.record(prod.degree() == BigInt::from(a.degree() * b.degree()), || format!("{}: degree not multiplicative", name()));
    Ok(())
}

fn shimura_witness(cfg: &SuiteConfig) -> Result<Vec<CheckReport>> {
    let mut r = CheckReport::new("witness");
    let mut mats: Vec<GroupElement> = [(1, 2), (1, 3), (1, 5), (2, 2)]
        .iter()
        .map(|&(x, y)| GroupElement::diag(x, y))
        .collect::<Result<_>>()?;
    mats.extend([cfg.a.clone(), cfg.b.clone()]);
    let cosets: Vec<_> = mats.iter().map(|m| DoubleCoset::new(&cfg.group, m)).collect::<Result<_>>()?;
    for a in &cosets {
        for b in &cosets {
            witness_checks(a, b, &mut r)?;
        }
    }
    Ok(vec![r])
}

/// FINITE_SET needs ℓ away from every determinant in play.
fn algebras(mats: &[&GroupElement]) -> [Algebra; 2] {
    [Algebra::Trivial, Algebra::finite_set_avoiding(mats)]
}

fn unitary(cfg: &SuiteConfig) -> Result<Vec<CheckReport>> {
    let (ca, cb) = (DoubleCoset::new(&cfg.group, &cfg.a)?, DoubleCoset::new(&cfg.group, &cfg.b)?);
    let mut out = Vec::new();
    for alg in algebras(&[&cfg.a, &cfg.b]) {
        let ctx = Context::new(cfg.group.clone(), alg);
        let tag = ctx.algebra.name();
        for r in coset_checks(&ctx, &ca, cfg.seed, cfg.trials)? {
            out.push(r.prefixed(&tag));
        }
        for r in tensor_checks(&ctx, &ca, &cb, cfg.seed, cfg.trials)? {
            out.push(r.prefixed(&tag));
        }
    }
    Ok(out)
}

fn heckemod(cfg: &SuiteConfig) -> Result<Vec<CheckReport>> {
    let mut out = Vec::new();
    for alg in algebras(&[&cfg.a, &cfg.b]) {
        let ctx = Context::new(cfg.group.clone(), alg);
        let tag = ctx.algebra.name();
        out.extend(heckemod_check(&ctx, &cfg.a, &cfg.b, cfg.seed, cfg.trials)?.into_iter().map(|r| r.prefixed(&tag)));
    }
    Ok(out)
}

fn space(cfg: &SuiteConfig) -> Result<ModularSymbols> {
    if !cfg.group.is_sl2z() && cfg.group.kind() != crate::congruence::GroupKind::Gamma0 {
        return Err(Error::Unsupported(format!("modular symbols for {}", cfg.group)));
    }
    ModularSymbols::new(cfg.level())
}

fn coprime(m: &GroupElement, n: u64) -> bool {
    let d = m.det();
    d.is_integer() && d.to_integer().gcd(&BigInt::from(n)) == BigInt::from(1)
}

fn ring_hom(cfg: &SuiteConfig) -> Result<Vec<CheckReport>> {
    let sp = space(cfg)?;
    let n = cfg.level();
    let mut elems: Vec<HeckeElement> = cfg.good_primes().into_iter().take(3).map(|p| HeckeElement::t(&sp.group, p)).collect::<Result<_>>()?;
    for m in [&cfg.a, &cfg.b] {
        if coprime(m, n) {
            elems.push(HeckeElement::from_matrix(&sp.group, m)?);
        }
    }
    let mut r = CheckReport::new("matrix-of-product");
    for x in &elems {
        for y in &elems {
            let c = ring_hom_check(&sp, x, y)?;
            r.trials += c.trials;
            r.failed += c.failed;
            r.failures.extend(c.failures);
        }
    }
    let mut out = vec![r];
    for m in [&cfg.a, &cfg.b] {
        if coprime(m, n) {
            out.push(pairing_adjointness_check(&sp, m)?.prefixed(&m.to_string()));
        }
    }
    Ok(out)
}

fn commute(cfg: &SuiteConfig) -> Result<Vec<CheckReport>> {
    let sp = space(cfg)?;
    let ms: Vec<(i64, linalg::IntMat)> = cfg.good_primes().into_iter().map(|p| Ok((p, sp.t_p(p)?.matrix))).collect::<Result<_>>()?;
    let mut r = CheckReport::new("hecke-commute");
    for (p, x) in &ms {
        for (q, y) in &ms {
            if p < q {
                r.record(linalg::mul(x, y) == linalg::mul(y, x), || format!("T_{p} T_{q} != T_{q} T_{p}"));
            }
        }
    }
    Ok(vec![r])
}

fn eigs(cfg: &SuiteConfig) -> Result<Vec<CheckReport>> {
    let sp = space(cfg)?;
    let mut out = vec![dimension_check(&sp)];
    let mut oracle = CheckReport::new("eigenvalues-vs-point-count");
    let mut restrict = CheckReport::new("cuspidal-restriction");
    let mut boundary: BTreeMap<String, CheckReport> = BTreeMap::new();
    for p in cfg.good_primes() {
        let coset = DoubleCoset::new(&sp.group, &GroupElement::diag(1, p)?)?;
        let t = sp.hecke_matrix(coset.decomposition())?;
        if let Some(tc) = restrict.record_result(sp.restrict_cuspidal(&t)) {
            restrict.record(true, String::new);
            if cfg.level() == 11 {
                let ap = ap_oracle(&Curve::C11A1, p as u64)?;
                let data = eigen_data(&tc);
                let ok = data.eigenvalues == vec![(ap.to_string(), sp.cuspidal_dim())];
                oracle.record(ok, || format!("p = {p}: engine {:?}, oracle {ap}", data.eigenvalues));
            }
        }
        for r in boundary_checks(&sp, coset.decomposition())? {
            let name = r.check.clone();
            let acc = boundary.entry(name.clone()).or_insert_with(|| CheckReport::new(name));
            acc.trials += r.trials;
            acc.failed += r.failed;
            acc.failures.extend(r.failures);
        }
    }
    out.push(restrict);
    if oracle.trials > 0 {
        out.push(oracle);
    }
    out.extend(boundary.into_values());
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_suites_pass_on_defaults() {
        let mut cfg = SuiteConfig::new(CongruenceSubgroup::gamma0(11).unwrap());
        cfg.trials = 3;
        let reports = run("all", &cfg).unwrap();
        for r in &reports {
            assert!(r.passed(), "{r:?}");
        }
        for s in SUITES {
            assert!(reports.iter().any(|r| r.check.starts_with(&format!("{s}/"))), "{s}");
        }
    }

    #[test]
    fn bieq_flags_the_scalar_component_of_t2_squared() {
        let mut cfg = SuiteConfig::new(CongruenceSubgroup::sl2z());
        cfg.b = cfg.a.clone();
        cfg.trials = 10;
        let reports = run("bieq", &cfg).unwrap();
        let failing: Vec<&str> = reports.iter().filter(|r| !r.passed()).map(|r| r.check.as_str()).collect();
        assert!(!failing.is_empty());
        assert!(failing.iter().all(|c| c.starts_with("omega-well-defined/[2,2]")), "{failing:?}");
    }

    #[test]
    fn unknown_suite() {
        let cfg = SuiteConfig::new(CongruenceSubgroup::sl2z());
        assert!(matches!(run("nope", &cfg), Err(Error::Unsupported(_))));
    }
}
