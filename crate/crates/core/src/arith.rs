//! Exact scalars and 2×2 matrices of positive determinant.
//!
//! Entries are arbitrary-precision rationals. Matrices are immutable values;
//! every operation returns a fresh matrix.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Reduced fraction with positive denominator.
pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

fn format_rational(x: &Rational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let err = || Error::Parse {
        what: "rational",
        input: s.to_string(),
    };
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).map_err(|_| err())?;
            let d = BigInt::from_str(d.trim()).map_err(|_| err())?;
            if d.is_zero() {
                return Err(err());
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(
            BigInt::from_str(s).map_err(|_| err())?,
        )),
    }
}

/// Element of GL₂(Q)⁺, stored row-major as `[[a, b], [c, d]]`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement {
    e: [Rational; 4],
}

impl GroupElement {
    pub fn new(a: Rational, b: Rational, c: Rational, d: Rational) -> Result<Self> {
        let det = &a * &d - &b * &c;
        if !det.is_positive() {
            return Err(Error::NonPositiveDeterminant(format_rational(&det)));
        }
        Ok(GroupElement { e: [a, b, c, d] })
    }

    /// Integer entries; fails on non-positive determinant.
    pub fn from_ints(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        Self::new(rat(a), rat(b), rat(c), rat(d))
    }

    pub fn from_bigints(a: BigInt, b: BigInt, c: BigInt, d: BigInt) -> Result<Self> {
        Self::new(
            Rational::from_integer(a),
            Rational::from_integer(b),
            Rational::from_integer(c),
            Rational::from_integer(d),
        )
    }

    fn unchecked(e: [Rational; 4]) -> Self {
        debug_assert!((&e[0] * &e[3] - &e[1] * &e[2]).is_positive());
        GroupElement { e }
    }

    pub fn identity() -> Self {
        Self::unchecked([rat(1), rat(0), rat(0), rat(1)])
    }

    pub fn diag(x: i64, y: i64) -> Result<Self> {
        Self::from_ints(x, 0, 0, y)
    }

    /// S = [[0,-1],[1,0]].
    pub fn s() -> Self {
        Self::unchecked([rat(0), rat(-1), rat(1), rat(0)])
    }

    /// T = [[1,1],[0,1]].
    pub fn t() -> Self {
        Self::unchecked([rat(1), rat(1), rat(0), rat(1)])
    }

    pub fn a(&self) -> &Rational {
        &self.e[0]
    }
    pub fn b(&self) -> &Rational {
        &self.e[1]
    }
    pub fn c(&self) -> &Rational {
        &self.e[2]
    }
    pub fn d(&self) -> &Rational {
        &self.e[3]
    }
    pub fn entries(&self) -> &[Rational; 4] {
        &self.e
    }

    pub fn det(&self) -> Rational {
        &self.e[0] * &self.e[3] - &self.e[1] * &self.e[2]
    }

    pub fn is_identity(&self) -> bool {
        self.e[0].is_one() && self.e[1].is_zero() && self.e[2].is_zero() && self.e[3].is_one()
    }

    pub fn is_integral(&self) -> bool {
        self.e.iter().all(|x| x.is_integer())
    }

    /// Integer entries `[a, b, c, d]`, or `NonIntegral`.
    pub fn integer_entries(&self) -> Result<[BigInt; 4]> {
        if !self.is_integral() {
            return Err(Error::NonIntegral(self.to_string()));
        }
        Ok([
            self.e[0].to_integer(),
            self.e[1].to_integer(),
            self.e[2].to_integer(),
            self.e[3].to_integer(),
        ])
    }

    pub fn mul(&self, other: &GroupElement) -> GroupElement {
        let [a, b, c, d] = &self.e;
        let [p, q, r, s] = &other.e;
        Self::unchecked([
            a * p + b * r,
            a * q + b * s,
            c * p + d * r,
            c * q + d * s,
        ])
    }

    pub fn inverse(&self) -> GroupElement {
        let det = self.det();
        let [a, b, c, d] = &self.e;
        Self::unchecked([d / &det, -b / &det, -c / &det, a / &det])
    }

    /// Adjugate `det · x⁻¹`; integral whenever `x` is.
    pub fn adjugate(&self) -> GroupElement {
        let [a, b, c, d] = &self.e;
        Self::unchecked([d.clone(), -b.clone(), -c.clone(), a.clone()])
    }

    pub fn transpose(&self) -> GroupElement {
        let [a, b, c, d] = &self.e;
        Self::unchecked([a.clone(), c.clone(), b.clone(), d.clone()])
    }

    /// `x · y · x⁻¹`.
    pub fn conjugate(&self, y: &GroupElement) -> GroupElement {
        self.mul(y).mul(&self.inverse())
    }

    pub fn pow(&self, n: i64) -> GroupElement {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut acc = GroupElement::identity();
        for _ in 0..n.unsigned_abs() {
            acc = acc.mul(&base);
        }
        acc
    }

    /// Fractional-linear action on P¹(Q).
    pub fn act(&self, z: &Cusp) -> Cusp {
        let [a, b, c, d] = &self.e;
        match z {
            Cusp::Infinity => Cusp::from_pair(a.clone(), c.clone()),
            Cusp::Finite(x) => Cusp::from_pair(a * x + b, c * x + d),
        }
    }

    /// Entries as `[[a, b], [c, d]]` decimal strings.
    pub fn to_string_rows(&self) -> [[String; 2]; 2] {
        [
            [format_rational(&self.e[0]), format_rational(&self.e[1])],
            [format_rational(&self.e[2]), format_rational(&self.e[3])],
        ]
    }

    pub fn smith_form(&self) -> Result<SmithForm> {
        smith_form(self)
    }
}

impl fmt::Display for GroupElement {
    /// Matrix text syntax `a,b;c,d`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [[a, b], [c, d]] = self.to_string_rows();
        write!(f, "{a},{b};{c},{d}")
    }
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{self}]")
    }
}

impl FromStr for GroupElement {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let err = || Error::Parse {
            what: "matrix",
            input: s.to_string(),
        };
        let rows: Vec<&str> = s.split(';').collect();
        if rows.len() != 2 {
            return Err(err());
        }
        let mut entries = Vec::with_capacity(4);
        for row in rows {
            let cols: Vec<&str> = row.split(',').collect();
            if cols.len() != 2 {
                return Err(err());
            }
            for c in cols {
                entries.push(parse_rational(c)?);
            }
        }
        let [a, b, c, d]: [Rational; 4] = entries.try_into().map_err(|_| err())?;
        GroupElement::new(a, b, c, d)
    }
}

#[derive(Serialize, Deserialize)]
struct MatrixJson {
    m: [[String; 2]; 2],
}

impl Serialize for GroupElement {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixJson {
            m: self.to_string_rows(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for GroupElement {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let MatrixJson { m } = MatrixJson::deserialize(deserializer)?;
        let parse = |s: &str| parse_rational(s).map_err(de::Error::custom);
        GroupElement::new(
            parse(&m[0][0])?,
            parse(&m[0][1])?,
            parse(&m[1][0])?,
            parse(&m[1][1])?,
        )
        .map_err(de::Error::custom)
    }
}

/// A point of P¹(Q).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Cusp {
    Infinity,
    Finite(Rational),
}

impl Cusp {
    pub fn from_pair(num: Rational, den: Rational) -> Cusp {
        if den.is_zero() {
            Cusp::Infinity
        } else {
            Cusp::Finite(num / den)
        }
    }

    pub fn integer(n: i64) -> Cusp {
        Cusp::Finite(rat(n))
    }

    /// `(p, q)` coprime with `q ≥ 0`; infinity is `(1, 0)`.
    pub fn lowest_terms(&self) -> (BigInt, BigInt) {
        match self {
            Cusp::Infinity => (BigInt::one(), BigInt::zero()),
            Cusp::Finite(x) => (x.numer().clone(), x.denom().clone()),
        }
    }
}

impl fmt::Display for Cusp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cusp::Infinity => write!(f, "oo"),
            Cusp::Finite(x) => write!(f, "{}", format_rational(x)),
        }
    }
}

/// `U · A · V = diag(d1, d2)` with `d1 | d2` and `U, V ∈ SL₂(Z)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    pub d1: BigInt,
    pub d2: BigInt,
    pub u: GroupElement,
    pub v: GroupElement,
}

/// Integer 2×2 with row-major entries; determinant sign is not tracked here.
type IntMat = [BigInt; 4];

fn int_mul(x: &IntMat, y: &IntMat) -> IntMat {
    [
        &x[0] * &y[0] + &x[1] * &y[2],
        &x[0] * &y[1] + &x[1] * &y[3],
        &x[2] * &y[0] + &x[3] * &y[2],
        &x[2] * &y[1] + &x[3] * &y[3],
    ]
}

fn int_identity() -> IntMat {
    [BigInt::one(), BigInt::zero(), BigInt::zero(), BigInt::one()]
}

/// Unimodular `[[s, t], [-y/g, x/g]]` with `s·x + t·y = g = gcd(x, y)`.
/// Left-multiplying a column `(x, y)` by it yields `(g, 0)`.
fn gcd_row_op(x: &BigInt, y: &BigInt) -> (BigInt, IntMat) {
    // When x | y an elementary op suffices; the general Bezout op could swap
    // the pivot away and make the reduction cycle.
    if !x.is_zero() && (y % x).is_zero() {
        return (x.clone(), [BigInt::one(), BigInt::zero(), -(y / x), BigInt::one()]);
    }
    let e = x.extended_gcd(y);
    let (g, s, t) = if e.gcd.is_negative() {
        (-e.gcd, -e.x, -e.y)
    } else {
        (e.gcd, e.x, e.y)
    };
    let m = [s, t, -(y / &g), x / &g];
    (g, m)
}

/// Smith normal form by gcd-driven row/column reduction with tracked factors.
pub fn smith_form(x: &GroupElement) -> Result<SmithForm> {
    let mut m = x.integer_entries()?;
    let mut u = int_identity();
    let mut v = int_identity();
    loop {
        // Clear the (1,0) entry by a row operation.
        if !m[2].is_zero() {
            let (_, op) = gcd_row_op(&m[0], &m[2]);
            m = int_mul(&op, &m);
            u = int_mul(&op, &u);
        }
        // Clear the (0,1) entry by a column operation (transpose of a row op).
        if !m[1].is_zero() {
            let (_, op) = gcd_row_op(&m[0], &m[1]);
            let op_t = [op[0].clone(), op[2].clone(), op[1].clone(), op[3].clone()];
            m = int_mul(&m, &op_t);
            v = int_mul(&v, &op_t);
        }
        if m[1].is_zero() && m[2].is_zero() {
            if m[0].is_zero() || (&m[3] % &m[0]).is_zero() {
                break;
            }
            // d1 ∤ d2: add row 1 to row 0 and reduce again.
            let op = [BigInt::one(), BigInt::one(), BigInt::zero(), BigInt::one()];
            m = int_mul(&op, &m);
            u = int_mul(&op, &u);
        }
    }
    // U, V are products of determinant-one steps, so d1, d2 share a sign.
    if m[0].is_negative() {
        let neg = [-BigInt::one(), BigInt::zero(), BigInt::zero(), -BigInt::one()];
        m = int_mul(&neg, &m);
        u = int_mul(&neg, &u);
    }
    let [u0, u1, u2, u3] = u;
    let [v0, v1, v2, v3] = v;
    let u = GroupElement::from_bigints(u0, u1, u2, u3)?;
    let v = GroupElement::from_bigints(v0, v1, v2, v3)?;
    let [d1, _, _, d2] = m;
    Ok(SmithForm { d1, d2, u, v })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(s: &str) -> GroupElement {
        s.parse().unwrap()
    }

    #[test]
    fn multiply_examples() {
        let x = m("1,1;0,1");
        assert_eq!(GroupElement::identity().mul(&x), x);
        assert_eq!(x.mul(&m("1,0;1,1")), m("2,1;1,1"));
    }

    #[test]
    fn inverse_examples() {
        assert!(GroupElement::identity().inverse().is_identity());
        assert_eq!(m("1,0;0,7").inverse(), m("1,0;0,1/7"));
        let x = m("1,2;0,4");
        assert_eq!(x.inverse(), m("1,-1/2;0,1/4"));
        assert!(x.mul(&x.inverse()).is_identity());
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(
            "1,0;0,-1".parse::<GroupElement>(),
            Err(Error::NonPositiveDeterminant(_))
        ));
        assert!(matches!(
            "1,0,0;0,1".parse::<GroupElement>(),
            Err(Error::Parse { .. })
        ));
        assert!(matches!("1/0,0;0,1".parse::<GroupElement>(), Err(Error::Parse { .. })));
        assert!(matches!(
            m("1/2,0;0,2").smith_form(),
            Err(Error::NonIntegral(_))
        ));
    }

    #[test]
    fn text_and_json_syntax() {
        let x = m("1, -1/2; 0 ,1/4");
        assert_eq!(x.to_string(), "1,-1/2;0,1/4");
        let json = serde_json::to_string(&x).unwrap();
        assert_eq!(json, r#"{"m":[["1","-1/2"],["0","1/4"]]}"#);
        let back: GroupElement = serde_json::from_str(&json).unwrap();
        assert_eq!(back, x);
    }

    #[test]
    fn smith_examples() {
        for (s, d1, d2) in [("1,0;0,4", 1, 4), ("1,2;0,4", 1, 4), ("2,0;0,2", 2, 2), ("4,0;0,1", 1, 4), ("6,4;2,8", 2, 20)] {
            let x = m(s);
            let f = x.smith_form().unwrap();
            assert_eq!((f.d1.clone(), f.d2.clone()), (BigInt::from(d1), BigInt::from(d2)), "{s}");
            let d = GroupElement::from_bigints(f.d1.clone(), 0.into(), 0.into(), f.d2.clone()).unwrap();
            assert_eq!(f.u.mul(&x).mul(&f.v), d);
            assert!(f.u.det().is_one() && f.v.det().is_one());
        }
    }

    #[test]
    fn cusp_action() {
        let s = GroupElement::s();
        assert_eq!(s.act(&Cusp::Infinity), Cusp::integer(0));
        assert_eq!(s.act(&Cusp::integer(0)), Cusp::Infinity);
        assert_eq!(m("2,1;0,1").act(&Cusp::Finite(ratio(1, 3))), Cusp::Finite(ratio(5, 3)));
    }

    fn unimodular() -> impl Strategy<Value = GroupElement> {
        prop::collection::vec((0..2usize, -3i64..=3), 0..8).prop_map(|word| {
            word.into_iter().fold(GroupElement::identity(), |acc, (g, e)| {
                let gen = if g == 0 { GroupElement::s() } else { GroupElement::t() };
                acc.mul(&gen.pow(e))
            })
        })
    }

    fn integral() -> impl Strategy<Value = GroupElement> {
        (-12i64..=12, -12i64..=12, -12i64..=12, -12i64..=12)
            .prop_filter_map("positive determinant", |(a, b, c, d)| GroupElement::from_ints(a, b, c, d).ok())
    }

    proptest! {
        #[test]
        fn inverse_of_random_words(x in unimodular()) {
            prop_assert!(x.mul(&x.inverse()).is_identity());
            prop_assert!(x.inverse().mul(&x).is_identity());
        }

        #[test]
        fn smith_is_bi_invariant(x in integral(), u in unimodular(), v in unimodular()) {
            let f = x.smith_form().unwrap();
            let g = u.mul(&x).mul(&v).smith_form().unwrap();
            prop_assert_eq!((&f.d1, &f.d2), (&g.d1, &g.d2));
            prop_assert!((&f.d2 % &f.d1).is_zero());
            prop_assert_eq!(Rational::from_integer(&f.d1 * &f.d2), x.det());
        }

        #[test]
        fn smith_determinant_multiplicative(x in integral(), y in integral()) {
            let (fx, fy, fxy) = (x.smith_form().unwrap(), y.smith_form().unwrap(), x.mul(&y).smith_form().unwrap());
            prop_assert_eq!(&fx.d1 * &fx.d2 * &fy.d1 * &fy.d2, &fxy.d1 * &fxy.d2);
        }

        #[test]
        fn rational_addition_is_exact(a in -1000i64..1000, b in 1i64..1000, c in -1000i64..1000, d in 1i64..1000) {
            let (x, y) = (ratio(a, b), ratio(c, d));
            prop_assert_eq!(&(&x + &y) - &y, x);
        }
    }
}
