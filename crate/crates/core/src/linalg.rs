//! Small exact linear algebra: unimodular reduction, kernels, char polys.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::Rational;

/// Dense integer matrix, row-major.
pub type IntMat = Vec<Vec<BigInt>>;

pub fn zeros(rows: usize, cols: usize) -> IntMat {
    vec![vec![BigInt::zero(); cols]; rows]
}

pub fn identity(n: usize) -> IntMat {
    let mut m = zeros(n, n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = BigInt::one();
    }
    m
}

pub fn from_i64(rows: &[&[i64]]) -> IntMat {
    rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
}

pub fn cols(m: &IntMat) -> usize {
    m.first().map_or(0, Vec::len)
}

pub fn mul(a: &IntMat, b: &IntMat) -> IntMat {
    let (n, k, p) = (a.len(), b.len(), cols(b));
    let mut out = zeros(n, p);
    for i in 0..n {
        for l in 0..k {
            if a[i][l].is_zero() {
                continue;
            }
            for j in 0..p {
                out[i][j] += &a[i][l] * &b[l][j];
            }
        }
    }
    out
}

pub fn add(a: &IntMat, b: &IntMat) -> IntMat {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.iter().zip(y).map(|(u, v)| u + v).collect())
        .collect()
}

pub fn scale(a: &IntMat, k: &BigInt) -> IntMat {
    a.iter().map(|r| r.iter().map(|x| x * k).collect()).collect()
}

pub fn transpose(a: &IntMat) -> IntMat {
    let (n, m) = (a.len(), cols(a));
    (0..m).map(|j| (0..n).map(|i| a[i][j].clone()).collect()).collect()
}

/// Row vector times matrix.
pub fn vec_mul(v: &[BigInt], m: &IntMat) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); cols(m)];
    for (x, row) in v.iter().zip(m) {
        if x.is_zero() {
            continue;
        }
        for (o, y) in out.iter_mut().zip(row) {
            *o += x * y;
        }
    }
    out
}

/// Result of `A·V = [H | 0]` with V unimodular: rank, V and V⁻¹.
pub struct ColumnReduction {
    pub rank: usize,
    pub v: IntMat,
    pub v_inv: IntMat,
}

/// Unimodular column reduction of an r×m matrix. Columns `rank..m` of V span
/// the right kernel of A over Z (a saturated lattice).
pub fn column_reduce(a: &IntMat, m: usize) -> ColumnReduction {
    let mut a = a.clone();
    let mut v = identity(m);
    let mut v_inv = identity(m);
    let mut piv = 0;
    for r in 0..a.len() {
        if piv == m {
            break;
        }
        for q in piv + 1..m {
            if a[r][q].is_zero() {
                continue;
            }
            let (x, y) = (a[r][piv].clone(), a[r][q].clone());
            // Column op E on (piv, q) sends (x, y) to (g, 0).
            let (e, e_inv) = if !x.is_zero() && (&y % &x).is_zero() {
                let k = &y / &x;
                let one = BigInt::one();
                let zero = BigInt::zero();
                ([one.clone(), -&k, zero.clone(), one.clone()], [one.clone(), k, zero, one])
            } else {
                let ext = x.extended_gcd(&y);
                let (g, s, t) = if ext.gcd.is_negative() {
                    (-ext.gcd, -ext.x, -ext.y)
                } else {
                    (ext.gcd, ext.x, ext.y)
                };
                let (xg, yg) = (&x / &g, &y / &g);
                // E = [[s, -y/g], [t, x/g]] on (rows piv, q) × (cols piv, q).
                ([s.clone(), -&yg, t.clone(), xg.clone()], [xg, yg, -t, s])
            };
            let [e00, e01, e10, e11] = e;
            for row in a.iter_mut().chain(v.iter_mut()) {
                let (cp, cq) = (row[piv].clone(), row[q].clone());
                row[piv] = &cp * &e00 + &cq * &e10;
                row[q] = &cp * &e01 + &cq * &e11;
            }
            let [f00, f01, f10, f11] = e_inv;
            let (rp, rq) = (v_inv[piv].clone(), v_inv[q].clone());
            v_inv[piv] = rp.iter().zip(&rq).map(|(x, y)| x * &f00 + y * &f01).collect();
            v_inv[q] = rp.iter().zip(&rq).map(|(x, y)| x * &f10 + y * &f11).collect();
        }
        if !a[r][piv].is_zero() {
            piv += 1;
        }
    }
    debug_assert!(a.iter().all(|row| row[piv..].iter().all(Zero::is_zero)));
    ColumnReduction { rank: piv, v, v_inv }
}

/// Z-basis (as rows) of {x : x·B = 0} for an n×k matrix B.
pub fn left_kernel(b: &IntMat, n: usize) -> IntMat {
    let red = column_reduce(&transpose(b), n);
    (red.rank..n).map(|j| red.v.iter().map(|row| row[j].clone()).collect()).collect()
}

/// X with X·B = C over Q, if one exists.
pub fn solve_left(b: &IntMat, c: &IntMat) -> Option<Vec<Vec<Rational>>> {
    // Transpose to Bᵀ·Xᵀ = Cᵀ and eliminate on the augmented system.
    let (n, k) = (b.len(), cols(b));
    let to_rat = |x: &BigInt| Rational::from_integer(x.clone());
    let mut out = Vec::with_capacity(c.len());
    for crow in c {
        // Unknowns x_1..x_n; equations j = 1..k: Σ_i x_i·b[i][j] = crow[j].
        let mut rows: Vec<Vec<Rational>> = (0..k)
            .map(|j| {
                let mut r: Vec<Rational> = (0..n).map(|i| to_rat(&b[i][j])).collect();
                r.push(to_rat(&crow[j]));
                r
            })
            .collect();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..n {
            let Some(p) = (row..k).find(|&r| !rows[r][col].is_zero()) else {
                continue;
            };
            rows.swap(row, p);
            let inv = rows[row][col].recip();
            for x in rows[row].iter_mut() {
                *x *= &inv;
            }
            for r in 0..k {
                if r != row && !rows[r][col].is_zero() {
                    let f = rows[r][col].clone();
                    for cidx in 0..=n {
                        let sub = &f * &rows[row][cidx];
                        rows[r][cidx] -= sub;
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        if rows[row..].iter().any(|r| !r[n].is_zero()) {
            return None;
        }
        let mut x = vec![Rational::zero(); n];
        for (r, &col) in pivots.iter().enumerate() {
            x[col] = rows[r][n].clone();
        }
        out.push(x);
    }
    Some(out)
}

/// Integral matrix from a rational one, if every entry is an integer.
pub fn to_integral(m: &[Vec<Rational>]) -> Option<IntMat> {
    m.iter()
        .map(|r| r.iter().map(|x| x.is_integer().then(|| x.to_integer())).collect())
        .collect()
}

/// Coefficients c_0..c_n of det(x·I − A), by Faddeev–LeVerrier.
pub fn charpoly(a: &IntMat) -> Vec<BigInt> {
    let n = a.len();
    let ar: Vec<Vec<Rational>> = a
        .iter()
        .map(|r| r.iter().map(|x| Rational::from_integer(x.clone())).collect())
        .collect();
    let mut c = vec![Rational::zero(); n + 1];
    c[n] = Rational::one();
    let mut mk = vec![vec![Rational::zero(); n]; n];
    for k in 1..=n {
        // M_k = A·M_{k−1} + c_{n−k+1}·I
        let mut next = vec![vec![Rational::zero(); n]; n];
        for i in 0..n {
            for j in 0..n {
                let mut s = Rational::zero();
                for l in 0..n {
                    s += &ar[i][l] * &mk[l][j];
                }
                next[i][j] = s;
            }
            next[i][i] += &c[n - k + 1];
        }
        mk = next;
        let mut tr = Rational::zero();
        for i in 0..n {
            for l in 0..n {
                tr += &ar[i][l] * &mk[l][i];
            }
        }
        c[n - k] = -tr / Rational::from_integer(BigInt::from(k));
    }
    c.into_iter()
        .map(|x| {
            debug_assert!(x.is_integer());
            x.to_integer()
        })
        .collect()
}

fn eval(poly: &[BigInt], x: &BigInt) -> BigInt {
    poly.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
}

/// Divides by (x − r); the remainder must be zero.
fn deflate(poly: &[BigInt], r: &BigInt) -> Vec<BigInt> {
    let n = poly.len() - 1;
    let mut q = vec![BigInt::zero(); n];
    let mut carry = BigInt::zero();
    for i in (1..=n).rev() {
        carry = &poly[i] + carry * r;
        q[i - 1] = carry.clone();
    }
    q
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    let mut out = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= n {
        if (&n % &d).is_zero() {
            out.push(d.clone());
            let e = &n / &d;
            if e != d {
                out.push(e);
            }
        }
        d += 1;
    }
    out.sort();
    out
}

/// Integer roots with multiplicity, in increasing order.
pub fn integer_roots(poly: &[BigInt]) -> Vec<(BigInt, usize)> {
    let mut p: Vec<BigInt> = poly.to_vec();
    let mut roots = Vec::new();
    let mut zero_mult = 0;
    while p.len() > 1 && p[0].is_zero() {
        p.remove(0);
        zero_mult += 1;
    }
    if zero_mult > 0 {
        roots.push((BigInt::zero(), zero_mult));
    }
    if p.len() > 1 {
        for d in divisors(&p[0]) {
            for r in [-d.clone(), d] {
                let mut mult = 0;
                while p.len() > 1 && eval(&p, &r).is_zero() {
                    p = deflate(&p, &r);
                    mult += 1;
                }
                if mult > 0 {
                    roots.push((r, mult));
                }
            }
        }
    }
    roots.sort();
    roots
}
