//! Closed-form counting formulas and brute-force point counts.
//!
//! Everything here is computed without touching the coset, modular-symbol,
//! or linear-algebra code, so it can serve as an independent check on them.

use crate::error::{Error, Result};

pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && prime_factors(n) == [n]
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn euler_phi(n: u64) -> u64 {
    prime_factors(n)
        .into_iter()
        .fold(n, |acc, p| acc / p * (p - 1))
}

/// μ(N) = [SL₂(Z) : Γ₀(N)] = N·∏_{p|N}(1 + 1/p).
pub fn index_gamma0(n: u64) -> u64 {
    prime_factors(n)
        .into_iter()
        .fold(n, |acc, p| acc / p * (p + 1))
}

/// [SL₂(Z) : Γ₁(N)].
pub fn index_gamma1(n: u64) -> u64 {
    index_gamma0(n) * euler_phi(n)
}

/// [SL₂(Z) : Γ(N)] = N³·∏_{p|N}(1 − 1/p²).
pub fn index_gamma_full(n: u64) -> u64 {
    prime_factors(n)
        .into_iter()
        .fold(n * n * n, |acc, p| acc / (p * p) * (p * p - 1))
}

/// Legendre symbol (a/p) for an odd prime p.
fn legendre(a: i64, p: u64) -> i64 {
    let a = a.rem_euclid(p as i64) as u64;
    if a == 0 {
        return 0;
    }
    let mut acc = 1u64;
    let mut base = a;
    let mut e = (p - 1) / 2;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    if acc == 1 {
        1
    } else {
        -1
    }
}

/// Number of elliptic points of order 2 on X₀(N).
pub fn nu2(n: u64) -> u64 {
    if n % 4 == 0 {
        return 0;
    }
    prime_factors(n)
        .into_iter()
        .map(|p| if p == 2 { 1 } else { (1 + legendre(-1, p)) as u64 })
        .product()
}

/// Number of elliptic points of order 3 on X₀(N).
pub fn nu3(n: u64) -> u64 {
    if n % 9 == 0 {
        return 0;
    }
    prime_factors(n)
        .into_iter()
        .map(|p| match p {
            2 => 0,
            3 => 1,
            _ => (1 + legendre(-3, p)) as u64,
        })
        .product()
}

/// Number of cusps of X₀(N): Σ_{d|N} φ(gcd(d, N/d)).
pub fn cusp_count(n: u64) -> u64 {
    (1..=n)
        .filter(|d| n % d == 0)
        .map(|d| euler_phi(gcd(d, n / d)))
        .sum()
}

/// Genus of X₀(N): g = 1 + μ/12 − ν₂/4 − ν₃/3 − ν∞/2.
pub fn genus(n: u64) -> u64 {
    // Scaled by 12 to stay in integers.
    let twelve_g = 12 + index_gamma0(n) as i64
        - 3 * nu2(n) as i64
        - 4 * nu3(n) as i64
        - 6 * cusp_count(n) as i64;
    debug_assert_eq!(twelve_g % 12, 0);
    (twelve_g / 12) as u64
}

/// Expected dimension of weight-2 modular symbols for Γ₀(N): 2g + ν∞ − 1.
pub fn modular_symbols_dimension(n: u64) -> u64 {
    2 * genus(n) + cusp_count(n) - 1
}

/// Long Weierstrass model y² + a1·xy + a3·y = x³ + a2·x² + a4·x + a6.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Curve {
    pub a1: i64,
    pub a2: i64,
    pub a3: i64,
    pub a4: i64,
    pub a6: i64,
}

impl Curve {
    /// The curve of conductor 11, y² + y = x³ − x² − 10x − 20.
    pub const C11A1: Curve = Curve {
        a1: 0,
        a2: -1,
        a3: 1,
        a4: -10,
        a6: -20,
    };

    pub fn discriminant(&self) -> i128 {
        let (a1, a2, a3, a4, a6) = (
            self.a1 as i128,
            self.a2 as i128,
            self.a3 as i128,
            self.a4 as i128,
            self.a6 as i128,
        );
        let b2 = a1 * a1 + 4 * a2;
        let b4 = 2 * a4 + a1 * a3;
        let b6 = a3 * a3 + 4 * a6;
        let b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
        -b2 * b2 * b8 - 8 * b4 * b4 * b4 - 27 * b6 * b6 + 9 * b2 * b4 * b6
    }

    /// #E(F_p), including the point at infinity, by exhaustive search.
    pub fn count_points(&self, p: u64) -> u64 {
        let p = p as i128;
        let r = |x: i64| (x as i128).rem_euclid(p);
        let (a1, a2, a3, a4, a6) = (r(self.a1), r(self.a2), r(self.a3), r(self.a4), r(self.a6));
        let mut count = 1;
        for x in 0..p {
            let rhs = (((x + a2) * x % p + a4) * x % p + a6) % p;
            for y in 0..p {
                let lhs = (y * y + a1 * x % p * y + a3 * y) % p;
                if lhs == rhs {
                    count += 1;
                }
            }
        }
        count
    }
}

/// a_p = p + 1 − #E(F_p) for a prime of good reduction.
pub fn ap_oracle(curve: &Curve, p: u64) -> Result<i64> {
    if !is_prime(p) {
        return Err(Error::Unsupported(format!("{p} is not prime")));
    }
    if curve.discriminant() % p as i128 == 0 {
        return Err(Error::BadReduction(p));
    }
    Ok(p as i64 + 1 - curve.count_points(p) as i64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_formula() {
        assert_eq!(index_gamma0(1), 1);
        assert_eq!(index_gamma0(11), 12);
        assert_eq!(index_gamma0(14), 24);
        assert_eq!(index_gamma0(4), 6);
        assert_eq!(index_gamma1(3), 8);
        assert_eq!(index_gamma_full(2), 6);
    }

    #[test]
    fn genus_and_cusps() {
        for (n, g, c) in [(1, 0, 1), (11, 1, 2), (14, 1, 4), (15, 1, 4), (17, 1, 2), (23, 2, 2), (37, 2, 2), (4, 0, 3)] {
            assert_eq!((genus(n), cusp_count(n)), (g, c), "N = {n}");
        }
        assert_eq!(modular_symbols_dimension(1), 0);
        assert_eq!(modular_symbols_dimension(11), 3);
        assert_eq!(modular_symbols_dimension(14), 5);
    }

    #[test]
    fn conductor_eleven_curve() {
        let e = Curve::C11A1;
        assert_eq!(e.discriminant(), -161051);
        assert_eq!(e.count_points(2), 5);
        let expected = [(2, -2), (3, -1), (5, 1), (7, -2), (13, 4)];
        for (p, ap) in expected {
            assert_eq!(ap_oracle(&e, p).unwrap(), ap, "p = {p}");
        }
        assert_eq!(ap_oracle(&e, 11), Err(Error::BadReduction(11)));
    }
}
