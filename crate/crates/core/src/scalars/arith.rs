//! Integer utilities: trial-division factorization, modular square roots,
//! Legendre symbols.

use std::sync::OnceLock;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub const DEFAULT_FACTOR_BOUND: u64 = 1_000_000;

/// Trial-division bound, overridable through `QF_FACTOR_BOUND`.
pub fn factor_bound() -> u64 {
    static BOUND: OnceLock<u64> = OnceLock::new();
    *BOUND.get_or_init(|| {
        std::env::var("QF_FACTOR_BOUND")
            .ok()
            .and_then(|s| s.trim().parse().ok())
            .filter(|&b: &u64| b >= 2)
            .unwrap_or(DEFAULT_FACTOR_BOUND)
    })
}

/// Factors `|n|` into primes with the default bound.
pub fn factor(n: &BigInt) -> Result<Vec<(BigInt, u32)>> {
    factor_with_bound(n, factor_bound())
}

/// Factors `|n|` by trial division up to `bound`. A leftover cofactor is
/// accepted as prime only when it is below `bound²`.
pub fn factor_with_bound(n: &BigInt, bound: u64) -> Result<Vec<(BigInt, u32)>> {
    if n.is_zero() {
        return Err(Error::ZeroArgument("cannot factor 0".into()));
    }
    let mut m = n.abs();
    if let Some(small) = m.to_u128() {
        return factor_u128(small, bound).map(|v| {
            v.into_iter()
                .map(|(p, e)| (BigInt::from(p), e))
                .collect()
        });
    }
    let mut out = Vec::new();
    let mut d: u64 = 2;
    while d <= bound {
        let bd = BigInt::from(d);
        if &bd * &bd > m {
            break;
        }
        let mut e = 0;
        while (&m % &bd).is_zero() {
            m /= &bd;
            e += 1;
        }
        if e > 0 {
            out.push((bd, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if !m.is_one() {
        let b = BigInt::from(bound);
        if m > &b * &b {
            return Err(Error::FactorBound {
                value: n.clone(),
                bound,
            });
        }
        out.push((m, 1));
    }
    Ok(out)
}

fn factor_u128(mut m: u128, bound: u64) -> Result<Vec<(u128, u32)>> {
    let mut out = Vec::new();
    let mut d: u128 = 2;
    while d <= bound as u128 && d * d <= m {
        let mut e = 0;
        while m % d == 0 {
            m /= d;
            e += 1;
        }
        if e > 0 {
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if m > 1 {
        if d * d <= m && m > (bound as u128) * (bound as u128) {
            return Err(Error::FactorBound {
                value: BigInt::from(m),
                bound,
            });
        }
        out.push((m, 1));
    }
    Ok(out)
}

/// Distinct prime divisors of `|n|`.
pub fn prime_divisors(n: &BigInt) -> Result<Vec<BigInt>> {
    Ok(factor(n)?.into_iter().map(|(p, _)| p).collect())
}

/// Signed squarefree kernel: `n = s·k²` with `s` squarefree.
pub fn squarefree_part(n: &BigInt) -> Result<BigInt> {
    let mut s = BigInt::one();
    for (p, e) in factor(n)? {
        if e % 2 == 1 {
            s *= p;
        }
    }
    if n.sign() == Sign::Minus {
        s = -s;
    }
    Ok(s)
}

/// Splits `n = s·k²` returning `(s, k)` with `s` squarefree (signed) and `k > 0`.
pub fn squarefree_decompose(n: &BigInt) -> Result<(BigInt, BigInt)> {
    let mut s = BigInt::one();
    let mut k = BigInt::one();
    for (p, e) in factor(n)? {
        if e % 2 == 1 {
            s *= &p;
        }
        k *= num_traits::pow(p, (e / 2) as usize);
    }
    if n.sign() == Sign::Minus {
        s = -s;
    }
    Ok((s, k))
}

pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    // deterministic Miller-Rabin for 64-bit inputs
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = mod_pow(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mod_mul(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

pub fn is_prime(n: &BigInt) -> bool {
    match n.to_u64() {
        Some(v) => is_prime_u64(v),
        None => false,
    }
}

#[inline]
pub fn mod_mul(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn mod_pow(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mod_mul(acc, base, m);
        }
        base = mod_mul(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Inverse modulo a prime.
pub fn mod_inv(a: u64, p: u64) -> Option<u64> {
    if a % p == 0 {
        None
    } else {
        Some(mod_pow(a, p - 2, p))
    }
}

/// Reduces a big integer into `[0, p)`.
pub fn reduce_mod(a: &BigInt, p: u64) -> u64 {
    let r = a.mod_floor(&BigInt::from(p));
    r.to_u64().expect("residue fits in u64")
}

/// Tonelli–Shanks square root modulo an odd prime.
pub fn sqrt_mod(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return Some(0);
    }
    if mod_pow(a, (p - 1) / 2, p) != 1 {
        return None;
    }
    if p % 4 == 3 {
        let r = mod_pow(a, (p + 1) / 4, p);
        return Some(r.min(p - r));
    }
    let mut q = p - 1;
    let mut s = 0;
    while q % 2 == 0 {
        q /= 2;
        s += 1;
    }
    let mut z = 2;
    while mod_pow(z, (p - 1) / 2, p) != p - 1 {
        z += 1;
    }
    let mut m = s;
    let mut c = mod_pow(z, q, p);
    let mut t = mod_pow(a, q, p);
    let mut r = mod_pow(a, (q + 1) / 2, p);
    while t != 1 {
        let mut i = 0;
        let mut tt = t;
        while tt != 1 {
            tt = mod_mul(tt, tt, p);
            i += 1;
        }
        let b = mod_pow(c, 1 << (m - i - 1), p);
        m = i;
        c = mod_mul(b, b, p);
        t = mod_mul(t, c, p);
        r = mod_mul(r, b, p);
    }
    Some(r.min(p - r))
}

/// Legendre symbol `(a/p)` for an odd prime `p`.
pub fn legendre(a: &BigInt, p: &BigInt) -> Result<i8> {
    let pu = p
        .to_u64()
        .filter(|&v| v > 2 && is_prime_u64(v))
        .ok_or_else(|| Error::NotOddPrime(p.clone()))?;
    Ok(legendre_u64(reduce_mod(a, pu), pu))
}

pub(crate) fn legendre_u64(a: u64, p: u64) -> i8 {
    let a = a % p;
    if a == 0 {
        0
    } else if mod_pow(a, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

/// Least quadratic non-residue modulo an odd prime.
pub fn least_nonresidue(p: u64) -> u64 {
    (2..p).find(|&a| legendre_u64(a, p) == -1).unwrap_or(2)
}

/// Primes in increasing order, starting from 2.
pub fn primes() -> impl Iterator<Item = u64> {
    (2u64..).filter(|&n| is_prime_u64(n))
}

/// Exact integer square root, if `n` is a perfect square.
pub fn exact_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    if &r * &r == *n {
        Some(r)
    } else {
        None
    }
}

/// p-adic valuation of a nonzero integer.
pub fn valuation(n: &BigInt, p: &BigInt) -> u32 {
    let mut m = n.clone();
    let mut v = 0;
    while !m.is_zero() && (&m % p).is_zero() {
        m /= p;
        v += 1;
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn legendre_examples() {
        assert_eq!(legendre(&b(4), &b(7)).unwrap(), 1);
        assert_eq!(legendre(&b(7), &b(7)).unwrap(), 0);
        assert_eq!(legendre(&b(2), &b(5)).unwrap(), -1);
    }

    #[test]
    fn legendre_rejects_bad_moduli() {
        assert!(matches!(legendre(&b(3), &b(2)), Err(Error::NotOddPrime(_))));
        assert!(matches!(legendre(&b(3), &b(9)), Err(Error::NotOddPrime(_))));
    }

    #[test]
    fn legendre_matches_enumeration() {
        for p in [3u64, 5, 7, 11, 13, 101] {
            let squares: Vec<u64> = (1..p).map(|x| x * x % p).collect();
            for a in 0..p {
                let expected = if a == 0 {
                    0
                } else if squares.contains(&a) {
                    1
                } else {
                    -1
                };
                assert_eq!(legendre_u64(a, p), expected, "a={a} p={p}");
            }
        }
    }

    #[test]
    fn factor_and_squarefree() {
        assert_eq!(squarefree_part(&b(8)).unwrap(), b(2));
        assert_eq!(squarefree_part(&b(-72)).unwrap(), b(-2));
        assert_eq!(squarefree_part(&b(1)).unwrap(), b(1));
        let f = factor(&b(360)).unwrap();
        assert_eq!(f, vec![(b(2), 3), (b(3), 2), (b(5), 1)]);
    }

    #[test]
    fn factor_bound_is_enforced() {
        // 1000003 * 1000033 has no factor below 100
        let n = b(1_000_003) * b(1_000_033);
        assert!(matches!(
            factor_with_bound(&n, 100),
            Err(Error::FactorBound { .. })
        ));
        assert_eq!(factor_with_bound(&n, 1_000_010).unwrap().len(), 2);
    }

    #[test]
    fn sqrt_mod_roundtrip() {
        for p in [3u64, 5, 7, 13, 17, 41, 97, 1_000_003] {
            for a in 1..60u64 {
                if let Some(r) = sqrt_mod(a, p) {
                    assert_eq!(mod_mul(r, r, p), a % p);
                } else {
                    assert_eq!(legendre_u64(a, p), -1);
                }
            }
        }
    }

    #[test]
    fn primality() {
        let small: Vec<u64> = primes().take(10).collect();
        assert_eq!(small, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert!(is_prime_u64(1_000_000_007));
        assert!(!is_prime_u64(1_000_000_007 * 3));
    }
}
