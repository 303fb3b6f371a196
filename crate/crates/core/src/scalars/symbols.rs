use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use super::arith;
use crate::error::{Error, Result};

/// A place of Q. Finite places sort by prime, the real place last.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Place {
    Finite(u64),
    Infinity,
}

impl Place {
    pub fn finite(p: u64) -> Result<Place> {
        if arith::is_prime_u64(p) {
            Ok(Place::Finite(p))
        } else {
            Err(Error::InvalidInput(format!("{p} is not prime")))
        }
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Finite(p) => write!(f, "{p}"),
            Place::Infinity => write!(f, "inf"),
        }
    }
}

impl FromStr for Place {
    type Err = Error;
    fn from_str(s: &str) -> Result<Place> {
        match s.trim() {
            "inf" | "infinity" | "∞" | "oo" => Ok(Place::Infinity),
            other => {
                let p: u64 = other
                    .parse()
                    .map_err(|_| Error::parse(s, "expected a prime or 'inf'"))?;
                Place::finite(p)
            }
        }
    }
}

impl serde::Serialize for Place {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> serde::Deserialize<'de> for Place {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Place, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Integer in the same square class as a nonzero rational.
fn integral_representative(r: &BigRational) -> BigInt {
    r.numer() * r.denom()
}

/// Splits `n = p^α·u` with `p ∤ u`.
fn split_valuation(n: &BigInt, p: u64) -> (u32, BigInt) {
    let bp = BigInt::from(p);
    let mut u = n.clone();
    let mut v = 0;
    while (&u % &bp).is_zero() {
        u /= &bp;
        v += 1;
    }
    (v, u)
}

/// Hilbert symbol `(a, b)_v` of nonzero rationals.
pub fn hilbert_symbol(a: &BigRational, b: &BigRational, v: Place) -> Result<i8> {
    if a.is_zero() || b.is_zero() {
        return Err(Error::ZeroArgument("Hilbert symbol of 0".into()));
    }
    hilbert_symbol_int(&integral_representative(a), &integral_representative(b), v)
}

/// Hilbert symbol `(a, b)_v` of nonzero integers.
pub fn hilbert_symbol_int(a: &BigInt, b: &BigInt, v: Place) -> Result<i8> {
    if a.is_zero() || b.is_zero() {
        return Err(Error::ZeroArgument("Hilbert symbol of 0".into()));
    }
    match v {
        Place::Infinity => Ok(if a.is_negative() && b.is_negative() { -1 } else { 1 }),
        Place::Finite(2) => {
            let (alpha, u) = split_valuation(a, 2);
            let (beta, w) = split_valuation(b, 2);
            let eps = |x: &BigInt| -> u64 { ((x - 1i32) / 2i32).mod_floor(&BigInt::from(2)).to_u64().unwrap() };
            let omega = |x: &BigInt| -> u64 {
                ((x * x - 1i32) / 8i32).mod_floor(&BigInt::from(2)).to_u64().unwrap()
            };
            let e = eps(&u) * eps(&w) + alpha as u64 * omega(&w) + beta as u64 * omega(&u);
            Ok(if e % 2 == 0 { 1 } else { -1 })
        }
        Place::Finite(p) => {
            if !arith::is_prime_u64(p) {
                return Err(Error::NotOddPrime(BigInt::from(p)));
            }
            let (alpha, u) = split_valuation(a, p);
            let (beta, w) = split_valuation(b, p);
            let mut sign: i8 = 1;
            if (alpha * beta) % 2 == 1 && p % 4 == 3 {
                sign = -sign;
            }
            if beta % 2 == 1 {
                sign *= arith::legendre_u64(arith::reduce_mod(&u, p), p);
            }
            if alpha % 2 == 1 {
                sign *= arith::legendre_u64(arith::reduce_mod(&w, p), p);
            }
            Ok(sign)
        }
    }
}

/// Whether a nonzero rational is a square in the completion at `v`.
pub fn local_square(a: &BigRational, v: Place) -> Result<bool> {
    if a.is_zero() {
        return Err(Error::ZeroArgument("local square test of 0".into()));
    }
    let n = integral_representative(a);
    Ok(match v {
        Place::Infinity => n.is_positive(),
        Place::Finite(p) => {
            let (alpha, u) = split_valuation(&n, p);
            if alpha % 2 == 1 {
                false
            } else if p == 2 {
                u.mod_floor(&BigInt::from(8)) == BigInt::from(1)
            } else {
                arith::legendre_u64(arith::reduce_mod(&u, p), p) == 1
            }
        }
    })
}

/// The places where `(a, b)` can be nontrivial: primes dividing `2ab`, then ∞.
pub fn relevant_places(a: &BigRational, b: &BigRational) -> Result<Vec<Place>> {
    let mut primes: Vec<u64> = vec![2];
    for x in [a, b] {
        for part in [x.numer(), x.denom()] {
            for p in arith::prime_divisors(part)? {
                primes.push(p.to_u64().ok_or_else(|| Error::Unsupported(format!("prime {p} exceeds 64 bits")))?);
            }
        }
    }
    primes.sort_unstable();
    primes.dedup();
    let mut out: Vec<Place> = primes.into_iter().map(Place::Finite).collect();
    out.push(Place::Infinity);
    Ok(out)
}

/// Whether the Hilbert symbols of `(a, b)` multiply to `+1` over all places.
pub fn product_formula_check(a: &BigRational, b: &BigRational) -> Result<bool> {
    let mut prod = 1i8;
    for v in relevant_places(a, b)? {
        prod *= hilbert_symbol(a, b, v)?;
    }
    Ok(prod == 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    /// Brute-force solvability of z² = a x² + b y² with a primitive solution mod p^k.
    fn conic_solvable_mod(a: i64, b: i64, p: i64, k: u32) -> bool {
        let m = p.pow(k);
        for x in 0..m {
            for y in 0..m {
                for z in 0..m {
                    if x % p == 0 && y % p == 0 && z % p == 0 {
                        continue;
                    }
                    if (z * z - a * x * x - b * y * y).rem_euclid(m) == 0 {
                        return true;
                    }
                }
            }
        }
        false
    }

    #[test]
    fn examples() {
        assert_eq!(hilbert_symbol(&q(1), &q(-7), Place::Finite(7)).unwrap(), 1);
        assert_eq!(hilbert_symbol(&q(-1), &q(-1), Place::Infinity).unwrap(), -1);
        assert_eq!(hilbert_symbol(&q(2), &q(5), Place::Finite(5)).unwrap(), -1);
        // oracle: primitive solutions modulo 5³ exist iff the symbol is +1
        assert!(!conic_solvable_mod(2, 5, 5, 3));
        assert!(conic_solvable_mod(3, 5, 5, 3) == (hilbert_symbol(&q(3), &q(5), Place::Finite(5)).unwrap() == 1));
        assert!(hilbert_symbol(&q(0), &q(1), Place::Infinity).is_err());
    }

    #[test]
    fn symbols_at_two_match_known_values() {
        // (−1,−1)_2 = −1, (2,3)_2 = −1, (3,5)_2 = 1, (2,2)_2 = 1
        assert_eq!(hilbert_symbol(&q(-1), &q(-1), Place::Finite(2)).unwrap(), -1);
        assert_eq!(hilbert_symbol(&q(2), &q(3), Place::Finite(2)).unwrap(), -1);
        assert_eq!(hilbert_symbol(&q(3), &q(5), Place::Finite(2)).unwrap(), 1);
        assert_eq!(hilbert_symbol(&q(2), &q(2), Place::Finite(2)).unwrap(), 1);
    }

    #[test]
    fn product_formula_examples() {
        assert!(product_formula_check(&q(-1), &q(-1)).unwrap());
        assert!(product_formula_check(&q(1), &q(17)).unwrap());
        assert!(product_formula_check(&q(-1), &q(3)).unwrap());
        assert_eq!(hilbert_symbol(&q(-1), &q(3), Place::Finite(3)).unwrap(), -1);
    }

    #[test]
    fn local_squares() {
        assert!(local_square(&q(17), Place::Finite(2)).unwrap());
        assert!(!local_square(&q(5), Place::Finite(2)).unwrap());
        assert!(local_square(&q(-1), Place::Finite(5)).unwrap());
        assert!(!local_square(&q(-1), Place::Infinity).unwrap());
    }

    #[test]
    fn place_text() {
        assert_eq!("inf".parse::<Place>().unwrap(), Place::Infinity);
        assert_eq!("13".parse::<Place>().unwrap(), Place::Finite(13));
        assert!("15".parse::<Place>().is_err());
        assert!(Place::Finite(3) < Place::Infinity);
    }
}
