//! 2-torsion Brauer classes over Q, encoded by their even sets of ramified places.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::algebras::{find_quaternion_basis, StructureAlgebra};
use crate::error::{Error, Result};
use crate::scalars::{arith, hilbert_symbol, local_square, relevant_places, Base, Place, Scalar};

/// Default number of `(a, b)` candidates tried by [`quaternion_from_class`].
pub const REALIZATION_CAP: usize = 10_000;

/// Number of primes outside the class added to the candidate pool.
const AUXILIARY_PRIMES: usize = 3;

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawClass")]
pub struct BrauerClass2 {
    ramified: Vec<Place>,
}

#[derive(Deserialize)]
struct RawClass {
    ramified: Vec<Place>,
}

impl TryFrom<RawClass> for BrauerClass2 {
    type Error = Error;
    fn try_from(raw: RawClass) -> Result<BrauerClass2> {
        BrauerClass2::new(raw.ramified)
    }
}

impl BrauerClass2 {
    pub fn trivial() -> BrauerClass2 {
        BrauerClass2::default()
    }

    pub fn new(places: impl IntoIterator<Item = Place>) -> Result<BrauerClass2> {
        let set: BTreeSet<Place> = places.into_iter().collect();
        if set.len() % 2 == 1 {
            return Err(Error::InvalidInput(format!(
                "a Brauer class over Q ramifies at an even number of places, got {}",
                set.len()
            )));
        }
        Ok(BrauerClass2 {
            ramified: set.into_iter().collect(),
        })
    }

    pub fn ramified(&self) -> &[Place] {
        &self.ramified
    }

    pub fn is_trivial(&self) -> bool {
        self.ramified.is_empty()
    }

    /// Group law: symmetric difference.
    pub fn add(&self, other: &BrauerClass2) -> BrauerClass2 {
        let a: BTreeSet<Place> = self.ramified.iter().copied().collect();
        let b: BTreeSet<Place> = other.ramified.iter().copied().collect();
        BrauerClass2 {
            ramified: a.symmetric_difference(&b).copied().collect(),
        }
    }

    /// Index of the class; equals its period over Q.
    pub fn index(&self) -> u32 {
        if self.is_trivial() {
            1
        } else {
            2
        }
    }

    /// Local invariant in `{±1}` at `v`.
    pub fn local(&self, v: Place) -> i8 {
        if self.ramified.contains(&v) {
            -1
        } else {
            1
        }
    }
}

impl fmt::Display for BrauerClass2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.ramified.iter().map(Place::to_string).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// Brauer group is trivial over finite fields.
pub fn brauer_group_is_trivial(base: &Base) -> bool {
    matches!(base, Base::PrimeField(_))
}

/// Places where `(a, b)` ramifies.
pub fn class_of_quaternion(a: &BigRational, b: &BigRational) -> Result<BrauerClass2> {
    if a.is_zero() || b.is_zero() {
        return Err(Error::ZeroArgument("quaternion symbol with a zero entry".into()));
    }
    let mut places = Vec::new();
    for v in relevant_places(a, b)? {
        if hilbert_symbol(a, b, v)? == -1 {
            places.push(v);
        }
    }
    BrauerClass2::new(places)
}

pub fn class_of_quaternion_int(a: i64, b: i64) -> Result<BrauerClass2> {
    class_of_quaternion(&BigRational::from_integer(a.into()), &BigRational::from_integer(b.into()))
}

/// Signed squarefree products from the pool, ordered by absolute value with
/// the positive sign first.
fn candidate_values(pool: &[u64]) -> Vec<BigInt> {
    let mut magnitudes: Vec<BigInt> = (0..(1u64 << pool.len()))
        .map(|mask| {
            pool.iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .fold(BigInt::one(), |acc, (_, p)| acc * BigInt::from(*p))
        })
        .collect();
    magnitudes.sort();
    magnitudes.into_iter().flat_map(|m| [m.clone(), -m]).collect()
}

/// First `(a, b)` in lexicographic `(|a|, |b|)` order, positive before
/// negative, with `class_of_quaternion(a, b) = c`. Values that are local
/// squares at a place of `c` are skipped and do not count against the cap.
pub fn quaternion_from_class(c: &BrauerClass2) -> Result<(BigInt, BigInt)> {
    quaternion_from_class_with_cap(c, REALIZATION_CAP)
}

pub fn quaternion_from_class_with_cap(c: &BrauerClass2, cap: usize) -> Result<(BigInt, BigInt)> {
    let mut pool: Vec<u64> = c
        .ramified
        .iter()
        .filter_map(|v| match v {
            Place::Finite(p) => Some(*p),
            Place::Infinity => None,
        })
        .collect();
    pool.extend(arith::primes().filter(|p| !pool.contains(p)).take(AUXILIARY_PRIMES).collect::<Vec<_>>());
    pool.sort_unstable();
    let values = candidate_values(&pool);
    // a realizing pair has both entries non-square at every ramified place
    let admissible: Vec<&BigInt> = values
        .iter()
        .filter(|x| {
            let r = BigRational::from_integer((*x).clone());
            c.ramified
                .iter()
                .all(|v| matches!(local_square(&r, *v), Ok(false)))
        })
        .collect();
    let mut tried = 0usize;
    for a in &admissible {
        for b in &admissible {
            if tried >= cap {
                return Err(Error::SearchExhausted {
                    what: format!("quaternion realizing {c}"),
                    bound: cap as u64,
                });
            }
            tried += 1;
            let ra = BigRational::from_integer((*a).clone());
            let rb = BigRational::from_integer((*b).clone());
            if class_of_quaternion(&ra, &rb)? == *c {
                return Ok(((*a).clone(), (*b).clone()));
            }
        }
    }
    Err(Error::SearchExhausted {
        what: format!("quaternion realizing {c}"),
        bound: tried as u64,
    })
}

pub fn index(c: &BrauerClass2) -> u32 {
    c.index()
}

/// Class of a central simple algebra of dimension 4. Over a finite field the
/// class is always trivial.
pub fn class_of_algebra(alg: &StructureAlgebra) -> Result<BrauerClass2> {
    let qb = find_quaternion_basis(alg)?;
    match alg.base() {
        Base::PrimeField(_) => Ok(BrauerClass2::trivial()),
        Base::Rational => {
            let a = rational(&qb.a)?;
            let b = rational(&qb.b)?;
            class_of_quaternion(&a, &b)
        }
        other => Err(Error::Unsupported(format!("Brauer classes over {other}"))),
    }
}

fn rational(x: &Scalar) -> Result<BigRational> {
    x.to_rational()
        .ok_or_else(|| Error::InvalidInput(format!("{x} is not rational")))
}

/// Parses a comma-separated list of places such as `2,3,inf`.
pub fn parse_places(s: &str) -> Result<BrauerClass2> {
    let places: Vec<Place> = s
        .split(',')
        .map(str::trim)
        .filter(|x| !x.is_empty())
        .map(str::parse)
        .collect::<Result<_>>()?;
    BrauerClass2::new(places)
}
