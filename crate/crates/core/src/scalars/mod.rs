//! Exact scalar tower: Q, F_p, Q(√d) and rational function fields F(t),
//! together with square classes and Hilbert symbols.

pub mod arith;
mod poly;
mod square_class;
mod symbols;
mod text;

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub use poly::{Poly, RatFunc};
pub(crate) use poly::poly_order;
pub use square_class::{square_class, SquareClass};
pub use symbols::{
    hilbert_symbol, hilbert_symbol_int, local_square, product_formula_check, relevant_places,
    Place,
};

/// The field a [`Scalar`] lives in.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Base {
    Rational,
    PrimeField(u64),
    /// Q(√d), `d` squarefree and different from 0 and 1.
    Quadratic(i64),
    /// Rational function field over `Rational` or `PrimeField`.
    Function(Box<Base>),
}

impl Base {
    pub fn prime_field(p: u64) -> Result<Base> {
        if p > 2 && arith::is_prime_u64(p) {
            Ok(Base::PrimeField(p))
        } else {
            Err(Error::NotOddPrime(BigInt::from(p)))
        }
    }

    pub fn quadratic(d: i64) -> Result<Base> {
        if d == 0 || d == 1 {
            return Err(Error::InvalidInput(format!("d = {d} does not define a quadratic field")));
        }
        let sf = arith::squarefree_part(&BigInt::from(d))?;
        if sf != BigInt::from(d) {
            return Err(Error::InvalidInput(format!("d = {d} is not squarefree")));
        }
        Ok(Base::Quadratic(d))
    }

    pub fn function(coefficients: Base) -> Result<Base> {
        match coefficients {
            Base::Rational | Base::PrimeField(_) => Ok(Base::Function(Box::new(coefficients))),
            other => Err(Error::Unsupported(format!(
                "rational functions over {other}"
            ))),
        }
    }

    pub fn zero(&self) -> Scalar {
        self.from_int(0)
    }

    pub fn one(&self) -> Scalar {
        self.from_int(1)
    }

    pub fn from_int(&self, n: i64) -> Scalar {
        self.from_bigint(&BigInt::from(n))
    }

    pub fn from_bigint(&self, n: &BigInt) -> Scalar {
        self.from_rational(&BigRational::from_integer(n.clone()))
            .expect("integers embed in every base")
    }

    /// Embeds a rational number. Fails over F_p when the denominator is
    /// divisible by `p`.
    pub fn from_rational(&self, r: &BigRational) -> Result<Scalar> {
        Ok(match self {
            Base::Rational => Scalar::Rational(r.clone()),
            Base::PrimeField(p) => {
                let num = arith::reduce_mod(r.numer(), *p);
                let den = arith::reduce_mod(r.denom(), *p);
                let inv = arith::mod_inv(den, *p).ok_or_else(|| {
                    Error::InvalidInput(format!("{r} has no image in F_{p}"))
                })?;
                Scalar::Mod {
                    value: arith::mod_mul(num, inv, *p),
                    p: *p,
                }
            }
            Base::Quadratic(d) => Scalar::Quadratic {
                a: r.clone(),
                b: BigRational::zero(),
                d: *d,
            },
            Base::Function(inner) => {
                Scalar::Function(RatFunc::constant(inner.from_rational(r)?))
            }
        })
    }

    pub fn is_field_of_functions(&self) -> bool {
        matches!(self, Base::Function(_))
    }

    /// Characteristic of the field (0 for characteristic zero).
    pub fn characteristic(&self) -> u64 {
        match self {
            Base::PrimeField(p) => *p,
            Base::Function(inner) => inner.characteristic(),
            _ => 0,
        }
    }
}

impl fmt::Display for Base {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Base::Rational => write!(f, "Q"),
            Base::PrimeField(p) => write!(f, "F_{p}"),
            Base::Quadratic(d) => write!(f, "Q(sqrt({d}))"),
            Base::Function(inner) => write!(f, "{inner}(t)"),
        }
    }
}

/// An exact field element.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    Mod { value: u64, p: u64 },
    /// `a + b·√d`
    Quadratic { a: BigRational, b: BigRational, d: i64 },
    Function(RatFunc),
}

impl Scalar {
    pub fn rational(n: i64, d: i64) -> Scalar {
        Scalar::Rational(BigRational::new(n.into(), d.into()))
    }

    pub fn int(n: i64) -> Scalar {
        Scalar::Rational(BigRational::from_integer(n.into()))
    }

    pub fn base(&self) -> Base {
        match self {
            Scalar::Rational(_) => Base::Rational,
            Scalar::Mod { p, .. } => Base::PrimeField(*p),
            Scalar::Quadratic { d, .. } => Base::Quadratic(*d),
            Scalar::Function(f) => Base::Function(Box::new(f.coefficient_base())),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_zero(),
            Scalar::Mod { value, .. } => *value == 0,
            Scalar::Quadratic { a, b, .. } => a.is_zero() && b.is_zero(),
            Scalar::Function(f) => f.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        *self == self.base().one()
    }

    pub fn zero_like(&self) -> Scalar {
        self.base().zero()
    }

    pub fn one_like(&self) -> Scalar {
        self.base().one()
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rational(r) => Some(r),
            _ => None,
        }
    }

    /// Rational value of a Q-element or of a Q(√d)-element with zero
    /// irrational part.
    pub fn to_rational(&self) -> Option<BigRational> {
        match self {
            Scalar::Rational(r) => Some(r.clone()),
            Scalar::Quadratic { a, b, .. } if b.is_zero() => Some(a.clone()),
            _ => None,
        }
    }

    pub fn inv(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::ZeroArgument("inverse of zero".into()));
        }
        Ok(match self {
            Scalar::Rational(r) => Scalar::Rational(r.recip()),
            Scalar::Mod { value, p } => Scalar::Mod {
                value: arith::mod_inv(*value, *p).expect("nonzero"),
                p: *p,
            },
            Scalar::Quadratic { a, b, d } => {
                let norm = a * a - b * b * BigRational::from_integer((*d).into());
                Scalar::Quadratic {
                    a: a / &norm,
                    b: -(b / &norm),
                    d: *d,
                }
            }
            Scalar::Function(f) => Scalar::Function(f.inv()?),
        })
    }

    pub fn checked_div(&self, other: &Scalar) -> Result<Scalar> {
        Ok(self * &other.inv()?)
    }

    pub fn pow(&self, e: u32) -> Scalar {
        let mut acc = self.one_like();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn square(&self) -> Scalar {
        self * self
    }

    /// Galois conjugate in Q(√d); identity elsewhere.
    pub fn conjugate(&self) -> Scalar {
        match self {
            Scalar::Quadratic { a, b, d } => Scalar::Quadratic {
                a: a.clone(),
                b: -b.clone(),
                d: *d,
            },
            other => other.clone(),
        }
    }

    /// Field norm down to Q for Q(√d); identity for rationals.
    pub fn norm_to_q(&self) -> Option<BigRational> {
        match self {
            Scalar::Rational(r) => Some(r.clone()),
            Scalar::Quadratic { a, b, d } => {
                Some(a * a - b * b * BigRational::from_integer((*d).into()))
            }
            _ => None,
        }
    }

    /// A square root in the same field, if one exists.
    pub fn sqrt(&self) -> Option<Scalar> {
        match self {
            Scalar::Rational(r) => rational_sqrt(r).map(Scalar::Rational),
            Scalar::Mod { value, p } => arith::sqrt_mod(*value, *p).map(|v| Scalar::Mod { value: v, p: *p }),
            Scalar::Quadratic { a, b, d } => quadratic_sqrt(a, b, *d),
            Scalar::Function(f) => f.sqrt().map(Scalar::Function),
        }
    }

    pub fn is_square(&self) -> bool {
        self.sqrt().is_some()
    }

    /// Sign over Q (`None` for other bases).
    pub fn sign(&self) -> Option<i8> {
        self.as_rational().map(|r| {
            if r.is_zero() {
                0
            } else if r.is_positive() {
                1
            } else {
                -1
            }
        })
    }

    pub fn to_i64(&self) -> Option<i64> {
        match self {
            Scalar::Rational(r) if r.is_integer() => r.numer().to_i64(),
            Scalar::Mod { value, .. } => Some(*value as i64),
            _ => None,
        }
    }

    fn assert_same_base(&self, other: &Scalar, op: &str) {
        let same = match (self, other) {
            (Scalar::Rational(_), Scalar::Rational(_)) => true,
            (Scalar::Mod { p, .. }, Scalar::Mod { p: q, .. }) => p == q,
            (Scalar::Quadratic { d, .. }, Scalar::Quadratic { d: e, .. }) => d == e,
            (Scalar::Function(_), Scalar::Function(_)) => self.base() == other.base(),
            _ => false,
        };
        assert!(
            same,
            "scalar {op} across bases: {} vs {}",
            self.base(),
            other.base()
        );
    }
}

fn rational_sqrt(r: &BigRational) -> Option<BigRational> {
    let n = arith::exact_sqrt(r.numer())?;
    let d = arith::exact_sqrt(r.denom())?;
    Some(BigRational::new(n, d))
}

fn quadratic_sqrt(a: &BigRational, b: &BigRational, d: i64) -> Option<Scalar> {
    let dq = BigRational::from_integer(d.into());
    let mk = |x: BigRational, y: BigRational| Scalar::Quadratic { a: x, b: y, d };
    if b.is_zero() {
        if let Some(s) = rational_sqrt(a) {
            return Some(mk(s, BigRational::zero()));
        }
        // a = d·c²
        return rational_sqrt(&(a / &dq)).map(|c| mk(BigRational::zero(), c));
    }
    // (x + y√d)² = a + b√d  ⇒  x² + d y² = a, 2xy = b
    let norm = a * a - b * b * &dq;
    let n = rational_sqrt(&norm)?;
    let two = BigRational::from_integer(2.into());
    for cand in [(a + &n) / &two, (a - &n) / &two] {
        if let Some(x) = rational_sqrt(&cand) {
            if !x.is_zero() {
                let y = b / (&two * &x);
                return Some(mk(x, y));
            }
        }
    }
    None
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", text::format_scalar(self))
    }
}

impl std::str::FromStr for Scalar {
    type Err = Error;
    fn from_str(s: &str) -> Result<Scalar> {
        text::parse_scalar(s)
    }
}

impl serde::Serialize for Scalar {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> serde::Deserialize<'de> for Scalar {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Scalar, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl Base {
    /// Parses a scalar and embeds it into this base (plain rationals are
    /// accepted everywhere).
    pub fn parse_scalar(&self, s: &str) -> Result<Scalar> {
        let v: Scalar = s.parse()?;
        self.coerce(&v)
    }

    /// Coerces a scalar into this base when the embedding is canonical.
    pub fn coerce(&self, v: &Scalar) -> Result<Scalar> {
        if v.base() == *self {
            return Ok(v.clone());
        }
        if let Scalar::Rational(r) = v {
            return self.from_rational(r);
        }
        if let (Base::Function(inner), false) = (self, v.base().is_field_of_functions()) {
            if **inner == v.base() {
                return Ok(Scalar::Function(RatFunc::constant(v.clone())));
            }
        }
        Err(Error::BaseMismatch(format!("{} does not embed in {}", v, self)))
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $impl_fn:ident) => {
        impl<'a> $trait<&'a Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &'a Scalar) -> Scalar {
                $impl_fn(self, rhs)
            }
        }
        impl $trait<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                $impl_fn(&self, &rhs)
            }
        }
        impl<'a> $trait<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &'a Scalar) -> Scalar {
                $impl_fn(&self, rhs)
            }
        }
        impl<'a> $trait<Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                $impl_fn(self, &rhs)
            }
        }
    };
}

fn add_impl(x: &Scalar, y: &Scalar) -> Scalar {
    x.assert_same_base(y, "add");
    match (x, y) {
        (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
        (Scalar::Mod { value: a, p }, Scalar::Mod { value: b, .. }) => Scalar::Mod {
            value: ((*a as u128 + *b as u128) % *p as u128) as u64,
            p: *p,
        },
        (Scalar::Quadratic { a, b, d }, Scalar::Quadratic { a: c, b: e, .. }) => Scalar::Quadratic {
            a: a + c,
            b: b + e,
            d: *d,
        },
        (Scalar::Function(f), Scalar::Function(g)) => Scalar::Function(f.add(g)),
        _ => unreachable!(),
    }
}

fn sub_impl(x: &Scalar, y: &Scalar) -> Scalar {
    add_impl(x, &-y)
}

fn mul_impl(x: &Scalar, y: &Scalar) -> Scalar {
    x.assert_same_base(y, "mul");
    match (x, y) {
        (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
        (Scalar::Mod { value: a, p }, Scalar::Mod { value: b, .. }) => Scalar::Mod {
            value: arith::mod_mul(*a, *b, *p),
            p: *p,
        },
        (Scalar::Quadratic { a, b, d }, Scalar::Quadratic { a: c, b: e, .. }) => {
            let dq = BigRational::from_integer((*d).into());
            Scalar::Quadratic {
                a: a * c + b * e * dq,
                b: a * e + b * c,
                d: *d,
            }
        }
        (Scalar::Function(f), Scalar::Function(g)) => Scalar::Function(f.mul(g)),
        _ => unreachable!(),
    }
}

fn div_impl(x: &Scalar, y: &Scalar) -> Scalar {
    x.checked_div(y).expect("division by zero scalar")
}

forward_binop!(Add, add, add_impl);
forward_binop!(Sub, sub, sub_impl);
forward_binop!(Mul, mul, mul_impl);
forward_binop!(Div, div, div_impl);

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(a) => Scalar::Rational(-a),
            Scalar::Mod { value, p } => Scalar::Mod {
                value: if *value == 0 { 0 } else { p - value },
                p: *p,
            },
            Scalar::Quadratic { a, b, d } => Scalar::Quadratic {
                a: -a,
                b: -b,
                d: *d,
            },
            Scalar::Function(f) => Scalar::Function(f.neg()),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    #[test]
    fn field_arithmetic() {
        let q = Base::Quadratic(-5);
        let s = Scalar::Quadratic {
            a: BigRational::zero(),
            b: BigRational::one(),
            d: -5,
        };
        assert_eq!(&s * &s, q.from_int(-5));
        let x = &q.from_int(2) + &s;
        assert_eq!(&x * &x.inv().unwrap(), q.one());

        let f7 = Base::PrimeField(7);
        assert_eq!(&f7.from_int(3) * &f7.from_int(5), f7.from_int(1));
        assert_eq!(f7.from_rational(&BigRational::new(1.into(), 2.into())).unwrap(), f7.from_int(4));
        assert!(f7.from_rational(&BigRational::new(1.into(), 7.into())).is_err());
    }

    #[test]
    fn square_roots() {
        assert_eq!(Scalar::rational(9, 4).sqrt(), Some(Scalar::rational(3, 2)));
        assert_eq!(Scalar::int(2).sqrt(), None);
        let f7 = Base::PrimeField(7);
        let r = f7.from_int(2).sqrt().unwrap();
        assert_eq!(r.square(), f7.from_int(2));
        // (1 + √2)² = 3 + 2√2
        let q2 = Scalar::Quadratic {
            a: BigRational::from_integer(3.into()),
            b: BigRational::from_integer(2.into()),
            d: 2,
        };
        let r = q2.sqrt().unwrap();
        assert_eq!(r.square(), q2);
        // -5 = (√-5)² in Q(√-5)
        let m5 = Base::Quadratic(-5).from_int(-5);
        assert!(m5.is_square());
        assert!(!Base::Quadratic(-5).from_int(2).is_square());
    }

    #[test]
    fn base_validation() {
        assert!(Base::prime_field(2).is_err());
        assert!(Base::prime_field(9).is_err());
        assert!(Base::quadratic(4).is_err());
        assert!(Base::quadratic(1).is_err());
        assert!(Base::quadratic(-15).is_ok());
    }
}
