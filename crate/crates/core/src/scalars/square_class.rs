use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed};

use super::{arith, Base, Poly, Scalar};
use crate::error::{Error, Result};

/// Canonical representative of a nonzero element modulo squares.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum SquareClass {
    /// Signed squarefree integer.
    Rational(BigInt),
    /// `false` for the square class, `true` for the nonsquares.
    PrimeField { p: u64, nonsquare: bool },
    /// Constant class times a monic squarefree polynomial.
    Function { constant: Box<SquareClass>, poly: Poly },
}

/// Square class of a nonzero scalar over Q, F_p, Q(t) or F_p(t).
pub fn square_class(a: &Scalar) -> Result<SquareClass> {
    if a.is_zero() {
        return Err(Error::ZeroArgument("square class of 0".into()));
    }
    match a {
        Scalar::Rational(r) => Ok(SquareClass::Rational(arith::squarefree_part(
            &(r.numer() * r.denom()),
        )?)),
        Scalar::Mod { value, p } => Ok(SquareClass::PrimeField {
            p: *p,
            nonsquare: arith::legendre_u64(*value, *p) == -1,
        }),
        Scalar::Function(f) => {
            let constant = square_class(&f.num().leading())?;
            // num/den ~ num·den; den is monic
            let monic = f.num().monic().mul(f.den());
            let mut poly = Poly::one(monic.base());
            for (mult, s) in monic.squarefree_factors() {
                if mult % 2 == 1 {
                    poly = poly.mul(&s);
                }
            }
            Ok(SquareClass::Function {
                constant: Box::new(constant),
                poly,
            })
        }
        Scalar::Quadratic { .. } => Err(Error::Unsupported(
            "square classes over quadratic number fields".into(),
        )),
    }
}

impl SquareClass {
    pub fn is_trivial(&self) -> bool {
        match self {
            SquareClass::Rational(s) => s.is_one(),
            SquareClass::PrimeField { nonsquare, .. } => !nonsquare,
            SquareClass::Function { constant, poly } => constant.is_trivial() && poly.is_constant(),
        }
    }

    /// The canonical representative as a scalar.
    pub fn representative(&self) -> Scalar {
        match self {
            SquareClass::Rational(s) => Scalar::Rational(s.clone().into()),
            SquareClass::PrimeField { p, nonsquare } => Scalar::Mod {
                value: if *nonsquare { arith::least_nonresidue(*p) } else { 1 },
                p: *p,
            },
            SquareClass::Function { constant, poly } => {
                let c = constant.representative();
                let base = Base::Function(Box::new(c.base()));
                let cf = base.coerce(&c).expect("constant embeds");
                &cf * &Scalar::Function(super::RatFunc::from_poly(poly.clone()))
            }
        }
    }

    pub fn mul(&self, other: &SquareClass) -> SquareClass {
        square_class(&(&self.representative() * &other.representative()))
            .expect("product of nonzero classes is nonzero")
    }

    /// Sign of the representative over Q.
    pub fn is_negative(&self) -> bool {
        matches!(self, SquareClass::Rational(s) if s.is_negative())
    }
}

impl fmt::Display for SquareClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.representative())
    }
}

impl serde::Serialize for SquareClass {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}
