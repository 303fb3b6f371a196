//! The invariants `e⁰`, `e¹`, `e²` on (total) Witt groups, and second
//! residues over rational function fields.

mod residue;

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::brauer::{class_of_algebra, quaternion_from_class, BrauerClass2};
use crate::clifford::{even_clifford, split_components};
use crate::error::{Error, Result};
use crate::forms::{signed_discriminant, to_diagonal, witt_decompose, DiagonalForm, QuadraticForm, WittClass, TRIVIAL_LABEL};
use crate::scalars::{Base, Scalar, SquareClass};

pub use residue::{
    all_residues_vanish, certify_extended, milnor_reciprocity_check, residue_places, second_residue,
    ReciprocityReport, ResidueData, ResiduePlace,
};

/// `⊕_L W(F, L)` over value-label representatives; absent labels are zero.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TotalWittElement {
    pub components: BTreeMap<String, WittClass>,
}

impl TotalWittElement {
    pub fn zero() -> TotalWittElement {
        TotalWittElement::default()
    }

    /// Class of a single form, filed under its value label.
    pub fn from_form(q: &QuadraticForm) -> Result<TotalWittElement> {
        let mut out = TotalWittElement::zero();
        out.components.insert(q.value_label().to_string(), witt_decompose(q)?);
        Ok(out)
    }

    pub fn from_diagonal(q: &DiagonalForm) -> Result<TotalWittElement> {
        TotalWittElement::from_form(&q.to_form())
    }

    pub fn component(&self, label: &str) -> Option<&WittClass> {
        self.components.get(label)
    }

    /// Componentwise sum, re-reduced to anisotropic kernels.
    pub fn add(&self, other: &TotalWittElement) -> Result<TotalWittElement> {
        let mut out = self.clone();
        for (label, class) in &other.components {
            let merged = match out.components.get(label) {
                None => class.clone(),
                Some(mine) => {
                    let sum = mine.kernel.orthogonal_sum(&class.kernel)?;
                    let mut w = if sum.rank() == 0 {
                        WittClass { kernel: sum, index: 0 }
                    } else {
                        witt_decompose(&sum.to_form())?
                    };
                    w.index += mine.index + class.index;
                    w
                }
            };
            out.components.insert(label.clone(), merged);
        }
        Ok(out)
    }

    pub fn is_zero(&self) -> bool {
        self.components.values().all(WittClass::is_zero)
    }
}

/// Total rank modulo 2.
pub fn e0(w: &TotalWittElement) -> u8 {
    (w.components.values().map(|c| c.kernel.rank()).sum::<usize>() % 2) as u8
}

pub fn e0_form(q: &QuadraticForm) -> u8 {
    (q.rank() % 2) as u8
}

fn trivial_class(base: &Base) -> Result<SquareClass> {
    crate::scalars::square_class(&base.one())
}

/// Product of the signed discriminants of the components.
pub fn e1(w: &TotalWittElement) -> Result<SquareClass> {
    let mut acc: Option<SquareClass> = None;
    for (label, c) in &w.components {
        if c.kernel.rank() % 2 == 1 {
            return Err(Error::Precondition(format!("component {label} has odd rank")));
        }
        let d = if c.kernel.rank() == 0 {
            trivial_class(c.kernel.base())?
        } else {
            signed_discriminant(&c.kernel.to_form())?
        };
        acc = Some(match acc {
            None => d,
            Some(a) => a.mul(&d),
        });
    }
    match acc {
        Some(a) => Ok(a),
        None => trivial_class(&Base::Rational),
    }
}

pub fn e1_form(q: &QuadraticForm) -> Result<SquareClass> {
    if q.rank() % 2 == 1 {
        return Err(Error::Precondition("e¹ needs even rank".into()));
    }
    if q.rank() == 0 {
        return trivial_class(q.base());
    }
    signed_discriminant(q)
}

/// Even rank and trivial signed discriminant.
pub fn in_i2(q: &DiagonalForm) -> Result<bool> {
    if q.rank() % 2 == 1 {
        return Ok(false);
    }
    if q.rank() == 0 {
        return Ok(true);
    }
    Ok(signed_discriminant(&q.to_form())?.is_trivial())
}

/// Sum over components of `e²` of the anisotropic kernels.
pub fn e2(w: &TotalWittElement) -> Result<BrauerClass2> {
    let mut acc = BrauerClass2::trivial();
    for c in w.components.values() {
        acc = acc.add(&e2_diagonal(&c.kernel)?);
    }
    Ok(acc)
}

pub fn e2_form(q: &QuadraticForm) -> Result<BrauerClass2> {
    if q.rank() == 0 {
        return Ok(BrauerClass2::trivial());
    }
    e2_diagonal(&to_diagonal(q)?)
}

/// Brauer class of `C₀⁺` for a form in `I²`.
///
/// Rank 4 reads the class off `C₀⁺` directly. Larger ranks are split as
/// `⟨a₁,a₂,a₃,a₁a₂a₃⟩ + ⟨−a₁a₂a₃, a₄, …⟩` in the Witt group, so every entry
/// stays a product of the original ones.
pub fn e2_diagonal(q: &DiagonalForm) -> Result<BrauerClass2> {
    if !in_i2(q)? {
        return Err(Error::Precondition(
            "e² needs even rank and trivial signed discriminant".into(),
        ));
    }
    match q.base() {
        Base::PrimeField(_) => return Ok(BrauerClass2::trivial()),
        Base::Rational => {}
        other => return Err(Error::Unsupported(format!("e² over {other}"))),
    }
    match q.rank() {
        0 | 2 => Ok(BrauerClass2::trivial()),
        4 => {
            let sc = split_components(&even_clifford(q)?)?;
            class_of_algebra(&sc.plus)
        }
        _ => {
            let a = q.entries();
            let x = &(&a[0] * &a[1]) * &a[2];
            let first = DiagonalForm::new(q.base(), vec![a[0].clone(), a[1].clone(), a[2].clone(), x.clone()])?;
            let mut rest = vec![-x];
            rest.extend(a[3..].iter().cloned());
            let second = DiagonalForm::new(q.base(), rest)?;
            Ok(e2_diagonal(&first)?.add(&e2_diagonal(&second)?))
        }
    }
}

/// Both components of `C₀` of a rank-4 form in `I²` carry the same class.
pub fn component_classes(q: &DiagonalForm) -> Result<(BrauerClass2, BrauerClass2)> {
    if q.rank() != 4 || !in_i2(q)? {
        return Err(Error::Precondition("rank-4 form with trivial discriminant expected".into()));
    }
    let sc = split_components(&even_clifford(q)?)?;
    Ok((class_of_algebra(&sc.plus)?, class_of_algebra(&sc.minus)?))
}

/// Outcome of `e²(q ⊥ q′) = e²(q) + e²(q′)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdditivityCheck {
    pub left: BrauerClass2,
    pub right: BrauerClass2,
    pub sum: BrauerClass2,
}

impl AdditivityCheck {
    pub fn holds(&self) -> bool {
        self.sum == self.left.add(&self.right)
    }
}

pub fn e2_additivity_check(q: &DiagonalForm, r: &DiagonalForm) -> Result<AdditivityCheck> {
    Ok(AdditivityCheck {
        left: e2_diagonal(q)?,
        right: e2_diagonal(r)?,
        sum: e2_diagonal(&q.orthogonal_sum(r)?)?,
    })
}

/// Reduced norm form `⟨1, −a, −b, ab⟩` of the quaternion algebra realizing
/// `c`, checked to have `e² = c`.
pub fn construct_preimage(c: &BrauerClass2) -> Result<DiagonalForm> {
    let (a, b) = quaternion_from_class(c)?;
    let q = norm_form_of(&a, &b)?;
    let got = e2_diagonal(&q)?;
    if got != *c {
        return Err(Error::Verification(format!("preimage of {c} has e² = {got}")));
    }
    Ok(q)
}

fn norm_form_of(a: &BigInt, b: &BigInt) -> Result<DiagonalForm> {
    let s = |n: BigInt| Scalar::Rational(BigRational::from_integer(n));
    DiagonalForm::new(
        &Base::Rational,
        vec![s(1.into()), s(-a.clone()), s(-b.clone()), s(a * b)],
    )
}

/// A label-free element over a field, for callers that only have one form.
pub fn total_of(q: &DiagonalForm) -> Result<TotalWittElement> {
    let mut out = TotalWittElement::zero();
    let w = if q.rank() == 0 {
        WittClass { kernel: q.clone(), index: 0 }
    } else {
        witt_decompose(&q.to_form())?
    };
    out.components.insert(TRIVIAL_LABEL.to_string(), w);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::hyperbolic;
    use crate::scalars::{hilbert_symbol, Place};

    fn diag(v: &[i64]) -> DiagonalForm {
        DiagonalForm::from_ints(&Base::Rational, v).unwrap()
    }

    fn set(places: &[&str]) -> BrauerClass2 {
        BrauerClass2::new(places.iter().map(|p| p.parse().unwrap())).unwrap()
    }

    /// Clifford invariant from Hasse invariants: `c = s + correction(n mod 8)`.
    fn clifford_from_hasse(v: &[i64]) -> BrauerClass2 {
        let r = |n: i64| BigRational::from_integer(n.into());
        let det: i64 = v.iter().product();
        let (x, y) = match v.len() % 8 {
            1 | 2 => (1, 1),
            3 | 4 => (-1, -det),
            5 | 6 => (-1, -1),
            _ => (-1, det),
        };
        let places: Vec<Place> = crate::scalars::arith::primes()
            .take_while(|&p| p < 250)
            .map(Place::Finite)
            .chain([Place::Infinity])
            .filter(|&p| {
                let mut s = hilbert_symbol(&r(x), &r(y), p).unwrap();
                for i in 0..v.len() {
                    for j in i + 1..v.len() {
                        s *= hilbert_symbol(&r(v[i]), &r(v[j]), p).unwrap();
                    }
                }
                s == -1
            })
            .collect();
        BrauerClass2::new(places).unwrap()
    }

    #[test]
    fn e0_e1_examples() {
        assert_eq!(e0(&total_of(&diag(&[1, -1])).unwrap()), 0);
        assert_eq!(e0(&total_of(&diag(&[1, 1, 1])).unwrap()), 1);
        let h = TotalWittElement::from_form(&hyperbolic(&Base::Rational, 2).unwrap()).unwrap();
        assert_eq!(e0(&h), 0);
        assert!(h.is_zero());
        let sq = |n: i64| crate::scalars::square_class(&Scalar::int(n)).unwrap();
        assert_eq!(e1_form(&diag(&[1, -7]).to_form()).unwrap(), sq(7));
        assert_eq!(e1_form(&diag(&[1, -3, 1, -5]).to_form()).unwrap(), sq(15));
        assert!(e1(&h).unwrap().is_trivial());
        assert!(e1(&total_of(&diag(&[1, 1, 1])).unwrap()).is_err());
    }

    #[test]
    fn e2_examples() {
        assert!(e2_form(&hyperbolic(&Base::Rational, 2).unwrap()).unwrap().is_trivial());
        assert_eq!(e2_diagonal(&diag(&[1, 1, 1, 1])).unwrap(), set(&["2", "inf"]));
        assert_eq!(e2_diagonal(&diag(&[1, 1, -3, -3])).unwrap(), set(&["2", "3"]));
        assert!(e2_diagonal(&diag(&[1, 1])).is_err());
        // rank 8, anisotropic and definite
        assert_eq!(e2_diagonal(&diag(&[1; 8])).unwrap(), clifford_from_hasse(&[1; 8]));
    }

    #[test]
    fn e2_agrees_with_hasse_formula() {
        for v in [
            vec![1, 1, 1, 1],
            vec![2, 3, 5, 30],
            vec![-1, -1, 3, 3],
            vec![1, 2, 3, 5, 7, -210],
            vec![1, 1, 1, 1, 1, 1, 1, 1],
            vec![-2, 5, 7, -70],
        ] {
            assert_eq!(e2_diagonal(&diag(&v)).unwrap(), clifford_from_hasse(&v), "{v:?}");
        }
    }

    #[test]
    fn components_agree() {
        let (a, b) = component_classes(&diag(&[2, 3, 5, 30])).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn additivity_examples() {
        let h = to_diagonal(&hyperbolic(&Base::Rational, 2).unwrap()).unwrap();
        assert!(e2_additivity_check(&diag(&[1, 1, 1, 1]), &h).unwrap().holds());
        let c = e2_additivity_check(&diag(&[1, 1, 1, 1]), &diag(&[1, 1, -3, -3])).unwrap();
        assert!(c.holds());
        assert_eq!(c.sum, set(&["3", "inf"]));
        let q = diag(&[2, 3, 5, 30]);
        assert!(e2_additivity_check(&q, &q).unwrap().sum.is_trivial());
    }

    #[test]
    fn preimages() {
        assert_eq!(construct_preimage(&BrauerClass2::trivial()).unwrap(), diag(&[1, -1, -1, 1]));
        assert_eq!(construct_preimage(&set(&["2", "inf"])).unwrap(), diag(&[1, 1, 1, 1]));
        assert_eq!(construct_preimage(&set(&["2", "3"])).unwrap(), diag(&[1, 1, -3, -3]));
    }
}
