//! Second residues of diagonal forms over `F(t)` and the reciprocity law
//! `Σ_x s_x(∂_x q) = 0` in `W(F)`.

use std::fmt;

use crate::error::{Error, Result};
use crate::forms::{witt_equivalent, DiagonalForm, QuadraticForm};
use crate::linalg::Matrix;
use crate::scalars::{Base, Poly, RatFunc, Scalar};

/// A place of `F(t)`: a monic irreducible polynomial, or infinity with
/// uniformizer `−1/t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ResiduePlace {
    Finite(Poly),
    Infinity,
}

impl fmt::Display for ResiduePlace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ResiduePlace::Finite(p) => write!(f, "{p}"),
            ResiduePlace::Infinity => write!(f, "inf"),
        }
    }
}

impl ResiduePlace {
    pub fn degree(&self) -> usize {
        match self {
            ResiduePlace::Finite(p) => p.degree().unwrap_or(0),
            ResiduePlace::Infinity => 1,
        }
    }
}

/// `∂_x q` as a diagonal form over `F[t]/π`; entries are reduced
/// polynomials of degree `< deg π`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidueData {
    pub base: Base,
    pub place: ResiduePlace,
    pub entries: Vec<Poly>,
}

impl ResidueData {
    pub fn is_zero_form(&self) -> bool {
        self.entries.is_empty()
    }

    /// The residue as a form over `F` when the residue field is `F`.
    pub fn to_form_over_base(&self) -> Option<DiagonalForm> {
        if self.place.degree() != 1 {
            return None;
        }
        let entries = self.entries.iter().map(|u| u.coeff(0)).collect();
        DiagonalForm::new(&self.base, entries).ok()
    }

    /// Scharlau transfer to `W(F)` along `s(x) = Tr(x / π′(θ))`; the
    /// identity at infinity.
    pub fn transfer(&self) -> Result<QuadraticForm> {
        let pi = match &self.place {
            ResiduePlace::Infinity => {
                let d = self
                    .to_form_over_base()
                    .ok_or_else(|| Error::InvalidInput("empty residue".into()))?;
                return Ok(d.to_form());
            }
            ResiduePlace::Finite(pi) => pi,
        };
        let d = pi.degree().unwrap_or(0);
        let w = pi.derivative().inv_mod(pi)?;
        let theta = Poly::t(&self.base);
        let mut blocks: Vec<Matrix> = Vec::new();
        for u in &self.entries {
            let uw = u.mul(&w).rem(pi);
            let mut g = Matrix::zeros(&self.base, d, d);
            for i in 0..d {
                for j in 0..d {
                    let x = uw.mul(&theta.pow((i + j) as u32)).rem(pi);
                    g.set(i, j, trace(&x, pi));
                }
            }
            blocks.push(g);
        }
        let gram = blocks
            .into_iter()
            .reduce(|a, b| a.block_diagonal(&b))
            .ok_or_else(|| Error::InvalidInput("empty residue".into()))?;
        QuadraticForm::new(gram)
    }
}

/// Trace of `x` over `F` in `F[t]/π`.
fn trace(x: &Poly, pi: &Poly) -> Scalar {
    let d = pi.degree().unwrap_or(0);
    let theta = Poly::t(pi.base());
    let mut acc = pi.base().zero();
    let mut power = Poly::one(pi.base());
    for k in 0..d {
        acc = &acc + &x.mul(&power).rem(pi).coeff(k);
        power = power.mul(&theta).rem(pi);
    }
    acc
}

fn function_entries(q: &DiagonalForm) -> Result<(Base, Vec<RatFunc>)> {
    let inner = match q.base() {
        Base::Function(inner) => (**inner).clone(),
        other => return Err(Error::InvalidInput(format!("expected a form over F(t), got {other}"))),
    };
    let entries = q
        .entries()
        .iter()
        .map(|a| match a {
            Scalar::Function(f) => Ok(f.clone()),
            other => Err(Error::InvalidInput(format!("{other} is not a rational function"))),
        })
        .collect::<Result<_>>()?;
    Ok((inner, entries))
}

/// `π`-unit part of `f` reduced modulo `π`, with the valuation.
fn unit_residue(f: &RatFunc, pi: &Poly) -> Result<(i64, Poly)> {
    let e = f.valuation(pi);
    let strip = |p: &Poly| {
        let mut p = p.clone();
        while p.rem(pi).is_zero() {
            p = p.divrem(pi).0;
        }
        p
    };
    let num = strip(f.num());
    let den = strip(f.den());
    let u = num.mul(&den.inv_mod(pi)?).rem(pi);
    Ok((e, u))
}

/// Leading-coefficient residue at infinity with uniformizer `s = −1/t`:
/// `f = c·t^{−e}(1 + O(1/t)) = c·(−1)^e·s^e·(…)`.
fn unit_residue_infinity(f: &RatFunc) -> (i64, Scalar) {
    let e = f.valuation_infinity();
    let c = &f.num().leading() * &f.den().leading().inv().expect("nonzero leading coefficient");
    let u = if e % 2 == 0 { c } else { -c };
    (e, u)
}

/// `∂_x` of a diagonal form over `F(t)`.
pub fn second_residue(q: &DiagonalForm, place: &ResiduePlace) -> Result<ResidueData> {
    let (inner, entries) = function_entries(q)?;
    let mut out = Vec::new();
    match place {
        ResiduePlace::Finite(pi) => {
            if pi.base() != &inner {
                return Err(Error::BaseMismatch(format!("{} vs {}", pi.base(), inner)));
            }
            if pi.degree().unwrap_or(0) == 0 || !pi.leading().is_one() {
                return Err(Error::InvalidInput(format!("{pi} is not monic of positive degree")));
            }
            if !pi.is_irreducible()? {
                return Err(Error::InvalidInput(format!("{pi} is reducible")));
            }
            for f in &entries {
                let (e, u) = unit_residue(f, pi)?;
                if e.rem_euclid(2) == 1 {
                    out.push(u);
                }
            }
        }
        ResiduePlace::Infinity => {
            for f in &entries {
                let (e, u) = unit_residue_infinity(f);
                if e.rem_euclid(2) == 1 {
                    out.push(Poly::constant(u));
                }
            }
        }
    }
    Ok(ResidueData {
        base: inner,
        place: place.clone(),
        entries: out,
    })
}

/// All places where some entry has nonzero valuation, finite places sorted,
/// then infinity.
pub fn residue_places(q: &DiagonalForm) -> Result<Vec<ResiduePlace>> {
    let (_, entries) = function_entries(q)?;
    let mut polys: Vec<Poly> = Vec::new();
    for f in &entries {
        for p in [f.num(), f.den()] {
            if p.is_constant() {
                continue;
            }
            let (_, factors) = p.factor()?;
            for (irr, _) in factors {
                if !polys.contains(&irr) {
                    polys.push(irr);
                }
            }
        }
    }
    polys.sort_by(crate::scalars::poly_order);
    let mut out: Vec<ResiduePlace> = polys.into_iter().map(ResiduePlace::Finite).collect();
    out.push(ResiduePlace::Infinity);
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct ReciprocityReport {
    /// Residue rank at each place with a nonzero residue.
    pub residues: Vec<(String, usize)>,
    /// Rank of the transferred total in `W(F)`.
    pub total_rank: usize,
    pub holds: bool,
}

/// Transfers every residue to `W(F)` and checks the total is hyperbolic.
pub fn milnor_reciprocity_check(q: &DiagonalForm) -> Result<ReciprocityReport> {
    let (inner, _) = function_entries(q)?;
    let mut residues = Vec::new();
    let mut total: Option<QuadraticForm> = None;
    for place in residue_places(q)? {
        let r = second_residue(q, &place)?;
        if r.is_zero_form() {
            continue;
        }
        residues.push((place.to_string(), r.entries.len()));
        let t = r.transfer()?;
        total = Some(match total {
            None => t,
            Some(acc) => QuadraticForm::new(acc.gram().block_diagonal(t.gram()))?,
        });
    }
    let (total_rank, holds) = match total {
        None => (0, true),
        Some(t) => {
            let zero = QuadraticForm::new(Matrix::zeros(&inner, 0, 0))?;
            (t.rank(), witt_equivalent(&t, &zero)?)
        }
    };
    Ok(ReciprocityReport {
        residues,
        total_rank,
        holds,
    })
}

/// Whether every finite residue vanishes.
pub fn all_residues_vanish(q: &DiagonalForm) -> Result<bool> {
    for place in residue_places(q)? {
        if place == ResiduePlace::Infinity {
            continue;
        }
        let r = second_residue(q, &place)?;
        if !r.is_zero_form() {
            let t = r.transfer()?;
            let zero = QuadraticForm::new(Matrix::zeros(&r.base, 0, 0))?;
            if !witt_equivalent(&t, &zero)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Certifies that `q` is Witt-equivalent to a form extended from `F`, and
/// returns that constant form.
///
/// Entries `c·g²` are replaced by `⟨c⟩` and pairs `⟨f, g⟩` with `−fg` a
/// square are cancelled as hyperbolic planes; what remains must be constant.
pub fn certify_extended(q: &DiagonalForm) -> Result<Option<DiagonalForm>> {
    let (inner, entries) = function_entries(q)?;
    let mut pending: Vec<RatFunc> = Vec::new();
    let mut constant: Vec<Scalar> = Vec::new();
    for f in entries {
        let c = &f.num().leading() * &f.den().leading().inv()?;
        let normalized = f.mul(&RatFunc::constant(c.inv()?));
        if normalized.sqrt().is_some() {
            constant.push(c);
        } else {
            pending.push(f);
        }
    }
    while let Some(f) = pending.pop() {
        let partner = pending
            .iter()
            .position(|g| f.mul(g).neg().sqrt().is_some());
        match partner {
            Some(i) => {
                pending.remove(i);
            }
            None => return Ok(None),
        }
    }
    Ok(Some(DiagonalForm::new(&inner, constant)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn form(base: &Base, entries: &[&str]) -> DiagonalForm {
        let values = entries.iter().map(|s| base.parse_scalar(s).unwrap()).collect();
        DiagonalForm::new(base, values).unwrap()
    }

    fn qt() -> Base {
        Base::function(Base::Rational).unwrap()
    }

    fn at_t() -> ResiduePlace {
        ResiduePlace::Finite(Poly::t(&Base::Rational))
    }

    #[test]
    fn residue_examples() {
        let r = second_residue(&form(&qt(), &["t"]), &at_t()).unwrap();
        assert_eq!(r.to_form_over_base().unwrap(), DiagonalForm::from_ints(&Base::Rational, &[1]).unwrap());
        let r = second_residue(&form(&qt(), &["t+1"]), &at_t()).unwrap();
        assert!(r.is_zero_form());
        let r = second_residue(&form(&qt(), &["5*t"]), &at_t()).unwrap();
        assert_eq!(r.to_form_over_base().unwrap(), DiagonalForm::from_ints(&Base::Rational, &[5]).unwrap());
        let reducible = ResiduePlace::Finite(Poly::from_ints(&Base::Rational, &[-1, 0, 1]));
        assert!(second_residue(&form(&qt(), &["t"]), &reducible).is_err());
    }

    #[test]
    fn reciprocity_examples() {
        assert!(milnor_reciprocity_check(&form(&qt(), &["3", "-7"])).unwrap().holds);
        let r = milnor_reciprocity_check(&form(&qt(), &["t", "-t"])).unwrap();
        assert!(r.holds);
        for entries in [
            vec!["t", "2*t", "t^2+1"],
            vec!["t^3-2", "3*t^2+3", "t-5", "(t^2+t+1)/(t-1)"],
            vec!["t^2+1"],
        ] {
            assert!(milnor_reciprocity_check(&form(&qt(), &entries)).unwrap().holds, "{entries:?}");
        }
        let f5t = Base::function(Base::PrimeField(5)).unwrap();
        assert!(milnor_reciprocity_check(&form(&f5t, &["t^2+2 mod 5", "t^3+t+1 mod 5", "2*t mod 5"])).unwrap().holds);
    }

    #[test]
    fn infinity_uses_minus_inverse_t() {
        let r = second_residue(&form(&qt(), &["t"]), &ResiduePlace::Infinity).unwrap();
        assert_eq!(r.entries, vec![Poly::constant(Scalar::int(-1))]);
    }

    #[test]
    fn extended_forms() {
        let q = form(&qt(), &["t", "-4*t", "3*t^2+6*t+3"]);
        assert!(all_residues_vanish(&q).unwrap());
        assert_eq!(certify_extended(&q).unwrap().unwrap(), DiagonalForm::from_ints(&Base::Rational, &[3]).unwrap());
        assert!(certify_extended(&form(&qt(), &["t", "t"])).unwrap().is_none());
    }
}
