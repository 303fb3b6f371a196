//! Quadratic forms over a field, stored through the Gram matrix of the
//! bilinear form `b(x, y) = (q(x + y) − q(x) − q(y)) / 2`, so `⟨a⟩` has Gram `[a]`.

mod isotropy;

use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::{Matrix, Vector};
use crate::scalars::{square_class, Base, Scalar, SquareClass};

pub use isotropy::{
    hasse_invariant, is_isotropic, isometric, isotropic_vector, solve_conic, witt_decompose,
    witt_equivalent, WittClass,
};

pub const TRIVIAL_LABEL: &str = "trivial";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticForm {
    gram: Matrix,
    value_label: String,
}

impl QuadraticForm {
    pub fn new(gram: Matrix) -> Result<QuadraticForm> {
        QuadraticForm::with_label(gram, TRIVIAL_LABEL)
    }

    pub fn with_label(gram: Matrix, label: &str) -> Result<QuadraticForm> {
        if !gram.is_square() {
            return Err(Error::InvalidInput("Gram matrix is not square".into()));
        }
        if !gram.is_symmetric() {
            return Err(Error::InvalidInput("Gram matrix is not symmetric".into()));
        }
        Ok(QuadraticForm {
            gram,
            value_label: label.to_string(),
        })
    }

    pub fn gram(&self) -> &Matrix {
        &self.gram
    }

    pub fn value_label(&self) -> &str {
        &self.value_label
    }

    pub fn base(&self) -> &Base {
        self.gram.base()
    }

    pub fn rank(&self) -> usize {
        self.gram.rows()
    }

    pub fn det(&self) -> Scalar {
        if self.rank() == 0 {
            return self.base().one();
        }
        self.gram.det()
    }

    pub fn is_regular(&self) -> bool {
        !self.det().is_zero()
    }

    pub fn value(&self, v: &[Scalar]) -> Scalar {
        self.bilinear(v, v)
    }

    pub fn bilinear(&self, u: &[Scalar], v: &[Scalar]) -> Scalar {
        crate::linalg::dot(u, &self.gram.mul_vec(v))
    }

    /// Gram matrix of the form restricted to the span of `basis`.
    pub fn restrict(&self, basis: &[Vector]) -> QuadraticForm {
        let p = Matrix::from_columns(self.base(), self.rank(), basis);
        QuadraticForm {
            gram: self.gram.congruence(&p),
            value_label: self.value_label.clone(),
        }
    }

    pub fn is_diagonal(&self) -> bool {
        let n = self.rank();
        (0..n).all(|i| (0..n).all(|j| i == j || self.gram.get(i, j).is_zero()))
    }
}

impl fmt::Display for QuadraticForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.gram)
    }
}

/// `⟨a₁, …, a_n⟩` with nonzero entries.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DiagonalForm {
    base: Base,
    entries: Vec<Scalar>,
}

impl DiagonalForm {
    pub fn new(base: &Base, entries: Vec<Scalar>) -> Result<DiagonalForm> {
        for (i, e) in entries.iter().enumerate() {
            if e.base() != *base {
                return Err(Error::BaseMismatch(format!("entry {e} is not in {base}")));
            }
            if e.is_zero() {
                return Err(Error::DegenerateEntry(i));
            }
        }
        Ok(DiagonalForm {
            base: base.clone(),
            entries,
        })
    }

    pub fn from_ints(base: &Base, entries: &[i64]) -> Result<DiagonalForm> {
        DiagonalForm::new(base, entries.iter().map(|&a| base.from_int(a)).collect())
    }

    pub fn empty(base: &Base) -> DiagonalForm {
        DiagonalForm {
            base: base.clone(),
            entries: vec![],
        }
    }

    pub fn base(&self) -> &Base {
        &self.base
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.entries
    }

    pub fn rank(&self) -> usize {
        self.entries.len()
    }

    pub fn det(&self) -> Scalar {
        self.entries
            .iter()
            .fold(self.base.one(), |acc, a| &acc * a)
    }

    pub fn to_form(&self) -> QuadraticForm {
        QuadraticForm::new(Matrix::diagonal(&self.base, &self.entries)).expect("diagonal is symmetric")
    }

    pub fn orthogonal_sum(&self, other: &DiagonalForm) -> Result<DiagonalForm> {
        if self.base != other.base {
            return Err(Error::BaseMismatch(format!("{} vs {}", self.base, other.base)));
        }
        let mut entries = self.entries.clone();
        entries.extend(other.entries.iter().cloned());
        Ok(DiagonalForm {
            base: self.base.clone(),
            entries,
        })
    }

    pub fn scale(&self, n: &Scalar) -> Result<DiagonalForm> {
        if n.is_zero() {
            return Err(Error::ZeroArgument("twist by 0".into()));
        }
        DiagonalForm::new(&self.base, self.entries.iter().map(|a| a * n).collect())
    }

    pub fn negate(&self) -> DiagonalForm {
        DiagonalForm {
            base: self.base.clone(),
            entries: self.entries.iter().map(|a| -a).collect(),
        }
    }

    pub fn signed_discriminant(&self) -> Result<SquareClass> {
        signed_discriminant(&self.to_form())
    }

    /// `(positive, negative)` entry counts over Q.
    pub fn signature(&self) -> Option<(usize, usize)> {
        let mut pos = 0;
        let mut neg = 0;
        for a in &self.entries {
            match a.sign()? {
                1 => pos += 1,
                _ => neg += 1,
            }
        }
        Some((pos, neg))
    }

    /// Entry-wise image under a map of scalars.
    pub fn map(&self, base: &Base, f: impl Fn(&Scalar) -> Result<Scalar>) -> Result<DiagonalForm> {
        let entries = self.entries.iter().map(f).collect::<Result<Vec<_>>>()?;
        DiagonalForm::new(base, entries)
    }
}

impl fmt::Display for DiagonalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.entries.iter().map(|a| a.to_string()).collect();
        write!(f, "<{}>", parts.join(", "))
    }
}

/// Orthogonal basis by symmetric Gaussian elimination. Returns the entries and
/// a matrix `P` with `Pᵀ·G·P` diagonal.
pub fn diagonalize(q: &QuadraticForm) -> Result<(DiagonalForm, Matrix)> {
    if !q.is_regular() {
        return Err(Error::NotRegular);
    }
    let base = q.base().clone();
    let n = q.rank();
    let mut g = q.gram().clone();
    let mut p = Matrix::identity(&base, n);
    for i in 0..n {
        if g.get(i, i).is_zero() {
            if let Some(j) = (i + 1..n).find(|&j| !g.get(j, j).is_zero()) {
                swap_basis(&mut g, &mut p, i, j);
            } else if let Some(j) = (i + 1..n).find(|&j| !g.get(i, j).is_zero()) {
                // e_i ← e_i + e_j makes q(e_i) = 2·b(e_i, e_j) ≠ 0
                add_basis(&mut g, &mut p, i, j, &base.one());
            } else {
                return Err(Error::NotRegular);
            }
        }
        let pivot = g.get(i, i).clone();
        let inv = pivot.inv()?;
        for j in i + 1..n {
            let f = g.get(i, j) * &inv;
            if !f.is_zero() {
                add_basis(&mut g, &mut p, j, i, &-f);
            }
        }
    }
    let entries = (0..n).map(|i| g.get(i, i).clone()).collect();
    Ok((DiagonalForm::new(&base, entries)?, p))
}

fn swap_basis(g: &mut Matrix, p: &mut Matrix, i: usize, j: usize) {
    let n = g.rows();
    let mut s = Matrix::identity(g.base(), n);
    s.set(i, i, g.base().zero());
    s.set(j, j, g.base().zero());
    s.set(i, j, g.base().one());
    s.set(j, i, g.base().one());
    *g = g.congruence(&s);
    *p = p.mul(&s);
}

/// Replaces basis vector `i` by `e_i + c·e_j`.
fn add_basis(g: &mut Matrix, p: &mut Matrix, i: usize, j: usize, c: &Scalar) {
    let n = g.rows();
    let mut s = Matrix::identity(g.base(), n);
    s.set(j, i, c.clone());
    *g = g.congruence(&s);
    *p = p.mul(&s);
}

/// Diagonal form of a regular quadratic form.
pub fn to_diagonal(q: &QuadraticForm) -> Result<DiagonalForm> {
    if q.is_diagonal() {
        return DiagonalForm::new(q.base(), (0..q.rank()).map(|i| q.gram().get(i, i).clone()).collect())
            .map_err(|_| Error::NotRegular);
    }
    Ok(diagonalize(q)?.0)
}

pub fn orthogonal_sum(q: &QuadraticForm, r: &QuadraticForm) -> Result<QuadraticForm> {
    if q.base() != r.base() {
        return Err(Error::BaseMismatch(format!("{} vs {}", q.base(), r.base())));
    }
    if q.value_label != r.value_label {
        return Err(Error::BaseMismatch(format!(
            "value labels {} vs {}",
            q.value_label, r.value_label
        )));
    }
    QuadraticForm::with_label(q.gram.block_diagonal(&r.gram), &q.value_label)
}

/// Hyperbolic form on `Hom(P, F) ⊕ P` for `P` free of rank `r`, coordinates
/// ordered `t₁…t_r, v₁…v_r`, with `q(t + v) = t(v)`.
pub fn hyperbolic(base: &Base, r: usize) -> Result<QuadraticForm> {
    if r < 1 {
        return Err(Error::InvalidInput("hyperbolic rank must be at least 1".into()));
    }
    let half = base.from_rational(&num_rational::BigRational::new(1.into(), 2.into()))?;
    let mut g = Matrix::zeros(base, 2 * r, 2 * r);
    for i in 0..r {
        g.set(i, r + i, half.clone());
        g.set(r + i, i, half.clone());
    }
    QuadraticForm::new(g)
}

/// Scaling by the rank-one form `⟨n⟩`.
pub fn twist(q: &QuadraticForm, n: &Scalar) -> Result<QuadraticForm> {
    if n.is_zero() {
        return Err(Error::ZeroArgument("twist by 0".into()));
    }
    if !q.is_regular() {
        return Err(Error::NotRegular);
    }
    QuadraticForm::with_label(q.gram.scale(n), &q.value_label)
}

/// `(−1)^{n(n−1)/2}·det` as a square class.
pub fn signed_discriminant(q: &QuadraticForm) -> Result<SquareClass> {
    let det = q.det();
    if det.is_zero() {
        return Err(Error::NotRegular);
    }
    let n = q.rank();
    let sign = if (n * n.saturating_sub(1) / 2) % 2 == 1 { -det } else { det };
    square_class(&sign)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonalize_examples() {
        let q = Base::Rational;
        let h = QuadraticForm::new(Matrix::from_ints(&q, &[&[0, 1], &[1, 0]])).unwrap();
        let (d, p) = diagonalize(&h).unwrap();
        assert_eq!(h.gram().congruence(&p), Matrix::diagonal(&q, d.entries()));
        assert!(signed_discriminant(&h).unwrap().is_trivial());
        let sing = QuadraticForm::new(Matrix::from_ints(&q, &[&[1, 1], &[1, 1]])).unwrap();
        assert_eq!(diagonalize(&sing), Err(Error::NotRegular));
        let one = DiagonalForm::from_ints(&q, &[7]).unwrap().to_form();
        let (d, p) = diagonalize(&one).unwrap();
        assert_eq!(d.entries(), &[q.from_int(7)]);
        assert_eq!(p, Matrix::identity(&q, 1));
    }

    #[test]
    fn hyperbolic_gram() {
        let q = Base::Rational;
        let h = hyperbolic(&q, 1).unwrap();
        assert_eq!(h.gram().get(0, 1), &Scalar::rational(1, 2));
        assert_eq!(h.det(), Scalar::rational(-1, 4));
        assert!(signed_discriminant(&h).unwrap().is_trivial());
        assert!(hyperbolic(&q, 0).is_err());
    }

    #[test]
    fn signed_discriminants() {
        let q = Base::Rational;
        let d = |v: &[i64]| signed_discriminant(&DiagonalForm::from_ints(&q, v).unwrap().to_form()).unwrap();
        assert!(d(&[1, -1]).is_trivial());
        assert_eq!(d(&[2, 3]), SquareClass::Rational((-6).into()));
        assert!(d(&[1, 1, 1, 1]).is_trivial());
    }

    #[test]
    fn twist_and_sum() {
        let q = Base::Rational;
        let f = DiagonalForm::from_ints(&q, &[1, -1]).unwrap().to_form();
        let t = twist(&f, &q.from_int(5)).unwrap();
        assert_eq!(t, DiagonalForm::from_ints(&q, &[5, -5]).unwrap().to_form());
        assert!(twist(&f, &q.zero()).is_err());
        let s = orthogonal_sum(&DiagonalForm::from_ints(&q, &[1]).unwrap().to_form(), &DiagonalForm::from_ints(&q, &[-1]).unwrap().to_form()).unwrap();
        assert_eq!(s, f);
        let other = QuadraticForm::with_label(Matrix::from_ints(&q, &[&[1]]), "p2").unwrap();
        assert!(orthogonal_sum(&f, &other).is_err());
    }
}
