//! `C₀(q ⊥ q′) ≅ C₀(q)⊗C₀(q′) ⊕ C₁(q)⊗C₁(q′)`.

use super::{even_clifford, monomial_product, subset_label, EvenClifford, SubsetBasis};
use crate::algebras::{AlgebraMorphism, StructureAlgebra};
use crate::error::{Error, Result};
use crate::forms::DiagonalForm;
use crate::linalg::{self, Matrix, SparseRow, Vector};

#[derive(Clone, Debug)]
pub struct SumIsomorphism {
    pub source: EvenClifford,
    pub target: StructureAlgebra,
    pub morphism: AlgebraMorphism,
}

impl SumIsomorphism {
    pub fn is_isomorphism(&self) -> bool {
        self.morphism.is_isomorphism(&self.source.algebra, &self.target)
    }
}

/// Target basis: pairs `(S, S′)` of even subsets, then pairs of odd subsets.
struct TargetBasis {
    pairs: Vec<(u32, u32)>,
}

impl TargetBasis {
    fn new(n: usize, m: usize) -> TargetBasis {
        let mut pairs = Vec::new();
        for odd in [false, true] {
            let left = SubsetBasis::new(n, odd);
            let right = SubsetBasis::new(m, odd);
            for &s in &left.masks {
                for &t in &right.masks {
                    pairs.push((s, t));
                }
            }
        }
        TargetBasis { pairs }
    }

    fn index(&self, s: u32, t: u32) -> usize {
        self.pairs.iter().position(|&p| p == (s, t)).expect("pair in basis")
    }

    fn len(&self) -> usize {
        self.pairs.len()
    }
}

/// Products in the target: componentwise Clifford products, with an extra
/// sign `−1` when both factors are odd.
fn target_algebra(q: &DiagonalForm, r: &DiagonalForm, basis: &TargetBasis) -> Result<StructureAlgebra> {
    let base = q.base();
    let dim = basis.len();
    let mut table: Vec<SparseRow> = Vec::with_capacity(dim * dim);
    for &(s, s2) in &basis.pairs {
        for &(t, t2) in &basis.pairs {
            let (u, c) = monomial_product(q.entries(), s, t);
            let (u2, c2) = monomial_product(r.entries(), s2, t2);
            let mut coeff = &c * &c2;
            if s.count_ones() % 2 == 1 && t.count_ones() % 2 == 1 {
                coeff = -coeff;
            }
            table.push(vec![(basis.index(u, u2), coeff)]);
        }
    }
    let mut unit = vec![base.zero(); dim];
    unit[basis.index(0, 0)] = base.one();
    let labels = basis
        .pairs
        .iter()
        .map(|&(s, t)| format!("{}*{}", subset_label(s), subset_label(t)))
        .collect();
    StructureAlgebra::new(base, labels, table, unit)
}

/// Builds the isomorphism on products of two generators of `q ⊥ q′`:
/// `v·w ↦ (v w)⊗1`, `v′·w′ ↦ 1⊗(v′ w′)`, `v·w′ ↦ v⊗w′` and
/// `v′·w ↦ −w⊗v′`, then extends multiplicatively.
pub fn sum_isomorphism(q: &DiagonalForm, r: &DiagonalForm) -> Result<SumIsomorphism> {
    if q.base() != r.base() {
        return Err(Error::BaseMismatch(format!("{} vs {}", q.base(), r.base())));
    }
    let (n, m) = (q.rank(), r.rank());
    if n == 0 || m == 0 {
        return Err(Error::InvalidInput("orthogonal summands must have positive rank".into()));
    }
    let total = q.orthogonal_sum(r)?;
    let source = even_clifford(&total)?;
    let basis = TargetBasis::new(n, m);
    let target = target_algebra(q, r, &basis)?;
    let base = q.base().clone();
    let unit_vec = |s: u32, t: u32| {
        let mut v = vec![base.zero(); basis.len()];
        v[basis.index(s, t)] = base.one();
        v
    };
    // image of e_x e_y for x < y in the combined index set
    let pair_image = |x: usize, y: usize| -> Vector {
        match (x < n, y < n) {
            (true, true) => {
                let (u, c) = monomial_product(q.entries(), 1 << x, 1 << y);
                linalg::vec_scale(&unit_vec(u, 0), &c)
            }
            (false, false) => {
                let (u, c) = monomial_product(r.entries(), 1 << (x - n), 1 << (y - n));
                linalg::vec_scale(&unit_vec(0, u), &c)
            }
            (true, false) => unit_vec(1 << x, 1 << (y - n)),
            (false, true) => linalg::vec_scale(&unit_vec(1 << y, 1 << (x - n)), &-base.one()),
        }
    };
    let columns: Vec<Vector> = source
        .basis
        .masks
        .iter()
        .map(|&mask| {
            let idx = super::indices(mask);
            let mut acc = target.unit().clone();
            for pair in idx.chunks(2) {
                acc = target.mul(&acc, &pair_image(pair[0], pair[1]));
            }
            acc
        })
        .collect();
    let morphism = AlgebraMorphism {
        matrix: Matrix::from_columns(&base, target.dim(), &columns),
    };
    Ok(SumIsomorphism {
        source,
        target,
        morphism,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::{Base, Scalar};

    #[test]
    fn rank_one_summands() {
        let q = DiagonalForm::from_ints(&Base::Rational, &[3]).unwrap();
        let r = DiagonalForm::from_ints(&Base::Rational, &[5]).unwrap();
        let s = sum_isomorphism(&q, &r).unwrap();
        let x = s.target.basis(1);
        assert_eq!(s.target.mul(&x, &x), s.target.scalar(&Scalar::int(-15)));
        assert!(s.is_isomorphism());
    }

    #[test]
    fn pairs_of_ranks() {
        for base in [Base::Rational, Base::PrimeField(11)] {
            for (a, b) in [(&[1i64, 2][..], &[3i64, -1][..]), (&[2, 3], &[1, 1, -1, 5]), (&[1, -1, 3, 2], &[7, 2])] {
                let q = DiagonalForm::from_ints(&base, a).unwrap();
                let r = DiagonalForm::from_ints(&base, b).unwrap();
                let s = sum_isomorphism(&q, &r).unwrap();
                assert_eq!(s.target.dim(), s.source.dim());
                assert!(s.target.check_associative());
                assert!(s.is_isomorphism(), "{a:?} {b:?} over {base}");
            }
        }
    }

    #[test]
    fn mismatched_bases() {
        let q = DiagonalForm::from_ints(&Base::Rational, &[1]).unwrap();
        let r = DiagonalForm::from_ints(&Base::PrimeField(3), &[1]).unwrap();
        assert!(sum_isomorphism(&q, &r).is_err());
    }
}
