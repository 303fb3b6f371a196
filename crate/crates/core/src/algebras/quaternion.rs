use super::StructureAlgebra;
use crate::error::{Error, Result};
use crate::forms::{is_isotropic, isotropic_vector, DiagonalForm, QuadraticForm};
use crate::linalg::{self, Matrix, Vector};
use crate::scalars::{Base, Scalar};

/// Quaternion algebra `(a, b)` with basis `1, i, j, k`, `i² = a`, `j² = b`,
/// `ij = k = −ji`, carrying its conjugation involution.
pub fn quaternion(a: &Scalar, b: &Scalar) -> Result<StructureAlgebra> {
    if a.is_zero() || b.is_zero() {
        return Err(Error::ZeroArgument("quaternion parameter 0".into()));
    }
    let base = a.base();
    if b.base() != base {
        return Err(Error::BaseMismatch(format!("{} vs {}", a.base(), b.base())));
    }
    if base.characteristic() == 2 {
        return Err(Error::Unsupported("characteristic 2".into()));
    }
    let one = base.one();
    let ab = a * b;
    // products e_x e_y for x, y in {1, i, j, k}
    let entries: [[(usize, Scalar); 4]; 4] = [
        [(0, one.clone()), (1, one.clone()), (2, one.clone()), (3, one.clone())],
        [(1, one.clone()), (0, a.clone()), (3, one.clone()), (2, a.clone())],
        [(2, one.clone()), (3, -&one), (0, b.clone()), (1, -b)],
        [(3, one.clone()), (2, -a), (1, b.clone()), (0, -&ab)],
    ];
    let table = entries
        .iter()
        .flat_map(|row| row.iter().map(|(k, v)| vec![(*k, v.clone())]))
        .collect();
    let labels = ["1", "i", "j", "k"].iter().map(|s| s.to_string()).collect();
    let mut unit = vec![base.zero(); 4];
    unit[0] = one.clone();
    let alg = StructureAlgebra::new(&base, labels, table, unit)?;
    let conj = Matrix::diagonal(&base, &[one.clone(), -&one, -&one, -&one]);
    alg.with_involution(conj)
}

/// A quaternion presentation inside a four-dimensional algebra.
#[derive(Clone, Debug)]
pub struct QuaternionBasis {
    pub a: Scalar,
    pub b: Scalar,
    /// Images of `i` and `j`.
    pub i: Vector,
    pub j: Vector,
}

impl QuaternionBasis {
    /// Columns `1, i, j, ij` in the coordinates of the algebra.
    pub fn change_of_basis(&self, alg: &StructureAlgebra) -> Matrix {
        let k = alg.mul(&self.i, &self.j);
        Matrix::from_columns(
            alg.base(),
            alg.dim(),
            &[alg.unit().clone(), self.i.clone(), self.j.clone(), k],
        )
    }

    pub fn norm_form(&self) -> Result<DiagonalForm> {
        let base = self.a.base();
        DiagonalForm::new(
            &base,
            vec![base.one(), -&self.a, -&self.b, &self.a * &self.b],
        )
    }
}

fn scalar_part(alg: &StructureAlgebra, x: &[Scalar]) -> Option<Scalar> {
    let c = alg.coordinates_in(&[alg.unit().clone()], x)?;
    Some(c[0].clone())
}

/// Finds anticommuting trace-zero `u, v` with scalar squares in a central
/// four-dimensional algebra.
pub fn find_quaternion_basis(alg: &StructureAlgebra) -> Result<QuaternionBasis> {
    if alg.dim() != 4 {
        return Err(Error::Precondition(format!("expected dimension 4, got {}", alg.dim())));
    }
    if alg.center().len() != 1 {
        return Err(Error::NonCentral);
    }
    let base = alg.base().clone();
    // trace-zero subspace
    let traces: Vector = (0..4).map(|i| alg.trace(&alg.basis(i))).collect();
    let pure = Matrix::from_rows(&base, vec![traces])?.nullspace();
    if pure.len() != 3 {
        return Err(Error::Precondition("trace form is identically zero".into()));
    }
    // B(x, y) = scalar part of (xy + yx)/2
    let half = base.from_int(2).inv()?;
    let mut gram = Matrix::zeros(&base, 3, 3);
    for r in 0..3 {
        for c in 0..3 {
            let s = linalg::vec_add(&alg.mul(&pure[r], &pure[c]), &alg.mul(&pure[c], &pure[r]));
            let v = scalar_part(alg, &s)
                .ok_or_else(|| Error::Precondition("pure elements do not anticommute to scalars".into()))?;
            gram.set(r, c, &v * &half);
        }
    }
    let form = QuadraticForm::new(gram)?;
    let (diag, p) = crate::forms::diagonalize(&form).map_err(|_| Error::Precondition("degenerate trace form".into()))?;
    let combine = |col: usize| -> Vector {
        let mut v = alg.zero();
        for (r, basis_vec) in pure.iter().enumerate() {
            v = linalg::vec_add(&v, &linalg::vec_scale(basis_vec, p.get(r, col)));
        }
        v
    };
    let (u, w) = (combine(0), combine(1));
    let basis = QuaternionBasis {
        a: diag.entries()[0].clone(),
        b: diag.entries()[1].clone(),
        i: u,
        j: w,
    };
    verify_quaternion_basis(alg, &basis)?;
    Ok(basis)
}

fn verify_quaternion_basis(alg: &StructureAlgebra, qb: &QuaternionBasis) -> Result<()> {
    let ok = alg.mul(&qb.i, &qb.i) == alg.scalar(&qb.a)
        && alg.mul(&qb.j, &qb.j) == alg.scalar(&qb.b)
        && linalg::is_zero_vec(&linalg::vec_add(&alg.mul(&qb.i, &qb.j), &alg.mul(&qb.j, &qb.i)))
        && qb.change_of_basis(alg).rank() == 4;
    if ok {
        Ok(())
    } else {
        Err(Error::Precondition("algebra is not a quaternion algebra".into()))
    }
}

/// Whether a central four-dimensional algebra over Q or F_p is split.
pub fn is_split_quaternion(alg: &StructureAlgebra) -> Result<bool> {
    let qb = find_quaternion_basis(alg)?;
    is_isotropic(&qb.norm_form()?.to_form())
}

/// A nontrivial idempotent of a split quaternion algebra (`None` when the
/// algebra is a division algebra).
pub fn split_idempotent(alg: &StructureAlgebra) -> Result<Option<Vector>> {
    let qb = find_quaternion_basis(alg)?;
    let Some(coeffs) = isotropic_vector(&qb.norm_form()?.to_form())? else {
        return Ok(None);
    };
    // x = x0 + x1 i + x2 j + x3 ij has reduced norm 0
    let frame = qb.change_of_basis(alg);
    let x = frame.mul_vec(&coeffs);
    let base: Base = alg.base().clone();
    let half = base.from_int(2).inv()?;
    let reduced_trace = |y: &Vector| &alg.trace(y) * &half;
    let mut candidates = vec![x.clone()];
    for c in 0..4 {
        candidates.push(alg.mul(&x, &frame.column(c)));
    }
    for z in candidates {
        let t = reduced_trace(&z);
        if t.is_zero() {
            continue;
        }
        let e = linalg::vec_scale(&z, &t.inv()?);
        if alg.mul(&e, &e) == e {
            return Ok(Some(e));
        }
    }
    Err(Error::Precondition("no idempotent found from a zero divisor".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebras::matrix_algebra;

    #[test]
    fn quaternion_relations() {
        let q = Base::Rational;
        let h = quaternion(&q.from_int(-1), &q.from_int(-1)).unwrap();
        assert!(h.check_associative());
        assert_eq!(h.center().len(), 1);
        let conj = h.involution().unwrap().clone();
        assert!(h.check_involution(&conj));
        let fixed = conj.sub(&Matrix::identity(&q, 4)).nullspace();
        assert_eq!(fixed.len(), 1);
        let k = h.basis(3);
        assert_eq!(h.mul(&k, &k), h.scalar(&q.from_int(-1)));
    }

    #[test]
    fn splitting() {
        let q = Base::Rational;
        assert!(!is_split_quaternion(&quaternion(&q.from_int(-1), &q.from_int(-1)).unwrap()).unwrap());
        let f3 = Base::PrimeField(3);
        let h3 = quaternion(&f3.from_int(-1), &f3.from_int(-1)).unwrap();
        assert!(is_split_quaternion(&h3).unwrap());
        let e = split_idempotent(&h3).unwrap().unwrap();
        assert!(h3.is_split_certificate(&e).unwrap());
        let h11 = quaternion(&q.one(), &q.one()).unwrap();
        let e = split_idempotent(&h11).unwrap().unwrap();
        assert!(h11.is_split_certificate(&e).unwrap());
        assert!(is_split_quaternion(&matrix_algebra(&q, 2).unwrap()).unwrap());
    }

    #[test]
    fn non_central_input_is_rejected() {
        let q = Base::Rational;
        let f = matrix_algebra(&q, 1).unwrap();
        let ff = crate::algebras::direct_product(&f, &f).unwrap();
        let ffff = crate::algebras::direct_product(&ff, &ff).unwrap();
        assert!(matches!(find_quaternion_basis(&ffff), Err(Error::NonCentral)));
    }
}
