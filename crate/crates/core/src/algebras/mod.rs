//! Finite-dimensional algebras given by structure constants.

mod quaternion;

use crate::error::{Error, Result};
use crate::linalg::{self, sparse_nullspace, Matrix, SparseRow, Vector};
use crate::scalars::{Base, Scalar};

pub use quaternion::{
    find_quaternion_basis, is_split_quaternion, quaternion, split_idempotent, QuaternionBasis,
};

/// Largest supported dimension.
pub const MAX_DIM: usize = 64;

/// An algebra with basis `e_0 … e_{n−1}` and products `e_i·e_j = Σ c_ij^k e_k`.
/// Products are stored sparsely; `table[i*n + j]` lists the nonzero `(k, c_ij^k)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureAlgebra {
    base: Base,
    labels: Vec<String>,
    table: Vec<SparseRow>,
    unit: Vector,
    involution: Option<Matrix>,
}

impl StructureAlgebra {
    pub fn new(base: &Base, labels: Vec<String>, table: Vec<SparseRow>, unit: Vector) -> Result<StructureAlgebra> {
        let n = labels.len();
        if n == 0 || n > MAX_DIM {
            return Err(Error::InvalidInput(format!("algebra dimension {n} outside 1..={MAX_DIM}")));
        }
        if table.len() != n * n || unit.len() != n {
            return Err(Error::InvalidInput("structure table has the wrong size".into()));
        }
        let mut table = table;
        for row in table.iter_mut() {
            row.retain(|(_, v)| !v.is_zero());
            row.sort_by_key(|(k, _)| *k);
            if row.iter().any(|(k, v)| *k >= n || v.base() != *base) {
                return Err(Error::InvalidInput("structure constant out of range or base".into()));
            }
        }
        Ok(StructureAlgebra {
            base: base.clone(),
            labels,
            table,
            unit,
            involution: None,
        })
    }

    /// Builds from a dense table indexed `(i*n + j)*n + k`.
    pub fn from_dense(base: &Base, labels: Vec<String>, dense: &[Scalar], unit: Option<Vector>) -> Result<StructureAlgebra> {
        let n = labels.len();
        if dense.len() != n * n * n {
            return Err(Error::InvalidInput(format!(
                "table has {} entries, expected {}",
                dense.len(),
                n * n * n
            )));
        }
        let table = (0..n * n)
            .map(|ij| {
                (0..n)
                    .filter(|&k| !dense[ij * n + k].is_zero())
                    .map(|k| (k, dense[ij * n + k].clone()))
                    .collect()
            })
            .collect();
        let provisional = StructureAlgebra::new(base, labels, table, vec![base.zero(); n])?;
        let unit = match unit {
            Some(u) => u,
            None => provisional.find_unit().ok_or_else(|| Error::InvalidInput("algebra has no unit".into()))?,
        };
        let mut alg = provisional;
        alg.unit = unit;
        if !alg.check_unit() {
            return Err(Error::InvalidInput("unit is not a two-sided identity".into()));
        }
        Ok(alg)
    }

    pub fn to_dense(&self) -> Vec<Scalar> {
        let n = self.dim();
        let mut out = vec![self.base.zero(); n * n * n];
        for (ij, row) in self.table.iter().enumerate() {
            for (k, v) in row {
                out[ij * n + k] = v.clone();
            }
        }
        out
    }

    pub fn with_involution(mut self, m: Matrix) -> Result<StructureAlgebra> {
        if m.rows() != self.dim() || m.cols() != self.dim() {
            return Err(Error::InvalidInput("involution matrix has the wrong size".into()));
        }
        self.involution = Some(m);
        Ok(self)
    }

    pub fn base(&self) -> &Base {
        &self.base
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn unit(&self) -> &Vector {
        &self.unit
    }

    pub fn involution(&self) -> Option<&Matrix> {
        self.involution.as_ref()
    }

    pub fn product(&self, i: usize, j: usize) -> &SparseRow {
        &self.table[i * self.dim() + j]
    }

    pub fn zero(&self) -> Vector {
        vec![self.base.zero(); self.dim()]
    }

    pub fn basis(&self, i: usize) -> Vector {
        let mut v = self.zero();
        v[i] = self.base.one();
        v
    }

    pub fn scalar(&self, c: &Scalar) -> Vector {
        linalg::vec_scale(&self.unit, c)
    }

    pub fn mul(&self, x: &[Scalar], y: &[Scalar]) -> Vector {
        let n = self.dim();
        let mut out = self.zero();
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                let c = xi * yj;
                for (k, v) in &self.table[i * n + j] {
                    out[*k] = &out[*k] + &(&c * v);
                }
            }
        }
        out
    }

    pub fn pow(&self, x: &[Scalar], e: u32) -> Vector {
        let mut acc = self.unit.clone();
        for _ in 0..e {
            acc = self.mul(&acc, x);
        }
        acc
    }

    fn find_unit(&self) -> Option<Vector> {
        // solve u·e_j = e_j for all j
        let n = self.dim();
        let mut rows = Vec::new();
        let mut rhs = Vec::new();
        for j in 0..n {
            for k in 0..n {
                let row: Vector = (0..n)
                    .map(|i| {
                        self.product(i, j)
                            .iter()
                            .find(|(kk, _)| *kk == k)
                            .map(|(_, v)| v.clone())
                            .unwrap_or_else(|| self.base.zero())
                    })
                    .collect();
                rows.push(row);
                rhs.push(if j == k { self.base.one() } else { self.base.zero() });
            }
        }
        Matrix::from_rows(&self.base, rows).ok()?.solve(&rhs)
    }

    /// Whether `unit` is a two-sided identity on basis elements.
    pub fn check_unit(&self) -> bool {
        (0..self.dim()).all(|i| {
            let e = self.basis(i);
            self.mul(&self.unit, &e) == e && self.mul(&e, &self.unit) == e
        })
    }

    /// First basis triple violating associativity, if any.
    pub fn associativity_witness(&self) -> Option<(usize, usize, usize)> {
        let n = self.dim();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let mut left: Vec<(usize, Scalar)> = Vec::new();
                    for (l, c) in self.product(i, j) {
                        for (m, d) in self.product(*l, k) {
                            push_coeff(&mut left, *m, c * d);
                        }
                    }
                    let mut right: Vec<(usize, Scalar)> = Vec::new();
                    for (l, c) in self.product(j, k) {
                        for (m, d) in self.product(i, *l) {
                            push_coeff(&mut right, *m, c * d);
                        }
                    }
                    left.retain(|(_, v)| !v.is_zero());
                    right.retain(|(_, v)| !v.is_zero());
                    left.sort_by_key(|(m, _)| *m);
                    right.sort_by_key(|(m, _)| *m);
                    if left != right {
                        return Some((i, j, k));
                    }
                }
            }
        }
        None
    }

    pub fn check_associative(&self) -> bool {
        self.associativity_witness().is_none()
    }

    /// Matrix of `y ↦ x·y`.
    pub fn left_matrix(&self, x: &[Scalar]) -> Matrix {
        let cols: Vec<Vector> = (0..self.dim()).map(|j| self.mul(x, &self.basis(j))).collect();
        Matrix::from_columns(&self.base, self.dim(), &cols)
    }

    /// Matrix of `y ↦ y·x`.
    pub fn right_matrix(&self, x: &[Scalar]) -> Matrix {
        let cols: Vec<Vector> = (0..self.dim()).map(|j| self.mul(&self.basis(j), x)).collect();
        Matrix::from_columns(&self.base, self.dim(), &cols)
    }

    /// Trace of left multiplication.
    pub fn trace(&self, x: &[Scalar]) -> Scalar {
        let mut acc = self.base.zero();
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for j in 0..self.dim() {
                if let Some((_, v)) = self.product(i, j).iter().find(|(k, _)| *k == j) {
                    acc = &acc + &(xi * v);
                }
            }
        }
        acc
    }

    /// Basis of the center, from the sparse system `x·e_j = e_j·x`.
    pub fn center(&self) -> Vec<Vector> {
        let n = self.dim();
        let mut rows: Vec<SparseRow> = Vec::new();
        for j in 0..n {
            // equation for each output coordinate k
            let mut eqs: Vec<SparseRow> = vec![Vec::new(); n];
            for i in 0..n {
                for (k, v) in self.product(i, j) {
                    push_coeff(&mut eqs[*k], i, v.clone());
                }
                for (k, v) in self.product(j, i) {
                    push_coeff(&mut eqs[*k], i, -v);
                }
            }
            rows.extend(eqs.into_iter().filter(|r| !r.is_empty()));
        }
        sparse_nullspace(&self.base, n, rows)
    }

    /// Coordinates of `x` in the span of `basis` (assumed independent).
    pub fn coordinates_in(&self, basis: &[Vector], x: &[Scalar]) -> Option<Vector> {
        let m = Matrix::from_columns(&self.base, self.dim(), basis);
        m.solve(x)
    }

    /// All idempotents of the center when it has dimension at most 2.
    pub fn central_idempotents(&self) -> Result<Vec<Vector>> {
        let center = self.center();
        let zero = self.zero();
        let one = self.unit.clone();
        match center.len() {
            1 => Ok(vec![zero, one]),
            2 => {
                let Some((w, delta)) = self.center_generator(&center) else {
                    return Err(Error::Precondition("center is not a quadratic algebra".into()));
                };
                match delta.sqrt() {
                    Some(s) if !s.is_zero() => {
                        let half = self.base.from_int(2).inv()?;
                        let ws = linalg::vec_scale(&w, &s.inv()?);
                        let e = linalg::vec_scale(&linalg::vec_add(&one, &ws), &half);
                        let f = linalg::vec_sub(&one, &e);
                        Ok(vec![zero, one, e, f])
                    }
                    _ => Ok(vec![zero, one]),
                }
            }
            d => Err(Error::Unsupported(format!("center of dimension {d}"))),
        }
    }

    /// For a two-dimensional center: `w` with `w² = δ·1`, trace-free against 1.
    pub fn center_generator(&self, center: &[Vector]) -> Option<(Vector, Scalar)> {
        let z = center
            .iter()
            .find(|c| linalg::rank_of(&self.base, &[self.unit.clone(), (*c).clone()]) == 2)?
            .clone();
        // z² = α z + β
        let z2 = self.mul(&z, &z);
        let coords = self.coordinates_in(&[self.unit.clone(), z.clone()], &z2)?;
        let (beta, alpha) = (coords[0].clone(), coords[1].clone());
        let half_alpha = &alpha * &self.base.from_int(2).inv().ok()?;
        let w = linalg::vec_sub(&z, &self.scalar(&half_alpha));
        let delta = &beta + &half_alpha.square();
        Some((w, delta))
    }

    /// The corner algebra `e·A·e` with unit `e`.
    pub fn corner(&self, e: &[Scalar]) -> Result<(StructureAlgebra, Vec<Vector>)> {
        if self.mul(e, e) != e {
            return Err(Error::Precondition("corner of a non-idempotent".into()));
        }
        let images: Vec<Vector> = (0..self.dim())
            .map(|i| self.mul(&self.mul(e, &self.basis(i)), e))
            .collect();
        let span = Matrix::from_columns(&self.base, self.dim(), &images).column_space();
        let sub = self.subalgebra(&span, e)?;
        Ok((sub, span))
    }

    /// Structure constants of the subalgebra spanned by `basis` (closed under
    /// products) with unit `unit`.
    pub fn subalgebra(&self, basis: &[Vector], unit: &[Scalar]) -> Result<StructureAlgebra> {
        let m = basis.len();
        let spanner = Matrix::from_columns(&self.base, self.dim(), basis);
        let mut table = Vec::with_capacity(m * m);
        for i in 0..m {
            for j in 0..m {
                let p = self.mul(&basis[i], &basis[j]);
                let c = spanner
                    .solve(&p)
                    .ok_or_else(|| Error::ClosureViolation(format!("product of basis {i},{j} leaves the span")))?;
                table.push(c.into_iter().enumerate().filter(|(_, v)| !v.is_zero()).collect());
            }
        }
        let u = spanner
            .solve(unit)
            .ok_or_else(|| Error::ClosureViolation("unit outside the span".into()))?;
        let labels = (0..m).map(|i| format!("b{i}")).collect();
        StructureAlgebra::new(&self.base, labels, table, u)
    }

    /// Whether `m` is an anti-automorphism of order at most 2.
    pub fn check_involution(&self, m: &Matrix) -> bool {
        let n = self.dim();
        if m.mul(m) != Matrix::identity(&self.base, n) {
            return false;
        }
        if m.mul_vec(&self.unit) != self.unit {
            return false;
        }
        let images: Vec<Vector> = (0..n).map(|i| m.column(i)).collect();
        for i in 0..n {
            for j in 0..n {
                let lhs = m.mul_vec(&self.mul(&self.basis(i), &self.basis(j)));
                let rhs = self.mul(&images[j], &images[i]);
                if lhs != rhs {
                    return false;
                }
            }
        }
        true
    }

    /// Whether `e` certifies that this central simple algebra is split:
    /// `e` is idempotent and `e·A·e` is one-dimensional.
    pub fn is_split_certificate(&self, e: &[Scalar]) -> Result<bool> {
        if self.center().len() != 1 {
            return Ok(false);
        }
        if self.mul(e, e) != e || linalg::is_zero_vec(e) {
            return Ok(false);
        }
        let (corner, _) = self.corner(e)?;
        Ok(corner.dim() == 1)
    }
}

fn push_coeff(row: &mut SparseRow, col: usize, v: Scalar) {
    if let Some(entry) = row.iter_mut().find(|(c, _)| *c == col) {
        entry.1 = &entry.1 + &v;
    } else {
        row.push((col, v));
    }
}

/// `n × n` matrices with basis `E_ij` at index `i·n + j`.
pub fn matrix_algebra(base: &Base, n: usize) -> Result<StructureAlgebra> {
    let dim = n * n;
    let mut table = vec![Vec::new(); dim * dim];
    for i in 0..n {
        for j in 0..n {
            for l in 0..n {
                table[(i * n + j) * dim + (j * n + l)] = vec![(i * n + l, base.one())];
            }
        }
    }
    let mut unit = vec![base.zero(); dim];
    for i in 0..n {
        unit[i * n + i] = base.one();
    }
    let labels = (0..n)
        .flat_map(|i| (0..n).map(move |j| format!("E{}{}", i + 1, j + 1)))
        .collect();
    StructureAlgebra::new(base, labels, table, unit)
}

/// Kronecker product with basis `a_i ⊗ b_j` at index `i·dim(B) + j`.
pub fn tensor(a: &StructureAlgebra, b: &StructureAlgebra) -> Result<StructureAlgebra> {
    if a.base != b.base {
        return Err(Error::BaseMismatch(format!("{} vs {}", a.base, b.base)));
    }
    let (m, n) = (a.dim(), b.dim());
    let dim = m * n;
    // rows come out in the order ((i1·n + j1)·dim + (i2·n + j2))
    let mut table = Vec::with_capacity(dim * dim);
    for i1 in 0..m {
        for j1 in 0..n {
            for i2 in 0..m {
                for j2 in 0..n {
                    let mut row = Vec::new();
                    for (k1, v1) in a.product(i1, i2) {
                        for (k2, v2) in b.product(j1, j2) {
                            row.push((k1 * n + k2, v1 * v2));
                        }
                    }
                    table.push(row);
                }
            }
        }
    }
    let mut unit = vec![a.base.zero(); dim];
    for (i, ui) in a.unit.iter().enumerate() {
        for (j, uj) in b.unit.iter().enumerate() {
            unit[i * n + j] = ui * uj;
        }
    }
    let labels = a
        .labels
        .iter()
        .flat_map(|la| b.labels.iter().map(move |lb| format!("{la}*{lb}")))
        .collect();
    let mut out = StructureAlgebra::new(&a.base, labels, table, unit)?;
    if let (Some(ia), Some(ib)) = (&a.involution, &b.involution) {
        out.involution = Some(kronecker(ia, ib));
    }
    Ok(out)
}

fn kronecker(x: &Matrix, y: &Matrix) -> Matrix {
    let (r1, c1, r2, c2) = (x.rows(), x.cols(), y.rows(), y.cols());
    let mut out = Matrix::zeros(x.base(), r1 * r2, c1 * c2);
    for i in 0..r1 {
        for j in 0..c1 {
            if x.get(i, j).is_zero() {
                continue;
            }
            for k in 0..r2 {
                for l in 0..c2 {
                    out.set(i * r2 + k, j * c2 + l, x.get(i, j) * y.get(k, l));
                }
            }
        }
    }
    out
}

/// Same space with the reversed product.
pub fn opposite(a: &StructureAlgebra) -> StructureAlgebra {
    let n = a.dim();
    let mut table = vec![Vec::new(); n * n];
    for i in 0..n {
        for j in 0..n {
            table[i * n + j] = a.product(j, i).clone();
        }
    }
    StructureAlgebra {
        base: a.base.clone(),
        labels: a.labels.clone(),
        table,
        unit: a.unit.clone(),
        involution: a.involution.clone(),
    }
}

/// Direct product `A × B` with basis `(a_i, 0)` then `(0, b_j)`.
pub fn direct_product(a: &StructureAlgebra, b: &StructureAlgebra) -> Result<StructureAlgebra> {
    if a.base != b.base {
        return Err(Error::BaseMismatch(format!("{} vs {}", a.base, b.base)));
    }
    let (m, n) = (a.dim(), b.dim());
    let dim = m + n;
    let mut table = vec![Vec::new(); dim * dim];
    for i in 0..m {
        for j in 0..m {
            table[i * dim + j] = a.product(i, j).clone();
        }
    }
    for i in 0..n {
        for j in 0..n {
            table[(m + i) * dim + (m + j)] = b.product(i, j).iter().map(|(k, v)| (m + k, v.clone())).collect();
        }
    }
    let mut unit = a.unit.clone();
    unit.extend(b.unit.iter().cloned());
    let labels = a
        .labels
        .iter()
        .map(|l| format!("({l},0)"))
        .chain(b.labels.iter().map(|l| format!("(0,{l})")))
        .collect();
    StructureAlgebra::new(&a.base, labels, table, unit)
}

/// A linear map between algebras, stored as a `dim(target) × dim(source)` matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraMorphism {
    pub matrix: Matrix,
}

impl AlgebraMorphism {
    pub fn apply(&self, x: &[Scalar]) -> Vector {
        self.matrix.mul_vec(x)
    }

    /// First basis pair `(i, j)` on which multiplicativity fails, or `None`.
    pub fn multiplicativity_witness(
        &self,
        source: &StructureAlgebra,
        target: &StructureAlgebra,
    ) -> Option<(usize, usize)> {
        let n = source.dim();
        let images: Vec<Vector> = (0..n).map(|i| self.matrix.column(i)).collect();
        for i in 0..n {
            for j in 0..n {
                let lhs = self.apply(&source.mul(&source.basis(i), &source.basis(j)));
                let rhs = target.mul(&images[i], &images[j]);
                if lhs != rhs {
                    return Some((i, j));
                }
            }
        }
        None
    }

    pub fn preserves_unit(&self, source: &StructureAlgebra, target: &StructureAlgebra) -> bool {
        self.apply(source.unit()) == *target.unit()
    }

    pub fn is_bijective(&self) -> bool {
        self.matrix.is_square() && self.matrix.rank() == self.matrix.rows()
    }

    /// Unit-preserving, multiplicative on all basis pairs, and bijective.
    pub fn is_isomorphism(&self, source: &StructureAlgebra, target: &StructureAlgebra) -> bool {
        self.preserves_unit(source, target)
            && self.multiplicativity_witness(source, target).is_none()
            && self.is_bijective()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matrix_algebra_basics() {
        let q = Base::Rational;
        let m2 = matrix_algebra(&q, 2).unwrap();
        assert!(m2.check_associative());
        assert!(m2.check_unit());
        assert_eq!(m2.center().len(), 1);
        let idem = m2.central_idempotents().unwrap();
        assert_eq!(idem.len(), 2);
        let e11 = m2.basis(0);
        assert!(m2.is_split_certificate(&e11).unwrap());
    }

    #[test]
    fn product_and_quadratic_centers() {
        let q = Base::Rational;
        let f = matrix_algebra(&q, 1).unwrap();
        let ff = direct_product(&f, &f).unwrap();
        assert_eq!(ff.center().len(), 2);
        assert_eq!(ff.central_idempotents().unwrap().len(), 4);

        // F[x]/(x² − c)
        let quad = |c: i64| {
            let table = vec![
                vec![(0, q.one())],
                vec![(1, q.one())],
                vec![(1, q.one())],
                vec![(0, q.from_int(c))],
            ];
            StructureAlgebra::new(&q, vec!["1".into(), "x".into()], table, vec![q.one(), q.zero()]).unwrap()
        };
        assert_eq!(quad(2).central_idempotents().unwrap().len(), 2);
        let four = quad(1).central_idempotents().unwrap();
        assert_eq!(four.len(), 4);
        assert_eq!(four[2], vec![Scalar::rational(1, 2), Scalar::rational(1, 2)]);
    }

    #[test]
    fn perturbed_table_is_not_associative() {
        let q = Base::Rational;
        let m2 = matrix_algebra(&q, 2).unwrap();
        let mut dense = m2.to_dense();
        // e_12·e_21 = 2·e_11 instead of e_11
        let n = 4;
        dense[(1 * n + 2) * n] = q.from_int(2);
        let bad = StructureAlgebra::from_dense(&q, m2.labels().to_vec(), &dense, Some(m2.unit().clone())).unwrap();
        assert!(bad.associativity_witness().is_some());
    }

    #[test]
    fn tensor_and_opposite() {
        let q = Base::Rational;
        let h = quaternion(&q.from_int(-1), &q.from_int(3)).unwrap();
        let m1 = matrix_algebra(&q, 1).unwrap();
        let t = tensor(&h, &m1).unwrap();
        assert_eq!(t.to_dense(), h.to_dense());
        assert_eq!(opposite(&opposite(&h)), h);
        let hh = tensor(&h, &h).unwrap();
        assert_eq!(hh.dim(), 16);
        assert_eq!(hh.center().len(), 1);
        assert!(opposite(&h).check_associative());
    }
}
