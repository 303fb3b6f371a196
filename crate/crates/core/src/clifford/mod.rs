//! Even Clifford algebras and Clifford bimodules of diagonal forms on the
//! subset basis `e_S = e_{s₁}⋯e_{s_k}` (`s₁ < … < s_k`).

mod hyperbolic;
mod sum;

use crate::algebras::{StructureAlgebra, MAX_DIM};
use crate::error::{Error, Result};
use crate::forms::{diagonalize, signed_discriminant, to_diagonal, DiagonalForm, QuadraticForm};
use crate::linalg::{self, Matrix, SparseRow, Vector};
use crate::scalars::{Base, Scalar};

pub use hyperbolic::{hyperbolic_model, HyperbolicModel};
pub use sum::{sum_isomorphism, SumIsomorphism};

/// Largest rank whose even Clifford algebra fits in [`MAX_DIM`].
pub const MAX_RANK: usize = 7;

/// `e_S·e_T = sign·(∏_{i∈S∩T} a_i)·e_{S△T}`.
pub fn monomial_product(entries: &[Scalar], s: u32, t: u32) -> (u32, Scalar) {
    let mut swaps = 0u32;
    for j in 0..32 {
        if t & (1 << j) != 0 {
            swaps += (s >> (j + 1)).count_ones();
        }
    }
    let base = entries[0].base();
    let mut c = if swaps % 2 == 0 { base.one() } else { -base.one() };
    let common = s & t;
    for (i, a) in entries.iter().enumerate() {
        if common & (1 << i) != 0 {
            c = &c * a;
        }
    }
    (s ^ t, c)
}

/// Subsets of `{0..n}` of the given parity, ordered by size then indices.
pub fn subsets_of_parity(n: usize, odd: bool) -> Vec<u32> {
    let mut out: Vec<u32> = (0..(1u32 << n))
        .filter(|m| (m.count_ones() % 2 == 1) == odd)
        .collect();
    out.sort_by_key(|&m| (m.count_ones(), indices(m)));
    out
}

pub fn indices(mask: u32) -> Vec<usize> {
    (0..32).filter(|i| mask & (1 << i) != 0).collect()
}

pub fn subset_label(mask: u32) -> String {
    if mask == 0 {
        "1".into()
    } else {
        indices(mask).iter().map(|i| format!("e{}", i + 1)).collect()
    }
}

/// Index lookup for a list of masks over `n` generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubsetBasis {
    pub masks: Vec<u32>,
    position: Vec<Option<usize>>,
}

impl SubsetBasis {
    pub fn new(n: usize, odd: bool) -> SubsetBasis {
        let masks = subsets_of_parity(n, odd);
        let mut position = vec![None; 1 << n];
        for (i, &m) in masks.iter().enumerate() {
            position[m as usize] = Some(i);
        }
        SubsetBasis { masks, position }
    }

    pub fn index(&self, mask: u32) -> usize {
        self.position[mask as usize].expect("mask of the right parity")
    }

    pub fn len(&self) -> usize {
        self.masks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masks.is_empty()
    }
}

fn check_form(q: &DiagonalForm) -> Result<()> {
    if q.rank() == 0 {
        return Err(Error::InvalidInput("Clifford algebra of a rank-0 form".into()));
    }
    if q.rank() > MAX_RANK {
        return Err(Error::Unsupported(format!("rank {} exceeds {MAX_RANK}", q.rank())));
    }
    if q.base().characteristic() == 2 {
        return Err(Error::Unsupported("characteristic 2".into()));
    }
    if let Some(i) = q.entries().iter().position(Scalar::is_zero) {
        return Err(Error::DegenerateEntry(i));
    }
    Ok(())
}

/// `C₀` of a diagonal form.
#[derive(Clone, Debug)]
pub struct EvenClifford {
    pub algebra: StructureAlgebra,
    pub form: DiagonalForm,
    pub basis: SubsetBasis,
}

pub fn even_clifford(q: &DiagonalForm) -> Result<EvenClifford> {
    check_form(q)?;
    let n = q.rank();
    let basis = SubsetBasis::new(n, false);
    let dim = basis.len();
    debug_assert!(dim <= MAX_DIM);
    let base = q.base().clone();
    let mut table: Vec<SparseRow> = Vec::with_capacity(dim * dim);
    for &s in &basis.masks {
        for &t in &basis.masks {
            let (m, c) = monomial_product(q.entries(), s, t);
            table.push(vec![(basis.index(m), c)]);
        }
    }
    let mut unit = vec![base.zero(); dim];
    unit[basis.index(0)] = base.one();
    let labels = basis.masks.iter().map(|&m| subset_label(m)).collect();
    let algebra = StructureAlgebra::new(&base, labels, table, unit)?;
    let tau = canonical_involution_matrix(&base, &basis);
    let algebra = algebra.with_involution(tau)?;
    Ok(EvenClifford {
        algebra,
        form: q.clone(),
        basis,
    })
}

/// `C₀` of an arbitrary regular form, through a diagonalization.
pub fn even_clifford_of(q: &QuadraticForm) -> Result<EvenClifford> {
    even_clifford(&to_diagonal(q)?)
}

/// Product in the full Clifford algebra of a diagonal form, on vectors
/// indexed by subset masks.
fn full_product(entries: &[Scalar], x: &[Scalar], y: &[Scalar]) -> Vector {
    let base = entries[0].base();
    let mut out = vec![base.zero(); x.len()];
    for (s, xs) in x.iter().enumerate() {
        if xs.is_zero() {
            continue;
        }
        for (t, yt) in y.iter().enumerate() {
            if yt.is_zero() {
                continue;
            }
            let (m, c) = monomial_product(entries, s as u32, t as u32);
            out[m as usize] = &out[m as usize] + &(&(xs * yt) * &c);
        }
    }
    out
}

/// `C₀` of a regular form presented on the ordered products `e_S` of the
/// given basis vectors (`S` even), computed through a diagonalization.
pub fn even_clifford_in_basis(q: &QuadraticForm) -> Result<(StructureAlgebra, SubsetBasis)> {
    let n = q.rank();
    if n == 0 {
        return Err(Error::InvalidInput("Clifford algebra of a rank-0 form".into()));
    }
    let (diag, p) = diagonalize(q)?;
    check_form(&diag)?;
    let base = q.base().clone();
    let pinv = p.inverse()?;
    let full = 1usize << n;
    let generator = |c: usize| -> Vector {
        let mut v = vec![base.zero(); full];
        for k in 0..n {
            v[1 << k] = pinv.get(k, c).clone();
        }
        v
    };
    let gens: Vec<Vector> = (0..n).map(generator).collect();
    let basis = SubsetBasis::new(n, false);
    let words: Vec<Vector> = basis
        .masks
        .iter()
        .map(|&m| {
            let mut acc = vec![base.zero(); full];
            acc[0] = base.one();
            for i in indices(m) {
                acc = full_product(diag.entries(), &acc, &gens[i]);
            }
            acc
        })
        .collect();
    // change of basis to the diagonal subset basis of C₀
    let columns: Vec<Vector> = words
        .iter()
        .map(|w| basis.masks.iter().map(|&m| w[m as usize].clone()).collect())
        .collect();
    let dim = basis.len();
    let to_words = Matrix::from_columns(&base, dim, &columns).inverse()?;
    let mut table: Vec<SparseRow> = Vec::with_capacity(dim * dim);
    for x in &words {
        for y in &words {
            let prod = full_product(diag.entries(), x, y);
            let coords: Vector = basis.masks.iter().map(|&m| prod[m as usize].clone()).collect();
            let c = to_words.mul_vec(&coords);
            table.push(c.into_iter().enumerate().filter(|(_, v)| !v.is_zero()).collect());
        }
    }
    let mut unit = vec![base.zero(); dim];
    unit[0] = base.one();
    let labels = basis.masks.iter().map(|&m| subset_label(m)).collect();
    Ok((StructureAlgebra::new(&base, labels, table, unit)?, basis))
}

impl EvenClifford {
    pub fn rank(&self) -> usize {
        self.form.rank()
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    pub fn element(&self, mask: u32) -> Vector {
        self.algebra.basis(self.basis.index(mask))
    }

    /// Image of `e_i ⊗ e_j` (0-based), i.e. the product `e_i e_j`.
    pub fn generator_product(&self, i: usize, j: usize) -> Vector {
        let (m, c) = monomial_product(self.form.entries(), 1 << i, 1 << j);
        linalg::vec_scale(&self.element(m), &c)
    }

    /// `e_top = e₁⋯e_n` for even rank.
    pub fn top_element(&self) -> Vector {
        self.element((1u32 << self.rank()) - 1)
    }
}

fn canonical_involution_matrix(base: &Base, basis: &SubsetBasis) -> Matrix {
    let signs: Vec<Scalar> = basis
        .masks
        .iter()
        .map(|m| {
            let k = m.count_ones();
            if (k * k.saturating_sub(1) / 2) % 2 == 0 {
                base.one()
            } else {
                -base.one()
            }
        })
        .collect();
    Matrix::diagonal(base, &signs)
}

/// `τ₀`, reversing index words: `τ₀(e_S) = (−1)^{|S|(|S|−1)/2}·e_S`.
pub fn canonical_involution(c: &EvenClifford) -> Matrix {
    canonical_involution_matrix(c.algebra.base(), &c.basis)
}

/// `C₁` with the left and right `C₀`-actions.
#[derive(Clone, Debug)]
pub struct CliffordBimodule {
    pub form: DiagonalForm,
    pub even: SubsetBasis,
    pub odd: SubsetBasis,
    /// `left[s·m + t]`: `e_S ∗ e_T` for even `S`, odd `T`.
    left: Vec<(usize, Scalar)>,
    /// `right[t·n + s]`: `e_T · e_S`.
    right: Vec<(usize, Scalar)>,
}

pub fn clifford_bimodule(q: &DiagonalForm) -> Result<CliffordBimodule> {
    check_form(q)?;
    let n = q.rank();
    let even = SubsetBasis::new(n, false);
    let odd = SubsetBasis::new(n, true);
    let mut left = Vec::with_capacity(even.len() * odd.len());
    for &s in &even.masks {
        for &t in &odd.masks {
            let (m, c) = monomial_product(q.entries(), s, t);
            left.push((odd.index(m), c));
        }
    }
    let mut right = Vec::with_capacity(even.len() * odd.len());
    for &t in &odd.masks {
        for &s in &even.masks {
            let (m, c) = monomial_product(q.entries(), t, s);
            right.push((odd.index(m), c));
        }
    }
    Ok(CliffordBimodule {
        form: q.clone(),
        even,
        odd,
        left,
        right,
    })
}

impl CliffordBimodule {
    pub fn dim(&self) -> usize {
        self.odd.len()
    }

    pub fn base(&self) -> &Base {
        self.form.base()
    }

    /// `i₁(e_j)`.
    pub fn generator(&self, j: usize) -> Vector {
        let mut v = vec![self.base().zero(); self.dim()];
        v[self.odd.index(1 << j)] = self.base().one();
        v
    }

    /// `c ∗ x` for `c ∈ C₀`, `x ∈ C₁`.
    pub fn act_left(&self, c: &[Scalar], x: &[Scalar]) -> Vector {
        let m = self.odd.len();
        let mut out = vec![self.base().zero(); m];
        for (s, cs) in c.iter().enumerate() {
            if cs.is_zero() {
                continue;
            }
            for (t, xt) in x.iter().enumerate() {
                if xt.is_zero() {
                    continue;
                }
                let (k, v) = &self.left[s * m + t];
                out[*k] = &out[*k] + &(&(cs * xt) * v);
            }
        }
        out
    }

    /// `x · c` for `x ∈ C₁`, `c ∈ C₀`.
    pub fn act_right(&self, x: &[Scalar], c: &[Scalar]) -> Vector {
        let n = self.even.len();
        let mut out = vec![self.base().zero(); self.odd.len()];
        for (t, xt) in x.iter().enumerate() {
            if xt.is_zero() {
                continue;
            }
            for (s, cs) in c.iter().enumerate() {
                if cs.is_zero() {
                    continue;
                }
                let (k, v) = &self.right[t * n + s];
                out[*k] = &out[*k] + &(&(cs * xt) * v);
            }
        }
        out
    }

    /// Multiplication `m : C₁ ⊗ C₁ → C₀`, with `m(e_i, e_i) = a_i`.
    pub fn mult(&self, x: &[Scalar], y: &[Scalar]) -> Vector {
        let mut out = vec![self.base().zero(); self.even.len()];
        for (t, xt) in x.iter().enumerate() {
            if xt.is_zero() {
                continue;
            }
            for (u, yu) in y.iter().enumerate() {
                if yu.is_zero() {
                    continue;
                }
                let (m, c) = monomial_product(self.form.entries(), self.odd.masks[t], self.odd.masks[u]);
                let k = self.even.index(m);
                out[k] = &out[k] + &(&(xt * yu) * &c);
            }
        }
        out
    }

    /// Matrix of `x ↦ c ∗ x`.
    pub fn left_matrix(&self, c: &[Scalar]) -> Matrix {
        let cols: Vec<Vector> = (0..self.dim())
            .map(|t| {
                let mut e = vec![self.base().zero(); self.dim()];
                e[t] = self.base().one();
                self.act_left(c, &e)
            })
            .collect();
        Matrix::from_columns(self.base(), self.dim(), &cols)
    }

    /// Matrix of `x ↦ x · c`.
    pub fn right_matrix(&self, c: &[Scalar]) -> Matrix {
        let cols: Vec<Vector> = (0..self.dim())
            .map(|t| {
                let mut e = vec![self.base().zero(); self.dim()];
                e[t] = self.base().one();
                self.act_right(&e, c)
            })
            .collect();
        Matrix::from_columns(self.base(), self.dim(), &cols)
    }

    /// Left and right actions of every even basis element commute.
    pub fn actions_commute(&self) -> bool {
        let n = self.even.len();
        let basis = |i: usize| {
            let mut e = vec![self.base().zero(); n];
            e[i] = self.base().one();
            e
        };
        for s in 0..n {
            let l = self.left_matrix(&basis(s));
            for t in 0..n {
                let r = self.right_matrix(&basis(t));
                if l.mul(&r) != r.mul(&l) {
                    return false;
                }
            }
        }
        true
    }
}

/// Center of `C₀` for even rank, presented as `F[x]/(x² − δ)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiscriminantAlgebra {
    pub delta: Scalar,
    pub split: bool,
}

pub fn discriminant_algebra(q: &DiagonalForm) -> Result<DiscriminantAlgebra> {
    if q.rank() % 2 == 1 {
        return Err(Error::Precondition("discriminant algebra needs even rank".into()));
    }
    let c = even_clifford(q)?;
    let z = c.top_element();
    let z2 = c.algebra.mul(&z, &z);
    let delta = c.algebra.coordinates_in(&[c.algebra.unit().clone()], &z2).expect("e_top squares to a scalar")[0].clone();
    let center = c.algebra.center();
    if center.len() != 2 || linalg::rank_of(q.base(), &[center[0].clone(), center[1].clone(), z.clone()]) != 2 {
        return Err(Error::Verification("center is not spanned by 1 and e_top".into()));
    }
    let disc = signed_discriminant(&q.to_form())?;
    if crate::scalars::square_class(&delta).ok() != Some(disc) {
        return Err(Error::Verification("e_top² disagrees with the signed discriminant".into()));
    }
    let split = delta.is_square();
    Ok(DiscriminantAlgebra { delta, split })
}

/// Preferred square root: positive over Q, least representative over F_p.
fn preferred_sqrt(x: &Scalar) -> Option<Scalar> {
    let s = x.sqrt()?;
    Some(match &s {
        Scalar::Rational(r) if r < &num_rational::BigRational::from_integer(0.into()) => -s,
        _ => s,
    })
}

/// The two factors of `C₀` for even rank and trivial discriminant.
#[derive(Clone, Debug)]
pub struct SplitComponents {
    pub plus: StructureAlgebra,
    pub minus: StructureAlgebra,
    /// Central idempotents `e⁺`, `e⁻` in `C₀`.
    pub idempotents: (Vector, Vector),
    /// Spanning vectors in `C₀` for each factor's basis.
    pub plus_span: Vec<Vector>,
    pub minus_span: Vec<Vector>,
}

/// Cuts `C₀` by `e⁺ = (1 + e_top/s)/2`, `s² = e_top²`.
pub fn split_components(c: &EvenClifford) -> Result<SplitComponents> {
    if c.rank() % 2 == 1 {
        return Err(Error::Precondition("split components need even rank".into()));
    }
    let alg = &c.algebra;
    let z = c.top_element();
    let z2 = alg.mul(&z, &z);
    let delta = alg.coordinates_in(&[alg.unit().clone()], &z2).expect("scalar square")[0].clone();
    let s = preferred_sqrt(&delta)
        .ok_or_else(|| Error::Precondition("discriminant is not a square; the center does not split".into()))?;
    let half = alg.base().from_int(2).inv()?;
    let zs = linalg::vec_scale(&z, &s.inv()?);
    let plus_e = linalg::vec_scale(&linalg::vec_add(alg.unit(), &zs), &half);
    let minus_e = linalg::vec_sub(alg.unit(), &plus_e);
    let (plus, plus_span) = alg.corner(&plus_e)?;
    let (minus, minus_span) = alg.corner(&minus_e)?;
    Ok(SplitComponents {
        plus,
        minus,
        idempotents: (plus_e, minus_e),
        plus_span,
        minus_span,
    })
}

/// `x · z = ι(z) ∗ x` on every odd basis element, where `z = e_top` and
/// `ι(z) = −z` is the conjugate in the center (even rank only).
pub fn semilinearity_holds(q: &DiagonalForm) -> Result<bool> {
    if q.rank() % 2 == 1 {
        return Err(Error::Precondition("semilinearity needs even rank".into()));
    }
    let c = even_clifford(q)?;
    let m = clifford_bimodule(q)?;
    let z = c.top_element();
    let minus_z = linalg::vec_scale(&z, &-q.base().one());
    Ok((0..m.dim()).all(|t| {
        let mut x = vec![q.base().zero(); m.dim()];
        x[t] = q.base().one();
        m.act_right(&x, &z) == m.act_left(&minus_z, &x)
    }))
}

/// Whether `τ₀` exchanges the two central idempotents of `C₀`.
pub fn involution_swaps_components(c: &EvenClifford) -> Result<bool> {
    let sc = split_components(c)?;
    let tau = canonical_involution(c);
    let image = tau.mul_vec(&sc.idempotents.0);
    if image == sc.idempotents.1 {
        Ok(true)
    } else if image == sc.idempotents.0 {
        Ok(false)
    } else {
        Err(Error::Verification("τ₀ does not permute the central idempotents".into()))
    }
}

/// Entry-wise image of a diagonal form in another field.
pub fn base_change(q: &DiagonalForm, target: &Base) -> Result<DiagonalForm> {
    let entries: Vec<Scalar> = q
        .entries()
        .iter()
        .map(|a| target.coerce(a))
        .collect::<Result<_>>()?;
    if let Some(i) = entries.iter().position(Scalar::is_zero) {
        return Err(Error::DegenerateEntry(i));
    }
    DiagonalForm::new(target, entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebras::{find_quaternion_basis, is_split_quaternion};

    fn diag(v: &[i64]) -> DiagonalForm {
        DiagonalForm::from_ints(&Base::Rational, v).unwrap()
    }

    #[test]
    fn small_cases() {
        let c = even_clifford(&diag(&[5])).unwrap();
        assert_eq!(c.dim(), 1);
        let c = even_clifford(&diag(&[2, 3])).unwrap();
        let e12 = c.element(0b11);
        assert_eq!(c.algebra.mul(&e12, &e12), c.algebra.scalar(&Scalar::int(-6)));
        let c = even_clifford(&diag(&[1, 1, 1])).unwrap();
        assert_eq!(c.dim(), 4);
        assert_eq!(c.algebra.center().len(), 1);
        let qb = find_quaternion_basis(&c.algebra).unwrap();
        assert!(!is_split_quaternion(&c.algebra).unwrap());
        assert_eq!(crate::scalars::square_class(&qb.a).unwrap(), crate::scalars::square_class(&Scalar::int(-1)).unwrap());
    }

    #[test]
    fn generator_relations() {
        let q = diag(&[2, -3, 5, 7]);
        let c = even_clifford(&q).unwrap();
        assert!(c.algebra.check_associative());
        for i in 0..4 {
            for j in 0..4 {
                for k in 0..4 {
                    let lhs = c.algebra.mul(&c.generator_product(i, j), &c.generator_product(j, k));
                    let rhs = linalg::vec_scale(&c.generator_product(i, k), &q.entries()[j]);
                    assert_eq!(lhs, rhs);
                }
            }
            assert_eq!(c.generator_product(i, i), c.algebra.scalar(&q.entries()[i]));
        }
    }

    #[test]
    fn bimodule_examples() {
        let m = clifford_bimodule(&diag(&[2, 3])).unwrap();
        assert_eq!(m.dim(), 2);
        // e₁e₂ ∗ e₁ = −a·e₂
        let e12 = {
            let mut v = vec![Scalar::int(0); 2];
            v[m.even.index(0b11)] = Scalar::int(1);
            v
        };
        assert_eq!(m.act_left(&e12, &m.generator(0)), linalg::vec_scale(&m.generator(1), &Scalar::int(-2)));
        let one = {
            let mut v = vec![Scalar::int(0); 2];
            v[0] = Scalar::int(1);
            v
        };
        assert_eq!(m.mult(&m.generator(0), &m.generator(0)), linalg::vec_scale(&one, &Scalar::int(2)));
        assert!(m.actions_commute());
    }

    #[test]
    fn discriminant_examples() {
        assert!(discriminant_algebra(&diag(&[1, -1])).unwrap().split);
        let d = discriminant_algebra(&diag(&[1, 1])).unwrap();
        assert!(!d.split);
        assert_eq!(d.delta, Scalar::int(-1));
        let d = discriminant_algebra(&diag(&[2, 3, 5, 7])).unwrap();
        assert_eq!(d.delta, Scalar::int(210));
        assert!(discriminant_algebra(&diag(&[1, 1, 1])).is_err());
    }

    #[test]
    fn split_examples() {
        let sc = split_components(&even_clifford(&diag(&[1, -1])).unwrap()).unwrap();
        assert_eq!((sc.plus.dim(), sc.minus.dim()), (1, 1));
        let sc = split_components(&even_clifford(&diag(&[1, 1, 1, 1])).unwrap()).unwrap();
        assert_eq!((sc.plus.dim(), sc.minus.dim()), (4, 4));
        assert!(!is_split_quaternion(&sc.plus).unwrap());
        assert!(!is_split_quaternion(&sc.minus).unwrap());
        assert!(split_components(&even_clifford(&diag(&[1, 1])).unwrap()).is_err());
    }

    #[test]
    fn semilinearity_and_involution_type() {
        assert!(semilinearity_holds(&diag(&[2, 3])).unwrap());
        assert!(semilinearity_holds(&diag(&[2, 3, -5, 7])).unwrap());
        // n = 2: swaps; n = 4: fixes; n = 6: swaps
        assert!(involution_swaps_components(&even_clifford(&diag(&[1, -1])).unwrap()).unwrap());
        assert!(!involution_swaps_components(&even_clifford(&diag(&[1, 1, 1, 1])).unwrap()).unwrap());
        assert!(involution_swaps_components(&even_clifford(&diag(&[1, 1, 1, -1, -1, -1])).unwrap()).unwrap());
    }

    /// Independent oracle: straightening words in the basis vectors with
    /// `e_i e_i = g_ii` and `e_j e_i = −e_i e_j + 2g_ij` for `i < j`.
    fn straighten(g: &Matrix, word: Vec<usize>) -> Vec<(Vec<usize>, Scalar)> {
        let base = g.base().clone();
        let mut todo = vec![(word, base.one())];
        let mut done: Vec<(Vec<usize>, Scalar)> = Vec::new();
        while let Some((w, c)) = todo.pop() {
            match (0..w.len().saturating_sub(1)).find(|&k| w[k] >= w[k + 1]) {
                None => match done.iter_mut().find(|(d, _)| *d == w) {
                    Some(entry) => entry.1 = &entry.1 + &c,
                    None => done.push((w, c)),
                },
                Some(k) => {
                    let (i, j) = (w[k + 1], w[k]);
                    let mut rest = w[..k].to_vec();
                    rest.extend_from_slice(&w[k + 2..]);
                    if i == j {
                        todo.push((rest, &c * g.get(i, i)));
                    } else {
                        let mut swapped = w.clone();
                        swapped.swap(k, k + 1);
                        todo.push((swapped, -c.clone()));
                        todo.push((rest, &(&c * &base.from_int(2)) * g.get(i, j)));
                    }
                }
            }
        }
        done.retain(|(_, c)| !c.is_zero());
        done
    }

    #[test]
    fn general_gram_matches_rewriting() {
        let base = Base::Rational;
        let g = Matrix::from_rows(
            &base,
            vec![
                vec![Scalar::int(1), Scalar::rational(1, 2), Scalar::int(0), Scalar::int(2)],
                vec![Scalar::rational(1, 2), Scalar::int(0), Scalar::int(3), Scalar::int(0)],
                vec![Scalar::int(0), Scalar::int(3), Scalar::int(-1), Scalar::rational(1, 2)],
                vec![Scalar::int(2), Scalar::int(0), Scalar::rational(1, 2), Scalar::int(5)],
            ],
        )
        .unwrap();
        let q = QuadraticForm::new(g.clone()).unwrap();
        let (alg, basis) = even_clifford_in_basis(&q).unwrap();
        assert!(alg.check_associative());
        for (si, &s) in basis.masks.iter().enumerate() {
            for (ti, &t) in basis.masks.iter().enumerate() {
                let mut word = indices(s);
                word.extend(indices(t));
                let mut expected = vec![Scalar::int(0); basis.len()];
                for (w, c) in straighten(&g, word) {
                    let mask = w.iter().fold(0u32, |m, &i| m | (1 << i));
                    expected[basis.index(mask)] = c;
                }
                assert_eq!(alg.mul(&alg.basis(si), &alg.basis(ti)), expected);
            }
        }
    }

    #[test]
    fn reduction_commutes() {
        let q = diag(&[1, -1, 3]);
        let f5 = Base::PrimeField(5);
        let r = base_change(&q, &f5).unwrap();
        assert_eq!(r.entries()[1], f5.from_int(4));
        let a = even_clifford(&q).unwrap().algebra.to_dense();
        let b = even_clifford(&r).unwrap().algebra.to_dense();
        let reduced: Vec<Scalar> = a.iter().map(|x| f5.coerce(x).unwrap()).collect();
        assert_eq!(reduced, b);
        assert!(matches!(base_change(&diag(&[1, 5]), &f5), Err(Error::DegenerateEntry(1))));
    }
}
