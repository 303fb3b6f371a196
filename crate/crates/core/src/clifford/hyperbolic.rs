//! `C₀` of the hyperbolic form `H(P)`, `P = F^r`, acting on `ΛP = Λ⁺ ⊕ Λ⁻`.
//!
//! A vector `t + v ∈ P* ⊕ P` acts on `ΛP` by `d_t + l_v`, where `d_t` is
//! contraction with `t` and `l_v` is left wedge with `v`.

use super::{clifford_bimodule, even_clifford, split_components, subsets_of_parity, CliffordBimodule, EvenClifford};
use crate::algebras::{direct_product, matrix_algebra, AlgebraMorphism, StructureAlgebra};
use crate::error::{Error, Result};
use crate::forms::{diagonalize, hyperbolic, QuadraticForm};
use crate::linalg::{self, Matrix, Vector};
use crate::scalars::{Base, Scalar};

/// Largest `r` handled by the model.
pub const MAX_HYPERBOLIC_RANK: usize = 3;

/// The exterior-algebra model of `C₀(H(P))` and `C₁(H(P))`.
#[derive(Clone, Debug)]
pub struct HyperbolicModel {
    pub r: usize,
    pub form: QuadraticForm,
    /// Columns are the diagonalizing basis in the coordinates `t₁…t_r, v₁…v_r`.
    pub change: Matrix,
    pub clifford: EvenClifford,
    pub bimodule: CliffordBimodule,
    /// `End(Λ⁺) × End(Λ⁻)`.
    pub target: StructureAlgebra,
    pub phi0: AlgebraMorphism,
    /// Operators on `ΛP` (basis `Λ⁺` then `Λ⁻`) for each odd basis element.
    pub phi1: Vec<Matrix>,
    /// `d_{t_i}` then `l_{v_i}` on `ΛP`.
    pub generators: Vec<Matrix>,
}

/// Outcome of the model checks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HyperbolicChecks {
    pub generator_relations: bool,
    pub contraction_squares_vanish: bool,
    pub phi0_isomorphism: bool,
    pub phi1_bijective: bool,
    pub phi1_equivariant: bool,
}

impl HyperbolicChecks {
    pub fn all(&self) -> bool {
        self.generator_relations
            && self.contraction_squares_vanish
            && self.phi0_isomorphism
            && self.phi1_bijective
            && self.phi1_equivariant
    }
}

fn exterior_order(r: usize) -> Vec<u32> {
    let mut order = subsets_of_parity(r, false);
    order.extend(subsets_of_parity(r, true));
    order
}

/// Operator on `ΛP` from a rule `mask ↦ (mask', sign)`.
fn operator(base: &Base, order: &[u32], f: impl Fn(u32) -> Option<(u32, bool)>) -> Matrix {
    let n = order.len();
    let pos = |m: u32| order.iter().position(|&x| x == m).expect("mask in basis");
    let mut out = Matrix::zeros(base, n, n);
    for (col, &m) in order.iter().enumerate() {
        if let Some((image, negative)) = f(m) {
            let v = if negative { -base.one() } else { base.one() };
            out.set(pos(image), col, v);
        }
    }
    out
}

fn below(mask: u32, i: usize) -> u32 {
    (mask & ((1u32 << i) - 1)).count_ones()
}

/// `d_{t_i}`: `e_U ↦ (−1)^{#{u<i}} e_{U∖i}` when `i ∈ U`.
fn contraction(base: &Base, order: &[u32], i: usize) -> Matrix {
    operator(base, order, |m| {
        (m & (1 << i) != 0).then(|| (m ^ (1 << i), below(m, i) % 2 == 1))
    })
}

/// `l_{v_i}`: `e_U ↦ e_i ∧ e_U`.
fn wedge(base: &Base, order: &[u32], i: usize) -> Matrix {
    operator(base, order, |m| {
        (m & (1 << i) == 0).then(|| (m | (1 << i), below(m, i) % 2 == 1))
    })
}

fn block(m: &Matrix, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> Vector {
    let mut out = Vec::new();
    for i in rows {
        for j in cols.clone() {
            out.push(m.get(i, j).clone());
        }
    }
    out
}

/// Builds `Φ₀ : C₀(H(P)) → End(Λ⁺) × End(Λ⁻)` and `Φ₁` for `P = F^r`.
pub fn hyperbolic_model(base: &Base, r: usize) -> Result<HyperbolicModel> {
    if r == 0 || r > MAX_HYPERBOLIC_RANK {
        return Err(Error::Unsupported(format!("hyperbolic model needs 1 ≤ r ≤ {MAX_HYPERBOLIC_RANK}")));
    }
    let form = hyperbolic(base, r)?;
    let (diag, change) = diagonalize(&form)?;
    let clifford = even_clifford(&diag)?;
    let bimodule = clifford_bimodule(&diag)?;
    let order = exterior_order(r);
    let half = order.len() / 2;
    let generators: Vec<Matrix> = (0..r)
        .map(|i| contraction(base, &order, i))
        .chain((0..r).map(|i| wedge(base, &order, i)))
        .collect();
    // image of the k-th diagonal basis vector
    let images: Vec<Matrix> = (0..2 * r)
        .map(|k| {
            let mut acc = Matrix::zeros(base, order.len(), order.len());
            for (c, g) in generators.iter().enumerate() {
                acc = acc.add(&g.scale(change.get(c, k)));
            }
            acc
        })
        .collect();
    let word = |mask: u32| {
        let mut acc = Matrix::identity(base, order.len());
        for k in super::indices(mask) {
            acc = acc.mul(&images[k]);
        }
        acc
    };
    let target = direct_product(&matrix_algebra(base, half)?, &matrix_algebra(base, half)?)?;
    let columns: Vec<Vector> = clifford
        .basis
        .masks
        .iter()
        .map(|&m| {
            let op = word(m);
            let mut v = block(&op, 0..half, 0..half);
            v.extend(block(&op, half..2 * half, half..2 * half));
            v
        })
        .collect();
    let phi0 = AlgebraMorphism {
        matrix: Matrix::from_columns(base, target.dim(), &columns),
    };
    let phi1 = bimodule.odd.masks.iter().map(|&m| word(m)).collect();
    Ok(HyperbolicModel {
        r,
        form,
        change,
        clifford,
        bimodule,
        target,
        phi0,
        phi1,
        generators,
    })
}

impl HyperbolicModel {
    fn base(&self) -> &Base {
        self.clifford.algebra.base()
    }

    fn size(&self) -> usize {
        1 << self.r
    }

    /// `Φ₀(c)` as a block-diagonal operator on `ΛP`.
    pub fn phi0_operator(&self, c: &[Scalar]) -> Matrix {
        let v = self.phi0.apply(c);
        let h = self.size() / 2;
        let mut out = Matrix::zeros(self.base(), 2 * h, 2 * h);
        for i in 0..h {
            for j in 0..h {
                out.set(i, j, v[i * h + j].clone());
                out.set(h + i, h + j, v[h * h + i * h + j].clone());
            }
        }
        out
    }

    /// `Φ₁(x)` for `x ∈ C₁` in the odd subset basis.
    pub fn phi1_operator(&self, x: &[Scalar]) -> Matrix {
        let n = self.size();
        let mut out = Matrix::zeros(self.base(), n, n);
        for (c, op) in x.iter().zip(&self.phi1) {
            if !c.is_zero() {
                out = out.add(&op.scale(c));
            }
        }
        out
    }

    pub fn check(&self) -> HyperbolicChecks {
        let base = self.base().clone();
        let n = self.size();
        let id = Matrix::identity(&base, n);
        let gram = self.form.gram();
        let mut generator_relations = true;
        for (a, ga) in self.generators.iter().enumerate() {
            for (b, gb) in self.generators.iter().enumerate() {
                // φ(x)φ(y) + φ(y)φ(x) = 2B(x, y) with B the Gram pairing
                let anti = ga.mul(gb).add(&gb.mul(ga));
                let expected = id.scale(&(&base.from_int(2) * gram.get(a, b)));
                generator_relations &= anti == expected;
            }
        }
        let contraction_squares_vanish = self.generators[..self.r]
            .iter()
            .all(|d| d.mul(d).is_zero());
        let phi0_isomorphism = self.phi0.is_isomorphism(&self.clifford.algebra, &self.target);
        let h = n / 2;
        let off_blocks: Vec<Vector> = self
            .phi1
            .iter()
            .map(|op| {
                let mut v = block(op, 0..h, h..n);
                v.extend(block(op, h..n, 0..h));
                v
            })
            .collect();
        let diagonal_blocks_vanish = self.phi1.iter().all(|op| {
            linalg::is_zero_vec(&block(op, 0..h, 0..h)) && linalg::is_zero_vec(&block(op, h..n, h..n))
        });
        let phi1_bijective = diagonal_blocks_vanish
            && off_blocks.len() == 2 * h * h
            && linalg::rank_of(&base, &off_blocks) == off_blocks.len();
        let mut phi1_equivariant = true;
        let m = self.bimodule.dim();
        'outer: for s in 0..self.clifford.dim() {
            let c = self.clifford.algebra.basis(s);
            let pc = self.phi0_operator(&c);
            for t in 0..m {
                let mut x = vec![base.zero(); m];
                x[t] = base.one();
                let px = self.phi1_operator(&x);
                let left = self.phi1_operator(&self.bimodule.act_left(&c, &x)) == pc.mul(&px);
                let right = self.phi1_operator(&self.bimodule.act_right(&x, &c)) == px.mul(&pc);
                if !(left && right) {
                    phi1_equivariant = false;
                    break 'outer;
                }
            }
        }
        HyperbolicChecks {
            generator_relations,
            contraction_squares_vanish,
            phi0_isomorphism,
            phi1_bijective,
            phi1_equivariant,
        }
    }

    /// Preimages of the matrix units `E₁₁` in each factor, each expressed in
    /// the coordinates of the split component of `C₀` that contains it,
    /// together with that component.
    pub fn component_certificates(&self) -> Result<Vec<(StructureAlgebra, Vector)>> {
        let sc = split_components(&self.clifford)?;
        let inverse = self.phi0.matrix.inverse()?;
        let h2 = self.target.dim() / 2;
        let mut out = Vec::new();
        for offset in [0, h2] {
            let mut unit = vec![self.base().zero(); self.target.dim()];
            unit[offset] = self.base().one();
            let e = inverse.mul_vec(&unit);
            let alg = &self.clifford.algebra;
            let (component, span) = if alg.mul(&e, &sc.idempotents.0) == e {
                (&sc.plus, &sc.plus_span)
            } else if alg.mul(&e, &sc.idempotents.1) == e {
                (&sc.minus, &sc.minus_span)
            } else {
                return Err(Error::Verification("matrix unit straddles both components".into()));
            };
            let coords = Matrix::from_columns(self.base(), alg.dim(), span)
                .solve(&e)
                .ok_or_else(|| Error::Verification("idempotent outside its component".into()))?;
            out.push((component.clone(), coords));
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn models_are_isomorphisms() {
        for base in [Base::Rational, Base::PrimeField(7)] {
            for r in 1..=MAX_HYPERBOLIC_RANK {
                let m = hyperbolic_model(&base, r).unwrap();
                let checks = m.check();
                assert!(checks.all(), "r = {r}: {checks:?}");
                for (component, e) in m.component_certificates().unwrap() {
                    assert!(component.is_split_certificate(&e).unwrap());
                }
            }
        }
    }
}
