//! Quadratic forms with values in fractional ideals of the maximal order of a
//! quadratic field, together with their even Clifford orders.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::algebras::StructureAlgebra;
use crate::clifford::{even_clifford_in_basis, indices, subset_label, SubsetBasis};
use crate::error::{Error, Result};
use crate::forms::{self, DiagonalForm, QuadraticForm, WittClass};
use crate::invariants::TotalWittElement;
use crate::linalg::{self, Matrix, Vector};
use crate::scalars::{arith, Base, Scalar};

/// Largest Minkowski bound accepted by class group computations.
pub const MINKOWSKI_DESK_BOUND: u64 = 1_000;

/// Bound on the `ω`-coordinate multiplier when searching generators in real
/// quadratic orders.
pub const REAL_PRINCIPAL_BOUND: i64 = 2_000;

/// Default prime bound for semisimplicity of reductions.
pub const SEMISIMPLE_PRIME_BOUND: u64 = 50;

/// Largest rank accepted by [`even_clifford_order`].
pub const MAX_ORDER_RANK: usize = 6;

const MAX_CLASSES: usize = 256;

/// Coordinates in the basis `(1, ω)`.
type Coords = [BigRational; 2];

/// The maximal order `O = Z ⊕ Zω` of `Q(√d)`, with `ω = √d` or
/// `ω = (1+√d)/2` when `d ≡ 1 mod 4`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuadOrder {
    d: i64,
}

impl QuadOrder {
    pub fn new(d: i64) -> Result<QuadOrder> {
        Base::quadratic(d)?;
        Ok(QuadOrder { d })
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    pub fn base(&self) -> Base {
        Base::Quadratic(self.d)
    }

    fn half_integral(&self) -> bool {
        self.d.rem_euclid(4) == 1
    }

    pub fn discriminant(&self) -> i64 {
        if self.half_integral() {
            self.d
        } else {
            4 * self.d
        }
    }

    /// `(t, n)` with `ω² = tω − n`.
    fn omega_poly(&self) -> (BigInt, BigInt) {
        if self.half_integral() {
            (BigInt::one(), BigInt::from((1 - self.d) / 4))
        } else {
            (BigInt::zero(), BigInt::from(-self.d))
        }
    }

    pub fn omega(&self) -> Scalar {
        self.element(&[BigRational::zero(), BigRational::one()])
    }

    fn coords(&self, x: &Scalar) -> Result<Coords> {
        let (a, b) = match x {
            Scalar::Rational(r) => (r.clone(), BigRational::zero()),
            Scalar::Quadratic { a, b, d } if *d == self.d => (a.clone(), b.clone()),
            other => {
                return Err(Error::BaseMismatch(format!("{other} is not in {}", self.base())));
            }
        };
        if self.half_integral() {
            let two = BigRational::from_integer(2.into());
            Ok([&a - &b, b * two])
        } else {
            Ok([a, b])
        }
    }

    fn element(&self, c: &Coords) -> Scalar {
        let (a, b) = if self.half_integral() {
            let half = BigRational::new(1.into(), 2.into());
            (&c[0] + &c[1] * &half, &c[1] * &half)
        } else {
            (c[0].clone(), c[1].clone())
        };
        Scalar::Quadratic { a, b, d: self.d }
    }

    fn mul_coords(&self, x: &Coords, y: &Coords) -> Coords {
        let (t, n) = self.omega_poly();
        let (t, n) = (BigRational::from_integer(t), BigRational::from_integer(n));
        let high = &x[1] * &y[1];
        [
            &x[0] * &y[0] - &n * &high,
            &x[0] * &y[1] + &x[1] * &y[0] + &t * &high,
        ]
    }

    fn conj_coords(&self, x: &Coords) -> Coords {
        let (t, _) = self.omega_poly();
        [&x[0] + &x[1] * BigRational::from_integer(t), -x[1].clone()]
    }

    /// `N(x + yω)` for integers `x`, `y`.
    fn norm_int(&self, x: &BigInt, y: &BigInt) -> BigInt {
        let (t, n) = self.omega_poly();
        x * x + t * x * y + n * y * y
    }

    pub fn is_integral(&self, x: &Scalar) -> Result<bool> {
        Ok(self.coords(x)?.iter().all(|c| c.is_integer()))
    }

    pub fn minkowski_bound(&self) -> f64 {
        let disc = (self.discriminant() as f64).abs().sqrt();
        if self.d < 0 {
            2.0 / std::f64::consts::PI * disc
        } else {
            disc / 2.0
        }
    }

    pub fn unit_ideal(&self) -> FracIdeal {
        self.ideal(&[Scalar::int(1)]).expect("O is an ideal")
    }

    /// The `O`-module generated by `gens`.
    pub fn ideal(&self, gens: &[Scalar]) -> Result<FracIdeal> {
        let omega = [BigRational::zero(), BigRational::one()];
        let mut vectors = Vec::with_capacity(2 * gens.len());
        for g in gens {
            let c = self.coords(g)?;
            vectors.push(self.mul_coords(&c, &omega));
            vectors.push(c);
        }
        FracIdeal::from_lattice(*self, &vectors)
    }

    pub fn principal(&self, x: &Scalar) -> Result<FracIdeal> {
        self.ideal(std::slice::from_ref(x))
    }

    pub fn principal_int(&self, n: i64) -> Result<FracIdeal> {
        self.principal(&Scalar::int(n))
    }

    /// Prime ideals above the rational prime `p`, ordered by their Hermite
    /// forms: `(p, ω − r)` for each root `r` of the minimal polynomial of
    /// `ω` modulo `p`, or `(p)` when there is none.
    pub fn primes_above(&self, p: u64) -> Result<Vec<FracIdeal>> {
        if !arith::is_prime_u64(p) {
            return Err(Error::InvalidInput(format!("{p} is not prime")));
        }
        let (t, n) = self.omega_poly();
        let pb = BigInt::from(p);
        let roots: Vec<u64> = (0..p)
            .filter(|&r| {
                let r = BigInt::from(r);
                (&r * &r - &t * &r + &n).mod_floor(&pb).is_zero()
            })
            .collect();
        if roots.is_empty() {
            return Ok(vec![self.principal_int(p as i64)?]);
        }
        let omega = self.omega();
        let mut out = roots
            .into_iter()
            .map(|r| {
                let shifted = &omega - &Scalar::Quadratic {
                    a: BigRational::from_integer(r.into()),
                    b: BigRational::zero(),
                    d: self.d,
                };
                self.ideal(&[Scalar::int(p as i64), shifted])
            })
            .collect::<Result<Vec<_>>>()?;
        out.sort();
        Ok(out)
    }

    /// Primes of `O` in increasing norm, for rational primes up to `bound`.
    pub fn primes_up_to(&self, bound: u64) -> Result<Vec<FracIdeal>> {
        let mut out = Vec::new();
        for p in arith::primes().take_while(|&p| p <= bound) {
            out.extend(self.primes_above(p)?);
        }
        out.sort_by(|x, y| x.norm().cmp(&y.norm()).then_with(|| x.cmp(y)));
        Ok(out)
    }
}

impl fmt::Display for QuadOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.half_integral() {
            write!(f, "Z[(1+sqrt({}))/2]", self.d)
        } else {
            write!(f, "Z[sqrt({})]", self.d)
        }
    }
}

/// A nonzero fractional ideal `(1/den)·(Z·a ⊕ Z·(b + cω))` in Hermite normal
/// form: `a, c > 0`, `0 ≤ b < a`, `gcd(den, a, b, c) = 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FracIdeal {
    order: QuadOrder,
    den: BigInt,
    a: BigInt,
    b: BigInt,
    c: BigInt,
}

impl PartialOrd for QuadOrder {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for QuadOrder {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.d.cmp(&other.d)
    }
}

/// Hermite form `(a, b, c)` of the lattice spanned by integer vectors.
fn hermite(vectors: &[(BigInt, BigInt)]) -> (BigInt, BigInt, BigInt) {
    let (mut a, mut b, mut c) = (BigInt::zero(), BigInt::zero(), BigInt::zero());
    for (x, y) in vectors {
        if y.is_zero() {
            a = a.gcd(x);
            continue;
        }
        if c.is_zero() {
            b = x.clone();
            c = y.clone();
            continue;
        }
        let e = c.extended_gcd(y);
        let g = e.gcd;
        let leftover = (y / &g) * &b - (&c / &g) * x;
        b = &e.x * &b + &e.y * x;
        c = g;
        a = a.gcd(&leftover);
    }
    if c.is_negative() {
        b = -b;
        c = -c;
    }
    if !a.is_zero() {
        b = b.mod_floor(&a);
    }
    (a, b, c)
}

impl FracIdeal {
    fn from_lattice(order: QuadOrder, vectors: &[Coords]) -> Result<FracIdeal> {
        let den = vectors
            .iter()
            .flat_map(|v| v.iter())
            .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let ints: Vec<(BigInt, BigInt)> = vectors
            .iter()
            .map(|v| {
                let scale = |x: &BigRational| (x * BigRational::from_integer(den.clone())).to_integer();
                (scale(&v[0]), scale(&v[1]))
            })
            .collect();
        let (a, b, c) = hermite(&ints);
        if a.is_zero() || c.is_zero() {
            return Err(Error::ZeroArgument("the zero ideal".into()));
        }
        let g = den.gcd(&a).gcd(&b).gcd(&c);
        Ok(FracIdeal {
            order,
            den: den / &g,
            a: a / &g,
            b: b / &g,
            c: c / &g,
        })
    }

    pub fn order(&self) -> QuadOrder {
        self.order
    }

    /// Z-basis as coordinates in `(1, ω)`.
    fn z_basis(&self) -> [Coords; 2] {
        let r = |x: &BigInt| BigRational::new(x.clone(), self.den.clone());
        [[r(&self.a), BigRational::zero()], [r(&self.b), r(&self.c)]]
    }

    /// The two generators `a/den` and `(b + cω)/den`.
    pub fn generators(&self) -> [Scalar; 2] {
        let [x, y] = self.z_basis();
        [self.order.element(&x), self.order.element(&y)]
    }

    /// Index in `O` for integral ideals, extended multiplicatively.
    pub fn norm(&self) -> BigRational {
        BigRational::new(&self.a * &self.c, &self.den * &self.den)
    }

    pub fn is_integral(&self) -> bool {
        self.den.is_one()
    }

    pub fn mul(&self, other: &FracIdeal) -> FracIdeal {
        let mut vectors = Vec::with_capacity(4);
        for x in self.z_basis() {
            for y in other.z_basis() {
                vectors.push(self.order.mul_coords(&x, &y));
            }
        }
        FracIdeal::from_lattice(self.order, &vectors).expect("products of nonzero ideals are nonzero")
    }

    pub fn scale(&self, x: &Scalar) -> Result<FracIdeal> {
        let cx = self.order.coords(x)?;
        let vectors: Vec<Coords> = self.z_basis().iter().map(|v| self.order.mul_coords(v, &cx)).collect();
        FracIdeal::from_lattice(self.order, &vectors)
    }

    pub fn conj(&self) -> FracIdeal {
        let vectors: Vec<Coords> = self.z_basis().iter().map(|v| self.order.conj_coords(v)).collect();
        FracIdeal::from_lattice(self.order, &vectors).expect("conjugate of a nonzero ideal")
    }

    /// `I⁻¹ = Ī / N(I)`.
    pub fn inverse(&self) -> FracIdeal {
        let n = self.norm();
        let inv = Scalar::Rational(n.recip());
        self.conj().scale(&inv).expect("rational scalars lie in every order")
    }

    pub fn pow(&self, k: i64) -> FracIdeal {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut acc = self.order.unit_ideal();
        for _ in 0..k.unsigned_abs() {
            acc = acc.mul(&base);
        }
        acc
    }

    pub fn contains(&self, x: &Scalar) -> Result<bool> {
        Ok(self.contains_coords(&self.order.coords(x)?))
    }

    fn contains_coords(&self, x: &Coords) -> bool {
        let den = BigRational::from_integer(self.den.clone());
        let u = &x[0] * &den;
        let v = &x[1] * &den;
        let n = v / BigRational::from_integer(self.c.clone());
        if !n.is_integer() {
            return false;
        }
        let m = (u - &n * BigRational::from_integer(self.b.clone())) / BigRational::from_integer(self.a.clone());
        m.is_integer()
    }

    pub fn is_subset_of(&self, other: &FracIdeal) -> bool {
        self.z_basis().iter().all(|v| other.contains_coords(v))
    }

    /// A generator when the ideal is principal. Exact for imaginary fields;
    /// for real fields the search covers `|y| ≤ REAL_PRINCIPAL_BOUND` in
    /// `x + yω` and may miss generators.
    pub fn principal_generator(&self) -> Option<Scalar> {
        let o = self.order;
        let (t, n) = o.omega_poly();
        let target = &self.a * &self.c;
        let delta = BigInt::from(4) * &n - &t * &t;
        let four_target = BigInt::from(4) * &target;
        let try_y = |k: BigInt, rhs: BigInt| -> Option<Scalar> {
            let y = &k * &self.c;
            let s = arith::exact_sqrt(&rhs)?;
            for s in [s.clone(), -s] {
                let twice = &s - &t * &y;
                if !twice.is_even() {
                    continue;
                }
                let x: BigInt = twice / 2;
                if (&x - &k * &self.b).mod_floor(&self.a).is_zero() && o.norm_int(&x, &y).abs() == target {
                    let den = BigRational::from_integer(self.den.clone());
                    return Some(o.element(&[
                        BigRational::from_integer(x) / &den,
                        BigRational::from_integer(y) / &den,
                    ]));
                }
            }
            None
        };
        if delta.is_positive() {
            // (2x + ty)² + Δy² = 4N
            let mut k = BigInt::zero();
            loop {
                let y = &k * &self.c;
                let rest = &four_target - &delta * &y * &y;
                if rest.is_negative() {
                    return None;
                }
                for kk in [k.clone(), -k.clone()] {
                    if let Some(g) = try_y(kk, rest.clone()) {
                        return Some(g);
                    }
                }
                k += 1;
            }
        } else {
            let span = -delta;
            for k in 0..=REAL_PRINCIPAL_BOUND {
                for kk in [k, -k] {
                    let kk = BigInt::from(kk);
                    let y = &kk * &self.c;
                    for sign in [1, -1] {
                        let rhs: BigInt = &four_target * BigInt::from(sign) + &span * &y * &y;
                        if rhs.is_negative() {
                            continue;
                        }
                        if let Some(g) = try_y(kk.clone(), rhs) {
                            return Some(g);
                        }
                    }
                }
            }
            None
        }
    }

    pub fn is_principal(&self) -> bool {
        self.principal_generator().is_some()
    }
}

impl fmt::Display for FracIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [x, y] = self.generators();
        write!(f, "({x}, {y})")
    }
}

#[derive(Serialize, Deserialize)]
struct RawIdeal {
    d: i64,
    generators: Vec<Scalar>,
}

impl Serialize for FracIdeal {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RawIdeal {
            d: self.order.d,
            generators: self.generators().to_vec(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FracIdeal {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let raw = RawIdeal::deserialize(de)?;
        let order = QuadOrder::new(raw.d).map_err(serde::de::Error::custom)?;
        order.ideal(&raw.generators).map_err(serde::de::Error::custom)
    }
}

/// A labelled representative of a class in `Cl(O)/2`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassRep {
    pub label: String,
    pub ideal: FracIdeal,
}

/// The class group with representatives of its quotient by squares.
#[derive(Clone, Debug)]
pub struct ClassGroupMod2 {
    pub order: QuadOrder,
    /// One ideal per ideal class, the trivial class first.
    pub classes: Vec<FracIdeal>,
    pub representatives: Vec<ClassRep>,
}

fn equivalent(x: &FracIdeal, y: &FracIdeal) -> bool {
    x.mul(&y.inverse()).is_principal()
}

fn class_index(classes: &[FracIdeal], x: &FracIdeal) -> Option<usize> {
    classes.iter().position(|c| equivalent(c, x))
}

fn prime_label(order: &QuadOrder, p: &FracIdeal) -> Result<String> {
    let norm = p.norm().to_integer();
    let q = arith::prime_divisors(&norm)?[0].to_u64().expect("small prime");
    let above = order.primes_above(q)?;
    let position = above.iter().position(|x| x == p).unwrap_or(0);
    Ok(format!("p{norm}{}", "'".repeat(position)))
}

impl ClassGroupMod2 {
    pub fn compute(order: QuadOrder) -> Result<ClassGroupMod2> {
        let bound = order.minkowski_bound().floor() as u64;
        if bound > MINKOWSKI_DESK_BOUND {
            return Err(Error::SearchExhausted {
                what: format!("class group of {order}: Minkowski bound {bound}"),
                bound: MINKOWSKI_DESK_BOUND,
            });
        }
        let generators: Vec<FracIdeal> = order
            .primes_up_to(bound)?
            .into_iter()
            .filter(|p| p.norm() <= BigRational::from_integer(bound.into()))
            .collect();
        let mut classes = vec![order.unit_ideal()];
        let mut next = 0;
        while next < classes.len() {
            let current = classes[next].clone();
            for g in &generators {
                let x = current.mul(g);
                if class_index(&classes, &x).is_none() {
                    if classes.len() >= MAX_CLASSES {
                        return Err(Error::SearchExhausted {
                            what: format!("class group of {order}"),
                            bound: MAX_CLASSES as u64,
                        });
                    }
                    classes.push(x);
                }
            }
            next += 1;
        }
        let squares: BTreeSet<usize> = classes
            .iter()
            .map(|c| class_index(&classes, &c.mul(c)).expect("closed under products"))
            .collect();
        let coset_key = |x: &FracIdeal| -> usize {
            squares
                .iter()
                .map(|&s| class_index(&classes, &x.mul(&classes[s])).expect("closed under products"))
                .min()
                .expect("squares contain the trivial class")
        };
        let keys: BTreeSet<usize> = classes.iter().map(coset_key).collect();
        let mut representatives = vec![ClassRep {
            label: "O".into(),
            ideal: order.unit_ideal(),
        }];
        let trivial_key = coset_key(&classes[0]);
        let mut missing: BTreeSet<usize> = keys.into_iter().filter(|&k| k != trivial_key).collect();
        let mut prime_bound = bound.max(2);
        while !missing.is_empty() {
            for p in order.primes_up_to(prime_bound)? {
                let key = coset_key(&p);
                if missing.remove(&key) {
                    representatives.push(ClassRep {
                        label: prime_label(&order, &p)?,
                        ideal: p,
                    });
                }
            }
            if prime_bound > 100 * MINKOWSKI_DESK_BOUND {
                return Err(Error::SearchExhausted {
                    what: "prime representatives of Cl/2".into(),
                    bound: prime_bound,
                });
            }
            prime_bound *= 4;
        }
        Ok(ClassGroupMod2 {
            order,
            classes,
            representatives,
        })
    }

    pub fn class_number(&self) -> usize {
        self.classes.len()
    }

    pub fn representative(&self, label: &str) -> Option<&ClassRep> {
        self.representatives.iter().find(|r| r.label == label)
    }

    /// `(N, φ)` with `N²·L·(φ) = target`, searching `N` over the class
    /// representatives.
    pub fn alignment(&self, value: &FracIdeal, target: &FracIdeal) -> Option<(FracIdeal, Scalar)> {
        let quotient = value.mul(&target.inverse());
        for n in &self.classes {
            if let Some(alpha) = n.mul(n).mul(&quotient).principal_generator() {
                let phi = alpha.inv().ok()?;
                return Some((n.clone(), phi));
            }
        }
        None
    }

    /// Label of the class of `value` in `Cl/2`.
    pub fn label_of(&self, value: &FracIdeal) -> Option<&str> {
        self.representatives
            .iter()
            .find(|r| self.alignment(value, &r.ideal).is_some())
            .map(|r| r.label.as_str())
    }
}

/// Representatives of `Cl(O)/2`: `O` and smallest-norm prime ideals.
pub fn class_group_mod_squares(order: QuadOrder) -> Result<Vec<ClassRep>> {
    Ok(ClassGroupMod2::compute(order)?.representatives)
}

/// A quadratic form on the pseudo-lattice `⊕ aᵢ·eᵢ` with values in `L`.
/// The Gram matrix is that of `½·b`, so `b(eᵢ, eⱼ) = 2gᵢⱼ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdealValuedForm {
    order: QuadOrder,
    coefficients: Vec<FracIdeal>,
    gram: Matrix,
    value: FracIdeal,
}

impl IdealValuedForm {
    /// Checks `q(aᵢeᵢ) ⊆ L` and `b(aᵢeᵢ, aⱼeⱼ) ⊆ L`.
    pub fn new(order: QuadOrder, coefficients: Vec<FracIdeal>, gram: Matrix, value: FracIdeal) -> Result<IdealValuedForm> {
        let n = coefficients.len();
        if !gram.is_square() || gram.rows() != n {
            return Err(Error::InvalidInput(format!(
                "{n} coefficient ideals for a {}x{} Gram matrix",
                gram.rows(),
                gram.cols()
            )));
        }
        if *gram.base() != order.base() {
            return Err(Error::BaseMismatch(format!("Gram over {} for {order}", gram.base())));
        }
        if !gram.is_symmetric() {
            return Err(Error::InvalidInput("Gram matrix is not symmetric".into()));
        }
        if coefficients.iter().chain([&value]).any(|a| a.order != order) {
            return Err(Error::BaseMismatch("ideal of another order".into()));
        }
        for i in 0..n {
            for j in i..n {
                let g = gram.get(i, j);
                if g.is_zero() {
                    continue;
                }
                let factor = if i == j { g.clone() } else { g * &order.base().from_int(2) };
                let piece = coefficients[i].mul(&coefficients[j]).scale(&factor)?;
                if !piece.is_subset_of(&value) {
                    return Err(Error::InvalidInput(format!(
                        "entry ({i},{j}) = {g} does not take values in {value}"
                    )));
                }
            }
        }
        Ok(IdealValuedForm {
            order,
            coefficients,
            gram,
            value,
        })
    }

    pub fn order(&self) -> QuadOrder {
        self.order
    }

    pub fn coefficients(&self) -> &[FracIdeal] {
        &self.coefficients
    }

    pub fn gram(&self) -> &Matrix {
        &self.gram
    }

    pub fn value(&self) -> &FracIdeal {
        &self.value
    }

    pub fn rank(&self) -> usize {
        self.coefficients.len()
    }

    /// The form on the generic fiber `K^n`.
    pub fn generic_form(&self) -> Result<QuadraticForm> {
        QuadraticForm::new(self.gram.clone())
    }

    /// `det(2G)·(a₁⋯aₙ)²`, or `None` when the generic form is degenerate.
    pub fn determinant_ideal(&self) -> Option<FracIdeal> {
        let det = self.gram.scale(&self.order.base().from_int(2)).det();
        if det.is_zero() {
            return None;
        }
        let product = self
            .coefficients
            .iter()
            .fold(self.order.unit_ideal(), |acc, a| acc.mul(a));
        product.mul(&product).scale(&det).ok()
    }

    /// `det(2G)·(∏aᵢ)² = Lⁿ`.
    pub fn is_regular(&self) -> bool {
        self.determinant_ideal() == Some(self.value.pow(self.rank() as i64))
    }

    pub fn orthogonal_sum(&self, other: &IdealValuedForm) -> Result<IdealValuedForm> {
        if self.value != other.value {
            return Err(Error::InvalidInput(format!(
                "orthogonal sum of forms valued in {} and {}",
                self.value, other.value
            )));
        }
        let mut coefficients = self.coefficients.clone();
        coefficients.extend(other.coefficients.iter().cloned());
        IdealValuedForm::new(self.order, coefficients, self.gram.block_diagonal(&other.gram), self.value.clone())
    }
}

/// `H_L(P)` on `Hom(P, L) ⊕ P` for `P = a₁ ⊕ … ⊕ a_r`; coefficient ideals
/// `(L·a₁⁻¹, …, L·a_r⁻¹, a₁, …, a_r)`.
pub fn hyperbolic_ideal_form(p: &[FracIdeal], value: &FracIdeal) -> Result<IdealValuedForm> {
    if p.is_empty() {
        return Err(Error::InvalidInput("hyperbolic rank must be at least 1".into()));
    }
    let order = value.order;
    let gram = forms::hyperbolic(&order.base(), p.len())?.gram().clone();
    let mut coefficients: Vec<FracIdeal> = p.iter().map(|a| value.mul(&a.inverse())).collect();
    coefficients.extend(p.iter().cloned());
    IdealValuedForm::new(order, coefficients, gram, value.clone())
}

/// `(N⊗E, φ·q, N²·L·(φ))`.
pub fn twist_by_alignment(q: &IdealValuedForm, n: &FracIdeal, phi: &Scalar) -> Result<IdealValuedForm> {
    if phi.is_zero() {
        return Err(Error::ZeroArgument("alignment scale φ = 0".into()));
    }
    let phi = q.order.base().coerce(phi)?;
    if n.order != q.order {
        return Err(Error::BaseMismatch("twisting ideal of another order".into()));
    }
    let value = n.mul(n).mul(&q.value).scale(&phi)?;
    let coefficients = q.coefficients.iter().map(|a| a.mul(n)).collect();
    IdealValuedForm::new(q.order, coefficients, q.gram.scale(&phi), value)
}

/// Twist whose value ideal must come out as `target`.
pub fn twist_into(q: &IdealValuedForm, n: &FracIdeal, phi: &Scalar, target: &FracIdeal) -> Result<IdealValuedForm> {
    let out = twist_by_alignment(q, n, phi)?;
    if out.value != *target {
        return Err(Error::Precondition(format!(
            "N²·L·(φ) = {} differs from {target}",
            out.value
        )));
    }
    Ok(out)
}

/// `C₀` of an ideal-valued form: the generic even Clifford algebra on the
/// words `e_S`, with coefficient ideal `a_S·L^{−|S|/2}` on `e_S`.
#[derive(Clone, Debug)]
pub struct EvenCliffordOrder {
    pub form: IdealValuedForm,
    pub algebra: StructureAlgebra,
    pub basis: SubsetBasis,
    pub ideals: Vec<FracIdeal>,
}

pub fn even_clifford_order(q: &IdealValuedForm) -> Result<EvenCliffordOrder> {
    let n = q.rank();
    if n == 0 || n > MAX_ORDER_RANK {
        return Err(Error::Unsupported(format!("even Clifford order of rank {n}")));
    }
    if !q.is_regular() {
        return Err(Error::NotRegular);
    }
    let (algebra, basis) = even_clifford_in_basis(&q.generic_form()?)?;
    let ideals: Vec<FracIdeal> = basis
        .masks
        .iter()
        .map(|&m| {
            let idx = indices(m);
            let product = idx
                .iter()
                .fold(q.order.unit_ideal(), |acc, &i| acc.mul(&q.coefficients[i]));
            product.mul(&q.value.pow(-(idx.len() as i64) / 2))
        })
        .collect();
    let order = EvenCliffordOrder {
        form: q.clone(),
        algebra,
        basis,
        ideals,
    };
    order.check_closure()?;
    Ok(order)
}

impl EvenCliffordOrder {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Every structure constant `c` of `e_S·e_T` at `e_U` satisfies
    /// `c·I_S·I_T ⊆ I_U`.
    pub fn check_closure(&self) -> Result<()> {
        let dim = self.dim();
        for i in 0..dim {
            for j in 0..dim {
                let source = self.ideals[i].mul(&self.ideals[j]);
                for (u, c) in self.algebra.product(i, j) {
                    if !source.scale(c)?.is_subset_of(&self.ideals[*u]) {
                        return Err(Error::ClosureViolation(format!(
                            "e_{}·e_{} has coefficient {c} at e_{} outside {}",
                            subset_label(self.basis.masks[i]),
                            subset_label(self.basis.masks[j]),
                            subset_label(self.basis.masks[*u]),
                            self.ideals[*u]
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn contains(&self, x: &[Scalar]) -> Result<bool> {
        for (c, ideal) in x.iter().zip(&self.ideals) {
            if !c.is_zero() && !ideal.contains(c)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Primitive central idempotents of the generic fiber when its center
    /// is split.
    pub fn component_idempotents(&self) -> Result<Option<(Vector, Vector)>> {
        if self.form.rank() % 2 == 1 {
            return Ok(None);
        }
        let idem = self.algebra.central_idempotents()?;
        Ok(match idem.len() {
            4 => Some((idem[2].clone(), idem[3].clone())),
            _ => None,
        })
    }

    /// The order is a product `Λ₊ × Λ₋`: the center splits over `K` and both
    /// central idempotents lie in the order. In rank 2 this means `Λ ≅ O × O`.
    pub fn splits_as_product(&self) -> Result<bool> {
        match self.component_idempotents()? {
            Some((e, f)) => Ok(self.contains(&e)? && self.contains(&f)?),
            None => Ok(false),
        }
    }

    /// Best-effort split certificates of the generic components: products of
    /// the idempotents `eᵢeⱼ` or `eⱼeᵢ` over hyperbolic pairs `(i, j)` with
    /// `gᵢᵢ = gⱼⱼ = 0`, `2gᵢⱼ = 1`, cut down by each central idempotent.
    pub fn split_certificates(&self) -> Result<Option<(Vector, Vector)>> {
        let Some((e, f)) = self.component_idempotents()? else {
            return Ok(None);
        };
        let g = &self.form.gram;
        let n = self.form.rank();
        let one = g.base().one();
        let two = g.base().from_int(2);
        let mut pairs = Vec::new();
        let mut used = vec![false; n];
        for i in 0..n {
            for j in (i + 1)..n {
                if !used[i] && !used[j] && g.get(i, i).is_zero() && g.get(j, j).is_zero() && (g.get(i, j) * &two) == one {
                    used[i] = true;
                    used[j] = true;
                    pairs.push((i, j));
                }
            }
        }
        if pairs.is_empty() {
            return Ok(None);
        }
        let word = |i: usize, j: usize| -> Vector {
            let mut v = self.algebra.zero();
            if i < j {
                v[self.basis.index((1 << i) | (1 << j))] = self.algebra.base().one();
                v
            } else {
                // eᵢeⱼ = 1 − eⱼeᵢ when b(eᵢ, eⱼ) = 1
                linalg::vec_sub(self.algebra.unit(), &{
                    v[self.basis.index((1 << i) | (1 << j))] = self.algebra.base().one();
                    v
                })
            }
        };
        let mut found: [Option<Vector>; 2] = [None, None];
        for choice in 0..(1u32 << pairs.len()) {
            let mut y = self.algebra.unit().clone();
            for (k, &(i, j)) in pairs.iter().enumerate() {
                let w = if choice & (1 << k) == 0 { word(i, j) } else { word(j, i) };
                y = self.algebra.mul(&y, &w);
            }
            for (slot, c) in [&e, &f].into_iter().enumerate() {
                if found[slot].is_some() {
                    continue;
                }
                let z = self.algebra.mul(c, &y);
                if linalg::is_zero_vec(&z) || self.algebra.mul(&z, &z) != z {
                    continue;
                }
                let (corner, _) = self.algebra.corner(&z)?;
                if corner.dim() == 1 {
                    found[slot] = Some(z);
                }
            }
        }
        let [a, b] = found;
        Ok(a.zip(b))
    }

    /// `O/𝔭 ≅ F_p` for `𝔭 = (p, √d − s)` above a split prime `p`.
    pub fn residue_root(&self, p: u64) -> Result<u64> {
        split_root(self.form.order, p)
    }

    /// Structure constants reduced at the prime `(p, √d − s)` above the split
    /// prime `p`. The prime must be a unit for the coefficient and value
    /// ideals and for `det(2G)`.
    pub fn reduction(&self, p: u64) -> Result<StructureAlgebra> {
        let s = self.residue_root(p)?;
        self.check_good_prime(p)?;
        let fp = Base::PrimeField(p);
        let labels = self.algebra.labels().to_vec();
        let dense: Vec<Scalar> = self
            .algebra
            .to_dense()
            .iter()
            .map(|x| reduce_at(x, p, s))
            .collect::<Result<_>>()?;
        let unit: Vector = self
            .algebra
            .unit()
            .iter()
            .map(|x| reduce_at(x, p, s))
            .collect::<Result<_>>()?;
        StructureAlgebra::from_dense(&fp, labels, &dense, Some(unit))
    }

    fn check_good_prime(&self, p: u64) -> Result<()> {
        let pb = BigInt::from(p);
        let unit_at_p = |ideal: &FracIdeal| {
            let n = ideal.norm();
            !n.numer().is_multiple_of(&pb) && !n.denom().is_multiple_of(&pb)
        };
        if !self.form.coefficients.iter().chain([&self.form.value]).all(unit_at_p) {
            return Err(Error::Precondition(format!("{p} divides a coefficient ideal")));
        }
        let det = self.form.gram.scale(&self.form.order.base().from_int(2)).det();
        let norm = det.norm_to_q().unwrap_or_else(BigRational::zero);
        if norm.is_zero() || norm.numer().is_multiple_of(&pb) || norm.denom().is_multiple_of(&pb) {
            return Err(Error::Precondition(format!("{p} divides the determinant")));
        }
        Ok(())
    }

    /// Reducing the order at `p` agrees table for table with the even
    /// Clifford algebra of the reduced form over `F_p`.
    pub fn reduction_commutes(&self, p: u64) -> Result<bool> {
        let reduced = self.reduction(p)?;
        let s = self.residue_root(p)?;
        let fp = Base::PrimeField(p);
        let gram = self.form.gram.map(&fp, |x| reduce_at(x, p, s))?;
        let (direct, _) = even_clifford_in_basis(&QuadraticForm::new(gram)?)?;
        Ok(direct.to_dense() == reduced.to_dense() && direct.unit() == reduced.unit())
    }

    /// Whether the reduction at `p` is semisimple, via its trace form.
    pub fn semisimple_mod(&self, p: u64) -> Result<bool> {
        let alg = self.reduction(p)?;
        let dim = alg.dim();
        let mut t = Matrix::zeros(alg.base(), dim, dim);
        for i in 0..dim {
            for j in 0..dim {
                t.set(i, j, alg.trace(&alg.mul(&alg.basis(i), &alg.basis(j))));
            }
        }
        Ok(!t.det().is_zero())
    }

    /// Odd primes up to `bound` that split in `O` and are good for the
    /// form, paired with the semisimplicity of the reduction.
    pub fn semisimplicity_report(&self, bound: u64) -> Result<Vec<(u64, bool)>> {
        let mut out = Vec::new();
        for p in arith::primes().take_while(|&p| p <= bound).filter(|&p| p > 2) {
            if split_root(self.form.order, p).is_err() || self.check_good_prime(p).is_err() {
                continue;
            }
            out.push((p, self.semisimple_mod(p)?));
        }
        Ok(out)
    }
}

/// The least `s` with `s² ≡ d mod p`, for an odd prime `p ∤ d` split in `O`.
pub fn split_root(order: QuadOrder, p: u64) -> Result<u64> {
    if p == 2 || !arith::is_prime_u64(p) {
        return Err(Error::NotOddPrime(BigInt::from(p)));
    }
    let d = arith::reduce_mod(&BigInt::from(order.d), p);
    if d == 0 {
        return Err(Error::Precondition(format!("{p} ramifies in {order}")));
    }
    let s = arith::sqrt_mod(d, p).ok_or_else(|| Error::Unsupported(format!("reduction at the inert prime {p}")))?;
    Ok(s.min(p - s))
}

/// Image of `a + b√d` in `F_p` under `√d ↦ s`.
pub fn reduce_at(x: &Scalar, p: u64, s: u64) -> Result<Scalar> {
    let fp = Base::PrimeField(p);
    let (a, b) = match x {
        Scalar::Rational(r) => (r.clone(), BigRational::zero()),
        Scalar::Quadratic { a, b, .. } => (a.clone(), b.clone()),
        other => return Err(Error::BaseMismatch(format!("cannot reduce {other}"))),
    };
    let a = fp.from_rational(&a).map_err(|_| Error::Precondition(format!("{x} is not integral at {p}")))?;
    let b = fp.from_rational(&b).map_err(|_| Error::Precondition(format!("{x} is not integral at {p}")))?;
    Ok(&a + &(&b * &Scalar::Mod { value: s, p }))
}

/// Cancels pairs `⟨a, b⟩` with `−ab` a square; each is a hyperbolic plane.
fn cancel_hyperbolic_pairs(q: &DiagonalForm) -> Result<WittClass> {
    let mut entries: Vec<Scalar> = q.entries().to_vec();
    let mut index = 0;
    let mut i = 0;
    while i < entries.len() {
        let partner = (i + 1..entries.len()).find(|&j| (-(&entries[i] * &entries[j])).is_square());
        match partner {
            Some(j) => {
                entries.remove(j);
                entries.remove(i);
                index += 1;
            }
            None => i += 1,
        }
    }
    Ok(WittClass {
        kernel: DiagonalForm::new(q.base(), entries)?,
        index,
    })
}

/// Files each form under its `Cl/2` label after twisting its value ideal
/// onto the label's representative. Generic components are stored as
/// diagonal representatives with hyperbolic pairs `⟨a, −a⟩` cancelled.
pub fn total_witt_element(classes: &ClassGroupMod2, assignments: &[(String, IdealValuedForm)]) -> Result<TotalWittElement> {
    let mut out = TotalWittElement::zero();
    for (label, q) in assignments {
        let rep = classes
            .representative(label)
            .ok_or_else(|| Error::InvalidInput(format!("unknown class label {label}")))?;
        let (n, phi) = classes.alignment(&q.value, &rep.ideal).ok_or_else(|| {
            Error::Precondition(format!("value ideal {} cannot be aligned with {label}", q.value))
        })?;
        let aligned = twist_into(q, &n, &phi, &rep.ideal)?;
        let diag = forms::to_diagonal(&aligned.generic_form()?)?;
        let merged = match out.components.get(label) {
            None => cancel_hyperbolic_pairs(&diag)?,
            Some(existing) => {
                let mut w = cancel_hyperbolic_pairs(&existing.kernel.orthogonal_sum(&diag)?)?;
                w.index += existing.index;
                w
            }
        };
        out.components.insert(label.clone(), merged);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::invariants::e0;

    fn z5() -> QuadOrder {
        QuadOrder::new(-5).unwrap()
    }

    fn p2() -> FracIdeal {
        let o = z5();
        o.ideal(&[Scalar::int(2), o.base().parse_scalar("1+1*sqrt(-5)").unwrap()]).unwrap()
    }

    fn k(o: &QuadOrder, s: &str) -> Scalar {
        o.base().parse_scalar(s).unwrap()
    }

    #[test]
    fn ideal_arithmetic() {
        let o = z5();
        let p = p2();
        assert_eq!(p.norm(), BigRational::from_integer(2.into()));
        assert_eq!(p.mul(&p), o.principal_int(2).unwrap());
        assert_eq!(p.conj(), p);
        assert_eq!(p.mul(&p.inverse()), o.unit_ideal());
        assert!(p.contains(&k(&o, "1+1*sqrt(-5)")).unwrap());
        assert!(!p.contains(&Scalar::int(1)).unwrap());
        assert!(!p.is_principal());
        assert!(o.principal_int(6).unwrap().is_principal());
        let p3 = o.primes_above(3).unwrap();
        assert_eq!(p3.len(), 2);
        assert_eq!(p3[0].mul(&p3[1]), o.principal_int(3).unwrap());
        assert!(p3[0].mul(&p).is_principal());
        assert_eq!(o.primes_above(11).unwrap(), vec![o.principal_int(11).unwrap()]);
    }

    #[test]
    fn hermite_form_is_canonical() {
        let o = z5();
        let a = o.ideal(&[Scalar::int(4), k(&o, "2+2*sqrt(-5)")]).unwrap();
        let b = p2().scale(&Scalar::int(2)).unwrap();
        assert_eq!(a, o.principal_int(2).unwrap().mul(&p2()));
        assert_eq!(a, b);
        let half = p2().scale(&Scalar::rational(1, 2)).unwrap();
        assert_eq!(half, p2().inverse());
    }

    #[test]
    fn half_integral_order() {
        let o = QuadOrder::new(-15).unwrap();
        assert_eq!(o.discriminant(), -15);
        let omega = o.omega();
        assert!(o.is_integral(&omega).unwrap());
        assert!(!o.is_integral(&Scalar::rational(1, 2)).unwrap());
        let classes = ClassGroupMod2::compute(o).unwrap();
        assert_eq!(classes.class_number(), 2);
        assert_eq!(classes.representatives.len(), 2);
    }

    #[test]
    fn class_groups_mod_squares() {
        let reps = class_group_mod_squares(z5()).unwrap();
        let labels: Vec<&str> = reps.iter().map(|r| r.label.as_str()).collect();
        assert_eq!(labels, ["O", "p2"]);
        assert_eq!(reps[1].ideal, p2());
        for d in [-1, 2, 5, -3, -7] {
            let reps = class_group_mod_squares(QuadOrder::new(d).unwrap()).unwrap();
            assert_eq!(reps.len(), 1, "d = {d}");
        }
        // Cl(Z[√−21]) ≅ (Z/2)², so Cl/2 has four classes
        let big = ClassGroupMod2::compute(QuadOrder::new(-21).unwrap()).unwrap();
        assert_eq!(big.class_number(), 4);
        assert_eq!(big.representatives.len(), 4);
        // Cl(Z[√−14]) ≅ Z/4
        let cyc = ClassGroupMod2::compute(QuadOrder::new(-14).unwrap()).unwrap();
        assert_eq!(cyc.class_number(), 4);
        assert_eq!(cyc.representatives.len(), 2);
    }

    #[test]
    fn hyperbolic_ideal_forms() {
        let o = z5();
        let h = hyperbolic_ideal_form(&[o.unit_ideal()], &p2()).unwrap();
        assert_eq!(h.coefficients(), &[p2(), o.unit_ideal()]);
        assert_eq!(h.gram().get(0, 1), &Scalar::Quadratic { a: BigRational::new(1.into(), 2.into()), b: BigRational::zero(), d: -5 });
        assert!(h.is_regular());
        let h2 = hyperbolic_ideal_form(&[p2(), o.unit_ideal()], &p2()).unwrap();
        assert!(h2.is_regular());
        assert_eq!(h2.determinant_ideal(), Some(p2().pow(4)));
        let trivial = hyperbolic_ideal_form(&[o.unit_ideal()], &o.unit_ideal()).unwrap();
        assert_eq!(trivial.gram(), forms::hyperbolic(&o.base(), 1).unwrap().gram());
    }

    #[test]
    fn integrality_is_enforced() {
        let o = z5();
        let base = o.base();
        let gram = Matrix::diagonal(&base, &[base.from_int(1), base.from_int(1)]);
        assert!(IdealValuedForm::new(o, vec![p2().inverse(), o.unit_ideal()], gram.clone(), o.unit_ideal()).is_err());
        assert!(IdealValuedForm::new(o, vec![o.unit_ideal(), o.unit_ideal()], gram, o.unit_ideal()).is_ok());
    }

    #[test]
    fn twists() {
        let o = z5();
        let h = hyperbolic_ideal_form(&[o.unit_ideal()], &p2()).unwrap();
        assert_eq!(twist_by_alignment(&h, &o.unit_ideal(), &Scalar::int(1)).unwrap(), h);
        let t = twist_by_alignment(&h, &p2(), &Scalar::rational(1, 2)).unwrap();
        assert_eq!(t.value(), &p2());
        assert!(t.is_regular());
        let back = twist_by_alignment(&t, &p2().inverse(), &Scalar::int(2)).unwrap();
        assert_eq!(back, h);
        assert!(twist_into(&h, &p2(), &Scalar::int(1), &p2()).is_err());
        assert!(twist_by_alignment(&h, &p2(), &Scalar::int(0)).is_err());
    }

    #[test]
    fn hyperbolic_order_is_product() {
        let o = z5();
        let h = hyperbolic_ideal_form(&[o.unit_ideal()], &p2()).unwrap();
        let c = even_clifford_order(&h).unwrap();
        assert_eq!(c.dim(), 2);
        assert!(c.splits_as_product().unwrap());
        for p in [3, 7, 23] {
            assert!(c.reduction_commutes(p).unwrap());
        }
        assert!(c.semisimplicity_report(SEMISIMPLE_PRIME_BOUND).unwrap().iter().all(|(_, ok)| *ok));
    }

    #[test]
    fn rank_four_hyperbolic_order() {
        let o = z5();
        let h = hyperbolic_ideal_form(&[o.unit_ideal(), o.unit_ideal()], &p2()).unwrap();
        let c = even_clifford_order(&h).unwrap();
        assert_eq!(c.dim(), 8);
        assert!(c.splits_as_product().unwrap());
        let (x, y) = c.split_certificates().unwrap().expect("hyperbolic components split");
        assert!(c.contains(&x).unwrap() && c.contains(&y).unwrap());
        for p in [3, 7, 23] {
            assert!(c.reduction_commutes(p).unwrap());
        }
    }

    #[test]
    fn diagonal_unit_form_is_not_regular() {
        // ⟨1, −1⟩ on O² has det(2G) = −4, and C₀ = O[z]/(z² − 1)
        let o = z5();
        let base = o.base();
        let gram = Matrix::diagonal(&base, &[base.from_int(1), base.from_int(-1)]);
        let q = IdealValuedForm::new(o, vec![o.unit_ideal(), o.unit_ideal()], gram, o.unit_ideal()).unwrap();
        assert!(!q.is_regular());
        assert_eq!(even_clifford_order(&q).unwrap_err(), Error::NotRegular);
    }

    #[test]
    fn total_witt_elements() {
        let o = z5();
        let classes = ClassGroupMod2::compute(o).unwrap();
        let base = o.base();
        let h = hyperbolic_ideal_form(&[o.unit_ideal()], &o.unit_ideal()).unwrap();
        let w = total_witt_element(&classes, &[("O".into(), h.clone())]).unwrap();
        assert_eq!(e0(&w), 0);
        assert!(w.is_zero());
        // rank one, valued in p₂³
        let cube = p2().pow(3);
        let one = IdealValuedForm::new(o, vec![p2()], Matrix::diagonal(&base, &[base.from_int(2)]), cube.clone()).unwrap();
        assert_eq!(classes.label_of(&cube), Some("p2"));
        let w = total_witt_element(&classes, &[("p2".into(), one.clone())]).unwrap();
        assert_eq!(w.component("p2").unwrap().kernel.rank(), 1);
        assert!(total_witt_element(&classes, &[("O".into(), one.clone())]).is_err());
        let unit_line = IdealValuedForm::new(o, vec![o.unit_ideal()], Matrix::diagonal(&base, &[base.from_int(3)]), o.unit_ideal()).unwrap();
        let both = total_witt_element(&classes, &[("p2".into(), one), ("O".into(), unit_line)]).unwrap();
        assert_eq!(e0(&both), 0);
    }

    #[test]
    fn json_generators() {
        let json = serde_json::to_string(&p2()).unwrap();
        let back: FracIdeal = serde_json::from_str(&json).unwrap();
        assert_eq!(back, p2());
        assert!(json.contains("\"generators\""));
    }

    #[test]
    fn alignment_preserves_center_discriminant() {
        let o = z5();
        let h = hyperbolic_ideal_form(&[o.unit_ideal(), p2()], &p2()).unwrap();
        let t = twist_by_alignment(&h, &p2(), &Scalar::rational(1, 2)).unwrap();
        let a = even_clifford_order(&h).unwrap();
        let b = even_clifford_order(&t).unwrap();
        let da = a.algebra.center_generator(&a.algebra.center()).unwrap().1;
        let db = b.algebra.center_generator(&b.algebra.center()).unwrap().1;
        assert!(da.checked_div(&db).unwrap().is_square());
    }
}
