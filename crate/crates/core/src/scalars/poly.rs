use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{arith, Base, Scalar};
use crate::error::{Error, Result};

/// Dense univariate polynomial in `t` over Q or F_p, coefficients low to high.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly {
    base: Base,
    coeffs: Vec<Scalar>,
}

impl Poly {
    pub fn new(base: Base, mut coeffs: Vec<Scalar>) -> Poly {
        while coeffs.last().is_some_and(Scalar::is_zero) {
            coeffs.pop();
        }
        Poly { base, coeffs }
    }

    pub fn from_ints(base: &Base, coeffs: &[i64]) -> Poly {
        Poly::new(base.clone(), coeffs.iter().map(|&c| base.from_int(c)).collect())
    }

    pub fn zero(base: &Base) -> Poly {
        Poly::new(base.clone(), vec![])
    }

    pub fn one(base: &Base) -> Poly {
        Poly::constant(base.one())
    }

    pub fn constant(c: Scalar) -> Poly {
        Poly::new(c.base(), vec![c])
    }

    /// The variable `t`.
    pub fn t(base: &Base) -> Poly {
        Poly::new(base.clone(), vec![base.zero(), base.one()])
    }

    pub fn base(&self) -> &Base {
        &self.base
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Scalar {
        self.coeffs.get(i).cloned().unwrap_or_else(|| self.base.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn leading(&self) -> Scalar {
        self.coeffs.last().cloned().unwrap_or_else(|| self.base.zero())
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new(
            self.base.clone(),
            (0..n).map(|i| self.coeff(i) + other.coeff(i)).collect(),
        )
    }

    pub fn neg(&self) -> Poly {
        Poly::new(self.base.clone(), self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero(&self.base);
        }
        let mut out = vec![self.base.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        Poly::new(self.base.clone(), out)
    }

    pub fn scale(&self, c: &Scalar) -> Poly {
        Poly::new(self.base.clone(), self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one(&self.base);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.leading().inv().expect("nonzero leading coefficient"))
    }

    /// Euclidean division.
    pub fn divrem(&self, divisor: &Poly) -> (Poly, Poly) {
        assert!(!divisor.is_zero(), "polynomial division by zero");
        let dd = divisor.degree().unwrap();
        let lead_inv = divisor.leading().inv().unwrap();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Poly::zero(&self.base), self.clone());
        }
        let mut quot = vec![self.base.zero(); rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let c = &rem[i + dd] * &lead_inv;
            if c.is_zero() {
                continue;
            }
            for (j, dc) in divisor.coeffs.iter().enumerate() {
                rem[i + j] = &rem[i + j] - &(&c * dc);
            }
            quot[i] = c;
        }
        (Poly::new(self.base.clone(), quot), Poly::new(self.base.clone(), rem))
    }

    pub fn rem(&self, divisor: &Poly) -> Poly {
        self.divrem(divisor).1
    }

    pub fn divides(&self, other: &Poly) -> bool {
        other.rem(self).is_zero()
    }

    /// Monic gcd.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Extended Euclid: returns `(g, s, u)` with `s·self + u·other = g`, `g` monic.
    pub fn xgcd(&self, other: &Poly) -> (Poly, Poly, Poly) {
        let base = &self.base;
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Poly::one(base), Poly::zero(base));
        let (mut t0, mut t1) = (Poly::zero(base), Poly::one(base));
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1);
            let s2 = s0.sub(&q.mul(&s1));
            let t2 = t0.sub(&q.mul(&t1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s2;
            t0 = t1;
            t1 = t2;
        }
        let lc = r0.leading().inv().expect("gcd of nonzero polynomials");
        (r0.scale(&lc), s0.scale(&lc), t0.scale(&lc))
    }

    /// Inverse of `self` modulo `modulus`.
    pub fn inv_mod(&self, modulus: &Poly) -> Result<Poly> {
        let (g, s, _) = self.rem(modulus).xgcd(modulus);
        if g.degree() != Some(0) {
            return Err(Error::ZeroArgument("element not invertible modulo polynomial".into()));
        }
        Ok(s.rem(modulus))
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.base.clone(),
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * &self.base.from_int(i as i64))
                .collect(),
        )
    }

    pub fn eval(&self, x: &Scalar) -> Scalar {
        let mut acc = self.base.zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    /// Multiplicity of `pi` in `self` (nonzero).
    pub fn valuation(&self, pi: &Poly) -> u32 {
        let mut v = 0;
        let mut f = self.clone();
        loop {
            let (q, r) = f.divrem(pi);
            if !r.is_zero() {
                return v;
            }
            f = q;
            v += 1;
        }
    }

    /// Square root in F[t], if `self` is a perfect square.
    pub fn sqrt(&self) -> Option<Poly> {
        if self.is_zero() {
            return Some(self.clone());
        }
        let n = self.degree()?;
        if n % 2 == 1 {
            return None;
        }
        let m = n / 2;
        let lead = self.leading().sqrt()?;
        let two_lead_inv = (&lead + &lead).inv().ok()?;
        // r = Σ r_k t^{m-k}; solve top-down for r_1..r_m
        let mut r = vec![self.base.zero(); m + 1];
        r[m] = lead;
        for k in 1..=m {
            // coefficient of t^{n-k} in r²
            let mut acc = self.coeff(n - k);
            for i in 1..k {
                acc = &acc - &(&r[m - i] * &r[m - (k - i)]);
            }
            r[m - k] = &acc * &two_lead_inv;
        }
        let root = Poly::new(self.base.clone(), r);
        if root.mul(&root) == *self {
            Some(root)
        } else {
            None
        }
    }

    /// Square-free decomposition of a monic polynomial: `f = ∏ s_i^i`, returned
    /// as `(i, s_i)` with nonconstant `s_i`.
    pub fn squarefree_factors(&self) -> Vec<(u32, Poly)> {
        let f = self.monic();
        if f.is_constant() {
            return vec![];
        }
        let p = self.base.characteristic();
        let d = f.derivative();
        if d.is_zero() {
            // f = g(t^p) = (g~(t))^p over F_p
            let g = Poly::new(
                self.base.clone(),
                f.coeffs.iter().step_by(p as usize).cloned().collect(),
            );
            return g
                .squarefree_factors()
                .into_iter()
                .map(|(i, s)| (i * p as u32, s))
                .collect();
        }
        let mut out = Vec::new();
        let mut c = f.gcd(&d);
        let mut w = f.divrem(&c).0;
        let mut i = 1;
        while !w.is_constant() {
            let y = w.gcd(&c);
            let z = w.divrem(&y).0;
            if !z.is_constant() {
                out.push((i, z.monic()));
            }
            i += 1;
            w = y;
            c = c.divrem(&w).0;
        }
        if !c.is_constant() {
            // remaining p-th power part in characteristic p
            for (j, s) in c.squarefree_factors() {
                out.push((j, s));
            }
        }
        merge_factors(out)
    }

    /// Factorization into monic irreducibles with multiplicities, plus the
    /// leading coefficient. Over Q only polynomials whose root-free part has
    /// degree ≤ 3 are handled.
    pub fn factor(&self) -> Result<(Scalar, Vec<(Poly, u32)>)> {
        if self.is_zero() {
            return Err(Error::ZeroArgument("cannot factor the zero polynomial".into()));
        }
        let lc = self.leading();
        let mut out: Vec<(Poly, u32)> = Vec::new();
        for (mult, s) in self.squarefree_factors() {
            for irr in s.factor_squarefree()? {
                out.push((irr, mult));
            }
        }
        out.sort_by(|a, b| poly_order(&a.0, &b.0));
        Ok((lc, out))
    }

    fn factor_squarefree(&self) -> Result<Vec<Poly>> {
        match self.base {
            Base::Rational => self.factor_over_q(),
            Base::PrimeField(p) => self.factor_over_fp(p),
            ref other => Err(Error::Unsupported(format!("polynomial factorization over {other}"))),
        }
    }

    fn factor_over_q(&self) -> Result<Vec<Poly>> {
        let mut rest = self.monic();
        let mut out = Vec::new();
        while rest.degree().unwrap_or(0) >= 1 {
            match rational_root(&rest)? {
                Some(r) => {
                    let lin = Poly::new(Base::Rational, vec![-Scalar::Rational(r), Scalar::int(1)]);
                    rest = rest.divrem(&lin).0;
                    out.push(lin);
                }
                None => break,
            }
        }
        match rest.degree() {
            Some(0) | None => {}
            Some(d) if d <= 3 => out.push(rest),
            Some(_) => {
                return Err(Error::Unsupported(format!(
                    "factorization of root-free polynomial {rest} of degree > 3"
                )))
            }
        }
        Ok(out)
    }

    fn factor_over_fp(&self, p: u64) -> Result<Vec<Poly>> {
        let mut rest = self.monic();
        let mut out = Vec::new();
        let mut d = 1usize;
        while rest.degree().unwrap_or(0) >= 2 * d {
            let count = (p as u128).checked_pow(d as u32).unwrap_or(u128::MAX);
            if count > 2_000_000 {
                return Err(Error::SearchExhausted {
                    what: format!("irreducible factor search over F_{p}"),
                    bound: 2_000_000,
                });
            }
            for idx in 0..count as u64 {
                let mut coeffs: Vec<Scalar> = Vec::with_capacity(d + 1);
                let mut k = idx;
                for _ in 0..d {
                    coeffs.push(Scalar::Mod { value: k % p, p });
                    k /= p;
                }
                coeffs.push(Scalar::Mod { value: 1, p });
                let cand = Poly::new(Base::PrimeField(p), coeffs);
                while cand.divides(&rest) {
                    rest = rest.divrem(&cand).0;
                    out.push(cand.clone());
                }
            }
            d += 1;
        }
        if rest.degree().unwrap_or(0) >= 1 {
            out.push(rest);
        }
        Ok(out)
    }

    pub fn is_irreducible(&self) -> Result<bool> {
        if self.degree().unwrap_or(0) == 0 {
            return Ok(false);
        }
        let (_, f) = self.factor()?;
        Ok(f.len() == 1 && f[0].1 == 1)
    }
}

fn merge_factors(mut v: Vec<(u32, Poly)>) -> Vec<(u32, Poly)> {
    v.sort_by(|a, b| a.0.cmp(&b.0));
    let mut out: Vec<(u32, Poly)> = Vec::new();
    for (i, s) in v {
        if let Some(last) = out.last_mut() {
            if last.0 == i {
                last.1 = last.1.mul(&s);
                continue;
            }
        }
        out.push((i, s));
    }
    out
}

/// Total order on polynomials: by degree, then coefficients from the top.
pub(crate) fn poly_order(a: &Poly, b: &Poly) -> std::cmp::Ordering {
    a.coeffs
        .len()
        .cmp(&b.coeffs.len())
        .then_with(|| {
            for i in (0..a.coeffs.len()).rev() {
                let o = scalar_order(&a.coeffs[i], &b.coeffs[i]);
                if o != std::cmp::Ordering::Equal {
                    return o;
                }
            }
            std::cmp::Ordering::Equal
        })
}

fn scalar_order(a: &Scalar, b: &Scalar) -> std::cmp::Ordering {
    match (a, b) {
        (Scalar::Rational(x), Scalar::Rational(y)) => x.cmp(y),
        (Scalar::Mod { value: x, .. }, Scalar::Mod { value: y, .. }) => x.cmp(y),
        _ => a.to_string().cmp(&b.to_string()),
    }
}

/// A rational root of a monic polynomial over Q, by the rational root test.
fn rational_root(f: &Poly) -> Result<Option<BigRational>> {
    // clear denominators
    let mut lcm = BigInt::one();
    for c in f.coeffs() {
        lcm = lcm.lcm(c.as_rational().expect("rational coefficients").denom());
    }
    let ints: Vec<BigInt> = f
        .coeffs()
        .iter()
        .map(|c| (c.as_rational().unwrap() * BigRational::from_integer(lcm.clone())).to_integer())
        .collect();
    if ints[0].is_zero() {
        return Ok(Some(BigRational::zero()));
    }
    let a0 = ints[0].abs();
    let an = ints.last().unwrap().abs();
    let nums = divisors(&a0)?;
    let dens = divisors(&an)?;
    let base = Base::Rational;
    for n in &nums {
        for d in &dens {
            for sign in [1, -1] {
                let r = BigRational::new(n * BigInt::from(sign), d.clone());
                if f.eval(&base.from_rational(&r)?).is_zero() {
                    return Ok(Some(r));
                }
            }
        }
    }
    Ok(None)
}

fn divisors(n: &BigInt) -> Result<Vec<BigInt>> {
    let mut out = vec![BigInt::one()];
    for (p, e) in arith::factor(n)? {
        let mut next = Vec::new();
        for d in &out {
            let mut pk = BigInt::one();
            for _ in 0..=e {
                next.push(d * &pk);
                pk *= &p;
            }
        }
        out = next;
    }
    out.sort();
    Ok(out)
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", super::text::format_poly(self))
    }
}

/// Element of F(t): reduced fraction with monic denominator.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl RatFunc {
    pub fn new(num: Poly, den: Poly) -> Result<RatFunc> {
        if den.is_zero() {
            return Err(Error::ZeroArgument("rational function with zero denominator".into()));
        }
        if num.is_zero() {
            return Ok(RatFunc {
                den: Poly::one(num.base()),
                num,
            });
        }
        let g = num.gcd(&den);
        let num = num.divrem(&g).0;
        let den = den.divrem(&g).0;
        let lc = den.leading().inv().unwrap();
        Ok(RatFunc {
            num: num.scale(&lc),
            den: den.scale(&lc),
        })
    }

    pub fn from_poly(p: Poly) -> RatFunc {
        let one = Poly::one(p.base());
        RatFunc { num: p, den: one }
    }

    pub fn constant(c: Scalar) -> RatFunc {
        RatFunc::from_poly(Poly::constant(c))
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn coefficient_base(&self) -> Base {
        self.num.base().clone()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, o: &RatFunc) -> RatFunc {
        RatFunc::new(
            self.num.mul(&o.den).add(&o.num.mul(&self.den)),
            self.den.mul(&o.den),
        )
        .unwrap()
    }

    pub fn mul(&self, o: &RatFunc) -> RatFunc {
        RatFunc::new(self.num.mul(&o.num), self.den.mul(&o.den)).unwrap()
    }

    pub fn neg(&self) -> RatFunc {
        RatFunc {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn inv(&self) -> Result<RatFunc> {
        RatFunc::new(self.den.clone(), self.num.clone())
    }

    pub fn sqrt(&self) -> Option<RatFunc> {
        let lc = self.num.leading();
        let c = lc.sqrt()?;
        let n = self.num.monic().sqrt()?;
        let d = self.den.sqrt()?;
        RatFunc::new(n.scale(&c), d).ok()
    }

    /// Valuation at a monic irreducible `pi`.
    pub fn valuation(&self, pi: &Poly) -> i64 {
        self.num.valuation(pi) as i64 - self.den.valuation(pi) as i64
    }

    /// Valuation at the place at infinity.
    pub fn valuation_infinity(&self) -> i64 {
        self.den.degree().unwrap_or(0) as i64 - self.num.degree().unwrap_or(0) as i64
    }

    /// Whether numerator and denominator are constants.
    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    pub fn constant_value(&self) -> Option<Scalar> {
        if self.is_constant() {
            Some(&self.num.coeff(0) * &self.den.coeff(0).inv().ok()?)
        } else {
            None
        }
    }
}
