//! Isotropy over Q (local-global criteria plus an exact conic solver) and
//! over F_p, Witt decomposition, and isometry classification.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{diagonalize, to_diagonal, DiagonalForm, QuadraticForm};
use crate::error::{Error, Result};
use crate::linalg::{Matrix, Vector};
use crate::scalars::{arith, hilbert_symbol_int, local_square, square_class, Base, Place, Scalar};

/// Bound on the auxiliary value search used to build isotropic vectors in rank ≥ 4.
const VALUE_SEARCH_BOUND: u64 = 20_000;

/// Witt class: `q ≅ index·H ⊥ kernel` with `kernel` anisotropic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WittClass {
    pub kernel: DiagonalForm,
    pub index: usize,
}

impl WittClass {
    pub fn is_zero(&self) -> bool {
        self.kernel.rank() == 0
    }

    pub fn rank(&self) -> usize {
        self.kernel.rank() + 2 * self.index
    }

    /// Equality in the Witt group.
    pub fn same_class(&self, other: &WittClass) -> Result<bool> {
        if self.kernel.rank() != other.kernel.rank() {
            return Ok(false);
        }
        if self.kernel.rank() == 0 {
            return Ok(true);
        }
        isometric(&self.kernel.to_form(), &other.kernel.to_form())
    }
}

/// `a = s·k²` with `s` a squarefree integer.
/// `a = s·k²` with `s` a squarefree integer, or merely an integer when `a`
/// is too large to factor. Only rank ≥ 3 isotropy tests need factored entries.
fn squarefree_scale(a: &BigRational) -> Result<(BigInt, BigRational)> {
    let n = a.numer() * a.denom();
    match arith::squarefree_decompose(&n) {
        Ok((s, m)) => Ok((s, BigRational::new(m, a.denom().clone()))),
        Err(Error::FactorBound { .. }) => Ok((n, BigRational::new(BigInt::one(), a.denom().clone()))),
        Err(e) => Err(e),
    }
}

fn rational_entries(d: &DiagonalForm) -> Result<Vec<BigRational>> {
    d.entries()
        .iter()
        .map(|a| {
            a.as_rational()
                .cloned()
                .ok_or_else(|| Error::Unsupported(format!("expected rational entries, got {a}")))
        })
        .collect()
}

fn ensure_supported(base: &Base) -> Result<()> {
    match base {
        Base::Rational | Base::PrimeField(_) => Ok(()),
        other => Err(Error::Unsupported(format!("isotropy over {other}"))),
    }
}

/// Hasse invariant `∏_{i<j} (a_i, a_j)_v` of a diagonal form over Q.
pub fn hasse_invariant(d: &DiagonalForm, v: Place) -> Result<i8> {
    let ints: Vec<BigInt> = rational_entries(d)?
        .iter()
        .map(|a| a.numer() * a.denom())
        .collect();
    hasse_of_ints(&ints, v)
}

fn hasse_of_ints(e: &[BigInt], v: Place) -> Result<i8> {
    let mut s = 1;
    for i in 0..e.len() {
        for j in i + 1..e.len() {
            s *= hilbert_symbol_int(&e[i], &e[j], v)?;
        }
    }
    Ok(s)
}

fn places_of(e: &[BigInt]) -> Result<Vec<Place>> {
    let mut primes: Vec<u64> = vec![2];
    for x in e {
        for p in arith::prime_divisors(x)? {
            primes.push(
                p.to_u64()
                    .ok_or_else(|| Error::Unsupported(format!("prime {p} exceeds 64 bits")))?,
            );
        }
    }
    primes.sort_unstable();
    primes.dedup();
    let mut out: Vec<Place> = primes.into_iter().map(Place::Finite).collect();
    out.push(Place::Infinity);
    Ok(out)
}

fn local_isotropic(e: &[BigInt], v: Place) -> Result<bool> {
    let n = e.len();
    if n < 2 {
        return Ok(false);
    }
    if v == Place::Infinity {
        return Ok(e.iter().any(|x| x.is_positive()) && e.iter().any(|x| x.is_negative()));
    }
    match n {
        2 => local_square(&BigRational::from_integer(-(&e[0] * &e[1])), v),
        3 => {
            let a = -(&e[0] * &e[2]);
            let b = -(&e[1] * &e[2]);
            Ok(hilbert_symbol_int(&a, &b, v)? == 1)
        }
        4 => {
            let d: BigInt = e.iter().product();
            if !local_square(&BigRational::from_integer(d), v)? {
                return Ok(true);
            }
            let m1 = BigInt::from(-1);
            Ok(hasse_of_ints(e, v)? == hilbert_symbol_int(&m1, &m1, v)?)
        }
        _ => Ok(true),
    }
}

fn globally_isotropic(e: &[BigInt]) -> Result<bool> {
    if e.len() < 2 {
        return Ok(false);
    }
    if e.len() == 2 {
        return Ok(arith::exact_sqrt(&-(&e[0] * &e[1])).is_some());
    }
    for v in places_of(e)? {
        if !local_isotropic(e, v)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Whether a regular form over Q or F_p has a nonzero isotropic vector.
pub fn is_isotropic(q: &QuadraticForm) -> Result<bool> {
    ensure_supported(q.base())?;
    let d = to_diagonal(q)?;
    match q.base() {
        Base::PrimeField(_) => Ok(match d.rank() {
            0 | 1 => false,
            2 => (-d.det()).is_square(),
            _ => true,
        }),
        _ => {
            let ints: Vec<BigInt> = rational_entries(&d)?
                .iter()
                .map(|a| squarefree_scale(a).map(|(s, _)| s))
                .collect::<Result<_>>()?;
            globally_isotropic(&ints)
        }
    }
}

/// Nontrivial rational solution of `z² = a·x² + b·y²` for nonzero integers,
/// or `None` when the conic has no rational point.
pub fn solve_conic(a: &BigInt, b: &BigInt) -> Result<Option<(BigRational, BigRational, BigRational)>> {
    if a.is_zero() || b.is_zero() {
        return Err(Error::ZeroArgument("conic coefficient 0".into()));
    }
    let (sa, ka) = arith::squarefree_decompose(a)?;
    let (sb, kb) = arith::squarefree_decompose(b)?;
    // a x² = sa (ka x)²
    if !globally_isotropic(&[sa.clone(), sb.clone(), BigInt::from(-1)])? {
        return Ok(None);
    }
    let (x, y, z) = legendre_descent(&sa, &sb)?;
    let r = |n: BigInt| BigRational::from_integer(n);
    Ok(Some((r(x) / r(ka), r(y) / r(kb), r(z))))
}

/// Integer solution of `z² = a x² + b y²` for squarefree `a`, `b` with a known
/// rational point, by descent on `max(|a|, |b|)`.
fn legendre_descent(a: &BigInt, b: &BigInt) -> Result<(BigInt, BigInt, BigInt)> {
    let one = BigInt::one();
    let zero = BigInt::zero();
    if a.is_one() {
        return Ok((one.clone(), zero, one));
    }
    if b.is_one() {
        return Ok((zero, one.clone(), one));
    }
    if a.abs() > b.abs() {
        let (y, x, z) = legendre_descent(b, a)?;
        return Ok((x, y, z));
    }
    // t² ≡ a (mod b), |t| ≤ |b|/2
    let t = sqrt_mod_squarefree(a, b)?;
    let m = (&t * &t - a) / b;
    if m.is_zero() {
        return Err(Error::Precondition("descent reached a square".into()));
    }
    let (b1, k) = arith::squarefree_decompose(&m)?;
    let (x1, y1, z1) = legendre_descent(a, &b1)?;
    // (z1 + x1√a)(t + √a) has norm b·(b1·y1·k)²
    let z = &z1 * &t + a * &x1;
    let x = &z1 + &x1 * &t;
    let y = &b1 * &y1 * &k;
    let g = x.gcd(&y).gcd(&z);
    if g.is_zero() {
        return Err(Error::Precondition("descent produced the zero vector".into()));
    }
    Ok((x / &g, y / &g, z / &g))
}

/// Square root of `a` modulo a squarefree `b`, reduced to `|t| ≤ |b|/2`.
fn sqrt_mod_squarefree(a: &BigInt, b: &BigInt) -> Result<BigInt> {
    let modulus = b.abs();
    let mut t = BigInt::zero();
    let mut m = BigInt::one();
    for (p, _) in arith::factor(&modulus)? {
        let pu = p
            .to_u64()
            .ok_or_else(|| Error::Unsupported(format!("prime {p} exceeds 64 bits")))?;
        let ar = arith::reduce_mod(a, pu);
        let r = if pu == 2 {
            ar
        } else {
            arith::sqrt_mod(ar, pu)
                .ok_or_else(|| Error::Precondition(format!("{a} is not a square modulo {p}")))?
        };
        // CRT: t ≡ t (mod m), t ≡ r (mod p)
        let r = BigInt::from(r);
        let inv = mod_inverse(&m, &p);
        let k = ((&r - &t) * inv).mod_floor(&p);
        t += &m * k;
        m *= &p;
    }
    let mut t = t.mod_floor(&modulus);
    if &t * 2 > modulus {
        t -= &modulus;
    }
    Ok(t)
}

fn mod_inverse(a: &BigInt, p: &BigInt) -> BigInt {
    let e = a.extended_gcd(p);
    e.x.mod_floor(p)
}

fn rsqrt(r: &BigRational) -> Option<BigRational> {
    let n = arith::exact_sqrt(r.numer())?;
    let d = arith::exact_sqrt(r.denom())?;
    Some(BigRational::new(n, d))
}

/// Isotropic vector of `Σ e_i x_i²` for squarefree integers `e`.
/// Points examined by [`small_isotropic`].
const BOX_SEARCH_BUDGET: usize = 200_000;

/// Exhaustive search for an isotropic vector in the largest box
/// `[−B, B]ⁿ` with at most [`BOX_SEARCH_BUDGET`] points.
fn small_isotropic(e: &[BigInt]) -> Option<Vec<BigRational>> {
    let n = e.len();
    let ints: Vec<i128> = e
        .iter()
        .map(|x| x.to_i64().map(i128::from))
        .collect::<Option<_>>()?;
    let side = (BOX_SEARCH_BUDGET as f64).powf(1.0 / n as f64).floor() as i64;
    let b = (side - 1) / 2;
    if b < 1 {
        return None;
    }
    let mut v = vec![-b; n];
    loop {
        if v.iter().any(|&x| x != 0) {
            let q: i128 = v.iter().zip(&ints).map(|(&x, a)| a * i128::from(x) * i128::from(x)).sum();
            if q == 0 {
                return Some(v.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect());
            }
        }
        let mut i = 0;
        while i < n && v[i] == b {
            v[i] = -b;
            i += 1;
        }
        if i == n {
            return None;
        }
        v[i] += 1;
    }
}

fn isotropic_rational(e: &[BigInt]) -> Result<Option<Vec<BigRational>>> {
    let n = e.len();
    let zero = BigRational::zero();
    let one = BigRational::one();
    if !globally_isotropic(e)? {
        return Ok(None);
    }
    for i in 0..n {
        for j in i + 1..n {
            let ratio = BigRational::new(-e[j].clone(), e[i].clone());
            if let Some(x) = rsqrt(&ratio) {
                let mut v = vec![zero.clone(); n];
                v[i] = x;
                v[j] = one.clone();
                return Ok(Some(v));
            }
        }
    }
    // small vectors keep later complements small
    if let Some(v) = small_isotropic(e) {
        return Ok(Some(v));
    }
    // a rank-3 subform
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let sub = [e[i].clone(), e[j].clone(), e[k].clone()];
                if globally_isotropic(&sub)? {
                    let w = conic_vector(&sub)?;
                    let mut v = vec![zero.clone(); n];
                    v[i] = w[0].clone();
                    v[j] = w[1].clone();
                    v[k] = w[2].clone();
                    return Ok(Some(v));
                }
            }
        }
    }
    // find t represented by ⟨e₀, e₁⟩ and by −⟨e₂, …⟩
    let head = [e[0].clone(), e[1].clone()];
    let tail: Vec<BigInt> = e[2..].to_vec();
    for t in squarefree_candidates() {
        if t.abs() > BigInt::from(VALUE_SEARCH_BOUND) {
            break;
        }
        let h = [head[0].clone(), head[1].clone(), -&t];
        if !globally_isotropic(&h)? {
            continue;
        }
        let mut rest = tail.clone();
        rest.push(t.clone());
        if !globally_isotropic(&rest)? {
            continue;
        }
        let u = conic_vector(&h)?;
        let Some(r) = isotropic_rational(&rest)? else {
            continue;
        };
        let s = r.last().unwrap().clone();
        let w = u[2].clone();
        let mut v = vec![zero.clone(); n];
        if s.is_zero() {
            v[2..].clone_from_slice(&r[..n - 2]);
            return Ok(Some(v));
        }
        v[0] = &u[0] / &w;
        v[1] = &u[1] / &w;
        for (idx, y) in r[..n - 2].iter().enumerate() {
            v[2 + idx] = y / &s;
        }
        return Ok(Some(v));
    }
    Err(Error::SearchExhausted {
        what: "auxiliary value for an isotropic vector".into(),
        bound: VALUE_SEARCH_BOUND,
    })
}

/// `1, −1, 2, −2, 3, −3, 5, …` over squarefree integers.
fn squarefree_candidates() -> impl Iterator<Item = BigInt> {
    (1u64..)
        .filter(|&n| {
            let b = BigInt::from(n);
            arith::squarefree_part(&b).map(|s| s == b).unwrap_or(false)
        })
        .flat_map(|n| [BigInt::from(n), -BigInt::from(n)])
}

/// Isotropic vector of the isotropic ternary `⟨a, b, c⟩`.
fn conic_vector(e: &[BigInt; 3]) -> Result<Vec<BigRational>> {
    // a x² + b y² + c z² = 0  ⇔  (cz)² = −ac·x² − bc·y²
    let a = -(&e[0] * &e[2]);
    let b = -(&e[1] * &e[2]);
    let (x, y, w) = solve_conic(&a, &b)?
        .ok_or_else(|| Error::Precondition("ternary form is not isotropic".into()))?;
    let z = w / BigRational::from_integer(e[2].clone());
    Ok(vec![x, y, z])
}

fn isotropic_prime_field(d: &[Scalar], p: u64) -> Option<Vector> {
    let n = d.len();
    let base = Base::PrimeField(p);
    for i in 0..n {
        for j in i + 1..n {
            if let Some(x) = (-&d[j] / &d[i]).sqrt() {
                let mut v = vec![base.zero(); n];
                v[i] = x;
                v[j] = base.one();
                return Some(v);
            }
        }
    }
    if n < 3 {
        return None;
    }
    for x in 0..p {
        let xs = base.from_int(x as i64);
        let rhs = (-&d[2] - &d[0] * &xs.square()) / &d[1];
        if let Some(y) = rhs.sqrt() {
            let mut v = vec![base.zero(); n];
            v[0] = xs;
            v[1] = y;
            v[2] = base.one();
            return Some(v);
        }
    }
    None
}

/// An isotropic vector in the coordinates of `q`, if `q` is isotropic.
pub fn isotropic_vector(q: &QuadraticForm) -> Result<Option<Vector>> {
    ensure_supported(q.base())?;
    if q.rank() < 2 {
        return Ok(None);
    }
    let (d, p) = diagonalize(q)?;
    let local = match q.base() {
        Base::PrimeField(pr) => isotropic_prime_field(d.entries(), *pr),
        _ => {
            let entries = rational_entries(&d)?;
            let mut ints = Vec::with_capacity(entries.len());
            let mut scales = Vec::with_capacity(entries.len());
            for a in &entries {
                let (s, k) = squarefree_scale(a)?;
                ints.push(s);
                scales.push(k);
            }
            isotropic_rational(&ints)?.map(|y| {
                y.iter()
                    .zip(&scales)
                    .map(|(yi, k)| Scalar::Rational(yi / k))
                    .collect()
            })
        }
    };
    Ok(local.map(|v| p.mul_vec(&v)))
}

/// Splits hyperbolic planes off a diagonal form over Q by rewriting entries:
/// `⟨a, −a⟩ ≅ H`, an isotropic `⟨a, b, c⟩ ≅ H ⊥ ⟨−abc⟩`, and an isotropic
/// `⟨a, b, c, d⟩ ≅ H ⊥ ⟨abx, −cdx⟩` for a common value `x` of `⟨a, b⟩` and
/// `−⟨c, d⟩`. Returns squarefree entries and the number of planes removed.
/// Forms whose entries are too large to factor are returned unchanged.
fn split_entries(entries: &[BigRational]) -> Result<(Vec<BigInt>, usize)> {
    let mut e = Vec::with_capacity(entries.len());
    for a in entries {
        match arith::squarefree_part(&(a.numer() * a.denom())) {
            Ok(s) => e.push(s),
            Err(Error::FactorBound { .. }) => {
                return Ok((entries.iter().map(|a| a.numer() * a.denom()).collect(), 0));
            }
            Err(err) => return Err(err),
        }
    }
    let mut index = 0;
    'outer: while e.len() >= 2 {
        let n = e.len();
        for i in 0..n {
            for j in i + 1..n {
                if e[i] == -&e[j] {
                    e.remove(j);
                    e.remove(i);
                    index += 1;
                    continue 'outer;
                }
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let sub = [e[i].clone(), e[j].clone(), e[k].clone()];
                    if globally_isotropic(&sub)? {
                        let x = arith::squarefree_part(&-(&sub[0] * &sub[1] * &sub[2]))?;
                        for idx in [k, j, i] {
                            e.remove(idx);
                        }
                        e.push(x);
                        index += 1;
                        continue 'outer;
                    }
                }
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    for l in k + 1..n {
                        let sub = [e[i].clone(), e[j].clone(), e[k].clone(), e[l].clone()];
                        if !globally_isotropic(&sub)? {
                            continue;
                        }
                        let Some(x) = common_value(&sub)? else {
                            continue;
                        };
                        let y = arith::squarefree_part(&(&sub[0] * &sub[1] * &x))?;
                        let z = arith::squarefree_part(&-(&sub[2] * &sub[3] * &x))?;
                        for idx in [l, k, j, i] {
                            e.remove(idx);
                        }
                        e.extend([y, z]);
                        index += 1;
                        continue 'outer;
                    }
                }
            }
        }
        break;
    }
    Ok((e, index))
}

/// A small `x`, of either sign, represented by `⟨a, b⟩` with `−x`
/// represented by `⟨c, d⟩`.
fn common_value(e: &[BigInt; 4]) -> Result<Option<BigInt>> {
    for t in squarefree_candidates() {
        if t > BigInt::from(VALUE_SEARCH_BOUND) {
            break;
        }
        for x in [t.clone(), -t] {
            let left = [e[0].clone(), e[1].clone(), -&x];
            let right = [e[2].clone(), e[3].clone(), x.clone()];
            if globally_isotropic(&left)? && globally_isotropic(&right)? {
                return Ok(Some(x));
            }
        }
    }
    Ok(None)
}

/// Splits off hyperbolic planes until the remainder is anisotropic.
pub fn witt_decompose(q: &QuadraticForm) -> Result<WittClass> {
    ensure_supported(q.base())?;
    if !q.is_regular() {
        return Err(Error::NotRegular);
    }
    let base = q.base().clone();
    let mut current = if q.rank() == 0 { q.clone() } else { to_diagonal(q)?.to_form() };
    let mut index = 0;
    if base == Base::Rational && current.rank() > 0 {
        let (entries, found) = split_entries(&rational_entries(&to_diagonal(&current)?)?)?;
        index += found;
        let entries = entries.into_iter().map(|a| Scalar::Rational(BigRational::from_integer(a))).collect();
        current = DiagonalForm::new(&base, entries)?.to_form();
    }
    while current.rank() >= 2 {
        let Some(v) = isotropic_vector(&current)? else {
            break;
        };
        let gv = current.gram().mul_vec(&v);
        let j = gv.iter().position(|x| !x.is_zero()).ok_or(Error::NotRegular)?;
        let mut w = vec![base.zero(); current.rank()];
        w[j] = base.one();
        let gw = current.gram().mul_vec(&w);
        let constraints = Matrix::from_rows(&base, vec![gv, gw])?;
        let complement = constraints.nullspace();
        current = current.restrict(&complement);
        if current.rank() > 0 {
            current = to_diagonal(&current)?.to_form();
        }
        index += 1;
    }
    let kernel = if current.rank() == 0 {
        DiagonalForm::empty(&base)
    } else {
        to_diagonal(&current)?
    };
    Ok(WittClass { kernel, index })
}

/// Isometry of regular forms over Q (rank, determinant, signature, Hasse
/// invariants) or over F_p (rank and determinant).
pub fn isometric(q: &QuadraticForm, r: &QuadraticForm) -> Result<bool> {
    ensure_supported(q.base())?;
    if q.base() != r.base() {
        return Err(Error::BaseMismatch(format!("{} vs {}", q.base(), r.base())));
    }
    if q.rank() != r.rank() {
        return Ok(false);
    }
    if q.rank() == 0 {
        return Ok(true);
    }
    let (dq, dr) = (to_diagonal(q)?, to_diagonal(r)?);
    if square_class(&dq.det())? != square_class(&dr.det())? {
        return Ok(false);
    }
    if let Base::PrimeField(_) = q.base() {
        return Ok(true);
    }
    if dq.signature() != dr.signature() {
        return Ok(false);
    }
    let norm = |d: &DiagonalForm| -> Result<Vec<BigInt>> {
        rational_entries(d)?
            .iter()
            .map(|a| squarefree_scale(a).map(|(s, _)| s))
            .collect()
    };
    let (eq, er) = (norm(&dq)?, norm(&dr)?);
    let mut all = eq.clone();
    all.extend(er.iter().cloned());
    for v in places_of(&all)? {
        if hasse_of_ints(&eq, v)? != hasse_of_ints(&er, v)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Equality of Witt classes: `q ⊥ −r` is hyperbolic.
pub fn witt_equivalent(q: &QuadraticForm, r: &QuadraticForm) -> Result<bool> {
    let dq = if q.rank() == 0 { DiagonalForm::empty(q.base()) } else { to_diagonal(q)? };
    let dr = if r.rank() == 0 { DiagonalForm::empty(r.base()) } else { to_diagonal(r)? };
    let sum = dq.orthogonal_sum(&dr.negate())?;
    if sum.rank() % 2 == 1 {
        return Ok(false);
    }
    if sum.rank() == 0 {
        return Ok(true);
    }
    let base = sum.base().clone();
    let m = sum.rank() / 2;
    let mut h = Vec::with_capacity(sum.rank());
    for _ in 0..m {
        h.push(base.one());
        h.push(-base.one());
    }
    isometric(&sum.to_form(), &DiagonalForm::new(&base, h)?.to_form())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag(base: &Base, v: &[i64]) -> QuadraticForm {
        DiagonalForm::from_ints(base, v).unwrap().to_form()
    }

    #[test]
    fn isotropy_examples() {
        let q = Base::Rational;
        assert!(!is_isotropic(&diag(&q, &[1, 1])).unwrap());
        assert!(is_isotropic(&diag(&q, &[1, -1])).unwrap());
        assert!(is_isotropic(&diag(&Base::PrimeField(5), &[1, 1])).unwrap());
        assert!(!is_isotropic(&diag(&q, &[1, 1, 1, 1])).unwrap());
        // norm form of (−1, 3) is anisotropic, of (1, 3) isotropic
        assert!(!is_isotropic(&diag(&q, &[1, 1, -3, -3])).unwrap());
        assert!(is_isotropic(&diag(&q, &[1, -1, -3, 3])).unwrap());
        assert!(is_isotropic(&diag(&q, &[1, 1, 1, -1, 2])).unwrap());
    }

    #[test]
    fn conic_solutions_are_exact() {
        for (a, b) in [(2i64, 7i64), (-1, 2), (5, 11), (3, -5), (13, 17), (-7, 29), (6, 10)] {
            let (ba, bb) = (BigInt::from(a), BigInt::from(b));
            match solve_conic(&ba, &bb).unwrap() {
                Some((x, y, z)) => {
                    let lhs = &z * &z;
                    let rhs = BigRational::from_integer(ba.clone()) * &x * &x
                        + BigRational::from_integer(bb.clone()) * &y * &y;
                    assert_eq!(lhs, rhs);
                    assert!(!(x.is_zero() && y.is_zero() && z.is_zero()));
                }
                None => {
                    let prod: i8 = crate::scalars::relevant_places(
                        &BigRational::from_integer(ba.clone()),
                        &BigRational::from_integer(bb.clone()),
                    )
                    .unwrap()
                    .into_iter()
                    .map(|v| hilbert_symbol_int(&ba, &bb, v).unwrap())
                    .min()
                    .unwrap();
                    assert_eq!(prod, -1);
                }
            }
        }
    }

    #[test]
    fn isotropic_vectors_rank_four_and_five() {
        let q = Base::Rational;
        for v in [&[1i64, 2, -3, -7][..], &[3, 5, -7, -11], &[1, 1, 1, -6], &[2, 3, 5, -7, -11]] {
            let f = diag(&q, v);
            let x = isotropic_vector(&f).unwrap().expect("isotropic");
            assert!(f.value(&x).is_zero());
            assert!(x.iter().any(|c| !c.is_zero()));
        }
    }

    #[test]
    fn witt_decomposition_examples() {
        let q = Base::Rational;
        let w = witt_decompose(&diag(&q, &[1, -1, 2])).unwrap();
        assert_eq!(w.index, 1);
        assert!(isometric(&w.kernel.to_form(), &diag(&q, &[2])).unwrap());
        let w = witt_decompose(&diag(&q, &[1, 2, 3])).unwrap();
        assert_eq!(w.index, 0);
        let w = witt_decompose(&diag(&Base::PrimeField(3), &[1, 1, 1, 1])).unwrap();
        assert_eq!((w.index, w.kernel.rank()), (2, 0));
    }

    #[test]
    fn isometry_classification() {
        let q = Base::Rational;
        assert!(isometric(&diag(&q, &[1, -1]), &diag(&q, &[2, -2])).unwrap());
        assert!(isometric(&diag(&q, &[1, 1]), &diag(&q, &[2, 2])).unwrap());
        assert!(!isometric(&diag(&q, &[1, 1]), &diag(&q, &[3, 3])).unwrap());
        assert!(witt_equivalent(&diag(&q, &[1, 2, -2]), &diag(&q, &[1])).unwrap());
    }

    #[test]
    fn split_kernels_keep_small_entries() {
        let q = Base::Rational;
        // no isotropic ternary subform and no small isotropic vector
        let w = witt_decompose(&diag(&q, &[3, -1, 303, 5959])).unwrap();
        assert_eq!(w.index, 1);
        assert!(w.kernel.entries().iter().all(|a| a.to_i64().is_some_and(|n| n.abs() < 1000)));
        assert!(isometric(&w.kernel.to_form(), &diag(&q, &[2, 118])).unwrap());
        let w = witt_decompose(&diag(&q, &[1, 1, 1, 1, -7])).unwrap();
        assert_eq!((w.index, w.kernel.rank()), (1, 3));
    }
}
