//! String forms of scalars: `"p/q"`, `"a mod p"`, `"a+b*sqrt(d)"`, and
//! sparse polynomial terms `"c*t^e"` for rational functions.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use super::{Base, Poly, RatFunc, Scalar};
use crate::error::{Error, Result};

pub(crate) fn format_scalar(s: &Scalar) -> String {
    match s {
        Scalar::Rational(r) => r.to_string(),
        Scalar::Mod { value, p } => format!("{value} mod {p}"),
        Scalar::Quadratic { a, b, d } => format!("{a}+{b}*sqrt({d})"),
        Scalar::Function(f) => {
            let suffix = match f.coefficient_base() {
                Base::PrimeField(p) => format!(" mod {p}"),
                _ => String::new(),
            };
            if f.den().is_constant() {
                format!("{}{suffix}", terms(f.num()))
            } else {
                format!("({})/({}){suffix}", terms(f.num()), terms(f.den()))
            }
        }
    }
}

pub(crate) fn format_poly(p: &Poly) -> String {
    match p.base() {
        Base::PrimeField(q) => format!("{} mod {q}", terms(p)),
        _ => terms(p),
    }
}

fn coefficient_text(c: &Scalar) -> String {
    match c {
        Scalar::Mod { value, .. } => value.to_string(),
        other => other.to_string(),
    }
}

fn terms(p: &Poly) -> String {
    if p.is_zero() {
        return "0*t^0".into();
    }
    let parts: Vec<String> = p
        .coeffs()
        .iter()
        .enumerate()
        .rev()
        .filter(|(_, c)| !c.is_zero())
        .map(|(e, c)| format!("{}*t^{e}", coefficient_text(c)))
        .collect();
    parts.join(" + ")
}

pub(crate) fn parse_scalar(text: &str) -> Result<Scalar> {
    let s = text.trim();
    if s.is_empty() {
        return Err(Error::parse(text, "empty scalar"));
    }
    if s.contains("sqrt(") {
        return parse_quadratic(s);
    }
    let (body, modulus) = match s.rsplit_once(" mod ") {
        Some((b, m)) => {
            let p: u64 = m
                .trim()
                .parse()
                .map_err(|_| Error::parse(text, "modulus is not an integer"))?;
            (b.trim(), Some(Base::prime_field(p)?))
        }
        None => (s, None),
    };
    let coeff_base = modulus.clone().unwrap_or(Base::Rational);
    if body.contains('t') {
        return parse_ratfunc(body, &coeff_base).map(Scalar::Function);
    }
    let r = parse_rational(body)?;
    coeff_base.from_rational(&r)
}

pub(crate) fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n
        .parse()
        .map_err(|_| Error::parse(s, "expected an integer numerator"))?;
    let d: BigInt = d
        .parse()
        .map_err(|_| Error::parse(s, "expected an integer denominator"))?;
    if d.is_zero() {
        return Err(Error::parse(s, "zero denominator"));
    }
    Ok(BigRational::new(n, d))
}

fn parse_quadratic(s: &str) -> Result<Scalar> {
    let inner = s
        .strip_suffix(')')
        .and_then(|x| x.rsplit_once("sqrt("))
        .ok_or_else(|| Error::parse(s, "expected a+b*sqrt(d)"))?;
    let d: i64 = inner
        .1
        .trim()
        .parse()
        .map_err(|_| Error::parse(s, "bad radicand"))?;
    Base::quadratic(d)?;
    let head = inner.0.trim();
    let head = head
        .strip_suffix('*')
        .ok_or_else(|| Error::parse(s, "expected '*' before sqrt"))?;
    // split "a+b" at the last '+' that is not a sign
    let bytes: Vec<char> = head.chars().collect();
    let mut split = None;
    for i in (1..bytes.len()).rev() {
        if bytes[i] == '+' {
            split = Some(i);
            break;
        }
    }
    let (a, b) = match split {
        Some(i) => (
            parse_rational(&head[..i])?,
            parse_rational(&head[i + 1..])?,
        ),
        None => (BigRational::zero(), parse_rational(head)?),
    };
    Ok(Scalar::Quadratic { a, b, d })
}

fn parse_ratfunc(s: &str, coeff_base: &Base) -> Result<RatFunc> {
    let s = s.trim();
    if let Some(rest) = s.strip_prefix('(') {
        if let Some(idx) = rest.find(")/(") {
            let num = parse_poly(&rest[..idx], coeff_base)?;
            let den_text = rest[idx + 3..]
                .strip_suffix(')')
                .ok_or_else(|| Error::parse(s, "unbalanced parentheses"))?;
            let den = parse_poly(den_text, coeff_base)?;
            return RatFunc::new(num, den);
        }
        if let Some(inner) = rest.strip_suffix(')') {
            return Ok(RatFunc::from_poly(parse_poly(inner, coeff_base)?));
        }
    }
    Ok(RatFunc::from_poly(parse_poly(s, coeff_base)?))
}

/// Parses a polynomial in `t` such as `"3*t^2 + -1*t^0"` or `"t^2-2"`.
pub(crate) fn parse_poly(s: &str, coeff_base: &Base) -> Result<Poly> {
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    // turn binary minus into "+-"
    let mut normalized = String::with_capacity(compact.len() + 4);
    let mut prev: Option<char> = None;
    for c in compact.chars() {
        if c == '-' && prev.is_some_and(|p| !matches!(p, '+' | '*' | '^' | '/')) {
            normalized.push('+');
        }
        normalized.push(c);
        prev = Some(c);
    }
    let mut coeffs: Vec<Scalar> = Vec::new();
    for term in normalized.split('+').filter(|t| !t.is_empty()) {
        let (coef, exp) = parse_term(term).map_err(|m| Error::parse(s, m))?;
        let c = coeff_base.from_rational(&coef)?;
        if coeffs.len() <= exp {
            coeffs.resize(exp + 1, coeff_base.zero());
        }
        coeffs[exp] = &coeffs[exp] + &c;
    }
    Ok(Poly::new(coeff_base.clone(), coeffs))
}

fn parse_term(term: &str) -> std::result::Result<(BigRational, usize), String> {
    let Some(tpos) = term.find('t') else {
        return parse_rational(term)
            .map(|r| (r, 0))
            .map_err(|_| format!("bad term '{term}'"));
    };
    let coef_text = term[..tpos].trim_end_matches('*');
    let coef = match coef_text {
        "" => BigRational::from_integer(1.into()),
        "-" => BigRational::from_integer((-1).into()),
        c => parse_rational(c).map_err(|_| format!("bad coefficient '{c}'"))?,
    };
    let rest = &term[tpos + 1..];
    let exp = if rest.is_empty() {
        1
    } else {
        let e = rest
            .strip_prefix('^')
            .ok_or_else(|| format!("bad exponent in '{term}'"))?;
        let e: BigInt = e.parse().map_err(|_| format!("bad exponent in '{term}'"))?;
        e.to_usize().filter(|&v| v <= 4096).ok_or("exponent out of range")?
    };
    Ok((coef, exp))
}
