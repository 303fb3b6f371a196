//! Named verification suites, one per acceptance criterion, with
//! deterministic per-case randomness and order-preserving parallel runs.

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::brauer::BrauerClass2;
use crate::clifford::{clifford_bimodule, even_clifford, hyperbolic_model, sum_isomorphism};
use crate::dedekind::{
    even_clifford_order, hyperbolic_ideal_form, twist_by_alignment, ClassGroupMod2, FracIdeal, IdealValuedForm,
    QuadOrder, SEMISIMPLE_PRIME_BOUND,
};
use crate::error::{Error, Result};
use crate::exceptional::{norm_roundtrip_check, pfaffian_roundtrip_check};
use crate::forms::DiagonalForm;
use crate::invariants::{
    all_residues_vanish, certify_extended, component_classes, construct_preimage, e2_additivity_check,
    e2_diagonal, milnor_reciprocity_check,
};
use crate::scalars::{product_formula_check, Base, Place, Poly, RatFunc, Scalar};

/// A suite: its name, what it checks, its case count and the case runner.
pub struct Suite {
    pub name: &'static str,
    pub description: &'static str,
    pub cases: usize,
    run: fn(usize, &mut ChaCha8Rng) -> Result<()>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseFailure {
    pub case: usize,
    pub witness: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub suite: String,
    pub seed: u64,
    pub cases: usize,
    pub failures: Vec<CaseFailure>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            1
        }
    }
}

pub const SUITES: [Suite; 14] = [
    Suite {
        name: "clifford-dims",
        description: "dim C0 = dim C1 = 2^(n-1) for random regular diagonal forms of rank 1..7",
        cases: 200,
        run: clifford_dims,
    },
    Suite {
        name: "center-law",
        description: "center of C0 is F for odd rank and F[x]/(x^2 - signed discriminant) for even rank",
        cases: 200,
        run: center_law,
    },
    Suite {
        name: "disc-additivity",
        description: "signed discriminant is additive on even-rank orthogonal sums",
        cases: 100,
        run: disc_additivity,
    },
    Suite {
        name: "components-equal",
        description: "both components of C0 have the same Brauer class in rank 4 with trivial discriminant",
        cases: 50,
        run: components_equal,
    },
    Suite {
        name: "e2-additivity",
        description: "e2 is additive on orthogonal sums of rank-4 forms in I^2",
        cases: 50,
        run: e2_additivity,
    },
    Suite {
        name: "sum-isomorphism",
        description: "C0(q + q') -> C0 (x) C0' + C1 (x) C1' is an algebra isomorphism, total rank <= 6, over Q and F_3",
        cases: 30,
        run: sum_iso,
    },
    Suite {
        name: "metabolic-splitting",
        description: "hyperbolic forms of rank 2, 4, 6 have C0 a product of two split algebras",
        cases: 6,
        run: metabolic_splitting,
    },
    Suite {
        name: "hyperbolic-model",
        description: "the exterior-algebra model of C0 and C1 of hyperbolic forms, r <= 3",
        cases: 6,
        run: hyperbolic_model_suite,
    },
    Suite {
        name: "norm-roundtrip",
        description: "both components of C0 of a reduced norm form carry the quaternion class",
        cases: 20,
        run: norm_roundtrip,
    },
    Suite {
        name: "pfaffian-roundtrip",
        description: "e2 of the Albert form is the sum of the quaternion classes; alternating space has dimension 6",
        cases: 10,
        run: pfaffian_roundtrip,
    },
    Suite {
        name: "surjectivity",
        description: "construct_preimage realizes every even subset of {2,3,5,7,11,inf}",
        cases: 32,
        run: surjectivity,
    },
    Suite {
        name: "hilbert-product",
        description: "the product of all local Hilbert symbols is +1",
        cases: 1000,
        run: hilbert_product,
    },
    Suite {
        name: "milnor-residues",
        description: "residue reciprocity over Q(t) and certification of residue-free forms",
        cases: 30,
        run: milnor_residues,
    },
    Suite {
        name: "dedekind",
        description: "Cl/2 of Z[sqrt(-5)], O x O splitting, closure and reduction of even Clifford orders",
        cases: 2 + 2 * DEDEKIND_FAMILY,
        run: dedekind_suite,
    },
];

pub fn suite(name: &str) -> Result<&'static Suite> {
    SUITES
        .iter()
        .find(|s| s.name == name)
        .ok_or_else(|| Error::UnknownSuite(name.to_string()))
}

fn case_rng(seed: u64, case: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(case as u64);
    rng
}

fn run_case(s: &Suite, seed: u64, case: usize) -> Option<CaseFailure> {
    let mut rng = case_rng(seed, case);
    (s.run)(case, &mut rng).err().map(|e| CaseFailure {
        case,
        witness: e.to_string(),
    })
}

/// Runs every case of the named suite on `parallelism` workers; failures are
/// reported in case order.
pub fn run_suite(name: &str, seed: u64, parallelism: usize) -> Result<VerificationReport> {
    let s = suite(name)?;
    let failures: Vec<CaseFailure> = if parallelism <= 1 {
        (0..s.cases).filter_map(|c| run_case(s, seed, c)).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(parallelism)
            .build()
            .map_err(|e| Error::InvalidInput(format!("worker pool: {e}")))?;
        let results: Vec<Option<CaseFailure>> =
            pool.install(|| (0..s.cases).into_par_iter().map(|c| run_case(s, seed, c)).collect());
        results.into_iter().flatten().collect()
    };
    Ok(VerificationReport {
        suite: s.name.to_string(),
        seed,
        cases: s.cases,
        failures,
    })
}

fn fail(msg: impl Into<String>) -> Error {
    Error::Verification(msg.into())
}

const SMALL_PRIMES: [u64; 4] = [3, 5, 7, 11];

fn random_base(rng: &mut ChaCha8Rng) -> Base {
    match rng.gen_range(0..=SMALL_PRIMES.len()) {
        0 => Base::Rational,
        i => Base::PrimeField(SMALL_PRIMES[i - 1]),
    }
}

fn nonzero_int(rng: &mut ChaCha8Rng, bound: i64) -> i64 {
    loop {
        let x = rng.gen_range(-bound..=bound);
        if x != 0 {
            return x;
        }
    }
}

fn random_entry(rng: &mut ChaCha8Rng, base: &Base) -> Scalar {
    match base {
        Base::PrimeField(p) => base.from_int(rng.gen_range(1..*p as i64)),
        _ => base.from_int(nonzero_int(rng, 30)),
    }
}

fn random_form(rng: &mut ChaCha8Rng, base: &Base, rank: usize) -> Result<DiagonalForm> {
    let entries = (0..rank).map(|_| random_entry(rng, base)).collect();
    DiagonalForm::new(base, entries)
}

/// Rank-4 form over Q with square determinant.
fn random_i2_rank4(rng: &mut ChaCha8Rng) -> Result<DiagonalForm> {
    let a = nonzero_int(rng, 12);
    let b = nonzero_int(rng, 12);
    let c = nonzero_int(rng, 12);
    let s = nonzero_int(rng, 3);
    DiagonalForm::from_ints(&Base::Rational, &[a, b, c, a * b * c * s * s])
}

fn signed_disc(q: &DiagonalForm) -> Scalar {
    let n = q.rank();
    let det = q.det();
    if (n * n.saturating_sub(1) / 2) % 2 == 1 {
        -det
    } else {
        det
    }
}

fn clifford_dims(_: usize, rng: &mut ChaCha8Rng) -> Result<()> {
    let base = random_base(rng);
    let n = rng.gen_range(1..=7);
    let q = random_form(rng, &base, n)?;
    let expected = 1usize << (n - 1);
    let c0 = even_clifford(&q)?.dim();
    let c1 = clifford_bimodule(&q)?.dim();
    if c0 != expected || c1 != expected {
        return Err(fail(format!("{q:?}: dim C0 = {c0}, dim C1 = {c1}, expected {expected}")));
    }
    Ok(())
}

fn center_law(_: usize, rng: &mut ChaCha8Rng) -> Result<()> {
    let base = random_base(rng);
    let n = rng.gen_range(1..=7);
    let q = random_form(rng, &base, n)?;
    let c = even_clifford(&q)?;
    let center = c.algebra.center();
    if n % 2 == 1 {
        if center.len() != 1 {
            return Err(fail(format!("odd rank {n} with center of dimension {}", center.len())));
        }
        return Ok(());
    }
    if center.len() != 2 {
        return Err(fail(format!("even rank {n} with center of dimension {}", center.len())));
    }
    let (_, delta) = c
        .algebra
        .center_generator(&center)
        .ok_or_else(|| fail("center is not quadratic"))?;
    if !(&delta * &signed_disc(&q)).is_square() {
        return Err(fail(format!("center x^2 = {delta} but signed discriminant {}", signed_disc(&q))));
    }
    Ok(())
}

fn disc_additivity(_: usize, rng: &mut ChaCha8Rng) -> Result<()> {
    let base = random_base(rng);
    let (n, m) = (2 * rng.gen_range(1..=3), 2 * rng.gen_range(1..=3));
    let q = random_form(rng, &base, n)?;
    let r = random_form(rng, &base, m)?;
    let total = signed_disc(&q.orthogonal_sum(&r)?);
    if !(&total * &(&signed_disc(&q) * &signed_disc(&r))).is_square() {
        return Err(fail(format!("{q:?} + {r:?}")));
    }
    Ok(())
}

fn components_equal(_: usize, rng: &mut ChaCha8Rng) -> Result<()> {
    let q = random_i2_rank4(rng)?;
    let (plus, minus) = component_classes(&q)?;
    if plus != minus {
        return Err(fail(format!("{:?}: {plus} vs {minus}", q.entries())));
    }
    Ok(())
}

fn e2_additivity(_: usize, rng: &mut ChaCha8Rng) -> Result<()> {
    let q = random_i2_rank4(rng)?;
    let r = random_i2_rank4(rng)?;
    let check = e2_additivity_check(&q, &r)?;
    if !check.holds() {
        return Err(fail(format!("{:?} + {:?}: {check:?}", q.entries(), r.entries())));
    }
    Ok(())
}

fn rank_pairs() -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for n in 1..=5 {
        for m in 1..=(6 - n) {
            out.push((n, m));
        }
    }
    out
}

fn sum_iso(case: usize, rng: &mut ChaCha8Rng) -> Result<()> {
    let pairs = rank_pairs();
    let (n, m) = pairs[case % pairs.len()];
    let base = if case < pairs.len() { Base::Rational } else { Base::PrimeField(3) };
    let q = random_form(rng, &base, n)?;
    let r = random_form(rng, &base, m)?;
    if !sum_isomorphism(&q, &r)?.is_isomorphism() {
        return Err(fail(format!("ranks ({n}, {m}) over {base}")));
    }
    Ok(())
}

fn hyperbolic_case(case: usize, other: Base) -> (usize, Base) {
    let r = case % 3 + 1;
    (r, if case < 3 { Base::Rational } else { other })
}

fn metabolic_splitting(case: usize, _: &mut ChaCha8Rng) -> Result<()> {
    let (r, base) = hyperbolic_case(case, Base::PrimeField(5));
    let certs = hyperbolic_model(&base, r)?.component_certificates()?;
    if certs.len() != 2 {
        return Err(fail(format!("rank {}: {} components", 2 * r, certs.len())));
    }
    for (alg, e) in &certs {
        if !alg.is_split_certificate(e)? {
            return Err(fail(format!("rank {} over {base}: certificate rejected", 2 * r)));
        }
    }
    Ok(())
}

fn hyperbolic_model_suite(case: usize, _: &mut ChaCha8Rng) -> Result<()> {
    let (r, base) = hyperbolic_case(case, Base::PrimeField(7));
    let checks = hyperbolic_model(&base, r)?.check();
    if !checks.all() {
        return Err(fail(format!("r = {r} over {base}: {checks:?}")));
    }
    Ok(())
}

fn norm_roundtrip(_: usize, rng: &mut ChaCha8Rng) -> Result<()> {
    let a = Scalar::int(nonzero_int(rng, 50));
    let b = Scalar::int(nonzero_int(rng, 50));
    let report = norm_roundtrip_check(&a, &b)?;
    if !report.holds() {
        return Err(fail(format!("({a}, {b}): {report:?}")));
    }
    Ok(())
}

fn pfaffian_roundtrip(_: usize, rng: &mut ChaCha8Rng) -> Result<()> {
    let p: Vec<Scalar> = (0..4).map(|_| Scalar::int(nonzero_int(rng, 20))).collect();
    let report = pfaffian_roundtrip_check(&p[0], &p[1], &p[2], &p[3])?;
    if !report.holds() {
        return Err(fail(format!("({}, {}), ({}, {}): {report:?}", p[0], p[1], p[2], p[3])));
    }
    Ok(())
}

const SURJECTIVITY_PLACES: [Place; 6] = [
    Place::Finite(2),
    Place::Finite(3),
    Place::Finite(5),
    Place::Finite(7),
    Place::Finite(11),
    Place::Infinity,
];

/// The `k`-th even subset of `{2,3,5,7,11,∞}`.
pub fn even_subset(k: usize) -> BrauerClass2 {
    let mask = (0u32..64).filter(|m| m.count_ones() % 2 == 0).nth(k).expect("32 even subsets");
    BrauerClass2::new(
        SURJECTIVITY_PLACES
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, p)| *p),
    )
    .expect("even subset")
}

fn surjectivity(case: usize, _: &mut ChaCha8Rng) -> Result<()> {
    let c = even_subset(case);
    let q = construct_preimage(&c)?;
    let got = e2_diagonal(&q)?;
    if got != c {
        return Err(fail(format!("preimage of {c} has e2 = {got}")));
    }
    Ok(())
}

fn random_rational(rng: &mut ChaCha8Rng) -> BigRational {
    BigRational::new(nonzero_int(rng, 1000).into(), rng.gen_range(1..=1000i64).into())
}

fn hilbert_product(_: usize, rng: &mut ChaCha8Rng) -> Result<()> {
    let a = random_rational(rng);
    let b = random_rational(rng);
    if !product_formula_check(&a, &b)? {
        return Err(fail(format!("({a}, {b})")));
    }
    Ok(())
}

fn qt() -> Base {
    Base::Function(Box::new(Base::Rational))
}

fn poly(coeffs: &[i64]) -> Poly {
    Poly::from_ints(&Base::Rational, coeffs)
}

fn function(p: Poly) -> Scalar {
    Scalar::Function(RatFunc::from_poly(p))
}

fn random_function_form(rng: &mut ChaCha8Rng) -> Result<DiagonalForm> {
    let rank = rng.gen_range(1..=4);
    let entries = (0..rank)
        .map(|_| {
            let degree = rng.gen_range(0..=3);
            let mut coeffs: Vec<i64> = (0..degree).map(|_| rng.gen_range(-3..=3)).collect();
            coeffs.push(nonzero_int(rng, 3));
            function(poly(&coeffs).scale(&Scalar::int(nonzero_int(rng, 5))))
        })
        .collect();
    DiagonalForm::new(&qt(), entries)
}

/// Forms over Q(t) whose residues all vanish: constants times squares, and
/// pairs `⟨f, −f·g²⟩`.
pub fn residue_free_forms() -> Vec<DiagonalForm> {
    let sq = |p: &Poly| p.mul(p);
    let c = |n: i64| Poly::from_ints(&Base::Rational, &[n]);
    let t = poly(&[0, 1]);
    let t1 = poly(&[1, 1]);
    let quad = poly(&[1, 0, 1]);
    let cubic = poly(&[2, 0, 0, 1]);
    let lists: Vec<Vec<Poly>> = vec![
        vec![c(1), c(-2), c(3)],
        vec![sq(&t1), c(5)],
        vec![t.clone(), t.scale(&Scalar::int(-1))],
        vec![quad.clone(), quad.mul(&sq(&poly(&[2, 1]))).scale(&Scalar::int(-1)), c(7)],
        vec![sq(&t).scale(&Scalar::int(3)), sq(&sq(&poly(&[-1, 1]))).scale(&Scalar::int(-2))],
        vec![t.clone(), t.scale(&Scalar::int(-1)), t1.clone(), t1.scale(&Scalar::int(-1))],
        vec![sq(&poly(&[1, 1, 1])).scale(&Scalar::int(2)), c(-3), sq(&sq(&t)).scale(&Scalar::int(5))],
        vec![cubic.clone(), cubic.scale(&Scalar::int(-9))],
        vec![c(1), c(1), c(1), sq(&poly(&[-3, 1]))],
        vec![t.mul(&t1), t.mul(&t1).mul(&sq(&poly(&[2, 1]))).scale(&Scalar::int(-1)), c(6)],
    ];
    lists
        .into_iter()
        .map(|ps| DiagonalForm::new(&qt(), ps.into_iter().map(function).collect()).expect("nonzero entries"))
        .collect()
}

fn milnor_residues(case: usize, rng: &mut ChaCha8Rng) -> Result<()> {
    if case < 20 {
        let q = random_function_form(rng)?;
        let report = milnor_reciprocity_check(&q)?;
        if !report.holds {
            return Err(fail(format!("{:?}: {report:?}", q.entries())));
        }
        return Ok(());
    }
    let q = &residue_free_forms()[case - 20];
    if !all_residues_vanish(q)? {
        return Err(fail(format!("{:?} has a nonzero residue", q.entries())));
    }
    if certify_extended(q)?.is_none() {
        return Err(fail(format!("{:?} not certified as extended", q.entries())));
    }
    Ok(())
}

/// Rank-1 and rank-2 pseudo-lattices times value ideals.
const DEDEKIND_FAMILY: usize = 90;

fn dedekind_ideals(o: QuadOrder) -> Result<(Vec<FracIdeal>, Vec<FracIdeal>)> {
    let p2 = o.primes_above(2)?.remove(0);
    let p3 = o.primes_above(3)?;
    let lattice = vec![o.unit_ideal(), p2.clone(), p2.inverse(), p3[0].clone(), p3[1].clone()];
    let values = vec![o.unit_ideal(), p2, p3[0].clone()];
    Ok((lattice, values))
}

/// The `k`-th hyperbolic form of the rank ≤ 4 family over `Z[√−5]`.
pub fn dedekind_family_member(k: usize) -> Result<IdealValuedForm> {
    let o = QuadOrder::new(-5)?;
    let (lattice, values) = dedekind_ideals(o)?;
    let value = &values[k % values.len()];
    let j = k / values.len();
    let p: Vec<FracIdeal> = if j < lattice.len() {
        vec![lattice[j].clone()]
    } else {
        let j = j - lattice.len();
        vec![lattice[j / lattice.len()].clone(), lattice[j % lattice.len()].clone()]
    };
    hyperbolic_ideal_form(&p, value)
}

const REDUCTION_PRIMES: [u64; 3] = [3, 7, 23];

fn dedekind_suite(case: usize, _: &mut ChaCha8Rng) -> Result<()> {
    let o = QuadOrder::new(-5)?;
    match case {
        0 => {
            let classes = ClassGroupMod2::compute(o)?;
            let labels: Vec<&str> = classes.representatives.iter().map(|r| r.label.as_str()).collect();
            let p2 = o.ideal(&[Scalar::int(2), o.base().parse_scalar("1+1*sqrt(-5)")?])?;
            if labels != ["O", "p2"] || classes.representatives[1].ideal != p2 {
                return Err(fail(format!("Cl/2 representatives {labels:?}")));
            }
            Ok(())
        }
        1 => {
            let p2 = o.primes_above(2)?.remove(0);
            let c = even_clifford_order(&hyperbolic_ideal_form(&[o.unit_ideal()], &p2)?)?;
            if !c.splits_as_product()? {
                return Err(fail("C0 of H_p2(O) is not O x O"));
            }
            for p in REDUCTION_PRIMES {
                if !c.reduction_commutes(p)? {
                    return Err(fail(format!("reduction at {p} does not commute")));
                }
            }
            Ok(())
        }
        k => {
            let k = k - 2;
            let mut q = dedekind_family_member(k % DEDEKIND_FAMILY)?;
            if k >= DEDEKIND_FAMILY {
                let p2 = o.primes_above(2)?.remove(0);
                q = twist_by_alignment(&q, &p2, &Scalar::rational(1, 2))?;
            }
            if !q.is_regular() {
                return Err(fail(format!("family member {k} is not regular")));
            }
            let c = even_clifford_order(&q)?;
            for p in REDUCTION_PRIMES {
                match c.reduction_commutes(p) {
                    Ok(true) | Err(Error::Precondition(_)) => {}
                    Ok(false) => return Err(fail(format!("family member {k}: reduction at {p}"))),
                    Err(e) => return Err(e),
                }
            }
            for (p, ok) in c.semisimplicity_report(SEMISIMPLE_PRIME_BOUND)? {
                if !ok {
                    return Err(fail(format!("family member {k}: reduction at {p} is not semisimple")));
                }
            }
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_suite() {
        assert_eq!(run_suite("nonexistent", 0, 1).unwrap_err(), Error::UnknownSuite("nonexistent".into()));
    }

    #[test]
    fn names_are_unique() {
        let mut names: Vec<&str> = SUITES.iter().map(|s| s.name).collect();
        names.sort_unstable();
        names.dedup();
        assert_eq!(names.len(), SUITES.len());
    }

    #[test]
    fn parallel_runs_match_serial() {
        let one = run_suite("disc-additivity", 42, 1).unwrap();
        let four = run_suite("disc-additivity", 42, 4).unwrap();
        assert_eq!(one, four);
        assert!(one.passed());
    }

    #[test]
    fn even_subsets() {
        assert!(even_subset(0).is_trivial());
        let all: std::collections::BTreeSet<_> = (0..32).map(even_subset).collect();
        assert_eq!(all.len(), 32);
    }

    #[test]
    fn dedekind_family_is_distinct() {
        let forms: Vec<_> = (0..DEDEKIND_FAMILY).map(|k| dedekind_family_member(k).unwrap()).collect();
        for (i, a) in forms.iter().enumerate() {
            assert!(forms[i + 1..].iter().all(|b| b != a));
        }
    }
}
