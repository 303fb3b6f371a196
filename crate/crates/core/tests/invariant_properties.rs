use proptest::prelude::*;

use num_bigint::BigInt;
use num_rational::BigRational;

use qfinv::brauer::BrauerClass2;
use qfinv::forms::{hasse_invariant, hyperbolic, twist, DiagonalForm};
use qfinv::invariants::{construct_preimage, e0_form, e1_form, e2_additivity_check, e2_diagonal, e2_form, in_i2};
use qfinv::scalars::{hilbert_symbol, Base, Place, Scalar};
use qfinv::verify::even_subset;

fn nonzero() -> impl Strategy<Value = i64> {
    prop_oneof![-30i64..=-1, 1i64..=30]
}

fn diag(entries: &[i64]) -> DiagonalForm {
    DiagonalForm::from_ints(&Base::Rational, entries).unwrap()
}

/// `⟨a, b, c, abc⟩`, a rank-4 form in I².
fn i2_form() -> impl Strategy<Value = DiagonalForm> {
    (nonzero(), nonzero(), nonzero()).prop_map(|(a, b, c)| diag(&[a, b, c, a * b * c]))
}

/// The Clifford invariant of a form in I² from Hasse invariants: `s(q)` for
/// rank ≡ 0, 2 mod 8, and `s(q)·(−1,−1)` for rank ≡ 4, 6 mod 8.
fn hasse_oracle(q: &DiagonalForm, entries: &[i64]) -> BrauerClass2 {
    let mut primes: Vec<u64> = vec![2];
    for &a in entries {
        let mut n = a.unsigned_abs();
        let mut p = 2;
        while n > 1 {
            while n % p == 0 {
                primes.push(p);
                n /= p;
            }
            p += 1;
        }
    }
    primes.sort_unstable();
    primes.dedup();
    let mut places: Vec<Place> = primes.into_iter().map(Place::Finite).collect();
    places.push(Place::Infinity);
    let m1 = BigRational::from_integer(BigInt::from(-1));
    let twisted = matches!(q.rank() % 8, 4 | 6);
    let ramified = places.into_iter().filter(|&v| {
        let mut c = hasse_invariant(q, v).unwrap();
        if twisted {
            c *= hilbert_symbol(&m1, &m1, v).unwrap();
        }
        c == -1
    });
    BrauerClass2::new(ramified).unwrap()
}

/// A form in I² of rank 2k: pairs `⟨a, −a·s²⟩` sprinkled into an
/// `⟨a, b, c, abc⟩` block.
fn large_i2_form() -> impl Strategy<Value = Vec<i64>> {
    (
        proptest::collection::vec(nonzero(), 3),
        proptest::collection::vec((nonzero(), 1i64..4), 0..=2),
        proptest::collection::vec(nonzero(), 0..=1),
    )
        .prop_map(|(abc, pairs, extra)| {
            let mut v = vec![abc[0], abc[1], abc[2], abc[0] * abc[1] * abc[2]];
            for (a, s) in pairs {
                v.extend([a, -a * s * s]);
            }
            for a in extra {
                v.extend([a, 1, -a, -1]);
            }
            v
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn e2_matches_hasse_invariants(x in large_i2_form()) {
        let q = diag(&x);
        prop_assert_eq!(e2_diagonal(&q).unwrap(), hasse_oracle(&q, &x));
    }

    #[test]
    fn e2_sum_matches_hasse_invariants(x in large_i2_form(), y in large_i2_form()) {
        let s: Vec<i64> = x.iter().chain(&y).copied().collect();
        let q = diag(&s);
        prop_assert_eq!(e2_diagonal(&q).unwrap(), hasse_oracle(&q, &s));
    }

    #[test]
    fn e0_is_additive(x in proptest::collection::vec(nonzero(), 1..=4), y in proptest::collection::vec(nonzero(), 1..=4)) {
        let (q, r) = (diag(&x), diag(&y));
        let s = q.orthogonal_sum(&r).unwrap();
        prop_assert_eq!(e0_form(&s.to_form()), (e0_form(&q.to_form()) + e0_form(&r.to_form())) % 2);
    }

    #[test]
    fn e1_is_additive_on_even_ranks(x in proptest::collection::vec(nonzero(), 2), y in proptest::collection::vec(nonzero(), 4)) {
        let (q, r) = (diag(&x).to_form(), diag(&y).to_form());
        let s = qfinv::forms::orthogonal_sum(&q, &r).unwrap();
        prop_assert_eq!(e1_form(&s).unwrap(), e1_form(&q).unwrap().mul(&e1_form(&r).unwrap()));
    }

    #[test]
    fn e1_vanishes_on_i2(q in i2_form()) {
        prop_assert!(in_i2(&q).unwrap());
        prop_assert!(e1_form(&q.to_form()).unwrap().is_trivial());
    }

    #[test]
    fn e2_is_additive(q in i2_form(), r in i2_form()) {
        prop_assert!(e2_additivity_check(&q, &r).unwrap().holds());
    }

    #[test]
    fn e2_kills_metabolic_forms(x in proptest::collection::vec(nonzero(), 1..=3)) {
        let q = diag(&x);
        let metabolic = q.orthogonal_sum(&q.negate()).unwrap();
        prop_assert!(e2_diagonal(&metabolic).unwrap().is_trivial());
    }

    #[test]
    fn e2_is_twist_invariant(q in i2_form(), n in nonzero()) {
        let t = twist(&q.to_form(), &Scalar::int(n)).unwrap();
        prop_assert_eq!(e2_form(&t).unwrap(), e2_diagonal(&q).unwrap());
    }
}

#[test]
fn hyperbolic_forms_have_trivial_e2() {
    for r in 1..=3 {
        assert!(e2_form(&hyperbolic(&Base::Rational, r).unwrap()).unwrap().is_trivial());
    }
}

#[test]
fn preimages_realize_every_even_subset() {
    for k in 0..32 {
        let c = even_subset(k);
        assert_eq!(e2_diagonal(&construct_preimage(&c).unwrap()).unwrap(), c);
    }
}
