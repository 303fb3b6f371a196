use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use qfinv::algebras::{is_split_quaternion, quaternion};
use qfinv::brauer::{class_of_quaternion, class_of_quaternion_int, index, quaternion_from_class};
use qfinv::scalars::{hilbert_symbol, Scalar};

fn nonzero() -> impl Strategy<Value = i64> {
    prop_oneof![-60i64..=-1, 1i64..=60]
}

fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn ramification_has_even_size(a in nonzero(), b in nonzero()) {
        prop_assert_eq!(class_of_quaternion_int(a, b).unwrap().ramified().len() % 2, 0);
    }

    #[test]
    fn ramification_matches_hilbert_symbols(a in nonzero(), b in nonzero()) {
        let c = class_of_quaternion_int(a, b).unwrap();
        for &v in c.ramified() {
            prop_assert_eq!(hilbert_symbol(&q(a), &q(b), v).unwrap(), -1);
        }
    }

    #[test]
    fn symbols_are_bilinear(a in nonzero(), b in nonzero(), b2 in nonzero()) {
        let lhs = class_of_quaternion_int(a, b).unwrap().add(&class_of_quaternion_int(a, b2).unwrap());
        prop_assert_eq!(lhs, class_of_quaternion_int(a, b * b2).unwrap());
    }

    #[test]
    fn realization_round_trips(a in nonzero(), b in nonzero()) {
        let c = class_of_quaternion_int(a, b).unwrap();
        let (x, y) = quaternion_from_class(&c).unwrap();
        let back = class_of_quaternion(&BigRational::from_integer(x), &BigRational::from_integer(y)).unwrap();
        prop_assert_eq!(back, c);
    }

    #[test]
    fn index_one_iff_realization_splits(a in nonzero(), b in nonzero()) {
        let c = class_of_quaternion_int(a, b).unwrap();
        let (x, y) = quaternion_from_class(&c).unwrap();
        let alg = quaternion(&Scalar::Rational(q(0) + BigRational::from_integer(x)), &Scalar::Rational(BigRational::from_integer(y))).unwrap();
        prop_assert_eq!(index(&c) == 1, is_split_quaternion(&alg).unwrap());
    }
}
