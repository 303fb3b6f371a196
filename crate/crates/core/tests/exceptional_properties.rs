use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use qfinv::brauer::{class_of_quaternion_int, index};
use qfinv::exceptional::{albert_form, pfaffian_space, reduced_norm_form};
use qfinv::forms::{is_isotropic, twist};
use qfinv::invariants::{e2_diagonal, e2_form};
use qfinv::scalars::Scalar;

fn nonzero() -> impl Strategy<Value = i64> {
    prop_oneof![-20i64..=-1, 1i64..=20]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn reduced_norm_is_multiplicative(a in nonzero(), b in nonzero(), seed in any::<u64>()) {
        let n = reduced_norm_form(&Scalar::int(a), &Scalar::int(b)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        prop_assert!(n.multiplicativity_sample(100, &mut rng).unwrap());
    }

    #[test]
    fn albert_isotropy_matches_index(a in nonzero(), b in nonzero(), c in nonzero(), d in nonzero()) {
        let f = albert_form(&Scalar::int(a), &Scalar::int(b), &Scalar::int(c), &Scalar::int(d)).unwrap();
        let sum = class_of_quaternion_int(a, b).unwrap().add(&class_of_quaternion_int(c, d).unwrap());
        prop_assert_eq!(is_isotropic(&f.form.to_form()).unwrap(), index(&sum) <= 2);
    }

    #[test]
    fn albert_e2_is_stable_under_twists(a in nonzero(), b in nonzero(), c in nonzero(), d in nonzero(), n in nonzero()) {
        let f = albert_form(&Scalar::int(a), &Scalar::int(b), &Scalar::int(c), &Scalar::int(d)).unwrap();
        let t = twist(&f.form.to_form(), &Scalar::int(n)).unwrap();
        prop_assert_eq!(e2_form(&t).unwrap(), e2_diagonal(&f.form).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(4))]

    #[test]
    fn alternating_space_has_dimension_six(a in nonzero(), b in nonzero(), c in nonzero(), d in nonzero()) {
        let p = pfaffian_space(&Scalar::int(a), &Scalar::int(b), &Scalar::int(c), &Scalar::int(d)).unwrap();
        prop_assert!(p.psi_is_involution());
        prop_assert_eq!(p.alternating.len(), 6);
    }
}
