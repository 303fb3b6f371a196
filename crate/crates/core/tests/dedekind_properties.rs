use proptest::prelude::*;

use qfinv::dedekind::{hyperbolic_ideal_form, twist_by_alignment, ClassGroupMod2, FracIdeal, QuadOrder};
use qfinv::scalars::Scalar;

const DISCRIMINANTS: [i64; 6] = [-1, -5, -14, -15, 2, 5];

/// `(x + y·ω, z)` over one of the test orders.
fn ideal() -> impl Strategy<Value = FracIdeal> {
    (0..DISCRIMINANTS.len(), -9i64..=9, -9i64..=9, 1i64..=12).prop_map(|(k, x, y, z)| {
        let o = QuadOrder::new(DISCRIMINANTS[k]).unwrap();
        let w = o.omega();
        let g = &o.base().from_int(x) + &(&o.base().from_int(y) * &w);
        o.ideal(&[g, o.base().from_int(z)]).unwrap()
    })
}

fn on_order(o: QuadOrder, seeds: (i64, i64, i64)) -> FracIdeal {
    let (x, y, z) = seeds;
    let g = &o.base().from_int(x) + &(&o.base().from_int(y) * &o.omega());
    o.ideal(&[g, o.base().from_int(z)]).unwrap()
}

fn seeds() -> impl Strategy<Value = (i64, i64, i64)> {
    (-9i64..=9, -9i64..=9, 1i64..=12)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ideals_times_inverses_are_the_order(i in ideal()) {
        prop_assert_eq!(i.mul(&i.inverse()), i.order().unit_ideal());
    }

    #[test]
    fn ideal_times_conjugate_is_its_norm(i in ideal()) {
        let o = i.order();
        let n = o.principal(&o.base().from_rational(&i.norm()).unwrap()).unwrap();
        prop_assert_eq!(i.mul(&i.conj()), n);
    }

    #[test]
    fn norm_is_multiplicative(k in 0..DISCRIMINANTS.len(), s in seeds(), t in seeds()) {
        let o = QuadOrder::new(DISCRIMINANTS[k]).unwrap();
        let (i, j) = (on_order(o, s), on_order(o, t));
        prop_assert_eq!(i.mul(&j).norm(), i.norm() * j.norm());
        prop_assert!(i.mul(&j).is_subset_of(&i));
    }

    #[test]
    fn regularity_survives_sums_and_twists(s in seeds(), t in seeds(), u in seeds()) {
        let o = QuadOrder::new(-5).unwrap();
        let classes = ClassGroupMod2::compute(o).unwrap();
        let value = &classes.representatives[1].ideal;
        let h = hyperbolic_ideal_form(&[on_order(o, s)], value).unwrap();
        let k = hyperbolic_ideal_form(&[on_order(o, t)], value).unwrap();
        prop_assert!(h.is_regular() && k.is_regular());
        let sum = h.orthogonal_sum(&k).unwrap();
        prop_assert!(sum.is_regular());
        let n = on_order(o, u);
        let twisted = twist_by_alignment(&sum, &n, &Scalar::int(3)).unwrap();
        prop_assert!(twisted.is_regular());
    }
}
