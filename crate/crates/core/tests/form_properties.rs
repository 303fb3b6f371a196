use proptest::prelude::*;

use qfinv::forms::{
    diagonalize, is_isotropic, orthogonal_sum, signed_discriminant, twist, witt_decompose, DiagonalForm, QuadraticForm,
};
use qfinv::linalg::Matrix;
use qfinv::scalars::{Base, Scalar};

fn nonzero() -> impl Strategy<Value = i64> {
    prop_oneof![-30i64..=-1, 1i64..=30]
}

fn diag(entries: &[i64]) -> QuadraticForm {
    DiagonalForm::from_ints(&Base::Rational, entries).unwrap().to_form()
}

/// A random symmetric integer matrix with nonzero determinant.
fn regular_form(max_rank: usize) -> impl Strategy<Value = QuadraticForm> {
    (1..=max_rank)
        .prop_flat_map(|n| proptest::collection::vec(-4i64..=4, n * n).prop_map(move |v| (n, v)))
        .prop_filter_map("singular", |(n, v)| {
            let rows: Vec<Vec<Scalar>> = (0..n)
                .map(|i| (0..n).map(|j| Scalar::int(v[i.min(j) * n + i.max(j)])).collect())
                .collect();
            let g = Matrix::from_rows(&Base::Rational, rows).ok()?;
            let q = QuadraticForm::new(g).ok()?;
            q.is_regular().then_some(q)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn diagonalization_is_a_congruence(q in regular_form(6)) {
        let (d, p) = diagonalize(&q).unwrap();
        let expected = Matrix::diagonal(q.base(), d.entries());
        prop_assert_eq!(q.gram().congruence(&p), expected);
        prop_assert_eq!(d.signed_discriminant().unwrap(), signed_discriminant(&q).unwrap());
    }

    #[test]
    fn witt_decomposition_is_complete(q in regular_form(5)) {
        let w = witt_decompose(&q).unwrap();
        prop_assert_eq!(w.kernel.rank() + 2 * w.index, q.rank());
        if w.kernel.rank() > 0 {
            prop_assert!(!is_isotropic(&w.kernel.to_form()).unwrap());
        }
    }

    #[test]
    fn adding_a_hyperbolic_plane_keeps_the_witt_class(q in regular_form(4)) {
        let bigger = orthogonal_sum(&q, &diag(&[1, -1])).unwrap();
        let (a, b) = (witt_decompose(&q).unwrap(), witt_decompose(&bigger).unwrap());
        prop_assert!(a.same_class(&b).unwrap());
        prop_assert_eq!(b.index, a.index + 1);
    }

    #[test]
    fn discriminant_is_multiplicative_on_even_ranks(
        x in proptest::collection::vec(nonzero(), 1..=3),
        y in proptest::collection::vec(nonzero(), 1..=3),
    ) {
        let (mut x, mut y) = (x, y);
        if x.len() % 2 == 1 { x.push(1); }
        if y.len() % 2 == 1 { y.push(-1); }
        let (q, r) = (diag(&x), diag(&y));
        let s = orthogonal_sum(&q, &r).unwrap();
        let lhs = signed_discriminant(&s).unwrap();
        let rhs = signed_discriminant(&q).unwrap().mul(&signed_discriminant(&r).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn twisting_preserves_isotropy(x in proptest::collection::vec(nonzero(), 1..=5), n in nonzero()) {
        let q = diag(&x);
        let t = twist(&q, &Scalar::int(n)).unwrap();
        prop_assert_eq!(is_isotropic(&q).unwrap(), is_isotropic(&t).unwrap());
    }
}
