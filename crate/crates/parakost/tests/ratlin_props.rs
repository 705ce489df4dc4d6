use parakost::ratlin::{LinearMap, Rational, RationalMatrix, SparseVec, Subspace};
use proptest::prelude::*;

fn rat() -> impl Strategy<Value = Rational> {
    (-40i64..=40, 1i64..=12).prop_map(|(p, q)| Rational::new(p, q))
}

fn int_matrix(rows: usize, cols: usize) -> impl Strategy<Value = RationalMatrix> {
    prop::collection::vec(-3i64..=3, rows * cols).prop_map(move |xs| {
        RationalMatrix::from_rows(xs.chunks(cols).map(|r| r.iter().map(|&x| Rational::from_int(x)).collect()).collect())
    })
}

fn vectors(ambient: usize, count: usize) -> impl Strategy<Value = Vec<SparseVec>> {
    prop::collection::vec(prop::collection::vec(-2i64..=2, ambient), 0..=count).prop_map(|vs| {
        vs.iter().map(|v| SparseVec::from_dense(&v.iter().map(|&x| Rational::from_int(x)).collect::<Vec<_>>())).collect()
    })
}

proptest! {
    #[test]
    fn field_axioms(a in rat(), b in rat(), c in rat()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        if !b.is_zero() {
            prop_assert_eq!(&(&a / &b) * &b, a.clone());
        }
    }

    #[test]
    fn display_parses_back(a in rat()) {
        prop_assert_eq!(a.to_string().parse::<Rational>().unwrap(), a);
    }

    #[test]
    fn order_matches_sign_of_difference(a in rat(), b in rat()) {
        prop_assert_eq!(a.cmp(&b) as i32, (&a - &b).signum());
    }

    #[test]
    fn rank_nullity(a in int_matrix(4, 6)) {
        let k = a.kernel_basis();
        prop_assert_eq!(a.rank() + k.dim(), 6);
        for v in k.basis() {
            prop_assert!(a.mul_vec(&v.to_dense(6)).iter().all(Rational::is_zero));
        }
    }

    #[test]
    fn solve_recovers_a_preimage(a in int_matrix(5, 4), x in prop::collection::vec(-5i64..=5, 4)) {
        let x: Vec<Rational> = x.into_iter().map(Rational::from_int).collect();
        let b = a.mul_vec(&x);
        let y = a.solve(&b).unwrap();
        prop_assert_eq!(a.mul_vec(&y), b);
    }

    #[test]
    fn sum_and_intersection_dimensions(us in vectors(6, 4), vs in vectors(6, 4)) {
        let (u, v) = (Subspace::span(6, &us), Subspace::span(6, &vs));
        let (s, i) = (u.sum(&v).unwrap(), u.intersect(&v).unwrap());
        prop_assert_eq!(s.dim() + i.dim(), u.dim() + v.dim());
        prop_assert!(i.is_subspace_of(&u).unwrap() && i.is_subspace_of(&v).unwrap());
        prop_assert!(u.is_subspace_of(&s).unwrap() && v.is_subspace_of(&s).unwrap());
        for w in &us {
            prop_assert!(u.contains(w));
            prop_assert!(u.reduce(w).is_zero());
        }
    }

    #[test]
    fn linear_map_kernel_and_image(a in int_matrix(4, 5)) {
        let cols = (0..5).map(|j| SparseVec::from_dense(&a.column(j))).collect();
        let f = LinearMap::from_columns(4, cols);
        prop_assert_eq!(f.kernel().dim() + f.image().dim(), 5);
        for v in f.kernel().basis() {
            prop_assert!(f.apply(v).is_zero());
        }
        prop_assert_eq!(f.to_dense(), a);
    }
}
