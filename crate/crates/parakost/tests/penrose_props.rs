use parakost::penrose::{ric_from_rho, rho_from_ric, sym_split, EFTensor, FORM_SLOTS};
use parakost::ratlin::Rational;
use proptest::prelude::*;

fn form(n: usize, xs: &[i64]) -> EFTensor {
    let mut it = xs.iter().cycle();
    EFTensor::from_fn(n, &FORM_SLOTS, |_| Rational::from_int(*it.next().unwrap()))
}

fn case() -> impl Strategy<Value = (usize, Vec<i64>)> {
    (3usize..=5, prop::collection::vec(-9i64..=9, 1..=100))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rho_round_trips((n, xs) in case()) {
        let p = form(n, &xs);
        prop_assert_eq!(rho_from_ric(&ric_from_rho(&p)), p.clone());
        prop_assert_eq!(ric_from_rho(&rho_from_ric(&p)), p);
    }

    #[test]
    fn symmetry_split_is_a_decomposition((n, xs) in case()) {
        let t = form(n, &xs);
        let parts = sym_split(&t);
        let total = parts.iter().skip(1).fold(parts[0].clone(), |acc, p| acc.add(p));
        prop_assert_eq!(total, t);
        for (i, p) in parts.iter().enumerate() {
            prop_assert_eq!(&sym_split(p)[i], p);
        }
    }

    #[test]
    fn ricci_acts_by_scalars_on_types((n, xs) in case()) {
        let scalars = [n as i64, n as i64 + 4, n as i64 + 2, n as i64 + 2];
        for (part, c) in sym_split(&form(n, &xs)).iter().zip(scalars) {
            prop_assert_eq!(ric_from_rho(part), part.scale(&Rational::from_int(c)));
        }
    }
}
