use parakost::feff::{alpha, beta, i_prime, qmap, EmbeddingMaps, Source};
use parakost::gla::{bracket, GradedLieAlgebra, Mat};
use parakost::kostant::Cochain;
use parakost::ratlin::{Rational, SparseVec, Subspace};
use parakost::sample::Sampler;
use proptest::prelude::*;

fn traceless(m: usize, xs: &[i64]) -> Mat {
    let g = GradedLieAlgebra::new(&[1, m - 1]);
    g.from_coords(&SparseVec::from_pairs(xs.iter().take(g.dim()).enumerate().map(|(i, &c)| (i, Rational::from_int(c)))))
}

fn source() -> impl Strategy<Value = (usize, Source)> {
    prop_oneof![Just((2, Source::Path)), Just((3, Source::Path)), Just((3, Source::Ag))]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn embedding_is_a_homomorphism(n in 2usize..=4, a in prop::collection::vec(-4i64..=4, 40), b in prop::collection::vec(-4i64..=4, 40)) {
        let (x, y) = (traceless(n + 2, &a), traceless(n + 2, &b));
        prop_assert_eq!(i_prime(&bracket(&x, &y)), bracket(&i_prime(&x), &i_prime(&y)));
        prop_assert!(i_prime(&x).trace().is_zero());
        prop_assert_eq!(qmap(&i_prime(&x)), x.clone());
        prop_assert_eq!(beta(&alpha(&x)), x);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn transfer_is_linear_and_kills_ker_pi((n, src) in source(), seed in any::<u64>()) {
        let maps = EmbeddingMaps::build(n, src).unwrap();
        let ctx = maps.source_context();
        let tgt = maps.target_context();
        let mut s = Sampler::new(seed);
        let full = Subspace::full(ctx.chain_dim(2));
        let a = Cochain::from_coords(ctx, 2, &s.combo(&full));
        let b = Cochain::from_coords(ctx, 2, &s.combo(&full));
        let t = s.rational();
        prop_assert_eq!(maps.transfer(&a.add_scaled(&t, &b)), maps.transfer(&a).add_scaled(&t, &maps.transfer(&b)));
        let img = maps.transfer(&a);
        for k in maps.pi_kernel().basis() {
            for j in 0..tgt.dim_q() {
                prop_assert!(img.eval(&[k.clone(), SparseVec::unit(j)]).is_zero());
            }
        }
    }
}
