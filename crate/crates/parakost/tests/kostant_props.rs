use std::sync::Arc;

use parakost::kostant::{
    costar, costar_wedge, homogeneities, homogeneity, homogeneous_part, laplacian, partial, ChainContext, Cochain,
};
use parakost::ratlin::{Rational, Subspace};
use parakost::sample::Sampler;
use proptest::prelude::*;

const GRADINGS: [&[usize]; 4] = [&[1, 1, 2], &[1, 1, 3], &[2, 3], &[2, 4]];

fn contexts() -> Vec<Arc<ChainContext>> {
    GRADINGS.iter().map(|b| ChainContext::new(b)).collect()
}

/// A sparse random cochain: a handful of random tuples with random values.
fn random_cochain(ctx: &Arc<ChainContext>, k: usize, s: &mut Sampler) -> Cochain {
    let dim = ctx.chain_dim(k);
    let picks: Vec<usize> = (0..6).map(|_| (s.int().unsigned_abs() as usize * 7919 + s.int().unsigned_abs() as usize) % dim).collect();
    let v = s.combo(&Subspace::coordinate(dim, picks));
    Cochain::from_coords(ctx, k, &v)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn differentials_square_to_zero(gi in 0..GRADINGS.len(), seed in any::<u64>()) {
        let ctx = &contexts()[gi];
        let mut s = Sampler::new(seed);
        for k in 0..2 {
            prop_assert!(partial(&partial(&random_cochain(ctx, k, &mut s))).is_zero());
        }
        for k in 2..4 {
            prop_assert!(costar(&costar(&random_cochain(ctx, k, &mut s))).is_zero());
        }
    }

    #[test]
    fn lift_and_wedge_formulas_agree(gi in 0..GRADINGS.len(), seed in any::<u64>()) {
        let ctx = &contexts()[gi];
        let c = random_cochain(ctx, 2, &mut Sampler::new(seed));
        prop_assert_eq!(costar(&c), costar_wedge(&c));
    }

    #[test]
    fn operators_are_linear(gi in 0..GRADINGS.len(), seed in any::<u64>()) {
        let ctx = &contexts()[gi];
        let mut s = Sampler::new(seed);
        let (a, b, t) = (random_cochain(ctx, 2, &mut s), random_cochain(ctx, 2, &mut s), s.rational());
        let mix = a.add_scaled(&t, &b);
        prop_assert_eq!(costar(&mix), costar(&a).add_scaled(&t, &costar(&b)));
        prop_assert_eq!(partial(&mix), partial(&a).add_scaled(&t, &partial(&b)));
        prop_assert_eq!(laplacian(&mix), laplacian(&a).add_scaled(&t, &laplacian(&b)));
    }

    #[test]
    fn homogeneity_is_preserved(gi in 0..GRADINGS.len(), seed in any::<u64>()) {
        let ctx = &contexts()[gi];
        let c = random_cochain(ctx, 2, &mut Sampler::new(seed));
        let mut total = Cochain::zero(ctx, 2);
        for l in homogeneities(&c) {
            let part = homogeneous_part(&c, l);
            total = total.add(&part);
            for image in [costar(&part), partial(&part), laplacian(&part)] {
                prop_assert!(homogeneity(&image).is_none_or(|h| h == l));
            }
        }
        prop_assert_eq!(total, c);
    }

    #[test]
    fn laplacian_is_the_sum(gi in 0..GRADINGS.len(), seed in any::<u64>()) {
        let ctx = &contexts()[gi];
        let c = random_cochain(ctx, 2, &mut Sampler::new(seed));
        prop_assert_eq!(laplacian(&c), partial(&costar(&c)).add(&costar(&partial(&c))));
        prop_assert!(laplacian(&c.scale(&Rational::zero())).is_zero());
    }
}
