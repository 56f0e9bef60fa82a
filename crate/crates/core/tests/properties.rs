use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use taulink::exact::{frac, Rational};
use taulink::ops::*;
use taulink::series::*;

fn small_rational() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=5).prop_map(|(p, q)| frac(p, q))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn derivation_roundtrip(coeffs in prop::collection::vec(small_rational(), 1..6), raising in any::<bool>()) {
        let dir = if raising { Direction::Raising } else { Direction::Lowering };
        let d = DerivationCoeffs::new(dir, coeffs.clone());
        let image = apply_derivation_exp(&d, 1, coeffs.len() + 1).unwrap();
        let back = solve_derivation_coeffs(&image, dir).unwrap();
        prop_assert_eq!(back.coeffs(), &coeffs[..]);
        prop_assert_eq!(image, apply_derivation_exp_nested(&d, 1, coeffs.len() + 1).unwrap());
    }

    #[test]
    fn series_exp_log(coeffs in prop::collection::vec(small_rational(), 1..8)) {
        let s = LaurentSeries::at_zero(1, coeffs);
        let back = s.exp().unwrap().log().unwrap();
        prop_assert_eq!(back, s);
    }

    #[test]
    fn poly_exp_log(seed in any::<u64>(), alphabet_t in any::<bool>()) {
        let alphabet = if alphabet_t { Alphabet::T } else { Alphabet::Q };
        let tr = TruncationSpec::new(3, 8, 8).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = GradedPoly::random(alphabet, tr, 6, &mut rng);
        let p = p.sub(&GradedPoly::constant(alphabet, tr, p.constant_term())).unwrap();
        prop_assert_eq!(p.exp().unwrap().log().unwrap(), p);
    }

    #[test]
    fn xi_keeps_brackets(i in 1u32..5, j in 1u32..4, a in 1u32..5, b in 1u32..5, k in 1u32..5, l in 1u32..4) {
        let g1 = lowering_generator(i, j);
        for g2 in [quadratic_generator(a, b), lowering_generator(k, l)] {
            let lhs = xi_map(&g1.commutator(&g2).unwrap()).unwrap();
            let rhs = xi_map(&g1).unwrap().commutator(&xi_map(&g2).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn substitution_is_multiplicative(seed in any::<u64>()) {
        let tr = TruncationSpec::new(4, 9, 9).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = GradedPoly::random(Alphabet::T, tr, 4, &mut rng);
        let q = GradedPoly::random(Alphabet::T, tr, 4, &mut rng);
        let phi = phi_substitution(tr).unwrap();
        let lhs = phi.substitute(&p.mul(&q).unwrap()).unwrap();
        let rhs = phi.substitute(&p).unwrap().mul(&phi.substitute(&q).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}
