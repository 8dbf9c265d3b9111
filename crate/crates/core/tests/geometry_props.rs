//! Property tests for the punctured-line ring, its symmetry action, and the
//! Tate-coordinate layer built on top of it.

use num_bigint::BigInt;
use proptest::prelude::*;
use tateq::punctured::IntPoly;
use tateq::tate::{self, TateElement};
use tateq::{rat, Mobius, Puncture, PuncturedRationalFunction as Prf, Rational, TruncatedSeries, Var};

fn int_poly() -> impl Strategy<Value = IntPoly> {
    proptest::collection::vec(-6i64..=6, 1..=5).prop_map(|v| IntPoly::from_i64(&v))
}

fn prf() -> impl Strategy<Value = Prf> {
    (int_poly(), 0u32..=2, 0u32..=2).prop_map(|(p, m, n)| Prf::new(p, m, n))
}

fn mobius() -> impl Strategy<Value = Mobius> {
    (0usize..6).prop_map(|i| Mobius::ALL[i])
}

fn agree(a: &TruncatedSeries, b: &TruncatedSeries) -> bool {
    let through = a.order().min(b.order());
    a.first_mismatch(b, through).is_none()
}

/// Sample points away from the punctures 0 and 1.
fn sample_points() -> Vec<Rational> {
    vec![rat(2, 1), rat(-1, 1), rat(1, 3), rat(5, 2), rat(-3, 7)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn arithmetic_matches_pointwise_evaluation(f in prf(), g in prf()) {
        for x in sample_points() {
            let fx = f.eval_rational(&x).unwrap();
            let gx = g.eval_rational(&x).unwrap();
            prop_assert_eq!((&f + &g).eval_rational(&x).unwrap(), &fx + &gx);
            prop_assert_eq!((&f * &g).eval_rational(&x).unwrap(), &fx * &gx);
            prop_assert_eq!((&f - &g).eval_rational(&x).unwrap(), &fx - &gx);
        }
    }

    #[test]
    fn expansion_is_a_ring_map(f in prf(), g in prf()) {
        for at in Puncture::ALL {
            let ef = f.expand_at(at, 12);
            let eg = g.expand_at(at, 12);
            prop_assert!(agree(&(&f + &g).expand_at(at, 12), &(&ef + &eg)));
            let prod = &ef * &eg;
            let through = prod.order().min(12);
            prop_assert!((&f * &g)
                .expand_at(at, 12)
                .first_mismatch(&prod, through)
                .is_none());
        }
    }

    #[test]
    fn expansions_at_other_punctures_reduce_to_zero(f in prf()) {
        // Pulling a puncture to the origin with the right symmetry and
        // expanding there reproduces the local expansion verbatim.
        let at_one = f.expand_at(Puncture::One, 12).with_var(Var::X);
        let pulled = f.mobius_apply(Mobius::SwapZeroOne).expand_at(Puncture::Zero, 12);
        prop_assert!(agree(&at_one, &pulled));

        let at_inf = f.expand_at(Puncture::Infinity, 12).with_var(Var::X);
        let pulled = f.mobius_apply(Mobius::SwapZeroInf).expand_at(Puncture::Zero, 12);
        prop_assert!(agree(&at_inf, &pulled));
    }

    #[test]
    fn symmetry_action_composes(f in prf(), s in mobius(), t in mobius()) {
        let chained = f.mobius_apply(s).mobius_apply(t);
        let direct = f.mobius_apply(s.compose(t));
        prop_assert_eq!(chained, direct);
    }

    #[test]
    fn symmetry_action_inverts(f in prf(), s in mobius()) {
        let back = f.mobius_apply(s).mobius_apply(s.inverse());
        prop_assert_eq!(back, f);
    }

    #[test]
    fn symmetry_action_evaluates_pointwise(f in prf(), s in mobius()) {
        let x = rat(1, 3);
        let sx = s.image_of_x().eval_rational(&x).unwrap();
        prop_assert_eq!(
            f.mobius_apply(s).eval_rational(&x).unwrap(),
            f.eval_rational(&sx).unwrap()
        );
    }

    #[test]
    fn expansion_approximates_the_function(f in prf()) {
        prop_assume!(!f.is_zero());
        let x = 0.01_f64;
        let series = f.expand_at(Puncture::Zero, 24);
        let direct = f.eval_f64(x);
        let approx = series.eval_f64(x);
        prop_assert!(
            (approx - direct).abs() <= 1e-9 * (1.0 + direct.abs()),
            "expansion {} vs direct {}", approx, direct
        );
    }

    #[test]
    fn boundary_is_additive_and_kills_regular_parts(
        pf in proptest::collection::vec(-9i64..=9, 5),
        pg in proptest::collection::vec(-9i64..=9, 5),
        reg in proptest::collection::vec((-9i64..=9, 1i64..=4), 4),
    ) {
        let assemble = |principal: &[i64], regular: &[(i64, i64)]| {
            let mut coeffs: Vec<Rational> = principal
                .iter()
                .rev()
                .map(|&c| rat(c, 1))
                .collect();
            coeffs.extend(regular.iter().map(|&(n, d)| rat(n, d)));
            coeffs.resize(14, Rational::default());
            TruncatedSeries::from_coefficients(Var::Q, -(principal.len() as i64), coeffs)
        };
        let f = assemble(&pf, &reg);
        let g = assemble(&pg, &[]);
        let bf = tate::boundary(&f).unwrap();
        let bg = tate::boundary(&g).unwrap();
        let sum = tate::boundary(&(&f + &g)).unwrap();
        prop_assert_eq!(sum, bf.add(&bg));

        // A series with no pole at q = 0 maps to zero no matter what its
        // regular coefficients look like.
        let regular_only = assemble(&[0, 0, 0, 0, 0], &reg);
        prop_assert!(tate::boundary(&regular_only).unwrap().is_zero());
    }

    #[test]
    fn boundary_scales(c in -7i64..=7, pf in proptest::collection::vec(-9i64..=9, 4)) {
        let coeffs: Vec<Rational> = pf.iter().rev().map(|&v| rat(v, 1)).collect();
        let mut padded = coeffs;
        padded.resize(10, Rational::default());
        let f = TruncatedSeries::from_coefficients(Var::Q, -4, padded);
        let scaled = tate::boundary(&f.scale_coeffs(&rat(c, 1))).unwrap();
        prop_assert_eq!(scaled, tate::boundary(&f).unwrap().scale(&BigInt::from(c)));
    }

    #[test]
    fn tate_expansion_is_a_ring_map(f in prf(), g in prf()) {
        let a = TateElement::new(f);
        let b = TateElement::new(g);
        let ea = a.expand_in_q(12);
        let eb = b.expand_in_q(12);
        prop_assert!(agree(&(&a + &b).expand_in_q(12), &(&ea + &eb)));
        prop_assert!(agree(&(&a * &b).expand_in_q(12), &(&ea * &eb)));
    }

    #[test]
    fn chern_opening_is_a_ring_map(f in prf(), g in prf()) {
        let a = TateElement::new(f);
        let b = TateElement::new(g);
        let ea = a.chern_character(10);
        let eb = b.chern_character(10);
        prop_assert!(agree(&(&a + &b).chern_character(10), &(&ea + &eb)));
        prop_assert!(agree(&(&a * &b).chern_character(10), &(&ea * &eb)));
    }
}

#[test]
fn geometric_expansions_at_both_finite_punctures() {
    // 1/(1-x) at the origin is the geometric series, and 1/x at 1 is the
    // geometric series in the local coordinate u = 1 - x.
    let f = Prf::new(IntPoly::one(), 0, 1);
    let at0 = f.expand_at(Puncture::Zero, 32);
    assert!(at0
        .first_mismatch(&TruncatedSeries::geometric(Var::X, 32), 32)
        .is_none());

    let g = Prf::new(IntPoly::one(), 1, 0);
    let at1 = g.expand_at(Puncture::One, 32);
    assert!(at1
        .first_mismatch(&TruncatedSeries::geometric(Var::U, 32), 32)
        .is_none());
}

#[test]
fn opening_table_rows_match_the_free_function() {
    let table = tate::QTable::standard(12);
    for k in 1..=12usize {
        assert_eq!(table.row(k), &tate::q_coefficients(k)[..]);
    }
}
