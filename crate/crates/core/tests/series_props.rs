//! Property tests for the truncated-series ring: the algebraic laws that
//! every downstream identity check silently leans on.

use num_traits::Zero;
use proptest::prelude::*;
use tateq::{rat, rat_int, Rational, TruncatedSeries, Var};

const ORDER: i64 = 14;

fn small_rational() -> impl Strategy<Value = Rational> {
    (-24i64..=24, 1i64..=9).prop_map(|(n, d)| rat(n, d))
}

/// A Laurent series tracked exactly through x^ORDER, valuation in -3..=2.
fn series() -> impl Strategy<Value = TruncatedSeries> {
    (-3i64..=2).prop_flat_map(|val| {
        let len = (ORDER - val + 1) as usize;
        proptest::collection::vec(small_rational(), len)
            .prop_map(move |coeffs| TruncatedSeries::from_coefficients(Var::X, val, coeffs))
    })
}

/// Same, but with a nonzero leading coefficient so the series is a unit
/// in the Laurent ring (safe to invert).
fn unit_series() -> impl Strategy<Value = TruncatedSeries> {
    (-3i64..=2).prop_flat_map(|val| {
        let len = (ORDER - val + 1) as usize;
        proptest::collection::vec(small_rational(), len).prop_map(move |mut coeffs| {
            if coeffs[0].is_zero() {
                coeffs[0] = rat_int(1);
            }
            TruncatedSeries::from_coefficients(Var::X, val, coeffs)
        })
    })
}

/// Valuation >= 1 (no constant term), the domain of exp and of composition
/// inner arguments.
fn positive_series() -> impl Strategy<Value = TruncatedSeries> {
    (1i64..=3).prop_flat_map(|val| {
        let len = (ORDER - val + 1) as usize;
        proptest::collection::vec(small_rational(), len)
            .prop_map(move |coeffs| TruncatedSeries::from_coefficients(Var::X, val, coeffs))
    })
}

/// Integer coefficients only, valuation >= 0: the subring where reduction
/// mod p is defined.
fn integer_series() -> impl Strategy<Value = TruncatedSeries> {
    (0i64..=2).prop_flat_map(|val| {
        let len = (ORDER - val + 1) as usize;
        proptest::collection::vec(-20i64..=20, len).prop_map(move |ints| {
            TruncatedSeries::from_coefficients(
                Var::X,
                val,
                ints.into_iter().map(rat_int).collect(),
            )
        })
    })
}

/// Agreement through the largest exponent both sides actually track.
fn agree(a: &TruncatedSeries, b: &TruncatedSeries) -> bool {
    let through = a.order().min(b.order());
    a.first_mismatch(b, through).is_none()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn addition_commutes(a in series(), b in series()) {
        prop_assert!(agree(&(&a + &b), &(&b + &a)));
    }

    #[test]
    fn addition_associates(a in series(), b in series(), c in series()) {
        prop_assert!(agree(&(&(&a + &b) + &c), &(&a + &(&b + &c))));
    }

    #[test]
    fn multiplication_commutes(a in series(), b in series()) {
        prop_assert!(agree(&(&a * &b), &(&b * &a)));
    }

    #[test]
    fn multiplication_associates(a in series(), b in series(), c in series()) {
        prop_assert!(agree(&(&(&a * &b) * &c), &(&a * &(&b * &c))));
    }

    #[test]
    fn multiplication_distributes(a in series(), b in series(), c in series()) {
        let lhs = &a * &(&b + &c);
        let rhs = &(&a * &b) + &(&a * &c);
        prop_assert!(agree(&lhs, &rhs));
    }

    #[test]
    fn one_is_neutral(a in series()) {
        let one = TruncatedSeries::one(Var::X, ORDER);
        prop_assert!(agree(&(&a * &one), &a));
    }

    #[test]
    fn subtraction_cancels(a in series()) {
        let d = &a - &a;
        prop_assert!(d.is_zero());
    }

    #[test]
    fn reciprocal_inverts(u in unit_series()) {
        let prod = &u * &u.recip();
        let through = prod.order();
        prop_assert!(prod
            .first_mismatch(&TruncatedSeries::one(Var::X, through), through)
            .is_none());
    }

    #[test]
    fn divide_then_multiply_round_trips(a in series(), u in unit_series()) {
        let back = &(&a / &u) * &u;
        prop_assert!(agree(&back, &a));
    }

    #[test]
    fn power_matches_repeated_product(u in unit_series()) {
        prop_assert!(agree(&u.pow(3), &(&(&u * &u) * &u)));
        prop_assert!(agree(&u.pow(-2), &(&u * &u).recip()));
    }

    #[test]
    fn derivative_satisfies_leibniz(a in series(), b in series()) {
        let lhs = (&a * &b).derive();
        let rhs = &(&a.derive() * &b) + &(&a * &b.derive());
        prop_assert!(agree(&lhs, &rhs));
    }

    #[test]
    fn derivative_is_linear(a in series(), b in series()) {
        let lhs = (&a + &b).derive();
        let rhs = &a.derive() + &b.derive();
        prop_assert!(agree(&lhs, &rhs));
    }

    #[test]
    fn scaling_the_variable_is_a_ring_map(a in series(), b in series(), n in 1i64..=5, d in 1i64..=5) {
        let c = rat(n, d);
        let lhs = (&a * &b).scale_var(&c);
        let rhs = &a.scale_var(&c) * &b.scale_var(&c);
        prop_assert!(agree(&lhs, &rhs));
        let lin = (&a + &b).scale_var(&c);
        prop_assert!(agree(&lin, &(&a.scale_var(&c) + &b.scale_var(&c))));
    }

    #[test]
    fn truncation_keeps_coefficients(a in series(), k in 0i64..=ORDER) {
        let t = a.truncated(k);
        for j in a.valuation().unwrap_or(k + 1).min(k)..=k {
            prop_assert_eq!(t.coeff(j), a.coeff(j));
        }
    }

    #[test]
    fn exp_turns_sums_into_products(f in positive_series(), g in positive_series()) {
        let lhs = (&f + &g).exp();
        let rhs = &f.exp() * &g.exp();
        prop_assert!(agree(&lhs, &rhs));
    }

    #[test]
    fn log_undoes_exp(f in positive_series()) {
        let back = f.exp().log();
        prop_assert!(agree(&back, &f));
    }

    #[test]
    fn sqrt_recovers_a_square(s in unit_series()) {
        let sq = &s * &s;
        let r = sq.sqrt().expect("a square always has a square root");
        // The square root picks the branch with positive leading
        // coefficient, so compare against +/- s.
        prop_assert!(agree(&r, &s) || agree(&r, &(-&s)));
    }

    #[test]
    fn composition_distributes_over_products(
        a in series(),
        b in series(),
        inner in positive_series(),
    ) {
        let lhs = (&a * &b).compose(&inner);
        let rhs = &a.compose(&inner) * &b.compose(&inner);
        prop_assert!(agree(&lhs, &rhs));
    }

    #[test]
    fn compositional_inverse_round_trips(c1 in 1i64..=6, rest in proptest::collection::vec(small_rational(), (ORDER - 1) as usize)) {
        let mut coeffs = vec![rat_int(c1)];
        coeffs.extend(rest);
        let f = TruncatedSeries::from_coefficients(Var::X, 1, coeffs);
        let g = f.invert_comp(Var::W);
        let back = g.compose(&f);
        let through = back.order().min(ORDER);
        prop_assert!(back
            .first_mismatch(&TruncatedSeries::identity(Var::X, through), through)
            .is_none());
    }

    #[test]
    fn reduction_mod_p_is_a_ring_map(a in integer_series(), b in integer_series(), pidx in 0usize..3) {
        let p = [2u64, 3, 5][pidx];
        let ra = a.reduce_mod_p(p).unwrap();
        let rb = b.reduce_mod_p(p).unwrap();
        let sum = (&a + &b).reduce_mod_p(p).unwrap();
        prop_assert!(sum.first_mismatch(&ra.add(&rb), ORDER).is_none());
        let prod = (&a * &b).reduce_mod_p(p).unwrap();
        let through = prod.order();
        prop_assert!(prod.first_mismatch(&ra.mul(&rb).truncated(through), through).is_none());
    }
}
