//! The catalog of named series the checks are phrased in.
//!
//! Everything here is an exact expansion: exponential coordinates and their
//! inverses, the unit -2x/(1 - e^(-2x)) and its square-root relatives, the
//! logistic function, the degree-0 polylogarithm, Bernoulli numbers, and the
//! mod-2 spin family. Each function documents its closed form; the tests
//! pin opening coefficients that were computed by hand (or by an
//! independent recurrence) before the implementations existed.

use crate::modp::ModPSeries;
use crate::polyb::PolyB;
use crate::rational::{pow_i64, rat_int, Rational};
use crate::series::{TruncatedSeries, Var};
use num_traits::{One, Zero};

fn factorial(n: i64) -> Rational {
    (1..=n).map(rat_int).fold(Rational::one(), |a, b| a * b)
}

/// The exponential coordinate w(x) = (e^(px) - 1)/p, with coefficients
/// p^(n-1)/n!. Valuation 1; its compositional inverse is [`x_of_w`].
pub fn w_series(p: u64, order: i64) -> TruncatedSeries {
    assert!(order >= 1);
    let p = rat_int(p as i64);
    let coeffs = (1..=order)
        .map(|n| pow_i64(&p, n - 1) / factorial(n))
        .collect();
    TruncatedSeries::from_coefficients(Var::X, 1, coeffs)
}

/// The logarithmic coordinate x(w) = log(1 + pw)/p, with coefficients
/// (-p)^(n-1)/n. Inverse of [`w_series`] under composition.
pub fn x_of_w(p: u64, order: i64) -> TruncatedSeries {
    assert!(order >= 1);
    let mp = rat_int(-(p as i64));
    let coeffs = (1..=order)
        .map(|n| pow_i64(&mp, n - 1) / rat_int(n))
        .collect();
    TruncatedSeries::from_coefficients(Var::W, 1, coeffs)
}

/// e^(a x) through the given order.
pub fn exp_ax(a: &Rational, order: i64) -> TruncatedSeries {
    let coeffs = (0..=order).map(|n| pow_i64(a, n) / factorial(n)).collect();
    TruncatedSeries::from_coefficients(Var::X, 0, coeffs)
}

/// The unit u(x) = -2x/(1 - e^(-2x)) = -1 - x - x^2/3 + x^4/45 - ...
///
/// Invertible with constant term -1; its mod-2 reduction is the spin
/// family [`spin_f`], and u(x)u(-x) = x^2/sinh(x)^2.
pub fn wu_unit(order: i64) -> TruncatedSeries {
    // (1 - e^(-2x))/x has coefficient -(-2)^(n+1)/(n+1)! at x^n.
    let coeffs: Vec<Rational> = (0..=order)
        .map(|n| -pow_i64(&rat_int(-2), n + 1) / factorial(n + 1))
        .collect();
    let f = TruncatedSeries::from_coefficients(Var::X, 0, coeffs);
    f.recip().scale_coeffs(&rat_int(-2))
}

/// The sign-flipped variant +2x/(1 - e^(-2x)), for callers who want the
/// expansion with constant term +1.
pub fn wu_unit_positive(order: i64) -> TruncatedSeries {
    -&wu_unit(order)
}

/// Logistic function 1/(1 + e^(-x)) = 1/2 + x/4 - x^3/48 + x^5/480 - ...
pub fn logistic(order: i64) -> TruncatedSeries {
    let denom = &TruncatedSeries::one(Var::X, order) + &exp_ax(&rat_int(-1), order);
    denom.recip()
}

/// Degree-0 polylogarithm as a formal series:
/// li_0(x) = -1/(1 - e^(-x)) = -1/x - 1/2 - x/12 + x^3/720 - ...
/// Laurent with a simple pole at 0; the congruence layer checks how it
/// splits into the unit part over x plus the logistic function.
pub fn li0_series(order: i64) -> TruncatedSeries {
    // (1 - e^(-x))/x, then reciprocal (valuation -1), then negate.
    let coeffs: Vec<Rational> = (0..=order + 1)
        .map(|n| -pow_i64(&rat_int(-1), n + 1) / factorial(n + 1))
        .collect();
    let f = TruncatedSeries::from_coefficients(Var::X, 0, coeffs)
        .shift_exponent(1)
        .recip();
    -&f
}

/// Todd-type generating function x/(e^x - 1) = sum B_n x^n / n!.
pub fn todd_series(order: i64) -> TruncatedSeries {
    let coeffs: Vec<Rational> = (0..=order)
        .map(|n| Rational::one() / factorial(n + 1))
        .collect();
    // (e^x - 1)/x, reciprocal.
    TruncatedSeries::from_coefficients(Var::X, 0, coeffs).recip()
}

/// Bernoulli numbers B_0..B_n in the x/(e^x - 1) convention (B_1 = -1/2),
/// by the defining recurrence sum_j binom(m+1, j) B_j = 0.
pub fn bernoulli_upto(n: usize) -> Vec<Rational> {
    let mut b = Vec::with_capacity(n + 1);
    b.push(Rational::one());
    for m in 1..=n {
        // binom(m+1, j) accumulated incrementally.
        let mut acc = Rational::zero();
        let mut binom = Rational::one(); // binom(m+1, 0)
        for (j, bj) in b.iter().enumerate() {
            acc += &binom * bj;
            binom = binom * rat_int((m + 1 - j) as i64) / rat_int(j as i64 + 1);
        }
        b.push(-acc / rat_int(m as i64 + 1));
    }
    b
}

pub fn bernoulli(n: usize) -> Rational {
    bernoulli_upto(n).pop().unwrap()
}

/// The multiplicative-genus series (x/2)/sinh(x/2) = 1 - x^2/24 + 7x^4/5760 - ...
pub fn a_hat(order: i64) -> TruncatedSeries {
    // sinh(x/2)/(x/2) = sum x^(2k) / (4^k (2k+1)!), then reciprocal.
    let coeffs: Vec<Rational> = (0..=order)
        .map(|n| {
            if n % 2 == 1 {
                Rational::zero()
            } else {
                Rational::one() / (pow_i64(&rat_int(4), n / 2) * factorial(n + 1))
            }
        })
        .collect();
    TruncatedSeries::from_coefficients(Var::X, 0, coeffs).recip()
}

/// The doubled-argument variant x/sinh(x) = 1 - x^2/6 + 7x^4/360 - ...
pub fn a_hat_2x(order: i64) -> TruncatedSeries {
    let coeffs: Vec<Rational> = (0..=order)
        .map(|n| {
            if n % 2 == 1 {
                Rational::zero()
            } else {
                Rational::one() / factorial(n + 1)
            }
        })
        .collect();
    TruncatedSeries::from_coefficients(Var::X, 0, coeffs).recip()
}

/// The same series produced the long way round: sqrt(u(x) u(-x)) with
/// u = [`wu_unit`]. Exercised by the corollary check; the two routes must
/// agree coefficient for coefficient.
pub fn a_hat_2x_via_wu(order: i64) -> Result<TruncatedSeries, crate::series::SeriesError> {
    let u = wu_unit(order);
    let u_neg = u.scale_var(&rat_int(-1));
    (&u * &u_neg).sqrt()
}

/// z-coefficients of the binomial family (1 - z)^b: entry k is the
/// polynomial (-1)^k binom(b, k) in b.
pub fn b_binomial_series(order: usize) -> Vec<PolyB> {
    (0..=order)
        .map(|k| {
            let c = PolyB::binomial(k);
            if k % 2 == 0 {
                c
            } else {
                -&c
            }
        })
        .collect()
}

/// The mod-2 spin family: the series f with
/// f^(-1) = sum over k >= 0 of x^(2^k - 1). Closed form
/// f = 1 + sum over k >= 0 of x^(2^k) = 1 + x + x^2 + x^4 + x^8 + ...
pub fn spin_f(order: i64) -> ModPSeries {
    spin_f_reciprocal(order).recip()
}

/// Its reciprocal, the sparse sum x^0 + x^1 + x^3 + x^7 + ... over
/// exponents of the form 2^k - 1.
pub fn spin_f_reciprocal(order: i64) -> ModPSeries {
    let mut exps = Vec::new();
    let mut e: i64 = 1;
    while e - 1 <= order {
        exps.push(e - 1);
        e *= 2;
    }
    ModPSeries::from_exponents(Var::X, 2, &exps, order)
}

/// Sum of x^(p^k) over k >= 0 (so x itself is included) through the
/// order — the sparse image the exponential coordinate reduces to mod 2.
pub fn prime_power_sum(p: u64, order: i64) -> ModPSeries {
    let mut exps = Vec::new();
    let mut e = 1i64;
    while e <= order {
        exps.push(e);
        e *= p as i64;
    }
    ModPSeries::from_exponents(Var::X, p, &exps, order)
}

/// F(x) = log(e^(px) - px)/p, the change of coordinates with
/// w(F(x)) = w(x) - x. For p = 2: x^2 + (2/3)x^3 - (2/3)x^4 + ...
pub fn fx_series(p: u64, order: i64) -> TruncatedSeries {
    let pr = rat_int(p as i64);
    // e^(px) - px has constant term 1 and no x^1 term.
    let inner = &exp_ax(&pr, order) - &TruncatedSeries::monomial(Var::X, pr.clone(), 1, order);
    inner.log().scale_coeffs(&pr.recip())
}
