//! Exact rational scalars and their p-adic bookkeeping.
//!
//! Every coefficient in this crate is an arbitrary-precision rational
//! (`num_rational::BigRational`), which keeps itself reduced with a positive
//! denominator. This module adds what the series layer needs on top of plain
//! arithmetic: p-adic valuations, residues modulo a small prime, exact
//! square roots, exact string formatting, and an overflow-safe `f64`
//! conversion for the numerical layer.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;

pub type Rational = BigRational;

/// Small rational literal: `rat(-1, 12)` is -1/12.
pub fn rat(num: i64, den: i64) -> Rational {
    assert!(den != 0, "rational literal with zero denominator");
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Integer as a rational.
pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// p-adic valuation, with an explicit +infinity sentinel for 0.
///
/// Ordered so that `Infinite` compares greater than every finite value,
/// matching the usual convention v_p(0) = +inf.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum PadicVal {
    Finite(i64),
    Infinite,
}

impl PadicVal {
    pub fn is_nonnegative(self) -> bool {
        match self {
            PadicVal::Finite(v) => v >= 0,
            PadicVal::Infinite => true,
        }
    }

    pub fn finite(self) -> Option<i64> {
        match self {
            PadicVal::Finite(v) => Some(v),
            PadicVal::Infinite => None,
        }
    }
}

impl fmt::Display for PadicVal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PadicVal::Finite(v) => write!(f, "{v}"),
            PadicVal::Infinite => write!(f, "inf"),
        }
    }
}

fn int_padic_val(n: &BigInt, p: u64) -> Option<i64> {
    if n.is_zero() {
        return None;
    }
    let p = BigInt::from(p);
    let mut n = n.abs();
    let mut v = 0i64;
    while (&n % &p).is_zero() {
        n /= &p;
        v += 1;
    }
    Some(v)
}

/// v_p(r) = v_p(numerator) - v_p(denominator); `Infinite` for r = 0.
pub fn padic_val(r: &Rational, p: u64) -> PadicVal {
    assert!(p >= 2, "p-adic valuation needs p >= 2");
    match int_padic_val(r.numer(), p) {
        None => PadicVal::Infinite,
        // The denominator of a reduced fraction is coprime to the numerator,
        // so at most one of the two valuations is nonzero.
        Some(vn) => PadicVal::Finite(vn - int_padic_val(r.denom(), p).unwrap()),
    }
}

fn modinv(a: u64, p: u64) -> u64 {
    // Extended Euclid over i128; p is a small prime and a is nonzero mod p.
    let (mut t, mut new_t) = (0i128, 1i128);
    let (mut r, mut new_r) = (p as i128, (a % p) as i128);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    assert!(r == 1, "modinv: {a} is not invertible mod {p}");
    t.rem_euclid(p as i128) as u64
}

/// Residue of `r` in [0, p), or `None` when v_p(r) < 0 (the reduction is
/// undefined because p divides the denominator).
pub fn residue_mod_p(r: &Rational, p: u64) -> Option<u64> {
    let pb = BigInt::from(p);
    let den = (r.denom() % &pb).to_u64().unwrap();
    if den == 0 {
        return None;
    }
    let num = ((r.numer() % &pb) + &pb) % &pb;
    Some(num.to_u64().unwrap() * modinv(den, p) % p)
}

/// Positive exact square root, if `r` is a square in Q.
pub fn sqrt_exact(r: &Rational) -> Option<Rational> {
    if r.is_negative() {
        return None;
    }
    let sn = r.numer().sqrt();
    let sd = r.denom().sqrt();
    if &(&sn * &sn) == r.numer() && &(&sd * &sd) == r.denom() {
        Some(Rational::new(sn, sd))
    } else {
        None
    }
}

/// `"num/den"`, or just `"num"` for integers. Exact; never a float.
pub fn format_exact(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Nearest f64, robust against numerator/denominator that individually
/// overflow f64 range (e.g. factorial-sized terms in high-order series).
pub fn to_f64(r: &Rational) -> f64 {
    if let (Some(n), Some(d)) = (r.numer().to_f64(), r.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 {
            return n / d;
        }
    }
    // Scale so the integer division keeps 64 fractional bits, then undo.
    let shifted: BigInt = (r.numer() << 64u32) / r.denom();
    let mut x = shifted.to_f64().unwrap_or(f64::NAN);
    x *= (0.5f64).powi(64);
    x
}

/// `a^k` for any integer exponent (square-and-multiply; `a != 0` when
/// `k < 0`).
pub fn pow_i64(a: &Rational, k: i64) -> Rational {
    let mut base = if k < 0 { a.clone().recip() } else { a.clone() };
    let mut e = k.unsigned_abs();
    let mut acc = Rational::one();
    while e > 0 {
        if e & 1 == 1 {
            acc *= &base;
        }
        base = &base * &base;
        e >>= 1;
    }
    acc
}
