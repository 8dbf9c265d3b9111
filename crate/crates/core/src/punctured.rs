//! Rational functions on the line punctured at 0, 1, and infinity.
//!
//! The coefficient ring is Z[x, 1/x, 1/(1-x)]: Laurent-type rational
//! functions whose poles are confined to the three punctures. Elements are
//! kept in the normal form P(x) / (x^m (1-x)^n) with P an integer
//! polynomial not divisible by x when m > 0 nor by (1-x) when n > 0 — the
//! representation is unique, so equality is syntactic.
//!
//! The symmetric group on the three punctures acts by Mobius substitutions;
//! every element of the ring expands to an exact Laurent series at each
//! puncture in its local parameter (x, u = 1-x, or t = 1/x), and to exact
//! power series in the exponential charts x = 1 - e^(-c) and x = e^(-h).

use crate::rational::{self, rat_int, Rational};
use crate::report::{CheckReport, Witness};
use crate::series::{TruncatedSeries, Var};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PrfError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("result has a pole outside the punctures 0, 1, infinity: {obstruction}")]
    PoleOutsidePunctures { obstruction: String },
}

// ---------------------------------------------------------------------------
// Integer polynomials (internal representation of numerators).
// ---------------------------------------------------------------------------

/// Dense integer polynomial, no trailing zero coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    fn build(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_coefficients(coeffs: Vec<BigInt>) -> Self {
        Self::build(coeffs)
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::build(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        Self::build(vec![c])
    }

    pub fn x() -> Self {
        Self::build(vec![BigInt::zero(), BigInt::one()])
    }

    /// 1 - x, the other distinguished linear factor.
    pub fn one_minus_x() -> Self {
        Self::build(vec![BigInt::one(), -BigInt::one()])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coefficients(&self) -> &[BigInt] {
        &self.coeffs
    }

    fn coeff(&self, k: usize) -> BigInt {
        self.coeffs.get(k).cloned().unwrap_or_else(BigInt::zero)
    }

    fn add(&self, rhs: &Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Self::build((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }

    fn neg(&self) -> Self {
        Self::build(self.coeffs.iter().map(|c| -c).collect())
    }

    fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Self::build(coeffs)
    }

    /// Positive gcd of the coefficients (0 for the zero polynomial).
    fn content(&self) -> BigInt {
        self.coeffs
            .iter()
            .fold(BigInt::zero(), |acc, c| acc.gcd(c))
    }

    /// Exact division: Some(q) with self = q * rhs, or None if the
    /// division leaves a remainder. Exactness over Q plus integrality.
    fn div_exact(&self, rhs: &Self) -> Option<Self> {
        assert!(!rhs.is_zero(), "polynomial division by zero");
        if self.is_zero() {
            return Some(Self::zero());
        }
        if self.coeffs.len() < rhs.coeffs.len() {
            return None;
        }
        let mut rem: Vec<Rational> = self
            .coeffs
            .iter()
            .map(|c| Rational::from_integer(c.clone()))
            .collect();
        let dlen = rhs.coeffs.len();
        let lead = Rational::from_integer(rhs.coeffs[dlen - 1].clone());
        let qlen = rem.len() - dlen + 1;
        let mut q = vec![Rational::zero(); qlen];
        for k in (0..qlen).rev() {
            let c = &rem[k + dlen - 1] / &lead;
            if !c.is_zero() {
                for (j, d) in rhs.coeffs.iter().enumerate() {
                    let sub = &c * Rational::from_integer(d.clone());
                    rem[k + j] -= sub;
                }
            }
            q[k] = c;
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return None;
        }
        let mut out = Vec::with_capacity(qlen);
        for c in q {
            if !c.is_integer() {
                return None;
            }
            out.push(c.to_integer());
        }
        Some(Self::build(out))
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + Rational::from_integer(c.clone());
        }
        acc
    }

    fn eval_f64(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for c in self.coeffs.iter().rev() {
            acc = acc * x + rational::to_f64(&Rational::from_integer(c.clone()));
        }
        acc
    }

    /// Exact series with the polynomial's coefficients, tracked through
    /// `order` (>= degree).
    fn to_series(&self, var: Var, order: i64) -> TruncatedSeries {
        if self.is_zero() {
            return TruncatedSeries::zero(var, order);
        }
        assert!(order >= self.degree().unwrap() as i64);
        let mut coeffs: Vec<Rational> = self
            .coeffs
            .iter()
            .map(|c| Rational::from_integer(c.clone()))
            .collect();
        coeffs.resize((order + 1) as usize, Rational::zero());
        TruncatedSeries::from_coefficients(var, 0, coeffs)
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            match k {
                0 => write!(f, "{mag}")?,
                1 if mag.is_one() => write!(f, "x")?,
                1 => write!(f, "{mag}*x")?,
                _ if mag.is_one() => write!(f, "x^{k}")?,
                _ => write!(f, "{mag}*x^{k}")?,
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// The punctured-line ring.
// ---------------------------------------------------------------------------

/// Normal form P(x) / (x^pole0 (1-x)^pole1); see the module docs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PuncturedRationalFunction {
    num: IntPoly,
    pole0: u32,
    pole1: u32,
}

pub type Prf = PuncturedRationalFunction;

impl PuncturedRationalFunction {
    /// Assemble and normalize: cancel x and (1-x) factors of the numerator
    /// against the denominator exponents.
    pub fn new(num: IntPoly, mut pole0: u32, mut pole1: u32) -> Self {
        if num.is_zero() {
            return Prf {
                num,
                pole0: 0,
                pole1: 0,
            };
        }
        let mut num = num;
        while pole0 > 0 {
            match num.div_exact(&IntPoly::x()) {
                Some(q) => {
                    num = q;
                    pole0 -= 1;
                }
                None => break,
            }
        }
        while pole1 > 0 {
            match num.div_exact(&IntPoly::one_minus_x()) {
                Some(q) => {
                    num = q;
                    pole1 -= 1;
                }
                None => break,
            }
        }
        Prf { num, pole0, pole1 }
    }

    pub fn zero() -> Self {
        Self::new(IntPoly::zero(), 0, 0)
    }

    pub fn one() -> Self {
        Self::new(IntPoly::one(), 0, 0)
    }

    pub fn constant(c: i64) -> Self {
        Self::new(IntPoly::from_i64(&[c]), 0, 0)
    }

    pub fn x() -> Self {
        Self::new(IntPoly::x(), 0, 0)
    }

    pub fn from_poly(p: IntPoly) -> Self {
        Self::new(p, 0, 0)
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn numerator(&self) -> &IntPoly {
        &self.num
    }

    /// Order of the pole at 0 (0 when regular there).
    pub fn pole_at_zero(&self) -> u32 {
        self.pole0
    }

    /// Order of the pole at 1.
    pub fn pole_at_one(&self) -> u32 {
        self.pole1
    }

    /// Multiplicative inverse. Defined only when the numerator is a unit:
    /// +/- x^a (1-x)^b. Anything else has a zero away from the punctures,
    /// so its reciprocal leaves the ring.
    pub fn recip(&self) -> Result<Self, PrfError> {
        if self.is_zero() {
            return Err(PrfError::DivisionByZero);
        }
        let (sign, a, b, core) = split_units(&self.num);
        if core != IntPoly::one() {
            return Err(PrfError::PoleOutsidePunctures {
                obstruction: core.to_string(),
            });
        }
        // 1 / (s x^a (1-x)^b / (x^m (1-x)^n)) = s x^(m-a) (1-x)^(n-b).
        let mut num = IntPoly::constant(sign);
        let m = self.pole0 as i64 - a as i64;
        let n = self.pole1 as i64 - b as i64;
        if m > 0 {
            num = num.mul(&power(&IntPoly::x(), m as u32));
        }
        if n > 0 {
            num = num.mul(&power(&IntPoly::one_minus_x(), n as u32));
        }
        Ok(Self::new(
            num,
            (-m).max(0) as u32,
            (-n).max(0) as u32,
        ))
    }

    /// Exact division within the ring; fails if the quotient would need a
    /// pole (or a denominator constant) outside the punctures.
    pub fn div(&self, rhs: &Self) -> Result<Self, PrfError> {
        if rhs.is_zero() {
            return Err(PrfError::DivisionByZero);
        }
        // self / rhs = self * x^m2 (1-x)^n2 / P2.
        let mut t = self.clone();
        if rhs.pole0 > 0 {
            t = &t * &Self::from_poly(power(&IntPoly::x(), rhs.pole0));
        }
        if rhs.pole1 > 0 {
            t = &t * &Self::from_poly(power(&IntPoly::one_minus_x(), rhs.pole1));
        }
        let (sign, a, b, core) = split_units(&rhs.num);
        // Divide the numerator by the non-unit part of P2 exactly.
        let content = core.content();
        let primitive = core
            .div_exact(&IntPoly::constant(content.clone()))
            .expect("content divides");
        let mut num = if primitive == IntPoly::one() {
            t.num.clone()
        } else {
            match t.num.div_exact(&primitive) {
                Some(q) => q,
                None => {
                    return Err(PrfError::PoleOutsidePunctures {
                        obstruction: primitive.to_string(),
                    })
                }
            }
        };
        let c = &content * &sign;
        if !c.is_one() {
            num = match num.div_exact(&IntPoly::constant(c.clone())) {
                Some(q) => q,
                None => {
                    return Err(PrfError::PoleOutsidePunctures {
                        obstruction: format!("1/{c}"),
                    })
                }
            };
        }
        Ok(Self::new(num, t.pole0 + a, t.pole1 + b))
    }

    /// Integer power; negative exponents require the base to be a unit.
    pub fn pow(&self, e: i64) -> Result<Self, PrfError> {
        let base = if e < 0 { self.recip()? } else { self.clone() };
        let mut acc = Self::one();
        for _ in 0..e.abs() {
            acc = &acc * &base;
        }
        Ok(acc)
    }

    /// Value at a rational point; None exactly at the punctures 0 and 1
    /// when there is a pole there.
    pub fn eval_rational(&self, x: &Rational) -> Option<Rational> {
        let num = self.num.eval(x);
        let mut den = Rational::one();
        if self.pole0 > 0 {
            if x.is_zero() {
                return None;
            }
            den *= rational::pow_i64(x, self.pole0 as i64);
        }
        if self.pole1 > 0 {
            let omx = Rational::one() - x;
            if omx.is_zero() {
                return None;
            }
            den *= rational::pow_i64(&omx, self.pole1 as i64);
        }
        Some(num / den)
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.num.eval_f64(x) / (x.powi(self.pole0 as i32) * (1.0 - x).powi(self.pole1 as i32))
    }

    /// Substitute another element of the ring for x. Defined when the
    /// image and its 1-complement are units as needed (true for every
    /// Mobius symmetry and for the boundary substitutions).
    pub fn substitute(&self, g: &Self) -> Result<Self, PrfError> {
        // Horner for P(g).
        let mut acc = Self::zero();
        for c in self.num.coefficients().iter().rev() {
            acc = &(&acc * g) + &Self::from_poly(IntPoly::constant(c.clone()));
        }
        if self.pole0 > 0 {
            acc = &acc * &g.recip()?.pow(self.pole0 as i64)?;
        }
        if self.pole1 > 0 {
            let one_minus_g = &Self::one() - g;
            acc = &acc * &one_minus_g.recip()?.pow(self.pole1 as i64)?;
        }
        Ok(acc)
    }

    /// Apply a Mobius symmetry of the punctures: f |-> f(sigma(x)).
    pub fn mobius_apply(&self, sigma: Mobius) -> Self {
        self.substitute(&sigma.image_of_x())
            .expect("Mobius images are units")
    }

    /// Exact Laurent expansion at a puncture, in its local parameter,
    /// tracked through `order`.
    pub fn expand_at(&self, at: Puncture, order: i64) -> TruncatedSeries {
        let var = at.local_var();
        if self.is_zero() {
            return TruncatedSeries::zero(var, order);
        }
        let d = self.num.degree().unwrap() as i64;
        let m = self.pole0 as i64;
        let n = self.pole1 as i64;
        match at {
            // P(x) x^-m (1 + x + x^2 + ...)^n
            Puncture::Zero => {
                let big = (order + m).max(d).max(0);
                let p = self.num.to_series(var, big);
                let geo = TruncatedSeries::geometric(var, big).pow(n);
                (&p * &geo).shift_exponent(-m).truncated(order)
            }
            // x = 1 - u: P(1-u) u^-n (1 + u + ...)^m
            Puncture::One => {
                let big = (order + n).max(d).max(0);
                let one_minus_u =
                    &TruncatedSeries::one(var, big) - &TruncatedSeries::identity(var, big);
                // Horner: the substitution point is a unit, so plain
                // composition does not apply.
                let mut p = TruncatedSeries::zero(var, big);
                for c in self.num.coefficients().iter().rev() {
                    p = &(&p * &one_minus_u)
                        + &TruncatedSeries::constant(
                            var,
                            Rational::from_integer(c.clone()),
                            big,
                        );
                }
                let geo = TruncatedSeries::geometric(var, big).pow(m);
                (&p * &geo).shift_exponent(-n).truncated(order)
            }
            // x = 1/t: (-1)^n t^(m + n - d) P~(t) (1 + t + ...)^n, with
            // P~ the coefficient-reversed numerator.
            Puncture::Infinity => {
                let shift = m + n - d;
                let big = (order - shift).max(d).max(0);
                let mut rev: Vec<Rational> = self
                    .num
                    .coefficients()
                    .iter()
                    .rev()
                    .map(|c| Rational::from_integer(c.clone()))
                    .collect();
                rev.resize((big + 1) as usize, Rational::zero());
                let ptilde = TruncatedSeries::from_coefficients(var, 0, rev);
                let geo = TruncatedSeries::geometric(var, big).pow(n);
                let mut s = (&ptilde * &geo).shift_exponent(shift);
                if n % 2 == 1 {
                    s = -&s;
                }
                s.truncated(order)
            }
        }
    }

    /// Substitute a series for x (the chart expansions). The series must
    /// keep the denominators invertible: nonzero, and not identically 1
    /// where a pole at 1 needs 1 - s to be invertible.
    pub fn eval_at_series(&self, s: &TruncatedSeries) -> Result<TruncatedSeries, PrfError> {
        let var = s.var();
        let order = s.order();
        let mut acc = TruncatedSeries::zero(var, order);
        for c in self.num.coefficients().iter().rev() {
            acc = &(&acc * s)
                + &TruncatedSeries::constant(var, Rational::from_integer(c.clone()), order);
        }
        if self.pole0 > 0 {
            if s.is_zero() {
                return Err(PrfError::DivisionByZero);
            }
            acc = &acc * &s.recip().pow(self.pole0 as i64);
        }
        if self.pole1 > 0 {
            let one_minus_s = &TruncatedSeries::one(var, order) - s;
            if one_minus_s.is_zero() {
                return Err(PrfError::DivisionByZero);
            }
            acc = &acc * &one_minus_s.recip().pow(self.pole1 as i64);
        }
        Ok(acc)
    }
}

/// Split sign * x^a * (1-x)^b out of a polynomial; returns
/// (sign, a, b, remaining factor with positive leading-behavior).
fn split_units(p: &IntPoly) -> (BigInt, u32, u32, IntPoly) {
    assert!(!p.is_zero());
    let mut core = p.clone();
    let mut a = 0u32;
    while let Some(q) = core.div_exact(&IntPoly::x()) {
        core = q;
        a += 1;
    }
    let mut b = 0u32;
    while let Some(q) = core.div_exact(&IntPoly::one_minus_x()) {
        core = q;
        b += 1;
    }
    // Pull the sign of the leading coefficient out front.
    let sign = if core.coefficients().last().unwrap().is_negative() {
        core = core.neg();
        -BigInt::one()
    } else {
        BigInt::one()
    };
    (sign, a, b, core)
}

fn power(p: &IntPoly, e: u32) -> IntPoly {
    let mut acc = IntPoly::one();
    for _ in 0..e {
        acc = acc.mul(p);
    }
    acc
}

impl Add for &PuncturedRationalFunction {
    type Output = PuncturedRationalFunction;
    fn add(self, rhs: Self) -> Prf {
        let m = self.pole0.max(rhs.pole0);
        let n = self.pole1.max(rhs.pole1);
        let lift = |f: &Prf| -> IntPoly {
            let mut p = f.num.clone();
            if m > f.pole0 {
                p = p.mul(&power(&IntPoly::x(), m - f.pole0));
            }
            if n > f.pole1 {
                p = p.mul(&power(&IntPoly::one_minus_x(), n - f.pole1));
            }
            p
        };
        Prf::new(lift(self).add(&lift(rhs)), m, n)
    }
}

impl Sub for &PuncturedRationalFunction {
    type Output = PuncturedRationalFunction;
    fn sub(self, rhs: Self) -> Prf {
        self + &-rhs
    }
}

impl Neg for &PuncturedRationalFunction {
    type Output = PuncturedRationalFunction;
    fn neg(self) -> Prf {
        Prf {
            num: self.num.neg(),
            pole0: self.pole0,
            pole1: self.pole1,
        }
    }
}

impl Mul for &PuncturedRationalFunction {
    type Output = PuncturedRationalFunction;
    fn mul(self, rhs: Self) -> Prf {
        Prf::new(
            self.num.mul(&rhs.num),
            self.pole0 + rhs.pole0,
            self.pole1 + rhs.pole1,
        )
    }
}

impl fmt::Display for PuncturedRationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.pole0 == 0 && self.pole1 == 0 {
            return write!(f, "{}", self.num);
        }
        let needs_parens = self.num.coefficients().iter().filter(|c| !c.is_zero()).count() > 1;
        if needs_parens {
            write!(f, "({})", self.num)?;
        } else {
            write!(f, "{}", self.num)?;
        }
        write!(f, " / (")?;
        let mut sep = "";
        if self.pole0 == 1 {
            write!(f, "x")?;
            sep = " ";
        } else if self.pole0 > 1 {
            write!(f, "x^{}", self.pole0)?;
            sep = " ";
        }
        if self.pole1 == 1 {
            write!(f, "{sep}(1-x)")?;
        } else if self.pole1 > 1 {
            write!(f, "{sep}(1-x)^{}", self.pole1)?;
        }
        write!(f, ")")
    }
}

impl Serialize for PuncturedRationalFunction {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("PuncturedRationalFunction", 3)?;
        let num: Vec<String> = self.num.coefficients().iter().map(|c| c.to_string()).collect();
        st.serialize_field("num", &num)?;
        st.serialize_field("pole0", &self.pole0)?;
        st.serialize_field("pole1", &self.pole1)?;
        st.end()
    }
}

// ---------------------------------------------------------------------------
// Punctures and the symmetric group acting on them.
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Puncture {
    Zero,
    One,
    Infinity,
}

impl Puncture {
    pub const ALL: [Puncture; 3] = [Puncture::Zero, Puncture::One, Puncture::Infinity];

    /// Local parameter at this puncture: x, u = 1-x, or t = 1/x.
    pub fn local_var(self) -> Var {
        match self {
            Puncture::Zero => Var::X,
            Puncture::One => Var::U,
            Puncture::Infinity => Var::T,
        }
    }
}

impl fmt::Display for Puncture {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Puncture::Zero => write!(f, "0"),
            Puncture::One => write!(f, "1"),
            Puncture::Infinity => write!(f, "inf"),
        }
    }
}

/// The six Mobius transformations preserving {0, 1, infinity}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mobius {
    /// x
    Identity,
    /// 1 - x (swaps 0 and 1)
    SwapZeroOne,
    /// 1/x (swaps 0 and infinity)
    SwapZeroInf,
    /// x/(x-1) (swaps 1 and infinity)
    SwapOneInf,
    /// 1/(1-x) (cycle 0 -> 1 -> infinity -> 0)
    CycleForward,
    /// (x-1)/x (cycle 0 -> infinity -> 1 -> 0)
    CycleBackward,
}

impl Mobius {
    pub const ALL: [Mobius; 6] = [
        Mobius::Identity,
        Mobius::SwapZeroOne,
        Mobius::SwapZeroInf,
        Mobius::SwapOneInf,
        Mobius::CycleForward,
        Mobius::CycleBackward,
    ];

    /// Images of (0, 1, infinity) under the transformation.
    pub fn permutation(self) -> [Puncture; 3] {
        use Puncture::*;
        match self {
            Mobius::Identity => [Zero, One, Infinity],
            Mobius::SwapZeroOne => [One, Zero, Infinity],
            Mobius::SwapZeroInf => [Infinity, One, Zero],
            Mobius::SwapOneInf => [Zero, Infinity, One],
            Mobius::CycleForward => [One, Infinity, Zero],
            Mobius::CycleBackward => [Infinity, Zero, One],
        }
    }

    fn from_permutation(perm: [Puncture; 3]) -> Mobius {
        *Mobius::ALL
            .iter()
            .find(|m| m.permutation() == perm)
            .expect("every permutation of three punctures is realized")
    }

    fn apply_to_puncture(self, p: Puncture) -> Puncture {
        let perm = self.permutation();
        match p {
            Puncture::Zero => perm[0],
            Puncture::One => perm[1],
            Puncture::Infinity => perm[2],
        }
    }

    /// Group law: (a.compose(b))(x) = a(b(x)).
    pub fn compose(self, rhs: Mobius) -> Mobius {
        let perm = [
            self.apply_to_puncture(rhs.apply_to_puncture(Puncture::Zero)),
            self.apply_to_puncture(rhs.apply_to_puncture(Puncture::One)),
            self.apply_to_puncture(rhs.apply_to_puncture(Puncture::Infinity)),
        ];
        Mobius::from_permutation(perm)
    }

    pub fn inverse(self) -> Mobius {
        *Mobius::ALL
            .iter()
            .find(|m| m.compose(self) == Mobius::Identity)
            .expect("group")
    }

    /// The transformation as an element of the ring.
    pub fn image_of_x(self) -> Prf {
        match self {
            Mobius::Identity => Prf::x(),
            Mobius::SwapZeroOne => Prf::from_poly(IntPoly::one_minus_x()),
            Mobius::SwapZeroInf => Prf::new(IntPoly::one(), 1, 0),
            // x/(x-1) = -x/(1-x)
            Mobius::SwapOneInf => Prf::new(IntPoly::from_i64(&[0, -1]), 0, 1),
            Mobius::CycleForward => Prf::new(IntPoly::one(), 0, 1),
            // (x-1)/x = -(1-x)/x
            Mobius::CycleBackward => Prf::new(IntPoly::from_i64(&[-1, 1]), 1, 0),
        }
    }
}

impl fmt::Display for Mobius {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Mobius::Identity => "x",
            Mobius::SwapZeroOne => "1-x",
            Mobius::SwapZeroInf => "1/x",
            Mobius::SwapOneInf => "x/(x-1)",
            Mobius::CycleForward => "1/(1-x)",
            Mobius::CycleBackward => "(x-1)/x",
        };
        write!(f, "{s}")
    }
}

// ---------------------------------------------------------------------------
// Exponential charts and the c <-> h involution.
// ---------------------------------------------------------------------------

/// Expansion of f in the chart x = 1 - e^(-c) (a power series in c).
pub fn chart_c(f: &Prf, order: i64) -> Result<TruncatedSeries, PrfError> {
    let s = one_minus_exp_neg(Var::C, order);
    f.eval_at_series(&s).map(|t| t.with_var(Var::C))
}

/// Expansion of f in the chart x = e^(-h).
pub fn chart_h(f: &Prf, order: i64) -> Result<TruncatedSeries, PrfError> {
    let e = crate::special::exp_ax(&rat_int(-1), order)
        .with_var(Var::H);
    f.eval_at_series(&e).map(|t| t.with_var(Var::H))
}

fn one_minus_exp_neg(var: Var, order: i64) -> TruncatedSeries {
    let e = crate::special::exp_ax(&rat_int(-1), order).with_var(var);
    &TruncatedSeries::one(var, order) - &e
}

/// The chart-swapping involution h(c) = -log(1 - e^(-c)) as a scalar
/// function (it is not a power series: it has a log singularity at 0).
pub fn involution_h(c: f64) -> f64 {
    -(-(-c).exp_m1()).ln()
}

/// Checks the c <-> h chart structure: exactly, that the two charts are
/// exchanged by the puncture swap 0 <-> 1; numerically, that h is an
/// involution with fixed point log 2.
pub fn check_c_h_involution(order: i64, samples: usize, tol: f64) -> CheckReport {
    let name = "c-h-involution";
    let params = |r: CheckReport| {
        r.with_param("order", order)
            .with_param("samples", samples as i64)
            .with_param("tol", tol)
    };

    // Exact part: chart_c(f) = chart_h(f o (1-x)) for a basket of elements
    // exercising both poles. (x = 1 - e^(-c) and the swapped chart
    // x = e^(-h) coincide under c = h.)
    let basket = [
        Prf::new(IntPoly::one(), 1, 0),
        Prf::new(IntPoly::one(), 0, 1),
        Prf::new(IntPoly::from_i64(&[1, 1]), 2, 1),
        Prf::new(IntPoly::from_i64(&[0, 3, 0, -1]), 1, 3),
    ];
    for f in &basket {
        let lhs = chart_c(f, order).expect("charts of ring elements are Laurent series");
        let swapped = f.mobius_apply(Mobius::SwapZeroOne);
        let rhs = chart_h(&swapped, order)
            .expect("charts of ring elements are Laurent series")
            .with_var(Var::C);
        let through = lhs.order().min(rhs.order());
        if let Some(e) = lhs.first_mismatch(&rhs, through) {
            return params(CheckReport::fail(
                name,
                Witness::Coefficient {
                    exponent: e,
                    value: rational::format_exact(&lhs.coeff(e)),
                },
            )
            .with_note(format!("chart swap failed for {f}")));
        }
    }

    // Numeric part: h(h(c)) = c on positive samples, h(log 2) = log 2.
    for i in 0..samples {
        let c = 0.15 + 3.0 * i as f64 / samples.max(1) as f64;
        let err = (involution_h(involution_h(c)) - c).abs();
        if !(err <= tol) {
            return params(CheckReport::fail(
                name,
                Witness::Sample {
                    location: format!("c={c}"),
                    error: err,
                },
            ));
        }
    }
    let fixed = (involution_h(std::f64::consts::LN_2) - std::f64::consts::LN_2).abs();
    if !(fixed <= tol) {
        return params(CheckReport::fail(
            name,
            Witness::Sample {
                location: "c=log 2".to_string(),
                error: fixed,
            },
        ));
    }

    params(
        CheckReport::pass(name)
            .with_note("chart swap x -> 1-x exchanges the c and h expansions exactly")
            .with_note(format!(
                "h(h(c)) = c on {samples} samples; fixed point log 2 within {tol:e}"
            )),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn prf(coeffs: &[i64], m: u32, n: u32) -> Prf {
        Prf::new(IntPoly::from_i64(coeffs), m, n)
    }

    #[test]
    fn normal_form_cancels_unit_factors() {
        // (x^2 + x^3)/x^3 = (1 + x)/x.
        let f = prf(&[0, 0, 1, 1], 3, 0);
        assert_eq!(f, prf(&[1, 1], 1, 0));
        // (1 - x)^2 / (1 - x) = 1 - x, with no denominator left.
        let g = prf(&[1, -2, 1], 0, 1);
        assert_eq!(g, prf(&[1, -1], 0, 0));
        assert_eq!(Prf::zero().pole_at_zero(), 0);
    }

    #[test]
    fn arithmetic_and_syntactic_equality() {
        let x = Prf::x();
        let one = Prf::one();
        // x + (1-x) = 1.
        let omx = Prf::from_poly(IntPoly::one_minus_x());
        assert_eq!(&x + &omx, one);
        // 1/x + 1/(1-x) = 1/(x(1-x)).
        let a = prf(&[1], 1, 0);
        let b = prf(&[1], 0, 1);
        assert_eq!(&a + &b, prf(&[1], 1, 1));
        // (1/x) * x = 1.
        assert_eq!(&a * &x, one);
        // x - x = 0.
        assert!((&x - &x).is_zero());
    }

    #[test]
    fn reciprocal_of_units_only() {
        // u = -x^2/(1-x) is a unit: 1/u = -(1-x)/x^2.
        let u = prf(&[0, 0, -1], 0, 1);
        let r = u.recip().unwrap();
        assert_eq!(r, prf(&[-1, 1], 2, 0));
        // Round trip.
        assert_eq!(&u * &r, Prf::one());
        // 1 + x is not a unit.
        let bad = prf(&[1, 1], 0, 0);
        assert!(matches!(
            bad.recip(),
            Err(PrfError::PoleOutsidePunctures { .. })
        ));
        assert_eq!(Prf::zero().recip(), Err(PrfError::DivisionByZero));
    }

    #[test]
    fn division_exact_and_obstructed() {
        // (1 - x^2)/(1 + x) = 1 - x.
        let a = prf(&[1, 0, -1], 0, 0);
        let b = prf(&[1, 1], 0, 0);
        assert_eq!(a.div(&b).unwrap(), prf(&[1, -1], 0, 0));
        // 1/(1 + x) leaves the ring.
        assert!(matches!(
            Prf::one().div(&b),
            Err(PrfError::PoleOutsidePunctures { .. })
        ));
        // Constant obstruction: x/2 is not in the ring...
        let two = Prf::constant(2);
        assert!(matches!(
            Prf::x().div(&two),
            Err(PrfError::PoleOutsidePunctures { obstruction }) if obstruction == "1/2"
        ));
        // ...but 2x/2 is.
        assert_eq!(prf(&[0, 2], 0, 0).div(&two).unwrap(), Prf::x());
        // Signs: x / (-x) = -1.
        let neg_x = prf(&[0, -1], 0, 0);
        assert_eq!(Prf::x().div(&neg_x).unwrap(), Prf::constant(-1));
    }

    #[test]
    fn evaluation_matches_structure() {
        // f = (1 + x)/(x (1-x)^2) at x = 1/2: (3/2)/((1/2)(1/4)) = 12.
        let f = prf(&[1, 1], 1, 2);
        assert_eq!(f.eval_rational(&rat(1, 2)), Some(rat_int(12)));
        assert_eq!(f.eval_rational(&rat_int(0)), None);
        assert_eq!(f.eval_rational(&rat_int(1)), None);
        let v = f.eval_f64(0.5);
        assert!((v - 12.0).abs() < 1e-12);
        // A function with no pole at 1 evaluates there.
        let g = prf(&[1, 2], 1, 0);
        assert_eq!(g.eval_rational(&rat_int(1)), Some(rat_int(3)));
    }

    #[test]
    fn expansion_at_each_puncture() {
        // f = 1/(x(1-x)) = x^-1 + 1 + x + x^2 + ... at 0.
        let f = prf(&[1], 1, 1);
        let at0 = f.expand_at(Puncture::Zero, 5);
        assert_eq!(at0.valuation(), Some(-1));
        for k in -1..=5 {
            assert_eq!(at0.coeff(k), rat_int(1), "exponent {k}");
        }
        // At 1 (u = 1-x): 1/((1-u)u) = u^-1 + 1 + u + ...
        let at1 = f.expand_at(Puncture::One, 5);
        assert_eq!(at1.var(), Var::U);
        for k in -1..=5 {
            assert_eq!(at1.coeff(k), rat_int(1), "exponent {k}");
        }
        // At infinity (t = 1/x): 1/(x(1-x)) = t^2/(1 - t) * (-1)... sign:
        // x(1-x) = (1/t)(1 - 1/t) = -(1-t)/t^2, so f = -t^2/(1-t).
        let atinf = f.expand_at(Puncture::Infinity, 5);
        assert_eq!(atinf.var(), Var::T);
        assert_eq!(atinf.valuation(), Some(2));
        for k in 2..=5 {
            assert_eq!(atinf.coeff(k), rat_int(-1), "exponent {k}");
        }
    }

    #[test]
    fn expansion_of_polynomials_is_exact() {
        // x^2 (no denominators): expansions terminate.
        let f = prf(&[0, 0, 1], 0, 0);
        let at0 = f.expand_at(Puncture::Zero, 6);
        assert_eq!(at0.coeff(2), rat_int(1));
        assert_eq!(at0.coeff(3), rat_int(0));
        // At 1: (1-u)^2 = 1 - 2u + u^2.
        let at1 = f.expand_at(Puncture::One, 6);
        assert_eq!(at1.coeff(0), rat_int(1));
        assert_eq!(at1.coeff(1), rat_int(-2));
        assert_eq!(at1.coeff(2), rat_int(1));
        // At infinity: x^2 = t^-2.
        let atinf = f.expand_at(Puncture::Infinity, 3);
        assert_eq!(atinf.valuation(), Some(-2));
        assert_eq!(atinf.coeff(-2), rat_int(1));
    }

    #[test]
    fn mobius_group_structure() {
        use Mobius::*;
        // Order-2 elements.
        for m in [SwapZeroOne, SwapZeroInf, SwapOneInf] {
            assert_eq!(m.compose(m), Identity);
            assert_eq!(m.inverse(), m);
        }
        // The 3-cycles are inverse to each other.
        assert_eq!(CycleForward.compose(CycleBackward), Identity);
        assert_eq!(CycleForward.inverse(), CycleBackward);
        assert_eq!(
            CycleForward.compose(CycleForward),
            CycleBackward
        );
        // Composition agrees with substitution of images:
        // (a.compose(b)) applied to x equals b's image substituted into a's.
        for a in Mobius::ALL {
            for b in Mobius::ALL {
                let composed = a.compose(b).image_of_x();
                let substituted = a.image_of_x().substitute(&b.image_of_x()).unwrap();
                assert_eq!(composed, substituted, "{a} o {b}");
            }
        }
    }

    #[test]
    fn mobius_action_on_functions() {
        // f = 1/x under x -> 1/x becomes x.
        let f = prf(&[1], 1, 0);
        assert_eq!(f.mobius_apply(Mobius::SwapZeroInf), Prf::x());
        // f = 1/x under x -> 1-x becomes 1/(1-x).
        assert_eq!(f.mobius_apply(Mobius::SwapZeroOne), prf(&[1], 0, 1));
        // Action is a group action: (a.compose(b)).apply = b.apply then a.apply.
        let g = prf(&[1, 2, -1], 2, 1);
        for a in Mobius::ALL {
            for b in Mobius::ALL {
                let lhs = g.mobius_apply(a.compose(b));
                let rhs = g.mobius_apply(a).mobius_apply(b);
                assert_eq!(lhs, rhs, "{a} o {b}");
            }
        }
    }

    #[test]
    fn charts_open_correctly() {
        // chart_c of 1/x: 1/(1 - e^(-c)) = c^-1 + 1/2 + c/12 - ...
        let f = prf(&[1], 1, 0);
        let c = chart_c(&f, 5).unwrap();
        assert_eq!(c.var(), Var::C);
        assert_eq!(c.coeff(-1), rat_int(1));
        assert_eq!(c.coeff(0), rat(1, 2));
        assert_eq!(c.coeff(1), rat(1, 12));
        // chart_h of 1/x: e^h = 1 + h + h^2/2 + ...
        let h = chart_h(&f, 4).unwrap();
        assert_eq!(h.coeff(0), rat_int(1));
        assert_eq!(h.coeff(2), rat(1, 2));
        assert_eq!(h.coeff(3), rat(1, 6));
    }

    #[test]
    fn involution_check_passes() {
        let r = check_c_h_involution(16, 20, 1e-12);
        assert_eq!(r.status, crate::report::CheckStatus::Pass, "{:?}", r);
    }

    #[test]
    fn display_and_json() {
        let f = prf(&[1, 1], 1, 2);
        assert_eq!(format!("{f}"), "(1 + x) / (x (1-x)^2)");
        assert_eq!(format!("{}", Prf::x()), "x");
        assert_eq!(format!("{}", prf(&[1], 0, 1)), "1 / ((1-x))");
        let v = serde_json::to_value(&f).unwrap();
        assert_eq!(v["num"], serde_json::json!(["1", "1"]));
        assert_eq!(v["pole0"], 1);
        assert_eq!(v["pole1"], 2);
    }
}
