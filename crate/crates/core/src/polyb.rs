//! Polynomials in a formal exponent symbol b.
//!
//! The binomial family (1 - z)^b has z-coefficients that are polynomials in
//! b, namely (-1)^k binom(b, k), and the product rules it satisfies are
//! polynomial identities in b — checking them for symbolic b proves them for
//! every integer (or rational) specialization at once. This module is that
//! coefficient ring: Q[b], dense, with just enough arithmetic for the
//! two-variable expansions built on top of it.

use crate::rational::{self, rat_int, Rational};
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// A polynomial in b with rational coefficients; `coeffs[k]` multiplies b^k.
/// Normalized: no trailing zero coefficients (zero is the empty list).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyB {
    coeffs: Vec<Rational>,
}

impl PolyB {
    fn build(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        PolyB { coeffs }
    }

    pub fn from_coefficients(coeffs: Vec<Rational>) -> Self {
        Self::build(coeffs)
    }

    pub fn constant(c: Rational) -> Self {
        Self::build(vec![c])
    }

    /// The generator b itself.
    pub fn b() -> Self {
        Self::build(vec![Rational::zero(), Rational::one()])
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    /// binom(b, k) = b (b-1) ... (b-k+1) / k! as a polynomial in b.
    pub fn binomial(k: usize) -> Self {
        let mut acc = Self::constant(Rational::one());
        for i in 0..k {
            let factor = Self::build(vec![rat_int(-(i as i64)), Rational::one()]);
            acc = &acc * &factor;
        }
        let kfact = (1..=k as i64).map(rat_int).fold(Rational::one(), |a, b| a * b);
        acc.scale(&kfact.recip())
    }

    pub fn scale(&self, a: &Rational) -> Self {
        Self::build(self.coeffs.iter().map(|c| c * a).collect())
    }

    pub fn eval(&self, b: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * b + c;
        }
        acc
    }
}

impl Add for &PolyB {
    type Output = PolyB;
    fn add(self, rhs: Self) -> PolyB {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut coeffs = vec![Rational::zero(); n];
        for (k, c) in self.coeffs.iter().enumerate() {
            coeffs[k] += c;
        }
        for (k, c) in rhs.coeffs.iter().enumerate() {
            coeffs[k] += c;
        }
        PolyB::build(coeffs)
    }
}

impl Sub for &PolyB {
    type Output = PolyB;
    fn sub(self, rhs: Self) -> PolyB {
        self + &-rhs
    }
}

impl Neg for &PolyB {
    type Output = PolyB;
    fn neg(self) -> PolyB {
        PolyB::build(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Mul for &PolyB {
    type Output = PolyB;
    fn mul(self, rhs: Self) -> PolyB {
        if self.coeffs.is_empty() || rhs.coeffs.is_empty() {
            return PolyB::zero();
        }
        let mut coeffs = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        PolyB::build(coeffs)
    }
}

// By-value forms so PolyB satisfies the num_traits::Zero contract and can
// sit as the coefficient type of a generic two-variable expansion.
impl Add for PolyB {
    type Output = PolyB;
    fn add(self, rhs: Self) -> PolyB {
        &self + &rhs
    }
}

impl Sub for PolyB {
    type Output = PolyB;
    fn sub(self, rhs: Self) -> PolyB {
        &self - &rhs
    }
}

impl Mul for PolyB {
    type Output = PolyB;
    fn mul(self, rhs: Self) -> PolyB {
        &self * &rhs
    }
}

impl Zero for PolyB {
    fn zero() -> Self {
        PolyB { coeffs: Vec::new() }
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl One for PolyB {
    fn one() -> Self {
        PolyB::constant(Rational::one())
    }
}

impl fmt::Display for PolyB {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
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
            let coeff_str = rational::format_exact(&mag);
            match k {
                0 => write!(f, "{coeff_str}")?,
                1 if mag.is_one() => write!(f, "b")?,
                1 => write!(f, "{coeff_str}*b")?,
                _ if mag.is_one() => write!(f, "b^{k}")?,
                _ => write!(f, "{coeff_str}*b^{k}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn binomial_polynomials() {
        assert_eq!(PolyB::binomial(0), PolyB::constant(rat_int(1)));
        assert_eq!(PolyB::binomial(1), PolyB::b());
        // binom(b, 2) = (b^2 - b)/2.
        let b2 = PolyB::binomial(2);
        assert_eq!(b2.coeff(1), rat(-1, 2));
        assert_eq!(b2.coeff(2), rat(1, 2));
        // Specializations match integer binomials.
        assert_eq!(PolyB::binomial(2).eval(&rat_int(5)), rat_int(10));
        assert_eq!(PolyB::binomial(3).eval(&rat_int(7)), rat_int(35));
        assert_eq!(PolyB::binomial(4).eval(&rat_int(2)), rat_int(0));
        // And stay sensible at non-integer arguments: binom(1/2, 2) = -1/8.
        assert_eq!(PolyB::binomial(2).eval(&rat(1, 2)), rat(-1, 8));
    }

    #[test]
    fn ring_operations() {
        let b = PolyB::b();
        let sq = &b * &b;
        assert_eq!(sq.coeff(2), rat_int(1));
        assert_eq!(sq.degree(), Some(2));
        let diff = &sq - &b;
        assert_eq!(format!("{diff}"), "b^2 - b");
        assert!((&diff - &diff).is_zero());
        // Pascal: binom(b,k-1) + binom(b,k) = binom(b+1,k), checked at b=9.
        let lhs = &PolyB::binomial(3) + &PolyB::binomial(4);
        assert_eq!(lhs.eval(&rat_int(9)), rat_int(210)); // binom(10, 4)
    }

    #[test]
    fn display_forms() {
        assert_eq!(format!("{}", PolyB::zero()), "0");
        assert_eq!(format!("{}", PolyB::binomial(2)), "1/2*b^2 - 1/2*b");
        assert_eq!(format!("{}", PolyB::constant(rat(-3, 4))), "-3/4");
    }
}
