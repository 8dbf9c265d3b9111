//! Truncated series with coefficients in the prime field F_p.
//!
//! The mod-p layer is where the congruence checks actually live: an exact
//! rational series is pushed down with
//! [`TruncatedSeries::reduce_mod_p`](crate::series::TruncatedSeries::reduce_mod_p)
//! (which fails loudly if any coefficient has a p in its denominator), and
//! the image is compared against a closed-form target here. Same dense
//! layout and truncation discipline as the rational series: coefficients run
//! from `val` through `order`, reading past `order` panics, and the zero
//! series is canonical (`val == order + 1`, empty coefficients).

use crate::series::Var;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use std::fmt;

fn modinv(a: u64, p: u64) -> u64 {
    // Fermat: a^(p-2) mod p. Fine for the word-sized primes used here.
    assert!(a % p != 0, "no inverse of 0 mod {p}");
    let mut base = (a % p) as u128;
    let mut e = p - 2;
    let m = p as u128;
    let mut acc: u128 = 1;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        e >>= 1;
    }
    acc as u64
}

/// Dense truncated Laurent series over F_p.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModPSeries {
    var: Var,
    p: u64,
    val: i64,
    order: i64,
    coeffs: Vec<u64>,
}

impl ModPSeries {
    /// Assemble from raw parts, normalizing: residues are reduced into
    /// `[0, p)`, leading zeros are absorbed into the valuation, and an
    /// all-zero window becomes the canonical zero series.
    pub fn from_parts(var: Var, p: u64, mut val: i64, order: i64, coeffs: Vec<u64>) -> Self {
        assert!(p >= 2, "modulus must be a prime >= 2");
        let keep = (order - val + 1).max(0) as usize;
        let mut coeffs: Vec<u64> = coeffs.into_iter().take(keep).map(|c| c % p).collect();
        coeffs.resize(keep, 0); // the window val..=order is dense
        let lead = coeffs.iter().take_while(|&&c| c == 0).count();
        if lead > 0 {
            coeffs.drain(..lead);
            val += lead as i64;
        }
        if coeffs.is_empty() {
            val = order + 1;
        }
        debug_assert_eq!(coeffs.len() as i64, (order - val + 1).max(0));
        ModPSeries { var, p, val, order, coeffs }
    }

    pub fn zero(var: Var, p: u64, order: i64) -> Self {
        Self::from_parts(var, p, order + 1, order, Vec::new())
    }

    pub fn one(var: Var, p: u64, order: i64) -> Self {
        Self::monomial(var, p, 1, 0, order)
    }

    pub fn monomial(var: Var, p: u64, c: u64, exponent: i64, order: i64) -> Self {
        assert!(exponent <= order, "monomial exponent past truncation order");
        Self::from_parts(var, p, exponent, order, vec![c])
    }

    /// Sum of `var^e` over the listed exponents (each with coefficient 1);
    /// exponents past `order` are ignored. Handy for sparse targets like
    /// sums over powers of 2.
    pub fn from_exponents(var: Var, p: u64, exponents: &[i64], order: i64) -> Self {
        let val = exponents.iter().copied().min().unwrap_or(order + 1).min(order + 1);
        let mut coeffs = vec![0u64; (order - val + 1).max(0) as usize];
        for &e in exponents {
            if e <= order {
                coeffs[(e - val) as usize] = (coeffs[(e - val) as usize] + 1) % p;
            }
        }
        Self::from_parts(var, p, val, order, coeffs)
    }

    pub fn var(&self) -> Var {
        self.var
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn order(&self) -> i64 {
        self.order
    }

    pub fn valuation(&self) -> Option<i64> {
        if self.coeffs.is_empty() { None } else { Some(self.val) }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, exponent: i64) -> u64 {
        assert!(
            exponent <= self.order,
            "coefficient of {}^{} requested past truncation order {}",
            self.var,
            exponent,
            self.order
        );
        if exponent < self.val {
            0
        } else {
            self.coeffs[(exponent - self.val) as usize]
        }
    }

    /// Exponents carrying a nonzero coefficient, in increasing order.
    pub fn support(&self) -> Vec<i64> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, _)| self.val + i as i64)
            .collect()
    }

    pub fn truncated(&self, order: i64) -> Self {
        assert!(
            order <= self.order,
            "cannot extend a series tracked through {} to order {}",
            self.order,
            order
        );
        Self::from_parts(self.var, self.p, self.val, order, self.coeffs.clone())
    }

    fn assert_compatible(&self, other: &Self, op: &str) {
        assert_eq!(self.var, other.var, "{op} of series in different variables");
        assert_eq!(self.p, other.p, "{op} of series over different primes");
    }

    /// First exponent `<= through` where the two series differ, if any.
    pub fn first_mismatch(&self, other: &Self, through: i64) -> Option<i64> {
        self.assert_compatible(other, "comparison");
        assert!(
            self.order >= through && other.order >= through,
            "comparison through {} exceeds a truncation order",
            through
        );
        let lo = self.val.min(other.val).min(through);
        (lo..=through).find(|&k| self.coeff(k) != other.coeff(k))
    }

    pub fn add(&self, rhs: &Self) -> Self {
        self.assert_compatible(rhs, "addition");
        let order = self.order.min(rhs.order);
        let val = self.val.min(rhs.val).min(order + 1);
        let mut coeffs = vec![0u64; (order - val + 1).max(0) as usize];
        for (i, &c) in self.coeffs.iter().enumerate() {
            let k = self.val + i as i64;
            if k <= order {
                coeffs[(k - val) as usize] = (coeffs[(k - val) as usize] + c) % self.p;
            }
        }
        for (i, &c) in rhs.coeffs.iter().enumerate() {
            let k = rhs.val + i as i64;
            if k <= order {
                coeffs[(k - val) as usize] = (coeffs[(k - val) as usize] + c) % self.p;
            }
        }
        Self::from_parts(self.var, self.p, val, order, coeffs)
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Self {
        let coeffs = self.coeffs.iter().map(|&c| (self.p - c) % self.p).collect();
        Self::from_parts(self.var, self.p, self.val, self.order, coeffs)
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        self.assert_compatible(rhs, "multiplication");
        let order = (self.order + rhs.val).min(rhs.order + self.val);
        if self.is_zero() || rhs.is_zero() {
            return Self::zero(self.var, self.p, order);
        }
        let val = self.val + rhs.val;
        let m = self.p as u128;
        let mut coeffs = vec![0u64; (order - val + 1).max(0) as usize];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                if (i + j) as i64 > order - val {
                    break;
                }
                let cur = coeffs[i + j] as u128;
                coeffs[i + j] = ((cur + a as u128 * b as u128) % m) as u64;
            }
        }
        Self::from_parts(self.var, self.p, val, order, coeffs)
    }

    /// Multiplicative inverse (relative precision preserved, like the
    /// rational `recip`).
    pub fn recip(&self) -> Self {
        assert!(!self.is_zero(), "recip of a series that is zero through its order");
        let rel = (self.order - self.val) as usize;
        let m = self.p as u128;
        let u0_inv = modinv(self.coeffs[0], self.p);
        let mut inv = vec![0u64; rel + 1];
        inv[0] = u0_inv;
        for n in 1..=rel {
            let mut acc: u128 = 0;
            for k in 1..=n {
                acc = (acc + self.coeffs[k] as u128 * inv[n - k] as u128) % m;
            }
            inv[n] = ((m - acc) % m * u0_inv as u128 % m) as u64;
        }
        Self::from_parts(self.var, self.p, -self.val, -self.val + rel as i64, inv)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.var, self.p, self.order.max(0));
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Termwise d/dvar; exponents divisible by p drop out.
    pub fn derive(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, &c)| {
                let k = (self.val + i as i64).rem_euclid(self.p as i64) as u64;
                c * k % self.p
            })
            .collect();
        Self::from_parts(self.var, self.p, self.val - 1, self.order - 1, coeffs)
    }

    /// Substitute `var -> var^p` (the Frobenius on F_p[[var]] acts this way
    /// on p-th powers: `f(var)^p = f(var^p)`).
    pub fn frobenius(&self) -> Self {
        let order = self.order * self.p as i64 + (self.p as i64 - 1);
        let val = self.val * self.p as i64;
        let mut coeffs = vec![0u64; (order - val + 1).max(0) as usize];
        for (i, &c) in self.coeffs.iter().enumerate() {
            coeffs[i * self.p as usize] = c;
        }
        Self::from_parts(self.var, self.p, val, order, coeffs)
    }

    /// Inverse of [`frobenius`](Self::frobenius): the series h with
    /// `h(var^p) = self`, i.e. the p-th root when `self` is a p-th power.
    /// Returns `None` unless every exponent in the support is divisible
    /// by p. The result is tracked through `floor(order / p)`.
    pub fn inverse_frobenius(&self) -> Option<Self> {
        let p = self.p as i64;
        if self.support().iter().any(|e| e.rem_euclid(p) != 0) {
            return None;
        }
        let order = self.order.div_euclid(p);
        if self.is_zero() {
            return Some(Self::zero(self.var, self.p, order));
        }
        // The support check already forces p | val.
        let val = self.val.div_euclid(p);
        let coeffs = (val..=order).map(|k| self.coeff(k * p)).collect();
        Some(Self::from_parts(self.var, self.p, val, order, coeffs))
    }
}

impl fmt::Display for ModPSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0 + O({}^{}) (mod {})", self.var, self.order + 1, self.p);
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let k = self.val + i as i64;
            match (k, c) {
                (0, c) => write!(f, "{c}")?,
                (1, 1) => write!(f, "{}", self.var)?,
                (1, c) => write!(f, "{c}*{}", self.var)?,
                (k, 1) => write!(f, "{}^{}", self.var, k)?,
                (k, c) => write!(f, "{c}*{}^{}", self.var, k)?,
            }
        }
        write!(f, " + O({}^{}) (mod {})", self.var, self.order + 1, self.p)
    }
}

impl Serialize for ModPSeries {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("ModPSeries", 5)?;
        st.serialize_field("variable", self.var.as_str())?;
        st.serialize_field("p", &self.p)?;
        st.serialize_field("valuation", &self.val)?;
        st.serialize_field("order", &self.order)?;
        st.serialize_field("coeffs", &self.coeffs)?;
        st.end()
    }
}
