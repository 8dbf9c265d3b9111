//! Truncated Laurent series over exact rationals.
//!
//! A [`TruncatedSeries`] stores the coefficients of a formal Laurent series
//! from its valuation (lowest tracked exponent, possibly negative) up to an
//! explicit truncation `order`. Every operation propagates the order under
//! the *minimum effective order* rule: the result is tracked exactly as far
//! as its inputs mathematically determine it, and no further. Reading a
//! coefficient beyond the truncation order is a bug, not a zero, and panics.
//!
//! Arithmetic is exact; there is no floating point anywhere in this module.
//! The analytic operations (`exp`, `log`, `sqrt`, compositional inverse) are
//! coefficient recurrences over Q, so an identity checked through order N is
//! proved through order N, not approximated.

use crate::modp::ModPSeries;
use crate::rational::{self, padic_val, pow_i64, PadicVal, Rational};
use num_traits::{One, Signed, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use thiserror::Error;

/// Formal variable tag. Series in different variables never mix silently.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Var {
    X,
    W,
    C,
    H,
    Q,
    Z,
    Eps,
    /// Local parameter 1 - x at the puncture 1.
    U,
    /// Local parameter 1/x at the puncture at infinity.
    T,
    /// The Bott class symbol qv (a single degree -2 generator).
    Qv,
}

impl Var {
    pub fn as_str(self) -> &'static str {
        match self {
            Var::X => "x",
            Var::W => "w",
            Var::C => "c",
            Var::H => "h",
            Var::Q => "q",
            Var::Z => "z",
            Var::Eps => "eps",
            Var::U => "u",
            Var::T => "t",
            Var::Qv => "qv",
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeriesError {
    #[error("coefficient of {var}^{exponent} is not p-integral: v_{prime} = {valuation} < 0")]
    NonIntegralCoefficient {
        var: Var,
        exponent: i64,
        valuation: i64,
        prime: u64,
    },
    #[error("division by a series that is zero through its truncation order")]
    DivisionByZeroSeries,
    #[error("sqrt needs an even valuation; argument has valuation {valuation}")]
    OddValuationSqrt { valuation: i64 },
    #[error("sqrt needs a leading coefficient that is a rational square; got {leading}")]
    NonSquareLeadingCoefficient { leading: String },
}

/// Dense truncated Laurent series: coefficients for exponents
/// `val ..= order`, with `coeffs[i]` the coefficient of `var^(val + i)`.
///
/// Invariants, restored by every constructor and operation:
/// - `coeffs.len() == order - val + 1`, and
/// - `coeffs[0] != 0`, **unless** the series is identically zero through
///   `order`, which is canonicalized to empty `coeffs` with
///   `val == order + 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedSeries {
    var: Var,
    val: i64,
    order: i64,
    coeffs: Vec<Rational>,
}

impl TruncatedSeries {
    fn build(var: Var, mut val: i64, order: i64, mut coeffs: Vec<Rational>) -> Self {
        // Clip anything tracked past the order, pad the dense window
        // val..=order with zeros, then strip leading zeros.
        let keep = (order - val + 1).max(0) as usize;
        coeffs.truncate(keep);
        coeffs.resize(keep, Rational::zero());
        let lead = coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead > 0 {
            coeffs.drain(..lead);
            val += lead as i64;
        }
        if coeffs.is_empty() {
            val = order + 1;
        }
        debug_assert_eq!(coeffs.len() as i64, (order - val + 1).max(0));
        TruncatedSeries { var, val, order, coeffs }
    }

    /// The zero series, tracked through `order`.
    pub fn zero(var: Var, order: i64) -> Self {
        Self::build(var, order + 1, order, Vec::new())
    }

    /// `coeff * var^exponent`, tracked through `order`.
    pub fn monomial(var: Var, coeff: Rational, exponent: i64, order: i64) -> Self {
        assert!(exponent <= order, "monomial exponent past truncation order");
        Self::build(var, exponent, order, vec![coeff])
    }

    pub fn constant(var: Var, c: Rational, order: i64) -> Self {
        Self::monomial(var, c, 0, order)
    }

    pub fn one(var: Var, order: i64) -> Self {
        Self::constant(var, Rational::one(), order)
    }

    /// The identity series `var`, tracked through `order`.
    pub fn identity(var: Var, order: i64) -> Self {
        Self::monomial(var, Rational::one(), 1, order)
    }

    /// Series from explicit coefficients starting at exponent `val`;
    /// the order is `val + coeffs.len() - 1`. Trailing zeros are data
    /// (they are inside the tracked window), leading zeros are stripped.
    pub fn from_coefficients(var: Var, val: i64, coeffs: Vec<Rational>) -> Self {
        assert!(!coeffs.is_empty(), "empty coefficient list has no order");
        let order = val + coeffs.len() as i64 - 1;
        Self::build(var, val, order, coeffs)
    }

    /// The geometric series 1 + var + var^2 + ... through `order`.
    pub fn geometric(var: Var, order: i64) -> Self {
        assert!(order >= 0);
        Self::from_coefficients(var, 0, vec![Rational::one(); order as usize + 1])
    }

    pub fn var(&self) -> Var {
        self.var
    }

    /// Truncation order: coefficients are tracked through `var^order`.
    pub fn order(&self) -> i64 {
        self.order
    }

    /// Lowest exponent with a nonzero coefficient; `None` for the zero series.
    pub fn valuation(&self) -> Option<i64> {
        if self.coeffs.is_empty() { None } else { Some(self.val) }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of `var^exponent`. Exponents below the valuation are 0;
    /// exponents past the truncation order are untracked and panic.
    pub fn coeff(&self, exponent: i64) -> Rational {
        assert!(
            exponent <= self.order,
            "coefficient of {}^{} requested past truncation order {}",
            self.var,
            exponent,
            self.order
        );
        if exponent < self.val {
            Rational::zero()
        } else {
            self.coeffs[(exponent - self.val) as usize].clone()
        }
    }

    /// Coefficients from the valuation through the order, in exponent order.
    pub fn coefficients(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Same series, relabeled in another variable (e.g. after substitution).
    pub fn with_var(mut self, var: Var) -> Self {
        self.var = var;
        self
    }

    /// Lower the truncation order. Raising it would invent information and
    /// is rejected.
    pub fn truncated(&self, order: i64) -> Self {
        assert!(
            order <= self.order,
            "cannot extend a series tracked through {} to order {}",
            self.order,
            order
        );
        Self::build(self.var, self.val, order, self.coeffs.clone())
    }

    /// Exact multiplication by `var^k` (shifts both valuation and order).
    pub fn shift_exponent(&self, k: i64) -> Self {
        Self::build(self.var, self.val + k, self.order + k, self.coeffs.clone())
    }

    /// Replace one coefficient (the fault-injection hook used by the
    /// checkers' `--perturb` mode).
    pub fn with_coefficient(&self, exponent: i64, c: Rational) -> Self {
        assert!(exponent <= self.order, "perturbation past truncation order");
        let val = self.val.min(exponent);
        let mut coeffs = vec![Rational::zero(); (self.order - val + 1) as usize];
        for (i, a) in self.coeffs.iter().enumerate() {
            coeffs[(self.val - val) as usize + i] = a.clone();
        }
        coeffs[(exponent - val) as usize] = c;
        Self::build(self.var, val, self.order, coeffs)
    }

    /// Substitute `var -> a * var` (the coefficient of var^k picks up a^k).
    /// `a` must be nonzero so negative exponents stay meaningful.
    pub fn scale_var(&self, a: &Rational) -> Self {
        assert!(!a.is_zero(), "scale_var by zero");
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| c * pow_i64(a, self.val + i as i64))
            .collect();
        Self::build(self.var, self.val, self.order, coeffs)
    }

    fn assert_same_var(&self, other: &Self, op: &str) {
        assert_eq!(
            self.var, other.var,
            "{op} of series in different variables ({} vs {})",
            self.var, other.var
        );
    }

    /// First exponent `<= through` where the two series differ, if any.
    /// Both series must be tracked at least through `through`.
    pub fn first_mismatch(&self, other: &Self, through: i64) -> Option<i64> {
        self.assert_same_var(other, "comparison");
        assert!(
            self.order >= through && other.order >= through,
            "comparison through {} exceeds a truncation order",
            through
        );
        let lo = self.val.min(other.val).min(through);
        (lo..=through).find(|&k| self.coeff(k) != other.coeff(k))
    }

    /// Multiply every coefficient by a fixed rational (scalar action).
    pub fn scale_coeffs(&self, a: &Rational) -> Self {
        if a.is_zero() {
            return Self::zero(self.var, self.order);
        }
        Self::build(
            self.var,
            self.val,
            self.order,
            self.coeffs.iter().map(|c| c * a).collect(),
        )
    }

    /// Multiplicative inverse. The relative precision (number of tracked
    /// coefficients past the leading one) is preserved, so the order is
    /// `order - 2*valuation`.
    pub fn recip(&self) -> Self {
        assert!(!self.is_zero(), "recip of a series that is zero through its order");
        let rel = (self.order - self.val) as usize;
        let u0 = &self.coeffs[0];
        let mut inv: Vec<Rational> = Vec::with_capacity(rel + 1);
        inv.push(u0.clone().recip());
        for n in 1..=rel {
            let mut acc = Rational::zero();
            for k in 1..=n {
                acc += &self.coeffs[k] * &inv[n - k];
            }
            inv.push(-acc / u0);
        }
        Self::build(self.var, -self.val, -self.val + rel as i64, inv)
    }

    /// Integer power; negative exponents go through `recip`.
    pub fn pow(&self, e: i64) -> Self {
        if e == 0 {
            return Self::one(self.var, self.order);
        }
        let base = if e < 0 { self.recip() } else { self.clone() };
        let mut acc = base.clone();
        for _ in 1..e.abs() {
            acc = &acc * &base;
        }
        acc
    }

    /// Termwise derivative d/dvar. Valuation drops by one, and so does the
    /// tracked order (the order-N coefficient only informs exponent N-1).
    pub fn derive(&self) -> Self {
        if self.is_zero() {
            return Self::zero(self.var, self.order - 1);
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| c * Rational::from_integer((self.val + i as i64).into()))
            .collect();
        Self::build(self.var, self.val - 1, self.order - 1, coeffs)
    }

    /// Composition `self(inner)`: substitute `inner` for this series'
    /// variable. `inner` must have valuation >= 1 so every coefficient of
    /// the result is a finite sum. The result lives in `inner`'s variable.
    ///
    /// Order propagation: each power inner^k is tracked through
    /// `inner.order + (k-1)*m` (m = inner valuation), inner^(-j) through
    /// `-j*m + inner.order - m`, and the first untracked outer coefficient
    /// would enter at exponent `(outer.order + 1) * m`. The result order is
    /// the minimum over the contributing terms.
    pub fn compose(&self, inner: &Self) -> Self {
        let m = inner
            .valuation()
            .expect("composition with an inner series that is zero through its order");
        assert!(m >= 1, "composition needs inner valuation >= 1, got {m}");
        let tail_cap = (self.order + 1) * m - 1;
        // Nothing past tail_cap survives the final truncation, so the
        // power ladder is clamped there as it grows; every accumulated
        // term still carries its own (smaller) trust window.
        let big = inner.order.max(tail_cap);

        let mut acc = Self::zero(inner.var, big);
        if !self.is_zero() {
            if self.val <= 0 && self.order >= 0 && !self.coeff(0).is_zero() {
                acc = &acc + &Self::constant(inner.var, self.coeff(0), big);
            }
            let mut gpow = Self::one(inner.var, big);
            for k in 1..=self.order.max(0) {
                gpow = &gpow * inner;
                if gpow.order() > tail_cap {
                    gpow = gpow.truncated(tail_cap);
                }
                let a = self.coeff(k);
                if !a.is_zero() {
                    acc = &acc + &gpow.scale_coeffs(&a);
                }
            }
            if self.val < 0 {
                // No clamping here: ginv has negative valuation, so high
                // exponents of gp still feed coefficients below tail_cap.
                let ginv = inner.recip();
                let mut gp = ginv.clone();
                for j in 1..=(-self.val) {
                    if j > 1 {
                        gp = &gp * &ginv;
                    }
                    let a = self.coeff(-j);
                    if !a.is_zero() {
                        acc = &acc + &gp.scale_coeffs(&a);
                    }
                }
            }
        }
        let n = acc.order().min(tail_cap);
        acc.truncated(n)
    }

    /// Compositional inverse: the series g (relabeled in `out_var`) with
    /// `self(g) = id`. Needs valuation exactly 1. Newton iteration with
    /// precision doubling on g <- g - (self(g) - id)/self'(g).
    pub fn invert_comp(&self, out_var: Var) -> Self {
        assert_eq!(
            self.valuation(),
            Some(1),
            "compositional inverse needs valuation exactly 1"
        );
        let n = self.order;
        let a1 = self.coeff(1);
        let mut g = Self::monomial(self.var, a1.recip(), 1, 1);
        let df = self.derive();
        let mut cur = 1i64;
        while cur < n {
            cur = (cur * 2).min(n);
            // Pad the current approximation out to the new working order;
            // the Newton step corrects everything past the old one.
            let mut padded = g.coeffs.clone();
            padded.resize((cur - g.val + 1) as usize, Rational::zero());
            let gk = Self::build(self.var, g.val, cur, padded);
            let fg = self.truncated(cur).compose(&gk);
            let err = &fg - &Self::identity(self.var, cur);
            if err.is_zero() {
                g = gk;
                continue;
            }
            let slope = df.truncated(cur - 1).compose(&gk.truncated(cur - 1));
            let step = &err / &slope;
            g = &gk - &step.truncated(cur);
        }
        g.with_var(out_var)
    }

    /// exp of a series with valuation >= 1, via the ODE recurrence
    /// (exp f)' = f' exp f. Preserves the truncation order.
    pub fn exp(&self) -> Self {
        if self.is_zero() {
            return Self::one(self.var, self.order);
        }
        assert!(self.val >= 1, "exp needs valuation >= 1, got {}", self.val);
        let n = self.order;
        let mut y = vec![Rational::zero(); n as usize + 1];
        y[0] = Rational::one();
        for k in 1..=n as usize {
            let mut acc = Rational::zero();
            for j in 1..=k {
                if (j as i64) < self.val || (j as i64) > self.order {
                    continue;
                }
                let fj = &self.coeffs[j - self.val as usize];
                if !fj.is_zero() {
                    acc += fj * Rational::from_integer((j as i64).into()) * &y[k - j];
                }
            }
            y[k] = acc / Rational::from_integer((k as i64).into());
        }
        Self::build(self.var, 0, n, y)
    }

    /// log of a series with constant term exactly 1, via
    /// L_n = f_n - (1/n) sum_{k<n} k L_k f_(n-k). Preserves the order.
    pub fn log(&self) -> Self {
        assert_eq!(self.valuation(), Some(0), "log needs constant term 1");
        assert!(self.coeffs[0].is_one(), "log needs constant term exactly 1");
        let n = self.order;
        let mut l = vec![Rational::zero(); n as usize + 1];
        for k in 1..=n as usize {
            let mut acc = Rational::zero();
            for j in 1..k {
                if l[j].is_zero() {
                    continue;
                }
                acc += &l[j] * Rational::from_integer((j as i64).into()) * self.coeff((k - j) as i64);
            }
            l[k] = self.coeff(k as i64) - acc / Rational::from_integer((k as i64).into());
        }
        Self::build(self.var, 0, n, l)
    }

    /// Square root, branch fixed by a positive leading coefficient. Needs
    /// an even valuation and a leading coefficient that is a square in Q.
    pub fn sqrt(&self) -> Result<Self, SeriesError> {
        assert!(!self.is_zero(), "sqrt of a series that is zero through its order");
        if self.val % 2 != 0 {
            return Err(SeriesError::OddValuationSqrt { valuation: self.val });
        }
        let s0 = rational::sqrt_exact(&self.coeffs[0]).ok_or_else(|| {
            SeriesError::NonSquareLeadingCoefficient {
                leading: rational::format_exact(&self.coeffs[0]),
            }
        })?;
        let rel = (self.order - self.val) as usize;
        let mut s: Vec<Rational> = Vec::with_capacity(rel + 1);
        s.push(s0.clone());
        let two_s0 = &s0 + &s0;
        for n in 1..=rel {
            let mut acc = Rational::zero();
            for k in 1..n {
                acc += &s[k] * &s[n - k];
            }
            s.push((&self.coeffs[n] - acc) / &two_s0);
        }
        let e = self.val / 2;
        Ok(Self::build(self.var, e, e + rel as i64, s))
    }

    /// v_p of each tracked coefficient, paired with its exponent
    /// (`Infinite` for interior zeros).
    pub fn padic_profile(&self, p: u64) -> Vec<(i64, PadicVal)> {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| (self.val + i as i64, padic_val(c, p)))
            .collect()
    }

    /// Reduce coefficientwise modulo a prime. Fails on the first
    /// coefficient with negative p-adic valuation, naming it.
    pub fn reduce_mod_p(&self, p: u64) -> Result<ModPSeries, SeriesError> {
        let mut residues = Vec::with_capacity(self.coeffs.len());
        for (i, c) in self.coeffs.iter().enumerate() {
            let exponent = self.val + i as i64;
            match rational::residue_mod_p(c, p) {
                Some(r) => residues.push(r),
                None => {
                    return Err(SeriesError::NonIntegralCoefficient {
                        var: self.var,
                        exponent,
                        valuation: padic_val(c, p).finite().unwrap(),
                        prime: p,
                    })
                }
            }
        }
        Ok(ModPSeries::from_parts(self.var, p, self.val, self.order, residues))
    }

    /// Numerical evaluation at a point.
    pub fn eval_f64(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            let k = self.val + i as i64;
            acc += rational::to_f64(c) * x.powi(k as i32);
        }
        acc
    }
}

impl Add for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn add(self, rhs: Self) -> TruncatedSeries {
        self.assert_same_var(rhs, "addition");
        let order = self.order.min(rhs.order);
        let val = self.val.min(rhs.val).min(order + 1);
        let mut coeffs = vec![Rational::zero(); (order - val + 1).max(0) as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            let k = self.val + i as i64;
            if k <= order {
                coeffs[(k - val) as usize] += c;
            }
        }
        for (i, c) in rhs.coeffs.iter().enumerate() {
            let k = rhs.val + i as i64;
            if k <= order {
                coeffs[(k - val) as usize] += c;
            }
        }
        TruncatedSeries::build(self.var, val, order, coeffs)
    }
}

impl Sub for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn sub(self, rhs: Self) -> TruncatedSeries {
        self + &-rhs
    }
}

impl Neg for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn neg(self) -> TruncatedSeries {
        TruncatedSeries::build(
            self.var,
            self.val,
            self.order,
            self.coeffs.iter().map(|c| -c).collect(),
        )
    }
}

impl Mul for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn mul(self, rhs: Self) -> TruncatedSeries {
        self.assert_same_var(rhs, "multiplication");
        // Tracked through min(Na + vb, Nb + va): an untracked tail in
        // either factor first pollutes the product there.
        let order = (self.order + rhs.val).min(rhs.order + self.val);
        if self.is_zero() || rhs.is_zero() {
            return TruncatedSeries::zero(self.var, order);
        }
        let val = self.val + rhs.val;
        let mut coeffs = vec![Rational::zero(); (order - val + 1).max(0) as usize];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if (i + j) as i64 > order - val {
                    break;
                }
                if !b.is_zero() {
                    coeffs[i + j] += a * b;
                }
            }
        }
        TruncatedSeries::build(self.var, val, order, coeffs)
    }
}

impl Div for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn div(self, rhs: Self) -> TruncatedSeries {
        assert!(!rhs.is_zero(), "{}", SeriesError::DivisionByZeroSeries);
        self * &rhs.recip()
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0 + O({}^{})", self.var, self.order + 1);
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let k = self.val + i as i64;
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
            if k == 0 {
                write!(f, "{coeff_str}")?;
            } else {
                let var_str = if k == 1 {
                    self.var.to_string()
                } else {
                    format!("{}^{}", self.var, k)
                };
                if mag.is_one() {
                    write!(f, "{var_str}")?;
                } else {
                    write!(f, "{coeff_str}*{var_str}")?;
                }
            }
        }
        write!(f, " + O({}^{})", self.var, self.order + 1)
    }
}

impl Serialize for TruncatedSeries {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("TruncatedSeries", 4)?;
        st.serialize_field("variable", self.var.as_str())?;
        st.serialize_field("valuation", &self.val)?;
        st.serialize_field("order", &self.order)?;
        let coeffs: Vec<String> = self.coeffs.iter().map(rational::format_exact).collect();
        st.serialize_field("coeffs", &coeffs)?;
        st.end()
    }
}
