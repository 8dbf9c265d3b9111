//! Two-variable expansions truncated by total degree.
//!
//! `BivariateSeries<C>` tracks the coefficients of z0^i z1^j for
//! i + j <= order, over any coefficient ring C (exact rationals, or
//! polynomials in a formal exponent b for symbolic product rules). That is
//! exactly what a one-variable formula needs when its argument becomes a
//! two-variable group law like z0 + z1 - z0*z1.

use num_traits::{One, Zero};
use std::ops::Sub;

/// Dense triangle of coefficients: `rows[i][j]` multiplies z0^i z1^j,
/// stored for i + j <= order.
#[derive(Debug, Clone, PartialEq)]
pub struct BivariateSeries<C> {
    order: i64,
    rows: Vec<Vec<C>>,
}

impl<C> BivariateSeries<C>
where
    C: Clone + PartialEq + Zero + One + Sub<Output = C>,
{
    fn empty(order: i64) -> Self {
        assert!(order >= 0, "total-degree order must be nonnegative");
        let n = order as usize;
        let rows = (0..=n).map(|i| vec![C::zero(); n + 1 - i]).collect();
        BivariateSeries { order, rows }
    }

    pub fn zero(order: i64) -> Self {
        Self::empty(order)
    }

    pub fn constant(c: C, order: i64) -> Self {
        let mut s = Self::empty(order);
        s.rows[0][0] = c;
        s
    }

    pub fn z0(order: i64) -> Self {
        assert!(order >= 1, "z0 is untracked at total degree 0");
        let mut s = Self::empty(order);
        s.rows[1][0] = C::one();
        s
    }

    pub fn z1(order: i64) -> Self {
        assert!(order >= 1, "z1 is untracked at total degree 0");
        let mut s = Self::empty(order);
        s.rows[0][1] = C::one();
        s
    }

    pub fn order(&self) -> i64 {
        self.order
    }

    /// Coefficient of z0^i z1^j; total degrees past the order are
    /// untracked and panic.
    pub fn coeff(&self, i: i64, j: i64) -> C {
        assert!(i >= 0 && j >= 0, "negative exponent in a power series");
        assert!(
            i + j <= self.order,
            "coefficient of z0^{i} z1^{j} requested past total-degree order {}",
            self.order
        );
        self.rows[i as usize][j as usize].clone()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(|row| row.iter().all(Zero::is_zero))
    }

    pub fn add(&self, rhs: &Self) -> Self {
        self.zip_with(rhs, |a, b| a + b)
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.zip_with(rhs, |a, b| a - b)
    }

    fn zip_with(&self, rhs: &Self, f: impl Fn(C, C) -> C) -> Self {
        assert_eq!(self.order, rhs.order, "total-degree orders differ");
        let mut out = Self::empty(self.order);
        for i in 0..self.rows.len() {
            for j in 0..self.rows[i].len() {
                out.rows[i][j] = f(self.rows[i][j].clone(), rhs.rows[i][j].clone());
            }
        }
        out
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.order, rhs.order, "total-degree orders differ");
        let n = self.order as usize;
        let mut out = Self::empty(self.order);
        for (i, row) in self.rows.iter().enumerate() {
            for (j, a) in row.iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                for (k, brow) in rhs.rows.iter().enumerate() {
                    if i + j + k > n {
                        break;
                    }
                    for (l, b) in brow.iter().enumerate() {
                        if i + j + k + l > n {
                            break;
                        }
                        let cur = out.rows[i + k][j + l].clone();
                        out.rows[i + k][j + l] = cur + a.clone() * b.clone();
                    }
                }
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::constant(C::one(), self.order);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Horner evaluation of sum_k coeffs[k] * arg^k. The argument must have
    /// no constant term, so the truncated triangle is exact: terms with
    /// k > order cannot reach tracked total degrees.
    pub fn eval_poly(coeffs: &[C], arg: &Self) -> Self {
        assert!(
            arg.rows[0][0].is_zero(),
            "polynomial evaluation needs an argument without constant term"
        );
        let mut acc = Self::zero(arg.order);
        let hi = coeffs.len().min(arg.order as usize + 1);
        for c in coeffs[..hi].iter().rev() {
            acc = acc.mul(arg);
            if !c.is_zero() {
                acc = acc.add(&Self::constant(c.clone(), arg.order));
            }
        }
        acc
    }
}
