//! Boundary bookkeeping for the completed circle-equivariant coefficient
//! ring.
//!
//! The localized ring Z[k, 1/k, 1/(1-k)] maps into integer Laurent series
//! via q = 1 - 1/k (equivalently k = 1/(1-q)), and into rational power
//! series via the Chern character k = e^c. The quotient of Z((q)) by its
//! regular part Z[[q]] is free on a binomial basis binom(b, j); the
//! `boundary` map writes the class of a Laurent series in that basis
//! through a triangular integer table.
//!
//! The table is pinned down only by its diagonal, (-1)^k * k!. We realize
//! the unique normalization for which the image of q^(-k) is the
//! functional m |-> (-m)^k, namely Q[k][j] = (-1)^k * S(k, j) * j! with S
//! the Stirling numbers of the second kind, and keep the choice pluggable
//! behind [`BoundaryNormalization`]; reports that depend on it should say
//! so.

use crate::punctured::{IntPoly, PrfError, PuncturedRationalFunction as Prf};
use crate::rational::rat_int;
use crate::series::{TruncatedSeries, Var};
use crate::special::exp_ax;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TateError {
    #[error("coefficient of q^{exponent} is {value}, not an integer")]
    NonIntegerCoefficient { exponent: i64, value: String },
}

// ---------------------------------------------------------------------------
// Elements of the localized coefficient ring.
// ---------------------------------------------------------------------------

/// An element of Z[k, 1/k, 1/(1-k)], with poles confined to k in
/// {0, 1, infinity}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TateElement {
    f: Prf,
}

impl TateElement {
    pub fn new(f: Prf) -> Self {
        TateElement { f }
    }

    /// The coordinate k itself.
    pub fn kappa() -> Self {
        Self::new(Prf::x())
    }

    /// q = 1 - 1/k = (k - 1)/k, the uniformizer of the completion.
    pub fn q() -> Self {
        Self::new(Prf::new(IntPoly::from_i64(&[-1, 1]), 1, 0))
    }

    pub fn one() -> Self {
        Self::new(Prf::one())
    }

    pub fn constant(c: i64) -> Self {
        Self::new(Prf::constant(c))
    }

    pub fn as_function(&self) -> &Prf {
        &self.f
    }

    pub fn recip(&self) -> Result<Self, PrfError> {
        self.f.recip().map(Self::new)
    }

    pub fn pow(&self, e: i64) -> Result<Self, PrfError> {
        self.f.pow(e).map(Self::new)
    }

    /// Integer Laurent expansion under k = 1/(1-q), tracked through
    /// `order`.
    pub fn expand_in_q(&self, order: i64) -> TruncatedSeries {
        let image = Prf::new(IntPoly::one(), 0, 1); // 1/(1-q)
        self.f
            .substitute(&image)
            .expect("1/(1-q) and its 1-complement are units")
            .expand_at(crate::punctured::Puncture::Zero, order)
            .with_var(Var::Q)
    }

    /// Rational expansion under the Chern character k = e^c.
    pub fn chern_character(&self, order: i64) -> TruncatedSeries {
        let e = exp_ax(&rat_int(1), order).with_var(Var::C);
        self.f
            .eval_at_series(&e)
            .expect("e^c and 1 - e^c are invertible series")
    }
}

impl Add for &TateElement {
    type Output = TateElement;
    fn add(self, rhs: Self) -> TateElement {
        TateElement::new(&self.f + &rhs.f)
    }
}

impl Sub for &TateElement {
    type Output = TateElement;
    fn sub(self, rhs: Self) -> TateElement {
        TateElement::new(&self.f - &rhs.f)
    }
}

impl Mul for &TateElement {
    type Output = TateElement;
    fn mul(self, rhs: Self) -> TateElement {
        TateElement::new(&self.f * &rhs.f)
    }
}

impl Neg for &TateElement {
    type Output = TateElement;
    fn neg(self) -> TateElement {
        TateElement::new(-&self.f)
    }
}

impl fmt::Display for TateElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.f)
    }
}

// ---------------------------------------------------------------------------
// Graded Bott expansion.
// ---------------------------------------------------------------------------

/// The geometric expansion of 1/(1 - qv) in the combined symbol qv.
pub fn bott_graded_expand(order: i64) -> TruncatedSeries {
    assert!(order >= 0);
    TruncatedSeries::geometric(Var::Qv, order)
}

/// Cohomological degree of the (qv)^k term: v sits in degree -2 and q in
/// degree 0.
pub fn bott_degree(k: i64) -> i64 {
    -2 * k
}

// ---------------------------------------------------------------------------
// Stirling numbers and the binomial basis.
// ---------------------------------------------------------------------------

/// Stirling number of the second kind, S(k, j).
pub fn stirling2(k: usize, j: usize) -> BigInt {
    assert!(j <= k);
    stirling_row(k)[j].clone()
}

/// Row k of the Stirling triangle: S(k, 0) ..= S(k, k).
fn stirling_row(k: usize) -> Vec<BigInt> {
    let mut row = vec![BigInt::one()]; // S(0, 0) = 1
    for n in 1..=k {
        let mut next = vec![BigInt::zero(); n + 1];
        for j in 1..=n {
            let carry = if j < n { &row[j] * BigInt::from(j) } else { BigInt::zero() };
            next[j] = carry + &row[j - 1];
        }
        row = next;
    }
    row
}

fn factorial_big(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// Binomial coefficient binom(m, j) for integer m >= 0.
fn binom_int(m: i64, j: usize) -> BigInt {
    assert!(m >= 0);
    if (j as i64) > m {
        return BigInt::zero();
    }
    let mut c = BigInt::one();
    for i in 0..j {
        c = c * BigInt::from(m - i as i64) / BigInt::from(i as i64 + 1);
    }
    c
}

/// An integer combination sum_j a_j * binom(b, j) — the integral form of
/// the homology of the classifying space, and the codomain of `boundary`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinomBasisPoly {
    coeffs: Vec<BigInt>,
}

impl BinomBasisPoly {
    fn build(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        BinomBasisPoly { coeffs }
    }

    pub fn from_coefficients(coeffs: Vec<BigInt>) -> Self {
        Self::build(coeffs)
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::build(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        BinomBasisPoly { coeffs: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Coefficient of binom(b, j).
    pub fn coeff(&self, j: usize) -> BigInt {
        self.coeffs.get(j).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn coefficients(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Self::build((0..n).map(|j| self.coeff(j) + rhs.coeff(j)).collect())
    }

    pub fn scale(&self, a: &BigInt) -> Self {
        Self::build(self.coeffs.iter().map(|c| c * a).collect())
    }

    /// Value at a nonnegative integer b = m.
    pub fn eval(&self, m: i64) -> BigInt {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(j, a)| a * binom_int(m, j))
            .sum()
    }
}

impl fmt::Display for BinomBasisPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (j, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let mag = a.abs();
            if first {
                if a.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if a.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if j == 0 {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "binom(b,{j})")?;
            } else {
                write!(f, "{mag}*binom(b,{j})")?;
            }
        }
        Ok(())
    }
}

impl Serialize for BinomBasisPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("BinomBasisPoly", 1)?;
        let coeffs: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        st.serialize_field("coeffs", &coeffs)?;
        st.end()
    }
}

/// Rewrite an integer polynomial in m (dense coefficients, constant
/// first) in the binomial basis, via m^k = sum_j S(k, j) j! binom(m, j).
pub fn basis_convert(poly_in_m: &[BigInt]) -> BinomBasisPoly {
    let mut acc = BinomBasisPoly::zero();
    for (k, c) in poly_in_m.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let srow = stirling_row(k);
        let term = BinomBasisPoly::build(
            srow.iter()
                .enumerate()
                .map(|(j, s)| s * factorial_big(j))
                .collect(),
        );
        acc = acc.add(&term.scale(c));
    }
    acc
}

// ---------------------------------------------------------------------------
// The boundary table and map.
// ---------------------------------------------------------------------------

/// A choice of integer rows Q[k][j] realizing the boundary on the
/// principal part. Any implementation must keep the diagonal anchored at
/// Q[k][k] = (-1)^k * k!; `QTable::new` enforces it.
pub trait BoundaryNormalization {
    /// Row k: the image of q^(-k), as coefficients of binom(b, j),
    /// j = 0..=k.
    fn row(&self, k: usize) -> Vec<BigInt>;

    /// Short name recorded in reports (the table is pinned by the
    /// diagonal only, so results are normalization-dependent).
    fn name(&self) -> &'static str;
}

/// Q[k][j] = (-1)^k * S(k, j) * j!: the unique normalization making the
/// image of q^(-k) act on integer points as m |-> (-m)^k.
pub struct StirlingNormalization;

impl BoundaryNormalization for StirlingNormalization {
    fn row(&self, k: usize) -> Vec<BigInt> {
        let srow = stirling_row(k);
        (0..=k)
            .map(|j| {
                let v = &srow[j] * factorial_big(j);
                if k % 2 == 1 {
                    -v
                } else {
                    v
                }
            })
            .collect()
    }

    fn name(&self) -> &'static str {
        "stirling"
    }
}

/// Triangular integer table Q[k][j], 0 <= j <= k <= depth, with the
/// diagonal anchor checked at construction.
pub struct QTable {
    rows: Vec<Vec<BigInt>>,
    normalization: &'static str,
}

impl QTable {
    pub fn new(depth: usize, norm: &dyn BoundaryNormalization) -> Self {
        let mut rows = Vec::with_capacity(depth + 1);
        for k in 0..=depth {
            let row = norm.row(k);
            assert_eq!(row.len(), k + 1, "row {k} must have {k} + 1 entries");
            let anchor = if k % 2 == 1 {
                -factorial_big(k)
            } else {
                factorial_big(k)
            };
            assert_eq!(row[k], anchor, "diagonal anchor violated at k = {k}");
            rows.push(row);
        }
        QTable {
            rows,
            normalization: norm.name(),
        }
    }

    /// The table in the Stirling normalization.
    pub fn standard(depth: usize) -> Self {
        Self::new(depth, &StirlingNormalization)
    }

    pub fn depth(&self) -> usize {
        self.rows.len() - 1
    }

    pub fn row(&self, k: usize) -> &[BigInt] {
        &self.rows[k]
    }

    pub fn normalization(&self) -> &'static str {
        self.normalization
    }
}

/// Image of row k of the standard table.
pub fn q_coefficients(k: usize) -> Vec<BigInt> {
    StirlingNormalization.row(k)
}

/// The boundary map on a Laurent series in q: the principal part
/// sum_{k>=1} a_{-k} q^(-k) maps to sum_k a_{-k} * (row k), and the
/// regular part Z[[q]] maps to zero. Principal-part coefficients must be
/// integers (the codomain is the integral binomial-basis lattice).
pub fn boundary(f: &TruncatedSeries) -> Result<BinomBasisPoly, TateError> {
    boundary_with(f, &StirlingNormalization)
}

pub fn boundary_with(
    f: &TruncatedSeries,
    norm: &dyn BoundaryNormalization,
) -> Result<BinomBasisPoly, TateError> {
    assert_eq!(f.var(), Var::Q, "boundary acts on Laurent series in q");
    let mut acc = BinomBasisPoly::zero();
    let Some(val) = f.valuation() else {
        return Ok(acc);
    };
    for k in 1..=(-val).max(0) {
        let a = f.coeff(-k);
        if a.is_zero() {
            continue;
        }
        if !a.is_integer() {
            return Err(TateError::NonIntegerCoefficient {
                exponent: -k,
                value: crate::rational::format_exact(&a),
            });
        }
        let row = BinomBasisPoly::build(norm.row(k as usize));
        acc = acc.add(&row.scale(&a.to_integer()));
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn q_expansions_of_the_generators() {
        // k = 1/(1-q): all coefficients 1.
        let k = TateElement::kappa().expand_in_q(8);
        for j in 0..=8 {
            assert_eq!(k.coeff(j), rat_int(1));
        }
        // 1 - k = -q/(1-q): -q - q^2 - ...
        let omk = &TateElement::one() - &TateElement::kappa();
        let s = omk.expand_in_q(8);
        assert_eq!(s.coeff(0), rat_int(0));
        for j in 1..=8 {
            assert_eq!(s.coeff(j), rat_int(-1));
        }
        // (1 - k)^(-1) = -1/q + 1 exactly: valuation -1 showing the
        // localization reaches Laurent tails.
        let inv = omk.recip().unwrap().expand_in_q(8);
        assert_eq!(inv.valuation(), Some(-1));
        assert_eq!(inv.coeff(-1), rat_int(-1));
        assert_eq!(inv.coeff(0), rat_int(1));
        for j in 1..=8 {
            assert_eq!(inv.coeff(j), rat_int(0));
        }
        // The q element expands to q itself.
        let q = TateElement::q().expand_in_q(8);
        assert_eq!(q.coeff(1), rat_int(1));
        assert_eq!(q.coeff(0), rat_int(0));
        assert_eq!(q.coeff(2), rat_int(0));
    }

    #[test]
    fn chern_character_openings() {
        // k -> e^c.
        let k = TateElement::kappa().chern_character(6);
        assert_eq!(k.coeff(0), rat_int(1));
        assert_eq!(k.coeff(1), rat_int(1));
        assert_eq!(k.coeff(2), rat(1, 2));
        assert_eq!(k.coeff(3), rat(1, 6));
        // q = 1 - 1/k -> 1 - e^(-c).
        let q = TateElement::q().chern_character(6);
        assert_eq!(q.coeff(0), rat_int(0));
        assert_eq!(q.coeff(1), rat_int(1));
        assert_eq!(q.coeff(2), rat(-1, 2));
        assert_eq!(q.coeff(3), rat(1, 6));
        // k * k^(-1) = 1.
        let unit = &TateElement::kappa() * &TateElement::kappa().recip().unwrap();
        let one = unit.chern_character(6);
        assert_eq!(one.coeff(0), rat_int(1));
        assert!(one.first_mismatch(&TruncatedSeries::one(Var::C, 6), 6).is_none());
    }

    #[test]
    fn bott_expansion_is_geometric() {
        let b = bott_graded_expand(3);
        assert_eq!(b.var(), Var::Qv);
        for k in 0..=3 {
            assert_eq!(b.coeff(k), rat_int(1));
        }
        // (1 - qv) * expansion = 1 through the order.
        let one_minus = &TruncatedSeries::one(Var::Qv, 3) - &TruncatedSeries::identity(Var::Qv, 3);
        let prod = &one_minus * &b;
        assert!(prod.first_mismatch(&TruncatedSeries::one(Var::Qv, 3), prod.order()).is_none());
        assert_eq!(bott_degree(5), -10);
    }

    #[test]
    fn stirling_and_basis_conversion() {
        assert_eq!(stirling2(3, 2), BigInt::from(3));
        assert_eq!(stirling2(4, 2), BigInt::from(7));
        for k in 1..=8 {
            assert_eq!(stirling2(k, 1), BigInt::one());
            assert_eq!(stirling2(k, k), BigInt::one());
        }
        // m^2 = 2 binom(m,2) + binom(m,1).
        let sq = basis_convert(&[BigInt::zero(), BigInt::zero(), BigInt::one()]);
        assert_eq!(sq, BinomBasisPoly::from_i64(&[0, 1, 2]));
        // 1 = binom(m,0).
        let one = basis_convert(&[BigInt::one()]);
        assert_eq!(one, BinomBasisPoly::from_i64(&[1]));
        // Round trip through evaluation: m^3 at m = 5.
        let mut m3 = vec![BigInt::zero(); 3];
        m3.push(BigInt::one());
        assert_eq!(basis_convert(&m3).eval(5), BigInt::from(125));
    }

    #[test]
    fn q_table_opening_rows() {
        assert_eq!(q_coefficients(1), vec![BigInt::from(0), BigInt::from(-1)]);
        assert_eq!(
            q_coefficients(2),
            vec![BigInt::from(0), BigInt::from(1), BigInt::from(2)]
        );
        assert_eq!(
            q_coefficients(3),
            vec![
                BigInt::from(0),
                BigInt::from(-1),
                BigInt::from(-6),
                BigInt::from(-6)
            ]
        );
    }

    #[test]
    fn q_table_anchor_and_functional_oracle() {
        let table = QTable::standard(12);
        assert_eq!(table.depth(), 12);
        assert_eq!(table.normalization(), "stirling");
        // The diagonal is asserted in the constructor; spot-check anyway.
        assert_eq!(table.row(12)[12], factorial_big(12));
        assert_eq!(table.row(11)[11], -factorial_big(11));
        // Row k evaluated on binomials at m gives (-m)^k.
        for k in 0..=8usize {
            let row = BinomBasisPoly::build(table.row(k).to_vec());
            for m in 0..=8i64 {
                let expect = if k % 2 == 1 {
                    -BigInt::from(m).pow(k as u32)
                } else {
                    BigInt::from(m).pow(k as u32)
                };
                assert_eq!(row.eval(m), expect, "k={k} m={m}");
            }
        }
    }

    #[test]
    fn boundary_on_examples() {
        // Regular series die.
        let reg = TruncatedSeries::from_coefficients(
            Var::Q,
            0,
            vec![rat_int(3), rat_int(1), rat_int(4)],
        );
        assert!(boundary(&reg).unwrap().is_zero());
        // q^(-1) -> -binom(b,1).
        let qinv = TruncatedSeries::monomial(Var::Q, rat_int(1), -1, 4);
        assert_eq!(boundary(&qinv).unwrap(), BinomBasisPoly::from_i64(&[0, -1]));
        // q^(-2) + 3 -> binom(b,1) + 2 binom(b,2).
        let f = &TruncatedSeries::monomial(Var::Q, rat_int(1), -2, 4)
            + &TruncatedSeries::constant(Var::Q, rat_int(3), 4);
        assert_eq!(boundary(&f).unwrap(), BinomBasisPoly::from_i64(&[0, 1, 2]));
        // Additivity on a mixed element.
        let g = TruncatedSeries::from_coefficients(
            Var::Q,
            -2,
            vec![rat_int(2), rat_int(-1), rat_int(7)],
        );
        let sum = boundary(&(&f + &g)).unwrap();
        assert_eq!(sum, boundary(&f).unwrap().add(&boundary(&g).unwrap()));
        // Non-integer principal coefficients are rejected.
        let bad = TruncatedSeries::monomial(Var::Q, rat(1, 2), -1, 2);
        assert_eq!(
            boundary(&bad),
            Err(TateError::NonIntegerCoefficient {
                exponent: -1,
                value: "1/2".to_string()
            })
        );
        // ...but non-integer regular coefficients are irrelevant.
        let mixed = &qinv + &TruncatedSeries::constant(Var::Q, rat(1, 3), 4);
        assert_eq!(boundary(&mixed).unwrap(), BinomBasisPoly::from_i64(&[0, -1]));
    }

    #[test]
    fn expansion_is_a_ring_map() {
        let a = TateElement::new(Prf::new(IntPoly::from_i64(&[1, 2]), 1, 1));
        let b = TateElement::new(Prf::new(IntPoly::from_i64(&[0, 0, 3]), 0, 2));
        let order = 10;
        let lhs = (&a * &b).expand_in_q(order);
        let rhs = &a.expand_in_q(order) * &b.expand_in_q(order);
        assert!(lhs.first_mismatch(&rhs, rhs.order().min(lhs.order())).is_none());
        let sum_lhs = (&a + &b).expand_in_q(order);
        let sum_rhs = &a.expand_in_q(order) + &b.expand_in_q(order);
        assert!(sum_lhs
            .first_mismatch(&sum_rhs, sum_rhs.order().min(sum_lhs.order()))
            .is_none());
    }

    #[test]
    fn binomial_poly_display_and_json() {
        let p = BinomBasisPoly::from_i64(&[0, 1, 2]);
        assert_eq!(format!("{p}"), "binom(b,1) + 2*binom(b,2)");
        assert_eq!(format!("{}", BinomBasisPoly::from_i64(&[0, -1])), "-binom(b,1)");
        assert_eq!(format!("{}", BinomBasisPoly::zero()), "0");
        assert_eq!(format!("{}", BinomBasisPoly::from_i64(&[5])), "5");
        let v = serde_json::to_value(&p).unwrap();
        assert_eq!(v["coeffs"], serde_json::json!(["0", "1", "2"]));
    }
}
