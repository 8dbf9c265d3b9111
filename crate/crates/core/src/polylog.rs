//! Floating-point layer: zeta and gamma, the tempered polylog family
//! li_s extending sum e^(nx) n^(-s) off the negative axis, its smooth
//! regularization, divided moments against the Bose kernel, and the
//! black-body reduction (Stefan-Boltzmann constant, Wien peak).
//!
//! Everything here is double precision with explicit error estimates;
//! exact cross-checks against the rational-series modules (Bernoulli
//! closed forms, the Todd-type integrand identity) live in the check
//! functions at the bottom.

use crate::quad::adaptive_simpson;
use crate::rational::{rat_int, to_f64};
use crate::report::{CheckReport, CheckStatus, Witness};
use crate::series::{TruncatedSeries, Var};
use crate::special::{a_hat, bernoulli_upto, exp_ax, todd_series};
use crate::rational::rat;
use serde::Serialize;
use std::f64::consts::PI;
use thiserror::Error;

/// Boltzmann over Planck, k/h, in hertz per kelvin (CODATA exact SI
/// values). A cited "~2e11" figure matches k/h-bar instead (2*pi larger);
/// reports carry that discrepancy as a note rather than adopting it.
pub const KAPPA_HZ_PER_K: f64 = 2.0836619e10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NumericError {
    #[error("pole: {0}")]
    Pole(String),
    #[error("outside domain: {0}")]
    Domain(String),
}

/// A value with an accumulated error estimate.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Estimate {
    pub value: f64,
    pub est_error: f64,
}

fn bernoulli_f64(upto: usize) -> Vec<f64> {
    bernoulli_upto(upto).iter().map(to_f64).collect()
}

fn factorial_f64(n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}

// ---------------------------------------------------------------------------
// zeta and gamma.
// ---------------------------------------------------------------------------

/// sin(pi * s) with the argument reduced exactly-ish before scaling, so
/// large |s| does not lose digits to range reduction.
fn sin_pi(s: f64) -> f64 {
    (PI * s.rem_euclid(2.0)).sin()
}

/// Euler-Maclaurin tail of the Dirichlet series; accurate for s >= -1
/// (error far below 1e-13 relative with N = 25, 12 correction terms).
fn zeta_euler_maclaurin(s: f64) -> f64 {
    const N: usize = 25;
    const J: usize = 12;
    let b = bernoulli_f64(2 * J);
    let nf = N as f64;
    let mut sum = 0.0;
    for n in 1..N {
        sum += (n as f64).powf(-s);
    }
    sum += nf.powf(1.0 - s) / (s - 1.0);
    sum += 0.5 * nf.powf(-s);
    // sum_j B_2j/(2j)! * s(s+1)...(s+2j-2) * N^(1-s-2j)
    let mut rising = s;
    for j in 1..=J {
        sum += b[2 * j] / factorial_f64(2 * j) * rising * nf.powf(1.0 - s - 2.0 * j as f64);
        rising *= (s + 2.0 * j as f64 - 1.0) * (s + 2.0 * j as f64);
    }
    sum
}

/// Riemann zeta on the real line, s != 1; relative error around 1e-13 for
/// |s| <= 50. Left of the critical strip the functional equation
/// delegates to the convergent side.
pub fn zeta(s: f64) -> Result<f64, NumericError> {
    if s == 1.0 {
        return Err(NumericError::Pole("zeta at s = 1".to_string()));
    }
    if s >= -1.0 {
        Ok(zeta_euler_maclaurin(s))
    } else {
        // zeta(s) = 2^s pi^(s-1) sin(pi s/2) Gamma(1-s) zeta(1-s)
        let g = gamma(1.0 - s)?;
        Ok(2.0f64.powf(s) * PI.powf(s - 1.0) * sin_pi(0.5 * s) * g * zeta_euler_maclaurin(1.0 - s))
    }
}

/// log Gamma by the Stirling series, valid for z >= 12.
fn ln_gamma_stirling(z: f64) -> f64 {
    let b = bernoulli_f64(20);
    let mut s = (z - 0.5) * z.ln() - z + 0.5 * (2.0 * PI).ln();
    for j in 1..=10 {
        let tj = 2 * j;
        s += b[tj] / ((tj * (tj - 1)) as f64 * z.powi(tj as i32 - 1));
    }
    s
}

/// Gamma on the real line away from the poles at 0, -1, -2, ...
pub fn gamma(s: f64) -> Result<f64, NumericError> {
    if s <= 0.0 && s == s.round() {
        return Err(NumericError::Pole(format!("gamma at s = {s}")));
    }
    if s < 0.5 {
        // Reflection: Gamma(s) Gamma(1-s) = pi / sin(pi s).
        let g = gamma(1.0 - s)?;
        return Ok(PI / (sin_pi(s) * g));
    }
    let mut z = s;
    let mut shift = 1.0;
    while z < 12.0 {
        shift *= z;
        z += 1.0;
    }
    Ok(ln_gamma_stirling(z).exp() / shift)
}

// ---------------------------------------------------------------------------
// The tempered polylog family.
// ---------------------------------------------------------------------------

/// li1(x) = -log|1 - e^x|, the primitive whose derivative carries the
/// x^(-1) residue; stable through expm1.
pub fn li1(x: f64) -> f64 {
    assert!(x != 0.0, "li1 has a logarithmic pole at 0");
    -x.exp_m1().abs().ln()
}

/// Direct summation of sum_{n>=1} e^(nx) n^(-s) on x < 0, with a
/// geometric tail bound.
pub fn li_s_negative(s: f64, x: f64) -> Result<Estimate, NumericError> {
    if !(x < 0.0) {
        return Err(NumericError::Domain(format!(
            "direct series needs x < 0, got {x}"
        )));
    }
    let q = x.exp();
    let hump = if s < 0.0 { (-s / -x).ceil() as u64 + 1 } else { 0 };
    let mut p = 1.0;
    let mut acc = 0.0;
    let mut n: u64 = 0;
    let tail = loop {
        n += 1;
        p *= q;
        let term = p * (n as f64).powf(-s);
        acc += term;
        let past_hump = n >= hump.max(1);
        if past_hump && term <= 1e-18 * acc.abs() {
            // Bound the tail by the geometric envelope.
            let r = q * ((n as f64 + 1.0) / n as f64).powf((-s).max(0.0));
            break if r < 1.0 { term * r / (1.0 - r) } else { term };
        }
        if n > 2_000_000 {
            break term / (1.0 - q);
        }
    };
    Ok(Estimate {
        value: acc,
        est_error: tail,
    })
}

/// The smooth regularization of li_s for non-integer s and |x| < 2 pi:
/// the convergent expansion sum_k zeta(s-k) x^k / k!, plus the
/// Gamma(1-s) (-x)^(s-1) branch term on x < 0 where the family agrees
/// with the direct series.
pub fn li_s_regularized(s: f64, x: f64) -> Result<f64, NumericError> {
    if s == s.round() {
        return Err(NumericError::Pole(format!(
            "regularized family has cot-type poles at integer s (s = {s})"
        )));
    }
    if !(x.abs() < 2.0 * PI) {
        return Err(NumericError::Domain(format!(
            "expansion radius is 2 pi, got |x| = {}",
            x.abs()
        )));
    }
    let mut acc = 0.0;
    let mut xk_over_kfact = 1.0;
    let mut small_streak = 0;
    for k in 0..=140u32 {
        if k > 0 {
            xk_over_kfact *= x / k as f64;
        }
        let term = zeta(s - k as f64)? * xk_over_kfact;
        acc += term;
        if k >= 8 {
            if term.abs() <= 1e-17 * acc.abs().max(1e-300) {
                small_streak += 1;
                if small_streak >= 2 {
                    break;
                }
            } else {
                small_streak = 0;
            }
        }
    }
    if x < 0.0 {
        acc += gamma(1.0 - s)? * (-x).powf(s - 1.0);
    }
    Ok(acc)
}

// ---------------------------------------------------------------------------
// Divided moments against the Bose kernel.
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MomentMethod {
    Series,
    Quadrature,
    EulerMaclaurin,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MomentStatus {
    Converged,
    Divergent,
}

/// Lower-cutoff scan attached to a divergent moment: the integral from
/// delta grows like the stated model as delta -> 0.
#[derive(Debug, Clone, Serialize)]
pub struct DivergenceDiagnostic {
    pub cutoffs: Vec<f64>,
    pub values: Vec<f64>,
    /// "logarithmic" (s = 1) or "power" (s < 1).
    pub model: String,
    pub slope: f64,
    pub expected_slope: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct MomentResult {
    /// NaN exactly when status is divergent.
    pub value: f64,
    pub est_error: f64,
    pub method: MomentMethod,
    pub status: MomentStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diagnostic: Option<DivergenceDiagnostic>,
}

/// Head piece int_delta^1 x^(s-1)/(e^x - 1) dx through the exact
/// Bernoulli expansion of the kernel (converges fast: ratio 1/(2 pi)).
/// delta = 0 is allowed for s > 1.
fn bose_head(s: f64, delta: f64) -> f64 {
    let b = bernoulli_f64(40);
    let mut acc = 0.0;
    for (k, bk) in b.iter().enumerate() {
        if *bk == 0.0 && k > 1 {
            continue;
        }
        // int x^(s-2+k) dx over [delta, 1]
        let e = s - 1.0 + k as f64;
        let piece = if e.abs() < 1e-12 {
            (1.0 / delta).ln()
        } else if delta == 0.0 {
            1.0 / e
        } else {
            (1.0 - delta.powf(e)) / e
        };
        let term = bk / factorial_f64(k) * piece;
        acc += term;
        if k > 4 && term.abs() < 1e-18 * acc.abs().max(1e-300) {
            break;
        }
    }
    acc
}

/// The divided moment int_0^inf x^(s-1) / (Gamma(s) (e^x - 1)) dx, which
/// equals zeta(s) for s > 1. For 0 < s <= 1 the integral diverges at the
/// origin; the result carries a cutoff-scan diagnostic instead of a value.
pub fn divided_moment(s: f64, tol: f64) -> Result<MomentResult, NumericError> {
    if !(s > 0.0) {
        return Err(NumericError::Domain(format!(
            "divided moment needs s > 0, got {s}"
        )));
    }
    assert!(tol > 0.0);
    let g = gamma(s)?;
    let body = adaptive_simpson(&|x: f64| x.powf(s - 1.0) / x.exp_m1(), 1.0, 60.0, tol * g / 4.0);
    // Tail beyond 60: x^(s-1) e^(-x) (1 + e^(-x) + ...) under a crude
    // doubling of the first envelope term.
    let tail_bound = 2.0 * 60.0f64.powf(s - 1.0) * (-60.0f64).exp();

    if s > 1.0 {
        let head = bose_head(s, 0.0);
        return Ok(MomentResult {
            value: (head + body.value) / g,
            est_error: (body.est_error + tail_bound) / g + 1e-15 * head.abs(),
            method: MomentMethod::Quadrature,
            status: MomentStatus::Converged,
            diagnostic: None,
        });
    }

    // Divergent regime: scan lower cutoffs delta = 10^-1 .. 10^-6.
    let cutoffs: Vec<f64> = (1..=6).map(|i| 10.0f64.powi(-i)).collect();
    let values: Vec<f64> = cutoffs
        .iter()
        .map(|&d| (bose_head(s, d) + body.value) / g)
        .collect();
    let logarithmic = (s - 1.0).abs() < 1e-9;
    let (ts, expected): (Vec<f64>, f64) = if logarithmic {
        // I(delta) ~ -log(delta) * 1/Gamma(1): slope 1 against -log delta.
        (cutoffs.iter().map(|d| -d.ln()).collect(), 1.0)
    } else {
        // I(delta) ~ delta^(s-1): log I against -log delta has slope 1-s.
        (cutoffs.iter().map(|d| -d.ln()).collect(), 1.0 - s)
    };
    let ys: Vec<f64> = if logarithmic {
        values.clone()
    } else {
        values.iter().map(|v| v.ln()).collect()
    };
    let slope = regression_slope(&ts, &ys);
    Ok(MomentResult {
        value: f64::NAN,
        est_error: 0.0,
        method: MomentMethod::Series,
        status: MomentStatus::Divergent,
        diagnostic: Some(DivergenceDiagnostic {
            cutoffs,
            values,
            model: if logarithmic { "logarithmic" } else { "power" }.to_string(),
            slope,
            expected_slope: expected,
        }),
    })
}

fn regression_slope(t: &[f64], y: &[f64]) -> f64 {
    let n = t.len() as f64;
    let tbar = t.iter().sum::<f64>() / n;
    let ybar = y.iter().sum::<f64>() / n;
    let cov: f64 = t.iter().zip(y).map(|(a, b)| (a - tbar) * (b - ybar)).sum();
    let var: f64 = t.iter().map(|a| (a - tbar) * (a - tbar)).sum();
    cov / var
}

// ---------------------------------------------------------------------------
// Black-body reduction.
// ---------------------------------------------------------------------------

/// The reduced spectral density 2 eps^3 / (e^eps - 1); the dimensionful
/// density is this times h kappa^4 T^4.
pub fn planck_reduced(eps: f64) -> f64 {
    assert!(eps > 0.0);
    2.0 * eps.powi(3) / eps.exp_m1()
}

/// Wien-type peak of eps^3/(e^eps - 1): the root of 3(1 - e^(-eps)) = eps.
pub fn planck_peak() -> f64 {
    let mut e: f64 = 2.8;
    for _ in 0..60 {
        let f = 3.0 * (-(-e).exp_m1()) - e;
        let fp = 3.0 * (-e).exp() - 1.0;
        let step = f / fp;
        e -= step;
        if step.abs() < 1e-15 {
            break;
        }
    }
    e
}

/// int_0^inf 2 eps^3/(e^eps - 1) d eps = 2 Gamma(4) zeta(4) = pi^4/7.5,
/// the dimensionless Stefan-Boltzmann constant (prefactor h kappa^4 T^4).
pub fn stefan_boltzmann() -> Result<MomentResult, NumericError> {
    let m = divided_moment(4.0, 1e-11)?;
    Ok(MomentResult {
        value: 12.0 * m.value,
        est_error: 12.0 * m.est_error,
        method: m.method,
        status: m.status,
        diagnostic: None,
    })
}

// ---------------------------------------------------------------------------
// Checks.
// ---------------------------------------------------------------------------

fn sample_witness(location: impl Into<String>, error: f64) -> Witness {
    Witness::Sample {
        location: location.into(),
        error,
    }
}

/// zeta at even integers against the exact Bernoulli closed form
/// zeta(2n) = (-1)^(n+1) B_2n (2 pi)^(2n) / (2 (2n)!), n = 1..6.
pub fn check_zeta_bernoulli(tol: f64) -> CheckReport {
    let name = "zeta-bernoulli";
    let b = bernoulli_upto(12);
    for n in 1..=6usize {
        let exact = to_f64(&b[2 * n]) * (2.0 * PI).powi(2 * n as i32)
            / (2.0 * factorial_f64(2 * n))
            * if n % 2 == 1 { 1.0 } else { -1.0 };
        let numeric = zeta(2.0 * n as f64).expect("even positive argument");
        let err = ((numeric - exact) / exact).abs();
        if !(err <= tol) {
            return CheckReport::fail(name, sample_witness(format!("s={}", 2 * n), err))
                .with_param("tol", tol);
        }
    }
    CheckReport::pass(name)
        .with_param("tol", tol)
        .with_param("even_args", "2..=12")
        .with_note("Euler-Maclaurin zeta matches the exact Bernoulli closed form")
}

/// divided_moment(s) recovers zeta(s) for a spread of s > 1.
pub fn check_moments_zeta(tol: f64) -> CheckReport {
    let name = "moments-zeta";
    let svals = [1.5, 2.0, 3.0, 4.0, 6.0];
    for &s in &svals {
        let m = match divided_moment(s, tol / 10.0) {
            Ok(m) => m,
            Err(e) => {
                return CheckReport::fail(name, sample_witness(format!("s={s}"), f64::NAN))
                    .with_note(format!("unexpected error: {e}"))
            }
        };
        let z = zeta(s).expect("s > 1");
        let err = (m.value - z).abs();
        if !(err <= tol && m.est_error <= tol) {
            return CheckReport::fail(name, sample_witness(format!("s={s}"), err))
                .with_param("tol", tol);
        }
    }
    CheckReport::pass(name)
        .with_param("tol", tol)
        .with_param("s_values", "1.5, 2, 3, 4, 6")
        .with_note("quadrature + Bernoulli head reproduces zeta(s) within stated error")
}

/// At s = 1 the moment diverges; the cutoff scan must grow like
/// -log delta with unit slope (within 5 percent).
pub fn check_moment_divergence() -> CheckReport {
    let name = "moment-divergence-s1";
    let m = divided_moment(1.0, 1e-9).expect("s = 1 is in the domain");
    if m.status != MomentStatus::Divergent || !m.value.is_nan() {
        return CheckReport::fail(name, sample_witness("status", 0.0))
            .with_note("expected a divergent status with NaN value");
    }
    let d = m.diagnostic.expect("divergent results carry a diagnostic");
    let rel = (d.slope - d.expected_slope).abs() / d.expected_slope.abs();
    if !(rel <= 0.05) {
        return CheckReport::fail(name, sample_witness("slope", rel))
            .with_note(format!("scan slope {} vs expected {}", d.slope, d.expected_slope));
    }
    CheckReport::pass(name)
        .with_param("model", d.model.clone())
        .with_param("slope", d.slope)
        .with_note(format!(
            "integral from delta grows like -log delta (slope {:.4}, cutoffs 1e-1..1e-6)",
            d.slope
        ))
}

/// li1(x) + log|x| is smooth across 0: it matches the exact series of
/// -log((e^x - 1)/x) at small samples, decays linearly, stays bounded by
/// 1 on [-1, 1], and li1(x) - li1(-x) = -x exactly.
pub fn check_li1_log_congruence(tol: f64) -> CheckReport {
    let name = "li1-log-congruence";
    let order = 40;
    let remainder = {
        // (e^x - 1)/x, exactly, then log: the smooth part of -li1.
        let num = &exp_ax(&rat_int(1), order + 1) - &TruncatedSeries::one(Var::X, order + 1);
        num.shift_exponent(-1).log()
    };
    // Decay and series agreement at x = +/- 10^-k.
    for k in 1..=6 {
        for sign in [1.0, -1.0] {
            let x = sign * 10.0f64.powi(-k);
            let r = li1(x) + x.abs().ln();
            let series = -remainder.eval_f64(x);
            let err = (r - series).abs();
            if !(err <= tol) {
                return CheckReport::fail(name, sample_witness(format!("x={x}"), err))
                    .with_note("series pipeline disagrees with direct evaluation")
                    .with_param("tol", tol);
            }
            if !(r.abs() <= 0.6 * x.abs() + 1e-15) {
                return CheckReport::fail(name, sample_witness(format!("x={x}"), r.abs()))
                    .with_note("remainder fails the linear decay bound");
            }
        }
    }
    // Boundedness on [-1, 1] and the exact shift antisymmetry.
    for j in 1..=20 {
        for sign in [1.0, -1.0] {
            let x = sign * j as f64 / 20.0;
            let r = li1(x) + x.abs().ln();
            if !(r.abs() <= 1.0) {
                return CheckReport::fail(name, sample_witness(format!("x={x}"), r.abs()))
                    .with_note("remainder exceeded 1 on [-1, 1]");
            }
            let anti = li1(x) - li1(-x) + x;
            if !(anti.abs() <= 1e-12 * (1.0 + x.abs())) {
                return CheckReport::fail(name, sample_witness(format!("x={x}"), anti.abs()))
                    .with_note("exact identity li1(x) - li1(-x) = -x violated");
            }
        }
    }
    CheckReport::pass(name)
        .with_param("tol", tol)
        .with_param("series_order", order)
        .with_note("li1 + log|x| matches -log((e^x-1)/x) and is bounded on [-1,1]")
}

/// The Bose kernel is the Todd-type product: x/(e^x - 1) =
/// e^(-x/2) * (x/2)/sinh(x/2), exactly as series and numerically.
pub fn check_todd_integrand(order: i64, samples: usize, tol: f64) -> CheckReport {
    let name = "todd-integrand";
    let lhs = todd_series(order);
    let rhs = &exp_ax(&rat(-1, 2), order) * &a_hat(order);
    if let Some(e) = lhs.first_mismatch(&rhs, order) {
        return CheckReport::fail(
            name,
            Witness::Coefficient {
                exponent: e,
                value: crate::rational::format_exact(&lhs.coeff(e)),
            },
        )
        .with_param("order", order);
    }
    for i in 0..samples {
        let x = 0.25 + 2.25 * i as f64 / samples.max(1) as f64;
        let left = x / x.exp_m1();
        let right = (-x / 2.0).exp() * (x / 2.0) / (x / 2.0).sinh();
        let err = (left - right).abs();
        if !(err <= tol) {
            return CheckReport::fail(name, sample_witness(format!("x={x}"), err))
                .with_param("tol", tol);
        }
    }
    CheckReport::pass(name)
        .with_param("order", order)
        .with_param("samples", samples as i64)
        .with_param("tol", tol)
        .with_note("kernel splits as e^(-x/2) times the even square-root factor, exactly")
}

/// Stefan-Boltzmann value, Wien peak, and the definition of the reduced
/// density.
pub fn check_stefan_boltzmann(tol: f64) -> CheckReport {
    let name = "stefan-boltzmann";
    let sb = match stefan_boltzmann() {
        Ok(m) => m,
        Err(e) => {
            return CheckReport::fail(name, sample_witness("integral", f64::NAN))
                .with_note(format!("unexpected error: {e}"))
        }
    };
    let quarter = PI.powi(4) / 15.0; // int eps^3/(e^eps - 1)
    let err = (sb.value / 2.0 - quarter).abs();
    if !(err <= tol && sb.est_error <= 2.0 * tol) {
        return CheckReport::fail(name, sample_witness("integral", err)).with_param("tol", tol);
    }
    let peak = planck_peak();
    let residual = (3.0 * (-(-peak).exp_m1()) - peak).abs();
    let peak_err = (peak - 2.821_439_372_122_078_7).abs();
    if !(residual <= 1e-12 && peak_err <= 1e-10) {
        return CheckReport::fail(name, sample_witness("peak", peak_err));
    }
    for eps in [0.5, 1.7, 3.3] {
        let ratio = planck_reduced(eps) * eps.exp_m1() / (2.0 * eps.powi(3));
        if !((ratio - 1.0).abs() <= 1e-14) {
            return CheckReport::fail(name, sample_witness(format!("eps={eps}"), (ratio - 1.0).abs()));
        }
    }
    CheckReport::pass(name)
        .with_param("tol", tol)
        .with_note(format!(
            "integral of the reduced density = pi^4/7.5 = {:.10}; prefactor h kappa^4 T^4",
            2.0 * quarter
        ))
        .with_note(format!(
            "Wien-type peak at eps = {peak:.10}; kappa = k/h = {KAPPA_HZ_PER_K:.7e} Hz/K \
             (a cited ~2e11 matches k/h-bar, off by 2 pi; not adopted)"
        ))
}

/// Convenience wrapper asserting a check passed (used by callers that
/// treat expected-fail as acceptable).
pub fn check_ok(report: &CheckReport) -> bool {
    report.status != CheckStatus::Fail
}
