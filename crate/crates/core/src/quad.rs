//! Adaptive Simpson quadrature with a propagated error estimate.
//!
//! Plain Simpson on a panel, compared against its two halves; the panel is
//! accepted when the Richardson error estimate |S_half - S_whole|/15 fits
//! the local tolerance budget, otherwise it splits. Bounded depth, so a
//! hostile integrand degrades the estimate instead of hanging.

/// Integral value together with the accumulated error estimate.
#[derive(Debug, Clone, Copy)]
pub struct QuadResult {
    pub value: f64,
    pub est_error: f64,
}

fn simpson(fa: f64, fm: f64, fb: f64, h: f64) -> f64 {
    h / 6.0 * (fa + 4.0 * fm + fb)
}

/// Integrate f over [a, b] aiming for absolute error `tol`.
pub fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> QuadResult {
    assert!(b >= a && tol > 0.0);
    if a == b {
        return QuadResult {
            value: 0.0,
            est_error: 0.0,
        };
    }
    struct Panel {
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    }
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a), f(m), f(b));
    let mut stack = vec![Panel {
        a,
        b,
        fa,
        fm,
        fb,
        whole: simpson(fa, fm, fb, b - a),
        tol,
        depth: 0,
    }];
    let mut value = 0.0;
    let mut est_error = 0.0;
    while let Some(p) = stack.pop() {
        let m = 0.5 * (p.a + p.b);
        let lm = 0.5 * (p.a + m);
        let rm = 0.5 * (m + p.b);
        let (flm, frm) = (f(lm), f(rm));
        let left = simpson(p.fa, flm, p.fm, m - p.a);
        let right = simpson(p.fm, frm, p.fb, p.b - m);
        let delta = left + right - p.whole;
        if delta.abs() <= 15.0 * p.tol || p.depth >= 48 {
            value += left + right + delta / 15.0;
            est_error += delta.abs() / 15.0;
        } else {
            stack.push(Panel {
                a: p.a,
                b: m,
                fa: p.fa,
                fm: flm,
                fb: p.fm,
                whole: left,
                tol: 0.5 * p.tol,
                depth: p.depth + 1,
            });
            stack.push(Panel {
                a: m,
                b: p.b,
                fa: p.fm,
                fm: frm,
                fb: p.fb,
                whole: right,
                tol: 0.5 * p.tol,
                depth: p.depth + 1,
            });
        }
    }
    QuadResult { value, est_error }
}
