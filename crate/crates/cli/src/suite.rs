//! The verification suite: a fixed registry of named checks, each a thin
//! call into the library, plus the aggregate report the `verify` command
//! prints.

use std::time::Instant;

use serde::Serialize;
use tateq::punctured::check_c_h_involution;
use tateq::report::{CheckReport, CheckStatus};
use tateq::{congruence, polylog, rat};

/// Knobs shared by every check invocation.
#[derive(Debug, Clone, Copy)]
pub struct RunConfig {
    pub order: i64,
    pub prime: u64,
    pub tol: f64,
    /// Inject a deliberate fault into the wu-lemma check so the harness
    /// can prove it would notice a wrong coefficient.
    pub perturb: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            order: 64,
            prime: 2,
            tol: 1e-10,
            perturb: false,
        }
    }
}

/// Every registered check, in the (sorted) order `verify all` runs them.
///
/// A few tolerances are pinned by the check's own contract rather than
/// taken from the config: quadrature cannot honestly promise more than
/// 1e-8, and the Bernoulli cross-check is documented at 1e-12.
pub const CHECK_NAMES: [&str; 17] = [
    "ahat-wu-corollary",
    "artin-hasse-p2",
    "artin-hasse-p3",
    "c-h-involution",
    "dli1-decomposition",
    "frobenius-lift-p2",
    "frobenius-lift-p3",
    "fx-conjugation-p2",
    "hopf-ring",
    "li1-log-congruence",
    "moment-divergence-s1",
    "moments-zeta",
    "stefan-boltzmann",
    "todd-integrand",
    "wu-lemma",
    "wu-unit",
    "zeta-bernoulli",
];

/// Run a single check by registry name. Besides the exact names above,
/// the prime-parametrized families accept their bare names
/// ("artin-hasse", "frobenius-lift", "fx-conjugation") and read the prime
/// from the config. Returns None for an unknown name.
pub fn run_check(name: &str, cfg: &RunConfig) -> Option<CheckReport> {
    let samples = 20;
    let report = match name {
        "ahat-wu-corollary" => congruence::check_ahat_wu_corollary(cfg.order),
        "artin-hasse" => congruence::check_artin_hasse(cfg.prime, cfg.order),
        "artin-hasse-p2" => congruence::check_artin_hasse(2, cfg.order),
        "artin-hasse-p3" => congruence::check_artin_hasse(3, cfg.order),
        "c-h-involution" => check_c_h_involution(cfg.order.min(32), samples, cfg.tol),
        "dli1-decomposition" => congruence::check_dli1_decomposition(cfg.order, samples, cfg.tol),
        "frobenius-lift" => congruence::check_frobenius_lift(cfg.prime, cfg.order),
        "frobenius-lift-p2" => congruence::check_frobenius_lift(2, cfg.order),
        "frobenius-lift-p3" => congruence::check_frobenius_lift(3, cfg.order),
        "fx-conjugation" => congruence::check_fx_conjugation(cfg.prime, cfg.order),
        "fx-conjugation-p2" => congruence::check_fx_conjugation(2, cfg.order),
        "hopf-ring" => congruence::check_hopf_ring(10),
        "li1-log-congruence" => polylog::check_li1_log_congruence(cfg.tol.max(1e-12)),
        "moment-divergence-s1" => polylog::check_moment_divergence(),
        "moments-zeta" => polylog::check_moments_zeta(1e-8),
        "stefan-boltzmann" => polylog::check_stefan_boltzmann(1e-8),
        "todd-integrand" => polylog::check_todd_integrand(cfg.order.min(32), samples, cfg.tol),
        "wu-lemma" => {
            let perturb = cfg.perturb.then(|| (3, rat(1, 2)));
            congruence::check_wu_lemma(cfg.order, perturb)
        }
        "wu-unit" => congruence::check_wu_unit(cfg.order),
        "zeta-bernoulli" => polylog::check_zeta_bernoulli(1e-12),
        _ => return None,
    };
    Some(report)
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteSummary {
    pub pass: usize,
    pub fail: usize,
    #[serde(rename = "expected-fail")]
    pub expected_fail: usize,
    /// Wall-clock time for the whole run. Deliberately the only
    /// nondeterministic field in the report.
    pub wall_ms: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub checks: Vec<CheckReport>,
    pub summary: SuiteSummary,
}

impl SuiteReport {
    /// Exit status the process should end with: failures (expected ones
    /// excluded) are the only thing that makes a run unsuccessful.
    pub fn exit_code(&self) -> i32 {
        if self.summary.fail == 0 {
            0
        } else {
            1
        }
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        for check in &self.checks {
            out.push_str(&check.render_text());
            out.push('\n');
        }
        let s = &self.summary;
        out.push_str(&format!(
            "{} checks: {} pass, {} fail, {} expected-fail ({} ms)\n",
            self.checks.len(),
            s.pass,
            s.fail,
            s.expected_fail,
            s.wall_ms
        ));
        out
    }
}

/// Run the named checks (already resolved; unknown names must be handled
/// by the caller) and assemble the aggregate report.
pub fn run_suite(names: &[&str], cfg: &RunConfig) -> SuiteReport {
    let started = Instant::now();
    let mut checks: Vec<CheckReport> = names
        .iter()
        .map(|n| run_check(n, cfg).unwrap_or_else(|| panic!("unregistered check {n}")))
        .collect();
    checks.sort_by(|a, b| a.check.cmp(&b.check));

    let (mut pass, mut fail, mut expected_fail) = (0, 0, 0);
    for c in &checks {
        match c.status {
            CheckStatus::Pass => pass += 1,
            CheckStatus::Fail => fail += 1,
            CheckStatus::ExpectedFail => expected_fail += 1,
        }
    }
    SuiteReport {
        summary: SuiteSummary {
            pass,
            fail,
            expected_fail,
            wall_ms: started.elapsed().as_millis() as u64,
        },
        checks,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_is_sorted_and_complete() {
        let mut sorted = CHECK_NAMES.to_vec();
        sorted.sort_unstable();
        assert_eq!(sorted, CHECK_NAMES.to_vec());
        let cfg = RunConfig::default();
        for name in CHECK_NAMES {
            assert!(run_check(name, &cfg).is_some(), "{name} not dispatchable");
        }
        assert!(run_check("no-such-check", &cfg).is_none());
    }

    #[test]
    fn bare_prime_families_resolve_through_the_config() {
        let cfg = RunConfig {
            prime: 3,
            order: 27,
            ..RunConfig::default()
        };
        let r = run_check("artin-hasse", &cfg).unwrap();
        assert_eq!(r.status, CheckStatus::ExpectedFail);
        let r2 = run_check("artin-hasse-p3", &cfg).unwrap();
        assert_eq!(r2.status, CheckStatus::ExpectedFail);
    }

    #[test]
    fn perturbation_turns_wu_lemma_red() {
        let cfg = RunConfig {
            order: 16,
            perturb: true,
            ..RunConfig::default()
        };
        let r = run_check("wu-lemma", &cfg).unwrap();
        assert_eq!(r.status, CheckStatus::Fail);
        let w = r.witness.expect("a failure must carry a witness");
        match w {
            tateq::report::Witness::Coefficient { exponent, .. } => assert_eq!(exponent, 3),
            other => panic!("unexpected witness {other:?}"),
        }
    }

    #[test]
    fn small_suite_counts_statuses() {
        let cfg = RunConfig {
            order: 16,
            ..RunConfig::default()
        };
        let report = run_suite(&["wu-unit", "artin-hasse-p3", "wu-lemma"], &cfg);
        assert_eq!(report.summary.pass, 2);
        assert_eq!(report.summary.fail, 0);
        assert_eq!(report.summary.expected_fail, 1);
        assert_eq!(report.exit_code(), 0);
        // Sorted by name regardless of invocation order.
        let names: Vec<&str> = report.checks.iter().map(|c| c.check.as_str()).collect();
        assert_eq!(names, ["artin-hasse-p3", "wu-lemma", "wu-unit"]);
    }
}
