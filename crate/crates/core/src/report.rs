//! Pass/fail reports for the identity and congruence checks.
//!
//! Every checker returns a [`CheckReport`]: name, the parameters it ran
//! with, a three-valued status, an optional witness locating the first
//! discrepancy, and free-form notes. Failing without a witness is not
//! representable through the constructors — a bare "fail" is useless for
//! diagnosis. JSON output is deterministic: parameters live in a BTreeMap,
//! so key order is fixed.

use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckStatus {
    Pass,
    Fail,
    /// The check ran, the claim is false, and it is *supposed* to be false
    /// (a hypothesis that provably fails, kept as a negative control).
    ExpectedFail,
}

/// Where a check first went wrong.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Witness {
    /// Exact-arithmetic checks: the offending exponent and the exact value
    /// found there.
    Coefficient { exponent: i64, value: String },
    /// Numerical checks: where the sample was taken and how far off it was.
    Sample { location: String, error: f64 },
    /// A discrepancy that was *supposed* to appear (negative control)
    /// never materialized.
    Absent { through: i64, expected: String },
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Coefficient { exponent, value } => {
                write!(f, "coefficient at exponent {exponent} is {value}")
            }
            Witness::Sample { location, error } => {
                write!(f, "sample at {location} off by {error:e}")
            }
            Witness::Absent { through, expected } => {
                write!(f, "expected discrepancy absent through order {through}: {expected}")
            }
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckReport {
    pub check: String,
    pub params: BTreeMap<String, serde_json::Value>,
    pub status: CheckStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl CheckReport {
    pub fn pass(check: &str) -> Self {
        CheckReport {
            check: check.to_string(),
            params: BTreeMap::new(),
            status: CheckStatus::Pass,
            witness: None,
            notes: Vec::new(),
        }
    }

    pub fn fail(check: &str, witness: Witness) -> Self {
        CheckReport {
            status: CheckStatus::Fail,
            witness: Some(witness),
            ..Self::pass(check)
        }
    }

    /// A failure that is the *correct* outcome (negative control). The
    /// witness documents where the claim breaks.
    pub fn expected_fail(check: &str, witness: Witness) -> Self {
        CheckReport {
            status: CheckStatus::ExpectedFail,
            witness: Some(witness),
            ..Self::pass(check)
        }
    }

    pub fn with_param(mut self, key: &str, value: impl Into<serde_json::Value>) -> Self {
        self.params.insert(key.to_string(), value.into());
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    /// Did the check come out the way it should? (Expected failures count
    /// as success for suite purposes.)
    pub fn ok(&self) -> bool {
        self.status != CheckStatus::Fail
    }

    /// One-line (plus notes) human-readable rendering.
    pub fn render_text(&self) -> String {
        let tag = match self.status {
            CheckStatus::Pass => "PASS ",
            CheckStatus::Fail => "FAIL ",
            CheckStatus::ExpectedFail => "XFAIL",
        };
        let mut line = format!("{tag} {}", self.check);
        if !self.params.is_empty() {
            let params: Vec<String> = self
                .params
                .iter()
                .map(|(k, v)| match v {
                    serde_json::Value::String(s) => format!("{k}={s}"),
                    other => format!("{k}={other}"),
                })
                .collect();
            line.push_str(&format!("  [{}]", params.join(" ")));
        }
        if let Some(w) = &self.witness {
            line.push_str(&format!("  ({w})"));
        }
        for note in &self.notes {
            line.push_str(&format!("\n      {note}"));
        }
        line
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_is_deterministic_and_kebab_cased() {
        let r = CheckReport::fail(
            "wu-lemma",
            Witness::Coefficient {
                exponent: 3,
                value: "1/2".to_string(),
            },
        )
        .with_param("order", 64)
        .with_param("p", 2);
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v["status"], "fail");
        assert_eq!(v["witness"]["kind"], "coefficient");
        assert_eq!(v["witness"]["exponent"], 3);
        assert_eq!(v["witness"]["value"], "1/2");
        // BTreeMap: params serialize in key order regardless of insertion.
        let s = serde_json::to_string(&r).unwrap();
        let t = serde_json::to_string(
            &CheckReport::fail(
                "wu-lemma",
                Witness::Coefficient {
                    exponent: 3,
                    value: "1/2".to_string(),
                },
            )
            .with_param("p", 2)
            .with_param("order", 64),
        )
        .unwrap();
        assert_eq!(s, t);
    }

    #[test]
    fn expected_fail_is_ok_plain_fail_is_not() {
        let w = Witness::Coefficient {
            exponent: 1,
            value: "1".to_string(),
        };
        assert!(CheckReport::pass("a").ok());
        assert!(CheckReport::expected_fail("b", w.clone()).ok());
        assert!(!CheckReport::fail("c", w).ok());
        let v = serde_json::to_value(CheckReport::expected_fail(
            "b",
            Witness::Sample {
                location: "s=1.5, x=-2".to_string(),
                error: 1.0e-3,
            },
        ))
        .unwrap();
        assert_eq!(v["status"], "expected-fail");
        assert_eq!(v["witness"]["kind"], "sample");
    }

    #[test]
    fn text_rendering() {
        let r = CheckReport::pass("wu-lemma").with_param("order", 256).with_param("p", 2);
        assert_eq!(r.render_text(), "PASS  wu-lemma  [order=256 p=2]");
        let f = CheckReport::fail(
            "wu-lemma",
            Witness::Coefficient {
                exponent: 3,
                value: "1/2".to_string(),
            },
        )
        .with_note("perturbed run");
        assert_eq!(
            f.render_text(),
            "FAIL  wu-lemma  (coefficient at exponent 3 is 1/2)\n      perturbed run"
        );
    }
}
