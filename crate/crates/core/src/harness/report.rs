use std::collections::BTreeMap;

use serde::Serialize;

/// Outcome of one trial.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    /// All hypotheses held and so did the conclusion.
    Pass,
    /// Some hypothesis failed; the conclusion was not evaluated.
    Skip(String),
    /// Hypotheses held, conclusion failed. Always fatal.
    Fail(String),
    /// A checker raised an error; also fatal.
    Error(String),
}

/// The optional second conclusion of a theorem.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Secondary {
    NotApplicable,
    Skip(String),
    Pass,
    Fail(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub suite: String,
    pub seed: u64,
    pub trial: u64,
    pub quantale: String,
    pub monad: Option<String>,
    /// Named hypotheses in evaluation order; evaluation stops at the first failure.
    pub hypotheses: Vec<(String, bool)>,
    pub conclusion: Option<bool>,
    pub secondary: Secondary,
    pub outcome: Outcome,
}

impl VerificationReport {
    pub fn new(suite: &str, seed: u64, trial: u64, quantale: String, monad: Option<String>) -> Self {
        VerificationReport {
            suite: suite.into(),
            seed,
            trial,
            quantale,
            monad,
            hypotheses: Vec::new(),
            conclusion: None,
            secondary: Secondary::NotApplicable,
            outcome: Outcome::Skip("not evaluated".into()),
        }
    }

    /// Records a hypothesis; returns false (and marks the skip) when it fails.
    pub fn hypothesis(&mut self, name: &str, holds: bool) -> bool {
        self.hypotheses.push((name.into(), holds));
        if !holds {
            self.outcome = Outcome::Skip(name.into());
        }
        holds
    }

    pub fn skip(&mut self, reason: &str) {
        self.outcome = Outcome::Skip(reason.into());
    }

    pub fn conclude(&mut self, holds: bool, witness: impl FnOnce() -> String) {
        self.conclusion = Some(holds);
        self.outcome = if holds { Outcome::Pass } else { Outcome::Fail(witness()) };
    }

    pub fn error(&mut self, e: &crate::Error) {
        self.outcome = Outcome::Error(e.to_string());
    }

    pub fn is_fatal(&self) -> bool {
        matches!(self.outcome, Outcome::Fail(_) | Outcome::Error(_)) || matches!(self.secondary, Secondary::Fail(_))
    }
}

/// A fatal trial kept in the summary.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FailureRecord {
    pub seed: u64,
    pub trial: u64,
    pub quantale: String,
    pub monad: Option<String>,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SuiteSummary {
    pub trials: u64,
    pub passed: u64,
    pub skipped: u64,
    pub failed: u64,
    pub errors: u64,
    pub skip_reasons: BTreeMap<String, u64>,
    pub secondary_passed: u64,
    pub secondary_failed: u64,
    pub secondary_skipped: u64,
    /// Non-skipped trials per quantale.
    pub evaluated_by_quantale: BTreeMap<String, u64>,
    pub failures: Vec<FailureRecord>,
}

/// Failure records kept per suite.
const MAX_RECORDS: usize = 20;

impl SuiteSummary {
    pub fn add(&mut self, r: &VerificationReport) {
        self.trials += 1;
        let detail = match &r.outcome {
            Outcome::Pass => {
                self.passed += 1;
                None
            }
            Outcome::Skip(why) => {
                self.skipped += 1;
                *self.skip_reasons.entry(why.clone()).or_default() += 1;
                None
            }
            Outcome::Fail(w) => {
                self.failed += 1;
                Some(format!("conclusion failed: {w}"))
            }
            Outcome::Error(e) => {
                self.errors += 1;
                Some(format!("checker error: {e}"))
            }
        };
        if !matches!(r.outcome, Outcome::Skip(_)) {
            *self.evaluated_by_quantale.entry(r.quantale.clone()).or_default() += 1;
        }
        let detail = match &r.secondary {
            Secondary::NotApplicable => detail,
            Secondary::Pass => {
                self.secondary_passed += 1;
                detail
            }
            Secondary::Skip(_) => {
                self.secondary_skipped += 1;
                detail
            }
            Secondary::Fail(w) => {
                self.secondary_failed += 1;
                Some(detail.map_or(format!("second conclusion failed: {w}"), |d| format!("{d}; second conclusion failed: {w}")))
            }
        };
        if let Some(detail) = detail {
            if self.failures.len() < MAX_RECORDS {
                self.failures.push(FailureRecord {
                    seed: r.seed,
                    trial: r.trial,
                    quantale: r.quantale.clone(),
                    monad: r.monad.clone(),
                    detail,
                });
            }
        }
    }

    /// Associative merge of two summaries.
    pub fn merge(&mut self, other: &SuiteSummary) {
        self.trials += other.trials;
        self.passed += other.passed;
        self.skipped += other.skipped;
        self.failed += other.failed;
        self.errors += other.errors;
        self.secondary_passed += other.secondary_passed;
        self.secondary_failed += other.secondary_failed;
        self.secondary_skipped += other.secondary_skipped;
        for (k, v) in &other.skip_reasons {
            *self.skip_reasons.entry(k.clone()).or_default() += v;
        }
        for (k, v) in &other.evaluated_by_quantale {
            *self.evaluated_by_quantale.entry(k.clone()).or_default() += v;
        }
        for f in &other.failures {
            if self.failures.len() < MAX_RECORDS {
                self.failures.push(f.clone());
            }
        }
    }

    pub fn fatal(&self) -> u64 {
        self.failed + self.errors + self.secondary_failed
    }

    pub fn non_skip_rate(&self) -> f64 {
        if self.trials == 0 {
            0.0
        } else {
            self.passed as f64 / self.trials as f64
        }
    }
}
