use std::collections::BTreeMap;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use super::berge::{berge_classical, gen_berge};
use super::evt::{evt_quantales, gen_evt_closure, gen_evt_quantale, verify_evt_closure, verify_evt_quantale};
use super::gen::GeneratorConfig;
use super::maxthm::{max_trial, Variant};
use super::report::{SuiteSummary, VerificationReport};
use crate::error::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Suite {
    Max(Variant),
    EvtClosure,
    EvtQuantale,
    Berge,
}

impl Suite {
    pub fn all() -> Vec<Suite> {
        let mut v: Vec<Suite> = Variant::ALL.iter().map(|&m| Suite::Max(m)).collect();
        v.extend([Suite::EvtClosure, Suite::EvtQuantale, Suite::Berge]);
        v
    }

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Max(v) => v.name(),
            Suite::EvtClosure => "evt_closure",
            Suite::EvtQuantale => "evt_quantale",
            Suite::Berge => "berge",
        }
    }

    /// Runs one trial. Generation errors are reported as checker errors.
    pub fn trial(&self, cfg: &GeneratorConfig, trial: u64) -> VerificationReport {
        let failed = |e: Error| {
            let mut r = VerificationReport::new(self.name(), cfg.seed, trial, "-".into(), None);
            r.error(&e);
            r
        };
        match self {
            Suite::Max(v) => max_trial(cfg, *v, trial),
            Suite::EvtClosure => gen_evt_closure(cfg, trial).map_or_else(failed, |i| verify_evt_closure(&i)),
            Suite::EvtQuantale => {
                // This suite also covers the distance-distribution quantales.
                let mut c = cfg.clone();
                if c.quantales == super::gen::default_quantales() {
                    c.quantales = evt_quantales();
                }
                gen_evt_quantale(&c, trial).map_or_else(failed, |i| verify_evt_quantale(&i))
            }
            Suite::Berge => gen_berge(cfg, trial).map_or_else(failed, |i| berge_classical(&i)),
        }
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        Suite::all()
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Range(format!("unknown suite '{s}'")))
    }
}

/// Parses `all`, a suite name, or a comma-separated list of names.
pub fn parse_suites(s: &str) -> Result<Vec<Suite>, Error> {
    match s {
        "all" => Ok(Suite::all()),
        "max" => Ok(Variant::ALL.iter().map(|&v| Suite::Max(v)).collect()),
        "evt" => Ok(vec![Suite::EvtClosure, Suite::EvtQuantale]),
        _ => s.split(',').map(|p| p.trim().parse()).collect(),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CampaignReport {
    pub seed: u64,
    pub trials: u64,
    pub max_size: usize,
    pub quantales: Vec<String>,
    pub suites: BTreeMap<String, SuiteSummary>,
}

/// Smallest acceptable share of non-skipped trials per suite.
pub const MIN_NON_SKIP_RATE: f64 = 0.01;

impl CampaignReport {
    pub fn fatal(&self) -> u64 {
        self.suites.values().map(|s| s.fatal()).sum()
    }

    /// Suites whose non-skip share is below [`MIN_NON_SKIP_RATE`].
    pub fn meaningless(&self) -> Vec<String> {
        self.suites
            .iter()
            .filter(|(_, s)| s.trials > 0 && s.non_skip_rate() < MIN_NON_SKIP_RATE)
            .map(|(k, _)| k.clone())
            .collect()
    }

    pub fn passed(&self) -> bool {
        self.fatal() == 0 && self.meaningless().is_empty()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data")
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("campaign seed={} trials={} max_size={}\n", self.seed, self.trials, self.max_size);
        for (name, s) in &self.suites {
            out += &format!(
                "{name:<17} trials={} pass={} skip={} fail={} error={} non_skip={:.1}%",
                s.trials,
                s.passed,
                s.skipped,
                s.failed,
                s.errors,
                100.0 * s.non_skip_rate()
            );
            if s.secondary_passed + s.secondary_failed + s.secondary_skipped > 0 {
                out += &format!(
                    " second_conclusion(pass={} fail={} skip={})",
                    s.secondary_passed, s.secondary_failed, s.secondary_skipped
                );
            }
            out += "\n";
            for (why, n) in &s.skip_reasons {
                out += &format!("    skip {n:>6}  {why}\n");
            }
            for f in &s.failures {
                out += &format!("    FAIL seed={} trial={} {} {:?}: {}\n", f.seed, f.trial, f.quantale, f.monad, f.detail);
            }
        }
        out += &format!("verdict: {}\n", if self.passed() { "pass" } else { "FAIL" });
        out
    }
}

/// Runs `cfg.trials` trials of each suite. Trials run in parallel; results
/// are merged in trial order so reports are reproducible.
pub fn fuzz_campaign(cfg: &GeneratorConfig, suites: &[Suite]) -> Result<CampaignReport, Error> {
    cfg.validate()?;
    let mut out = BTreeMap::new();
    for suite in suites {
        let reports: Vec<VerificationReport> = (0..cfg.trials).into_par_iter().map(|t| suite.trial(cfg, t)).collect();
        let mut summary = SuiteSummary::default();
        for r in &reports {
            summary.add(r);
        }
        out.insert(suite.name().to_string(), summary);
    }
    Ok(CampaignReport {
        seed: cfg.seed,
        trials: cfg.trials,
        max_size: cfg.max_size,
        quantales: cfg.quantales.iter().map(|q| q.to_string()).collect(),
        suites: out,
    })
}
