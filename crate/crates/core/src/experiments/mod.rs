//! Named, scripted experiments with deterministic reports.
//!
//! A report lists one entry per step. Proved steps embed a certificate in
//! the text format read by the checkers, re-validated before the report is
//! returned; negative steps record the depth, policy and budget they are
//! relative to. Timings are omitted unless requested so that reports are
//! reproducible byte for byte.

mod scripts;

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::laurent::Budget;
use crate::ENGINE_VERSION;

pub const REPORT_HEADER: &str = "expoly-report v1";

pub const EXPERIMENTS: [&str; 6] = [
    "noetherian-prime-chain",
    "zariski-chain",
    "macintyre-not-fg",
    "xy-not-eradical",
    "no-prime-above",
    "prime-conditions",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OutputFormat {
    Text,
    Structured,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExperimentConfig {
    pub name: String,
    pub n: Option<u32>,
    pub k: Option<u32>,
    pub depth: Option<u32>,
    pub max_spairs: Option<u64>,
    pub format: OutputFormat,
    pub seed: u64,
    /// Run independent steps concurrently.
    pub parallel: bool,
    /// Record wall-clock time per step.
    pub timings: bool,
}

impl ExperimentConfig {
    pub fn new(name: &str) -> Self {
        ExperimentConfig {
            name: name.to_string(),
            n: None,
            k: None,
            depth: None,
            max_spairs: None,
            format: OutputFormat::Text,
            seed: 0,
            parallel: false,
            timings: false,
        }
    }

    pub(crate) fn budget(&self) -> Budget {
        Budget {
            max_spairs: self.max_spairs.unwrap_or(Budget::default().max_spairs),
        }
    }

    fn param(&self, value: Option<u32>, default: u32, lo: u32, hi: u32, what: &str) -> Result<u32> {
        let v = value.unwrap_or(default);
        if v < lo || v > hi {
            return Err(Error::Config(format!(
                "{} for {} must lie in {lo}..={hi}, got {v}",
                what, self.name
            )));
        }
        Ok(v)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Proved,
    NotFound,
    Holds,
    Violated,
    Error,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Proved => "proved",
            Verdict::NotFound => "not-found",
            Verdict::Holds => "holds",
            Verdict::Violated => "violated",
            Verdict::Error => "error",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepReport {
    pub label: String,
    pub claim: String,
    pub verdict: Verdict,
    pub vars: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub ideal: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub depth: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub level: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub policy: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget: Option<u64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub detail: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub millis: Option<u64>,
}

impl StepReport {
    pub(crate) fn new(label: &str, claim: String, vars: &crate::epoly::Vars) -> Self {
        StepReport {
            label: label.to_string(),
            claim,
            verdict: Verdict::Error,
            vars: vars.names().to_vec(),
            ideal: vec![],
            target: None,
            depth: None,
            level: None,
            policy: None,
            budget: None,
            detail: vec![],
            certificate: None,
            millis: None,
        }
    }

    pub(crate) fn failed(mut self, e: &Error) -> Self {
        self.verdict = Verdict::Error;
        self.detail.push(e.to_string());
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub experiment: String,
    pub engine: String,
    pub params: BTreeMap<String, String>,
    pub steps: Vec<StepReport>,
    pub conclusion: String,
}

impl ExperimentReport {
    /// Every step ended without an error verdict.
    pub fn ok(&self) -> bool {
        self.steps.iter().all(|s| s.verdict != Verdict::Error)
    }

    pub fn step(&self, label: &str) -> Option<&StepReport> {
        self.steps.iter().find(|s| s.label == label)
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Structured => {
                let body = serde_json::to_string_pretty(self).expect("reports always serialize");
                format!("{REPORT_HEADER}\n{body}\n")
            }
            OutputFormat::Text => self.render_text(),
        }
    }

    fn render_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{REPORT_HEADER} text");
        let _ = writeln!(out, "experiment: {}", self.experiment);
        let _ = writeln!(out, "engine: {}", self.engine);
        let params: Vec<String> = self.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
        let _ = writeln!(out, "params: {}", params.join(", "));
        for s in &self.steps {
            let _ = write!(out, "[{}] {}: {}", s.label, s.claim, s.verdict.as_str());
            match (s.verdict, s.depth, s.level) {
                (Verdict::NotFound, Some(d), _) => {
                    let _ = write!(out, " (depth {d}");
                    if let Some(p) = &s.policy {
                        let _ = write!(out, ", policy {p}");
                    }
                    if let Some(b) = s.budget {
                        let _ = write!(out, ", budget {b}");
                    }
                    let _ = write!(out, ")");
                }
                (_, _, Some(l)) => {
                    let _ = write!(out, " (level {l})");
                }
                _ => {}
            }
            if let Some(ms) = s.millis {
                let _ = write!(out, " [{ms} ms]");
            }
            out.push('\n');
            for d in &s.detail {
                let _ = writeln!(out, "    {d}");
            }
            if s.certificate.is_some() {
                let _ = writeln!(out, "    certificate embedded and re-checked");
            }
        }
        let _ = writeln!(out, "conclusion: {}", self.conclusion);
        out
    }
}

/// Reads a structured report back.
pub fn parse_report(text: &str) -> Result<ExperimentReport> {
    let (header, body) = text
        .split_once('\n')
        .ok_or_else(|| Error::Format("missing header line".into()))?;
    if header.trim_end() != REPORT_HEADER {
        return Err(Error::Format(format!("unknown header `{header}`")));
    }
    serde_json::from_str(body).map_err(|e| Error::Format(e.to_string()))
}

pub(crate) type StepFn = Box<dyn Fn() -> Vec<StepReport> + Send + Sync>;

/// A list of independent steps plus the function that draws the
/// conclusion from their results.
pub(crate) struct Plan {
    pub params: BTreeMap<String, String>,
    pub steps: Vec<StepFn>,
    pub conclude: Box<dyn Fn(&[StepReport]) -> String + Send + Sync>,
}

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    let plan = match cfg.name.as_str() {
        "noetherian-prime-chain" => {
            let n = cfg.param(cfg.n, 3, 1, 6, "n")?;
            let depth = cfg.param(cfg.depth, 1, 0, 3, "depth")?;
            scripts::prime_chain(n, depth, cfg.budget())
        }
        "zariski-chain" => {
            let k = cfg.param(cfg.k, 4, 1, 6, "k")?;
            let depth = cfg.param(cfg.depth, 2, 0, 3, "depth")?;
            scripts::zariski_chain(k, depth, cfg.budget())
        }
        "macintyre-not-fg" => {
            let n = cfg.param(cfg.n, 5, 0, 8, "n")?;
            scripts::macintyre(n, cfg.budget())
        }
        "xy-not-eradical" => {
            let depth = cfg.param(cfg.depth, 3, 1, 4, "depth")?;
            scripts::xy_not_eradical(depth, cfg.budget())
        }
        "no-prime-above" => {
            let depth = cfg.param(cfg.depth, 1, 1, 3, "depth")?;
            scripts::no_prime_above(depth, cfg.budget())
        }
        "prime-conditions" => {
            let k = cfg.param(cfg.k, 4, 1, 8, "k")?;
            scripts::prime_conditions(k, cfg.budget())
        }
        other => {
            return Err(Error::Config(format!(
                "unknown experiment `{other}`; expected one of {}",
                EXPERIMENTS.join(", ")
            )))
        }
    };
    let timed = |f: &StepFn| {
        let start = Instant::now();
        let mut r = f();
        if cfg.timings {
            let ms = start.elapsed().as_millis() as u64;
            for s in &mut r {
                s.millis = Some(ms);
            }
        }
        r
    };
    let groups: Vec<Vec<StepReport>> = if cfg.parallel {
        plan.steps.par_iter().map(timed).collect()
    } else {
        plan.steps.iter().map(timed).collect()
    };
    let steps: Vec<StepReport> = groups.into_iter().flatten().collect();
    let conclusion = (plan.conclude)(&steps);
    Ok(ExperimentReport {
        experiment: cfg.name.clone(),
        engine: ENGINE_VERSION.to_string(),
        params: plan.params,
        steps,
        conclusion,
    })
}
