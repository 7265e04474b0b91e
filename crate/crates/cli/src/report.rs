//! Run configuration, report envelopes and exit codes.

use std::io::Write;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use serde::Serialize;
use serde_json::Value;
use towercodes::algebra::FieldCtx;
use towercodes::tower::MAX_LEVEL;
use towercodes::Error;

use crate::{BoundsCmd, Cmd, CodeCmd, Format, GlobalOpts, SxCmd, TowerCmd, VerifyCmd};

#[derive(Clone, Debug, Serialize)]
pub struct Budgets {
    pub distance: u128,
    pub enumeration: u128,
    pub pairs: u128,
}

/// The encoding of field elements: integers are digit vectors over
/// `GF(p)` modulo `modulus` (constant term first).
#[derive(Clone, Debug, Serialize)]
pub struct FieldInfo {
    pub p: u32,
    pub m: u32,
    pub modulus: Vec<u32>,
}

/// Everything that determines a report's bytes. Thread counts are left out
/// on purpose: output does not depend on them.
#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    pub command: &'static str,
    pub q: Option<u64>,
    pub field: Option<FieldInfo>,
    pub max_level: usize,
    pub budgets: Budgets,
    pub format: Format,
    pub output: Option<String>,
    pub deterministic: bool,
    pub args: Value,
}

impl RunConfig {
    pub fn new(opts: &GlobalOpts, cmd: &Cmd) -> Self {
        let (command, q) = describe(cmd);
        let default = if command == "bounds table" { Format::Csv } else { Format::Json };
        RunConfig {
            command,
            q,
            field: q.and_then(|q| FieldCtx::with_order(q).ok()).map(|f| FieldInfo {
                p: f.p(),
                m: f.m(),
                modulus: f.modulus().to_vec(),
            }),
            max_level: MAX_LEVEL,
            budgets: Budgets {
                distance: opts.distance_budget,
                enumeration: opts.enumeration_budget,
                pairs: opts.pair_budget,
            },
            format: opts.format.unwrap_or(default),
            output: opts.output.clone(),
            deterministic: true,
            args: serde_json::to_value(cmd).expect("arguments serialize"),
        }
    }
}

fn describe(cmd: &Cmd) -> (&'static str, Option<u64>) {
    match cmd {
        Cmd::Tower(TowerCmd::Analyze { q, .. }) => ("tower analyze", Some(*q)),
        Cmd::Closure { q, .. } => ("closure", Some(*q)),
        Cmd::Code(CodeCmd::Build { q, .. }) => ("code build", Some(*q)),
        Cmd::Code(CodeCmd::Family { q, .. }) => ("code family", Some(*q)),
        Cmd::Code(CodeCmd::Certify { .. }) => ("code certify", None),
        Cmd::Code(CodeCmd::Plan { q, .. }) => ("code plan", Some(*q)),
        Cmd::Sx(SxCmd::Build { q, .. }) => ("sx build", Some(*q)),
        Cmd::Bounds(BoundsCmd::Table { q, .. }) => ("bounds table", Some(*q)),
        Cmd::Bounds(BoundsCmd::Summary { q }) => ("bounds summary", Some(*q)),
        Cmd::Verify(VerifyCmd::All { q }) => ("verify all", Some(*q)),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub check: String,
    pub detail: String,
}

impl Failure {
    pub fn new(check: impl Into<String>, detail: impl Into<String>) -> Self {
        Failure { check: check.into(), detail: detail.into() }
    }
}

#[derive(Serialize)]
struct Envelope<'a> {
    command: &'static str,
    config: &'a RunConfig,
    report: &'a Value,
    failures: &'a [Failure],
}

/// A finished command: the JSON report plus its text and CSV renderings.
pub struct Emitted {
    pub report: Value,
    pub failures: Vec<Failure>,
    pub text: String,
    pub csv: Option<String>,
}

impl Emitted {
    pub fn new(report: impl Serialize, text: String) -> Result<Self> {
        Ok(Emitted { report: serde_json::to_value(report)?, failures: Vec::new(), text, csv: None })
    }

    /// A verification error raised by the library, reported as data.
    pub fn failed(err: &Error) -> Self {
        Emitted {
            report: Value::Null,
            failures: vec![Failure::new(error_kind(err), err.to_string())],
            text: format!("verification failed: {err}\n"),
            csv: None,
        }
    }

    pub fn write(&self, config: &RunConfig) -> Result<ExitCode> {
        let body = match config.format {
            Format::Json => {
                let env = Envelope { command: config.command, config, report: &self.report, failures: &self.failures };
                serde_json::to_string_pretty(&env)? + "\n"
            }
            Format::Text => self.text.clone(),
            Format::Csv => match &self.csv {
                Some(csv) => csv.clone(),
                None => bail!("'{}' has no CSV output", config.command),
            },
        };
        match &config.output {
            Some(path) => std::fs::write(path, body).with_context(|| format!("writing {path}"))?,
            None => std::io::stdout().lock().write_all(body.as_bytes())?,
        }
        if !self.failures.is_empty() && config.format != Format::Json {
            let list = serde_json::to_string(&self.failures)?;
            eprintln!("failures: {list}");
        }
        Ok(if self.failures.is_empty() { ExitCode::SUCCESS } else { ExitCode::from(1) })
    }
}

fn error_kind(err: &Error) -> &'static str {
    match err {
        Error::EtaValuationMismatch { .. } => "eta_valuation",
        Error::DualityCheckFailed(_) => "duality",
        Error::SelfDualityCheckFailed(_) => "self_duality",
        Error::PlaceNotMapped(_) => "place_not_mapped",
        _ => "internal",
    }
}

/// Library errors that mean a computed object failed a check.
pub fn is_verification(err: &Error) -> bool {
    matches!(
        err,
        Error::EtaValuationMismatch { .. }
            | Error::DualityCheckFailed(_)
            | Error::SelfDualityCheckFailed(_)
            | Error::PlaceNotMapped(_)
            | Error::Internal(_)
    )
}

/// 1 for verification failures, 2 for everything the caller can fix.
pub fn exit_code_for(err: &anyhow::Error) -> ExitCode {
    match err.downcast_ref::<Error>() {
        Some(e) if is_verification(e) => ExitCode::from(1),
        _ => ExitCode::from(2),
    }
}
