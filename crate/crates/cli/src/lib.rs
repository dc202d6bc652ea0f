//! Command-line front end.
//!
//! Exit codes: 0 proved or valid, 1 not found within the given bounds,
//! 2 usage or parse error, 3 refuted, or an invalid or unreadable
//! certificate.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use expoly::eideal::{
    parse_membership_certificate, prove_membership, read_document, BoundedVerdict, EIdealPresentation,
    SaturationPolicy, TargetRule, MEMBERSHIP_HEADER, RADICAL_HEADER,
};
use expoly::experiments::{run_experiment, ExperimentConfig, OutputFormat, EXPERIMENTS};
use expoly::laurent::{Budget, MembershipOptions};
use expoly::radical::{erad_search, parse_radical_certificate, refute_eradical, RadicalVerdict};
use expoly::selftest::{run_selftest, SelftestConfig};
use expoly::{format_epoly, parse_epoly, parse_list, EPoly, Error, Vars};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NOT_FOUND: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INVALID: i32 = 3;

/// Header of the reports printed by `member` and `erad` in structured form.
pub const QUERY_HEADER: &str = "expoly-query v1";

#[derive(Parser, Debug)]
#[command(name = "expoly", version, about = "E-ideal membership and E-radical certificates")]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse expressions and print their canonical forms.
    Parse {
        #[arg(long)]
        ideal: Option<String>,
        #[arg(long)]
        target: Option<String>,
        /// Further expressions.
        exprs: Vec<String>,
    },
    /// Bounded E-ideal membership with a certificate.
    Member(Query),
    /// Search the leveled E-radical, or refute E-radicality.
    Erad {
        #[command(flatten)]
        query: Query,
        #[arg(long, default_value_t = 1)]
        level: u32,
        /// Look for a witness that the ideal is not E-radical instead.
        #[arg(long)]
        refute: bool,
    },
    /// Check a certificate file against an ideal and target.
    Certify {
        #[arg(long)]
        file: PathBuf,
        #[arg(long)]
        ideal: String,
        /// Defaults to the target recorded in the certificate.
        #[arg(long)]
        target: Option<String>,
    },
    /// Run a named experiment.
    Experiment {
        name: String,
        #[arg(long)]
        n: Option<u32>,
        #[arg(long)]
        k: Option<u32>,
        #[arg(long)]
        depth: Option<u32>,
        #[arg(long)]
        budget: Option<u64>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Run independent steps concurrently.
        #[arg(long)]
        parallel: bool,
        /// Record wall-clock time per step.
        #[arg(long)]
        timings: bool,
    },
    /// Run the seeded property suites.
    Selftest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        cases: usize,
    },
}

#[derive(Args, Debug)]
struct Query {
    #[arg(long)]
    ideal: String,
    #[arg(long)]
    target: Option<String>,
    #[arg(long, default_value_t = 1)]
    depth: u32,
    /// gens, products, or explicit:e1;e2;...
    #[arg(long, default_value = "gens")]
    policy: String,
    /// Largest number of S-pairs per Gröbner basis.
    #[arg(long)]
    budget: Option<u64>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write the certificate here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Structured,
}

impl From<Format> for OutputFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Text => OutputFormat::Text,
            Format::Structured => OutputFormat::Structured,
        }
    }
}

#[derive(Serialize)]
struct QueryReport {
    command: &'static str,
    vars: Vec<String>,
    ideal: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    target: Option<String>,
    verdict: &'static str,
    depth: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    level: Option<u32>,
    policy: String,
    budget: u64,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    detail: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    certificate: Option<String>,
}

impl QueryReport {
    fn render(&self, format: Format) -> String {
        if format == Format::Structured {
            let body = serde_json::to_string_pretty(self).expect("reports always serialize");
            return format!("{QUERY_HEADER}\n{body}\n");
        }
        let mut out = format!("ideal: ({})^E\n", self.ideal.join(", "));
        if let Some(t) = &self.target {
            out += &format!("target: {t}\n");
        }
        out += &format!("verdict: {}", self.verdict);
        match self.level {
            Some(l) => out += &format!(" (level {l}, depth {}, policy {}, budget {})\n", self.depth, self.policy, self.budget),
            None => out += &format!(" (depth {}, policy {}, budget {})\n", self.depth, self.policy, self.budget),
        }
        for d in &self.detail {
            out += &format!("{d}\n");
        }
        if let Some(c) = &self.certificate {
            out += c;
        }
        out
    }
}

/// A failure with its exit code.
struct Fail(i32, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Budget(_) => EXIT_NOT_FOUND,
            _ => EXIT_USAGE,
        };
        Fail(code, e.to_string())
    }
}

type Outcome = std::result::Result<i32, Fail>;

/// Runs the command line `argv` (program name first).
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{text}");
            } else {
                let _ = write!(out, "{text}");
            }
            return code;
        }
    };
    let result = match cli.cmd {
        Command::Parse { ideal, target, exprs } => parse_cmd(ideal, target, exprs, out),
        Command::Member(q) => member_cmd(&q, out),
        Command::Erad { query, level, refute } => {
            if refute {
                refute_cmd(&query, out)
            } else {
                erad_cmd(&query, level, out)
            }
        }
        Command::Certify { file, ideal, target } => certify_cmd(&file, &ideal, target.as_deref(), out),
        Command::Experiment {
            name,
            n,
            k,
            depth,
            budget,
            format,
            seed,
            out: path,
            parallel,
            timings,
        } => {
            let cfg = ExperimentConfig {
                name,
                n,
                k,
                depth,
                max_spairs: budget,
                format: format.into(),
                seed,
                parallel,
                timings,
            };
            experiment_cmd(&cfg, path, out)
        }
        Command::Selftest { seed, cases } => {
            let cfg = SelftestConfig {
                seed,
                cases,
                ..SelftestConfig::default()
            };
            let report = run_selftest(&cfg);
            let _ = write!(out, "{}", report.render());
            Ok(if report.passed() { EXIT_OK } else { EXIT_NOT_FOUND })
        }
    };
    match result {
        Ok(code) => code,
        Err(Fail(code, msg)) => {
            let _ = writeln!(err, "error: {msg}");
            code
        }
    }
}

fn parse_cmd(ideal: Option<String>, target: Option<String>, exprs: Vec<String>, out: &mut dyn Write) -> Outcome {
    let mut texts: Vec<String> = exprs;
    if let Some(t) = target {
        texts.insert(0, t);
    }
    if ideal.is_none() && texts.is_empty() {
        return Err(Fail(EXIT_USAGE, "nothing to parse".into()));
    }
    let mut all = texts.clone();
    all.extend(ideal.clone());
    let vars = Vars::infer(&all);
    let _ = writeln!(out, "vars: {}", vars.names().join(", "));
    if let Some(i) = ideal {
        for g in parse_list(&i, &vars)? {
            write_parsed(out, "ideal", &g, &vars);
        }
    }
    for t in &texts {
        write_parsed(out, "expr", &parse_epoly(t, &vars)?, &vars);
    }
    Ok(EXIT_OK)
}

fn write_parsed(out: &mut dyn Write, what: &str, p: &EPoly, vars: &Vars) {
    let _ = writeln!(out, "{what}: {} (height {}, {} terms)", format_epoly(p, vars), p.height(), p.num_terms());
}

struct Setup {
    vars: Vars,
    pres: EIdealPresentation,
    target: Option<EPoly>,
    policy: SaturationPolicy,
}

fn setup(q: &Query) -> std::result::Result<Setup, Fail> {
    let mut texts = vec![q.ideal.clone()];
    texts.extend(q.target.clone());
    let explicit = q.policy.strip_prefix("explicit:");
    texts.extend(explicit.map(str::to_string));
    let vars = Vars::infer(&texts);
    let gens = parse_list(&q.ideal, &vars)?;
    let pres = EIdealPresentation::new(vars.len(), gens)?;
    let target = q.target.as_deref().map(|t| parse_epoly(t, &vars)).transpose()?;
    let rule = match (q.policy.as_str(), explicit) {
        ("gens", _) => TargetRule::GeneratorsOnly,
        ("products", _) => TargetRule::GeneratorsAndProducts,
        (_, Some(list)) => TargetRule::Explicit(parse_list(&list.replace(';', ","), &vars)?),
        (other, None) => {
            return Err(Fail(
                EXIT_USAGE,
                format!("unknown policy `{other}`; expected gens, products or explicit:e1;e2"),
            ))
        }
    };
    let mut policy = SaturationPolicy::with_depth(q.depth);
    policy.rule = rule;
    policy.membership = MembershipOptions {
        budget: budget(q.budget),
        ..MembershipOptions::default()
    };
    Ok(Setup {
        vars,
        pres,
        target,
        policy,
    })
}

fn budget(b: Option<u64>) -> Budget {
    b.map_or_else(Budget::default, |max_spairs| Budget { max_spairs })
}

fn policy_name(q: &Query) -> String {
    if q.policy.starts_with("explicit:") {
        "explicit".into()
    } else {
        q.policy.clone()
    }
}

fn report_for(command: &'static str, q: &Query, s: &Setup) -> QueryReport {
    QueryReport {
        command,
        vars: s.vars.names().to_vec(),
        ideal: s.pres.gens().iter().map(|g| format_epoly(g, &s.vars)).collect(),
        target: s.target.as_ref().map(|t| format_epoly(t, &s.vars)),
        verdict: "",
        depth: q.depth,
        level: None,
        policy: policy_name(q),
        budget: s.policy.membership.budget.max_spairs,
        detail: vec![],
        certificate: None,
    }
}

/// Writes `cert` to `--out` when given, otherwise embeds it in the report.
fn deliver(q: &Query, report: &mut QueryReport, cert: String) -> std::result::Result<(), Fail> {
    match &q.out {
        Some(path) => {
            std::fs::write(path, &cert).map_err(|e| Fail(EXIT_USAGE, format!("{}: {e}", path.display())))?;
            report.detail.push(format!("certificate written to {}", path.display()));
        }
        None => report.certificate = Some(cert),
    }
    Ok(())
}

fn require_target(s: &Setup) -> std::result::Result<&EPoly, Fail> {
    s.target
        .as_ref()
        .ok_or_else(|| Fail(EXIT_USAGE, "--target is required".into()))
}

fn member_cmd(q: &Query, out: &mut dyn Write) -> Outcome {
    let s = setup(q)?;
    let target = require_target(&s)?;
    let mut report = report_for("member", q, &s);
    let code = match prove_membership(target, &s.pres, &s.policy) {
        Ok(BoundedVerdict::Proved(cert)) => {
            report.verdict = "proved";
            deliver(q, &mut report, cert.to_text(&s.vars))?;
            EXIT_OK
        }
        Ok(BoundedVerdict::NotFoundUpToDepth { depth, normal_form }) => {
            report.verdict = "not-found";
            report.detail.push(format!(
                "not in the stage-{depth} ideal; normal form {}",
                format_epoly(&normal_form, &s.vars)
            ));
            EXIT_NOT_FOUND
        }
        Err(Error::Budget(msg)) => {
            report.verdict = "not-found";
            report.detail.push(format!("budget exhausted: {msg}"));
            EXIT_NOT_FOUND
        }
        Err(e) => return Err(e.into()),
    };
    let _ = write!(out, "{}", report.render(q.format));
    Ok(code)
}

fn erad_cmd(q: &Query, level: u32, out: &mut dyn Write) -> Outcome {
    let s = setup(q)?;
    let target = require_target(&s)?;
    let mut report = report_for("erad", q, &s);
    report.level = Some(level);
    let code = match erad_search(target, &s.pres, level, &s.policy) {
        Ok(RadicalVerdict::Proved(cert)) => {
            report.verdict = "proved";
            report.detail.push(format!(
                "certificate level {} with {} split(s)",
                cert.level,
                cert.split_count()
            ));
            if target.as_rational().is_some() && !target.is_zero() {
                report.detail.push(format!("Erad({}) = (1)", report.ideal.join(", ")));
            }
            deliver(q, &mut report, cert.to_text(&s.vars))?;
            EXIT_OK
        }
        Ok(RadicalVerdict::NotFound { max_level, depth }) => {
            report.verdict = "not-found";
            report
                .detail
                .push(format!("no certificate up to level {max_level} at stage depth {depth}"));
            EXIT_NOT_FOUND
        }
        Err(Error::Budget(msg)) => {
            report.verdict = "not-found";
            report.detail.push(format!("budget exhausted: {msg}"));
            EXIT_NOT_FOUND
        }
        Err(e) => return Err(e.into()),
    };
    let _ = write!(out, "{}", report.render(q.format));
    Ok(code)
}

fn refute_cmd(q: &Query, out: &mut dyn Write) -> Outcome {
    let s = setup(q)?;
    let mut report = report_for("erad", q, &s);
    let code = match refute_eradical(&s.pres, &s.policy)? {
        Some(r) => {
            report.verdict = "refuted";
            let f = |p: &EPoly| format_epoly(p, &s.vars);
            report.detail.push(format!("a = {}", f(&r.a)));
            report.detail.push(format!("b1 = {}", f(&r.b1)));
            report.detail.push(format!("b2 = {}", f(&r.b2)));
            report.detail.push(format!("b1*b2 in the ideal; a in (J, b1)^E and (J, b2)^E; a not in J up to depth {}", q.depth));
            let mut certs = String::new();
            for (name, c) in [("product", &r.product), ("left", &r.left), ("right", &r.right)] {
                certs += &format!("# {name}\n{}", c.to_text(&s.vars));
            }
            deliver(q, &mut report, certs)?;
            EXIT_INVALID
        }
        None => {
            report.verdict = "not-found";
            report.detail.push("no refutation among the syntactic splits".into());
            EXIT_NOT_FOUND
        }
    };
    let _ = write!(out, "{}", report.render(q.format));
    Ok(code)
}

fn certify_cmd(file: &std::path::Path, ideal: &str, target: Option<&str>, out: &mut dyn Write) -> Outcome {
    let text = std::fs::read_to_string(file).map_err(|e| Fail(EXIT_USAGE, format!("{}: {e}", file.display())))?;
    let (header, _, vars) = read_document(&text).map_err(|e| Fail(EXIT_INVALID, format!("unreadable certificate: {e}")))?;
    let gens = parse_list(ideal, &vars)?;
    let pres = EIdealPresentation::new(vars.len(), gens)?;
    let given = target.map(|t| parse_epoly(t, &vars)).transpose()?;
    let unreadable = |e: Error| Fail(EXIT_INVALID, format!("unreadable certificate: {e}"));
    let (kind, verdict, recorded) = if header == MEMBERSHIP_HEADER {
        let (cert, _) = parse_membership_certificate(&text).map_err(unreadable)?;
        let t = given.unwrap_or_else(|| cert.target.clone());
        ("membership", cert.verify(&pres, &t), t)
    } else {
        debug_assert_eq!(header, RADICAL_HEADER);
        let (cert, _) = parse_radical_certificate(&text).map_err(unreadable)?;
        let t = given.unwrap_or_else(|| cert.target.clone());
        ("radical", cert.verify(&pres, &t), t)
    };
    let _ = writeln!(out, "{kind} certificate for {}", format_epoly(&recorded, &vars));
    match verdict {
        Ok(()) => {
            let _ = writeln!(out, "valid");
            Ok(EXIT_OK)
        }
        Err(e) => {
            let _ = writeln!(out, "invalid: {e}");
            Ok(EXIT_INVALID)
        }
    }
}

fn experiment_cmd(cfg: &ExperimentConfig, path: Option<PathBuf>, out: &mut dyn Write) -> Outcome {
    if !EXPERIMENTS.contains(&cfg.name.as_str()) {
        return Err(Fail(
            EXIT_USAGE,
            format!("unknown experiment `{}`; expected one of {}", cfg.name, EXPERIMENTS.join(", ")),
        ));
    }
    let report = run_experiment(cfg)?;
    let text = report.render(cfg.format);
    match path {
        Some(p) => std::fs::write(&p, &text).map_err(|e| Fail(EXIT_USAGE, format!("{}: {e}", p.display())))?,
        None => {
            let _ = write!(out, "{text}");
        }
    }
    Ok(if report.ok() { EXIT_OK } else { EXIT_NOT_FOUND })
}
