//! Command-line front end: reads a scenario file, runs one command and
//! reports the outcome as JSON and an exit code.

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::Value;

use subharm::scenario::{parse_scenario, Override, Scenario, Tolerances};
use subharm::testfn::{validate_testfn, Candidate, GrowthEnvelope, ValidationReport};
use subharm::uniqueness::{
    green_verdict, ibp_check_green, ibp_check_radial, radial_verdict, CriterionMode,
    CriterionReport, GreenIbpInput, IbpReport, Verdict,
};
use subharm::Error;

mod emit;

pub use emit::{format_csv, What};

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    pub const CONFIG: i32 = 1;
    pub const AXIOM: i32 = 2;
    pub const INCONCLUSIVE: i32 = 3;
    pub const UNKNOWN: i32 = 4;
    pub const IBP: i32 = 5;
}

#[derive(Debug, Parser)]
#[command(
    name = "subharm",
    version,
    about = "Subharmonic test functions and uniqueness criteria"
)]
pub struct Cli {
    /// Scenario file (JSON).
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Tolerance override; repeatable, or comma-separated.
    #[arg(
        long = "tolerance-overrides",
        global = true,
        value_name = "KEY=VAL",
        value_delimiter = ','
    )]
    pub overrides: Vec<String>,
    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    pub json_out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Radial,
    Green,
}

impl From<ModeArg> for CriterionMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Radial => CriterionMode::Radial,
            ModeArg::Green => CriterionMode::Green,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the test function and envelope against the axioms.
    Validate {
        #[arg(long)]
        mode: Option<ModeArg>,
    },
    /// Evaluate a uniqueness criterion.
    Verdict {
        #[arg(long)]
        mode: Option<ModeArg>,
    },
    /// Write plot data as CSV.
    Emit {
        #[arg(long, value_enum)]
        what: What,
        #[arg(long, value_name = "PATH")]
        out: PathBuf,
        #[arg(long)]
        mode: Option<ModeArg>,
    },
    /// Evaluate the integration-by-parts identities along two paths.
    Ibp {
        #[arg(long)]
        mode: Option<ModeArg>,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Validate { .. } => "validate",
            Command::Verdict { .. } => "verdict",
            Command::Emit { .. } => "emit",
            Command::Ibp { .. } => "ibp",
        }
    }

    fn mode(&self) -> Option<CriterionMode> {
        match self {
            Command::Validate { mode }
            | Command::Verdict { mode }
            | Command::Emit { mode, .. }
            | Command::Ibp { mode } => mode.map(Into::into),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct EnvelopeCheck {
    pub kind: CriterionMode,
    pub passed: bool,
    pub detail: Value,
}

#[derive(Debug, Clone, Serialize)]
pub struct EmitSummary {
    pub what: What,
    pub path: PathBuf,
    pub rows: usize,
}

/// Everything a run produced. Absent sections serialize as `null`.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub command: String,
    pub exit_code: i32,
    pub mode: Option<CriterionMode>,
    pub verdict: Option<Verdict>,
    pub scenario: Option<Scenario>,
    pub tolerances: Option<Tolerances>,
    pub validation: Option<ValidationReport>,
    pub envelope: Option<EnvelopeCheck>,
    pub criterion: Option<CriterionReport>,
    pub ibp: Option<IbpReport>,
    pub emit: Option<EmitSummary>,
    pub warnings: Vec<String>,
    pub error: Option<String>,
    /// Wall time; the only field that differs between identical runs.
    pub timing_ms: f64,
}

impl RunReport {
    fn new(command: &str) -> Self {
        RunReport {
            command: command.into(),
            exit_code: exit::OK,
            mode: None,
            verdict: None,
            scenario: None,
            tolerances: None,
            validation: None,
            envelope: None,
            criterion: None,
            ibp: None,
            emit: None,
            warnings: Vec::new(),
            error: None,
            timing_ms: 0.0,
        }
    }

    fn fail(&mut self, code: i32, err: impl ToString) {
        self.exit_code = code;
        self.error = Some(err.to_string());
    }

    /// Pretty JSON with keys in sorted order.
    pub fn to_json(&self) -> String {
        let v = serde_json::to_value(self).expect("report serializes");
        let mut s = serde_json::to_string_pretty(&v).expect("report serializes");
        s.push('\n');
        s
    }
}

/// Runs one command; never panics on bad input, errors end up in the report.
pub fn run(cli: &Cli) -> RunReport {
    let start = Instant::now();
    let mut report = RunReport::new(cli.command.name());
    if let Err((code, e)) = run_inner(cli, &mut report) {
        report.fail(code, e);
    }
    report.timing_ms = start.elapsed().as_secs_f64() * 1e3;
    report
}

type Step<T> = std::result::Result<T, (i32, Error)>;

fn config_err(e: Error) -> (i32, Error) {
    (exit::CONFIG, e)
}

pub fn load_scenario(path: &Path) -> subharm::Result<Scenario> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
    parse_scenario(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
}

fn run_inner(cli: &Cli, report: &mut RunReport) -> Step<()> {
    let path = cli
        .config
        .as_ref()
        .ok_or_else(|| config_err(Error::Config("--config PATH is required".into())))?;
    let mut scenario = load_scenario(path).map_err(config_err)?;
    let overrides: Vec<Override> = cli
        .overrides
        .iter()
        .map(|s| s.parse())
        .collect::<subharm::Result<_>>()
        .map_err(config_err)?;
    scenario.tolerances = scenario.tolerances.apply(&overrides).map_err(config_err)?;
    report.tolerances = Some(scenario.tolerances);
    let mode = match cli.command.mode() {
        Some(m) => m,
        None => scenario.default_mode().map_err(config_err)?,
    };
    report.mode = Some(mode);
    report.scenario = Some(scenario.clone());

    match &cli.command {
        Command::Validate { .. } => validate(&scenario, mode, report),
        Command::Verdict { .. } => {
            let c = criterion(&scenario, mode).map_err(config_err)?;
            report.exit_code = verdict_code(&c);
            report.verdict = Some(c.verdict);
            report.criterion = Some(c);
            Ok(())
        }
        Command::Emit { what, out, .. } => {
            let (header, rows, criterion) =
                emit::rows(&scenario, mode, *what).map_err(config_err)?;
            if let Some(c) = criterion {
                report.verdict = Some(c.verdict);
                report.criterion = Some(c);
            }
            std::fs::write(out, format_csv(&header, &rows)).map_err(|e| {
                config_err(Error::Config(format!(
                    "cannot write {}: {e}",
                    out.display()
                )))
            })?;
            report.emit = Some(EmitSummary {
                what: *what,
                path: out.clone(),
                rows: rows.len(),
            });
            Ok(())
        }
        Command::Ibp { .. } => {
            let r = ibp(&scenario, mode).map_err(config_err)?;
            report.warnings.extend(r.skipped.iter().cloned());
            report.exit_code = if r.passed { exit::OK } else { exit::IBP };
            report.ibp = Some(r);
            Ok(())
        }
    }
}

fn verdict_code(c: &CriterionReport) -> i32 {
    match (c.verdict, c.unknown) {
        (Verdict::ForcedZero, _) => exit::OK,
        (Verdict::Inconclusive, true) => exit::UNKNOWN,
        (Verdict::Inconclusive, false) => exit::INCONCLUSIVE,
    }
}

/// Axiom-type failures exit with 2, everything else with 1.
fn axiom_or_config(e: Error) -> (i32, Error) {
    match e {
        Error::Precondition(_) | Error::NegativeMass { .. } => (exit::AXIOM, e),
        _ => (exit::CONFIG, e),
    }
}

fn validate(scenario: &Scenario, mode: CriterionMode, report: &mut RunReport) -> Step<()> {
    let opts = scenario.tolerances.validation_options();
    let validation = match (mode, scenario.candidate().map_err(config_err)?) {
        (CriterionMode::Radial, Some((profile, compact))) => validate_testfn(
            Candidate::Radial(&profile),
            &scenario.domain,
            &compact,
            &opts,
        ),
        _ => {
            let (v, compact) = scenario.test_function(mode).map_err(axiom_or_config)?;
            if let subharm::testfn::TestFunction::Green(g) = &v {
                report.warnings.extend(g.warnings.iter().cloned());
            }
            validate_testfn(Candidate::TestFunction(&v), &v.domain(), &compact, &opts)
        }
    }
    .map_err(axiom_or_config)?;
    let passed = validation.passed;
    report.validation = Some(validation);

    let envelope = envelope_check(scenario, mode);
    let env_passed = envelope.as_ref().map_or(true, |e| e.passed);
    report.envelope = envelope;
    if !(passed && env_passed) {
        report.exit_code = exit::AXIOM;
    }
    Ok(())
}

fn envelope_check(scenario: &Scenario, mode: CriterionMode) -> Option<EnvelopeCheck> {
    let built = match mode {
        CriterionMode::Radial => scenario
            .radial
            .as_ref()
            .map(|_| scenario.radial_setup().map(|s| s.envelope)),
        CriterionMode::Green => scenario
            .green
            .as_ref()
            .map(|_| scenario.green_setup().map(|s| s.envelope)),
    }?;
    Some(match built {
        Ok(GrowthEnvelope::Radial { convexity, .. }) => EnvelopeCheck {
            kind: mode,
            passed: convexity.passed,
            detail: serde_json::json!({ "convexity": convexity }),
        },
        Ok(GrowthEnvelope::Green {
            convexity,
            laplacian,
            ..
        }) => EnvelopeCheck {
            kind: mode,
            passed: convexity.passed && laplacian.passed,
            detail: serde_json::json!({ "convexity": convexity, "laplacian": laplacian }),
        },
        Err(e) => EnvelopeCheck {
            kind: mode,
            passed: false,
            detail: Value::String(e.to_string()),
        },
    })
}

pub fn criterion(scenario: &Scenario, mode: CriterionMode) -> subharm::Result<CriterionReport> {
    let opts = scenario.tolerances.criterion();
    match mode {
        CriterionMode::Radial => {
            let s = scenario.radial_setup()?;
            radial_verdict(
                &s.envelope,
                &s.density,
                &scenario.zero_set,
                s.r0,
                s.outer,
                s.n()?,
                &opts,
            )
        }
        CriterionMode::Green => {
            let s = scenario.green_setup()?;
            green_verdict(
                &s.envelope,
                &s.q,
                &scenario.zero_set,
                &s.domain,
                s.t0,
                &opts,
            )
        }
    }
}

fn ibp(scenario: &Scenario, mode: CriterionMode) -> subharm::Result<IbpReport> {
    let tol = scenario.tolerances.ibp();
    match mode {
        CriterionMode::Radial => {
            let d = scenario.radial_density()?;
            ibp_check_radial(
                &d,
                &scenario.zero_set,
                scenario.r0()?,
                scenario.domain.radius(),
                scenario.domain.dimension(),
                &tol,
            )
        }
        CriterionMode::Green => {
            let s = scenario.green_setup()?;
            ibp_check_green(
                &GreenIbpInput {
                    q: &s.q,
                    f: Some(s.envelope.profile()),
                    zeros: Some(&scenario.zero_set),
                    domain: &s.domain,
                    t0: s.t0,
                    delta: s.delta,
                },
                &tol,
            )
        }
    }
}
