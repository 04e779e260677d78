//! Library side of the `symfam` binary, so tests can drive commands in-process.

pub mod args;
pub mod commands;
pub mod report;

use std::ffi::OsString;
use std::time::Instant;

use clap::Parser;

use args::{Cli, Command};
use report::{CommandReport, SCHEMA};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Core(symfam::Error),
    Io(String),
}

impl From<symfam::Error> for CliError {
    fn from(e: symfam::Error) -> Self {
        CliError::Core(e)
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "invalid argument: {m}"),
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use symfam::Error as E;
        match self {
            CliError::Usage(_) => EXIT_INVALID,
            CliError::Io(_) => EXIT_INTERNAL,
            CliError::Core(e) => match e {
                E::InvalidArgument(_) | E::Format(_) => EXIT_INVALID,
                E::MeasureCapExceeded { .. }
                | E::Capacity { .. }
                | E::BudgetExceeded { .. }
                | E::SearchCapExceeded { .. }
                | E::GroupTooLarge { .. } => EXIT_BUDGET,
                E::NotTransitive { .. } | E::Construction(_) => EXIT_INTERNAL,
            },
        }
    }
}

/// Result of one invocation.
#[derive(Debug)]
pub struct Outcome {
    pub exit_code: i32,
    pub stdout: String,
    pub stderr: String,
    /// Present whenever the arguments parsed.
    pub report: Option<CommandReport>,
}

/// Parses `argv` (program name first) and runs the command.
pub fn run_command<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            let text = e.render().to_string();
            let (stdout, stderr) = if code == EXIT_OK {
                (text, String::new())
            } else {
                (String::new(), text)
            };
            return Outcome {
                exit_code: code,
                stdout,
                stderr,
                report: None,
            };
        }
    };
    let words: Vec<String> = argv
        .iter()
        .skip(1)
        .map(|s| s.to_string_lossy().into_owned())
        .collect();
    let json = cli.json;
    let start = Instant::now();
    let result = dispatch(cli);
    let runtime_seconds = start.elapsed().as_secs_f64();

    let mut report = CommandReport {
        schema: SCHEMA.to_string(),
        command: words,
        records: Vec::new(),
        table: None,
        runtime_seconds,
        exit_code: EXIT_OK,
    };
    let mut stderr = String::new();
    let mut document = None;
    match result {
        Ok(out) => {
            report.records = out.records;
            report.table = out.table;
            document = out.document;
            if out.budget_exhausted {
                report.exit_code = EXIT_BUDGET;
                stderr.push_str("search budget exhausted; results are not exhaustive\n");
            }
        }
        Err(e) => {
            report.exit_code = e.exit_code();
            stderr = format!("error: {e}\n");
        }
    }
    let stdout = if json {
        report.to_json()
    } else {
        let mut s = report.to_text();
        if let Some(d) = document {
            s.push_str(&d);
        }
        s
    };
    Outcome {
        exit_code: report.exit_code,
        stdout,
        stderr,
        report: Some(report),
    }
}

fn dispatch(cli: Cli) -> Result<commands::Output, CliError> {
    match cli.command {
        Command::Family(c) => commands::family(c),
        Command::Runs(c) => commands::runs_cmd(c),
        Command::Geom(c) => commands::geom(c),
        Command::Cover(c) => commands::cover(c),
        Command::Sidon(c) => commands::sidon(c),
        Command::GBounds { n, budget } => commands::g_bounds(n, budget),
        Command::Bounds(c) => commands::bounds_cmd(c, cli.seed),
        Command::Oracle(c) => commands::oracle_cmd(c),
        Command::Compare(a) => commands::compare(a),
    }
}
