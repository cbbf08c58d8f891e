use std::io::{Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use serde_json::Value;

use cayley_spectra::group::GroupSpec;
use cayley_spectra::job::{run, Command, ConnectionChoice, GammaChoice, JobError, JobSpec, OracleMode, OutputFormat};

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Cmd {
    Spectrum,
    Classes,
    CheckIntegrality,
    CheckTheorem1,
    CheckTheorem2,
    CharacterTable,
    VerifyAll,
}

impl From<Cmd> for Command {
    fn from(c: Cmd) -> Command {
        match c {
            Cmd::Spectrum => Command::Spectrum,
            Cmd::Classes => Command::Classes,
            Cmd::CheckIntegrality => Command::CheckIntegrality,
            Cmd::CheckTheorem1 => Command::CheckTheorem1,
            Cmd::CheckTheorem2 => Command::CheckTheorem2,
            Cmd::CharacterTable => Command::CharacterTable,
            Cmd::VerifyAll => Command::VerifyAll,
        }
    }
}

/// Exact spectra of normal Cayley digraphs.
///
/// The job is a JSON document read from `--input` or stdin; flags
/// override its fields.
#[derive(Parser, Debug)]
#[command(name = "cayley-spectra", version)]
struct Cli {
    command: Cmd,
    /// Job file; stdin when omitted (an empty stdin is an empty job).
    #[arg(long)]
    input: Option<PathBuf>,
    /// Group, e.g. `cyclic(5)`, `symmetric(3) x cyclic(2)`, or a JSON value.
    #[arg(long)]
    group: Option<String>,
    /// Connection set as JSON, e.g. `{"classes":[1]}`, `[1,2]` or `"sweep"`.
    #[arg(long)]
    connection: Option<String>,
    /// `rational`, `splitting`, or a JSON value such as `{"generators":[4]}`.
    #[arg(long)]
    gamma: Option<String>,
    /// auto | on | off | exact | floating
    #[arg(long)]
    oracle: Option<String>,
    #[arg(long)]
    tol: Option<f64>,
    /// json | table
    #[arg(long)]
    output: Option<String>,
}

fn json_or_string(s: &str) -> Value {
    serde_json::from_str(s).unwrap_or_else(|_| Value::String(s.to_string()))
}

fn load(cli: &Cli) -> Result<JobSpec, JobError> {
    let text = match &cli.input {
        Some(path) => std::fs::read_to_string(path).map_err(|e| JobError::Input {
            field: "input".into(),
            message: format!("{}: {e}", path.display()),
        })?,
        None => {
            let mut s = String::new();
            if !std::io::IsTerminal::is_terminal(&std::io::stdin()) {
                std::io::stdin().read_to_string(&mut s).map_err(|e| JobError::Input {
                    field: "input".into(),
                    message: e.to_string(),
                })?;
            }
            s
        }
    };
    let doc: Value = if text.trim().is_empty() {
        Value::Object(Default::default())
    } else {
        serde_json::from_str(&text).map_err(|e| JobError::Input {
            field: "input".into(),
            message: e.to_string(),
        })?
    };
    let mut job = JobSpec::from_json(&doc)?;
    job.command = Some(cli.command.into());
    if let Some(g) = &cli.group {
        let spec = GroupSpec::from_json(&json_or_string(g)).map_err(|e| JobError::Input {
            field: "group".into(),
            message: e.to_string(),
        })?;
        job.groups = vec![spec];
    }
    if let Some(c) = &cli.connection {
        job.connection = Some(ConnectionChoice::from_json(&json_or_string(c))?);
    }
    if let Some(g) = &cli.gamma {
        job.gamma = Some(GammaChoice::from_json(&json_or_string(g))?);
    }
    if let Some(o) = &cli.oracle {
        job.oracle = OracleMode::parse(o)?;
    }
    if let Some(t) = cli.tol {
        if t.is_nan() || t < 0.0 {
            return Err(JobError::Input {
                field: "tolerance".into(),
                message: "must be non-negative".into(),
            });
        }
        job.tolerance = t;
    }
    if let Some(o) = &cli.output {
        job.output = OutputFormat::parse(o)?;
    }
    Ok(job)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match load(&cli).and_then(|job| run(&job)) {
        Ok(outcome) => {
            let mut out = std::io::stdout().lock();
            let _ = out.write_all(outcome.output.as_bytes());
            let _ = out.flush();
            ExitCode::from(outcome.exit_code as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
