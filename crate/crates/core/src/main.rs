use std::fs::File;
use std::io::{self, BufReader, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use geomfit::pipeline::io::{parse_points, write_points, Format, Header};
use geomfit::pipeline::synth::{generate, SynthSpec};
use geomfit::pipeline::{oracle_seed_from_env, run_fit, run_oracle, FitOptions, Mode, OracleTarget};
use geomfit::{FitError, Point3, Result};

#[derive(Parser)]
#[command(name = "geomfit", version, about = "Optimal plane, circle and line fits for 3D point sets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fit a point set and print a JSON report.
    Fit {
        #[arg(long)]
        input: PathBuf,
        /// Input format; defaults to the file extension (json or csv).
        #[arg(long)]
        format: Option<Format>,
        /// CSV header handling: auto, yes or no.
        #[arg(long, default_value = "auto", value_parser = parse_header)]
        header: Header,
        #[arg(long, default_value = "auto")]
        mode: Mode,
        #[arg(long, default_value_t = geomfit::circle_fit::DEFAULT_TAU_LINE, allow_negative_numbers = true)]
        tau_line: f64,
        #[arg(long, default_value_t = geomfit::plane_fit::DEFAULT_TAU_UNIQUE, allow_negative_numbers = true)]
        tau_unique: f64,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Generate a synthetic point set from a JSON spec.
    Generate {
        #[arg(long)]
        spec: PathBuf,
        /// Destination; `.json` writes a JSON array, anything else CSV.
        #[arg(long)]
        output: PathBuf,
    },
    /// Run a brute-force minimizer next to the closed-form fit.
    Oracle {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        format: Option<Format>,
        #[arg(long, default_value = "auto", value_parser = parse_header)]
        header: Header,
        #[arg(long)]
        target: OracleTarget,
    },
}

fn parse_header(s: &str) -> std::result::Result<Header, String> {
    match s {
        "auto" => Ok(Header::Auto),
        "yes" => Ok(Header::Present),
        "no" => Ok(Header::Absent),
        other => Err(format!("unknown header mode `{other}` (expected auto, yes or no)")),
    }
}

fn read_points(path: &Path, format: Option<Format>, header: Header) -> Result<Vec<Point3>> {
    let file = File::open(path).map_err(|e| FitError::Io(format!("{}: {e}", path.display())))?;
    let format = format.unwrap_or_else(|| Format::from_path(path));
    parse_points(BufReader::new(file), format, header)
}

fn emit(text: &str, output: Option<&Path>) -> Result<()> {
    match output {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| FitError::Io(format!("{}: {e}", path.display()))),
        None => {
            io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Fit { input, format, header, mode, tau_line, tau_unique, output } => {
            let points = read_points(&input, format, header)?;
            let report = run_fit(&points, &FitOptions::new(mode, tau_line, tau_unique))?;
            emit(&report.to_json()?, output.as_deref())
        }
        Command::Generate { spec, output } => {
            let mut text = String::new();
            File::open(&spec)
                .and_then(|mut f| f.read_to_string(&mut text))
                .map_err(|e| FitError::Io(format!("{}: {e}", spec.display())))?;
            let points = generate(&SynthSpec::from_json(&text)?)?;
            let file = File::create(&output)
                .map_err(|e| FitError::Io(format!("{}: {e}", output.display())))?;
            write_points(io::BufWriter::new(file), &points, Format::from_path(&output))
        }
        Command::Oracle { input, format, header, target } => {
            let points = read_points(&input, format, header)?;
            let report = run_oracle(&points, target, oracle_seed_from_env()?)?;
            let mut text = serde_json::to_string_pretty(&report).map_err(|e| FitError::Io(e.to_string()))?;
            text.push('\n');
            emit(&text, None)
        }
    }
}

fn error_json(e: &FitError) -> serde_json::Value {
    let mut body = serde_json::json!({ "code": e.code(), "message": e.to_string() });
    if let FitError::Parse { row, column, .. } = e {
        body["row"] = (*row).into();
        body["column"] = (*column).into();
    }
    serde_json::json!({ "error": body })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if e.use_stderr() => {
            let body = serde_json::json!({
                "error": { "code": "usage_error", "message": e.render().to_string().trim_end() }
            });
            eprintln!("{body}");
            return ExitCode::from(2);
        }
        Err(e) => e.exit(),
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", error_json(&e));
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
