use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use brieskorn_cli::{error_json, exit_code, render_text, run_subcommand, Job, EXIT_OK, EXIT_USAGE};

#[derive(Parser, Debug)]
#[command(
    name = "brieskorn",
    version,
    about = "Brieskorn-lattice connection data, spectra and unfolding checks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Skip the face-by-face nondegeneracy test.
    #[arg(long, global = true)]
    assume_nondegenerate: bool,
    /// Reduction-step budget for each Gröbner computation.
    #[arg(long, global = true, value_name = "STEPS")]
    budget: Option<u64>,
    /// Leave multiplication by f out of the generation closure.
    #[arg(long, global = true)]
    gc_no_r0: bool,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run the whole pipeline.
    Analyze { job: PathBuf },
    /// Milnor number from the Gröbner basis and the Newton number.
    Milnor { job: PathBuf },
    /// Adapted basis and spectrum.
    Spectrum { job: PathBuf },
    /// Connection matrices and the flatness relations.
    Connection { job: PathBuf },
    /// The (EC), (IC), (GC) conditions and a suggested deformation.
    Check { job: PathBuf },
    /// Divide an expression by the Jacobian generators of F.
    Divide {
        job: PathBuf,
        #[arg(long = "h", value_name = "EXPR")]
        h: String,
    },
}

fn emit(v: &serde_json::Value, format: Format) {
    match format {
        Format::Json => println!(
            "{}",
            serde_json::to_string_pretty(v).expect("JSON values serialize")
        ),
        Format::Text => print!("{}", render_text(v)),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() {
                EXIT_USAGE as u8
            } else {
                EXIT_OK as u8
            });
        }
    };
    let (name, path, h) = match &cli.command {
        Command::Analyze { job } => ("analyze", job, None),
        Command::Milnor { job } => ("milnor", job, None),
        Command::Spectrum { job } => ("spectrum", job, None),
        Command::Connection { job } => ("connection", job, None),
        Command::Check { job } => ("check", job, None),
        Command::Divide { job, h } => ("divide", job, Some(h.as_str())),
    };
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("cannot read {}: {e}", path.display());
            return ExitCode::from(EXIT_USAGE as u8);
        }
    };
    let mut job = match Job::from_json(&text) {
        Ok(s) => s,
        Err(e) => {
            emit(&error_json(&e), cli.format);
            return ExitCode::from(EXIT_USAGE as u8);
        }
    };
    job.flags.assume_nondegenerate |= cli.assume_nondegenerate;
    if cli.gc_no_r0 {
        job.flags.gc_include_r0 = false;
    }
    if let Some(b) = cli.budget {
        job.flags.gb_budget = b;
        job.flags.face_budget = b;
    }
    match run_subcommand(name, &job, h) {
        Ok(v) => {
            emit(&v, cli.format);
            ExitCode::from(EXIT_OK as u8)
        }
        Err(e) => {
            emit(&error_json(&e), cli.format);
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}
