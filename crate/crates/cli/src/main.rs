mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{Outcome, Output};

/// Verification reports for the nodal-surface Cremona transformation of P^4.
#[derive(Parser, Debug)]
#[command(name = "cremona", version)]
struct Cli {
    /// Write the JSON report to this path ("-" for stdout).
    #[arg(long, global = true, value_name = "PATH")]
    json: Option<PathBuf>,

    /// Suppress the human-readable summary.
    #[arg(long, global = true)]
    quiet: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run the F_7 pipeline on a section matrix and check every claim.
    VerifyExample {
        /// Section-matrix fixture; the bundled one is used when omitted.
        fixture: Option<PathBuf>,
    },
    /// Intersection numbers from a JSON object of surface invariants.
    Intersection {
        /// Invariants file ("-" for stdin); the worked example when omitted.
        invariants: Option<PathBuf>,
    },
    /// Replay the classification certificates.
    Classify {
        /// Print every certificate step.
        #[arg(long)]
        show_steps: bool,
        /// Only the certificate of one case (a to g).
        #[arg(long, value_name = "LABEL")]
        case: Option<String>,
    },
    /// Class searches, discriminant groups and the base change of the K3 lattices.
    Lattice,
    /// The blowup identities in the Grothendieck ring.
    Motivic {
        /// Also realize the identities by F_q-point counts of this fixture.
        #[arg(long, value_name = "FIXTURE")]
        points: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::VerifyExample { fixture } => commands::verify_example(fixture.as_deref()),
        Command::Intersection { invariants } => commands::intersection(invariants.as_deref()),
        Command::Classify { show_steps, case } => commands::classify(*show_steps, case.as_deref()),
        Command::Lattice => commands::lattice(),
        Command::Motivic { points } => commands::motivic(points.as_deref()),
    };
    match outcome {
        Ok(out) => finish(&cli, out),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn finish(cli: &Cli, out: Output) -> ExitCode {
    let to_stdout = cli.json.as_deref().is_some_and(|p| p.as_os_str() == "-");
    if !cli.quiet && !to_stdout {
        print!("{}", out.summary);
    }
    if let Some(path) = &cli.json {
        let text = serde_json::to_string_pretty(&out.report).expect("report serializes") + "\n";
        if to_stdout {
            print!("{text}");
        } else if let Err(e) = std::fs::write(path, text) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return ExitCode::from(2);
        }
    }
    match out.outcome {
        Outcome::Pass => ExitCode::SUCCESS,
        Outcome::Fail => ExitCode::from(1),
    }
}
