use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;
use turaev::corpus::{classical_code, rng, seed_from_env};
use turaev::moves::{compose, d_sequence, virtualize, ArcRef};
use turaev::par::ExecMode;
use turaev::prime::make_turaev_prime;
use turaev::report::{analyze_code, export_diagram, load_input, run_batch, AnalyzeOptions, ExportFormat};
use turaev::Error;

/// Turaev surfaces of classical and virtual link diagrams given as signed
/// Gauss codes. Inputs are file paths or inline codes.
#[derive(Parser)]
#[command(name = "turaev", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the JSON report of a diagram.
    Analyze {
        /// Include all-A and all-B state circle counts.
        #[arg(long)]
        states: bool,
        /// Include the carrier surface genus and realizability.
        #[arg(long)]
        carrier: bool,
        input: String,
    },
    /// Rewrite a diagram into a reduced, subcode-free one and print the moves.
    Primeify { input: String },
    /// Apply the twist family construction on one arc.
    Dseq {
        #[arg(long, value_name = "C:P")]
        arc: ArcRef,
        #[arg(long)]
        n: u32,
        input: String,
    },
    /// Connected sum of two diagrams.
    Compose {
        a: String,
        b: String,
        #[arg(long, value_name = "C:P", default_value = "0:0")]
        arc_a: ArcRef,
        #[arg(long, value_name = "C:P", default_value = "0:0")]
        arc_b: ArcRef,
    },
    /// Make one crossing virtual.
    Virtualize {
        #[arg(long)]
        label: u32,
        input: String,
    },
    /// Convert to another notation; prints an export bundle.
    Export {
        #[arg(long, value_parser = ["gauss", "json", "dt", "pd"])]
        format: String,
        /// Print only the payload.
        #[arg(long)]
        raw: bool,
        input: String,
    },
    /// Analyze every *.gauss file of a directory into a CSV file.
    Batch {
        dir: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Process files one at a time.
        #[arg(long)]
        serial: bool,
    },
    /// Write random classical diagrams; TURAEV_SEED fixes the corpus.
    Generate {
        #[arg(long, default_value_t = 10)]
        count: usize,
        #[arg(long, default_value_t = 6)]
        max_crossings: usize,
        /// Directory for the .gauss files; codes go to stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn run(cmd: Command) -> Result<String, Error> {
    match cmd {
        Command::Analyze { states, carrier, input } => {
            let code = load_input(&input)?;
            Ok(analyze_code(&code, AnalyzeOptions { states, carrier }).to_json())
        }
        Command::Primeify { input } => {
            let code = load_input(&input)?;
            let (out, log) = make_turaev_prime(&code)?;
            let moves: Vec<_> = log.entries.iter().map(|e| &e.descriptor).collect();
            let body = json!({ "input": code.render(), "output": out.render(), "moves": moves });
            Ok(format!("{body:#}\n"))
        }
        Command::Dseq { arc, n, input } => Ok(format!("{}\n", d_sequence(&load_input(&input)?, arc, n)?)),
        Command::Compose { a, b, arc_a, arc_b } => {
            Ok(format!("{}\n", compose(&load_input(&a)?, &load_input(&b)?, arc_a, arc_b)?))
        }
        Command::Virtualize { label, input } => Ok(format!("{}\n", virtualize(&load_input(&input)?, label)?)),
        Command::Export { format, raw, input } => {
            let bundle = export_diagram(&load_input(&input)?, format.parse::<ExportFormat>()?)?;
            if raw {
                let mut s = bundle.payload;
                if !s.ends_with('\n') {
                    s.push('\n');
                }
                Ok(s)
            } else {
                Ok(format!("{}\n", serde_json::to_string(&bundle).expect("bundle serializes")))
            }
        }
        Command::Batch { dir, out, serial } => {
            let mode = if serial { ExecMode::Serial } else { ExecMode::Parallel };
            let summary = run_batch(&dir, &out, mode)?;
            Ok(format!("{summary}\n"))
        }
        Command::Generate { count, max_crossings, out } => {
            let mut r = rng(seed_from_env(0));
            let codes: Vec<String> = (0..count).map(|_| classical_code(&mut r, 1, max_crossings, true).render()).collect();
            match out {
                None => Ok(codes.iter().map(|c| format!("{c}\n")).collect()),
                Some(dir) => {
                    std::fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, &e))?;
                    for (i, c) in codes.iter().enumerate() {
                        let path = dir.join(format!("gen_{:04}.gauss", i + 1));
                        std::fs::write(&path, format!("{c}\n")).map_err(|e| Error::io(&path, &e))?;
                    }
                    Ok(format!("wrote {count} codes to {}\n", dir.display()))
                }
            }
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    if e.is_input_error() {
        2
    } else if e.is_internal() {
        4
    } else {
        3
    }
}

fn main() -> ExitCode {
    std::panic::set_hook(Box::new(|info| {
        eprintln!("{}", json!({ "error": "InternalError", "message": info.to_string() }));
        std::process::exit(4);
    }));
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("{}", json!({ "error": e.kind(), "message": e.to_string() }));
            ExitCode::from(exit_code(&e))
        }
    }
}
