use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use kform_cli::commands::{self, Overrides};

#[derive(Parser)]
#[command(name = "kform", version, about = "Construct smooth varieties with a free semilinear group action, with certificates")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the construction and write a bundle.
    Construct {
        /// Job file (TOML).
        #[arg(long)]
        input: PathBuf,
        /// Bundle directory.
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        /// Slicing passes, each with a fresh derived seed.
        #[arg(long)]
        max_retries: Option<u32>,
        #[arg(long)]
        form_degree_start: Option<u32>,
        /// Largest degree of the downstairs slicing forms.
        #[arg(long)]
        degree_cap: Option<u32>,
        /// Also certify base-point freeness and write relations of the image.
        #[arg(long)]
        emit_x_ideal: bool,
        #[arg(long)]
        threads: Option<usize>,
        /// Require every partial intersection to pass the Jacobian test.
        #[arg(long)]
        per_step_downstairs_checks: bool,
    },
    /// Re-check a bundle from its files.
    Verify {
        /// Bundle directory.
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        threads: Option<usize>,
    },
    /// List the subgroups H of the group-theoretic reduction and check the
    /// fiber product reconstruction of E.
    #[command(alias = "groups")]
    Lemma {
        /// Job file; only `[galois-group]` and `[group]` are read.
        #[arg(long)]
        input: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Construct {
            input,
            out,
            seed,
            max_retries,
            form_degree_start,
            degree_cap,
            emit_x_ideal,
            threads,
            per_step_downstairs_checks,
        } => {
            let o = Overrides {
                seed,
                max_retries,
                form_degree_start,
                degree_cap,
                emit_x_ideal,
                threads,
                per_step_downstairs_checks,
            };
            commands::construct(&input, &out, &o)
        }
        Command::Verify { input, threads } => {
            if let Some(n) = threads {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
            }
            commands::verify(&input)
        }
        Command::Lemma { input } => commands::lemma(&input),
    };
    match result {
        Ok(lines) => {
            for l in lines {
                println!("{l}");
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("kform: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
