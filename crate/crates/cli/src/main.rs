use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use netbargain::{Error, Result};
use netbargain_cli::{
    analyze, balance, exit_code, gen_gap_text, gen_sparse_text, oracle_min_blockset, parse_omega,
    stabilize, Output,
};

/// Blocking sets and balanced outcomes for network bargaining games.
#[derive(Debug, Parser)]
#[command(name = "netbargain", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct PipelineArgs {
    /// Edge-list file, or `-` for stdin.
    file: PathBuf,
    /// Emit the JSON report on stdout (the default).
    #[arg(long)]
    json: bool,
    /// Write a Graphviz rendering with blocked edges dashed.
    #[arg(long, value_name = "PATH")]
    dot: Option<PathBuf>,
    /// Include per-step trace lines in the report.
    #[arg(long)]
    trace: bool,
    /// Sparsity override `P/Q`; must bound every induced subgraph.
    #[arg(long, value_name = "P/Q")]
    omega: Option<String>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Matching number, sparsity and core status.
    Analyze {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Approximate minimum blocking set with its certified bound.
    Stabilize(PipelineArgs),
    /// Blocking set, maximum matching and balanced allocation.
    Balance(PipelineArgs),
    /// Exact ground truth by enumeration.
    #[command(subcommand)]
    Oracle(OracleCommand),
    /// Instance generators; write an edge list on stdout.
    #[command(subcommand)]
    Gen(GenCommand),
}

#[derive(Debug, Subcommand)]
enum OracleCommand {
    /// Minimum blocking set of the instance.
    MinBlockset {
        file: PathBuf,
        #[arg(long, value_name = "K")]
        max_size: Option<usize>,
    },
}

#[derive(Debug, Subcommand)]
enum GenCommand {
    /// Integrality-gap instance with fixed X-Y edges.
    Gap {
        #[arg(long)]
        n: usize,
    },
    /// Seeded random graph with bounded sparsity.
    Sparse {
        #[arg(long)]
        n: usize,
        #[arg(long, value_name = "P/Q")]
        omega: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn read_input(path: &Path) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    let res = if path == Path::new("-") {
        std::io::stdin().read_to_end(&mut buf).map(|_| ())
    } else {
        std::fs::read(path).map(|b| buf = b)
    };
    res.map_err(|e| Error::input(0, format!("cannot read {}: {e}", path.display())))?;
    Ok(buf)
}

fn write_dot(out: &Output, path: &Option<PathBuf>) -> Result<()> {
    if let (Some(path), Some(dot)) = (path, &out.dot) {
        std::fs::write(path, dot)
            .map_err(|e| Error::input(0, format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(())
}

fn pipeline(
    args: &PipelineArgs,
    run: fn(&[u8], Option<netbargain::Rational>, bool) -> Result<Output>,
) -> Result<String> {
    let omega = args.omega.as_deref().map(parse_omega).transpose()?;
    let out = run(&read_input(&args.file)?, omega, args.trace)?;
    write_dot(&out, &args.dot)?;
    Ok(out.json())
}

fn execute(cli: Cli) -> Result<String> {
    match cli.command {
        Command::Analyze { file, .. } => Ok(analyze(&read_input(&file)?)?.json()),
        Command::Stabilize(args) => pipeline(&args, stabilize),
        Command::Balance(args) => pipeline(&args, balance),
        Command::Oracle(OracleCommand::MinBlockset { file, max_size }) => {
            Ok(oracle_min_blockset(&read_input(&file)?, max_size)?.json())
        }
        Command::Gen(GenCommand::Gap { n }) => gen_gap_text(n),
        Command::Gen(GenCommand::Sparse { n, omega, seed }) => {
            gen_sparse_text(n, &parse_omega(&omega)?, seed)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match std::panic::catch_unwind(|| execute(cli)) {
        Ok(Ok(text)) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Ok(Err(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e) as u8)
        }
        Err(_) => ExitCode::from(2),
    }
}
