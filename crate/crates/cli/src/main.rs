//! `qmc`: one subcommand per solver, one JSON object per run on stdout.
//!
//! Exit codes: 0 success, 1 a `verify` check failed, 2 usage or input
//! errors (including cap violations), 3 numerical failure.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use output::{CliError, Envelope};

#[derive(Parser, Debug)]
#[command(name = "qmc", version, about = "Quantum Max d-Cut: exact spectra, brute-force oracle and moment relaxations")]
pub struct Cli {
    #[command(flatten)]
    pub config: RunConfig,
    #[command(subcommand)]
    pub command: Command,
}

/// Options shared by every subcommand.
#[derive(Args, Debug, Clone)]
pub struct RunConfig {
    /// Largest Hilbert-space dimension diagonalised densely.
    #[arg(long, global = true, default_value_t = qmc_core::oracle::tensor::DENSE_CAP)]
    pub dense_cap: usize,
    /// Largest `n` accepted by isotypic projectors.
    #[arg(long, global = true, default_value_t = qmc_core::oracle::tensor::PROJECTOR_CAP)]
    pub projector_cap: usize,
    /// Largest moment matrix accepted by the SDP solver.
    #[arg(long, global = true, default_value_t = 400)]
    pub solver_cap: usize,
    /// Largest irrep dimension built by Young's orthogonal form.
    #[arg(long, global = true, default_value_t = qmc_core::oracle::irrep::MATRIX_CAP)]
    pub matrix_cap: usize,
    /// Relative gap target of the SDP solver.
    #[arg(long, global = true, default_value_t = 1e-8)]
    pub gap_tol: f64,
    /// Seed for `gen --family random`.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Write the JSON to this file instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Report `runtime_ms` as 0 so repeated runs are byte-identical.
    #[arg(long, global = true)]
    pub no_timing: bool,
}

impl RunConfig {
    fn check(&self) -> Result<(), CliError> {
        let caps = [
            ("dense-cap", self.dense_cap),
            ("projector-cap", self.projector_cap),
            ("solver-cap", self.solver_cap),
            ("matrix-cap", self.matrix_cap),
        ];
        for (name, v) in caps {
            if v == 0 {
                return Err(CliError::usage(format!("--{name} must be positive")));
            }
        }
        if self.gap_tol.is_nan() || self.gap_tol <= 0.0 {
            return Err(CliError::usage("--gap-tol must be positive"));
        }
        Ok(())
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Clique eigenvalue eta_lambda of a partition.
    Eta {
        #[arg(long)]
        partition: String,
        /// Number of local levels; defaults to the height of the partition.
        #[arg(long)]
        d: Option<usize>,
    },
    /// Character value chi_lambda on a conjugacy class.
    Char {
        #[arg(long)]
        partition: String,
        /// Cycle type of the class, e.g. 2,1,1.
        #[arg(long)]
        class: String,
    },
    /// Scalar of the k-cycle class sum on the lambda block.
    Gamma {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        partition: String,
    },
    /// Littlewood-Richardson coefficient c^lambda_{mu nu}.
    Lr {
        #[arg(long)]
        lambda: String,
        #[arg(long)]
        mu: String,
        #[arg(long)]
        nu: String,
    },
    /// Maximum eigenvalue of the clique Hamiltonian.
    Clique {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        /// Report only this block.
        #[arg(long)]
        irrep: Option<String>,
    },
    /// Star graph: maximum, or the spectrum of one block.
    Star {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        irrep: Option<String>,
    },
    /// Complete bipartite graph K_{n-k,k}.
    Bipartite {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        d: usize,
        /// theorem, enumerate or merged.
        #[arg(long, default_value = "theorem")]
        mode: String,
        #[arg(long)]
        irrep: Option<String>,
    },
    /// Largest eigenvalue of H_G^d on the full tensor space, or of one irrep block.
    Brute {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        irrep: Option<String>,
        /// dense, iterative or auto.
        #[arg(long, default_value = "auto")]
        method: String,
    },
    /// Level-l moment relaxation (iteration limit from QMC_SOLVER_MAXITER).
    Npo {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        level: usize,
        #[arg(long)]
        irrep: Option<String>,
        /// Write the reduced SDP in SDPA sparse format.
        #[arg(long)]
        emit: Option<PathBuf>,
        /// Solve even when --emit is given.
        #[arg(long)]
        solve: bool,
        /// group (all products of at most l swaps) or good.
        #[arg(long, default_value = "group")]
        basis: String,
    },
    /// Cross-module identity checks.
    Verify {
        /// relations, characters, exact or all.
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 3)]
        d: usize,
    },
    /// Write a standard graph family in the edge-list format.
    Gen {
        /// clique, star, complete-bipartite, path, cycle or random.
        #[arg(long)]
        family: String,
        #[arg(long)]
        n: usize,
        /// Size of the smaller side for complete-bipartite.
        #[arg(long)]
        k: Option<usize>,
        /// Edge probability for random.
        #[arg(long, default_value_t = 0.5)]
        p: f64,
        /// Target file; the text goes into the JSON when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Eta { .. } => "eta",
            Command::Char { .. } => "char",
            Command::Gamma { .. } => "gamma",
            Command::Lr { .. } => "lr",
            Command::Clique { .. } => "clique",
            Command::Star { .. } => "star",
            Command::Bipartite { .. } => "bipartite",
            Command::Brute { .. } => "brute",
            Command::Npo { .. } => "npo",
            Command::Verify { .. } => "verify",
            Command::Gen { .. } => "gen",
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let outcome = cli.config.check().and_then(|()| commands::run(&cli.command, &cli.config));
    let runtime_ms = if cli.config.no_timing { 0 } else { start.elapsed().as_millis() as u64 };
    let (env, code) = match outcome {
        Ok(r) => (Envelope::success(cli.command.name(), r.inputs, r.result, runtime_ms), r.exit_code),
        Err(e) => {
            eprintln!("qmc {}: {}", cli.command.name(), e.message);
            let code = e.exit_code();
            (Envelope::failure(cli.command.name(), e, runtime_ms), code)
        }
    };
    let text = env.render();
    match &cli.config.output {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &text) {
                eprintln!("qmc: cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{text}"),
    }
    ExitCode::from(code)
}
