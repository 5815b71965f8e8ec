use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use eigenbound_core::ErrorClass;

mod commands;
mod report;

use report::Failure;

/// Upper bounds and Rayleigh-Ritz estimates for the second Laplacian
/// eigenvalue of toric and Koiso-Sakane Kähler-Einstein manifolds.
#[derive(Parser, Debug)]
#[command(name = "eigenbound", version)]
pub struct Cli {
    /// Worker threads for parallel sections (1 = serial, reproducible order).
    #[arg(long, global = true, env = "EIGENBOUND_THREADS", default_value_t = 1)]
    threads: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compute an upper bound for λ₂.
    #[command(subcommand)]
    Bound(BoundCommand),
    /// Print exact moments of a polytope.
    Moments {
        #[command(flatten)]
        input: PolytopeInput,
        #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u32).range(0..=4))]
        max_degree: u32,
        #[arg(long)]
        json: bool,
    },
    /// Rayleigh-Ritz eigenvalues for a toric metric given by a symplectic potential.
    Spectrum {
        #[command(flatten)]
        input: PolytopeInput,
        /// Potential JSON file or preset name (doran-dp6).
        #[arg(long)]
        potential: String,
        #[arg(long, default_value_t = 2)]
        degree: u32,
        /// Absolute quadrature tolerance per matrix entry.
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        /// Re-run with a tighter tolerance and report the eigenvalue change.
        #[arg(long)]
        check_convergence: bool,
        #[arg(long)]
        json: bool,
    },
    /// Validate a polytope and report Fano normalization diagnostics.
    Check {
        #[command(flatten)]
        input: PolytopeInput,
        #[arg(long)]
        json: bool,
    },
    /// Upper bounds for the five manifolds of the summary table.
    Table1 {
        #[arg(long)]
        json: bool,
    },
}

#[derive(Subcommand, Debug)]
enum BoundCommand {
    /// Bound from the moments of a toric moment polytope.
    Toric {
        #[command(flatten)]
        input: PolytopeInput,
        #[command(flatten)]
        lambda: LambdaArg,
        /// Translate the polytope so its barycenter is the origin first.
        #[arg(long)]
        recenter: bool,
        /// Print the polytope as JSON instead of bounding it.
        #[arg(long)]
        emit_polytope: bool,
        #[arg(long)]
        json: bool,
    },
    /// Bound from externally supplied moments (JSON file or preset "disc").
    Raw {
        #[arg(conflicts_with = "preset", required_unless_present = "preset")]
        file: Option<PathBuf>,
        #[arg(long)]
        preset: Option<String>,
        #[command(flatten)]
        lambda: LambdaArg,
        #[arg(long)]
        json: bool,
    },
    /// Koiso-Sakane bound from data (n_i, p_i, q_i).
    Ks {
        #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
        n: Vec<u32>,
        #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
        p: Vec<i64>,
        #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
        q: Vec<i64>,
        #[command(flatten)]
        lambda: LambdaArg,
        #[arg(long)]
        json: bool,
    },
    /// Koiso-Sakane bound for the W_{q,-q} family over CP^N × CP^N.
    KsFamily {
        #[arg(long = "N", requires = "q", required_unless_present = "table")]
        big_n: Option<u32>,
        #[arg(long)]
        q: Option<i64>,
        /// All rows of the (N, q) grid with 1 ≤ q ≤ N ≤ 3.
        #[arg(long, conflicts_with_all = ["big_n", "q"])]
        table: bool,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args, Debug, Clone)]
pub struct PolytopeInput {
    /// Polytope JSON file.
    #[arg(conflicts_with = "preset", required_unless_present = "preset")]
    file: Option<PathBuf>,
    /// Built-in polytope: cp1, cp2, cp1xcp1, dp6, threefold.
    #[arg(long)]
    preset: Option<String>,
}

#[derive(Args, Debug, Clone)]
pub struct LambdaArg {
    /// Einstein constant Λ (integer, decimal or p/q).
    #[arg(long, default_value = "1")]
    lambda: String,
}

fn exit_code(class: ErrorClass) -> u8 {
    match class {
        ErrorClass::Input => 1,
        ErrorClass::Validation => 2,
        ErrorClass::Numerical => 3,
    }
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Err(e) = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads.max(1))
        .build_global()
    {
        eprintln!("error: could not configure thread pool: {e}");
        return ExitCode::from(3);
    }
    match commands::run(cli.command, &argv[1..]) {
        Ok(out) => {
            // a closed pipe (e.g. `| head`) is not an error worth reporting
            let _ = writeln!(std::io::stdout().lock(), "{out}");
            ExitCode::SUCCESS
        }
        Err(Failure::Core(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(e.class()))
        }
        Err(Failure::Io(path, e)) => {
            eprintln!("error: cannot read {}: {e}", path.display());
            ExitCode::from(1)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn error_classes_map_to_distinct_codes() {
        assert_eq!(exit_code(ErrorClass::Input), 1);
        assert_eq!(exit_code(ErrorClass::Validation), 2);
        assert_eq!(exit_code(ErrorClass::Numerical), 3);
        let e = eigenbound_core::Error::NonConvergence("x".into());
        assert_eq!(exit_code(e.class()), 3);
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
