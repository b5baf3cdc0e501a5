//! `verify-identities`: seeded random instances of the entropy balance and
//! its decomposition, with max residuals reported and a nonzero exit when
//! any tolerance is exceeded.

use crate::config::{load, pick, pick_opt};
use crate::output::{fmt17, resolve_out_path, write_text};
use crate::CliError;
use clap::Args as ClapArgs;
use cohthermo_core::verify::{run_identity_suite, standard_dims};
use serde::Deserialize;
use std::path::PathBuf;

#[derive(Debug, ClapArgs)]
pub struct Args {
    /// JSON config file; explicit flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Number of random instances.
    #[arg(long)]
    trials: Option<usize>,
    /// System dimension (with --dim-b selects a single split; default is the
    /// 2x2 through 4x8 grid).
    #[arg(long)]
    dim_a: Option<usize>,
    /// Reservoir dimension.
    #[arg(long)]
    dim_b: Option<usize>,
    /// RNG seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Output report path.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Report format.
    #[arg(long, value_parser = ["json", "csv"])]
    format: Option<String>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    trials: Option<usize>,
    dim_a: Option<usize>,
    dim_b: Option<usize>,
    seed: Option<u64>,
    out: Option<PathBuf>,
    format: Option<String>,
}

pub fn run(args: Args) -> Result<(), CliError> {
    let file: FileConfig = load(args.config.as_deref())?;
    let trials = pick(args.trials, file.trials, 504);
    let seed = pick(args.seed, file.seed, 42);
    let dim_a = pick_opt(args.dim_a, file.dim_a);
    let dim_b = pick_opt(args.dim_b, file.dim_b);
    let format = args
        .format
        .or(file.format)
        .unwrap_or_else(|| "json".to_string());
    let out_name = args
        .out
        .or(file.out)
        .unwrap_or_else(|| PathBuf::from("verify_identities.".to_string() + &format));

    if trials < 1 {
        return Err(CliError::Usage("trials must be >= 1".into()));
    }
    let dims = match (dim_a, dim_b) {
        (Some(a), Some(b)) => {
            if a < 2 || b < 2 {
                return Err(CliError::Usage(format!(
                    "dim_a and dim_b must be >= 2, got {a} and {b}"
                )));
            }
            vec![(a, b)]
        }
        (None, None) => standard_dims(),
        _ => {
            return Err(CliError::Usage(
                "dim_a and dim_b must be given together".into(),
            ))
        }
    };

    let report = run_identity_suite(trials, &dims, seed)
        .map_err(|e| CliError::Usage(format!("suite failed: {e}")))?;

    let path = resolve_out_path(&out_name)?;
    let contents = match format.as_str() {
        "json" => {
            let mut s = serde_json::to_string_pretty(&report)
                .expect("report serializes");
            s.push('\n');
            s
        }
        "csv" => {
            let header = "trials,seed,max_abs_balance_residual,max_abs_chain_residual,min_margin,min_di,min_dev,min_drift,pass";
            format!(
                "{header}\n{},{},{},{},{},{},{},{},{}\n",
                report.trials,
                report.seed,
                fmt17(report.max_abs_balance_residual),
                fmt17(report.max_abs_chain_residual),
                fmt17(report.min_margin),
                fmt17(report.min_di),
                fmt17(report.min_dev),
                fmt17(report.min_drift),
                report.pass
            )
        }
        other => return Err(CliError::Usage(format!("unknown format {other:?}"))),
    };
    write_text(&path, &contents)?;

    println!(
        "verify-identities: {} trials, max balance residual {:.3e} (tol {:.0e}), max chain residual {:.3e} (tol {:.0e}), min margin {:.3e}",
        report.trials,
        report.max_abs_balance_residual,
        report.balance_tolerance,
        report.max_abs_chain_residual,
        report.chain_tolerance,
        report.min_margin,
    );
    println!("report written to {}", path.display());

    if report.pass {
        Ok(())
    } else {
        Err(CliError::Tolerance(
            "identity residuals exceeded tolerance".into(),
        ))
    }
}
