//! `engine-sweep`: grid sweeps of the coherent Carnot-cycle formulas (cycle
//! mode) or the photon-cavity efficiency (photon mode). Cycle rows with
//! decohering reservoirs must beat the Carnot efficiency; a violation aborts
//! the run with diagnostics.

use crate::config::load;
use crate::output::{fmt17, parse_range, resolve_out_path, write_text};
use crate::CliError;
use clap::Args as ClapArgs;
use cohthermo_core::engine::{
    efficiency, photon_cycle_efficiency, work_output, CycleSpec, PhotonCycleSpec,
};
use serde::Deserialize;
use std::path::PathBuf;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
enum Mode {
    Cycle,
    Photon,
}

#[derive(Debug, ClapArgs)]
pub struct Args {
    /// JSON config file; explicit flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Sweep family: coherent Carnot cycle or photon-cavity cycle.
    #[arg(long, value_enum)]
    mode: Option<Mode>,
    /// Hot effective temperature (cycle mode); value or start:stop:count.
    #[arg(long, allow_hyphen_values = true)]
    t_h: Option<String>,
    /// Cold effective temperature (cycle mode).
    #[arg(long, allow_hyphen_values = true)]
    t_c: Option<String>,
    /// Working-substance entropy gain per cycle (cycle mode).
    #[arg(long, allow_hyphen_values = true)]
    ds_s: Option<String>,
    /// Hot-reservoir coherence change (cycle mode).
    #[arg(long, allow_hyphen_values = true)]
    dc_h: Option<String>,
    /// Cold-reservoir coherence change (cycle mode).
    #[arg(long, allow_hyphen_values = true)]
    dc_c: Option<String>,
    /// Carnot efficiency (photon mode).
    #[arg(long, allow_hyphen_values = true)]
    eta_c: Option<String>,
    /// Coherence-decay rate Γ (photon mode).
    #[arg(long, allow_hyphen_values = true)]
    gamma: Option<String>,
    /// Per-atom initial coherence ξ_h (photon mode).
    #[arg(long, allow_hyphen_values = true)]
    xi_h: Option<String>,
    /// Hot-stroke duration (photon mode).
    #[arg(long, allow_hyphen_values = true)]
    t_hot: Option<String>,
    /// Photon-field entropy change per cycle (photon mode).
    #[arg(long, allow_hyphen_values = true)]
    ds_l: Option<String>,
    /// Output CSV path.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    mode: Option<Mode>,
    t_h: Option<String>,
    t_c: Option<String>,
    ds_s: Option<String>,
    dc_h: Option<String>,
    dc_c: Option<String>,
    eta_c: Option<String>,
    gamma: Option<String>,
    xi_h: Option<String>,
    t_hot: Option<String>,
    ds_l: Option<String>,
    out: Option<PathBuf>,
}

fn grid(
    flag: Option<String>,
    file: Option<String>,
    default: &str,
    name: &str,
) -> Result<Vec<f64>, CliError> {
    let spec = flag.or(file).unwrap_or_else(|| default.to_string());
    parse_range(&spec, name)
}

pub fn run(args: Args) -> Result<(), CliError> {
    let file: FileConfig = load(args.config.as_deref())?;
    let mode = args.mode.or(file.mode).unwrap_or(Mode::Cycle);
    let out_name = args
        .out
        .clone()
        .or_else(|| file.out.clone())
        .unwrap_or_else(|| PathBuf::from("engine_sweep.csv"));

    let csv = match mode {
        Mode::Cycle => sweep_cycle(&args, &file)?,
        Mode::Photon => sweep_photon(&args, &file)?,
    };

    let path = resolve_out_path(&out_name)?;
    write_text(&path, &csv)?;
    println!("sweep written to {}", path.display());
    Ok(())
}

fn sweep_cycle(args: &Args, file: &FileConfig) -> Result<String, CliError> {
    let t_h_grid = grid(args.t_h.clone(), file.t_h.clone(), "1.0", "t-h")?;
    let t_c_grid = grid(args.t_c.clone(), file.t_c.clone(), "0.6", "t-c")?;
    let ds_s_grid = grid(args.ds_s.clone(), file.ds_s.clone(), "0.5", "ds-s")?;
    let dc_h_grid = grid(args.dc_h.clone(), file.dc_h.clone(), "0.0", "dc-h")?;
    let dc_c_grid = grid(args.dc_c.clone(), file.dc_c.clone(), "0.0", "dc-c")?;

    let mut csv =
        String::from("t_h,t_c,ds_s,dc_h,dc_c,di_h,di_c,eta,eta_carnot,w,w_c,w_e\n");
    let mut rows = 0usize;
    for &t_h in &t_h_grid {
        for &t_c in &t_c_grid {
            for &ds_s in &ds_s_grid {
                for &dc_h in &dc_h_grid {
                    for &dc_c in &dc_c_grid {
                        let spec = CycleSpec::new(t_h, t_c, ds_s, dc_h, dc_c).map_err(|e| {
                            CliError::Usage(format!(
                                "row (t_h={t_h}, t_c={t_c}, ds_s={ds_s}, dc_h={dc_h}, dc_c={dc_c}): {e}"
                            ))
                        })?;
                        let eta = efficiency(&spec)
                            .map_err(|e| CliError::Usage(format!("row {rows}: {e}")))?;
                        let eta_carnot = spec.carnot_efficiency();
                        if dc_h < 0.0 && dc_c < 0.0 && eta <= eta_carnot {
                            return Err(CliError::Tolerance(format!(
                                "Carnot surpassing violated at (t_h={t_h}, t_c={t_c}, ds_s={ds_s}, dc_h={dc_h}, dc_c={dc_c}): η = {eta} ≤ η_C = {eta_carnot}"
                            )));
                        }
                        let (w, w_c, w_e) = work_output(&spec);
                        csv.push_str(&format!(
                            "{},{},{},{},{},{},{},{},{},{},{},{}\n",
                            fmt17(t_h),
                            fmt17(t_c),
                            fmt17(ds_s),
                            fmt17(dc_h),
                            fmt17(dc_c),
                            fmt17(spec.di_h),
                            fmt17(spec.di_c),
                            fmt17(eta),
                            fmt17(eta_carnot),
                            fmt17(w),
                            fmt17(w_c),
                            fmt17(w_e),
                        ));
                        rows += 1;
                    }
                }
            }
        }
    }
    println!("engine-sweep (cycle): {rows} rows, all decohering rows surpass Carnot");
    Ok(csv)
}

fn sweep_photon(args: &Args, file: &FileConfig) -> Result<String, CliError> {
    let eta_c_grid = grid(args.eta_c.clone(), file.eta_c.clone(), "0.5", "eta-c")?;
    let gamma_grid = grid(args.gamma.clone(), file.gamma.clone(), "1.0", "gamma")?;
    let xi_h_grid = grid(args.xi_h.clone(), file.xi_h.clone(), "0.25", "xi-h")?;
    let t_hot_grid = grid(args.t_hot.clone(), file.t_hot.clone(), "1.0", "t-hot")?;
    let ds_l_grid = grid(args.ds_l.clone(), file.ds_l.clone(), "0.25", "ds-l")?;

    let mut csv = String::from("eta_c,gamma,xi_h,t_h,ds_l,eta\n");
    let mut rows = 0usize;
    for &eta_c in &eta_c_grid {
        for &gamma in &gamma_grid {
            for &xi_h in &xi_h_grid {
                for &t_hot in &t_hot_grid {
                    for &ds_l in &ds_l_grid {
                        let spec =
                            PhotonCycleSpec::new(eta_c, gamma, xi_h, t_hot, ds_l).map_err(|e| {
                                CliError::Usage(format!(
                                    "row (eta_c={eta_c}, gamma={gamma}, xi_h={xi_h}, t_hot={t_hot}, ds_l={ds_l}): {e}"
                                ))
                            })?;
                        let eta = photon_cycle_efficiency(&spec);
                        csv.push_str(&format!(
                            "{},{},{},{},{},{}\n",
                            fmt17(eta_c),
                            fmt17(gamma),
                            fmt17(xi_h),
                            fmt17(t_hot),
                            fmt17(ds_l),
                            fmt17(eta),
                        ));
                        rows += 1;
                    }
                }
            }
        }
    }
    println!("engine-sweep (photon): {rows} rows");
    Ok(csv)
}
