//! Command line front end: run simulations, verification experiments, and
//! model assumption checks from a JSON configuration.

mod config;
mod report;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use config::RunConfig;
use glsim_core::{
    assumption_check, bound_check, compatibility_residual, decay_e0, decay_rate_fit,
    equivalence_study, inviscid_study, linear_suite, manufactured_solution_study,
    stabilization_study, ExperimentReport, SimError,
};
use serde_json::json;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "glsim", about = "Ginzburg-Landau boundary feedback simulator")]
struct Cli {
    /// Print progress to stderr while running.
    #[arg(long, global = true)]
    verbose: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run one simulation and emit the energy ledger.
    Simulate {
        config: PathBuf,
        /// Write the per-step ledger as CSV to this path.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Write the JSON summary to this path instead of stdout.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Run a named verification experiment.
    Experiment {
        /// One of: linear, stabilization, inviscid, equivalence, manufactured.
        name: String,
        config: PathBuf,
    },
    /// Check feedback assumptions, data compatibility, and the geometric
    /// multiplier condition for a configuration.
    Check { config: PathBuf },
}

/// 0 success, 1 usage or configuration error, 2 numerical failure.
fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let code = match cli.cmd {
        Cmd::Simulate { config, csv, json } => cmd_simulate(&config, csv, json, cli.verbose),
        Cmd::Experiment { name, config } => cmd_experiment(&name, &config, cli.verbose),
        Cmd::Check { config } => cmd_check(&config),
    };
    ExitCode::from(code)
}

fn load_config(path: &Path) -> Result<RunConfig, u8> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        eprintln!("error: cannot read {}: {e}", path.display());
        1u8
    })?;
    RunConfig::from_str(&text).map_err(|violations| {
        for v in &violations {
            eprintln!("config error: {v}");
        }
        1u8
    })
}

fn numerical_exit(err: &SimError) -> u8 {
    match err {
        SimError::Blowup { .. } | SimError::NonConvergence { .. } | SimError::ZeroPivot(_) => 2,
        _ => 1,
    }
}

fn write_text(path: &Path, text: &str) -> Result<(), u8> {
    std::fs::write(path, text).map_err(|e| {
        eprintln!("error: cannot write {}: {e}", path.display());
        1u8
    })
}

fn cmd_simulate(
    config_path: &Path,
    csv_flag: Option<PathBuf>,
    json_flag: Option<PathBuf>,
    verbose: bool,
) -> u8 {
    let cfg = match load_config(config_path) {
        Ok(cfg) => cfg,
        Err(code) => return code,
    };
    let grid = match cfg.grid() {
        Ok(g) => g,
        Err(e) => {
            eprintln!("config error: {e}");
            return 1;
        }
    };
    let params = cfg.model_params();
    let scheme = cfg.scheme_config();
    let u0 = match cfg.initial_field(&grid) {
        Ok(u0) => u0,
        Err(msg) => {
            eprintln!("config error: {msg}");
            return 1;
        }
    };

    let stride = cfg.output.sample_stride;
    let (_, ledger) = match glsim_core::run(&grid, &params, &scheme, &u0, stride) {
        Ok(out) => out,
        Err(e) => {
            eprintln!("numerical failure: {e}");
            return numerical_exit(&e);
        }
    };
    if verbose {
        for k in 0..ledger.times.len() {
            eprintln!(
                "t={:.6} V={:.6e} F={:.6e} E={:.6e}",
                ledger.times[k], ledger.v_norm[k], ledger.energy_f[k], ledger.energy_e[k]
            );
        }
    }

    let csv_path = csv_flag.or_else(|| cfg.output.csv_path.as_ref().map(PathBuf::from));
    if let Some(path) = csv_path {
        let text = report::ledger_csv(&ledger, &params, stride);
        if let Err(code) = write_text(&path, &text) {
            return code;
        }
    }

    let summary = simulate_summary(&cfg, &grid, &params, &u0, &ledger);
    let text = report::json_text(&summary);
    let json_path = json_flag.or_else(|| cfg.output.json_path.as_ref().map(PathBuf::from));
    match json_path {
        Some(path) => {
            if let Err(code) = write_text(&path, &text) {
                return code;
            }
        }
        None => print!("{text}"),
    }
    0
}

/// End-of-run summary: final norms, a decay fit of `F`, and (for `γ < 0`) the
/// worst excursion above the exponential bound `E_0 e^{γt}`.
fn simulate_summary(
    cfg: &RunConfig,
    grid: &glsim_core::RadialGrid,
    params: &glsim_core::ModelParams,
    u0: &glsim_core::ComplexField,
    ledger: &glsim_core::EnergyLedger,
) -> serde_json::Value {
    let last = ledger.times.len() - 1;
    let fit = decay_rate_fit(&ledger.times, &ledger.energy_f, 1e-12)
        .map(|f| serde_json::to_value(f).unwrap())
        .unwrap_or(serde_json::Value::Null);
    let bound = if params.gamma < 0.0 {
        let e0 = decay_e0(u0, grid, params);
        let check = bound_check(&ledger.times, &ledger.energy_f, |t| {
            e0 * (params.gamma * t).exp()
        });
        serde_json::to_value(check).unwrap()
    } else {
        serde_json::Value::Null
    };
    json!({
        "schema": report::SCHEMA,
        "command": "simulate",
        "samples": report::row_indices(ledger.times.len(), cfg.output.sample_stride).len(),
        "steps": ledger.times.len() - 1,
        "sample_stride": cfg.output.sample_stride,
        "final": {
            "t": ledger.times[last],
            "V_norm": ledger.v_norm[last],
            "F": ledger.energy_f[last],
            "E": ledger.energy_e[last],
            "L2_interior": ledger.l2_interior[last],
        },
        "decay_fit": fit,
        "bound": bound,
    })
}

fn cmd_experiment(name: &str, config_path: &Path, verbose: bool) -> u8 {
    let cfg = match load_config(config_path) {
        Ok(cfg) => cfg,
        Err(code) => return code,
    };
    let grid = match cfg.grid() {
        Ok(g) => g,
        Err(e) => {
            eprintln!("config error: {e}");
            return 1;
        }
    };
    let params = cfg.model_params();
    let scheme = cfg.scheme_config();

    // Guard the per-study preconditions here so bad configurations surface as
    // configuration errors, not panics.
    let mut violations: Vec<&str> = Vec::new();
    match name {
        "linear" => {
            if params.kappa != 0.0 {
                violations.push("params.kappa: linear experiment needs kappa = 0");
            }
            if params.beta != 0.0 {
                violations.push("params.beta: linear experiment needs beta = 0");
            }
            if params.gamma != 0.0 {
                violations.push("params.gamma: linear experiment needs gamma = 0");
            }
        }
        "stabilization" => {
            if params.beta <= 0.0 {
                violations.push("params.beta: stabilization experiment needs beta > 0");
            }
            if params.kappa <= 0.0 {
                violations.push("params.kappa: stabilization experiment needs kappa > 0");
            }
            if params.lambda <= 0.0 {
                violations.push("params.lambda: stabilization experiment needs lambda > 0");
            }
        }
        "inviscid" => {
            if grid.dim != 2 {
                violations.push("domain.N: inviscid limit experiment needs N = 2");
            }
            if params.p != 3.0 {
                violations.push("params.p: inviscid limit experiment needs p = 3");
            }
        }
        "equivalence" => {
            if !scheme.feedback.is_identity() {
                violations.push("feedback.family: equivalence experiment needs identity feedback");
            }
        }
        "manufactured" => {}
        _ => {
            eprintln!(
                "error: unknown experiment '{name}', expected one of \
                 linear, stabilization, inviscid, equivalence, manufactured"
            );
            return 1;
        }
    }
    if !violations.is_empty() {
        for v in violations {
            eprintln!("config error: {v}");
        }
        return 1;
    }

    if verbose {
        eprintln!("running experiment '{name}' on N={} M={}", grid.dim, grid.m);
    }
    let result: glsim_core::Result<ExperimentReport> = match name {
        "linear" => linear_suite(&grid, &params, &scheme),
        "stabilization" => stabilization_study(&grid, &params, &scheme, &[params.gamma]),
        "inviscid" => {
            let epsilons: Vec<f64> = (0..5).map(|k| 10f64.powf(-1.0 - 0.5 * k as f64)).collect();
            inviscid_study(&grid, &params, &scheme, &epsilons)
        }
        "equivalence" => equivalence_study(&grid, &params, &scheme, 3),
        "manufactured" => manufactured_solution_study(&grid, &params, &scheme, 4),
        _ => unreachable!(),
    };
    let rep = match result {
        Ok(rep) => rep,
        Err(e) => {
            eprintln!("experiment failed: {e}");
            return numerical_exit(&e);
        }
    };
    let pass = rep.pass;
    let value = json!({
        "schema": report::SCHEMA,
        "command": "experiment",
        "report": serde_json::to_value(&rep).unwrap(),
    });
    let text = report::json_text(&value);
    if let Some(path) = cfg.output.json_path.as_ref() {
        if let Err(code) = write_text(Path::new(path), &text) {
            return code;
        }
    }
    print!("{text}");
    if pass {
        0
    } else {
        eprintln!("experiment '{name}' did not meet its tolerances");
        1
    }
}

fn cmd_check(config_path: &Path) -> u8 {
    let cfg = match load_config(config_path) {
        Ok(cfg) => cfg,
        Err(code) => return code,
    };
    let grid = match cfg.grid() {
        Ok(g) => g,
        Err(e) => {
            eprintln!("config error: {e}");
            return 1;
        }
    };
    let params = cfg.model_params();
    let u0 = match cfg.initial_field(&grid) {
        Ok(u0) => u0,
        Err(msg) => {
            eprintln!("config error: {msg}");
            return 1;
        }
    };

    let assumption = assumption_check(&cfg.feedback_spec(), 200, cfg.initial.seed);
    let compat = compatibility_residual(&u0, &grid, &params);
    let geometric = grid.geometric_condition_check(0.0);

    // Incompatible initial data only degrades initial-layer accuracy, so it
    // warns rather than fails.
    if compat > 1e-6 {
        eprintln!("warning: initial data compatibility residual {compat:.3e}");
    }
    let value = json!({
        "schema": report::SCHEMA,
        "command": "check",
        "feedback_assumptions": serde_json::to_value(&assumption).unwrap(),
        "compatibility_residual": compat,
        "geometric_condition": serde_json::to_value(geometric).unwrap(),
    });
    print!("{}", report::json_text(&value));
    if assumption.pass {
        0
    } else {
        1
    }
}
