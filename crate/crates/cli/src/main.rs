//! Command-line front end: parameter sweeps, working-point optimization,
//! scheme-vs-bound comparisons, deformed-vs-reference ratio studies, and
//! oracle validation, emitting deterministic CSV/JSON.

mod config;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use gcs_metrology::detection::{Scenario, Scheme};
use gcs_metrology::states::CoherentState;
use gcs_metrology::sweep::{
    evaluate_sweep, optimize, ratio_study, validate_grid, FaultInjection, SweepVariable,
};
use gcs_metrology::Error as CoreError;

use config::{resolve, OutputFormat, Resolved};
use report::cell;

#[derive(Debug, thiserror::Error)]
pub enum AppError {
    #[error("config error: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("validation failed; worst offender: {0}")]
    ValidationFailed(String),
}

impl AppError {
    fn exit_code(&self) -> u8 {
        match self {
            AppError::Config(_) | AppError::Io(_) => 2,
            AppError::ValidationFailed(_) => 4,
            AppError::Core(e) => match e {
                CoreError::NotConverged { .. } | CoreError::NoFiniteValue => 3,
                _ => 2,
            },
        }
    }
}

/// Shared flags; every JSON config field has a matching override here.
#[derive(Debug, Args)]
pub struct CommonOpts {
    /// JSON run configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// State family: gha | su11.
    #[arg(long)]
    kind: Option<String>,
    #[arg(long)]
    zeta_re: Option<f64>,
    #[arg(long)]
    zeta_im: Option<f64>,
    #[arg(long)]
    a: Option<f64>,
    #[arg(long)]
    k: Option<f64>,
    #[arg(long)]
    d: Option<f64>,
    #[arg(long)]
    e: Option<f64>,
    #[arg(long)]
    tail_tol: Option<f64>,
    /// First-splitter mixing angle in radians.
    #[arg(long)]
    kappa: Option<f64>,
    /// Second-splitter mixing angle in radians.
    #[arg(long)]
    kappa_prime: Option<f64>,
    /// First-splitter intensity transmission (alternative to --kappa).
    #[arg(long)]
    transmission: Option<f64>,
    /// Second-splitter intensity transmission (alternative to --kappa-prime).
    #[arg(long)]
    transmission_prime: Option<f64>,
    /// Homodyne-specific first-splitter angle (defaults to --kappa).
    #[arg(long)]
    hom_kappa: Option<f64>,
    /// Homodyne-specific second-splitter angle (defaults to --kappa-prime).
    #[arg(long)]
    hom_kappa_prime: Option<f64>,
    /// Phase-split scenario: b | c.
    #[arg(long)]
    scenario: Option<String>,
    /// Detection efficiency in (0, 1].
    #[arg(long)]
    eta: Option<f64>,
    /// Internal phase in radians.
    #[arg(long)]
    phi: Option<f64>,
    /// Local-oscillator phase: auto | <radians>.
    #[arg(long)]
    phi_l: Option<String>,
    /// Swept variable: phi | kappa | zeta_abs | transmission.
    #[arg(long)]
    sweep: Option<String>,
    #[arg(long)]
    start: Option<f64>,
    #[arg(long)]
    stop: Option<f64>,
    #[arg(long)]
    steps: Option<usize>,
    /// Output file (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format: csv | json.
    #[arg(long)]
    format: Option<String>,
}

#[derive(Debug, Parser)]
#[command(
    name = "gcs",
    version,
    about = "Generalized-coherent-state interferometry: sensitivities, quantum Fisher information, and Cramér-Rao bounds"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Print the single-mode moments of the configured state.
    Moments {
        #[command(flatten)]
        opts: CommonOpts,
        /// Also write the state coefficients as CSV (m,re_alpha,im_alpha,prob).
        #[arg(long)]
        dump_coeffs: Option<PathBuf>,
    },
    /// Sweep the QFIs and bounds over the first-splitter setting.
    Qfi {
        #[command(flatten)]
        opts: CommonOpts,
    },
    /// Sweep sensitivities, bounds, and QFIs over the configured variable.
    Sweep {
        #[command(flatten)]
        opts: CommonOpts,
    },
    /// Find the internal phase minimizing one scheme's sensitivity.
    Optimize {
        #[command(flatten)]
        opts: CommonOpts,
        /// Detection scheme: df | sing | hom (homodyne follows --scenario).
        #[arg(long)]
        scheme: String,
    },
    /// Optimized sensitivities for the deformed state against the su(1,1)
    /// reference with the same parameters, and their ratio.
    Ratio {
        #[command(flatten)]
        opts: CommonOpts,
    },
    /// Compare every analytic observable against the Fock-space oracle.
    Validate {
        /// Corrupt the printed single-mode coefficient path (test fixture).
        #[arg(long)]
        inject_fault: bool,
    },
}

fn emit(resolved: &Resolved, text: &str) -> Result<(), AppError> {
    match &resolved.out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn cmd_moments(opts: &CommonOpts, dump_coeffs: Option<&PathBuf>) -> Result<(), AppError> {
    let resolved = resolve(opts, |_| {})?;
    let cfg = &resolved.sweep;
    let state = CoherentState::build(&cfg.params, cfg.zeta, cfg.tail_tol, cfg.max_cutoff)?;
    let m = state.moments();
    let mut text = String::new();
    text.push_str(&format!("kind: {}\n", cfg.params.kind.label()));
    text.push_str(&format!(
        "zeta: {} {}\n",
        cell(cfg.zeta.re),
        cell(cfg.zeta.im)
    ));
    text.push_str(&format!("cutoff: {}\n", state.cutoff()));
    text.push_str(&format!("tail_bound: {}\n", cell(state.tail_bound())));
    text.push_str(&format!("mean_n: {}\n", cell(m.mean_n)));
    text.push_str(&format!("var_n: {}\n", cell(m.var_n)));
    text.push_str(&format!("exp_b: {} {}\n", cell(m.exp_b.re), cell(m.exp_b.im)));
    text.push_str(&format!(
        "exp_b2: {} {}\n",
        cell(m.exp_b2.re),
        cell(m.exp_b2.im)
    ));
    text.push_str(&format!(
        "exp_nb: {} {}\n",
        cell(m.exp_nb.re),
        cell(m.exp_nb.im)
    ));
    emit(&resolved, &text)?;
    if let Some(path) = dump_coeffs {
        let mut csv = String::from("m,re_alpha,im_alpha,prob\n");
        for (m, alpha) in state.coeffs().iter().enumerate() {
            csv.push_str(&format!(
                "{m},{},{},{}\n",
                cell(alpha.re),
                cell(alpha.im),
                cell(alpha.norm_sqr())
            ));
        }
        std::fs::write(path, csv)?;
    }
    Ok(())
}

fn cmd_rows(resolved: &Resolved) -> Result<(), AppError> {
    let rows = evaluate_sweep(&resolved.sweep)?;
    let text = match resolved.format {
        OutputFormat::Csv => report::rows_to_csv(&rows),
        OutputFormat::Json => report::rows_to_json(&rows),
    };
    emit(resolved, &text)
}

fn scheme_label(scheme: Scheme) -> &'static str {
    match scheme {
        Scheme::Difference => "difference",
        Scheme::Single => "single",
        Scheme::HomodyneB => "homodyne_b",
        Scheme::HomodyneC => "homodyne_c",
    }
}

fn cmd_optimize(opts: &CommonOpts, scheme: &str) -> Result<(), AppError> {
    let resolved = resolve(opts, |_| {})?;
    let scheme = match scheme {
        "df" => Scheme::Difference,
        "sing" => Scheme::Single,
        "hom" => match resolved.scenario {
            Scenario::B => Scheme::HomodyneB,
            Scenario::C => Scheme::HomodyneC,
        },
        other => {
            return Err(AppError::Config(format!(
                "--scheme must be df, sing, or hom, got {other:?}"
            )))
        }
    };
    let opt = optimize(&resolved.sweep, scheme)?;
    let text = format!(
        "scheme: {}\nphi_opt: {}\ndphi_min: {}\n",
        scheme_label(opt.scheme),
        cell(opt.phi_opt),
        cell(opt.dphi_min)
    );
    emit(&resolved, &text)
}

fn cmd_ratio(opts: &CommonOpts) -> Result<(), AppError> {
    use gcs_metrology::algebra::{AlgebraKind, AlgebraParams};
    let resolved = resolve(opts, |_| {})?;
    let p = &resolved.sweep.params;
    let mut num = resolved.sweep.clone();
    num.params = AlgebraParams::with_k(AlgebraKind::Gha, p.a, p.k, p.d, p.e)?;
    let mut den = resolved.sweep.clone();
    den.params = AlgebraParams::with_k(AlgebraKind::Su11, p.a, p.k, p.d, p.e)?;
    let report = ratio_study(&num, &den)?;
    let mut text = String::from("scheme,phi_opt_gha,dphi_gha,phi_opt_su,dphi_su,ratio\n");
    for entry in &report.entries {
        text.push_str(&format!(
            "{},{},{},{},{},{}\n",
            scheme_label(entry.scheme),
            cell(entry.opt_num.phi_opt),
            cell(entry.opt_num.dphi_min),
            cell(entry.opt_den.phi_opt),
            cell(entry.opt_den.dphi_min),
            entry.ratio.map(cell).unwrap_or_default()
        ));
    }
    emit(&resolved, &text)
}

fn cmd_validate(inject_fault: bool) -> Result<(), AppError> {
    let fault = if inject_fault {
        FaultInjection::SingleModeWeightSign
    } else {
        FaultInjection::None
    };
    let report = validate_grid(fault)?;
    println!("{:<10} {:>14} {:>12}  status", "check", "worst_delta", "tolerance");
    for c in &report.checks {
        println!(
            "{:<10} {:>14.6e} {:>12.1e}  {}",
            c.name,
            c.worst_delta,
            c.tolerance,
            if c.passed() { "pass" } else { "FAIL" }
        );
    }
    if report.passed() {
        Ok(())
    } else {
        Err(AppError::ValidationFailed(report.worst().name.to_string()))
    }
}

fn run(cli: Cli) -> Result<(), AppError> {
    match &cli.cmd {
        Cmd::Moments { opts, dump_coeffs } => cmd_moments(opts, dump_coeffs.as_ref()),
        Cmd::Qfi { opts } => {
            // Default geometry scan: transmission from 0 to 1.
            let resolved = resolve(opts, |cfg| {
                cfg.variable = SweepVariable::Transmission;
                cfg.start = 0.0;
                cfg.stop = 1.0;
                cfg.steps = 101;
            })?;
            cmd_rows(&resolved)
        }
        Cmd::Sweep { opts } => {
            let resolved = resolve(opts, |_| {})?;
            cmd_rows(&resolved)
        }
        Cmd::Optimize { opts, scheme } => cmd_optimize(opts, scheme),
        Cmd::Ratio { opts } => cmd_ratio(opts),
        Cmd::Validate { inject_fault } => cmd_validate(*inject_fault),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
