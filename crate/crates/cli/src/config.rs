//! JSON run configuration and flag overrides.
//!
//! Every field of the JSON document has a matching long-form flag; flags win
//! over the file, and the file wins over built-in defaults. The resolved
//! result is the core [`SweepConfig`] plus the output destination.

use std::path::PathBuf;

use num_complex::Complex64;
use serde::Deserialize;

use gcs_metrology::algebra::{AlgebraKind, AlgebraParams};
use gcs_metrology::detection::PhiL;
use gcs_metrology::fisher::kappa_from_transmission;
use gcs_metrology::states;
use gcs_metrology::sweep::{SweepConfig, SweepVariable};

use crate::{AppError, CommonOpts};

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    #[serde(default)]
    pub state: StateSection,
    #[serde(default)]
    pub interferometer: InterferometerSection,
    #[serde(default)]
    pub sweep: SweepSection,
    #[serde(default)]
    pub output: OutputSection,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateSection {
    pub kind: Option<String>,
    pub zeta_re: Option<f64>,
    pub zeta_im: Option<f64>,
    pub a: Option<f64>,
    pub k: Option<f64>,
    pub d: Option<f64>,
    pub e: Option<f64>,
    pub tail_tol: Option<f64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InterferometerSection {
    pub kappa: Option<f64>,
    pub transmission: Option<f64>,
    pub kappa_p: Option<f64>,
    pub transmission_p: Option<f64>,
    pub hom_kappa: Option<f64>,
    pub hom_kappa_p: Option<f64>,
    pub scenario: Option<String>,
    pub phi: Option<f64>,
    pub phi_l: Option<PhiLSpec>,
    pub eta: Option<f64>,
}

/// `"auto"` or a fixed angle in radians.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum PhiLSpec {
    Fixed(f64),
    Named(String),
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    pub variable: Option<String>,
    pub start: Option<f64>,
    pub stop: Option<f64>,
    pub steps: Option<usize>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    pub path: Option<PathBuf>,
    pub format: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

/// Fully resolved run parameters.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub sweep: SweepConfig,
    pub scenario: gcs_metrology::detection::Scenario,
    pub out: Option<PathBuf>,
    pub format: OutputFormat,
}

fn bad(msg: impl Into<String>) -> AppError {
    AppError::Config(msg.into())
}

fn parse_kind(s: &str) -> Result<AlgebraKind, AppError> {
    match s {
        "gha" => Ok(AlgebraKind::Gha),
        "su11" => Ok(AlgebraKind::Su11),
        other => Err(bad(format!("state.kind must be gha or su11, got {other:?}"))),
    }
}

fn parse_variable(s: &str) -> Result<SweepVariable, AppError> {
    match s {
        "phi" => Ok(SweepVariable::Phi),
        "kappa" => Ok(SweepVariable::Kappa),
        "zeta_abs" => Ok(SweepVariable::ZetaAbs),
        "transmission" => Ok(SweepVariable::Transmission),
        other => Err(bad(format!(
            "sweep.variable must be one of phi|kappa|zeta_abs|transmission, got {other:?}"
        ))),
    }
}

fn parse_scenario(s: &str) -> Result<gcs_metrology::detection::Scenario, AppError> {
    match s {
        "b" => Ok(gcs_metrology::detection::Scenario::B),
        "c" => Ok(gcs_metrology::detection::Scenario::C),
        other => Err(bad(format!("scenario must be b or c, got {other:?}"))),
    }
}

fn parse_phi_l(s: &str) -> Result<PhiL, AppError> {
    if s == "auto" {
        return Ok(PhiL::Auto);
    }
    s.parse::<f64>()
        .map(PhiL::Fixed)
        .map_err(|_| bad(format!("phi_l must be \"auto\" or a number, got {s:?}")))
}

fn parse_format(s: &str) -> Result<OutputFormat, AppError> {
    match s {
        "csv" => Ok(OutputFormat::Csv),
        "json" => Ok(OutputFormat::Json),
        other => Err(bad(format!("format must be csv or json, got {other:?}"))),
    }
}

/// Loads the optional config file and folds the flag overrides on top.
/// `tweak_defaults` adjusts the built-in defaults (e.g. the `qfi` command's
/// transmission scan) before file and flag values are applied.
pub fn resolve(
    opts: &CommonOpts,
    tweak_defaults: impl FnOnce(&mut SweepConfig),
) -> Result<Resolved, AppError> {
    let file: FileConfig = match &opts.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| bad(format!("cannot read {}: {e}", path.display())))?;
            serde_json::from_str(&text)
                .map_err(|e| bad(format!("{}:{}: {e}", path.display(), e.line())))?
        }
        None => FileConfig::default(),
    };

    let kind = match opts.kind.as_deref().or(file.state.kind.as_deref()) {
        Some(s) => parse_kind(s)?,
        None => AlgebraKind::Gha,
    };
    let params = AlgebraParams::with_k(
        kind,
        opts.a.or(file.state.a).unwrap_or(0.5),
        opts.k.or(file.state.k).unwrap_or(1.0),
        opts.d.or(file.state.d).unwrap_or(0.2),
        opts.e.or(file.state.e).unwrap_or(0.1),
    )?;
    let zeta = Complex64::new(
        opts.zeta_re.or(file.state.zeta_re).unwrap_or(1.0),
        opts.zeta_im.or(file.state.zeta_im).unwrap_or(0.0),
    );

    let mut cfg = SweepConfig::new(params, zeta);
    tweak_defaults(&mut cfg);
    cfg.tail_tol = opts
        .tail_tol
        .or(file.state.tail_tol)
        .unwrap_or(states::DEFAULT_TAIL_TOL);

    let itf = &file.interferometer;
    // An angle may be given directly or as an intensity transmission.
    let angle = |kappa: Option<f64>, transmission: Option<f64>| -> Result<Option<f64>, AppError> {
        match (kappa, transmission) {
            (Some(k), _) => Ok(Some(k)),
            (None, Some(t)) => Ok(Some(kappa_from_transmission(t)?)),
            (None, None) => Ok(None),
        }
    };
    if let Some(k) = angle(opts.kappa.or(itf.kappa), opts.transmission.or(itf.transmission))? {
        cfg.kappa = k;
    }
    if let Some(k) = angle(
        opts.kappa_prime.or(itf.kappa_p),
        opts.transmission_prime.or(itf.transmission_p),
    )? {
        cfg.kappa_p = k;
    }
    cfg.hom_kappa = opts.hom_kappa.or(itf.hom_kappa);
    cfg.hom_kappa_p = opts.hom_kappa_prime.or(itf.hom_kappa_p);
    if let Some(phi) = opts.phi.or(itf.phi) {
        cfg.phi = phi;
    }
    if let Some(eta) = opts.eta.or(itf.eta) {
        cfg.eta = eta;
    }
    cfg.phi_l = match (&opts.phi_l, &itf.phi_l) {
        (Some(s), _) => parse_phi_l(s)?,
        (None, Some(PhiLSpec::Fixed(x))) => PhiL::Fixed(*x),
        (None, Some(PhiLSpec::Named(s))) => parse_phi_l(s)?,
        (None, None) => PhiL::Auto,
    };
    let scenario = match opts.scenario.as_deref().or(itf.scenario.as_deref()) {
        Some(s) => parse_scenario(s)?,
        None => gcs_metrology::detection::Scenario::B,
    };

    if let Some(v) = opts.sweep.as_deref().or(file.sweep.variable.as_deref()) {
        cfg.variable = parse_variable(v)?;
    }
    if let Some(x) = opts.start.or(file.sweep.start) {
        cfg.start = x;
    }
    if let Some(x) = opts.stop.or(file.sweep.stop) {
        cfg.stop = x;
    }
    if let Some(n) = opts.steps.or(file.sweep.steps) {
        cfg.steps = n;
    }

    let format = match opts.format.as_deref().or(file.output.format.as_deref()) {
        Some(s) => parse_format(s)?,
        None => OutputFormat::Csv,
    };
    let out = opts.out.clone().or(file.output.path);

    Ok(Resolved {
        sweep: cfg,
        scenario,
        out,
        format,
    })
}
