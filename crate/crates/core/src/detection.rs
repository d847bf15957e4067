//! Phase sensitivity of the three detection schemes, with the
//! virtual-beam-splitter model of non-unit detection efficiency.
//!
//! Ground truth for every observable is the operator-transformation route in
//! [`crate::mixing`]: build the full interferometer map, form the measured
//! observable as a quadratic form in the input modes, and read off mean,
//! variance, and slope. The scenario-specialized coefficient sets
//! ([`DifferenceCoeffs`], [`SingleModeCoeffs`]) are kept as a secondary path
//! so the validation grid can cross-check both against the Fock-space oracle.

use num_complex::Complex64;

use crate::mixing::{
    aligned_phi_l, mzi_map, quadrature_mean_derivative, quadrature_variance, MziMap,
    QuadraticForm,
};
use crate::states::ModeMoments;
use crate::{Error, Result};

/// How the internal phase `phi` is distributed over the two arms.
///
/// `B` puts all of it in the lower arm (`phi_1 = phi`, `phi_2 = 0`); `C`
/// splits it antisymmetrically (`phi_1 = -phi_2 = phi/2`). Intensity
/// measurements cannot tell the two apart — they differ by a global phase —
/// but the homodyne quadrature can.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scenario {
    B,
    C,
}

/// Local-oscillator phase policy for homodyne detection.
///
/// `Auto` aligns `phi_l` with the phase of the mean-field slope, which
/// maximizes `|d<X>/dphi|` (for scenario `B` this is `-phi + arg<b1>`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PhiL {
    Auto,
    Fixed(f64),
}

/// Full interferometer configuration: both mixing angles, the internal
/// phase and how it is split over the arms, the local-oscillator phase
/// policy, and the detection efficiency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterferometerConfig {
    pub kappa: f64,
    pub kappa_p: f64,
    pub phi: f64,
    pub scenario: Scenario,
    pub phi_l: PhiL,
    pub eta: f64,
}

impl InterferometerConfig {
    pub fn new(kappa: f64, kappa_p: f64, phi: f64) -> Self {
        InterferometerConfig {
            kappa,
            kappa_p,
            phi,
            scenario: Scenario::B,
            phi_l: PhiL::Auto,
            eta: 1.0,
        }
    }

    pub fn with_scenario(mut self, scenario: Scenario) -> Self {
        self.scenario = scenario;
        self
    }

    pub fn with_phi_l(mut self, phi_l: PhiL) -> Self {
        self.phi_l = phi_l;
        self
    }

    pub fn with_eta(mut self, eta: f64) -> Self {
        self.eta = eta;
        self
    }

    pub fn with_phi(mut self, phi: f64) -> Self {
        self.phi = phi;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=std::f64::consts::PI).contains(&self.kappa)
            || !(0.0..=std::f64::consts::PI).contains(&self.kappa_p)
        {
            return Err(Error::InvalidParams(format!(
                "mixing angles must lie in [0, pi], got kappa={} kappa_p={}",
                self.kappa, self.kappa_p
            )));
        }
        check_eta(self.eta)
    }

    /// Arm phases `(phi_mode0, phi_mode1)` and their `phi`-rates under the
    /// configured scenario. Mode 0 is the initially empty (vacuum) port.
    pub fn arm_phases(&self) -> (f64, f64, f64, f64) {
        match self.scenario {
            Scenario::B => (0.0, self.phi, 0.0, 1.0),
            Scenario::C => (-self.phi / 2.0, self.phi / 2.0, -0.5, 0.5),
        }
    }

    /// Output map for intensity observables. Photon numbers are blind to a
    /// global phase, so the single-arm parametrization is used for both
    /// scenarios — making the intensity sensitivities scenario-invariant
    /// bit for bit.
    pub fn intensity_map(&self) -> MziMap {
        mzi_map(self.kappa, self.kappa_p, 0.0, self.phi, 0.0, 1.0)
    }

    /// Output map for the quadrature, which does see the scenario's phase
    /// split.
    pub fn homodyne_map(&self) -> MziMap {
        let (p0, p1, d0, d1) = self.arm_phases();
        mzi_map(self.kappa, self.kappa_p, p0, p1, d0, d1)
    }
}

fn check_eta(eta: f64) -> Result<()> {
    if eta > 0.0 && eta <= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidEfficiency(eta))
    }
}

/// Which measurement a [`SensitivityResult`] refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    Difference,
    Single,
    HomodyneB,
    HomodyneC,
}

/// Phase sensitivity `delta_phi = numerator_sd / slope`, with `+inf` at
/// slope-zero working points so sweeps stay plottable.
#[derive(Debug, Clone, Copy)]
pub struct SensitivityResult {
    pub scheme: Scheme,
    pub delta_phi: f64,
    pub numerator_sd: f64,
    pub slope: f64,
    pub eta: f64,
}

/// Coefficients of the output photon-number difference written on the input
/// modes: `N_d = a_d (m0 - m1) + (c_d b0^dag b1 + h.c.)` up to phase
/// conventions in `c_d`. They satisfy `a_d^2 + |c_d|^2 = 1`.
#[derive(Debug, Clone, Copy)]
pub struct DifferenceCoeffs {
    pub a_d: f64,
    pub c_d: Complex64,
}

/// Closed-form difference-observable coefficients for the single-arm phase
/// parametrization.
pub fn difference_coeffs(cfg: &InterferometerConfig) -> DifferenceCoeffs {
    let (k, kp, phi) = (cfg.kappa, cfg.kappa_p, cfg.phi);
    let a_d = 1.0 - 2.0 * ((k + kp) / 2.0).sin().powi(2) + k.sin() * kp.sin() * (1.0 - phi.cos());
    let c_d = Complex64::new(
        kp.sin().abs() * phi.sin(),
        k.sin().abs() * (1.0 - 2.0 * (kp / 2.0).cos().powi(2))
            + (1.0 - 2.0 * (k / 2.0).cos().powi(2)) * kp.sin().abs() * phi.cos(),
    );
    DifferenceCoeffs { a_d, c_d }
}

/// Coefficients of the monitored output photon number on the input modes:
/// `m4 = a0 m0 + a1 m1 + (a01 b0^dag b1 + h.c.)`; `a0 + a1 = 1`.
#[derive(Debug, Clone, Copy)]
pub struct SingleModeCoeffs {
    pub a0: f64,
    pub a1: f64,
    pub a01: Complex64,
}

impl SingleModeCoeffs {
    /// Mean and variance of the monitored output number evaluated from the
    /// coefficients — the secondary formula path the validation grid pits
    /// against the operator-transformation route.
    pub fn stats(&self, m0: &ModeMoments, m1: &ModeMoments) -> (f64, f64) {
        let q = QuadraticForm {
            a0: self.a0,
            a1: self.a1,
            g: self.a01,
        };
        (q.mean(m0, m1), q.variance(m0, m1))
    }
}

/// Closed-form single-output coefficients for the single-arm phase
/// parametrization. The sign of the interference term in `a1` is fixed by
/// the weight-sum constraint `a0 + a1 = 1`.
pub fn single_mode_coeffs(cfg: &InterferometerConfig) -> SingleModeCoeffs {
    let (k, kp, phi) = (cfg.kappa, cfg.kappa_p, cfg.phi);
    let (c2, s2) = ((k / 2.0).cos().powi(2), (k / 2.0).sin().powi(2));
    let (cp2, sp2) = ((kp / 2.0).cos().powi(2), (kp / 2.0).sin().powi(2));
    let interf = 0.5 * k.sin() * kp.sin() * phi.cos();
    let a01 = Complex64::new(0.0, 0.5)
        * (Complex64::new(k.sin() * (2.0 * cp2 - 1.0), 0.0)
            + kp.sin()
                * (c2 * Complex64::from_polar(1.0, -phi) - s2 * Complex64::from_polar(1.0, phi)));
    SingleModeCoeffs {
        a0: c2 * cp2 + s2 * sp2 - interf,
        a1: s2 * cp2 + c2 * sp2 + interf,
        a01,
    }
}

/// Folds detection efficiency into ideal statistics and forms the
/// sensitivity.
///
/// A lossy detector of efficiency `eta` maps `<m> -> eta <m>` and
/// `Var(m) -> eta^2 Var(m) + eta(1-eta)<m>`; the common `eta` factors cancel
/// in the ratio, leaving an additive `(1-eta)/eta` penalty weighted by the
/// total monitored intensity (intensity schemes) or the vacuum-noise quarter
/// (homodyne). `monitored_mean` is `<m4>` for [`Scheme::Single`],
/// `<m4> + <m5>` for [`Scheme::Difference`], and ignored for homodyne.
pub fn apply_detection_loss(
    scheme: Scheme,
    variance: f64,
    slope: f64,
    monitored_mean: f64,
    eta: f64,
) -> Result<SensitivityResult> {
    check_eta(eta)?;
    let penalty = (1.0 - eta) / eta;
    let excess = match scheme {
        Scheme::Difference | Scheme::Single => penalty * monitored_mean,
        Scheme::HomodyneB | Scheme::HomodyneC => penalty * 0.25,
    };
    let numerator_sd = (variance + excess).max(0.0).sqrt();
    let slope = slope.abs();
    let delta_phi = if slope > 0.0 {
        numerator_sd / slope
    } else {
        f64::INFINITY
    };
    Ok(SensitivityResult {
        scheme,
        delta_phi,
        numerator_sd,
        slope,
        eta,
    })
}

/// Sensitivity of the output photon-number difference `N_d = m4 - m5`.
pub fn sensitivity_difference(
    m0: &ModeMoments,
    m1: &ModeMoments,
    cfg: &InterferometerConfig,
) -> Result<SensitivityResult> {
    cfg.validate()?;
    let map = cfg.intensity_map();
    let (top, bottom) = (&map.map.rows[0], &map.map.rows[1]);
    let diff = QuadraticForm::difference(top, bottom);
    let ddiff = QuadraticForm::difference_derivative(top, &map.dmap.rows[0], bottom, &map.dmap.rows[1]);
    let total = m0.mean_n + m1.mean_n; // both outputs are monitored
    apply_detection_loss(
        Scheme::Difference,
        diff.variance(m0, m1),
        ddiff.mean(m0, m1),
        total,
        cfg.eta,
    )
}

/// Sensitivity of the single monitored output number `m4`.
pub fn sensitivity_single(
    m0: &ModeMoments,
    m1: &ModeMoments,
    cfg: &InterferometerConfig,
) -> Result<SensitivityResult> {
    cfg.validate()?;
    let map = cfg.intensity_map();
    let n4 = QuadraticForm::number(&map.map.rows[0]);
    let dn4 = QuadraticForm::number_derivative(&map.map.rows[0], &map.dmap.rows[0]);
    apply_detection_loss(
        Scheme::Single,
        n4.variance(m0, m1),
        dn4.mean(m0, m1),
        n4.mean(m0, m1),
        cfg.eta,
    )
}

/// Resolved local-oscillator phase for the configured policy.
pub fn resolve_phi_l(cfg: &InterferometerConfig, m0: &ModeMoments, m1: &ModeMoments) -> f64 {
    match cfg.phi_l {
        PhiL::Fixed(x) => x,
        PhiL::Auto => aligned_phi_l(&cfg.homodyne_map().dmap.rows[0], m0, m1),
    }
}

/// Variance of the measured quadrature `X = Re{e^{-i phi_l} b4}` for a
/// general product input (the oracle tests exercise occupied first ports).
pub fn homodyne_variance(m0: &ModeMoments, m1: &ModeMoments, cfg: &InterferometerConfig) -> f64 {
    let phi_l = resolve_phi_l(cfg, m0, m1);
    quadrature_variance(&cfg.homodyne_map().map.rows[0], phi_l, m0, m1)
}

/// Balanced-homodyne sensitivity. The local-oscillator amplitude drops out
/// of the ideal quadrature statistics, so only its phase enters.
pub fn sensitivity_homodyne(
    m0: &ModeMoments,
    m1: &ModeMoments,
    cfg: &InterferometerConfig,
) -> Result<SensitivityResult> {
    cfg.validate()?;
    let map = cfg.homodyne_map();
    let phi_l = resolve_phi_l(cfg, m0, m1);
    let variance = quadrature_variance(&map.map.rows[0], phi_l, m0, m1);
    let slope = quadrature_mean_derivative(&map.dmap.rows[0], phi_l, m0, m1);
    let scheme = match cfg.scenario {
        Scenario::B => Scheme::HomodyneB,
        Scenario::C => Scheme::HomodyneC,
    };
    apply_detection_loss(scheme, variance, slope, 0.0, cfg.eta)
}

/// Ratio of two sensitivities (deformed-algebra state over reference state).
pub fn performance_ratio(dphi_num: f64, dphi_den: f64) -> Result<f64> {
    if !dphi_num.is_finite() || !dphi_den.is_finite() {
        return Err(Error::Undefined(
            "performance ratio needs two finite sensitivities".into(),
        ));
    }
    if dphi_den == 0.0 {
        return Err(Error::Undefined("reference sensitivity is zero".into()));
    }
    Ok(dphi_num / dphi_den)
}
