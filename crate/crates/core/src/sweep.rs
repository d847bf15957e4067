//! Parameter sweeps, working-point optimization, deformed-vs-Glauber ratio
//! studies, and the analytic-vs-oracle validation grid.
//!
//! A sweep row carries every quantity the figures need — the four detection
//! sensitivities, the three QCRBs, and the three QFIs — on a uniform grid of
//! one swept variable. Rows are independent, so with the `parallel` feature
//! they are evaluated with rayon; the sequential path is kept both as the
//! no-default fallback and as the benchmark baseline.

use num_complex::Complex64;

use crate::algebra::AlgebraParams;
use crate::detection::{
    self, sensitivity_difference, sensitivity_homodyne, sensitivity_single,
    InterferometerConfig, PhiL, Scenario, Scheme,
};
use crate::fisher::{kappa_from_transmission, qfi, QfiScenario};
use crate::oracle::{self, ModeOperator, TwoModeState};
use crate::states::{CoherentState, ModeMoments};
use crate::{Error, Result};

/// Which quantity the grid ranges over.
///
/// `Kappa` and `Transmission` replace the first-splitter setting everywhere,
/// including the homodyne-specific angles.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepVariable {
    Phi,
    Kappa,
    ZetaAbs,
    Transmission,
}

/// Full description of one sweep run.
///
/// `hom_kappa` / `hom_kappa_p` let the homodyne columns use their own
/// interferometer geometry (the homodyne optimum sits at a fully
/// transmissive first splitter, where the intensity schemes are blind);
/// unset, they follow `kappa` / `kappa_p`.
#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub params: AlgebraParams,
    pub zeta: Complex64,
    pub tail_tol: f64,
    pub max_cutoff: usize,
    pub kappa: f64,
    pub kappa_p: f64,
    pub hom_kappa: Option<f64>,
    pub hom_kappa_p: Option<f64>,
    pub phi: f64,
    pub phi_l: PhiL,
    pub eta: f64,
    pub variable: SweepVariable,
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
}

impl SweepConfig {
    pub fn new(params: AlgebraParams, zeta: Complex64) -> Self {
        use std::f64::consts::{FRAC_PI_2, PI};
        SweepConfig {
            params,
            zeta,
            tail_tol: crate::states::DEFAULT_TAIL_TOL,
            max_cutoff: crate::states::DEFAULT_MAX_CUTOFF,
            kappa: FRAC_PI_2,
            kappa_p: FRAC_PI_2,
            hom_kappa: None,
            hom_kappa_p: None,
            phi: FRAC_PI_2,
            phi_l: PhiL::Auto,
            eta: 1.0,
            variable: SweepVariable::Phi,
            start: 0.01,
            stop: PI - 0.01,
            steps: 200,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        if self.steps < 2 {
            return Err(Error::InvalidParams(format!(
                "sweep needs at least 2 steps, got {}",
                self.steps
            )));
        }
        if !(self.start < self.stop) {
            return Err(Error::InvalidParams(format!(
                "sweep start {} must be below stop {}",
                self.start, self.stop
            )));
        }
        self.intensity_cfg(self.phi).validate()?;
        self.homodyne_cfg(self.phi, Scenario::B).validate()
    }

    fn intensity_cfg(&self, phi: f64) -> InterferometerConfig {
        InterferometerConfig::new(self.kappa, self.kappa_p, phi).with_eta(self.eta)
    }

    fn homodyne_cfg(&self, phi: f64, scenario: Scenario) -> InterferometerConfig {
        InterferometerConfig::new(
            self.hom_kappa.unwrap_or(self.kappa),
            self.hom_kappa_p.unwrap_or(self.kappa_p),
            phi,
        )
        .with_scenario(scenario)
        .with_phi_l(self.phi_l)
        .with_eta(self.eta)
    }

    /// Config at one grid point of the swept variable.
    fn at(&self, x: f64) -> Result<SweepConfig> {
        let mut cfg = self.clone();
        match self.variable {
            SweepVariable::Phi => cfg.phi = x,
            SweepVariable::Kappa => {
                cfg.kappa = x;
                cfg.hom_kappa = Some(x);
            }
            SweepVariable::Transmission => {
                let kappa = kappa_from_transmission(x)?;
                cfg.kappa = kappa;
                cfg.hom_kappa = Some(kappa);
            }
            SweepVariable::ZetaAbs => {
                let dir = if self.zeta.norm() > 0.0 {
                    self.zeta / self.zeta.norm()
                } else {
                    Complex64::new(1.0, 0.0)
                };
                cfg.zeta = dir * x;
            }
        }
        Ok(cfg)
    }

    fn state_moments(&self) -> Result<ModeMoments> {
        Ok(
            CoherentState::build(&self.params, self.zeta, self.tail_tol, self.max_cutoff)?
                .moments(),
        )
    }
}

/// One grid point. `None` marks a diverging or undefined entry (rendered as
/// an empty CSV cell / JSON null).
#[derive(Debug, Clone, Copy)]
pub struct SweepRow {
    pub x: f64,
    pub dphi_df: Option<f64>,
    pub dphi_sing: Option<f64>,
    pub dphi_hom_b: Option<f64>,
    pub dphi_hom_c: Option<f64>,
    pub qcrb_a: Option<f64>,
    pub qcrb_b: Option<f64>,
    pub qcrb_c: Option<f64>,
    pub qfi_a: Option<f64>,
    pub qfi_b: Option<f64>,
    pub qfi_c: Option<f64>,
}

fn finite(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

fn qcrb_of(qfi: Option<f64>) -> Option<f64> {
    qfi.and_then(|f| (f > 0.0).then(|| 1.0 / f.sqrt()))
}

/// Evaluates every column at one value of the swept variable.
pub fn evaluate_point(base: &SweepConfig, x: f64) -> Result<SweepRow> {
    let cfg = base.at(x)?;
    let m1 = cfg.state_moments()?;
    let vac = ModeMoments::vacuum();

    let icfg = cfg.intensity_cfg(cfg.phi);
    let dphi_df = finite(sensitivity_difference(&vac, &m1, &icfg)?.delta_phi);
    let dphi_sing = finite(sensitivity_single(&vac, &m1, &icfg)?.delta_phi);
    let hb = cfg.homodyne_cfg(cfg.phi, Scenario::B);
    let hc = cfg.homodyne_cfg(cfg.phi, Scenario::C);
    let dphi_hom_b = finite(sensitivity_homodyne(&vac, &m1, &hb)?.delta_phi);
    let dphi_hom_c = finite(sensitivity_homodyne(&vac, &m1, &hc)?.delta_phi);

    // Scenario A pairs with the intensity geometry; B and C with the
    // homodyne geometry when that differs.
    let qfi_a = match qfi(icfg.kappa, &vac, &m1, QfiScenario::A) {
        Ok(f) => finite(f),
        Err(Error::DegenerateInput(_)) => None,
        Err(e) => return Err(e),
    };
    let qfi_b = finite(qfi(hb.kappa, &vac, &m1, QfiScenario::B)?);
    let qfi_c = finite(qfi(hc.kappa, &vac, &m1, QfiScenario::C)?);

    Ok(SweepRow {
        x,
        dphi_df,
        dphi_sing,
        dphi_hom_b,
        dphi_hom_c,
        qcrb_a: qcrb_of(qfi_a),
        qcrb_b: qcrb_of(qfi_b),
        qcrb_c: qcrb_of(qfi_c),
        qfi_a,
        qfi_b,
        qfi_c,
    })
}

/// The uniform grid of swept values.
pub fn sweep_grid(cfg: &SweepConfig) -> Vec<f64> {
    let h = (cfg.stop - cfg.start) / (cfg.steps - 1) as f64;
    (0..cfg.steps).map(|i| cfg.start + h * i as f64).collect()
}

/// Sequential sweep evaluation.
pub fn evaluate_sweep_seq(cfg: &SweepConfig) -> Result<Vec<SweepRow>> {
    cfg.validate()?;
    sweep_grid(cfg).iter().map(|&x| evaluate_point(cfg, x)).collect()
}

/// Rayon-parallel sweep evaluation; rows come back in grid order.
#[cfg(feature = "parallel")]
pub fn evaluate_sweep_par(cfg: &SweepConfig) -> Result<Vec<SweepRow>> {
    use rayon::prelude::*;
    cfg.validate()?;
    sweep_grid(cfg)
        .par_iter()
        .map(|&x| evaluate_point(cfg, x))
        .collect()
}

/// Default entry point: parallel when the `parallel` feature is on.
pub fn evaluate_sweep(cfg: &SweepConfig) -> Result<Vec<SweepRow>> {
    #[cfg(feature = "parallel")]
    {
        evaluate_sweep_par(cfg)
    }
    #[cfg(not(feature = "parallel"))]
    {
        evaluate_sweep_seq(cfg)
    }
}

/// Result of a working-point search.
#[derive(Debug, Clone, Copy)]
pub struct Optimum {
    pub scheme: Scheme,
    pub phi_opt: f64,
    pub dphi_min: f64,
}

const COARSE_POINTS: usize = 721;
const GOLDEN_TOL: f64 = 1e-8;

fn scheme_sensitivity(
    cfg: &SweepConfig,
    scheme: Scheme,
    m1: &ModeMoments,
    phi: f64,
) -> Result<f64> {
    let vac = ModeMoments::vacuum();
    let r = match scheme {
        Scheme::Difference => sensitivity_difference(&vac, m1, &cfg.intensity_cfg(phi))?,
        Scheme::Single => sensitivity_single(&vac, m1, &cfg.intensity_cfg(phi))?,
        Scheme::HomodyneB => sensitivity_homodyne(&vac, m1, &cfg.homodyne_cfg(phi, Scenario::B))?,
        Scheme::HomodyneC => sensitivity_homodyne(&vac, m1, &cfg.homodyne_cfg(phi, Scenario::C))?,
    };
    Ok(r.delta_phi)
}

/// Finds the internal phase minimizing one scheme's sensitivity: a coarse
/// deterministic scan of the open interval `(0, pi)` followed by
/// golden-section refinement of the bracketing interval.
pub fn optimize(cfg: &SweepConfig, scheme: Scheme) -> Result<Optimum> {
    cfg.params.validate()?;
    let m1 = cfg.state_moments()?;
    let f = |phi: f64| -> Result<f64> { scheme_sensitivity(cfg, scheme, &m1, phi) };

    let n = COARSE_POINTS;
    let mut best_i = 0usize;
    let mut best = f64::INFINITY;
    let mut grid = Vec::with_capacity(n);
    for i in 1..=n {
        let phi = std::f64::consts::PI * i as f64 / (n + 1) as f64;
        let v = f(phi)?;
        grid.push(phi);
        if v < best {
            best = v;
            best_i = i - 1;
        }
    }
    if !best.is_finite() {
        return Err(Error::NoFiniteValue);
    }

    let mut a = if best_i == 0 { 0.0 } else { grid[best_i - 1] };
    let mut b = if best_i + 1 == n {
        std::f64::consts::PI
    } else {
        grid[best_i + 1]
    };
    // Golden-section on the bracket [a, b].
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    while b - a > GOLDEN_TOL {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d)?;
        }
    }
    let phi_opt = 0.5 * (a + b);
    let dphi_min = f(phi_opt)?;
    let (phi_opt, dphi_min) = if best < dphi_min {
        (grid[best_i], best)
    } else {
        (phi_opt, dphi_min)
    };
    Ok(Optimum {
        scheme,
        phi_opt,
        dphi_min,
    })
}

/// Per-scheme optimized sensitivities for two state configs and their ratio
/// (first over second). `None` where either optimum diverges.
#[derive(Debug, Clone)]
pub struct RatioReport {
    pub entries: Vec<RatioEntry>,
}

#[derive(Debug, Clone, Copy)]
pub struct RatioEntry {
    pub scheme: Scheme,
    pub opt_num: Optimum,
    pub opt_den: Optimum,
    pub ratio: Option<f64>,
}

/// Optimizes every scheme for both configurations and forms the ratios.
pub fn ratio_study(num: &SweepConfig, den: &SweepConfig) -> Result<RatioReport> {
    let mut entries = Vec::new();
    for scheme in [
        Scheme::Difference,
        Scheme::Single,
        Scheme::HomodyneB,
        Scheme::HomodyneC,
    ] {
        let opt_num = optimize(num, scheme)?;
        let opt_den = optimize(den, scheme)?;
        let ratio = detection::performance_ratio(opt_num.dphi_min, opt_den.dphi_min).ok();
        entries.push(RatioEntry {
            scheme,
            opt_num,
            opt_den,
            ratio,
        });
    }
    Ok(RatioReport { entries })
}

/// Deliberate corruption of a secondary formula path, used to prove the
/// validation grid actually has teeth.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FaultInjection {
    None,
    /// Flips the sign of the interference weight in the printed single-mode
    /// coefficients, which corrupts the coefficient-path `<m4>` and `Var m4`.
    SingleModeWeightSign,
}

/// One analytic-vs-oracle comparison, aggregated over the whole grid.
#[derive(Debug, Clone)]
pub struct ValidationCheck {
    pub name: &'static str,
    pub worst_delta: f64,
    pub tolerance: f64,
}

impl ValidationCheck {
    pub fn passed(&self) -> bool {
        self.worst_delta < self.tolerance
    }
}

#[derive(Debug, Clone)]
pub struct ValidationReport {
    pub checks: Vec<ValidationCheck>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(ValidationCheck::passed)
    }

    /// The failing (or otherwise largest-residual) check.
    pub fn worst(&self) -> &ValidationCheck {
        self.checks
            .iter()
            .max_by(|a, b| {
                (a.worst_delta / a.tolerance)
                    .partial_cmp(&(b.worst_delta / b.tolerance))
                    .unwrap()
            })
            .expect("report has checks")
    }
}

const VALIDATE_TOL: f64 = 1e-8;

/// Runs the standard analytic-vs-oracle grid: both state families at
/// `zeta = 1`, all combinations of `kappa, kappa' ∈ {pi/4, pi/2, 3pi/4}` and
/// `phi ∈ {0.3, 1.0, 2.0}`. Intensity quantities are checked through the
/// operator-transformation route *and* the printed-coefficient route (the
/// latter is where [`FaultInjection::SingleModeWeightSign`] bites); the
/// quadrature uses the antisymmetric phase split with a fixed oscillator
/// phase to exercise scenario handling.
pub fn validate_grid(fault: FaultInjection) -> Result<ValidationReport> {
    use crate::algebra::{AlgebraKind, AlgebraParams};
    use crate::mixing::{quadrature_mean, quadrature_variance, QuadraticForm};
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

    let mut worst: std::collections::BTreeMap<&'static str, f64> = Default::default();
    let mut record = |name: &'static str, delta: f64| {
        let e = worst.entry(name).or_insert(0.0);
        if delta > *e {
            *e = delta;
        }
    };

    let vac = ModeMoments::vacuum();
    let angles = [FRAC_PI_4, FRAC_PI_2, 3.0 * FRAC_PI_4];
    let phis = [0.3, 1.0, 2.0];
    let phi_l = 0.7;

    for kind in [AlgebraKind::Gha, AlgebraKind::Su11] {
        let params = AlgebraParams::new(kind, 0.5, 0.2, 0.1)?;
        let state = CoherentState::with_defaults(&params, Complex64::new(1.0, 0.0))?;
        let m1 = state.moments();
        let cutoff = state.cutoff() + 2;
        let input = TwoModeState::embed_input(&state, cutoff)?;
        let n4_op = ModeOperator::number(cutoff, 0);
        let nd_op = ModeOperator::number_difference(cutoff);
        let x_op = ModeOperator::quadrature(cutoff, 0, phi_l);

        for &kappa in &angles {
            // QFI route: generator variance right after the first splitter.
            let mut after_bs1 = input.clone();
            after_bs1.apply_beam_splitter(kappa);
            let qfi_oracle = oracle::generator_variance_qfi(&after_bs1);
            let qfi_analytic = qfi(kappa, &vac, &m1, QfiScenario::B)?;
            record("QFI(b)", (qfi_analytic - qfi_oracle).abs());

            for &kappa_p in &angles {
                for &phi in &phis {
                    let icfg = InterferometerConfig::new(kappa, kappa_p, phi);
                    let out = oracle::run_interferometer(&input, &icfg);

                    let map = icfg.intensity_map();
                    let n4 = QuadraticForm::number(&map.map.rows[0]);
                    let nd = QuadraticForm::difference(&map.map.rows[0], &map.map.rows[1]);

                    record("<N_d>", (nd.mean(&vac, &m1) - nd_op.expect(&out).re).abs());
                    record(
                        "Var N_d",
                        (nd.variance(&vac, &m1) - nd_op.variance(&out)?).abs(),
                    );

                    let mut printed = detection::single_mode_coeffs(&icfg);
                    if fault == FaultInjection::SingleModeWeightSign {
                        let interf = kappa.sin() * kappa_p.sin() * phi.cos();
                        printed.a0 += interf;
                        printed.a1 -= interf;
                    }
                    let (pm, pv) = printed.stats(&vac, &m1);
                    let oracle_m4 = n4_op.expect(&out).re;
                    let oracle_v4 = n4_op.variance(&out)?;
                    record(
                        "<m4>",
                        (n4.mean(&vac, &m1) - oracle_m4)
                            .abs()
                            .max((pm - oracle_m4).abs()),
                    );
                    record(
                        "Var m4",
                        (n4.variance(&vac, &m1) - oracle_v4)
                            .abs()
                            .max((pv - oracle_v4).abs()),
                    );

                    // Quadrature with the antisymmetric phase split.
                    let hcfg = icfg.with_scenario(Scenario::C);
                    let hout = oracle::run_interferometer(&input, &hcfg);
                    let hrow = &hcfg.homodyne_map().map.rows[0];
                    record(
                        "<X>",
                        (quadrature_mean(hrow, phi_l, &vac, &m1) - x_op.expect(&hout).re).abs(),
                    );
                    record(
                        "Var X",
                        (quadrature_variance(hrow, phi_l, &vac, &m1) - x_op.variance(&hout)?)
                            .abs(),
                    );
                }
            }
        }
    }

    Ok(ValidationReport {
        checks: worst
            .into_iter()
            .map(|(name, worst_delta)| ValidationCheck {
                name,
                worst_delta,
                tolerance: VALIDATE_TOL,
            })
            .collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::AlgebraKind;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::FRAC_PI_2;

    fn glauber_cfg(zeta: f64) -> SweepConfig {
        let params = AlgebraParams::new(AlgebraKind::Gha, 0.5, 0.2, 0.1).unwrap();
        SweepConfig::new(params, Complex64::new(zeta, 0.0))
    }

    #[test]
    fn grid_is_uniform_and_inclusive() {
        let mut cfg = glauber_cfg(1.0);
        cfg.start = 0.0;
        cfg.stop = 1.0;
        cfg.steps = 5;
        let g = sweep_grid(&cfg);
        assert_eq!(g.len(), 5);
        assert_abs_diff_eq!(g[0], 0.0);
        assert_abs_diff_eq!(g[4], 1.0);
        assert_abs_diff_eq!(g[2], 0.5);
    }

    #[test]
    fn rejects_bad_sweep_bounds() {
        let mut cfg = glauber_cfg(1.0);
        cfg.steps = 1;
        assert!(cfg.validate().is_err());
        cfg.steps = 10;
        cfg.start = 2.0;
        cfg.stop = 1.0;
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn rows_respect_the_bound() {
        let mut cfg = glauber_cfg(1.0);
        cfg.steps = 25;
        for row in evaluate_sweep_seq(&cfg).unwrap() {
            for (dphi, qcrb) in [
                (row.dphi_df, row.qcrb_a),
                (row.dphi_sing, row.qcrb_a),
                (row.dphi_hom_b, row.qcrb_b),
                (row.dphi_hom_c, row.qcrb_c),
            ] {
                if let (Some(d), Some(q)) = (dphi, qcrb) {
                    assert!(d >= q - 1e-9, "dphi {d} below bound {q} at x={}", row.x);
                }
            }
        }
    }

    #[cfg(feature = "parallel")]
    #[test]
    fn parallel_and_sequential_agree_bitwise() {
        let mut cfg = glauber_cfg(1.0);
        cfg.steps = 16;
        let seq = evaluate_sweep_seq(&cfg).unwrap();
        let par = evaluate_sweep_par(&cfg).unwrap();
        for (a, b) in seq.iter().zip(&par) {
            assert_eq!(a.x.to_bits(), b.x.to_bits());
            assert_eq!(a.dphi_df.map(f64::to_bits), b.dphi_df.map(f64::to_bits));
            assert_eq!(a.qfi_b.map(f64::to_bits), b.qfi_b.map(f64::to_bits));
        }
    }

    #[test]
    fn optimizer_finds_the_glauber_working_point() {
        let opt = optimize(&glauber_cfg(1.0), Scheme::Difference).unwrap();
        assert_abs_diff_eq!(opt.phi_opt, FRAC_PI_2, epsilon = 1e-6);
        assert_abs_diff_eq!(opt.dphi_min, 1.0, epsilon = 1e-10);
        let opt2 = optimize(&glauber_cfg(2.0), Scheme::Difference).unwrap();
        assert_abs_diff_eq!(opt2.dphi_min, 0.5, epsilon = 1e-10);
    }

    #[test]
    fn optimizer_reports_all_infinite_grids() {
        assert!(matches!(
            optimize(&glauber_cfg(0.0), Scheme::Difference),
            Err(Error::NoFiniteValue)
        ));
    }

    #[test]
    fn identical_configs_give_unit_ratio() {
        let mut cfg = glauber_cfg(1.0);
        cfg.hom_kappa = Some(0.0);
        cfg.hom_kappa_p = Some(std::f64::consts::PI);
        let report = ratio_study(&cfg, &cfg).unwrap();
        for entry in &report.entries {
            let r = entry.ratio.expect("finite optima");
            assert_abs_diff_eq!(r, 1.0, epsilon = 1e-9);
        }
    }

    #[test]
    fn transmission_sweep_hits_qfi_shape() {
        let mut cfg = glauber_cfg(1.0);
        cfg.variable = SweepVariable::Transmission;
        cfg.start = 0.0;
        cfg.stop = 1.0;
        cfg.steps = 21;
        let rows = evaluate_sweep_seq(&cfg).unwrap();
        assert_abs_diff_eq!(rows[0].qfi_a.unwrap(), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(rows[20].qfi_a.unwrap(), 0.0, epsilon = 1e-12);
        let best = rows
            .iter()
            .max_by(|a, b| a.qfi_a.unwrap().partial_cmp(&b.qfi_a.unwrap()).unwrap())
            .unwrap();
        assert_abs_diff_eq!(best.x, 0.5, epsilon = 1e-12);
        for pair in rows.windows(2) {
            assert!(pair[1].qfi_b.unwrap() >= pair[0].qfi_b.unwrap() - 1e-12);
        }
    }

    #[test]
    fn validation_grid_passes_clean_and_catches_the_fault() {
        let clean = validate_grid(FaultInjection::None).unwrap();
        assert!(clean.passed(), "worst: {:?}", clean.worst());
        let faulty = validate_grid(FaultInjection::SingleModeWeightSign).unwrap();
        assert!(!faulty.passed());
        assert!(faulty
            .checks
            .iter()
            .any(|c| !c.passed() && c.name == "Var m4"));
    }
}
