//! Coherent states of the deformed algebras as truncated Fock-coefficient
//! vectors, plus the single-mode moments every downstream formula consumes.
//!
//! A state is the normalized eigenvector of the lowering operator,
//! `alpha_{m+1} N_m = zeta alpha_m`, truncated adaptively so the discarded
//! probability stays below a configurable tail tolerance. Normalization is
//! always done by direct series summation; the hypergeometric closed forms
//! printed for the normalization factor are available only as a reported
//! cross-check ([`CoherentState::normalization_crosscheck`]).

use num_complex::Complex64;

use crate::algebra::{AlgebraKind, AlgebraParams, LadderSeq};
use crate::{Error, Result};

/// Default tail tolerance for state construction.
pub const DEFAULT_TAIL_TOL: f64 = 1e-14;
/// Default hard cutoff for state construction.
pub const DEFAULT_MAX_CUTOFF: usize = 10_000;

/// How many consecutive below-tolerance terms end the series, and the
/// geometric ratio the tail estimate requires at the cutoff.
const CONSECUTIVE_SMALL_TERMS: usize = 5;
const MAX_TAIL_RATIO: f64 = 0.5;

/// A normalized, truncated coherent state `|zeta>`.
#[derive(Debug, Clone)]
pub struct CoherentState {
    params: AlgebraParams,
    zeta: Complex64,
    coeffs: Vec<Complex64>,
    tail_bound: f64,
    /// Normalization factor `N(|zeta|)` from direct series summation.
    norm: f64,
}

impl CoherentState {
    /// Builds the state with adaptive cutoff.
    ///
    /// Fails with [`Error::NotConverged`] if the tail tolerance is not
    /// reachable within `max_cutoff` terms.
    pub fn build(
        params: &AlgebraParams,
        zeta: Complex64,
        tail_tol: f64,
        max_cutoff: usize,
    ) -> Result<Self> {
        params.validate()?;
        assert!(tail_tol > 0.0, "tail_tol must be positive");
        assert!(max_cutoff >= 1, "max_cutoff must be at least 1");

        if zeta.norm() == 0.0 {
            return Ok(CoherentState {
                params: *params,
                zeta,
                coeffs: vec![Complex64::new(1.0, 0.0)],
                tail_bound: 0.0,
                norm: 1.0,
            });
        }

        let abs2 = zeta.norm_sqr();
        let log_abs2 = abs2.ln();
        let mut ladder = LadderSeq::build(params, 8.min(max_cutoff))?;

        // Log-sum-exp accumulation of S = sum_m |zeta|^(2m) / (N_{m-1}!)^2.
        let mut scale = 0.0f64; // log of the scaling term
        let mut sum = 1.0f64; // sum of exp(L_m - scale), m = 0 term included
        let mut consecutive = 0usize;
        let mut cutoff = None;
        let mut m = 0usize;
        while cutoff.is_none() {
            m += 1;
            if m > max_cutoff {
                return Err(Error::NotConverged {
                    tail_tol,
                    max_cutoff,
                });
            }
            ladder.extend_to(m)?;
            let log_term = m as f64 * log_abs2 - ladder.log_fact_sq(m);
            if log_term > scale {
                sum = sum * (scale - log_term).exp() + 1.0;
                scale = log_term;
            } else {
                sum += (log_term - scale).exp();
            }
            let rel = (log_term - scale).exp() / sum;
            if rel < tail_tol {
                consecutive += 1;
            } else {
                consecutive = 0;
            }
            if consecutive >= CONSECUTIVE_SMALL_TERMS && abs2 / ladder.sq(m) < MAX_TAIL_RATIO {
                // Geometric tail estimate: t_{M+1} / (1 - q) relative to S.
                ladder.extend_to(m + 1)?;
                let log_next = (m + 1) as f64 * log_abs2 - ladder.log_fact_sq(m + 1);
                let q = abs2 / ladder.sq(m + 1);
                let bound = (log_next - scale).exp() / ((1.0 - q) * sum);
                if bound <= tail_tol {
                    cutoff = Some((m, bound));
                }
            }
        }
        let (cutoff, tail_bound) = cutoff.unwrap();

        // ln N = -1/2 ln S with S = exp(scale) * sum.
        let log_norm = -0.5 * (scale + sum.ln());
        let phase = zeta / zeta.norm();
        let log_abs_zeta = 0.5 * log_abs2;
        let mut coeffs = Vec::with_capacity(cutoff + 1);
        let mut phase_m = Complex64::new(1.0, 0.0);
        for m in 0..=cutoff {
            let log_mag = log_norm + m as f64 * log_abs_zeta - 0.5 * ladder.log_fact_sq(m);
            coeffs.push(phase_m * log_mag.exp());
            phase_m *= phase;
        }

        Ok(CoherentState {
            params: *params,
            zeta,
            coeffs,
            tail_bound,
            norm: log_norm.exp(),
        })
    }

    /// Builds with the default tolerance and cutoff.
    pub fn with_defaults(params: &AlgebraParams, zeta: Complex64) -> Result<Self> {
        Self::build(params, zeta, DEFAULT_TAIL_TOL, DEFAULT_MAX_CUTOFF)
    }

    pub fn kind(&self) -> AlgebraKind {
        self.params.kind
    }

    pub fn params(&self) -> &AlgebraParams {
        &self.params
    }

    pub fn zeta(&self) -> Complex64 {
        self.zeta
    }

    /// Fock coefficients `alpha_0 ..= alpha_M`.
    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn cutoff(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Upper bound on the discarded probability.
    pub fn tail_bound(&self) -> f64 {
        self.tail_bound
    }

    /// Normalization factor `N(|zeta|)` from the direct series.
    pub fn normalization(&self) -> f64 {
        self.norm
    }

    /// Single-mode expectation bundle.
    pub fn moments(&self) -> ModeMoments {
        let mut mean_n = 0.0;
        let mut mean_n2 = 0.0;
        let mut exp_b = Complex64::new(0.0, 0.0);
        let mut exp_b2 = Complex64::new(0.0, 0.0);
        let mut exp_nb = Complex64::new(0.0, 0.0);
        let n = self.coeffs.len();
        for (m, alpha) in self.coeffs.iter().enumerate() {
            let p = alpha.norm_sqr();
            let mf = m as f64;
            mean_n += mf * p;
            mean_n2 += mf * mf * p;
            if m + 1 < n {
                let step = alpha.conj() * self.coeffs[m + 1] * (mf + 1.0).sqrt();
                exp_b += step;
                exp_nb += mf * step;
            }
            if m + 2 < n {
                exp_b2 +=
                    alpha.conj() * self.coeffs[m + 2] * ((mf + 1.0) * (mf + 2.0)).sqrt();
            }
        }
        ModeMoments::from_expectations(mean_n, mean_n2, exp_b, exp_b2, exp_nb)
    }

    /// Relative deviation of the printed hypergeometric closed form for the
    /// normalization factor from the direct-series value.
    ///
    /// Large deviations are expected for some parameter sets (the printed
    /// closed forms are suspect); callers report, they do not fail.
    pub fn normalization_crosscheck(&self) -> f64 {
        let x = self.zeta.norm_sqr();
        let p = &self.params;
        let closed = match p.kind {
            AlgebraKind::Gha => {
                // 1F1(d+1; d+a-e/d+1; x) as printed.
                let top = [Complex64::new(p.d + 1.0, 0.0)];
                let bottom = [Complex64::new(p.d + p.a - p.e / p.d + 1.0, 0.0)];
                hyper_series(&top, &bottom, x)
            }
            AlgebraKind::Su11 => {
                // 2F3(d+1, d+a; omega, sigma, a-e/d+d+1; x) as printed, with
                // omega and sigma allowed to be complex conjugates.
                let half_trace = 0.5 * (p.a + p.d + 1.0 + p.e / p.d);
                let disc = Complex64::new(
                    (p.a + p.d + 1.0 + p.e / p.d).powi(2)
                        - 4.0 * (p.a + 2.0 * p.e + p.e / p.d),
                    0.0,
                );
                let root = 0.5 * disc.sqrt();
                let omega = Complex64::new(half_trace, 0.0) - root;
                let sigma = Complex64::new(half_trace, 0.0) + root;
                let top = [Complex64::new(p.d + 1.0, 0.0), Complex64::new(p.d + p.a, 0.0)];
                let bottom = [omega, sigma, Complex64::new(p.a - p.e / p.d + p.d + 1.0, 0.0)];
                hyper_series(&top, &bottom, x)
            }
        };
        match closed {
            Some(f) if f > 0.0 => {
                let n_closed = 1.0 / f.sqrt();
                (n_closed - self.norm).abs() / self.norm
            }
            _ => f64::INFINITY,
        }
    }
}

/// Generalized hypergeometric series by direct term summation. Returns the
/// real part of the sum, or `None` if a bottom parameter hits a non-positive
/// integer or the series fails to settle.
fn hyper_series(top: &[Complex64], bottom: &[Complex64], x: f64) -> Option<f64> {
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    for m in 0..20_000 {
        let mf = m as f64;
        let mut ratio = Complex64::new(x / (mf + 1.0), 0.0);
        for t in top {
            ratio *= t + mf;
        }
        for b in bottom {
            let denom = b + mf;
            if denom.norm() < 1e-12 {
                return None;
            }
            ratio /= denom;
        }
        term *= ratio;
        sum += term;
        if term.norm() < 1e-17 * sum.norm() {
            return Some(sum.re);
        }
    }
    None
}

/// The single-mode expectation bundle consumed by the QFI and sensitivity
/// formulas: `<m>`, `<m^2>`, `<b>`, `<b^2>`, `<m b>`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeMoments {
    pub mean_n: f64,
    pub mean_n2: f64,
    pub var_n: f64,
    pub exp_b: Complex64,
    pub exp_b2: Complex64,
    pub exp_nb: Complex64,
}

impl ModeMoments {
    pub fn from_expectations(
        mean_n: f64,
        mean_n2: f64,
        exp_b: Complex64,
        exp_b2: Complex64,
        exp_nb: Complex64,
    ) -> Self {
        ModeMoments {
            mean_n,
            mean_n2,
            var_n: mean_n2 - mean_n * mean_n,
            exp_b,
            exp_b2,
            exp_nb,
        }
    }

    /// All-zero moments of the vacuum.
    pub fn vacuum() -> Self {
        ModeMoments {
            mean_n: 0.0,
            mean_n2: 0.0,
            var_n: 0.0,
            exp_b: Complex64::new(0.0, 0.0),
            exp_b2: Complex64::new(0.0, 0.0),
            exp_nb: Complex64::new(0.0, 0.0),
        }
    }

    /// `<b^dag m>`, the conjugate of the stored `<m b>`.
    pub fn exp_bdag_n(&self) -> Complex64 {
        self.exp_nb.conj()
    }

    pub fn is_vacuum(&self) -> bool {
        self.mean_n == 0.0 && self.exp_b.norm() == 0.0 && self.exp_b2.norm() == 0.0
    }

    /// Central `<b^2> - <b>^2`.
    pub fn var_b(&self) -> Complex64 {
        self.exp_b2 - self.exp_b * self.exp_b
    }
}
