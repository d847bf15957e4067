//! Linear two-mode operator transformations and product-state observable
//! statistics.
//!
//! Every analytic quantity in this crate reduces to the statistics of an
//! output operator `b_out = u b0 + v b1` (or of quadratic combinations of
//! two such outputs) evaluated on a product input state described by two
//! [`ModeMoments`] bundles. Centralizing that reduction here gives the QFI
//! and all three detection schemes a single, oracle-checkable ground truth,
//! with the scenario-specialized printed formulas relegated to cross-checks.

use num_complex::Complex64;

use crate::states::ModeMoments;

type Row = [Complex64; 2];

/// A 2x2 linear map on the mode operators: `out_i = sum_j rows[i][j] in_j`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoModeMap {
    pub rows: [Row; 2],
}

impl TwoModeMap {
    /// Beam splitter with transmission `cos(kappa/2)` and reflection
    /// `i sin(kappa/2)` (convention `t* r = i |t r|`).
    pub fn beam_splitter(kappa: f64) -> Self {
        let t = Complex64::new((kappa / 2.0).cos(), 0.0);
        let r = Complex64::new(0.0, (kappa / 2.0).sin());
        TwoModeMap {
            rows: [[t, r], [r, t]],
        }
    }

    /// Independent phase shifts: `b_j -> e^{-i phi_j} b_j`.
    pub fn phase_pair(phi0: f64, phi1: f64) -> Self {
        let zero = Complex64::new(0.0, 0.0);
        TwoModeMap {
            rows: [
                [Complex64::from_polar(1.0, -phi0), zero],
                [zero, Complex64::from_polar(1.0, -phi1)],
            ],
        }
    }

    /// Matrix product `self * other` (apply `other` first).
    pub fn compose(&self, other: &TwoModeMap) -> Self {
        let mut rows = [[Complex64::new(0.0, 0.0); 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                rows[i][j] = self.rows[i][0] * other.rows[0][j]
                    + self.rows[i][1] * other.rows[1][j];
            }
        }
        TwoModeMap { rows }
    }
}

/// Output map of the full interferometer together with its derivative with
/// respect to the internal phase `phi`.
///
/// Mode index 0 follows the port-2/port-4 path (phase `phi_2`), mode index 1
/// the port-3/port-5 path (phase `phi_1`).
#[derive(Debug, Clone, Copy)]
pub struct MziMap {
    pub map: TwoModeMap,
    pub dmap: TwoModeMap,
}

/// Builds `BS2 * phases * BS1` and its `phi`-derivative. `dphi0`/`dphi1` are
/// the rates `d phi_mode / d phi` of the scenario parametrization.
pub fn mzi_map(
    kappa: f64,
    kappa_p: f64,
    phi_mode0: f64,
    phi_mode1: f64,
    dphi0: f64,
    dphi1: f64,
) -> MziMap {
    let bs1 = TwoModeMap::beam_splitter(kappa);
    let bs2 = TwoModeMap::beam_splitter(kappa_p);
    let phases = TwoModeMap::phase_pair(phi_mode0, phi_mode1);
    // d/dphi diag(e^{-i phi0}, e^{-i phi1}) = diag(-i dphi0 e^{-i phi0}, ...)
    let zero = Complex64::new(0.0, 0.0);
    let dphases = TwoModeMap {
        rows: [
            [
                Complex64::new(0.0, -dphi0) * Complex64::from_polar(1.0, -phi_mode0),
                zero,
            ],
            [
                zero,
                Complex64::new(0.0, -dphi1) * Complex64::from_polar(1.0, -phi_mode1),
            ],
        ],
    };
    MziMap {
        map: bs2.compose(&phases).compose(&bs1),
        dmap: bs2.compose(&dphases).compose(&bs1),
    }
}

/// A quadratic observable `S = a0 m0 + a1 m1 + (g b0^dag b1 + h.c.)`.
///
/// All number-type observables of the interferometer (output photon numbers,
/// their differences, the QFI generators) have this form, so their means and
/// variances on a product input state come from one pair of closed forms.
#[derive(Debug, Clone, Copy)]
pub struct QuadraticForm {
    pub a0: f64,
    pub a1: f64,
    pub g: Complex64,
}

impl QuadraticForm {
    /// Photon number of the output mode described by `row`.
    pub fn number(row: &Row) -> Self {
        QuadraticForm {
            a0: row[0].norm_sqr(),
            a1: row[1].norm_sqr(),
            g: row[0].conj() * row[1],
        }
    }

    /// Photon-number difference of two output modes.
    pub fn difference(top: &Row, bottom: &Row) -> Self {
        QuadraticForm {
            a0: top[0].norm_sqr() - bottom[0].norm_sqr(),
            a1: top[1].norm_sqr() - bottom[1].norm_sqr(),
            g: top[0].conj() * top[1] - bottom[0].conj() * bottom[1],
        }
    }

    /// Derivative of [`QuadraticForm::number`] along `drow`.
    pub fn number_derivative(row: &Row, drow: &Row) -> Self {
        QuadraticForm {
            a0: 2.0 * (row[0].conj() * drow[0]).re,
            a1: 2.0 * (row[1].conj() * drow[1]).re,
            g: drow[0].conj() * row[1] + row[0].conj() * drow[1],
        }
    }

    /// Derivative of [`QuadraticForm::difference`].
    pub fn difference_derivative(top: &Row, dtop: &Row, bottom: &Row, dbottom: &Row) -> Self {
        let t = Self::number_derivative(top, dtop);
        let b = Self::number_derivative(bottom, dbottom);
        QuadraticForm {
            a0: t.a0 - b.a0,
            a1: t.a1 - b.a1,
            g: t.g - b.g,
        }
    }

    /// `<S>` on the product state.
    pub fn mean(&self, m0: &ModeMoments, m1: &ModeMoments) -> f64 {
        self.a0 * m0.mean_n
            + self.a1 * m1.mean_n
            + 2.0 * (self.g * m0.exp_b.conj() * m1.exp_b).re
    }

    /// `Delta^2 S` on the product state.
    ///
    /// The coefficients enter homogeneously quadratically, so polarization
    /// identities between related observables (sum, difference, single-arm
    /// generators) hold to rounding.
    pub fn variance(&self, m0: &ModeMoments, m1: &ModeMoments) -> f64 {
        let b0 = m0.exp_b;
        let b1 = m1.exp_b;
        // Central <m b> pieces.
        let p0 = m0.exp_nb - m0.mean_n * b0;
        let p1 = m1.exp_nb - m1.mean_n * b1;
        let g2_term =
            self.g * self.g * (m0.exp_b2.conj() * m1.exp_b2 - b0.conj() * b0.conj() * b1 * b1);
        let abs_g2 = self.g.norm_sqr();
        let cross0 = 2.0 * self.a0 * (self.g * (2.0 * p0.conj() + b0.conj()) * b1).re;
        let cross1 = 2.0 * self.a1 * (self.g * b0.conj() * (2.0 * p1 + b1)).re;

        self.a0 * self.a0 * m0.var_n
            + self.a1 * self.a1 * m1.var_n
            + 2.0 * g2_term.re
            + abs_g2
                * (2.0 * m0.mean_n * m1.mean_n + m0.mean_n + m1.mean_n
                    - 2.0 * b0.norm_sqr() * b1.norm_sqr())
            + cross0
            + cross1
    }
}

/// Mean of the quadrature `X = Re{ e^{-i phi_l} b_out }`.
pub fn quadrature_mean(row: &Row, phi_l: f64, m0: &ModeMoments, m1: &ModeMoments) -> f64 {
    let amp = row[0] * m0.exp_b + row[1] * m1.exp_b;
    (Complex64::from_polar(1.0, -phi_l) * amp).re
}

/// Variance of the quadrature on the product state.
pub fn quadrature_variance(row: &Row, phi_l: f64, m0: &ModeMoments, m1: &ModeMoments) -> f64 {
    let half = Complex64::new(0.5, 0.0) * Complex64::from_polar(1.0, -phi_l);
    let a = half * row[0];
    let b = half * row[1];
    0.25 + 2.0 * (a * a * m0.var_b() + b * b * m1.var_b()).re
        + 2.0 * a.norm_sqr() * (m0.mean_n - m0.exp_b.norm_sqr())
        + 2.0 * b.norm_sqr() * (m1.mean_n - m1.exp_b.norm_sqr())
}

/// Derivative of the quadrature mean along `drow`.
pub fn quadrature_mean_derivative(
    drow: &Row,
    phi_l: f64,
    m0: &ModeMoments,
    m1: &ModeMoments,
) -> f64 {
    quadrature_mean(drow, phi_l, m0, m1)
}

/// Local-oscillator phase that maximizes the slope magnitude.
pub fn aligned_phi_l(drow: &Row, m0: &ModeMoments, m1: &ModeMoments) -> f64 {
    let amp = drow[0] * m0.exp_b + drow[1] * m1.exp_b;
    amp.arg()
}
