//! Closed-form fractal quadrature of a univariate Bernstein FIF.
//!
//! Integrating the self-affinity relation over the interval gives
//!
//! ```text
//! M = [sum a_i int g(S_i p) dp - sum alpha_i a_i int B_m(g, p) dp] / (1 - sum alpha_i a_i)
//! ```

use serde::Serialize;

use crate::bernstein::{bern1d_coeffs_deg2, bern1d_integral};
use crate::error::{Error, Result};
use crate::fif1d::{build_ifs_1d, DataSet1D, FifSystem1D};

/// Denominators below this magnitude are rejected.
pub const SINGULAR_TOL: f64 = 1e-12;
/// Denominators below this are flagged as ill-conditioned.
pub const ILL_CONDITIONED_BELOW: f64 = 0.5;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuadReport {
    pub fractal_value: f64,
    pub oracle_value: Option<f64>,
    pub abs_error: Option<f64>,
    pub denominator: f64,
    pub degree: usize,
    pub n_pieces: usize,
    pub ill_conditioned: bool,
}

impl QuadReport {
    pub(crate) fn new(value: f64, denominator: f64, degree: usize, n_pieces: usize) -> Self {
        Self {
            fractal_value: value,
            oracle_value: None,
            abs_error: None,
            denominator,
            degree,
            n_pieces,
            ill_conditioned: denominator.abs() < ILL_CONDITIONED_BELOW,
        }
    }

    pub fn with_oracle(mut self, oracle: f64) -> Self {
        self.oracle_value = Some(oracle);
        self.abs_error = Some((self.fractal_value - oracle).abs());
        self
    }
}

pub(crate) fn checked_denominator(denominator: f64) -> Result<f64> {
    if denominator.abs() <= SINGULAR_TOL || !denominator.is_finite() {
        return Err(Error::SingularDenominator(denominator));
    }
    Ok(denominator)
}

fn denominator_1d(sys: &FifSystem1D) -> Result<f64> {
    checked_denominator(1.0 - sys.maps.iter().map(|w| w.alpha * w.a).sum::<f64>())
}

/// General-degree path.
pub fn integrate_fif_1d(sys: &FifSystem1D) -> Result<QuadReport> {
    let den = denominator_1d(sys)?;
    let iv = sys.interval();
    let pts = sys.dataset.points();
    let int_b = bern1d_integral(&iv, &sys.nodes);
    let mut num = 0.0;
    for (w, win) in sys.maps.iter().zip(pts.windows(2)) {
        num += w.a * iv.length() * 0.5 * (win[0].1 + win[1].1);
        num -= w.alpha * w.a * int_b;
    }
    Ok(QuadReport::new(num / den, den, sys.degree, sys.maps.len()))
}

/// Expanded power-basis formulas for `m = 1` and `m = 2`.
///
/// The quadratic term enters with a minus sign: it belongs to
/// `-alpha_i B_2(g, p)`.
pub fn integrate_fif_1d_expanded(sys: &FifSystem1D) -> Result<QuadReport> {
    let den = denominator_1d(sys)?;
    let iv = sys.interval();
    let (p1, pn) = (iv.start(), iv.end());
    let pts = sys.dataset.points();
    let (q1, qn) = (pts[0].1, pts[pts.len() - 1].1);
    let (sq, cube) = (0.5 * (pn * pn - p1 * p1), (pn.powi(3) - p1.powi(3)) / 3.0);
    let num = match sys.degree {
        1 => {
            let lin: f64 = sys.maps.iter().map(|w| w.a * w.big_a).sum::<f64>() * sq
                + sys.maps.iter().map(|w| w.a * w.big_b).sum::<f64>() * (pn - p1);
            let chord = 0.5 * (pn + p1) * (qn - q1) + pn * q1 - p1 * qn;
            lin - sys.maps.iter().map(|w| w.alpha * w.a).sum::<f64>() * chord
        }
        2 => {
            let v = sys.nodes.values();
            let (c, d, e) = bern1d_coeffs_deg2(&iv, v[0], v[1], v[2]);
            let mut quad = 0.0;
            let mut lin = 0.0;
            let mut cst = 0.0;
            for w in &sys.maps {
                quad += w.alpha * w.a * c;
                lin += w.a * (w.big_a - w.alpha * d);
                cst += w.a * (w.big_b - w.alpha * e);
            }
            -cube * quad + sq * lin + (pn - p1) * cst
        }
        m => {
            return Err(Error::UnsupportedDegree {
                degree: m,
                reason: "expanded quadrature formulas exist for m = 1 and m = 2 only",
            })
        }
    };
    Ok(QuadReport::new(num / den, den, sys.degree, sys.maps.len()))
}

/// Uniform scaling `alpha` at which `M` equals `target`, if any.
///
/// With uniform scaling `M(alpha) = (T - alpha J) / (1 - alpha)` where `T`
/// is the trapezoid sum and `J = int B_m`, so the solve is linear.
pub fn uniform_alpha_for_target(data: &DataSet1D, m: usize, target: f64) -> Result<Option<f64>> {
    let sys = build_ifs_1d(data, &vec![0.0; data.len() - 1], m)?;
    let t = data.trapezoid();
    let j = bern1d_integral(&sys.interval(), &sys.nodes);
    if (j - target).abs() <= SINGULAR_TOL {
        return Ok(None);
    }
    let alpha = (t - target) / (j - target);
    Ok((alpha.abs() < 1.0).then_some(alpha))
}

/// `(alpha, M)` for each uniform scaling in `alphas`.
pub fn alpha_sweep(data: &DataSet1D, m: usize, alphas: &[f64]) -> Result<Vec<(f64, f64)>> {
    alphas
        .iter()
        .map(|&a| {
            let sys = build_ifs_1d(data, &vec![a; data.len() - 1], m)?;
            Ok((a, integrate_fif_1d(&sys)?.fractal_value))
        })
        .collect()
}
