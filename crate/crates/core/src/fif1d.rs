//! Univariate Bernstein fractal interpolation.
//!
//! For data `(p_i, q_i)`, `i = 1..N`, the IFS has `N - 1` maps
//!
//! ```text
//! w_i(p, q) = (a_i p + b_i,  alpha_i q + g(S_i(p)) - alpha_i B_m(g, p))
//! ```
//!
//! where `g` is the piecewise-linear interpolant of the data and `B_m(g, .)`
//! its Bernstein polynomial over the whole interval. The attractor is the
//! graph of the FIF `psi`, the fixed point of
//! `psi(p) = alpha_i psi(u) + g(p) - alpha_i B_m(g, u)` with `u = S_i^{-1}(p)`.

use rand::distributions::{Distribution, WeightedIndex};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bernstein::{
    bern1d_coeffs_deg1, bern1d_coeffs_deg2, bern1d_eval_unchecked, binomial, check_degree,
    BernNodes1D, Interval,
};
use crate::error::{Error, Result};

/// Truncation target for the default iteration count.
pub const EVAL_TARGET: f64 = 1e-10;
pub const MAX_DEFAULT_ITERS: usize = 60;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DataSet1D {
    points: Vec<(f64, f64)>,
}

impl DataSet1D {
    pub fn new(points: Vec<(f64, f64)>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::TooFewPoints(points.len()));
        }
        for (i, w) in points.windows(2).enumerate() {
            if !(w[1].0 > w[0].0) {
                return Err(Error::NotIncreasing(i + 1));
            }
        }
        Ok(Self { points })
    }

    /// Samples `f` at `pieces + 1` equally spaced abscissae.
    pub fn from_fn(interval: &Interval, pieces: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        if pieces == 0 {
            return Err(Error::TooFewPoints(1));
        }
        let points = (0..=pieces)
            .map(|i| {
                let p = interval.node(i, pieces);
                (p, f(p))
            })
            .collect();
        Self::new(points)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }

    pub fn interval(&self) -> Interval {
        let (first, last) = (self.points[0].0, self.points[self.points.len() - 1].0);
        Interval::new(first, last).expect("validated in constructor")
    }

    /// Index `i` of the piece `[p_i, p_{i+1}]` holding `p`; shared nodes go
    /// to the lower piece.
    pub fn segment(&self, p: f64) -> usize {
        let n = self.points.len();
        let idx = self.points.partition_point(|&(x, _)| x < p);
        idx.saturating_sub(1).min(n - 2)
    }

    /// Piecewise-linear interpolant `g`.
    pub fn linear(&self, p: f64) -> f64 {
        let i = self.segment(p);
        let (p0, q0) = self.points[i];
        let (p1, q1) = self.points[i + 1];
        q0 + (q1 - q0) * (p - p0) / (p1 - p0)
    }

    /// Composite trapezoid rule over the data, i.e. the integral of `g`.
    pub fn trapezoid(&self) -> f64 {
        self.points
            .windows(2)
            .map(|w| 0.5 * (w[1].0 - w[0].0) * (w[0].1 + w[1].1))
            .sum()
    }

    pub fn q_range(&self) -> (f64, f64) {
        self.points
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &(_, q)| {
                (lo.min(q), hi.max(q))
            })
    }
}

/// One map `w_i` of the univariate IFS.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UniMap {
    /// `S_i(p) = a p + b`.
    pub a: f64,
    pub b: f64,
    /// `g(S_i(p)) = big_a p + big_b`.
    pub big_a: f64,
    pub big_b: f64,
    pub alpha: f64,
    /// Ascending power-basis coefficients of `alpha * B_m(g, p)`.
    pub correction: Vec<f64>,
}

impl UniMap {
    pub fn s(&self, p: f64) -> f64 {
        self.a * p + self.b
    }

    pub fn s_inv(&self, p: f64) -> f64 {
        (p - self.b) / self.a
    }

    pub fn correction_at(&self, p: f64) -> f64 {
        self.correction
            .iter()
            .rev()
            .fold(0.0, |acc, &c| acc * p + c)
    }
}

impl FifSystem1D {
    /// `S_i^{-1}(p)` as the same relative position in `[p_1, p_N]`; piece
    /// endpoints map exactly onto the interval endpoints.
    pub fn pull_back(&self, i: usize, p: f64) -> f64 {
        let pts = self.dataset.points();
        let (lo, hi) = (pts[i].0, pts[i + 1].0);
        let t = ((p - lo) / (hi - lo)).clamp(0.0, 1.0);
        let iv = self.interval();
        (1.0 - t) * iv.start() + t * iv.end()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FifSystem1D {
    pub dataset: DataSet1D,
    pub maps: Vec<UniMap>,
    pub degree: usize,
    /// `B_m(g, .)` nodes, sampled from `g` at the uniform nodes.
    pub nodes: BernNodes1D,
}

/// Outcome of a lemma-based contraction certificate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HyperbolicityReport {
    pub theta: f64,
    pub ratio: f64,
    pub hyperbolic: bool,
    pub epsilon: f64,
}

/// Value of the FIF together with the a-priori truncation bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FifValue {
    pub value: f64,
    pub bound: f64,
}

/// Points sampled from an attractor.
#[derive(Debug, Clone, PartialEq)]
pub struct AttractorCloud<const D: usize> {
    pub points: Vec<[f64; D]>,
    pub seed: u64,
    pub burn_in: usize,
}

impl<const D: usize> AttractorCloud<D> {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

fn poly_mul(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Power-basis coefficients of `B_m` on `interval`.
pub fn bernstein_power_coeffs(interval: &Interval, nodes: &BernNodes1D) -> Vec<f64> {
    let m = nodes.degree();
    let (p1, pn) = (interval.start(), interval.end());
    let scale = interval.length().powi(m as i32);
    let mut out = vec![0.0; m + 1];
    for (v, &f) in nodes.values().iter().enumerate() {
        let mut term = vec![binomial(m, v) as f64 * f / scale];
        for _ in 0..v {
            term = poly_mul(&term, &[-p1, 1.0]);
        }
        for _ in v..m {
            term = poly_mul(&term, &[pn, -1.0]);
        }
        for (o, t) in out.iter_mut().zip(term) {
            *o += t;
        }
    }
    out
}

/// Builds the `N - 1` maps for data `data`, scalings `alphas` and
/// Bernstein degree `m`.
pub fn build_ifs_1d(data: &DataSet1D, alphas: &[f64], m: usize) -> Result<FifSystem1D> {
    check_degree(m)?;
    let n = data.len();
    if alphas.len() != n - 1 {
        return Err(Error::ShapeMismatch {
            expected: n - 1,
            actual: alphas.len(),
        });
    }
    if let Some((index, &value)) = alphas
        .iter()
        .enumerate()
        .find(|(_, a)| !(a.abs() < 1.0) || !a.is_finite())
    {
        return Err(Error::InvalidScaling { index, value });
    }
    let iv = data.interval();
    let (p1, pn) = (iv.start(), iv.end());
    let len = iv.length();
    let pts = data.points();
    let nodes = BernNodes1D::from_fn(&iv, m, |p| data.linear(p))?;

    let base: Vec<f64> = match m {
        1 => {
            let (s, t) = bern1d_coeffs_deg1(&iv, pts[0].1, pts[n - 1].1);
            vec![t, s]
        }
        2 => {
            let (c, d, e) = bern1d_coeffs_deg2(&iv, pts[0].1, nodes.values()[1], pts[n - 1].1);
            vec![e, d, c]
        }
        _ => bernstein_power_coeffs(&iv, &nodes),
    };

    let maps = pts
        .windows(2)
        .zip(alphas)
        .map(|(w, &alpha)| {
            let ((pi, qi), (pj, qj)) = (w[0], w[1]);
            let big_a = (qj - qi) / len;
            UniMap {
                a: (pj - pi) / len,
                b: (pn * pi - p1 * pj) / len,
                big_a,
                big_b: qi - big_a * p1,
                alpha,
                correction: base.iter().map(|c| alpha * c).collect(),
            }
        })
        .collect();
    Ok(FifSystem1D {
        dataset: data.clone(),
        maps,
        degree: m,
        nodes,
    })
}

impl FifSystem1D {
    pub fn interval(&self) -> Interval {
        self.dataset.interval()
    }

    /// `B_m(g, p)`.
    pub fn bernstein(&self, p: f64) -> f64 {
        bern1d_eval_unchecked(&self.interval(), &self.nodes, p)
    }

    /// Applies `w_i` to `(p, q)`.
    pub fn apply(&self, i: usize, p: f64, q: f64) -> (f64, f64) {
        let w = &self.maps[i];
        (
            w.s(p),
            w.alpha * q + w.big_a * p + w.big_b - w.alpha * self.bernstein(p),
        )
    }

    pub fn max_alpha(&self) -> f64 {
        self.maps.iter().map(|w| w.alpha.abs()).fold(0.0, f64::max)
    }

    /// `ceil(log(1e-10) / log(max |alpha|))`, clamped to `1..=60`.
    pub fn default_iters(&self) -> usize {
        let c = self.max_alpha();
        if c == 0.0 {
            return 1;
        }
        let k = (EVAL_TARGET.ln() / c.ln()).ceil();
        (k as usize).clamp(1, MAX_DEFAULT_ITERS)
    }

    /// Bound on `|d/dp B_m(g, p)|` over the interval.
    pub fn bernstein_slope_bound(&self) -> f64 {
        let iv = self.interval();
        let v = self.nodes.values();
        match self.degree {
            1 => ((v[1] - v[0]) / iv.length()).abs(),
            2 => {
                let (c, d, _) = bern1d_coeffs_deg2(&iv, v[0], v[1], v[2]);
                d.abs() + 2.0 * c.abs() * iv.max_abs()
            }
            m => {
                let steep = v
                    .windows(2)
                    .map(|w| (w[1] - w[0]).abs())
                    .fold(0.0, f64::max);
                m as f64 * steep / iv.length()
            }
        }
    }
}

/// Default metric slack: half the smallest `1 - |a_i|`.
pub fn default_epsilon_1d(sys: &FifSystem1D) -> f64 {
    0.5 * slack_1d(sys)
}

fn slack_1d(sys: &FifSystem1D) -> f64 {
    sys.maps
        .iter()
        .map(|w| 1.0 - w.a.abs())
        .fold(f64::INFINITY, f64::min)
}

/// Weighted metric `|dp| + theta |dq|` certificate.
pub fn check_hyperbolic_1d(sys: &FifSystem1D, epsilon: f64) -> Result<HyperbolicityReport> {
    let slack = slack_1d(sys);
    if !(epsilon > 0.0 && epsilon < slack) {
        return Err(Error::InvalidEpsilon {
            epsilon,
            upper: slack,
        });
    }
    let slope = sys.bernstein_slope_bound();
    let denom = |w: &UniMap| w.big_a.abs() + w.alpha.abs() * slope;
    let worst = sys.maps.iter().map(denom).fold(0.0, f64::max);
    let theta = if worst > 0.0 {
        (slack - epsilon) / worst
    } else {
        1.0
    };
    let ratio = sys
        .maps
        .iter()
        .map(|w| (w.a.abs() + theta * denom(w)).max(w.alpha.abs()))
        .fold(0.0, f64::max);
    Ok(HyperbolicityReport {
        theta,
        ratio,
        hyperbolic: ratio < 1.0 && theta > 0.0,
        epsilon,
    })
}

/// Certificate at the default `epsilon`; a single piece spanning the whole
/// interval (`|a| = 1`) is reported as non-hyperbolic.
pub fn certify_1d(sys: &FifSystem1D) -> Result<HyperbolicityReport> {
    let eps = default_epsilon_1d(sys);
    if eps <= 0.0 {
        let ratio = sys.maps.iter().map(|w| w.a.abs()).fold(0.0, f64::max);
        return Ok(HyperbolicityReport {
            theta: 0.0,
            ratio,
            hyperbolic: false,
            epsilon: eps,
        });
    }
    check_hyperbolic_1d(sys, eps)
}

/// Runs `iters` steps of the fixed-point recursion starting from `g`.
pub fn eval_fif_1d_bounded(sys: &FifSystem1D, p: f64, iters: usize) -> Result<FifValue> {
    let iv = sys.interval();
    if !iv.contains(p) {
        return Err(Error::out_of_domain(&[p]));
    }
    let data = &sys.dataset;
    let mut x = p;
    let mut value = 0.0;
    let mut coef = 1.0;
    for _ in 0..iters {
        let i = data.segment(x);
        let w = &sys.maps[i];
        let u = sys.pull_back(i, x);
        value += coef * (data.linear(x) - w.alpha * sys.bernstein(u));
        coef *= w.alpha;
        x = u;
        if coef == 0.0 {
            break;
        }
    }
    value += coef * data.linear(x);
    let c = sys.max_alpha();
    let (qmin, qmax) = data.q_range();
    let bound = if c < 1.0 {
        c.powi(iters as i32 + 1) / (1.0 - c) * (qmax - qmin)
    } else {
        f64::INFINITY
    };
    Ok(FifValue { value, bound })
}

pub fn eval_fif_1d(sys: &FifSystem1D, p: f64, iters: usize) -> Result<f64> {
    eval_fif_1d_bounded(sys, p, iters).map(|v| v.value)
}

/// Map selection weights `max(|a_i|, 0.01 / (N - 1))`.
pub fn map_weights_1d(sys: &FifSystem1D) -> Vec<f64> {
    let floor = 0.01 / sys.maps.len() as f64;
    sys.maps.iter().map(|w| w.a.abs().max(floor)).collect()
}

/// Random iteration from `(p_1, q_1)`, discarding `burn_in` iterates.
pub fn chaos_game_1d(
    sys: &FifSystem1D,
    n_points: usize,
    seed: u64,
    burn_in: usize,
) -> Result<AttractorCloud<2>> {
    let report = certify_1d(sys)?;
    if !report.hyperbolic {
        return Err(Error::NotHyperbolic {
            ratio: report.ratio,
        });
    }
    let mut cloud = AttractorCloud {
        points: Vec::with_capacity(n_points),
        seed,
        burn_in,
    };
    if n_points == 0 {
        return Ok(cloud);
    }
    let dist = WeightedIndex::new(map_weights_1d(sys)).expect("weights are positive");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut p, mut q) = sys.dataset.points()[0];
    for step in 0..burn_in + n_points {
        (p, q) = sys.apply(dist.sample(&mut rng), p, q);
        if step >= burn_in {
            cloud.points.push([p, q]);
        }
    }
    Ok(cloud)
}
