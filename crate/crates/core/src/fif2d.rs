//! Bivariate Bernstein fractal interpolation over a coloured partition.
//!
//! Each piece `D_n` of the partition carries the map
//!
//! ```text
//! w_n(x, y, z) = (L_n(x, y),  alpha_n z + h(L_n(x, y)) - alpha_n B_m(h, x, y))
//! ```
//!
//! with `h` the piecewise-linear interpolant of the samples and `B_m(h, .)`
//! its Bernstein polynomial over the whole domain (`m` = 1 or 2). The FIF
//! is the fixed point of
//! `f(v) = alpha_n f(u) + h(v) - alpha_n B_m(h, u)`, `u = L_n^{-1}(v)`.

use rand::distributions::{Distribution, WeightedIndex};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bernstein::{
    bern2d_coeffs_deg1, bern2d_coeffs_deg2, BaryCoord, BernNodes2D, Plane, Point2, QuadCoeffs2D,
};
use crate::error::{Error, Result};
use crate::fif1d::{AttractorCloud, FifValue, HyperbolicityReport, EVAL_TARGET, MAX_DEFAULT_ITERS};
use crate::trimesh::{jacobian, AffineMap2D, TriPartition};

/// Scaling used throughout the worked bivariate examples.
pub const DEFAULT_ALPHA_2D: f64 = 0.001;
/// Barycentric weights below this are treated as zero when pulling back.
pub const SNAP: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BivMap {
    pub l: AffineMap2D,
    pub alpha: f64,
    /// `h(L_n(x, y)) = dx x + dy y + offset`.
    pub plane: Plane,
    /// Cartesian coefficients of `alpha * B_m(h, x, y)`.
    pub correction: QuadCoeffs2D,
}

impl BivMap {
    pub fn delta(&self) -> f64 {
        jacobian(&self.l)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FifSystem2D {
    pub partition: TriPartition,
    pub maps: Vec<BivMap>,
    pub degree: usize,
    /// `B_m(h, .)` nodes on the domain.
    pub nodes: BernNodes2D,
    /// Cartesian form of `B_m(h, .)`.
    pub bern: QuadCoeffs2D,
}

/// Bernstein nodes and cartesian coefficients of `B_m(h, .)` over the domain.
fn domain_bernstein(part: &TriPartition, m: usize) -> Result<(BernNodes2D, QuadCoeffs2D)> {
    let z = part.samples()?;
    let d = part.d;
    let corner = [z[0], z[d], z[d * (d + 1)]];
    let dom = &part.domain;
    match m {
        1 => {
            let nodes = BernNodes2D::from_indexed(1, |i, j, _| {
                if i == 1 {
                    corner[0]
                } else if j == 1 {
                    corner[1]
                } else {
                    corner[2]
                }
            })?;
            Ok((
                nodes,
                QuadCoeffs2D::from_plane(bern2d_coeffs_deg1(dom, corner)),
            ))
        }
        2 => {
            let mid = [
                part.interpolate(dom.midpoint(0, 1))?,
                part.interpolate(dom.midpoint(0, 2))?,
                part.interpolate(dom.midpoint(1, 2))?,
            ];
            Ok((
                BernNodes2D::quadratic(corner, mid),
                bern2d_coeffs_deg2(dom, corner, mid),
            ))
        }
        _ => Err(Error::UnsupportedDegree {
            degree: m,
            reason: "bivariate systems use m = 1 or m = 2",
        }),
    }
}

/// Builds one map per piece. `alphas` holds either one shared value or one
/// per piece.
pub fn build_ifs_2d(part: &TriPartition, alphas: &[f64], m: usize) -> Result<FifSystem2D> {
    let n = part.len();
    let alpha_at = |i: usize| {
        if alphas.len() == 1 {
            alphas[0]
        } else {
            alphas[i]
        }
    };
    if alphas.len() != 1 && alphas.len() != n {
        return Err(Error::ShapeMismatch {
            expected: n,
            actual: alphas.len(),
        });
    }
    if let Some((index, &value)) = alphas.iter().enumerate().find(|(_, a)| !(a.abs() < 1.0)) {
        return Err(Error::InvalidScaling { index, value });
    }
    let (nodes, bern) = domain_bernstein(part, m)?;
    let z = part.samples()?;
    let mut maps = Vec::with_capacity(n);
    for i in 0..n {
        let l = part.affine_map(i)?;
        let ids = part.by_colour(i);
        let plane = bern2d_coeffs_deg1(&part.domain, ids.map(|v| z[v]));
        let alpha = alpha_at(i);
        let correction = QuadCoeffs2D {
            xx: alpha * bern.xx,
            yy: alpha * bern.yy,
            xy: alpha * bern.xy,
            x: alpha * bern.x,
            y: alpha * bern.y,
            c: alpha * bern.c,
        };
        maps.push(BivMap {
            l,
            alpha,
            plane,
            correction,
        });
    }
    Ok(FifSystem2D {
        partition: part.clone(),
        maps,
        degree: m,
        nodes,
        bern,
    })
}

impl FifSystem2D {
    /// Applies `w_n`.
    pub fn apply(&self, n: usize, v: [f64; 3]) -> [f64; 3] {
        let w = &self.maps[n];
        let xy = [v[0], v[1]];
        let t = w.l.apply(xy);
        [
            t[0],
            t[1],
            w.alpha * v[2] + w.plane.eval(xy) - w.correction.eval(xy),
        ]
    }

    pub fn max_alpha(&self) -> f64 {
        self.maps.iter().map(|w| w.alpha.abs()).fold(0.0, f64::max)
    }

    pub fn default_iters(&self) -> usize {
        let c = self.max_alpha();
        if c == 0.0 {
            return 1;
        }
        ((EVAL_TARGET.ln() / c.ln()).ceil() as usize).clamp(1, MAX_DEFAULT_ITERS)
    }

    /// Bounds on `|dB/dx|` and `|dB/dy|` over the domain.
    pub fn bernstein_slope_bounds(&self) -> (f64, f64) {
        let b = &self.bern;
        let (mx, my) = self.partition.domain.max_abs_xy();
        (
            b.x.abs() + 2.0 * b.xx.abs() * mx + b.xy.abs() * my,
            b.y.abs() + 2.0 * b.yy.abs() * my + b.xy.abs() * mx,
        )
    }

    /// `L_n^{-1}` through the barycentric weights of `v` in piece `n`: the
    /// weights carry over to the colour-matched domain corners. Weights
    /// below [`SNAP`] are dropped so vertices and edges land exactly on
    /// corners and domain edges; inverting the linear part directly would
    /// amplify rounding at every step.
    fn pull_back(&self, n: usize, bary: BaryCoord) -> Point2 {
        let mut w = bary.0.map(|t| if t < SNAP { 0.0 } else { t });
        let s: f64 = w.iter().sum();
        w.iter_mut().for_each(|t| *t /= s);
        let dom = &self.partition.domain;
        let corners = self
            .partition
            .sub_colours(n)
            .map(|c| dom.vertex((c - 1) as usize));
        if let Some(i) = w.iter().position(|&t| t == 1.0) {
            return corners[i];
        }
        [
            w[0] * corners[0][0] + w[1] * corners[1][0] + w[2] * corners[2][0],
            w[0] * corners[0][1] + w[1] * corners[1][1] + w[2] * corners[2][1],
        ]
    }

    fn sample_range(&self) -> f64 {
        let z = self.partition.z.as_deref().unwrap_or(&[]);
        let (lo, hi) = z
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| {
                (a.min(v), b.max(v))
            });
        if z.is_empty() {
            0.0
        } else {
            hi - lo
        }
    }

    fn bound(&self, iters: usize) -> f64 {
        let c = self.max_alpha();
        c.powi(iters as i32 + 1) / (1.0 - c) * self.sample_range()
    }

    fn iterate(&self, first: usize, v: Point2, iters: usize) -> Result<f64> {
        let part = &self.partition;
        let mut n = first;
        let mut bary = part.sub_triangle(n).barycentric(v);
        let mut value = 0.0;
        let mut coef = 1.0;
        let mut x = v;
        for step in 0..iters {
            if step > 0 {
                (n, bary) = part.locate(x)?;
            }
            let w = &self.maps[n];
            let u = self.pull_back(n, bary);
            value += coef * (w.plane.eval(u) - w.alpha * self.bern.eval(u));
            coef *= w.alpha;
            x = u;
            if coef == 0.0 {
                return Ok(value);
            }
        }
        Ok(value + coef * part.interpolate(x)?)
    }

    /// One step of the recursion through map `n`, whose piece must contain
    /// `v`, with the inner value from [`eval_fif_2d`].
    pub fn eval_through(&self, n: usize, v: Point2, iters: usize) -> Result<f64> {
        if iters == 0 {
            return self.partition.interpolate(v);
        }
        self.iterate(n, v, iters)
    }
}

pub fn eval_fif_2d_bounded(sys: &FifSystem2D, v: Point2, iters: usize) -> Result<FifValue> {
    let (n, _) = sys.partition.locate(v)?;
    let value = if iters == 0 {
        sys.partition.interpolate(v)?
    } else {
        sys.iterate(n, v, iters)?
    };
    Ok(FifValue {
        value,
        bound: sys.bound(iters),
    })
}

/// Fixed-point iteration from `h`.
pub fn eval_fif_2d(sys: &FifSystem2D, v: Point2, iters: usize) -> Result<f64> {
    eval_fif_2d_bounded(sys, v, iters).map(|r| r.value)
}

fn slacks_2d(sys: &FifSystem2D) -> (f64, f64) {
    sys.maps
        .iter()
        .fold((f64::INFINITY, f64::INFINITY), |(sx, sy), w| {
            let (cx, cy) = w.l.column_sums();
            (sx.min(1.0 - cx), sy.min(1.0 - cy))
        })
}

pub fn default_epsilon_2d(sys: &FifSystem2D) -> f64 {
    let (sx, sy) = slacks_2d(sys);
    0.5 * sx.min(sy)
}

/// Weighted metric `|dx| + |dy| + gamma |dz|` certificate.
pub fn check_hyperbolic_2d(sys: &FifSystem2D, epsilon: f64) -> Result<HyperbolicityReport> {
    let (sx, sy) = slacks_2d(sys);
    let upper = sx.min(sy);
    if !(epsilon > 0.0 && epsilon < upper) {
        return Err(Error::InvalidEpsilon { epsilon, upper });
    }
    let (bx, by) = sys.bernstein_slope_bounds();
    let dx = |w: &BivMap| w.plane.dx.abs() + w.alpha.abs() * bx;
    let dy = |w: &BivMap| w.plane.dy.abs() + w.alpha.abs() * by;
    let worst_x = sys.maps.iter().map(dx).fold(0.0, f64::max);
    let worst_y = sys.maps.iter().map(dy).fold(0.0, f64::max);
    let qx = if worst_x > 0.0 {
        (sx - epsilon) / worst_x
    } else {
        f64::INFINITY
    };
    let qy = if worst_y > 0.0 {
        (sy - epsilon) / worst_y
    } else {
        f64::INFINITY
    };
    let gamma = match qx.min(qy) {
        g if g.is_finite() => g,
        _ => 1.0,
    };
    let ratio = sys
        .maps
        .iter()
        .map(|w| {
            let (cx, cy) = w.l.column_sums();
            w.alpha
                .abs()
                .max(cx + gamma * dx(w))
                .max(cy + gamma * dy(w))
        })
        .fold(0.0, f64::max);
    Ok(HyperbolicityReport {
        theta: gamma,
        ratio,
        hyperbolic: ratio < 1.0 && gamma > 0.0,
        epsilon,
    })
}

/// Certificate at the default `epsilon`; a partition whose maps do not
/// contract in the plane is reported as non-hyperbolic.
pub fn certify_2d(sys: &FifSystem2D) -> Result<HyperbolicityReport> {
    let eps = default_epsilon_2d(sys);
    if eps <= 0.0 {
        let ratio = sys
            .maps
            .iter()
            .map(|w| {
                let (cx, cy) = w.l.column_sums();
                cx.max(cy)
            })
            .fold(0.0, f64::max);
        return Ok(HyperbolicityReport {
            theta: 0.0,
            ratio,
            hyperbolic: false,
            epsilon: eps,
        });
    }
    check_hyperbolic_2d(sys, eps)
}

/// Random iteration from the domain centroid. Maps are drawn with
/// probability proportional to `max(delta_n, 0.01 / N)`.
pub fn chaos_game_2d(
    sys: &FifSystem2D,
    n_points: usize,
    seed: u64,
    burn_in: usize,
) -> Result<AttractorCloud<3>> {
    let report = certify_2d(sys)?;
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
    let floor = 0.01 / sys.maps.len() as f64;
    let dist = WeightedIndex::new(sys.maps.iter().map(|w| w.delta().max(floor)))
        .expect("weights are positive");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let c = sys.partition.domain.centroid();
    let mut v = [c[0], c[1], eval_fif_2d(sys, c, MAX_DEFAULT_ITERS)?];
    for step in 0..burn_in + n_points {
        v = sys.apply(dist.sample(&mut rng), v);
        if step >= burn_in {
            cloud.points.push(v);
        }
    }
    Ok(cloud)
}

/// Largest disagreement, over `samples` points on every edge shared by two
/// pieces, between one recursion step taken through either piece.
pub fn continuity_defect(sys: &FifSystem2D, samples: usize, iters: usize) -> Result<f64> {
    let part = &sys.partition;
    let mut worst: f64 = 0.0;
    for ([a, b], t1, t2) in part.shared_edges() {
        let (pa, pb) = (part.vertices[a], part.vertices[b]);
        for s in 0..samples {
            let t = (s as f64 + 0.5) / samples as f64;
            let v = [pa[0] + t * (pb[0] - pa[0]), pa[1] + t * (pb[1] - pa[1])];
            let f1 = sys.eval_through(t1, v, iters)?;
            let f2 = sys.eval_through(t2, v, iters)?;
            worst = worst.max((f1 - f2).abs());
        }
    }
    Ok(worst)
}
