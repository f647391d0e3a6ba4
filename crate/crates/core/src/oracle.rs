//! Independent reference values: truncated Weierstrass-type series,
//! adaptive Simpson quadrature, subdivided symmetric triangle rules and
//! exact polynomial integrals over triangles.
//!
//! Nothing here depends on the fractal constructions; tests and the
//! comparison tables use these routines as the ground truth.

use std::f64::consts::PI;

use serde::Serialize;

use crate::bernstein::{tri_monomial_integral, Interval, Point2, Triangle, MAX_MONOMIAL_DEGREE};
use crate::error::{Error, Result};

/// Dense polynomial with ascending coefficients.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Polynomial(pub Vec<f64>);

impl Polynomial {
    pub fn eval(&self, t: f64) -> f64 {
        self.0.iter().rev().fold(0.0, |acc, &c| acc * t + c)
    }

    /// Bound on `|p(t)|` for `|t| <= 1`.
    pub fn sup_bound_unit(&self) -> f64 {
        self.0.iter().map(|c| c.abs()).sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Trig {
    Sine,
    Cosine,
}

/// `poly(t) + amp(t) * sum_{k=1}^{K} trig(base^k pi t) / 2^k`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeierstrassSpec {
    pub poly: Polynomial,
    pub amp: Polynomial,
    pub base: f64,
    pub kind: Trig,
    pub terms: usize,
}

impl WeierstrassSpec {
    /// `1 + (3t^3 + 2t^2 - 0.7) sum cos(10^k pi t) / 2^k`.
    pub fn cosine_ten(terms: usize) -> Self {
        Self {
            poly: Polynomial(vec![1.0]),
            amp: Polynomial(vec![-0.7, 0.0, 2.0, 3.0]),
            base: 10.0,
            kind: Trig::Cosine,
            terms,
        }
    }

    /// `3t^2 + 2t + 0.7 - 5 sum sin(base^k pi t) / 2^k`.
    pub fn sine(base: f64, terms: usize) -> Self {
        Self {
            poly: Polynomial(vec![0.7, 2.0, 3.0]),
            amp: Polynomial(vec![-5.0]),
            base,
            kind: Trig::Sine,
            terms,
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        let mut freq = 1.0;
        let mut weight = 1.0;
        let mut series = 0.0;
        for _ in 0..self.terms {
            freq *= self.base;
            weight *= 0.5;
            // reduce base^k t modulo 2 before multiplying by pi; integer
            // multiples then hit the zeros of sin exactly
            let r = (freq * t).rem_euclid(2.0);
            series += weight
                * match self.kind {
                    Trig::Sine => (PI * r).sin(),
                    Trig::Cosine => (PI * r).cos(),
                };
        }
        self.poly.eval(t) + self.amp.eval(t) * series
    }

    /// Bound on the omitted tail `|amp| * 2^{-K}` over `[-1, 1]`.
    pub fn tail_bound(&self) -> f64 {
        self.amp.sup_bound_unit() * 0.5f64.powi(self.terms as i32)
    }
}

/// Adaptive Simpson settings.
#[derive(Debug, Clone, Copy)]
pub struct AdaptiveOptions {
    pub tol: f64,
    pub max_depth: u32,
    /// Panels are always split at least this many times.
    pub min_depth: u32,
    /// Halve the tolerance at every split so the panel errors sum to
    /// `tol`. Off by default: each panel is accepted once its own error
    /// estimate is below `tol`. The halving variant cannot converge on
    /// the Weierstrass-type series, whose roughness persists at every scale.
    pub split_tol: bool,
}

impl AdaptiveOptions {
    pub fn with_tol(tol: f64) -> Self {
        Self {
            tol,
            max_depth: 24,
            min_depth: 4,
            split_tol: false,
        }
    }
}

/// Adaptive Simpson quadrature with the default depth bounds.
pub fn adaptive_quad_1d(f: impl Fn(f64) -> f64, interval: &Interval, tol: f64) -> Result<f64> {
    adaptive_quad_1d_with(f, interval, AdaptiveOptions::with_tol(tol))
}

pub fn adaptive_quad_1d_with(
    f: impl Fn(f64) -> f64,
    interval: &Interval,
    opts: AdaptiveOptions,
) -> Result<f64> {
    assert!(opts.tol > 0.0, "tolerance must be positive");
    let (a, b) = (interval.start(), interval.end());
    let mut ctx = SimpsonCtx {
        f: &f,
        opts,
        evaluations: 3,
        worst: 0.0,
        failed: false,
    };
    let (fa, fm, fb) = (f(a), f(0.5 * (a + b)), f(b));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    let value = ctx.refine(a, b, fa, fm, fb, whole, opts.tol, 0);
    if ctx.failed {
        return Err(Error::NoConvergence {
            evaluations: ctx.evaluations,
            estimate: ctx.worst,
        });
    }
    Ok(value)
}

struct SimpsonCtx<'a, F> {
    f: &'a F,
    opts: AdaptiveOptions,
    evaluations: usize,
    worst: f64,
    failed: bool,
}

impl<F: Fn(f64) -> f64> SimpsonCtx<'_, F> {
    #[allow(clippy::too_many_arguments)]
    fn refine(
        &mut self,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = ((self.f)(lm), (self.f)(rm));
        self.evaluations += 2;
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let delta = left + right - whole;
        if depth >= self.opts.min_depth && delta.abs() <= 15.0 * tol {
            return left + right + delta / 15.0;
        }
        if depth >= self.opts.max_depth {
            self.failed = true;
            self.worst = self.worst.max(delta.abs() / 15.0);
            return left + right + delta / 15.0;
        }
        let tol = if self.opts.split_tol { 0.5 * tol } else { tol };
        self.refine(a, m, fa, flm, fm, left, tol, depth + 1)
            + self.refine(m, b, fm, frm, fb, right, tol, depth + 1)
    }
}

// Degree-5 seven-point symmetric rule: (barycentric point, weight).
fn dunavant5() -> [([f64; 3], f64); 7] {
    let s = 15f64.sqrt();
    let (a1, b1, w1) = (
        (6.0 + s) / 21.0,
        (9.0 - 2.0 * s) / 21.0,
        (155.0 + s) / 1200.0,
    );
    let (a2, b2, w2) = (
        (6.0 - s) / 21.0,
        (9.0 + 2.0 * s) / 21.0,
        (155.0 - s) / 1200.0,
    );
    [
        ([1.0 / 3.0; 3], 0.225),
        ([b1, a1, a1], w1),
        ([a1, b1, a1], w1),
        ([a1, a1, b1], w1),
        ([b2, a2, a2], w2),
        ([a2, b2, a2], w2),
        ([a2, a2, b2], w2),
    ]
}

/// Applies the seven-point rule on each of the `n^2` congruent pieces of
/// the uniform `n`-fold edge subdivision of `tri`.
pub fn triangle_rule(f: &impl Fn(Point2) -> f64, tri: &Triangle, n: usize) -> f64 {
    let rule = dunavant5();
    let [v1, v2, v3] = *tri.vertices();
    let nf = n as f64;
    let lattice = |i: usize, j: usize| -> Point2 {
        let (s, t) = (i as f64 / nf, j as f64 / nf);
        [
            v1[0] + s * (v2[0] - v1[0]) + t * (v3[0] - v1[0]),
            v1[1] + s * (v2[1] - v1[1]) + t * (v3[1] - v1[1]),
        ]
    };
    let piece = |a: Point2, b: Point2, c: Point2| -> f64 {
        rule.iter()
            .map(|(t, w)| {
                let p = [
                    t[0] * a[0] + t[1] * b[0] + t[2] * c[0],
                    t[0] * a[1] + t[1] * b[1] + t[2] * c[1],
                ];
                w * f(p)
            })
            .sum()
    };
    let mut sum = 0.0;
    for i in 0..n {
        for j in 0..(n - i) {
            sum += piece(lattice(i, j), lattice(i + 1, j), lattice(i, j + 1));
            if i + j + 1 < n {
                sum += piece(lattice(i + 1, j), lattice(i + 1, j + 1), lattice(i, j + 1));
            }
        }
    }
    sum * tri.area() / (n * n) as f64
}

/// Deepest uniform refinement level tried by [`triangle_quad`] (`2^9` edge splits).
pub const TRIANGLE_MAX_LEVEL: u32 = 9;

/// Subdivided seven-point rule, refined by edge halving until two
/// successive levels agree within `tol`.
pub fn triangle_quad(f: impl Fn(Point2) -> f64, tri: &Triangle, tol: f64) -> Result<f64> {
    assert!(tol > 0.0, "tolerance must be positive");
    let mut prev = triangle_rule(&f, tri, 1);
    let mut evaluations = 7;
    let mut diff = f64::INFINITY;
    for level in 1..=TRIANGLE_MAX_LEVEL {
        let n = 1usize << level;
        let cur = triangle_rule(&f, tri, n);
        evaluations += 7 * n * n;
        diff = (cur - prev).abs();
        if diff < tol {
            return Ok(cur);
        }
        prev = cur;
    }
    Err(Error::NoConvergence {
        evaluations,
        estimate: diff,
    })
}

/// Bivariate polynomial as a list of `(coefficient, x power, y power)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Poly2 {
    pub terms: Vec<(f64, usize, usize)>,
}

impl Poly2 {
    pub fn new(terms: Vec<(f64, usize, usize)>) -> Self {
        Self { terms }
    }

    pub fn degree(&self) -> usize {
        self.terms.iter().map(|&(_, i, j)| i + j).max().unwrap_or(0)
    }

    pub fn eval(&self, v: Point2) -> f64 {
        self.terms
            .iter()
            .map(|&(c, i, j)| c * v[0].powi(i as i32) * v[1].powi(j as i32))
            .sum()
    }

    /// `0.26 (x^2 + y^2) - 0.48 x y`.
    pub fn matyas() -> Self {
        Self::new(vec![(0.26, 2, 0), (0.26, 0, 2), (-0.48, 1, 1)])
    }

    /// `(x^2 + y - 11)^2 + (x + y^2 - 7)^2`, expanded.
    pub fn himmelblau() -> Self {
        Self::new(vec![
            (1.0, 4, 0),
            (2.0, 2, 1),
            (-22.0, 2, 0),
            (1.0, 0, 2),
            (-22.0, 0, 1),
            (121.0, 0, 0),
            (1.0, 2, 0),
            (2.0, 1, 2),
            (-14.0, 1, 0),
            (1.0, 0, 4),
            (-14.0, 0, 2),
            (49.0, 0, 0),
        ])
    }
}

/// Exact integral of a polynomial of total degree at most 4 over `tri`.
pub fn exact_poly_integral(poly: &Poly2, tri: &Triangle) -> Result<f64> {
    if poly.degree() > MAX_MONOMIAL_DEGREE {
        return Err(Error::UnsupportedDegree {
            degree: poly.degree(),
            reason: "exact integration supports total degree up to 4",
        });
    }
    poly.terms
        .iter()
        .map(|&(c, i, j)| tri_monomial_integral(tri, i, j).map(|v| c * v))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weierstrass_endpoints_and_origin() {
        let s = WeierstrassSpec::sine(6.0, 20);
        assert_eq!(s.eval(1.0), 5.7);
        assert!((s.eval(-1.0) - 1.7).abs() < 1e-15);
        let c = WeierstrassSpec::cosine_ten(20);
        let expect = 1.0 - 0.7 * (1.0 - 0.5f64.powi(20));
        assert!((c.eval(0.0) - expect).abs() < 1e-15);
    }

    #[test]
    fn weierstrass_tail_bound_holds() {
        for t in [-0.93, -0.41, 0.013, 0.37, 0.77] {
            for spec in [
                WeierstrassSpec::cosine_ten(6),
                WeierstrassSpec::sine(8.0, 6),
            ] {
                let more = WeierstrassSpec {
                    terms: spec.terms + 8,
                    ..spec.clone()
                };
                assert!((spec.eval(t) - more.eval(t)).abs() <= spec.tail_bound() + 1e-15);
            }
        }
    }

    #[test]
    fn adaptive_simpson_polynomials() {
        let iv = Interval::new(-1.0, 1.0).unwrap();
        let v = adaptive_quad_1d(|t| 3.0 * t * t + 2.0 * t + 0.7, &iv, 1e-10).unwrap();
        assert!((v - 3.4).abs() < 1e-10);
        let unit = Interval::new(0.0, 1.0).unwrap();
        assert!((adaptive_quad_1d(|_| 1.0, &unit, 1e-12).unwrap() - 1.0).abs() < 1e-12);
        let v = adaptive_quad_1d(|t| t.powi(7) - t.powi(4), &unit, 1e-9).unwrap();
        assert!((v - (1.0 / 8.0 - 1.0 / 5.0)).abs() < 1e-9);
    }

    #[test]
    fn adaptive_simpson_reports_budget_exhaustion() {
        let iv = Interval::new(0.0, 1.0).unwrap();
        let opts = AdaptiveOptions {
            tol: 1e-14,
            max_depth: 3,
            min_depth: 0,
            split_tol: true,
        };
        let err = adaptive_quad_1d_with(|t| (40.0 * t).sin(), &iv, opts).unwrap_err();
        assert!(matches!(err, Error::NoConvergence { .. }));
    }

    #[test]
    fn triangle_rule_exact_for_quintics() {
        let tri = Triangle::new([0.2, -0.3], [1.4, 0.1], [0.5, 1.2]).unwrap();
        let p = Poly2::new(vec![
            (1.5, 4, 0),
            (-2.0, 1, 3),
            (0.5, 2, 2),
            (3.0, 0, 0),
            (-1.0, 0, 1),
        ]);
        let exact = exact_poly_integral(&p, &tri).unwrap();
        assert!((triangle_rule(&|v| p.eval(v), &tri, 1) - exact).abs() < 1e-13);
        let unit = Triangle::new([0.0, 0.0], [1.0, 0.0], [0.0, 1.0]).unwrap();
        assert!((triangle_quad(|_| 1.0, &unit, 1e-12).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn exact_integral_rejects_high_degree() {
        let tri = Triangle::new([0.0, 0.0], [1.0, 0.0], [0.0, 1.0]).unwrap();
        let p = Poly2::new(vec![(1.0, 5, 0)]);
        assert!(matches!(
            exact_poly_integral(&p, &tri),
            Err(Error::UnsupportedDegree { .. })
        ));
        let c = Poly2::new(vec![(2.5, 0, 0)]);
        assert!((exact_poly_integral(&c, &tri).unwrap() - 1.25).abs() < 1e-15);
    }

    #[test]
    fn himmelblau_expansion_matches_definition() {
        let p = Poly2::himmelblau();
        for v in [[0.3f64, -1.2], [2.0, 4.5], [-3.1, 0.7]] {
            let direct = (v[0] * v[0] + v[1] - 11.0).powi(2) + (v[0] + v[1] * v[1] - 7.0).powi(2);
            assert!((p.eval(v) - direct).abs() < 1e-9);
        }
    }
}
