//! Bernstein polynomials on intervals and on triangles.
//!
//! The univariate form uses the interval endpoints directly; the bivariate
//! form works in barycentric coordinates with respect to a triangle. Both
//! come with closed-form integrals and with explicit cartesian coefficient
//! forms for degrees one and two.

use serde::Serialize;

use crate::error::{Error, Result};

pub type Point2 = [f64; 2];

/// Highest degree for which binomial and multinomial weights are tabulated.
pub const MAX_DEGREE: usize = 16;

/// Tolerance used when deciding whether a point lies in a closed triangle.
pub const INSIDE_TOL: f64 = 1e-12;

const DEGENERATE_TOL: f64 = 1e-12;

/// A closed interval `[start, end]` with `start < end`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Interval {
    start: f64,
    end: f64,
}

impl Interval {
    pub fn new(start: f64, end: f64) -> Result<Self> {
        if !(start < end) || !start.is_finite() || !end.is_finite() {
            return Err(Error::InvalidInterval { start, end });
        }
        Ok(Self { start, end })
    }

    pub fn start(&self) -> f64 {
        self.start
    }

    pub fn end(&self) -> f64 {
        self.end
    }

    pub fn length(&self) -> f64 {
        self.end - self.start
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.start + self.end)
    }

    pub fn contains(&self, p: f64) -> bool {
        p >= self.start && p <= self.end
    }

    /// Largest absolute abscissa on the interval.
    pub fn max_abs(&self) -> f64 {
        self.start.abs().max(self.end.abs())
    }

    /// Uniform Bernstein node `start + v (end - start) / m`.
    pub fn node(&self, v: usize, m: usize) -> f64 {
        if v == m {
            self.end
        } else {
            self.start + v as f64 * self.length() / m as f64
        }
    }
}

/// Barycentric weights of a point with respect to a triangle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BaryCoord(pub [f64; 3]);

impl BaryCoord {
    pub fn is_inside(&self) -> bool {
        self.0.iter().all(|&t| t >= -INSIDE_TOL)
    }

    /// Clamps negative weights to zero and renormalises.
    pub fn clamped(&self) -> BaryCoord {
        let mut t = self.0.map(|w| w.max(0.0));
        let s: f64 = t.iter().sum();
        t.iter_mut().for_each(|w| *w /= s);
        BaryCoord(t)
    }
}

/// A non-degenerate triangle given by its three cartesian vertices.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Triangle {
    vertices: [Point2; 3],
    det: f64,
}

impl Triangle {
    pub fn new(v1: Point2, v2: Point2, v3: Point2) -> Result<Self> {
        let det = det3(v1, v2, v3);
        if !(det.abs() > DEGENERATE_TOL) {
            return Err(Error::DegenerateTriangle { det });
        }
        Ok(Self {
            vertices: [v1, v2, v3],
            det,
        })
    }

    pub fn from_array(v: [Point2; 3]) -> Result<Self> {
        Self::new(v[0], v[1], v[2])
    }

    pub fn vertices(&self) -> &[Point2; 3] {
        &self.vertices
    }

    pub fn vertex(&self, i: usize) -> Point2 {
        self.vertices[i]
    }

    /// Signed determinant `x1(y2-y3) - x2(y1-y3) + x3(y1-y2)`, twice the signed area.
    pub fn signed_det(&self) -> f64 {
        self.det
    }

    pub fn area(&self) -> f64 {
        0.5 * self.det.abs()
    }

    pub fn centroid(&self) -> Point2 {
        let [a, b, c] = self.vertices;
        [(a[0] + b[0] + c[0]) / 3.0, (a[1] + b[1] + c[1]) / 3.0]
    }

    pub fn midpoint(&self, i: usize, j: usize) -> Point2 {
        let (a, b) = (self.vertices[i], self.vertices[j]);
        [0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])]
    }

    /// Barycentric coordinates from the three sub-determinants.
    pub fn barycentric(&self, v: Point2) -> BaryCoord {
        let [a, b, c] = self.vertices;
        let t1 = det3(v, b, c) / self.det;
        let t2 = det3(a, v, c) / self.det;
        let t3 = det3(a, b, v) / self.det;
        BaryCoord([t1, t2, t3])
    }

    pub fn point_at(&self, bary: BaryCoord) -> Point2 {
        let [a, b, c] = self.vertices;
        let t = bary.0;
        [
            t[0] * a[0] + t[1] * b[0] + t[2] * c[0],
            t[0] * a[1] + t[1] * b[1] + t[2] * c[1],
        ]
    }

    pub fn contains(&self, v: Point2) -> bool {
        self.barycentric(v).is_inside()
    }

    /// Largest absolute x and y over the closed triangle.
    pub fn max_abs_xy(&self) -> (f64, f64) {
        let mx = self.vertices.iter().map(|v| v[0].abs()).fold(0.0, f64::max);
        let my = self.vertices.iter().map(|v| v[1].abs()).fold(0.0, f64::max);
        (mx, my)
    }

    /// Coefficients `(a_j, b_j, c_j)` with `tau_j = (a_j x + b_j y + c_j) / det`.
    fn linear_forms(&self) -> [[f64; 3]; 3] {
        let [[x1, y1], [x2, y2], [x3, y3]] = self.vertices;
        [
            [y2 - y3, x3 - x2, x2 * y3 - x3 * y2],
            [y3 - y1, x1 - x3, x3 * y1 - x1 * y3],
            [y1 - y2, x2 - x1, x1 * y2 - x2 * y1],
        ]
    }
}

fn det3(a: Point2, b: Point2, c: Point2) -> f64 {
    a[0] * (b[1] - c[1]) - b[0] * (a[1] - c[1]) + c[0] * (a[1] - b[1])
}

pub(crate) fn check_degree(m: usize) -> Result<()> {
    if m == 0 {
        return Err(Error::UnsupportedDegree {
            degree: m,
            reason: "degree must be at least 1",
        });
    }
    if m > MAX_DEGREE {
        return Err(Error::UnsupportedDegree {
            degree: m,
            reason: "degree above 16",
        });
    }
    Ok(())
}

/// Exact binomial coefficient (n <= 16 keeps every intermediate in u64).
pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) as u64 / (i + 1) as u64)
}

/// Exact multinomial coefficient `m! / (i! j! k!)` with `m = i + j + k`.
pub fn multinomial(i: usize, j: usize, k: usize) -> u64 {
    binomial(i + j + k, i) * binomial(j + k, j)
}

pub(crate) fn factorial(n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, i| acc * i as f64)
}

/// Samples `g(start + v (end - start) / m)` for `v = 0..=m`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BernNodes1D {
    values: Vec<f64>,
}

impl BernNodes1D {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::UnsupportedDegree {
                degree: values.len().saturating_sub(1),
                reason: "degree must be at least 1",
            });
        }
        check_degree(values.len() - 1)?;
        Ok(Self { values })
    }

    pub fn from_fn(interval: &Interval, m: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        check_degree(m)?;
        Ok(Self {
            values: (0..=m).map(|v| f(interval.node(v, m))).collect(),
        })
    }

    pub fn degree(&self) -> usize {
        self.values.len() - 1
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// Evaluates the degree-`m` Bernstein polynomial on `interval` at `p`.
pub fn bern1d_eval(interval: &Interval, nodes: &BernNodes1D, p: f64) -> Result<f64> {
    if !interval.contains(p) {
        return Err(Error::out_of_domain(&[p]));
    }
    Ok(bern1d_eval_unchecked(interval, nodes, p))
}

pub(crate) fn bern1d_eval_unchecked(interval: &Interval, nodes: &BernNodes1D, p: f64) -> f64 {
    let m = nodes.degree();
    let len = interval.length();
    let s = (p - interval.start()) / len;
    let r = (interval.end() - p) / len;
    nodes
        .values
        .iter()
        .enumerate()
        .map(|(v, &f)| binomial(m, v) as f64 * s.powi(v as i32) * r.powi((m - v) as i32) * f)
        .sum()
}

/// Slope and intercept of the first-degree Bernstein polynomial through
/// `(start, q1)` and `(end, qn)`.
pub fn bern1d_coeffs_deg1(interval: &Interval, q1: f64, qn: f64) -> (f64, f64) {
    let (p1, pn) = (interval.start(), interval.end());
    let len = pn - p1;
    ((qn - q1) / len, (pn * q1 - p1 * qn) / len)
}

/// Power-basis coefficients `(c, d, e)` of `B_2(g, p) = c p^2 + d p + e`,
/// where `qmid` is the sample at the interval midpoint.
pub fn bern1d_coeffs_deg2(interval: &Interval, q1: f64, qmid: f64, qn: f64) -> (f64, f64, f64) {
    let (p1, pn) = (interval.start(), interval.end());
    let den = (pn - p1) * (pn - p1);
    let c = (q1 + qn - 2.0 * qmid) / den;
    let d = (2.0 * (p1 + pn) * qmid - 2.0 * (pn * q1 + p1 * qn)) / den;
    let e = (pn * pn * q1 + p1 * p1 * qn - 2.0 * p1 * pn * qmid) / den;
    (c, d, e)
}

/// Exact integral of the Bernstein polynomial over the interval.
pub fn bern1d_integral(interval: &Interval, nodes: &BernNodes1D) -> f64 {
    interval.length() / (nodes.degree() + 1) as f64 * nodes.values.iter().sum::<f64>()
}

/// Bernstein control values `f_{i,j,k}`, `i + j + k = m`, on a triangle.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BernNodes2D {
    degree: usize,
    values: Vec<f64>,
}

impl BernNodes2D {
    pub fn node_count(m: usize) -> usize {
        (m + 1) * (m + 2) / 2
    }

    fn index(m: usize, i: usize, j: usize) -> usize {
        // rows by i; row i holds m - i + 1 entries (j = 0..=m-i)
        i * (2 * m + 3 - i) / 2 + j
    }

    /// Builds nodes from a closure over index triples.
    pub fn from_indexed(m: usize, mut f: impl FnMut(usize, usize, usize) -> f64) -> Result<Self> {
        check_degree(m)?;
        let mut values = Vec::with_capacity(Self::node_count(m));
        for i in 0..=m {
            for j in 0..=(m - i) {
                values.push(f(i, j, m - i - j));
            }
        }
        Ok(Self { degree: m, values })
    }

    /// Samples `f` at the barycentric lattice points `(i/m, j/m, k/m)` of `tri`.
    pub fn from_fn(tri: &Triangle, m: usize, f: impl Fn(Point2) -> f64) -> Result<Self> {
        let mf = m as f64;
        Self::from_indexed(m, |i, j, k| {
            f(tri.point_at(BaryCoord([i as f64 / mf, j as f64 / mf, k as f64 / mf])))
        })
    }

    /// Degree-2 node set from corner values and edge-midpoint values ordered
    /// `[mid(v1,v2), mid(v1,v3), mid(v2,v3)]`.
    pub fn quadratic(corner_z: [f64; 3], mid_z: [f64; 3]) -> Self {
        Self::from_indexed(2, |i, j, k| match (i, j, k) {
            (2, 0, 0) => corner_z[0],
            (0, 2, 0) => corner_z[1],
            (0, 0, 2) => corner_z[2],
            (1, 1, 0) => mid_z[0],
            (1, 0, 1) => mid_z[1],
            _ => mid_z[2],
        })
        .expect("degree 2 is supported")
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        assert_eq!(
            i + j + k,
            self.degree,
            "index triple must sum to the degree"
        );
        self.values[Self::index(self.degree, i, j)]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    fn iter(&self) -> impl Iterator<Item = (usize, usize, usize, f64)> + '_ {
        let m = self.degree;
        (0..=m).flat_map(move |i| {
            (0..=(m - i)).map(move |j| (i, j, m - i - j, self.values[Self::index(m, i, j)]))
        })
    }
}

/// Evaluates the multinomial Bernstein form at barycentric coordinates.
pub fn bern2d_eval_bary(nodes: &BernNodes2D, bary: BaryCoord) -> f64 {
    let [t1, t2, t3] = bary.0;
    nodes
        .iter()
        .map(|(i, j, k, f)| {
            f * multinomial(i, j, k) as f64
                * t1.powi(i as i32)
                * t2.powi(j as i32)
                * t3.powi(k as i32)
        })
        .sum()
}

/// Evaluates the triangle Bernstein polynomial at a cartesian point.
pub fn bern2d_eval(tri: &Triangle, nodes: &BernNodes2D, v: Point2) -> Result<f64> {
    let bary = tri.barycentric(v);
    if !bary.is_inside() {
        return Err(Error::out_of_domain(&v));
    }
    Ok(bern2d_eval_bary(nodes, bary))
}

/// Plane `dx * x + dy * y + offset`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct Plane {
    pub dx: f64,
    pub dy: f64,
    pub offset: f64,
}

impl Plane {
    pub fn eval(&self, v: Point2) -> f64 {
        self.dx * v[0] + self.dy * v[1] + self.offset
    }

    pub fn scaled(&self, s: f64) -> Plane {
        Plane {
            dx: s * self.dx,
            dy: s * self.dy,
            offset: s * self.offset,
        }
    }
}

/// Quadratic surface `xx x^2 + yy y^2 + xy x y + x x + y y + c`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct QuadCoeffs2D {
    pub xx: f64,
    pub yy: f64,
    pub xy: f64,
    pub x: f64,
    pub y: f64,
    pub c: f64,
}

impl QuadCoeffs2D {
    pub fn eval(&self, v: Point2) -> f64 {
        let [x, y] = v;
        self.xx * x * x + self.yy * y * y + self.xy * x * y + self.x * x + self.y * y + self.c
    }

    /// Partial derivatives at `v`.
    pub fn gradient(&self, v: Point2) -> Point2 {
        let [x, y] = v;
        [
            2.0 * self.xx * x + self.xy * y + self.x,
            2.0 * self.yy * y + self.xy * x + self.y,
        ]
    }

    pub fn from_plane(p: Plane) -> Self {
        Self {
            x: p.dx,
            y: p.dy,
            c: p.offset,
            ..Self::default()
        }
    }
}

/// The plane through `(v_j, z_j)` for the three vertices of `tri`.
pub fn bern2d_coeffs_deg1(tri: &Triangle, z: [f64; 3]) -> Plane {
    let forms = tri.linear_forms();
    let det = tri.signed_det();
    let mut plane = Plane::default();
    for (zj, [a, b, c]) in z.iter().zip(forms) {
        plane.dx += zj * a;
        plane.dy += zj * b;
        plane.offset += zj * c;
    }
    plane.dx /= det;
    plane.dy /= det;
    plane.offset /= det;
    plane
}

/// Cartesian coefficients of the degree-2 Bernstein polynomial whose
/// corner nodes are `corner_z` and whose edge nodes are `mid_z`, ordered
/// `[mid(v1,v2), mid(v1,v3), mid(v2,v3)]`.
///
/// Expands `sum f_{ijk} 2!/(i!j!k!) tau_1^i tau_2^j tau_3^k` with each
/// `tau_j` written as a linear form over the squared determinant.
pub fn bern2d_coeffs_deg2(tri: &Triangle, corner_z: [f64; 3], mid_z: [f64; 3]) -> QuadCoeffs2D {
    let forms = tri.linear_forms();
    let det2 = tri.signed_det() * tri.signed_det();
    // (weight, form a, form b): z_j tau_j^2 and 2 f_mid tau_a tau_b
    let terms = [
        (corner_z[0], 0, 0),
        (corner_z[1], 1, 1),
        (corner_z[2], 2, 2),
        (2.0 * mid_z[0], 0, 1),
        (2.0 * mid_z[1], 0, 2),
        (2.0 * mid_z[2], 1, 2),
    ];
    let mut q = QuadCoeffs2D::default();
    for (w, r, s) in terms {
        let [ar, br, cr] = forms[r];
        let [as_, bs, cs] = forms[s];
        q.xx += w * ar * as_;
        q.yy += w * br * bs;
        q.xy += w * (ar * bs + as_ * br);
        q.x += w * (ar * cs + as_ * cr);
        q.y += w * (br * cs + bs * cr);
        q.c += w * cr * cs;
    }
    q.xx /= det2;
    q.yy /= det2;
    q.xy /= det2;
    q.x /= det2;
    q.y /= det2;
    q.c /= det2;
    q
}

/// Exact integral of the triangle Bernstein polynomial over `tri`.
pub fn bern2d_integral(tri: &Triangle, nodes: &BernNodes2D) -> f64 {
    let m = nodes.degree() as f64;
    2.0 * tri.area() / ((m + 1.0) * (m + 2.0)) * nodes.values.iter().sum::<f64>()
}

/// `\iint_T tau_1^a tau_2^b tau_3^c dA = 2 |T| a! b! c! / (a + b + c + 2)!`.
pub(crate) fn bary_monomial_integral(area: f64, a: usize, b: usize, c: usize) -> f64 {
    2.0 * area * factorial(a) * factorial(b) * factorial(c) / factorial(a + b + c + 2)
}

/// Highest total degree accepted by [`tri_monomial_integral`].
pub const MAX_MONOMIAL_DEGREE: usize = 4;

/// Exact `\iint_T x^i y^j dA` for `i + j <= 4`.
///
/// Substitutes `x = sum tau_k x_k`, `y = sum tau_k y_k`, expands both powers
/// multinomially and integrates each barycentric monomial in closed form.
pub fn tri_monomial_integral(tri: &Triangle, i: usize, j: usize) -> Result<f64> {
    if i + j > MAX_MONOMIAL_DEGREE {
        return Err(Error::UnsupportedDegree {
            degree: i + j,
            reason: "monomial integrals are tabulated up to total degree 4",
        });
    }
    let xs = tri.vertices.map(|v| v[0]);
    let ys = tri.vertices.map(|v| v[1]);
    let area = tri.area();
    let mut total = 0.0;
    for (xa, xb, xc, wx) in expansion(xs, i) {
        for (ya, yb, yc, wy) in expansion(ys, j) {
            total += wx * wy * bary_monomial_integral(area, xa + ya, xb + yb, xc + yc);
        }
    }
    Ok(total)
}

/// Terms of `(c_1 tau_1 + c_2 tau_2 + c_3 tau_3)^n` as `(a, b, c, weight)`.
fn expansion(coef: [f64; 3], n: usize) -> Vec<(usize, usize, usize, f64)> {
    let mut out = Vec::new();
    for a in 0..=n {
        for b in 0..=(n - a) {
            let c = n - a - b;
            let w = multinomial(a, b, c) as f64
                * coef[0].powi(a as i32)
                * coef[1].powi(b as i32)
                * coef[2].powi(c as i32);
            out.push((a, b, c, w));
        }
    }
    out
}
