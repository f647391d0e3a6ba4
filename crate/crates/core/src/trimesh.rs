//! 3-coloured strip partitions of a triangle and the colour-consistent
//! affine maps onto their pieces.
//!
//! The lattice has `d` rows. Row `j` sits at parameter `t = j/d` between the
//! base `v1 v2` and the apex `v3` and holds `d + 1` equally spaced points
//! between the two slanted edges; the apex closes the set, giving
//! `d(d+1) + 1` vertices. The `d - 1` strips between consecutive rows are
//! split into `2d` triangles each, and a three-triangle cap joins the top
//! row to the apex, for `2d^2 - 2d + 3` pieces in total.
//!
//! Colours are `c(j, k) = P_k + R_j (mod 3)` where `P` and `R` are running
//! sums of `+-1` steps along the base row and up the left edge. A quad
//! whose two steps are opposite is cut along `(j,k+1)-(j+1,k)`, otherwise
//! along `(j,k)-(j+1,k+1)`; both cuts keep every triangle three-coloured.
//! The steps are chosen so that the domain corners get colours 1, 2, 3 and
//! the cap closes. No such choice exists for `d = 2`.
//!
//! For `d >= 4` the top-row points strictly between columns 1 and `d-1`
//! are hanging nodes on the long cap edge.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::bernstein::{BaryCoord, Point2, Triangle};
use crate::error::{Error, Result};

/// Linear part `[[a11, a12], [a21, a22]]` plus offset `(b1, b2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AffineMap2D {
    pub a11: f64,
    pub a12: f64,
    pub a21: f64,
    pub a22: f64,
    pub b1: f64,
    pub b2: f64,
}

impl AffineMap2D {
    pub const IDENTITY: AffineMap2D = AffineMap2D {
        a11: 1.0,
        a12: 0.0,
        a21: 0.0,
        a22: 1.0,
        b1: 0.0,
        b2: 0.0,
    };

    pub fn apply(&self, v: Point2) -> Point2 {
        [
            self.a11 * v[0] + self.a12 * v[1] + self.b1,
            self.a21 * v[0] + self.a22 * v[1] + self.b2,
        ]
    }

    pub fn det(&self) -> f64 {
        self.a11 * self.a22 - self.a12 * self.a21
    }

    pub fn apply_inverse(&self, v: Point2) -> Point2 {
        let (x, y) = (v[0] - self.b1, v[1] - self.b2);
        let det = self.det();
        [
            (self.a22 * x - self.a12 * y) / det,
            (self.a11 * y - self.a21 * x) / det,
        ]
    }

    /// Column sums `(|a11| + |a21|, |a12| + |a22|)`.
    pub fn column_sums(&self) -> (f64, f64) {
        (
            self.a11.abs() + self.a21.abs(),
            self.a12.abs() + self.a22.abs(),
        )
    }
}

/// Area ratio `|det L|`.
pub fn jacobian(map: &AffineMap2D) -> f64 {
    map.det().abs()
}

fn colour_slots(colours: [u8; 3]) -> [usize; 3] {
    let mut slot = [usize::MAX; 3];
    for (i, &c) in colours.iter().enumerate() {
        assert!((1..=3).contains(&c), "colours must be 1, 2 or 3");
        slot[(c - 1) as usize] = i;
    }
    assert!(
        slot.iter().all(|&s| s != usize::MAX),
        "colour triple must be a permutation"
    );
    slot
}

/// Affine map sending the domain corner of each colour to the sub-triangle
/// vertex of the same colour.
pub fn solve_map(
    domain: &Triangle,
    domain_colours: [u8; 3],
    sub: &Triangle,
    sub_colours: [u8; 3],
) -> Result<AffineMap2D> {
    let (ds, ss) = (colour_slots(domain_colours), colour_slots(sub_colours));
    let c = ds.map(|i| domain.vertex(i));
    let q = ss.map(|i| sub.vertex(i));
    // A [c2 - c1 | c3 - c1] = [q2 - q1 | q3 - q1]
    let (e1, e2) = (
        [c[1][0] - c[0][0], c[1][1] - c[0][1]],
        [c[2][0] - c[0][0], c[2][1] - c[0][1]],
    );
    let (f1, f2) = (
        [q[1][0] - q[0][0], q[1][1] - q[0][1]],
        [q[2][0] - q[0][0], q[2][1] - q[0][1]],
    );
    let det = e1[0] * e2[1] - e2[0] * e1[1];
    if det.abs() <= 1e-12 {
        return Err(Error::DegenerateTriangle { det });
    }
    // inverse of [e1 | e2]
    let inv = [[e2[1] / det, -e2[0] / det], [-e1[1] / det, e1[0] / det]];
    let a11 = f1[0] * inv[0][0] + f2[0] * inv[1][0];
    let a12 = f1[0] * inv[0][1] + f2[0] * inv[1][1];
    let a21 = f1[1] * inv[0][0] + f2[1] * inv[1][0];
    let a22 = f1[1] * inv[0][1] + f2[1] * inv[1][1];
    let map = AffineMap2D {
        a11,
        a12,
        a21,
        a22,
        b1: q[0][0] - a11 * c[0][0] - a12 * c[0][1],
        b2: q[0][1] - a21 * c[0][0] - a22 * c[0][1],
    };
    if map.det().abs() <= 1e-15 {
        return Err(Error::DegenerateTriangle { det: map.det() });
    }
    Ok(map)
}

/// Domain corner colours: `v1 -> 1`, `v2 -> 2`, `v3 -> 3`.
pub const DOMAIN_COLOURS: [u8; 3] = [1, 2, 3];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TriPartition {
    pub domain: Triangle,
    pub d: usize,
    pub vertices: Vec<Point2>,
    pub z: Option<Vec<f64>>,
    pub triangles: Vec<[usize; 3]>,
    pub colours: Vec<u8>,
}

pub fn triangle_count(d: usize) -> usize {
    2 * d * d - 2 * d + 3
}

pub fn vertex_count(d: usize) -> usize {
    d * (d + 1) + 1
}

/// Row and strip steps for subdivision `d` (see module docs).
fn steps(d: usize) -> (Vec<i32>, Vec<i32>) {
    let mut s = vec![1; d];
    match d % 3 {
        0 => s[1] = -1,
        2 => {
            s[1] = -1;
            s[2] = -1;
        }
        _ => {}
    }
    let ups = (2 * (d - 1)) % 3;
    let o = (0..d - 1).map(|j| if j < ups { 1 } else { -1 }).collect();
    (s, o)
}

/// Builds the lattice, triangles and colouring; samples are left unset.
pub fn partition(domain: &Triangle, d: usize) -> Result<TriPartition> {
    if d < 2 {
        return Err(Error::InvalidSubdivision {
            d,
            reason: "need d >= 2",
        });
    }
    if d == 2 {
        return Err(Error::InvalidSubdivision {
            d,
            reason: "no 3-colourable strip partition with corner colours 1, 2, 3 exists for d = 2",
        });
    }
    let [c1, c2, c3] = *domain.vertices();
    let lerp = |a: Point2, b: Point2, t: f64| [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])];
    let df = d as f64;
    let mut vertices = Vec::with_capacity(vertex_count(d));
    for j in 0..d {
        let t = j as f64 / df;
        let (left, right) = (lerp(c1, c3, t), lerp(c2, c3, t));
        for k in 0..=d {
            vertices.push(lerp(left, right, k as f64 / df));
        }
    }
    vertices.push(c3);
    let apex = d * (d + 1);
    let idx = |j: usize, k: usize| j * (d + 1) + k;

    let (s, o) = steps(d);
    let mut prefix = vec![0i32; d + 1];
    for k in 0..d {
        prefix[k + 1] = prefix[k] + s[k];
    }
    let mut rows = vec![0i32; d];
    for j in 0..d - 1 {
        rows[j + 1] = rows[j] + o[j];
    }
    let mut colours = vec![0u8; vertices.len()];
    for j in 0..d {
        for k in 0..=d {
            colours[idx(j, k)] = ((prefix[k] + rows[j]).rem_euclid(3) + 1) as u8;
        }
    }
    colours[apex] = 3;

    let mut triangles = Vec::with_capacity(triangle_count(d));
    for j in 0..d - 1 {
        for k in 0..d {
            let (a, b, c, e) = (idx(j, k), idx(j, k + 1), idx(j + 1, k), idx(j + 1, k + 1));
            if s[k] == -o[j] {
                triangles.push([a, b, c]);
                triangles.push([b, e, c]);
            } else {
                triangles.push([a, b, e]);
                triangles.push([a, e, c]);
            }
        }
    }
    let top = d - 1;
    triangles.push([idx(top, 0), idx(top, 1), apex]);
    triangles.push([idx(top, d - 1), idx(top, d), apex]);
    triangles.push([idx(top, 1), idx(top, d - 1), apex]);

    let part = TriPartition {
        domain: *domain,
        d,
        vertices,
        z: None,
        triangles,
        colours,
    };
    debug_assert!(part.is_properly_coloured());
    Ok(part)
}

impl TriPartition {
    pub fn len(&self) -> usize {
        self.triangles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triangles.is_empty()
    }

    /// Sets `z_i = f(vertex_i)`.
    pub fn with_field(mut self, f: impl Fn(Point2) -> f64) -> Self {
        self.z = Some(self.vertices.iter().map(|&v| f(v)).collect());
        self
    }

    pub fn with_values(mut self, z: Vec<f64>) -> Result<Self> {
        if z.len() != self.vertices.len() {
            return Err(Error::ShapeMismatch {
                expected: self.vertices.len(),
                actual: z.len(),
            });
        }
        self.z = Some(z);
        Ok(self)
    }

    pub fn samples(&self) -> Result<&[f64]> {
        self.z.as_deref().ok_or(Error::MissingSamples)
    }

    pub fn sub_triangle(&self, n: usize) -> Triangle {
        let [a, b, c] = self.triangles[n];
        Triangle::new(self.vertices[a], self.vertices[b], self.vertices[c])
            .expect("lattice triangles are non-degenerate")
    }

    pub fn sub_colours(&self, n: usize) -> [u8; 3] {
        self.triangles[n].map(|i| self.colours[i])
    }

    /// Vertex indices of triangle `n` ordered by colour 1, 2, 3.
    pub fn by_colour(&self, n: usize) -> [usize; 3] {
        let tri = self.triangles[n];
        colour_slots(self.sub_colours(n)).map(|i| tri[i])
    }

    pub fn affine_map(&self, n: usize) -> Result<AffineMap2D> {
        solve_map(
            &self.domain,
            DOMAIN_COLOURS,
            &self.sub_triangle(n),
            self.sub_colours(n),
        )
    }

    pub fn affine_maps(&self) -> Result<Vec<AffineMap2D>> {
        (0..self.len()).map(|n| self.affine_map(n)).collect()
    }

    pub fn is_properly_coloured(&self) -> bool {
        let corners = [0, self.d, self.d * (self.d + 1)];
        corners.map(|i| self.colours[i]) == DOMAIN_COLOURS
            && (0..self.len()).all(|n| {
                let [a, b, c] = self.sub_colours(n);
                a != b && b != c && a != c
            })
    }

    /// Edges shared by exactly two triangles, with the triangle indices.
    pub fn shared_edges(&self) -> Vec<([usize; 2], usize, usize)> {
        let mut owners: BTreeMap<[usize; 2], Vec<usize>> = BTreeMap::new();
        for (n, t) in self.triangles.iter().enumerate() {
            for (a, b) in [(t[0], t[1]), (t[1], t[2]), (t[2], t[0])] {
                owners.entry([a.min(b), a.max(b)]).or_default().push(n);
            }
        }
        owners
            .into_iter()
            .filter(|(_, v)| v.len() == 2)
            .map(|(e, v)| (e, v[0], v[1]))
            .collect()
    }

    fn candidate_strips(&self, v: Point2) -> std::ops::RangeInclusive<usize> {
        let t3 = self.domain.barycentric(v).0[2];
        let j = (t3 * self.d as f64).floor().clamp(0.0, (self.d - 1) as f64) as usize;
        j.saturating_sub(1)..=(j + 1).min(self.d - 1)
    }

    /// Lowest-index triangle containing `v` and its barycentric weights.
    pub fn locate(&self, v: Point2) -> Result<(usize, BaryCoord)> {
        if !self.domain.contains(v) {
            return Err(Error::out_of_domain(&v));
        }
        let per_strip = 2 * self.d;
        let cap = per_strip * (self.d - 1);
        for strip in self.candidate_strips(v) {
            let range = if strip == self.d - 1 {
                cap..self.len()
            } else {
                strip * per_strip..(strip + 1) * per_strip
            };
            for n in range {
                let b = self.sub_triangle(n).barycentric(v);
                if b.is_inside() {
                    return Ok((n, b));
                }
            }
        }
        // rounding near strip boundaries: fall back to the closest piece
        let mut best = (0, f64::NEG_INFINITY, BaryCoord([0.0; 3]));
        for n in 0..self.len() {
            let b = self.sub_triangle(n).barycentric(v);
            if b.is_inside() {
                return Ok((n, b));
            }
            let worst = b.0.iter().copied().fold(f64::INFINITY, f64::min);
            if worst > best.1 {
                best = (n, worst, b);
            }
        }
        Ok((best.0, best.2))
    }

    /// Piecewise-linear interpolant `h` of the samples.
    pub fn interpolate(&self, v: Point2) -> Result<f64> {
        let z = self.samples()?;
        let (n, b) = self.locate(v)?;
        let t = self.triangles[n];
        Ok(b.0[0] * z[t[0]] + b.0[1] * z[t[1]] + b.0[2] * z[t[2]])
    }

    /// Samples at the three corners of triangle `n`.
    pub fn corner_samples(&self, n: usize) -> Result<[f64; 3]> {
        let z = self.samples()?;
        Ok(self.triangles[n].map(|i| z[i]))
    }

    /// Exact integral of `h` (area times mean corner value, summed).
    pub fn linear_integral(&self) -> Result<f64> {
        let mut sum = 0.0;
        for n in 0..self.len() {
            let z = self.corner_samples(n)?;
            sum += self.sub_triangle(n).area() * (z[0] + z[1] + z[2]) / 3.0;
        }
        Ok(sum)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ex81() -> Triangle {
        Triangle::new([0.0, 0.0], [1.0, 0.0], [0.5, 1.0]).unwrap()
    }

    #[test]
    fn counts() {
        for d in 3..=12 {
            let p = partition(&ex81(), d).unwrap();
            assert_eq!(p.vertices.len(), d * (d + 1) + 1);
            assert_eq!(p.len(), 2 * d * d - 2 * d + 3);
            assert!(p.is_properly_coloured(), "d={d}");
        }
        assert_eq!(partition(&ex81(), 4).unwrap().len(), 27);
        assert_eq!(partition(&ex81(), 10).unwrap().len(), 183);
        assert!(matches!(
            partition(&ex81(), 2),
            Err(Error::InvalidSubdivision { d: 2, .. })
        ));
        assert!(matches!(
            partition(&ex81(), 1),
            Err(Error::InvalidSubdivision { .. })
        ));
    }

    #[test]
    fn lattice_points() {
        let p = partition(&ex81(), 4).unwrap();
        for q in [[0.125, 0.25], [0.3125, 0.25], [0.25, 0.5], [0.375, 0.75]] {
            assert!(p
                .vertices
                .iter()
                .any(|v| (v[0] - q[0]).abs() < 1e-15 && (v[1] - q[1]).abs() < 1e-15));
        }
    }

    #[test]
    fn first_and_last_maps() {
        let p = partition(&ex81(), 4).unwrap();
        let first = p.affine_map(0).unwrap();
        assert!((first.a11 - 0.25).abs() < 1e-15 && (first.a22 - 0.25).abs() < 1e-15);
        assert!(first.a12.abs() < 1e-15 && first.a21.abs() < 1e-15);
        assert!(first.b1.abs() < 1e-15 && first.b2.abs() < 1e-15);
        let last = p.affine_map(p.len() - 1).unwrap();
        assert!((last.a11 + 0.125).abs() < 1e-15 && last.a12.abs() < 1e-15);
        assert!(last.a21.abs() < 1e-15 && (last.a22 - 0.25).abs() < 1e-15);
        assert!((last.b1 - 0.5625).abs() < 1e-15 && (last.b2 - 0.75).abs() < 1e-15);
    }

    #[test]
    fn identity_map() {
        let t = ex81();
        let m = solve_map(&t, DOMAIN_COLOURS, &t, DOMAIN_COLOURS).unwrap();
        for (a, b) in [
            (m.a11, 1.0),
            (m.a12, 0.0),
            (m.a21, 0.0),
            (m.a22, 1.0),
            (m.b1, 0.0),
            (m.b2, 0.0),
        ] {
            assert!((a - b).abs() < 1e-15);
        }
        assert_eq!(jacobian(&m), 1.0);
    }

    #[test]
    fn maps_match_colours_and_tile() {
        let dom = Triangle::new([-10.0, -10.0], [10.0, -10.0], [0.0, 10.0]).unwrap();
        for d in [3, 4, 5, 7] {
            let p = partition(&dom, d).unwrap();
            let mut total = 0.0;
            for n in 0..p.len() {
                let map = p.affine_map(n).unwrap();
                let ids = p.by_colour(n);
                for c in 0..3 {
                    let img = map.apply(dom.vertex(c));
                    let want = p.vertices[ids[c]];
                    assert!((img[0] - want[0]).abs() < 1e-12 && (img[1] - want[1]).abs() < 1e-12);
                }
                let j = jacobian(&map);
                assert!(j > 0.0 && j < 1.0);
                assert!((j - p.sub_triangle(n).area() / dom.area()).abs() < 1e-12);
                total += j;
            }
            assert!((total - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn locate_centroids_and_ties() {
        let p = partition(&ex81(), 5).unwrap();
        for n in 0..p.len() {
            let c = p.sub_triangle(n).centroid();
            let (k, b) = p.locate(c).unwrap();
            assert_eq!(k, n);
            assert!(b.0.iter().all(|w| (w - 1.0 / 3.0).abs() < 1e-12));
        }
        // a vertex shared by several pieces resolves to the lowest index
        let (k, b) = p.locate(p.vertices[1]).unwrap();
        assert_eq!(k, 0);
        assert!((b.0.iter().cloned().fold(0.0, f64::max) - 1.0).abs() < 1e-12);
        assert!(matches!(
            p.locate([2.0, 2.0]),
            Err(Error::OutOfDomain { .. })
        ));
    }

    #[test]
    fn samples_attach() {
        let p = partition(&ex81(), 3).unwrap();
        assert!(matches!(p.samples(), Err(Error::MissingSamples)));
        let q = p.clone().with_field(|_| 7.0);
        assert!(q.samples().unwrap().iter().all(|&z| z == 7.0));
        assert!(matches!(
            p.with_values(vec![1.0; 3]),
            Err(Error::ShapeMismatch {
                expected: 13,
                actual: 3
            })
        ));
    }

    #[test]
    fn d3_is_conforming() {
        let p = partition(&ex81(), 3).unwrap();
        // every interior edge shared: 3 boundary edges per side, each side d + cap pieces
        let edges = p.shared_edges();
        let boundary = 3 * 3;
        let total_edges = (3 * p.len() + boundary) / 2;
        assert_eq!(edges.len(), total_edges - boundary);
    }
}
