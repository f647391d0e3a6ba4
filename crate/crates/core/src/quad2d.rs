//! Closed-form fractal double quadrature over the partitioned triangle.
//!
//! ```text
//! M = [sum delta_n int_D h(L_n) - sum delta_n alpha_n int_D B_m(h)] / (1 - sum delta_n alpha_n)
//! ```
//!
//! with `delta_n = |det L_n|`, the area ratio of piece `n`.

use crate::bernstein::{bern2d_integral, tri_monomial_integral, Triangle};
use crate::error::Result;
use crate::fif2d::FifSystem2D;
use crate::quad1d::{checked_denominator, QuadReport};

fn denominator_2d(sys: &FifSystem2D) -> Result<f64> {
    checked_denominator(1.0 - sys.maps.iter().map(|w| w.delta() * w.alpha).sum::<f64>())
}

/// General path: `int_D B_m` from the Bernstein nodes.
pub fn integrate_fif_2d(sys: &FifSystem2D) -> Result<QuadReport> {
    let den = denominator_2d(sys)?;
    let dom = &sys.partition.domain;
    let (area, centroid) = (dom.area(), dom.centroid());
    let int_b = bern2d_integral(dom, &sys.nodes);
    let num: f64 = sys
        .maps
        .iter()
        .map(|w| w.delta() * (area * w.plane.eval(centroid) - w.alpha * int_b))
        .sum();
    Ok(QuadReport::new(num / den, den, sys.degree, sys.maps.len()))
}

fn moments(dom: &Triangle) -> Result<[f64; 6]> {
    Ok([
        tri_monomial_integral(dom, 2, 0)?,
        tri_monomial_integral(dom, 0, 2)?,
        tri_monomial_integral(dom, 1, 1)?,
        tri_monomial_integral(dom, 1, 0)?,
        tri_monomial_integral(dom, 0, 1)?,
        tri_monomial_integral(dom, 0, 0)?,
    ])
}

/// Cartesian path: integrates `(f_n - alpha P) x + (k_n - alpha T) y + ...`
/// and the quadratic correction term by term with exact moments.
pub fn integrate_fif_2d_expanded(sys: &FifSystem2D) -> Result<QuadReport> {
    let den = denominator_2d(sys)?;
    let [ixx, iyy, ixy, ix, iy, i1] = moments(&sys.partition.domain)?;
    let mut num = 0.0;
    for w in &sys.maps {
        let (p, c) = (w.plane, w.correction);
        let linear = (p.dx - c.x) * ix + (p.dy - c.y) * iy + (p.offset - c.c) * i1;
        let quadratic = c.xx * ixx + c.yy * iyy + c.xy * ixy;
        num += w.delta() * (linear - quadratic);
    }
    Ok(QuadReport::new(num / den, den, sys.degree, sys.maps.len()))
}
