//! Bernstein fractal interpolation functions.
//!
//! Univariate FIFs on an interval and bivariate FIFs on a 3-coloured
//! triangle partition, with Bernstein polynomials as the base correction
//! in the vertical maps. Both come with hyperbolicity certificates,
//! fixed-point evaluation, chaos-game attractors and the closed-form
//! fractal quadrature. `oracle` supplies the independent reference
//! integrals everything is compared against.

#![allow(clippy::neg_cmp_op_on_partial_ord)] // `!(a < b)` also rejects NaN

pub mod bernstein;
pub mod error;
pub mod fif1d;
pub mod fif2d;
pub mod io;
pub mod oracle;
pub mod presets;
pub mod quad1d;
pub mod quad2d;
pub mod trimesh;

pub use bernstein::{
    bern1d_coeffs_deg1, bern1d_coeffs_deg2, bern1d_eval, bern1d_integral, bern2d_coeffs_deg1,
    bern2d_coeffs_deg2, bern2d_eval, bern2d_integral, tri_monomial_integral, BaryCoord,
    BernNodes1D, BernNodes2D, Interval, Plane, Point2, QuadCoeffs2D, Triangle,
};
pub use error::{Error, Result};
pub use fif1d::{
    build_ifs_1d, certify_1d, chaos_game_1d, check_hyperbolic_1d, eval_fif_1d, AttractorCloud,
    DataSet1D, FifSystem1D, HyperbolicityReport, UniMap,
};
pub use fif2d::{
    build_ifs_2d, certify_2d, chaos_game_2d, check_hyperbolic_2d, eval_fif_2d, BivMap, FifSystem2D,
};
pub use oracle::{adaptive_quad_1d, exact_poly_integral, triangle_quad, Poly2, WeierstrassSpec};
pub use quad1d::{integrate_fif_1d, QuadReport};
pub use quad2d::integrate_fif_2d;
pub use trimesh::{jacobian, partition, solve_map, AffineMap2D, TriPartition};
