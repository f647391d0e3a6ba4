//! Worked examples: Weierstrass-type curves on `[-1, 1]` and four test
//! surfaces on triangles, with their published reference integrals.

use std::f64::consts::PI;

use serde::Serialize;

use crate::bernstein::{Interval, Point2, Triangle};
use crate::oracle::{Poly2, WeierstrassSpec};

/// Series truncation used unless overridden.
pub const DEFAULT_TERMS: usize = 20;
/// Uniform vertical scaling used for the curve examples unless overridden.
pub const DEFAULT_ALPHA_1D: f64 = 0.01;

#[derive(Debug, Clone, Serialize)]
pub struct CurveExample {
    pub id: &'static str,
    pub spec: WeierstrassSpec,
    pub interval: Interval,
    /// Integral value stated alongside the example.
    pub stated_integral: f64,
    /// Subinterval counts used in the comparison runs.
    pub pieces: &'static [usize],
}

pub fn curve_example(id: &str, terms: usize) -> Option<CurveExample> {
    let interval = Interval::new(-1.0, 1.0).expect("valid");
    let ex = match id {
        "ex5.1" => CurveExample {
            id: "ex5.1",
            spec: WeierstrassSpec::cosine_ten(terms),
            interval,
            stated_integral: 2.00407,
            pieces: &[5, 9, 17, 31],
        },
        "ex5.2" => CurveExample {
            id: "ex5.2",
            spec: WeierstrassSpec::sine(6.0, terms),
            interval,
            stated_integral: 3.4,
            pieces: &[5],
        },
        "ex5.3" => CurveExample {
            id: "ex5.3",
            spec: WeierstrassSpec::sine(8.0, terms),
            interval,
            stated_integral: 3.4,
            pieces: &[5],
        },
        _ => return None,
    };
    Some(ex)
}

pub const CURVE_IDS: [&str; 3] = ["ex5.1", "ex5.2", "ex5.3"];

/// Integral of the cosine example, summed term by term in closed form.
///
/// Odd parts vanish on `[-1, 1]`; `int t^2 cos(w t) = 4 cos(w) / w^2` and
/// `cos(10^k pi) = 1`.
pub fn cosine_ten_integral(terms: usize) -> f64 {
    (1..=terms as i32)
        .map(|k| {
            let w = 10f64.powi(k) * PI;
            2.0 * 4.0 / (w * w) / 2f64.powi(k)
        })
        .sum::<f64>()
        + 2.0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Field {
    /// `y exp(2.5 x + 0.6 y)`.
    ExpRamp,
    /// `(cos(pi x / 4) + sin(pi y / 4)) / cbrt(x^3 + y^3)`.
    TrigRatio,
    Matyas,
    Himmelblau,
}

impl Field {
    pub fn eval(self, v: Point2) -> f64 {
        let [x, y] = v;
        match self {
            Field::ExpRamp => y * (2.5 * x + 0.6 * y).exp(),
            Field::TrigRatio => {
                ((PI * x / 4.0).cos() + (PI * y / 4.0).sin()) / (x.powi(3) + y.powi(3)).cbrt()
            }
            Field::Matyas => Poly2::matyas().eval(v),
            Field::Himmelblau => Poly2::himmelblau().eval(v),
        }
    }

    pub fn polynomial(self) -> Option<Poly2> {
        match self {
            Field::Matyas => Some(Poly2::matyas()),
            Field::Himmelblau => Some(Poly2::himmelblau()),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SurfaceExample {
    pub id: &'static str,
    pub table: &'static str,
    pub field: Field,
    pub domain: Triangle,
    pub stated_integral: f64,
    /// Subdivision levels of the published comparison rows.
    pub subdivisions: &'static [usize],
    /// Published `(d, M with m = 1, M with m = 2)` rows.
    pub published: &'static [(usize, f64, f64)],
}

pub fn surface_example(id: &str) -> Option<SurfaceExample> {
    let tri = |a: Point2, b: Point2, c: Point2| Triangle::new(a, b, c).expect("valid");
    let ex = match id {
        "ex8.1" | "table1" => SurfaceExample {
            id: "ex8.1",
            table: "table1",
            field: Field::ExpRamp,
            domain: tri([0.0, 0.0], [1.0, 0.0], [0.5, 1.0]),
            stated_integral: 0.8502,
            subdivisions: &[4, 10],
            published: &[(4, 0.8465, 0.8370), (10, 0.8490, 0.7699)],
        },
        "ex8.2" | "table2" => SurfaceExample {
            id: "ex8.2",
            table: "table2",
            field: Field::TrigRatio,
            domain: tri([1.5, 1.5], [2.0, 1.5], [1.75, 2.0]),
            stated_integral: 0.0672,
            subdivisions: &[4, 10],
            published: &[(4, 0.0671, 0.3944), (10, 0.0672, 2.9716)],
        },
        "ex8.3" | "table3" => SurfaceExample {
            id: "ex8.3",
            table: "table3",
            field: Field::Matyas,
            domain: tri([-10.0, -10.0], [10.0, -10.0], [0.0, 10.0]),
            stated_integral: 2600.0,
            subdivisions: &[4, 10],
            published: &[
                (4, 3.0723e3, 3.4592e6),
                (10, 2.6777e3, 2.2021e7),
                (49, 2.6047e3, 5.5734e8),
            ],
        },
        "ex8.4" | "table4" => SurfaceExample {
            id: "ex8.4",
            table: "table4",
            field: Field::Himmelblau,
            domain: tri([-5.0, -5.0], [5.0, -5.0], [0.0, 5.0]),
            stated_integral: 7625.0,
            subdivisions: &[4, 10],
            published: &[(4, 9.8090e3, 9.6395e3), (10, 7.9803e3, 7.2675e3)],
        },
        _ => return None,
    };
    Some(ex)
}

pub const SURFACE_IDS: [&str; 4] = ["ex8.1", "ex8.2", "ex8.3", "ex8.4"];

/// The 21 lattice points printed for the first surface example (rounded).
pub const EX81_PRINTED_POINTS: [Point2; 21] = [
    [0.0, 0.0],
    [0.25, 0.0],
    [0.5, 0.0],
    [0.75, 0.0],
    [1.0, 0.0],
    [0.12, 0.25],
    [0.31, 0.25],
    [0.5, 0.25],
    [0.68, 0.25],
    [0.87, 0.25],
    [0.25, 0.5],
    [0.375, 0.5],
    [0.5, 0.5],
    [0.625, 0.5],
    [0.75, 0.5],
    [0.375, 0.75],
    [0.43, 0.75],
    [0.5, 0.75],
    [0.56, 0.75],
    [0.625, 0.75],
    [0.5, 1.0],
];

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lookups() {
        for id in CURVE_IDS {
            assert_eq!(curve_example(id, 5).unwrap().id, id);
        }
        for id in SURFACE_IDS {
            assert_eq!(surface_example(id).unwrap().id, id);
        }
        assert!(curve_example("ex9", 5).is_none());
        assert_eq!(surface_example("table3").unwrap().id, "ex8.3");
    }

    #[test]
    fn closed_form_cosine_integral() {
        assert!((cosine_ten_integral(20) - 2.00407).abs() < 5e-6);
        // first correction term 8 / (200 pi^2)
        assert!((cosine_ten_integral(1) - 2.0 - 8.0 / (200.0 * PI * PI)).abs() < 1e-15);
    }

    #[test]
    fn matyas_corners() {
        assert_eq!(Field::Matyas.eval([-10.0, -10.0]), 4.0);
        assert!((Field::Matyas.eval([10.0, -10.0]) - 100.0).abs() < 1e-12);
        assert_eq!(Field::Matyas.eval([0.0, 0.0]), 0.0);
    }
}
