//! Comparison tables for the worked examples.

use anyhow::{bail, Context, Result};
use rayon::prelude::*;
use serde::Serialize;

use fractal_bern::fif2d::DEFAULT_ALPHA_2D;
use fractal_bern::io::fmt_f64;
use fractal_bern::presets::{
    curve_example, surface_example, CurveExample, SurfaceExample, DEFAULT_ALPHA_1D, DEFAULT_TERMS,
};
use fractal_bern::quad1d::{alpha_sweep, uniform_alpha_for_target};
use fractal_bern::{
    build_ifs_1d, build_ifs_2d, integrate_fif_1d, integrate_fif_2d, partition, DataSet1D,
};

use crate::config::{Alpha, Format, RunConfig};
use crate::run::{curve_oracle, emit, surface_oracle, to_json, DEFAULT_TOL_1D, DEFAULT_TOL_2D};

const SWEEP_STEP: f64 = 1e-4;
const SWEEP_MAX: f64 = 0.1;
const EXTRA_D: usize = 49;

#[derive(Debug, Clone, Serialize)]
pub struct Row {
    /// Subintervals for curves, subdivision parameter for surfaces.
    pub size: usize,
    pub oracle: f64,
    pub m1: f64,
    pub err1: f64,
    pub m2: f64,
    pub err2: f64,
    pub published_m1: Option<f64>,
    pub published_m2: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Sweep {
    /// Grid point closest to the stated integral.
    pub best_alpha: f64,
    pub best_value: f64,
    /// Exact solve of `M(alpha) = stated`, when it lies in `(-1, 1)`.
    pub solved_alpha: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Table {
    pub target: String,
    pub kind: &'static str,
    pub alpha: String,
    pub terms: Option<usize>,
    pub tolerance: f64,
    pub stated_integral: f64,
    pub rows: Vec<Row>,
    pub sweep: Option<Sweep>,
}

fn uniform_alpha(cfg: &RunConfig, default: f64) -> Result<f64> {
    match cfg.alpha.clone().unwrap_or(Alpha::Scalar(default)) {
        Alpha::Scalar(a) => Ok(a),
        Alpha::List(_) => bail!("reproduce: tables use one uniform alpha"),
    }
}

fn curve_table(cfg: &RunConfig, ex: &CurveExample, terms: usize) -> Result<Table> {
    let alpha = uniform_alpha(cfg, DEFAULT_ALPHA_1D)?;
    let tol = cfg.tolerance.unwrap_or(DEFAULT_TOL_1D);
    let oracle = curve_oracle(ex, tol)?;
    let sizes: Vec<usize> = match cfg.pieces {
        Some(n) => vec![n],
        None => ex.pieces.to_vec(),
    };
    let rows = sizes
        .par_iter()
        .map(|&n| {
            let data = DataSet1D::from_fn(&ex.interval, n, |t| ex.spec.eval(t))?;
            let alphas = vec![alpha; n];
            let m1 = integrate_fif_1d(&build_ifs_1d(&data, &alphas, 1)?)?.fractal_value;
            let m2 = integrate_fif_1d(&build_ifs_1d(&data, &alphas, 2)?)?.fractal_value;
            Ok(Row {
                size: n,
                oracle,
                m1,
                err1: (m1 - oracle).abs(),
                m2,
                err2: (m2 - oracle).abs(),
                published_m1: None,
                published_m2: None,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let sweep = if cfg.sweep.unwrap_or(false) {
        let data = DataSet1D::from_fn(&ex.interval, sizes[0], |t| ex.spec.eval(t))?;
        let steps = (SWEEP_MAX / SWEEP_STEP).round() as usize;
        let grid: Vec<f64> = (0..=steps).map(|k| k as f64 * SWEEP_STEP).collect();
        let (best_alpha, best_value) = alpha_sweep(&data, 1, &grid)?
            .into_iter()
            .min_by(|a, b| {
                (a.1 - ex.stated_integral)
                    .abs()
                    .total_cmp(&(b.1 - ex.stated_integral).abs())
            })
            .context("empty sweep")?;
        let solved_alpha = uniform_alpha_for_target(&data, 1, ex.stated_integral)?;
        Some(Sweep {
            best_alpha,
            best_value,
            solved_alpha,
        })
    } else {
        None
    };
    Ok(Table {
        target: ex.id.to_string(),
        kind: "curve",
        alpha: alpha.to_string(),
        terms: Some(terms),
        tolerance: tol,
        stated_integral: ex.stated_integral,
        rows,
        sweep,
    })
}

fn surface_table(cfg: &RunConfig, ex: &SurfaceExample) -> Result<Table> {
    if cfg.sweep.unwrap_or(false) {
        bail!("reproduce: --sweep applies to the curve examples");
    }
    let alpha = uniform_alpha(cfg, DEFAULT_ALPHA_2D)?;
    let tol = cfg.tolerance.unwrap_or(DEFAULT_TOL_2D);
    let oracle = surface_oracle(ex, tol)?;
    let mut sizes: Vec<usize> = match cfg.d {
        Some(d) => vec![d],
        None => ex.subdivisions.to_vec(),
    };
    if cfg.with_d49.unwrap_or(false) && !sizes.contains(&EXTRA_D) {
        sizes.push(EXTRA_D);
    }
    let rows = sizes
        .par_iter()
        .map(|&d| {
            let part = partition(&ex.domain, d)?.with_field(|v| ex.field.eval(v));
            let m1 = integrate_fif_2d(&build_ifs_2d(&part, &[alpha], 1)?)?.fractal_value;
            let m2 = integrate_fif_2d(&build_ifs_2d(&part, &[alpha], 2)?)?.fractal_value;
            let published = ex.published.iter().find(|r| r.0 == d);
            Ok(Row {
                size: d,
                oracle,
                m1,
                err1: (m1 - oracle).abs(),
                m2,
                err2: (m2 - oracle).abs(),
                published_m1: published.map(|r| r.1),
                published_m2: published.map(|r| r.2),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Table {
        target: ex.table.to_string(),
        kind: "surface",
        alpha: alpha.to_string(),
        terms: None,
        tolerance: tol,
        stated_integral: ex.stated_integral,
        rows,
        sweep: None,
    })
}

pub fn build_table(cfg: &RunConfig, target: &str) -> Result<Table> {
    let terms = cfg.terms.unwrap_or(DEFAULT_TERMS);
    if let Some(ex) = curve_example(target, terms) {
        return curve_table(cfg, &ex, terms);
    }
    if let Some(ex) = surface_example(target) {
        return surface_table(cfg, &ex);
    }
    bail!("unknown reproduction target {target:?} (ex5.1 .. ex5.3, table1 .. table4)")
}

fn provenance(t: &Table) -> Vec<(&'static str, String)> {
    let mut kv = vec![
        ("target", t.target.clone()),
        ("alpha", t.alpha.clone()),
        ("oracle_tolerance", t.tolerance.to_string()),
        ("stated_integral", t.stated_integral.to_string()),
    ];
    if let Some(k) = t.terms {
        kv.push(("terms", k.to_string()));
    }
    if let Some(s) = &t.sweep {
        kv.push(("sweep_best_alpha", fmt_f64(s.best_alpha)));
        kv.push(("sweep_best_value", fmt_f64(s.best_value)));
        kv.push((
            "solved_alpha",
            s.solved_alpha.map(fmt_f64).unwrap_or_else(|| "none".into()),
        ));
    }
    kv
}

fn size_name(t: &Table) -> &'static str {
    if t.kind == "curve" {
        "pieces"
    } else {
        "d"
    }
}

pub fn table_csv(t: &Table) -> String {
    let mut out = String::new();
    for (k, v) in provenance(t) {
        out.push_str(&format!("# {k}={v}\n"));
    }
    out.push_str(size_name(t));
    out.push_str(",oracle,m_deg1,error_deg1,m_deg2,error_deg2,published_deg1,published_deg2\n");
    let opt = |v: Option<f64>| v.map(fmt_f64).unwrap_or_default();
    for r in &t.rows {
        let cells = [
            r.size.to_string(),
            fmt_f64(r.oracle),
            fmt_f64(r.m1),
            fmt_f64(r.err1),
            fmt_f64(r.m2),
            fmt_f64(r.err2),
            opt(r.published_m1),
            opt(r.published_m2),
        ];
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

/// Rounded, aligned rendering for the terminal.
pub fn table_text(t: &Table) -> String {
    let mut out = String::new();
    for (k, v) in provenance(t) {
        out.push_str(&format!("{k}: {v}\n"));
    }
    let opt = |v: Option<f64>| v.map(|x| format!("{x:.6e}")).unwrap_or_else(|| "-".into());
    out.push_str(&format!(
        "{:>6} {:>13} {:>13} {:>11} {:>13} {:>11} {:>13} {:>13}\n",
        size_name(t),
        "oracle",
        "M (m=1)",
        "err",
        "M (m=2)",
        "err",
        "pub (m=1)",
        "pub (m=2)"
    ));
    for r in &t.rows {
        out.push_str(&format!(
            "{:>6} {:>13.6e} {:>13.6e} {:>11.3e} {:>13.6e} {:>11.3e} {:>13} {:>13}\n",
            r.size,
            r.oracle,
            r.m1,
            r.err1,
            r.m2,
            r.err2,
            opt(r.published_m1),
            opt(r.published_m2)
        ));
    }
    out
}

pub fn reproduce(cfg: &RunConfig, target: Option<&str>) -> Result<()> {
    let target = target
        .or(cfg.example.as_deref())
        .context("reproduce: name a target (ex5.1 .. ex5.3, table1 .. table4)")?;
    let table = build_table(cfg, target)?;
    let bytes = match cfg.format() {
        Format::Csv => table_csv(&table).into_bytes(),
        Format::Json => to_json(&table)?,
        Format::Svg => bail!("reproduce: SVG output is not available"),
    };
    emit(cfg, &bytes)?;
    if cfg.output.is_some() {
        print!("{}", table_text(&table));
    }
    Ok(())
}
