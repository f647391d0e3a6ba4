//! The verbs other than `reproduce`.

use std::io::Write;
use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::Serialize;

use fractal_bern::fif1d::{certify_1d, eval_fif_1d_bounded, FifValue};
use fractal_bern::fif2d::{certify_2d, eval_fif_2d_bounded, DEFAULT_ALPHA_2D};
use fractal_bern::io::{
    fmt_f64, read_dataset_1d, read_mesh_geometry, read_samples_2d, svg_curve, svg_surface,
    write_cloud_csv, write_mesh_csv, MATCH_TOL,
};
use fractal_bern::oracle::{adaptive_quad_1d, exact_poly_integral, triangle_quad};
use fractal_bern::presets::{
    curve_example, surface_example, CurveExample, SurfaceExample, DEFAULT_ALPHA_1D, DEFAULT_TERMS,
};
use fractal_bern::quad2d::integrate_fif_2d;
use fractal_bern::{
    build_ifs_1d, build_ifs_2d, chaos_game_1d, chaos_game_2d, check_hyperbolic_1d,
    check_hyperbolic_2d, integrate_fif_1d, partition, AttractorCloud, DataSet1D, FifSystem1D,
    FifSystem2D, HyperbolicityReport, Point2, QuadReport, TriPartition, Triangle,
};

use crate::config::{Format, Mode, RunConfig};

pub const DEFAULT_N_POINTS: usize = 10_000;
pub const DEFAULT_BURN_IN: usize = 100;
/// Oracle tolerances: per-panel Simpson error, and agreement between
/// successive refinements of the triangle rule.
pub const DEFAULT_TOL_1D: f64 = 1e-8;
pub const DEFAULT_TOL_2D: f64 = 1e-9;

/// Writes `bytes` to the configured output file, or stdout.
pub fn emit(cfg: &RunConfig, bytes: &[u8]) -> Result<()> {
    match &cfg.output {
        Some(path) => {
            if let Some(dir) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
                std::fs::create_dir_all(dir)
                    .with_context(|| format!("creating {}", dir.display()))?;
            }
            std::fs::write(path, bytes).with_context(|| format!("writing {}", path.display()))
        }
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(bytes)?;
            out.flush()?;
            Ok(())
        }
    }
}

pub fn to_json(value: &impl Serialize) -> Result<Vec<u8>> {
    let mut s = serde_json::to_vec_pretty(value)?;
    s.push(b'\n');
    Ok(s)
}

fn csv_table(header: &[&str], rows: &[Vec<String>]) -> Vec<u8> {
    let mut out = header.join(",");
    out.push('\n');
    for r in rows {
        out.push_str(&r.join(","));
        out.push('\n');
    }
    out.into_bytes()
}

fn no_svg(verb: &str) -> Result<()> {
    bail!("{verb}: SVG output is only available for `attractor`")
}

/// Problem dimension for the data verbs.
pub fn dims(cfg: &RunConfig) -> Result<usize> {
    if let Some(mode) = cfg.mode {
        return mode
            .dims()
            .with_context(|| format!("mode {mode:?} does not select a 1D or 2D system"));
    }
    if let Some(id) = &cfg.example {
        if curve_example(id, 1).is_some() {
            return Ok(1);
        }
        if surface_example(id).is_some() {
            return Ok(2);
        }
        bail!("unknown example {id:?}");
    }
    if cfg.d.is_some() || cfg.domain.is_some() {
        return Ok(2);
    }
    if let Some(path) = &cfg.input {
        if read_mesh_geometry(path)?.is_some() {
            return Ok(2);
        }
    }
    Ok(1)
}

fn curve_preset(cfg: &RunConfig) -> Result<Option<CurveExample>> {
    cfg.example
        .as_deref()
        .map(|id| {
            curve_example(id, cfg.terms.unwrap_or(DEFAULT_TERMS))
                .with_context(|| format!("{id:?} is not a curve example (ex5.1, ex5.2, ex5.3)"))
        })
        .transpose()
}

fn surface_preset(cfg: &RunConfig) -> Result<Option<SurfaceExample>> {
    cfg.example
        .as_deref()
        .map(|id| {
            surface_example(id)
                .with_context(|| format!("{id:?} is not a surface example (ex8.1 .. ex8.4)"))
        })
        .transpose()
}

pub fn load_curve(cfg: &RunConfig) -> Result<(DataSet1D, Option<CurveExample>)> {
    let ex = curve_preset(cfg)?;
    let data = match (&cfg.input, &ex) {
        (Some(path), _) => read_dataset_1d(path)?,
        (None, Some(ex)) => {
            let pieces = cfg.pieces.unwrap_or(ex.pieces[0]);
            DataSet1D::from_fn(&ex.interval, pieces, |t| ex.spec.eval(t))?
        }
        (None, None) => bail!("1D data needed: give --input FILE or --example ex5.x"),
    };
    Ok((data, ex))
}

pub fn load_surface(cfg: &RunConfig) -> Result<(TriPartition, Option<SurfaceExample>)> {
    let ex = surface_preset(cfg)?;
    let from_mesh = match &cfg.input {
        Some(p) => read_mesh_geometry(p)?,
        None => None,
    };
    let domain = match (cfg.domain, &ex, &from_mesh) {
        (Some(c), _, _) => Triangle::from_array(c)?,
        (None, Some(ex), _) => ex.domain,
        (None, None, Some((tri, _))) => *tri,
        _ => bail!("2D domain needed: give --domain, --example ex8.x, or a mesh CSV input"),
    };
    let d = match (cfg.d, &ex, &from_mesh) {
        (Some(d), _, _) => d,
        (None, _, Some((_, d))) => *d,
        (None, Some(ex), None) => ex.subdivisions[0],
        _ => bail!("subdivision parameter needed: give -d"),
    };
    let part = partition(&domain, d)?;
    let part = match (&cfg.input, &ex) {
        (Some(path), _) => read_samples_2d(path, part, cfg.match_tol.unwrap_or(MATCH_TOL))?,
        (None, Some(ex)) => part.with_field(|v| ex.field.eval(v)),
        (None, None) => part,
    };
    Ok((part, ex))
}

pub fn build_curve(cfg: &RunConfig, data: &DataSet1D) -> Result<FifSystem1D> {
    let alpha = cfg
        .alpha
        .clone()
        .unwrap_or(crate::config::Alpha::Scalar(DEFAULT_ALPHA_1D));
    let alphas = alpha.expand(data.len() - 1)?;
    Ok(build_ifs_1d(data, &alphas, cfg.degree.unwrap_or(1))?)
}

pub fn build_surface(cfg: &RunConfig, part: &TriPartition) -> Result<FifSystem2D> {
    if part.z.is_none() {
        bail!("no samples attached: give --input FILE or --example ex8.x");
    }
    let alphas = match cfg
        .alpha
        .clone()
        .unwrap_or(crate::config::Alpha::Scalar(DEFAULT_ALPHA_2D))
    {
        crate::config::Alpha::Scalar(a) => vec![a],
        crate::config::Alpha::List(v) => v,
    };
    Ok(build_ifs_2d(part, &alphas, cfg.degree.unwrap_or(1))?)
}

pub fn mesh(cfg: &RunConfig) -> Result<()> {
    if cfg.format() != Format::Csv {
        bail!("mesh: only CSV output is supported");
    }
    let (part, _) = load_surface(cfg)?;
    let mut out = Vec::new();
    write_mesh_csv(&part, &mut out)?;
    emit(cfg, &out)
}

pub fn build(cfg: &RunConfig) -> Result<()> {
    let fmt = cfg.format();
    if fmt == Format::Svg {
        return no_svg("build");
    }
    if dims(cfg)? == 1 {
        let (data, _) = load_curve(cfg)?;
        let sys = build_curve(cfg, &data)?;
        if fmt == Format::Json {
            return emit(cfg, &to_json(&sys)?);
        }
        let rows: Vec<Vec<String>> = sys
            .maps
            .iter()
            .enumerate()
            .map(|(i, w)| {
                let mut r = vec![i.to_string()];
                r.extend([w.a, w.b, w.big_a, w.big_b, w.alpha].map(fmt_f64));
                r
            })
            .collect();
        emit(
            cfg,
            &csv_table(&["i", "a", "b", "big_a", "big_b", "alpha"], &rows),
        )
    } else {
        let (part, _) = load_surface(cfg)?;
        let sys = build_surface(cfg, &part)?;
        if fmt == Format::Json {
            return emit(cfg, &to_json(&sys)?);
        }
        let rows: Vec<Vec<String>> = sys
            .maps
            .iter()
            .enumerate()
            .map(|(n, w)| {
                let l = &w.l;
                let mut r = vec![n.to_string()];
                r.extend(
                    [
                        l.a11,
                        l.a12,
                        l.a21,
                        l.a22,
                        l.b1,
                        l.b2,
                        w.alpha,
                        w.plane.dx,
                        w.plane.dy,
                        w.plane.offset,
                        w.delta(),
                    ]
                    .map(fmt_f64),
                );
                r
            })
            .collect();
        let header = [
            "n", "a11", "a12", "a21", "a22", "b1", "b2", "alpha", "dx", "dy", "offset", "delta",
        ];
        emit(cfg, &csv_table(&header, &rows))
    }
}

#[derive(Serialize)]
struct CheckOutput {
    dims: usize,
    maps: usize,
    degree: usize,
    /// `theta` for curves, `gamma` for surfaces.
    weight: f64,
    ratio: f64,
    epsilon: f64,
    hyperbolic: bool,
}

pub fn check(cfg: &RunConfig) -> Result<()> {
    let fmt = cfg.format();
    if fmt == Format::Svg {
        return no_svg("check");
    }
    let (dims, maps, degree, r): (usize, usize, usize, HyperbolicityReport) = if dims(cfg)? == 1 {
        let (data, _) = load_curve(cfg)?;
        let sys = build_curve(cfg, &data)?;
        let r = match cfg.epsilon {
            Some(e) => check_hyperbolic_1d(&sys, e)?,
            None => certify_1d(&sys)?,
        };
        (1, sys.maps.len(), sys.degree, r)
    } else {
        let (part, _) = load_surface(cfg)?;
        let sys = build_surface(cfg, &part)?;
        let r = match cfg.epsilon {
            Some(e) => check_hyperbolic_2d(&sys, e)?,
            None => certify_2d(&sys)?,
        };
        (2, sys.maps.len(), sys.degree, r)
    };
    let out = CheckOutput {
        dims,
        maps,
        degree,
        weight: r.theta,
        ratio: r.ratio,
        epsilon: r.epsilon,
        hyperbolic: r.hyperbolic,
    };
    if fmt == Format::Json {
        return emit(cfg, &to_json(&out)?);
    }
    let row = vec![
        dims.to_string(),
        maps.to_string(),
        degree.to_string(),
        fmt_f64(out.weight),
        fmt_f64(out.ratio),
        fmt_f64(out.epsilon),
        out.hyperbolic.to_string(),
    ];
    emit(
        cfg,
        &csv_table(
            &[
                "dims",
                "maps",
                "degree",
                "weight",
                "ratio",
                "epsilon",
                "hyperbolic",
            ],
            &[row],
        ),
    )
}

#[derive(Serialize)]
struct EvalRow {
    point: Vec<f64>,
    value: f64,
    bound: f64,
}

fn points_1d(cfg: &RunConfig, data: &DataSet1D) -> Result<Vec<f64>> {
    if let Some(at) = &cfg.at {
        return at
            .iter()
            .map(|p| match p.as_slice() {
                [t] => Ok(*t),
                _ => bail!("1D evaluation points take one coordinate, got {p:?}"),
            })
            .collect();
    }
    let iv = data.interval();
    Ok(match cfg.grid {
        Some(n) if n > 0 => (0..=n).map(|k| iv.node(k, n)).collect(),
        _ => data.points().iter().map(|p| p.0).collect(),
    })
}

fn points_2d(cfg: &RunConfig, part: &TriPartition) -> Result<Vec<Point2>> {
    if let Some(at) = &cfg.at {
        return at
            .iter()
            .map(|p| match p.as_slice() {
                [x, y] => Ok([*x, *y]),
                _ => bail!("2D evaluation points take two coordinates, got {p:?}"),
            })
            .collect();
    }
    Ok(match cfg.grid {
        Some(n) if n > 0 => {
            let [a, b, c] = *part.domain.vertices();
            let nf = n as f64;
            let mut pts = Vec::new();
            for j in 0..=n {
                for i in 0..=(n - j) {
                    let (s, t) = (i as f64 / nf, j as f64 / nf);
                    let r = 1.0 - s - t;
                    pts.push([
                        r * a[0] + s * b[0] + t * c[0],
                        r * a[1] + s * b[1] + t * c[1],
                    ]);
                }
            }
            pts
        }
        _ => part.vertices.clone(),
    })
}

pub fn eval(cfg: &RunConfig) -> Result<()> {
    let fmt = cfg.format();
    if fmt == Format::Svg {
        return no_svg("eval");
    }
    let rows: Vec<EvalRow> = if dims(cfg)? == 1 {
        let (data, _) = load_curve(cfg)?;
        let sys = build_curve(cfg, &data)?;
        let iters = cfg.iters.unwrap_or_else(|| sys.default_iters());
        points_1d(cfg, &data)?
            .into_iter()
            .map(|p| {
                let FifValue { value, bound } = eval_fif_1d_bounded(&sys, p, iters)?;
                Ok(EvalRow {
                    point: vec![p],
                    value,
                    bound,
                })
            })
            .collect::<Result<_>>()?
    } else {
        let (part, _) = load_surface(cfg)?;
        let sys = build_surface(cfg, &part)?;
        let iters = cfg.iters.unwrap_or_else(|| sys.default_iters());
        points_2d(cfg, &part)?
            .into_iter()
            .map(|v| {
                let FifValue { value, bound } = eval_fif_2d_bounded(&sys, v, iters)?;
                Ok(EvalRow {
                    point: v.to_vec(),
                    value,
                    bound,
                })
            })
            .collect::<Result<_>>()?
    };
    if fmt == Format::Json {
        return emit(cfg, &to_json(&rows)?);
    }
    let header: &[&str] = if rows.first().is_some_and(|r| r.point.len() == 2) {
        &["x", "y", "value", "bound"]
    } else {
        &["p", "value", "bound"]
    };
    let table: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            r.point
                .iter()
                .chain([&r.value, &r.bound])
                .map(|&v| fmt_f64(v))
                .collect()
        })
        .collect();
    emit(cfg, &csv_table(header, &table))
}

#[derive(Serialize)]
struct CloudOutput<'a> {
    seed: u64,
    burn_in: usize,
    points: Vec<&'a [f64]>,
}

fn emit_cloud<const D: usize>(
    cfg: &RunConfig,
    cloud: &AttractorCloud<D>,
    svg: impl Fn() -> String,
) -> Result<()> {
    match cfg.format() {
        Format::Csv => {
            let mut out = Vec::new();
            write_cloud_csv(cloud, &mut out)?;
            emit(cfg, &out)
        }
        Format::Json => {
            let out = CloudOutput {
                seed: cloud.seed,
                burn_in: cloud.burn_in,
                points: cloud.points.iter().map(|p| p.as_slice()).collect(),
            };
            emit(cfg, &to_json(&out)?)
        }
        Format::Svg => {
            if cloud.is_empty() {
                bail!("attractor: SVG needs at least one point");
            }
            emit(cfg, svg().as_bytes())
        }
    }
}

pub fn attractor(cfg: &RunConfig) -> Result<()> {
    let n = cfg.n_points.unwrap_or(DEFAULT_N_POINTS);
    let seed = cfg.seed.unwrap_or(0);
    let burn_in = cfg.burn_in.unwrap_or(DEFAULT_BURN_IN);
    if dims(cfg)? == 1 {
        let (data, _) = load_curve(cfg)?;
        let sys = build_curve(cfg, &data)?;
        let cloud = chaos_game_1d(&sys, n, seed, burn_in)?;
        emit_cloud(cfg, &cloud, || svg_curve(&cloud))
    } else {
        let (part, _) = load_surface(cfg)?;
        let sys = build_surface(cfg, &part)?;
        let cloud = chaos_game_2d(&sys, n, seed, burn_in)?;
        emit_cloud(cfg, &cloud, || svg_surface(&cloud))
    }
}

/// Reference integral of a curve example's function.
pub fn curve_oracle(ex: &CurveExample, tol: f64) -> Result<f64> {
    Ok(adaptive_quad_1d(|t| ex.spec.eval(t), &ex.interval, tol)?)
}

/// Reference integral of a surface example's field: exact for the
/// polynomial fields, subdivided triangle rule otherwise.
pub fn surface_oracle(ex: &SurfaceExample, tol: f64) -> Result<f64> {
    Ok(match ex.field.polynomial() {
        Some(p) => exact_poly_integral(&p, &ex.domain)?,
        None => triangle_quad(|v| ex.field.eval(v), &ex.domain, tol)?,
    })
}

const REPORT_HEADER: [&str; 7] = [
    "fractal_value",
    "oracle_value",
    "abs_error",
    "denominator",
    "degree",
    "n_pieces",
    "ill_conditioned",
];

fn report_row(r: &QuadReport) -> Vec<String> {
    let opt = |v: Option<f64>| v.map(fmt_f64).unwrap_or_default();
    vec![
        fmt_f64(r.fractal_value),
        opt(r.oracle_value),
        opt(r.abs_error),
        fmt_f64(r.denominator),
        r.degree.to_string(),
        r.n_pieces.to_string(),
        r.ill_conditioned.to_string(),
    ]
}

pub fn integrate(cfg: &RunConfig) -> Result<()> {
    let fmt = cfg.format();
    if fmt == Format::Svg {
        return no_svg("integrate");
    }
    let report = if dims(cfg)? == 1 {
        let (data, ex) = load_curve(cfg)?;
        let r = integrate_fif_1d(&build_curve(cfg, &data)?)?;
        match ex {
            Some(ex) => r.with_oracle(curve_oracle(&ex, cfg.tolerance.unwrap_or(DEFAULT_TOL_1D))?),
            None => r,
        }
    } else {
        let (part, ex) = load_surface(cfg)?;
        let r = integrate_fif_2d(&build_surface(cfg, &part)?)?;
        match ex {
            Some(ex) => r.with_oracle(surface_oracle(
                &ex,
                cfg.tolerance.unwrap_or(DEFAULT_TOL_2D),
            )?),
            None => r,
        }
    };
    if fmt == Format::Json {
        return emit(cfg, &to_json(&report)?);
    }
    emit(cfg, &csv_table(&REPORT_HEADER, &[report_row(&report)]))
}

/// Rejects modes that contradict the verb.
pub fn validate(verb: &str, cfg: &RunConfig) -> Result<()> {
    let ok = match (verb, cfg.mode) {
        (_, None) => true,
        ("mesh", Some(m)) => m == Mode::Mesh || m.dims() == Some(2),
        ("reproduce", Some(m)) => m == Mode::Reproduce,
        (_, Some(m)) => m.dims().is_some(),
    };
    if !ok {
        bail!("{verb}: mode {:?} does not apply", cfg.mode.unwrap());
    }
    if let Some(m) = cfg.degree {
        if m == 0 {
            bail!("degree must be at least 1");
        }
    }
    if let Some(t) = cfg.tolerance {
        if !(t > 0.0) {
            bail!("tolerance must be positive");
        }
    }
    if let Some(p) = cfg.input.as_deref() {
        if !Path::new(p).exists() {
            bail!("input {} does not exist", p.display());
        }
    }
    Ok(())
}
