//! Dataset ingest and CSV/SVG export.
//!
//! * 1D data: rows `p,q`, strictly increasing in `p`.
//! * 2D data: either a mesh dump (`vertex,x,y,z,colour` rows followed by
//!   `triangle,i1,i2,i3` rows) or `x,y,z` scatter rows matched to the
//!   lattice vertices by position.
//!
//! A first row that does not parse as numbers is taken as a header; `#`
//! starts a comment line.

use std::fmt::Write as _;
use std::fs::File;
use std::io::{self, Write};
use std::path::Path;

use csv::{ReaderBuilder, StringRecord, Trim};

use crate::bernstein::{Point2, Triangle};
use crate::error::{Error, Result};
use crate::fif1d::{AttractorCloud, DataSet1D};
use crate::trimesh::TriPartition;

/// Default position tolerance for matching scatter rows to the lattice.
pub const MATCH_TOL: f64 = 1e-6;

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> Error + '_ {
    move |source| Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn parse_err(path: &Path, line: u64, message: impl Into<String>) -> Error {
    Error::Parse {
        path: path.display().to_string(),
        line,
        message: message.into(),
    }
}

struct Row {
    line: u64,
    fields: Vec<String>,
}

fn read_rows(path: &Path) -> Result<Vec<Row>> {
    let file = File::open(path).map_err(io_err(path))?;
    let mut reader = ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(Trim::All)
        .comment(Some(b'#'))
        .from_reader(file);
    let mut rows = Vec::new();
    let mut record = StringRecord::new();
    loop {
        match reader.read_record(&mut record) {
            Ok(false) => break,
            Ok(true) => {
                if record.iter().all(|f| f.is_empty()) {
                    continue;
                }
                let line = record.position().map_or(0, |p| p.line());
                rows.push(Row {
                    line,
                    fields: record.iter().map(str::to_owned).collect(),
                });
            }
            Err(e) => {
                let line = e.position().map_or(0, |p| p.line());
                return Err(match e.into_kind() {
                    csv::ErrorKind::Io(source) => Error::Io {
                        path: path.to_path_buf(),
                        source,
                    },
                    other => parse_err(path, line, format!("{other:?}")),
                });
            }
        }
    }
    Ok(rows)
}

fn numbers(path: &Path, row: &Row, want: usize) -> Result<Vec<f64>> {
    if row.fields.len() != want {
        return Err(parse_err(
            path,
            row.line,
            format!("expected {want} fields, found {}", row.fields.len()),
        ));
    }
    row.fields
        .iter()
        .map(|f| {
            f.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| parse_err(path, row.line, format!("not a finite number: {f:?}")))
        })
        .collect()
}

fn is_header(row: &Row) -> bool {
    row.fields.iter().any(|f| f.parse::<f64>().is_err())
}

/// Reads `p,q` rows.
pub fn read_dataset_1d(path: &Path) -> Result<DataSet1D> {
    let mut rows = read_rows(path)?;
    if rows.first().is_some_and(is_header) {
        rows.remove(0);
    }
    let mut points: Vec<(f64, f64)> = Vec::with_capacity(rows.len());
    for row in &rows {
        let v = numbers(path, row, 2)?;
        if let Some(&(last, _)) = points.last() {
            if !(v[0] > last) {
                return Err(Error::UnsortedInput {
                    path: path.display().to_string(),
                    line: row.line,
                });
            }
        }
        points.push((v[0], v[1]));
    }
    DataSet1D::new(points)
}

/// Attaches samples read from `path` to `part`. Scatter rows are matched
/// to the nearest lattice vertex within `tol`.
pub fn read_samples_2d(path: &Path, part: TriPartition, tol: f64) -> Result<TriPartition> {
    let rows = read_rows(path)?;
    let mesh = rows
        .iter()
        .any(|r| r.fields.first().is_some_and(|f| f == "vertex"));
    if mesh {
        read_mesh_samples(path, part, &rows, tol)
    } else {
        read_scatter_samples(path, part, &rows, tol)
    }
}

/// Domain and `d` of a mesh dump, read off its vertex rows: the corners
/// are vertices `0`, `d` and the last one. `None` for scatter files.
pub fn read_mesh_geometry(path: &Path) -> Result<Option<(Triangle, usize)>> {
    let rows = read_rows(path)?;
    let mut xy = Vec::new();
    for row in rows.iter().filter(|r| r.fields[0] == "vertex") {
        if row.fields.len() < 3 {
            return Err(parse_err(path, row.line, "vertex row needs x and y"));
        }
        let tail = Row {
            line: row.line,
            fields: row.fields[1..3].to_vec(),
        };
        let v = numbers(path, &tail, 2)?;
        xy.push([v[0], v[1]]);
    }
    if xy.is_empty() {
        return Ok(None);
    }
    let d = (1..=xy.len())
        .find(|d| d * (d + 1) + 1 >= xy.len())
        .filter(|d| d * (d + 1) + 1 == xy.len())
        .ok_or_else(|| {
            mismatch(
                path,
                format!("{} vertex rows is not d(d+1)+1 for any d", xy.len()),
            )
        })?;
    let tri = Triangle::new(xy[0], xy[d], xy[xy.len() - 1])?;
    Ok(Some((tri, d)))
}

fn mismatch(path: &Path, message: String) -> Error {
    Error::VertexMismatch {
        path: path.display().to_string(),
        message,
    }
}

fn read_mesh_samples(
    path: &Path,
    part: TriPartition,
    rows: &[Row],
    tol: f64,
) -> Result<TriPartition> {
    let mut z = Vec::new();
    for row in rows.iter().filter(|r| r.fields[0] == "vertex") {
        let tail = Row {
            line: row.line,
            fields: row.fields[1..].to_vec(),
        };
        let v = numbers(path, &tail, 4)?;
        let i = z.len();
        let Some(want) = part.vertices.get(i) else {
            return Err(mismatch(
                path,
                format!("more than {} vertex rows", part.vertices.len()),
            ));
        };
        if (v[0] - want[0]).abs() > tol || (v[1] - want[1]).abs() > tol {
            return Err(mismatch(
                path,
                format!(
                    "vertex {i} at ({}, {}) but lattice has ({}, {})",
                    v[0], v[1], want[0], want[1]
                ),
            ));
        }
        z.push(v[2]);
    }
    if z.len() != part.vertices.len() {
        return Err(mismatch(
            path,
            format!(
                "{} vertex rows for {} lattice vertices",
                z.len(),
                part.vertices.len()
            ),
        ));
    }
    part.with_values(z)
}

fn read_scatter_samples(
    path: &Path,
    part: TriPartition,
    rows: &[Row],
    tol: f64,
) -> Result<TriPartition> {
    let mut rows = rows;
    if rows.first().is_some_and(is_header) {
        rows = &rows[1..];
    }
    let scatter: Vec<(u64, [f64; 3])> = rows
        .iter()
        .map(|r| numbers(path, r, 3).map(|v| (r.line, [v[0], v[1], v[2]])))
        .collect::<Result<_>>()?;
    let mut used = vec![false; scatter.len()];
    let mut z = Vec::with_capacity(part.vertices.len());
    for (i, v) in part.vertices.iter().enumerate() {
        let best = scatter
            .iter()
            .enumerate()
            .filter(|(k, _)| !used[*k])
            .map(|(k, (_, s))| (k, (s[0] - v[0]).abs().max((s[1] - v[1]).abs())))
            .min_by(|a, b| a.1.total_cmp(&b.1));
        match best {
            Some((k, dist)) if dist <= tol => {
                used[k] = true;
                z.push(scatter[k].1[2]);
            }
            _ => {
                return Err(mismatch(
                    path,
                    format!(
                        "no sample within {tol} of vertex {i} at ({}, {})",
                        v[0], v[1]
                    ),
                ))
            }
        }
    }
    if let Some(k) = used.iter().position(|u| !u) {
        return Err(mismatch(
            path,
            format!("line {}: sample matches no lattice vertex", scatter[k].0),
        ));
    }
    part.with_values(z)
}

/// 17 significant digits, enough to round-trip any `f64`.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn create(path: &Path) -> Result<io::BufWriter<File>> {
    File::create(path)
        .map(io::BufWriter::new)
        .map_err(io_err(path))
}

/// Mesh dump: vertex rows then triangle rows.
pub fn write_mesh_csv(part: &TriPartition, out: &mut impl Write) -> io::Result<()> {
    let z = part.z.as_deref();
    for (i, v) in part.vertices.iter().enumerate() {
        let zv = z.map_or(String::new(), |z| fmt_f64(z[i]));
        writeln!(
            out,
            "vertex,{},{},{},{}",
            fmt_f64(v[0]),
            fmt_f64(v[1]),
            zv,
            part.colours[i]
        )?;
    }
    for t in &part.triangles {
        writeln!(out, "triangle,{},{},{}", t[0], t[1], t[2])?;
    }
    Ok(())
}

pub fn save_mesh_csv(part: &TriPartition, path: &Path) -> Result<()> {
    let mut w = create(path)?;
    write_mesh_csv(part, &mut w)
        .and_then(|_| w.flush())
        .map_err(io_err(path))
}

fn cloud_header(d: usize) -> &'static str {
    if d == 2 {
        "p,q"
    } else {
        "x,y,z"
    }
}

pub fn write_cloud_csv<const D: usize>(
    cloud: &AttractorCloud<D>,
    out: &mut impl Write,
) -> io::Result<()> {
    writeln!(out, "{}", cloud_header(D))?;
    for p in &cloud.points {
        let line: Vec<String> = p.iter().map(|&v| fmt_f64(v)).collect();
        writeln!(out, "{}", line.join(","))?;
    }
    Ok(())
}

pub fn save_cloud_csv<const D: usize>(cloud: &AttractorCloud<D>, path: &Path) -> Result<()> {
    let mut w = create(path)?;
    write_cloud_csv(cloud, &mut w)
        .and_then(|_| w.flush())
        .map_err(io_err(path))
}

/// Reads a cloud written by [`write_cloud_csv`].
pub fn read_cloud_csv<const D: usize>(path: &Path) -> Result<Vec<[f64; D]>> {
    let mut rows = read_rows(path)?;
    if rows.first().is_some_and(is_header) {
        rows.remove(0);
    }
    rows.iter()
        .map(|r| {
            let v = numbers(path, r, D)?;
            Ok(std::array::from_fn(|i| v[i]))
        })
        .collect()
}

pub const SVG_WIDTH: f64 = 800.0;
pub const SVG_HEIGHT: f64 = 600.0;
const MARGIN: f64 = 30.0;

fn bounds(points: &[Point2]) -> ([f64; 2], [f64; 2]) {
    let mut lo = [f64::INFINITY; 2];
    let mut hi = [f64::NEG_INFINITY; 2];
    for p in points {
        for a in 0..2 {
            lo[a] = lo[a].min(p[a]);
            hi[a] = hi[a].max(p[a]);
        }
    }
    for a in 0..2 {
        if hi[a] - lo[a] <= 0.0 {
            lo[a] -= 0.5;
            hi[a] += 0.5;
        }
    }
    (lo, hi)
}

/// Scatter panel of `points` into the box `(x0, y0, w, h)`.
fn panel(svg: &mut String, points: &[Point2], frame: [f64; 4], label: &str) {
    let [x0, y0, w, h] = frame;
    let (lo, hi) = bounds(points);
    let (iw, ih) = (w - 2.0 * MARGIN, h - 2.0 * MARGIN);
    let _ = writeln!(
        svg,
        r#"<rect x="{}" y="{}" width="{iw}" height="{ih}" fill="none" stroke="black" stroke-width="0.5"/>"#,
        x0 + MARGIN,
        y0 + MARGIN
    );
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="{}" font-size="12">{label}</text>"#,
        x0 + MARGIN,
        y0 + MARGIN - 8.0
    );
    for p in points {
        let sx = x0 + MARGIN + (p[0] - lo[0]) / (hi[0] - lo[0]) * iw;
        let sy = y0 + MARGIN + (hi[1] - p[1]) / (hi[1] - lo[1]) * ih;
        let _ = writeln!(svg, r#"<circle cx="{sx:.2}" cy="{sy:.2}" r="0.8"/>"#);
    }
}

fn svg_document(body: &str) -> String {
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{SVG_WIDTH}\" height=\"{SVG_HEIGHT}\" viewBox=\"0 0 {SVG_WIDTH} {SVG_HEIGHT}\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n{body}</svg>\n"
    )
}

/// Curve attractor as a single `(p, q)` scatter.
pub fn svg_curve(cloud: &AttractorCloud<2>) -> String {
    let mut body = String::new();
    panel(
        &mut body,
        &cloud.points,
        [0.0, 0.0, SVG_WIDTH, SVG_HEIGHT],
        "q against p",
    );
    svg_document(&body)
}

/// Surface attractor as side-by-side `(x, z)` and `(y, z)` projections.
pub fn svg_surface(cloud: &AttractorCloud<3>) -> String {
    let xz: Vec<Point2> = cloud.points.iter().map(|p| [p[0], p[2]]).collect();
    let yz: Vec<Point2> = cloud.points.iter().map(|p| [p[1], p[2]]).collect();
    let half = SVG_WIDTH / 2.0;
    let mut body = String::new();
    panel(&mut body, &xz, [0.0, 0.0, half, SVG_HEIGHT], "z against x");
    panel(&mut body, &yz, [half, 0.0, half, SVG_HEIGHT], "z against y");
    svg_document(&body)
}

pub fn save_text(text: &str, path: &Path) -> Result<()> {
    std::fs::write(path, text).map_err(io_err(path))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn svg_has_one_marker_per_point() {
        let cloud = AttractorCloud {
            points: vec![[0.0, 1.0], [0.5, 2.0], [1.0, 0.0]],
            seed: 0,
            burn_in: 0,
        };
        let svg = svg_curve(&cloud);
        assert_eq!(svg.matches("<circle").count(), 3);
        assert!(svg.contains("viewBox=\"0 0 800 600\""));
        let cloud3 = AttractorCloud {
            points: vec![[0.0, 1.0, 2.0]; 4],
            seed: 0,
            burn_in: 0,
        };
        assert_eq!(svg_surface(&cloud3).matches("<circle").count(), 8);
    }

    #[test]
    fn full_precision_format() {
        for v in [0.1, -1.0 / 3.0, 1e-300, 6.02214076e23] {
            assert_eq!(fmt_f64(v).parse::<f64>().unwrap(), v);
        }
    }
}
