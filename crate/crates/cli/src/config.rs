//! Run configuration: a JSON file overlaid with command-line flags.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Fif1d,
    Fif2d,
    Quad1d,
    Quad2d,
    Mesh,
    Reproduce,
}

impl Mode {
    pub fn dims(self) -> Option<usize> {
        match self {
            Mode::Fif1d | Mode::Quad1d => Some(1),
            Mode::Fif2d | Mode::Quad2d => Some(2),
            Mode::Mesh | Mode::Reproduce => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
    Svg,
}

/// One shared scaling or one per map.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Alpha {
    Scalar(f64),
    List(Vec<f64>),
}

impl Alpha {
    pub fn parse(s: &str) -> Result<Self> {
        let values: Vec<f64> = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<f64>()
                    .with_context(|| format!("bad alpha value {t:?}"))
            })
            .collect::<Result<_>>()?;
        Ok(match values.as_slice() {
            [v] => Alpha::Scalar(*v),
            _ => Alpha::List(values),
        })
    }

    /// Expands to `n` values.
    pub fn expand(&self, n: usize) -> Result<Vec<f64>> {
        match self {
            Alpha::Scalar(v) => Ok(vec![*v; n]),
            Alpha::List(v) if v.len() == n => Ok(v.clone()),
            Alpha::List(v) => bail!(
                "alpha list has {} entries, the system has {n} maps",
                v.len()
            ),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub mode: Option<Mode>,
    pub degree: Option<usize>,
    pub alpha: Option<Alpha>,
    pub d: Option<usize>,
    pub seed: Option<u64>,
    pub n_points: Option<usize>,
    /// Series truncation `K` for the curve examples.
    pub terms: Option<usize>,
    pub tolerance: Option<f64>,
    pub input: Option<PathBuf>,
    pub output: Option<PathBuf>,
    pub format: Option<Format>,
    /// Preset id (`ex5.1` .. `ex5.3`, `ex8.1` .. `ex8.4`, `table1` .. `table4`).
    pub example: Option<String>,
    /// Number of subintervals when sampling a curve example.
    pub pieces: Option<usize>,
    /// Domain corners `[[x1, y1], [x2, y2], [x3, y3]]`.
    pub domain: Option<[[f64; 2]; 3]>,
    pub epsilon: Option<f64>,
    pub iters: Option<usize>,
    pub burn_in: Option<usize>,
    /// Evaluation points: `[p]` or `[x, y]` each.
    pub at: Option<Vec<Vec<f64>>>,
    pub grid: Option<usize>,
    pub match_tol: Option<f64>,
    pub sweep: Option<bool>,
    pub with_d49: Option<bool>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("parsing config {}", path.display()))
    }

    /// Fields set in `flags` replace those in `self`.
    pub fn overlay(self, flags: RunConfig) -> RunConfig {
        macro_rules! pick {
            ($($f:ident),*) => { RunConfig { $($f: flags.$f.or(self.$f)),* } };
        }
        pick!(
            mode, degree, alpha, d, seed, n_points, terms, tolerance, input, output, format,
            example, pieces, domain, epsilon, iters, burn_in, at, grid, match_tol, sweep, with_d49
        )
    }

    /// Output format: explicit, else from the output extension, else CSV.
    pub fn format(&self) -> Format {
        self.format.unwrap_or_else(|| {
            match self
                .output
                .as_deref()
                .and_then(Path::extension)
                .and_then(|e| e.to_str())
            {
                Some("json") => Format::Json,
                Some("svg") => Format::Svg,
                _ => Format::Csv,
            }
        })
    }
}

/// Flags shared by every verb. Anything left unset falls back to the
/// config file, then to built-in defaults.
#[derive(Debug, Clone, Default, Args)]
pub struct Flags {
    /// JSON run configuration; flags override its fields.
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub mode: Option<Mode>,
    /// Bernstein degree m.
    #[arg(short = 'm', long)]
    pub degree: Option<usize>,
    /// Vertical scaling: one value or a comma-separated list, one per map.
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<String>,
    /// Subdivision parameter of the triangle partition.
    #[arg(short = 'd', long)]
    pub d: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(short = 'n', long)]
    pub n_points: Option<usize>,
    /// Series truncation K for the curve examples.
    #[arg(long)]
    pub terms: Option<usize>,
    /// Oracle quadrature tolerance.
    #[arg(long)]
    pub tolerance: Option<f64>,
    #[arg(short = 'i', long)]
    pub input: Option<PathBuf>,
    #[arg(short = 'o', long)]
    pub output: Option<PathBuf>,
    #[arg(short = 'f', long, value_enum)]
    pub format: Option<Format>,
    /// Preset data: ex5.1, ex5.2, ex5.3, ex8.1 .. ex8.4 (or table1 .. table4).
    #[arg(long)]
    pub example: Option<String>,
    /// Subintervals when sampling a curve example.
    #[arg(long)]
    pub pieces: Option<usize>,
    /// Domain corners as x1,y1,x2,y2,x3,y3.
    #[arg(long, allow_hyphen_values = true)]
    pub domain: Option<String>,
    /// Metric slack for the hyperbolicity certificate.
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// Recursion depth for evaluation.
    #[arg(long)]
    pub iters: Option<usize>,
    #[arg(long)]
    pub burn_in: Option<usize>,
    /// Evaluation point, `p` or `x,y`; repeatable.
    #[arg(long, allow_hyphen_values = true)]
    pub at: Vec<String>,
    /// Evaluate on a uniform grid with this many steps per side.
    #[arg(long)]
    pub grid: Option<usize>,
    /// Position tolerance when matching x,y,z rows to lattice vertices.
    #[arg(long)]
    pub match_tol: Option<f64>,
    /// Sweep the uniform scaling over [0, 0.1] (curve reproductions).
    #[arg(long)]
    pub sweep: bool,
    /// Add the d = 49 row to table reproductions.
    #[arg(long)]
    pub with_d49: bool,
}

fn parse_list(s: &str, what: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .with_context(|| format!("bad {what} value {t:?}"))
        })
        .collect()
}

impl Flags {
    /// Loads the config file (if any) and overlays the flags on it.
    pub fn resolve(&self) -> Result<RunConfig> {
        let base = match &self.config {
            Some(p) => RunConfig::load(p)?,
            None => RunConfig::default(),
        };
        let domain = match &self.domain {
            Some(s) => {
                let v = parse_list(s, "domain")?;
                if v.len() != 6 {
                    bail!("--domain needs 6 numbers, got {}", v.len());
                }
                Some([[v[0], v[1]], [v[2], v[3]], [v[4], v[5]]])
            }
            None => None,
        };
        let at = if self.at.is_empty() {
            None
        } else {
            Some(
                self.at
                    .iter()
                    .map(|s| parse_list(s, "point"))
                    .collect::<Result<_>>()?,
            )
        };
        let flags = RunConfig {
            mode: self.mode,
            degree: self.degree,
            alpha: self.alpha.as_deref().map(Alpha::parse).transpose()?,
            d: self.d,
            seed: self.seed,
            n_points: self.n_points,
            terms: self.terms,
            tolerance: self.tolerance,
            input: self.input.clone(),
            output: self.output.clone(),
            format: self.format,
            example: self.example.clone(),
            pieces: self.pieces,
            domain,
            epsilon: self.epsilon,
            iters: self.iters,
            burn_in: self.burn_in,
            at,
            grid: self.grid,
            match_tol: self.match_tol,
            sweep: self.sweep.then_some(true),
            with_d49: self.with_d49.then_some(true),
        };
        Ok(base.overlay(flags))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_win_over_file() {
        let file: RunConfig = serde_json::from_str(
            r#"{"mode": "fif1d", "alpha": [0.1, 0.2], "seed": 3, "degree": 2}"#,
        )
        .unwrap();
        let flags = RunConfig {
            seed: Some(9),
            ..Default::default()
        };
        let merged = file.overlay(flags);
        assert_eq!(merged.seed, Some(9));
        assert_eq!(merged.degree, Some(2));
        assert_eq!(merged.alpha, Some(Alpha::List(vec![0.1, 0.2])));
    }

    #[test]
    fn unknown_fields_rejected() {
        assert!(serde_json::from_str::<RunConfig>(r#"{"alhpa": 0.1}"#).is_err());
    }

    #[test]
    fn alpha_parsing() {
        assert_eq!(Alpha::parse("0.2").unwrap(), Alpha::Scalar(0.2));
        assert_eq!(
            Alpha::parse("0.1, -0.3").unwrap().expand(2).unwrap(),
            vec![0.1, -0.3]
        );
        assert!(Alpha::parse("0.1,x").is_err());
        assert!(Alpha::List(vec![0.1]).expand(3).is_err());
    }

    #[test]
    fn format_from_extension() {
        let cfg = RunConfig {
            output: Some("a/b.svg".into()),
            ..Default::default()
        };
        assert_eq!(cfg.format(), Format::Svg);
        assert_eq!(RunConfig::default().format(), Format::Csv);
    }
}
