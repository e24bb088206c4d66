//! Scan configuration: parsing, validation and resolution against the catalog.

use std::fmt;
use std::str::FromStr;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::catalog::{MetricSpec, Params, SurfaceSpec};
use crate::extrinsic::Settings;
use crate::immersion::Immersion;
use crate::metric::MetricField;
use crate::normal::Orientation;
use crate::tolerance::{Tolerances, TOL_UMB_ENV};

#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub field: String,
    pub line: Option<usize>,
    pub message: String,
}

impl ConfigError {
    pub fn new(field: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            field: field.into(),
            line: None,
            message: message.into(),
        }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(line) => write!(f, "config error at line {line} ({}): {}", self.field, self.message),
            None => write!(f, "config error in {}: {}", self.field, self.message),
        }
    }
}

impl std::error::Error for ConfigError {}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportFormat {
    #[default]
    Json,
    Csv,
    Text,
}

impl FromStr for ReportFormat {
    type Err = ConfigError;
    fn from_str(s: &str) -> Result<Self, ConfigError> {
        match s {
            "json" => Ok(ReportFormat::Json),
            "csv" => Ok(ReportFormat::Csv),
            "text" => Ok(ReportFormat::Text),
            other => Err(ConfigError::new("report", format!("expected json|csv|text, got {other:?}"))),
        }
    }
}

/// Whether reported mean curvature carries the `1/n` factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MeanCurvatureConvention {
    #[default]
    Paper,
    /// `H` without the `1/n` factor, as common in the physics literature.
    Physics,
}

impl MeanCurvatureConvention {
    pub fn factor(self, n: usize) -> f64 {
        match self {
            MeanCurvatureConvention::Paper => 1.0,
            MeanCurvatureConvention::Physics => n as f64,
        }
    }
}

impl FromStr for MeanCurvatureConvention {
    type Err = ConfigError;
    fn from_str(s: &str) -> Result<Self, ConfigError> {
        match s {
            "paper" => Ok(MeanCurvatureConvention::Paper),
            "physics" => Ok(MeanCurvatureConvention::Physics),
            other => Err(ConfigError::new(
                "mean_curvature_convention",
                format!("expected paper|physics, got {other:?}"),
            )),
        }
    }
}

pub fn parse_orientation(s: &str) -> Result<Orientation, ConfigError> {
    match s {
        "+" | "positive" => Ok(Orientation::Positive),
        "-" | "negative" => Ok(Orientation::Negative),
        other => Err(ConfigError::new("orientation", format!("expected + or -, got {other:?}"))),
    }
}

/// One scanned parameter: `name=start:stop:count`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridAxis {
    pub name: String,
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl GridAxis {
    pub fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.start];
        }
        let step = (self.stop - self.start) / (self.count - 1) as f64;
        (0..self.count)
            .map(|i| if i + 1 == self.count { self.stop } else { self.start + step * i as f64 })
            .collect()
    }

    fn validate(&self) -> Result<(), ConfigError> {
        let field = format!("grid.{}", self.name);
        if self.count < 1 {
            return Err(ConfigError::new(field, "count must be at least 1"));
        }
        if !(self.start.is_finite() && self.stop.is_finite()) {
            return Err(ConfigError::new(field, "bounds must be finite"));
        }
        if !(self.start < self.stop) {
            return Err(ConfigError::new(field, format!("start {} must be below stop {}", self.start, self.stop)));
        }
        Ok(())
    }
}

impl FromStr for GridAxis {
    type Err = ConfigError;
    fn from_str(s: &str) -> Result<Self, ConfigError> {
        let bad = |msg: &str| ConfigError::new("grid", format!("{msg} in {s:?}; expected name=start:stop:count"));
        let (name, range) = s.split_once('=').ok_or_else(|| bad("missing '='"))?;
        let parts: Vec<&str> = range.split(':').collect();
        if parts.len() != 3 {
            return Err(bad("need three ':'-separated fields"));
        }
        let num = |t: &str| t.trim().parse::<f64>().map_err(|_| bad(&format!("bad number {t:?}")));
        let count = parts[2].trim().parse::<usize>().map_err(|_| bad("bad count"))?;
        let axis = GridAxis {
            name: name.trim().to_string(),
            start: num(parts[0])?,
            stop: num(parts[1])?,
            count,
        };
        axis.validate()?;
        Ok(axis)
    }
}

/// Parses `key=value,key=value` into an ordered map.
pub fn parse_params(field: &str, s: &str) -> Result<Params, ConfigError> {
    let mut out = Params::new();
    for item in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let (k, v) = item
            .split_once('=')
            .ok_or_else(|| ConfigError::new(field, format!("expected key=value, got {item:?}")))?;
        let v: f64 = v
            .trim()
            .parse()
            .map_err(|_| ConfigError::new(field, format!("{:?} is not a number", v.trim())))?;
        if out.insert(k.trim().to_string(), v).is_some() {
            return Err(ConfigError::new(field, format!("duplicate key {k:?}")));
        }
    }
    Ok(out)
}

pub fn parse_grid(s: &str) -> Result<Vec<GridAxis>, ConfigError> {
    s.split(',').map(str::trim).filter(|t| !t.is_empty()).map(str::parse).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanConfig {
    pub metric: String,
    pub metric_params: Params,
    pub surface: String,
    pub surface_params: Params,
    pub grid: Vec<GridAxis>,
    /// Values for surface coordinates that are not scanned.
    pub point: Params,
    pub tolerances: Tolerances,
    pub report: ReportFormat,
    pub orientation: Orientation,
    pub mean_curvature_convention: MeanCurvatureConvention,
    #[serde(skip)]
    pub workers: Option<usize>,
}

impl Default for ScanConfig {
    fn default() -> Self {
        Self {
            metric: "euclidean4".into(),
            metric_params: Params::new(),
            surface: "round_sphere".into(),
            surface_params: Params::new(),
            grid: Vec::new(),
            point: Params::new(),
            tolerances: Tolerances::default(),
            report: ReportFormat::Json,
            orientation: Orientation::Positive,
            mean_curvature_convention: MeanCurvatureConvention::Paper,
            workers: None,
        }
    }
}

/// On-disk TOML layout.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    metric: String,
    #[serde(default)]
    metric_params: Params,
    surface: String,
    #[serde(default)]
    surface_params: Params,
    #[serde(default)]
    grid: IndexMap<String, String>,
    #[serde(default)]
    point: Params,
    #[serde(default)]
    tolerances: IndexMap<String, f64>,
    report: Option<String>,
    orientation: Option<String>,
    mean_curvature_convention: Option<String>,
    workers: Option<usize>,
}

fn line_of(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())].matches('\n').count() + 1
}

impl ScanConfig {
    /// Parses a TOML config. `grid` entries read `theta = "0.1:3.0:64"`.
    pub fn from_toml(text: &str) -> Result<Self, ConfigError> {
        let raw: FileConfig = toml::from_str(text).map_err(|e| ConfigError {
            field: "toml".into(),
            line: e.span().map(|s| line_of(text, s.start)),
            message: e.message().to_string(),
        })?;
        let locate = |mut err: ConfigError, key: &str| {
            if let Some(pos) = text.find(key) {
                err.line = Some(line_of(text, pos));
            }
            err
        };
        let mut cfg = ScanConfig {
            metric: raw.metric,
            metric_params: raw.metric_params,
            surface: raw.surface,
            surface_params: raw.surface_params,
            point: raw.point,
            workers: raw.workers,
            ..Default::default()
        };
        for (name, range) in &raw.grid {
            let axis: GridAxis = format!("{name}={range}").parse().map_err(|e| locate(e, name))?;
            cfg.grid.push(axis);
        }
        for (k, v) in &raw.tolerances {
            cfg.tolerances
                .set(k, *v)
                .map_err(|m| locate(ConfigError::new(format!("tolerances.{k}"), m), k))?;
        }
        if let Some(r) = &raw.report {
            cfg.report = r.parse().map_err(|e| locate(e, "report"))?;
        }
        if let Some(o) = &raw.orientation {
            cfg.orientation = parse_orientation(o).map_err(|e| locate(e, "orientation"))?;
        }
        if let Some(c) = &raw.mean_curvature_convention {
            cfg.mean_curvature_convention = c.parse().map_err(|e| locate(e, "mean_curvature_convention"))?;
        }
        cfg.resolve().map_err(|e| {
            let key = e.field.split('.').next_back().unwrap_or("").to_string();
            locate(e, &key)
        })?;
        Ok(cfg)
    }

    /// Applies `SUBSHEAR_TOL_UMB` if set.
    pub fn apply_env(&mut self) -> Result<(), ConfigError> {
        if let Ok(raw) = std::env::var(TOL_UMB_ENV) {
            let v: f64 = raw
                .trim()
                .parse()
                .map_err(|_| ConfigError::new(TOL_UMB_ENV, format!("{raw:?} is not a number")))?;
            self.tolerances.set("umb", v).map_err(|m| ConfigError::new(TOL_UMB_ENV, m))?;
        }
        Ok(())
    }

    pub fn settings(&self) -> Settings {
        Settings {
            tol: self.tolerances,
            orientation: self.orientation,
        }
    }

    /// Checks the config against the catalog.
    pub fn resolve(&self) -> Result<Resolved, ConfigError> {
        let metric = MetricSpec::from_name(&self.metric, &self.metric_params)
            .map_err(|e| ConfigError::new("metric", e.0))?;
        let surface = SurfaceSpec::from_name(&self.surface, &self.surface_params)
            .map_err(|e| ConfigError::new("surface", e.0))?;
        if surface.ambient_dim() != metric.dim() {
            return Err(ConfigError::new(
                "surface",
                format!(
                    "surface needs a {}-dimensional ambient space, metric {} has {}",
                    surface.ambient_dim(),
                    self.metric,
                    metric.dim()
                ),
            ));
        }
        self.tolerances.validate().map_err(|m| ConfigError::new("tolerances", m))?;
        if self.workers == Some(0) {
            return Err(ConfigError::new("workers", "need at least one worker"));
        }
        let labels = surface.coordinate_labels();
        let family = surface.family_params();
        let mut seen = Vec::new();
        for axis in &self.grid {
            axis.validate()?;
            if !labels.contains(&axis.name) && !family.contains(&axis.name.as_str()) {
                return Err(ConfigError::new(
                    format!("grid.{}", axis.name),
                    format!("not a coordinate {labels:?} or family parameter {family:?} of {}", self.surface),
                ));
            }
            if seen.contains(&&axis.name) {
                return Err(ConfigError::new(format!("grid.{}", axis.name), "axis given twice"));
            }
            seen.push(&axis.name);
        }
        for key in self.point.keys() {
            if !labels.contains(key) {
                return Err(ConfigError::new(format!("point.{key}"), format!("not a coordinate {labels:?}")));
            }
        }
        Ok(Resolved { metric, surface })
    }

    pub fn grid_size(&self) -> usize {
        self.grid.iter().map(|a| a.count).product()
    }

    /// Grid points in row-major order (first axis slowest).
    pub fn grid_points(&self) -> Vec<Params> {
        let mut points = vec![Params::new()];
        for axis in &self.grid {
            let values = axis.values();
            points = points
                .into_iter()
                .flat_map(|p| {
                    values.iter().map(move |&v| {
                        let mut q = p.clone();
                        q.insert(axis.name.clone(), v);
                        q
                    })
                })
                .collect();
        }
        points
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Resolved {
    pub metric: MetricSpec,
    pub surface: SurfaceSpec,
}

impl Resolved {
    /// Surface family and coordinates at a grid point. `values` may set
    /// family parameters and coordinates; `point` fills the remaining
    /// coordinates, then the family defaults.
    pub fn locate(&self, values: &Params, point: &Params) -> Result<(SurfaceSpec, Vec<f64>, Params), ConfigError> {
        let mut surface = self.surface;
        for key in surface.family_params() {
            if let Some(&v) = values.get(key) {
                surface = surface
                    .with_param(key, v)
                    .map_err(|e| ConfigError::new(format!("grid.{key}"), e.0))?;
            }
        }
        let mut coords = Params::new();
        for (k, v) in values {
            if surface.family_params().contains(&k.as_str()) {
                coords.insert(k.clone(), *v);
            }
        }
        let mut u = Vec::new();
        for label in surface.coordinate_labels() {
            let v = values
                .get(&label)
                .or_else(|| point.get(&label))
                .copied()
                .unwrap_or_else(|| surface.default_coordinate(&label));
            coords.insert(label, v);
            u.push(v);
        }
        Ok((surface, u, coords))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_axis_parsing() {
        let a: GridAxis = "theta=0.001:3.1406:64".parse().unwrap();
        assert_eq!(a.count, 64);
        let v = a.values();
        assert_eq!(v[0], 0.001);
        assert_eq!(v[63], 3.1406);
        assert!("theta=1:0:5".parse::<GridAxis>().is_err());
        assert!("theta=0:1:0".parse::<GridAxis>().is_err());
        assert!("theta=0:1".parse::<GridAxis>().is_err());
        let g = parse_grid("theta=0:1:3,phi=0:6.283:4").unwrap();
        assert_eq!(g.len(), 2);
    }

    #[test]
    fn grid_points_row_major() {
        let cfg = ScanConfig {
            grid: parse_grid("theta=0.5:1.0:2,phi=0:1:3").unwrap(),
            ..Default::default()
        };
        let pts = cfg.grid_points();
        assert_eq!(pts.len(), 6);
        assert_eq!(pts[1]["theta"], 0.5);
        assert_eq!(pts[1]["phi"], 0.5);
        assert_eq!(pts[3]["theta"], 1.0);
    }

    #[test]
    fn toml_round_trip_and_errors() {
        let text = r#"
metric = "kerr_kerr_coords"
surface = "const_vr_kerr"
report = "csv"

[metric_params]
m = 1.0
a = 0.5

[surface_params]
r = 1.8660254037844386

[grid]
theta = "0.1:3.0:8"

[tolerances]
umb = 1e-7
"#;
        let cfg = ScanConfig::from_toml(text).unwrap();
        assert_eq!(cfg.report, ReportFormat::Csv);
        assert_eq!(cfg.tolerances.umb, 1e-7);
        assert_eq!(cfg.grid[0].count, 8);

        let bad = text.replace("theta = \"0.1:3.0:8\"", "theta = \"3.0:0.1:8\"");
        let err = ScanConfig::from_toml(&bad).unwrap_err();
        assert_eq!(err.line, Some(14));

        let unknown = text.replace("report = \"csv\"", "colour = \"red\"");
        let err = ScanConfig::from_toml(&unknown).unwrap_err();
        assert_eq!(err.line, Some(4));

        let bad_axis = text.replace("theta = ", "psi = ");
        let err = ScanConfig::from_toml(&bad_axis).unwrap_err();
        assert!(err.field.contains("psi"), "{err}");
    }

    #[test]
    fn params_parsing() {
        let p = parse_params("param", "m=1.0, a=0.5").unwrap();
        assert_eq!(p["a"], 0.5);
        assert!(parse_params("param", "m=1,m=2").is_err());
        assert!(parse_params("param", "m").is_err());
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let cfg = ScanConfig {
            metric: "minkowskiN".into(),
            metric_params: parse_params("p", "n=5").unwrap(),
            surface: "round_sphere".into(),
            ..Default::default()
        };
        assert_eq!(cfg.resolve().unwrap_err().field, "surface");
    }
}
