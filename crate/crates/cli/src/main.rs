use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::json;

use subshear::config::{parse_grid, parse_orientation, parse_params, MeanCurvatureConvention, ReportFormat, ScanConfig};
use subshear::intrinsic::gaussian_curvature_2d;
use subshear::locus::{find_umbilical_locus, LocusError, LocusReport};
use subshear::metric::ChartPoint;
use subshear::report::{format_float, render};
use subshear::run_scan;

#[derive(Parser)]
#[command(name = "subshear", version, about = "Umbilical classification of spacelike co-dimension two surfaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify a single surface point.
    Classify(Common),
    /// Classify every point of a grid.
    Scan {
        #[command(flatten)]
        common: Common,
        /// Axes as name=start:stop:count, comma separated.
        #[arg(long)]
        grid: Option<String>,
    },
    /// Find where an umbilical direction appears along one parameter.
    Locus {
        #[command(flatten)]
        common: Common,
        /// Coordinate or family parameter to vary.
        #[arg(long)]
        free: String,
        /// Search interval as lo:hi.
        #[arg(long)]
        bracket: String,
    },
    /// Gaussian curvature of the induced metric of a surface.
    Curvature(Common),
}

#[derive(Args)]
struct Common {
    /// TOML config; flags given on the command line take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    metric: Option<String>,
    /// Metric parameters, e.g. m=1.0,a=0.5.
    #[arg(long)]
    param: Option<String>,
    #[arg(long)]
    surface: Option<String>,
    /// Surface family parameters, e.g. v=0,r=1.866.
    #[arg(long)]
    sparam: Option<String>,
    /// Fixed surface coordinates, e.g. theta=0.785,phi=0.
    #[arg(long)]
    point: Option<String>,
    /// Tolerance overrides, e.g. umb=1e-7 (repeatable).
    #[arg(long, value_delimiter = ',')]
    tol: Vec<String>,
    #[arg(long)]
    report: Option<String>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, allow_hyphen_values = true)]
    orientation: Option<String>,
    #[arg(long)]
    mean_curvature_convention: Option<String>,
    #[arg(long)]
    workers: Option<usize>,
}

impl Common {
    /// Defaults, then the config file, then the environment, then flags.
    fn build(&self) -> Result<ScanConfig> {
        let mut cfg = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
                ScanConfig::from_toml(&text).with_context(|| format!("in {}", path.display()))?
            }
            None => {
                if self.metric.is_none() || self.surface.is_none() {
                    bail!("--metric and --surface are required without --config");
                }
                ScanConfig::default()
            }
        };
        cfg.apply_env()?;
        if let Some(m) = &self.metric {
            cfg.metric = m.clone();
        }
        if let Some(p) = &self.param {
            cfg.metric_params = parse_params("param", p)?;
        }
        if let Some(s) = &self.surface {
            cfg.surface = s.clone();
        }
        if let Some(p) = &self.sparam {
            cfg.surface_params = parse_params("sparam", p)?;
        }
        if let Some(p) = &self.point {
            cfg.point = parse_params("point", p)?;
        }
        for item in &self.tol {
            let Some((k, v)) = item.split_once('=') else {
                bail!("--tol expects key=value, got {item:?}");
            };
            let v: f64 = v.trim().parse().with_context(|| format!("--tol {k}: {v:?} is not a number"))?;
            cfg.tolerances.set(k.trim(), v).map_err(anyhow::Error::msg)?;
        }
        if let Some(r) = &self.report {
            cfg.report = r.parse::<ReportFormat>()?;
        }
        if let Some(o) = &self.orientation {
            cfg.orientation = parse_orientation(o)?;
        }
        if let Some(c) = &self.mean_curvature_convention {
            cfg.mean_curvature_convention = c.parse::<MeanCurvatureConvention>()?;
        }
        if self.workers.is_some() {
            cfg.workers = self.workers;
        }
        cfg.resolve()?;
        Ok(cfg)
    }

    fn emit(&self, text: &str) -> Result<()> {
        match &self.out {
            Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display())),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    }
}

/// `grid = None` classifies the single configured point.
fn scan(common: &Common, grid: Option<&str>) -> Result<u8> {
    let mut cfg = common.build()?;
    if grid.is_none() {
        cfg.grid.clear();
    }
    if let Some(g) = grid.filter(|g| !g.is_empty()) {
        cfg.grid = parse_grid(g)?;
        cfg.resolve()?;
    }
    let report = run_scan(&cfg)?;
    common.emit(&render(&report, cfg.report))?;
    for f in &report.summary.failed {
        eprintln!("{:?}: {}", f.coords, f.reason);
    }
    Ok(report.summary.exit_code as u8)
}

fn locus_text(report: &LocusReport) -> String {
    let mut out = format!(
        "{} in [{}, {}] ({} surrogate)\n",
        report.param,
        format_float(report.bracket[0]),
        format_float(report.bracket[1]),
        report.surrogate
    );
    if report.degenerate {
        out.push_str("degenerate: umbilical direction across the whole bracket\n");
    }
    for r in &report.roots {
        out.push_str(&format!("root {} (residual {})\n", format_float(r.value), format_float(r.residual)));
    }
    out
}

fn locus(common: &Common, free: &str, bracket: &str) -> Result<u8> {
    let cfg = common.build()?;
    let (lo, hi) = bracket
        .split_once(':')
        .with_context(|| format!("--bracket expects lo:hi, got {bracket:?}"))?;
    let lo: f64 = lo.trim().parse().context("--bracket lower bound")?;
    let hi: f64 = hi.trim().parse().context("--bracket upper bound")?;
    if !(lo < hi) {
        bail!("--bracket needs lo < hi");
    }
    match find_umbilical_locus(&cfg, free, (lo, hi)) {
        Ok(report) => {
            let text = match cfg.report {
                ReportFormat::Text => locus_text(&report),
                ReportFormat::Csv => {
                    let mut s = format!("{free},residual,method\n");
                    for r in &report.roots {
                        s.push_str(&format!("{},{},{:?}\n", format_float(r.value), format_float(r.residual), r.method));
                    }
                    s
                }
                ReportFormat::Json => serde_json::to_string_pretty(&report)? + "\n",
            };
            common.emit(&text)?;
            Ok(0)
        }
        Err(e @ LocusError::NoRoot { .. }) => {
            eprintln!("{e}");
            Ok(1)
        }
        Err(e) => Err(e.into()),
    }
}

fn curvature(common: &Common) -> Result<u8> {
    let cfg = common.build()?;
    let resolved = cfg.resolve()?;
    let (surface, u, coords) = resolved.locate(&Default::default(), &cfg.point)?;
    match gaussian_curvature_2d(&resolved.metric, &surface, &ChartPoint::surface(u)) {
        Ok(k) => {
            let text = match cfg.report {
                ReportFormat::Json => serde_json::to_string_pretty(&json!({ "coords": coords, "gaussian_curvature": k }))? + "\n",
                _ => format_float(k) + "\n",
            };
            common.emit(&text)?;
            Ok(0)
        }
        Err(e) if e.is_domain() => {
            eprintln!("{e}");
            Ok(2)
        }
        Err(e) => Err(e.into()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Classify(common) => scan(common, None),
        Command::Scan { common, grid } => scan(common, Some(grid.as_deref().unwrap_or(""))),
        Command::Locus { common, free, bracket } => locus(common, free, bracket),
        Command::Curvature(common) => curvature(common),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
