//! Grid scans: one classification record per grid point plus a summary.

use indexmap::IndexMap;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::catalog::Params;
use crate::config::{ConfigError, Resolved, ScanConfig};
use crate::error::GeometryError;
use crate::extrinsic::ExtrinsicState;
use crate::immersion::Immersion;
use crate::intrinsic::gaussian_curvature_2d;
use crate::locus::{find_umbilical_locus, LocusReport};
use crate::metric::ChartPoint;
use crate::umbilic::{classify, CausalCharacter, Tristate, TrappedStatus};

/// Everything reported about one grid point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassificationRecord {
    pub coords: IndexMap<String, f64>,
    pub theta1: f64,
    pub theta2: f64,
    pub sigma1: f64,
    pub sigma2: f64,
    /// Whether `sigma1`, `sigma2` carry the sign fixed by the shared shear.
    pub sigma_signed: bool,
    pub g_hh: f64,
    pub tr_b: f64,
    pub tr_j: f64,
    pub mean_curvature: Vec<f64>,
    pub totally_umbilical: bool,
    pub direction_exists: bool,
    pub umbilical_direction: Option<Vec<f64>>,
    pub causal_character: CausalCharacter,
    pub g: Vec<f64>,
    pub a_tilde: Option<Vec<Vec<f64>>>,
    pub pseudo_umbilical: bool,
    pub ortho_umbilical: bool,
    pub subgeodesic: Tristate,
    pub trapped_status: TrappedStatus,
    pub null_expansions: Option<[f64; 2]>,
    pub gaussian_curvature: Option<f64>,
    pub residuals: IndexMap<String, f64>,
    pub max_residual: f64,
    pub diagnostics: Vec<String>,
}

/// Why a point produced no record.
#[derive(Debug, Clone, PartialEq)]
pub enum PointError {
    /// Outside the chart or the surface family; skipped.
    Domain(String),
    Hard(String),
}

impl From<GeometryError> for PointError {
    fn from(e: GeometryError) -> Self {
        if e.is_domain() {
            PointError::Domain(e.to_string())
        } else {
            PointError::Hard(e.to_string())
        }
    }
}

impl From<ConfigError> for PointError {
    fn from(e: ConfigError) -> Self {
        PointError::Domain(e.to_string())
    }
}

impl std::fmt::Display for PointError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PointError::Domain(m) => write!(f, "skipped: {m}"),
            PointError::Hard(m) => write!(f, "failed: {m}"),
        }
    }
}

/// Extrinsic state at grid values `values` (coordinates and/or family
/// parameters), with unscanned coordinates taken from the config.
pub fn state_at(config: &ScanConfig, resolved: &Resolved, values: &Params) -> Result<(ExtrinsicState, Params, Option<f64>), PointError> {
    let (surface, u, coords) = resolved.locate(values, &config.point)?;
    let p = ChartPoint::surface(u);
    let state = ExtrinsicState::compute(&resolved.metric, &surface, &p, &config.settings())?;
    let curvature = if surface.surface_dim() == 2 {
        gaussian_curvature_2d(&resolved.metric, &surface, &p).ok()
    } else {
        None
    };
    Ok((state, coords, curvature))
}

pub fn classify_point(config: &ScanConfig, resolved: &Resolved, values: &Params) -> Result<ClassificationRecord, PointError> {
    let (state, coords, gaussian_curvature) = state_at(config, resolved, values)?;
    let verdict = classify(&state)?;
    let n = state.dim();
    let f = config.mean_curvature_convention.factor(n);
    let vec = |v: &nalgebra::DVector<f64>| v.iter().copied().collect::<Vec<_>>();
    Ok(ClassificationRecord {
        coords,
        theta1: state.expansions[0],
        theta2: state.expansions[1],
        sigma1: verdict.sigma[0],
        sigma2: verdict.sigma[1],
        sigma_signed: verdict.sigma_signed,
        g_hh: state.mean_curvature.norm_sq * f * f,
        tr_b: state.casorati.trace(),
        tr_j: state.j_operator.trace(),
        mean_curvature: state.mean_curvature.components.iter().map(|c| c * f).collect(),
        totally_umbilical: verdict.totally_umbilical,
        direction_exists: verdict.direction_exists,
        umbilical_direction: verdict.umbilical_direction.as_ref().map(|d| vec(&d.components)),
        causal_character: verdict.causal_character,
        g: vec(&verdict.g.components),
        a_tilde: verdict.a_tilde.as_ref().map(|a| {
            let m = a.matrix();
            (0..m.nrows()).map(|i| m.row(i).iter().copied().collect()).collect()
        }),
        pseudo_umbilical: verdict.pseudo_umbilical,
        ortho_umbilical: verdict.ortho_umbilical,
        subgeodesic: verdict.subgeodesic,
        trapped_status: verdict.trapped_status,
        null_expansions: verdict.null_expansions,
        gaussian_curvature,
        max_residual: verdict.max_consistency_residual(),
        residuals: verdict.residuals.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
        diagnostics: verdict.diagnostics,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerdictCounts {
    pub totally_umbilical: usize,
    pub direction_exists: usize,
    pub pseudo_umbilical: usize,
    pub ortho_umbilical: usize,
    pub subgeodesic: usize,
    pub causal_character: IndexMap<CausalCharacter, usize>,
    pub trapped_status: IndexMap<TrappedStatus, usize>,
}

impl VerdictCounts {
    fn tally(records: &[ClassificationRecord]) -> Self {
        let mut causal: IndexMap<CausalCharacter, usize> = [
            CausalCharacter::Timelike,
            CausalCharacter::Spacelike,
            CausalCharacter::Null,
            CausalCharacter::Undefined,
        ]
        .into_iter()
        .map(|c| (c, 0))
        .collect();
        let mut trapped: IndexMap<TrappedStatus, usize> = [
            TrappedStatus::Trapped,
            TrappedStatus::MarginallyTrapped,
            TrappedStatus::Untrapped,
            TrappedStatus::Minimal,
            TrappedStatus::PastTrapped,
            TrappedStatus::PastMarginallyTrapped,
            TrappedStatus::NotApplicable,
        ]
        .into_iter()
        .map(|c| (c, 0))
        .collect();
        let count = |f: fn(&ClassificationRecord) -> bool| records.iter().filter(|r| f(r)).count();
        for r in records {
            *causal.get_mut(&r.causal_character).expect("all characters listed") += 1;
            *trapped.entry(r.trapped_status).or_default() += 1;
        }
        Self {
            totally_umbilical: count(|r| r.totally_umbilical),
            direction_exists: count(|r| r.direction_exists),
            pseudo_umbilical: count(|r| r.pseudo_umbilical),
            ortho_umbilical: count(|r| r.ortho_umbilical),
            subgeodesic: count(|r| r.subgeodesic == Tristate::True),
            causal_character: causal,
            trapped_status: trapped,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointFailure {
    pub coords: Params,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanSummary {
    pub points: usize,
    pub classified: usize,
    pub counts: VerdictCounts,
    /// Common trapped status of all classified points, `mixed` otherwise.
    pub region_trapped_status: Option<TrappedStatus>,
    /// Subgeodesic over the region: true or false when all points agree.
    pub region_subgeodesic: Tristate,
    pub max_residuals: IndexMap<String, f64>,
    pub skipped: Vec<PointFailure>,
    pub failed: Vec<PointFailure>,
    /// Umbilical loci along the axis of a one-dimensional grid.
    pub loci: Vec<LocusReport>,
    pub exit_code: i32,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanReport {
    pub config: ScanConfig,
    pub records: Vec<ClassificationRecord>,
    pub summary: ScanSummary,
}

fn summarize(config: &ScanConfig, points: &[Params], results: Vec<Result<ClassificationRecord, PointError>>) -> (Vec<ClassificationRecord>, ScanSummary) {
    let mut records = Vec::new();
    let mut skipped = Vec::new();
    let mut failed = Vec::new();
    for (p, r) in points.iter().zip(results) {
        match r {
            Ok(rec) => records.push(rec),
            Err(PointError::Domain(reason)) => skipped.push(PointFailure { coords: p.clone(), reason }),
            Err(PointError::Hard(reason)) => failed.push(PointFailure { coords: p.clone(), reason }),
        }
    }
    let mut max_residuals: IndexMap<String, f64> = IndexMap::new();
    for rec in &records {
        for (k, v) in &rec.residuals {
            let slot = max_residuals.entry(k.clone()).or_insert(0.0);
            *slot = slot.max(*v);
        }
    }
    let region_trapped_status = records.first().map(|first| {
        if records.iter().all(|r| r.trapped_status == first.trapped_status) {
            first.trapped_status
        } else {
            TrappedStatus::Mixed
        }
    });
    let region_subgeodesic = match records.first() {
        Some(first) if records.iter().all(|r| r.subgeodesic == first.subgeodesic) => first.subgeodesic,
        _ => Tristate::Indeterminate,
    };
    let loci = match config.grid.as_slice() {
        [axis] => {
            let mut sub = config.clone();
            sub.grid.clear();
            find_umbilical_locus(&sub, &axis.name, (axis.start, axis.stop))
                .ok()
                .into_iter()
                .collect()
        }
        _ => Vec::new(),
    };
    let exit_code = if !failed.is_empty() {
        1
    } else if !skipped.is_empty() {
        2
    } else {
        0
    };
    let summary = ScanSummary {
        points: points.len(),
        classified: records.len(),
        counts: VerdictCounts::tally(&records),
        region_trapped_status,
        region_subgeodesic,
        max_residuals,
        skipped,
        failed,
        loci,
        exit_code,
    };
    (records, summary)
}

/// Classifies every grid point. Records keep grid order whatever the number
/// of workers.
pub fn run_scan(config: &ScanConfig) -> Result<ScanReport, ConfigError> {
    let resolved = config.resolve()?;
    let points = config.grid_points();
    let work = || -> Vec<_> {
        points
            .par_iter()
            .map(|p| classify_point(config, &resolved, p))
            .collect()
    };
    let results = match config.workers {
        Some(w) => rayon::ThreadPoolBuilder::new()
            .num_threads(w)
            .build()
            .map_err(|e| ConfigError::new("workers", e.to_string()))?
            .install(work),
        None => work(),
    };
    let (records, summary) = summarize(config, &points, results);
    Ok(ScanReport {
        config: config.clone(),
        records,
        summary,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{parse_grid, parse_params, MeanCurvatureConvention};

    fn sphere_config(grid: &str) -> ScanConfig {
        ScanConfig {
            metric: "euclidean4".into(),
            surface: "round_sphere".into(),
            surface_params: parse_params("sparam", "R=2").unwrap(),
            grid: parse_grid(grid).unwrap(),
            ..Default::default()
        }
    }

    #[test]
    fn sphere_scan_all_totally_umbilical() {
        let report = run_scan(&sphere_config("theta=0.2:2.9:5,phi=0:6:3")).unwrap();
        assert_eq!(report.records.len(), 15);
        assert_eq!(report.summary.counts.totally_umbilical, 15);
        assert_eq!(report.summary.exit_code, 0);
        assert_eq!(report.summary.region_trapped_status, Some(TrappedStatus::NotApplicable));
        for r in &report.records {
            assert!((r.gaussian_curvature.unwrap() - 0.25).abs() < 1e-9);
        }
    }

    #[test]
    fn worker_count_does_not_change_records() {
        let mut cfg = sphere_config("theta=0.2:2.9:7");
        cfg.workers = Some(1);
        let one = run_scan(&cfg).unwrap();
        cfg.workers = Some(3);
        let three = run_scan(&cfg).unwrap();
        assert_eq!(one.records, three.records);
        assert_eq!(one.summary, three.summary);
    }

    #[test]
    fn domain_skips_set_exit_code_two() {
        let cfg = ScanConfig {
            metric: "kerr_kerr_coords".into(),
            metric_params: parse_params("param", "m=1,a=0.5").unwrap(),
            surface: "const_vr_kerr".into(),
            surface_params: parse_params("sparam", "v=0,r=3").unwrap(),
            grid: parse_grid("theta=0:1:3").unwrap(),
            ..Default::default()
        };
        let report = run_scan(&cfg).unwrap();
        assert_eq!(report.summary.skipped.len(), 1);
        assert_eq!(report.records.len(), 2);
        assert_eq!(report.summary.exit_code, 2);
    }

    #[test]
    fn physics_convention_rescales_mean_curvature() {
        let mut cfg = sphere_config("theta=0.5:1.0:2");
        let paper = run_scan(&cfg).unwrap();
        cfg.mean_curvature_convention = MeanCurvatureConvention::Physics;
        let physics = run_scan(&cfg).unwrap();
        let (p, q) = (&paper.records[0], &physics.records[0]);
        assert!((q.g_hh - 4.0 * p.g_hh).abs() < 1e-12);
        assert_eq!(p.theta1, q.theta1);
    }
}
