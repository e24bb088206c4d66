//! Locating where an umbilical direction appears along a one-parameter
//! family of points.
//!
//! For surfaces the signed surrogate is the off-diagonal entry of
//! `[A_1, A_2]` divided by the larger shear norm; its magnitude equals the
//! commutator residual, so sign changes bracket roots. In higher dimension
//! only the unsigned remainder of condition (v) is available and roots are
//! found as minima.

use serde::{Deserialize, Serialize};

use crate::catalog::Params;
use crate::config::{ConfigError, GridAxis, ScanConfig};
use crate::immersion::Immersion;
use crate::rootfind::{bisect, golden_min};
use crate::scan::{state_at, PointError};
use crate::umbilic::direction_exists;

/// Samples taken across the bracket before refining.
pub const LOCUS_SAMPLES: usize = 64;
/// Bracket width at which bisection and golden-section search stop.
pub const LOCUS_XTOL: f64 = 1e-10;
/// Roots closer than this are merged.
const DEDUP: f64 = 1e-7;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LocusError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("no umbilical locus for {param} in [{lo}, {hi}]")]
    NoRoot { param: String, lo: f64, hi: f64 },
    #[error("{0}")]
    Hard(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RootMethod {
    SignChange,
    Minimum,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocusRoot {
    pub value: f64,
    /// Decisive existence residual at the root.
    pub residual: f64,
    pub threshold: f64,
    pub method: RootMethod,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocusReport {
    pub param: String,
    pub bracket: [f64; 2],
    /// `commutator` for surfaces, `condition_v` otherwise.
    pub surrogate: String,
    /// Every valid sample admits an umbilical direction, so the whole
    /// bracket is locus and no isolated root is reported.
    pub degenerate: bool,
    pub roots: Vec<LocusRoot>,
    pub skipped_samples: usize,
}

struct Probe {
    /// Signed surrogate (surfaces) or unsigned residual.
    value: f64,
    exists: bool,
    residual: f64,
    threshold: f64,
}

pub fn find_umbilical_locus(config: &ScanConfig, param: &str, bracket: (f64, f64)) -> Result<LocusReport, LocusError> {
    let (lo, hi) = bracket;
    let mut probe_cfg = config.clone();
    probe_cfg.grid = vec![GridAxis {
        name: param.to_string(),
        start: lo,
        stop: hi,
        count: LOCUS_SAMPLES,
    }];
    let resolved = probe_cfg.resolve()?;
    let signed = resolved.surface.surface_dim() == 2;

    let probe = |x: f64| -> Result<Probe, PointError> {
        let mut values = Params::new();
        values.insert(param.to_string(), x);
        let (state, _, _) = state_at(config, &resolved, &values)?;
        let report = direction_exists(&state);
        let smax = state.shear_norms[0].max(state.shear_norms[1]);
        let decisive = if signed { report.commutator } else { report.condition_v };
        let value = if signed {
            let c = state.shape[0].commutator(&state.shape[1])[(0, 1)];
            if smax > 0.0 {
                c / smax
            } else {
                c
            }
        } else {
            decisive.residual
        };
        Ok(Probe {
            value,
            exists: report.exists,
            residual: decisive.residual,
            threshold: decisive.threshold,
        })
    };
    let surrogate = |x: f64| probe(x).ok().map(|p| if signed { p.value } else { p.value.abs() });

    let mut samples = Vec::with_capacity(LOCUS_SAMPLES);
    let mut skipped = 0;
    for x in probe_cfg.grid[0].values() {
        match probe(x) {
            Ok(p) => samples.push((x, p)),
            Err(PointError::Domain(_)) => skipped += 1,
            Err(PointError::Hard(m)) => return Err(LocusError::Hard(m)),
        }
    }
    let mut report = LocusReport {
        param: param.to_string(),
        bracket: [lo, hi],
        surrogate: if signed { "commutator" } else { "condition_v" }.to_string(),
        degenerate: false,
        roots: Vec::new(),
        skipped_samples: skipped,
    };
    if !samples.is_empty() && samples.iter().all(|(_, p)| p.exists) {
        report.degenerate = true;
        return Ok(report);
    }

    let accept = |x: f64, method: RootMethod, roots: &mut Vec<LocusRoot>| {
        if let Ok(p) = probe(x) {
            if p.exists && roots.iter().all(|r| (r.value - x).abs() > DEDUP) {
                roots.push(LocusRoot {
                    value: x,
                    residual: p.residual,
                    threshold: p.threshold,
                    method,
                });
            }
        }
    };

    let mut roots = Vec::new();
    for w in samples.windows(2) {
        let ((x0, p0), (x1, p1)) = (&w[0], &w[1]);
        // a sign flip between two admissible samples is noise on a locus
        if p0.exists && p1.exists {
            continue;
        }
        if signed && p0.value.signum() != p1.value.signum() && p0.value != 0.0 && p1.value != 0.0 {
            if let Some(x) = bisect(surrogate, *x0, *x1, LOCUS_XTOL) {
                accept(x, RootMethod::SignChange, &mut roots);
            }
        }
    }
    for (i, (x, p)) in samples.iter().enumerate() {
        if p.value == 0.0 {
            accept(*x, RootMethod::SignChange, &mut roots);
            continue;
        }
        let a = p.value.abs();
        let left = i.checked_sub(1).map(|j| &samples[j]);
        let right = samples.get(i + 1);
        if p.exists && left.is_none_or(|(_, q)| q.exists) && right.is_none_or(|(_, q)| q.exists) {
            continue;
        }
        let below = |n: Option<&(f64, Probe)>| n.is_none_or(|(_, q)| a <= q.value.abs());
        let crosses = |n: Option<&(f64, Probe)>| n.is_some_and(|(_, q)| signed && q.value.signum() != p.value.signum());
        if below(left) && below(right) && !crosses(left) && !crosses(right) {
            let a0 = left.map_or(*x, |(xl, _)| *xl);
            let a1 = right.map_or(*x, |(xr, _)| *xr);
            if a1 > a0 {
                let abs_surrogate = |t: f64| surrogate(t).map(f64::abs);
                if let Some((xm, _)) = golden_min(abs_surrogate, a0, a1, LOCUS_XTOL) {
                    accept(xm, RootMethod::Minimum, &mut roots);
                }
            }
        }
    }
    roots.sort_by(|a, b| a.value.total_cmp(&b.value));
    if roots.is_empty() {
        return Err(LocusError::NoRoot {
            param: param.to_string(),
            lo,
            hi,
        });
    }
    report.roots = roots;
    Ok(report)
}
