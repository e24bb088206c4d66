//! Numerical thresholds shared by every stage of the pipeline.

use serde::{Deserialize, Serialize};

/// Environment variable overriding the relative umbilicity threshold.
pub const TOL_UMB_ENV: &str = "SUBSHEAR_TOL_UMB";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    /// Symmetry defect accepted for self-adjoint operators (relative).
    pub sym: f64,
    /// Metric-compatibility residual of reassembled Christoffels.
    pub chris: f64,
    /// Jacobi convergence and orthogonality target.
    pub eig: f64,
    /// Inverse condition number below which a metric counts as singular.
    pub inv: f64,
    /// Relative factor of the "zero operator" threshold; the absolute
    /// threshold is `umb * max(1, |A_1| + |A_2|)`.
    pub umb: f64,
    /// Identity and compatibility residual threshold.
    pub w: f64,
    /// Smallest eigenvalue accepted for positive-definite and nondegenerate
    /// forms.
    pub pd: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            sym: 1e-10,
            chris: 1e-8,
            eig: 1e-12,
            inv: 1e-12,
            umb: 1e-8,
            w: 1e-9,
            pd: 1e-12,
        }
    }
}

impl Tolerances {
    /// Defaults, with `umb` taken from `SUBSHEAR_TOL_UMB` when set.
    pub fn from_env() -> Result<Self, String> {
        let mut tol = Self::default();
        if let Ok(raw) = std::env::var(TOL_UMB_ENV) {
            let v: f64 = raw
                .trim()
                .parse()
                .map_err(|_| format!("{TOL_UMB_ENV}={raw:?} is not a number"))?;
            tol.set("umb", v)?;
        }
        Ok(tol)
    }

    pub fn set(&mut self, key: &str, value: f64) -> Result<(), String> {
        if !(value > 0.0 && value.is_finite()) {
            return Err(format!("tolerance {key} must be positive, got {value}"));
        }
        let slot = match key {
            "sym" => &mut self.sym,
            "chris" => &mut self.chris,
            "eig" => &mut self.eig,
            "inv" => &mut self.inv,
            "umb" => &mut self.umb,
            "w" => &mut self.w,
            "pd" => &mut self.pd,
            other => return Err(format!("unknown tolerance key {other:?}")),
        };
        *slot = value;
        Ok(())
    }

    pub fn validate(&self) -> Result<(), String> {
        for (k, v) in [
            ("sym", self.sym),
            ("chris", self.chris),
            ("eig", self.eig),
            ("inv", self.inv),
            ("umb", self.umb),
            ("w", self.w),
            ("pd", self.pd),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(format!("tolerance {k} must be positive, got {v}"));
            }
        }
        Ok(())
    }

    /// Zero-operator threshold for an extrinsic scale `|A_1| + |A_2|`.
    pub fn umbilic(&self, scale: f64) -> f64 {
        self.umb * scale.max(1.0)
    }

    /// Threshold for operators quadratic in the extrinsic curvature (B, J).
    pub fn umbilic_sq(&self, scale: f64) -> f64 {
        self.umb * (scale * scale).max(1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_match_documented_values() {
        let t = Tolerances::default();
        assert_eq!(t.sym, 1e-10);
        assert_eq!(t.chris, 1e-8);
        assert_eq!(t.eig, 1e-12);
        assert_eq!(t.inv, 1e-12);
        assert_eq!(t.umb, 1e-8);
    }

    #[test]
    fn rejects_bad_overrides() {
        let mut t = Tolerances::default();
        assert!(t.set("umb", -1.0).is_err());
        assert!(t.set("nope", 1.0).is_err());
        t.set("w", 1e-7).unwrap();
        assert_eq!(t.w, 1e-7);
    }

    #[test]
    fn umbilic_threshold_scales_with_curvature() {
        let t = Tolerances::default();
        assert_eq!(t.umbilic(0.1), 1e-8);
        assert_eq!(t.umbilic(50.0), 5e-7);
    }
}
