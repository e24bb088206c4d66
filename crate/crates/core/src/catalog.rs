//! Built-in ambient metrics and surface families.
//!
//! Kerr-type metrics use ingoing Kerr coordinates `(v, r, θ, φ)`. Their time
//! orientation is declared through the ingoing null vector `−∂_r`, which is
//! future-directed everywhere on the chart, including inside the horizons
//! where `∂_v` fails to be timelike.

use std::f64::consts::PI;
use std::fmt;

use indexmap::IndexMap;
use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::dual::Real;
use crate::error::{GeometryError, Result};
use crate::immersion::Immersion;
use crate::metric::{MetricField, Signature};

pub const KERR_RHO_MIN: f64 = 1e-6;
pub const KERR_THETA_MIN: f64 = 1e-3;

/// Named parameters as given on the command line or in a config file.
pub type Params = IndexMap<String, f64>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("{0}")]
pub struct CatalogError(pub String);

fn reject_unknown(params: &Params, allowed: &[&str]) -> Result<(), CatalogError> {
    match params.keys().find(|k| !allowed.contains(&k.as_str())) {
        Some(bad) => Err(CatalogError(format!(
            "unknown parameter {bad:?} (expected one of {allowed:?})"
        ))),
        None => Ok(()),
    }
}

fn take(params: &Params, allowed: &[&str], key: &str, default: Option<f64>) -> Result<f64, CatalogError> {
    reject_unknown(params, allowed)?;
    match (params.get(key), default) {
        (Some(&v), _) if v.is_finite() => Ok(v),
        (Some(v), _) => Err(CatalogError(format!("parameter {key} must be finite, got {v}"))),
        (None, Some(d)) => Ok(d),
        (None, None) => Err(CatalogError(format!("missing parameter {key}"))),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "name", rename_all = "snake_case")]
pub enum MetricSpec {
    Euclidean4,
    /// `dr² + r²dφ² + dz² + dw²`.
    Euclidean4Polar,
    Minkowski4,
    /// Flat metric of dimension `dim` with the first `q` coordinates timelike.
    #[serde(rename = "minkowskiN")]
    MinkowskiN { dim: usize, q: usize },
    SchwarzschildKerrCoords { m: f64 },
    KerrKerrCoords { m: f64, a: f64 },
    /// `δ_ab (1 + c x_a²) + c sin x_a sin x_b`, positive definite for `c ≥ 0`.
    RiemannianTest { c: f64 },
}

impl MetricSpec {
    pub const NAMES: [&'static str; 7] = [
        "euclidean4",
        "euclidean4_polar",
        "minkowski4",
        "minkowskiN",
        "schwarzschild_kerr_coords",
        "kerr_kerr_coords",
        "riemannian_test",
    ];

    pub fn from_name(name: &str, params: &Params) -> Result<Self, CatalogError> {
        let spec = match name {
            "euclidean4" => {
                reject_unknown(params, &[])?;
                MetricSpec::Euclidean4
            }
            "euclidean4_polar" => {
                reject_unknown(params, &[])?;
                MetricSpec::Euclidean4Polar
            }
            "minkowski4" => {
                reject_unknown(params, &[])?;
                MetricSpec::Minkowski4
            }
            "minkowskiN" => {
                let dim = take(params, &["n", "q"], "n", None)?;
                let q = take(params, &["n", "q"], "q", Some(1.0))?;
                if dim.fract() != 0.0 || q.fract() != 0.0 || dim < 3.0 || q < 0.0 || q > dim {
                    return Err(CatalogError(format!("minkowskiN needs integers n ≥ 3, 0 ≤ q ≤ n; got n={dim}, q={q}")));
                }
                MetricSpec::MinkowskiN {
                    dim: dim as usize,
                    q: q as usize,
                }
            }
            "schwarzschild_kerr_coords" | "schwarzschild" => MetricSpec::SchwarzschildKerrCoords {
                m: take(params, &["m"], "m", Some(1.0))?,
            },
            "kerr_kerr_coords" | "kerr" => MetricSpec::KerrKerrCoords {
                m: take(params, &["m", "a"], "m", Some(1.0))?,
                a: take(params, &["m", "a"], "a", Some(0.0))?,
            },
            "riemannian_test" => MetricSpec::RiemannianTest {
                c: take(params, &["c"], "c", Some(0.3))?,
            },
            other => {
                return Err(CatalogError(format!(
                    "unknown metric {other:?} (expected one of {:?})",
                    Self::NAMES
                )))
            }
        };
        spec.validate()?;
        Ok(spec)
    }

    fn validate(&self) -> Result<(), CatalogError> {
        match *self {
            MetricSpec::SchwarzschildKerrCoords { m } | MetricSpec::KerrKerrCoords { m, .. } if m <= 0.0 => {
                Err(CatalogError(format!("mass m must be positive, got {m}")))
            }
            MetricSpec::RiemannianTest { c } if c < 0.0 => {
                Err(CatalogError(format!("riemannian_test needs c ≥ 0, got {c}")))
            }
            _ => Ok(()),
        }
    }

    /// Kerr parameters `(m, a)` for the Kerr-type entries.
    pub fn kerr_params(&self) -> Option<(f64, f64)> {
        match *self {
            MetricSpec::SchwarzschildKerrCoords { m } => Some((m, 0.0)),
            MetricSpec::KerrKerrCoords { m, a } => Some((m, a)),
            _ => None,
        }
    }

    /// Label of the coordinate used as time, if any.
    pub fn time_label(&self) -> Option<&'static str> {
        match self {
            MetricSpec::Minkowski4 => Some("t"),
            MetricSpec::MinkowskiN { q: 1, .. } => Some("x0"),
            MetricSpec::SchwarzschildKerrCoords { .. } | MetricSpec::KerrKerrCoords { .. } => Some("v"),
            _ => None,
        }
    }

    /// A coordinate box of admissible points, used for random sampling.
    pub fn sample_box(&self) -> Vec<(f64, f64)> {
        match *self {
            MetricSpec::Euclidean4 | MetricSpec::Minkowski4 => vec![(-3.0, 3.0); 4],
            MetricSpec::Euclidean4Polar => vec![(0.2, 4.0), (-PI, PI), (-3.0, 3.0), (-3.0, 3.0)],
            MetricSpec::MinkowskiN { dim, .. } => vec![(-3.0, 3.0); dim],
            MetricSpec::RiemannianTest { .. } => vec![(-2.0, 2.0); 4],
            MetricSpec::SchwarzschildKerrCoords { m } | MetricSpec::KerrKerrCoords { m, .. } => vec![
                (-5.0, 5.0),
                (0.1 * m, 6.0 * m),
                (0.05, PI - 0.05),
                (-PI, PI),
            ],
        }
    }
}

impl fmt::Display for MetricSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MetricSpec::Euclidean4 => write!(f, "euclidean4"),
            MetricSpec::Euclidean4Polar => write!(f, "euclidean4_polar"),
            MetricSpec::Minkowski4 => write!(f, "minkowski4"),
            MetricSpec::MinkowskiN { dim, q } => write!(f, "minkowskiN(n={dim}, q={q})"),
            MetricSpec::SchwarzschildKerrCoords { m } => write!(f, "schwarzschild_kerr_coords(m={m})"),
            MetricSpec::KerrKerrCoords { m, a } => write!(f, "kerr_kerr_coords(m={m}, a={a})"),
            MetricSpec::RiemannianTest { c } => write!(f, "riemannian_test(c={c})"),
        }
    }
}

fn diagonal<S: Real>(d: &[f64]) -> Vec<S> {
    let n = d.len();
    (0..n * n)
        .map(|k| S::from_f64(if k / n == k % n { d[k / n] } else { 0.0 }))
        .collect()
}

/// Kerr metric components in Kerr coordinates, row-major.
pub fn kerr_components<S: Real>(m: f64, a: f64, x: &[S]) -> Vec<S> {
    let r = x[1].clone();
    let (s, c) = (x[2].clone().sin(), x[2].clone().cos());
    let s2 = s.square();
    let r2 = r.clone().square();
    let rho2 = r2.clone() + c.square() * (a * a);
    let delta = r2.clone() - r.clone() * (2.0 * m) + a * a;
    let mr_rho2 = r * m / rho2.clone();

    let zero = S::from_f64(0.0);
    let g_vv = mr_rho2.clone() * 2.0 - 1.0;
    let g_vr = S::from_f64(1.0);
    let g_vp = -(mr_rho2 * s2.clone() * (2.0 * a));
    let g_rp = -(s2.clone() * a);
    let g_tt = rho2.clone();
    let g_pp = ((r2 + a * a).square() - delta * s2.clone() * (a * a)) * s2 / rho2;
    vec![
        g_vv,
        g_vr.clone(),
        zero.clone(),
        g_vp.clone(),
        g_vr,
        zero.clone(),
        zero.clone(),
        g_rp.clone(),
        zero.clone(),
        zero.clone(),
        g_tt,
        zero.clone(),
        g_vp,
        g_rp,
        zero.clone(),
        g_pp,
    ]
}

fn kerr_domain(a: f64, x: &[f64]) -> Result<()> {
    let (r, theta) = (x[1], x[2]);
    let rho = (r * r + a * a * theta.cos().powi(2)).sqrt();
    if !(rho > KERR_RHO_MIN) {
        return Err(GeometryError::domain(x, format!("ρ = {rho:e} at or below ρ_min = {KERR_RHO_MIN:e}")));
    }
    if !(KERR_THETA_MIN..=PI - KERR_THETA_MIN).contains(&theta) {
        return Err(GeometryError::domain(x, format!("θ = {theta} within {KERR_THETA_MIN:e} of the axis")));
    }
    Ok(())
}

impl MetricField for MetricSpec {
    fn dim(&self) -> usize {
        match self {
            MetricSpec::MinkowskiN { dim, .. } => *dim,
            _ => 4,
        }
    }

    fn signature(&self) -> Signature {
        match *self {
            MetricSpec::Euclidean4 | MetricSpec::Euclidean4Polar | MetricSpec::RiemannianTest { .. } => {
                Signature::riemannian(4)
            }
            MetricSpec::MinkowskiN { dim, q } => Signature::new(q, dim - q),
            _ => Signature::lorentzian(4),
        }
    }

    fn check_domain(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dim() {
            return Err(GeometryError::DimensionMismatch {
                expected: self.dim(),
                found: x.len(),
            });
        }
        if x.iter().any(|c| !c.is_finite()) {
            return Err(GeometryError::domain(x, "non-finite coordinate"));
        }
        match *self {
            MetricSpec::Euclidean4Polar if x[0] <= 0.0 => Err(GeometryError::domain(x, "polar radius must be positive")),
            MetricSpec::SchwarzschildKerrCoords { .. } => kerr_domain(0.0, x),
            MetricSpec::KerrKerrCoords { a, .. } => kerr_domain(a, x),
            _ => Ok(()),
        }
    }

    fn components<S: Real>(&self, x: &[S]) -> Vec<S> {
        match *self {
            MetricSpec::Euclidean4 => diagonal(&[1.0; 4]),
            MetricSpec::Minkowski4 => diagonal(&[-1.0, 1.0, 1.0, 1.0]),
            MetricSpec::MinkowskiN { dim, q } => {
                let d: Vec<f64> = (0..dim).map(|i| if i < q { -1.0 } else { 1.0 }).collect();
                diagonal(&d)
            }
            MetricSpec::Euclidean4Polar => {
                let mut g = diagonal::<S>(&[1.0; 4]);
                g[5] = x[0].clone().square();
                g
            }
            MetricSpec::SchwarzschildKerrCoords { m } => kerr_components(m, 0.0, x),
            MetricSpec::KerrKerrCoords { m, a } => kerr_components(m, a, x),
            MetricSpec::RiemannianTest { c } => {
                let sines: Vec<S> = x.iter().map(|xi| xi.clone().sin()).collect();
                (0..16)
                    .map(|k| {
                        let (i, j) = (k / 4, k % 4);
                        let coupling = sines[i].clone() * sines[j].clone() * c;
                        if i == j {
                            coupling + x[i].clone().square() * c + 1.0
                        } else {
                            coupling
                        }
                    })
                    .collect()
            }
        }
    }

    fn future_reference(&self, _x: &[f64]) -> Option<DVector<f64>> {
        match *self {
            MetricSpec::Minkowski4 => Some(DVector::from_vec(vec![1.0, 0.0, 0.0, 0.0])),
            MetricSpec::MinkowskiN { dim, q: 1 } => {
                let mut t = DVector::zeros(dim);
                t[0] = 1.0;
                Some(t)
            }
            MetricSpec::SchwarzschildKerrCoords { .. } | MetricSpec::KerrKerrCoords { .. } => {
                Some(DVector::from_vec(vec![0.0, -1.0, 0.0, 0.0]))
            }
            _ => None,
        }
    }
}

/// Heights of the graph family: `f(x, y) = a x² + b x y + c y² + s sin(x + y)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GraphHeight {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub s: f64,
}

impl GraphHeight {
    fn eval<S: Real>(&self, x: &S, y: &S) -> S {
        x.clone().square() * self.a
            + x.clone() * y.clone() * self.b
            + y.clone().square() * self.c
            + (x.clone() + y.clone()).sin() * self.s
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum SurfaceSpec {
    /// `(θ, φ) ↦ (v, r, θ, φ)` in Kerr coordinates.
    ConstVrKerr { v: f64, r: f64 },
    /// `(θ, φ) ↦ (t0, R sinθ cosφ, R sinθ sinφ, R cosθ)`.
    RoundSphere { radius: f64, t0: f64 },
    /// `u ↦ (0, 0, u_1, …, u_n)` in an ambient space of dimension `n + 2`.
    FlatPlane { ambient_dim: usize },
    /// `(x, y) ↦ (f_1(x, y), f_2(x, y), x, y)`.
    Graph { f1: GraphHeight, f2: GraphHeight },
    /// `(u, v) ↦ (r1 cos u, r1 sin u, r2 cos v, r2 sin v)`.
    TorusFlatAmbient { r1: f64, r2: f64 },
}

impl SurfaceSpec {
    pub const NAMES: [&'static str; 5] = ["const_vr_kerr", "round_sphere", "flat_plane", "graph", "torus_flat_ambient"];

    pub fn from_name(name: &str, params: &Params) -> Result<Self, CatalogError> {
        let spec = match name.replace('-', "_").as_str() {
            "const_vr_kerr" | "const_vr" => SurfaceSpec::ConstVrKerr {
                v: take(params, &["v", "r"], "v", Some(0.0))?,
                r: take(params, &["v", "r"], "r", None)?,
            },
            "round_sphere" | "sphere" => SurfaceSpec::RoundSphere {
                radius: take(params, &["R", "t0"], "R", Some(1.0))?,
                t0: take(params, &["R", "t0"], "t0", Some(0.0))?,
            },
            "flat_plane" | "plane" => {
                let n = take(params, &["dim"], "dim", Some(4.0))?;
                if n.fract() != 0.0 || n < 3.0 {
                    return Err(CatalogError(format!("flat_plane needs an integer ambient dim ≥ 3, got {n}")));
                }
                SurfaceSpec::FlatPlane { ambient_dim: n as usize }
            }
            "graph" => {
                const KEYS: [&str; 8] = ["a1", "b1", "c1", "s1", "a2", "b2", "c2", "s2"];
                let h = |k: &str| take(params, &KEYS, k, Some(0.0));
                SurfaceSpec::Graph {
                    f1: GraphHeight {
                        a: h("a1")?,
                        b: h("b1")?,
                        c: h("c1")?,
                        s: h("s1")?,
                    },
                    f2: GraphHeight {
                        a: h("a2")?,
                        b: h("b2")?,
                        c: h("c2")?,
                        s: h("s2")?,
                    },
                }
            }
            "torus_flat_ambient" | "torus" => SurfaceSpec::TorusFlatAmbient {
                r1: take(params, &["r1", "r2"], "r1", Some(1.0))?,
                r2: take(params, &["r1", "r2"], "r2", Some(1.0))?,
            },
            other => {
                return Err(CatalogError(format!(
                    "unknown surface family {other:?} (expected one of {:?})",
                    Self::NAMES
                )))
            }
        };
        match spec {
            SurfaceSpec::RoundSphere { radius, .. } if radius <= 0.0 => {
                Err(CatalogError(format!("sphere radius must be positive, got {radius}")))
            }
            SurfaceSpec::TorusFlatAmbient { r1, r2 } if r1 <= 0.0 || r2 <= 0.0 => {
                Err(CatalogError("torus radii must be positive".into()))
            }
            s => Ok(s),
        }
    }

    /// Names of the surface coordinates, in order.
    pub fn coordinate_labels(&self) -> Vec<String> {
        match self {
            SurfaceSpec::ConstVrKerr { .. } | SurfaceSpec::RoundSphere { .. } => vec!["theta".into(), "phi".into()],
            SurfaceSpec::FlatPlane { ambient_dim } => (1..=ambient_dim - 2).map(|i| format!("u{i}")).collect(),
            SurfaceSpec::Graph { .. } => vec!["x".into(), "y".into()],
            SurfaceSpec::TorusFlatAmbient { .. } => vec!["u".into(), "v".into()],
        }
    }

    /// Value used for a surface coordinate that is not scanned.
    pub fn default_coordinate(&self, label: &str) -> f64 {
        match (self, label) {
            (SurfaceSpec::ConstVrKerr { .. } | SurfaceSpec::RoundSphere { .. }, "theta") => PI / 4.0,
            _ => 0.0,
        }
    }

    /// Family parameters that may be scanned like coordinates.
    pub fn family_params(&self) -> Vec<&'static str> {
        match self {
            SurfaceSpec::ConstVrKerr { .. } => vec!["v", "r"],
            SurfaceSpec::RoundSphere { .. } => vec!["R", "t0"],
            SurfaceSpec::TorusFlatAmbient { .. } => vec!["r1", "r2"],
            _ => vec![],
        }
    }

    /// Copy with one family parameter replaced.
    pub fn with_param(&self, key: &str, value: f64) -> Result<Self, CatalogError> {
        let mut s = *self;
        match (&mut s, key) {
            (SurfaceSpec::ConstVrKerr { v, .. }, "v") => *v = value,
            (SurfaceSpec::ConstVrKerr { r, .. }, "r") => *r = value,
            (SurfaceSpec::RoundSphere { radius, .. }, "R") if value > 0.0 => *radius = value,
            (SurfaceSpec::RoundSphere { t0, .. }, "t0") => *t0 = value,
            (SurfaceSpec::TorusFlatAmbient { r1, .. }, "r1") if value > 0.0 => *r1 = value,
            (SurfaceSpec::TorusFlatAmbient { r2, .. }, "r2") if value > 0.0 => *r2 = value,
            _ => return Err(CatalogError(format!("cannot set {key}={value} on {self:?}"))),
        }
        Ok(s)
    }
}

impl Immersion for SurfaceSpec {
    fn surface_dim(&self) -> usize {
        match self {
            SurfaceSpec::FlatPlane { ambient_dim } => ambient_dim - 2,
            _ => 2,
        }
    }

    fn check_domain(&self, u: &[f64]) -> Result<()> {
        if u.len() != self.surface_dim() {
            return Err(GeometryError::DimensionMismatch {
                expected: self.surface_dim(),
                found: u.len(),
            });
        }
        if u.iter().any(|c| !c.is_finite()) {
            return Err(GeometryError::domain(u, "non-finite coordinate"));
        }
        match self {
            SurfaceSpec::ConstVrKerr { .. } if !(KERR_THETA_MIN..=PI - KERR_THETA_MIN).contains(&u[0]) => {
                Err(GeometryError::domain(u, format!("θ within {KERR_THETA_MIN:e} of the axis")))
            }
            SurfaceSpec::RoundSphere { .. } if !(u[0] > 0.0 && u[0] < PI) || u[0].sin() < 1e-6 => {
                Err(GeometryError::domain(u, "θ at a pole of the sphere chart"))
            }
            _ => Ok(()),
        }
    }

    fn map<S: Real>(&self, u: &[S]) -> Vec<S> {
        let c = S::from_f64;
        match *self {
            SurfaceSpec::ConstVrKerr { v, r } => vec![c(v), c(r), u[0].clone(), u[1].clone()],
            SurfaceSpec::RoundSphere { radius, t0 } => {
                let (st, ct) = (u[0].clone().sin(), u[0].clone().cos());
                vec![
                    c(t0),
                    st.clone() * u[1].clone().cos() * radius,
                    st * u[1].clone().sin() * radius,
                    ct * radius,
                ]
            }
            SurfaceSpec::FlatPlane { .. } => [c(0.0), c(0.0)].into_iter().chain(u.iter().cloned()).collect(),
            SurfaceSpec::Graph { f1, f2 } => {
                vec![f1.eval(&u[0], &u[1]), f2.eval(&u[0], &u[1]), u[0].clone(), u[1].clone()]
            }
            SurfaceSpec::TorusFlatAmbient { r1, r2 } => vec![
                u[0].clone().cos() * r1,
                u[0].clone().sin() * r1,
                u[1].clone().cos() * r2,
                u[1].clone().sin() * r2,
            ],
        }
    }
}

/// `(r_+, r_−) = m ± √(m² − a²)` when `m ≥ |a|`.
pub fn kerr_horizons(m: f64, a: f64) -> Option<(f64, f64)> {
    let disc = m * m - a * a;
    (disc >= 0.0).then(|| (m + disc.sqrt(), m - disc.sqrt()))
}

/// `4 m r² + ρ² (r − m)`, whose zeros (with `r < m`) make the two Kerr
/// matrices `M1`, `M2` commute.
pub fn kerr_commuting_polynomial(m: f64, a: f64, theta: f64, r: f64) -> f64 {
    let rho2 = r * r + a * a * theta.cos().powi(2);
    4.0 * m * r * r + rho2 * (r - m)
}

/// Closed-form quantities on the Kerr surfaces of constant `(v, r)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KerrSurfacePoint {
    pub m: f64,
    pub a: f64,
    pub r: f64,
    pub theta: f64,
}

impl KerrSurfacePoint {
    pub fn new(m: f64, a: f64, r: f64, theta: f64) -> Result<Self> {
        kerr_domain(a, &[0.0, r, theta, 0.0])?;
        Ok(Self { m, a, r, theta })
    }

    pub fn rho2(&self) -> f64 {
        self.r * self.r + self.a * self.a * self.theta.cos().powi(2)
    }

    pub fn delta(&self) -> f64 {
        self.r * self.r - 2.0 * self.r * self.m + self.a * self.a
    }

    /// `(r² + a²)² − a² Δ sin²θ`.
    fn big_sigma(&self) -> f64 {
        let a2 = self.a * self.a;
        (self.r * self.r + a2).powi(2) - a2 * self.delta() * self.theta.sin().powi(2)
    }

    /// Normal vectors `ξ = dr♯` and `η = dv♯` in `(v, r, θ, φ)` components.
    pub fn xi_eta(&self) -> (DVector<f64>, DVector<f64>) {
        let Self { a, r, theta, .. } = *self;
        let rho2 = self.rho2();
        let ra = r * r + a * a;
        let xi = DVector::from_vec(vec![ra, self.delta(), 0.0, a]) / rho2;
        let eta = DVector::from_vec(vec![a * a * theta.sin().powi(2), ra, 0.0, a]) / rho2;
        (xi, eta)
    }

    /// The matrices `M1` and `M2` in the coordinate basis `{∂_θ, ∂_φ}`.
    pub fn m1_m2(&self) -> (DMatrix<f64>, DMatrix<f64>) {
        let Self { m, a, r, theta } = *self;
        let rho2 = self.rho2();
        let (s, c) = (theta.sin(), theta.cos());
        let sig = self.big_sigma();
        let m1_pp = rho2 * (r + m / (rho2 * rho2) * a * a * (a * a * c * c - r * r) * s * s) / sig;
        let m1 = DMatrix::from_row_slice(2, 2, &[r / rho2, 0.0, 0.0, m1_pp]);
        let m2 = DMatrix::from_row_slice(2, 2, &[0.0, 1.0 / rho2, rho2 / (sig * s * s), 0.0]);
        (m1, m2)
    }

    /// Closed-form `(A_ξ, A_η)` as (1,1)-tensors in the coordinate basis.
    pub fn reference_shape_operators(&self) -> (DMatrix<f64>, DMatrix<f64>) {
        let Self { m, a, r, theta } = *self;
        let rho2 = self.rho2();
        let (m1, m2) = self.m1_m2();
        let a_xi = &m1 * (self.delta() / rho2);
        let twist = 2.0 * m / rho2 * r * a.powi(3) * theta.sin().powi(3) * theta.cos();
        let a_eta = (&m1 * (r * r + a * a) - m2 * twist) / rho2;
        (a_xi, a_eta)
    }
}
