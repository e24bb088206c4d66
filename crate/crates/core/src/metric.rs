//! Ambient metric fields and their Levi-Civita connection.

use std::fmt;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::dual::{DualScalar, Real};
use crate::error::{GeometryError, Result};
use crate::linalg::jacobi_eigen;
use crate::tolerance::Tolerances;

/// Counts of negative and positive eigenvalues of a symmetric bilinear form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Signature {
    pub negative: usize,
    pub positive: usize,
}

impl Signature {
    pub fn new(negative: usize, positive: usize) -> Self {
        Self { negative, positive }
    }

    pub fn riemannian(dim: usize) -> Self {
        Self::new(0, dim)
    }

    pub fn lorentzian(dim: usize) -> Self {
        Self::new(1, dim - 1)
    }

    pub fn dim(&self) -> usize {
        self.negative + self.positive
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        let signs = std::iter::repeat_n('-', self.negative).chain(std::iter::repeat_n('+', self.positive));
        for (i, s) in signs.enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{s}")?;
        }
        write!(f, ")")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Chart {
    Ambient,
    Surface,
}

/// Coordinates tagged with the chart they belong to.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChartPoint {
    pub coords: Vec<f64>,
    pub chart: Chart,
}

impl ChartPoint {
    pub fn ambient(coords: impl Into<Vec<f64>>) -> Self {
        Self {
            coords: coords.into(),
            chart: Chart::Ambient,
        }
    }

    pub fn surface(coords: impl Into<Vec<f64>>) -> Self {
        Self {
            coords: coords.into(),
            chart: Chart::Surface,
        }
    }
}

/// A smooth field of symmetric bilinear forms on a coordinate chart.
///
/// Components are evaluated generically so that the same formula yields
/// plain values (`f64`) or derivatives (`DualScalar`).
pub trait MetricField {
    fn dim(&self) -> usize;

    /// Declared signature; evaluation fails when the numerical one differs.
    fn signature(&self) -> Signature;

    fn check_domain(&self, x: &[f64]) -> Result<()>;

    /// Row-major `dim × dim` components at `x`.
    fn components<S: Real>(&self, x: &[S]) -> Vec<S>;

    /// A future-directed causal vector at `x`, when the metric carries a
    /// time orientation. A timelike vector `X` is future-pointing iff
    /// `ḡ(X, T) < 0`.
    fn future_reference(&self, _x: &[f64]) -> Option<DVector<f64>> {
        None
    }
}

/// `ḡ(p)` together with its numerically determined signature.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricValue {
    pub matrix: DMatrix<f64>,
    pub signature: Signature,
}

fn check_ambient_point<M: MetricField + ?Sized>(metric: &M, p: &ChartPoint) -> Result<()> {
    if p.chart != Chart::Ambient || p.coords.len() != metric.dim() {
        return Err(GeometryError::DimensionMismatch {
            expected: metric.dim(),
            found: p.coords.len(),
        });
    }
    metric.check_domain(&p.coords)
}

pub(crate) fn metric_matrix<M: MetricField + ?Sized>(metric: &M, x: &[f64]) -> DMatrix<f64> {
    let n = metric.dim();
    let m = DMatrix::from_row_slice(n, n, &metric.components::<f64>(x));
    (&m + m.transpose()) * 0.5
}

/// Signature of a symmetric matrix from the signs of its eigenvalues;
/// `None` when an eigenvalue is zero relative to the largest.
pub fn signature_of(m: &DMatrix<f64>, rel_zero: f64) -> Option<Signature> {
    let eig = jacobi_eigen(m);
    let scale = eig.eigenvalues.iter().fold(0.0f64, |s, l| s.max(l.abs()));
    let mut sig = Signature::new(0, 0);
    for l in eig.eigenvalues {
        if l.abs() <= rel_zero * scale || scale == 0.0 {
            return None;
        }
        if l < 0.0 {
            sig.negative += 1;
        } else {
            sig.positive += 1;
        }
    }
    Some(sig)
}

/// Evaluates `ḡ(p)` and checks it against the declared signature.
pub fn evaluate_metric<M: MetricField + ?Sized>(metric: &M, p: &ChartPoint) -> Result<MetricValue> {
    check_ambient_point(metric, p)?;
    let matrix = metric_matrix(metric, &p.coords);
    let declared = metric.signature();
    match signature_of(&matrix, 1e-14) {
        Some(sig) if sig == declared => Ok(MetricValue {
            matrix,
            signature: sig,
        }),
        Some(sig) => Err(GeometryError::Signature {
            expected: declared.to_string(),
            found: sig.to_string(),
        }),
        None => Err(GeometryError::Signature {
            expected: declared.to_string(),
            found: "degenerate".into(),
        }),
    }
}

/// Γ^a_{bc} at one ambient point, symmetric in the lower pair.
#[derive(Debug, Clone, PartialEq)]
pub struct Christoffels {
    dim: usize,
    gamma: Vec<f64>,
}

impl Christoffels {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            gamma: vec![0.0; dim * dim * dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, a: usize, b: usize, c: usize) -> f64 {
        self.gamma[(a * self.dim + b) * self.dim + c]
    }

    fn set_pair(&mut self, a: usize, b: usize, c: usize, v: f64) {
        let n = self.dim;
        self.gamma[(a * n + b) * n + c] = v;
        self.gamma[(a * n + c) * n + b] = v;
    }

    /// Γ(X, Y)^a = Γ^a_{bc} X^b Y^c.
    pub fn contract(&self, x: &DVector<f64>, y: &DVector<f64>) -> DVector<f64> {
        let n = self.dim;
        DVector::from_fn(n, |a, _| {
            let mut s = 0.0;
            for b in 0..n {
                for c in 0..n {
                    s += self.get(a, b, c) * x[b] * y[c];
                }
            }
            s
        })
    }

    pub fn max_abs(&self) -> f64 {
        self.gamma.iter().fold(0.0, |m, g| m.max(g.abs()))
    }
}

/// Metric values and first partials at a point, `dg[d][(a, b)] = ∂_d ḡ_ab`.
pub(crate) struct MetricJet {
    pub g: DMatrix<f64>,
    pub dg: Vec<DMatrix<f64>>,
}

pub(crate) fn metric_jet<M: MetricField + ?Sized>(metric: &M, x: &[f64]) -> MetricJet {
    let n = metric.dim();
    let vars = DualScalar::<f64>::seed(x);
    let comps = metric.components(&vars);
    let g = DMatrix::from_fn(n, n, |a, b| *comps[a * n + b].value());
    let g = (&g + g.transpose()) * 0.5;
    let dg = (0..n)
        .map(|d| {
            let m = DMatrix::from_fn(n, n, |a, b| comps[a * n + b].partial(d));
            (&m + m.transpose()) * 0.5
        })
        .collect();
    MetricJet { g, dg }
}

/// Inverse of a symmetric metric matrix, failing when its condition number
/// exceeds `1 / tol.inv`.
pub(crate) fn checked_inverse(g: &DMatrix<f64>, tol: &Tolerances) -> Result<DMatrix<f64>> {
    let eig = jacobi_eigen(g);
    let (lo, hi) = eig
        .eigenvalues
        .iter()
        .fold((f64::INFINITY, 0.0f64), |(lo, hi), l| (lo.min(l.abs()), hi.max(l.abs())));
    let condition = if lo == 0.0 { f64::INFINITY } else { hi / lo };
    if !(condition * tol.inv < 1.0) {
        return Err(GeometryError::SingularMetric { condition });
    }
    g.clone()
        .try_inverse()
        .ok_or(GeometryError::SingularMetric { condition })
}

/// Γ^a_{bc} = ½ ḡ^{ad} (∂_b ḡ_{dc} + ∂_c ḡ_{bd} − ∂_d ḡ_{bc}), with the
/// metric derivatives taken by forward-mode differentiation.
pub fn christoffels<M: MetricField + ?Sized>(metric: &M, p: &ChartPoint, tol: &Tolerances) -> Result<Christoffels> {
    check_ambient_point(metric, p)?;
    let jet = metric_jet(metric, &p.coords);
    let ginv = checked_inverse(&jet.g, tol)?;
    Ok(christoffels_from_jet(&jet, &ginv))
}

pub(crate) fn christoffels_from_jet(jet: &MetricJet, ginv: &DMatrix<f64>) -> Christoffels {
    let n = jet.g.nrows();
    let mut gamma = Christoffels::zeros(n);
    for b in 0..n {
        for c in b..n {
            // lowered Γ_{d b c}
            let lowered: Vec<f64> = (0..n)
                .map(|d| 0.5 * (jet.dg[b][(d, c)] + jet.dg[c][(b, d)] - jet.dg[d][(b, c)]))
                .collect();
            for a in 0..n {
                let v: f64 = (0..n).map(|d| ginv[(a, d)] * lowered[d]).sum();
                gamma.set_pair(a, b, c, v);
            }
        }
    }
    gamma
}

/// Largest |∇̄_d ḡ_ab| = |∂_d ḡ_ab − Γ^e_{da} ḡ_eb − Γ^e_{db} ḡ_ae| at `p`.
pub fn metric_compatibility_residual<M: MetricField + ?Sized>(
    metric: &M,
    p: &ChartPoint,
    gamma: &Christoffels,
) -> Result<f64> {
    check_ambient_point(metric, p)?;
    let jet = metric_jet(metric, &p.coords);
    let n = metric.dim();
    let mut worst = 0.0f64;
    for d in 0..n {
        for a in 0..n {
            for b in 0..n {
                let mut r = jet.dg[d][(a, b)];
                for e in 0..n {
                    r -= gamma.get(e, d, a) * jet.g[(e, b)] + gamma.get(e, d, b) * jet.g[(a, e)];
                }
                worst = worst.max(r.abs());
            }
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Flat(usize);

    impl MetricField for Flat {
        fn dim(&self) -> usize {
            self.0
        }
        fn signature(&self) -> Signature {
            Signature::lorentzian(self.0)
        }
        fn check_domain(&self, _x: &[f64]) -> Result<()> {
            Ok(())
        }
        fn components<S: Real>(&self, _x: &[S]) -> Vec<S> {
            let n = self.0;
            (0..n * n)
                .map(|k| {
                    let (a, b) = (k / n, k % n);
                    S::from_f64(if a != b { 0.0 } else if a == 0 { -1.0 } else { 1.0 })
                })
                .collect()
        }
    }

    /// dr² + r² dφ² in the plane.
    struct Polar;

    impl MetricField for Polar {
        fn dim(&self) -> usize {
            2
        }
        fn signature(&self) -> Signature {
            Signature::riemannian(2)
        }
        fn check_domain(&self, x: &[f64]) -> Result<()> {
            if x[0] > 0.0 {
                Ok(())
            } else {
                Err(GeometryError::domain(x, "r must be positive"))
            }
        }
        fn components<S: Real>(&self, x: &[S]) -> Vec<S> {
            let r2 = x[0].clone().square();
            vec![S::from_f64(1.0), S::from_f64(0.0), S::from_f64(0.0), r2]
        }
    }

    #[test]
    fn signature_display() {
        assert_eq!(Signature::lorentzian(4).to_string(), "(-,+,+,+)");
    }

    #[test]
    fn flat_metric_has_no_connection() {
        let p = ChartPoint::ambient(vec![0.3, 1.0, -2.0, 4.0]);
        let v = evaluate_metric(&Flat(4), &p).unwrap();
        assert_eq!(v.signature, Signature::new(1, 3));
        let g = christoffels(&Flat(4), &p, &Tolerances::default()).unwrap();
        assert_eq!(g.max_abs(), 0.0);
    }

    #[test]
    fn polar_plane_christoffels() {
        let p = ChartPoint::ambient(vec![2.0, 0.4]);
        let g = christoffels(&Polar, &p, &Tolerances::default()).unwrap();
        // Γ^r_φφ = -r, Γ^φ_rφ = 1/r
        assert!((g.get(0, 1, 1) + 2.0).abs() < 1e-15);
        assert!((g.get(1, 0, 1) - 0.5).abs() < 1e-15);
        assert_eq!(g.get(1, 0, 1), g.get(1, 1, 0));
        let res = metric_compatibility_residual(&Polar, &p, &g).unwrap();
        assert!(res < 1e-14);
    }

    #[test]
    fn wrong_chart_or_domain_is_rejected() {
        let tol = Tolerances::default();
        assert!(christoffels(&Polar, &ChartPoint::surface(vec![1.0, 0.0]), &tol).is_err());
        let err = christoffels(&Polar, &ChartPoint::ambient(vec![-1.0, 0.0]), &tol).unwrap_err();
        assert!(err.is_domain());
    }

    #[test]
    fn singular_metric_detected() {
        let g = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 1e-14]);
        assert!(matches!(
            checked_inverse(&g, &Tolerances::default()),
            Err(GeometryError::SingularMetric { .. })
        ));
    }
}
