//! Intrinsic curvature of two-dimensional induced metrics.

use crate::dual::{DualScalar, Real};
use crate::error::{GeometryError, Result};
use crate::immersion::{check_surface_point, Immersion};
use crate::metric::{ChartPoint, MetricField};

type Jet = DualScalar<f64>;

/// Induced metric components `(E, F, G)` with their first and second
/// partial derivatives.
///
/// The immersion is evaluated on nested jets: the outer gradient is `∂_iΦ`,
/// and each of its entries is itself a jet in the surface coordinates, so
/// the pullback `g_ij = ḡ_ab(Φ) ∂_iΦ^a ∂_jΦ^b` comes out as a jet.
pub fn induced_metric_jet<M, I>(metric: &M, imm: &I, p: &ChartPoint) -> Result<[Jet; 3]>
where
    M: MetricField + ?Sized,
    I: Immersion + ?Sized,
{
    check_surface_point(imm, p)?;
    if imm.surface_dim() != 2 {
        return Err(GeometryError::DimensionMismatch {
            expected: 2,
            found: imm.surface_dim(),
        });
    }
    let u: Vec<DualScalar<Jet>> = p
        .coords
        .iter()
        .enumerate()
        .map(|(i, &x)| DualScalar::variable(Jet::variable(x, i, 2), i, 2))
        .collect();
    let phi = imm.map(&u);
    let position: Vec<f64> = phi.iter().map(|c| c.value().re()).collect();
    metric.check_domain(&position)?;
    let x: Vec<Jet> = phi.iter().map(|c| c.value().clone()).collect();
    let d: Vec<[Jet; 2]> = phi.iter().map(|c| [c.partial(0), c.partial(1)]).collect();
    let gbar = metric.components(&x);
    let dim = x.len();
    let pull = |i: usize, j: usize| {
        let mut acc = Jet::constant(0.0);
        for a in 0..dim {
            for b in 0..dim {
                acc = acc + gbar[a * dim + b].clone() * d[a][i].clone() * d[b][j].clone();
            }
        }
        acc
    };
    Ok([pull(0, 0), pull(0, 1), pull(1, 1)])
}

/// Gaussian curvature by the Brioschi formula in coordinates `(u, v)`.
pub fn gaussian_curvature_2d<M, I>(metric: &M, imm: &I, p: &ChartPoint) -> Result<f64>
where
    M: MetricField + ?Sized,
    I: Immersion + ?Sized,
{
    let [e, f, g] = induced_metric_jet(metric, imm, p)?;
    Ok(brioschi(&e, &f, &g))
}

/// Brioschi formula from jets of `E`, `F`, `G`.
pub fn brioschi(e: &Jet, f: &Jet, g: &Jet) -> f64 {
    let (ev, ee) = (*e.value(), e);
    let (fv, gv) = (*f.value(), *g.value());
    let (e_u, e_v) = (ee.partial(0), ee.partial(1));
    let (f_u, f_v) = (f.partial(0), f.partial(1));
    let (g_u, g_v) = (g.partial(0), g.partial(1));
    let e_vv = ee.second_partial(1, 1);
    let f_uv = f.second_partial(0, 1);
    let g_uu = g.second_partial(0, 0);

    let det3 = |m: [[f64; 3]; 3]| {
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    };
    let first = det3([
        [-0.5 * e_vv + f_uv - 0.5 * g_uu, 0.5 * e_u, f_u - 0.5 * e_v],
        [f_v - 0.5 * g_u, ev, fv],
        [0.5 * g_v, fv, gv],
    ]);
    let second = det3([[0.0, 0.5 * e_v, 0.5 * g_u], [0.5 * e_v, ev, fv], [0.5 * g_u, fv, gv]]);
    (first - second) / (ev * gv - fv * fv).powi(2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{MetricSpec, SurfaceSpec};

    #[test]
    fn sphere_curvature() {
        let k = gaussian_curvature_2d(
            &MetricSpec::Euclidean4,
            &SurfaceSpec::RoundSphere { radius: 2.0, t0: 0.0 },
            &ChartPoint::surface(vec![0.8, 1.3]),
        )
        .unwrap();
        assert!((k - 0.25).abs() < 1e-12);
    }

    #[test]
    fn flat_plane_and_torus() {
        let p = ChartPoint::surface(vec![0.4, -0.9]);
        let plane = gaussian_curvature_2d(&MetricSpec::Minkowski4, &SurfaceSpec::FlatPlane { ambient_dim: 4 }, &p).unwrap();
        assert_eq!(plane, 0.0);
        let torus = gaussian_curvature_2d(
            &MetricSpec::Euclidean4,
            &SurfaceSpec::TorusFlatAmbient { r1: 1.0, r2: 0.5 },
            &p,
        )
        .unwrap();
        assert!(torus.abs() < 1e-14);
    }

    #[test]
    fn higher_dimensional_surface_rejected() {
        let err = gaussian_curvature_2d(
            &MetricSpec::MinkowskiN { dim: 5, q: 1 },
            &SurfaceSpec::FlatPlane { ambient_dim: 5 },
            &ChartPoint::surface(vec![0.0; 3]),
        );
        assert!(matches!(err, Err(GeometryError::DimensionMismatch { .. })));
    }
}
