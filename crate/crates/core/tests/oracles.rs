mod common;

use std::f64::consts::PI;

use common::*;
use rand::Rng;
use subshear::catalog::GraphHeight;
use subshear::intrinsic::gaussian_curvature_2d;
use subshear::metric::{christoffels, metric_compatibility_residual};
use subshear::{ChartPoint, MetricSpec, SurfaceSpec, Tolerances};

#[test]
fn kerr_christoffels_match_finite_differences_near_the_horizon() {
    let metric = MetricSpec::KerrKerrCoords { m: 1.0, a: 0.9 };
    let tol = Tolerances::default();
    for x in [[0.0, 1.4358898943540674, 0.7, 0.1], [2.0, 0.3, 2.9, -1.0], [-1.0, 4.0, 0.05, 3.0]] {
        let ad = christoffels(&metric, &ChartPoint::ambient(x.to_vec()), &tol).unwrap();
        let fd = fd_christoffels(&metric, &x, 1e-5);
        for (k, f) in fd.iter().enumerate() {
            let (a, b, c) = (k / 16, (k / 4) % 4, k % 4);
            assert!((ad.get(a, b, c) - f).abs() <= 1e-6 * (1.0 + f.abs()), "Γ^{a}_{b}{c} at {x:?}");
        }
    }
}

#[test]
fn christoffels_are_metric_compatible() {
    let tol = Tolerances::default();
    let mut r = rng(11);
    for metric in [MetricSpec::RiemannianTest { c: 0.3 }, MetricSpec::KerrKerrCoords { m: 1.0, a: 0.5 }] {
        for _ in 0..20 {
            let x = sample_in(&mut r, &metric.sample_box());
            let p = ChartPoint::ambient(x);
            let gamma = christoffels(&metric, &p, &tol).unwrap();
            let res = metric_compatibility_residual(&metric, &p, &gamma).unwrap();
            assert!(res <= tol.chris, "{res:e}");
        }
    }
}

#[test]
fn brioschi_matches_gauss_equation_on_graphs() {
    let surfaces = [
        SurfaceSpec::Graph {
            f1: GraphHeight { a: 0.4, b: -0.2, c: 0.7, s: 0.3 },
            f2: GraphHeight { a: -0.5, b: 0.6, c: 0.1, s: -0.2 },
        },
        SurfaceSpec::RoundSphere { radius: 1.7, t0: 0.0 },
        SurfaceSpec::TorusFlatAmbient { r1: 1.0, r2: 2.0 },
    ];
    let mut r = rng(12);
    for s in &surfaces {
        for _ in 0..10 {
            let u = [r.random_range(0.3..PI - 0.3), r.random_range(-1.0..1.0)];
            let ad = gaussian_curvature_2d(&MetricSpec::Euclidean4, s, &ChartPoint::surface(u.to_vec())).unwrap();
            let fd = fd_gauss_curvature_euclidean(s, &u, 1e-4);
            assert!((ad - fd).abs() <= 1e-5 * (1.0 + fd.abs()), "{s:?} at {u:?}: {ad} vs {fd}");
        }
    }
}

#[test]
fn commuting_polynomial_root_lies_inside_r_below_m() {
    let r0 = commuting_polynomial_root(1.0, 0.5, PI / 2.0 - 0.3);
    assert!(r0 > 0.0 && r0 < 1.0);
    let p = subshear::catalog::kerr_commuting_polynomial(1.0, 0.5, PI / 2.0 - 0.3, r0);
    assert!(p.abs() < 1e-14, "p({r0}) = {p:e}");
}
