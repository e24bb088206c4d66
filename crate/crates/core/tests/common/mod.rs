//! Oracles and fixtures shared by the integration tests. Nothing here calls
//! into the differentiation or root-finding code under test.

#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use subshear::linalg::SymmetricOperator;
use subshear::{ExtrinsicState, Immersion, MetricField, NormalFrame, Orientation, Settings};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Γ^a_{bc} from central differences of the metric components.
pub fn fd_christoffels<M: MetricField>(metric: &M, x: &[f64], step: f64) -> Vec<f64> {
    let n = metric.dim();
    let g_at = |y: &[f64]| DMatrix::from_row_slice(n, n, &metric.components::<f64>(y));
    let g = g_at(x);
    let g_inv = g.clone().try_inverse().expect("nonsingular metric");
    let dg: Vec<DMatrix<f64>> = (0..n)
        .map(|k| {
            let (mut xp, mut xm) = (x.to_vec(), x.to_vec());
            xp[k] += step;
            xm[k] -= step;
            (g_at(&xp) - g_at(&xm)) / (2.0 * step)
        })
        .collect();
    let mut gamma = vec![0.0; n * n * n];
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let mut s = 0.0;
                for d in 0..n {
                    s += g_inv[(a, d)] * (dg[b][(d, c)] + dg[c][(d, b)] - dg[d][(b, c)]);
                }
                gamma[(a * n + b) * n + c] = 0.5 * s;
            }
        }
    }
    gamma
}

/// Uniform point in a coordinate box.
pub fn sample_in<R: Rng>(rng: &mut R, bounds: &[(f64, f64)]) -> Vec<f64> {
    bounds.iter().map(|&(lo, hi)| rng.random_range(lo..hi)).collect()
}

/// Gaussian curvature of a surface in flat Euclidean space from the Gauss
/// equation, with all derivatives of the immersion by central differences.
pub fn fd_gauss_curvature_euclidean<I: Immersion>(imm: &I, u: &[f64], step: f64) -> f64 {
    let phi = |v: &[f64]| DVector::from_vec(imm.map::<f64>(v));
    let shifted = |di: f64, dj: f64| phi(&[u[0] + di, u[1] + dj]);
    let t = [
        (shifted(step, 0.0) - shifted(-step, 0.0)) / (2.0 * step),
        (shifted(0.0, step) - shifted(0.0, -step)) / (2.0 * step),
    ];
    let c = phi(u);
    let h2 = step * step;
    let d11 = (shifted(step, 0.0) - &c * 2.0 + shifted(-step, 0.0)) / h2;
    let d22 = (shifted(0.0, step) - &c * 2.0 + shifted(0.0, -step)) / h2;
    let d12 = (shifted(step, step) - shifted(step, -step) - shifted(-step, step) + shifted(-step, -step)) / (4.0 * h2);
    let e = t[0].dot(&t[0]);
    let f = t[0].dot(&t[1]);
    let g = t[1].dot(&t[1]);
    // normal projection: subtract the tangential least-squares part
    let gram = DMatrix::from_row_slice(2, 2, &[e, f, f, g]);
    let gram_inv = gram.try_inverse().expect("immersion");
    let normal = |v: &DVector<f64>| {
        let rhs = DVector::from_vec(vec![t[0].dot(v), t[1].dot(v)]);
        let k = &gram_inv * rhs;
        v - &t[0] * k[0] - &t[1] * k[1]
    };
    let (n11, n12, n22) = (normal(&d11), normal(&d12), normal(&d22));
    (n11.dot(&n22) - n12.dot(&n12)) / (e * g - f * f)
}

/// Root of `4 m r² + (r² + a² cos²θ)(r − m)` in `(0, m)` by safeguarded
/// Newton iteration.
pub fn commuting_polynomial_root(m: f64, a: f64, theta: f64) -> f64 {
    let c2 = (a * theta.cos()).powi(2);
    let p = |r: f64| 4.0 * m * r * r + (r * r + c2) * (r - m);
    let dp = |r: f64| 8.0 * m * r + 2.0 * r * (r - m) + r * r + c2;
    let (mut lo, mut hi) = (0.0, m);
    let mut r = 0.5 * m;
    for _ in 0..200 {
        let v = p(r);
        if v == 0.0 || hi - lo < 1e-15 {
            break;
        }
        if v < 0.0 {
            lo = r;
        } else {
            hi = r;
        }
        let next = r - v / dp(r);
        r = if next > lo && next < hi { next } else { 0.5 * (lo + hi) };
    }
    r
}

pub fn random_symmetric<R: Rng>(rng: &mut R, n: usize, scale: f64) -> DMatrix<f64> {
    let m = DMatrix::from_fn(n, n, |_, _| rng.random_range(-1.0..1.0));
    (&m + m.transpose()) * (0.5 * scale)
}

pub fn trace_free(m: &DMatrix<f64>) -> DMatrix<f64> {
    let n = m.nrows();
    m - DMatrix::identity(n, n) * (m.trace() / n as f64)
}

/// Random orthogonal matrix, the Q factor of a random matrix.
pub fn random_rotation<R: Rng>(rng: &mut R, n: usize) -> DMatrix<f64> {
    let m = DMatrix::from_fn(n, n, |_, _| rng.random_range(-1.0..1.0));
    m.qr().q()
}

/// A synthetic point: an ambient inner product `ḡ = Lᵀ D L` with
/// `D = diag(ε1, ε2, 1, …)`, frames read off `L⁻¹`, the normal frame
/// rotated or boosted by `angle`, and shape operators prescribed in it.
pub struct Fixture {
    pub signs: [f64; 2],
    pub a: [DMatrix<f64>; 2],
    pub state: ExtrinsicState,
}

pub fn fixture<R: Rng>(rng: &mut R, signs: [f64; 2], a: [DMatrix<f64>; 2], orientation: Orientation) -> Fixture {
    let n = a[0].nrows();
    let dim = n + 2;
    let l = DMatrix::identity(dim, dim) + DMatrix::from_fn(dim, dim, |_, _| rng.random_range(-0.3..0.3));
    let mut d = vec![1.0; dim];
    d[0] = signs[0];
    d[1] = signs[1];
    let gbar = l.transpose() * DMatrix::from_diagonal(&DVector::from_vec(d)) * &l;
    let l_inv = l.try_inverse().expect("near-identity matrix");
    let col = |i: usize| l_inv.column(i).into_owned();
    let angle = rng.random_range(-1.0..1.0);
    let frame = NormalFrame::orthonormal(col(0), col(1), signs).transformed(angle);
    let future = (signs[0] * signs[1] < 0.0).then(|| if signs[0] < 0.0 { frame.xi(0).clone() } else { frame.xi(1).clone() });
    let settings = Settings {
        orientation,
        ..Settings::default()
    };
    let state = ExtrinsicState::from_shape_operators(
        gbar,
        (2..dim).map(col).collect(),
        frame,
        [SymmetricOperator::symmetrized(a[0].clone()), SymmetricOperator::symmetrized(a[1].clone())],
        future,
        &settings,
    )
    .expect("well-conditioned fixture");
    Fixture { signs, a, state }
}

pub const SIGNATURES: [[f64; 2]; 3] = [[1.0, 1.0], [-1.0, 1.0], [-1.0, -1.0]];

/// Shape operators with linearly dependent shears: `A_k = λ_k 1 + s_k M`.
pub fn proportional_shapes<R: Rng>(rng: &mut R, n: usize) -> [DMatrix<f64>; 2] {
    let scale = 10f64.powf(rng.random_range(-1.0..1.0));
    let m = trace_free(&random_symmetric(rng, n, scale));
    let id = DMatrix::identity(n, n);
    let mut s = [rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0)];
    match rng.random_range(0..10) {
        0 => s = [0.0, 0.0],
        1 => s[1] = 0.0,
        _ => {}
    }
    [0, 1].map(|k| &id * rng.random_range(-2.0..2.0) + &m * s[k])
}

/// Shape operators whose shears are independent. For n ≥ 3 half of them
/// commute, which is necessary but not sufficient for a direction.
pub fn independent_shapes<R: Rng>(rng: &mut R, n: usize) -> [DMatrix<f64>; 2] {
    let scale = 10f64.powf(rng.random_range(-1.0..1.0));
    if n >= 3 && rng.random_bool(0.5) {
        let q = random_rotation(rng, n);
        let d1: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0) * scale).collect();
        let d2: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0) * scale).collect();
        [d1, d2].map(|d| &q * DMatrix::from_diagonal(&DVector::from_vec(d)) * q.transpose())
    } else {
        [random_symmetric(rng, n, scale), random_symmetric(rng, n, scale)]
    }
}

/// Sine of the angle between two normal vectors, measured on their frame
/// coefficients.
pub fn coefficient_sine(state: &ExtrinsicState, u: &DVector<f64>, v: &DVector<f64>) -> f64 {
    let a = state.coefficients(u);
    let b = state.coefficients(v);
    let cross = a[0] * b[1] - a[1] * b[0];
    cross.abs() / (a[0].hypot(a[1]) * b[0].hypot(b[1]))
}
