//! The two-dimensional normal bundle: orthonormal and null frames, the
//! normal volume form and the Hodge dual ★⊥.
//!
//! Orientation convention: an orthonormal frame (ξ1, ξ2) is positively
//! oriented, i.e. ω⊥(ξ1, ξ2) = 1, when (e_1, …, e_n, ξ1, ξ2) has positive
//! determinant in the ambient coordinate basis. [`Orientation::Negative`]
//! reverses this globally, which flips the sign of ★⊥.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{GeometryError, Result};
use crate::extrinsic::{ExtrinsicState, NormalVector};
use crate::linalg::jacobi_eigen;
use crate::tolerance::Tolerances;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Orientation {
    #[default]
    #[serde(rename = "+")]
    Positive,
    #[serde(rename = "-")]
    Negative,
}

impl Orientation {
    pub fn sign(self) -> f64 {
        match self {
            Orientation::Positive => 1.0,
            Orientation::Negative => -1.0,
        }
    }
}

#[inline]
pub(crate) fn ip(g: &DMatrix<f64>, u: &DVector<f64>, v: &DVector<f64>) -> f64 {
    (g * v).dot(u)
}

/// Sign of det[e_1 … e_n, ξ1, ξ2] in ambient coordinates.
pub(crate) fn frame_handedness(tangents: &[DVector<f64>], xi1: &DVector<f64>, xi2: &DVector<f64>) -> f64 {
    let dim = xi1.len();
    let mut m = DMatrix::zeros(dim, dim);
    for (i, e) in tangents.iter().chain([xi1, xi2]).enumerate() {
        m.set_column(i, e);
    }
    m.determinant().signum()
}

/// Kind of frame a [`NormalFrame`] holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FrameKind {
    Orthonormal,
    Null,
}

/// An oriented frame of the normal plane.
///
/// Orthonormal: ḡ(ξ_i, ξ_j) = ε_i δ_ij and ω⊥(ξ1, ξ2) = 1.
/// Null: ḡ(k, k) = ḡ(ℓ, ℓ) = 0, ḡ(k, ℓ) = −1 and ω⊥(k, ℓ) = 1.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalFrame {
    pub kind: FrameKind,
    pub vectors: [DVector<f64>; 2],
    /// (ε1, ε2) for orthonormal frames; unused (zero) for null frames.
    pub signs: [f64; 2],
    /// Orientation convention the frame was built under.
    pub orientation: Orientation,
}

impl NormalFrame {
    /// Wraps an orthonormal pair as given; the caller vouches for
    /// orthonormality and orientation.
    pub fn orthonormal(xi1: DVector<f64>, xi2: DVector<f64>, signs: [f64; 2]) -> Self {
        Self {
            kind: FrameKind::Orthonormal,
            vectors: [xi1, xi2],
            signs,
            orientation: Orientation::Positive,
        }
    }

    pub fn xi(&self, k: usize) -> &DVector<f64> {
        &self.vectors[k]
    }

    pub fn eps(&self, k: usize) -> f64 {
        self.signs[k]
    }

    pub fn is_lorentzian(&self) -> bool {
        self.kind == FrameKind::Orthonormal && self.signs[0] * self.signs[1] < 0.0
    }

    /// Coefficients (c1, c2) of a normal vector, ν = c1 ξ1 + c2 ξ2.
    pub fn coefficients(&self, g: &DMatrix<f64>, v: &DVector<f64>) -> [f64; 2] {
        match self.kind {
            FrameKind::Orthonormal => [
                self.signs[0] * ip(g, v, &self.vectors[0]),
                self.signs[1] * ip(g, v, &self.vectors[1]),
            ],
            // ν = a k + b ℓ  ⇒  ḡ(ν, ℓ) = −a, ḡ(ν, k) = −b
            FrameKind::Null => [-ip(g, v, &self.vectors[1]), -ip(g, v, &self.vectors[0])],
        }
    }

    pub fn compose(&self, c: [f64; 2]) -> DVector<f64> {
        &self.vectors[0] * c[0] + &self.vectors[1] * c[1]
    }

    /// ★⊥ on frame coefficients.
    ///
    /// Orthonormal: ★ξ1 = ε2 ξ2, ★ξ2 = −ε1 ξ1. Null: ★k = −k, ★ℓ = ℓ.
    pub fn hodge_coefficients(&self, c: [f64; 2]) -> [f64; 2] {
        match self.kind {
            FrameKind::Orthonormal => [-self.signs[0] * c[1], self.signs[1] * c[0]],
            FrameKind::Null => [-c[0], c[1]],
        }
    }

    pub fn hodge(&self, g: &DMatrix<f64>, v: &DVector<f64>) -> DVector<f64> {
        self.compose(self.hodge_coefficients(self.coefficients(g, v)))
    }

    /// ω⊥(u, v) = ḡ(★⊥u, v).
    pub fn volume(&self, g: &DMatrix<f64>, u: &DVector<f64>, v: &DVector<f64>) -> f64 {
        ip(g, &self.hodge(g, u), v)
    }

    /// Rotation by `angle` (definite normal plane) or boost by rapidity
    /// `angle` (Lorentzian normal plane). Both preserve orientation.
    pub fn transformed(&self, angle: f64) -> Self {
        assert_eq!(self.kind, FrameKind::Orthonormal);
        let [x1, x2] = &self.vectors;
        let (a, b) = if self.is_lorentzian() {
            (
                x1 * angle.cosh() + x2 * angle.sinh(),
                x1 * angle.sinh() + x2 * angle.cosh(),
            )
        } else {
            (x1 * angle.cos() + x2 * angle.sin(), -x1 * angle.sin() + x2 * angle.cos())
        };
        Self {
            vectors: [a, b],
            ..self.clone()
        }
    }
}

/// Null frame from a Lorentzian orthonormal one:
/// k = (ξ1 − ξ2)/√2, ℓ = (ξ1 + ξ2)/√2, so that ḡ(k, ℓ) = −1, ω⊥(k, ℓ) = 1
/// and both legs are future-pointing whenever ξ1 is.
pub fn to_null_frame(frame: &NormalFrame) -> Result<NormalFrame> {
    if frame.kind == FrameKind::Null {
        return Ok(frame.clone());
    }
    if !(frame.signs[0] < 0.0 && frame.signs[1] > 0.0) {
        return Err(GeometryError::Signature {
            expected: "(-,+) normal plane".into(),
            found: format!("({:+},{:+})", frame.signs[0], frame.signs[1]),
        });
    }
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let [x1, x2] = &frame.vectors;
    Ok(NormalFrame {
        kind: FrameKind::Null,
        vectors: [(x1 - x2) * s, (x1 + x2) * s],
        signs: [0.0, 0.0],
        orientation: frame.orientation,
    })
}

/// Orthogonal projection onto the normal plane, given a ḡ-orthonormal
/// tangent frame.
pub(crate) fn project_normal(g: &DMatrix<f64>, tangents: &[DVector<f64>], v: &DVector<f64>) -> DVector<f64> {
    let mut out = v.clone();
    for e in tangents {
        out -= e * ip(g, v, e);
    }
    out
}

/// Builds the oriented orthonormal normal frame at a point.
///
/// The normal plane is recovered as the range of the ḡ-orthogonal
/// projection; its induced metric is diagonalized so that, for a (−,+)
/// plane, ξ1 is the timelike leg. With a `future` reference, ξ1 is made
/// future-pointing (ḡ(ξ1, T) < 0). Finally ξ2 is negated if needed to
/// match `orientation`.
pub fn build_normal_frame(
    g: &DMatrix<f64>,
    tangents: &[DVector<f64>],
    future: Option<&DVector<f64>>,
    orientation: Orientation,
    tol: &Tolerances,
) -> Result<NormalFrame> {
    let dim = g.nrows();
    if tangents.len() + 2 != dim {
        return Err(GeometryError::DimensionMismatch {
            expected: dim - 2,
            found: tangents.len(),
        });
    }
    let mut w = DMatrix::zeros(dim, dim);
    for a in 0..dim {
        let mut unit = DVector::zeros(dim);
        unit[a] = 1.0;
        w.set_column(a, &project_normal(g, tangents, &unit));
    }
    let range = jacobi_eigen(&(&w * w.transpose()));
    let w1: DVector<f64> = range.eigenvectors.column(dim - 1).into();
    let w2: DVector<f64> = range.eigenvectors.column(dim - 2).into();

    let gram = DMatrix::from_row_slice(2, 2, &[ip(g, &w1, &w1), ip(g, &w1, &w2), ip(g, &w2, &w1), ip(g, &w2, &w2)]);
    let eig = jacobi_eigen(&gram);
    let lambda = [eig.eigenvalues[0], eig.eigenvalues[1]];
    let scale = g.amax().max(1.0);
    if lambda.iter().any(|l| l.abs() <= tol.pd * scale) {
        return Err(GeometryError::DegenerateNormal { eigenvalues: lambda });
    }
    let mut xi: Vec<DVector<f64>> = (0..2)
        .map(|k| (&w1 * eig.eigenvectors[(0, k)] + &w2 * eig.eigenvectors[(1, k)]) / lambda[k].abs().sqrt())
        .collect();
    let signs = [lambda[0].signum(), lambda[1].signum()];

    if signs[0] < 0.0 && signs[1] > 0.0 {
        if let Some(t) = future {
            if ip(g, &xi[0], t) > 0.0 {
                xi[0] = -&xi[0];
            }
        }
    }
    if frame_handedness(tangents, &xi[0], &xi[1]) * orientation.sign() < 0.0 {
        xi[1] = -&xi[1];
    }
    let xi2 = xi.pop().unwrap();
    let xi1 = xi.pop().unwrap();
    Ok(NormalFrame {
        orientation,
        ..NormalFrame::orthonormal(xi1, xi2, signs)
    })
}

/// ★⊥ν at a point, with ν checked to be normal.
pub fn hodge_dual(state: &ExtrinsicState, v: &DVector<f64>) -> Result<NormalVector> {
    let v = state.normal_vector(v.clone())?;
    state.normal_vector(state.normal_frame.hodge(&state.ambient_metric, &v.components))
}

/// ★⊥H together with the null expansions, when the normal plane is Lorentzian.
#[derive(Debug, Clone)]
pub struct NullExpansions {
    pub star_h: NormalVector,
    /// `θ_{★⊥H} = tr A_{★⊥H}`, which vanishes identically.
    pub star_h_expansion: f64,
    pub null_frame: Option<NormalFrame>,
    /// `(θ_k, θ_ℓ)` in the null frame.
    pub theta: Option<[f64; 2]>,
}

pub fn star_h_and_null_expansions(state: &ExtrinsicState) -> Result<NullExpansions> {
    let star_h = hodge_dual(state, &state.mean_curvature.components)?;
    let star_h_expansion = state.expansion_along(&star_h.components);
    let (null_frame, theta) = if state.is_lorentzian() {
        let nf = to_null_frame(&state.normal_frame)?;
        let theta = [0, 1].map(|i| state.expansion_along(&nf.vectors[i]));
        (Some(nf), Some(theta))
    } else {
        (None, None)
    };
    Ok(NullExpansions {
        star_h,
        star_h_expansion,
        null_frame,
        theta,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn minkowski() -> DMatrix<f64> {
        DMatrix::from_diagonal(&DVector::from_vec(vec![-1.0, 1.0, 1.0, 1.0]))
    }

    fn unit(i: usize) -> DVector<f64> {
        let mut v = DVector::zeros(4);
        v[i] = 1.0;
        v
    }

    #[test]
    fn plane_in_minkowski_gets_t_and_x_legs() {
        let g = minkowski();
        let tangents = vec![unit(2), unit(3)];
        let t = unit(0);
        let f = build_normal_frame(&g, &tangents, Some(&t), Orientation::Positive, &Tolerances::default()).unwrap();
        assert_eq!(f.signs, [-1.0, 1.0]);
        assert!((&f.vectors[0] - unit(0)).norm() < 1e-14);
        // (∂_y, ∂_z, ∂_t, ∂_x) is an even permutation of the coordinate basis
        assert!((&f.vectors[1] - unit(1)).norm() < 1e-14);

        let flipped = build_normal_frame(&g, &tangents, Some(&t), Orientation::Negative, &Tolerances::default()).unwrap();
        assert!((&flipped.vectors[1] + unit(1)).norm() < 1e-14);
    }

    #[test]
    fn null_frame_normalization_and_duals() {
        let g = minkowski();
        let f = NormalFrame::orthonormal(unit(0), unit(1), [-1.0, 1.0]);
        let nf = to_null_frame(&f).unwrap();
        let [k, l] = &nf.vectors;
        assert!(ip(&g, k, k).abs() < 1e-15);
        assert!(ip(&g, l, l).abs() < 1e-15);
        assert!((ip(&g, k, l) + 1.0).abs() < 1e-15);
        assert!((f.hodge(&g, k) + k).norm() < 1e-15);
        assert!((f.hodge(&g, l) - l).norm() < 1e-15);
        assert!((f.volume(&g, k, l) - 1.0).abs() < 1e-15);
        // the null frame's own ★ agrees with the orthonormal one
        let v = k * 0.3 - l * 1.7;
        assert!((nf.hodge(&g, &v) - f.hodge(&g, &v)).norm() < 1e-14);
    }

    #[test]
    fn null_frame_needs_lorentzian_plane() {
        let f = NormalFrame::orthonormal(unit(0), unit(1), [1.0, 1.0]);
        assert!(matches!(to_null_frame(&f), Err(GeometryError::Signature { .. })));
    }

    #[test]
    fn hodge_on_orthonormal_legs() {
        let g = DMatrix::identity(4, 4);
        let f = NormalFrame::orthonormal(unit(0), unit(1), [1.0, 1.0]);
        assert!((f.hodge(&g, &unit(0)) - unit(1)).norm() < 1e-15);
        assert!((f.hodge(&g, &unit(1)) + unit(0)).norm() < 1e-15);
        assert!((f.volume(&g, &unit(0), &unit(1)) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn degenerate_normal_plane() {
        // tangent plane containing a null direction leaves a degenerate normal plane;
        // emulate with a metric whose normal block is singular
        let g = DMatrix::from_diagonal(&DVector::from_vec(vec![0.0, 1.0, 1.0, 1.0]));
        let err = build_normal_frame(&g, &[unit(2), unit(3)], None, Orientation::Positive, &Tolerances::default());
        assert!(matches!(err, Err(GeometryError::DegenerateNormal { .. })));
    }
}
