//! Pointwise extrinsic geometry of a spacelike co-dimension-two immersion.
//!
//! Every tangent operator is stored in the g-orthonormal frame
//! `e_a = Σ_i C_ai ∂_iΦ`, where it is a symmetric matrix. The second
//! fundamental form is kept through the two frame shape operators
//! `A_k = A_{ξ_k}`, so that `h(e_a, e_b) = Σ_k ε_k (A_k)_ab ξ_k`.

use nalgebra::{DMatrix, DVector};

use crate::error::{GeometryError, Result};
use crate::immersion::{immersion_jet, Immersion, ImmersionJet};
use crate::linalg::{jacobi_eigen, operator_inner, SymmetricOperator};
use crate::metric::{checked_inverse, christoffels_from_jet, metric_jet, ChartPoint, MetricField};
use crate::normal::{build_normal_frame, frame_handedness, ip, FrameKind, NormalFrame, Orientation};
use crate::tolerance::Tolerances;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Settings {
    pub tol: Tolerances,
    pub orientation: Orientation,
}

/// A vector of the normal plane, in ambient coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalVector {
    pub components: DVector<f64>,
    /// ḡ(ν, ν).
    pub norm_sq: f64,
}

#[derive(Debug, Clone)]
pub struct ExtrinsicState {
    pub surface_point: Vec<f64>,
    pub ambient_point: Vec<f64>,
    pub ambient_metric: DMatrix<f64>,
    pub induced_metric: DMatrix<f64>,
    /// `C` with `e_a = Σ_i C_ai ∂_iΦ`; lower triangular.
    pub frame_coefficients: DMatrix<f64>,
    pub tangent_frame: Vec<DVector<f64>>,
    pub normal_frame: NormalFrame,
    pub future_reference: Option<DVector<f64>>,
    /// Normal projections `h(e_a, e_b)`, row-major, when built from an immersion.
    pub second_fundamental: Option<Vec<DVector<f64>>>,
    pub shape: [SymmetricOperator; 2],
    pub expansions: [f64; 2],
    pub mean_curvature: NormalVector,
    pub shear: [SymmetricOperator; 2],
    /// `|Ã_k| = sqrt⟨Ã_k, Ã_k⟩`; signs are assigned by the classifier.
    pub shear_norms: [f64; 2],
    pub casorati: SymmetricOperator,
    pub j_operator: SymmetricOperator,
    pub tol: Tolerances,
}

/// `g_ij = ḡ(∂_iΦ, ∂_jΦ)`, required positive definite.
pub fn induced_metric<M, I>(imm: &I, metric: &M, p: &ChartPoint, tol: &Tolerances) -> Result<DMatrix<f64>>
where
    M: MetricField + ?Sized,
    I: Immersion + ?Sized,
{
    let jet = immersion_jet(imm, p)?;
    metric.check_domain(&jet.position)?;
    let gbar = crate::metric::metric_matrix(metric, &jet.position);
    pullback(&gbar, &jet.tangents, tol)
}

fn pullback(gbar: &DMatrix<f64>, tangents: &[DVector<f64>], tol: &Tolerances) -> Result<DMatrix<f64>> {
    let n = tangents.len();
    let g = DMatrix::from_fn(n, n, |i, j| ip(gbar, &tangents[i], &tangents[j]));
    let g = (&g + g.transpose()) * 0.5;
    let min_eigenvalue = jacobi_eigen(&g).eigenvalues[0];
    if min_eigenvalue <= tol.pd {
        return Err(GeometryError::NotSpacelike { min_eigenvalue });
    }
    Ok(g)
}

/// Gram–Schmidt on the coordinate tangents with respect to `g`.
///
/// Returns the frame as ambient vectors and the coefficient matrix `C`.
pub fn tangent_orthonormal_frame(
    g: &DMatrix<f64>,
    tangents: &[DVector<f64>],
    tol: &Tolerances,
) -> Result<(Vec<DVector<f64>>, DMatrix<f64>)> {
    let n = g.nrows();
    let mut c = DMatrix::<f64>::zeros(n, n);
    for k in 0..n {
        let mut row = DVector::<f64>::zeros(n);
        row[k] = 1.0;
        for j in 0..k {
            let cj = c.row(j).transpose();
            let proj = (g * &row).dot(&cj);
            row -= cj * proj;
        }
        let pivot = (g * &row).dot(&row);
        if pivot <= tol.pd * g[(k, k)].max(1.0) {
            return Err(GeometryError::DegenerateFrame { pivot });
        }
        c.set_row(k, &(row / pivot.sqrt()).transpose());
    }
    let frame = (0..n)
        .map(|a| {
            tangents
                .iter()
                .enumerate()
                .fold(DVector::zeros(tangents[0].len()), |acc, (i, t)| acc + t * c[(a, i)])
        })
        .collect();
    Ok((frame, c))
}

/// Frame shape operators from the Gauss formula:
/// `h(∂_i, ∂_j) = (∂_i∂_jΦ + Γ(∂_iΦ, ∂_jΦ))⊥` and `(A_k)_ab = ḡ(h(e_a, e_b), ξ_k)`.
///
/// Also returns the normal projections `h(e_a, e_b)`, row-major.
pub fn second_fundamental_form(
    jet: &ImmersionJet,
    gamma: &crate::metric::Christoffels,
    gbar: &DMatrix<f64>,
    tangent_frame: &[DVector<f64>],
    frame_coefficients: &DMatrix<f64>,
    normal: &NormalFrame,
) -> ([SymmetricOperator; 2], Vec<DVector<f64>>) {
    let n = tangent_frame.len();
    let coord: Vec<Vec<DVector<f64>>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| &jet.second[i][j] + gamma.contract(&jet.tangents[i], &jet.tangents[j]))
                .collect()
        })
        .collect();
    let c = frame_coefficients;
    let mut h = Vec::with_capacity(n * n);
    for a in 0..n {
        for b in 0..n {
            let mut v = DVector::zeros(gbar.nrows());
            for i in 0..n {
                for j in 0..n {
                    v += &coord[i][j] * (c[(a, i)] * c[(b, j)]);
                }
            }
            h.push(crate::normal::project_normal(gbar, tangent_frame, &v));
        }
    }
    let shape = [0, 1].map(|k| {
        SymmetricOperator::symmetrized(DMatrix::from_fn(n, n, |a, b| ip(gbar, &h[a * n + b], normal.xi(k))))
    });
    (shape, h)
}

impl ExtrinsicState {
    /// Full pipeline at a surface point.
    pub fn compute<M, I>(metric: &M, imm: &I, p: &ChartPoint, settings: &Settings) -> Result<Self>
    where
        M: MetricField + ?Sized,
        I: Immersion + ?Sized,
    {
        let tol = &settings.tol;
        if imm.ambient_dim() != metric.dim() {
            return Err(GeometryError::DimensionMismatch {
                expected: metric.dim(),
                found: imm.ambient_dim(),
            });
        }
        let jet = immersion_jet(imm, p)?;
        let ambient = ChartPoint::ambient(jet.position.clone());
        crate::metric::evaluate_metric(metric, &ambient)?;
        let mjet = metric_jet(metric, &jet.position);
        let ginv = checked_inverse(&mjet.g, tol)?;
        let gamma = christoffels_from_jet(&mjet, &ginv);
        let gbar = mjet.g;

        let g = pullback(&gbar, &jet.tangents, tol)?;
        let (tangent_frame, c) = tangent_orthonormal_frame(&g, &jet.tangents, tol)?;
        let future = metric.future_reference(&jet.position);
        let normal = build_normal_frame(&gbar, &tangent_frame, future.as_ref(), settings.orientation, tol)?;
        let (shape, h) = second_fundamental_form(&jet, &gamma, &gbar, &tangent_frame, &c, &normal);

        Ok(Self::assemble(
            p.coords.clone(),
            jet.position,
            gbar,
            g,
            c,
            tangent_frame,
            normal,
            future,
            Some(h),
            shape,
            *tol,
        ))
    }

    /// A state from prescribed frames and frame shape operators, with the
    /// surface frame taken as its own coordinate basis.
    ///
    /// If `(e, ξ1, ξ2)` has the wrong handedness for `orientation`, ξ2 and
    /// `A_2` are negated.
    pub fn from_shape_operators(
        ambient_metric: DMatrix<f64>,
        tangent_frame: Vec<DVector<f64>>,
        mut normal_frame: NormalFrame,
        mut shape: [SymmetricOperator; 2],
        future_reference: Option<DVector<f64>>,
        settings: &Settings,
    ) -> Result<Self> {
        let n = tangent_frame.len();
        if ambient_metric.nrows() != n + 2 {
            return Err(GeometryError::DimensionMismatch {
                expected: ambient_metric.nrows() - 2,
                found: n,
            });
        }
        for a in shape.iter() {
            if a.dim() != n {
                return Err(GeometryError::DimensionMismatch {
                    expected: n,
                    found: a.dim(),
                });
            }
        }
        normal_frame.orientation = settings.orientation;
        if frame_handedness(&tangent_frame, normal_frame.xi(0), normal_frame.xi(1)) * settings.orientation.sign() < 0.0
        {
            normal_frame.vectors[1] = -&normal_frame.vectors[1];
            shape[1] = -&shape[1];
        }
        let ambient_point = vec![0.0; n + 2];
        Ok(Self::assemble(
            vec![0.0; n],
            ambient_point,
            ambient_metric,
            DMatrix::identity(n, n),
            DMatrix::identity(n, n),
            tangent_frame,
            normal_frame,
            future_reference,
            None,
            shape,
            settings.tol,
        ))
    }

    #[allow(clippy::too_many_arguments)]
    fn assemble(
        surface_point: Vec<f64>,
        ambient_point: Vec<f64>,
        ambient_metric: DMatrix<f64>,
        induced_metric: DMatrix<f64>,
        frame_coefficients: DMatrix<f64>,
        tangent_frame: Vec<DVector<f64>>,
        normal_frame: NormalFrame,
        future_reference: Option<DVector<f64>>,
        second_fundamental: Option<Vec<DVector<f64>>>,
        shape: [SymmetricOperator; 2],
        tol: Tolerances,
    ) -> Self {
        let n = tangent_frame.len();
        let nf = n as f64;
        let eps = normal_frame.signs;
        let expansions = [shape[0].trace(), shape[1].trace()];
        let h_vec = normal_frame.compose([eps[0] * expansions[0] / nf, eps[1] * expansions[1] / nf]);
        let shear = [shape[0].trace_free(), shape[1].trace_free()];
        let shear_norms = [shear[0].norm(), shear[1].norm()];
        let casorati = &shape[0].square().scaled(eps[0]) + &shape[1].square().scaled(eps[1]);
        let j_operator = &shear[0].square().scaled(eps[0]) + &shear[1].square().scaled(eps[1]);
        let mean_curvature = NormalVector {
            norm_sq: ip(&ambient_metric, &h_vec, &h_vec),
            components: h_vec,
        };
        Self {
            surface_point,
            ambient_point,
            ambient_metric,
            induced_metric,
            frame_coefficients,
            tangent_frame,
            normal_frame,
            future_reference,
            second_fundamental,
            shape,
            expansions,
            mean_curvature,
            shear,
            shear_norms,
            casorati,
            j_operator,
            tol,
        }
    }

    /// The same point re-expressed in another orthonormal normal frame.
    pub fn with_normal_frame(&self, mut frame: NormalFrame) -> Result<Self> {
        if frame.kind != FrameKind::Orthonormal {
            return Err(GeometryError::Signature {
                expected: "orthonormal normal frame".into(),
                found: "null frame".into(),
            });
        }
        for k in 0..2 {
            self.check_normal(frame.xi(k))?;
        }
        let orientation = self.normal_frame.orientation;
        frame.orientation = orientation;
        if frame_handedness(&self.tangent_frame, frame.xi(0), frame.xi(1)) * orientation.sign() < 0.0 {
            frame.vectors[1] = -&frame.vectors[1];
        }
        let shape = [0, 1].map(|k| self.shape_along(frame.xi(k)));
        Ok(Self::assemble(
            self.surface_point.clone(),
            self.ambient_point.clone(),
            self.ambient_metric.clone(),
            self.induced_metric.clone(),
            self.frame_coefficients.clone(),
            self.tangent_frame.clone(),
            frame,
            self.future_reference.clone(),
            self.second_fundamental.clone(),
            shape,
            self.tol,
        ))
    }

    pub fn dim(&self) -> usize {
        self.tangent_frame.len()
    }

    pub fn eps(&self) -> [f64; 2] {
        self.normal_frame.signs
    }

    pub fn is_lorentzian(&self) -> bool {
        self.normal_frame.is_lorentzian()
    }

    /// ḡ(u, v).
    pub fn inner(&self, u: &DVector<f64>, v: &DVector<f64>) -> f64 {
        ip(&self.ambient_metric, u, v)
    }

    pub fn xi(&self, k: usize) -> &DVector<f64> {
        self.normal_frame.xi(k)
    }

    /// Frame coefficients `(c_1, c_2)` of ν = c_1 ξ1 + c_2 ξ2.
    pub fn coefficients(&self, v: &DVector<f64>) -> [f64; 2] {
        self.normal_frame.coefficients(&self.ambient_metric, v)
    }

    /// Euclidean length of the frame coefficients; the scale against which
    /// a normal vector counts as zero.
    pub fn coefficient_norm(&self, v: &DVector<f64>) -> f64 {
        let [a, b] = self.coefficients(v);
        a.hypot(b)
    }

    pub fn normal_from_coefficients(&self, c: [f64; 2]) -> NormalVector {
        self.wrap(self.normal_frame.compose(c))
    }

    fn wrap(&self, components: DVector<f64>) -> NormalVector {
        NormalVector {
            norm_sq: self.inner(&components, &components),
            components,
        }
    }

    /// Largest |ḡ(v, e_a)|.
    pub fn tangential_part(&self, v: &DVector<f64>) -> f64 {
        self.tangent_frame.iter().fold(0.0, |m, e| m.max(self.inner(v, e).abs()))
    }

    fn check_normal(&self, v: &DVector<f64>) -> Result<()> {
        let tangential = self.tangential_part(v);
        if tangential > self.tol.w * self.coefficient_norm(v).max(1.0) {
            return Err(GeometryError::NotNormal { tangential });
        }
        Ok(())
    }

    /// Validates and wraps an ambient vector as a normal vector.
    pub fn normal_vector(&self, v: DVector<f64>) -> Result<NormalVector> {
        self.check_normal(&v)?;
        Ok(self.wrap(v))
    }

    /// `A_ν = Σ_k ε_k ḡ(ν, ξ_k) A_k`.
    pub fn shape_along(&self, v: &DVector<f64>) -> SymmetricOperator {
        let [c1, c2] = self.coefficients(v);
        &self.shape[0].scaled(c1) + &self.shape[1].scaled(c2)
    }

    /// `Ã_ν`.
    pub fn shear_along(&self, v: &DVector<f64>) -> SymmetricOperator {
        let [c1, c2] = self.coefficients(v);
        &self.shear[0].scaled(c1) + &self.shear[1].scaled(c2)
    }

    /// `θ_ν = tr A_ν`.
    pub fn expansion_along(&self, v: &DVector<f64>) -> f64 {
        let [c1, c2] = self.coefficients(v);
        c1 * self.expansions[0] + c2 * self.expansions[1]
    }

    /// `‖A_1‖ + ‖A_2‖`.
    pub fn extrinsic_scale(&self) -> f64 {
        self.shape[0].norm() + self.shape[1].norm()
    }

    /// τ_umb at this point.
    pub fn umbilic_threshold(&self) -> f64 {
        self.tol.umbilic(self.extrinsic_scale())
    }

    /// `h(e_a, e_b)` rebuilt from the frame shape operators.
    pub fn h(&self, a: usize, b: usize) -> DVector<f64> {
        let eps = self.eps();
        self.normal_frame
            .compose([eps[0] * self.shape[0].get(a, b), eps[1] * self.shape[1].get(a, b)])
    }

    /// `h̃(e_a, e_b)`.
    pub fn h_tilde(&self, a: usize, b: usize) -> DVector<f64> {
        let eps = self.eps();
        self.normal_frame
            .compose([eps[0] * self.shear[0].get(a, b), eps[1] * self.shear[1].get(a, b)])
    }

    /// A frame operator as a (1,1)-tensor in the coordinate basis `{∂_i}`:
    /// `Cᵀ A C⁻ᵀ`.
    pub fn to_coordinate_basis(&self, op: &SymmetricOperator) -> DMatrix<f64> {
        let c = &self.frame_coefficients;
        let c_inv_t = c.clone().try_inverse().expect("frame coefficients are invertible").transpose();
        c.transpose() * op.matrix() * c_inv_t
    }

    /// `ε_1 ⟨Ã_1, Ã_2⟩`-free helper: the Gram matrix `⟨Ã_k, Ã_l⟩`.
    pub fn shear_gram(&self) -> [[f64; 2]; 2] {
        let ip = |a: usize, b: usize| operator_inner(&self.shear[a], &self.shear[b]).expect("same dimension");
        [[ip(0, 0), ip(0, 1)], [ip(1, 0), ip(1, 1)]]
    }

    /// max over a, b, k of |g(A_k e_a, e_b) − ḡ(h(e_a, e_b), ξ_k)| measured
    /// through the reassembled `h`, i.e. ‖h_ab − Σ ε_k (A_k)_ab ξ_k‖_∞
    /// against the projected Gauss-formula vectors.
    pub fn weingarten_residual(&self) -> Option<f64> {
        let h = self.second_fundamental.as_ref()?;
        let n = self.dim();
        let mut worst = 0.0f64;
        for a in 0..n {
            for b in 0..n {
                let d = &h[a * n + b] - self.h(a, b);
                for k in 0..2 {
                    worst = worst.max(self.inner(&d, self.xi(k)).abs());
                }
                worst = worst.max(self.tangential_part(&h[a * n + b]));
            }
        }
        Some(worst)
    }

    /// |tr(B − J) − n ḡ(H, H)|.
    pub fn casorati_trace_residual(&self) -> f64 {
        (self.casorati.trace() - self.j_operator.trace() - self.dim() as f64 * self.mean_curvature.norm_sq).abs()
    }

    /// ‖B − J − 2Ã_H − ḡ(H, H) 1‖.
    pub fn casorati_identity_residual(&self) -> f64 {
        let n = self.dim();
        let hh = self.mean_curvature.norm_sq;
        let rhs = &self.shear_along(&self.mean_curvature.components).scaled(2.0) + &SymmetricOperator::identity(n).scaled(hh);
        (&(&self.casorati - &self.j_operator) - &rhs).norm()
    }

    /// ‖B_ab − Σ_i ḡ(h(e_a, e_i), h(e_b, e_i))‖ against the projected vectors.
    pub fn casorati_sum_residual(&self) -> Option<f64> {
        let h = self.second_fundamental.as_ref()?;
        let n = self.dim();
        let direct = DMatrix::from_fn(n, n, |a, b| {
            (0..n).map(|i| self.inner(&h[a * n + i], &h[b * n + i])).sum::<f64>()
        });
        Some((direct - self.casorati.matrix()).norm())
    }

    /// max_k |tr Ã_k|.
    pub fn shear_trace_residual(&self) -> f64 {
        self.shear[0].trace().abs().max(self.shear[1].trace().abs())
    }
}
