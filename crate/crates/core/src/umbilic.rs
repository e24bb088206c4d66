//! Umbilical directions and the classification built on them.
//!
//! A point admits an umbilical direction exactly when the two frame shear
//! operators are linearly dependent. Three tests of that are evaluated:
//!
//! * (v) equality in Cauchy–Schwarz, decided through the remainder
//!   `D = Ã_s − (⟨Ã_s, Ã_b⟩ / σ_b²) Ã_b` of the smaller shear after removing
//!   its component along the larger one;
//! * (iv) vanishing of every 2×2 minor of the matrix of shear components;
//! * for surfaces (n = 2), vanishing of `[A_1, A_2]`, whose normalized
//!   Frobenius norm equals `‖D‖` there.
//!
//! For n = 2 the commutator decides; for n ≥ 3 commutation is only
//! necessary and (iv) ∧ (v) decide. All three are reported either way.
//!
//! Trapped-surface terminology follows the physics sign of expansions. With
//! the Gauss-formula convention used for `h`, a surface is future trapped
//! when both future null expansions `θ_k = tr A_k` are positive, i.e. when
//! `−H` is future timelike.

use indexmap::IndexMap;
use nalgebra::DVector;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{GeometryError, Result};
use crate::extrinsic::{ExtrinsicState, NormalVector};
use crate::linalg::{jacobi_eigen, operator_inner, SymmetricOperator};
use crate::normal::{star_h_and_null_expansions, to_null_frame};

/// Disagreement between equivalent tests counts as a diagnostic beyond this
/// multiple of τ_umb.
pub const DISAGREEMENT_FACTOR: f64 = 10.0;

/// Generic mixing weight for the simultaneous eigenbasis of `A_1 + αA_2`.
const MIXING_WEIGHT: f64 = 0.618_033_988_749_894_9;

/// Null `H` when `|ḡ(H, H)| ≤ NULL_REL · |H|²` in frame coefficients.
pub const NULL_REL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CausalCharacter {
    Timelike,
    Spacelike,
    Null,
    Undefined,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TrappedStatus {
    Trapped,
    MarginallyTrapped,
    Untrapped,
    /// Only produced when aggregating over a region.
    Mixed,
    Minimal,
    PastTrapped,
    PastMarginallyTrapped,
    /// Normal plane is not Lorentzian.
    NotApplicable,
}

impl TrappedStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            TrappedStatus::Trapped => "trapped",
            TrappedStatus::MarginallyTrapped => "marginally_trapped",
            TrappedStatus::Untrapped => "untrapped",
            TrappedStatus::Mixed => "mixed",
            TrappedStatus::Minimal => "minimal",
            TrappedStatus::PastTrapped => "past_trapped",
            TrappedStatus::PastMarginallyTrapped => "past_marginally_trapped",
            TrappedStatus::NotApplicable => "not_applicable",
        }
    }
}

impl CausalCharacter {
    pub fn as_str(&self) -> &'static str {
        match self {
            CausalCharacter::Timelike => "timelike",
            CausalCharacter::Spacelike => "spacelike",
            CausalCharacter::Null => "null",
            CausalCharacter::Undefined => "undefined",
        }
    }
}

/// A boolean that may be undecidable at a single point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Tristate {
    True,
    False,
    Indeterminate,
}

impl Tristate {
    pub fn as_str(&self) -> &'static str {
        match self {
            Tristate::True => "true",
            Tristate::False => "false",
            Tristate::Indeterminate => "indeterminate",
        }
    }
}

impl From<bool> for Tristate {
    fn from(b: bool) -> Self {
        if b {
            Tristate::True
        } else {
            Tristate::False
        }
    }
}

impl Serialize for Tristate {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Tristate::True => s.serialize_bool(true),
            Tristate::False => s.serialize_bool(false),
            Tristate::Indeterminate => s.serialize_str("indeterminate"),
        }
    }
}

impl<'de> Deserialize<'de> for Tristate {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Bool(bool),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Bool(b) => Ok(b.into()),
            Raw::Str(s) if s == "indeterminate" => Ok(Tristate::Indeterminate),
            Raw::Str(s) => Err(serde::de::Error::custom(format!("expected bool or \"indeterminate\", got {s:?}"))),
        }
    }
}

/// Outcome of a thresholded test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Check {
    pub holds: bool,
    pub residual: f64,
    pub threshold: f64,
}

impl Check {
    fn new(residual: f64, threshold: f64) -> Self {
        Self {
            holds: residual <= threshold,
            residual,
            threshold,
        }
    }
}

/// Whether `A_ν` is proportional to the identity: `‖Ã_ν‖ ≤ τ_umb · |ν|`,
/// with `|ν|` the length of its orthonormal-frame coefficients.
///
/// `null_hint` lets a null vector with tiny coefficients through; otherwise
/// such a vector is rejected as zero.
pub fn is_umbilical_wrt(state: &ExtrinsicState, v: &DVector<f64>, null_hint: bool) -> Result<Check> {
    let v = state.normal_vector(v.clone())?;
    let scale = state.coefficient_norm(&v.components);
    if scale <= state.tol.pd && !null_hint {
        return Err(GeometryError::ZeroVector);
    }
    let residual = state.shear_along(&v.components).norm();
    Ok(Check::new(residual, state.umbilic_threshold() * scale))
}

#[derive(Debug, Clone)]
pub struct DirectionReport {
    pub exists: bool,
    pub totally_umbilical: bool,
    pub condition_iv: Check,
    pub condition_v: Check,
    /// `(σ_1²σ_2² − ⟨Ã_1, Ã_2⟩²) / max(1, σ_1²σ_2²)`.
    pub condition_v_normalized: f64,
    pub commutator: Check,
    pub diagnostics: Vec<String>,
}

fn largest_shear(state: &ExtrinsicState) -> usize {
    if state.shear_norms[1] > state.shear_norms[0] {
        1
    } else {
        0
    }
}

/// Evaluates the equivalent existence conditions for an umbilical direction.
pub fn direction_exists(state: &ExtrinsicState) -> DirectionReport {
    let tau = state.umbilic_threshold();
    let [s1, s2] = state.shear_norms;
    let smax = s1.max(s2);
    let totally_umbilical = smax <= tau;
    let n = state.dim();

    let big = largest_shear(state);
    let small = 1 - big;
    let inner = operator_inner(&state.shear[0], &state.shear[1]).expect("same dimension");
    let remainder = if smax > 0.0 {
        (&state.shear[small] - &state.shear[big].scaled(inner / (smax * smax))).norm()
    } else {
        0.0
    };
    let prod = (s1 * s2).powi(2);
    let condition_v_normalized = (prod - inner * inner) / prod.max(1.0);

    // largest 2×2 minor of the 2 × n² component matrix
    let (a, b) = (state.shear[0].matrix(), state.shear[1].matrix());
    let mut minor = 0.0f64;
    for p in 0..n * n {
        for q in (p + 1)..n * n {
            minor = minor.max((a[p] * b[q] - a[q] * b[p]).abs());
        }
    }
    let iv = if smax > 0.0 { minor / smax } else { 0.0 };

    let comm = state.shape[0].commutator(&state.shape[1]).norm();
    let comm = if smax > 0.0 { comm / (std::f64::consts::SQRT_2 * smax) } else { comm };

    let condition_iv = Check::new(iv, tau);
    let condition_v = Check::new(remainder, tau);
    let commutator = Check::new(comm, tau);

    let exists = if n == 2 {
        commutator.holds
    } else {
        condition_iv.holds && condition_v.holds && commutator.holds
    };

    let decisive = if n == 2 { commutator } else { condition_v };
    let mut diagnostics = Vec::new();
    for (name, c) in [("condition_iv", condition_iv), ("condition_v", condition_v), ("commutator", commutator)] {
        let gap = c.residual.max(decisive.residual);
        if c.holds != exists && gap > DISAGREEMENT_FACTOR * tau && !(n > 2 && name == "commutator" && c.holds) {
            diagnostics.push(format!(
                "{name} disagrees with the verdict (residual {:e}, threshold {tau:e})",
                c.residual
            ));
        }
    }

    DirectionReport {
        exists: exists || totally_umbilical,
        totally_umbilical,
        condition_iv,
        condition_v,
        condition_v_normalized,
        commutator,
        diagnostics,
    }
}

/// `G`, the normalized shear `Ã` and the umbilical direction `★⊥G`.
#[derive(Debug, Clone)]
pub struct UmbilicalDirection {
    pub totally_umbilical: bool,
    /// `⟨Ã, Ã⟩ = n²`; absent when totally umbilical.
    pub a_tilde: Option<SymmetricOperator>,
    /// Signed `σ_k` with `Ã_k = (σ_k / n) Ã`.
    pub sigma: [f64; 2],
    pub g: NormalVector,
    pub star_g: Option<NormalVector>,
    /// max_ab |h̃(e_a, e_b) − g(Ã e_a, e_b) G| in frame coefficients.
    pub reconstruction: f64,
}

pub fn compute_g_and_direction(state: &ExtrinsicState) -> Result<UmbilicalDirection> {
    let report = direction_exists(state);
    if !report.exists {
        return Err(GeometryError::NoDirection);
    }
    let n = state.dim();
    let nf = n as f64;
    let eps = state.eps();
    if report.totally_umbilical {
        return Ok(UmbilicalDirection {
            totally_umbilical: true,
            a_tilde: None,
            sigma: [0.0, 0.0],
            g: state.normal_from_coefficients([0.0, 0.0]),
            star_g: None,
            reconstruction: state.shear_norms[0].max(state.shear_norms[1]),
        });
    }
    let big = largest_shear(state);
    let mut a_tilde = state.shear[big].scaled(nf / state.shear_norms[big]);
    let cutoff = 1e-6 * a_tilde.max_abs();
    // row-major first significant entry positive
    let lead = (0..n * n)
        .map(|k| a_tilde.get(k / n, k % n))
        .find(|x| x.abs() > cutoff)
        .unwrap_or(1.0);
    if lead < 0.0 {
        a_tilde = -&a_tilde;
    }
    let sigma = [0, 1].map(|k| operator_inner(&state.shear[k], &a_tilde).expect("same dimension") / nf);
    let g = state.normal_from_coefficients([eps[0] * sigma[0] / nf, eps[1] * sigma[1] / nf]);

    let mut reconstruction = 0.0f64;
    for a in 0..n {
        for b in 0..n {
            let t = a_tilde.get(a, b);
            let d1 = state.shear[0].get(a, b) - t * sigma[0] / nf;
            let d2 = state.shear[1].get(a, b) - t * sigma[1] / nf;
            reconstruction = reconstruction.max(d1.hypot(d2));
        }
    }
    let star_g = state.normal_vector(state.normal_frame.hodge(&state.ambient_metric, &g.components))?;
    Ok(UmbilicalDirection {
        totally_umbilical: false,
        a_tilde: Some(a_tilde),
        sigma,
        g,
        star_g: Some(star_g),
        reconstruction,
    })
}

/// `η_i = (μ_i − θ_2/n) ξ_1 − (λ_i − θ_1/n) ξ_2` from a simultaneous
/// eigenbasis of `A_1` (eigenvalues λ_i) and `A_2` (eigenvalues μ_i).
pub fn eigen_direction_oracle(state: &ExtrinsicState) -> Result<Vec<NormalVector>> {
    let tau = state.umbilic_threshold();
    let comm = state.shape[0].commutator(&state.shape[1]).norm();
    if comm > DISAGREEMENT_FACTOR * tau {
        return Err(GeometryError::NotCommuting { norm: comm });
    }
    let nf = state.dim() as f64;
    let mix = &state.shape[0] + &state.shape[1].scaled(MIXING_WEIGHT);
    let basis = jacobi_eigen(mix.matrix()).eigenvectors;
    let [t1, t2] = state.expansions;
    Ok(basis
        .column_iter()
        .map(|v| {
            let lambda = v.dot(&(state.shape[0].matrix() * v));
            let mu = v.dot(&(state.shape[1].matrix() * v));
            state.normal_from_coefficients([mu - t2 / nf, -(lambda - t1 / nf)])
        })
        .collect())
}

#[derive(Debug, Clone)]
pub struct PseudoOrtho {
    pub pseudo: bool,
    pub ortho: bool,
    pub subgeodesic: Tristate,
    /// `‖Ã_H‖ / |H|`.
    pub pseudo_residual: f64,
    /// `‖B − J − A_H‖ / |H|`, the same operator assembled differently.
    pub pseudo_cross: f64,
    /// `‖A_{★⊥H}‖ / |H|`.
    pub ortho_residual: f64,
    /// max_ab |ω⊥(h(e_a, e_b), H)| / |H|.
    pub ortho_wedge: f64,
    pub mean_curvature_vanishes: bool,
    pub diagnostics: Vec<String>,
}

pub fn classify_pseudo_ortho(state: &ExtrinsicState) -> PseudoOrtho {
    let tau = state.umbilic_threshold();
    let h = &state.mean_curvature.components;
    let hscale = state.coefficient_norm(h);
    if hscale <= tau {
        return PseudoOrtho {
            pseudo: true,
            ortho: true,
            subgeodesic: Tristate::Indeterminate,
            pseudo_residual: 0.0,
            pseudo_cross: 0.0,
            ortho_residual: 0.0,
            ortho_wedge: 0.0,
            mean_curvature_vanishes: true,
            diagnostics: Vec::new(),
        };
    }
    let pseudo_residual = state.shear_along(h).norm() / hscale;
    let b_minus_j = &state.casorati - &state.j_operator;
    let pseudo_cross = (&b_minus_j - &state.shape_along(h)).norm() / hscale;

    let star_h = state.normal_frame.hodge(&state.ambient_metric, h);
    let ortho_residual = state.shape_along(&star_h).norm() / hscale;
    let n = state.dim();
    let mut wedge = 0.0f64;
    for a in 0..n {
        for b in 0..n {
            wedge = wedge.max(state.normal_frame.volume(&state.ambient_metric, &state.h(a, b), h).abs());
        }
    }
    let ortho_wedge = wedge / hscale;

    let pseudo = pseudo_residual <= tau;
    let ortho = ortho_residual <= tau;
    let mut diagnostics = Vec::new();
    if pseudo != (pseudo_cross <= tau) && pseudo_residual.max(pseudo_cross) > DISAGREEMENT_FACTOR * tau {
        diagnostics.push(format!("pseudo-umbilical tests disagree ({pseudo_residual:e} vs {pseudo_cross:e})"));
    }
    if ortho != (ortho_wedge <= tau) && ortho_residual.max(ortho_wedge) > DISAGREEMENT_FACTOR * tau {
        diagnostics.push(format!("ortho-umbilical tests disagree ({ortho_residual:e} vs {ortho_wedge:e})"));
    }
    PseudoOrtho {
        pseudo,
        ortho,
        subgeodesic: ortho.into(),
        pseudo_residual,
        pseudo_cross,
        ortho_residual,
        ortho_wedge,
        mean_curvature_vanishes: false,
        diagnostics,
    }
}

#[derive(Debug, Clone)]
pub struct CausalReport {
    pub character: CausalCharacter,
    pub tr_j: f64,
    /// Dead band on `tr J` inside which ★⊥G counts as null.
    pub band: f64,
    /// |tr B − n ḡ(H, H) − tr J|.
    pub casorati_cross: f64,
    /// |tr J + 2⟨Ã_k, Ã_ℓ⟩| in the null frame.
    pub null_frame_cross: f64,
    /// |n² ḡ(★⊥G, ★⊥G) + tr J|.
    pub norm_cross: f64,
}

/// Causal character of ★⊥G from `ḡ(★⊥G, ★⊥G) = −tr J / n²`.
pub fn causal_character(state: &ExtrinsicState, dir: &UmbilicalDirection) -> Result<CausalReport> {
    let nf = state.dim() as f64;
    let tr_j = state.j_operator.trace();
    let casorati_cross = (state.casorati.trace() - nf * state.mean_curvature.norm_sq - tr_j).abs();
    if !state.is_lorentzian() {
        return Err(GeometryError::Signature {
            expected: "(-,+) normal plane".into(),
            found: format!("({:+},{:+})", state.eps()[0], state.eps()[1]),
        });
    }
    let nf_frame = to_null_frame(&state.normal_frame)?;
    let shear_k = state.shear_along(&nf_frame.vectors[0]);
    let shear_l = state.shear_along(&nf_frame.vectors[1]);
    let null_frame_cross = (tr_j + 2.0 * operator_inner(&shear_k, &shear_l)?).abs();
    let band = state.umbilic_threshold() * state.shear_norms[0].max(state.shear_norms[1]);
    let (character, norm_cross) = match &dir.star_g {
        None => (CausalCharacter::Undefined, 0.0),
        Some(sg) => {
            let c = if tr_j > band {
                CausalCharacter::Timelike
            } else if tr_j < -band {
                CausalCharacter::Spacelike
            } else {
                CausalCharacter::Null
            };
            (c, (nf * nf * sg.norm_sq + tr_j).abs())
        }
    };
    Ok(CausalReport {
        character,
        tr_j,
        band,
        casorati_cross,
        null_frame_cross,
        norm_cross,
    })
}

#[derive(Debug, Clone, Copy)]
pub struct TrappedReport {
    pub status: TrappedStatus,
    /// `(θ_k, θ_ℓ)` in the future null frame.
    pub theta: Option<[f64; 2]>,
    /// |ḡ(H, H) + (2/n²) θ_k θ_ℓ|.
    pub identity_residual: f64,
}

pub fn trapped_status(state: &ExtrinsicState) -> Result<TrappedReport> {
    let ne = star_h_and_null_expansions(state)?;
    let Some([tk, tl]) = ne.theta else {
        return Ok(TrappedReport {
            status: TrappedStatus::NotApplicable,
            theta: None,
            identity_residual: 0.0,
        });
    };
    let nf = state.dim() as f64;
    let identity_residual = (state.mean_curvature.norm_sq + 2.0 / (nf * nf) * tk * tl).abs();
    let tau = state.umbilic_threshold();
    let zero = |t: f64| t.abs() <= tau;
    let status = match (zero(tk), zero(tl)) {
        (true, true) => TrappedStatus::Minimal,
        (true, false) | (false, true) => {
            let other = if zero(tk) { tl } else { tk };
            if other > 0.0 {
                TrappedStatus::MarginallyTrapped
            } else {
                TrappedStatus::PastMarginallyTrapped
            }
        }
        _ if tk > 0.0 && tl > 0.0 => TrappedStatus::Trapped,
        _ if tk < 0.0 && tl < 0.0 => TrappedStatus::PastTrapped,
        _ => TrappedStatus::Untrapped,
    };
    Ok(TrappedReport {
        status,
        theta: Some([tk, tl]),
        identity_residual,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DegeneracyBranch {
    TotallyUmbilical,
    Minimal,
    Generic,
}

/// The three equivalent conditions `B = J`, pseudo ∧ ortho, and
/// `B = J = 0`, evaluated independently.
#[derive(Debug, Clone)]
pub struct DegeneracyReport {
    pub branch: DegeneracyBranch,
    pub b_equals_j: Check,
    pub pseudo_and_ortho: bool,
    pub b_and_j_vanish: Check,
    pub agree: bool,
    pub g_hh: f64,
}

pub fn pseudo_ortho_degeneracy(state: &ExtrinsicState) -> DegeneracyReport {
    let report = direction_exists(state);
    let po = classify_pseudo_ortho(state);
    let tau_sq = state.tol.umbilic_sq(state.extrinsic_scale());
    let b_equals_j = Check::new((&state.casorati - &state.j_operator).norm(), tau_sq);
    let b_and_j_vanish = Check::new(state.casorati.norm().max(state.j_operator.norm()), tau_sq);
    let pseudo_and_ortho = po.pseudo && po.ortho;
    let branch = if report.totally_umbilical {
        DegeneracyBranch::TotallyUmbilical
    } else if po.mean_curvature_vanishes {
        DegeneracyBranch::Minimal
    } else {
        DegeneracyBranch::Generic
    };
    DegeneracyReport {
        branch,
        b_equals_j,
        pseudo_and_ortho,
        b_and_j_vanish,
        agree: branch != DegeneracyBranch::Generic
            || (b_equals_j.holds == pseudo_and_ortho && pseudo_and_ortho == b_and_j_vanish.holds),
        g_hh: state.mean_curvature.norm_sq,
    }
}

/// Everything the classifier says about one point.
#[derive(Debug, Clone)]
pub struct UmbilicalVerdict {
    pub totally_umbilical: bool,
    pub direction_exists: bool,
    pub umbilical_direction: Option<NormalVector>,
    pub causal_character: CausalCharacter,
    pub g: NormalVector,
    pub a_tilde: Option<SymmetricOperator>,
    /// Signed shear scalars when a direction exists, magnitudes otherwise.
    pub sigma: [f64; 2],
    pub sigma_signed: bool,
    pub pseudo_umbilical: bool,
    pub ortho_umbilical: bool,
    pub subgeodesic: Tristate,
    pub trapped_status: TrappedStatus,
    pub null_expansions: Option<[f64; 2]>,
    pub residuals: IndexMap<&'static str, f64>,
    pub diagnostics: Vec<String>,
}

/// Residuals that vanish identically and measure numerical health.
pub const CONSISTENCY_RESIDUALS: [&str; 8] = [
    "weingarten",
    "shear_trace",
    "casorati_trace",
    "casorati_identity",
    "casorati_sum",
    "star_h_expansion",
    "reconstruction",
    "null_expansion_identity",
];

pub fn classify(state: &ExtrinsicState) -> Result<UmbilicalVerdict> {
    let mut residuals = IndexMap::new();
    if let Some(w) = state.weingarten_residual() {
        residuals.insert("weingarten", w);
    }
    residuals.insert("shear_trace", state.shear_trace_residual());
    residuals.insert("casorati_trace", state.casorati_trace_residual());
    residuals.insert("casorati_identity", state.casorati_identity_residual());
    if let Some(c) = state.casorati_sum_residual() {
        residuals.insert("casorati_sum", c);
    }
    residuals.insert("h_tilde", state.shear_norms[0].max(state.shear_norms[1]));

    let report = direction_exists(state);
    residuals.insert("condition_iv", report.condition_iv.residual);
    residuals.insert("condition_v", report.condition_v.residual);
    residuals.insert("condition_v_normalized", report.condition_v_normalized);
    residuals.insert("commutator", report.commutator.residual);
    let mut diagnostics = report.diagnostics.clone();

    let direction = if report.exists {
        let d = compute_g_and_direction(state)?;
        residuals.insert("reconstruction", d.reconstruction);
        Some(d)
    } else {
        None
    };

    let ne = star_h_and_null_expansions(state)?;
    residuals.insert("star_h_expansion", ne.star_h_expansion.abs());

    let po = classify_pseudo_ortho(state);
    residuals.insert("pseudo", po.pseudo_residual);
    residuals.insert("pseudo_cross", po.pseudo_cross);
    residuals.insert("ortho", po.ortho_residual);
    residuals.insert("ortho_wedge", po.ortho_wedge);
    diagnostics.extend(po.diagnostics.iter().cloned());

    let causal = match &direction {
        Some(d) if state.is_lorentzian() => {
            let c = causal_character(state, d)?;
            residuals.insert("causal_casorati", c.casorati_cross);
            residuals.insert("causal_null_frame", c.null_frame_cross);
            residuals.insert("causal_norm", c.norm_cross);
            c.character
        }
        _ => CausalCharacter::Undefined,
    };

    let trapped = trapped_status(state)?;
    if trapped.theta.is_some() {
        residuals.insert("null_expansion_identity", trapped.identity_residual);
    }

    let (sigma, sigma_signed) = match &direction {
        Some(d) if !d.totally_umbilical => (d.sigma, true),
        Some(_) => ([0.0, 0.0], true),
        None => (state.shear_norms, false),
    };
    Ok(UmbilicalVerdict {
        totally_umbilical: report.totally_umbilical,
        direction_exists: report.exists,
        umbilical_direction: direction.as_ref().and_then(|d| d.star_g.clone()),
        causal_character: causal,
        g: direction
            .as_ref()
            .map(|d| d.g.clone())
            .unwrap_or_else(|| state.normal_from_coefficients([0.0, 0.0])),
        a_tilde: direction.as_ref().and_then(|d| d.a_tilde.clone()),
        sigma,
        sigma_signed,
        pseudo_umbilical: po.pseudo,
        ortho_umbilical: po.ortho,
        subgeodesic: po.subgeodesic,
        trapped_status: trapped.status,
        null_expansions: trapped.theta,
        residuals,
        diagnostics,
    })
}

impl UmbilicalVerdict {
    /// Largest of the residuals that vanish identically.
    pub fn max_consistency_residual(&self) -> f64 {
        CONSISTENCY_RESIDUALS
            .iter()
            .filter_map(|k| self.residuals.get(k))
            .fold(0.0, |m, r| m.max(*r))
    }
}
