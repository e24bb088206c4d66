use thiserror::Error;

/// Failures raised by the geometry engine.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("point {point:?} outside admissible domain: {reason}")]
    Domain { point: Vec<f64>, reason: String },
    #[error("signature mismatch: expected {expected}, found {found}")]
    Signature { expected: String, found: String },
    #[error("metric numerically singular (condition number {condition:e})")]
    SingularMetric { condition: f64 },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("induced metric not positive definite (smallest eigenvalue {min_eigenvalue:e})")]
    NotSpacelike { min_eigenvalue: f64 },
    #[error("coordinate tangent vectors are linearly dependent (pivot {pivot:e})")]
    DegenerateFrame { pivot: f64 },
    #[error("normal plane metric is degenerate (eigenvalues {eigenvalues:?})")]
    DegenerateNormal { eigenvalues: [f64; 2] },
    #[error("vector is not normal to the surface (tangential part {tangential:e})")]
    NotNormal { tangential: f64 },
    #[error("normal vector is numerically zero")]
    ZeroVector,
    #[error("no umbilical direction exists at this point")]
    NoDirection,
    #[error("shape operators do not commute (commutator norm {norm:e})")]
    NotCommuting { norm: f64 },
    #[error("operator not symmetric (asymmetry {asymmetry:e})")]
    NotSymmetric { asymmetry: f64 },
}

impl GeometryError {
    pub fn domain(point: &[f64], reason: impl Into<String>) -> Self {
        GeometryError::Domain {
            point: point.to_vec(),
            reason: reason.into(),
        }
    }

    pub fn is_domain(&self) -> bool {
        matches!(self, GeometryError::Domain { .. })
    }
}

pub type Result<T, E = GeometryError> = std::result::Result<T, E>;
