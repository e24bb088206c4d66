//! Small dense symmetric linear algebra.
//!
//! Shape operators, shear operators, the Casorati operator and friends are
//! all self-adjoint with respect to the induced metric; expressed in a
//! g-orthonormal tangent frame they are symmetric matrices. Dimensions here
//! never exceed a handful, so the eigen solver is a plain cyclic Jacobi.

use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{DMatrix, DVector};

use crate::error::{GeometryError, Result};

const JACOBI_THRESHOLD: f64 = 1e-14;
const JACOBI_MAX_SWEEPS: usize = 100;

/// A g-self-adjoint (1,1)-tensor expressed in a g-orthonormal frame.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricOperator(DMatrix<f64>);

impl SymmetricOperator {
    /// Accepts `m` if it is symmetric within `tol` relative to its size,
    /// and stores its exactly symmetrized part.
    pub fn new(m: DMatrix<f64>, tol: f64) -> Result<Self> {
        if !m.is_square() {
            return Err(GeometryError::DimensionMismatch {
                expected: m.nrows(),
                found: m.ncols(),
            });
        }
        let asym = (&m - m.transpose()).norm();
        if asym > tol * m.norm().max(1.0) {
            return Err(GeometryError::NotSymmetric { asymmetry: asym });
        }
        Ok(Self::symmetrized(m))
    }

    /// The symmetric part `(m + mᵀ)/2`.
    pub fn symmetrized(m: DMatrix<f64>) -> Self {
        let t = m.transpose();
        Self((m + t) * 0.5)
    }

    pub fn zeros(n: usize) -> Self {
        Self(DMatrix::zeros(n, n))
    }

    pub fn identity(n: usize) -> Self {
        Self(DMatrix::identity(n, n))
    }

    pub fn from_diagonal(d: &[f64]) -> Self {
        Self(DMatrix::from_diagonal(&DVector::from_column_slice(d)))
    }

    pub fn from_row_slice(n: usize, entries: &[f64]) -> Self {
        Self::symmetrized(DMatrix::from_row_slice(n, n, entries))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.0
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.0[(i, j)]
    }

    pub fn trace(&self) -> f64 {
        self.0.trace()
    }

    /// Frobenius norm, `sqrt(⟨A, A⟩)`.
    pub fn norm(&self) -> f64 {
        self.0.norm()
    }

    /// `A - (tr A / n) 1`.
    pub fn trace_free(&self) -> Self {
        let n = self.dim();
        let mut m = self.0.clone();
        let shift = self.trace() / n as f64;
        for i in 0..n {
            m[(i, i)] -= shift;
        }
        Self(m)
    }

    pub fn square(&self) -> Self {
        Self::symmetrized(&self.0 * &self.0)
    }

    /// `AB + BA`.
    pub fn anticommutator(&self, other: &Self) -> Self {
        Self::symmetrized(&self.0 * &other.0 + &other.0 * &self.0)
    }

    /// `AB - BA`, antisymmetric.
    pub fn commutator(&self, other: &Self) -> DMatrix<f64> {
        &self.0 * &other.0 - &other.0 * &self.0
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self(&self.0 * c)
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.0.amax()
    }
}

impl Add for &SymmetricOperator {
    type Output = SymmetricOperator;
    fn add(self, rhs: Self) -> SymmetricOperator {
        SymmetricOperator(&self.0 + &rhs.0)
    }
}

impl Sub for &SymmetricOperator {
    type Output = SymmetricOperator;
    fn sub(self, rhs: Self) -> SymmetricOperator {
        SymmetricOperator(&self.0 - &rhs.0)
    }
}

impl Mul<f64> for &SymmetricOperator {
    type Output = SymmetricOperator;
    fn mul(self, rhs: f64) -> SymmetricOperator {
        self.scaled(rhs)
    }
}

impl Neg for &SymmetricOperator {
    type Output = SymmetricOperator;
    fn neg(self) -> SymmetricOperator {
        self.scaled(-1.0)
    }
}

/// `⟨A, B⟩ = tr(AB)`, the positive-definite scalar product on self-adjoint
/// operators.
pub fn operator_inner(a: &SymmetricOperator, b: &SymmetricOperator) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(GeometryError::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    // tr(AB) = Σ_ij A_ij B_ji, and B is symmetric
    Ok(a.0.dot(&b.0))
}

/// Eigen-decomposition of a symmetric matrix.
#[derive(Debug, Clone)]
pub struct SymmetricEigen {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Column `i` is the unit eigenvector of `eigenvalues[i]`.
    pub eigenvectors: DMatrix<f64>,
}

impl SymmetricEigen {
    pub fn reconstruct(&self) -> DMatrix<f64> {
        let lambda = DMatrix::from_diagonal(&DVector::from_column_slice(&self.eigenvalues));
        &self.eigenvectors * lambda * self.eigenvectors.transpose()
    }
}

/// Cyclic Jacobi eigen solver for a symmetric operator.
pub fn eigen_symmetric(a: &SymmetricOperator) -> SymmetricEigen {
    jacobi_eigen(a.matrix())
}

/// Cyclic Jacobi on the symmetric part of `m`.
pub fn jacobi_eigen(m: &DMatrix<f64>) -> SymmetricEigen {
    let n = m.nrows();
    let mut a = (m + m.transpose()) * 0.5;
    let mut v = DMatrix::<f64>::identity(n, n);
    let scale = a.norm();

    for _ in 0..JACOBI_MAX_SWEEPS {
        let mut off = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += a[(p, q)] * a[(p, q)];
            }
        }
        if off.sqrt() <= JACOBI_THRESHOLD * scale || scale == 0.0 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                rotate(&mut a, &mut v, p, q, c, s);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].total_cmp(&a[(j, j)]));
    let eigenvalues = order.iter().map(|&i| a[(i, i)]).collect();
    let mut eigenvectors = DMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        eigenvectors.set_column(dst, &v.column(src));
    }
    SymmetricEigen {
        eigenvalues,
        eigenvectors,
    }
}

/// Applies the rotation zeroing `a[(p, q)]`: `a ← Jᵀ a J`, `v ← v J`.
fn rotate(a: &mut DMatrix<f64>, v: &mut DMatrix<f64>, p: usize, q: usize, c: f64, s: f64) {
    let n = a.nrows();
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = c * akp - s * akq;
        a[(k, q)] = s * akp + c * akq;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = c * apk - s * aqk;
        a[(q, k)] = s * apk + c * aqk;
    }
    a[(p, q)] = 0.0;
    a[(q, p)] = 0.0;
    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = c * vkp - s * vkq;
        v[(k, q)] = s * vkp + c * vkq;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_eigenvalues() {
        let e = eigen_symmetric(&SymmetricOperator::identity(2));
        assert_eq!(e.eigenvalues, vec![1.0, 1.0]);
    }

    #[test]
    fn diagonal_sorted_with_axis_vectors() {
        let e = eigen_symmetric(&SymmetricOperator::from_diagonal(&[3.0, -1.0]));
        assert_eq!(e.eigenvalues, vec![-1.0, 3.0]);
        assert_eq!(e.eigenvectors[(1, 0)].abs(), 1.0);
        assert_eq!(e.eigenvectors[(0, 1)].abs(), 1.0);
    }

    #[test]
    fn two_by_two_rotation_case() {
        let a = SymmetricOperator::from_row_slice(2, &[2.0, 1.0, 1.0, 2.0]);
        let e = eigen_symmetric(&a);
        assert!((e.eigenvalues[0] - 1.0).abs() < 1e-14);
        assert!((e.eigenvalues[1] - 3.0).abs() < 1e-14);
        assert!((e.reconstruct() - a.matrix()).norm() < 1e-14);
    }

    #[test]
    fn inner_product_examples() {
        let one = SymmetricOperator::identity(3);
        assert_eq!(operator_inner(&one, &one).unwrap(), 3.0);
        let zero = SymmetricOperator::zeros(3);
        assert_eq!(operator_inner(&one, &zero).unwrap(), 0.0);
        let a = SymmetricOperator::from_diagonal(&[1.0, -1.0]);
        let b = SymmetricOperator::from_diagonal(&[2.0, -2.0]);
        assert_eq!(operator_inner(&a, &b).unwrap(), 4.0);
        assert!(matches!(
            operator_inner(&a, &one),
            Err(GeometryError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn trace_free_part() {
        let a = SymmetricOperator::from_diagonal(&[3.0, 1.0]);
        let t = a.trace_free();
        assert_eq!(t, SymmetricOperator::from_diagonal(&[1.0, -1.0]));
        assert_eq!(operator_inner(&t, &t).unwrap(), 2.0);
    }

    #[test]
    fn rejects_asymmetric_input() {
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 0.0, 1.0]);
        assert!(matches!(
            SymmetricOperator::new(m, 1e-10),
            Err(GeometryError::NotSymmetric { .. })
        ));
    }
}
