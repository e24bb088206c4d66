//! Forward-mode differentiation carrying value, gradient and Hessian.
//!
//! A [`DualScalar`] is a second-order truncated Taylor expansion of a scalar
//! function of `k` variables. Arithmetic propagates the product and chain
//! rules exactly, so one evaluation of a metric or an immersion yields the
//! first and second partial derivatives needed by the Gauss formula.
//!
//! The type is generic over its coefficient field, which lets jets nest:
//! `DualScalar<DualScalar<f64>>` carries mixed derivatives up to fourth
//! order and is used where derivatives of derivatives are required (the
//! induced metric's second derivatives for Gaussian curvature).
//!
//! Constants are stored with empty gradient and Hessian; binary operations
//! treat an empty slot as zero.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Scalar field the geometry code is generic over.
pub trait Real:
    Clone
    + fmt::Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Add<f64, Output = Self>
    + Sub<f64, Output = Self>
    + Mul<f64, Output = Self>
    + Div<f64, Output = Self>
{
    fn from_f64(x: f64) -> Self;
    /// The plain real part, with every derivative discarded.
    fn re(&self) -> f64;
    fn sqrt(self) -> Self;
    fn sin(self) -> Self;
    fn cos(self) -> Self;
    fn recip(self) -> Self;

    fn powi(self, n: i32) -> Self {
        match n {
            0 => Self::from_f64(1.0),
            n if n < 0 => self.powi(-n).recip(),
            n => {
                let mut acc = self.clone();
                for _ in 1..n {
                    acc = acc * self.clone();
                }
                acc
            }
        }
    }

    fn square(self) -> Self {
        self.clone() * self
    }
}

impl Real for f64 {
    fn from_f64(x: f64) -> Self {
        x
    }
    fn re(&self) -> f64 {
        *self
    }
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }
    fn sin(self) -> Self {
        f64::sin(self)
    }
    fn cos(self) -> Self {
        f64::cos(self)
    }
    fn recip(self) -> Self {
        1.0 / self
    }
    fn powi(self, n: i32) -> Self {
        f64::powi(self, n)
    }
}

/// Value, gradient and (row-major, symmetric) Hessian with respect to a
/// fixed set of `k` variables.
#[derive(Clone, PartialEq)]
pub struct DualScalar<T = f64> {
    value: T,
    grad: Vec<T>,
    hess: Vec<T>,
}

impl<T: Real> DualScalar<T> {
    pub fn constant(value: T) -> Self {
        Self {
            value,
            grad: Vec::new(),
            hess: Vec::new(),
        }
    }

    /// The `index`-th of `nvars` independent variables, evaluated at `value`.
    pub fn variable(value: T, index: usize, nvars: usize) -> Self {
        assert!(index < nvars, "variable index {index} out of range {nvars}");
        let mut grad = vec![T::from_f64(0.0); nvars];
        grad[index] = T::from_f64(1.0);
        Self {
            value,
            grad,
            hess: vec![T::from_f64(0.0); nvars * nvars],
        }
    }

    /// Seeds every coordinate of a point as an independent variable.
    pub fn seed(point: &[T]) -> Vec<Self> {
        let k = point.len();
        point
            .iter()
            .enumerate()
            .map(|(i, x)| Self::variable(x.clone(), i, k))
            .collect()
    }

    pub fn value(&self) -> &T {
        &self.value
    }

    /// Number of variables carried, or zero for a constant.
    pub fn nvars(&self) -> usize {
        self.grad.len()
    }

    /// ∂f/∂x_i, zero for constants.
    pub fn partial(&self, i: usize) -> T {
        self.grad.get(i).cloned().unwrap_or_else(|| T::from_f64(0.0))
    }

    /// ∂²f/∂x_i∂x_j, zero for constants.
    pub fn second_partial(&self, i: usize, j: usize) -> T {
        let k = self.nvars();
        if k == 0 {
            T::from_f64(0.0)
        } else {
            self.hess[i * k + j].clone()
        }
    }

    pub fn gradient(&self) -> &[T] {
        &self.grad
    }

    pub fn hessian(&self) -> &[T] {
        &self.hess
    }

    /// Applies a scalar function given its value and first two derivatives
    /// at `self.value`.
    fn chain(&self, f0: T, f1: T, f2: T) -> Self {
        let k = self.nvars();
        if k == 0 {
            return Self::constant(f0);
        }
        let grad: Vec<T> = self.grad.iter().map(|g| f1.clone() * g.clone()).collect();
        let mut hess = vec![T::from_f64(0.0); k * k];
        for i in 0..k {
            for j in i..k {
                let h = f1.clone() * self.hess[i * k + j].clone()
                    + f2.clone() * self.grad[i].clone() * self.grad[j].clone();
                hess[j * k + i] = h.clone();
                hess[i * k + j] = h;
            }
        }
        Self {
            value: f0,
            grad,
            hess,
        }
    }
}

impl<T: Real> fmt::Debug for DualScalar<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DualScalar")
            .field("value", &self.value)
            .field("grad", &self.grad)
            .field("hess", &self.hess)
            .finish()
    }
}

fn zip_with<T: Real>(a: &[T], b: &[T], op: impl Fn(T, T) -> T, neg_b: bool) -> Vec<T> {
    match (a.is_empty(), b.is_empty()) {
        (true, true) => Vec::new(),
        (false, true) => a.to_vec(),
        (true, false) => {
            if neg_b {
                b.iter().map(|x| -x.clone()).collect()
            } else {
                b.to_vec()
            }
        }
        (false, false) => {
            assert_eq!(a.len(), b.len(), "dual numbers over different variable sets");
            a.iter()
                .zip(b)
                .map(|(x, y)| op(x.clone(), y.clone()))
                .collect()
        }
    }
}

impl<T: Real> Add for DualScalar<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self {
            value: self.value + rhs.value,
            grad: zip_with(&self.grad, &rhs.grad, |x, y| x + y, false),
            hess: zip_with(&self.hess, &rhs.hess, |x, y| x + y, false),
        }
    }
}

impl<T: Real> Sub for DualScalar<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self {
            value: self.value - rhs.value,
            grad: zip_with(&self.grad, &rhs.grad, |x, y| x - y, true),
            hess: zip_with(&self.hess, &rhs.hess, |x, y| x - y, true),
        }
    }
}

impl<T: Real> Neg for DualScalar<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self {
            value: -self.value,
            grad: self.grad.into_iter().map(|x| -x).collect(),
            hess: self.hess.into_iter().map(|x| -x).collect(),
        }
    }
}

impl<T: Real> Mul for DualScalar<T> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let (ka, kb) = (self.nvars(), rhs.nvars());
        if ka == 0 {
            return rhs.scale_by(self.value);
        }
        if kb == 0 {
            return self.scale_by(rhs.value);
        }
        assert_eq!(ka, kb, "dual numbers over different variable sets");
        let k = ka;
        let (a, b) = (&self.value, &rhs.value);
        let grad = (0..k)
            .map(|i| a.clone() * rhs.grad[i].clone() + b.clone() * self.grad[i].clone())
            .collect();
        let mut hess = Vec::with_capacity(k * k);
        for i in 0..k {
            for j in 0..k {
                let ij = i * k + j;
                hess.push(
                    a.clone() * rhs.hess[ij].clone()
                        + b.clone() * self.hess[ij].clone()
                        + (self.grad[i].clone() * rhs.grad[j].clone()
                            + rhs.grad[i].clone() * self.grad[j].clone()),
                );
            }
        }
        Self {
            value: self.value * rhs.value,
            grad,
            hess,
        }
    }
}

impl<T: Real> DualScalar<T> {
    fn scale_by(self, c: T) -> Self {
        Self {
            value: self.value * c.clone(),
            grad: self.grad.into_iter().map(|x| x * c.clone()).collect(),
            hess: self.hess.into_iter().map(|x| x * c.clone()).collect(),
        }
    }
}

impl<T: Real> Div for DualScalar<T> {
    type Output = Self;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: Self) -> Self {
        if rhs.nvars() == 0 {
            let inv = rhs.value.recip();
            return self.scale_by(inv);
        }
        self * rhs.recip()
    }
}

impl<T: Real> Add<f64> for DualScalar<T> {
    type Output = Self;
    fn add(mut self, rhs: f64) -> Self {
        self.value = self.value + rhs;
        self
    }
}

impl<T: Real> Sub<f64> for DualScalar<T> {
    type Output = Self;
    fn sub(mut self, rhs: f64) -> Self {
        self.value = self.value - rhs;
        self
    }
}

impl<T: Real> Mul<f64> for DualScalar<T> {
    type Output = Self;
    fn mul(self, rhs: f64) -> Self {
        Self {
            value: self.value * rhs,
            grad: self.grad.into_iter().map(|x| x * rhs).collect(),
            hess: self.hess.into_iter().map(|x| x * rhs).collect(),
        }
    }
}

impl<T: Real> Div<f64> for DualScalar<T> {
    type Output = Self;
    fn div(self, rhs: f64) -> Self {
        self * (1.0 / rhs)
    }
}

impl<T: Real> Real for DualScalar<T> {
    fn from_f64(x: f64) -> Self {
        Self::constant(T::from_f64(x))
    }

    fn re(&self) -> f64 {
        self.value.re()
    }

    fn sqrt(self) -> Self {
        let s = self.value.clone().sqrt();
        let d1 = s.clone().recip() * 0.5;
        // d²/dx² √x = -1/(4 x^{3/2})
        let d2 = -(s.clone() * self.value.clone()).recip() * 0.25;
        self.chain(s, d1, d2)
    }

    fn sin(self) -> Self {
        let (s, c) = (self.value.clone().sin(), self.value.clone().cos());
        self.chain(s.clone(), c, -s)
    }

    fn cos(self) -> Self {
        let (s, c) = (self.value.clone().sin(), self.value.clone().cos());
        self.chain(c.clone(), -s, -c)
    }

    fn recip(self) -> Self {
        let inv = self.value.clone().recip();
        let inv2 = inv.clone() * inv.clone();
        let d2 = inv2.clone() * inv.clone() * 2.0;
        self.chain(inv, -inv2, d2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type D = DualScalar<f64>;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-12 * (1.0 + a.abs().max(b.abs()))
    }

    #[test]
    fn product_rule_two_variables() {
        let v = D::seed(&[2.0, 3.0]);
        // f = x² y
        let f = v[0].clone() * v[0].clone() * v[1].clone();
        assert!(close(*f.value(), 12.0));
        assert!(close(f.partial(0), 12.0));
        assert!(close(f.partial(1), 4.0));
        assert!(close(f.second_partial(0, 0), 6.0));
        assert!(close(f.second_partial(0, 1), 4.0));
        assert!(close(f.second_partial(1, 0), 4.0));
        assert!(close(f.second_partial(1, 1), 0.0));
    }

    #[test]
    fn chain_rule_for_elementary_functions() {
        let x = D::variable(0.7, 0, 1);
        let s = x.clone().sin();
        assert!(close(s.partial(0), 0.7f64.cos()));
        assert!(close(s.second_partial(0, 0), -0.7f64.sin()));
        let r = x.clone().sqrt();
        assert!(close(r.partial(0), 0.5 / 0.7f64.sqrt()));
        assert!(close(r.second_partial(0, 0), -0.25 * 0.7f64.powf(-1.5)));
        let q = D::from_f64(1.0) / x.clone();
        assert!(close(q.partial(0), -1.0 / 0.49));
        assert!(close(q.second_partial(0, 0), 2.0 / 0.343));
        let p = x.powi(-2);
        assert!(close(p.second_partial(0, 0), 6.0 / 0.7f64.powi(4)));
    }

    #[test]
    fn constants_mix_with_variables() {
        let v = D::seed(&[1.5]);
        let c = D::from_f64(4.0);
        let f = (c.clone() - v[0].clone()) * c;
        assert!(close(f.partial(0), -4.0));
        assert_eq!(D::from_f64(3.0).nvars(), 0);
    }

    #[test]
    fn hessian_is_exactly_symmetric() {
        let v = D::seed(&[0.3, -1.2, 2.5]);
        let f = (v[0].clone() * v[1].clone()).sin() / (v[2].clone() * v[2].clone() + 1.0)
            + v[1].clone().cos() * v[0].clone().sqrt();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(f.second_partial(i, j), f.second_partial(j, i));
            }
        }
    }

    #[test]
    fn nested_jets_give_third_derivatives() {
        // f(x) = x^4 at x = 2: f'' = 48, f''' = 48, f'''' = 24
        let inner = DualScalar::<f64>::variable(2.0, 0, 1);
        let outer = DualScalar::<DualScalar<f64>>::variable(inner, 0, 1);
        let f = outer.powi(4);
        let d2 = f.second_partial(0, 0);
        assert!(close(*d2.value(), 48.0));
        assert!(close(d2.partial(0), 48.0));
        assert!(close(d2.second_partial(0, 0), 24.0));
    }
}
