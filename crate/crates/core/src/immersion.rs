//! Co-dimension-two immersions Φ: surface chart → ambient chart.

use nalgebra::DVector;

use crate::dual::{DualScalar, Real};
use crate::error::{GeometryError, Result};
use crate::metric::{Chart, ChartPoint};

pub trait Immersion {
    fn surface_dim(&self) -> usize;

    fn ambient_dim(&self) -> usize {
        self.surface_dim() + 2
    }

    fn check_domain(&self, u: &[f64]) -> Result<()>;

    /// Ambient coordinates of Φ(u).
    fn map<S: Real>(&self, u: &[S]) -> Vec<S>;
}

/// Φ(u) with its first and second coordinate derivatives.
#[derive(Debug, Clone)]
pub struct ImmersionJet {
    pub position: Vec<f64>,
    /// `tangents[i] = ∂_iΦ`.
    pub tangents: Vec<DVector<f64>>,
    /// `second[i][j] = ∂_i∂_jΦ`.
    pub second: Vec<Vec<DVector<f64>>>,
}

pub fn check_surface_point<I: Immersion + ?Sized>(imm: &I, p: &ChartPoint) -> Result<()> {
    if p.chart != Chart::Surface || p.coords.len() != imm.surface_dim() {
        return Err(GeometryError::DimensionMismatch {
            expected: imm.surface_dim(),
            found: p.coords.len(),
        });
    }
    imm.check_domain(&p.coords)
}

/// One forward-mode pass through Φ.
pub fn immersion_jet<I: Immersion + ?Sized>(imm: &I, p: &ChartPoint) -> Result<ImmersionJet> {
    check_surface_point(imm, p)?;
    let n = imm.surface_dim();
    let dim = imm.ambient_dim();
    let out = imm.map(&DualScalar::<f64>::seed(&p.coords));
    if out.len() != dim {
        return Err(GeometryError::DimensionMismatch {
            expected: dim,
            found: out.len(),
        });
    }
    let position = out.iter().map(|c| *c.value()).collect();
    let tangents = (0..n).map(|i| DVector::from_fn(dim, |a, _| out[a].partial(i))).collect();
    let second = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| DVector::from_fn(dim, |a, _| out[a].second_partial(i, j)))
                .collect()
        })
        .collect();
    Ok(ImmersionJet {
        position,
        tangents,
        second,
    })
}
