//! The deformed translation group `T_{z,N}` in its global chart.
//!
//! A point is the coordinate tuple `(α_1, …, α_N)`; the product is
//! `(α')(α) = (α'_k + e^{-z α'_N} α_k, α'_N + α_N)`, which makes the group
//! a semidirect product `ℝ^{N-1} ⋊ ℝ` with right action `a ◁ b = e^{zb} a`.

use std::ops::{Deref, DerefMut};

use serde::{Deserialize, Serialize};

use crate::error::{finite, Error, Result};

/// Coordinates `α` of a point of `T_{z,N}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GroupPoint(pub Vec<f64>);

impl GroupPoint {
    pub fn new(coords: Vec<f64>) -> Self {
        Self(coords)
    }

    pub fn origin(n: usize) -> Self {
        Self(vec![0.0; n])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// The distinguished coordinate `α_N`.
    pub fn last(&self) -> f64 {
        *self.0.last().expect("group points are nonempty")
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|x| x.is_finite())
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    pub(crate) fn expect_dim(&self, n: usize) -> Result<()> {
        if self.dim() != n {
            return Err(Error::DimensionMismatch { expected: n, found: self.dim() });
        }
        Ok(())
    }
}

impl Deref for GroupPoint {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl DerefMut for GroupPoint {
    fn deref_mut(&mut self) -> &mut [f64] {
        &mut self.0
    }
}

impl From<Vec<f64>> for GroupPoint {
    fn from(v: Vec<f64>) -> Self {
        Self(v)
    }
}

impl From<&[f64]> for GroupPoint {
    fn from(v: &[f64]) -> Self {
        Self(v.to_vec())
    }
}

/// Product `lhs · rhs` in `T_{z,N}`.
pub fn compose(z: f64, lhs: &GroupPoint, rhs: &GroupPoint) -> Result<GroupPoint> {
    if lhs.dim() != rhs.dim() {
        return Err(Error::DimensionMismatch { expected: lhs.dim(), found: rhs.dim() });
    }
    if lhs.dim() == 0 {
        return Err(Error::InvalidParams("empty group point".into()));
    }
    let n = lhs.dim();
    let scale = finite((-z * lhs.last()).exp(), "compose")?;
    let mut out: Vec<f64> = (0..n - 1).map(|k| lhs[k] + scale * rhs[k]).collect();
    out.push(lhs.last() + rhs.last());
    Ok(GroupPoint(out))
}

/// Group inverse: `(-e^{z α_N} α_k, -α_N)`.
pub fn inverse(z: f64, p: &GroupPoint) -> Result<GroupPoint> {
    let n = p.dim();
    if n == 0 {
        return Err(Error::InvalidParams("empty group point".into()));
    }
    let scale = finite((z * p.last()).exp(), "inverse")?;
    let mut out: Vec<f64> = p[..n - 1].iter().map(|a| -scale * a).collect();
    out.push(-p.last());
    Ok(GroupPoint(out))
}

/// Splits a point into its `ℝ^{N-1}` and `ℝ` factors.
pub fn semidirect_split(p: &GroupPoint) -> (Vec<f64>, f64) {
    let n = p.dim();
    (p[..n - 1].to_vec(), p.last())
}

/// Right action of `b ∈ ℝ` on `a ∈ ℝ^{N-1}`: `a ◁ b = e^{z b} a`.
pub fn right_action(z: f64, a: &[f64], b: f64) -> Result<Vec<f64>> {
    let scale = finite((z * b).exp(), "right action")?;
    Ok(a.iter().map(|x| scale * x).collect())
}

/// Product written through the semidirect factors,
/// `(a', b')(a, b) = (a' + a ◁ b'^{-1}, b' + b)`.
pub fn semidirect_compose(
    z: f64,
    lhs: (&[f64], f64),
    rhs: (&[f64], f64),
) -> Result<(Vec<f64>, f64)> {
    let (a1, b1) = lhs;
    let (a2, b2) = rhs;
    if a1.len() != a2.len() {
        return Err(Error::DimensionMismatch { expected: a1.len() + 1, found: a2.len() + 1 });
    }
    let acted = right_action(z, a2, -b1)?;
    Ok((a1.iter().zip(&acted).map(|(x, y)| x + y).collect(), b1 + b2))
}
