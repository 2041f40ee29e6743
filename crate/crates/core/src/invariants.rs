//! First integrals of the generator fields.
//!
//! * the Casimir `h_{ω,z} = Σ ω_{jN} α_j² e^{zα_N} + (cosh(zα_N) - 1)/(z²/2)`,
//!   invariant under every generator;
//! * the auxiliary invariants `h^{iN,k} = α_k e^{zα_N}` of `Ĵ_{iN}`, `k ≠ i`;
//! * the invariant `h_{a,b} = a x² e^y + e^y + b e^{-y}` of the reduced plane system.
//!
//! The gradient of the Casimir is the exact one-form annihilated by every
//! boost field, `dh = τ [Σ ω_{jN} α_j dα_j + ((1-e^{-2zα_N})/(2z) + (z/2) Σ ω_{sN} α_s²) dα_N]`
//! with integration factor `τ = 2 e^{zα_N}`.

use crate::error::{finite, Error, Result};
use crate::fields::{half_expm1, weighted_square_sum, VelocityVector};
use crate::group::GroupPoint;
use crate::structure::OmegaParams;

/// Below this `|zα_N|` the Casimir switches to a series expansion.
pub const CASIMIR_SERIES_THRESHOLD: f64 = 1e-4;

/// `sinh(v)/v`, continuous at zero.
pub(crate) fn sinhc(v: f64) -> f64 {
    if v.abs() < CASIMIR_SERIES_THRESHOLD {
        let v2 = v * v;
        1.0 + v2 / 6.0 + v2 * v2 / 120.0
    } else {
        v.sinh() / v
    }
}

/// The central invariant `h_{ω,z}`. At `z = 0` it is the quadric `Σ ω_{jN} α_j² + α_N²`.
pub fn casimir(params: &OmegaParams, z: f64, p: &GroupPoint) -> Result<f64> {
    p.expect_dim(params.dim())?;
    let u = z * p.last();
    let e = finite(u.exp(), "casimir")?;
    let weights = params.boost_weights();
    let quad = weighted_square_sum(&weights, p);
    // (cosh u - 1)/(z²/2) = (α_N · sinh(u/2)/(u/2))²
    let tail = p.last() * sinhc(0.5 * u);
    finite(quad * e + tail * tail, "casimir")
}

/// `τ = 2 e^{zα_N}`, the factor that makes the boost-annihilated one-form exact.
pub fn integration_factor(z: f64, p: &GroupPoint) -> Result<f64> {
    finite(2.0 * (z * p.last()).exp(), "integration factor")
}

/// Auxiliary invariant `h^{iN,k} = α_k e^{zα_N}` for `1 ≤ k ≤ N-1`.
pub fn aux_invariant(z: f64, k: usize, p: &GroupPoint) -> Result<f64> {
    let n = p.dim();
    if k < 1 || k >= n {
        return Err(Error::IndexOutOfRange { index: k, n });
    }
    finite(p[k - 1] * (z * p.last()).exp(), "auxiliary invariant")
}

/// Closed-form gradient of [`casimir`].
pub fn casimir_gradient(params: &OmegaParams, z: f64, p: &GroupPoint) -> Result<VelocityVector> {
    let n = params.dim();
    p.expect_dim(n)?;
    let u = z * p.last();
    let e = finite(u.exp(), "casimir gradient")?;
    let weights = params.boost_weights();
    let mut g: Vec<f64> = weights.iter().zip(p.iter()).map(|(w, a)| 2.0 * w * a * e).collect();
    let quad = weighted_square_sum(&weights, p);
    // 2 sinh(u)/z = 2 α_N sinh(u)/u
    g.push(z * quad * e + 2.0 * p.last() * sinhc(u));
    for x in &g {
        finite(*x, "casimir gradient")?;
    }
    Ok(g)
}

/// Coefficients `μ_s` of the one-form built from the annihilation condition
/// and the integration factor. Agrees with [`casimir_gradient`].
pub fn exact_form_coefficients(params: &OmegaParams, z: f64, p: &GroupPoint) -> Result<VelocityVector> {
    let n = params.dim();
    p.expect_dim(n)?;
    let tau = integration_factor(z, p)?;
    let weights = params.boost_weights();
    let mut mu: Vec<f64> = weights.iter().zip(p.iter()).map(|(w, a)| tau * w * a).collect();
    let quad = weighted_square_sum(&weights, p);
    mu.push(tau * (half_expm1(z, p.last()) + 0.5 * z * quad));
    Ok(mu)
}

/// `h_{a,b}(x, y) = a x² e^y + e^y + b e^{-y}`.
pub fn reduced_invariant(a: f64, b: f64, x: f64, y: f64) -> Result<f64> {
    let ey = finite(y.exp(), "reduced invariant")?;
    let emy = finite((-y).exp(), "reduced invariant")?;
    finite(a * x * x * ey + ey + b * emy, "reduced invariant")
}

/// `(∂_x h_{a,b}, ∂_y h_{a,b})`.
pub fn reduced_gradient(a: f64, b: f64, x: f64, y: f64) -> Result<[f64; 2]> {
    let ey = finite(y.exp(), "reduced gradient")?;
    let emy = finite((-y).exp(), "reduced gradient")?;
    Ok([2.0 * a * x * ey, a * x * x * ey + ey - b * emy])
}

pub fn reduced_hessian(a: f64, b: f64, x: f64, y: f64) -> Result<[[f64; 2]; 2]> {
    let ey = finite(y.exp(), "reduced hessian")?;
    let emy = finite((-y).exp(), "reduced hessian")?;
    let xy = 2.0 * a * x * ey;
    Ok([[2.0 * a * ey, xy], [xy, a * x * x * ey + ey + b * emy]])
}

/// Location and value of the global minimum of `h_{a,b}` when `a > 0, b > 0`:
/// `(0, ½ ln b)` with value `2√b`.
pub fn reduced_minimum(a: f64, b: f64) -> Option<([f64; 2], f64)> {
    (a > 0.0 && b > 0.0).then(|| ([0.0, 0.5 * b.ln()], 2.0 * b.sqrt()))
}
