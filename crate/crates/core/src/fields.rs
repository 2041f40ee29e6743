//! Infinitesimal action of `SO_ω(N)` on `T_{z,N}`: the generator vector
//! fields `Ĵ_{ij}`, their Jacobians, and pointwise Lie brackets.

use nalgebra::{DMatrix, DVector};

use crate::error::{finite, Error, Result};
use crate::group::GroupPoint;
use crate::structure::{structure_constants, GeneratorId, OmegaParams};

/// Field values `dα/dt`, one entry per coordinate.
pub type VelocityVector = Vec<f64>;

/// Orientation of the field representation: the pointwise bracket of
/// generator fields equals `BRACKET_SIGN · Σ c_{ab}^g Ĵ_g`. The action is a
/// right action, so the map from the algebra to vector fields reverses brackets.
pub const BRACKET_SIGN: f64 = -1.0;

/// A generator field `Ĵ_{ij}` for fixed contraction and deformation parameters.
#[derive(Debug, Clone, Copy)]
pub struct FieldSpec<'a> {
    pub params: &'a OmegaParams,
    pub z: f64,
    pub gen: GeneratorId,
}

impl<'a> FieldSpec<'a> {
    pub fn new(params: &'a OmegaParams, z: f64, gen: GeneratorId) -> Result<Self> {
        gen.check(params.dim())?;
        if !z.is_finite() {
            return Err(Error::InvalidParams(format!("deformation {z} is not finite")));
        }
        Ok(Self { params, z, gen })
    }

    pub fn dim(&self) -> usize {
        self.params.dim()
    }

    pub fn eval(&self, p: &GroupPoint) -> Result<VelocityVector> {
        eval_field(self, p)
    }

    pub fn jacobian(&self, p: &GroupPoint) -> Result<DMatrix<f64>> {
        field_jacobian(self, p)
    }
}

/// `(1 - e^{-2 z a}) / (2z)`, with the limit `a` at `z = 0`.
pub(crate) fn half_expm1(z: f64, a: f64) -> f64 {
    if z == 0.0 {
        a
    } else {
        -(-2.0 * z * a).exp_m1() / (2.0 * z)
    }
}

/// `Σ_{s<N} ω_{sN} α_s²`.
pub(crate) fn weighted_square_sum(weights: &[f64], p: &[f64]) -> f64 {
    weights.iter().zip(p).map(|(w, a)| w * a * a).sum()
}

/// Value of `Ĵ_{ij}` at `p`.
///
/// Rotations `J_{ij}` (`j < N`) are linear: `α̇_i = -α_j`, `α̇_j = ω_{ij} α_i`.
/// For `J_{iN}`:
///
/// ```text
/// α̇_j = -z ω_iN α_i α_j                                         (j ≠ i, N)
/// α̇_i = -[(1 - e^{-2zα_N})/(2z) - (z/2) Σ ω_sN α_s² + z ω_iN α_i²]
/// α̇_N = ω_iN α_i
/// ```
pub fn eval_field(spec: &FieldSpec<'_>, p: &GroupPoint) -> Result<VelocityVector> {
    let n = spec.dim();
    p.expect_dim(n)?;
    let GeneratorId { i, j } = spec.gen;
    let (i0, j0) = (i - 1, j - 1);
    let mut v = vec![0.0; n];
    if !spec.gen.is_boost(n) {
        v[i0] = -p[j0];
        v[j0] = spec.params.w(i, j) * p[i0];
        return Ok(v);
    }
    let z = spec.z;
    let weights = spec.params.boost_weights();
    let w = weights[i0];
    let ai = p[i0];
    for (k, vk) in v.iter_mut().enumerate().take(n - 1) {
        if k != i0 {
            *vk = -z * w * ai * p[k];
        }
    }
    let sum = weighted_square_sum(&weights, p);
    v[i0] = -(half_expm1(z, p.last()) - 0.5 * z * sum + z * w * ai * ai);
    v[n - 1] = w * ai;
    for x in &v {
        finite(*x, "vector field")?;
    }
    Ok(v)
}

/// Closed-form Jacobian `∂(Ĵ)_r / ∂α_c`.
pub fn field_jacobian(spec: &FieldSpec<'_>, p: &GroupPoint) -> Result<DMatrix<f64>> {
    let n = spec.dim();
    p.expect_dim(n)?;
    let GeneratorId { i, j } = spec.gen;
    let (i0, j0) = (i - 1, j - 1);
    let mut m = DMatrix::zeros(n, n);
    if !spec.gen.is_boost(n) {
        m[(i0, j0)] = -1.0;
        m[(j0, i0)] = spec.params.w(i, j);
        return Ok(m);
    }
    let z = spec.z;
    let weights = spec.params.boost_weights();
    let w = weights[i0];
    let ai = p[i0];
    for k in 0..n - 1 {
        if k == i0 {
            continue;
        }
        m[(k, i0)] = -z * w * p[k];
        m[(k, k)] = -z * w * ai;
        m[(i0, k)] = z * weights[k] * p[k];
    }
    m[(i0, i0)] = -z * w * ai;
    m[(i0, n - 1)] = -finite((-2.0 * z * p.last()).exp(), "field jacobian")?;
    m[(n - 1, i0)] = w;
    Ok(m)
}

/// Pointwise Lie bracket `[A, B](p) = DB(p)·A(p) - DA(p)·B(p)`.
pub fn lie_bracket(a: &FieldSpec<'_>, b: &FieldSpec<'_>, p: &GroupPoint) -> Result<VelocityVector> {
    if a.params != b.params || a.z != b.z {
        return Err(Error::InvalidParams("bracket of fields with different parameters".into()));
    }
    let va = DVector::from_vec(eval_field(a, p)?);
    let vb = DVector::from_vec(eval_field(b, p)?);
    let out = field_jacobian(b, p)? * va - field_jacobian(a, p)? * vb;
    Ok(out.iter().copied().collect())
}

/// `BRACKET_SIGN · Σ_g c_{ab}^g Ĵ_g(p)` using the algebra's bracket table.
pub fn structure_combination(
    params: &OmegaParams,
    z: f64,
    a: GeneratorId,
    b: GeneratorId,
    p: &GroupPoint,
) -> Result<VelocityVector> {
    let table = structure_constants(params);
    let mut out = vec![0.0; params.dim()];
    for term in table.bracket(a, b) {
        let v = eval_field(&FieldSpec::new(params, z, term.gen)?, p)?;
        for (o, x) in out.iter_mut().zip(v) {
            *o += BRACKET_SIGN * term.coeff * x;
        }
    }
    Ok(out)
}

/// Matrix of the undeformed linear action of `gen`: `(i,j) = -1`, `(j,i) = ω_{ij}`.
pub fn generator_matrix(params: &OmegaParams, gen: GeneratorId) -> Result<DMatrix<f64>> {
    let n = params.dim();
    gen.check(n)?;
    let mut m = DMatrix::zeros(n, n);
    m[(gen.i - 1, gen.j - 1)] = -1.0;
    m[(gen.j - 1, gen.i - 1)] = params.w(gen.i, gen.j);
    Ok(m)
}
