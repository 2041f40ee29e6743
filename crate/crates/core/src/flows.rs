//! Closed-form one-parameter flows of the generator fields and of the
//! reduced plane system.

use serde::Serialize;

use crate::error::{finite, Error, Result};
use crate::fields::weighted_square_sum;
use crate::group::GroupPoint;
use crate::invariants::sinhc;
use crate::reduced::ReducedState;
use crate::structure::{cs_omega, GeneratorId, OmegaParams};

/// For `|z|` below this value [`flow_full`] uses the undeformed linear flow.
pub const ZERO_Z_THRESHOLD: f64 = 1e-8;

/// Outcome of a flow evaluation that may leave its domain.
///
/// `f_value` is the quantity whose positivity decides definedness: the
/// function `F^{ω,z}_{iN}` for boosts, the shared denominator for the
/// reduced flow, and `1` for flows that are always defined.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FlowResult<P> {
    pub point: P,
    pub defined: bool,
    pub f_value: f64,
}

impl<P> FlowResult<P> {
    fn always(point: P) -> Self {
        Self { point, defined: true, f_value: 1.0 }
    }

    /// The image point, or [`Error::FlowUndefined`] carrying the offending value.
    pub fn into_result(self) -> Result<P> {
        if self.defined {
            Ok(self.point)
        } else {
            Err(Error::FlowUndefined { value: self.f_value })
        }
    }
}

fn check_plane(n: usize, i: usize, j: usize) -> Result<()> {
    if i >= 1 && i < j && j < n {
        Ok(())
    } else {
        Err(Error::InvalidGenerator { i, j, n })
    }
}

fn check_boost_index(n: usize, i: usize) -> Result<()> {
    if i >= 1 && i < n {
        Ok(())
    } else {
        Err(Error::InvalidGenerator { i, j: n, n })
    }
}

/// Linear flow of `Ĵ_{ij}`, `j < N`: a rotation, boost or shear in the `ij` plane.
pub fn flow_rotation(params: &OmegaParams, i: usize, j: usize, t: f64, p: &GroupPoint) -> Result<GroupPoint> {
    let n = params.dim();
    p.expect_dim(n)?;
    check_plane(n, i, j)?;
    Ok(plane_rotation(params.w(i, j), i - 1, j - 1, t, p))
}

fn plane_rotation(w: f64, i0: usize, j0: usize, t: f64, p: &GroupPoint) -> GroupPoint {
    let (c, s) = cs_omega(w, t);
    let mut out = p.clone();
    out[i0] = c * p[i0] - s * p[j0];
    out[j0] = w * s * p[i0] + c * p[j0];
    out
}

/// Pieces of `F^{ω,z}_{iN}(α, t)` shared by the boost flow.
struct FTerms {
    e: f64,
    c: f64,
    s: f64,
    /// `sinh(zα_N)/z - (z/2) Σ ω_{sN} α_s² e^{zα_N}`
    second_over_z: f64,
    /// `F - 1`, assembled without cancellation.
    f_minus_one: f64,
}

fn f_terms(params: &OmegaParams, z: f64, i: usize, t: f64, p: &GroupPoint) -> Result<FTerms> {
    let n = params.dim();
    p.expect_dim(n)?;
    check_boost_index(n, i)?;
    let weights = params.boost_weights();
    let w = weights[i - 1];
    let u = z * p.last();
    let e = finite(u.exp(), "F function")?;
    let q = 0.5 * z * z * weighted_square_sum(&weights, p) * e;
    let (c, s) = cs_omega(w, t);
    let sh = finite(u.sinh(), "F function")?;
    let half = (0.5 * u).sinh();
    let f_minus_one = 2.0 * half * half + q * (1.0 - c) + sh * c + z * w * p[i - 1] * e * s;
    let second_over_z = p.last() * sinhc(u) - 0.5 * z * weighted_square_sum(&weights, p) * e;
    Ok(FTerms { e, c, s, second_over_z, f_minus_one: finite(f_minus_one, "F function")? })
}

/// `F^{ω,z}_{iN}(α, t) = [cosh(zα_N) + (z²/2) Σ ω_{sN} α_s² e^{zα_N}]
///  + [sinh(zα_N) - (z²/2) Σ ω_{sN} α_s² e^{zα_N}] C_{ω_iN}(t) + [z ω_{iN} α_i e^{zα_N}] S_{ω_iN}(t)`.
pub fn f_function(params: &OmegaParams, z: f64, i: usize, t: f64, p: &GroupPoint) -> Result<f64> {
    Ok(1.0 + f_terms(params, z, i, t, p)?.f_minus_one)
}

/// First bracket of `F`, `cosh(zα_N) + (z²/2) Σ ω_{sN} α_s² e^{zα_N}`, which
/// equals `1 + (z²/2) h_{ω,z}(α)`.
pub fn f_first_bracket(params: &OmegaParams, z: f64, p: &GroupPoint) -> Result<f64> {
    p.expect_dim(params.dim())?;
    let u = z * p.last();
    let e = finite(u.exp(), "F function")?;
    let q = 0.5 * z * z * weighted_square_sum(&params.boost_weights(), p) * e;
    finite(u.cosh() + q, "F function")
}

/// Flow of the deformed generator `Ĵ_{iN}` (requires `z ≠ 0`).
///
/// The result is marked undefined when `F ≤ 0`; the flow is local in general.
pub fn flow_boost(
    params: &OmegaParams,
    z: f64,
    i: usize,
    t: f64,
    p: &GroupPoint,
) -> Result<FlowResult<GroupPoint>> {
    if z == 0.0 {
        return Err(Error::Precondition("flow_boost needs z != 0; use flow_boost_limit".into()));
    }
    let n = params.dim();
    let ft = f_terms(params, z, i, t, p)?;
    if t == 0.0 {
        // exact identity rather than a round trip through exp/ln
        return Ok(FlowResult { point: p.clone(), defined: true, f_value: 1.0 });
    }
    let f = 1.0 + ft.f_minus_one;
    if f.is_nan() || f <= 0.0 {
        return Ok(FlowResult { point: GroupPoint(vec![f64::NAN; n]), defined: false, f_value: f });
    }
    let i0 = i - 1;
    let mut out = Vec::with_capacity(n);
    for (k, a) in p[..n - 1].iter().enumerate() {
        let v = if k == i0 {
            (-ft.second_over_z * ft.s + a * ft.e * ft.c) / f
        } else {
            a * ft.e / f
        };
        out.push(finite(v, "boost flow")?);
    }
    out.push(finite(ft.f_minus_one.ln_1p() / z, "boost flow")?);
    Ok(FlowResult { point: GroupPoint(out), defined: true, f_value: f })
}

/// Undeformed (`z → 0`) flow of `Ĵ_{iN}`: a linear motion in the `iN` plane.
pub fn flow_boost_limit(params: &OmegaParams, i: usize, t: f64, p: &GroupPoint) -> Result<GroupPoint> {
    let n = params.dim();
    p.expect_dim(n)?;
    check_boost_index(n, i)?;
    Ok(plane_rotation(params.w(i, n), i - 1, n - 1, t, p))
}

/// Flow of any generator, dispatching between the linear, deformed and limit forms.
pub fn flow_full(
    params: &OmegaParams,
    z: f64,
    gen: GeneratorId,
    t: f64,
    p: &GroupPoint,
) -> Result<FlowResult<GroupPoint>> {
    let n = params.dim();
    gen.check(n)?;
    if !gen.is_boost(n) {
        flow_rotation(params, gen.i, gen.j, t, p).map(FlowResult::always)
    } else if z.abs() < ZERO_Z_THRESHOLD {
        flow_boost_limit(params, gen.i, t, p).map(FlowResult::always)
    } else {
        flow_boost(params, z, gen.i, t, p)
    }
}

/// Flow `Φ^t_{a,b}` of `ẋ = -½ a x² - ½ + ½ b e^{-2y}`, `ẏ = a x`.
///
/// Globally defined for `a > 0, b > 0`; otherwise marked undefined once the
/// shared denominator stops being positive.
pub fn flow_reduced(a: f64, b: f64, t: f64, x: f64, y: f64) -> Result<FlowResult<ReducedState>> {
    let ey = finite(y.exp(), "reduced flow")?;
    let bemy = finite(b * (-y).exp(), "reduced flow")?;
    let ax2 = a * x * x * ey;
    let (c, s) = cs_omega(a, t);
    let den = (ax2 + ey + bemy) + (-ax2 + ey - bemy) * c + 2.0 * a * x * ey * s;
    let den = finite(den, "reduced flow")?;
    if t == 0.0 {
        return Ok(FlowResult { point: ReducedState { x, y }, defined: true, f_value: den });
    }
    if den.is_nan() || den <= 0.0 {
        return Ok(FlowResult {
            point: ReducedState { x: f64::NAN, y: f64::NAN },
            defined: false,
            f_value: den,
        });
    }
    let num = (ax2 - ey + bemy) * s + 2.0 * x * ey * c;
    let point = ReducedState {
        x: finite(num / den, "reduced flow")?,
        y: finite((0.5 * den).ln(), "reduced flow")?,
    };
    Ok(FlowResult { point, defined: true, f_value: den })
}

/// Integral curve `γ_r` through `(0, r)` for `a > 0`, `b > 0`, `r > ½ ln b`.
pub fn gamma_curve(a: f64, b: f64, r: f64, t: f64) -> Result<ReducedState> {
    if !(a > 0.0 && b > 0.0) {
        return Err(Error::Precondition(format!("gamma curve needs a > 0 and b > 0, got a={a}, b={b}")));
    }
    if r.is_nan() || r <= 0.5 * b.ln() {
        return Err(Error::Precondition(format!("gamma curve needs r > ln(b)/2, got r={r}")));
    }
    let er = finite(r.exp(), "gamma curve")?;
    let ber = b * (-r).exp();
    let (c, s) = cs_omega(a, t);
    let den = (er + ber) + (er - ber) * c;
    Ok(ReducedState { x: -(er - ber) * s / den, y: (0.5 * den).ln() })
}
