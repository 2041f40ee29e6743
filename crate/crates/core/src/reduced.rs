//! The planar system obtained from a boost field after removing the
//! spectator coordinates and rescaling `x = zα_i`, `y = zα_N`:
//!
//! ```text
//! ẋ = -½ a x² - ½ + ½ b e^{-2y},   ẏ = a x,   a = ω_iN,  b = 1 + z² ρ
//! ```
//!
//! It is Hamiltonian for the symplectic form `2e^y dx∧dy` with Hamiltonian
//! `h_{a,b}`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{finite, Error, Result};
use crate::group::GroupPoint;
use crate::invariants::reduced_gradient;
use crate::structure::{OmegaParams, OMEGA_ZERO_EPS};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReducedState {
    pub x: f64,
    pub y: f64,
}

impl ReducedState {
    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }
}

/// Parameters `(a, b)` of the planar system.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReducedParams {
    pub a: f64,
    pub b: f64,
}

impl ReducedParams {
    pub fn new(a: f64, b: f64) -> Self {
        Self { a, b }
    }
}

/// Result of [`reduce`]: the planar state and parameters together with the
/// conserved spectator values `β_k = α_k e^{zα_N}`, so that `b = 1 + z² ρ`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Reduction {
    pub state: ReducedState,
    pub params: ReducedParams,
    pub rho: f64,
    /// `(k, β_k)` for every spectator coordinate `k ≠ i, N` (1-based).
    pub betas: Vec<(usize, f64)>,
    pub z: f64,
    pub i: usize,
    pub n: usize,
}

/// Reduces `p` with respect to the boost `Ĵ_{iN}`.
pub fn reduce(params: &OmegaParams, z: f64, i: usize, p: &GroupPoint) -> Result<Reduction> {
    let n = params.dim();
    p.expect_dim(n)?;
    if z == 0.0 {
        return Err(Error::Precondition("reduction needs z != 0".into()));
    }
    if i < 1 || i >= n {
        return Err(Error::InvalidGenerator { i, j: n, n });
    }
    let e = finite((z * p.last()).exp(), "reduce")?;
    let mut betas = Vec::new();
    let mut rho = 0.0;
    for k in 1..n {
        if k == i {
            continue;
        }
        let beta = finite(p[k - 1] * e, "reduce")?;
        rho += params.w(k, n) * beta * beta;
        betas.push((k, beta));
    }
    let rho = finite(rho, "reduce")?;
    Ok(Reduction {
        state: ReducedState { x: z * p[i - 1], y: z * p.last() },
        params: ReducedParams { a: params.w(i, n), b: 1.0 + z * z * rho },
        rho,
        betas,
        z,
        i,
        n,
    })
}

impl Reduction {
    /// Recovers a full point from a planar state on the same spectator level.
    pub fn lift(&self, s: ReducedState) -> Result<GroupPoint> {
        let mut out = vec![0.0; self.n];
        let scale = finite((-s.y).exp(), "lift")?;
        for &(k, beta) in &self.betas {
            out[k - 1] = beta * scale;
        }
        out[self.i - 1] = s.x / self.z;
        out[self.n - 1] = s.y / self.z;
        Ok(GroupPoint(out))
    }
}

/// Right-hand side `(ẋ, ẏ)`.
pub fn rhs(pp: ReducedParams, s: ReducedState) -> [f64; 2] {
    let ReducedParams { a, b } = pp;
    [-0.5 * a * s.x * s.x - 0.5 + 0.5 * b * (-2.0 * s.y).exp(), a * s.x]
}

/// Analytic Jacobian of [`rhs`].
pub fn linearization(pp: ReducedParams, s: ReducedState) -> [[f64; 2]; 2] {
    let ReducedParams { a, b } = pp;
    [[-a * s.x, -b * (-2.0 * s.y).exp()], [a, 0.0]]
}

/// Eigenvalues of a real 2×2 matrix, ordered with the larger real (then imaginary) part first.
pub fn eigenvalues_2x2(m: [[f64; 2]; 2]) -> [Complex64; 2] {
    let tr = m[0][0] + m[1][1];
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    let disc = 0.25 * tr * tr - det;
    let half = Complex64::new(0.5 * tr, 0.0);
    let root = if disc >= 0.0 {
        Complex64::new(disc.sqrt(), 0.0)
    } else {
        Complex64::new(0.0, (-disc).sqrt())
    };
    [half + root, half - root]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FixedPointKind {
    None,
    Elliptic,
    Hyperbolic,
    Line,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FixedPointReport {
    pub kind: FixedPointKind,
    /// The equilibrium, or for a line of equilibria its point with `x = 0`.
    pub location: Option<[f64; 2]>,
    /// Empty when there is no equilibrium.
    pub eigenvalues: Vec<Complex64>,
}

/// Equilibria of the planar system and their linear type.
///
/// * `b ≤ 0`: none
/// * `b > 0, a < 0`: hyperbolic at `(0, ½ ln b)`, eigenvalues `±√|a|`
/// * `b > 0, a = 0`: the line `y = ½ ln b`
/// * `b > 0, a > 0`: elliptic at `(0, ½ ln b)`, eigenvalues `±i√a`
pub fn fixed_points(pp: ReducedParams) -> FixedPointReport {
    let ReducedParams { a, b } = pp;
    if b.is_nan() || b <= 0.0 {
        return FixedPointReport { kind: FixedPointKind::None, location: None, eigenvalues: vec![] };
    }
    let location = Some([0.0, 0.5 * b.ln()]);
    let zero = Complex64::new(0.0, 0.0);
    let (kind, eigenvalues) = if a == 0.0 {
        (FixedPointKind::Line, vec![zero, zero])
    } else if a < 0.0 {
        let r = (-a).sqrt();
        (FixedPointKind::Hyperbolic, vec![Complex64::new(r, 0.0), Complex64::new(-r, 0.0)])
    } else {
        let r = a.sqrt();
        (FixedPointKind::Elliptic, vec![Complex64::new(0.0, r), Complex64::new(0.0, -r)])
    };
    FixedPointReport { kind, location, eigenvalues }
}

/// `(ẍ, ÿ)` predicted by the second-order forms of the system:
/// `ẍ = -3axẋ - ax - a²x³`, `ÿ = -½ẏ² - ½a(1 - b e^{-2y})`.
pub fn second_order_accelerations(pp: ReducedParams, s: ReducedState, velocity: [f64; 2]) -> [f64; 2] {
    let ReducedParams { a, b } = pp;
    let [vx, vy] = velocity;
    let x = s.x;
    [
        -3.0 * a * x * vx - a * x - a * a * x * x * x,
        -0.5 * vy * vy - 0.5 * a * (1.0 - b * (-2.0 * s.y).exp()),
    ]
}

/// Residuals `ẍ + 3axẋ + ax + a²x³` and `ÿ + ½ẏ² + ½a(1 - b e^{-2y})`.
pub fn second_order_residuals(
    pp: ReducedParams,
    s: ReducedState,
    velocity: [f64; 2],
    acceleration: [f64; 2],
) -> [f64; 2] {
    let pred = second_order_accelerations(pp, s, velocity);
    [acceleration[0] - pred[0], acceleration[1] - pred[1]]
}

/// Density `Ω = 2e^y` of the symplectic form `Ω dx∧dy`.
pub fn symplectic_density(y: f64) -> f64 {
    2.0 * y.exp()
}

/// Hamiltonian vector field of `h_{a,b}` for `Ω dx∧dy`: `X_h ⌋ ω = -dh`.
pub fn hamiltonian_vector_field(pp: ReducedParams, s: ReducedState) -> Result<[f64; 2]> {
    let [hx, hy] = reduced_gradient(pp.a, pp.b, s.x, s.y)?;
    let omega = symplectic_density(s.y);
    Ok([-hy / omega, hx / omega])
}

/// Residuals `Ω ẏ - ∂_x h_{a,b}` and `Ω ẋ + ∂_y h_{a,b}` of the contraction
/// identity `X_{a,b} ⌋ (2e^y dx∧dy) = -dh_{a,b}`.
pub fn hamiltonian_check(pp: ReducedParams, s: ReducedState) -> Result<[f64; 2]> {
    let [vx, vy] = rhs(pp, s);
    let [hx, hy] = reduced_gradient(pp.a, pp.b, s.x, s.y)?;
    let omega = symplectic_density(s.y);
    Ok([omega * vy - hx, omega * vx + hy])
}

/// Inertia of the quadratic form `Σ ω_{jN} α_j² + α_N²`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Signature {
    pub positive: usize,
    pub negative: usize,
    pub zero: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LevelShape {
    Empty,
    Point,
    /// A linear subspace through the origin (degenerate form, level 0).
    Subspace,
    Cone,
    /// Compact and connected.
    Ellipsoid,
    /// Connected and unbounded.
    OneSheet,
    TwoSheets,
    /// Regular level of a deformed invariant whose topology is not resolved here.
    Unclassified,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LevelSetReport {
    pub value: f64,
    pub z: f64,
    pub signature: Signature,
    /// `true` when the level contains a critical point of the invariant.
    pub critical: bool,
    pub shape: LevelShape,
    pub components: Option<usize>,
    pub bounded: Option<bool>,
}

/// Describes the level set `h_{ω,z} = value`.
///
/// For `z = 0` this is the quadric `Σ ω_{jN} α_j² + α_N² = value`, classified
/// by inertia and the sign of the level. For `z ≠ 0` the only critical value
/// is `0`; when every `ω_{jN} > 0` the invariant is proper with a single
/// minimum at the origin, so its levels are empty, the origin, or spheres.
pub fn classify_level_set(params: &OmegaParams, z: f64, value: f64) -> LevelSetReport {
    let mut sig = Signature { positive: 1, negative: 0, zero: 0 };
    for w in params.boost_weights() {
        if w.abs() < OMEGA_ZERO_EPS {
            sig.zero += 1;
        } else if w > 0.0 {
            sig.positive += 1;
        } else {
            sig.negative += 1;
        }
    }
    let critical = value == 0.0;
    let (shape, components, bounded) = if z == 0.0 {
        quadric_shape(sig, value)
    } else if sig.negative == 0 && sig.zero == 0 {
        if value < 0.0 {
            (LevelShape::Empty, Some(0), Some(true))
        } else if value == 0.0 {
            (LevelShape::Point, Some(1), Some(true))
        } else {
            (LevelShape::Ellipsoid, Some(1), Some(true))
        }
    } else {
        (LevelShape::Unclassified, None, None)
    };
    LevelSetReport { value, z, signature: sig, critical, shape, components, bounded }
}

fn quadric_shape(sig: Signature, c: f64) -> (LevelShape, Option<usize>, Option<bool>) {
    let Signature { positive: p, negative: q, zero: r } = sig;
    if c > 0.0 {
        if q == 0 && r == 0 {
            (LevelShape::Ellipsoid, Some(1), Some(true))
        } else if p == 1 {
            (LevelShape::TwoSheets, Some(2), Some(false))
        } else {
            (LevelShape::OneSheet, Some(1), Some(false))
        }
    } else if c < 0.0 {
        match q {
            0 => (LevelShape::Empty, Some(0), Some(true)),
            1 => (LevelShape::TwoSheets, Some(2), Some(false)),
            _ => (LevelShape::OneSheet, Some(1), Some(false)),
        }
    } else if q == 0 {
        if r == 0 {
            (LevelShape::Point, Some(1), Some(true))
        } else {
            (LevelShape::Subspace, Some(1), Some(false))
        }
    } else {
        (LevelShape::Cone, Some(1), Some(false))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::invariants::{aux_invariant, casimir, reduced_invariant};

    fn om(w: &[f64]) -> OmegaParams {
        OmegaParams::new(w.to_vec()).unwrap()
    }

    #[test]
    fn reduce_origin_and_planar_case() {
        let params = om(&[1.0, -1.0]);
        let r = reduce(&params, 0.7, 1, &GroupPoint::origin(3)).unwrap();
        assert_eq!(r.state, ReducedState::new(0.0, 0.0));
        assert_eq!((r.rho, r.params.b), (0.0, 1.0));

        let planar = om(&[-1.0]);
        let r = reduce(&planar, 0.7, 1, &GroupPoint::from(vec![0.3, 0.9])).unwrap();
        assert!(r.betas.is_empty());
        assert_eq!((r.rho, r.params.b, r.params.a), (0.0, 1.0, -1.0));
    }

    #[test]
    fn reduce_lift_round_trip() {
        let params = om(&[1.0, -1.0, 1.0]);
        let p = GroupPoint::from(vec![0.3, -0.4, 0.8, 0.25]);
        let r = reduce(&params, 0.6, 2, &p).unwrap();
        let back = r.lift(r.state).unwrap();
        for (a, b) in back.iter().zip(p.iter()) {
            assert!((a - b).abs() < 1e-15);
        }
        for &(k, beta) in &r.betas {
            assert_eq!(beta, aux_invariant(0.6, k, &p).unwrap());
        }
        assert!((r.params.b - (1.0 + 0.36 * r.rho)).abs() < 1e-15);
    }

    #[test]
    fn reduce_rejects_bad_input() {
        let params = om(&[1.0, 1.0]);
        let p = GroupPoint::origin(3);
        assert!(reduce(&params, 0.0, 1, &p).is_err());
        assert!(reduce(&params, 1.0, 3, &p).is_err());
    }

    #[test]
    fn reduced_invariant_is_shifted_casimir() {
        // h_{a,b}(x, y) = z² h_{ω,z}(α) + 2
        let params = om(&[-1.0, 1.0, 1.0]);
        let p = GroupPoint::from(vec![0.3, -0.4, 0.8, 0.25]);
        for (z, i) in [(0.5, 1), (1.3, 3)] {
            let r = reduce(&params, z, i, &p).unwrap();
            let h = reduced_invariant(r.params.a, r.params.b, r.state.x, r.state.y).unwrap();
            let c = casimir(&params, z, &p).unwrap();
            assert!((h - (z * z * c + 2.0)).abs() < 1e-13);
        }
    }

    #[test]
    fn rhs_examples() {
        assert_eq!(rhs(ReducedParams::new(1.0, 1.0), ReducedState::new(0.0, 0.0)), [0.0, 0.0]);
        let b: f64 = 3.0;
        for x in [-2.0, 0.0, 5.0] {
            let v = rhs(ReducedParams::new(0.0, b), ReducedState::new(x, 0.5 * b.ln()));
            assert!(v[0].abs() < 1e-15 && v[1] == 0.0);
        }
    }

    #[test]
    fn fixed_point_table() {
        let rep = fixed_points(ReducedParams::new(1.0, 1.0));
        assert_eq!(rep.kind, FixedPointKind::Elliptic);
        assert_eq!(rep.location, Some([0.0, 0.0]));
        assert_eq!(rep.eigenvalues, vec![Complex64::new(0.0, 1.0), Complex64::new(0.0, -1.0)]);

        let e2 = std::f64::consts::E * std::f64::consts::E;
        let rep = fixed_points(ReducedParams::new(-1.0, e2));
        assert_eq!(rep.kind, FixedPointKind::Hyperbolic);
        assert!((rep.location.unwrap()[1] - 1.0).abs() < 1e-15);
        assert_eq!(rep.eigenvalues, vec![Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0)]);

        assert_eq!(fixed_points(ReducedParams::new(2.0, -0.5)).kind, FixedPointKind::None);
        assert_eq!(fixed_points(ReducedParams::new(2.0, 0.0)).kind, FixedPointKind::None);
        let line = fixed_points(ReducedParams::new(0.0, 2.0));
        assert_eq!(line.kind, FixedPointKind::Line);
        assert!(line.eigenvalues.iter().all(|e| e.norm() == 0.0));
    }

    #[test]
    fn linearization_eigenvalues_match_report() {
        for (a, b) in [(1.0, 1.0), (-2.0, 3.0), (0.5, 0.2), (-0.3, 7.0)] {
            let pp = ReducedParams::new(a, b);
            let rep = fixed_points(pp);
            let [x, y] = rep.location.unwrap();
            let ev = eigenvalues_2x2(linearization(pp, ReducedState::new(x, y)));
            for (u, v) in ev.iter().zip(&rep.eigenvalues) {
                assert!((u - v).norm() < 1e-12, "{a},{b}: {ev:?} vs {:?}", rep.eigenvalues);
            }
        }
    }

    #[test]
    fn second_order_special_cases() {
        let pp = ReducedParams::new(1.0, 1.0);
        let s = ReducedState::new(0.0, 0.0);
        assert_eq!(second_order_residuals(pp, s, [0.0, 0.0], [0.0, 0.0]), [0.0, 0.0]);
        let flat = ReducedParams::new(0.0, 2.0);
        let acc = second_order_accelerations(flat, ReducedState::new(0.4, -0.3), [0.7, 1.5]);
        assert_eq!(acc, [0.0, -0.5 * 1.5 * 1.5]);
    }

    #[test]
    fn hamiltonian_identity() {
        let r = hamiltonian_check(ReducedParams::new(1.0, 1.0), ReducedState::new(0.0, 0.0)).unwrap();
        assert_eq!(r, [0.0, 0.0]);
        let pp = ReducedParams::new(-1.3, 0.4);
        let s = ReducedState::new(0.7, -0.2);
        let [rx, ry] = hamiltonian_check(pp, s).unwrap();
        assert!(rx.abs() < 1e-14 && ry.abs() < 1e-14);
        let xh = hamiltonian_vector_field(pp, s).unwrap();
        let v = rhs(pp, s);
        assert!((xh[0] - v[0]).abs() < 1e-14 && (xh[1] - v[1]).abs() < 1e-14);
    }

    #[test]
    fn level_sets() {
        let euclid = om(&[1.0, 1.0]);
        let rep = classify_level_set(&euclid, 0.5, 0.0);
        assert_eq!((rep.shape, rep.critical), (LevelShape::Point, true));
        let rep = classify_level_set(&euclid, 0.0, 1.0);
        assert_eq!((rep.shape, rep.components, rep.bounded), (LevelShape::Ellipsoid, Some(1), Some(true)));
        assert!(!rep.critical);
        assert_eq!(classify_level_set(&euclid, 0.5, -1.0).shape, LevelShape::Empty);

        let lorentz = om(&[-1.0, 1.0]);
        let rep = classify_level_set(&lorentz, 0.0, -1.0);
        assert_eq!(rep.signature, Signature { positive: 2, negative: 1, zero: 0 });
        assert_eq!((rep.shape, rep.components), (LevelShape::TwoSheets, Some(2)));
        assert_eq!(classify_level_set(&lorentz, 0.0, 1.0).shape, LevelShape::OneSheet);
        assert_eq!(classify_level_set(&lorentz, 0.0, 0.0).shape, LevelShape::Cone);
        assert_eq!(classify_level_set(&lorentz, 0.3, 1.0).shape, LevelShape::Unclassified);

        let galilei = om(&[0.0, 1.0]);
        let rep = classify_level_set(&galilei, 0.0, 0.0);
        assert_eq!(rep.signature.zero, 1);
        assert_eq!(rep.shape, LevelShape::Subspace);
        assert_eq!(classify_level_set(&galilei, 0.0, 2.0).shape, LevelShape::OneSheet);

        let planar = om(&[-1.0]);
        assert_eq!(classify_level_set(&planar, 0.0, 1.0).shape, LevelShape::TwoSheets);
    }
}
