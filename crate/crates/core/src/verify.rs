//! Seeded verification suites over random samples.
//!
//! Samples are drawn sequentially from a ChaCha8 generator seeded with a
//! 64-bit seed, then evaluated through [`crate::batch::map`]; reports are
//! therefore identical for a given seed regardless of thread scheduling.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::batch;
use crate::error::{Error, Result};
use crate::fields::{lie_bracket, structure_combination, FieldSpec};
use crate::flows::{flow_boost, flow_boost_limit, flow_full, flow_reduced};
use crate::group::GroupPoint;
use crate::invariants::{aux_invariant, casimir, reduced_invariant};
use crate::reduced::{hamiltonian_check, ReducedParams, ReducedState};
use crate::structure::{jacobi_residual, GeneratorId, OmegaParams};

pub const JACOBI_TOL: f64 = 1e-12;
pub const CLOSURE_TOL: f64 = 1e-8;
pub const CONSERVATION_TOL: f64 = 1e-9;
pub const GROUP_LAW_TOL: f64 = 1e-9;
pub const HAMILTONIAN_TOL: f64 = 1e-12;
/// Accepted band for the fitted exponent of `‖Φ_z - Φ_0‖ ∝ z^slope`.
pub const LIMIT_SLOPE_TOL: f64 = 0.1;

const CANONICAL_OMEGAS: [f64; 3] = [-1.0, 0.0, 1.0];
const DEFORMATIONS: [f64; 3] = [0.1, 0.5, 1.0];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Jacobi,
    Closure,
    Conservation,
    GroupLaw,
    LimitZ0,
    Hamiltonian,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::Jacobi,
        Suite::Closure,
        Suite::Conservation,
        Suite::GroupLaw,
        Suite::LimitZ0,
        Suite::Hamiltonian,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Jacobi => "jacobi",
            Suite::Closure => "closure",
            Suite::Conservation => "conservation",
            Suite::GroupLaw => "group-law",
            Suite::LimitZ0 => "limit-z0",
            Suite::Hamiltonian => "hamiltonian",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| Error::InvalidParams(format!("unknown suite {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub seed: u64,
    pub samples: usize,
    /// Worst observed residual (for `limit-z0`, the worst deviation of the slope from 1).
    pub max_residual: f64,
    pub tolerance: f64,
    pub passed: bool,
}

pub fn run_suite(suite: Suite, seed: u64) -> SuiteReport {
    let (samples, max_residual, tolerance) = match suite {
        Suite::Jacobi => jacobi(),
        Suite::Closure => closure(seed),
        Suite::Conservation => conservation(seed),
        Suite::GroupLaw => group_law(seed),
        Suite::LimitZ0 => limit_z0(seed),
        Suite::Hamiltonian => hamiltonian(seed),
    };
    SuiteReport { suite, seed, samples, max_residual, tolerance, passed: max_residual <= tolerance }
}

pub fn run_all(seed: u64) -> Vec<SuiteReport> {
    Suite::ALL.iter().map(|&s| run_suite(s, seed)).collect()
}

/// Every `ω ∈ {-1, 0, 1}^{n-1}`.
pub fn sign_patterns(n: usize) -> Vec<OmegaParams> {
    let m = n - 1;
    (0..3usize.pow(m as u32))
        .map(|mut code| {
            let omegas = (0..m)
                .map(|_| {
                    let w = CANONICAL_OMEGAS[code % 3];
                    code /= 3;
                    w
                })
                .collect();
            OmegaParams::new(omegas).expect("valid dimension")
        })
        .collect()
}

pub(crate) fn random_params(rng: &mut ChaCha8Rng, n: usize) -> OmegaParams {
    let omegas = (0..n - 1).map(|_| CANONICAL_OMEGAS[rng.gen_range(0..3)]).collect();
    OmegaParams::new(omegas).expect("valid dimension")
}

pub(crate) fn random_point(rng: &mut ChaCha8Rng, n: usize, scale: f64) -> GroupPoint {
    GroupPoint((0..n).map(|_| rng.gen_range(-scale..scale)).collect())
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / (1.0 + b.abs())
}

fn rel_vec(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| rel(*x, *y)).fold(0.0, f64::max)
}

fn worst(values: impl IntoIterator<Item = f64>) -> f64 {
    // NaN counts as failure
    values.into_iter().fold(0.0, |acc, v| if v.is_nan() || acc.is_nan() { f64::NAN } else { acc.max(v) })
}

fn jacobi() -> (usize, f64, f64) {
    let all: Vec<OmegaParams> = (2..=6).flat_map(sign_patterns).collect();
    let residuals = batch::map(&all, jacobi_residual);
    (all.len(), worst(residuals), JACOBI_TOL)
}

fn closure(seed: u64) -> (usize, f64, f64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cases: Vec<(OmegaParams, f64, GroupPoint)> = (0..200)
        .map(|_| {
            let params = random_params(&mut rng, 3);
            let z = DEFORMATIONS[rng.gen_range(0..3)];
            (params, z, random_point(&mut rng, 3, 1.0))
        })
        .collect();
    let residuals = batch::map(&cases, |(params, z, p)| closure_residual(params, *z, p));
    (cases.len(), worst(residuals), CLOSURE_TOL)
}

/// Largest relative gap between pointwise field brackets and the bracket table.
pub fn closure_residual(params: &OmegaParams, z: f64, p: &GroupPoint) -> f64 {
    let gens = GeneratorId::all(params.dim());
    let mut out: f64 = 0.0;
    for &a in &gens {
        for &b in &gens {
            let fa = FieldSpec::new(params, z, a).expect("valid generator");
            let fb = FieldSpec::new(params, z, b).expect("valid generator");
            let lhs = lie_bracket(&fa, &fb, p);
            let rhs = structure_combination(params, z, a, b, p);
            match (lhs, rhs) {
                (Ok(l), Ok(r)) => out = out.max(rel_vec(&l, &r)),
                _ => return f64::NAN,
            }
        }
    }
    out
}

fn conservation(seed: u64) -> (usize, f64, f64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cases: Vec<(OmegaParams, f64, GroupPoint)> = (0..60)
        .map(|_| {
            let n = rng.gen_range(2..=4);
            let params = random_params(&mut rng, n);
            let z = DEFORMATIONS[rng.gen_range(0..3)];
            (params, z, random_point(&mut rng, n, 0.5))
        })
        .collect();
    let times: Vec<f64> = (0..=20).map(|k| -5.0 + 0.5 * k as f64).collect();
    let residuals = batch::map(&cases, |(params, z, p)| flow_conservation(params, *z, p, &times));

    let reduced: Vec<(f64, f64, f64, f64)> = (0..60)
        .map(|_| {
            (rng.gen_range(0.1..3.0), rng.gen_range(0.1..3.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        })
        .collect();
    let reduced_res = batch::map(&reduced, |&(a, b, x, y)| {
        let h0 = reduced_invariant(a, b, x, y).unwrap_or(f64::NAN);
        worst(times.iter().map(|&t| match flow_reduced(a, b, t, x, y) {
            Ok(r) if r.defined => rel(reduced_invariant(a, b, r.point.x, r.point.y).unwrap_or(f64::NAN), h0),
            _ => f64::NAN,
        }))
    });
    (cases.len() + reduced.len(), worst(residuals.into_iter().chain(reduced_res)), CONSERVATION_TOL)
}

/// Worst drift of the Casimir along every generator flow, and of the
/// auxiliary invariants `k ≠ i` along each boost, over `times`. Undefined
/// flow evaluations are skipped.
pub fn flow_conservation(params: &OmegaParams, z: f64, p: &GroupPoint, times: &[f64]) -> f64 {
    let n = params.dim();
    let Ok(h0) = casimir(params, z, p) else { return f64::NAN };
    let mut out: f64 = 0.0;
    for gen in GeneratorId::all(n) {
        for &t in times {
            let res = match flow_full(params, z, gen, t, p) {
                Ok(r) if r.defined => r.point,
                Ok(_) => continue,
                Err(_) => return f64::NAN,
            };
            let Ok(h) = casimir(params, z, &res) else { return f64::NAN };
            out = out.max(rel(h, h0));
            if gen.is_boost(n) {
                for k in (1..n).filter(|&k| k != gen.i) {
                    let (Ok(b), Ok(b0)) = (aux_invariant(z, k, &res), aux_invariant(z, k, p)) else {
                        return f64::NAN;
                    };
                    out = out.max(rel(b, b0));
                }
            }
        }
    }
    out
}

fn group_law(seed: u64) -> (usize, f64, f64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cases = Vec::new();
    for n in 2..=4 {
        for gen in GeneratorId::all(n) {
            for _ in 0..100 {
                let params = random_params(&mut rng, n);
                let z = DEFORMATIONS[rng.gen_range(0..3)];
                let p = random_point(&mut rng, n, 0.5);
                let (t, s) = (rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
                cases.push((params, z, gen, p, t, s));
            }
        }
    }
    let residuals = batch::map(&cases, |(params, z, gen, p, t, s)| {
        group_law_residual(params, *z, *gen, p, *t, *s).unwrap_or(0.0)
    });
    (cases.len(), worst(residuals), GROUP_LAW_TOL)
}

/// `‖Φ^{t+s}(p) - Φ^t(Φ^s(p))‖` (relative), or `None` when any evaluation is undefined.
pub fn group_law_residual(
    params: &OmegaParams,
    z: f64,
    gen: GeneratorId,
    p: &GroupPoint,
    t: f64,
    s: f64,
) -> Option<f64> {
    let inner = flow_full(params, z, gen, s, p).ok().filter(|r| r.defined)?;
    let twice = flow_full(params, z, gen, t, &inner.point).ok().filter(|r| r.defined)?;
    let once = flow_full(params, z, gen, t + s, p).ok().filter(|r| r.defined)?;
    Some(rel_vec(&twice.point, &once.point))
}

fn limit_z0(seed: u64) -> (usize, f64, f64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cases: Vec<(OmegaParams, usize, GroupPoint, f64)> = (0..50)
        .map(|_| {
            let n = rng.gen_range(2..=4);
            let params = random_params(&mut rng, n);
            let i = rng.gen_range(1..n);
            (params, i, random_point(&mut rng, n, 1.0), rng.gen_range(0.2..2.0))
        })
        .collect();
    let slopes = batch::map(&cases, |(params, i, p, t)| limit_slope(params, *i, p, *t));
    let dev = worst(slopes.into_iter().flatten().map(|s| (s - 1.0).abs()));
    (cases.len(), dev, LIMIT_SLOPE_TOL)
}

/// Deviations `‖Φ_z - Φ_0‖` for `z ∈ {1e-3, 1e-4, 1e-5}`.
pub fn limit_deviations(params: &OmegaParams, i: usize, p: &GroupPoint, t: f64) -> Option<[f64; 3]> {
    let limit = flow_boost_limit(params, i, t, p).ok()?;
    let mut out = [0.0; 3];
    for (slot, z) in out.iter_mut().zip([1e-3, 1e-4, 1e-5]) {
        let r = flow_boost(params, z, i, t, p).ok().filter(|r| r.defined)?;
        *slot = r.point.iter().zip(limit.iter()).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
    }
    Some(out)
}

/// Least-squares slope of `log ‖Φ_z - Φ_0‖` against `log z`; `None` when the
/// deviation is too small to resolve (e.g. the orbit of a fixed point).
pub fn limit_slope(params: &OmegaParams, i: usize, p: &GroupPoint, t: f64) -> Option<f64> {
    let d = limit_deviations(params, i, p, t)?;
    if d[2] < 1e-12 {
        return None;
    }
    let xs = [-3.0f64, -4.0, -5.0];
    let ys: Vec<f64> = d.iter().map(|v| v.log10()).collect();
    let (mx, my) = (xs.iter().sum::<f64>() / 3.0, ys.iter().sum::<f64>() / 3.0);
    let num: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let den: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    Some(num / den)
}

fn hamiltonian(seed: u64) -> (usize, f64, f64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cases: Vec<(ReducedParams, ReducedState)> = (0..1000)
        .map(|_| {
            let pp = ReducedParams::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
            (pp, ReducedState::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        })
        .collect();
    let residuals = batch::map(&cases, |&(pp, s)| match hamiltonian_check(pp, s) {
        Ok([rx, ry]) => rx.abs().max(ry.abs()),
        Err(_) => f64::NAN,
    });
    (cases.len(), worst(residuals), HAMILTONIAN_TOL)
}
