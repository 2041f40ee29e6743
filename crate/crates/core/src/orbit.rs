//! Sampling of closed-form orbits on a uniform time grid, with invariant
//! traces and an optional comparison against the integrator.

use serde::Serialize;

use crate::batch;
use crate::error::{Error, Result};
use crate::fields::{eval_field, FieldSpec};
use crate::flows::{flow_full, flow_reduced};
use crate::group::GroupPoint;
use crate::invariants::{aux_invariant, casimir, reduced_invariant};
use crate::oracle::{integrate, IntegrationSpec, IntegrationStatus};
use crate::reduced::ReducedParams;
use crate::structure::{GeneratorId, OmegaParams};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrbitSample {
    pub t: f64,
    pub point: Vec<f64>,
    pub casimir: f64,
    /// `α_k e^{zα_N}` for `k = 1, …, N-1`.
    pub aux: Vec<f64>,
    pub defined: bool,
    /// Relative deviation from the integrator, when requested.
    pub oracle_deviation: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReducedSample {
    pub t: f64,
    pub x: f64,
    pub y: f64,
    pub invariant: f64,
    pub defined: bool,
}

/// Grid `0, dt, 2dt, …` up to `t_max` (negative `t_max` walks backwards).
pub fn time_grid(t_max: f64, dt: f64) -> Result<Vec<f64>> {
    if !dt.is_finite() || dt <= 0.0 || !t_max.is_finite() {
        return Err(Error::InvalidParams(format!("need dt > 0 and finite t_max, got dt={dt}, t_max={t_max}")));
    }
    let steps = (t_max.abs() / dt + 1e-9).floor() as usize;
    let sign = if t_max < 0.0 { -1.0 } else { 1.0 };
    Ok((0..=steps).map(|k| sign * k as f64 * dt).collect())
}

fn truncate_after_first_undefined<S>(rows: Vec<S>, defined: impl Fn(&S) -> bool) -> Vec<S> {
    match rows.iter().position(|r| !defined(r)) {
        Some(k) => rows.into_iter().take(k + 1).collect(),
        None => rows,
    }
}

/// Samples the flow of `gen` from `p`. Sampling stops at the first time the
/// flow is undefined; that row is kept with `defined = false`.
pub fn sample_orbit(
    params: &OmegaParams,
    z: f64,
    gen: GeneratorId,
    p: &GroupPoint,
    times: &[f64],
    with_oracle: bool,
) -> Result<Vec<OrbitSample>> {
    let n = params.dim();
    gen.check(n)?;
    p.expect_dim(n)?;
    let rows: Result<Vec<OrbitSample>> = batch::map(times, |&t| {
        let res = flow_full(params, z, gen, t, p)?;
        let (casimir, aux) = if res.defined {
            let c = casimir(params, z, &res.point)?;
            let aux = (1..n).map(|k| aux_invariant(z, k, &res.point)).collect::<Result<Vec<_>>>()?;
            (c, aux)
        } else {
            (f64::NAN, vec![f64::NAN; n - 1])
        };
        Ok(OrbitSample { t, point: res.point.0, casimir, aux, defined: res.defined, oracle_deviation: None })
    })
    .into_iter()
    .collect();
    let mut rows = truncate_after_first_undefined(rows?, |r| r.defined);
    if with_oracle {
        attach_oracle(params, z, gen, p, &mut rows)?;
    }
    Ok(rows)
}

fn attach_oracle(
    params: &OmegaParams,
    z: f64,
    gen: GeneratorId,
    p: &GroupPoint,
    rows: &mut [OrbitSample],
) -> Result<()> {
    let spec = FieldSpec::new(params, z, gen)?;
    let rhs = |_t: f64, y: &[f64], dy: &mut [f64]| match eval_field(&spec, &GroupPoint::from(y)) {
        Ok(v) => dy.copy_from_slice(&v),
        Err(_) => dy.fill(f64::NAN),
    };
    let defined: Vec<f64> = rows.iter().filter(|r| r.defined).map(|r| r.t).collect();
    let Some(&t_end) = defined.last() else { return Ok(()) };
    let traj = integrate(&IntegrationSpec::new(rhs, 0.0, t_end, p.0.clone()).output_times(defined))?;
    let completed = traj.status == IntegrationStatus::Completed;
    for row in rows.iter_mut().filter(|r| r.defined) {
        let hit = traj.samples.iter().find(|(t, _)| *t == row.t);
        row.oracle_deviation = Some(match hit {
            Some((_, s)) if completed || s.iter().all(|v| v.is_finite()) => relative_deviation(&row.point, s),
            _ => f64::NAN,
        });
    }
    Ok(())
}

/// `max_k |a_k - b_k| / (1 + |b_k|)`.
pub fn relative_deviation(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs() / (1.0 + y.abs())).fold(0.0, f64::max)
}

/// Samples `Φ^t_{a,b}` from `(x, y)` along with `h_{a,b}`.
pub fn sample_reduced_orbit(pp: ReducedParams, x: f64, y: f64, times: &[f64]) -> Result<Vec<ReducedSample>> {
    let rows: Result<Vec<ReducedSample>> = batch::map(times, |&t| {
        let res = flow_reduced(pp.a, pp.b, t, x, y)?;
        let invariant = if res.defined {
            reduced_invariant(pp.a, pp.b, res.point.x, res.point.y)?
        } else {
            f64::NAN
        };
        Ok(ReducedSample { t, x: res.point.x, y: res.point.y, invariant, defined: res.defined })
    })
    .into_iter()
    .collect();
    Ok(truncate_after_first_undefined(rows?, |r| r.defined))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid() {
        let g = time_grid(5.0, 0.05).unwrap();
        assert_eq!(g.len(), 101);
        assert_eq!(time_grid(0.0, 0.1).unwrap(), vec![0.0]);
        assert_eq!(time_grid(-0.3, 0.1).unwrap().len(), 4);
        assert!(time_grid(1.0, 0.0).is_err());
    }

    #[test]
    fn orbit_conserves_casimir() {
        let params = OmegaParams::new(vec![1.0, 1.0]).unwrap();
        let p = GroupPoint::from(vec![0.1, 0.2, 0.3]);
        let times = time_grid(5.0, 0.05).unwrap();
        let rows = sample_orbit(&params, 0.5, GeneratorId { i: 1, j: 3 }, &p, &times, true).unwrap();
        assert_eq!(rows.len(), 101);
        let h0 = rows[0].casimir;
        for r in &rows {
            assert!(r.defined);
            assert!((r.casimir - h0).abs() <= 1e-9 * (1.0 + h0.abs()));
            assert!(r.oracle_deviation.unwrap() <= 1e-6, "{r:?}");
            assert!((r.aux[1] - rows[0].aux[1]).abs() < 1e-12);
        }
    }

    #[test]
    fn orbit_stops_at_domain_exit() {
        let params = OmegaParams::new(vec![1.0, -1.0]).unwrap();
        let p = GroupPoint::from(vec![1.0, 0.0, 0.0]);
        let times = time_grid(5.0, 0.1).unwrap();
        let rows = sample_orbit(&params, 1.0, GeneratorId { i: 1, j: 3 }, &p, &times, true).unwrap();
        assert!(rows.len() < times.len());
        assert!(!rows.last().unwrap().defined);
        assert!(rows[..rows.len() - 1].iter().all(|r| r.defined));
    }
}
