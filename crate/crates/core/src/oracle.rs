//! Adaptive Dormand-Prince 5(4) integrator with PI step control and
//! fourth-order dense output.
//!
//! Used as the ground truth against which the closed-form flows and
//! conservation laws are checked. It knows nothing about the flows.

use serde::Serialize;

use crate::error::{Error, Result};

/// Tolerances used when the integrator acts as an oracle.
pub const ORACLE_REL_TOL: f64 = 1e-10;
pub const ORACLE_ABS_TOL: f64 = 1e-12;
pub const DEFAULT_MAX_STEPS: usize = 1_000_000;

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

// step-size controller
const SAFETY: f64 = 0.9;
const FAC_MIN: f64 = 0.2;
const FAC_MAX: f64 = 10.0;
const BETA: f64 = 0.04;
const EXPO: f64 = 0.2 - BETA * 0.75;

/// An initial value problem `y' = f(t, y)`, `y(t0) = initial`, on `[t0, t1]`
/// (or `[t1, t0]` when integrating backwards).
pub struct IntegrationSpec<F> {
    pub rhs: F,
    pub t0: f64,
    pub t1: f64,
    pub initial: Vec<f64>,
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_steps: usize,
    /// When set, samples are reported only at these times (by dense
    /// interpolation) plus `t0`; otherwise at every accepted step.
    pub output_times: Option<Vec<f64>>,
}

impl<F> IntegrationSpec<F>
where
    F: Fn(f64, &[f64], &mut [f64]),
{
    pub fn new(rhs: F, t0: f64, t1: f64, initial: Vec<f64>) -> Self {
        Self {
            rhs,
            t0,
            t1,
            initial,
            rel_tol: ORACLE_REL_TOL,
            abs_tol: ORACLE_ABS_TOL,
            max_steps: DEFAULT_MAX_STEPS,
            output_times: None,
        }
    }

    pub fn tolerances(mut self, rel_tol: f64, abs_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self.abs_tol = abs_tol;
        self
    }

    pub fn max_steps(mut self, max_steps: usize) -> Self {
        self.max_steps = max_steps;
        self
    }

    pub fn output_times(mut self, times: Vec<f64>) -> Self {
        self.output_times = Some(times);
        self
    }

    fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.abs_tol > 0.0) {
            return Err(Error::InvalidParams("tolerances must be positive".into()));
        }
        if self.max_steps == 0 {
            return Err(Error::InvalidParams("max_steps must be positive".into()));
        }
        if !(self.t0.is_finite() && self.t1.is_finite()) {
            return Err(Error::InvalidParams("integration bounds must be finite".into()));
        }
        if self.initial.is_empty() || self.initial.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidParams("initial state must be nonempty and finite".into()));
        }
        if let Some(times) = &self.output_times {
            let dir = (self.t1 - self.t0).signum();
            let mut prev = self.t0;
            for &t in times {
                let ahead = (t - prev) * dir;
                let beyond = (t - self.t1) * dir;
                if !t.is_finite() || ahead < 0.0 || beyond > 0.0 || (ahead == 0.0 && t != self.t0) {
                    return Err(Error::InvalidParams(format!(
                        "output time {t} is not monotone inside [{}, {}]",
                        self.t0, self.t1
                    )));
                }
                prev = t;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum IntegrationStatus {
    Completed,
    StepLimit,
    DomainError,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trajectory {
    /// `(t, state)` pairs, strictly monotone in the integration direction.
    pub samples: Vec<(f64, Vec<f64>)>,
    pub status: IntegrationStatus,
    pub accepted_steps: usize,
    pub rejected_steps: usize,
}

impl Trajectory {
    /// State at the last sample.
    pub fn final_state(&self) -> &[f64] {
        &self.samples.last().expect("trajectory has at least the initial sample").1
    }

    pub fn final_time(&self) -> f64 {
        self.samples.last().expect("trajectory has at least the initial sample").0
    }
}

fn error_norm(err: &[f64], y: &[f64], y_new: &[f64], rel: f64, abs: f64) -> f64 {
    let n = err.len() as f64;
    let sum: f64 = err
        .iter()
        .zip(y.iter().zip(y_new))
        .map(|(e, (a, b))| {
            let sk = abs + rel * a.abs().max(b.abs());
            (e / sk).powi(2)
        })
        .sum();
    (sum / n).sqrt()
}

/// Integrates `spec` and returns the sampled trajectory.
///
/// Returns an error only for an invalid spec; running out of steps or
/// meeting a non-finite right-hand side ends the trajectory with the
/// corresponding [`IntegrationStatus`].
pub fn integrate<F>(spec: &IntegrationSpec<F>) -> Result<Trajectory>
where
    F: Fn(f64, &[f64], &mut [f64]),
{
    spec.validate()?;
    let dim = spec.initial.len();
    let f = &spec.rhs;
    let (t0, t1) = (spec.t0, spec.t1);
    let dir = if t1 >= t0 { 1.0 } else { -1.0 };
    let (rtol, atol) = (spec.rel_tol, spec.abs_tol);

    let mut samples = vec![(t0, spec.initial.clone())];
    let mut pending: &[f64] = match &spec.output_times {
        Some(times) => {
            let skip = times.iter().take_while(|&&t| t == t0).count();
            &times[skip..]
        }
        None => &[],
    };
    let dense_only = spec.output_times.is_some();

    let mut y = spec.initial.clone();
    let mut t = t0;
    let mut k1 = vec![0.0; dim];
    f(t, &y, &mut k1);
    if k1.iter().any(|v| !v.is_finite()) {
        return Ok(Trajectory { samples, status: IntegrationStatus::DomainError, accepted_steps: 0, rejected_steps: 0 });
    }
    if t0 == t1 {
        return Ok(Trajectory { samples, status: IntegrationStatus::Completed, accepted_steps: 0, rejected_steps: 0 });
    }

    let mut h = dir * initial_step(f, t, &y, &k1, dir, rtol, atol, (t1 - t0).abs());
    let (mut k2, mut k3, mut k4, mut k5, mut k6, mut k7) =
        (vec![0.0; dim], vec![0.0; dim], vec![0.0; dim], vec![0.0; dim], vec![0.0; dim], vec![0.0; dim]);
    let mut tmp = vec![0.0; dim];
    let mut y_new = vec![0.0; dim];
    let mut err = vec![0.0; dim];
    let mut fac_old: f64 = 1e-4;
    let mut last_rejected = false;
    let (mut accepted, mut rejected) = (0usize, 0usize);
    let mut status = IntegrationStatus::Completed;

    loop {
        if accepted + rejected >= spec.max_steps {
            status = IntegrationStatus::StepLimit;
            break;
        }
        let mut last = false;
        if (t + 1.01 * h - t1) * dir >= 0.0 {
            h = t1 - t;
            last = true;
        }

        for i in 0..dim {
            tmp[i] = y[i] + h * A21 * k1[i];
        }
        f(t + C2 * h, &tmp, &mut k2);
        for i in 0..dim {
            tmp[i] = y[i] + h * (A31 * k1[i] + A32 * k2[i]);
        }
        f(t + C3 * h, &tmp, &mut k3);
        for i in 0..dim {
            tmp[i] = y[i] + h * (A41 * k1[i] + A42 * k2[i] + A43 * k3[i]);
        }
        f(t + C4 * h, &tmp, &mut k4);
        for i in 0..dim {
            tmp[i] = y[i] + h * (A51 * k1[i] + A52 * k2[i] + A53 * k3[i] + A54 * k4[i]);
        }
        f(t + C5 * h, &tmp, &mut k5);
        for i in 0..dim {
            tmp[i] = y[i] + h * (A61 * k1[i] + A62 * k2[i] + A63 * k3[i] + A64 * k4[i] + A65 * k5[i]);
        }
        let t_new = if last { t1 } else { t + h };
        f(t_new, &tmp, &mut k6);
        for i in 0..dim {
            y_new[i] = y[i] + h * (A71 * k1[i] + A73 * k3[i] + A74 * k4[i] + A75 * k5[i] + A76 * k6[i]);
        }
        f(t_new, &y_new, &mut k7);

        let stages_finite = [&k2, &k3, &k4, &k5, &k6, &k7]
            .iter()
            .all(|k| k.iter().all(|v| v.is_finite()))
            && y_new.iter().all(|v| v.is_finite());
        if !stages_finite {
            // Shrink first; only a step that cannot shrink further is a domain failure.
            rejected += 1;
            h *= 0.25;
            last_rejected = true;
            if (t + h) == t {
                status = IntegrationStatus::DomainError;
                break;
            }
            continue;
        }

        for i in 0..dim {
            err[i] = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
        }
        let en = error_norm(&err, &y, &y_new, rtol, atol);
        let fac11 = en.powf(EXPO);
        let fac = (fac11 / fac_old.powf(BETA) / SAFETY).clamp(1.0 / FAC_MAX, 1.0 / FAC_MIN);

        if en <= 1.0 {
            accepted += 1;
            fac_old = en.max(1e-4);

            if dense_only {
                let mut cont = None;
                while let Some((&tq, rest)) = pending.split_first() {
                    if (tq - t_new) * dir > 0.0 {
                        break;
                    }
                    let c = cont.get_or_insert_with(|| {
                        dense_coefficients(h, &y, &y_new, [&k1, &k3, &k4, &k5, &k6, &k7])
                    });
                    let theta = (tq - t) / h;
                    samples.push((tq, interpolate(c, theta)));
                    pending = rest;
                }
            } else {
                samples.push((t_new, y_new.clone()));
            }

            std::mem::swap(&mut y, &mut y_new);
            std::mem::swap(&mut k1, &mut k7);
            t = t_new;
            if last {
                break;
            }
            let mut h_new = h / fac;
            if last_rejected {
                h_new = dir * h_new.abs().min(h.abs());
            }
            last_rejected = false;
            h = h_new;
        } else {
            rejected += 1;
            last_rejected = true;
            h /= (fac11 / SAFETY).min(1.0 / FAC_MIN);
        }
    }

    if dense_only && status == IntegrationStatus::Completed {
        let ends_at_t1 = samples.last().map(|s| s.0) == Some(t1);
        if !ends_at_t1 {
            samples.push((t1, y.clone()));
        }
    }
    Ok(Trajectory { samples, status, accepted_steps: accepted, rejected_steps: rejected })
}

type Dense = [Vec<f64>; 5];

fn dense_coefficients(h: f64, y: &[f64], y_new: &[f64], k: [&Vec<f64>; 6]) -> Dense {
    let [k1, k3, k4, k5, k6, k7] = k;
    let dim = y.len();
    let mut r = [vec![0.0; dim], vec![0.0; dim], vec![0.0; dim], vec![0.0; dim], vec![0.0; dim]];
    for i in 0..dim {
        let diff = y_new[i] - y[i];
        let bspl = h * k1[i] - diff;
        r[0][i] = y[i];
        r[1][i] = diff;
        r[2][i] = bspl;
        r[3][i] = diff - h * k7[i] - bspl;
        r[4][i] = h * (D1 * k1[i] + D3 * k3[i] + D4 * k4[i] + D5 * k5[i] + D6 * k6[i] + D7 * k7[i]);
    }
    r
}

fn interpolate(r: &Dense, theta: f64) -> Vec<f64> {
    let theta1 = 1.0 - theta;
    (0..r[0].len())
        .map(|i| r[0][i] + theta * (r[1][i] + theta1 * (r[2][i] + theta * (r[3][i] + theta1 * r[4][i]))))
        .collect()
}

#[allow(clippy::too_many_arguments)]
fn initial_step<F>(f: &F, t: f64, y: &[f64], f0: &[f64], dir: f64, rtol: f64, atol: f64, span: f64) -> f64
where
    F: Fn(f64, &[f64], &mut [f64]),
{
    let dim = y.len() as f64;
    let scale = |v: f64| atol + rtol * v.abs();
    let d0 = (y.iter().map(|v| (v / scale(*v)).powi(2)).sum::<f64>() / dim).sqrt();
    let d1 = (f0.iter().zip(y).map(|(d, v)| (d / scale(*v)).powi(2)).sum::<f64>() / dim).sqrt();
    let mut h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
    h0 = h0.min(span);
    let y1: Vec<f64> = y.iter().zip(f0).map(|(v, d)| v + dir * h0 * d).collect();
    let mut f1 = vec![0.0; y.len()];
    f(t + dir * h0, &y1, &mut f1);
    let d2 = (f1
        .iter()
        .zip(f0)
        .zip(y)
        .map(|((a, b), v)| ((a - b) / scale(*v)).powi(2))
        .sum::<f64>()
        / dim)
        .sqrt()
        / h0;
    let h1 = if !d2.is_finite() {
        h0
    } else if d1.max(d2) <= 1e-15 {
        (1e-6f64).max(h0 * 1e-3)
    } else {
        (0.01 / d1.max(d2)).powf(0.2)
    };
    (100.0 * h0).min(h1).min(span)
}

/// Integrates `spec` and reports `max_t |q(y(t)) - q(y0)| / (1 + |q(y0)|)`
/// over all samples.
pub fn conserve_check<F, Q>(spec: &IntegrationSpec<F>, quantity: Q) -> Result<f64>
where
    F: Fn(f64, &[f64], &mut [f64]),
    Q: Fn(&[f64]) -> f64,
{
    let traj = integrate(spec)?;
    let q0 = quantity(&spec.initial);
    let drift = traj
        .samples
        .iter()
        .map(|(_, s)| (quantity(s) - q0).abs() / (1.0 + q0.abs()))
        .fold(0.0, f64::max);
    Ok(drift)
}
