//! Consistency between independently written pieces: closed-form flows,
//! vector fields, invariants, the reduction and the Runge-Kutta integrator.

use ckflow::invariants::reduced_minimum;
use ckflow::orbit::relative_deviation;
use ckflow::reduced::{linearization, LevelShape};
use ckflow::{
    aux_invariant, casimir, casimir_gradient, classify_level_set, eval_field, flow_boost, flow_full, flow_reduced,
    integrate, reduce, rhs, second_order_residuals, FieldSpec, GeneratorId, GroupPoint, IntegrationSpec,
    IntegrationStatus, OmegaParams, ReducedParams, ReducedState,
};

fn om(w: &[f64]) -> OmegaParams {
    OmegaParams::new(w.to_vec()).unwrap()
}

fn gp(v: &[f64]) -> GroupPoint {
    GroupPoint::from(v)
}

fn integrate_field(params: &OmegaParams, z: f64, gen: GeneratorId, p: &GroupPoint, t: f64) -> Vec<f64> {
    let spec = FieldSpec::new(params, z, gen).unwrap();
    let f = |_t: f64, y: &[f64], dy: &mut [f64]| dy.copy_from_slice(&eval_field(&spec, &GroupPoint::from(y)).unwrap());
    let traj = integrate(&IntegrationSpec::new(f, 0.0, t, p.0.clone())).unwrap();
    assert_eq!(traj.status, IntegrationStatus::Completed);
    traj.final_state().to_vec()
}

fn integrate_reduced(pp: ReducedParams, s: ReducedState, t: f64) -> [f64; 2] {
    let f = |_t: f64, y: &[f64], dy: &mut [f64]| dy.copy_from_slice(&rhs(pp, ReducedState::new(y[0], y[1])));
    let traj = integrate(&IntegrationSpec::new(f, 0.0, t, vec![s.x, s.y])).unwrap();
    let end = traj.final_state();
    [end[0], end[1]]
}

#[test]
fn boost_flow_matches_integrator() {
    let params = om(&[1.0, 1.0]);
    let p = gp(&[0.1, 0.2, 0.3]);
    let closed = flow_boost(&params, 0.5, 1, 1.0, &p).unwrap().into_result().unwrap();
    let numeric = integrate_field(&params, 0.5, GeneratorId { i: 1, j: 3 }, &p, 1.0);
    assert!(relative_deviation(&closed, &numeric) < 1e-6);
}

#[test]
fn every_generator_flow_matches_integrator() {
    let params = om(&[-1.0, 0.0, 1.0]);
    let p = gp(&[0.3, -0.2, 0.5, 0.1]);
    for gen in GeneratorId::all(4) {
        for t in [-1.0, 0.5, 1.5] {
            let closed = flow_full(&params, 0.7, gen, t, &p).unwrap().into_result().unwrap();
            let numeric = integrate_field(&params, 0.7, gen, &p, t);
            assert!(relative_deviation(&closed, &numeric) < 1e-6, "{gen} t={t}");
        }
    }
}

#[test]
fn reduced_flow_matches_integrator() {
    let pp = ReducedParams::new(1.0, 2.0);
    let r = flow_reduced(1.0, 2.0, 0.7, 0.3, -0.1).unwrap().into_result().unwrap();
    let numeric = integrate_reduced(pp, ReducedState::new(0.3, -0.1), 0.7);
    assert!(relative_deviation(&[r.x, r.y], &numeric) < 1e-6);
}

#[test]
fn flow_derivative_at_zero_is_the_field() {
    let params = om(&[1.0, -1.0]);
    let p = gp(&[0.4, -0.3, 0.2]);
    let h = 1e-5;
    for gen in GeneratorId::all(3) {
        let plus = flow_full(&params, 0.5, gen, h, &p).unwrap().point;
        let minus = flow_full(&params, 0.5, gen, -h, &p).unwrap().point;
        let field = eval_field(&FieldSpec::new(&params, 0.5, gen).unwrap(), &p).unwrap();
        for k in 0..3 {
            let fd = (plus[k] - minus[k]) / (2.0 * h);
            assert!((fd - field[k]).abs() < 1e-8, "{gen} component {k}");
        }
    }
}

#[test]
fn reduction_maps_the_boost_field_onto_the_plane_system() {
    let params = om(&[1.0, -1.0, 1.0]);
    let p = gp(&[0.3, -0.4, 0.2, 0.5]);
    for z in [0.3, 1.0, -0.8] {
        for i in 1..4 {
            let red = reduce(&params, z, i, &p).unwrap();
            let field = eval_field(&FieldSpec::new(&params, z, GeneratorId { i, j: 4 }).unwrap(), &p).unwrap();
            let [dx, dy] = rhs(red.params, red.state);
            assert!((z * field[i - 1] - dx).abs() < 1e-12, "z={z} i={i}");
            assert!((z * field[3] - dy).abs() < 1e-12, "z={z} i={i}");
        }
    }
}

#[test]
fn reduction_commutes_with_the_flows() {
    let params = om(&[1.0, 1.0, -1.0]);
    let p = gp(&[0.2, 0.1, -0.3, 0.4]);
    let z = 0.6;
    let red = reduce(&params, z, 2, &p).unwrap();
    for t in [0.3, 1.0, 2.5] {
        let full = flow_boost(&params, z, 2, t, &p).unwrap().into_result().unwrap();
        let plane = flow_reduced(red.params.a, red.params.b, t, red.state.x, red.state.y)
            .unwrap()
            .into_result()
            .unwrap();
        let again = reduce(&params, z, 2, &full).unwrap();
        assert!((again.state.x - plane.x).abs() < 1e-12);
        assert!((again.state.y - plane.y).abs() < 1e-12);
        assert!((again.params.b - red.params.b).abs() < 1e-12);
        let lifted = red.lift(plane).unwrap();
        assert!(relative_deviation(&lifted, &full) < 1e-12);
    }
}

#[test]
fn second_order_forms_hold_along_integrated_orbits() {
    for (a, b, x0, y0) in [(1.0, 1.0, 0.3, 0.1), (2.0, 0.5, -0.2, 0.4), (-1.0, 2.0, 0.1, 0.2)] {
        let pp = ReducedParams::new(a, b);
        let h = 1e-3;
        let times: Vec<f64> = (0..=20).flat_map(|k| {
            let t = 0.2 + 0.05 * k as f64;
            [t - h, t, t + h]
        }).collect();
        let f = |_t: f64, y: &[f64], dy: &mut [f64]| dy.copy_from_slice(&rhs(pp, ReducedState::new(y[0], y[1])));
        let traj = integrate(&IntegrationSpec::new(f, 0.0, 1.5, vec![x0, y0]).output_times(times.clone())).unwrap();
        let at = |t: f64| -> ReducedState {
            let (_, s) = traj.samples.iter().find(|(u, _)| *u == t).unwrap();
            ReducedState::new(s[0], s[1])
        };
        for chunk in times.chunks(3) {
            let (lo, mid, hi) = (at(chunk[0]), at(chunk[1]), at(chunk[2]));
            let v_lo = rhs(pp, lo);
            let v_hi = rhs(pp, hi);
            let acc = [(v_hi[0] - v_lo[0]) / (2.0 * h), (v_hi[1] - v_lo[1]) / (2.0 * h)];
            let res = second_order_residuals(pp, mid, rhs(pp, mid), acc);
            assert!(res[0].abs() < 1e-5 && res[1].abs() < 1e-5, "a={a} b={b}: {res:?}");
        }
    }
}

#[test]
fn casimir_is_tangent_to_every_field() {
    for w in [[1.0, 1.0, 1.0], [-1.0, 0.0, 1.0], [0.0, -1.0, -1.0]] {
        let params = om(&w);
        let p = gp(&[0.5, -0.3, 0.8, -0.4]);
        for z in [0.0, 0.2, 1.3] {
            let grad = casimir_gradient(&params, z, &p).unwrap();
            let scale: f64 = grad.iter().map(|g| g.abs()).sum::<f64>() + 1.0;
            for gen in GeneratorId::all(4) {
                let field = eval_field(&FieldSpec::new(&params, z, gen).unwrap(), &p).unwrap();
                let dot: f64 = grad.iter().zip(&field).map(|(g, f)| g * f).sum();
                assert!(dot.abs() < 1e-13 * scale, "{gen} z={z}: {dot}");
            }
        }
    }
}

#[test]
fn auxiliary_invariants_are_not_conserved_by_rotations() {
    // negative control: α_k e^{zα_N} is only invariant under boosts that leave k alone
    let params = om(&[1.0, 1.0]);
    let p = gp(&[0.5, 0.2, 0.3]);
    let z = 0.5;
    let before = aux_invariant(z, 1, &p).unwrap();
    let rotated = flow_full(&params, z, GeneratorId { i: 1, j: 2 }, 0.7, &p).unwrap().point;
    assert!((aux_invariant(z, 1, &rotated).unwrap() - before).abs() > 1e-3);
    let boosted = flow_boost(&params, z, 1, 0.7, &p).unwrap().point;
    assert!((aux_invariant(z, 1, &boosted).unwrap() - before).abs() > 1e-3);
    assert!((aux_invariant(z, 2, &boosted).unwrap() - aux_invariant(z, 2, &p).unwrap()).abs() < 1e-14);
    // the Casimir is conserved along both
    let h = casimir(&params, z, &p).unwrap();
    assert!((casimir(&params, z, &rotated).unwrap() - h).abs() < 1e-14);
    assert!((casimir(&params, z, &boosted).unwrap() - h).abs() < 1e-14);
}

#[test]
fn boost_field_tends_linearly_to_the_undeformed_field() {
    let params = om(&[1.0, -1.0]);
    let p = gp(&[0.6, -0.4, 0.9]);
    let gen = GeneratorId { i: 2, j: 3 };
    let linear = eval_field(&FieldSpec::new(&params, 0.0, gen).unwrap(), &p).unwrap();
    let dev = |z: f64| {
        let f = eval_field(&FieldSpec::new(&params, z, gen).unwrap(), &p).unwrap();
        f.iter().zip(&linear).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt()
    };
    let d = [dev(1e-3), dev(1e-4), dev(1e-5)];
    for w in d.windows(2) {
        let ratio = w[0] / w[1];
        assert!((ratio - 10.0).abs() < 0.1, "{d:?}");
    }
}

#[test]
fn fixed_point_is_the_minimum_of_the_reduced_invariant() {
    for (a, b) in [(1.0, 1.0), (1.0, 4.0), (0.3, 2.5)] {
        let ([x, y], value) = reduced_minimum(a, b).unwrap();
        let pp = ReducedParams::new(a, b);
        let v = rhs(pp, ReducedState::new(x, y));
        assert!(v[0].abs() < 1e-15 && v[1].abs() < 1e-15);
        assert!((ckflow::reduced_invariant(a, b, x, y).unwrap() - value).abs() < 1e-14);
        assert_eq!(linearization(pp, ReducedState::new(x, y)), [[0.0, -b * (-2.0 * y).exp()], [a, 0.0]]);
    }
}

#[test]
fn level_set_fixtures() {
    assert_eq!(classify_level_set(&om(&[1.0, 1.0]), 0.5, 0.0).shape, LevelShape::Point);
    let sphere = classify_level_set(&om(&[1.0, 1.0]), 0.0, 1.0);
    assert_eq!(sphere.shape, LevelShape::Ellipsoid);
    assert_eq!(sphere.bounded, Some(true));
    assert_eq!(classify_level_set(&om(&[-1.0, 1.0]), 0.0, -1.0).shape, LevelShape::TwoSheets);
    assert_eq!(classify_level_set(&om(&[-1.0, 1.0]), 0.0, 1.0).shape, LevelShape::OneSheet);
}
