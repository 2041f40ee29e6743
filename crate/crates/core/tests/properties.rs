use proptest::prelude::*;

use ckflow::group::semidirect_compose;
use ckflow::orbit::relative_deviation;
use ckflow::{
    c_omega, casimir, compose, cs_omega, f_first_bracket, flow_full, inverse, reduced_invariant, flow_reduced,
    semidirect_split, s_omega, GeneratorId, GroupPoint, OmegaParams,
};

fn coords(n: usize, r: f64) -> impl Strategy<Value = GroupPoint> {
    prop::collection::vec(-r..r, n).prop_map(GroupPoint::new)
}

fn sign() -> impl Strategy<Value = f64> {
    prop_oneof![Just(-1.0), Just(0.0), Just(1.0)]
}

/// `(params, z, point)` with `N ∈ {2, 3, 4}`.
fn setting() -> impl Strategy<Value = (OmegaParams, f64, GroupPoint)> {
    (2usize..=4).prop_flat_map(|n| {
        (
            prop::collection::vec(sign(), n - 1).prop_map(|w| OmegaParams::new(w).unwrap()),
            -1.5..1.5f64,
            coords(n, 1.0),
        )
    })
}

fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
    relative_deviation(a, b) <= tol
}

proptest! {
    #[test]
    fn composition_is_associative(
        z in -1.5..1.5f64,
        (p, q, r) in (2usize..=5).prop_flat_map(|n| (coords(n, 2.0), coords(n, 2.0), coords(n, 2.0))),
    ) {
        let left = compose(z, &compose(z, &p, &q).unwrap(), &r).unwrap();
        let right = compose(z, &p, &compose(z, &q, &r).unwrap()).unwrap();
        prop_assert!(close(&left, &right, 1e-12));
    }

    #[test]
    fn identity_and_inverse((_, z, p) in setting()) {
        let e = GroupPoint::origin(p.dim());
        prop_assert_eq!(compose(z, &e, &p).unwrap(), p.clone());
        prop_assert_eq!(compose(z, &p, &e).unwrap(), p.clone());
        let inv = inverse(z, &p).unwrap();
        prop_assert!(close(&compose(z, &inv, &p).unwrap(), &e, 1e-14));
        prop_assert!(close(&compose(z, &p, &inv).unwrap(), &e, 1e-14));
    }

    #[test]
    fn semidirect_form_agrees_with_compose((_, z, p) in setting(), q in coords(4, 1.0)) {
        let q = GroupPoint::new(q[..p.dim()].to_vec());
        let (a1, b1) = semidirect_split(&p);
        let (a2, b2) = semidirect_split(&q);
        let (a, b) = semidirect_compose(z, (&a1, b1), (&a2, b2)).unwrap();
        let direct = compose(z, &p, &q).unwrap();
        prop_assert_eq!(&direct[..p.dim() - 1], &a[..]);
        prop_assert_eq!(direct.last(), b);
    }

    #[test]
    fn generalized_trig_identities(w in -2.0..2.0f64, t in -3.0..3.0f64, s in -3.0..3.0f64) {
        let (c, sn) = cs_omega(w, t);
        prop_assert!((c * c + w * sn * sn - 1.0).abs() < 1e-9 * (1.0 + c * c));
        let (cs, ss) = cs_omega(w, s);
        let scale = 1.0 + c.abs() * cs.abs() + (w * sn * ss).abs();
        prop_assert!((c_omega(w, t + s) - (c * cs - w * sn * ss)).abs() < 1e-12 * scale);
        prop_assert!((s_omega(w, t + s) - (sn * cs + c * ss)).abs() < 1e-12 * (1.0 + (sn * cs).abs() + (c * ss).abs()));
    }

    #[test]
    fn flows_form_one_parameter_groups((params, z, p) in setting(), t in -2.0..2.0f64, s in -2.0..2.0f64, pick in any::<prop::sample::Index>()) {
        let gens = GeneratorId::all(params.dim());
        let gen = gens[pick.index(gens.len())];
        let inner = flow_full(&params, z, gen, s, &p).unwrap();
        prop_assume!(inner.defined);
        let twice = flow_full(&params, z, gen, t, &inner.point).unwrap();
        let once = flow_full(&params, z, gen, t + s, &p).unwrap();
        prop_assume!(twice.defined && once.defined);
        prop_assert!(close(&twice.point, &once.point, 1e-9), "{:?} vs {:?}", twice.point, once.point);
    }

    #[test]
    fn flows_conserve_the_casimir((params, z, p) in setting(), t in -5.0..5.0f64, pick in any::<prop::sample::Index>()) {
        let gens = GeneratorId::all(params.dim());
        let gen = gens[pick.index(gens.len())];
        let r = flow_full(&params, z, gen, t, &p).unwrap();
        prop_assume!(r.defined);
        let h0 = casimir(&params, z, &p).unwrap();
        let h1 = casimir(&params, z, &r.point).unwrap();
        prop_assert!((h1 - h0).abs() <= 1e-9 * (1.0 + h0.abs()));
    }

    #[test]
    fn first_bracket_is_the_casimir((params, z, p) in setting()) {
        let lhs = f_first_bracket(&params, z, &p).unwrap();
        let rhs = 1.0 + 0.5 * z * z * casimir(&params, z, &p).unwrap();
        prop_assert!((lhs - rhs).abs() < 1e-12 * (1.0 + rhs.abs()));
    }

    #[test]
    fn reduced_flow_conserves_its_invariant(a in -2.0..2.0f64, b in -2.0..2.0f64, x in -1.0..1.0f64, y in -1.0..1.0f64, t in -5.0..5.0f64) {
        let r = flow_reduced(a, b, t, x, y).unwrap();
        prop_assume!(r.defined);
        let h0 = reduced_invariant(a, b, x, y).unwrap();
        let h1 = reduced_invariant(a, b, r.point.x, r.point.y).unwrap();
        prop_assert!((h1 - h0).abs() <= 1e-9 * (1.0 + h0.abs()));
    }
}
