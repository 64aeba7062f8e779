mod common;

use common::q;
use germforge::germ::{coefficient_rank, lie_bracket};
use germforge::hirzebruch::{fn_transition, local_generators_at_p, phi_flow, psi_flow, FnChart, FnPoint};
use germforge::{GaussRat as Q, Scalar, VectorFieldGerm};
use proptest::prelude::*;

fn rat() -> impl Strategy<Value = Q> {
    (-6i64..=6, 1i64..=4).prop_map(|(a, b)| Q::from_ratio(a, b))
}

fn point() -> impl Strategy<Value = FnPoint<Q>> {
    (0u32..=3, any::<bool>(), rat(), prop::option::weighted(0.85, rat())).prop_map(|(n, first, base, fiber)| {
        let chart = if first { FnChart::First } else { FnChart::Second };
        match fiber {
            Some(f) => FnPoint::new(n, chart, base, f),
            None => FnPoint::at_infinity(n, chart, base),
        }
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn transition_round_trip(p in point()) {
        prop_assume!(!p.base.is_small(0.0));
        let back = fn_transition(&fn_transition(&p).unwrap()).unwrap();
        prop_assert!(back.same_point(&p));
    }

    #[test]
    fn flows_respect_the_atlas(p in point(), t in rat(), s in rat()) {
        prop_assume!(!p.base.is_small(0.0));
        let other = fn_transition(&p).unwrap();
        prop_assert!(phi_flow(p.n, &t, &p).same_point(&phi_flow(p.n, &t, &other)));
        prop_assert!(psi_flow(p.n, &s, &p).same_point(&psi_flow(p.n, &s, &other)));
    }

    #[test]
    fn group_laws(p in point(), t1 in rat(), t2 in rat()) {
        let n = p.n;
        let sum = t1.clone() + t2.clone();
        prop_assert!(phi_flow(n, &t2, &phi_flow(n, &t1, &p)).same_point(&phi_flow(n, &sum, &p)));
        prop_assert!(psi_flow(n, &t2, &psi_flow(n, &t1, &p)).same_point(&psi_flow(n, &sum, &p)));
    }

    #[test]
    fn flows_commute(p in point(), t in rat(), s in rat()) {
        let n = p.n;
        let a = psi_flow(n, &s, &phi_flow(n, &t, &p));
        let b = phi_flow(n, &t, &psi_flow(n, &s, &p));
        prop_assert!(a.same_point(&b));
    }

    #[test]
    fn fixed_point_is_fixed(n in 0u32..=3, t in rat(), s in rat()) {
        let p = FnPoint::at_infinity(n, FnChart::Second, q(0));
        prop_assert!(phi_flow(n, &t, &p).same_point(&p));
        prop_assert!(psi_flow(n, &s, &p).same_point(&p));
    }

    #[test]
    fn vertical_multiples_commute_with_z(n in 0u32..=3, c1 in rat(), c2 in rat()) {
        let g = local_generators_at_p::<Q>(n, 10);
        let vertical = g.y_display.scale(&(-c1));
        let x = vertical.add(&g.z_display.scale(&c2));
        prop_assert!(lie_bracket(&x, &g.z_display).unwrap().is_zero());
    }
}

#[test]
fn parabolic_fields_are_dependent_for_n_one() {
    let shift = VectorFieldGerm::<Q>::from_int_terms(8, &[(0, 1, 1)], &[]);
    let parabolic = VectorFieldGerm::<Q>::from_int_terms(8, &[(0, 1, 1), (2, 0, -2)], &[(1, 1, -2)]);
    let radial = VectorFieldGerm::<Q>::from_int_terms(8, &[(2, 0, 1)], &[(1, 1, 1)]);
    assert_eq!(coefficient_rank(&[shift.clone(), parabolic, radial.clone()], 0.0), 2);
    assert_eq!(coefficient_rank(&[shift, radial], 0.0), 2);
}
