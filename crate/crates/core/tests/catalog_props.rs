mod common;

use common::{jet1, q};
use germforge::catalog::{
    builtin_forms, classify, exponent_data, extract_invariants, make_normal_form, make_pair, separatrix_charts, Family,
    NormalFormId, PairKind, Param, Row,
};
use germforge::germ::{lie_bracket, pullback};
use germforge::onedim::{onedim_check, restrict_to_axis, Axis};
use germforge::{GaussRat as Q, Jet1, Jet2};
use proptest::prelude::*;

type Id = NormalFormId<Q>;

fn constant(c: i64) -> Param<Q> {
    Param::uni(Jet1::constant(q(c), 8))
}

fn plus_one(j: Jet1<Q>) -> Jet1<Q> {
    &Jet1::one(8) + &j
}

fn pair_id() -> impl Strategy<Value = Id> {
    let nonzero = (-3i64..=3).prop_filter("nonzero", |c| *c != 0);
    prop_oneof![
        (1i64..=3, nonzero.clone(), jet1(1, 4, 8), jet1(1, 4, 8)).prop_map(|(n, alpha, r, s)| {
            Id::pair(PairKind::I).with_int("n", n).with("alpha", constant(alpha)).with("r", Param::uni(r)).with("s", Param::uni(s))
        }),
        Just(Id::pair(PairKind::II)),
        (2i64..=3).prop_map(|n| Id::pair(PairKind::III).with_int("n", n)),
        (-3i64..=3, -3i64..=3).prop_map(|(c1, c2)| {
            Id::pair(PairKind::III).with_int("n", 1).with("c1", constant(c1)).with("c2", constant(c2))
        }),
        (1i64..=3, jet1(2, 4, 8), jet1(1, 4, 8)).prop_map(|(n, g1, g2)| {
            Id::pair(PairKind::IV).with_int("n", n).with("g1", Param::uni(plus_one(g1))).with("g2", Param::uni(g2))
        }),
        (0i64..=3).prop_map(|n| Id::pair(PairKind::V).with_int("n", n)),
        Just(Id::pair(PairKind::VI)),
        (prop::sample::select(vec![(1, 1, 1, 0), (2, 1, 1, 1), (2, 3, 2, 1), (3, 2, 1, 1)]), 0i64..=2, jet1(1, 3, 8), jet1(1, 3, 8))
            .prop_map(|((m, n, am, bm), k1, u1, u2)| {
                Id::pair(PairKind::VII)
                    .with_int("m", m)
                    .with_int("n", n)
                    .with_int("amu", am)
                    .with_int("bmu", bm)
                    .with_int("k1", k1)
                    .with("u1", Param::uni(plus_one(u1)))
                    .with("u2", Param::uni(u2))
            }),
    ]
}

fn row_id() -> impl Strategy<Value = Id> {
    let r = Id::row;
    let unit = prop::sample::select(vec![1i64, -1, 2, 3]).prop_map(|c| Param::bi(Jet2::constant(q(c), 64)));
    prop_oneof![
        (1i64..=4).prop_map(move |a| r(Row::R1a).with_int("a", a)),
        (1i64..=4).prop_map(move |a| r(Row::R1b).with_int("a", a)),
        (0i64..=3, jet1(1, 3, 8), jet1(1, 3, 8))
            .prop_map(move |(a, g1, g2)| r(Row::R1c).with_int("a", a).with("g1", Param::uni(g1)).with("g2", Param::uni(g2))),
        (0i64..=4, unit.clone()).prop_map(move |(n, f)| r(Row::R2).with_int("n", n).with("f", f)),
        unit.clone().prop_map(move |f| r(Row::R3).with("f", f)),
        (prop::sample::select(vec![Row::R4, Row::R5, Row::R6, Row::R7, Row::R8, Row::R9]), 0i64..=2, unit.clone())
            .prop_map(move |(row, a, f)| r(row).with_int("a", a).with("f", f)),
        (1i64..=3, 1i64..=3, 1i64..=2, 0i64..=2).prop_map(move |(m, n, p, l)| {
            r(Row::R10).with_int("m", m).with_int("n", n).with_int("p", p).with("lambda", constant(l))
        }),
        ((-3i64..=3).prop_filter("nonzero", |n| *n != 0), unit.clone()).prop_map(move |(n, f)| r(Row::R11).with_int("n", n).with("f", f)),
        (1i64..=3, 1i64..=3, 0i64..=3, 0i64..=3, unit.clone())
            .prop_filter("am - bn = ±1", |(m, n, a, b, _)| (a * m - b * n).abs() == 1)
            .prop_map(move |(m, n, a, b, f)| r(Row::R12).with_int("m", m).with_int("n", n).with_int("a", a).with_int("b", b).with("f", f)),
        (0i64..=3, unit).prop_map(move |(n, f)| r(Row::R13).with_int("n", n).with("f", f)),
    ]
}

/// `(m, n, amu, bmu)` with `amu m - bmu n = ±1` and `x^amu y^bmu` not divisible by `x^n y^m`.
fn unimodular_exponents() -> Vec<(i64, i64, i64, i64)> {
    let mut out = Vec::new();
    for m in 1i64..=4 {
        for n in 1i64..=4 {
            for am in 0i64..=4 {
                for bm in 0i64..=4 {
                    if (am * m - bm * n).abs() == 1 && !(am >= n && bm >= m) {
                        out.push((m, n, am, bm));
                    }
                }
            }
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pairs_commute(id in pair_id()) {
        let (x, y) = make_pair(&id, 14).unwrap();
        prop_assert!(lie_bracket(&x, &y).unwrap().is_zero(), "{}", id);
    }

    #[test]
    fn exponent_identity((m, n, am, bm) in prop::sample::select(unimodular_exponents()), k1 in 0i64..=2) {
        let id = Id::pair(PairKind::VII).with_int("m", m).with_int("n", n).with_int("amu", am).with_int("bmu", bm).with_int("k1", k1);
        let e = exponent_data(&id).unwrap();
        prop_assert_eq!(e.a as i64 * m - e.b as i64 * n, am * m - bm * n);
        prop_assert_eq!((e.a as i64, e.b as i64), (k1 * n + am, k1 * m + bm));
        let (x, y) = make_pair(&id.with("u2", Param::uni(Jet1::var(8))), 10).unwrap();
        prop_assert!(lie_bracket(&x, &y).unwrap().is_zero());
    }

    #[test]
    fn classifier_keeps_the_true_row(id in row_id()) {
        let order = make_normal_form(&id, 40).unwrap().order().unwrap();
        let degree = order + 10;
        let x = make_normal_form(&id, degree).unwrap();
        let forms = builtin_forms(degree);
        let c = classify(&x, &forms, 1e-12).unwrap();
        prop_assert!(c.candidates.iter().any(|k| k.matches(&id)), "{} -> {:?}", id, c.candidates.iter().map(|k| k.to_string()).collect::<Vec<_>>());
        let again = extract_invariants(&x, &forms, 1e-12).unwrap();
        prop_assert_eq!(format!("{:?}", again), format!("{:?}", c.invariants));
    }

    #[test]
    fn invariant_curves_restrict_to_semicomplete_germs(id in row_id()) {
        let Family::Row(row) = id.family else { unreachable!() };
        let x = make_normal_form(&id, 10).unwrap();
        for axis in [Axis::X, Axis::Y] {
            if let Ok(h) = restrict_to_axis(&x, axis, 0.0) {
                let v = onedim_check(&h, 0.0);
                prop_assert!(v.passed(), "{} on {:?}: {:?}", id, axis, v);
            }
        }
        for (label, change, axis) in separatrix_charts::<Q>(row, 10) {
            let h = restrict_to_axis(&pullback(&x, &change).unwrap(), axis, 0.0).unwrap();
            prop_assert!(onedim_check(&h, 0.0).passed(), "{} on {}", id, label);
        }
    }
}
