mod common;

use common::q;
use germforge::numflow::{integrate_unit, Controls};
use germforge::onedim::{onedim_check, siegel_closed_criterion, siegel_regular_test, Status};
use germforge::{GaussRat as Q, Jet1, C64};
use proptest::prelude::*;
use std::f64::consts::TAU;

fn poly(c: &[i64], valid: u32) -> Jet1<Q> {
    Jet1::from_coeffs(c.iter().map(|&k| q(k)).collect(), valid)
}

/// `∮ dz / h` over `|z| = r`.
fn contour_period(h: &[f64], r: f64) -> C64 {
    let eval = |z: C64| h.iter().rev().fold(C64::new(0.0, 0.0), |acc, &c| acc * z + c);
    let sol = integrate_unit(
        |s, _| {
            let z = C64::from_polar(r, TAU * s);
            [C64::new(0.0, TAU) * z / eval(z)]
        },
        [C64::new(0.0, 0.0)],
        &Controls::default(),
    )
    .unwrap();
    sol.state[0]
}

#[test]
fn siegel_test_matches_closed_form_on_grid() {
    for n in 1..=2u32 {
        for slope in -2i64..=2 {
            for shift in -2i64..=2 {
                let g1 = poly(&[1, slope, 3], 12);
                let g2 = poly(&[shift, -1, 2], 12);
                let v = siegel_regular_test(&g1, &g2, n, n + 4, 0.0);
                assert_ne!(v.status, Status::Unknown, "n={n} g1'(0)={slope} g2(0)={shift}");
                assert_eq!(v.passed(), siegel_closed_criterion(&g1, &g2, 0.0), "n={n} g1'(0)={slope} g2(0)={shift}: {v:?}");
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn order_two_verdict_matches_contour_period(
        lead in prop::sample::select(vec![1i64, -1, 2, -3]),
        c3 in -2i64..=2,
        c4 in -3i64..=3,
        c5 in -3i64..=3,
    ) {
        let h = poly(&[0, 0, lead, c3, c4, c5], 8);
        let verdict = onedim_check(&h, 0.0);
        let period = contour_period(&[0.0, 0.0, lead as f64, c3 as f64, c4 as f64, c5 as f64], 0.05);
        let residue = -(c3 as f64) / (lead * lead) as f64;
        prop_assert!((period - C64::new(0.0, TAU * residue)).norm() < 1e-7);
        prop_assert_eq!(verdict.passed(), period.norm() < 1e-7, "{:?} period {}", verdict, period);
    }
}
