mod common;

use common::{jet2, q};
use germforge::germ::pullback;
use germforge::mr::{compare_holonomy, contract, linearize, monomial_leaf_period, mr_formal_vf, mr_one_form, MRFormalForm};
use germforge::numflow::Controls;
use germforge::{GaussRat as Q, Jet2, Scalar, VectorFieldGerm, C64};
use num_integer::Integer;
use proptest::prelude::*;
use std::f64::consts::TAU;

fn seed() -> impl Strategy<Value = (C64, C64)> {
    (0.3f64..0.9, 0.0f64..TAU, 0.3f64..0.9, 0.0f64..TAU).prop_map(|(a, b, c, d)| (C64::from_polar(a, b), C64::from_polar(c, d)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn one_form_annihilates_the_model(m in 1u32..=3, n in 1u32..=3, p in 1u32..=3, l in -4i64..=4, d in 1i64..=3) {
        let f = MRFormalForm::new(m, n, p, Q::from_ratio(l, d)).unwrap();
        prop_assert!(contract(&mr_one_form(&f, 16), &mr_formal_vf(&f, 16)).is_zero());
    }

    #[test]
    fn linearization_conjugates_below_the_first_resonance(m in 1u32..=4, n in 1u32..=4, hot in (jet2(2, 6, 10), jet2(2, 6, 10))) {
        let g = m.gcd(&n);
        let degree = (m + n) / g;
        let lin = VectorFieldGerm::<Q>::from_int_terms(10, &[(1, 0, m as i64)], &[(0, 1, -(n as i64))]);
        let x = lin.add(&VectorFieldGerm::new(hot.0, hot.1)).truncate(degree + 1);
        let l = linearize(&x, degree, 0.0).unwrap();
        prop_assert!(l.obstruction.is_none());
        prop_assert_eq!(l.linearized.truncate(degree), lin.truncate(degree));
        prop_assert_eq!(pullback(&x, &l.change).unwrap().truncate(degree), lin.truncate(degree));
    }

    #[test]
    fn periods_vanish_for_unimodular_exponents(
        (m, n, a, b) in prop::sample::select(unimodular()),
        c in -2i64..=2,
        z in seed(),
    ) {
        let f = &Jet2::one(12) + &Jet2::monomial(n, m, q(c), 12);
        let p = monomial_leaf_period(a, b, &f.lower(), m, n, z, C64::new(0.0, 0.0), &Controls::default()).unwrap();
        prop_assert!(p.norm() < 1e-8 * (1.0 + (z.0.powu(a) * z.1.powu(b)).inv().norm()), "{}", p);
    }

    #[test]
    fn periods_vary_for_resonant_exponents(m in 1u32..=3, n in 1u32..=3, k in 1u32..=2, z in seed(), w in seed()) {
        let g = m.gcd(&n);
        let (a, b) = (k * n / g, k * m / g);
        let one = Jet2::<C64>::one(8);
        let ctl = Controls::default();
        let period = |z: (C64, C64)| monomial_leaf_period(a, b, &one, m, n, z, C64::new(0.0, 0.0), &ctl).unwrap();
        let (p, r) = (period(z), period(w));
        let exact = |z: (C64, C64)| C64::new(0.0, TAU) / (z.0.powu(a) * z.1.powu(b));
        prop_assert!((p - exact(z)).norm() < 1e-8 * p.norm());
        prop_assert!((r - exact(w)).norm() < 1e-8 * r.norm());
        let (lp, lr) = (z.0.powu(n / g) * z.1.powu(m / g), w.0.powu(n / g) * w.1.powu(m / g));
        prop_assume!((lp - lr).norm() > 1e-3 * lp.norm());
        prop_assert!((p - r).norm() > 1e-6 * p.norm());
    }
}

fn unimodular() -> Vec<(u32, u32, u32, u32)> {
    let mut out = Vec::new();
    for m in 1..=3u32 {
        for n in 1..=3u32 {
            for a in 0..=3u32 {
                for b in 0..=3u32 {
                    if (a as i64 * m as i64 - b as i64 * n as i64).abs() == 1 {
                        out.push((m, n, a, b));
                    }
                }
            }
        }
    }
    out
}

#[test]
fn holonomy_agrees_with_time_one_map() {
    let ctl = Controls::default();
    for lambda in [0.0, 0.3] {
        for k in 0..8 {
            let z0 = C64::from_polar(0.05 * (1.0 + k as f64) / 8.0, 0.7 * k as f64);
            let c = compare_holonomy(1, C64::new(lambda, 0.0), z0, &ctl).unwrap();
            assert!(c.difference < 1e-5, "lambda={lambda} z0={z0}: {c:?}");
        }
    }
}
