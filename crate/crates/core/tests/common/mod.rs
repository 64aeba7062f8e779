#![allow(dead_code)]

use germforge::{GaussRat as Q, Jet1, Jet2, Scalar, VectorFieldGerm};
use proptest::prelude::*;

pub fn q(n: i64) -> Q {
    Q::from_i64(n)
}

/// Dense jet with small integer coefficients in total degrees `lo..=hi`.
pub fn jet2(lo: u32, hi: u32, valid: u32) -> impl Strategy<Value = Jet2<Q>> {
    let count = ((hi + 1) * (hi + 2) / 2) as usize;
    prop::collection::vec(-3i64..=3, count).prop_map(move |cs| {
        let mut j = Jet2::zero(valid);
        let mut k = 0;
        for d in 0..=hi {
            for i in 0..=d {
                if d >= lo {
                    j.set(d - i, i, q(cs[k]));
                }
                k += 1;
            }
        }
        j
    })
}

pub fn field(lo: u32, hi: u32, valid: u32) -> impl Strategy<Value = VectorFieldGerm<Q>> {
    (jet2(lo, hi, valid), jet2(lo, hi, valid)).prop_map(|(a, b)| VectorFieldGerm::new(a, b))
}

pub fn jet1(lo: u32, hi: u32, valid: u32) -> impl Strategy<Value = Jet1<Q>> {
    prop::collection::vec(-4i64..=4, (hi + 1) as usize).prop_map(move |cs| {
        let mut j = Jet1::zero(valid);
        for (k, c) in cs.into_iter().enumerate() {
            if k as u32 >= lo {
                j.set(k as u32, q(c));
            }
        }
        j
    })
}

/// Truncates both to the smaller precision and compares.
pub fn same2(a: &Jet2<Q>, b: &Jet2<Q>) -> bool {
    let v = a.valid().min(b.valid());
    a.truncate(v) == b.truncate(v)
}

pub fn same_field(a: &VectorFieldGerm<Q>, b: &VectorFieldGerm<Q>) -> bool {
    same2(a.a(), b.a()) && same2(a.b(), b.b())
}
