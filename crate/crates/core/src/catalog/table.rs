//! Constructors for the table rows, their first integrals, and the polynomial
//! changes that straighten non-axis separatrices.

use super::id::{Family, NormalFormId, Row};
use crate::error::{GermError, Result};
use crate::germ::{CoordinateChange, RationalFn, VectorFieldGerm};
use crate::mr::{mr_formal_vf, MRFormalForm};
use crate::onedim::Axis;
use crate::scalar::Scalar;
use crate::series::{Jet1, Jet2};

pub(crate) fn bad(msg: impl Into<String>) -> GermError {
    GermError::BadParams(msg.into())
}

pub(crate) fn poly<S: Scalar>(degree: u32, terms: &[(u32, u32, i64)]) -> Jet2<S> {
    Jet2::from_int_terms(degree, terms)
}

pub(crate) fn vf<S: Scalar>(degree: u32, a: &[(u32, u32, i64)], b: &[(u32, u32, i64)]) -> VectorFieldGerm<S> {
    VectorFieldGerm::from_int_terms(degree, a, b)
}

pub(crate) fn pow<S: Scalar>(f: &Jet2<S>, k: u32, degree: u32) -> Jet2<S> {
    f.powers(k, degree).pop().unwrap()
}

pub(crate) fn nonneg(id: &NormalFormId<impl Scalar>, key: &str, default: Option<i64>) -> Result<u32> {
    let v = match (id.int(key)?, default) {
        (Some(v), _) => v,
        (None, Some(d)) => d,
        (None, None) => return Err(bad(format!("{id}: missing parameter {key}"))),
    };
    u32::try_from(v).map_err(|_| bad(format!("{id}: {key} must be non-negative, got {v}")))
}

pub(crate) fn positive(id: &NormalFormId<impl Scalar>, key: &str, default: Option<i64>) -> Result<u32> {
    let v = nonneg(id, key, default)?;
    if v == 0 {
        return Err(bad(format!("{id}: {key} must be positive")));
    }
    Ok(v)
}

fn unit<S: Scalar>(id: &NormalFormId<S>, degree: u32) -> Result<Jet2<S>> {
    let f = id.bi("f", degree)?.unwrap_or_else(|| Jet2::one(degree));
    if f.constant_term().is_zero() {
        return Err(bad(format!("{id}: f must be a unit (f(0) != 0)")));
    }
    Ok(f.truncate(degree))
}

/// A one-variable jet in `z` read as a function of `y`.
pub(crate) fn in_y<S: Scalar>(g: &Jet1<S>, degree: u32) -> Jet2<S> {
    Jet2::from_jet1_x(g).swap_xy().truncate(degree)
}

fn scaled<S: Scalar>(prefactor: &Jet2<S>, f: &Jet2<S>, p: VectorFieldGerm<S>, degree: u32) -> VectorFieldGerm<S> {
    p.mul_fn(&prefactor.mul_trunc(f, degree)).truncate(degree)
}

/// Primitive field of rows 2 to 9, before the prefactor and the unit.
pub(crate) fn primitive<S: Scalar>(row: Row, n: u32, degree: u32) -> VectorFieldGerm<S> {
    let n = n as i64;
    match row {
        Row::R2 => vf(degree, &[(2, 0, 1)], &[(1, 1, -n), (0, 2, n + 1)]),
        Row::R3 => vf(degree, &[(0, 1, 1), (2, 0, -2)], &[(1, 1, -2)]),
        Row::R4 => vf(degree, &[(2, 0, 1), (1, 1, -2)], &[(0, 2, 1), (1, 1, -2)]),
        Row::R5 => vf(degree, &[(2, 0, 1), (1, 1, -3)], &[(0, 2, 1), (1, 1, -3)]),
        Row::R6 => vf(degree, &[(2, 0, 2), (1, 1, -5)], &[(0, 2, 1), (1, 1, -4)]),
        Row::R7 => vf(degree, &[(0, 1, 2)], &[(2, 0, -3)]),
        Row::R8 => vf(degree, &[(0, 1, 2), (2, 0, -1)], &[(1, 1, 2)]),
        Row::R9 => vf(degree, &[(0, 1, 3), (2, 0, -1)], &[(1, 1, 4)]),
        _ => unreachable!("row without a fixed primitive"),
    }
}

/// Polynomial whose powers multiply rows 4 to 9; also their first integral.
pub(crate) fn elliptic_integral<S: Scalar>(row: Row, degree: u32) -> Jet2<S> {
    match row {
        Row::R4 => poly(degree, &[(2, 1, 1), (1, 2, -1)]),
        Row::R5 => poly(degree, &[(3, 1, 1), (2, 2, -2), (1, 3, 1)]),
        Row::R6 => poly(degree, &[(4, 2, 1), (3, 3, -3), (2, 4, 3), (1, 5, -1)]),
        Row::R7 => poly(degree, &[(3, 0, 1), (0, 2, 1)]),
        Row::R8 => poly(degree, &[(0, 2, 1), (2, 1, -1)]),
        Row::R9 => poly(degree, &[(0, 3, 1), (2, 2, -2), (4, 1, 1)]),
        _ => unreachable!("row without an elliptic integral"),
    }
}

/// The germ of a table row at truncation `degree`.
pub fn make_normal_form<S: Scalar>(id: &NormalFormId<S>, degree: u32) -> Result<VectorFieldGerm<S>> {
    let Family::Row(row) = id.family else {
        return Err(bad(format!("{id} is a commuting pair; use make_pair")));
    };
    let x = match row {
        Row::R1a | Row::R1b => {
            let a = positive(id, "a", None).map_err(|_| bad(format!("{id}: rows 1a and 1b need a != 0")))?;
            let i = if row == Row::R1b { 1 } else { 0 };
            vf(degree, &[(i, a, 1)], &[])
        }
        Row::R1c => {
            let a = nonneg(id, "a", Some(0))?;
            let g1 = id.uni("g1", degree)?.unwrap_or_else(|| Jet1::zero(degree));
            let g2 = id.uni("g2", degree)?.unwrap_or_else(|| Jet1::zero(degree));
            if !g1.coeff(0).is_zero() || !g2.coeff(0).is_zero() {
                return Err(bad(format!("{id}: g1(0) = g2(0) = 0 required")));
            }
            let f = &(&poly(degree, &[(2, 0, 1)]) + &in_y(&g1, degree).mul_monomial(1, 0, &S::one())) + &in_y(&g2, degree);
            let a_comp = f.mul_monomial(0, a, &S::one()).truncate(degree);
            VectorFieldGerm::new(a_comp, Jet2::zero(degree))
        }
        Row::R2 | Row::R3 => {
            let n = if row == Row::R2 { nonneg(id, "n", None)? } else { 0 };
            primitive::<S>(row, n, degree).mul_fn(&unit(id, degree)?).truncate(degree)
        }
        Row::R4 | Row::R5 | Row::R6 | Row::R7 | Row::R8 | Row::R9 => {
            let a = nonneg(id, "a", Some(0))?;
            let pre = pow(&elliptic_integral::<S>(row, degree), a, degree);
            scaled(&pre, &unit(id, degree)?, primitive(row, 0, degree), degree)
        }
        Row::R10 => {
            let m = positive(id, "m", None)?;
            let n = positive(id, "n", None)?;
            let p = positive(id, "p", Some(1))?;
            let lambda = id.uni("lambda", degree)?.map(|j| j.coeff(0)).unwrap_or_else(S::zero);
            let form = MRFormalForm::new(m, n, p, lambda)?;
            let base = mr_formal_vf(&form, degree);
            VectorFieldGerm::new(base.a().mul_monomial(n, m, &S::one()), base.b().mul_monomial(n, m, &S::one()))
                .truncate(degree)
        }
        Row::R11 => {
            let n = id.int("n")?.ok_or_else(|| bad(format!("{id}: missing parameter n")))?;
            if n == 0 {
                return Err(bad(format!("{id}: n must be a nonzero integer")));
            }
            let p = vf(degree, &[(1, 0, 1)], &[(0, 1, n)]);
            scaled(&poly(degree, &[(1, 0, 1)]), &unit(id, degree)?, p, degree)
        }
        Row::R12 => {
            let m = positive(id, "m", None)?;
            let n = positive(id, "n", None)?;
            let a = nonneg(id, "a", None)?;
            let b = nonneg(id, "b", None)?;
            let det = a as i64 * m as i64 - b as i64 * n as i64;
            if det.abs() != 1 {
                return Err(bad(format!("{id}: am - bn = ±1 required, got {det}")));
            }
            let p = vf(degree, &[(1, 0, m as i64)], &[(0, 1, -(n as i64))]);
            scaled(&Jet2::monomial(a, b, S::one(), degree), &unit(id, degree)?, p, degree)
        }
        Row::R13 => {
            let n = nonneg(id, "n", None)?;
            let pre = poly(degree, &[(1, 0, 1), (0, 1, -1)]).mul_monomial(n, n, &S::one());
            scaled(&pre, &unit(id, degree)?, vf(degree, &[(1, 0, 1)], &[(0, 1, -1)]), degree)
        }
    };
    Ok(x)
}

/// A first integral of rows 2 to 9 (independent of `a` and the unit).
pub fn first_integral<S: Scalar>(id: &NormalFormId<S>, degree: u32) -> Result<Option<RationalFn<S>>> {
    let Family::Row(row) = id.family else {
        return Ok(None);
    };
    Ok(match row {
        Row::R2 => {
            let n = nonneg(id, "n", None)?;
            let num = Jet2::monomial(n + 1, 1, S::one(), degree);
            Some(RationalFn::new(num, poly(degree, &[(1, 0, 1), (0, 1, -1)]))?)
        }
        Row::R3 => Some(RationalFn::new(poly(degree, &[(0, 2, 1)]), poly(degree, &[(0, 1, 1), (2, 0, -1)]))?),
        Row::R4 | Row::R5 | Row::R6 | Row::R7 | Row::R8 | Row::R9 => {
            Some(RationalFn::from_jet(elliptic_integral(row, degree)))
        }
        _ => None,
    })
}

/// Smooth separatrices off the axes: a change `(x, y) = φ(u, v)` sending the
/// curve to the returned axis, with a label for the curve.
pub fn separatrix_charts<S: Scalar>(row: Row, degree: u32) -> Vec<(&'static str, CoordinateChange<S>, Axis)> {
    let diagonal = || ("x=y", CoordinateChange::series(poly(degree, &[(1, 0, 1), (0, 1, 1)]), Jet2::y(degree)), Axis::Y);
    let parabola = || ("y=x^2", CoordinateChange::series(Jet2::x(degree), poly(degree, &[(0, 1, 1), (2, 0, 1)])), Axis::X);
    match row {
        Row::R2 | Row::R4 | Row::R5 | Row::R6 | Row::R13 => vec![diagonal()],
        Row::R3 | Row::R8 | Row::R9 => vec![parabola()],
        _ => vec![],
    }
}

/// One small-parameter instance of every row, with unit `f = 1`.
pub fn row_instances<S: Scalar>() -> Vec<NormalFormId<S>> {
    let r = NormalFormId::<S>::row;
    vec![
        r(Row::R1a).with_int("a", 1),
        r(Row::R1b).with_int("a", 2),
        r(Row::R1c).with_int("a", 1),
        r(Row::R2).with_int("n", 1),
        r(Row::R3),
        r(Row::R4).with_int("a", 1),
        r(Row::R5).with_int("a", 1),
        r(Row::R6).with_int("a", 1),
        r(Row::R7).with_int("a", 1),
        r(Row::R8).with_int("a", 1),
        r(Row::R9).with_int("a", 1),
        r(Row::R10).with_int("m", 1).with_int("n", 2).with_int("p", 1),
        r(Row::R11).with_int("n", -2),
        r(Row::R12).with_int("m", 2).with_int("n", 1).with_int("a", 1).with_int("b", 1),
        r(Row::R13).with_int("n", 1),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::germ::{derive_along, pullback};
    use crate::onedim::{onedim_check, restrict_to_axis};
    use crate::scalar::GaussRat as Q;

    fn id(s: &str) -> NormalFormId<Q> {
        NormalFormId::parse(s).unwrap()
    }

    #[test]
    fn displayed_rows() {
        let x = make_normal_form(&id("table:2[n=1]"), 8).unwrap();
        assert_eq!(x, vf(8, &[(2, 0, 1)], &[(1, 1, -1), (0, 2, 2)]));
        let x = make_normal_form(&id("table:7[a=0]"), 8).unwrap();
        assert_eq!(x, vf(8, &[(0, 1, 2)], &[(2, 0, -3)]));
        let x = make_normal_form(&id("table:12[m=2,n=1,a=1,b=1]"), 8).unwrap();
        assert_eq!(x, vf(8, &[(2, 1, 2)], &[(1, 2, -1)]));
    }

    #[test]
    fn constraints_are_named() {
        for s in ["table:1a[a=0]", "table:12[m=1,n=1,a=1,b=1]", "table:11[n=0]", "table:2", "table:2[n=1,f=0]"] {
            match make_normal_form(&id(s), 8) {
                Err(GermError::BadParams(msg)) => assert!(!msg.is_empty()),
                other => panic!("{s}: {other:?}"),
            }
        }
    }

    #[test]
    fn first_integrals_are_annihilated() {
        for n in 0..3 {
            let i = id(&format!("table:2[n={n}]"));
            let x = make_normal_form(&i, 10).unwrap();
            let f = first_integral(&i, 10).unwrap().unwrap();
            let d = f.derive_along(&x).unwrap().reduce();
            assert!(d.num.is_zero(), "n={n}");
        }
        for row in ["3", "4[a=1]", "5[a=2]", "6", "7[a=1]", "8[a=1]", "9[a=1]"] {
            let i = id(&format!("table:{row}"));
            let x = make_normal_form(&i, 12).unwrap();
            let f = first_integral(&i, 12).unwrap().unwrap();
            let d = f.derive_along(&x).unwrap().reduce();
            assert!(d.num.is_zero(), "row {row}");
        }
        // the literal printed integral of row 9 is not annihilated
        let x = make_normal_form(&id("table:9"), 10).unwrap();
        let lit = poly::<Q>(10, &[(0, 2, 1), (2, 1, -1)]);
        assert!(!derive_along(&x, &lit).unwrap().is_zero());
    }

    #[test]
    fn separatrix_restrictions_pass() {
        for i in row_instances::<Q>() {
            let Family::Row(row) = i.family else { unreachable!() };
            let x = make_normal_form(&i, 10).unwrap();
            for (label, change, axis) in separatrix_charts::<Q>(row, 10) {
                let h = restrict_to_axis(&pullback(&x, &change).unwrap(), axis, 0.0).unwrap();
                assert!(onedim_check(&h, 0.0).passed(), "{i} on {label}");
            }
        }
    }
}
