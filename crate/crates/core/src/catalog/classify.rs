//! Invariant extraction and a necessary-conditions filter over the table rows.

use super::id::{NormalFormId, Row};
use super::table::{pow, primitive};
use crate::blowup::{blowup_vf, divisor_singularities};
use crate::error::{GermError, Result};
use crate::germ::{derive_along, primitive_split, DivisorSplit, Form, LinearPart, VectorFieldGerm};
use crate::onedim::{onedim_check, restrict_to_axis, Axis, Status};
use crate::scalar::{Scalar, C64};
use crate::series::{compose2, Jet2};

/// Tolerance for float comparisons inside blow-up signatures.
const SIG_TOL: f64 = 1e-6;
/// Blow-up depth explored by signatures.
const SIG_DEPTH: u32 = 4;
/// Largest `n` tried for row 2.
const MAX_ROW2_N: u32 = 16;

#[derive(Clone, Debug, PartialEq)]
pub struct GermInvariants<S> {
    pub order: Option<u32>,
    /// Exponents of the monomial factor `x^a y^b`.
    pub divisor: (u32, u32),
    /// Multiplicities of the declared and built-in forms.
    pub forms: Vec<(String, u32)>,
    pub primitive: VectorFieldGerm<S>,
    pub primitive_linear: LinearPart<S>,
    /// The primitive linear part is nonzero with both eigenvalues zero.
    pub nilpotent: bool,
    /// Dicriticality of the first blow-up of the primitive, when singular.
    pub dicritical: Option<bool>,
}

/// `x − y`, `y − x²`, `x³ + y²`.
pub fn builtin_forms<S: Scalar>(degree: u32) -> Vec<Form<S>> {
    vec![Form::diagonal(degree), Form::parabola(degree), Form::cusp(degree)]
}

fn all_forms<S: Scalar>(extra: &[Form<S>], degree: u32) -> Vec<Form<S>> {
    let mut forms = builtin_forms(degree);
    for f in extra {
        if !forms.iter().any(|g| g.label == f.label) {
            forms.push(f.clone());
        }
    }
    forms
}

fn is_singular<S: Scalar>(x: &VectorFieldGerm<S>, tol: f64) -> bool {
    x.a().constant_term().is_small(tol) && x.b().constant_term().is_small(tol)
}

/// Order, divisor, primitive linear data and dicriticality of `x`.
pub fn extract_invariants<S: Scalar>(x: &VectorFieldGerm<S>, forms: &[Form<S>], tol: f64) -> Result<GermInvariants<S>> {
    let split = primitive_split(x, &all_forms(forms, x.valid()));
    invariants_from(x, &split, tol)
}

fn invariants_from<S: Scalar>(x: &VectorFieldGerm<S>, split: &DivisorSplit<S>, tol: f64) -> Result<GermInvariants<S>> {
    let prim = &split.primitive;
    let lin = prim.linear_part();
    let dicritical = if !prim.is_zero() && is_singular(prim, tol) && lin.eigenvalues_zero(tol) {
        match blowup_vf(prim, 0) {
            Ok(r) => Some(r.dicritical),
            Err(e @ GermError::PrecisionExhausted(_)) => return Err(e),
            Err(_) => None,
        }
    } else {
        None
    };
    Ok(GermInvariants {
        order: x.order(),
        divisor: split.monomial,
        forms: split.forms.iter().map(|(f, k)| (f.label.clone(), *k)).collect(),
        primitive: prim.clone(),
        nilpotent: lin.is_nilpotent(tol),
        primitive_linear: lin,
        dicritical,
    })
}

/// Recursive blow-up data of a foliation, used to compare singularities.
#[derive(Clone, Debug, PartialEq)]
pub enum Signature {
    Regular,
    /// Eigenvalue pair, compared projectively and up to order.
    Linear(C64, C64),
    Blowup { dicritical: bool, points: Vec<Signature> },
    Unknown,
}

fn clean(x: &VectorFieldGerm<C64>) -> VectorFieldGerm<C64> {
    let scale = x.max_abs().max(1.0);
    let f = |c: &C64| if c.norm() <= 1e-10 * scale { C64::new(0.0, 0.0) } else { *c };
    VectorFieldGerm::new(x.a().map_coeffs(f), x.b().map_coeffs(f))
}

/// The signature of the foliation of `x`, exploring `depth` blow-ups.
pub fn signature(x: &VectorFieldGerm<C64>, depth: u32) -> Signature {
    let x = primitive_split(&clean(x), &[]).primitive;
    if x.is_zero() {
        return Signature::Unknown;
    }
    if !is_singular(&x, SIG_TOL) {
        return Signature::Regular;
    }
    let lin = x.linear_part();
    if !lin.eigenvalues_zero(SIG_TOL) {
        return match lin.eigenvalues {
            Some((l1, l2)) => Signature::Linear(l1, l2),
            None => Signature::Unknown,
        };
    }
    if depth == 0 {
        return Signature::Unknown;
    }
    let Ok(r) = blowup_vf(&x, 0) else {
        return Signature::Unknown;
    };
    if r.dicritical {
        return Signature::Blowup { dicritical: true, points: vec![] };
    }
    match divisor_singularities(&r, SIG_TOL) {
        Ok(pts) => Signature::Blowup {
            dicritical: false,
            points: pts.iter().map(|p| signature(&p.germ, depth - 1)).collect(),
        },
        Err(_) => Signature::Unknown,
    }
}

fn same_pair(p: (C64, C64), q: (C64, C64)) -> bool {
    let scale = (p.0.norm() + p.1.norm()) * (q.0.norm() + q.1.norm());
    (p.0 * q.1 - p.1 * q.0).norm() <= SIG_TOL * scale || (p.0 * q.0 - p.1 * q.1).norm() <= SIG_TOL * scale
}

impl Signature {
    /// Whether the two signatures can describe the same foliation.
    pub fn compatible(&self, other: &Signature) -> bool {
        match (self, other) {
            (Signature::Unknown, _) | (_, Signature::Unknown) => true,
            (Signature::Regular, Signature::Regular) => true,
            (Signature::Linear(a, b), Signature::Linear(c, d)) => same_pair((*a, *b), (*c, *d)),
            (Signature::Blowup { dicritical: d1, points: p1 }, Signature::Blowup { dicritical: d2, points: p2 }) => {
                d1 == d2 && p1.len() == p2.len() && matching(p1, p2, &mut vec![false; p2.len()])
            }
            _ => false,
        }
    }
}

fn matching(p: &[Signature], q: &[Signature], used: &mut Vec<bool>) -> bool {
    let Some((first, rest)) = p.split_first() else {
        return true;
    };
    for j in 0..q.len() {
        if !used[j] && first.compatible(&q[j]) {
            used[j] = true;
            if matching(rest, q, used) {
                return true;
            }
            used[j] = false;
        }
    }
    false
}

/// Candidate rows with the notes explaining exclusions.
#[derive(Clone, Debug)]
pub struct Classification<S> {
    pub candidates: Vec<NormalFormId<S>>,
    pub notes: Vec<String>,
    pub invariants: GermInvariants<S>,
}

/// Lists the table rows whose computable invariants match `x`. An empty list
/// means a necessary condition fails. Forms beyond the built-in ones may be declared.
pub fn classify<S: Scalar>(x: &VectorFieldGerm<S>, forms: &[Form<S>], tol: f64) -> Result<Classification<S>> {
    let degree = x.valid();
    let forms = all_forms(forms, degree);
    let split = primitive_split(x, &forms);
    let invariants = invariants_from(x, &split, tol)?;
    let mut out = Classification { candidates: Vec::new(), notes: Vec::new(), invariants };
    if x.is_small(tol) {
        return Err(GermError::ZeroJet);
    }
    if !is_singular(x, tol) {
        out.notes.push("the germ does not vanish at the origin".into());
        return Ok(out);
    }
    let lin = x.linear_part();
    if !lin.eigenvalues_zero(tol) {
        return Err(GermError::NonzeroEigenvalue(format!(
            "trace {}, determinant {}",
            crate::format_scalar(&lin.trace),
            crate::format_scalar(&lin.det)
        )));
    }
    for axis in [Axis::X, Axis::Y] {
        let Ok(h) = restrict_to_axis(x, axis, tol) else { continue };
        let v = onedim_check(&h, tol);
        match v.status {
            Status::Fail => {
                out.notes.push(format!("restriction to the invariant axis {axis:?} fails: {:?}", v.reason));
                return Ok(out);
            }
            Status::Unknown => out.notes.push(format!("restriction to axis {axis:?} undecided: {:?}", v.reason)),
            Status::Pass => {}
        }
    }

    if let Some((a, k)) = regular_exponents(x, &split, tol)? {
        match (a, k) {
            (a, 0) if a >= 1 => out.candidates.push(NormalFormId::row(Row::R1a).with_int("a", a as i64)),
            (a, 1) if a >= 1 => out.candidates.push(NormalFormId::row(Row::R1b).with_int("a", a as i64)),
            (a, 2) => out.candidates.push(NormalFormId::row(Row::R1c).with_int("a", a as i64)),
            _ => out.notes.push(format!("regular foliation with {k} zeros on nearby leaves")),
        }
        return Ok(out);
    }

    let prim_lin = out.invariants.primitive_linear.clone();
    if !prim_lin.eigenvalues_zero(tol) {
        linear_rows(&split, &prim_lin, tol, &mut out);
    } else {
        let sig = signature(&split.primitive.lower::<C64>(), SIG_DEPTH);
        let swapped = primitive_split(&x.swap_xy(), &forms);
        let nilpotent = out.invariants.nilpotent;
        for row in [Row::R2, Row::R3, Row::R4, Row::R5, Row::R6, Row::R7, Row::R8, Row::R9] {
            if nilpotent != matches!(row, Row::R3 | Row::R7 | Row::R8 | Row::R9) {
                continue;
            }
            let a = [&split, &swapped].into_iter().find_map(|s| pattern_exponent(row, s));
            let Some(a) = a else { continue };
            let ns: Vec<u32> = if row == Row::R2 { (0..=MAX_ROW2_N).collect() } else { vec![0] };
            for n in ns {
                let reference = signature(&primitive::<C64>(row, n, degree.min(16)), SIG_DEPTH);
                if reference.compatible(&sig) {
                    let id = NormalFormId::row(row);
                    out.candidates.push(match row {
                        Row::R2 => id.with_int("n", n as i64),
                        Row::R3 => id,
                        _ => id.with_int("a", a as i64),
                    });
                }
            }
        }
    }
    if out.candidates.is_empty() {
        out.notes.push("no table row matches the divisor, eigenvalue and blow-up data".into());
    }
    Ok(out)
}

/// `a` such that the divisor of `s` is the row's prefactor to the power `a`.
fn pattern_exponent<S: Scalar>(row: Row, s: &DivisorSplit<S>) -> Option<u32> {
    let (diag, par, cusp) = (s.multiplicity("x-y"), s.multiplicity("y-x^2"), s.multiplicity("x^3+y^2"));
    let others: u32 = s.forms.iter().filter(|(f, _)| !["x-y", "y-x^2", "x^3+y^2"].contains(&f.label.as_str())).map(|(_, k)| k).sum();
    if others > 0 {
        return None;
    }
    let (i, j) = s.monomial;
    let a = match row {
        Row::R2 | Row::R3 => 0,
        Row::R4 | Row::R5 => i,
        Row::R6 => i,
        Row::R7 => cusp,
        Row::R8 | Row::R9 => j,
        _ => return None,
    };
    let want = match row {
        Row::R2 | Row::R3 => ((0, 0), 0, 0, 0),
        Row::R4 => ((a, a), a, 0, 0),
        Row::R5 => ((a, a), 2 * a, 0, 0),
        Row::R6 => ((a, 2 * a), 3 * a, 0, 0),
        Row::R7 => ((0, 0), 0, 0, a),
        Row::R8 => ((0, a), 0, a, 0),
        _ => ((0, a), 0, 2 * a, 0),
    };
    (want == ((i, j), diag, par, cusp)).then_some(a)
}

/// Rows 10 to 13, whose primitive has a non-nilpotent linear part.
fn linear_rows<S: Scalar>(
    split: &DivisorSplit<S>,
    lin: &LinearPart<S>,
    tol: f64,
    out: &mut Classification<S>,
) {
    let m = &lin.matrix;
    if !lin.det.is_small(tol) && m[0][1].is_small(tol) && m[1][0].is_small(tol) {
        let ratio = m[1][1].clone() / m[0][0].clone();
        let diag = split.multiplicity("x-y");
        let extra: u32 = split.forms.iter().map(|(_, k)| *k).sum::<u32>() - diag;
        let (a, b) = split.monomial;
        if extra == 0 {
            if diag == 0 {
                if (a, b) == (1, 0) {
                    if let Some((n, 1)) = ratio.as_small_rational(tol) {
                        out.candidates.push(NormalFormId::row(Row::R11).with_int("n", n));
                    }
                }
                if (a, b) == (0, 1) {
                    if let Some((n, 1)) = (S::one() / ratio.clone()).as_small_rational(tol) {
                        out.candidates.push(NormalFormId::row(Row::R11).with_int("n", n));
                    }
                }
                if let Some((p, q)) = (-ratio.clone()).as_small_rational(tol) {
                    if p > 0 {
                        // ratio = −n/m in lowest terms
                        let (n, mm) = (p, q);
                        let det = a as i64 * mm - b as i64 * n;
                        if det.abs() == 1 {
                            out.candidates.push(
                                NormalFormId::row(Row::R12)
                                    .with_int("m", mm)
                                    .with_int("n", n)
                                    .with_int("a", a as i64)
                                    .with_int("b", b as i64),
                            );
                        }
                        if det == 0 && a + b > 0 {
                            out.candidates.push(NormalFormId::row(Row::R10).with_int("m", b as i64).with_int("n", a as i64));
                        }
                    }
                }
            } else if diag == 1 && a == b && (-ratio).as_small_rational(tol) == Some((1, 1)) {
                out.candidates.push(NormalFormId::row(Row::R13).with_int("n", a as i64));
            }
        }
        return;
    }
    // Non-diagonal linear part: only the eigenvalue ratio is used.
    let Some((l1, l2)) = &lin.eigenvalues else {
        out.candidates.extend([Row::R10, Row::R11, Row::R12, Row::R13].map(NormalFormId::row));
        return;
    };
    if l1.is_small(tol) || l2.is_small(tol) {
        out.notes.push("saddle-node primitive".into());
        return;
    }
    let r = l2.clone() / l1.clone();
    let int_or_inverse = |r: &S| {
        matches!(r.as_small_rational(tol), Some((_, 1))) || matches!((S::one() / r.clone()).as_small_rational(tol), Some((_, 1)))
    };
    if int_or_inverse(&r) {
        out.candidates.push(NormalFormId::row(Row::R11));
    }
    if matches!((-r.clone()).as_small_rational(tol), Some((p, _)) if p > 0) {
        out.candidates.extend([Row::R10, Row::R12].map(NormalFormId::row));
        if (-r).as_small_rational(tol) == Some((1, 1)) {
            out.candidates.push(NormalFormId::row(Row::R13));
        }
    }
}

/// For a regular foliation `X = h P` with `P(0) ≠ 0`: `(a, k)` where, in
/// coordinates with `P = ∂x`, `h = y^a F` and `F(x, 0)` has order `k`.
fn regular_exponents<S: Scalar>(x: &VectorFieldGerm<S>, split: &DivisorSplit<S>, tol: f64) -> Result<Option<(u32, u32)>> {
    let degree = x.valid();
    let exps = |h: &Jet2<S>| -> Option<(u32, u32)> {
        let a = h.terms().map(|(_, j, _)| j).min()?;
        let k = h.terms().filter(|t| t.1 == a).map(|t| t.0).min()?;
        Some((a, k))
    };
    if x.b().is_small(tol) {
        return Ok(exps(x.a()));
    }
    if x.a().is_small(tol) {
        return Ok(exps(&x.b().swap_xy()));
    }
    if is_singular(&split.primitive, tol) {
        return Ok(None);
    }
    let mut h = Jet2::monomial(split.monomial.0, split.monomial.1, S::one(), degree);
    for (f, k) in &split.forms {
        h = h.mul_trunc(&pow(&f.poly, *k, degree), degree);
    }
    let (mut p, mut h) = (split.primitive.clone(), h);
    if p.a().constant_term().is_small(tol) {
        p = p.swap_xy();
        h = h.swap_xy();
    }
    let (psi1, psi2) = flow_box(&p)?;
    Ok(exps(&compose2(&h, &psi1, &psi2)?))
}

/// `(s, y) ↦ exp(s P)(0, y)` as a pair of jets; requires `P_x(0) ≠ 0`.
fn flow_box<S: Scalar>(p: &VectorFieldGerm<S>) -> Result<(Jet2<S>, Jet2<S>)> {
    let valid = p.valid();
    let mut out = Vec::new();
    for start in [Jet2::x(valid), Jet2::y(valid)] {
        let mut psi = Jet2::zero(valid);
        let mut g = start;
        let mut fact = S::one();
        for k in 0..=valid {
            if k > 0 {
                fact = fact * S::from_i64(k as i64);
                g = match derive_along(p, &g) {
                    Ok(next) => next,
                    Err(_) => break,
                };
            }
            for (i, j, c) in g.terms() {
                if i == 0 && j + k <= valid {
                    psi.set(k, j, c.clone() / fact.clone());
                }
            }
            if g.valid() == 0 {
                break;
            }
        }
        out.push(psi);
    }
    let psi2 = out.pop().unwrap();
    Ok((out.pop().unwrap(), psi2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{make_normal_form, row_instances};
    use crate::scalar::GaussRat as Q;

    fn vf(a: &[(u32, u32, i64)], b: &[(u32, u32, i64)]) -> VectorFieldGerm<Q> {
        VectorFieldGerm::from_int_terms(16, a, b)
    }

    fn labels(c: &Classification<Q>) -> Vec<String> {
        c.candidates.iter().map(|i| i.to_string()).collect()
    }

    #[test]
    fn invariant_examples() {
        let inv = extract_invariants(&vf(&[(2, 1, 1)], &[(1, 2, -1)]), &[], 0.0).unwrap();
        assert_eq!(inv.order, Some(3));
        assert_eq!(inv.divisor, (1, 1));
        assert_eq!(inv.primitive_linear.eigenvalues, Some((Q::from_i64(1), Q::from_i64(-1))));
        let inv = extract_invariants(&vf(&[(0, 1, 1), (2, 0, -2)], &[(1, 1, -2)]), &[], 0.0).unwrap();
        assert_eq!(inv.order, Some(1));
        assert!(inv.nilpotent);
        assert_eq!(inv.dicritical, Some(false));
        let inv = extract_invariants(&vf(&[(1, 1, 2)], &[(0, 2, 1)]), &[], 0.0).unwrap();
        assert_eq!(inv.divisor, (0, 1));
        assert_eq!(inv.primitive_linear.eigenvalues, Some((Q::from_i64(2), Q::from_i64(1))));
    }

    #[test]
    fn classify_examples() {
        let c = classify(&vf(&[(2, 0, 1)], &[(1, 1, -1), (0, 2, 2)]), &[], 0.0).unwrap();
        assert_eq!(labels(&c), ["table:2[n=1]"]);
        let c = classify(&vf(&[(3, 0, 1)], &[]), &[], 0.0).unwrap();
        assert!(c.candidates.is_empty());
        let c = classify(&vf(&[(2, 1, 1)], &[(0, 3, 1)]), &[], 0.0).unwrap();
        assert!(c.candidates.is_empty());
        let x = make_normal_form(&NormalFormId::<Q>::parse("table:4[a=1]").unwrap(), 16).unwrap();
        let c = classify(&x, &[Form::diagonal(16)], 0.0).unwrap();
        assert_eq!(labels(&c), ["table:4[a=1]"]);
        assert!(matches!(classify(&vf(&[(1, 0, 1)], &[]), &[], 0.0), Err(GermError::NonzeroEigenvalue(_))));
    }

    #[test]
    fn every_row_instance_is_recognised() {
        for id in row_instances::<Q>() {
            let x = make_normal_form(&id, 16).unwrap();
            let c = classify(&x, &[], 0.0).unwrap();
            assert!(c.candidates.iter().any(|k| k.matches(&id)), "{id}: {:?} {:?}", labels(&c), c.notes);
        }
    }

    #[test]
    fn semicomplete_unit_multiples_keep_their_row() {
        // constants, and 1 + F for a holomorphic first integral F
        for s in ["table:2[n=2]", "table:3", "table:4[a=1]", "table:5[a=0]", "table:6[a=1]", "table:7[a=1]", "table:8[a=0]", "table:9[a=1]", "table:13[n=1]"] {
            let id = NormalFormId::<Q>::parse(s).unwrap();
            let mut units = vec![Jet2::constant(Q::from_i64(3), 16)];
            if let Some(f) = crate::catalog::first_integral(&id, 16).unwrap().filter(|f| f.den == Jet2::one(16)) {
                units.push(&Jet2::one(16) + &f.num);
            }
            for u in units {
                let x = make_normal_form(&id.clone().with("f", crate::catalog::Param::bi(u)), 16).unwrap();
                let c = classify(&x, &[], 0.0).unwrap();
                assert!(c.candidates.iter().any(|k| k.matches(&id)), "{s}: {:?} {:?}", labels(&c), c.notes);
            }
        }
    }

    #[test]
    fn regular_foliation_with_transverse_zeros() {
        let x = vf(&[(1, 1, 1)], &[]);
        assert_eq!(labels(&classify(&x, &[], 0.0).unwrap()), ["table:1b[a=1]"]);
        // y (x − y) (∂x + ∂y): the diagonal is a leaf, the x-axis is transverse
        let x = vf(&[(1, 1, 1), (0, 2, -1)], &[(1, 1, 1), (0, 2, -1)]);
        let c = classify(&x, &[], 0.0).unwrap();
        assert_eq!(c.candidates.len(), 1, "{:?}", c.notes);
    }

    #[test]
    fn signatures_separate_elliptic_rows() {
        let sig = |r| signature(&primitive::<C64>(r, 0, 16), SIG_DEPTH);
        assert!(!sig(Row::R4).compatible(&sig(Row::R5)));
        assert!(!sig(Row::R4).compatible(&sig(Row::R2)));
        assert!(sig(Row::R6).compatible(&sig(Row::R6)));
    }
}
