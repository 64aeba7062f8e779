use super::id::{Family, NormalFormId, PairKind, Param};
use super::table::{bad, in_y, nonneg, poly, positive, vf};
use crate::error::Result;
use crate::germ::VectorFieldGerm;
use crate::scalar::Scalar;
use crate::series::{compose1, Jet1, Jet2};

/// Exponent data of a `vii` pair after constraint checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExponentData {
    pub m: u32,
    pub n: u32,
    pub a: u32,
    pub b: u32,
    pub a_mu: u32,
    pub b_mu: u32,
    pub k1: u32,
    /// `am − bn`, either 1 or −1.
    pub sign: i32,
}

/// Resolves and checks the exponents of a `vii` identifier. Either `(a, b)`
/// or `(amu, bmu)` may be given; `(a, b) = k1 (n, m) + (amu, bmu)`.
pub fn exponent_data<S: Scalar>(id: &NormalFormId<S>) -> Result<ExponentData> {
    let m = positive(id, "m", None)?;
    let n = positive(id, "n", None)?;
    let k1 = nonneg(id, "k1", Some(0))?;
    let shift = |v: i64, step: u32| v - (k1 * step) as i64;
    let (a_mu, b_mu) = match (id.int("amu")?, id.int("bmu")?, id.int("a")?, id.int("b")?) {
        (Some(am), Some(bm), a, b) => {
            if a.is_some_and(|a| shift(a, n) != am) || b.is_some_and(|b| shift(b, m) != bm) {
                return Err(bad(format!("{id}: (a, b) != k1 (n, m) + (amu, bmu)")));
            }
            (am, bm)
        }
        (None, None, Some(a), Some(b)) => (shift(a, n), shift(b, m)),
        _ => return Err(bad(format!("{id}: give either a, b or amu, bmu"))),
    };
    if a_mu < 0 || b_mu < 0 {
        return Err(bad(format!("{id}: amu = {a_mu}, bmu = {b_mu} must be non-negative")));
    }
    let (a_mu, b_mu) = (a_mu as u32, b_mu as u32);
    let (a, b) = (a_mu + k1 * n, b_mu + k1 * m);
    let det = a as i64 * m as i64 - b as i64 * n as i64;
    if det.abs() != 1 {
        return Err(bad(format!("{id}: am - bn = ±1 required, got {det}")));
    }
    if a_mu >= n && b_mu >= m {
        return Err(bad(format!("{id}: x^{a_mu} y^{b_mu} / x^{n} y^{m} must be strictly meromorphic")));
    }
    Ok(ExponentData { m, n, a, b, a_mu, b_mu, k1, sign: det as i32 })
}

fn constant<S: Scalar>(id: &NormalFormId<S>, key: &str, default: i64, degree: u32) -> Result<S> {
    match id.uni(key, degree)? {
        None => Ok(S::from_i64(default)),
        Some(j) if j.terms().all(|(k, _)| k == 0) => Ok(j.coeff(0)),
        Some(_) => Err(bad(format!("{id}: {key} must be a constant"))),
    }
}

fn series<S: Scalar>(id: &NormalFormId<S>, key: &str, default: Jet1<S>, degree: u32) -> Result<Jet1<S>> {
    Ok(id.uni(key, degree)?.unwrap_or(default).truncate(degree))
}

/// The commuting pair of a family at truncation `degree`.
pub fn make_pair<S: Scalar>(id: &NormalFormId<S>, degree: u32) -> Result<(VectorFieldGerm<S>, VectorFieldGerm<S>)> {
    let Family::Pair(kind) = id.family else {
        return Err(bad(format!("{id} is a table row; use make_normal_form")));
    };
    let d = degree;
    let pair = match kind {
        PairKind::I => {
            let n = positive(id, "n", None)?;
            let alpha = constant(id, "alpha", 1, d)?;
            if alpha.is_zero() {
                return Err(bad(format!("{id}: alpha must be nonzero")));
            }
            let r = series(id, "r", Jet1::zero(d), d)?;
            let s = series(id, "s", Jet1::zero(d), d)?;
            if !r.coeff(0).is_zero() || !s.coeff(0).is_zero() {
                return Err(bad(format!("{id}: r(0) = s(0) = 0 required")));
            }
            let nn = S::from_i64(n as i64);
            let b1 = &Jet1::constant(alpha.clone(), d) + &r.scale(&(S::one() / nn.clone()));
            let mut b = Jet1::zero(d);
            for (k, c) in b1.terms() {
                b.set(k + 1, c.clone());
            }
            if let Some(given) = id.uni("b", d)? {
                if given.truncate(d) != b {
                    return Err(bad(format!("{id}: b(y) must equal y (alpha + r(y)/n)")));
                }
            }
            let ry = in_y(&r, d);
            let a = &(&Jet2::one(d) + &poly(d, &[(1, 0, 1)]).scale(&(alpha * nn))) + &(&ry.mul_monomial(1, 0, &S::one()) + &in_y(&s, d));
            let x = vf(d, &[(0, n, 1)], &[]);
            let y = VectorFieldGerm::new(a.mul_monomial(0, 1, &S::one()), in_y(&b, d).mul_monomial(0, 1, &S::one())).truncate(d);
            (x, y)
        }
        PairKind::II => (vf(d, &[(2, 0, 1)], &[]), vf(d, &[], &[(0, 2, 1)])),
        PairKind::III => {
            let n = positive(id, "n", None)?;
            let has_c = id.get("c1").is_some() || id.get("c2").is_some();
            if n >= 2 {
                if has_c {
                    return Err(bad(format!("{id}: c1, c2 belong to the n = 1 variant")));
                }
                (vf(d, &[(0, n, 1)], &[]), vf(d, &[(1, 1, n as i64)], &[(0, 2, 1)]))
            } else {
                let c1 = constant(id, "c1", 1, d)?;
                let c2 = constant(id, "c2", 0, d)?;
                let x = VectorFieldGerm::new(
                    &Jet2::monomial(0, 1, c1, d) + &Jet2::monomial(2, 0, c2.clone(), d),
                    Jet2::monomial(1, 1, c2, d),
                );
                (x, vf(d, &[(1, 1, 1)], &[(0, 2, 1)]))
            }
        }
        PairKind::IV => {
            let n = positive(id, "n", None)?;
            let g1 = series(id, "g1", Jet1::one(d), d)?;
            let g2 = series(id, "g2", Jet1::zero(d), d)?;
            if g1.coeff(0) != S::one() || !g1.coeff(1).is_zero() || !g2.coeff(0).is_zero() {
                return Err(bad(format!("{id}: g1(0) = 1, g1'(0) = g2(0) = 0 required")));
            }
            let w = Jet2::monomial(1, n, S::one(), d);
            let g1w = compose1(&g1, &w)?;
            let g2w = compose1(&g2, &w)?;
            let y = vf(d, &[(1, 1, n as i64)], &[(0, 2, -1)]);
            // g1 y^n x^2 ∂x + g1 g2 (x y^n)^2 Y
            let lead = g1w.mul_monomial(2, n, &S::one());
            let coef = g1w.mul_trunc(&g2w, d).mul_monomial(2, 2 * n, &S::one());
            let x = VectorFieldGerm::new(lead, Jet2::zero(d)).add(&y.mul_fn(&coef)).truncate(d);
            (x, y)
        }
        PairKind::V => {
            let n = nonneg(id, "n", None)?;
            let x = vf(d, &[(2, n, 1)], &[]);
            let y = vf(d, &[(1, 1, n as i64), (2, 0, -(n as i64) - 1)], &[(0, 2, -1)]);
            (x, y)
        }
        PairKind::VI => (vf(d, &[(0, 1, 1), (2, 0, -2)], &[(1, 1, -2)]), vf(d, &[(1, 1, 1)], &[(0, 2, 1)])),
        PairKind::VII => {
            let e = exponent_data(id)?;
            let u1 = series(id, "u1", Jet1::one(d), d)?;
            if u1.coeff(0) != S::one() {
                return Err(bad(format!("{id}: u1(0) = 1 required")));
            }
            let u2 = series(id, "u2", Jet1::var(d), d)?;
            let w = Jet2::monomial(e.n, e.m, S::one(), d);
            let u2w = compose1(&u2, &w)?;
            let q = u2w.div_monomial(e.a_mu, e.b_mu).ok_or_else(|| {
                bad(format!("{id}: x^-{} y^-{} u2(x^{} y^{}) is not holomorphic", e.a_mu, e.b_mu, e.n, e.m))
            })?;
            if !q.constant_term().is_zero() {
                return Err(bad(format!("{id}: x^-amu y^-bmu u2(x^n y^m) must vanish at the origin")));
            }
            let (m, n) = (e.m as i64, e.n as i64);
            let lin = vf(d, &[(1, 0, m)], &[(0, 1, -n)]);
            let x = lin.mul_fn(&Jet2::monomial(e.a, e.b, S::one(), d)).truncate(d);
            let rot = vf(d, &[(1, 0, e.b as i64)], &[(0, 1, -(e.a as i64))]);
            let pre = compose1(&u1, &w)?.mul_monomial(e.a, e.b, &S::one());
            let y = lin.add(&rot.mul_fn(&q)).mul_fn(&pre).truncate(d);
            (x, y)
        }
    };
    Ok(pair)
}

/// Small-parameter instances of every family, including the `n = 1` variant of `iii`.
pub fn pair_instances<S: Scalar>() -> Vec<NormalFormId<S>> {
    let p = NormalFormId::<S>::pair;
    let z = |k: &[i64]| Param::uni(Jet1::from_coeffs(k.iter().map(|c| S::from_i64(*c)).collect(), 8));
    let mut out = Vec::new();
    for n in 1..=3 {
        out.push(p(PairKind::I).with_int("n", n).with_int("alpha", 1));
        out.push(p(PairKind::I).with_int("n", n).with_int("alpha", 2).with("r", z(&[0, 1, 0, 1])).with("s", z(&[0, 0, 1])));
        out.push(p(PairKind::III).with_int("n", n));
        out.push(p(PairKind::IV).with_int("n", n));
        out.push(p(PairKind::IV).with_int("n", n).with("g1", z(&[1, 0, 1, 0, -1])).with("g2", z(&[0, 1, 1])));
        out.push(p(PairKind::V).with_int("n", n));
    }
    out.push(p(PairKind::II));
    out.push(p(PairKind::V).with_int("n", 0));
    out.push(p(PairKind::VI));
    out.push(p(PairKind::III).with_int("n", 1).with_int("c1", 2).with_int("c2", 3));
    for (m, n, am, bm) in [(1, 1, 1, 0), (2, 1, 1, 1), (2, 3, 2, 1)] {
        for k1 in 0..=2 {
            let id = p(PairKind::VII).with_int("m", m).with_int("n", n).with_int("amu", am).with_int("bmu", bm).with_int("k1", k1);
            out.push(id.clone());
            out.push(id.with("u1", z(&[1, 2, 0, 1])).with("u2", z(&[0, 1, -1])));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::germ::lie_bracket;
    use crate::scalar::GaussRat as Q;

    fn id(s: &str) -> NormalFormId<Q> {
        NormalFormId::parse(s).unwrap()
    }

    #[test]
    fn displayed_pairs() {
        let (x, y) = make_pair(&id("mt:vi"), 8).unwrap();
        assert_eq!(x, vf(8, &[(0, 1, 1), (2, 0, -2)], &[(1, 1, -2)]));
        assert_eq!(y, vf(8, &[(1, 1, 1)], &[(0, 2, 1)]));
        let (x, y) = make_pair(&id("mt:i[n=1,alpha=1]"), 8).unwrap();
        assert_eq!(x, vf(8, &[(0, 1, 1)], &[]));
        assert_eq!(y, vf(8, &[(0, 1, 1), (1, 1, 1)], &[(0, 2, 1)]));
    }

    #[test]
    fn every_instance_commutes() {
        for i in pair_instances::<Q>() {
            let (x, y) = make_pair(&i, 24).unwrap();
            assert!(lie_bracket(&x, &y).unwrap().is_zero(), "{i}");
            let det = &(x.a() * y.b()) - &(x.b() * y.a());
            assert!(!det.is_zero(), "{i}");
        }
    }

    #[test]
    fn exponent_constraints() {
        for (m, n, am, bm) in [(1, 1, 1, 0), (2, 1, 1, 1), (2, 3, 2, 1)] {
            for k1 in 0..=1 {
                let s = format!("mt:vii[m={m},n={n},amu={am},bmu={bm},k1={k1}]");
                let e = exponent_data(&id(&s)).unwrap();
                assert_eq!(e.a as i64 * m - e.b as i64 * n, am * m - bm * n);
                assert_eq!(e.sign.abs(), 1);
            }
        }
        assert!(exponent_data(&id("mt:vii[m=3,n=2,amu=2,bmu=1]")).is_err());
        assert!(exponent_data(&id("mt:vii[m=1,n=1,a=1,b=1]")).is_err());
        assert!(exponent_data(&id("mt:vii[m=2,n=1,a=1,b=0,k1=0]")).is_err());
        // u2 = 1 leaves a pole in the perturbation
        let i = id("mt:vii[m=1,n=1,amu=1,bmu=0]").with("u2", Param::uni(Jet1::one(8)));
        assert!(make_pair(&i, 8).is_err());
    }

    #[test]
    fn side_conditions() {
        assert!(make_pair(&id("mt:i[n=1,alpha=0]"), 8).is_err());
        assert!(make_pair(&id("mt:iii[n=2,c1=1]"), 8).is_err());
        let bad_g1 = id("mt:iv[n=1]").with("g1", Param::uni(Jet1::from_coeffs(vec![Q::from_i64(1), Q::from_i64(1)], 8)));
        assert!(make_pair(&bad_g1, 8).is_err());
        let b = id("mt:i[n=1,alpha=1]").with("b", Param::uni(Jet1::monomial(1, Q::from_i64(2), 8)));
        assert!(make_pair(&b, 8).is_err());
    }
}
