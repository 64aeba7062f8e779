use std::collections::BTreeMap;

use super::{derive_along, VectorFieldGerm};
use crate::error::{GermError, Result};
use crate::scalar::Scalar;
use crate::series::Jet2;

/// Outcome of an exact series division.
#[derive(Clone, Debug, PartialEq)]
pub enum Divisibility<S> {
    /// Quotient, known to its own precision.
    Exact(Jet2<S>),
    /// A weighted degree at which the remainder is provably nonzero.
    NotDivisible { degree: u32 },
    /// Precision ran out before anything could be decided.
    Unknown,
}

type Component<S> = BTreeMap<(u32, u32), S>;

fn components<S: Scalar>(j: &Jet2<S>, w: (u32, u32)) -> BTreeMap<u32, Component<S>> {
    let mut out: BTreeMap<u32, Component<S>> = BTreeMap::new();
    for (i, k, c) in j.terms() {
        out.entry(w.0 * i + w.1 * k).or_default().insert((i, k), c.clone());
    }
    out
}

/// Divides weighted-homogeneous `r` by weighted-homogeneous `d` exactly.
fn divide_homogeneous<S: Scalar>(r: &Component<S>, d: &Component<S>) -> Option<Component<S>> {
    let mut rem = r.clone();
    let mut quot = Component::new();
    // leading term in lexicographic order on (x exponent, y exponent)
    let (&(li, lj), lc) = d.iter().next_back()?;
    while let Some((&(ri, rj), rc)) = rem.iter().next_back() {
        if ri < li || rj < lj {
            return None;
        }
        let (qi, qj) = (ri - li, rj - lj);
        let qc = rc.clone() / lc.clone();
        for (&(di, dj), dc) in d {
            let key = (qi + di, qj + dj);
            let v = rem.get(&key).cloned().unwrap_or_else(S::zero) - qc.clone() * dc.clone();
            if v.is_zero() {
                rem.remove(&key);
            } else {
                rem.insert(key, v);
            }
        }
        quot.insert((qi, qj), qc);
    }
    Some(quot)
}

/// Exact division `num / den` graded by the weights `w`.
///
/// `den_exact` marks `den` as a polynomial known to all degrees.
pub fn graded_divide<S: Scalar>(num: &Jet2<S>, den: &Jet2<S>, den_exact: bool, w: (u32, u32)) -> Divisibility<S> {
    let wmin = w.0.min(w.1);
    let wmax = w.0.max(w.1);
    let dcomp = components(den, w);
    let Some((&k, lead)) = dcomp.iter().next() else {
        return Divisibility::Unknown;
    };
    let mut known = num.valid() * wmin;
    if !den_exact {
        known = known.min(den.valid() * wmin);
    }
    if known < k {
        return Divisibility::Unknown;
    }
    let ncomp = components(num, w);
    let mut quot: BTreeMap<u32, Component<S>> = BTreeMap::new();
    for e in 0..=known {
        let mut r = ncomp.get(&e).cloned().unwrap_or_default();
        for (&s, qs) in &quot {
            let Some(dpart) = dcomp.get(&(e - s)) else { continue };
            if e - s == k {
                continue;
            }
            for (&(qi, qj), qc) in qs {
                for (&(di, dj), dc) in dpart {
                    let key = (qi + di, qj + dj);
                    let v = r.get(&key).cloned().unwrap_or_else(S::zero) - qc.clone() * dc.clone();
                    if v.is_zero() {
                        r.remove(&key);
                    } else {
                        r.insert(key, v);
                    }
                }
            }
        }
        if r.is_empty() {
            continue;
        }
        if e < k {
            return Divisibility::NotDivisible { degree: e };
        }
        match divide_homogeneous(&r, lead) {
            Some(q) => {
                quot.insert(e - k, q);
            }
            None => return Divisibility::NotDivisible { degree: e },
        }
    }
    let qvalid = (known - k) / wmax;
    let mut out = Jet2::zero(qvalid);
    for comp in quot.values() {
        for (&(i, j), c) in comp {
            out.set(i, j, c.clone());
        }
    }
    Divisibility::Exact(out)
}

/// Formal quotient `num / den` of two jets.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalFn<S> {
    pub num: Jet2<S>,
    pub den: Jet2<S>,
    /// Common monomial factors have been removed.
    pub reduced: bool,
}

impl<S: Scalar> RationalFn<S> {
    pub fn new(num: Jet2<S>, den: Jet2<S>) -> Result<Self> {
        if den.is_zero() {
            return Err(GermError::ZeroJet);
        }
        Ok(RationalFn { num, den, reduced: false })
    }

    pub fn from_jet(f: Jet2<S>) -> Self {
        let v = f.valid();
        RationalFn { num: f, den: Jet2::one(v), reduced: true }
    }

    /// Removes the largest monomial dividing both parts and normalizes a
    /// constant denominator to one.
    pub fn reduce(&self) -> Self {
        let exps = |j: &Jet2<S>| {
            j.terms().fold((u32::MAX, u32::MAX), |(a, b), (i, k, _)| (a.min(i), b.min(k)))
        };
        let (ni, nj) = exps(&self.num);
        let (di, dj) = exps(&self.den);
        let (mi, mj) = if self.num.is_zero() { (di, dj) } else { (ni.min(di), nj.min(dj)) };
        let mut num = self.num.div_monomial(mi, mj).unwrap_or_else(|| self.num.clone());
        let mut den = self.den.div_monomial(mi, mj).unwrap_or_else(|| self.den.clone());
        if self.num.is_zero() {
            num = Jet2::zero(den.valid());
        }
        if den.terms().count() == 1 && den.coeff(0, 0) != S::zero() {
            let c = den.coeff(0, 0);
            num = num.scale(&(S::one() / c));
            den = Jet2::one(den.valid());
        }
        RationalFn { num, den, reduced: true }
    }

    /// Holomorphy test by exact long division.
    pub fn holomorphic_part(&self) -> Divisibility<S> {
        graded_divide(&self.num, &self.den, false, (1, 1))
    }

    /// The directional derivative along `x`, as a quotient over `den^2`.
    pub fn derive_along(&self, x: &VectorFieldGerm<S>) -> Result<Self> {
        let dn = derive_along(x, &self.num)?;
        let dd = derive_along(x, &self.den)?;
        let num = &(&dn * &self.den) - &(&self.num * &dd);
        let den = &self.den * &self.den;
        Ok(RationalFn { num, den, reduced: false })
    }

    /// Value at a point where the denominator does not vanish.
    pub fn eval(&self, x: &S, y: &S) -> Option<S> {
        let d = self.den.eval(x, y);
        (!d.is_zero()).then(|| self.num.eval(x, y) / d)
    }
}

/// Meromorphic coefficients `f, g` with `f X + g Y = Z`.
pub fn decompose<S: Scalar>(
    z: &VectorFieldGerm<S>,
    x: &VectorFieldGerm<S>,
    y: &VectorFieldGerm<S>,
    tol: f64,
) -> Result<(RationalFn<S>, RationalFn<S>)> {
    let (a, b) = (x.a(), x.b());
    let (c, d) = (y.a(), y.b());
    let (p, q) = (z.a(), z.b());
    let det = &(a * d) - &(b * c);
    if det.is_small(tol) {
        return Err(GermError::DegenerateFrame);
    }
    let fnum = &(p * d) - &(q * c);
    let gnum = &(q * a) - &(p * b);
    let f = RationalFn { num: fnum, den: det.clone(), reduced: false }.reduce();
    let g = RationalFn { num: gnum, den: det, reduced: false }.reduce();
    Ok((f, g))
}

/// `f X + g Y - Z` with denominators cleared.
pub fn decomposition_residual<S: Scalar>(
    z: &VectorFieldGerm<S>,
    x: &VectorFieldGerm<S>,
    y: &VectorFieldGerm<S>,
    f: &RationalFn<S>,
    g: &RationalFn<S>,
) -> VectorFieldGerm<S> {
    let fx = x.mul_fn(&(&f.num * &g.den));
    let gy = y.mul_fn(&(&g.num * &f.den));
    let zz = z.mul_fn(&(&f.den * &g.den));
    fx.add(&gy).sub(&zz)
}
