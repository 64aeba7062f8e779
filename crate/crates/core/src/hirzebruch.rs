//! The Hirzebruch surface `Fₙ` as two charts `(x, y)` and `(u, v)` glued by
//! `u = 1/x, v = y/xⁿ`, together with the commuting flows
//! `Φᵗ(x, y) = (x + t, y + (x + t)^{n+1} − x^{n+1})` and `Ψˢ(x, y) = (x, y + s)`.
//!
//! The fiber coordinate is stored projectively so that `v = ∞` is an
//! ordinary point.

use std::ops::{Add, Mul, Sub};

use crate::error::{GermError, Result};
use crate::germ::VectorFieldGerm;
use crate::scalar::Scalar;
use crate::series::{Jet2, Laurent2};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FnChart {
    /// Coordinates `(x, y)`.
    First,
    /// Coordinates `(u, v)`.
    Second,
}

/// A point of `Fₙ`: base coordinate and fiber value `num / den`.
#[derive(Clone, Debug, PartialEq)]
pub struct FnPoint<S> {
    pub n: u32,
    pub chart: FnChart,
    pub base: S,
    pub num: S,
    pub den: S,
}

impl<S: Scalar> FnPoint<S> {
    pub fn new(n: u32, chart: FnChart, base: S, fiber: S) -> Self {
        FnPoint { n, chart, base, num: fiber, den: S::one() }
    }

    /// The point with fiber coordinate `∞`.
    pub fn at_infinity(n: u32, chart: FnChart, base: S) -> Self {
        FnPoint { n, chart, base, num: S::one(), den: S::zero() }
    }

    /// Fiber value, or `None` at infinity.
    pub fn fiber(&self) -> Option<S> {
        (!self.den.is_zero()).then(|| self.num.clone() / self.den.clone())
    }

    pub fn is_fiber_infinite(&self) -> bool {
        self.den.is_zero()
    }

    /// Same point of the surface, whichever chart each is written in.
    pub fn same_point(&self, other: &Self) -> bool {
        if self.n != other.n {
            return false;
        }
        let other = if self.chart == other.chart {
            other.clone()
        } else {
            match fn_transition(other) {
                Ok(p) => p,
                Err(_) => return false,
            }
        };
        self.base == other.base && self.num.clone() * other.den.clone() == other.num.clone() * self.den.clone()
    }
}

/// Rewrites a point in the other chart.
pub fn fn_transition<S: Scalar>(p: &FnPoint<S>) -> Result<FnPoint<S>> {
    if p.base.is_zero() {
        return Err(GermError::OnExceptionalLocus);
    }
    let chart = match p.chart {
        FnChart::First => FnChart::Second,
        FnChart::Second => FnChart::First,
    };
    Ok(FnPoint {
        n: p.n,
        chart,
        base: S::one() / p.base.clone(),
        num: p.num.clone(),
        den: p.den.clone() * p.base.pow_u32(p.n),
    })
}

fn binomial(n: u32, k: u32) -> i64 {
    (0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i + 1) as i64)
}

/// `((1 + tu)^{n+1} − 1) / u`.
fn shift_poly<S: Scalar>(n: u32, t: &S, u: &S) -> S {
    (1..=n + 1).fold(S::zero(), |acc, k| acc + S::from_i64(binomial(n + 1, k)) * t.pow_u32(k) * u.pow_u32(k - 1))
}

/// `Φᵗ`, switching to the first chart when the second chart's base runs to infinity.
pub fn phi_flow<S: Scalar>(n: u32, t: &S, p: &FnPoint<S>) -> FnPoint<S> {
    match p.chart {
        FnChart::First => {
            let x1 = p.base.clone() + t.clone();
            let delta = x1.pow_u32(n + 1) - p.base.pow_u32(n + 1);
            FnPoint { n, chart: FnChart::First, base: x1, num: p.num.clone() + p.den.clone() * delta, den: p.den.clone() }
        }
        FnChart::Second => {
            let u = &p.base;
            let w = S::one() + t.clone() * u.clone();
            if w.is_zero() {
                // x + t = 0: land on the base point x = 0 of the first chart
                let num = p.num.clone() * u.clone() - p.den.clone();
                let den = p.den.clone() * u.pow_u32(n + 1);
                return FnPoint { n, chart: FnChart::First, base: S::zero(), num, den };
            }
            let num = p.num.clone() + p.den.clone() * shift_poly(n, t, u);
            let den = p.den.clone() * w.pow_u32(n);
            FnPoint { n, chart: FnChart::Second, base: u.clone() / w, num, den }
        }
    }
}

/// `Ψˢ`.
pub fn psi_flow<S: Scalar>(n: u32, s: &S, p: &FnPoint<S>) -> FnPoint<S> {
    let shift = match p.chart {
        FnChart::First => s.clone(),
        FnChart::Second => s.clone() * p.base.pow_u32(n),
    };
    FnPoint { num: p.num.clone() + p.den.clone() * shift, ..p.clone() }
}

/// First-order arithmetic `a + b ε` over Laurent polynomials.
#[derive(Clone, Debug, PartialEq)]
struct Dual<S> {
    re: Laurent2<S>,
    eps: Laurent2<S>,
}

impl<S: Scalar> Dual<S> {
    fn constant(re: Laurent2<S>) -> Self {
        Dual { re, eps: Laurent2::zero() }
    }

    fn pow(&self, k: u32) -> Self {
        (0..k).fold(Dual::constant(Laurent2::one()), |acc, _| &acc * self)
    }

    /// Reciprocal; the real part must be a monomial.
    fn recip(&self) -> Self {
        let (i, j, c) = self.re.as_monomial().expect("monomial real part");
        let inv = Laurent2::monomial(-i, -j, S::one() / c);
        let eps = -&(&(&self.eps * &inv) * &inv);
        Dual { re: inv, eps }
    }
}

impl<S: Scalar> Add for &Dual<S> {
    type Output = Dual<S>;
    fn add(self, r: Self) -> Dual<S> {
        Dual { re: &self.re + &r.re, eps: &self.eps + &r.eps }
    }
}

impl<S: Scalar> Sub for &Dual<S> {
    type Output = Dual<S>;
    fn sub(self, r: Self) -> Dual<S> {
        Dual { re: &self.re - &r.re, eps: &self.eps - &r.eps }
    }
}

impl<S: Scalar> Mul for &Dual<S> {
    type Output = Dual<S>;
    fn mul(self, r: Self) -> Dual<S> {
        Dual { re: &self.re * &r.re, eps: &(&self.re * &r.eps) + &(&self.eps * &r.re) }
    }
}

/// Generators of `Φ` and `Ψ` at `p = {u = 0, v = ∞}` in coordinates `(ū, v̄) = (u, 1/v)`.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalGenerators<S> {
    /// `d/dt Φᵗ` at `t = 0`.
    pub z_flow: VectorFieldGerm<S>,
    /// `d/ds Ψˢ` at `s = 0`.
    pub y_flow: VectorFieldGerm<S>,
    /// `ū² ∂ū − v̄(nū − (n+1)v̄) ∂v̄`.
    pub z_display: VectorFieldGerm<S>,
    /// `−ūⁿ v̄² ∂v̄`.
    pub y_display: VectorFieldGerm<S>,
    /// `z_flow = z_sign · z_display`.
    pub z_sign: i32,
    pub y_sign: i32,
}

fn sign_between<S: Scalar>(a: &VectorFieldGerm<S>, b: &VectorFieldGerm<S>) -> i32 {
    if a == b {
        1
    } else if *a == b.scale(&-S::one()) {
        -1
    } else {
        0
    }
}

fn to_field<S: Scalar>(a: &Laurent2<S>, b: &Laurent2<S>, degree: u32) -> VectorFieldGerm<S> {
    VectorFieldGerm::new(a.to_jet(degree).expect("holomorphic"), b.to_jet(degree).expect("holomorphic"))
}

pub fn local_generators_at_p<S: Scalar>(n: u32, degree: u32) -> LocalGenerators<S> {
    let ubar = Dual::constant(Laurent2::monomial(1, 0, S::one()));
    let vbar = Dual::constant(Laurent2::monomial(0, 1, S::one()));
    let eps = Dual { re: Laurent2::zero(), eps: Laurent2::one() };
    let one = Dual::constant(Laurent2::one());

    // Φ^ε in (u, v): u' = u / (1 + εu), v' = (v + ((1 + εu)^{n+1} − 1)/u) / (1 + εu)^n
    let w = &one + &(&eps * &ubar);
    let u1 = &ubar * &w.recip();
    let shift = &eps.pow(1) * &Dual::constant(Laurent2::constant(S::from_i64(n as i64 + 1)));
    let v = vbar.recip();
    let v1 = &(&v + &shift) * &w.pow(n).recip();
    let vbar1 = v1.recip();
    let z_flow = to_field(&u1.eps, &vbar1.eps, degree);

    // Ψ^ε: v' = v + ε uⁿ
    let v2 = &v + &(&eps * &ubar.pow(n));
    let y_flow = to_field(&Laurent2::zero(), &v2.recip().eps, degree);

    let nn = n as i64;
    let z_display = VectorFieldGerm::new(
        Jet2::from_int_terms(degree, &[(2, 0, 1)]),
        Jet2::from_int_terms(degree, &[(1, 1, -nn), (0, 2, nn + 1)]),
    );
    let y_display = VectorFieldGerm::new(Jet2::zero(degree), Jet2::from_int_terms(degree, &[(n, 2, -1)]));
    LocalGenerators {
        z_sign: sign_between(&z_flow, &z_display),
        y_sign: sign_between(&y_flow, &y_display),
        z_flow,
        y_flow,
        z_display,
        y_display,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::germ::lie_bracket;
    use crate::scalar::GaussRat as Q;

    fn q(n: i64) -> Q {
        Q::from_i64(n)
    }

    #[test]
    fn transition_examples() {
        let p = FnPoint::new(2, FnChart::First, q(2), q(8));
        let t = fn_transition(&p).unwrap();
        assert_eq!((t.base.clone(), t.fiber().unwrap()), (Q::from_ratio(1, 2), q(2)));
        assert!(fn_transition(&t).unwrap().same_point(&p));
        let p = FnPoint::new(0, FnChart::First, q(3), q(5));
        let t = fn_transition(&p).unwrap();
        assert_eq!(t.fiber().unwrap(), q(5));
        assert_eq!(fn_transition(&FnPoint::new(1, FnChart::First, q(0), q(1))), Err(GermError::OnExceptionalLocus));
    }

    #[test]
    fn flow_examples() {
        let p = phi_flow(1, &q(1), &FnPoint::new(1, FnChart::First, q(0), q(0)));
        assert_eq!((p.base.clone(), p.fiber().unwrap()), (q(1), q(1)));
        let fixed = FnPoint::at_infinity(2, FnChart::Second, q(0));
        assert!(phi_flow(2, &Q::from_ratio(7, 3), &fixed).same_point(&fixed));
        assert!(psi_flow(2, &q(4), &fixed).same_point(&fixed));
        let p = psi_flow(1, &q(3), &FnPoint::new(1, FnChart::First, q(1), q(0)));
        assert_eq!(p.fiber().unwrap(), q(3));
        let on_fiber = FnPoint::new(1, FnChart::Second, q(0), q(5));
        assert_eq!(psi_flow(1, &q(9), &on_fiber), on_fiber);
    }

    #[test]
    fn chart_switch_when_base_escapes() {
        // u = 1/2, t = -2: x = 2 flows to x = 0
        let p = FnPoint::new(1, FnChart::Second, Q::from_ratio(1, 2), q(3));
        let moved = phi_flow(1, &q(-2), &p);
        assert_eq!(moved.chart, FnChart::First);
        let direct = phi_flow(1, &q(-2), &fn_transition(&p).unwrap());
        assert!(moved.same_point(&direct));
    }

    #[test]
    fn generators_at_fixed_point() {
        for n in 0..=3 {
            let g = local_generators_at_p::<Q>(n, 8);
            assert_eq!(g.z_sign, -1, "n={n}");
            assert_eq!(g.y_sign, 1, "n={n}");
            assert!(lie_bracket(&g.z_flow, &g.y_flow).unwrap().is_zero());
        }
        let g = local_generators_at_p::<Q>(1, 8);
        assert_eq!(g.y_display, VectorFieldGerm::from_int_terms(8, &[], &[(1, 2, -1)]));
        assert_eq!(g.z_display, VectorFieldGerm::from_int_terms(8, &[(2, 0, 1)], &[(1, 1, -1), (0, 2, 2)]));
    }
}
