use super::VectorFieldGerm;
use crate::error::{GermError, Result};
use crate::scalar::Scalar;
use crate::series::{compose2, Jet2, Laurent2, Var};

/// A change of coordinates `(x, y) = (φ₁(u, v), φ₂(u, v))`.
#[derive(Clone, Debug, PartialEq)]
pub enum CoordinateChange<S> {
    /// Germ of biholomorphism fixing the origin.
    Series { phi1: Jet2<S>, phi2: Jet2<S> },
    /// Exact rational chart whose Jacobian determinant is a monomial.
    /// The transformed field is multiplied by `u^clear.0 v^clear.1`.
    Chart { phi1: Laurent2<S>, phi2: Laurent2<S>, clear: (i32, i32) },
}

impl<S: Scalar> CoordinateChange<S> {
    pub fn series(phi1: Jet2<S>, phi2: Jet2<S>) -> Self {
        CoordinateChange::Series { phi1, phi2 }
    }

    pub fn chart(phi1: Laurent2<S>, phi2: Laurent2<S>, clear: (i32, i32)) -> Self {
        CoordinateChange::Chart { phi1, phi2, clear }
    }

    /// The identity at precision `valid`.
    pub fn identity(valid: u32) -> Self {
        Self::series(Jet2::x(valid), Jet2::y(valid))
    }

    /// Series kind with `φ(0) = 0` and nonsingular linear part.
    pub fn is_invertible(&self) -> bool {
        match self {
            CoordinateChange::Series { phi1, phi2 } => {
                phi1.constant_term().is_zero() && phi2.constant_term().is_zero() && !jacobian_at_origin(phi1, phi2).is_zero()
            }
            CoordinateChange::Chart { .. } => false,
        }
    }

    /// `self ∘ inner` for series changes.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        match (self, inner) {
            (CoordinateChange::Series { phi1, phi2 }, CoordinateChange::Series { phi1: p1, phi2: p2 }) => {
                Ok(Self::series(compose2(phi1, p1, p2)?, compose2(phi2, p1, p2)?))
            }
            _ => Err(GermError::NonInvertibleChange),
        }
    }

    /// Compositional inverse of a series change, to the change's precision.
    pub fn inverse(&self) -> Result<Self> {
        let CoordinateChange::Series { phi1, phi2 } = self else {
            return Err(GermError::NonInvertibleChange);
        };
        if !self.is_invertible() {
            return Err(GermError::NonInvertibleChange);
        }
        let valid = phi1.valid().min(phi2.valid());
        let det = jacobian_at_origin(phi1, phi2);
        let (a, b) = (phi1.coeff(1, 0), phi1.coeff(0, 1));
        let (c, d) = (phi2.coeff(1, 0), phi2.coeff(0, 1));
        // nonlinear remainders
        let mut n1 = phi1.clone();
        n1.set(1, 0, S::zero());
        n1.set(0, 1, S::zero());
        let mut n2 = phi2.clone();
        n2.set(1, 0, S::zero());
        n2.set(0, 1, S::zero());
        let lin_inv = |r1: &Jet2<S>, r2: &Jet2<S>| {
            let s1 = &r1.scale(&(d.clone() / det.clone())) - &r2.scale(&(b.clone() / det.clone()));
            let s2 = &r2.scale(&(a.clone() / det.clone())) - &r1.scale(&(c.clone() / det.clone()));
            (s1, s2)
        };
        let (x, y) = (Jet2::x(valid), Jet2::y(valid));
        let (mut q1, mut q2) = lin_inv(&x, &y);
        for _ in 0..valid {
            let r1 = &x - &compose2(&n1, &q1, &q2)?.truncate(valid);
            let r2 = &y - &compose2(&n2, &q1, &q2)?.truncate(valid);
            let next = lin_inv(&r1, &r2);
            if next == (q1.clone(), q2.clone()) {
                break;
            }
            (q1, q2) = next;
        }
        Ok(Self::series(q1, q2))
    }
}

fn jacobian_at_origin<S: Scalar>(phi1: &Jet2<S>, phi2: &Jet2<S>) -> S {
    phi1.coeff(1, 0) * phi2.coeff(0, 1) - phi1.coeff(0, 1) * phi2.coeff(1, 0)
}

/// The field `X` expressed in the source coordinates of `c`.
pub fn pullback<S: Scalar>(x: &VectorFieldGerm<S>, c: &CoordinateChange<S>) -> Result<VectorFieldGerm<S>> {
    match c {
        CoordinateChange::Series { phi1, phi2 } => {
            if !c.is_invertible() {
                return Err(GermError::NonInvertibleChange);
            }
            let a = compose2(x.a(), phi1, phi2)?;
            let b = compose2(x.b(), phi1, phi2)?;
            let (p1u, p1v) = (phi1.derive(Var::X)?, phi1.derive(Var::Y)?);
            let (p2u, p2v) = (phi2.derive(Var::X)?, phi2.derive(Var::Y)?);
            let inv_det = (&(&p1u * &p2v) - &(&p1v * &p2u)).reciprocal()?;
            let ra = &(&(&p2v * &a) - &(&p1v * &b)) * &inv_det;
            let rb = &(&(&p1u * &b) - &(&p2u * &a)) * &inv_det;
            Ok(VectorFieldGerm::new(ra, rb))
        }
        CoordinateChange::Chart { phi1, phi2, clear } => pullback_chart(x, phi1, phi2, *clear),
    }
}

fn min_degree<S: Scalar>(l: &Laurent2<S>) -> i32 {
    l.terms().map(|(i, j, _)| i + j).min().unwrap_or(i32::MAX)
}

fn pullback_chart<S: Scalar>(
    x: &VectorFieldGerm<S>,
    phi1: &Laurent2<S>,
    phi2: &Laurent2<S>,
    clear: (i32, i32),
) -> Result<VectorFieldGerm<S>> {
    let (p1u, p1v) = (phi1.derive(Var::X), phi1.derive(Var::Y));
    let (p2u, p2v) = (phi2.derive(Var::X), phi2.derive(Var::Y));
    let jac = &(&p1u * &p2v) - &(&p1v * &p2u);
    let (ji, jj, jc) = jac.as_monomial().ok_or(GermError::NonInvertibleChange)?;
    let scale = Laurent2::monomial(clear.0 - ji, clear.1 - jj, S::one() / jc);
    let pole = |what: &str| GermError::PoleAtOrigin(format!("{what} component keeps a negative power after clearing"));
    let a = Laurent2::from_jet(x.a()).substitute(phi1, phi2).ok_or(GermError::NonInvertibleChange)?;
    let b = Laurent2::from_jet(x.b()).substitute(phi1, phi2).ok_or(GermError::NonInvertibleChange)?;
    let ra = &(&(&p2v * &a) - &(&p1v * &b)) * &scale;
    let rb = &(&(&p1u * &b) - &(&p2u * &a)) * &scale;

    // Unknown terms of degree > valid land in degree >= (valid+1)·m + shift.
    let m = min_degree(phi1).min(min_degree(phi2));
    let shift = |adj: [&Laurent2<S>; 2]| {
        adj.iter().map(|l| min_degree(l)).min().unwrap_or(0) - (ji + jj) + clear.0 + clear.1
    };
    let valid = if m >= 1 {
        let s = shift([&p2v, &p1v]).min(shift([&p1u, &p2u]));
        let v = (x.valid() as i32 + 1) * m + s - 1;
        if v < 0 {
            return Err(GermError::PrecisionExhausted("chart pullback leaves no known terms".into()));
        }
        v as u32
    } else {
        // components are taken as exact polynomials
        let deg = |l: &Laurent2<S>| l.terms().map(|(i, j, _)| i + j).max().unwrap_or(0).max(0);
        deg(&ra).max(deg(&rb)).max(x.valid() as i32) as u32
    };
    let ja = ra.to_jet(valid).ok_or_else(|| pole("∂u"))?;
    let jb = rb.to_jet(valid).ok_or_else(|| pole("∂v"))?;
    Ok(VectorFieldGerm::new(ja, jb))
}
