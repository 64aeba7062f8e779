//! Truncated power series with explicit precision.
//!
//! A jet knows its coefficients up to a total degree `valid`; everything
//! past that is unknown. Products follow the conservative rule
//! `valid(ab) = min(valid(a) + ord(b), valid(b) + ord(a))`, derivatives lose
//! one degree, and compositions keep the weakest contributing bound.

mod jet1;
mod jet2;
mod laurent;

pub use jet1::Jet1;
pub use jet2::{compose1, compose1_poly, compose2, Jet2, Var};
pub(crate) use jet2::compose2_to;
pub use laurent::Laurent2;

use crate::error::{GermError, Result};
use crate::scalar::Scalar;

/// Default truncation degree.
pub const DEFAULT_DEGREE: u32 = 16;

/// Residue at `0` of the one-form `dz / h(z)`.
pub fn laurent_residue<S: Scalar>(h: &Jet1<S>) -> Result<S> {
    let k = h.order().ok_or(GermError::ZeroJet)?;
    if k == 0 {
        return Ok(S::zero());
    }
    if h.valid() + 1 < 2 * k {
        return Err(GermError::PrecisionExhausted(format!(
            "residue of an order-{k} pole needs h through degree {}, have {}",
            2 * k - 1,
            h.valid()
        )));
    }
    let inv = h.div_z_pow(k)?.reciprocal()?;
    Ok(inv.coeff(k - 1))
}

/// Solves `∂u/∂x = theta(x, u)` with `u(0, y) = y` through total degree `degree`.
pub fn series_ode_solve<S: Scalar>(theta: &Jet2<S>, degree: u32) -> Result<Jet2<S>> {
    if degree == 0 {
        return Ok(Jet2::y(0));
    }
    if theta.valid() + 1 < degree {
        return Err(GermError::PrecisionExhausted(format!(
            "right-hand side known through {}, need {}",
            theta.valid(),
            degree - 1
        )));
    }
    let x = Jet2::x(degree);
    let mut u = Jet2::y(degree);
    for i in 0..degree {
        let comp = compose2_to(theta, &x, &u, degree - 1);
        let denom = S::from_i64(i as i64 + 1);
        for j in 0..(degree - i) {
            let c = comp.coeff(i, j);
            if !c.is_zero() {
                u.set(i + 1, j, c / denom.clone());
            }
        }
    }
    Ok(u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{GaussRat, C64};

    type Q = GaussRat;

    fn q(n: i64, d: i64) -> Q {
        Q::from_ratio(n, d)
    }

    #[test]
    fn monomial_product_precision() {
        let p = Jet2::<Q>::x(16) * Jet2::<Q>::y(16);
        assert_eq!(p.coeff(1, 1), q(1, 1));
        assert_eq!(p.terms().count(), 1);
        assert_eq!(p.valid(), 17);
    }

    #[test]
    fn geometric_inverse() {
        let a = Jet2::<Q>::from_int_terms(16, &[(0, 0, 1), (1, 0, 1)]);
        let b = a.reciprocal().unwrap();
        for i in 0..=16 {
            assert_eq!(b.coeff(i, 0), q(if i % 2 == 0 { 1 } else { -1 }, 1));
        }
        let one = &a * &b;
        assert_eq!(one, Jet2::one(16));
    }

    #[test]
    fn elliptic_component_product() {
        let a = Jet2::<Q>::from_int_terms(16, &[(1, 0, 1), (0, 1, -2)]);
        let p = &a * &Jet2::x(16);
        assert_eq!(p.truncate(16), Jet2::from_int_terms(16, &[(2, 0, 1), (1, 1, -2)]));
    }

    #[test]
    fn reciprocal_of_mr_unit() {
        // 1 + 2xy
        let a = Jet2::<Q>::from_int_terms(12, &[(0, 0, 1), (1, 1, 2)]);
        let b = a.reciprocal().unwrap();
        assert_eq!(b.coeff(1, 1), q(-2, 1));
        assert_eq!(b.coeff(2, 2), q(4, 1));
        assert_eq!(&a * &b, Jet2::one(12));
        assert_eq!(Jet2::<Q>::x(4).reciprocal(), Err(GermError::NotAUnit));
    }

    #[test]
    fn compose1_examples() {
        let f = Jet1::<Q>::monomial(2, q(1, 1), 16);
        let g = Jet2::from_int_terms(16, &[(1, 1, 1)]);
        assert_eq!(compose1(&f, &g).unwrap(), Jet2::from_int_terms(16, &[(2, 2, 1)]));

        let f = Jet1::<Q>::from_coeffs(vec![q(1, 1), q(1, 1)], 16);
        let g = Jet2::from_int_terms(16, &[(2, 1, 1)]);
        let c = compose1(&f, &g).unwrap();
        assert_eq!(c.coeff(0, 0), q(1, 1));
        assert_eq!(c.coeff(2, 1), q(1, 1));
        assert_eq!(c.terms().count(), 2);

        // sum of z^k at x + y against a direct binomial expansion
        let f = Jet1::<Q>::from_coeffs(vec![q(1, 1); 7], 6);
        let g = Jet2::from_int_terms(6, &[(1, 0, 1), (0, 1, 1)]);
        let c = compose1(&f, &g).unwrap();
        for d in 0..=6u32 {
            for j in 0..=d {
                let binom = (0..j).fold(1i64, |acc, t| acc * (d - t) as i64 / (t + 1) as i64);
                assert_eq!(c.coeff(d - j, j), q(binom, 1));
            }
        }
        let bad = Jet2::<Q>::one(4);
        assert_eq!(compose1(&f, &bad), Err(GermError::CompositionAtNonzeroPoint));
    }

    #[test]
    fn derivative_examples() {
        let f = Jet2::<Q>::from_int_terms(8, &[(2, 1, 1)]);
        assert_eq!(f.derive(Var::X).unwrap(), Jet2::from_int_terms(7, &[(1, 1, 2)]));
        let g = Jet2::<Q>::from_int_terms(8, &[(2, 1, 1), (1, 2, -1)]);
        assert_eq!(g.derive(Var::Y).unwrap(), Jet2::from_int_terms(7, &[(2, 0, 1), (1, 1, -2)]));
        assert!(Jet2::<Q>::constant(q(3, 1), 8).derive(Var::X).unwrap().is_zero());
        assert!(Jet2::<Q>::one(0).derive(Var::X).is_err());
    }

    #[test]
    fn residue_examples() {
        let z2 = Jet1::<Q>::monomial(2, q(1, 1), 6);
        assert_eq!(laurent_residue(&z2).unwrap(), q(0, 1));
        let c = q(3, 2);
        let h = Jet1::from_coeffs(vec![q(0, 1), q(0, 1), q(1, 1), c.clone()], 6);
        assert_eq!(laurent_residue(&h).unwrap(), -c);
        let z = Jet1::<Q>::var(4);
        assert_eq!(laurent_residue(&z).unwrap(), q(1, 1));
        let short = Jet1::<Q>::monomial(2, q(1, 1), 2);
        assert!(matches!(laurent_residue(&short), Err(GermError::PrecisionExhausted(_))));
    }

    #[test]
    fn ode_zero_rhs() {
        let u = series_ode_solve(&Jet2::<Q>::zero(10), 10).unwrap();
        assert_eq!(u, Jet2::y(10));
    }

    #[test]
    fn ode_linear_rhs_gives_exponential() {
        let theta = Jet2::<Q>::y(12);
        let u = series_ode_solve(&theta, 12).unwrap();
        let mut fact = 1i64;
        for k in 0..12u32 {
            if k > 0 {
                fact *= k as i64;
            }
            assert_eq!(u.coeff(k, 1), q(1, fact));
        }
    }

    #[test]
    fn ode_with_displayed_slope() {
        // theta = -y^2 / (1 + x y), the n = 1, g2 = 1 instance of the displayed formula
        let d = 10;
        let den = Jet2::<Q>::from_int_terms(d, &[(0, 0, 1), (1, 1, 1)]).reciprocal().unwrap();
        let theta = &Jet2::from_int_terms(d, &[(0, 2, -1)]) * &den;
        let u = series_ode_solve(&theta.truncate(d), d).unwrap();
        assert_eq!(u.coeff(1, 2), q(-1, 1));
        let x = Jet2::x(d);
        let lhs = u.derive(Var::X).unwrap();
        let rhs = compose2(&theta, &x, &u).unwrap();
        assert!((&lhs - &rhs).truncate(d - 1).is_zero());
    }

    #[test]
    fn float_reciprocal() {
        let a = Jet2::<C64>::from_int_terms(8, &[(0, 0, 2), (1, 0, 1), (0, 1, 3)]);
        let one = &a * &a.reciprocal().unwrap();
        assert!((&one - &Jet2::one(8)).is_small(1e-12));
    }
}
