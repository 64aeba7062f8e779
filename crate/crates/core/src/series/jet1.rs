use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{GermError, Result};
use crate::scalar::Scalar;

/// Truncated power series in one variable; coefficients of degree above
/// `valid` are unknown.
#[derive(Clone, Debug, PartialEq)]
pub struct Jet1<S> {
    coeffs: Vec<S>,
}

impl<S: Scalar> Jet1<S> {
    pub fn zero(valid: u32) -> Self {
        Jet1 { coeffs: vec![S::zero(); valid as usize + 1] }
    }

    pub fn constant(c: S, valid: u32) -> Self {
        let mut j = Self::zero(valid);
        j.coeffs[0] = c;
        j
    }

    pub fn one(valid: u32) -> Self {
        Self::constant(S::one(), valid)
    }

    /// The variable `z` itself.
    pub fn var(valid: u32) -> Self {
        let mut j = Self::zero(valid);
        if valid >= 1 {
            j.coeffs[1] = S::one();
        }
        j
    }

    pub fn monomial(k: u32, c: S, valid: u32) -> Self {
        let mut j = Self::zero(valid);
        if k <= valid {
            j.coeffs[k as usize] = c;
        }
        j
    }

    /// Builds a jet from leading coefficients; missing ones are zero.
    pub fn from_coeffs(coeffs: Vec<S>, valid: u32) -> Self {
        let mut j = Self::zero(valid);
        for (k, c) in coeffs.into_iter().enumerate().take(valid as usize + 1) {
            j.coeffs[k] = c;
        }
        j
    }

    pub fn valid(&self) -> u32 {
        (self.coeffs.len() - 1) as u32
    }

    /// Coefficient of `z^k`; zero past the stored range.
    pub fn coeff(&self, k: u32) -> S {
        self.coeffs.get(k as usize).cloned().unwrap_or_else(S::zero)
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn set(&mut self, k: u32, c: S) {
        if let Some(slot) = self.coeffs.get_mut(k as usize) {
            *slot = c;
        }
    }

    /// Least degree with a nonzero coefficient; `None` when zero at this precision.
    pub fn order(&self) -> Option<u32> {
        self.coeffs.iter().position(|c| !c.is_zero()).map(|k| k as u32)
    }

    pub(crate) fn order_lb(&self) -> u32 {
        self.order().unwrap_or(self.valid() + 1)
    }

    pub fn is_zero(&self) -> bool {
        self.order().is_none()
    }

    pub fn is_small(&self, tol: f64) -> bool {
        self.coeffs.iter().all(|c| c.is_small(tol))
    }

    pub fn truncate(&self, valid: u32) -> Self {
        let v = valid.min(self.valid());
        Jet1 { coeffs: self.coeffs[..=v as usize].to_vec() }
    }

    pub fn scale(&self, c: &S) -> Self {
        Jet1 { coeffs: self.coeffs.iter().map(|a| a.clone() * c.clone()).collect() }
    }

    pub fn mul_trunc(&self, other: &Self, valid: u32) -> Self {
        let mut out = Self::zero(valid);
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() || i as u32 > valid {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if i + j > valid as usize {
                    break;
                }
                if !b.is_zero() {
                    out.coeffs[i + j] = out.coeffs[i + j].clone() + a.clone() * b.clone();
                }
            }
        }
        out
    }

    pub fn derive(&self) -> Result<Self> {
        if self.valid() == 0 {
            return Err(GermError::PrecisionExhausted("derivative of a degree-0 jet".into()));
        }
        let coeffs = (1..self.coeffs.len())
            .map(|k| self.coeffs[k].clone() * S::from_i64(k as i64))
            .collect();
        Ok(Jet1 { coeffs })
    }

    /// Multiplicative inverse of a unit.
    pub fn reciprocal(&self) -> Result<Self> {
        let a0 = self.coeffs[0].clone();
        if a0.is_zero() {
            return Err(GermError::NotAUnit);
        }
        let inv0 = S::one() / a0;
        let n = self.coeffs.len();
        let mut b = vec![S::zero(); n];
        b[0] = inv0.clone();
        for d in 1..n {
            let mut acc = S::zero();
            for k in 1..=d {
                if !self.coeffs[k].is_zero() && !b[d - k].is_zero() {
                    acc = acc + self.coeffs[k].clone() * b[d - k].clone();
                }
            }
            b[d] = -(acc * inv0.clone());
        }
        Ok(Jet1 { coeffs: b })
    }

    /// Exact division by `z^k`; fails unless the low coefficients vanish.
    pub fn div_z_pow(&self, k: u32) -> Result<Self> {
        if k > self.valid() + 1 || self.coeffs[..k as usize].iter().any(|c| !c.is_zero()) {
            return Err(GermError::PrecisionExhausted(format!("division by z^{k}")));
        }
        if k == self.valid() + 1 {
            return Err(GermError::PrecisionExhausted(format!("division by z^{k} leaves no terms")));
        }
        Ok(Jet1 { coeffs: self.coeffs[k as usize..].to_vec() })
    }

    /// `self ∘ g` with `g(0) = 0`.
    pub fn compose(&self, g: &Jet1<S>) -> Result<Self> {
        if !g.coeff(0).is_zero() {
            return Err(GermError::CompositionAtNonzeroPoint);
        }
        let og = g.order_lb();
        let target = g.valid().min(((self.valid() + 1) * og).saturating_sub(1));
        let top = self.valid().min(target);
        let mut acc = Self::constant(self.coeff(top), target);
        for k in (0..top).rev() {
            acc = acc.mul_trunc(g, target);
            acc.coeffs[0] = acc.coeffs[0].clone() + self.coeff(k);
        }
        Ok(acc)
    }

    /// Evaluates the stored polynomial at `z` in double precision.
    pub fn eval_c64(&self, z: crate::scalar::C64) -> crate::scalar::C64 {
        let mut acc = crate::scalar::C64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * z + c.to_c64();
        }
        acc
    }

    pub fn lower<T: Scalar>(&self) -> Jet1<T> {
        Jet1 { coeffs: self.coeffs.iter().map(|c| T::from_c64(c.to_c64())).collect() }
    }

    /// Nonzero terms as `(degree, coefficient)`.
    pub fn terms(&self) -> impl Iterator<Item = (u32, &S)> {
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(k, c)| (k as u32, c))
    }
}

impl<S: Scalar> Add for &Jet1<S> {
    type Output = Jet1<S>;
    fn add(self, rhs: Self) -> Jet1<S> {
        let v = self.valid().min(rhs.valid()) as usize;
        Jet1 { coeffs: (0..=v).map(|k| self.coeffs[k].clone() + rhs.coeffs[k].clone()).collect() }
    }
}

impl<S: Scalar> Sub for &Jet1<S> {
    type Output = Jet1<S>;
    fn sub(self, rhs: Self) -> Jet1<S> {
        let v = self.valid().min(rhs.valid()) as usize;
        Jet1 { coeffs: (0..=v).map(|k| self.coeffs[k].clone() - rhs.coeffs[k].clone()).collect() }
    }
}

impl<S: Scalar> Neg for &Jet1<S> {
    type Output = Jet1<S>;
    fn neg(self) -> Jet1<S> {
        Jet1 { coeffs: self.coeffs.iter().map(|c| -c.clone()).collect() }
    }
}

impl<S: Scalar> Mul for &Jet1<S> {
    type Output = Jet1<S>;
    fn mul(self, rhs: Self) -> Jet1<S> {
        let v = (self.valid().saturating_add(rhs.order_lb()))
            .min(rhs.valid().saturating_add(self.order_lb()));
        self.mul_trunc(rhs, v)
    }
}

macro_rules! owned_ops {
    ($ty:ident) => {
        impl<S: Scalar> Add for $ty<S> {
            type Output = $ty<S>;
            fn add(self, rhs: Self) -> $ty<S> {
                &self + &rhs
            }
        }
        impl<S: Scalar> Sub for $ty<S> {
            type Output = $ty<S>;
            fn sub(self, rhs: Self) -> $ty<S> {
                &self - &rhs
            }
        }
        impl<S: Scalar> Mul for $ty<S> {
            type Output = $ty<S>;
            fn mul(self, rhs: Self) -> $ty<S> {
                &self * &rhs
            }
        }
        impl<S: Scalar> Neg for $ty<S> {
            type Output = $ty<S>;
            fn neg(self) -> $ty<S> {
                -&self
            }
        }
    };
}
pub(crate) use owned_ops;

owned_ops!(Jet1);
