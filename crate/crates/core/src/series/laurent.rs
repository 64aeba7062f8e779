use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use super::jet2::{Jet2, Var};
use crate::scalar::Scalar;

/// Sparse Laurent polynomial in two variables; exact, no truncation.
#[derive(Clone, Debug, PartialEq)]
pub struct Laurent2<S> {
    terms: BTreeMap<(i32, i32), S>,
}

impl<S: Scalar> Laurent2<S> {
    pub fn zero() -> Self {
        Laurent2 { terms: BTreeMap::new() }
    }

    pub fn monomial(i: i32, j: i32, c: S) -> Self {
        let mut out = Self::zero();
        out.add_term(i, j, c);
        out
    }

    pub fn constant(c: S) -> Self {
        Self::monomial(0, 0, c)
    }

    pub fn one() -> Self {
        Self::constant(S::one())
    }

    pub fn from_jet(j: &Jet2<S>) -> Self {
        let mut out = Self::zero();
        for (p, q, c) in j.terms() {
            out.add_term(p as i32, q as i32, c.clone());
        }
        out
    }

    fn add_term(&mut self, i: i32, j: i32, c: S) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry((i, j)).or_insert_with(S::zero);
        *slot = slot.clone() + c;
        if slot.is_zero() {
            self.terms.remove(&(i, j));
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, i32, &S)> {
        self.terms.iter().map(|(&(i, j), c)| (i, j, c))
    }

    pub fn coeff(&self, i: i32, j: i32) -> S {
        self.terms.get(&(i, j)).cloned().unwrap_or_else(S::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The single term `(i, j, c)` when this is a monomial.
    pub fn as_monomial(&self) -> Option<(i32, i32, S)> {
        if self.terms.len() != 1 {
            return None;
        }
        self.terms.iter().next().map(|(&(i, j), c)| (i, j, c.clone()))
    }

    /// Least exponents of `x` and of `y` over all terms.
    pub fn min_exponents(&self) -> (i32, i32) {
        let mi = self.terms.keys().map(|k| k.0).min().unwrap_or(0);
        let mj = self.terms.keys().map(|k| k.1).min().unwrap_or(0);
        (mi, mj)
    }

    pub fn shift(&self, di: i32, dj: i32) -> Self {
        Laurent2 { terms: self.terms.iter().map(|(&(i, j), c)| ((i + di, j + dj), c.clone())).collect() }
    }

    pub fn scale(&self, c: &S) -> Self {
        let mut out = Self::zero();
        for (i, j, a) in self.terms() {
            out.add_term(i, j, a.clone() * c.clone());
        }
        out
    }

    pub fn derive(&self, var: Var) -> Self {
        let mut out = Self::zero();
        for (i, j, c) in self.terms() {
            match var {
                Var::X if i != 0 => out.add_term(i - 1, j, c.clone() * S::from_i64(i as i64)),
                Var::Y if j != 0 => out.add_term(i, j - 1, c.clone() * S::from_i64(j as i64)),
                _ => {}
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Converts to a jet when no negative exponents remain.
    pub fn to_jet(&self, valid: u32) -> Option<Jet2<S>> {
        let mut out = Jet2::zero(valid);
        for (i, j, c) in self.terms() {
            if i < 0 || j < 0 {
                return None;
            }
            if (i + j) as u32 <= valid {
                out.set(i as u32, j as u32, c.clone());
            }
        }
        Some(out)
    }

    /// Substitutes Laurent polynomials for both variables; the substituted
    /// values must be monomials wherever a negative exponent occurs.
    pub fn substitute(&self, gx: &Self, gy: &Self) -> Option<Self> {
        let inv = |g: &Self| -> Option<Self> {
            let (i, j, c) = g.as_monomial()?;
            Some(Self::monomial(-i, -j, S::one() / c))
        };
        let mut out = Self::zero();
        for (i, j, c) in self.terms() {
            let px = if i >= 0 { gx.pow(i as u32) } else { inv(gx)?.pow((-i) as u32) };
            let py = if j >= 0 { gy.pow(j as u32) } else { inv(gy)?.pow((-j) as u32) };
            out = &out + &(&px * &py).scale(c);
        }
        Some(out)
    }
}

impl<S: Scalar> Add for &Laurent2<S> {
    type Output = Laurent2<S>;
    fn add(self, rhs: Self) -> Laurent2<S> {
        let mut out = self.clone();
        for (i, j, c) in rhs.terms() {
            out.add_term(i, j, c.clone());
        }
        out
    }
}

impl<S: Scalar> Sub for &Laurent2<S> {
    type Output = Laurent2<S>;
    fn sub(self, rhs: Self) -> Laurent2<S> {
        let mut out = self.clone();
        for (i, j, c) in rhs.terms() {
            out.add_term(i, j, -c.clone());
        }
        out
    }
}

impl<S: Scalar> Neg for &Laurent2<S> {
    type Output = Laurent2<S>;
    fn neg(self) -> Laurent2<S> {
        self.scale(&-S::one())
    }
}

impl<S: Scalar> Mul for &Laurent2<S> {
    type Output = Laurent2<S>;
    fn mul(self, rhs: Self) -> Laurent2<S> {
        let mut out = Laurent2::zero();
        for (i, j, a) in self.terms() {
            for (k, l, b) in rhs.terms() {
                out.add_term(i + k, j + l, a.clone() * b.clone());
            }
        }
        out
    }
}
