use std::ops::{Add, Mul, Neg, Sub};

use super::jet1::{owned_ops, Jet1};
use crate::error::{GermError, Result};
use crate::scalar::{Scalar, C64};

#[inline]
fn idx(i: u32, j: u32) -> usize {
    let d = (i + j) as usize;
    d * (d + 1) / 2 + j as usize
}

#[inline]
fn len_for(valid: u32) -> usize {
    let v = valid as usize;
    (v + 1) * (v + 2) / 2
}

/// Which variable a partial derivative or substitution refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Var {
    X,
    Y,
}

/// Truncated power series in two variables with total-degree precision.
///
/// Coefficients are stored densely by total degree; `x^i y^j` is known for
/// `i + j <= valid`.
#[derive(Clone, Debug, PartialEq)]
pub struct Jet2<S> {
    valid: u32,
    coeffs: Vec<S>,
}

impl<S: Scalar> Jet2<S> {
    pub fn zero(valid: u32) -> Self {
        Jet2 { valid, coeffs: vec![S::zero(); len_for(valid)] }
    }

    pub fn constant(c: S, valid: u32) -> Self {
        let mut j = Self::zero(valid);
        j.coeffs[0] = c;
        j
    }

    pub fn one(valid: u32) -> Self {
        Self::constant(S::one(), valid)
    }

    pub fn monomial(i: u32, j: u32, c: S, valid: u32) -> Self {
        let mut out = Self::zero(valid);
        if i + j <= valid {
            out.coeffs[idx(i, j)] = c;
        }
        out
    }

    pub fn x(valid: u32) -> Self {
        Self::monomial(1, 0, S::one(), valid)
    }

    pub fn y(valid: u32) -> Self {
        Self::monomial(0, 1, S::one(), valid)
    }

    pub fn from_terms<I: IntoIterator<Item = (u32, u32, S)>>(valid: u32, terms: I) -> Self {
        let mut out = Self::zero(valid);
        for (i, j, c) in terms {
            if i + j <= valid {
                let k = idx(i, j);
                out.coeffs[k] = out.coeffs[k].clone() + c;
            }
        }
        out
    }

    /// Integer-coefficient polynomial helper.
    pub fn from_int_terms(valid: u32, terms: &[(u32, u32, i64)]) -> Self {
        Self::from_terms(valid, terms.iter().map(|&(i, j, c)| (i, j, S::from_i64(c))))
    }

    pub fn valid(&self) -> u32 {
        self.valid
    }

    /// Coefficient of `x^i y^j`; zero beyond the stored range.
    pub fn coeff(&self, i: u32, j: u32) -> S {
        if i + j > self.valid {
            return S::zero();
        }
        self.coeffs[idx(i, j)].clone()
    }

    pub fn coeff_ref(&self, i: u32, j: u32) -> Option<&S> {
        (i + j <= self.valid).then(|| &self.coeffs[idx(i, j)])
    }

    pub fn set(&mut self, i: u32, j: u32, c: S) {
        if i + j <= self.valid {
            self.coeffs[idx(i, j)] = c;
        }
    }

    /// Nonzero terms in graded order.
    pub fn terms(&self) -> impl Iterator<Item = (u32, u32, &S)> + '_ {
        (0..=self.valid).flat_map(move |d| (0..=d).map(move |j| (d - j, j))).filter_map(move |(i, j)| {
            let c = &self.coeffs[idx(i, j)];
            (!c.is_zero()).then_some((i, j, c))
        })
    }

    /// Least total degree of a nonzero term.
    pub fn order(&self) -> Option<u32> {
        self.terms().next().map(|(i, j, _)| i + j)
    }

    /// Order, or `valid + 1` when nothing nonzero is known.
    pub fn order_lb(&self) -> u32 {
        self.order().unwrap_or(self.valid + 1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_small(&self, tol: f64) -> bool {
        self.coeffs.iter().all(|c| c.is_small(tol))
    }

    /// Largest coefficient modulus.
    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.abs_f64()).fold(0.0, f64::max)
    }

    pub fn constant_term(&self) -> S {
        self.coeffs[0].clone()
    }

    pub fn truncate(&self, valid: u32) -> Self {
        let v = valid.min(self.valid);
        Jet2 { valid: v, coeffs: self.coeffs[..len_for(v)].to_vec() }
    }

    /// Homogeneous component of degree `d`, indexed by the power of `y`.
    pub fn homogeneous(&self, d: u32) -> Vec<S> {
        (0..=d).map(|j| self.coeff(d - j, j)).collect()
    }

    pub fn scale(&self, c: &S) -> Self {
        Jet2 { valid: self.valid, coeffs: self.coeffs.iter().map(|a| a.clone() * c.clone()).collect() }
    }

    /// Product truncated at total degree `valid`.
    pub fn mul_trunc(&self, other: &Self, valid: u32) -> Self {
        let mut out = Self::zero(valid);
        let lhs: Vec<_> = self.terms().filter(|(i, j, _)| i + j <= valid).collect();
        let rhs: Vec<_> = other.terms().filter(|(i, j, _)| i + j <= valid).collect();
        for &(i, j, a) in &lhs {
            for &(k, l, b) in &rhs {
                if i + j + k + l > valid {
                    continue;
                }
                let t = idx(i + k, j + l);
                out.coeffs[t] = out.coeffs[t].clone() + a.clone() * b.clone();
            }
        }
        out
    }

    /// Multiplication by `c x^i y^j`; precision grows by `i + j`.
    pub fn mul_monomial(&self, i: u32, j: u32, c: &S) -> Self {
        let mut out = Self::zero(self.valid + i + j);
        for (p, q, a) in self.terms() {
            out.coeffs[idx(p + i, q + j)] = a.clone() * c.clone();
        }
        out
    }

    /// Exact division by `x^i y^j`; `None` when some term is not divisible.
    pub fn div_monomial(&self, i: u32, j: u32) -> Option<Self> {
        if i + j > self.valid {
            return None;
        }
        let mut out = Self::zero(self.valid - i - j);
        for (p, q, a) in self.terms() {
            if p < i || q < j {
                return None;
            }
            out.coeffs[idx(p - i, q - j)] = a.clone();
        }
        Some(out)
    }

    pub fn derive(&self, var: Var) -> Result<Self> {
        if self.valid == 0 {
            return Err(GermError::PrecisionExhausted("derivative of a degree-0 jet".into()));
        }
        let mut out = Self::zero(self.valid - 1);
        for (i, j, c) in self.terms() {
            match var {
                Var::X if i > 0 => out.coeffs[idx(i - 1, j)] = c.clone() * S::from_i64(i as i64),
                Var::Y if j > 0 => out.coeffs[idx(i, j - 1)] = c.clone() * S::from_i64(j as i64),
                _ => {}
            }
        }
        Ok(out)
    }

    /// Multiplicative inverse of a unit, to the same precision.
    pub fn reciprocal(&self) -> Result<Self> {
        let a0 = self.coeffs[0].clone();
        if a0.is_zero() {
            return Err(GermError::NotAUnit);
        }
        let inv0 = S::one() / a0;
        let mut b = Self::zero(self.valid);
        b.coeffs[0] = inv0.clone();
        let lhs: Vec<_> = self.terms().filter(|(i, j, _)| i + j > 0).map(|(i, j, c)| (i, j, c.clone())).collect();
        for d in 1..=self.valid {
            for jj in 0..=d {
                let ii = d - jj;
                let mut acc = S::zero();
                for (p, q, a) in &lhs {
                    if *p <= ii && *q <= jj {
                        let bb = &b.coeffs[idx(ii - p, jj - q)];
                        if !bb.is_zero() {
                            acc = acc + a.clone() * bb.clone();
                        }
                    }
                }
                b.coeffs[idx(ii, jj)] = -(acc * inv0.clone());
            }
        }
        Ok(b)
    }

    /// Swaps the roles of `x` and `y`.
    pub fn swap_xy(&self) -> Self {
        let mut out = Self::zero(self.valid);
        for (i, j, c) in self.terms() {
            out.coeffs[idx(j, i)] = c.clone();
        }
        out
    }

    /// Restriction to the `x`-axis (`y = 0`) as a series in `z = x`.
    pub fn restrict_y0(&self) -> Jet1<S> {
        Jet1::from_coeffs((0..=self.valid).map(|i| self.coeff(i, 0)).collect(), self.valid)
    }

    /// Embeds a one-variable jet in `x`.
    pub fn from_jet1_x(f: &Jet1<S>) -> Self {
        Self::from_terms(f.valid(), f.terms().map(|(k, c)| (k, 0, c.clone())))
    }

    /// Evaluates the stored polynomial in double precision.
    pub fn eval_c64(&self, x: C64, y: C64) -> C64 {
        let mut acc = C64::new(0.0, 0.0);
        let mut xp = vec![C64::new(1.0, 0.0); self.valid as usize + 1];
        let mut yp = xp.clone();
        for k in 1..xp.len() {
            xp[k] = xp[k - 1] * x;
            yp[k] = yp[k - 1] * y;
        }
        for (i, j, c) in self.terms() {
            acc += c.to_c64() * xp[i as usize] * yp[j as usize];
        }
        acc
    }

    /// Evaluates exactly at a point (polynomial evaluation of the stored terms).
    pub fn eval(&self, x: &S, y: &S) -> S {
        let mut acc = S::zero();
        for (i, j, c) in self.terms() {
            acc = acc + c.clone() * x.pow_u32(i) * y.pow_u32(j);
        }
        acc
    }

    /// Coefficient-wise conversion into another scalar field.
    pub fn lower<T: Scalar>(&self) -> Jet2<T> {
        Jet2 { valid: self.valid, coeffs: self.coeffs.iter().map(|c| T::from_c64(c.to_c64())).collect() }
    }

    /// Coefficient-wise map within a field.
    pub fn map_coeffs(&self, f: impl Fn(&S) -> S) -> Self {
        Jet2 { valid: self.valid, coeffs: self.coeffs.iter().map(f).collect() }
    }

    /// Powers `self^0 ..= self^k` truncated at `valid`.
    pub fn powers(&self, k: u32, valid: u32) -> Vec<Self> {
        let mut out = Vec::with_capacity(k as usize + 1);
        out.push(Self::one(valid));
        let base = self.truncate(valid);
        for _ in 0..k {
            let next = out.last().unwrap().mul_trunc(&base, valid);
            out.push(next);
        }
        out
    }

    /// `f ∘ self` for a one-variable jet `f`; requires `self(0,0) = 0`.
    pub fn compose_into(&self, f: &Jet1<S>) -> Result<Self> {
        compose1(f, self)
    }
}

/// `f(g(x, y))` with `g(0, 0) = 0`.
pub fn compose1<S: Scalar>(f: &Jet1<S>, g: &Jet2<S>) -> Result<Jet2<S>> {
    if !g.constant_term().is_zero() {
        return Err(GermError::CompositionAtNonzeroPoint);
    }
    let og = g.order_lb();
    let target = g.valid().min(((f.valid() + 1) * og).saturating_sub(1));
    let top = f.valid().min(target);
    let mut acc = Jet2::constant(f.coeff(top), target);
    for k in (0..top).rev() {
        acc = acc.mul_trunc(g, target);
        acc.coeffs[0] = acc.coeffs[0].clone() + f.coeff(k);
    }
    Ok(acc)
}

/// Evaluates a polynomial `Σ c_k z^k` at a jet argument (no vanishing requirement).
pub fn compose1_poly<S: Scalar>(coeffs: &[S], g: &Jet2<S>) -> Jet2<S> {
    let v = g.valid();
    let mut acc = Jet2::zero(v);
    for c in coeffs.iter().rev() {
        acc = acc.mul_trunc(g, v);
        acc.coeffs[0] = acc.coeffs[0].clone() + c.clone();
    }
    acc
}

/// `f(g1(x, y), g2(x, y))` with `g1(0,0) = g2(0,0) = 0`.
pub fn compose2<S: Scalar>(f: &Jet2<S>, g1: &Jet2<S>, g2: &Jet2<S>) -> Result<Jet2<S>> {
    if !g1.constant_term().is_zero() || !g2.constant_term().is_zero() {
        return Err(GermError::CompositionAtNonzeroPoint);
    }
    let m = g1.order_lb().min(g2.order_lb()).max(1);
    let target = g1.valid().min(g2.valid()).min(((f.valid() + 1) * m).saturating_sub(1));
    Ok(compose2_to(f, g1, g2, target))
}

/// Composition truncated at `target`, which the caller guarantees is sound.
pub(crate) fn compose2_to<S: Scalar>(f: &Jet2<S>, g1: &Jet2<S>, g2: &Jet2<S>, target: u32) -> Jet2<S> {
    let top = f.valid().min(target);
    let pow2 = g2.powers(top, target);
    let mut acc = Jet2::zero(target);
    for i in (0..=top).rev() {
        acc = acc.mul_trunc(g1, target);
        for j in 0..=(top - i) {
            let c = f.coeff(i, j);
            if c.is_zero() {
                continue;
            }
            for (p, q, b) in pow2[j as usize].terms() {
                let t = idx(p, q);
                acc.coeffs[t] = acc.coeffs[t].clone() + c.clone() * b.clone();
            }
        }
    }
    acc
}

impl<S: Scalar> Add for &Jet2<S> {
    type Output = Jet2<S>;
    fn add(self, rhs: Self) -> Jet2<S> {
        let v = self.valid.min(rhs.valid);
        let n = len_for(v);
        Jet2 { valid: v, coeffs: (0..n).map(|k| self.coeffs[k].clone() + rhs.coeffs[k].clone()).collect() }
    }
}

impl<S: Scalar> Sub for &Jet2<S> {
    type Output = Jet2<S>;
    fn sub(self, rhs: Self) -> Jet2<S> {
        let v = self.valid.min(rhs.valid);
        let n = len_for(v);
        Jet2 { valid: v, coeffs: (0..n).map(|k| self.coeffs[k].clone() - rhs.coeffs[k].clone()).collect() }
    }
}

impl<S: Scalar> Neg for &Jet2<S> {
    type Output = Jet2<S>;
    fn neg(self) -> Jet2<S> {
        Jet2 { valid: self.valid, coeffs: self.coeffs.iter().map(|c| -c.clone()).collect() }
    }
}

impl<S: Scalar> Mul for &Jet2<S> {
    type Output = Jet2<S>;
    fn mul(self, rhs: Self) -> Jet2<S> {
        let v = (self.valid.saturating_add(rhs.order_lb())).min(rhs.valid.saturating_add(self.order_lb()));
        self.mul_trunc(rhs, v)
    }
}

owned_ops!(Jet2);
