//! Vector field germs `A ∂x + B ∂y` and their basic calculus.

mod change;
mod divisor;
mod rational;

pub use change::{pullback, CoordinateChange};
pub use divisor::{primitive_split, DivisorSplit, Form};
pub use rational::{decompose, decomposition_residual, graded_divide, Divisibility, RationalFn};

use crate::error::Result;
use crate::scalar::Scalar;
use crate::series::{Jet2, Var};

/// A planar vector field germ with components known to a shared precision.
#[derive(Clone, Debug, PartialEq)]
pub struct VectorFieldGerm<S> {
    a: Jet2<S>,
    b: Jet2<S>,
}

impl<S: Scalar> VectorFieldGerm<S> {
    /// Builds a germ, truncating both components to their common precision.
    pub fn new(a: Jet2<S>, b: Jet2<S>) -> Self {
        let v = a.valid().min(b.valid());
        VectorFieldGerm { a: a.truncate(v), b: b.truncate(v) }
    }

    pub fn zero(valid: u32) -> Self {
        Self::new(Jet2::zero(valid), Jet2::zero(valid))
    }

    pub fn from_int_terms(valid: u32, a: &[(u32, u32, i64)], b: &[(u32, u32, i64)]) -> Self {
        Self::new(Jet2::from_int_terms(valid, a), Jet2::from_int_terms(valid, b))
    }

    /// The `∂x` component.
    pub fn a(&self) -> &Jet2<S> {
        &self.a
    }

    /// The `∂y` component.
    pub fn b(&self) -> &Jet2<S> {
        &self.b
    }

    pub fn valid(&self) -> u32 {
        self.a.valid()
    }

    pub fn order(&self) -> Option<u32> {
        match (self.a.order(), self.b.order()) {
            (Some(p), Some(q)) => Some(p.min(q)),
            (p, q) => p.or(q),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_small(&self, tol: f64) -> bool {
        self.a.is_small(tol) && self.b.is_small(tol)
    }

    pub fn max_abs(&self) -> f64 {
        self.a.max_abs().max(self.b.max_abs())
    }

    pub fn truncate(&self, valid: u32) -> Self {
        Self::new(self.a.truncate(valid), self.b.truncate(valid))
    }

    pub fn scale(&self, c: &S) -> Self {
        Self::new(self.a.scale(c), self.b.scale(c))
    }

    /// Multiplication by a function.
    pub fn mul_fn(&self, f: &Jet2<S>) -> Self {
        Self::new(f * &self.a, f * &self.b)
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::new(&self.a + &other.a, &self.b + &other.b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::new(&self.a - &other.a, &self.b - &other.b)
    }

    /// Exchanges the roles of the two coordinates.
    pub fn swap_xy(&self) -> Self {
        Self::new(self.b.swap_xy(), self.a.swap_xy())
    }

    pub fn lower<T: Scalar>(&self) -> VectorFieldGerm<T> {
        VectorFieldGerm::new(self.a.lower(), self.b.lower())
    }

    pub fn eval_c64(&self, x: crate::C64, y: crate::C64) -> (crate::C64, crate::C64) {
        (self.a.eval_c64(x, y), self.b.eval_c64(x, y))
    }

    /// Linear part and eigenvalue data at the origin.
    pub fn linear_part(&self) -> LinearPart<S> {
        LinearPart::new([[self.a.coeff(1, 0), self.a.coeff(0, 1)], [self.b.coeff(1, 0), self.b.coeff(0, 1)]])
    }
}

/// Directional derivative `A ∂F/∂x + B ∂F/∂y`.
pub fn derive_along<S: Scalar>(x: &VectorFieldGerm<S>, f: &Jet2<S>) -> Result<Jet2<S>> {
    let fx = f.derive(Var::X)?;
    let fy = f.derive(Var::Y)?;
    Ok(&(&x.a * &fx) + &(&x.b * &fy))
}

/// Lie bracket `[X, Y]`.
pub fn lie_bracket<S: Scalar>(x: &VectorFieldGerm<S>, y: &VectorFieldGerm<S>) -> Result<VectorFieldGerm<S>> {
    let a = &derive_along(x, &y.a)? - &derive_along(y, &x.a)?;
    let b = &derive_along(x, &y.b)? - &derive_along(y, &x.b)?;
    Ok(VectorFieldGerm::new(a, b))
}

/// A 2x2 linear part with its characteristic data.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearPart<S> {
    pub matrix: [[S; 2]; 2],
    pub trace: S,
    pub det: S,
    /// Eigenvalues when the discriminant has a square root in the field.
    pub eigenvalues: Option<(S, S)>,
}

impl<S: Scalar> LinearPart<S> {
    pub fn new(matrix: [[S; 2]; 2]) -> Self {
        let trace = matrix[0][0].clone() + matrix[1][1].clone();
        let det = matrix[0][0].clone() * matrix[1][1].clone() - matrix[0][1].clone() * matrix[1][0].clone();
        let disc = trace.clone() * trace.clone() - S::from_i64(4) * det.clone();
        let two = S::from_i64(2);
        let eigenvalues = disc.try_sqrt().map(|s| {
            ((trace.clone() + s.clone()) / two.clone(), (trace.clone() - s) / two.clone())
        });
        LinearPart { matrix, trace, det, eigenvalues }
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        self.matrix.iter().flatten().all(|c| c.is_small(tol))
    }

    /// Both eigenvalues vanish.
    pub fn eigenvalues_zero(&self, tol: f64) -> bool {
        self.trace.is_small(tol) && self.det.is_small(tol)
    }

    /// Nonzero with both eigenvalues zero.
    pub fn is_nilpotent(&self, tol: f64) -> bool {
        self.eigenvalues_zero(tol) && !self.is_zero(tol)
    }
}

/// Rank of the coefficient vectors of a family of germs.
pub fn coefficient_rank<S: Scalar>(fields: &[VectorFieldGerm<S>], tol: f64) -> usize {
    let valid = fields.iter().map(|f| f.valid()).min().unwrap_or(0);
    let mut rows: Vec<Vec<S>> = fields
        .iter()
        .map(|f| {
            let mut row = Vec::new();
            for comp in [f.a(), f.b()] {
                for d in 0..=valid {
                    row.extend(comp.homogeneous(d));
                }
            }
            row
        })
        .collect();
    let cols = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..cols {
        let pivot = (rank..rows.len()).max_by(|&i, &j| {
            rows[i][col].abs_f64().partial_cmp(&rows[j][col].abs_f64()).unwrap()
        });
        let Some(p) = pivot else { break };
        if rows[p][col].is_small(tol) {
            continue;
        }
        rows.swap(rank, p);
        let piv = rows[rank][col].clone();
        for r in 0..rows.len() {
            if r != rank && !rows[r][col].is_zero() {
                let factor = rows[r][col].clone() / piv.clone();
                for c in col..cols {
                    let v = rows[rank][c].clone() * factor.clone();
                    rows[r][c] = rows[r][c].clone() - v;
                }
            }
        }
        rank += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::GaussRat as Q;

    fn vf(a: &[(u32, u32, i64)], b: &[(u32, u32, i64)]) -> VectorFieldGerm<Q> {
        VectorFieldGerm::from_int_terms(12, a, b)
    }

    #[test]
    fn bracket_examples() {
        let x2 = vf(&[(2, 0, 1)], &[]);
        let y2 = vf(&[], &[(0, 2, 1)]);
        assert!(lie_bracket(&x2, &y2).unwrap().is_zero());

        // y^2 ∂x and y(2x ∂x + y ∂y)
        let x = vf(&[(0, 2, 1)], &[]);
        let y = vf(&[(1, 1, 2)], &[(0, 2, 1)]);
        assert!(lie_bracket(&x, &y).unwrap().is_zero());

        // y^2 x^2 ∂x and x(2y - 3x) ∂x - y^2 ∂y
        let x = vf(&[(2, 2, 1)], &[]);
        let y = vf(&[(1, 1, 2), (2, 0, -3)], &[(0, 2, -1)]);
        assert!(lie_bracket(&x, &y).unwrap().is_zero());

        let ell = vf(&[(2, 0, 1), (1, 1, -2)], &[(0, 2, 1), (1, 1, -2)]);
        let sep = vf(&[(2, 0, 1), (1, 1, -1)], &[(1, 1, -1), (0, 2, 1)]);
        let br = lie_bracket(&ell, &sep).unwrap();
        assert!(!br.is_zero());
        assert_eq!(br.order(), Some(3));
    }

    #[test]
    fn first_integral_examples() {
        let ell = vf(&[(2, 0, 1), (1, 1, -2)], &[(0, 2, 1), (1, 1, -2)]);
        let f = Jet2::from_int_terms(12, &[(2, 1, 1), (1, 2, -1)]);
        assert!(derive_along(&ell, &f).unwrap().is_zero());
        let lin = vf(&[(1, 0, 1)], &[]);
        let r = derive_along(&lin, &Jet2::x(12)).unwrap();
        assert_eq!(r.truncate(11), Jet2::x(11));
    }

    #[test]
    fn linear_part_examples() {
        let lp = vf(&[(2, 0, 1)], &[]).linear_part();
        assert!(lp.is_zero(0.0));
        let nil = vf(&[(0, 1, 1), (2, 0, -2)], &[(1, 1, -2)]).linear_part();
        assert!(nil.is_nilpotent(0.0));
        assert_eq!(nil.matrix[0][1], Q::from_i64(1));
        let diag = vf(&[(1, 0, 3)], &[(0, 1, -2)]).linear_part();
        let (l1, l2) = diag.eigenvalues.unwrap();
        assert_eq!((l1, l2), (Q::from_i64(3), Q::from_i64(-2)));
    }

    #[test]
    fn rank_of_dependent_family() {
        let a = vf(&[(0, 1, 1)], &[]);
        let b = vf(&[(0, 1, 1), (2, 0, -2)], &[(1, 1, -2)]);
        let c = vf(&[(2, 0, 1)], &[(1, 1, 1)]);
        assert_eq!(coefficient_rank(&[a.clone(), b, c.clone()], 0.0), 2);
        assert_eq!(coefficient_rank(&[a, c], 0.0), 2);
    }
}
