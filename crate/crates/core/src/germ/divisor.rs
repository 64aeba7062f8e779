use super::{graded_divide, Divisibility, VectorFieldGerm};
use crate::scalar::Scalar;
use crate::series::Jet2;

/// A declared polynomial factor, weighted homogeneous for `weights`.
#[derive(Clone, Debug, PartialEq)]
pub struct Form<S> {
    pub poly: Jet2<S>,
    pub weights: (u32, u32),
    pub label: String,
}

impl<S: Scalar> Form<S> {
    pub fn new(label: &str, weights: (u32, u32), terms: &[(u32, u32, i64)], valid: u32) -> Self {
        Form { poly: Jet2::from_int_terms(valid, terms), weights, label: label.to_string() }
    }

    /// `x - y`.
    pub fn diagonal(valid: u32) -> Self {
        Self::new("x-y", (1, 1), &[(1, 0, 1), (0, 1, -1)], valid)
    }

    /// `y - x^2`.
    pub fn parabola(valid: u32) -> Self {
        Self::new("y-x^2", (1, 2), &[(0, 1, 1), (2, 0, -1)], valid)
    }

    /// `x^3 + y^2`.
    pub fn cusp(valid: u32) -> Self {
        Self::new("x^3+y^2", (2, 3), &[(3, 0, 1), (0, 2, 1)], valid)
    }
}

/// `X = x^a y^b · Π formᵏ · primitive`.
#[derive(Clone, Debug, PartialEq)]
pub struct DivisorSplit<S> {
    pub monomial: (u32, u32),
    pub forms: Vec<(Form<S>, u32)>,
    pub primitive: VectorFieldGerm<S>,
}

impl<S: Scalar> DivisorSplit<S> {
    pub fn is_trivial(&self) -> bool {
        self.monomial == (0, 0) && self.forms.iter().all(|(_, k)| *k == 0)
    }

    /// Multiplicity of the form with the given label.
    pub fn multiplicity(&self, label: &str) -> u32 {
        self.forms.iter().find(|(f, _)| f.label == label).map_or(0, |(_, k)| *k)
    }
}

fn both_divide<S: Scalar>(x: &VectorFieldGerm<S>, den: &Jet2<S>, weights: (u32, u32)) -> Option<VectorFieldGerm<S>> {
    let qa = graded_divide(x.a(), den, true, weights);
    let qb = graded_divide(x.b(), den, true, weights);
    match (qa, qb) {
        (Divisibility::Exact(a), Divisibility::Exact(b)) => Some(VectorFieldGerm::new(a, b)),
        _ => None,
    }
}

/// Extracts the largest monomial factor and the largest powers of the
/// declared forms dividing both components.
pub fn primitive_split<S: Scalar>(x: &VectorFieldGerm<S>, forms: &[Form<S>]) -> DivisorSplit<S> {
    if x.is_zero() {
        return DivisorSplit {
            monomial: (0, 0),
            forms: forms.iter().map(|f| (f.clone(), 0)).collect(),
            primitive: x.clone(),
        };
    }
    let (mut a, mut b) = (u32::MAX, u32::MAX);
    for comp in [x.a(), x.b()] {
        for (i, j, _) in comp.terms() {
            a = a.min(i);
            b = b.min(j);
        }
    }
    let mut prim = VectorFieldGerm::new(
        x.a().div_monomial(a, b).unwrap_or_else(|| x.a().clone()),
        x.b().div_monomial(a, b).unwrap_or_else(|| x.b().clone()),
    );
    let mut found = Vec::new();
    for form in forms {
        // divide by the whole power at once so precision is lost only once
        let base = prim.clone();
        let deg = form.poly.terms().map(|(i, j, _)| i + j).max().unwrap_or(0);
        let poly = Jet2::from_terms(deg, form.poly.terms().map(|(i, j, c)| (i, j, c.clone())));
        let mut power = poly.clone();
        let mut k = 0;
        while let Some(q) = both_divide(&base, &power, form.weights) {
            if q.is_zero() {
                break;
            }
            prim = q;
            k += 1;
            let v = power.valid() + deg;
            power = Jet2::from_terms(v, power.terms().map(|(i, j, c)| (i, j, c.clone()))).mul_trunc(&poly, v);
        }
        found.push((form.clone(), k));
    }
    DivisorSplit { monomial: (a, b), forms: found, primitive: prim }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::GaussRat as Q;

    #[test]
    fn monomial_divisor() {
        let x = VectorFieldGerm::<Q>::from_int_terms(10, &[(2, 1, 1)], &[(1, 2, -1)]);
        let s = primitive_split(&x, &[]);
        assert_eq!(s.monomial, (1, 1));
        assert_eq!(s.primitive.truncate(8), VectorFieldGerm::from_int_terms(8, &[(1, 0, 1)], &[(0, 1, -1)]));
    }

    #[test]
    fn diagonal_divisor() {
        // x^2 y (x - y)(x ∂x - y ∂y)
        let x = VectorFieldGerm::<Q>::from_int_terms(12, &[(4, 1, 1), (3, 2, -1)], &[(3, 2, -1), (2, 3, 1)]);
        let s = primitive_split(&x, &[Form::diagonal(12)]);
        assert_eq!(s.monomial, (2, 1));
        assert_eq!(s.multiplicity("x-y"), 1);
        let p = s.primitive;
        assert_eq!(p.truncate(2), VectorFieldGerm::from_int_terms(2, &[(1, 0, 1)], &[(0, 1, -1)]));
    }

    #[test]
    fn trivial_divisor() {
        let x = VectorFieldGerm::<Q>::from_int_terms(10, &[(2, 0, 1)], &[(1, 1, -1), (0, 2, 2)]);
        let s = primitive_split(&x, &[Form::diagonal(10), Form::parabola(10)]);
        assert!(s.is_trivial());
    }
}
