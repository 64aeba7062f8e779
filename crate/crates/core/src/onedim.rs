//! Necessary conditions for semicompleteness in one variable, restriction
//! to invariant axes, and the straightening test for regular perturbations
//! of `yⁿ x² ∂x`.

use crate::error::{GermError, Result};
use crate::germ::VectorFieldGerm;
use crate::scalar::Scalar;
use crate::series::{compose1, laurent_residue, series_ode_solve, Jet1, Jet2};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Unknown,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Reason<S> {
    /// The germ vanishes identically at the available precision.
    Zero,
    /// Order 0, 1, or 2 with zero residue.
    Admissible { order: u32 },
    /// Order above two.
    OrderTooHigh { order: u32 },
    NonzeroResidue { residue: S },
    /// A forbidden monomial `x^i y^j` was found.
    Witness { i: u32, j: u32, coeff: S },
    /// No forbidden monomial through the given degree.
    NoWitness { degree: u32 },
    Precision(String),
}

#[derive(Clone, Debug, PartialEq)]
pub struct SemicompleteVerdict<S> {
    pub status: Status,
    pub reason: Reason<S>,
}

impl<S> SemicompleteVerdict<S> {
    fn pass(reason: Reason<S>) -> Self {
        SemicompleteVerdict { status: Status::Pass, reason }
    }

    fn fail(reason: Reason<S>) -> Self {
        SemicompleteVerdict { status: Status::Fail, reason }
    }

    fn unknown(msg: String) -> Self {
        SemicompleteVerdict { status: Status::Unknown, reason: Reason::Precision(msg) }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

/// Checks `h(z) ∂z` against the one-variable obstruction: order at most two,
/// and zero residue of `dz/h` in the order-two case.
pub fn onedim_check<S: Scalar>(h: &Jet1<S>, tol: f64) -> SemicompleteVerdict<S> {
    let order = (0..=h.valid()).find(|&k| !h.coeff(k).is_small(tol));
    match order {
        None => SemicompleteVerdict::pass(Reason::Zero),
        Some(k) if k <= 1 => SemicompleteVerdict::pass(Reason::Admissible { order: k }),
        Some(2) => {
            let mut trimmed = h.clone();
            trimmed.set(0, S::zero());
            trimmed.set(1, S::zero());
            match laurent_residue(&trimmed) {
                Ok(r) if r.is_small(tol) => SemicompleteVerdict::pass(Reason::Admissible { order: 2 }),
                Ok(r) => SemicompleteVerdict::fail(Reason::NonzeroResidue { residue: r }),
                Err(e) => SemicompleteVerdict::unknown(e.to_string()),
            }
        }
        Some(k) => SemicompleteVerdict::fail(Reason::OrderTooHigh { order: k }),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axis {
    /// `{y = 0}`, parametrized by `x`.
    X,
    /// `{x = 0}`, parametrized by `y`.
    Y,
}

/// The one-variable germ induced on an invariant coordinate axis.
pub fn restrict_to_axis<S: Scalar>(x: &VectorFieldGerm<S>, axis: Axis, tol: f64) -> Result<Jet1<S>> {
    let (along, across) = match axis {
        Axis::X => (x.a().clone(), x.b().clone()),
        Axis::Y => (x.b().swap_xy(), x.a().swap_xy()),
    };
    let transverse = across.restrict_y0();
    if !transverse.is_small(tol) {
        return Err(GermError::AxisNotInvariant(match axis {
            Axis::X => "y = 0",
            Axis::Y => "x = 0",
        }));
    }
    Ok(along.restrict_y0())
}

fn x_times_y_pow<S: Scalar>(n: u32, degree: u32) -> Jet2<S> {
    Jet2::monomial(1, n, S::one(), degree)
}

/// Slope `du/dx` of the foliation of `yⁿ x² [g₁ ∂x + y^{n+1} g₁ g₂ (nx ∂x − y ∂y)]`
/// written as a graph over `x`.
pub fn straightening_slope<S: Scalar>(g2: &Jet1<S>, n: u32, degree: u32) -> Result<Jet2<S>> {
    let w = x_times_y_pow::<S>(n, degree);
    let g2w = compose1(g2, &w)?;
    let num = Jet2::monomial(0, n + 2, -S::one(), degree).mul_trunc(&g2w, degree);
    let den = &Jet2::one(degree) + &Jet2::monomial(1, n + 1, S::from_i64(n as i64), degree).mul_trunc(&g2w, degree);
    Ok(num.mul_trunc(&den.reciprocal()?, degree))
}

fn check_unit<S: Scalar>(g1: &Jet1<S>) -> Result<()> {
    if g1.coeff(0) != S::one() {
        return Err(GermError::BadParams("g1(0) must equal 1".into()));
    }
    Ok(())
}

/// Straightening `u` with `u(0, ȳ) = ȳ`, and `β` with `1 + β = g₁(x̄ uⁿ)(u/ȳ)ⁿ`.
pub fn straighten_regular<S: Scalar>(g1: &Jet1<S>, g2: &Jet1<S>, n: u32, degree: u32) -> Result<(Jet2<S>, Jet2<S>)> {
    check_unit(g1)?;
    let theta = straightening_slope(g2, n, degree)?;
    let theta = theta.truncate(theta.valid().min(degree.saturating_sub(1)));
    let u = series_ode_solve(&theta, degree)?;
    let un = u.powers(n, degree).pop().expect("n-th power");
    let xun = &Jet2::x(degree) * &un;
    let g1part = compose1(g1, &xun.truncate(degree))?;
    let quotient = u
        .div_monomial(0, 1)
        .ok_or_else(|| GermError::PrecisionExhausted("u is not divisible by y".into()))?;
    let qn = quotient.powers(n, quotient.valid()).pop().expect("n-th power");
    let one_plus_beta = &g1part * &qn;
    let beta = &one_plus_beta - &Jet2::one(one_plus_beta.valid());
    Ok((u, beta))
}

/// `g₁(x̄uⁿ) uⁿ x̄² (1 + n x̄ u^{n+1} g₂(x̄uⁿ))`, the `∂x̄` coefficient after straightening.
pub fn straightened_coefficient<S: Scalar>(g1: &Jet1<S>, g2: &Jet1<S>, n: u32, degree: u32) -> Result<Jet2<S>> {
    let (u, _) = straighten_regular(g1, g2, n, degree)?;
    let pows = u.powers(n + 1, degree);
    let un = &pows[n as usize];
    let w = (&Jet2::x(degree) * un).truncate(degree);
    let g1w = compose1(g1, &w)?;
    let g2w = compose1(g2, &w)?;
    let corr = &Jet2::one(degree)
        + &(&Jet2::monomial(1, 0, S::from_i64(n as i64), degree) * &pows[n as usize + 1]).mul_trunc(&g2w, degree);
    let x2 = Jet2::monomial(2, 0, S::one(), degree);
    Ok((&(&(&g1w * un) * &x2) * &corr).truncate(degree))
}

/// The closed form of the straightening criterion: `g₁′(0) = g₂(0) = 0`.
pub fn siegel_closed_criterion<S: Scalar>(g1: &Jet1<S>, g2: &Jet1<S>, tol: f64) -> bool {
    g1.coeff(1).is_small(tol) && g2.coeff(0).is_small(tol)
}

/// Passes iff `1 + β` has no monomial `x̄ ȳᵏ` through `degree`.
pub fn siegel_regular_test<S: Scalar>(g1: &Jet1<S>, g2: &Jet1<S>, n: u32, degree: u32, tol: f64) -> SemicompleteVerdict<S> {
    let beta = match straighten_regular(g1, g2, n, degree) {
        Ok((_, b)) => b,
        Err(e) => return SemicompleteVerdict::unknown(e.to_string()),
    };
    for k in 0..beta.valid() {
        let c = beta.coeff(1, k);
        if !c.is_small(tol) {
            return SemicompleteVerdict::fail(Reason::Witness { i: 1, j: k, coeff: c });
        }
    }
    // x̄-linear terms can appear up to total degree n + 2
    if beta.valid() < n + 2 {
        return SemicompleteVerdict::unknown(format!("need degree {} to rule out x̄ȳ^k, have {}", n + 2, beta.valid()));
    }
    SemicompleteVerdict::pass(Reason::NoWitness { degree: beta.valid() })
}
