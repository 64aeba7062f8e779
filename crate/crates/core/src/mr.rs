//! Formal normal forms near a resonant saddle `mx ∂x − ny ∂y`: the formal
//! model, its holonomy model, resonances, linearization, and leaf periods.

use std::f64::consts::TAU;

use num_integer::Integer;

use crate::error::{GermError, Result};
use crate::germ::{pullback, CoordinateChange, VectorFieldGerm};
use crate::numflow::{integrate_flow_1d, integrate_unit, track_leaf, Controls, LeafLoopSpec};
use crate::onedim::Axis;
use crate::scalar::{Scalar, C64};
use crate::series::{Jet1, Jet2};

/// Formal invariants `(m, n, p, λ)`.
#[derive(Clone, Debug, PartialEq)]
pub struct MRFormalForm<S> {
    pub m: u32,
    pub n: u32,
    pub p: u32,
    pub lambda: S,
}

impl<S: Scalar> MRFormalForm<S> {
    pub fn new(m: u32, n: u32, p: u32, lambda: S) -> Result<Self> {
        if m == 0 || n == 0 || p == 0 {
            return Err(GermError::BadParams(format!("m, n, p must be positive, got ({m}, {n}, {p})")));
        }
        Ok(MRFormalForm { m, n, p, lambda })
    }

    /// `(xⁿ yᵐ)^p`.
    pub fn weight(&self, degree: u32) -> Jet2<S> {
        Jet2::monomial(self.n * self.p, self.m * self.p, S::one(), degree)
    }
}

/// `mx(1 + λw) ∂x − ny(1 + (λ−1)w) ∂y` with `w = (xⁿyᵐ)^p`.
pub fn mr_formal_vf<S: Scalar>(f: &MRFormalForm<S>, degree: u32) -> VectorFieldGerm<S> {
    let w = f.weight(degree);
    let one = Jet2::one(degree);
    let ua = &one + &w.scale(&f.lambda);
    let ub = &one + &w.scale(&(f.lambda.clone() - S::one()));
    let a = ua.mul_monomial(1, 0, &S::from_i64(f.m as i64));
    let b = ub.mul_monomial(0, 1, &S::from_i64(-(f.n as i64)));
    VectorFieldGerm::new(a.truncate(degree), b.truncate(degree))
}

/// Coefficients `(P, Q)` of the form `P dx + Q dy = ny(1 + (λ−1)w) dx + mx(1 + λw) dy`.
pub fn mr_one_form<S: Scalar>(f: &MRFormalForm<S>, degree: u32) -> (Jet2<S>, Jet2<S>) {
    let w = f.weight(degree);
    let one = Jet2::one(degree);
    let p = (&one + &w.scale(&(f.lambda.clone() - S::one()))).mul_monomial(0, 1, &S::from_i64(f.n as i64));
    let q = (&one + &w.scale(&f.lambda)).mul_monomial(1, 0, &S::from_i64(f.m as i64));
    (p.truncate(degree), q.truncate(degree))
}

/// `ω(X)` for a one-form `(P, Q)`.
pub fn contract<S: Scalar>(form: &(Jet2<S>, Jet2<S>), x: &VectorFieldGerm<S>) -> Jet2<S> {
    &(&form.0 * x.a()) + &(&form.1 * x.b())
}

/// `2πi z^{k+1} / (1 + λ z^k)` with `k = mp`, expanded through `degree`.
pub fn holonomy_model<S: Scalar>(m: u32, p: u32, lambda: &S, degree: u32) -> Jet1<S> {
    let k = m * p;
    let two_pi_i = S::imag_unit() * S::from_c64(C64::new(TAU, 0.0));
    let mut out = Jet1::zero(degree);
    let mut c = two_pi_i;
    let mut e = k + 1;
    while e <= degree {
        out.set(e, c.clone());
        c = -(c * lambda.clone());
        if c.is_zero() {
            break;
        }
        e += k;
    }
    out
}

/// Which component a monomial sits in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Component {
    Dx,
    Dy,
}

/// Resonant monomials of `mx ∂x − ny ∂y` through a total degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResonanceData {
    pub m: u32,
    pub n: u32,
    /// `(i, j)` with `x^i y^j ∂x` resonant.
    pub dx: Vec<(u32, u32)>,
    /// `(i, j)` with `x^i y^j ∂y` resonant.
    pub dy: Vec<(u32, u32)>,
}

/// `x^i y^j` in the given component satisfies the eigenvalue relation.
pub fn is_resonant(m: u32, n: u32, comp: Component, i: u32, j: u32) -> bool {
    let lhs = i as i64 * m as i64 - j as i64 * n as i64;
    match comp {
        Component::Dx => lhs == m as i64,
        Component::Dy => lhs == -(n as i64),
    }
}

pub fn resonant_monomials(m: u32, n: u32, degree: u32) -> Result<ResonanceData> {
    if m == 0 || n == 0 {
        return Err(GermError::BadParams("m and n must be positive".into()));
    }
    let g = m.gcd(&n);
    let (sn, sm) = (n / g, m / g);
    let mut dx = Vec::new();
    let mut dy = Vec::new();
    for k in 1.. {
        let (i, j) = (1 + k * sn, k * sm);
        let (i2, j2) = (k * sn, 1 + k * sm);
        let mut any = false;
        if i + j <= degree {
            dx.push((i, j));
            any = true;
        }
        if i2 + j2 <= degree {
            dy.push((i2, j2));
            any = true;
        }
        if !any {
            break;
        }
    }
    Ok(ResonanceData { m, n, dx, dy })
}

/// Outcome of degree-by-degree linearization.
#[derive(Clone, Debug)]
pub struct Linearization<S> {
    /// `(x, y) = φ(u, v)` with `pullback(X, φ)` equal to `linearized`.
    pub change: CoordinateChange<S>,
    pub linearized: VectorFieldGerm<S>,
    /// First resonant monomial met with a nonzero coefficient.
    pub obstruction: Option<(Component, u32, u32)>,
}

/// Removes the non-resonant terms of a germ with linear part `mx ∂x − ny ∂y`
/// through `degree`.
pub fn linearize<S: Scalar>(x: &VectorFieldGerm<S>, degree: u32, tol: f64) -> Result<Linearization<S>> {
    let lp = x.linear_part();
    let [[a00, a01], [a10, a11]] = &lp.matrix;
    let (m, n) = match (a00.as_small_rational(tol), a11.as_small_rational(tol)) {
        (Some((m, 1)), Some((nn, 1))) if m > 0 && nn < 0 && a01.is_small(tol) && a10.is_small(tol) => (m, -nn),
        _ => return Err(GermError::BadParams("linear part must be diag(m, -n) with m, n positive integers".into())),
    };
    let degree = degree.min(x.valid());
    let wide = x.valid() + 2;
    let mut cur = x.truncate(degree);
    let mut total = CoordinateChange::identity(wide);
    let mut obstruction = None;
    for d in 2..=degree {
        let mut h1 = Jet2::zero(wide);
        let mut h2 = Jet2::zero(wide);
        let mut any = false;
        for j in 0..=d {
            let i = d - j;
            for (comp, jet, h, eig) in [(Component::Dx, cur.a(), &mut h1, m), (Component::Dy, cur.b(), &mut h2, -n)] {
                let e = jet.coeff(i, j);
                if e.is_small(tol) {
                    continue;
                }
                if is_resonant(m as u32, n as u32, comp, i, j) {
                    obstruction.get_or_insert((comp, i, j));
                    continue;
                }
                let denom = i as i64 * m - j as i64 * n - eig;
                h.set(i, j, e / S::from_i64(denom));
                any = true;
            }
        }
        if !any {
            continue;
        }
        let step = CoordinateChange::series(&Jet2::x(wide) + &h1, &Jet2::y(wide) + &h2);
        cur = pullback(&cur, &step)?.truncate(degree);
        total = total.compose(&step)?;
    }
    if let CoordinateChange::Series { phi1, phi2 } = &total {
        total = CoordinateChange::series(phi1.truncate(degree), phi2.truncate(degree));
    }
    Ok(Linearization { change: total, linearized: cur, obstruction })
}

/// `∫ dT / (xᵃ yᵇ f(x, y))` along `x = x₀e^{mT}, y = y₀e^{−nT}` for `T` from `T₀` to `T₀ + 2πi`.
pub fn monomial_leaf_period(
    a: u32,
    b: u32,
    f_unit: &Jet2<C64>,
    m: u32,
    n: u32,
    seed: (C64, C64),
    t0: C64,
    ctl: &Controls,
) -> Result<C64> {
    if f_unit.constant_term().norm() == 0.0 {
        return Err(GermError::NotAUnit);
    }
    let (x0, y0) = seed;
    let sol = integrate_unit(
        |s, _| {
            let t = t0 + C64::new(0.0, TAU * s);
            let x = x0 * (t * m as f64).exp();
            let y = y0 * (-t * n as f64).exp();
            let den = x.powu(a) * y.powu(b) * f_unit.eval_c64(x, y);
            [C64::new(0.0, TAU) / den]
        },
        [C64::new(0.0, 0.0)],
        ctl,
    )?;
    Ok(sol.state[0])
}

/// The period of `(xⁿyᵐ)^k f · (mx ∂x − ny ∂y)`.
pub fn mr_leaf_period(k: u32, f_unit: &Jet2<C64>, m: u32, n: u32, seed: (C64, C64), ctl: &Controls) -> Result<C64> {
    monomial_leaf_period(k * n, k * m, f_unit, m, n, seed, C64::new(0.0, 0.0), ctl)
}

/// Holonomy of the formal model around `|x| = 1` against the time-one map of its holonomy model.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HolonomyComparison {
    pub seed: C64,
    pub holonomy: C64,
    pub time_one: C64,
    pub difference: f64,
}

/// Holonomy of `mr_formal_vf` on the transversal `{x = 1}` for `m = n = 1`.
pub fn formal_holonomy(p: u32, lambda: C64, z0: C64, ctl: &Controls) -> Result<C64> {
    let f = MRFormalForm::new(1, 1, p, lambda)?;
    let field = mr_formal_vf(&f, 2 * p + 2);
    let spec = LeafLoopSpec { controls: *ctl, ..LeafLoopSpec::circle(Axis::X, C64::new(0.0, 0.0), 1.0, z0) };
    track_leaf(&field, &spec)
}

pub fn compare_holonomy(p: u32, lambda: C64, z0: C64, ctl: &Controls) -> Result<HolonomyComparison> {
    let holonomy = formal_holonomy(p, lambda, z0, ctl)?;
    let model = holonomy_model(1, p, &lambda, 40);
    let time_one = integrate_flow_1d(&model, z0, C64::new(1.0, 0.0), ctl)?;
    Ok(HolonomyComparison { seed: z0, holonomy, time_one, difference: (holonomy - time_one).norm() })
}

/// Taylor coefficient of `z^k` in `h(z) − z` by an `N`-point Cauchy sum on `|z| = r`.
pub fn cauchy_coefficient(mut h: impl FnMut(C64) -> Result<C64>, k: u32, r: f64, points: usize) -> Result<C64> {
    let mut acc = C64::new(0.0, 0.0);
    for j in 0..points {
        let z = C64::from_polar(r, TAU * j as f64 / points as f64);
        acc += (h(z)? - z) * z.powu(k).inv();
    }
    Ok(acc / points as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::germ::lie_bracket;
    use crate::scalar::GaussRat as Q;

    #[test]
    fn formal_vf_example() {
        let f = MRFormalForm::new(1, 1, 1, Q::from_i64(0)).unwrap();
        let x = mr_formal_vf(&f, 8);
        assert_eq!(x, VectorFieldGerm::from_int_terms(8, &[(1, 0, 1)], &[(0, 1, -1), (1, 2, 1)]));
        for (m, n, p, l) in [(1, 1, 1, 3), (2, 1, 2, -1), (1, 3, 1, 5)] {
            let f = MRFormalForm::new(m, n, p, Q::from_ratio(l, 2)).unwrap();
            assert!(contract(&mr_one_form(&f, 14), &mr_formal_vf(&f, 14)).is_zero());
        }
        let f = MRFormalForm::new(2, 1, 2, Q::from_i64(1)).unwrap();
        assert_eq!(mr_formal_vf(&f, 10).a().coeff(3, 4), Q::from_i64(2));
    }

    #[test]
    fn holonomy_model_series() {
        let tpi = Q::imag_unit() * Q::from_c64(C64::new(TAU, 0.0));
        let h = holonomy_model(1, 1, &Q::from_i64(0), 6);
        assert_eq!(h.terms().count(), 1);
        assert_eq!(h.coeff(2), tpi.clone());
        let h = holonomy_model(1, 1, &Q::from_i64(1), 6);
        for k in 2..=6u32 {
            let sign = if k % 2 == 0 { 1 } else { -1 };
            assert_eq!(h.coeff(k), tpi.clone() * Q::from_i64(sign));
        }
    }

    #[test]
    fn riccati_time_one() {
        let h = holonomy_model(1, 1, &C64::new(0.0, 0.0), 4);
        let z0 = C64::new(0.05, 0.0);
        let z1 = integrate_flow_1d(&h, z0, C64::new(1.0, 0.0), &Controls::default()).unwrap();
        let closed = z0 / (1.0 - C64::new(0.0, TAU) * z0);
        assert!((z1 - closed).norm() < 1e-12);
    }

    #[test]
    fn resonances() {
        let r = resonant_monomials(1, 1, 5).unwrap();
        assert_eq!(r.dx, vec![(2, 1), (3, 2)]);
        assert_eq!(r.dy, vec![(1, 2), (2, 3)]);
        let r = resonant_monomials(2, 1, 7).unwrap();
        assert_eq!(r.dx, vec![(2, 2), (3, 4)]);
        for (i, j) in r.dx.iter().chain(&r.dy) {
            assert!(is_resonant(2, 1, Component::Dx, *i, *j) || is_resonant(2, 1, Component::Dy, *i, *j));
        }
        // a_mu m - b_mu n = ±1 perturbations never resonate
        for (m, n, am, bm) in [(1u32, 1u32, 1u32, 0u32), (2, 1, 1, 1), (2, 3, 2, 1)] {
            for k in 1..4 {
                let (i, j) = (k * n - am, k * m - bm);
                assert!(!is_resonant(m, n, Component::Dx, i + 1, j));
                assert!(!is_resonant(m, n, Component::Dy, i, j + 1));
            }
        }
    }

    #[test]
    fn linearize_single_step() {
        // x ∂x - y ∂y + x^3 ∂x
        let x = VectorFieldGerm::<Q>::from_int_terms(8, &[(1, 0, 1), (3, 0, 1)], &[(0, 1, -1)]);
        let l = linearize(&x, 8, 0.0).unwrap();
        assert!(l.obstruction.is_none());
        assert_eq!(l.linearized, VectorFieldGerm::from_int_terms(8, &[(1, 0, 1)], &[(0, 1, -1)]));
        let lin = l.linearized.clone();
        let back = pullback(&lin, &l.change.inverse().unwrap()).unwrap();
        assert_eq!(back.truncate(7), x.truncate(7));
    }

    #[test]
    fn linearize_reports_resonance() {
        let x = VectorFieldGerm::<Q>::from_int_terms(8, &[(1, 0, 1), (2, 1, 1)], &[(0, 1, -1)]);
        let l = linearize(&x, 8, 0.0).unwrap();
        assert_eq!(l.obstruction, Some((Component::Dx, 2, 1)));
    }

    #[test]
    fn linearize_perturbed_saddle() {
        // x ∂x - (y + y^2) ∂y
        let z = VectorFieldGerm::<Q>::from_int_terms(12, &[(1, 0, 1)], &[(0, 1, -1), (0, 2, -1)]);
        let l = linearize(&z, 12, 0.0).unwrap();
        assert!(l.obstruction.is_none());
        assert_eq!(l.linearized, VectorFieldGerm::from_int_terms(12, &[(1, 0, 1)], &[(0, 1, -1)]));
    }

    #[test]
    fn weight_is_not_a_first_integral() {
        let f = MRFormalForm::new(1, 1, 1, Q::from_i64(2)).unwrap();
        let x = mr_formal_vf(&f, 10);
        let w = Jet2::monomial(1, 1, Q::from_i64(1), 10);
        let y = x.mul_fn(&w);
        assert!(!lie_bracket(&x, &y).unwrap().is_zero());
    }

    #[test]
    fn period_values() {
        let ctl = Controls::default();
        let one = Jet2::one(4);
        let p = mr_leaf_period(1, &one, 1, 1, (C64::new(0.1, 0.0), C64::new(0.2, 0.0)), &ctl).unwrap();
        assert!((p - C64::new(0.0, TAU) / 0.02).norm() < 1e-8 * p.norm());
        let zero = monomial_leaf_period(1, 0, &one, 1, 1, (C64::new(0.1, 0.0), C64::new(0.2, 0.0)), C64::new(0.0, 0.0), &ctl)
            .unwrap();
        assert!(zero.norm() < 1e-8);
    }

    #[test]
    fn holonomy_matches_time_one_map() {
        let ctl = Controls::default();
        for lambda in [0.0, 0.3] {
            let c = compare_holonomy(1, C64::new(lambda, 0.0), C64::new(0.05, 0.0), &ctl).unwrap();
            assert!(c.difference < 1e-9, "{c:?}");
        }
        let z2 = cauchy_coefficient(|z| formal_holonomy(1, C64::new(0.0, 0.0), z, &ctl), 2, 0.02, 8).unwrap();
        assert!((z2 - C64::new(0.0, TAU)).norm() < 1e-4);
    }
}
