//! Quadratic blow-up of a germ at the origin.
//!
//! Chart 0 uses coordinates `(x, t)` with `y = t x`; chart 1 uses `(s, y)`
//! with `x = s y`. The lift of `A ∂x + B ∂y` to chart 0 is
//! `A(x, tx) ∂x + (B(x, tx) − t A(x, tx)) / x ∂t`; chart 1 is the mirror
//! image. Lifts are built from the known terms of the germ as exact
//! polynomials, so translations along the divisor lose no precision.

mod roots;

pub use roots::{poly_roots, snap};

use crate::error::{GermError, Result};
use crate::germ::{LinearPart, VectorFieldGerm};
use crate::scalar::{Scalar, C64};
use crate::series::{Jet2, Laurent2};

/// A single blow-up in one chart.
#[derive(Clone, Debug)]
pub struct BlowupResult<S> {
    pub chart: u8,
    /// The lifted vector field.
    pub transformed: VectorFieldGerm<S>,
    /// Largest power of the exceptional coordinate dividing `transformed`.
    pub divisor_order: u32,
    /// `transformed` with the exceptional power removed.
    pub foliation: VectorFieldGerm<S>,
    pub dicritical: bool,
    /// Order of the germ that was blown up.
    pub source_order: u32,
    source: VectorFieldGerm<S>,
    // foliation in chart 0 of the (possibly swapped) source, exact in x^p for p <= known
    fol: (Laurent2<S>, Laurent2<S>),
    known: u32,
}

/// A singular point of the blown-up foliation on the exceptional divisor.
#[derive(Clone, Debug)]
pub struct DivisorPoint {
    pub chart: u8,
    /// Divisor coordinate (`t` in chart 0, `s` in chart 1).
    pub coord: C64,
    /// Multiplicity as a root of the divisor restriction.
    pub multiplicity: u32,
    /// Local foliation, exceptional coordinate first.
    pub germ: VectorFieldGerm<C64>,
    /// Eigenvalue along the divisor.
    pub along: C64,
    /// Eigenvalue transverse to the divisor.
    pub transverse: C64,
}

impl DivisorPoint {
    /// `along / transverse` when the transverse eigenvalue is nonzero.
    pub fn ratio(&self, tol: f64) -> Option<C64> {
        (self.transverse.norm() > tol).then(|| self.along / self.transverse)
    }

    pub fn linear_part(&self) -> LinearPart<C64> {
        self.germ.linear_part()
    }
}

fn truncate_laurent<S: Scalar>(l: &Laurent2<S>, max_x: i32) -> Laurent2<S> {
    let mut out = Laurent2::zero();
    for (i, j, c) in l.terms() {
        if i <= max_x {
            out = &out + &Laurent2::monomial(i, j, c.clone());
        }
    }
    out
}

fn to_jet_total<S: Scalar>(l: &Laurent2<S>, valid: u32) -> Jet2<S> {
    l.to_jet(valid).expect("lift has no negative powers")
}

struct Chart0<S> {
    lift: (Laurent2<S>, Laurent2<S>),
    k: u32,
    fol: (Laurent2<S>, Laurent2<S>),
    known: u32,
    nu: u32,
}

fn chart0<S: Scalar>(x: &VectorFieldGerm<S>) -> Result<Chart0<S>> {
    if !x.a().constant_term().is_zero() || !x.b().constant_term().is_zero() {
        return Err(GermError::BadParams("blow-up centre must be a zero of the germ".into()));
    }
    let nu = x.order().ok_or(GermError::ZeroJet)?;
    let v = x.valid();
    if v < nu + 1 {
        return Err(GermError::PrecisionExhausted(format!("blow-up needs degree {} terms, have {v}", nu + 1)));
    }
    let gx = Laurent2::monomial(1, 0, S::one());
    let gy = Laurent2::monomial(1, 1, S::one());
    let a = Laurent2::from_jet(x.a()).substitute(&gx, &gy).expect("polynomial substitution");
    let b = Laurent2::from_jet(x.b()).substitute(&gx, &gy).expect("polynomial substitution");
    let lb = (&b - &a.shift(0, 1)).shift(-1, 0);
    let known = v as i32 - 1;
    let (la, lb) = (truncate_laurent(&a, known), truncate_laurent(&lb, known));
    let k = la.terms().chain(lb.terms()).map(|(i, _, _)| i).min().ok_or_else(|| {
        GermError::PrecisionExhausted("no known terms survive the blow-up".into())
    })?;
    let fol = (la.shift(-k, 0), lb.shift(-k, 0));
    Ok(Chart0 { lift: (la, lb), k: k as u32, fol, known: (known - k) as u32, nu })
}

/// Blows up `x` at the origin and returns the chart-`chart` transform.
pub fn blowup_vf<S: Scalar>(x: &VectorFieldGerm<S>, chart: u8) -> Result<BlowupResult<S>> {
    let src = match chart {
        0 => x.clone(),
        1 => x.swap_xy(),
        _ => return Err(GermError::BadParams(format!("chart must be 0 or 1, got {chart}"))),
    };
    let c = chart0(&src)?;
    let lift_valid = c.known + c.k;
    let mut transformed = VectorFieldGerm::new(to_jet_total(&c.lift.0, lift_valid), to_jet_total(&c.lift.1, lift_valid));
    let mut foliation = VectorFieldGerm::new(to_jet_total(&c.fol.0, c.known), to_jet_total(&c.fol.1, c.known));
    let dicritical = c.fol.0.terms().any(|(i, _, _)| i == 0);
    if chart == 1 {
        transformed = transformed.swap_xy();
        foliation = foliation.swap_xy();
    }
    Ok(BlowupResult {
        chart,
        transformed,
        divisor_order: c.k,
        foliation,
        dicritical,
        source_order: c.nu,
        source: x.clone(),
        fol: c.fol,
        known: c.known,
    })
}

fn lower_laurent<S: Scalar>(l: &Laurent2<S>) -> Laurent2<C64> {
    let mut out = Laurent2::zero();
    for (i, j, c) in l.terms() {
        out = &out + &Laurent2::monomial(i, j, c.to_c64());
    }
    out
}

impl<S: Scalar> BlowupResult<S> {
    /// Restriction of the foliation to the divisor, as coefficients in the divisor coordinate.
    pub fn divisor_polynomial(&self) -> Vec<S> {
        let deg = self.fol.1.terms().filter(|t| t.0 == 0).map(|t| t.1).max().unwrap_or(0).max(0) as usize;
        let mut out = vec![S::zero(); deg + 1];
        for (i, j, c) in self.fol.1.terms() {
            if i == 0 {
                out[j as usize] = c.clone();
            }
        }
        out
    }

    /// The foliation at the divisor point with coordinate `c`, exceptional coordinate first.
    pub fn local_germ_at(&self, c: C64) -> VectorFieldGerm<C64> {
        let gx = Laurent2::monomial(1, 0, C64::new(1.0, 0.0));
        let gt = &Laurent2::monomial(0, 1, C64::new(1.0, 0.0)) + &Laurent2::constant(c);
        let shift = |l: &Laurent2<S>| {
            let t = lower_laurent(l).substitute(&gx, &gt).expect("polynomial substitution");
            truncate_laurent(&t, self.known as i32).to_jet(self.known).expect("no negative powers")
        };
        VectorFieldGerm::new(shift(&self.fol.0), shift(&self.fol.1))
    }

    fn points_in_chart(&self, tol: f64) -> Vec<DivisorPoint> {
        let p: Vec<C64> = self.divisor_polynomial().iter().map(|c| c.to_c64()).collect();
        poly_roots(&p)
            .into_iter()
            .map(|(t0, m)| {
                let germ = self.local_germ_at(t0);
                let along = germ.b().coeff(0, 1);
                let transverse = germ.a().coeff(1, 0);
                let mut along = along;
                if along.norm() <= tol {
                    along = C64::new(0.0, 0.0);
                }
                DivisorPoint { chart: self.chart, coord: t0, multiplicity: m, germ, along, transverse }
            })
            .collect()
    }
}

/// Singular points of a non-dicritical blow-up on the whole exceptional divisor.
///
/// Points are listed in the chart of `r`, followed by the origin of the
/// other chart when it is singular.
pub fn divisor_singularities<S: Scalar>(r: &BlowupResult<S>, tol: f64) -> Result<Vec<DivisorPoint>> {
    if r.dicritical {
        return Err(GermError::DicriticalInput);
    }
    let mut pts = r.points_in_chart(tol);
    let other = blowup_vf(&r.source, 1 - r.chart)?;
    let at_origin = other.divisor_polynomial().first().is_none_or(|c| c.is_small(tol));
    if at_origin {
        pts.extend(other.points_in_chart(tol).into_iter().filter(|p| p.coord.norm() <= tol.max(1e-9)));
    }
    Ok(pts)
}
