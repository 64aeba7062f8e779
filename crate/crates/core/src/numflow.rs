//! Complex-time integration of planar germs.
//!
//! Every integral here is an ODE in a real parameter `s ∈ [0, 1]` along a
//! path in complex time or along a loop in a base coordinate, solved with
//! the Dormand–Prince 5(4) pair under adaptive step control.

use std::f64::consts::TAU;

use crate::error::{GermError, Result};
use crate::germ::VectorFieldGerm;
use crate::onedim::Axis;
use crate::scalar::{Scalar, C64};
use crate::series::{Jet1, Jet2};

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };

/// Integrator settings.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Controls {
    /// Local error tolerance, mixed absolute and relative.
    pub tol: f64,
    pub h_init: f64,
    pub h_min: f64,
    pub max_steps: usize,
    /// States larger than this in modulus abort the integration.
    pub escape_radius: f64,
    /// Relative closure defect below which a lifted loop counts as closed.
    pub closure_tol: f64,
}

impl Default for Controls {
    fn default() -> Self {
        Controls { tol: 1e-12, h_init: 1e-3, h_min: 1e-13, max_steps: 2_000_000, escape_radius: 1e6, closure_tol: 1e-8 }
    }
}

// Dormand–Prince 5(4) tableau
const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const B4: [f64; 7] =
    [5179.0 / 57600.0, 0.0, 7571.0 / 16695.0, 393.0 / 640.0, -92097.0 / 339200.0, 187.0 / 2100.0, 1.0 / 40.0];

/// Solution summary of one integration.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Solution<const N: usize> {
    pub state: [C64; N],
    pub steps: usize,
}

/// Integrates `dz/ds = f(s, z)` from `s = 0` to `s = 1`.
pub fn integrate_unit<const N: usize>(
    mut f: impl FnMut(f64, &[C64; N]) -> [C64; N],
    z0: [C64; N],
    ctl: &Controls,
) -> Result<Solution<N>> {
    if !(ctl.tol > 0.0) {
        return Err(GermError::BadParams("tolerance must be positive".into()));
    }
    let mut s = 0.0;
    let mut z = z0;
    let mut h = ctl.h_init.min(1.0);
    let mut k = [[ZERO; N]; 7];
    k[0] = f(s, &z);
    let mut steps = 0;
    while s < 1.0 {
        if steps >= ctl.max_steps {
            return Err(GermError::StepFailure { at: s, reason: "step budget exhausted".into() });
        }
        h = h.min(1.0 - s);
        for stage in 1..7 {
            let mut zs = z;
            for (j, kj) in k.iter().enumerate().take(stage) {
                let a = A[stage][j];
                if a != 0.0 {
                    for i in 0..N {
                        zs[i] += kj[i] * (a * h);
                    }
                }
            }
            k[stage] = f(s + C[stage] * h, &zs);
        }
        let mut z5 = z;
        let mut err = 0.0f64;
        for i in 0..N {
            let mut d5 = ZERO;
            let mut d4 = ZERO;
            for st in 0..7 {
                d5 += k[st][i] * B5[st];
                d4 += k[st][i] * B4[st];
            }
            z5[i] += d5 * h;
            let scale = 1.0 + z[i].norm().max(z5[i].norm());
            err = err.max(((d5 - d4) * h).norm() / scale);
        }
        if !err.is_finite() || z5.iter().any(|v| !v.is_finite()) {
            h *= 0.25;
            if h < ctl.h_min {
                return Err(GermError::StepFailure { at: s, reason: "non-finite field value".into() });
            }
            continue;
        }
        let ratio = err / ctl.tol;
        if ratio <= 1.0 {
            s += h;
            z = z5;
            k[0] = k[6];
            steps += 1;
            if z.iter().any(|v| v.norm() > ctl.escape_radius) {
                return Err(GermError::LeafEscape { at: s });
            }
        }
        let factor = if ratio == 0.0 { 5.0 } else { (0.9 * ratio.powf(-0.2)).clamp(0.2, 5.0) };
        h *= factor;
        if h < ctl.h_min && s < 1.0 {
            return Err(GermError::StepFailure { at: s, reason: format!("step size below {:e}", ctl.h_min) });
        }
    }
    Ok(Solution { state: z, steps })
}

/// Double precision evaluator for a planar field.
#[derive(Clone, Debug)]
pub struct FloatField {
    a: Vec<(usize, usize, C64)>,
    b: Vec<(usize, usize, C64)>,
    degree: usize,
}

impl FloatField {
    pub fn new<S: Scalar>(x: &VectorFieldGerm<S>) -> Self {
        let conv = |j: &Jet2<S>| j.terms().map(|(i, k, c)| (i as usize, k as usize, c.to_c64())).collect::<Vec<_>>();
        FloatField { a: conv(x.a()), b: conv(x.b()), degree: x.valid() as usize }
    }

    pub fn eval(&self, x: C64, y: C64) -> (C64, C64) {
        let mut xp = vec![C64::new(1.0, 0.0); self.degree + 1];
        let mut yp = xp.clone();
        for k in 1..=self.degree {
            xp[k] = xp[k - 1] * x;
            yp[k] = yp[k - 1] * y;
        }
        let sum = |t: &[(usize, usize, C64)]| t.iter().fold(ZERO, |acc, &(i, j, c)| acc + c * xp[i] * yp[j]);
        (sum(&self.a), sum(&self.b))
    }
}

/// Piecewise-linear path in complex time.
#[derive(Clone, Debug, PartialEq)]
pub struct TimePath {
    pub waypoints: Vec<C64>,
}

impl TimePath {
    pub fn new(waypoints: Vec<C64>) -> Result<Self> {
        if waypoints.len() < 2 {
            return Err(GermError::BadParams("a time path needs at least two waypoints".into()));
        }
        if waypoints.windows(2).any(|w| w[0] == w[1]) {
            return Err(GermError::BadParams("consecutive waypoints must differ".into()));
        }
        Ok(TimePath { waypoints })
    }

    pub fn segment(from: C64, to: C64) -> Result<Self> {
        Self::new(vec![from, to])
    }

    /// The same path with every segment split in two.
    pub fn refined(&self) -> Self {
        let mut w = vec![self.waypoints[0]];
        for pair in self.waypoints.windows(2) {
            w.push((pair[0] + pair[1]) * 0.5);
            w.push(pair[1]);
        }
        TimePath { waypoints: w }
    }
}

/// Flows `x` from `z0` along a complex time path.
pub fn integrate_flow<S: Scalar>(x: &VectorFieldGerm<S>, z0: (C64, C64), path: &TimePath, ctl: &Controls) -> Result<(C64, C64)> {
    let field = FloatField::new(x);
    let mut z = [z0.0, z0.1];
    for pair in path.waypoints.windows(2) {
        let dt = pair[1] - pair[0];
        let sol = integrate_unit(
            |_, w| {
                let (a, b) = field.eval(w[0], w[1]);
                [a * dt, b * dt]
            },
            z,
            ctl,
        )?;
        z = sol.state;
    }
    Ok((z[0], z[1]))
}

/// Flows the one-variable field `h(z) ∂z` for complex time `t`.
pub fn integrate_flow_1d(h: &Jet1<C64>, z0: C64, t: C64, ctl: &Controls) -> Result<C64> {
    let coeffs: Vec<C64> = h.coeffs().to_vec();
    let eval = |z: C64| coeffs.iter().rev().fold(ZERO, |acc, c| acc * z + c);
    integrate_unit(|_, w| [eval(w[0]) * t], [z0], ctl).map(|s| s.state[0])
}

/// A loop in a leaf: a circle in the base coordinate plus a lift seed.
#[derive(Clone, Debug, PartialEq)]
pub struct LeafLoopSpec {
    /// Coordinate that runs around the circle.
    pub base: Axis,
    pub center: C64,
    pub radius: f64,
    pub winding: i32,
    /// Angle of the starting point on the circle.
    pub phase: f64,
    /// Value of the other coordinate at the starting point.
    pub seed: C64,
    pub controls: Controls,
}

impl LeafLoopSpec {
    pub fn circle(base: Axis, center: C64, radius: f64, seed: C64) -> Self {
        LeafLoopSpec { base, center, radius, winding: 1, phase: 0.0, seed, controls: Controls::default() }
    }

    pub fn start(&self) -> C64 {
        self.center + C64::from_polar(self.radius, self.phase)
    }

    fn validate(&self) -> Result<()> {
        if !(self.radius > 0.0) {
            return Err(GermError::BadParams("loop radius must be positive".into()));
        }
        if self.winding == 0 {
            return Err(GermError::BadParams("winding must be nonzero".into()));
        }
        Ok(())
    }

    /// Image under `(x, y) ↦ λ(x, y)`.
    pub fn scaled(&self, lambda: C64) -> Self {
        LeafLoopSpec {
            center: self.center * lambda,
            radius: self.radius * lambda.norm(),
            phase: self.phase + lambda.arg(),
            seed: self.seed * lambda,
            ..self.clone()
        }
    }
}

/// Orders the field components as (base, fiber).
fn oriented(field: &FloatField, base: Axis, p: C64, q: C64) -> (C64, C64) {
    match base {
        Axis::X => field.eval(p, q),
        Axis::Y => {
            let (a, b) = field.eval(q, p);
            (b, a)
        }
    }
}

fn loop_integral(field: &FloatField, spec: &LeafLoopSpec, with_time: bool, ctl: &Controls) -> Result<[C64; 2]> {
    spec.validate()?;
    let sweep = TAU * spec.winding as f64;
    integrate_unit(
        |s, w| {
            let e = C64::from_polar(spec.radius, spec.phase + sweep * s);
            let p = spec.center + e;
            let dp = C64::new(0.0, sweep) * e;
            let (a, b) = oriented(field, spec.base, p, w[0]);
            if with_time {
                [b / a * dp, dp / a]
            } else {
                [b / a * dp, ZERO]
            }
        },
        [spec.seed, ZERO],
        ctl,
    )
    .map(|s| s.state)
}

/// Holonomy image of the seed after running once around the loop.
pub fn track_leaf<S: Scalar>(f: &VectorFieldGerm<S>, spec: &LeafLoopSpec) -> Result<C64> {
    let field = FloatField::new(f);
    loop_integral(&field, spec, false, &spec.controls).map(|s| s[0])
}

/// Time-form period of a leaf loop with its diagnostics.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LeafPeriod {
    pub period: C64,
    /// Relative closure defect of the lift.
    pub defect: f64,
    /// Difference from a recomputation at a tighter tolerance.
    pub consistency: f64,
}

/// `∫ dT` over the lifted loop, where `dT` is the base differential over the base component of `x`.
pub fn leaf_period<S: Scalar>(x: &VectorFieldGerm<S>, spec: &LeafLoopSpec) -> Result<LeafPeriod> {
    let field = FloatField::new(x);
    let ctl = spec.controls;
    let coarse = loop_integral(&field, spec, true, &ctl)?;
    let defect = (coarse[0] - spec.seed).norm() / spec.seed.norm().max(f64::MIN_POSITIVE);
    if defect > ctl.closure_tol {
        return Err(GermError::NonClosedLift { defect });
    }
    let fine_ctl = Controls { tol: ctl.tol / 32.0, h_init: ctl.h_init / 2.0, ..ctl };
    let fine = loop_integral(&field, spec, true, &fine_ctl)?;
    Ok(LeafPeriod { period: fine[1], defect, consistency: (fine[1] - coarse[1]).norm() })
}

/// Periods on a loop and on its homothetic image.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HomothetyCheck {
    pub base: C64,
    pub scaled: C64,
    pub ratio: C64,
    pub expected: C64,
    /// `|ratio · λ − 1|`.
    pub defect: f64,
}

pub fn homothety_period_ratio<S: Scalar>(x: &VectorFieldGerm<S>, spec: &LeafLoopSpec, lambda: C64) -> Result<HomothetyCheck> {
    let quadratic_only = [x.a(), x.b()].iter().all(|j| j.terms().all(|(i, k, _)| i + k == 2));
    if !quadratic_only {
        return Err(GermError::BadParams("homothety check needs a homogeneous quadratic field".into()));
    }
    let p1 = leaf_period(x, spec)?.period;
    let p2 = leaf_period(x, &spec.scaled(lambda))?.period;
    let ratio = p2 / p1;
    Ok(HomothetyCheck { base: p1, scaled: p2, ratio, expected: 1.0 / lambda, defect: (ratio * lambda - 1.0).norm() })
}

/// A loop on the leaf `xy(x − y) = c` around the branch points `0` and `(4c)^{1/3}`.
pub fn elliptic_loop(c: C64) -> LeafLoopSpec {
    let x1 = (c * 4.0).powf(1.0 / 3.0);
    let center = x1 * 0.5;
    let radius = 0.6 * x1.norm();
    let mut spec = LeafLoopSpec::circle(Axis::X, center, radius, ZERO);
    let x = spec.start();
    // x y^2 - x^2 y + c = 0
    let disc = (x * x * x * x - x * c * 4.0).sqrt();
    spec.seed = (x * x + disc) / (x * 2.0);
    spec
}
