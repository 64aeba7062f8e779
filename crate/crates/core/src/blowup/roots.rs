//! Roots of univariate complex polynomials.

use crate::scalar::C64;

fn eval(coeffs: &[C64], z: C64) -> C64 {
    coeffs.iter().rev().fold(C64::new(0.0, 0.0), |acc, c| acc * z + c)
}

fn derivative(coeffs: &[C64]) -> Vec<C64> {
    coeffs.iter().enumerate().skip(1).map(|(k, c)| c * k as f64).collect()
}

/// Roots with multiplicities of `Σ c_k z^k`, leading zeros ignored.
pub fn poly_roots(coeffs: &[C64]) -> Vec<(C64, u32)> {
    let scale = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let mut c: Vec<C64> = coeffs.to_vec();
    while c.last().is_some_and(|l| l.norm() <= 1e-14 * scale.max(1e-300)) {
        c.pop();
    }
    let deg = c.len().saturating_sub(1);
    if deg == 0 {
        return Vec::new();
    }
    let lead = c[deg];
    let monic: Vec<C64> = c.iter().map(|x| x / lead).collect();
    let radius = 1.0 + monic[..deg].iter().map(|x| x.norm()).fold(0.0, f64::max);
    let dmonic = derivative(&monic);

    // Aberth iteration
    let mut z: Vec<C64> = (0..deg)
        .map(|k| C64::from_polar(radius * 0.5, 0.4 + std::f64::consts::TAU * k as f64 / deg as f64))
        .collect();
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for i in 0..deg {
            let p = eval(&monic, z[i]);
            let dp = eval(&dmonic, z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let sum: C64 = (0..deg).filter(|&j| j != i).map(|j| 1.0 / (z[i] - z[j])).sum();
            let w = ratio / (1.0 - ratio * sum);
            if w.is_finite() {
                z[i] -= w;
                moved = moved.max(w.norm());
            }
        }
        if moved < 1e-15 * radius {
            break;
        }
    }

    // cluster near-coincident roots, then polish on the matching derivative
    let tol = 1e-5 * radius;
    let mut clusters: Vec<(C64, u32)> = Vec::new();
    for r in z {
        match clusters.iter_mut().find(|(c, m)| (*c / *m as f64 - r).norm() < tol) {
            Some((c, m)) => {
                *c += r;
                *m += 1;
            }
            None => clusters.push((r, 1)),
        }
    }
    clusters
        .into_iter()
        .map(|(sum, m)| {
            let mut d = monic.clone();
            for _ in 1..m {
                d = derivative(&d);
            }
            let dd = derivative(&d);
            let mut r = sum / m as f64;
            for _ in 0..50 {
                let step = eval(&d, r) / eval(&dd, r);
                if !step.is_finite() {
                    break;
                }
                r -= step;
                if step.norm() < 1e-16 * radius {
                    break;
                }
            }
            (snap(r), m)
        })
        .collect()
}

/// Rounds components that sit within `1e-9` of a fraction with denominator below 64.
pub fn snap(z: C64) -> C64 {
    let snap1 = |x: f64| {
        for q in 1..64 {
            let p = (x * q as f64).round();
            if (x - p / q as f64).abs() < 1e-9 {
                return p / q as f64;
            }
        }
        x
    };
    C64::new(snap1(z.re), snap1(z.im))
}
