//! Fixed points of `x ↦ g⁻¹ f(x)` on the hyperboloid model of `H^n`.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

fn lorentz(a: &DVector<f64>, b: &DVector<f64>) -> f64 {
    let n = a.len() - 1;
    a.rows(0, n).dot(&b.rows(0, n)) - a[n] * b[n]
}

/// Distance on the upper sheet of `⟨x,x⟩ = −1` in `R^{n,1}`, from
/// `|x − y|² = 4 sinh²(d/2)`, which stays accurate for nearby points.
pub fn hyperbolic_distance(x: &DVector<f64>, y: &DVector<f64>) -> f64 {
    let d = x - y;
    2.0 * (lorentz(&d, &d).max(0.0).sqrt() / 2.0).asinh()
}

/// Iterations the Banach estimate allows before the displacement drops below `tol·(1 − C)`.
pub fn banach_bound(lipschitz: f64, first_step: f64, tol: f64) -> usize {
    let target = tol * (1.0 - lipschitz);
    if first_step <= target {
        0
    } else {
        ((target / first_step).ln() / lipschitz.ln()).ceil() as usize
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BanachOutcome {
    pub point: Vec<f64>,
    pub iterations: usize,
    pub bound: usize,
    pub first_step: f64,
    pub last_step: f64,
}

/// Iterates `x ← g⁻¹ f(x)` from `start` until a step is shorter than `tol`,
/// which puts the result within `tol·C/(1 − C)` of the fixed point.
/// `f` must be `C`-Lipschitz; `iterations` counts steps after the first.
pub fn banach_projection(
    f: impl Fn(&DVector<f64>) -> Result<DVector<f64>>,
    lipschitz: f64,
    g: &DMatrix<f64>,
    start: &DVector<f64>,
    tol: f64,
) -> Result<BanachOutcome> {
    if !(lipschitz > 0.0 && lipschitz < 1.0) {
        return Err(Error::Construction(format!(
            "Lipschitz constant {lipschitz} is not in (0, 1)"
        )));
    }
    let g_inv = g
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::Numerical("isometry is not invertible".into()))?;
    let step = |x: &DVector<f64>| -> Result<DVector<f64>> {
        let y = &g_inv * f(x)?;
        let q = -lorentz(&y, &y);
        if !(q > 0.0) || y[y.len() - 1] <= 0.0 {
            return Err(Error::NotTimelike);
        }
        Ok(y / q.sqrt())
    };
    let mut x = step(start)?;
    let first_step = hyperbolic_distance(start, &x);
    let bound = banach_bound(lipschitz, first_step, tol);
    let mut last_step = first_step;
    let mut iterations = 0;
    while last_step >= tol {
        if iterations >= 10 * bound.max(1) {
            return Err(Error::NoConvergence(iterations));
        }
        let next = step(&x)?;
        last_step = hyperbolic_distance(&x, &next);
        x = next;
        iterations += 1;
    }
    Ok(BanachOutcome {
        point: x.iter().copied().collect(),
        iterations,
        bound,
        first_step,
        last_step,
    })
}
