//! The right-angled regular polygon with an alternating 2-coloring.

use std::f64::consts::PI;

use super::ColoredPolytope;
use crate::error::{Error, Result};

/// Side length of the right-angled regular `k`-gon in `H^2`.
pub fn kgon_side_length(k: usize) -> f64 {
    2.0 * (2f64.sqrt() * (PI / k as f64).cos()).acosh()
}

/// Normals `(R cos θ_i, R sin θ_i, 1)` with `θ_i = 2πi/k`.
///
/// Adjacent normals are orthogonal exactly when `R² cos(2π/k) = 1`.
pub fn build_kgon(k: usize) -> Result<ColoredPolytope> {
    if k % 2 == 1 {
        return Err(Error::Construction(format!(
            "odd cycle: the {k}-gon has no 2-coloring of its sides"
        )));
    }
    if k < 6 {
        return Err(Error::Construction(format!(
            "a right-angled regular {k}-gon with a 2-coloring needs k >= 6"
        )));
    }
    let step = 2.0 * PI / k as f64;
    let radius = (1.0 / step.cos()).sqrt();
    let normals = (0..k)
        .map(|i| {
            let theta = step * i as f64;
            vec![radius * theta.cos(), radius * theta.sin(), 1.0]
        })
        .collect();
    let adjacency = (0..k)
        .map(|i| {
            (0..k)
                .map(|j| (i + 1) % k == j || (j + 1) % k == i)
                .collect()
        })
        .collect();
    let poly = ColoredPolytope {
        p: 2,
        normals,
        adjacency,
        coloring: (0..k).map(|i| i % 2).collect(),
    };
    poly.validate()?;
    Ok(poly)
}
