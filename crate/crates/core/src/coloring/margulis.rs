//! The single-color deformation of a reflection group with pairwise
//! disjoint walls in `H^2`, whose cocycle gives a proper affine action.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::{
    deformed_normals, empirical_lipschitz, reflection_cocycle, ColoredPolytope, DeformedNormals,
    LipschitzMap,
};
use crate::coxeter::Word;
use crate::error::{Error, Result};
use crate::verify::Verdict;

const DEMO_BUDGET: usize = 100_000;
const DEMO_PAIRS: usize = 2000;
const DEMO_RADIUS: f64 = 0.9;
const LIPSCHITZ_SLACK: f64 = 1e-6;
const LIE_TOL: f64 = 1e-9;

/// `k` walls with normals `(R cos θ_i, R sin θ_i, 1)`, `θ_i = 2πi/k`.
///
/// Walls `i`, `j` are disjoint iff `1 − R² cos(θ_i − θ_j) > R² − 1`; the
/// tightest pair is adjacent, so `R²` is taken halfway between 1 and
/// `2/(1 + cos(2π/k))`.
pub fn margulis_walls(k: usize) -> Result<ColoredPolytope> {
    if k < 2 {
        return Err(Error::Construction(format!(
            "need at least 2 walls, got {k}"
        )));
    }
    let r2 = if k == 2 {
        2.0
    } else {
        0.5 * (1.0 + 2.0 / (1.0 + (2.0 * PI / k as f64).cos()))
    };
    let normals = (0..k)
        .map(|i| {
            let theta = 2.0 * PI * i as f64 / k as f64;
            vec![r2.sqrt() * theta.cos(), r2.sqrt() * theta.sin(), 1.0]
        })
        .collect();
    let poly = ColoredPolytope {
        p: 2,
        normals,
        adjacency: vec![vec![false; k]; k],
        coloring: vec![0; k],
    };
    poly.validate()?;
    Ok(poly)
}

/// Smallest `|⟨v_i,v_j⟩| / (|v_i||v_j|)` over pairs; above 1 for disjoint walls.
pub fn wall_separation(dn: &DeformedNormals) -> Result<f64> {
    let form = dn.form();
    let mut worst = f64::INFINITY;
    for i in 0..dn.vectors.len() {
        for j in i + 1..dn.vectors.len() {
            let (a, b) = (&dn.vectors[i], &dn.vectors[j]);
            let c = form.pairing(a, b) / (form.pairing(a, a) * form.pairing(b, b)).sqrt();
            if c.abs() <= 1.0 {
                return Err(Error::WallsIntersect(i, j));
            }
            worst = worst.min(c.abs());
        }
    }
    Ok(worst)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MargulisReport {
    pub k: usize,
    pub t: f64,
    pub s: f64,
    pub lipschitz_constant: f64,
    pub empirical_ratio: f64,
    pub wall_separation: f64,
    /// Dimension of the Lie algebra the cocycle lands in.
    pub lie_dimension: usize,
    /// Largest `‖uᵀJ + Ju‖ / max(1, ‖u‖)` over the sampled words.
    pub lie_residual: f64,
    pub words_checked: usize,
    pub verdict: Verdict,
}

/// Deforms, checks the cocycle lands in `o(2,1)`, and estimates the
/// Lipschitz constant of the equivariant map from `ρ_t` to `ρ_s`.
pub fn margulis_demo(k: usize, t: f64, s: f64, seed: u64) -> Result<MargulisReport> {
    let poly = margulis_walls(k)?;
    let source = deformed_normals(&poly, t)?;
    let separation = wall_separation(&source)?.min(wall_separation(&deformed_normals(&poly, s)?)?);
    let form = source.form();
    let j = form.j();
    let mut lie_residual = 0.0f64;
    let words: Vec<Word> = (0..k)
        .flat_map(|a| (0..k).map(move |b| Word(vec![a, b, (a + 1) % k, b])))
        .collect();
    for w in &words {
        let u = reflection_cocycle(&source, w)?;
        let r = (u.transpose() * &j + &j * &u).amax() / u.amax().max(1.0);
        lie_residual = lie_residual.max(r);
    }
    let map = LipschitzMap::new(&poly, t, s, DEMO_BUDGET)?;
    let constant = map.lipschitz_constant();
    let empirical = empirical_lipschitz(&map, DEMO_PAIRS, DEMO_RADIUS, seed)?;
    let verdict =
        if lie_residual <= LIE_TOL && empirical <= constant + LIPSCHITZ_SLACK && constant < 1.0 {
            Verdict::Pass
        } else {
            Verdict::Fail
        };
    Ok(MargulisReport {
        k,
        t,
        s,
        lipschitz_constant: constant,
        empirical_ratio: empirical,
        wall_separation: separation,
        lie_dimension: 3,
        lie_residual,
        words_checked: words.len(),
        verdict,
    })
}
