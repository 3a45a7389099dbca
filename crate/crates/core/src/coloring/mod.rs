//! Colored right-angled polytopes in `H^p`, their deformations in
//! `H^{p+m}`, and the piecewise projective Lipschitz maps between the
//! deformed reflection groups.

mod cell120;
mod field;
mod kgon;
mod margulis;

pub use cell120::{build_120cell, cell120_radius, five_color_120cell, FiveColoring};
pub use field::{QSqrt5, Quaternion};
pub use kgon::{build_kgon, kgon_side_length};
pub use margulis::{margulis_demo, margulis_walls, wall_separation, MargulisReport};

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::coxeter::Word;
use crate::error::{Error, Result};
use crate::hpq::{Ellipsoid, StandardForm};

/// Tolerance for the right-angle condition on user-supplied polytopes.
const ORTHOGONALITY_TOL: f64 = 1e-10;

/// Lorentzian form of `R^{n,1}`, negative on the last coordinate.
pub fn lorentz_form(n: usize) -> StandardForm {
    StandardForm::new(n, 0)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ColoredPolytope {
    pub p: usize,
    /// Outward normals `(w_i, 1)` in `R^{p,1}`.
    pub normals: Vec<Vec<f64>>,
    /// `adjacency[i][j]` when faces `i` and `j` meet.
    pub adjacency: Vec<Vec<bool>>,
    pub coloring: Vec<usize>,
}

impl ColoredPolytope {
    pub fn faces(&self) -> usize {
        self.normals.len()
    }

    /// Number of colors minus one.
    pub fn m(&self) -> usize {
        self.coloring.iter().copied().max().unwrap_or(0)
    }

    pub fn normal(&self, i: usize) -> DVector<f64> {
        DVector::from_column_slice(&self.normals[i])
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let n = self.faces();
        (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .filter(|&(i, j)| self.adjacency[i][j])
            .collect()
    }

    /// Checks shapes, spacelike normals, right angles and the coloring.
    pub fn validate(&self) -> Result<()> {
        let n = self.faces();
        if self.adjacency.len() != n
            || self.coloring.len() != n
            || self.adjacency.iter().any(|r| r.len() != n)
        {
            return Err(Error::Construction(
                "normals, adjacency and coloring disagree in size".into(),
            ));
        }
        let form = lorentz_form(self.p);
        for i in 0..n {
            if self.normals[i].len() != self.p + 1 {
                return Err(Error::Construction(format!(
                    "normal {i} does not lie in R^{{{},1}}",
                    self.p
                )));
            }
            if (self.normals[i][self.p] - 1.0).abs() > 1e-12 {
                return Err(Error::Construction(format!(
                    "normal {i} is not of the form (w, 1)"
                )));
            }
            let v = self.normal(i);
            if !(form.pairing(&v, &v) > 0.0) {
                return Err(Error::LightlikeNormal(i));
            }
            if self.adjacency[i][i] {
                return Err(Error::Construction(format!(
                    "face {i} is marked adjacent to itself"
                )));
            }
        }
        for i in 0..n {
            for j in 0..n {
                if self.adjacency[i][j] != self.adjacency[j][i] {
                    return Err(Error::Construction(format!(
                        "adjacency is not symmetric at ({i}, {j})"
                    )));
                }
            }
        }
        for (i, j) in self.edges() {
            let c = form.pairing(&self.normal(i), &self.normal(j));
            if c.abs() > ORTHOGONALITY_TOL {
                return Err(Error::Construction(format!(
                    "faces {i} and {j} meet at a non-right angle ({c:e})"
                )));
            }
        }
        self.check_coloring(&self.coloring)
    }

    pub fn check_coloring(&self, coloring: &[usize]) -> Result<()> {
        match self
            .edges()
            .into_iter()
            .find(|&(i, j)| coloring[i] == coloring[j])
        {
            Some((i, j)) => Err(Error::ColoringViolation(i, j)),
            None => Ok(()),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("polytope serializes")
    }

    /// Parses and re-validates.
    pub fn from_json(text: &str) -> Result<Self> {
        let poly: Self = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        poly.validate()?;
        Ok(poly)
    }
}

/// Vertices of a regular simplex inscribed in the unit sphere of `R^m`.
///
/// Uses the Helmert basis of `{x ∈ R^{m+1} : Σx = 0}` to write the centered
/// standard basis vectors in `m` coordinates.
pub fn simplex_directions(m: usize) -> Vec<DVector<f64>> {
    if m == 0 {
        return vec![DVector::zeros(0)];
    }
    let helmert: Vec<DVector<f64>> = (1..=m)
        .map(|k| {
            let norm = ((k * (k + 1)) as f64).sqrt();
            DVector::from_fn(m + 1, |i, _| match i.cmp(&k) {
                std::cmp::Ordering::Less => 1.0 / norm,
                std::cmp::Ordering::Equal => -(k as f64) / norm,
                std::cmp::Ordering::Greater => 0.0,
            })
        })
        .collect();
    let scale = ((m + 1) as f64 / m as f64).sqrt();
    (0..=m)
        .map(|i| DVector::from_fn(m, |r, _| helmert[r][i] * scale))
        .collect()
}

/// The normals `(cosh(t) w_i, √m sinh(t) u_σ(i), 1)` in `R^{p+m,1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct DeformedNormals {
    pub t: f64,
    pub p: usize,
    pub m: usize,
    pub vectors: Vec<DVector<f64>>,
    /// `d/dt` of each vector.
    pub velocities: Vec<DVector<f64>>,
}

impl DeformedNormals {
    pub fn dim(&self) -> usize {
        self.p + self.m
    }

    pub fn form(&self) -> StandardForm {
        lorentz_form(self.dim())
    }

    pub fn reflections(&self) -> Result<Vec<DMatrix<f64>>> {
        self.vectors
            .iter()
            .map(|v| reflection_in_normal(v, &self.form()))
            .collect()
    }
}

pub fn deformed_normals(poly: &ColoredPolytope, t: f64) -> Result<DeformedNormals> {
    poly.check_coloring(&poly.coloring)?;
    let (p, m) = (poly.p, poly.m());
    let u = simplex_directions(m);
    let root_m = (m as f64).sqrt();
    let build = |i: usize, c: f64, s: f64, last: f64| {
        let w = &poly.normals[i];
        DVector::from_fn(p + m + 1, |r, _| {
            if r < p {
                c * w[r]
            } else if r < p + m {
                root_m * s * u[poly.coloring[i]][r - p]
            } else {
                last
            }
        })
    };
    let (ch, sh) = (t.cosh(), t.sinh());
    Ok(DeformedNormals {
        t,
        p,
        m,
        vectors: (0..poly.faces()).map(|i| build(i, ch, sh, 1.0)).collect(),
        velocities: (0..poly.faces()).map(|i| build(i, sh, ch, 0.0)).collect(),
    })
}

/// `x ↦ x − 2(⟨x,v⟩/⟨v,v⟩) v`.
pub fn reflection_in_normal(v: &DVector<f64>, form: &StandardForm) -> Result<DMatrix<f64>> {
    let q = form.pairing(v, v);
    if !(q > 1e-12 * v.norm_squared()) {
        return Err(Error::LightlikeNormal(0));
    }
    let jv = DVector::from_fn(v.len(), |i, _| form.sign(i) * v[i]);
    Ok(DMatrix::identity(v.len(), v.len()) - v * jv.transpose() * (2.0 / q))
}

pub fn rep_from_normals(dn: &DeformedNormals, w: &Word) -> Result<DMatrix<f64>> {
    let refl = dn.reflections()?;
    let n = dn.dim() + 1;
    Ok(w.0
        .iter()
        .fold(DMatrix::identity(n, n), |acc, &i| acc * &refl[i]))
}

/// `u(w) = (d/dt ρ_t(w)) ρ_t(w)⁻¹`, by the product rule over the letters.
pub fn reflection_cocycle(dn: &DeformedNormals, w: &Word) -> Result<DMatrix<f64>> {
    let form = dn.form();
    let n = dn.dim() + 1;
    let j = form.j();
    let mut value = DMatrix::identity(n, n);
    let mut derivative = DMatrix::zeros(n, n);
    for &i in &w.0 {
        let (v, dv) = (&dn.vectors[i], &dn.velocities[i]);
        let q = form.pairing(v, v);
        let dq = 2.0 * form.pairing(v, dv);
        let r = reflection_in_normal(v, &form)?;
        let outer = v * v.transpose() * &j;
        let d_outer = (dv * v.transpose() + v * dv.transpose()) * &j;
        let dr = -(d_outer * (2.0 / q) - outer * (2.0 * dq / (q * q)));
        derivative = &derivative * &r + &value * dr;
        value = &value * r;
    }
    // ρ(w) ∈ O(n−1, 1), so ρ(w)⁻¹ = J ρ(w)ᵀ J.
    Ok(derivative * (&j * value.transpose() * &j))
}

/// Normalizes onto the upper sheet of `⟨x,x⟩ = −1`.
pub fn to_hyperboloid(form: &StandardForm, x: &DVector<f64>) -> Result<DVector<f64>> {
    let q = form.pairing(x, x);
    if !(q < 0.0) {
        return Err(Error::NotTimelike);
    }
    let y = x / (-q).sqrt();
    Ok(if y[y.len() - 1] < 0.0 { -y } else { y })
}

/// Lift of the point `y` of the unit ball (Klein model).
pub fn klein_to_hyperboloid(y: &DVector<f64>) -> Result<DVector<f64>> {
    let r2 = y.norm_squared();
    if !(r2 < 1.0) {
        return Err(Error::NotTimelike);
    }
    let s = 1.0 / (1.0 - r2).sqrt();
    Ok(DVector::from_fn(y.len() + 1, |i, _| {
        if i < y.len() {
            y[i] * s
        } else {
            s
        }
    }))
}

/// Uniform sample of the Euclidean ball of radius `radius` in `R^dim`.
pub fn random_in_ball(rng: &mut ChaCha8Rng, dim: usize, radius: f64) -> DVector<f64> {
    loop {
        let v = DVector::from_fn(dim, |_, _| rng.gen_range(-1.0..1.0));
        if v.norm_squared() < 1.0 {
            return v * radius;
        }
    }
}

/// `(ρ_t, ρ_s)`-equivariant map: reduce into `P_t`, rescale the chart by
/// `cosh t/cosh s` on `R^p` and `sinh t/sinh s` on `R^m`, then translate
/// back with `ρ_s`.
#[derive(Debug, Clone)]
pub struct LipschitzMap {
    pub source: DeformedNormals,
    pub target: DeformedNormals,
    refl_t: Vec<DMatrix<f64>>,
    refl_s: Vec<DMatrix<f64>>,
    scale: DVector<f64>,
    budget: usize,
}

impl LipschitzMap {
    pub fn new(poly: &ColoredPolytope, t: f64, s: f64, budget: usize) -> Result<Self> {
        if !(0.0 < t && t <= s) {
            return Err(Error::Construction(format!(
                "need 0 < t <= s, got t = {t}, s = {s}"
            )));
        }
        let source = deformed_normals(poly, t)?;
        let target = deformed_normals(poly, s)?;
        let (a, b) = (t.cosh() / s.cosh(), t.sinh() / s.sinh());
        let (p, m) = (source.p, source.m);
        let scale = DVector::from_fn(p + m + 1, |i, _| {
            if i < p {
                a
            } else if i < p + m {
                b
            } else {
                1.0
            }
        });
        Ok(Self {
            refl_t: source.reflections()?,
            refl_s: target.reflections()?,
            source,
            target,
            scale,
            budget,
        })
    }

    /// `cosh t / cosh s`.
    pub fn lipschitz_constant(&self) -> f64 {
        self.source.t.cosh() / self.target.t.cosh()
    }

    /// Reflects in the first violated wall of `P_t` until none is violated;
    /// returns `w` and `x₀ ∈ P_t` with `ρ_t(w) x₀ = x`.
    pub fn reduce(&self, x: &DVector<f64>) -> Result<(Word, DVector<f64>)> {
        let form = self.source.form();
        let mut y = x.clone();
        let mut word = Vec::new();
        loop {
            let slack = 1e-13 * y.amax();
            match self
                .source
                .vectors
                .iter()
                .position(|v| form.pairing(&y, v) > slack)
            {
                None => return Ok((Word(word), y)),
                Some(i) => {
                    if word.len() >= self.budget {
                        return Err(Error::ReductionBudget(self.budget));
                    }
                    y = &self.refl_t[i] * y;
                    word.push(i);
                }
            }
        }
    }

    pub fn apply(&self, x: &DVector<f64>) -> Result<DVector<f64>> {
        let (w, x0) = self.reduce(x)?;
        let y =
            w.0.iter()
                .rev()
                .fold(x0.component_mul(&self.scale), |acc, &i| {
                    &self.refl_s[i] * acc
                });
        to_hyperboloid(&self.target.form(), &y)
    }
}

/// Largest `d(f x, f y) / d(x, y)` over `pairs` random pairs in the ball of
/// Euclidean radius `radius` of the Klein model.
pub fn empirical_lipschitz(
    map: &LipschitzMap,
    pairs: usize,
    radius: f64,
    seed: u64,
) -> Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dim = map.source.dim();
    let mut worst = 0.0f64;
    for _ in 0..pairs {
        let x = klein_to_hyperboloid(&random_in_ball(&mut rng, dim, radius))?;
        let y = klein_to_hyperboloid(&random_in_ball(&mut rng, dim, radius))?;
        let d = crate::verify::hyperbolic_distance(&x, &y);
        if d > 1e-9 {
            let fd = crate::verify::hyperbolic_distance(&map.apply(&x)?, &map.apply(&y)?);
            worst = worst.max(fd / d);
        }
    }
    Ok(worst)
}

/// Smallest `r·d_{B_r}(x,y) / d_{B_1}(x,y)` over random pairs in `B_r`;
/// the comparison of Hilbert metrics on nested balls says it is at least 1.
pub fn ball_comparison(dim: usize, r: f64, pairs: usize, seed: u64) -> Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (small, unit) = (Ellipsoid::ball(dim, r), Ellipsoid::ball(dim, 1.0));
    let mut worst = f64::INFINITY;
    for _ in 0..pairs {
        let x = random_in_ball(&mut rng, dim, r * 0.999);
        let y = random_in_ball(&mut rng, dim, r * 0.999);
        let d1 = unit.distance(&x, &y)?;
        if d1 > 1e-9 {
            worst = worst.min(r * small.distance(&x, &y)? / d1);
        }
    }
    Ok(worst)
}
