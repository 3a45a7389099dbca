//! Hilbert metrics of ellipsoids and polytopes, and the angle metric on
//! projective space.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

const COLLINEAR_TOL: f64 = 1e-9;

/// Half the log cross-ratio of four collinear points ordered `a, x, y, b`.
pub fn hilbert_distance_segment(
    a: &DVector<f64>,
    x: &DVector<f64>,
    y: &DVector<f64>,
    b: &DVector<f64>,
) -> Result<f64> {
    let dir = b - a;
    let len = dir.norm();
    if len == 0.0 {
        return Err(Error::NotCollinear);
    }
    let unit = &dir / len;
    let param = |p: &DVector<f64>| -> Result<f64> {
        let rel = p - a;
        let s = rel.dot(&unit);
        if (rel - &unit * s).norm() > COLLINEAR_TOL * len.max(1.0) {
            return Err(Error::NotCollinear);
        }
        Ok(s)
    };
    let (sx, sy) = (param(x)?, param(y)?);
    let tol = COLLINEAR_TOL * len;
    if !(sx > tol && sy > tol && sx < len - tol && sy < len - tol) {
        return Err(Error::NotCollinear);
    }
    if sx > sy + tol {
        return Err(Error::NotCollinear);
    }
    Ok(0.5 * ((sy * (len - sx)) / (sx * (len - sy))).ln())
}

/// Hilbert distance from the exit parameters of the line `x + s(y − x)`.
fn hilbert_from_exits(s_minus: f64, s_plus: f64) -> f64 {
    // x at 0, y at 1, a at s_minus < 0, b at s_plus > 1.
    0.5 * (((1.0 - s_minus) * s_plus) / ((-s_minus) * (s_plus - 1.0))).ln()
}

/// `{p : (p − c)ᵀ A (p − c) < 1}` with `A` positive definite.
#[derive(Debug, Clone)]
pub struct Ellipsoid {
    pub center: DVector<f64>,
    pub shape: DMatrix<f64>,
}

impl Ellipsoid {
    pub fn ball(dim: usize, radius: f64) -> Self {
        Self {
            center: DVector::zeros(dim),
            shape: DMatrix::identity(dim, dim) / (radius * radius),
        }
    }

    fn level(&self, p: &DVector<f64>) -> f64 {
        let d = p - &self.center;
        d.dot(&(&self.shape * &d))
    }

    pub fn contains(&self, p: &DVector<f64>) -> bool {
        self.level(p) < 1.0
    }

    pub fn distance(&self, x: &DVector<f64>, y: &DVector<f64>) -> Result<f64> {
        if !self.contains(x) || !self.contains(y) {
            return Err(Error::Construction("point outside the ellipsoid".into()));
        }
        if x == y {
            return Ok(0.0);
        }
        let u = y - x;
        let d = x - &self.center;
        let qa = u.dot(&(&self.shape * &u));
        let qb = 2.0 * d.dot(&(&self.shape * &u));
        let qc = d.dot(&(&self.shape * &d)) - 1.0;
        let root = (qb * qb - 4.0 * qa * qc).sqrt();
        let s1 = if qb >= 0.0 {
            (-qb - root) / (2.0 * qa)
        } else {
            (-qb + root) / (2.0 * qa)
        };
        let s2 = qc / (qa * s1);
        Ok(hilbert_from_exits(s1.min(s2), s1.max(s2)))
    }
}

/// `{p : n_i · p < c_i for all i}`, assumed bounded.
#[derive(Debug, Clone)]
pub struct Polytope {
    pub normals: Vec<DVector<f64>>,
    pub offsets: Vec<f64>,
}

impl Polytope {
    pub fn contains(&self, p: &DVector<f64>) -> bool {
        self.normals
            .iter()
            .zip(&self.offsets)
            .all(|(n, &c)| n.dot(p) < c)
    }

    pub fn distance(&self, x: &DVector<f64>, y: &DVector<f64>) -> Result<f64> {
        if !self.contains(x) || !self.contains(y) {
            return Err(Error::Construction("point outside the polytope".into()));
        }
        if x == y {
            return Ok(0.0);
        }
        let u = y - x;
        let (mut s_minus, mut s_plus) = (f64::NEG_INFINITY, f64::INFINITY);
        for (n, &c) in self.normals.iter().zip(&self.offsets) {
            let rate = n.dot(&u);
            let slack = c - n.dot(x);
            if rate > 0.0 {
                s_plus = s_plus.min(slack / rate);
            } else if rate < 0.0 {
                s_minus = s_minus.max(slack / rate);
            }
        }
        if !s_minus.is_finite() || !s_plus.is_finite() {
            return Err(Error::Construction(
                "polytope is unbounded along the line".into(),
            ));
        }
        Ok(hilbert_from_exits(s_minus, s_plus))
    }
}

/// `min(∠(v, w), ∠(v, −w))`.
pub fn spherical_distance(v: &DVector<f64>, w: &DVector<f64>) -> f64 {
    let dot = v.dot(w).abs();
    let wedge = (v.norm_squared() * w.norm_squared() - dot * dot)
        .max(0.0)
        .sqrt();
    wedge.atan2(dot)
}
