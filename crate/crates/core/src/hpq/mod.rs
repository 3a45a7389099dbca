//! The standard pseudo-hyperbolic space `H^{p,q}` in `R^{p,q+1}`: lifts, causal
//! classification, the pseudo-distance, geodesics, first variation and
//! Killing fields. Hilbert metrics and the eigenvalue gauges live in the
//! submodules.

mod gauges;
mod hilbert;

pub use gauges::{
    eig_log_moduli, exact_top_eigenvalue, finsler_distance, is_proximal, mu1, orbit_growth_check,
    OrbitGrowth, SpectralTop,
};
pub use hilbert::{hilbert_distance_segment, spherical_distance, Ellipsoid, Polytope};

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Half-width of the band around `|⟨x̂, ŷ⟩| = 1` classified as lightlike.
pub const LIGHTLIKE_TOL: f64 = 1e-9;

/// The form `Σ_{i<p} v_i w_i − Σ_{i≥p} v_i w_i` on `R^{p+q+1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StandardForm {
    pub p: usize,
    pub q: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProjectivePoint(pub DVector<f64>);

/// Representative with `⟨x̂, x̂⟩ = −1`.
#[derive(Debug, Clone, PartialEq)]
pub struct TimelikeLift(pub DVector<f64>);

/// Vector in `x̂⊥`, attached to a specific lift.
#[derive(Debug, Clone, PartialEq)]
pub struct Tangent {
    pub base: TimelikeLift,
    pub vec: DVector<f64>,
}

/// Element of `o(p, q+1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LieElement(pub DMatrix<f64>);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PairClass {
    Equal,
    Spacelike,
    Lightlike,
    Timelike,
}

impl StandardForm {
    pub fn new(p: usize, q: usize) -> Self {
        assert!(p >= 1, "the positive part must be nontrivial");
        Self { p, q }
    }

    pub fn dim(&self) -> usize {
        self.p + self.q + 1
    }

    pub fn sign(&self, i: usize) -> f64 {
        if i < self.p {
            1.0
        } else {
            -1.0
        }
    }

    pub fn j(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.dim(), self.dim(), |i, j| {
            if i == j {
                self.sign(i)
            } else {
                0.0
            }
        })
    }

    pub fn pairing(&self, v: &DVector<f64>, w: &DVector<f64>) -> f64 {
        v.iter()
            .zip(w.iter())
            .enumerate()
            .map(|(i, (a, b))| self.sign(i) * a * b)
            .sum()
    }

    /// Rescales by a positive factor onto `⟨x̂, x̂⟩ = −1`.
    pub fn lift(&self, x: &ProjectivePoint) -> Result<TimelikeLift> {
        let q = self.pairing(&x.0, &x.0);
        if !(q < 0.0) {
            return Err(Error::NotTimelike);
        }
        Ok(TimelikeLift(&x.0 / (-q).sqrt()))
    }

    pub fn classify(&self, x: &TimelikeLift, y: &TimelikeLift) -> PairClass {
        if (&x.0 - &y.0).amax() <= 1e-12 * x.0.amax() || (&x.0 + &y.0).amax() <= 1e-12 * x.0.amax()
        {
            return PairClass::Equal;
        }
        let c = self.pairing(&x.0, &y.0).abs();
        if c > 1.0 + LIGHTLIKE_TOL {
            PairClass::Spacelike
        } else if c >= 1.0 - LIGHTLIKE_TOL {
            PairClass::Lightlike
        } else {
            PairClass::Timelike
        }
    }

    pub fn classify_pair(&self, x: &ProjectivePoint, y: &ProjectivePoint) -> Result<PairClass> {
        Ok(self.classify(&self.lift(x)?, &self.lift(y)?))
    }

    /// `arccosh |⟨x̂, ŷ⟩|` on spacelike pairs, 0 otherwise.
    pub fn pseudo_distance(&self, x: &TimelikeLift, y: &TimelikeLift) -> f64 {
        match self.classify(x, y) {
            PairClass::Spacelike => self.pairing(&x.0, &y.0).abs().acosh(),
            _ => 0.0,
        }
    }

    pub fn pseudo_distance_points(&self, x: &ProjectivePoint, y: &ProjectivePoint) -> Result<f64> {
        Ok(self.pseudo_distance(&self.lift(x)?, &self.lift(y)?))
    }

    /// Half the log of the cross-ratio of `x, y` and the two points where
    /// their projective line meets the quadric.
    pub fn cross_ratio_distance(&self, x: &ProjectivePoint, y: &ProjectivePoint) -> Result<f64> {
        let (a, mut b) = (x.0.clone(), y.0.clone());
        if self.pairing(&a, &b) > 0.0 {
            b = -b;
        }
        // Points a + s(b − a); x at s = 0, y at s = 1.
        let d = &b - &a;
        let qa = self.pairing(&d, &d);
        let qb = 2.0 * self.pairing(&a, &d);
        let qc = self.pairing(&a, &a);
        let disc = qb * qb - 4.0 * qa * qc;
        if !(disc > 0.0) || qa == 0.0 {
            return Err(Error::NotSpacelike);
        }
        let root = disc.sqrt();
        let s1 = if qb >= 0.0 {
            (-qb - root) / (2.0 * qa)
        } else {
            (-qb + root) / (2.0 * qa)
        };
        let s2 = qc / (qa * s1);
        let (sa, sb) = if s1 < s2 { (s1, s2) } else { (s2, s1) };
        if !(sa < 0.0 && sb > 1.0) {
            return Err(Error::NotSpacelike);
        }
        let cr = ((1.0 - sa) * sb) / ((-sa) * (sb - 1.0));
        Ok(0.5 * cr.ln())
    }

    /// `[cosh(s) x̂ + sinh(s) v]` for a unit spacelike tangent `v`.
    pub fn geodesic_point(&self, v: &Tangent, s: f64) -> ProjectivePoint {
        ProjectivePoint(&v.base.0 * s.cosh() + &v.vec * s.sinh())
    }

    /// Lift of the point reached at time `h` along the geodesic with initial velocity `z`.
    pub fn exp(&self, z: &Tangent, h: f64) -> TimelikeLift {
        let n = self.pairing(&z.vec, &z.vec);
        let x = &z.base.0;
        let v = if n > 1e-300 {
            let r = n.sqrt();
            x * (h * r).cosh() + &z.vec * ((h * r).sinh() / r)
        } else if n < -1e-300 {
            let r = (-n).sqrt();
            x * (h * r).cos() + &z.vec * ((h * r).sin() / r)
        } else {
            x + &z.vec * h
        };
        let q = -self.pairing(&v, &v);
        TimelikeLift(v / q.sqrt())
    }

    /// Projects a vector onto `x̂⊥`.
    pub fn project(&self, x: &TimelikeLift, v: &DVector<f64>) -> Tangent {
        let c = self.pairing(v, &x.0);
        Tangent {
            base: x.clone(),
            vec: v + &x.0 * c,
        }
    }

    /// Unit tangent at `x` pointing toward `y`, computed with the lift of `y`
    /// paired negatively against `x̂`.
    pub fn unit_direction(&self, x: &TimelikeLift, y: &TimelikeLift) -> Result<Tangent> {
        if self.classify(x, y) != PairClass::Spacelike {
            return Err(Error::NotSpacelike);
        }
        let mut yv = y.0.clone();
        if self.pairing(&x.0, &yv) > 0.0 {
            yv = -yv;
        }
        let cosh = -self.pairing(&x.0, &yv);
        let sinh = (cosh * cosh - 1.0).sqrt();
        Ok(Tangent {
            base: x.clone(),
            vec: (yv - &x.0 * cosh) / sinh,
        })
    }

    /// Derivative of the pseudo-distance along the variations `zx`, `zy`.
    pub fn first_variation(&self, zx: &Tangent, zy: &Tangent) -> Result<f64> {
        let x = &zx.base;
        let y = &zy.base;
        let vxy = self.unit_direction(x, y)?;
        let vyx = self.unit_direction(y, x)?;
        Ok(-self.pairing(&zx.vec, &vxy.vec) - self.pairing(&zy.vec, &vyx.vec))
    }

    pub fn killing_value(&self, y: &LieElement, x: &TimelikeLift) -> Tangent {
        Tangent {
            base: x.clone(),
            vec: &y.0 * &x.0,
        }
    }

    /// Max-entry size of `YᵀJ + JY`.
    pub fn lie_residual(&self, y: &LieElement) -> f64 {
        let j = self.j();
        (y.0.transpose() * &j + &j * &y.0).amax()
    }

    /// Max-entry size of `gᵀJg − J`.
    pub fn group_residual(&self, g: &DMatrix<f64>) -> f64 {
        let j = self.j();
        (g.transpose() * &j * g - j).amax()
    }

    /// Basis of `o(p, q+1)`: `E_ij − σ_i σ_j E_ji` for `i < j`.
    pub fn lie_basis(&self) -> Vec<LieElement> {
        let n = self.dim();
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let mut m = DMatrix::zeros(n, n);
                m[(i, j)] = 1.0;
                m[(j, i)] = -self.sign(i) * self.sign(j);
                out.push(LieElement(m));
            }
        }
        out
    }
}

impl LieElement {
    pub fn zero(n: usize) -> Self {
        Self(DMatrix::zeros(n, n))
    }

    /// `g Y g⁻¹`.
    pub fn adjoint(&self, g: &DMatrix<f64>, g_inv: &DMatrix<f64>) -> Self {
        Self(g * &self.0 * g_inv)
    }

    /// Trace form `tr(XY)`, proportional to the Killing form.
    pub fn trace_form(&self, other: &Self) -> f64 {
        (&self.0 * &other.0).trace()
    }
}
