//! The deformed Gram family `M_t = Id + tN` and its reflection representations.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::coxeter::{CoxeterGraph, Word};
use crate::error::{Error, Result};
use crate::exact::{
    det_polynomial, format_rational, int, isolate_real_roots, rat, refine_root, signature,
    DualMatrix, Inertia, Matrix, Rational, RationalMatrix, RootInterval, UnivariatePolynomial,
};

const PERRON_TOL: f64 = 1e-13;
const PERRON_MAX_ITER: usize = 100_000;

#[derive(Debug, Clone)]
pub struct GramFamily {
    graph: CoxeterGraph,
    n: RationalMatrix,
}

impl GramFamily {
    pub fn new(graph: CoxeterGraph) -> Self {
        let k = graph.k();
        let n = Matrix::from_fn(k, k, |i, j| {
            if graph.is_infinite(i, j) {
                int(1)
            } else {
                int(0)
            }
        });
        Self { graph, n }
    }

    pub fn graph(&self) -> &CoxeterGraph {
        &self.graph
    }

    pub fn k(&self) -> usize {
        self.graph.k()
    }

    /// The 0/1 matrix marking infinite-order pairs.
    pub fn n(&self) -> &RationalMatrix {
        &self.n
    }

    pub fn gram_matrix(&self, t: &Rational) -> RationalMatrix {
        &Matrix::identity(self.k()) + &self.n.scale(t)
    }

    /// `Id − 2 e_i (row i of M_t)`.
    pub fn reflection_matrix(&self, i: usize, t: &Rational) -> RationalMatrix {
        let m = self.gram_matrix(t);
        let mut g = Matrix::identity(self.k());
        for j in 0..self.k() {
            let v = g.get(i, j) - int(2) * m.get(i, j);
            g.set(i, j, v);
        }
        g
    }

    pub fn deformed_rep(&self, t: &Rational) -> DeformedRep {
        let m_t = self.gram_matrix(t);
        let generators = (0..self.k())
            .map(|i| self.reflection_matrix(i, t))
            .collect();
        let generator_derivatives = (0..self.k())
            .map(|i| {
                let mut d = RationalMatrix::zeros(self.k(), self.k());
                for j in 0..self.k() {
                    d.set(i, j, int(-2) * self.n.get(i, j));
                }
                d
            })
            .collect();
        DeformedRep {
            t: t.clone(),
            m_t,
            generators,
            generator_derivatives,
        }
    }

    pub fn represent(&self, w: &Word, t: &Rational) -> RationalMatrix {
        self.deformed_rep(t).represent(w)
    }

    pub fn represent_dual(&self, w: &Word, t: &Rational) -> (RationalMatrix, RationalMatrix) {
        self.deformed_rep(t).represent_dual(w)
    }

    pub fn det_polynomial(&self) -> UnivariatePolynomial {
        det_polynomial(&self.n)
    }

    pub fn signature_at(&self, t: &Rational) -> Inertia {
        signature(&self.gram_matrix(t))
    }

    /// Exceptional values in `[lo, hi]` and the signature on each complementary segment.
    pub fn signature_profile(&self, lo: &Rational, hi: &Rational) -> SignatureProfile {
        assert!(lo < hi, "empty range");
        let p = self.det_polynomial();
        let width = rat(1, 1 << 24);
        let roots: Vec<RootInterval> = if p.degree() == Some(0) {
            Vec::new()
        } else {
            isolate_real_roots(&p, lo, hi)
                .iter()
                .map(|iv| refine_root(&p, iv, &width))
                .collect()
        };
        // Gaps between consecutive isolating intervals; an endpoint is open
        // exactly when it is itself a rational root.
        let mut bounds = vec![(lo.clone(), false)];
        for r in &roots {
            bounds.push((r.lo.clone(), r.is_exact()));
            bounds.push((r.hi.clone(), r.is_exact()));
        }
        bounds.push((hi.clone(), false));
        let mut segments = Vec::new();
        for pair in bounds.chunks(2) {
            let ((a, lo_open), (b, hi_open)) = (&pair[0], &pair[1]);
            if a >= b {
                continue;
            }
            let sample = (a + b) / int(2);
            segments.push(Segment {
                lo: a.clone(),
                hi: b.clone(),
                lo_open: *lo_open,
                hi_open: *hi_open,
                signature: self.signature_at(&sample),
                sample,
            });
        }
        let exceptional = roots
            .into_iter()
            .map(|interval| ExceptionalValue {
                approx: interval.midpoint_f64(),
                interval,
            })
            .collect();
        SignatureProfile {
            range: (lo.clone(), hi.clone()),
            determinant: p.coeffs().iter().map(format_rational).collect(),
            exceptional,
            segments,
        }
    }

    /// Perron–Frobenius data of `N`, scaled so the largest coordinate is 1.
    ///
    /// Iterates with `N + Id` so that a bipartite infinite-order graph, whose
    /// spectrum is symmetric, still converges.
    pub fn perron(&self) -> Result<PerronData> {
        if !self.graph.is_irreducible() {
            return Err(Error::Reducible);
        }
        let k = self.k();
        let n = self.n.to_f64();
        let shifted = &n + nalgebra::DMatrix::<f64>::identity(k, k);
        let mut v = nalgebra::DVector::<f64>::from_element(k, 1.0 / (k as f64).sqrt());
        let mut iterations = 0;
        loop {
            iterations += 1;
            let mut next = &shifted * &v;
            next /= next.norm();
            let delta = (&next - &v).amax();
            v = next;
            if delta < PERRON_TOL {
                break;
            }
            if iterations >= PERRON_MAX_ITER {
                return Err(Error::NoConvergence(PERRON_MAX_ITER));
            }
        }
        let lambda = v.dot(&(&n * &v)) / v.dot(&v);
        let v = &v / v.amax();
        let residual = (&n * &v - &v * lambda).norm();
        if v.iter().any(|&x| x <= 0.0) {
            return Err(Error::Numerical(
                "Perron vector has a non-positive entry".into(),
            ));
        }
        if lambda < 2f64.sqrt() - residual {
            return Err(Error::Numerical(format!(
                "Perron eigenvalue {lambda} is below sqrt(2)"
            )));
        }
        Ok(PerronData {
            lambda_pf: lambda,
            v_pf: v.iter().copied().collect(),
            residual,
            iterations,
        })
    }

    /// Columns of `−M_t⁻¹`.
    pub fn dual_vertices(&self, t: &Rational) -> Result<Vec<Vec<Rational>>> {
        let m = self.gram_matrix(t);
        let inv = m
            .inverse()
            .ok_or_else(|| Error::Singular(format_rational(t)))?;
        let neg = inv.scale(&int(-1));
        let cols: Vec<Vec<Rational>> = (0..self.k()).map(|j| neg.column(j)).collect();
        for (i, col) in cols.iter().enumerate() {
            let paired = m.mul_vec(col);
            for (j, x) in paired.iter().enumerate() {
                let expected = if i == j {
                    -Rational::one()
                } else {
                    Rational::zero()
                };
                assert_eq!(*x, expected, "dual vertex identity");
            }
        }
        Ok(cols)
    }
}

/// `ρ_t` with its exact generator matrices and their `t`-derivatives.
#[derive(Debug, Clone)]
pub struct DeformedRep {
    pub t: Rational,
    pub m_t: RationalMatrix,
    pub generators: Vec<RationalMatrix>,
    pub generator_derivatives: Vec<RationalMatrix>,
}

impl DeformedRep {
    pub fn k(&self) -> usize {
        self.generators.len()
    }

    pub fn represent(&self, w: &Word) -> RationalMatrix {
        w.0.iter().fold(Matrix::identity(self.k()), |acc, &i| {
            &acc * &self.generators[i]
        })
    }

    /// `(ρ_t(w), d/dτ ρ_τ(w) at τ = t)`.
    pub fn represent_dual(&self, w: &Word) -> (RationalMatrix, RationalMatrix) {
        let acc = w.0.iter().fold(DualMatrix::identity(self.k()), |acc, &i| {
            &acc * &DualMatrix::from_parts(&self.generators[i], &self.generator_derivatives[i])
        });
        (acc.value(), acc.derivative())
    }

    /// `⟨v, w⟩_t`.
    pub fn pairing(&self, v: &[Rational], w: &[Rational]) -> Rational {
        self.m_t
            .mul_vec(w)
            .iter()
            .zip(v)
            .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
    }

    /// Applies generator `i` in place: `v − 2⟨v, e_i⟩_t e_i`.
    pub fn reflect(&self, i: usize, v: &mut [Rational]) {
        let c: Rational = self
            .m_t
            .row(i)
            .iter()
            .zip(v.iter())
            .map(|(a, b)| a * b)
            .sum();
        v[i] -= int(2) * c;
    }

    /// `ρ_t(w) v`, applying letters right to left.
    pub fn act(&self, w: &Word, v: &[Rational]) -> Vec<Rational> {
        let mut out = v.to_vec();
        for &i in w.0.iter().rev() {
            self.reflect(i, &mut out);
        }
        out
    }

    /// Forward-mode derivative of `ρ_τ(w) v(τ)` at `τ = t`, given `v(t)` and `v̇(t)`.
    pub fn act_dual(
        &self,
        w: &Word,
        value: &[Rational],
        derivative: &[Rational],
    ) -> (Vec<Rational>, Vec<Rational>) {
        let mut v = value.to_vec();
        let mut d = derivative.to_vec();
        for &i in w.0.iter().rev() {
            // Row i of M_τ is e_i + τ N_i; its derivative is N_i.
            let c: Rational = self
                .m_t
                .row(i)
                .iter()
                .zip(v.iter())
                .map(|(a, b)| a * b)
                .sum();
            let dc: Rational = self
                .m_t
                .row(i)
                .iter()
                .zip(d.iter())
                .map(|(a, b)| a * b)
                .sum::<Rational>()
                + self.generator_derivatives[i]
                    .row(i)
                    .iter()
                    .zip(v.iter())
                    .map(|(a, b)| a * b)
                    .sum::<Rational>()
                    / int(-2);
            v[i] -= int(2) * c;
            d[i] -= int(2) * dc;
        }
        (v, d)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExceptionalValue {
    pub interval: RootInterval,
    pub approx: f64,
}

/// Root-free rational subinterval with the signature of `M_t` on it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    #[serde(with = "crate::serde_rational")]
    pub lo: Rational,
    #[serde(with = "crate::serde_rational")]
    pub hi: Rational,
    pub lo_open: bool,
    pub hi_open: bool,
    #[serde(with = "crate::serde_rational")]
    pub sample: Rational,
    pub signature: Inertia,
}

impl Segment {
    pub fn contains(&self, t: &Rational) -> bool {
        let above = if self.lo_open {
            &self.lo < t
        } else {
            &self.lo <= t
        };
        let below = if self.hi_open {
            t < &self.hi
        } else {
            t <= &self.hi
        };
        above && below
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignatureProfile {
    #[serde(with = "range_serde")]
    pub range: (Rational, Rational),
    /// Coefficients of `det(M_t)`, ascending.
    pub determinant: Vec<String>,
    pub exceptional: Vec<ExceptionalValue>,
    pub segments: Vec<Segment>,
}

impl SignatureProfile {
    /// Segment adjacent to the lower end of the range.
    pub fn default_interval(&self) -> Option<&Segment> {
        self.segments.first()
    }

    pub fn segment_containing(&self, t: &Rational) -> Option<&Segment> {
        self.segments.iter().find(|s| s.contains(t))
    }
}

mod range_serde {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use crate::exact::{format_rational, parse_rational, Rational};

    pub fn serialize<S: Serializer>(r: &(Rational, Rational), s: S) -> Result<S::Ok, S::Error> {
        [format_rational(&r.0), format_rational(&r.1)].serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<(Rational, Rational), D::Error> {
        let [a, b] = <[String; 2]>::deserialize(d)?;
        let a = parse_rational(&a).map_err(serde::de::Error::custom)?;
        let b = parse_rational(&b).map_err(serde::de::Error::custom)?;
        Ok((a, b))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerronData {
    pub lambda_pf: f64,
    pub v_pf: Vec<f64>,
    pub residual: f64,
    pub iterations: usize,
}
