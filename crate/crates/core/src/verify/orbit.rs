//! Orbit samples `ρ•_t(Γ)·x`, the equivariant maps `f_{t,s}` and the vector
//! fields `Z_t` obtained by differentiating them in `s`.

use nalgebra::{DMatrix, DVector};
use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::One;
use rayon::prelude::*;

use crate::coxeter::{CoxeterGraph, NormalForm};
use crate::error::{Error, Result};
use crate::exact::{format_rational, rat, to_f64, Rational, RationalMatrix};
use crate::gram::{GramFamily, PerronData};
use crate::hpq::{ProjectivePoint, StandardForm, Tangent, TimelikeLift};
use crate::normalize::{Frame, NormalizedRep};
use crate::vinberg::Chamber;

/// Denominator used when rounding the Perron vector to a rational base point.
const BASE_DENOMINATOR: i64 = 1 << 20;

fn to_dvec(v: &[Rational]) -> DVector<f64> {
    DVector::from_iterator(v.len(), v.iter().map(to_f64))
}

/// The Perron vector rounded to a rational with a power-of-two denominator.
pub fn rational_base(perron: &PerronData) -> Vec<Rational> {
    perron
        .v_pf
        .iter()
        .map(|&x| {
            rat(
                (x * BASE_DENOMINATOR as f64).round() as i64,
                BASE_DENOMINATOR,
            )
        })
        .collect()
}

#[derive(Debug, Clone)]
pub struct OrbitPoint {
    pub word: NormalForm,
    /// `ρ_t(w) v` before normalization, exact.
    pub exact: Vec<Rational>,
    /// Positive integer multiple `a` of `exact`, `b = qM_t a` with `q` the
    /// denominator of `t`, and `a·b`; pairings of these decide causal type
    /// without rational normalization.
    scaled: Vec<BigInt>,
    scaled_paired: Vec<BigInt>,
    scaled_norm: BigInt,
    pub point: ProjectivePoint,
    pub lift: TimelikeLift,
}

/// `ρ•_t(w)·[ι_t v]` for every `w` of length at most `max_length`, in ShortLex order.
#[derive(Debug, Clone)]
pub struct OrbitSample {
    pub t: Rational,
    pub base_exact: Vec<Rational>,
    pub base: ProjectivePoint,
    pub max_length: usize,
    pub points: Vec<OrbitPoint>,
}

impl OrbitSample {
    pub fn build(
        graph: &CoxeterGraph,
        rep: &NormalizedRep,
        base: &[Rational],
        max_length: usize,
    ) -> Result<Self> {
        let form = rep.form();
        let budget = 1 << 22;
        let t = rep.t();
        let gram: Vec<Vec<BigInt>> = (0..rep.rep.k())
            .map(|i| {
                rep.rep
                    .m_t
                    .row(i)
                    .iter()
                    .map(|m| (m * t.denom()).to_integer())
                    .collect()
            })
            .collect();
        let words: Vec<NormalForm> = graph
            .enumerate_ball(max_length, budget)?
            .into_iter()
            .flatten()
            .collect();
        let points = words
            .into_par_iter()
            .map(|word| {
                let exact = rep.rep.act(&word.to_word(), base);
                let scaled = integer_multiple(&exact);
                let scaled_paired: Vec<BigInt> = (0..scaled.len())
                    .map(|i| scaled.iter().zip(&gram[i]).map(|(a, m)| a * m).sum())
                    .collect();
                let scaled_norm = scaled.iter().zip(&scaled_paired).map(|(a, b)| a * b).sum();
                let point = ProjectivePoint(rep.push(&to_dvec(&exact)));
                let lift = form.lift(&point)?;
                Ok(OrbitPoint {
                    word,
                    exact,
                    scaled,
                    scaled_paired,
                    scaled_norm,
                    point,
                    lift,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            t: rep.t().clone(),
            base_exact: base.to_vec(),
            base: points[0].point.clone(),
            max_length,
            points,
        })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Indices of the points of word length exactly `length`.
    pub fn sphere(&self, length: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.points.len()).filter(move |&i| self.points[i].word.len() == length)
    }

    pub fn index_of(&self, word: &NormalForm) -> Option<usize> {
        self.points.binary_search_by(|p| p.word.cmp(word)).ok()
    }

    /// Sign of `⟨v,w⟩² − ⟨v,v⟩⟨w,w⟩` in the form `⟨·,·⟩_t`: positive exactly
    /// for spacelike pairs.
    pub fn exact_discriminant_sign(&self, i: usize, j: usize) -> std::cmp::Ordering {
        let (a, b) = (&self.points[i], &self.points[j]);
        let ab: BigInt = a
            .scaled
            .iter()
            .zip(&b.scaled_paired)
            .map(|(x, y)| x * y)
            .sum();
        (&ab * &ab - &a.scaled_norm * &b.scaled_norm)
            .sign()
            .cmp(&Sign::NoSign)
    }
}

fn integer_multiple(v: &[Rational]) -> Vec<BigInt> {
    let lcm = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    v.iter().map(|x| (x * &lcm).to_integer()).collect()
}

/// `f_{t,s} = ι_s ∘ Φ_{t,s} ∘ ι_t⁻¹`, with `Φ_{t,s} = ρ_s(w) M_s⁻¹M_t ρ_t(w)⁻¹`
/// on the translate of the chamber by `w`.
#[derive(Debug, Clone)]
pub struct EquivariantMap {
    pub source: NormalizedRep,
    pub target: NormalizedRep,
    chamber: Chamber,
    transfer: RationalMatrix,
    transfer_f64: DMatrix<f64>,
    budget: usize,
}

impl EquivariantMap {
    pub fn new(
        fam: &GramFamily,
        frame: &Frame,
        t: &Rational,
        s: &Rational,
        budget: usize,
    ) -> Result<Self> {
        let source = NormalizedRep::new(fam, frame, t)?;
        let target = NormalizedRep::new(fam, frame, s)?;
        if source.norm.signature != target.norm.signature {
            return Err(Error::SignatureMismatch(
                source.norm.signature,
                target.norm.signature,
            ));
        }
        let m_s_inv = target
            .rep
            .m_t
            .inverse()
            .ok_or_else(|| Error::Singular(format_rational(s)))?;
        let transfer = &m_s_inv * &source.rep.m_t;
        Ok(Self {
            chamber: Chamber::new(fam, t),
            source,
            target,
            transfer_f64: transfer.to_f64(),
            transfer,
            budget,
        })
    }

    pub fn transfer(&self) -> &RationalMatrix {
        &self.transfer
    }

    /// Reduces in floats, then applies `ρ_s(w) M_s⁻¹M_t` to the chamber
    /// representative. Multiplying by the exact composite `Φ_{t,s}` instead
    /// loses far more to cancellation, since its entries grow like
    /// `‖ρ_s(w)‖·‖ρ_t(w)⁻¹‖`.
    pub fn apply(&self, x: &ProjectivePoint) -> Result<ProjectivePoint> {
        let v = self.source.pull(&x.0);
        let (w, v0) = self.chamber.reduce_f64(v.as_slice(), self.budget)?;
        let moved = &self.transfer_f64 * DVector::from_vec(v0);
        let image = self.target.rep.represent(&w).to_f64() * moved;
        Ok(ProjectivePoint(self.target.push(&image)))
    }

    /// Images of the orbit points: the orbit of `M_s⁻¹M_t v` under `ρ•_s`,
    /// exact up to the final `ι_s`.
    pub fn apply_orbit(&self, graph: &CoxeterGraph, orbit: &OrbitSample) -> Result<OrbitSample> {
        let base = self.transfer.mul_vec(&orbit.base_exact);
        OrbitSample::build(graph, &self.target, &base, orbit.max_length)
    }
}

/// `Z_t(x) = d/ds f_{t,s}(x)` at `s = t`.
#[derive(Debug, Clone)]
pub struct VectorField {
    pub rep: NormalizedRep,
    chamber: Chamber,
    /// `−M_t⁻¹N = d/ds (M_s⁻¹M_t)` at `s = t`.
    descent: RationalMatrix,
    descent_f64: DMatrix<f64>,
    budget: usize,
}

impl VectorField {
    pub fn new(fam: &GramFamily, frame: &Frame, t: &Rational, budget: usize) -> Result<Self> {
        let rep = NormalizedRep::new(fam, frame, t)?;
        let descent = rep.drift().scale(&rat(-2, 1));
        Ok(Self {
            chamber: Chamber::new(fam, t),
            rep,
            descent_f64: descent.to_f64(),
            descent,
            budget,
        })
    }

    pub fn form(&self) -> StandardForm {
        self.rep.form()
    }

    fn assemble(&self, position: &DVector<f64>, velocity_frame: &DVector<f64>) -> Result<Tangent> {
        let form = self.form();
        let f = self.rep.push(position);
        let df = &self.rep.norm.iota_dot * position + self.rep.push(velocity_frame);
        let q = form.pairing(&f, &f);
        if !(q < 0.0) {
            return Err(Error::NotTimelike);
        }
        let scale = (-q).sqrt();
        let lift = TimelikeLift(f / scale);
        Ok(form.project(&lift, &(df / scale)))
    }

    pub fn at(&self, x: &ProjectivePoint) -> Result<Tangent> {
        let v = self.rep.pull(&x.0);
        let (w, v0) = self.chamber.reduce_f64(v.as_slice(), self.budget)?;
        let v0 = DVector::from_vec(v0);
        let data = self.rep.word_data(&w);
        let position = &data.value * &v0;
        let velocity = &data.derivative * &v0 + &data.value * (&self.descent_f64 * &v0);
        self.assemble(&position, &velocity)
    }

    /// The field along an orbit, with every step before `ι_t` exact.
    pub fn along_orbit(&self, orbit: &OrbitSample) -> Result<Vec<Tangent>> {
        let start = self.descent.mul_vec(&orbit.base_exact);
        orbit
            .points
            .par_iter()
            .map(|p| {
                let (v, d) = self
                    .rep
                    .rep
                    .act_dual(&p.word.to_word(), &orbit.base_exact, &start);
                self.assemble(&to_dvec(&v), &to_dvec(&d))
            })
            .collect()
    }
}
