//! The fundamental simplex `Δ̃_t`, its truncation `Σ̃_t`, and reduction of
//! points into the chamber by reflections.

use nalgebra::DMatrix;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::coxeter::Word;
use crate::error::{Error, Result};
use crate::exact::{Matrix, Rational, RationalMatrix, Ring};
use crate::gram::GramFamily;

/// Relative slack for float pairings.
const FLOAT_EPS: f64 = 1e-12;

pub fn default_budget(length_bound: usize, k: usize) -> usize {
    10 * (length_bound + k)
}

/// Outcome of the reduce-then-check membership test for `Ω_t`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Membership {
    Inside,
    Outside,
    Undetermined,
}

/// A point with the word that carries the chamber onto it, when known.
#[derive(Debug, Clone, PartialEq)]
pub struct ChamberPoint<T> {
    pub coords: Vec<T>,
    pub reducing_word: Option<Word>,
}

/// Membership and reduction for `Δ̃_t` at a fixed `t`, exact and in floats.
#[derive(Debug, Clone)]
pub struct Chamber {
    m: RationalMatrix,
    m_f64: Matrix<f64>,
    scale: f64,
}

impl Chamber {
    pub fn new(fam: &GramFamily, t: &Rational) -> Self {
        let m = fam.gram_matrix(t);
        let dense: DMatrix<f64> = m.to_f64();
        let m_f64 = Matrix::from_fn(m.rows(), m.cols(), |i, j| dense[(i, j)]);
        let scale = dense.amax();
        Self { m, m_f64, scale }
    }

    pub fn k(&self) -> usize {
        self.m.rows()
    }

    /// `(⟨v, e_i⟩_t)_i`, the coordinates of `M_t v`.
    pub fn pairings(&self, v: &[Rational]) -> Vec<Rational> {
        self.m.mul_vec(v)
    }

    pub fn pairings_f64(&self, v: &[f64]) -> Vec<f64> {
        self.m_f64.mul_vec(v)
    }

    fn slack(&self, v: &[f64]) -> f64 {
        FLOAT_EPS * self.scale * v.iter().fold(0.0f64, |a, x| a.max(x.abs()))
    }

    pub fn in_delta(&self, v: &[Rational]) -> bool {
        self.pairings(v).iter().all(|x| !x.is_positive())
    }

    pub fn in_delta_f64(&self, v: &[f64]) -> bool {
        let slack = self.slack(v);
        self.pairings_f64(v).iter().all(|&x| x <= slack)
    }

    pub fn in_sigma(&self, v: &[Rational]) -> bool {
        self.in_delta(v) && v.iter().all(|x| !x.is_negative())
    }

    pub fn in_sigma_f64(&self, v: &[f64]) -> bool {
        let slack = self.slack(v);
        self.in_delta_f64(v) && v.iter().all(|&x| x >= -slack)
    }

    /// Interior of `Σ̃_t`: all pairings and all coordinates strict.
    pub fn in_sigma_interior(&self, v: &[Rational]) -> bool {
        self.pairings(v).iter().all(Signed::is_negative) && v.iter().all(Signed::is_positive)
    }

    pub fn in_sigma_interior_f64(&self, v: &[f64]) -> bool {
        let slack = self.slack(v);
        self.pairings_f64(v).iter().all(|&x| x < -slack) && v.iter().all(|&x| x > slack)
    }

    /// Reflects in the smallest-index violated wall until `v ∈ Δ̃_t`.
    /// Returns the word `w` and `v₀ ∈ Δ̃_t` with `ρ_t(w) v₀ = v`.
    pub fn reduce(&self, v: &[Rational], max_steps: usize) -> Result<(Word, Vec<Rational>)> {
        reduce_with(&self.m, v, max_steps, |x, _| x.is_positive())
    }

    pub fn reduce_f64(&self, v: &[f64], max_steps: usize) -> Result<(Word, Vec<f64>)> {
        reduce_with(&self.m_f64, v, max_steps, |&x, v| x > self.slack(v))
    }

    pub fn locate(&self, v: &[Rational], max_steps: usize) -> ChamberPoint<Rational> {
        let word = self.reduce(v, max_steps).ok().map(|(w, _)| w);
        ChamberPoint {
            coords: v.to_vec(),
            reducing_word: word,
        }
    }

    pub fn in_omega(&self, v: &[Rational], max_steps: usize) -> Membership {
        if !self.pairing(v, v).is_negative() {
            return Membership::Outside;
        }
        match self.reduce(v, max_steps) {
            Ok((_, v0)) if self.in_sigma_interior(&v0) => Membership::Inside,
            Ok(_) => Membership::Outside,
            Err(_) => Membership::Undetermined,
        }
    }

    pub fn in_omega_f64(&self, v: &[f64], max_steps: usize) -> Membership {
        let q: f64 = self.pairings_f64(v).iter().zip(v).map(|(a, b)| a * b).sum();
        if q >= 0.0 {
            return Membership::Outside;
        }
        match self.reduce_f64(v, max_steps) {
            Ok((_, v0)) if self.in_sigma_interior_f64(&v0) => Membership::Inside,
            Ok(_) => Membership::Outside,
            Err(_) => Membership::Undetermined,
        }
    }

    pub fn pairing(&self, v: &[Rational], w: &[Rational]) -> Rational {
        self.pairings(w)
            .iter()
            .zip(v)
            .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
    }
}

fn reduce_with<T: Ring>(
    m: &Matrix<T>,
    v: &[T],
    max_steps: usize,
    violated: impl Fn(&T, &[T]) -> bool,
) -> Result<(Word, Vec<T>)> {
    let mut v = v.to_vec();
    let mut letters = Vec::new();
    loop {
        let pairings = m.mul_vec(&v);
        let Some(i) = (0..v.len()).find(|&i| violated(&pairings[i], &v)) else {
            return Ok((Word(letters), v));
        };
        if letters.len() >= max_steps {
            return Err(Error::ReductionBudget(max_steps));
        }
        let two = T::one() + T::one();
        v[i] = v[i].clone() - two * pairings[i].clone();
        letters.push(i);
    }
}
