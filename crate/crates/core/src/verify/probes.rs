//! Escape, quadric-expansion and properness probes. Each one certifies a
//! sampled necessary condition and reports witnesses, never a proof.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::orbit::OrbitSample;
use super::Verdict;
use crate::coxeter::{CoxeterGraph, NormalForm, Word};
use crate::error::Result;
use crate::exact::{to_f64, Rational};
use crate::gram::GramFamily;
use crate::hpq::{exact_top_eigenvalue, mu1, LieElement, PairClass, StandardForm, Tangent};
use crate::normalize::NormalizedRep;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EscapeWitness {
    pub word: String,
    pub class: PairClass,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EscapeReport {
    pub points_checked: usize,
    pub witnesses: Vec<EscapeWitness>,
    /// Minimum of `d(base, point)` over each sphere, from length 1.
    pub min_distance_by_length: Vec<f64>,
    /// Smallest length from which the minima never decrease.
    pub nondecreasing_from: usize,
    pub verdict: Verdict,
}

/// Every point past length 1 must be spacelike from the base (decided
/// exactly), and the sphere minima of the distance must eventually grow.
pub fn spacelike_escape_check(form: &StandardForm, orbit: &OrbitSample) -> EscapeReport {
    let mut witnesses = Vec::new();
    let mut minima = vec![f64::INFINITY; orbit.max_length];
    let base = &orbit.points[0].lift;
    let mut checked = 0;
    for (i, p) in orbit.points.iter().enumerate().skip(1) {
        let sign = orbit.exact_discriminant_sign(0, i);
        let len = p.word.len();
        if len >= 2 {
            checked += 1;
            if sign != Ordering::Greater {
                let class = if sign == Ordering::Equal {
                    PairClass::Lightlike
                } else {
                    PairClass::Timelike
                };
                witnesses.push(EscapeWitness {
                    word: p.word.to_string(),
                    class,
                });
            }
        }
        let d = if sign == Ordering::Greater {
            form.pairing(&base.0, &p.lift.0).abs().max(1.0).acosh()
        } else {
            0.0
        };
        minima[len - 1] = minima[len - 1].min(d);
    }
    let mut from = minima.len().max(1);
    while from > 1 && minima[from - 2] <= minima[from - 1] {
        from -= 1;
    }
    let grows = minima.len() >= 3 && from + 2 <= minima.len();
    let verdict = if witnesses.is_empty() && grows {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    EscapeReport {
        points_checked: checked,
        witnesses,
        min_distance_by_length: minima,
        nondecreasing_from: from,
        verdict,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadricReport {
    pub samples: usize,
    /// Largest `|⟨w,Nw⟩ + ⟨w,w⟩/t|` over unit null vectors `w`.
    pub max_identity_residual: f64,
    /// Smallest `⟨w,Nw⟩ − |1/t|` over the samples.
    pub min_positivity_margin: f64,
    pub verdict: Verdict,
}

/// Samples unit vectors on the cone `⟨w, M_t w⟩ = 0` along random 2-planes.
pub fn quadric_expansion_check(
    fam: &GramFamily,
    t: &Rational,
    samples: usize,
    seed: u64,
) -> QuadricReport {
    let sig = fam.signature_at(t);
    let vacuous = QuadricReport {
        samples: 0,
        max_identity_residual: 0.0,
        min_positivity_margin: f64::INFINITY,
        verdict: Verdict::Vacuous,
    };
    if sig.positive == 0 || sig.negative == 0 {
        return vacuous;
    }
    let k = fam.k();
    let tf = to_f64(t);
    let m = fam.gram_matrix(t).to_f64();
    let n = fam.n().to_f64();
    let q = |x: &DVector<f64>| x.dot(&(&m * x));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut residual = 0.0f64;
    let mut margin = f64::INFINITY;
    let mut done = 0;
    while done < samples {
        let a = DVector::from_fn(k, |_, _| rng.gen_range(-1.0..1.0));
        let b = DVector::from_fn(k, |_, _| rng.gen_range(-1.0..1.0));
        let (qa, qb) = (q(&a), q(&b));
        if qa * qb >= 0.0 {
            continue;
        }
        // q(a + λb) = qa + 2λ⟨a,b⟩ + λ²qb has a real root since qa·qb < 0.
        let ab = a.dot(&(&m * &b));
        let disc = (ab * ab - qa * qb).sqrt();
        let lambda = if ab >= 0.0 {
            -qa / (ab + disc)
        } else {
            (disc - ab) / qb
        };
        let mut w = &a + &b * lambda;
        w /= w.norm();
        // One Newton step along b restores the cone to rounding error.
        let grad = 2.0 * w.dot(&(&m * &b));
        if grad != 0.0 {
            w -= &b * (q(&w) / grad);
            w /= w.norm();
        }
        let nw = w.dot(&(&n * &w));
        residual = residual.max((nw + w.dot(&w) / tf).abs());
        margin = margin.min(nw - (1.0 / tf).abs());
        done += 1;
    }
    let verdict = if residual < 1e-10 && margin >= -1e-9 * (1.0 / tf).abs() {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    QuadricReport {
        samples,
        max_identity_residual: residual,
        min_positivity_margin: margin,
        verdict,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupProbePoint {
    pub word: String,
    pub mu_t: f64,
    pub mu_s: f64,
    pub lambda_t: f64,
    pub lambda_s: f64,
    pub proximal: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupProbe {
    pub words: usize,
    /// Least-squares slope of `μ₁(ρ•_s)` against `μ₁(ρ•_t)`, and the intercept.
    pub mu_slope: f64,
    pub mu_intercept: f64,
    pub proximal_count: usize,
    /// Largest `λ₁(ρ•_s(γ)) − λ₁(ρ•_t(γ))` over proximal `γ`.
    pub max_lambda_excess: f64,
    #[serde(skip)]
    pub points: Vec<GroupProbePoint>,
    pub verdict: Verdict,
}

const PROXIMAL_GAP: f64 = 1e-6;
const LAMBDA_TOL: f64 = 1e-6;

/// `μ₁` and `λ₁` of `ρ•_t(γ)` against `ρ•_s(γ)` over the given words.
pub fn properness_probe_group(
    rep_t: &NormalizedRep,
    rep_s: &NormalizedRep,
    words: &[NormalForm],
) -> Result<GroupProbe> {
    let points = words
        .par_iter()
        .map(|w| {
            let word = w.to_word();
            let (exact_t, exact_s) = (rep_t.rep.represent(&word), rep_s.rep.represent(&word));
            let gt = &rep_t.norm.iota * exact_t.to_f64() * &rep_t.norm.iota_inv;
            let gs = &rep_s.norm.iota * exact_s.to_f64() * &rep_s.norm.iota_inv;
            let top_t = exact_top_eigenvalue(&exact_t, PROXIMAL_GAP)?;
            let top_s = exact_top_eigenvalue(&exact_s, PROXIMAL_GAP)?;
            Ok(GroupProbePoint {
                word: w.to_string(),
                mu_t: mu1(&gt),
                mu_s: mu1(&gs),
                lambda_t: top_t.lambda1,
                lambda_s: top_s.lambda1,
                proximal: top_t.proximal,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.mu_t).sum::<f64>() / n;
    let my = points.iter().map(|p| p.mu_s).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.mu_t - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.mu_t - mx) * (p.mu_s - my)).sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let proximal: Vec<&GroupProbePoint> = points.iter().filter(|p| p.proximal).collect();
    let excess = proximal
        .iter()
        .map(|p| p.lambda_s - p.lambda_t)
        .fold(f64::NEG_INFINITY, f64::max);
    let verdict = if slope < 1.0
        && proximal
            .iter()
            .all(|p| p.lambda_s <= p.lambda_t + LAMBDA_TOL)
    {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    Ok(GroupProbe {
        words: points.len(),
        mu_slope: slope,
        mu_intercept: my - slope * mx,
        proximal_count: proximal.len(),
        max_lambda_excess: excess,
        points,
        verdict,
    })
}

/// Random elements of `o(p, q+1)` with basis coefficients in `[−scale, scale]`.
pub fn random_lie_elements(
    form: &StandardForm,
    count: usize,
    scale: f64,
    seed: u64,
) -> Vec<LieElement> {
    let basis = form.lie_basis();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let mut y = DMatrix::zeros(form.dim(), form.dim());
            for b in &basis {
                y += &b.0 * rng.gen_range(-scale..scale);
            }
            LieElement(y)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AffineProbeEntry {
    pub argmin: Vec<String>,
    pub argmin_length: usize,
    pub min_value: f64,
    pub interior: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AffineProbe {
    pub entries: Vec<AffineProbeEntry>,
    pub equivariance_checked: usize,
    /// Translates whose predicted argmin left the sample.
    pub equivariance_skipped: usize,
    pub equivariance_failures: Vec<String>,
    pub verdict: Verdict,
}

/// Relative width of the band of values treated as ties for the minimum.
const ARGMIN_TIE: f64 = 1e-9;

struct Transported {
    /// `ρ•(w)⁻¹` applied to `Z(x_w)`.
    field: Vec<DVector<f64>>,
    inverse: Vec<DMatrix<f64>>,
}

fn transport(rep: &NormalizedRep, orbit: &OrbitSample, field: &[Tangent]) -> Transported {
    let (field, inverse) = orbit
        .points
        .par_iter()
        .zip(field)
        .map(|(p, z)| {
            let g_inv = rep.conjugated(&p.word.to_word().inverse());
            (&g_inv * &z.vec, g_inv)
        })
        .unzip();
    Transported { field, inverse }
}

/// Indices minimizing `‖ρ•(w)⁻¹(Z − Y)(x_w)‖` over the orbit.
fn argmin(orbit: &OrbitSample, tr: &Transported, y: &LieElement) -> (Vec<usize>, f64) {
    let values: Vec<f64> = (0..orbit.len())
        .into_par_iter()
        .map(|i| {
            let killing = &y.0 * &orbit.points[i].lift.0;
            (&tr.field[i] - &tr.inverse[i] * killing).norm()
        })
        .collect();
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let band = min * (1.0 + ARGMIN_TIE) + 1e-300;
    (
        (0..values.len()).filter(|&i| values[i] <= band).collect(),
        min,
    )
}

/// Discrete version of the projection `Y ↦ argmin ‖(Z − Y)(x)‖_x` on the
/// orbit, with the norm at `x_w` pulled back to the base by `ρ•(w)⁻¹`.
/// Equivariance is checked on `translates` random elements of length at most 2.
pub fn properness_probe_affine(
    graph: &CoxeterGraph,
    rep: &NormalizedRep,
    orbit: &OrbitSample,
    field: &[Tangent],
    ys: &[LieElement],
    translates: usize,
    seed: u64,
) -> AffineProbe {
    let tr = transport(rep, orbit, field);
    let mut entries = Vec::new();
    let mut checked = 0;
    let mut skipped = 0;
    let mut failures = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for (yi, y) in ys.iter().enumerate() {
        let (set, min) = argmin(orbit, &tr, y);
        let length = set
            .iter()
            .map(|&i| orbit.points[i].word.len())
            .max()
            .unwrap_or(0);
        entries.push(AffineProbeEntry {
            argmin: set
                .iter()
                .map(|&i| orbit.points[i].word.to_string())
                .collect(),
            argmin_length: length,
            min_value: min,
            interior: length < orbit.max_length,
        });
        for _ in 0..translates {
            let len = rng.gen_range(1..=2);
            let gamma = Word((0..len).map(|_| rng.gen_range(0..graph.k())).collect());
            let predicted: Option<BTreeSet<usize>> = set
                .iter()
                .map(|&i| {
                    orbit.index_of(
                        &graph.normal_form(&gamma.concat(&orbit.points[i].word.to_word())),
                    )
                })
                .collect();
            let Some(predicted) = predicted else {
                skipped += 1;
                continue;
            };
            if predicted
                .iter()
                .any(|&i| orbit.points[i].word.len() >= orbit.max_length)
            {
                skipped += 1;
                continue;
            }
            checked += 1;
            let moved = rep.affine_act(&gamma, y);
            let (found, _) = argmin(orbit, &tr, &moved);
            if found.into_iter().collect::<BTreeSet<_>>() != predicted {
                failures.push(format!("Y#{yi} under {gamma}"));
            }
        }
    }
    let verdict = if !failures.is_empty() {
        Verdict::Fail
    } else if entries.iter().any(|e| !e.interior) {
        Verdict::Inconclusive
    } else {
        Verdict::Pass
    };
    AffineProbe {
        entries,
        equivariance_checked: checked,
        equivariance_skipped: skipped,
        equivariance_failures: failures,
        verdict,
    }
}
