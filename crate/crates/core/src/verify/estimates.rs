//! Spacelike Lipschitz statistics for the maps `f_{t,s}` and fields `Z_t`.

use std::cmp::Ordering;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::orbit::OrbitSample;
use super::Verdict;
use crate::error::{Error, Result};
use crate::hpq::{PairClass, StandardForm, Tangent};

/// Fewest spacelike pairs a report may be based on.
pub const MIN_SPACELIKE_PAIRS: usize = 10;
pub const DEFAULT_SEPARATION: f64 = 1.0;
const WORST_PAIRS: usize = 5;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairRecord {
    pub a: String,
    pub b: String,
    pub d_before: f64,
    /// `d(f x, f y)` for maps, the first variation for fields.
    pub value: f64,
}

impl PairRecord {
    pub fn ratio(&self) -> f64 {
        self.value / self.d_before
    }
}

/// `value ≤ slope·d_before + intercept` on every recorded pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Fit {
    pub slope: f64,
    pub intercept: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReportKind {
    Map,
    Field,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContractionReport {
    pub kind: ReportKind,
    pub pair_count: usize,
    pub spacelike_count: usize,
    /// Pairs whose float classification disagreed with the exact one; the exact one is used.
    pub misclassified: usize,
    pub separation: f64,
    /// Pairs with `d_before ≥ separation`.
    pub separated_count: usize,
    /// Largest `value / d_before` over separated pairs.
    pub max_ratio: f64,
    /// Largest `value / d_before` over all spacelike pairs.
    pub max_ratio_all: f64,
    pub fitted_constants: Fit,
    pub worst_pairs: Vec<PairRecord>,
    #[serde(skip)]
    pub records: Vec<PairRecord>,
    pub verdict: Verdict,
}

impl ContractionReport {
    /// CSV of the per-pair records.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("a,b,d_before,value\n");
        for r in &self.records {
            out.push_str(&format!(
                "{},{},{:.17e},{:.17e}\n",
                r.a, r.b, r.d_before, r.value
            ));
        }
        out
    }

    /// Largest violation of the fitted inequality, zero or below when the fit holds.
    pub fn fit_violation(&self) -> f64 {
        self.records
            .iter()
            .map(|r| {
                r.value - self.fitted_constants.slope * r.d_before - self.fitted_constants.intercept
            })
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Least-squares slope on the separated pairs, then the smallest intercept
/// that makes the inequality hold on every pair.
fn fit(records: &[PairRecord], separation: f64) -> Fit {
    let far: Vec<&PairRecord> = records
        .iter()
        .filter(|r| r.d_before >= separation)
        .collect();
    let n = far.len() as f64;
    let slope = if far.len() >= 2 {
        let mx = far.iter().map(|r| r.d_before).sum::<f64>() / n;
        let my = far.iter().map(|r| r.value).sum::<f64>() / n;
        let sxx: f64 = far.iter().map(|r| (r.d_before - mx).powi(2)).sum();
        let sxy: f64 = far.iter().map(|r| (r.d_before - mx) * (r.value - my)).sum();
        if sxx > 1e-12 * n {
            sxy / sxx
        } else {
            far.iter()
                .map(|r| r.ratio())
                .fold(f64::NEG_INFINITY, f64::max)
        }
    } else {
        far.first().map_or(0.0, |r| r.ratio())
    };
    let intercept = records
        .iter()
        .map(|r| r.value - slope * r.d_before)
        .fold(f64::NEG_INFINITY, f64::max);
    Fit { slope, intercept }
}

/// Spacelike pairs `(i, j)`, `i < j`, of an orbit, classified exactly.
/// Returns the pairs with their float distance and the number of float
/// classifications the exact test overruled.
fn spacelike_pairs(
    form: &StandardForm,
    orbit: &OrbitSample,
) -> (usize, Vec<(usize, usize, f64)>, usize) {
    let n = orbit.len();
    let rows: Vec<(Vec<(usize, usize, f64)>, usize)> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut found = Vec::new();
            let mut wrong = 0;
            for j in i + 1..n {
                let exact = orbit.exact_discriminant_sign(i, j) == Ordering::Greater;
                let (x, y) = (&orbit.points[i].lift, &orbit.points[j].lift);
                let float = form.classify(x, y) == PairClass::Spacelike;
                if exact != float {
                    wrong += 1;
                }
                if exact {
                    let c = form.pairing(&x.0, &y.0).abs().max(1.0);
                    found.push((i, j, c.acosh()));
                }
            }
            (found, wrong)
        })
        .collect();
    let wrong = rows.iter().map(|r| r.1).sum();
    let pairs = rows.into_iter().flat_map(|r| r.0).collect();
    (n * n.saturating_sub(1) / 2, pairs, wrong)
}

fn summarize(
    kind: ReportKind,
    pair_count: usize,
    misclassified: usize,
    records: Vec<PairRecord>,
    separation: f64,
    passes: impl Fn(f64) -> bool,
) -> Result<ContractionReport> {
    if records.len() < MIN_SPACELIKE_PAIRS {
        return Err(Error::OrbitTooSmall(records.len()));
    }
    let separated: Vec<&PairRecord> = records
        .iter()
        .filter(|r| r.d_before >= separation)
        .collect();
    let max_ratio = separated
        .iter()
        .map(|r| r.ratio())
        .fold(f64::NEG_INFINITY, f64::max);
    let max_ratio_all = records
        .iter()
        .map(|r| r.ratio())
        .fold(f64::NEG_INFINITY, f64::max);
    let mut worst: Vec<PairRecord> = separated.iter().map(|r| (*r).clone()).collect();
    worst.sort_by(|a, b| {
        b.ratio()
            .total_cmp(&a.ratio())
            .then_with(|| (&a.a, &a.b).cmp(&(&b.a, &b.b)))
    });
    worst.truncate(WORST_PAIRS);
    let verdict = if separated.is_empty() {
        Verdict::Inconclusive
    } else if passes(max_ratio) {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    Ok(ContractionReport {
        kind,
        pair_count,
        spacelike_count: records.len(),
        misclassified,
        separation,
        separated_count: separated.len(),
        max_ratio,
        max_ratio_all,
        fitted_constants: fit(&records, separation),
        worst_pairs: worst,
        records,
        verdict,
    })
}

/// Distances of spacelike orbit pairs before and after `f_{t,s}`; `images`
/// must list `f` of each orbit point in the same order. Passes when the
/// largest ratio over separated pairs is below 1.
pub fn estimate_spacelike_lipschitz(
    source: &StandardForm,
    orbit: &OrbitSample,
    target: &StandardForm,
    images: &OrbitSample,
    separation: f64,
) -> Result<ContractionReport> {
    if images.len() != orbit.len() {
        return Err(Error::Construction(
            "image list does not match the orbit".into(),
        ));
    }
    let (pair_count, pairs, mut misclassified) = spacelike_pairs(source, orbit);
    let evaluated: Vec<(PairRecord, bool)> = pairs
        .par_iter()
        .map(|&(i, j, d)| {
            let exact = images.exact_discriminant_sign(i, j) == Ordering::Greater;
            let (x, y) = (&images.points[i].lift, &images.points[j].lift);
            let float = target.classify(x, y) == PairClass::Spacelike;
            let after = if exact {
                target.pairing(&x.0, &y.0).abs().max(1.0).acosh()
            } else {
                0.0
            };
            let record = PairRecord {
                a: orbit.points[i].word.to_string(),
                b: orbit.points[j].word.to_string(),
                d_before: d,
                value: after,
            };
            (record, exact != float)
        })
        .collect();
    misclassified += evaluated.iter().filter(|e| e.1).count();
    let records = evaluated.into_iter().map(|e| e.0).collect();
    summarize(
        ReportKind::Map,
        pair_count,
        misclassified,
        records,
        separation,
        |m| m < 1.0,
    )
}

/// First variation of the pseudo-distance along a field given at each orbit
/// point. Passes ("contracting") when the largest `derivative / d` over
/// separated pairs is negative.
pub fn estimate_vf_lipschitz(
    form: &StandardForm,
    orbit: &OrbitSample,
    field: &[Tangent],
    separation: f64,
) -> Result<ContractionReport> {
    if field.len() != orbit.len() {
        return Err(Error::Construction("field does not match the orbit".into()));
    }
    let (pair_count, pairs, misclassified) = spacelike_pairs(form, orbit);
    // Pairs the float test calls lightlike have no unit direction; they are
    // already counted as misclassified and sit within 1e-4 of the light cone.
    let records = pairs
        .par_iter()
        .filter_map(
            |&(i, j, d)| match form.first_variation(&field[i], &field[j]) {
                Ok(value) => Some(Ok(PairRecord {
                    a: orbit.points[i].word.to_string(),
                    b: orbit.points[j].word.to_string(),
                    d_before: d,
                    value,
                })),
                Err(Error::NotSpacelike) => None,
                Err(e) => Some(Err(e)),
            },
        )
        .collect::<Result<Vec<_>>>()?;
    summarize(
        ReportKind::Field,
        pair_count,
        misclassified,
        records,
        separation,
        |m| m < 0.0,
    )
}
