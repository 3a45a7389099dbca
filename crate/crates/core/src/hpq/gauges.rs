//! Eigenvalue and singular-value gauges, the Finsler distance on the
//! symmetric space, and orbit growth rates.

use nalgebra::linalg::Schur;
use nalgebra::{Complex, DMatrix};
use serde::{Deserialize, Serialize};

use super::{StandardForm, TimelikeLift, LIGHTLIKE_TOL};
use crate::error::{Error, Result};
use crate::exact::{
    characteristic_polynomial, from_f64, isolate_real_roots, refine_root, to_f64, Rational,
    RationalMatrix,
};
use num_traits::{Signed, Zero};

/// Schur eigenvalue estimates, largest modulus first.
fn schur_eigenvalues(g: &DMatrix<f64>) -> Result<Vec<Complex<f64>>> {
    let scale = g.amax().max(1.0);
    // A looser deflation threshold rescues the rare stalls of the tight one.
    let schur = [1e-15, 1e-13, 1e-11]
        .iter()
        .find_map(|eps| Schur::try_new(g.clone(), eps * scale, 10_000))
        .ok_or_else(|| Error::Numerical("eigenvalue iteration did not converge".into()))?;
    let mut out: Vec<Complex<f64>> = schur.complex_eigenvalues().iter().copied().collect();
    out.sort_by(|a, b| b.norm().total_cmp(&a.norm()));
    Ok(out)
}

/// Relative spread under which eigenvalue estimates are polished together.
const CLUSTER_REL: f64 = 1e-4;

/// Refines a cluster of estimates: block inverse iteration on `g` finds the
/// invariant subspace, whose compression to that subspace is then
/// diagonalized. This is accurate to about `ε‖g‖` for semisimple clusters
/// even when the eigenvectors of `g` are badly conditioned, where Schur on
/// the whole matrix can be off by `1e-5`. Returns `None` when the iteration
/// leaves the cluster.
fn polish_cluster(
    g: &DMatrix<f64>,
    cluster: &[Complex<f64>],
    others: &[Complex<f64>],
) -> Option<Vec<Complex<f64>>> {
    let n = g.nrows();
    let m = cluster.len();
    let center = cluster.iter().sum::<Complex<f64>>() / m as f64;
    let radius = cluster
        .iter()
        .map(|z| (z - center).norm())
        .fold(0.0, f64::max);
    let gc: DMatrix<Complex<f64>> = g.map(|x| Complex::new(x, 0.0));
    let shift = center * Complex::new(1.0 + 1e-12, 1e-12);
    let lu = (&gc - DMatrix::identity(n, n) * shift).lu();
    let mut basis = DMatrix::from_fn(n, m, |i, j| {
        Complex::new(1.0 / (1.0 + i as f64 + (j * n) as f64), 0.1 * j as f64)
    });
    for _ in 0..3 {
        let next = lu.solve(&basis)?;
        if !next.iter().all(|x| x.is_finite()) {
            return None;
        }
        basis = next.qr().q();
    }
    let compressed = basis.adjoint() * &gc * &basis;
    let refined: Vec<Complex<f64>> = Schur::try_new(compressed, 1e-15, 10_000)?
        .eigenvalues()?
        .iter()
        .copied()
        .collect();
    let gap = others
        .iter()
        .map(|o| (o - center).norm())
        .fold(f64::INFINITY, f64::min);
    let band = (gap / 2.0).min(center.norm() / 2.0).max(2.0 * radius);
    refined
        .iter()
        .all(|z| (z - center).norm() <= band)
        .then_some(refined)
}

/// Log-moduli of the eigenvalues, descending.
///
/// Estimates of modulus at least one come from `g`, the rest are matched to
/// reciprocals of those of `g⁻¹`, so that contracting eigenvalues of a large matrix keep
/// their relative accuracy. Clusters of estimates are then polished against `g`.
pub fn eig_log_moduli(g: &DMatrix<f64>) -> Result<Vec<f64>> {
    let up = schur_eigenvalues(g)?;
    let inv = g
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::Numerical("matrix is not invertible".into()))?;
    let down = schur_eigenvalues(&inv)?;
    let n = up.len();
    // Each contracting estimate from `g` is replaced by the nearest unused
    // reciprocal from `g⁻¹`; matching by value keeps conjugate pairs intact.
    let reciprocals: Vec<Complex<f64>> = down.iter().map(|z| z.inv()).collect();
    let mut used = vec![false; n];
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| up[a].norm().total_cmp(&up[b].norm()));
    let mut estimates = up.clone();
    for &i in order.iter().filter(|&&i| up[i].norm() < 1.0) {
        let best = (0..n).filter(|&j| !used[j]).min_by(|&a, &b| {
            (reciprocals[a] - up[i])
                .norm()
                .total_cmp(&(reciprocals[b] - up[i]).norm())
        });
        if let Some(j) = best {
            used[j] = true;
            estimates[i] = reciprocals[j];
        }
    }
    estimates.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    let mut out = Vec::with_capacity(n);
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n
            && estimates[start..end].iter().any(|z| {
                (z - estimates[end]).norm() <= CLUSTER_REL * z.norm().max(estimates[end].norm())
            })
        {
            end += 1;
        }
        let cluster = &estimates[start..end];
        let others: Vec<Complex<f64>> = estimates[..start]
            .iter()
            .chain(&estimates[end..])
            .copied()
            .collect();
        let values = polish_cluster(g, cluster, &others).unwrap_or_else(|| cluster.to_vec());
        out.extend(values.iter().map(|z| z.norm().ln()));
        start = end;
    }
    out.sort_by(|a, b| b.total_cmp(a));
    Ok(out)
}

/// Log of the largest singular value.
pub fn mu1(g: &DMatrix<f64>) -> f64 {
    g.clone().singular_values().max().ln()
}

pub fn is_proximal(g: &DMatrix<f64>, gap_tol: f64) -> Result<bool> {
    let l = eig_log_moduli(g)?;
    Ok(l.len() >= 2 && l[0] - l[1] > gap_tol)
}

/// Relative width to which real eigenvalues are refined; far below any gap
/// or tolerance applied to their logarithms.
const ROOT_REL_WIDTH: f64 = 1e-10;

/// `λ₁` of a rational matrix and whether it is proximal.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralTop {
    pub lambda1: f64,
    pub proximal: bool,
}

/// Like `eig_log_moduli` followed by a gap test, but the real eigenvalues
/// come from exact root isolation of the characteristic polynomial, so
/// repeated eigenvalues of large non-normal matrices, such as conjugates of
/// reflections, are recognized. Only non-real eigenvalues use floats.
pub fn exact_top_eigenvalue(g: &RationalMatrix, gap_tol: f64) -> Result<SpectralTop> {
    let p = characteristic_polynomial(g);
    // Every eigenvalue is bounded by the maximum absolute row sum; rounding
    // up to a power of two keeps the bisection points dyadic.
    let row_sum = (0..g.rows())
        .map(|i| {
            g.row(i)
                .iter()
                .fold(Rational::zero(), |acc, x| acc + x.abs())
        })
        .fold(Rational::zero(), |a, b| a.max(b));
    let bound = from_f64(2f64.powi(to_f64(&row_sum).log2().ceil() as i32 + 1));
    let repeated = p.gcd(&p.derivative());
    let roots: Vec<(f64, bool)> = isolate_real_roots(&p, &-bound.clone(), &bound)
        .iter()
        .map(|iv| {
            let approx = iv.midpoint_f64().abs().max(f64::MIN_POSITIVE);
            let fine = refine_root(&p, iv, &from_f64(approx * ROOT_REL_WIDTH));
            let simple = repeated.degree().unwrap_or(0) == 0
                || isolate_real_roots(&repeated, &fine.lo, &fine.hi).is_empty();
            (fine.midpoint_f64().abs().ln(), simple)
        })
        .collect();
    let scale = g.to_f64();
    let schur = Schur::try_new(scale.clone(), 1e-15 * scale.amax().max(1.0), 10_000)
        .ok_or_else(|| Error::Numerical("eigenvalue iteration did not converge".into()))?;
    let complex: Vec<f64> = schur
        .complex_eigenvalues()
        .iter()
        .filter(|z| z.im.abs() > 1e-8 * z.norm())
        .map(|z| z.norm().ln())
        .collect();
    let top_real = roots.iter().map(|r| r.0).fold(f64::NEG_INFINITY, f64::max);
    let top_complex = complex.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lambda1 = top_real.max(top_complex);
    let proximal = match roots.iter().position(|r| r.0 == top_real) {
        Some(i) => {
            roots[i].1
                && roots
                    .iter()
                    .enumerate()
                    .all(|(j, r)| j == i || r.0 < top_real - gap_tol)
                && top_complex < top_real - gap_tol
        }
        None => false,
    };
    Ok(SpectralTop { lambda1, proximal })
}

/// `μ₁(g⁻¹ g′)`.
pub fn finsler_distance(g: &DMatrix<f64>, g_prime: &DMatrix<f64>) -> Result<f64> {
    let inv = g
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::Numerical("matrix is not invertible".into()))?;
    Ok(mu1(&(inv * g_prime)))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrbitGrowth {
    /// `(1/n) d(y, gⁿ y)` for `n = 1..=n_max`.
    pub rates: Vec<f64>,
    pub lambda1: f64,
    pub sup: f64,
    /// Max rate over `n >= n_max / 2`, where the prefactor has washed out.
    pub tail_sup: f64,
    pub proximal: bool,
    /// `|rate(n_max) − λ₁|`.
    pub final_gap: f64,
}

/// Growth of `d(y, gⁿ y)` for `g ∈ O(p, q+1)`.
///
/// The orbit vector is renormalized each step and its pairing with `ŷ` is
/// tracked in log scale, using `⟨gⁿŷ, gⁿŷ⟩ = −1`.
pub fn orbit_growth_check(
    form: &StandardForm,
    g: &DMatrix<f64>,
    y: &TimelikeLift,
    n_max: usize,
    gap_tol: f64,
) -> Result<OrbitGrowth> {
    let moduli = eig_log_moduli(g)?;
    let lambda1 = moduli[0];
    let proximal = moduli.len() >= 2 && moduli[0] - moduli[1] > gap_tol;
    let mut u = y.0.clone();
    let mut log_scale = 0.0;
    let mut rates = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        u = g * u;
        let s = u.amax();
        u /= s;
        log_scale += s.ln();
        let log_c = form.pairing(&y.0, &u).abs().ln() + log_scale;
        let d = if log_c <= (1.0 + LIGHTLIKE_TOL).ln() {
            0.0
        } else if log_c > 20.0 {
            log_c + (1.0 + (1.0 - (-2.0 * log_c).exp()).sqrt()).ln()
        } else {
            log_c.exp().acosh()
        };
        rates.push(d / n as f64);
    }
    let sup = rates.iter().copied().fold(0.0, f64::max);
    let tail_sup = rates[n_max / 2..].iter().copied().fold(0.0, f64::max);
    let final_gap = rates.last().map_or(0.0, |r| (r - lambda1).abs());
    Ok(OrbitGrowth {
        rates,
        lambda1,
        sup,
        tail_sup,
        proximal,
        final_gap,
    })
}
