//! The right-angled 120-cell in `H^4` from the 120 unit quaternions of the
//! binary icosahedral group, colored through the action of the icosahedral
//! rotation group on the five orthogonal triples of its 2-fold axes.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::field::{QSqrt5, Quaternion};
use super::ColoredPolytope;
use crate::error::{Error, Result};
use crate::exact::int;

/// Permutations of four coordinates with their parity.
fn permutations4() -> Vec<([usize; 4], bool)> {
    let mut out = Vec::new();
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let perm = [a, b, c, d];
                    if BTreeSet::from(perm).len() == 4 {
                        let inversions = (0..4)
                            .flat_map(|i| (i + 1..4).map(move |j| (i, j)))
                            .filter(|&(i, j)| perm[i] > perm[j])
                            .count();
                        out.push((perm, inversions % 2 == 0));
                    }
                }
            }
        }
    }
    out
}

/// The 120 unit quaternions, sorted.
pub(crate) fn icosians() -> Vec<Quaternion> {
    let q = |x: i64| QSqrt5::rational(int(x));
    let half = |x: QSqrt5| x.halve();
    let seeds = [
        [q(0), q(0), q(0), q(1)],
        [half(q(1)), half(q(1)), half(q(1)), half(q(1))],
        [
            q(0),
            half(QSqrt5::phi_inv()),
            half(q(1)),
            half(QSqrt5::phi()),
        ],
    ];
    let mut set = BTreeSet::new();
    for seed in &seeds {
        for (perm, even) in permutations4() {
            if !even {
                continue;
            }
            for signs in 0..16u32 {
                let coords: [QSqrt5; 4] = std::array::from_fn(|i| {
                    let x = seed[perm[i]].clone();
                    if signs >> i & 1 == 1 {
                        -x
                    } else {
                        x
                    }
                });
                set.insert(Quaternion(coords));
            }
        }
    }
    set.into_iter().collect()
}

/// Pairs `(i, j)`, `i < j`, with `⟨w_i, w_j⟩ = φ/2` exactly.
fn neighbor_pairs(quats: &[Quaternion]) -> Vec<(usize, usize)> {
    let target = QSqrt5::phi().halve();
    let mut out = Vec::new();
    for i in 0..quats.len() {
        for j in i + 1..quats.len() {
            if quats[i].dot(&quats[j]) == target {
                out.push((i, j));
            }
        }
    }
    out
}

/// Scale `r` with `r²φ/2 = 1`, so that neighboring walls are orthogonal.
pub fn cell120_radius() -> f64 {
    (5f64.sqrt() - 1.0).sqrt()
}

/// Normals `(r w_i, 1)`, exact adjacency, and the 5-coloring.
pub fn build_120cell() -> Result<ColoredPolytope> {
    let quats = icosians();
    let r = cell120_radius();
    let normals = quats
        .iter()
        .map(|w| {
            let mut v: Vec<f64> = w.to_f64().iter().map(|x| r * x).collect();
            v.push(1.0);
            v
        })
        .collect();
    let n = quats.len();
    let mut adjacency = vec![vec![false; n]; n];
    for (i, j) in neighbor_pairs(&quats) {
        adjacency[i][j] = true;
        adjacency[j][i] = true;
    }
    let coloring = color_icosians(&quats)?.coloring;
    let poly = ColoredPolytope {
        p: 4,
        normals,
        adjacency,
        coloring,
    };
    poly.validate()?;
    Ok(poly)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FiveColoring {
    pub coloring: Vec<usize>,
    /// Permutation of the five triples induced by each quaternion.
    pub permutations: Vec<[usize; 5]>,
    pub class_sizes: [usize; 5],
    /// Neighbor pairs whose quotient rotates by `2π/5`, from the exact trace.
    pub order_five_pairs: usize,
    pub neighbor_pairs: usize,
}

/// Recovers the quaternions from the normals of `build_120cell` and colors them.
pub fn five_color_120cell(poly: &ColoredPolytope) -> Result<FiveColoring> {
    let quats = icosians();
    let r = cell120_radius();
    if poly.p != 4 || poly.faces() != quats.len() {
        return Err(Error::Construction("not the 120-cell".into()));
    }
    for (normal, w) in poly.normals.iter().zip(&quats) {
        let expected = w.to_f64();
        if (0..4).any(|i| (normal[i] - r * expected[i]).abs() > 1e-12) {
            return Err(Error::Construction(
                "normals differ from the 120-cell".into(),
            ));
        }
    }
    let mut out = color_icosians(&quats)?;
    let pairs = poly.edges();
    let target_trace = QSqrt5::phi();
    out.neighbor_pairs = pairs.len();
    out.order_five_pairs = pairs
        .iter()
        .filter(|&&(i, j)| rotation_trace(&quats[i].conj().mul(&quats[j])) == target_trace)
        .count();
    Ok(out)
}

/// Trace of `x ↦ q x q̄` on pure quaternions, `4 Re(q)² − 1` for unit `q`.
fn rotation_trace(q: &Quaternion) -> QSqrt5 {
    let re = q.real().clone();
    QSqrt5::rational(int(4)) * re.clone() * re - QSqrt5::rational(int(1))
}

/// Sign-normalizes so the first nonzero coordinate is positive.
fn axis(q: &Quaternion) -> Quaternion {
    match q.0.iter().find(|x| !x.is_zero()).map(QSqrt5::signum) {
        Some(Ordering::Less) => Quaternion(q.0.clone().map(|x| -x)),
        _ => q.clone(),
    }
}

fn color_icosians(quats: &[Quaternion]) -> Result<FiveColoring> {
    let axes: Vec<Quaternion> = quats
        .iter()
        .filter(|q| q.real().is_zero())
        .map(axis)
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    if axes.len() != 15 {
        return Err(Error::Numerical(format!(
            "expected 15 two-fold axes, found {}",
            axes.len()
        )));
    }
    let mut triples: Vec<[usize; 3]> = Vec::new();
    for a in 0..15 {
        for b in a + 1..15 {
            for c in b + 1..15 {
                if [(a, b), (a, c), (b, c)]
                    .iter()
                    .all(|&(x, y)| axes[x].dot(&axes[y]).is_zero())
                {
                    triples.push([a, b, c]);
                }
            }
        }
    }
    if triples.len() != 5 {
        return Err(Error::Numerical(format!(
            "expected 5 orthogonal triples, found {}",
            triples.len()
        )));
    }
    let triple_of = |q: &Quaternion| -> Result<usize> {
        let a = axis(q);
        let idx = axes
            .binary_search(&a)
            .map_err(|_| Error::Numerical("rotated axis left the axis set".into()))?;
        Ok(triples
            .iter()
            .position(|t| t.contains(&idx))
            .expect("each axis lies in a triple"))
    };
    let mut permutations = Vec::with_capacity(quats.len());
    for w in quats {
        let wc = w.conj();
        let mut perm = [0usize; 5];
        for (k, t) in triples.iter().enumerate() {
            let images: Vec<usize> = t
                .iter()
                .map(|&a| triple_of(&w.mul(&axes[a]).mul(&wc)))
                .collect::<Result<_>>()?;
            if images.iter().any(|&x| x != images[0]) {
                return Err(Error::Numerical(
                    "rotation does not preserve the triples".into(),
                ));
            }
            perm[k] = images[0];
        }
        if !is_even(&perm) {
            return Err(Error::Numerical(format!(
                "permutation {perm:?} is not in A5"
            )));
        }
        permutations.push(perm);
    }
    let coloring: Vec<usize> = permutations.iter().map(|p| p[0]).collect();
    let mut class_sizes = [0; 5];
    for &c in &coloring {
        class_sizes[c] += 1;
    }
    Ok(FiveColoring {
        coloring,
        permutations,
        class_sizes,
        order_five_pairs: 0,
        neighbor_pairs: 0,
    })
}

fn is_even(perm: &[usize; 5]) -> bool {
    let mut seen = BTreeSet::new();
    if perm.iter().any(|&x| x >= 5 || !seen.insert(x)) {
        return false;
    }
    let inversions = (0..5)
        .flat_map(|i| (i + 1..5).map(move |j| (i, j)))
        .filter(|&(i, j)| perm[i] > perm[j])
        .count();
    inversions % 2 == 0
}
