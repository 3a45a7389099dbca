use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::matrix::RationalMatrix;
use super::Rational;

/// Sylvester inertia of a symmetric form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Inertia {
    pub positive: usize,
    pub negative: usize,
    pub zero: usize,
}

/// Inertia by exact symmetric congruence diagonalization.
///
/// A block with zero diagonal but a nonzero entry `a_ij` is first congruence-
/// transformed by adding row/column `j` to row/column `i`, which turns the
/// 2×2 block `[[0, b], [b, 0]]` into one with pivot `2b`.
pub fn signature(m: &RationalMatrix) -> Inertia {
    assert!(m.is_symmetric(), "signature requires a symmetric matrix");
    let n = m.rows();
    let mut a: Vec<Vec<Rational>> = (0..n).map(|i| m.row(i).to_vec()).collect();
    let mut inertia = Inertia {
        positive: 0,
        negative: 0,
        zero: 0,
    };
    let mut active: Vec<usize> = (0..n).collect();
    while !active.is_empty() {
        let pivot = match active.iter().copied().find(|&i| !a[i][i].is_zero()) {
            Some(p) => p,
            None => {
                let pair = active
                    .iter()
                    .flat_map(|&i| active.iter().map(move |&j| (i, j)))
                    .find(|&(i, j)| i != j && !a[i][j].is_zero());
                let Some((i, j)) = pair else {
                    inertia.zero += active.len();
                    break;
                };
                // row_i += row_j; col_i += col_j
                for c in 0..n {
                    let v = a[j][c].clone();
                    a[i][c] += v;
                }
                for r in 0..n {
                    let v = a[r][j].clone();
                    a[r][i] += v;
                }
                i
            }
        };
        let d = a[pivot][pivot].clone();
        if d.is_positive() {
            inertia.positive += 1;
        } else {
            inertia.negative += 1;
        }
        active.retain(|&x| x != pivot);
        for &r in &active {
            if a[r][pivot].is_zero() {
                continue;
            }
            let factor = &a[r][pivot] / &d;
            for &c in &active {
                let sub = &factor * &a[pivot][c];
                a[r][c] -= sub;
            }
        }
        for &r in &active {
            a[r][pivot] = Rational::zero();
            a[pivot][r] = Rational::zero();
        }
    }
    inertia
}
