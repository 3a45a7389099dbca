use nalgebra::DMatrix;

use crate::error::{Error, Result};

const OFF_DIAGONAL_THRESHOLD: f64 = 1e-14;
const MAX_SWEEPS: usize = 100;

/// Eigenvalues in descending order with matching eigenvector columns.
#[derive(Debug, Clone)]
pub struct SymmetricEigen {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: DMatrix<f64>,
    pub residual: f64,
}

fn off_diagonal_norm(a: &DMatrix<f64>) -> f64 {
    let n = a.nrows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)] * a[(i, j)];
            }
        }
    }
    s.sqrt()
}

/// Cyclic Jacobi diagonalization of a symmetric matrix.
///
/// Each eigenvector is signed so that its largest-magnitude entry (first on ties)
/// is positive, which makes the output reproducible.
pub fn symmetric_eigen(m: &DMatrix<f64>, tol: f64) -> Result<SymmetricEigen> {
    let n = m.nrows();
    if n != m.ncols() {
        return Err(Error::Numerical("eigensolver needs a square matrix".into()));
    }
    let scale = m.norm().max(1.0);
    let asym = (m - m.transpose()).amax();
    if asym > tol * scale {
        return Err(Error::Numerical(format!(
            "matrix not symmetric (defect {asym:e})"
        )));
    }
    let mut a = (m + m.transpose()) * 0.5;
    let mut v = DMatrix::<f64>::identity(n, n);
    for _ in 0..MAX_SWEEPS {
        if off_diagonal_norm(&a) <= OFF_DIAGONAL_THRESHOLD * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].total_cmp(&a[(i, i)]).then(i.cmp(&j)));
    let eigenvalues: Vec<f64> = order.iter().map(|&i| a[(i, i)]).collect();
    let mut vectors = DMatrix::<f64>::zeros(n, n);
    for (col, &i) in order.iter().enumerate() {
        let mut x = v.column(i).clone_owned();
        let lead = (0..n).fold(0, |best, r| {
            if x[r].abs() > x[best].abs() + 1e-12 {
                r
            } else {
                best
            }
        });
        if x[lead] < 0.0 {
            x = -x;
        }
        vectors.set_column(col, &x);
    }
    let lambda = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(eigenvalues.clone()));
    let residual = (m * &vectors - &vectors * lambda)
        .norm()
        .max((vectors.transpose() * &vectors - DMatrix::identity(n, n)).norm());
    if residual > tol * scale {
        return Err(Error::Numerical(format!(
            "eigensolver residual {residual:e} exceeds {tol:e}"
        )));
    }
    Ok(SymmetricEigen {
        eigenvalues,
        eigenvectors: vectors,
        residual,
    })
}
