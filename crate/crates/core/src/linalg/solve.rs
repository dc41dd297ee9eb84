use num_complex::Complex64;

use super::ComplexMatrix;
use crate::error::{Error, Result};

/// Solves `a · X = b` by LU factorization with partial pivoting.
pub fn solve(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = a.dim();
    if b.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, found: b.dim() });
    }
    let mut lu = a.clone();
    let mut x = b.clone();

    for k in 0..n {
        let pivot = (k..n)
            .max_by(|&i, &j| lu[(i, k)].norm().total_cmp(&lu[(j, k)].norm()))
            .unwrap_or(k);
        if lu[(pivot, k)].norm() == 0.0 {
            return Err(Error::NumericalFailure("singular matrix in linear solve".into()));
        }
        if pivot != k {
            for j in 0..n {
                let tmp = lu[(k, j)];
                lu[(k, j)] = lu[(pivot, j)];
                lu[(pivot, j)] = tmp;
                let tmp = x[(k, j)];
                x[(k, j)] = x[(pivot, j)];
                x[(pivot, j)] = tmp;
            }
        }
        let inv = Complex64::new(1.0, 0.0) / lu[(k, k)];
        for i in (k + 1)..n {
            let factor = lu[(i, k)] * inv;
            if factor == Complex64::new(0.0, 0.0) {
                continue;
            }
            lu[(i, k)] = factor;
            for j in (k + 1)..n {
                let u = lu[(k, j)];
                lu[(i, j)] -= factor * u;
            }
            for j in 0..n {
                let v = x[(k, j)];
                x[(i, j)] -= factor * v;
            }
        }
    }

    for k in (0..n).rev() {
        let inv = Complex64::new(1.0, 0.0) / lu[(k, k)];
        for j in 0..n {
            let mut acc = x[(k, j)];
            for m in (k + 1)..n {
                acc -= lu[(k, m)] * x[(m, j)];
            }
            x[(k, j)] = acc * inv;
        }
    }
    Ok(x)
}
