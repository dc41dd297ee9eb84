//! Cyclic Jacobi eigensolver for small Hermitian matrices.

use num_complex::Complex64;

use super::ComplexMatrix;
use crate::error::{Error, Result};

/// Input Hermiticity tolerance.
const HERMITIAN_TOL: f64 = 1e-10;
/// Eigenvalues closer than this are treated as degenerate.
pub const DEGENERACY_TOL: f64 = 1e-9;
/// Components below this modulus are skipped when fixing the phase gauge.
const GAUGE_TOL: f64 = 1e-12;
const MAX_SWEEPS: usize = 100;

/// Eigenvalues in ascending order and the unitary whose column `k` is the
/// eigenvector of eigenvalue `k`.
///
/// Each eigenvector is gauge-fixed so that its first component with modulus
/// above `1e-12` is real and positive.
#[derive(Debug, Clone)]
pub struct HermitianEigensystem {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl HermitianEigensystem {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn vector(&self, k: usize) -> Vec<Complex64> {
        self.eigenvectors.column(k)
    }

    /// `V · diag(λ) · V†`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let v = &self.eigenvectors;
        let lambda: Vec<Complex64> =
            self.eigenvalues.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        &(v * &ComplexMatrix::diag(&lambda)) * &v.dagger()
    }
}

/// Diagonalizes a Hermitian matrix with cyclic complex Jacobi rotations.
pub fn eigh(h: &ComplexMatrix) -> Result<HermitianEigensystem> {
    if !h.is_finite() {
        return Err(Error::InvalidOperator("matrix has non-finite entries".into()));
    }
    let herm_err = h.hermiticity_error();
    if herm_err > HERMITIAN_TOL {
        return Err(Error::InvalidOperator(format!(
            "matrix is not Hermitian (max |M - M†| = {herm_err:.3e})"
        )));
    }
    let n = h.dim();
    let mut a = ComplexMatrix::hermitian_part(h);
    let mut v = ComplexMatrix::identity(n);
    let scale = a.max_abs().max(f64::MIN_POSITIVE);

    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[(i, j)].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= 1e-15 * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }

    let mut pairs: Vec<(f64, Vec<Complex64>)> =
        (0..n).map(|k| (a[(k, k)].re, v.column(k))).collect();
    pairs.sort_by(|x, y| x.0.total_cmp(&y.0));

    // Within a degenerate block, order by descending |first component|.
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && (pairs[end].0 - pairs[end - 1].0).abs() < DEGENERACY_TOL {
            end += 1;
        }
        if end - start > 1 {
            pairs[start..end].sort_by(|x, y| y.1[0].norm().total_cmp(&x.1[0].norm()));
        }
        start = end;
    }

    let mut eigenvectors = ComplexMatrix::zeros(n);
    let mut eigenvalues = Vec::with_capacity(n);
    for (k, (lambda, mut col)) in pairs.into_iter().enumerate() {
        fix_gauge(&mut col);
        eigenvectors.set_column(k, &col);
        eigenvalues.push(lambda);
    }
    Ok(HermitianEigensystem { eigenvalues, eigenvectors })
}

/// Multiplies `v` by the phase that makes its first significant component
/// real and positive.
pub(crate) fn fix_gauge(v: &mut [Complex64]) {
    if let Some(lead) = v.iter().copied().find(|z| z.norm() > GAUGE_TOL) {
        let phase = lead.conj() / lead.norm();
        for z in v.iter_mut() {
            *z *= phase;
        }
    }
}

/// Applies `A ← J† A J`, `V ← V J` with `J` chosen to annihilate `A[p][q]`.
fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let r = apq.norm();
    if r == 0.0 {
        return;
    }
    let n = a.dim();
    // phase = e^{-iφ} with apq = r e^{iφ}
    let phase = apq.conj() / r;
    let tau = (a[(q, q)].re - a[(p, p)].re) / (2.0 * r);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;

    // J = [[c, s], [-s·phase, c·phase]] on the (p, q) plane.
    let j_pp = Complex64::new(c, 0.0);
    let j_pq = Complex64::new(s, 0.0);
    let j_qp = phase * (-s);
    let j_qq = phase * c;

    for k in 0..n {
        let (xp, xq) = (a[(k, p)], a[(k, q)]);
        a[(k, p)] = xp * j_pp + xq * j_qp;
        a[(k, q)] = xp * j_pq + xq * j_qq;
    }
    for k in 0..n {
        let (xp, xq) = (a[(p, k)], a[(q, k)]);
        a[(p, k)] = j_pp.conj() * xp + j_qp.conj() * xq;
        a[(q, k)] = j_pq.conj() * xp + j_qq.conj() * xq;
    }
    a[(p, q)] = Complex64::new(0.0, 0.0);
    a[(q, p)] = Complex64::new(0.0, 0.0);
    a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);

    for k in 0..n {
        let (xp, xq) = (v[(k, p)], v[(k, q)]);
        v[(k, p)] = xp * j_pp + xq * j_qp;
        v[(k, q)] = xp * j_pq + xq * j_qq;
    }
}
