//! Least-norm steps through the Gram matrix `J Jᵀ`.

use nalgebra::DMatrix;
use nalgebra_sparse::factorization::CscCholesky;
use nalgebra_sparse::{CscMatrix, CsrMatrix};

use crate::error::{Error, Result};
use crate::sparse::{csr_mul_vec, csr_tr_mul_vec};

/// Relative residual accepted from an unregularized factorization.
pub const GRAM_RESIDUAL_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct GramSolution {
    pub mu: Vec<f64>,
    /// `‖L μ − rhs‖ / ‖rhs‖`
    pub relative_residual: f64,
    /// Diagonal shift that was needed, `0` if none.
    pub shift: f64,
}

/// Solves `J Jᵀ μ = rhs` by sparse Cholesky. If the factorization fails or is
/// inaccurate, retries once with `regularization · mean(diag)` added to the
/// diagonal; `regularization = 0` disables the retry.
pub fn gram_solve(jacobian: &CsrMatrix<f64>, rhs: &[f64], regularization: f64) -> Result<GramSolution> {
    if rhs.len() != jacobian.nrows() {
        return Err(Error::DimensionMismatch {
            expected: jacobian.nrows(),
            actual: rhs.len(),
        });
    }
    let gram = jacobian * &jacobian.transpose();
    match solve_spd(&gram, rhs, 0.0) {
        Ok(sol) if sol.relative_residual <= GRAM_RESIDUAL_TOLERANCE => Ok(sol),
        first => {
            if regularization <= 0.0 {
                return match first {
                    Ok(sol) => Err(Error::LinearSolveFailed(format!(
                        "relative residual {:.3e} after refinement",
                        sol.relative_residual
                    ))),
                    Err(e) => Err(e),
                };
            }
            let n = gram.nrows().max(1) as f64;
            let mean_diag = gram.diagonal_as_csr().values().iter().sum::<f64>() / n;
            let shift = regularization * mean_diag.max(f64::MIN_POSITIVE);
            log::debug!("gram matrix needs regularization, shift {shift:.3e}");
            solve_spd(&gram, rhs, shift)
        }
    }
}

/// Cholesky solve of `(a + shift·I) x = b` with two steps of iterative refinement
/// against the shifted matrix. The reported residual is against the unshifted one.
pub fn solve_spd(a: &CsrMatrix<f64>, b: &[f64], shift: f64) -> Result<GramSolution> {
    let n = a.nrows();
    let shifted = if shift > 0.0 {
        let mut coo = nalgebra_sparse::CooMatrix::new(n, n);
        for (r, c, &v) in a.triplet_iter() {
            coo.push(r, c, v);
        }
        for i in 0..n {
            coo.push(i, i, shift);
        }
        CscMatrix::from(&coo)
    } else {
        CscMatrix::from(a)
    };
    let chol = CscCholesky::factor(&shifted)
        .map_err(|e| Error::LinearSolveFailed(format!("cholesky: {e:?}")))?;
    let solve = |rhs: &[f64]| -> Vec<f64> {
        let x = chol.solve(&DMatrix::from_column_slice(n, 1, rhs));
        x.column(0).iter().copied().collect()
    };
    let mut x = solve(b);
    let shifted_residual = |x: &[f64]| -> Vec<f64> {
        csr_mul_vec(a, x)
            .iter()
            .zip(x)
            .zip(b)
            .map(|((ax, xi), bi)| bi - ax - shift * xi)
            .collect()
    };
    for _ in 0..2 {
        let r = shifted_residual(&x);
        let dx = solve(&r);
        for (xi, di) in x.iter_mut().zip(dx) {
            *xi += di;
        }
    }
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::LinearSolveFailed("non-finite solution".into()));
    }
    let ax = csr_mul_vec(a, &x);
    let rnorm = norm2(&ax.iter().zip(b).map(|(p, q)| p - q).collect::<Vec<_>>());
    let bnorm = norm2(b);
    let relative_residual = if bnorm > 0.0 { rnorm / bnorm } else { rnorm };
    Ok(GramSolution {
        mu: x,
        relative_residual,
        shift,
    })
}

/// Least-norm solution of `J d = rhs`, i.e. `d = Jᵀ (J Jᵀ)⁻¹ rhs`.
pub fn least_norm_step(jacobian: &CsrMatrix<f64>, rhs: &[f64], regularization: f64) -> Result<(Vec<f64>, GramSolution)> {
    let sol = gram_solve(jacobian, rhs, regularization)?;
    let d = csr_tr_mul_vec(jacobian, &sol.mu);
    Ok((d, sol))
}

pub fn norm2(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

pub fn norm_max(x: &[f64]) -> f64 {
    x.iter().fold(0.0, |m, v| m.max(v.abs()))
}

pub fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sparse::csr_from_triplets;

    #[test]
    fn orthonormal_rows_give_rhs() {
        let j = csr_from_triplets(2, 3, &[(0, 0, 1.0), (1, 2, 1.0)]);
        let f = [0.3, -0.7];
        let rhs: Vec<f64> = f.iter().map(|v| -v).collect();
        let sol = gram_solve(&j, &rhs, 0.0).unwrap();
        assert_eq!(sol.shift, 0.0);
        for (m, r) in sol.mu.iter().zip(&rhs) {
            assert!((m - r).abs() < 1e-15);
        }
    }

    #[test]
    fn rank_deficiency_needs_regularization() {
        // two identical rows
        let j = csr_from_triplets(2, 2, &[(0, 0, 1.0), (0, 1, 1.0), (1, 0, 1.0), (1, 1, 1.0)]);
        let rhs = [1.0, -1.0];
        assert!(matches!(gram_solve(&j, &rhs, 0.0), Err(Error::LinearSolveFailed(_))));
        let sol = gram_solve(&j, &rhs, 1e-12).unwrap();
        assert!(sol.shift > 0.0);
        assert!(sol.mu.iter().all(|v| v.is_finite()));
    }

    #[test]
    fn least_norm_step_solves_and_is_minimal() {
        let j = csr_from_triplets(
            2,
            4,
            &[(0, 0, 1.0), (0, 1, 2.0), (1, 1, -1.0), (1, 2, 0.5), (1, 3, 3.0)],
        );
        let rhs = [1.0, -2.0];
        let (d, sol) = least_norm_step(&j, &rhs, 0.0).unwrap();
        assert!(sol.relative_residual < 1e-12);
        let jd = csr_mul_vec(&j, &d);
        for (a, b) in jd.iter().zip(&rhs) {
            assert!((a - b).abs() < 1e-12);
        }
        // the least-norm step is orthogonal to the null space of J
        let null = [2.0, -1.0, -2.0, 0.0];
        assert!(norm_max(&csr_mul_vec(&j, &null)) < 1e-15);
        assert!(dot(&d, &null).abs() < 1e-12);
    }
}
