//! Backtracking on the step length.

use crate::error::{Error, Result};
use crate::solver::linear::{dot, norm2};

#[derive(Debug, Clone)]
pub struct Accepted<T> {
    pub beta: f64,
    pub residual: Vec<f64>,
    pub payload: T,
    /// Step lengths tried and rejected before `beta`.
    pub rejected: usize,
}

/// Halves `β` from `1` until the trial residual satisfies both
/// `‖F₊‖₂ ≤ ‖F‖₂` and `F · F₊ ≥ 0`.
///
/// `eval(β)` returns the residual at the trial point together with anything the
/// caller wants to keep; an error there counts as a rejection.
pub fn line_search<T, E>(
    f0: &[f64],
    factor: f64,
    min_step: f64,
    mut eval: E,
) -> Result<Accepted<T>>
where
    E: FnMut(f64) -> Result<(Vec<f64>, T)>,
{
    let n0 = norm2(f0);
    let mut beta = 1.0;
    let mut rejected = 0;
    while beta >= min_step {
        match eval(beta) {
            Ok((residual, payload)) => {
                if norm2(&residual) <= n0 && dot(f0, &residual) >= 0.0 {
                    return Ok(Accepted {
                        beta,
                        residual,
                        payload,
                        rejected,
                    });
                }
            }
            Err(e) => log::trace!("trial step {beta:e} failed: {e}"),
        }
        rejected += 1;
        beta *= factor;
    }
    Err(Error::LineSearchStalled(beta / factor))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_step_on_linear_residual() {
        // F(x) = x, d = -x
        let x = 0.8;
        let acc = line_search(&[x], 0.5, 1e-16, |b| Ok((vec![x - b * x], ()))).unwrap();
        assert_eq!(acc.beta, 1.0);
        assert_eq!(acc.residual, vec![0.0]);
    }

    #[test]
    fn growing_norm_is_halved() {
        // F(x) = x, d = -4x: β = 1 gives -3x, β = 1/2 gives -x (sign flip), β = 1/4 gives 0
        let x = 1.0;
        let acc = line_search(&[x], 0.5, 1e-16, |b| Ok((vec![x - 4.0 * b * x], ()))).unwrap();
        assert_eq!(acc.beta, 0.25);
        assert_eq!(acc.rejected, 2);
    }

    #[test]
    fn reversal_with_equal_norm_is_rejected() {
        let acc = line_search(&[1.0], 0.5, 1e-16, |b| {
            let r = if b == 1.0 { -1.0 } else { 0.5 };
            Ok((vec![r], b))
        })
        .unwrap();
        assert_eq!(acc.beta, 0.5);
    }

    #[test]
    fn failed_evaluations_are_rejections() {
        let acc = line_search(&[1.0], 0.5, 1e-16, |b| {
            if b > 0.3 {
                Err(Error::TriangleInequalityViolated(0))
            } else {
                Ok((vec![0.9], ()))
            }
        })
        .unwrap();
        assert_eq!(acc.beta, 0.25);
    }

    #[test]
    fn stalls_below_minimum() {
        let r = line_search(&[1.0], 0.5, 1e-3, |_| Ok((vec![2.0], ())));
        assert!(matches!(r, Err(Error::LineSearchStalled(b)) if b < 2e-3));
    }
}
