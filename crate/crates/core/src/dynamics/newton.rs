//! Damped Newton iteration for steady states.

use nalgebra::DMatrix;
use thiserror::Error;

use super::field::VectorField;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NewtonError {
    #[error("no convergence after {iterations} iterations, residual {residual:e}")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("singular Jacobian at iteration {0}")]
    SingularJacobian(usize),
}

const MAX_HALVINGS: usize = 60;
/// Smallest pivot accepted, relative to the largest.
const PIVOT_GUARD: f64 = 1e-14;

fn sup(v: &[f64]) -> f64 {
    v.iter().fold(0.0_f64, |m, x| m.max(x.abs()))
}

/// Solves `γ_f(x, λ) = 0` from `seed` until the sup-norm residual is at most `tol`.
pub fn newton_refine(
    field: &VectorField,
    seed: &[f64],
    lambda: f64,
    tol: f64,
    max_iter: usize,
) -> Result<Vec<f64>, NewtonError> {
    let frozen = field.at(lambda);
    let n = seed.len();
    let mut x = seed.to_vec();
    let mut fx = vec![0.0; n];
    frozen.eval(&x, &mut fx);
    let mut r = sup(&fx);
    let mut trial = vec![0.0; n];
    let mut ft = vec![0.0; n];
    for it in 0..max_iter {
        if r <= tol {
            return Ok(x);
        }
        let j = frozen.jacobian(&x);
        let lu = DMatrix::from_row_slice(n, n, j.as_slice()).lu();
        let u = lu.u();
        let pivots: Vec<f64> = (0..n).map(|i| u[(i, i)].abs()).collect();
        let big = pivots.iter().fold(0.0_f64, |m, v| m.max(*v));
        if big == 0.0 || pivots.iter().any(|&v| v <= PIVOT_GUARD * big) {
            return Err(NewtonError::SingularJacobian(it));
        }
        let rhs = nalgebra::DVector::from_iterator(n, fx.iter().map(|v| -v));
        let step = lu.solve(&rhs).ok_or(NewtonError::SingularJacobian(it))?;
        let mut alpha = 1.0;
        let mut accepted = false;
        for _ in 0..=MAX_HALVINGS {
            for i in 0..n {
                trial[i] = x[i] + alpha * step[i];
            }
            frozen.eval(&trial, &mut ft);
            let rt = sup(&ft);
            if rt < r {
                x.copy_from_slice(&trial);
                fx.copy_from_slice(&ft);
                r = rt;
                accepted = true;
                break;
            }
            alpha *= 0.5;
        }
        if !accepted {
            return Err(NewtonError::NoConvergence {
                iterations: it + 1,
                residual: r,
            });
        }
    }
    if r <= tol {
        Ok(x)
    } else {
        Err(NewtonError::NoConvergence {
            iterations: max_iter,
            residual: r,
        })
    }
}
