//! Forward-Euler sweeps over a grid of `λ`.

use super::field::VectorField;
use super::DynamicsError;
use crate::exec::Execution;

#[derive(Clone, Debug, PartialEq)]
pub struct SweepConfig {
    pub lambda_grid: Vec<f64>,
    pub dt: f64,
    pub t_end: f64,
    pub x0: Vec<f64>,
    pub newton_tol: f64,
    pub newton_max_iter: usize,
    pub fit_window: (f64, f64),
    pub fit_points: usize,
    /// A sweep point stops once some `|x_i|` exceeds this.
    pub divergence: f64,
}

/// `n` evenly spaced values on `[lo, hi]`, endpoints included.
pub fn linear_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    (0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .collect()
}

impl SweepConfig {
    /// Step 0.1 up to time 10000 over 200 values of `λ` in `[-0.1, 0.1]`.
    pub fn paper_protocol(x0: Vec<f64>) -> Self {
        Self {
            lambda_grid: linear_grid(-0.1, 0.1, 200),
            dt: 0.1,
            t_end: 10_000.0,
            x0,
            newton_tol: 1e-12,
            newton_max_iter: 50,
            fit_window: (1e-4, 1e-2),
            fit_points: 50,
            divergence: 1e8,
        }
    }

    pub fn validate(&self) -> Result<(), DynamicsError> {
        let bad = |m: &str| Err(DynamicsError::Config(m.to_string()));
        if !(self.dt > 0.0) || !(self.t_end > 0.0) {
            return bad("dt and t_end must be positive");
        }
        if self.lambda_grid.is_empty() {
            return bad("empty lambda grid");
        }
        if !(self.fit_window.0 > 0.0 && self.fit_window.0 < self.fit_window.1) {
            return bad("fit window must satisfy 0 < min < max");
        }
        if self.fit_points < 5 {
            return bad("at least 5 fit points");
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepPoint {
    pub lambda: f64,
    pub state: Vec<f64>,
    pub diverged: bool,
}

pub fn integrate(field: &VectorField, x0: &[f64], lambda: f64, dt: f64, t_end: f64, guard: f64) -> SweepPoint {
    let frozen = field.at(lambda);
    let mut x = x0.to_vec();
    let mut dx = vec![0.0; x.len()];
    let steps = (t_end / dt).round() as usize;
    for _ in 0..steps {
        frozen.eval(&x, &mut dx);
        let mut blown = false;
        for (xi, di) in x.iter_mut().zip(&dx) {
            *xi += dt * di;
            blown |= !(xi.abs() <= guard);
        }
        if blown {
            return SweepPoint {
                lambda,
                state: x,
                diverged: true,
            };
        }
    }
    SweepPoint {
        lambda,
        state: x,
        diverged: false,
    }
}

pub fn euler_sweep(
    field: &VectorField,
    cfg: &SweepConfig,
    exec: Execution,
) -> Result<Vec<SweepPoint>, DynamicsError> {
    cfg.validate()?;
    if cfg.x0.len() != field.cells() {
        return Err(DynamicsError::Config(format!(
            "x0 has {} entries for {} cells",
            cfg.x0.len(),
            field.cells()
        )));
    }
    Ok(exec.map(&cfg.lambda_grid, |&l| {
        integrate(field, &cfg.x0, l, cfg.dt, cfg.t_end, cfg.divergence)
    }))
}
