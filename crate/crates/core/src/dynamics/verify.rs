//! Numerical confirmation of a branch catalog.

use super::field::VectorField;
use super::fit::{coefficient_at_exponent, fit_power_law};
use super::newton::newton_refine;
use super::poly::ResponsePolynomial;
use super::{DynamicsError, SweepConfig};
use crate::exec::Execution;
use crate::network::Network;
use crate::predictor::residual::geometric_grid;
use crate::predictor::{Branch, BranchCatalog, Direction};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Thresholds {
    pub exp_tol: f64,
    /// Relative coefficient error.
    pub coeff_tol: f64,
    pub r2_min: f64,
    /// Relative spread allowed among synchronous cells.
    pub sync_tol: f64,
    /// Magnitude below which a cell predicted at zero counts as zero.
    pub zero_tol: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Self {
            exp_tol: 0.02,
            coeff_tol: 0.05,
            r2_min: 0.999,
            sync_tol: 1e-8,
            zero_tol: 1e-10,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CellCheck {
    pub cell: usize,
    pub exp_pred: f64,
    pub coeff_pred: f64,
    /// Free log-log slope; NaN when the cell is predicted at zero.
    pub exp_meas: f64,
    /// Coefficient fitted with the exponent held at `exp_pred`.
    pub coeff_meas: f64,
    /// Coefficient from the free fit.
    pub coeff_free: f64,
    pub r2: f64,
    pub zero: bool,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub enum BranchStatus {
    Found,
    NotFound(String),
}

#[derive(Clone, Debug, PartialEq)]
pub struct BranchCheck {
    /// Position in the catalog.
    pub index: usize,
    /// Side of `λ = 0` checked (never `Both`).
    pub side: Direction,
    pub status: BranchStatus,
    pub cells: Vec<CellCheck>,
    pub sync_ok: bool,
    /// `(λ, refined state)` for each grid point that converged.
    pub points: Vec<(f64, Vec<f64>)>,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerificationReport {
    pub branches: Vec<BranchCheck>,
    pub thresholds: Thresholds,
    pub pass: bool,
}

/// Leading coefficients and second-order terms on one side, in `t = |λ|`.
fn side_view(b: &Branch, side: Direction) -> Vec<(f64, f64, f64)> {
    let flip = if b.direction == Direction::Both && side == Direction::Negative {
        -1.0
    } else {
        1.0
    };
    b.cells
        .iter()
        .map(|c| (flip * c.coeff, c.exponent, c.second.unwrap_or(0.0)))
        .collect()
}

fn sides(b: &Branch) -> Vec<Direction> {
    match b.direction {
        Direction::Both => vec![Direction::Positive, Direction::Negative],
        d => vec![d],
    }
}

/// Seeds Newton at the truncated prediction for every branch side and grid
/// point, then fits each cell.
pub fn verify(
    net: &Network,
    poly: &ResponsePolynomial,
    catalog: &BranchCatalog,
    cfg: &SweepConfig,
    thr: &Thresholds,
    filter: Direction,
    exec: Execution,
) -> Result<VerificationReport, DynamicsError> {
    cfg.validate()?;
    let field = VectorField::new(net, poly)?;
    let ts = geometric_grid(cfg.fit_window.0, cfg.fit_window.1, cfg.fit_points);

    let jobs: Vec<(usize, Direction)> = catalog
        .branches
        .iter()
        .enumerate()
        .flat_map(|(i, b)| sides(b).into_iter().map(move |s| (i, s)))
        .filter(|&(_, s)| s.matches(filter))
        .collect();
    let points: Vec<(usize, Direction, usize)> = jobs
        .iter()
        .flat_map(|&(i, s)| (0..ts.len()).map(move |k| (i, s, k)))
        .collect();
    let refined = exec.map(&points, |&(i, s, k)| {
        let view = side_view(&catalog.branches[i], s);
        let t = ts[k];
        let lambda = if s == Direction::Negative { -t } else { t };
        let seed: Vec<f64> = view
            .iter()
            .map(|&(c, e, r)| c * t.powf(e) + r * t * t)
            .collect();
        newton_refine(&field, &seed, lambda, cfg.newton_tol, cfg.newton_max_iter)
    });

    let mut checks = Vec::with_capacity(jobs.len());
    for (j, &(index, side)) in jobs.iter().enumerate() {
        let branch = &catalog.branches[index];
        let view = side_view(branch, side);
        let results = &refined[j * ts.len()..(j + 1) * ts.len()];
        let mut pts = Vec::with_capacity(ts.len());
        let mut failure = None;
        for (k, r) in results.iter().enumerate() {
            match r {
                Ok(x) => pts.push((if side == Direction::Negative { -ts[k] } else { ts[k] }, x.clone())),
                Err(e) if failure.is_none() => failure = Some(format!("t = {:e}: {e}", ts[k])),
                Err(_) => {}
            }
        }
        if failure.is_none() {
            // The smallest t must land near the prediction.
            let x = &pts[0].1;
            let t = ts[0];
            for (p, &(c, e, _)) in view.iter().enumerate() {
                let pred = c * t.powf(e);
                let ok = if c == 0.0 {
                    x[p].abs() <= thr.zero_tol
                } else {
                    (x[p] - pred).abs() <= 0.5 * pred.abs()
                };
                if !ok {
                    failure = Some(format!(
                        "cell {} converged to {:e}, predicted {:e}",
                        p + 1,
                        x[p],
                        pred
                    ));
                    break;
                }
            }
        }
        let sync: Vec<usize> = (0..branch.cells.len())
            .filter(|&p| branch.cells[p].synchronous)
            .collect();
        let sync_ok = pts.iter().all(|(_, x)| {
            let vals: Vec<f64> = sync.iter().map(|&p| x[p]).collect();
            let hi = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let lo = vals.iter().cloned().fold(f64::INFINITY, f64::min);
            vals.is_empty() || hi - lo <= thr.sync_tol * (1.0 + hi.abs().max(lo.abs()))
        });

        let mut cells = Vec::with_capacity(view.len());
        if failure.is_none() {
            for (p, &(c, e, _)) in view.iter().enumerate() {
                let series: Vec<(f64, f64)> = ts.iter().zip(&pts).map(|(&t, (_, x))| (t, x[p])).collect();
                cells.push(check_cell(p, c, e, &series, thr));
            }
        }
        let status = match failure {
            None => BranchStatus::Found,
            Some(m) => BranchStatus::NotFound(m),
        };
        let pass = status == BranchStatus::Found && sync_ok && cells.iter().all(|c| c.pass);
        checks.push(BranchCheck {
            index,
            side,
            status,
            cells,
            sync_ok,
            points: pts,
            pass,
        });
    }
    let pass = checks.iter().all(|c| c.pass);
    Ok(VerificationReport {
        branches: checks,
        thresholds: *thr,
        pass,
    })
}

fn check_cell(cell: usize, coeff: f64, exponent: f64, series: &[(f64, f64)], thr: &Thresholds) -> CellCheck {
    let mut out = CellCheck {
        cell,
        exp_pred: exponent,
        coeff_pred: coeff,
        exp_meas: f64::NAN,
        coeff_meas: f64::NAN,
        coeff_free: f64::NAN,
        r2: f64::NAN,
        zero: coeff == 0.0,
        pass: false,
    };
    if out.zero {
        out.pass = series.iter().all(|&(_, v)| v.abs() <= thr.zero_tol);
        return out;
    }
    let (Ok(fit), Ok(c)) = (fit_power_law(series), coefficient_at_exponent(series, exponent)) else {
        return out;
    };
    out.exp_meas = fit.exponent;
    out.coeff_free = fit.coefficient;
    out.r2 = fit.r2;
    out.coeff_meas = c;
    out.pass = (fit.exponent - exponent).abs() <= thr.exp_tol
        && (c - coeff).abs() <= thr.coeff_tol * coeff.abs()
        && fit.r2 >= thr.r2_min;
    out
}
