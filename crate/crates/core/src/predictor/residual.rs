//! Residual of a truncated branch in the 2-jet equation.
//!
//! Each cell of a branch is a short sum of powers of `t = |λ|` with dyadic
//! exponents. Substituting into the 2-jet gives another such sum; terms whose
//! coefficients cancel to rounding are dropped before the residual is
//! evaluated on a grid and its order fitted.

use std::collections::BTreeMap;

use super::{Branch, CellBranch, Direction, TableRow};
use crate::dynamics::fit::fit_power_law;
use crate::linear::SystemParams;
use crate::network::Network;

const SCALE: f64 = (1u64 << 20) as f64;

/// Exponent key -> (coefficient, sum of magnitudes of contributions).
type Series = BTreeMap<u64, (f64, f64)>;

fn key(e: f64) -> u64 {
    (e * SCALE).round() as u64
}

fn add(s: &mut Series, k: u64, c: f64) {
    let e = s.entry(k).or_insert((0.0, 0.0));
    e.0 += c;
    e.1 += c.abs();
}

fn cell_series(c: &CellBranch) -> Vec<(u64, f64)> {
    let mut v = vec![(key(c.exponent), c.coeff)];
    if let Some(r) = c.second {
        v.push((key(2.0), r));
    }
    v
}

/// Order in `t` expected for the residual of each row.
pub fn next_order(c: &CellBranch) -> f64 {
    match c.row {
        TableRow::Synchronous | TableRow::Transcritical => 3.0,
        TableRow::NonCriticalLinear => 2.0,
        TableRow::NonCriticalAmplified | TableRow::CaseOnePropagated => 2.0 * c.exponent,
        TableRow::SaddleNode | TableRow::AmplifiedSaddleNode | TableRow::CaseOneMaximal => {
            3.0 * c.exponent
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ResidualFit {
    pub cell: usize,
    pub predicted: f64,
    /// Fitted order; infinite when every term cancels.
    pub fitted: f64,
    /// Lowest exponent surviving cancellation.
    pub leading: f64,
}

impl ResidualFit {
    pub fn pass(&self, slack: f64) -> bool {
        self.fitted >= self.predicted - slack
    }
}

/// Geometric grid on `[lo, hi]`.
pub fn geometric_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp())
        .collect()
}

/// Residual series of every cell for `branch`.
fn residual_series(net: &Network, params: &SystemParams, branch: &Branch) -> Vec<Series> {
    let p = match branch.direction {
        Direction::Negative => params.negated_lambda(),
        _ => params.clone(),
    };
    let x: Vec<Vec<(u64, f64)>> = branch.cells.iter().map(cell_series).collect();
    let one = key(1.0);
    (0..net.cells())
        .map(|cell| {
            let y: Vec<&Vec<(u64, f64)>> = net.maps().iter().map(|m| &x[m[cell]]).collect();
            let mut s = Series::new();
            add(&mut s, one, p.ell);
            add(&mut s, key(2.0), p.flamlam);
            for (i, yi) in y.iter().enumerate() {
                for &(k, c) in yi.iter() {
                    add(&mut s, k, p.a[i] * c);
                    add(&mut s, k + one, p.flam[i] * c);
                }
                for (j, yj) in y.iter().enumerate() {
                    let f = p.f2[i][j];
                    if f == 0.0 {
                        continue;
                    }
                    for &(ki, ci) in yi.iter() {
                        for &(kj, cj) in yj.iter() {
                            add(&mut s, ki + kj, f * ci * cj);
                        }
                    }
                }
            }
            s.retain(|_, (c, mag)| c.abs() > 1e-12 * *mag);
            s
        })
        .collect()
}

/// Fits the residual order of each cell over `grid` (values of `t`).
pub fn residual_orders(
    net: &Network,
    params: &SystemParams,
    branch: &Branch,
    grid: &[f64],
) -> Vec<ResidualFit> {
    residual_series(net, params, branch)
        .into_iter()
        .enumerate()
        .map(|(cell, s)| {
            let predicted = next_order(&branch.cells[cell]);
            let Some((&k0, _)) = s.iter().next() else {
                return ResidualFit {
                    cell,
                    predicted,
                    fitted: f64::INFINITY,
                    leading: f64::INFINITY,
                };
            };
            let points: Vec<(f64, f64)> = grid
                .iter()
                .map(|&t| {
                    let r: f64 = s.iter().map(|(&k, &(c, _))| c * t.powf(k as f64 / SCALE)).sum();
                    (t, r.abs())
                })
                .collect();
            let fitted = fit_power_law(&points).map_or(f64::NAN, |f| f.exponent);
            ResidualFit {
                cell,
                predicted,
                fitted,
                leading: k0 as f64 / SCALE,
            }
        })
        .collect()
}
