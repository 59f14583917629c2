//! Branches when the maximal cells are the critical ones.

use super::catalog::{finish, BranchCatalog};
use super::{Branch, CellBranch, Direction, PredictError, Root, TableRow};
use crate::linear::{classify_criticality, Criticality, Scenario, SystemParams};
use crate::network::Network;

pub fn case1_branches(
    net: &Network,
    params: &SystemParams,
    tol: f64,
) -> Result<BranchCatalog, PredictError> {
    params.check_arity(net)?;
    let crit = classify_criticality(net, params, tol);
    let branches = case1_list(net, params, &crit, tol)?;
    Ok(finish(net, crit, Vec::new(), branches, Vec::new(), Vec::new(), tol))
}

pub(super) fn case1_list(
    net: &Network,
    params: &SystemParams,
    crit: &Criticality,
    tol: f64,
) -> Result<Vec<Branch>, PredictError> {
    if crit.scenario != Scenario::MaximalCritical {
        return Err(PredictError::WrongScenario(crit.scenario));
    }
    let order = net.partial_order().map_err(|_| PredictError::NotFeedforward)?;
    let lt = net.loop_types();
    let sum_f2: f64 = params.f2.iter().flatten().sum();
    let f2_scale = 1.0 + params.f2.iter().flatten().fold(0.0_f64, |m, v| m.max(v.abs()));
    let a_scale = 1.0 + params.a.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    if params.ell.abs() <= tol * a_scale || sum_f2.abs() <= tol * f2_scale {
        return Err(PredictError::DegenerateJet {
            ell: params.ell,
            sum_f2,
        });
    }
    let (direction, ell) = if params.ell / sum_f2 < 0.0 {
        (Direction::Positive, params.ell)
    } else {
        (Direction::Negative, -params.ell)
    };
    let amplitude = (-ell / sum_f2).sqrt();

    let maximal = net.maximal_cells().to_vec();
    let m = maximal.len();
    let n = net.cells();
    let upstream_first: Vec<usize> = order.topo.iter().rev().copied().collect();
    let mut out = Vec::with_capacity(1 << m);
    for pattern in 0..(1usize << m) {
        let signs: Vec<(usize, i8)> = maximal
            .iter()
            .enumerate()
            .map(|(k, &c)| (c, if pattern >> (m - 1 - k) & 1 == 0 { 1 } else { -1 }))
            .collect();
        let mut d = vec![0.0; n];
        for &(c, s) in &signs {
            d[c] = f64::from(s) * amplitude;
        }
        for &p in &upstream_first {
            if maximal.contains(&p) {
                continue;
            }
            let mut num = 0.0;
            let mut den = 0.0;
            for (tau, map) in net.maps().iter().enumerate() {
                if map[p] != p {
                    num += params.a[tau] * d[map[p]];
                    den += params.a[tau];
                }
            }
            d[p] = num / den;
        }
        let synchronous = d.iter().all(|v| (v - d[0]).abs() <= tol * (1.0 + amplitude));
        let cells = (0..n)
            .map(|p| CellBranch {
                mu: 1,
                exponent: 0.5,
                coeff: d[p],
                second: None,
                synchronous,
                row: if lt.sets[p].len() == net.n_inputs() {
                    TableRow::CaseOneMaximal
                } else {
                    TableRow::CaseOnePropagated
                },
                degenerate: d[p].abs() <= tol * (1.0 + amplitude),
            })
            .collect();
        out.push(Branch {
            root: Root::CaseOne,
            direction,
            cells,
            family_id: 0,
            signs,
        });
    }
    Ok(out)
}
