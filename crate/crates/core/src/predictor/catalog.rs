//! The full list of branches for one network and jet.

use std::collections::HashMap;

use super::case1::case1_list;
use super::jet::sync_branch;
use super::root::{branches_for_root, Rejection, RootEvaluation};
use super::{Branch, CellBranch, Direction, PredictError, Root, TableRow};
use crate::cellset::CellSet;
use crate::exec::Execution;
use crate::linear::{classify_criticality, Criticality, Scenario, SystemParams, DEFAULT_TOL};
use crate::network::{Network, NetworkError};

/// A root subnetwork that generates no branch on either side.
#[derive(Clone, Debug, PartialEq)]
pub struct RejectedRoot {
    pub root: CellSet,
    pub positive: Option<Rejection>,
    pub negative: Option<Rejection>,
}

/// A root and side whose coefficients could not be fixed.
#[derive(Clone, Debug, PartialEq)]
pub struct DegenerateRoot {
    pub root: CellSet,
    pub direction: Direction,
    pub error: PredictError,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BranchCatalog {
    pub criticality: Criticality,
    /// Root subnetworks considered, in enumeration order.
    pub roots: Vec<CellSet>,
    pub branches: Vec<Branch>,
    pub rejected: Vec<RejectedRoot>,
    pub degenerate: Vec<DegenerateRoot>,
    pub tolerance: f64,
}

impl BranchCatalog {
    /// Number of branch records, each sign choice counted separately.
    pub fn signed_count(&self) -> usize {
        self.branches.len()
    }

    /// Number of families: sign choices that only flip the most downstream
    /// sign-bearing cells together describe one family.
    pub fn family_count(&self) -> usize {
        self.branches.iter().map(|b| b.family_id).max().unwrap_or(0)
    }

    pub fn has_degeneracy(&self) -> bool {
        !self.degenerate.is_empty() || self.branches.iter().any(|b| b.cells.iter().any(|c| c.degenerate))
    }

    /// Branches for a root subnetwork, or for the marker roots.
    pub fn for_root(&self, root: &Root) -> Vec<&Branch> {
        self.branches.iter().filter(|b| &b.root == root).collect()
    }
}

pub fn all_branches(net: &Network, params: &SystemParams) -> Result<BranchCatalog, PredictError> {
    all_branches_with(net, params, DEFAULT_TOL, Execution::default())
}

pub fn all_branches_with(
    net: &Network,
    params: &SystemParams,
    tol: f64,
    exec: Execution,
) -> Result<BranchCatalog, PredictError> {
    params.check_arity(net)?;
    if !net.is_feedforward() {
        return Err(PredictError::NotFeedforward);
    }
    let crit = classify_criticality(net, params, tol);
    match crit.scenario {
        Scenario::MaximalCritical => {
            let branches = case1_list(net, params, &crit, tol)?;
            return Ok(finish(net, crit, Vec::new(), branches, Vec::new(), Vec::new(), tol));
        }
        Scenario::NonMaximalCritical => {}
        other => return Err(PredictError::WrongScenario(other)),
    }

    let sync = sync_branch(params, tol)?;
    let continuation = Branch {
        root: Root::Continuation,
        direction: Direction::Both,
        cells: (0..net.cells())
            .map(|_| CellBranch {
                mu: 0,
                exponent: 1.0,
                coeff: sync.d,
                second: Some(sync.r),
                synchronous: true,
                row: TableRow::Synchronous,
                degenerate: false,
            })
            .collect(),
        family_id: 0,
        signs: Vec::new(),
    };

    let roots = net.root_subnetworks(&crit).map_err(|e| match e {
        NetworkError::WrongScenario(s) => PredictError::WrongScenario(s),
        _ => PredictError::NotFeedforward,
    })?;
    let jobs: Vec<(usize, Direction)> = (0..roots.len())
        .flat_map(|i| [(i, Direction::Positive), (i, Direction::Negative)])
        .collect();
    let results: Vec<Result<RootEvaluation, PredictError>> = exec.map(&jobs, |&(i, dir)| {
        branches_for_root(net, params, &crit, &roots[i], dir, tol)
    });

    let mut branches = vec![continuation];
    let mut rejected = Vec::new();
    let mut degenerate = Vec::new();
    for (i, root) in roots.iter().enumerate() {
        let mut sides = Vec::with_capacity(2);
        for (dir, res) in [Direction::Positive, Direction::Negative]
            .into_iter()
            .zip(&results[2 * i..2 * i + 2])
        {
            match res {
                Ok(ev) => sides.push(Some(ev.clone())),
                Err(e) => {
                    degenerate.push(DegenerateRoot {
                        root: root.clone(),
                        direction: dir,
                        error: e.clone(),
                    });
                    sides.push(None);
                }
            }
        }
        match (&sides[0], &sides[1]) {
            (Some(pos), Some(neg))
                if pos.branches.len() == 1
                    && neg.branches.len() == 1
                    && pos.branches[0].signs.is_empty() =>
            {
                let mut b = pos.branches[0].clone();
                b.direction = Direction::Both;
                branches.push(b);
            }
            (Some(pos), Some(neg)) if pos.branches.is_empty() && neg.branches.is_empty() => {
                rejected.push(RejectedRoot {
                    root: root.clone(),
                    positive: pos.rejection.clone(),
                    negative: neg.rejection.clone(),
                });
            }
            _ => {
                for side in sides.iter().flatten() {
                    branches.extend(side.branches.iter().cloned());
                }
            }
        }
    }
    Ok(finish(net, crit, roots, branches, rejected, degenerate, tol))
}

type FamilyKey = (Root, Direction, Vec<(usize, i8)>);

/// Assigns family ids and packs the catalog.
pub(super) fn finish(
    net: &Network,
    criticality: Criticality,
    roots: Vec<CellSet>,
    mut branches: Vec<Branch>,
    rejected: Vec<RejectedRoot>,
    degenerate: Vec<DegenerateRoot>,
    tolerance: f64,
) -> BranchCatalog {
    let order = net.partial_order().expect("feedforward checked by callers");
    let mut ids: HashMap<FamilyKey, usize> = HashMap::new();
    for b in &mut branches {
        let bearing: Vec<usize> = b.signs.iter().map(|&(c, _)| c).collect();
        let terminal = |p: usize| {
            !bearing
                .iter()
                .any(|&q| q != p && order.strict_predecessors(q).contains(p))
        };
        let flip = b
            .signs
            .iter()
            .find(|&&(c, _)| terminal(c))
            .map_or(1, |&(_, s)| s);
        let key_signs: Vec<(usize, i8)> = b
            .signs
            .iter()
            .map(|&(c, s)| (c, if terminal(c) { s * flip } else { s }))
            .collect();
        let next = ids.len() + 1;
        b.family_id = *ids
            .entry((b.root.clone(), b.direction, key_signs))
            .or_insert(next);
    }
    BranchCatalog {
        criticality,
        roots,
        branches,
        rejected,
        degenerate,
        tolerance,
    }
}
