//! Growth orders `μ_p` relative to a root subnetwork.

use super::PredictError;
use crate::cellset::CellSet;
use crate::linear::{Criticality, Scenario};
use crate::network::Network;

#[derive(Clone, Debug, PartialEq)]
pub struct MuTable {
    pub mu: Vec<u32>,
    /// Largest `μ` among the inputs of `p` (zero inside the root).
    pub input_order: Vec<u32>,
    /// Inputs of `p` attaining `input_order[p]`; empty inside the root.
    pub leading: Vec<CellSet>,
    /// Cells outside the root all of whose inputs lie in it.
    pub surrounded: CellSet,
}

pub fn mu_values(net: &Network, crit: &Criticality, root: &CellSet) -> Result<MuTable, PredictError> {
    if crit.scenario != Scenario::NonMaximalCritical {
        return Err(PredictError::WrongScenario(crit.scenario));
    }
    let order = net.partial_order().map_err(|_| PredictError::NotFeedforward)?;
    let n = net.cells();
    let mut mu = vec![0u32; n];
    let mut input_order = vec![0u32; n];
    let mut leading = vec![CellSet::new(); n];
    let mut surrounded = CellSet::new();
    for &p in order.topo.iter().rev() {
        if root.contains(p) {
            continue;
        }
        let inputs = net.inputs(p);
        let top = inputs.iter().map(|q| mu[q]).max().unwrap_or(0);
        input_order[p] = top;
        leading[p] = inputs.iter().filter(|&q| mu[q] == top).collect();
        if inputs.is_subset(root) {
            surrounded.insert(p);
            mu[p] = 0;
        } else if crit.critical_cells.contains(p) {
            mu[p] = top + 1;
        } else {
            mu[p] = top;
        }
    }
    Ok(MuTable {
        mu,
        input_order,
        leading,
        surrounded,
    })
}
