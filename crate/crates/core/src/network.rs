//! Homogeneous coupled-cell networks given by their input maps.
//!
//! A network on `N` cells is a list of total self-maps `σ_0, .., σ_{n-1}`
//! with `σ_0` the identity. Cell `p` reads input `i` from cell `maps[i][p]`.
//! Everything here is 0-based; the JSON format is 1-based.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cellset::CellSet;
use crate::linear::{Criticality, Scenario};

#[derive(Debug, Error, PartialEq)]
pub enum NetworkError {
    #[error("malformed network: {0}")]
    Malformed(String),
    #[error("maps[0] must be the identity")]
    IdentityMissing,
    #[error("map {map} sends cell {cell} to {value}, outside 1..={cells}")]
    IndexOutOfRange {
        map: usize,
        cell: usize,
        value: usize,
        cells: usize,
    },
    #[error("network has a cycle of length two or more")]
    NotFeedforward,
    #[error("root subnetworks need a non-maximal critical class, got {0:?}")]
    WrongScenario(Scenario),
    #[error("cell set is not a subnetwork")]
    NotSubnetwork,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Network {
    maps: Vec<Vec<usize>>,
    names: Option<Vec<String>>,
}

#[derive(Serialize, Deserialize)]
struct NetworkFile {
    cells: usize,
    maps: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    names: Option<Vec<String>>,
}

impl Network {
    /// Builds a network from 0-based maps.
    pub fn new(maps: Vec<Vec<usize>>) -> Result<Self, NetworkError> {
        let Some(first) = maps.first() else {
            return Err(NetworkError::Malformed("no input maps".into()));
        };
        let n = first.len();
        if n == 0 {
            return Err(NetworkError::Malformed("no cells".into()));
        }
        for (i, m) in maps.iter().enumerate() {
            if m.len() != n {
                return Err(NetworkError::Malformed(format!(
                    "map {} has length {}, expected {n}",
                    i + 1,
                    m.len()
                )));
            }
            if let Some((cell, &value)) = m.iter().enumerate().find(|(_, &v)| v >= n) {
                return Err(NetworkError::IndexOutOfRange {
                    map: i + 1,
                    cell: cell + 1,
                    value: value + 1,
                    cells: n,
                });
            }
        }
        if first.iter().enumerate().any(|(p, &q)| p != q) {
            return Err(NetworkError::IdentityMissing);
        }
        Ok(Self { maps, names: None })
    }

    /// Builds a network from 1-based maps, the way they appear in files.
    pub fn from_one_based(maps: &[Vec<usize>]) -> Result<Self, NetworkError> {
        let n = maps.first().map_or(0, Vec::len);
        let mut zero = Vec::with_capacity(maps.len());
        for (i, m) in maps.iter().enumerate() {
            let mut row = Vec::with_capacity(m.len());
            for (cell, &v) in m.iter().enumerate() {
                if v == 0 || v > n {
                    return Err(NetworkError::IndexOutOfRange {
                        map: i + 1,
                        cell: cell + 1,
                        value: v,
                        cells: n,
                    });
                }
                row.push(v - 1);
            }
            zero.push(row);
        }
        Self::new(zero)
    }

    pub fn from_json(text: &str) -> Result<Self, NetworkError> {
        let file: NetworkFile =
            serde_json::from_str(text).map_err(|e| NetworkError::Malformed(e.to_string()))?;
        if file.maps.first().map_or(0, Vec::len) != file.cells {
            return Err(NetworkError::Malformed(format!(
                "\"cells\" is {} but maps have length {}",
                file.cells,
                file.maps.first().map_or(0, Vec::len)
            )));
        }
        let mut net = Self::from_one_based(&file.maps)?;
        if let Some(names) = file.names {
            if names.len() != file.cells {
                return Err(NetworkError::Malformed("one name per cell expected".into()));
            }
            net.names = Some(names);
        }
        Ok(net)
    }

    pub fn to_json(&self) -> String {
        let file = NetworkFile {
            cells: self.cells(),
            maps: self
                .maps
                .iter()
                .map(|m| m.iter().map(|v| v + 1).collect())
                .collect(),
            names: self.names.clone(),
        };
        serde_json::to_string_pretty(&file).expect("network serializes")
    }

    pub fn with_names(mut self, names: Vec<String>) -> Self {
        assert_eq!(names.len(), self.cells());
        self.names = Some(names);
        self
    }

    pub fn cells(&self) -> usize {
        self.maps[0].len()
    }

    /// Number of input maps, the identity included.
    pub fn n_inputs(&self) -> usize {
        self.maps.len()
    }

    pub fn maps(&self) -> &[Vec<usize>] {
        &self.maps
    }

    /// `σ_map(cell)`.
    pub fn source(&self, map: usize, cell: usize) -> usize {
        self.maps[map][cell]
    }

    pub fn name(&self, cell: usize) -> String {
        match &self.names {
            Some(n) => n[cell].clone(),
            None => (cell + 1).to_string(),
        }
    }

    /// Distinct cells other than `p` that send an input to `p`.
    pub fn inputs(&self, p: usize) -> CellSet {
        self.maps
            .iter()
            .map(|m| m[p])
            .filter(|&q| q != p)
            .collect()
    }

    /// `q -> p` arrows with `q != p`, as an out-adjacency list.
    fn out_arrows(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.cells()];
        for p in 0..self.cells() {
            for q in self.inputs(p).iter() {
                out[q].push(p);
            }
        }
        out
    }

    pub fn is_feedforward(&self) -> bool {
        let n = self.cells();
        let out = self.out_arrows();
        let mut indeg = vec![0usize; n];
        for targets in &out {
            for &p in targets {
                indeg[p] += 1;
            }
        }
        let mut stack: Vec<usize> = (0..n).filter(|&p| indeg[p] == 0).collect();
        let mut seen = 0;
        while let Some(q) = stack.pop() {
            seen += 1;
            for &p in &out[q] {
                indeg[p] -= 1;
                if indeg[p] == 0 {
                    stack.push(p);
                }
            }
        }
        seen == n
    }

    /// Strict reachability: `reach[p]` holds every `q != p` with a path `q -> .. -> p`.
    /// Defined for any network; on a cyclic one it is not antisymmetric.
    pub fn strict_reach(&self) -> Vec<CellSet> {
        let n = self.cells();
        let direct: Vec<CellSet> = (0..n).map(|p| self.inputs(p)).collect();
        (0..n)
            .map(|p| {
                let mut seen = CellSet::new();
                let mut stack: Vec<usize> = direct[p].to_vec();
                while let Some(q) = stack.pop() {
                    if seen.contains(q) {
                        continue;
                    }
                    seen.insert(q);
                    stack.extend(direct[q].iter());
                }
                seen.remove(p);
                seen
            })
            .collect()
    }

    pub fn partial_order(&self) -> Result<PartialOrder, NetworkError> {
        if !self.is_feedforward() {
            return Err(NetworkError::NotFeedforward);
        }
        let n = self.cells();
        let above = self.strict_reach();
        let out = self.out_arrows();
        // A cell is placed once everything strictly below it is placed.
        let mut pending: Vec<usize> = out.iter().map(Vec::len).collect();
        let mut ready = std::collections::BTreeSet::new();
        for q in 0..n {
            if pending[q] == 0 {
                ready.insert(q);
            }
        }
        let mut topo = Vec::with_capacity(n);
        while let Some(p) = ready.pop_first() {
            topo.push(p);
            for q in self.inputs(p).iter() {
                pending[q] -= 1;
                if pending[q] == 0 {
                    ready.insert(q);
                }
            }
        }
        let mut position = vec![0; n];
        for (i, &p) in topo.iter().enumerate() {
            position[p] = i;
        }
        Ok(PartialOrder {
            topo,
            position,
            above,
        })
    }

    pub fn maximal_cells(&self) -> CellSet {
        (0..self.cells())
            .filter(|&p| self.maps.iter().all(|m| m[p] == p))
            .collect()
    }

    pub fn loop_types(&self) -> LoopTypes {
        let n = self.cells();
        let sets: Vec<Vec<usize>> = (0..n)
            .map(|p| (0..self.n_inputs()).filter(|&i| self.maps[i][p] == p).collect())
            .collect();
        let mut classes: Vec<Vec<usize>> = Vec::new();
        let mut class_of = vec![0; n];
        for p in 0..n {
            match classes.iter().position(|c| sets[c[0]] == sets[p]) {
                Some(k) => {
                    classes[k].push(p);
                    class_of[p] = k;
                }
                None => {
                    class_of[p] = classes.len();
                    classes.push(vec![p]);
                }
            }
        }
        LoopTypes {
            sets,
            classes,
            class_of,
        }
    }

    pub fn is_subnetwork(&self, s: &CellSet) -> bool {
        s.iter().all(|p| self.maps.iter().all(|m| s.contains(m[p])))
    }

    /// The network induced on a subnetwork, cells relabelled in ascending order.
    pub fn restrict(&self, s: &CellSet) -> Result<Network, NetworkError> {
        if s.is_empty() || !self.is_subnetwork(s) {
            return Err(NetworkError::NotSubnetwork);
        }
        let cells = s.to_vec();
        let mut index = vec![usize::MAX; self.cells()];
        for (i, &c) in cells.iter().enumerate() {
            index[c] = i;
        }
        let maps = self
            .maps
            .iter()
            .map(|m| cells.iter().map(|&c| index[m[c]]).collect())
            .collect();
        let mut net = Network::new(maps)?;
        if let Some(names) = &self.names {
            net.names = Some(cells.iter().map(|&c| names[c].clone()).collect());
        }
        Ok(net)
    }

    /// Root subnetworks for the critical class in `crit`.
    ///
    /// Proper subnetworks `B` containing every maximal cell such that any cell
    /// outside `B` whose strict predecessors all lie in `B` is critical. The
    /// full cell set is never returned. Sorted by descending size, ties by
    /// descending lexicographic order of the ascending cell lists.
    pub fn root_subnetworks(&self, crit: &Criticality) -> Result<Vec<CellSet>, NetworkError> {
        if crit.scenario != Scenario::NonMaximalCritical {
            return Err(NetworkError::WrongScenario(crit.scenario));
        }
        let order = self.partial_order()?;
        let n = self.cells();
        let maximal = self.maximal_cells();
        let direct: Vec<CellSet> = (0..n).map(|p| self.inputs(p)).collect();
        let upstream_first: Vec<usize> = order.topo.iter().rev().copied().collect();

        let mut found = Vec::new();
        let mut current = CellSet::new();
        fn walk(
            k: usize,
            cells: &[usize],
            direct: &[CellSet],
            maximal: &CellSet,
            current: &mut CellSet,
            out: &mut Vec<CellSet>,
        ) {
            if k == cells.len() {
                out.push(current.clone());
                return;
            }
            let p = cells[k];
            if direct[p].is_subset(current) {
                current.insert(p);
                walk(k + 1, cells, direct, maximal, current, out);
                current.remove(p);
            }
            if !maximal.contains(p) {
                walk(k + 1, cells, direct, maximal, current, out);
            }
        }
        walk(
            0,
            &upstream_first,
            &direct,
            &maximal,
            &mut current,
            &mut found,
        );

        let mut roots: Vec<CellSet> = found
            .into_iter()
            .filter(|b| b.len() < n)
            .filter(|b| {
                (0..n)
                    .filter(|&p| !b.contains(p) && direct[p].is_subset(b))
                    .all(|p| crit.critical_cells.contains(p))
            })
            .collect();
        roots.sort_by(|x, y| y.len().cmp(&x.len()).then_with(|| y.cmp(x)));
        Ok(roots)
    }
}

/// The order `p ⊴ q` (a path runs from `q` to `p`) on a feedforward network.
#[derive(Clone, Debug)]
pub struct PartialOrder {
    /// Cells listed so that `p ⊴ q` implies `p` comes no later than `q`;
    /// downstream cells first, maximal cells last, ties by ascending index.
    pub topo: Vec<usize>,
    /// Inverse of `topo`.
    pub position: Vec<usize>,
    above: Vec<CellSet>,
}

impl PartialOrder {
    /// `p ⊴ q`.
    pub fn leq(&self, p: usize, q: usize) -> bool {
        p == q || self.above[p].contains(q)
    }

    /// Every `q` with `q ▷ p`.
    pub fn strict_predecessors(&self, p: usize) -> &CellSet {
        &self.above[p]
    }
}

/// Loop types `L_p = {i : σ_i(p) = p}` and the classes of cells sharing one.
#[derive(Clone, Debug)]
pub struct LoopTypes {
    /// `sets[p]` lists the input indices fixing `p`, ascending.
    pub sets: Vec<Vec<usize>>,
    /// Cells grouped by loop type, in order of their smallest cell.
    pub classes: Vec<Vec<usize>>,
    pub class_of: Vec<usize>,
}
