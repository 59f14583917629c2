#![allow(dead_code)]

pub mod props;

use ffbif_core::linear::{Criticality, Scenario};
use ffbif_core::{CellSet, Network, SystemParams};
use proptest::prelude::*;

pub const CASES: u32 = 1000;

/// Feedforward network: cells ranked by a random permutation, each
/// non-identity map sends a cell to itself or to a higher-ranked cell.
pub fn ff_network(max_cells: usize, max_inputs: usize) -> impl Strategy<Value = Network> {
    (2..=max_cells, 1..=max_inputs)
        .prop_flat_map(|(n, k)| {
            let rank = Just((0..n).collect::<Vec<usize>>()).prop_shuffle();
            let picks = prop::collection::vec(prop::collection::vec(any::<u32>(), n), k);
            (rank, picks)
        })
        .prop_map(|(rank, picks)| {
            let n = rank.len();
            let mut by_rank = vec![0; n];
            for (cell, &r) in rank.iter().enumerate() {
                by_rank[r] = cell;
            }
            let mut maps = vec![(0..n).collect::<Vec<usize>>()];
            for row in picks {
                maps.push(
                    (0..n)
                        .map(|p| {
                            let span = n - rank[p];
                            by_rank[rank[p] + row[p] as usize % span]
                        })
                        .collect(),
                );
            }
            Network::new(maps).unwrap()
        })
}

/// Arbitrary maps with the identity first; usually has cycles.
pub fn any_network(max_cells: usize, max_inputs: usize) -> impl Strategy<Value = Network> {
    (2..=max_cells, 1..=max_inputs)
        .prop_flat_map(|(n, k)| prop::collection::vec(prop::collection::vec(0..n, n), k))
        .prop_map(|rows| {
            let n = rows[0].len();
            let mut maps = vec![(0..n).collect::<Vec<usize>>()];
            maps.extend(rows);
            Network::new(maps).unwrap()
        })
}

/// `reach[p][q]`: a path of length at least one runs from `q` to `p`.
pub fn transitive_closure(net: &Network) -> Vec<Vec<bool>> {
    let n = net.cells();
    let mut r = vec![vec![false; n]; n];
    for m in net.maps() {
        for p in 0..n {
            if m[p] != p {
                r[p][m[p]] = true;
            }
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if r[i][k] && r[k][j] {
                    r[i][j] = true;
                }
            }
        }
    }
    r
}

pub fn maximal_class(net: &Network) -> usize {
    let lt = net.loop_types();
    let top = net.maximal_cells().iter().next().unwrap();
    lt.class_of[top]
}

/// A criticality record with the given non-maximal class critical.
pub fn criticality_for_class(net: &Network, class: usize) -> Criticality {
    let lt = net.loop_types();
    Criticality {
        scenario: Scenario::NonMaximalCritical,
        critical_class: Some(class),
        critical_cells: lt.classes[class].iter().copied().collect::<CellSet>(),
        class_sums: vec![0.0; lt.classes.len()],
        tolerance: 1e-9,
    }
}

/// Small-integer jet with the loop type of `cell` critical. Entries are
/// halves so everything is exact in binary.
pub fn critical_params(net: &Network, cell: usize, ints: &[i32]) -> SystemParams {
    let k = net.n_inputs();
    let mut it = ints.iter().cycle().map(|&v| v as f64 / 2.0);
    let mut p = SystemParams::zeros(k);
    for v in p.a.iter_mut() {
        *v = it.next().unwrap();
    }
    let lt = net.loop_types();
    let others: f64 = lt.sets[cell].iter().filter(|&&s| s != 0).map(|&s| p.a[s]).sum();
    p.a[0] = -others;
    p.ell = it.next().unwrap();
    for i in 0..k {
        for j in 0..=i {
            let v = it.next().unwrap();
            p.f2[i][j] = v;
            p.f2[j][i] = v;
        }
    }
    for v in p.flam.iter_mut() {
        *v = it.next().unwrap();
    }
    p.flamlam = it.next().unwrap();
    p
}
