//! Property checks shared by the proptest suites and the acceptance runner.

use std::collections::BTreeSet;

use ffbif_core::dynamics::{ResponsePolynomial, Term, VectorField};
use ffbif_core::linear::{adjacency, classify_criticality, linear_map, Scenario, DEFAULT_TOL};
use ffbif_core::predictor::{all_branches, discriminant_terms, mu_values, Branch, Direction};
use ffbif_core::{CellSet, Network};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

use super::*;

pub type Check = Result<(), TestCaseError>;

pub fn feedforward_iff_antisymmetric(net: &Network) -> Check {
    let reach = transitive_closure(net);
    let n = net.cells();
    let antisymmetric = (0..n).all(|p| (0..n).all(|q| !(reach[p][q] && reach[q][p])));
    prop_assert_eq!(net.is_feedforward(), antisymmetric);
    if antisymmetric {
        let strict = net.strict_reach();
        for p in 0..n {
            for q in 0..n {
                prop_assert_eq!(strict[p].contains(q), reach[p][q]);
            }
        }
    }
    Ok(())
}

pub fn upper_triangular(net: &Network, b: &[f64]) -> Check {
    let b = &b[..net.n_inputs()];
    let order = net.partial_order().unwrap();
    let mut sorted = order.topo.clone();
    sorted.sort();
    prop_assert_eq!(sorted, (0..net.cells()).collect::<Vec<_>>());
    let j = linear_map(net, b).unwrap();
    prop_assert!(j.permuted(&order.topo).is_upper_triangular());
    for s in 0..net.n_inputs() {
        prop_assert!(adjacency(net, s).unwrap().permuted(&order.topo).is_upper_triangular());
    }
    Ok(())
}

pub fn diagonal_counts_loop_types(net: &Network) -> Check {
    let b: Vec<f64> = (0..net.n_inputs()).map(|s| (1u64 << s) as f64).collect();
    let j = linear_map(net, &b).unwrap();
    let diag: BTreeSet<u64> = j.diagonal().iter().map(|&v| v as u64).collect();
    prop_assert_eq!(diag.len(), net.loop_types().classes.len());
    Ok(())
}

fn non_maximal_class(net: &Network, pick: usize) -> Option<usize> {
    let classes = net.loop_types().classes.len();
    let top = maximal_class(net);
    let choices: Vec<usize> = (0..classes).filter(|&c| c != top).collect();
    (!choices.is_empty()).then(|| choices[pick % choices.len()])
}

fn brute_force_roots(net: &Network, critical: &CellSet) -> BTreeSet<Vec<usize>> {
    let n = net.cells();
    let reach = transitive_closure(net);
    let maximal = net.maximal_cells();
    let mut out = BTreeSet::new();
    for mask in 0u32..(1 << n) {
        let inside = |p: usize| mask & (1 << p) != 0;
        if mask.count_ones() as usize == n || !maximal.iter().all(inside) {
            continue;
        }
        let closed = (0..n)
            .filter(|&p| inside(p))
            .all(|p| net.maps().iter().all(|m| inside(m[p])));
        if !closed {
            continue;
        }
        let ok = (0..n)
            .filter(|&p| !inside(p))
            .filter(|&p| (0..n).filter(|&q| reach[p][q]).all(inside))
            .all(|p| critical.contains(p));
        if ok {
            out.insert((0..n).filter(|&p| inside(p)).collect());
        }
    }
    out
}

pub fn roots_match_brute_force(net: &Network, pick: usize) -> Check {
    let Some(class) = non_maximal_class(net, pick) else {
        return Ok(());
    };
    let crit = criticality_for_class(net, class);
    let roots = net.root_subnetworks(&crit).unwrap();
    let got: BTreeSet<Vec<usize>> = roots.iter().map(|r| r.to_vec()).collect();
    prop_assert_eq!(got.len(), roots.len());
    prop_assert_eq!(got, brute_force_roots(net, &crit.critical_cells));
    for w in roots.windows(2) {
        prop_assert!(w[0].len() > w[1].len() || (w[0].len() == w[1].len() && w[0] > w[1]));
    }
    for r in &roots {
        prop_assert!(net.is_subnetwork(r));
    }
    Ok(())
}

/// Largest number of critical cells outside `root` on a path from the root
/// to `p`, minus one; zero inside the root.
fn mu_by_paths(net: &Network, critical: &CellSet, root: &CellSet, p: usize) -> i64 {
    if root.contains(p) {
        return 0;
    }
    fn walk(net: &Network, critical: &CellSet, root: &CellSet, p: usize, count: i64, best: &mut i64) {
        if root.contains(p) {
            *best = (*best).max(count - 1);
            return;
        }
        let here = count + critical.contains(p) as i64;
        for q in net.inputs(p).iter() {
            walk(net, critical, root, q, here, best);
        }
    }
    let mut best = i64::MIN;
    walk(net, critical, root, p, 0, &mut best);
    best
}

pub fn mu_matches_paths(net: &Network, pick: usize) -> Check {
    let Some(class) = non_maximal_class(net, pick) else {
        return Ok(());
    };
    let crit = criticality_for_class(net, class);
    for root in net.root_subnetworks(&crit).unwrap() {
        let t = mu_values(net, &crit, &root).unwrap();
        for p in 0..net.cells() {
            let oracle = mu_by_paths(net, &crit.critical_cells, &root, p);
            prop_assert!(oracle >= 0);
            prop_assert_eq!(t.mu[p] as i64, oracle, "cell {} root {}", p + 1, root.label());
        }
    }
    Ok(())
}

/// A non-maximal cell whose loop type is made critical.
pub fn pick_cell(net: &Network, pick: usize) -> Option<usize> {
    let top = net.maximal_cells();
    let cells: Vec<usize> = (0..net.cells()).filter(|&p| !top.contains(p)).collect();
    (!cells.is_empty()).then(|| cells[pick % cells.len()])
}

pub fn ints() -> impl Strategy<Value = Vec<i32>> {
    prop::collection::vec(-4..=4i32, 40)
}

fn rat(v: f64) -> BigRational {
    BigRational::from_float(v).unwrap()
}

pub fn discriminant_float(net: &Network, pick: usize, v: &[i32]) -> Check {
    let Some(cell) = pick_cell(net, pick) else {
        return Ok(());
    };
    let mut p = critical_params(net, cell, v);
    // Move off the dyadic grid so rounding actually happens.
    for x in p.a.iter_mut().chain(p.flam.iter_mut()) {
        *x *= 1.0 + 1.0 / 3.0;
    }
    let lp = net.loop_types().sets[cell].clone();
    let others: f64 = lp.iter().filter(|&&s| s != 0).map(|&s| p.a[s]).sum();
    p.a[0] = -others;
    // K = 0 in exact arithmetic can round to a tiny nonzero value.
    if p.a.iter().sum::<f64>().abs() <= DEFAULT_TOL {
        return Ok(());
    }
    let Some(d) = discriminant_terms(&p.a, &p.ell, &p.f2, &p.flam, &p.flamlam, &lp) else {
        return Ok(());
    };
    let e2 = d.e * d.e;
    // Parameters are O(1), so cancellation down to zero is measured against 1.
    let scale = (d.b * d.b).max((4.0 * d.a * d.c).abs()).max(e2).max(1.0);
    prop_assert!((d.lhs - e2).abs() <= 1e-12 * scale, "{} vs {}", d.lhs, e2);
    Ok(())
}

pub fn discriminant_exact(net: &Network, pick: usize, v: &[i32]) -> Check {
    let Some(cell) = pick_cell(net, pick) else {
        return Ok(());
    };
    let p = critical_params(net, cell, v);
    let lp = net.loop_types().sets[cell].clone();
    let a: Vec<BigRational> = p.a.iter().map(|&x| rat(x)).collect();
    let f2: Vec<Vec<BigRational>> = p.f2.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect();
    let flam: Vec<BigRational> = p.flam.iter().map(|&x| rat(x)).collect();
    let Some(d) = discriminant_terms(&a, &rat(p.ell), &f2, &flam, &rat(p.flamlam), &lp) else {
        return Ok(());
    };
    prop_assert_eq!(d.lhs.clone(), d.e.clone() * d.e.clone());
    // One root is the synchronous coefficient.
    let k: BigRational = a.iter().cloned().sum();
    let sync = -(rat(p.ell) / k);
    prop_assert!(d.roots.0 == sync || d.roots.1 == sync);
    let zero = BigRational::from_integer(BigInt::from(0));
    for x in [&d.roots.0, &d.roots.1] {
        prop_assert_eq!(d.a.clone() * x * x + d.b.clone() * x + d.c.clone(), zero.clone());
    }
    Ok(())
}

/// Branches keyed so the two sides of a catalog can be compared.
fn keyed(branches: &[Branch], swap: bool) -> Vec<(String, Direction, Vec<i64>)> {
    let mut out: Vec<(String, Direction, Vec<i64>)> = branches
        .iter()
        .map(|b| {
            let (dir, flip) = match (b.direction, swap) {
                (Direction::Positive, true) => (Direction::Negative, 1.0),
                (Direction::Negative, true) => (Direction::Positive, 1.0),
                (Direction::Both, true) => (Direction::Both, -1.0),
                (d, false) => (d, 1.0),
            };
            let coeffs = b.cells.iter().map(|c| (flip * c.coeff * 1e9).round() as i64).collect();
            (b.root.label(), dir, coeffs)
        })
        .collect();
    out.sort();
    out
}

pub fn sub_super_duality(net: &Network, pick: usize, v: &[i32]) -> Check {
    let Some(cell) = pick_cell(net, pick) else {
        return Ok(());
    };
    let p = critical_params(net, cell, v);
    let crit = classify_criticality(net, &p, DEFAULT_TOL);
    if crit.scenario != Scenario::NonMaximalCritical {
        return Ok(());
    }
    let q = p.negated_lambda();
    match (all_branches(net, &p), all_branches(net, &q)) {
        (Ok(a), Ok(b)) => {
            prop_assert_eq!(keyed(&a.branches, false), keyed(&b.branches, true));
            prop_assert_eq!(a.signed_count(), b.signed_count());
            prop_assert_eq!(a.family_count(), b.family_count());
            prop_assert_eq!(a.rejected.len(), b.rejected.len());
            prop_assert_eq!(a.degenerate.len(), b.degenerate.len());
        }
        (Err(x), Err(y)) => prop_assert_eq!(x, y),
        (x, y) => prop_assert!(false, "{:?} vs {:?}", x.err(), y.err()),
    }
    Ok(())
}

/// Random polynomial in `k` inputs with total degree at most three.
pub fn polynomial(k: usize) -> impl Strategy<Value = ResponsePolynomial> {
    let term = (prop::collection::vec(0..=2u32, k), 0..=1u32, -2.0..2.0f64).prop_filter_map(
        "degree at most three",
        |(powers, lp, c)| {
            let degree: u32 = powers.iter().sum::<u32>() + lp;
            (degree <= 3).then(|| Term::new(powers, lp, c))
        },
    );
    prop::collection::vec(term, 1..8).prop_map(ResponsePolynomial::new)
}

pub fn net_and_poly(max_cells: usize) -> impl Strategy<Value = (Network, ResponsePolynomial)> {
    ff_network(max_cells, 3).prop_flat_map(|net| {
        let k = net.n_inputs();
        (Just(net), polynomial(k))
    })
}

pub fn jacobian_matches_differences(net: &Network, poly: &ResponsePolynomial, x: &[f64], lambda: f64) -> Check {
    let n = net.cells();
    let x = &x[..n];
    let f = VectorField::new(net, poly).unwrap();
    let j = f.jacobian(x, lambda);
    let h = 1e-5;
    for q in 0..n {
        let mut up = x.to_vec();
        let mut down = x.to_vec();
        up[q] += h;
        down[q] -= h;
        let (fu, fd) = (f.eval(&up, lambda), f.eval(&down, lambda));
        for p in 0..n {
            let fdiff = (fu[p] - fd[p]) / (2.0 * h);
            prop_assert!(
                (fdiff - j[(p, q)]).abs() <= 1e-6 * (1.0 + j[(p, q)].abs()),
                "({}, {}): {} vs {}",
                p,
                q,
                fdiff,
                j[(p, q)]
            );
        }
    }
    Ok(())
}
