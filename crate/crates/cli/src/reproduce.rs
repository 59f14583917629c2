//! `ffbif reproduce`: sweep, catalog, verification and a plot script for a
//! built-in example.

use std::path::PathBuf;

use anyhow::Result;

use ffbif_core::dynamics::{euler_sweep, verify, SweepConfig, SweepPoint, Thresholds, VectorField, VerificationReport};
use ffbif_core::predictor::{all_branches, Branch, BranchCatalog, Direction};
use ffbif_core::{presets, report, Execution};

use crate::{write_out, OutArgs, EXIT_PARSE};

pub fn run(name: &str, out: &OutArgs) -> Result<u8> {
    let Some(preset) = presets::preset(name) else {
        eprintln!("unknown preset {name:?}; expected one of {}", presets::NAMES.join(", "));
        return Ok(EXIT_PARSE);
    };
    let dir = out.out.clone().unwrap_or_else(|| PathBuf::from(name));
    let net = &preset.net;
    let jet = preset.poly.jet(net.n_inputs())?;
    let catalog = all_branches(net, &jet)?;
    let summary = report::catalog_summary(net, &catalog);
    println!("{}: {}", preset.name, preset.title);
    print!("{summary}");
    write_out(&dir, "catalog.csv", &report::catalog_csv(&catalog, Direction::Both))?;
    write_out(&dir, "summary.txt", &summary)?;

    let exec = Execution::default();
    let filter: Direction = out.direction.into();
    let x0 = preset.x0.clone().unwrap_or_else(|| vec![0.0; net.cells()]);
    let cfg = SweepConfig::paper_protocol(x0);
    let rep = verify(net, &preset.poly, &catalog, &cfg, &Thresholds::default(), filter, exec)?;
    write_out(&dir, "verify_points.csv", &report::verification_points_csv(&rep))?;
    write_out(&dir, "verify_summary.csv", &report::verification_summary_csv(&rep))?;
    let passed = rep.branches.iter().filter(|b| b.pass).count();
    println!("verification: {passed} of {} branch sides pass", rep.branches.len());

    if preset.x0.is_some() {
        let field = VectorField::new(net, &preset.poly)?;
        let sweep = euler_sweep(&field, &cfg, exec)?;
        write_out(&dir, "sweep.csv", &report::sweep_csv(&sweep))?;
        if let Some(k) = observed_branch(&catalog, &sweep) {
            println!("Euler sweep settles on branch {} ({})", k + 1, catalog.branches[k].root.label());
            write_out(&dir, "loglog.csv", &loglog_csv(&catalog.branches[k], k, &rep))?;
        }
        write_out(&dir, "plot.py", PLOT_SCRIPT)?;
    }
    Ok(0)
}

/// Catalog branch closest to the Euler end state at the smallest positive `λ`.
fn observed_branch(catalog: &BranchCatalog, sweep: &[SweepPoint]) -> Option<usize> {
    let pt = sweep
        .iter()
        .filter(|p| p.lambda > 0.0 && !p.diverged)
        .min_by(|a, b| a.lambda.total_cmp(&b.lambda))?;
    let dist = |b: &Branch| -> f64 {
        b.cells
            .iter()
            .zip(&pt.state)
            .map(|(c, x)| {
                let pred = c.coeff * pt.lambda.powf(c.exponent);
                (pred - x).powi(2)
            })
            .sum()
    };
    catalog
        .branches
        .iter()
        .enumerate()
        .filter(|(_, b)| b.direction.matches(Direction::Positive))
        .min_by(|(_, a), (_, b)| dist(a).total_cmp(&dist(b)))
        .map(|(k, _)| k)
}

/// `|x_p|` against `λ` on the refined branch with the predicted slopes.
fn loglog_csv(branch: &Branch, index: usize, rep: &VerificationReport) -> String {
    let mut s = String::from("lambda,cell,abs_value,reference_slope\n");
    let Some(check) = rep
        .branches
        .iter()
        .find(|c| c.index == index && c.side == Direction::Positive)
    else {
        return s;
    };
    for (l, x) in &check.points {
        for (p, v) in x.iter().enumerate() {
            if branch.cells[p].coeff != 0.0 {
                s.push_str(&format!("{l},{},{},{}\n", p + 1, v.abs(), branch.cells[p].exponent));
            }
        }
    }
    s
}

const PLOT_SCRIPT: &str = r#"import csv
import sys
from collections import defaultdict

import matplotlib.pyplot as plt


def rows(path):
    with open(path) as fh:
        return list(csv.DictReader(fh))


sweep = rows("sweep.csv")
cells = [k for k in sweep[0] if k.startswith("x")]
fig, axes = plt.subplots(1, 2, figsize=(11, 4.5))
lam = [float(r["lambda"]) for r in sweep]
for c in cells:
    axes[0].plot(lam, [float(r[c]) for r in sweep], ".", ms=3, label=c)
axes[0].set_xlabel("lambda")
axes[0].legend()

try:
    data = rows("loglog.csv")
except FileNotFoundError:
    data = []
series = defaultdict(list)
slopes = {}
for r in data:
    series[r["cell"]].append((float(r["lambda"]), float(r["abs_value"])))
    slopes[r["cell"]] = float(r["reference_slope"])
for cell, pts in sorted(series.items()):
    xs, ys = zip(*pts)
    axes[1].loglog(xs, ys, "o", ms=3, label=f"x{cell}")
    ref = [ys[0] * (x / xs[0]) ** slopes[cell] for x in xs]
    axes[1].loglog(xs, ref, "k--", lw=0.8)
axes[1].set_xlabel("lambda")
if series:
    axes[1].legend()
fig.tight_layout()
fig.savefig(sys.argv[1] if len(sys.argv) > 1 else "figure.png", dpi=150)
"#;
