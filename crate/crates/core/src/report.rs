//! CSV, JSON and plain-text renderings of catalogs, sweeps and reports.

use serde::Serialize;

use crate::dynamics::{BranchStatus, SweepPoint, VerificationReport};
use crate::network::Network;
use crate::predictor::{Branch, BranchCatalog, Direction};

fn csv_string(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.write_record(&r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
}

/// `2^-mu` written as a fraction.
pub fn exponent_label(mu: u32) -> String {
    if mu == 0 {
        "1".into()
    } else {
        format!("1/{}", 1u64 << mu)
    }
}

fn filtered(catalog: &BranchCatalog, filter: Direction) -> impl Iterator<Item = &Branch> {
    catalog.branches.iter().filter(move |b| b.direction.matches(filter))
}

pub fn catalog_csv(catalog: &BranchCatalog, filter: Direction) -> String {
    let rows = filtered(catalog, filter).flat_map(|b| {
        b.cells.iter().enumerate().map(move |(p, c)| {
            vec![
                b.root.label(),
                b.direction.label().to_string(),
                b.family_id.to_string(),
                (p + 1).to_string(),
                c.mu.to_string(),
                exponent_label(c.mu),
                c.coeff.to_string(),
                c.synchronous.to_string(),
            ]
        })
    });
    csv_string(
        &["root", "direction", "family", "cell", "mu", "exponent", "coefficient", "synchronous"],
        rows,
    )
}

#[derive(Serialize)]
struct CatalogJson<'a> {
    scenario: crate::linear::Scenario,
    critical_cells: &'a crate::CellSet,
    tolerance: f64,
    signed_count: usize,
    family_count: usize,
    branches: Vec<&'a Branch>,
    rejected: Vec<RejectedJson>,
    degenerate: Vec<RejectedJson>,
}

#[derive(Serialize)]
struct RejectedJson {
    root: String,
    reason: String,
}

pub fn catalog_json(catalog: &BranchCatalog, filter: Direction) -> String {
    let doc = CatalogJson {
        scenario: catalog.criticality.scenario,
        critical_cells: &catalog.criticality.critical_cells,
        tolerance: catalog.tolerance,
        signed_count: catalog.signed_count(),
        family_count: catalog.family_count(),
        branches: filtered(catalog, filter).collect(),
        rejected: catalog
            .rejected
            .iter()
            .map(|r| RejectedJson {
                root: r.root.label(),
                reason: rejection_text(r),
            })
            .collect(),
        degenerate: catalog
            .degenerate
            .iter()
            .map(|d| RejectedJson {
                root: d.root.label(),
                reason: format!("{}: {}", d.direction.label(), d.error),
            })
            .collect(),
    };
    serde_json::to_string_pretty(&doc).expect("catalog serializes")
}

fn rejection_text(r: &crate::predictor::RejectedRoot) -> String {
    let side = |x: &Option<crate::predictor::Rejection>| {
        x.as_ref().map_or("no branch".to_string(), |r| r.to_string())
    };
    format!("pos: {}; neg: {}", side(&r.positive), side(&r.negative))
}

/// Human-readable overview of a catalog.
pub fn catalog_summary(net: &Network, catalog: &BranchCatalog) -> String {
    let mut s = String::new();
    let crit = &catalog.criticality;
    s.push_str(&format!(
        "scenario: {:?}, critical cells {} (tolerance {:e})\n",
        crit.scenario,
        crit.critical_cells.label(),
        catalog.tolerance
    ));
    if !catalog.roots.is_empty() {
        let roots: Vec<String> = catalog.roots.iter().map(|r| r.label()).collect();
        s.push_str(&format!("root subnetworks: {}\n", roots.join(" ")));
    }
    for b in &catalog.branches {
        let cells: Vec<String> = b
            .cells
            .iter()
            .enumerate()
            .map(|(p, c)| {
                let mark = if c.synchronous { "*" } else { "" };
                format!("{}{mark}: {:.6} t^{}", net.name(p), c.coeff, exponent_label(c.mu))
            })
            .collect();
        let signs = if b.signs.is_empty() {
            String::new()
        } else {
            format!(" [{}]", b.sign_label())
        };
        s.push_str(&format!(
            "family {:>2}  {:<12} {:<4}{signs}  {}\n",
            b.family_id,
            b.root.label(),
            b.direction.label(),
            cells.join(", ")
        ));
    }
    for r in &catalog.rejected {
        s.push_str(&format!("rejected {}: {}\n", r.root.label(), rejection_text(r)));
    }
    for d in &catalog.degenerate {
        s.push_str(&format!(
            "degenerate {} {}: {}\n",
            d.root.label(),
            d.direction.label(),
            d.error
        ));
    }
    s.push_str(&format!(
        "branches: {} signed, {} families\n",
        catalog.signed_count(),
        catalog.family_count()
    ));
    s
}

fn branch_id(index: usize, side: Direction) -> String {
    format!("{}:{}", index + 1, side.label())
}

pub fn verification_points_csv(report: &VerificationReport) -> String {
    let rows = report.branches.iter().flat_map(|b| {
        b.points.iter().flat_map(move |(l, x)| {
            x.iter().enumerate().map(move |(p, v)| {
                vec![branch_id(b.index, b.side), (p + 1).to_string(), l.to_string(), v.to_string()]
            })
        })
    });
    csv_string(&["branch", "cell", "lambda", "refined_value"], rows)
}

pub fn verification_summary_csv(report: &VerificationReport) -> String {
    let rows = report.branches.iter().flat_map(|b| {
        let found = b.status == BranchStatus::Found;
        let id = branch_id(b.index, b.side);
        let missing = (!found).then(|| {
            vec![id.clone(), String::new(), String::new(), String::new(), String::new(), String::new(), String::new(), "NotFound".into()]
        });
        b.cells
            .iter()
            .map(move |c| {
                vec![
                    id.clone(),
                    (c.cell + 1).to_string(),
                    c.exp_meas.to_string(),
                    c.exp_pred.to_string(),
                    c.coeff_meas.to_string(),
                    c.coeff_pred.to_string(),
                    c.r2.to_string(),
                    c.pass.to_string(),
                ]
            })
            .chain(missing)
    });
    csv_string(
        &["branch", "cell", "exp_meas", "exp_pred", "coeff_meas", "coeff_pred", "r2", "pass"],
        rows,
    )
}

pub fn sweep_csv(points: &[SweepPoint]) -> String {
    let n = points.first().map_or(0, |p| p.state.len());
    let mut header = vec!["lambda".to_string()];
    header.extend((1..=n).map(|p| format!("x{p}")));
    header.push("diverged".into());
    let header: Vec<&str> = header.iter().map(String::as_str).collect();
    let rows = points.iter().map(|p| {
        let mut r = vec![p.lambda.to_string()];
        r.extend(p.state.iter().map(|v| v.to_string()));
        r.push(p.diverged.to_string());
        r
    });
    csv_string(&header, rows)
}

/// Plain-text verdict per checked branch side.
pub fn verification_text(catalog: &BranchCatalog, report: &VerificationReport) -> String {
    let mut s = String::new();
    for b in &report.branches {
        let br = &catalog.branches[b.index];
        let verdict = if b.pass { "pass" } else { "FAIL" };
        s.push_str(&format!(
            "{verdict} branch {} ({} {} {})",
            branch_id(b.index, b.side),
            br.root.label(),
            br.direction.label(),
            br.sign_label()
        ));
        match &b.status {
            BranchStatus::NotFound(m) => s.push_str(&format!(" not found: {m}\n")),
            BranchStatus::Found => {
                s.push('\n');
                for c in &b.cells {
                    if c.zero {
                        s.push_str(&format!("    cell {}: at zero {}\n", c.cell + 1, if c.pass { "ok" } else { "FAIL" }));
                    } else {
                        s.push_str(&format!(
                            "    cell {}: exponent {:.4} (pred {}), coefficient {:.4} (pred {:.4}, free fit {:.4}), r2 {:.6}{}\n",
                            c.cell + 1,
                            c.exp_meas,
                            c.exp_pred,
                            c.coeff_meas,
                            c.coeff_pred,
                            c.coeff_free,
                            c.r2,
                            if c.pass { "" } else { "  FAIL" }
                        ));
                    }
                }
                if !b.sync_ok {
                    s.push_str("    synchronous cells disagree\n");
                }
            }
        }
    }
    s
}
