//! Leading-order coefficients for the branches generated by one root subnetwork.

use super::jet::{sync_branch, transcritical_pair, SyncBranch};
use super::mu::{mu_values, MuTable};
use super::{negligible, Branch, CellBranch, Direction, PredictError, Root, TableRow};
use crate::cellset::CellSet;
use crate::linear::{Criticality, SystemParams};
use crate::network::{LoopTypes, Network};

/// Why a root produced no branch on one side.
#[derive(Clone, Debug, PartialEq)]
pub enum Rejection {
    /// A critical cell with `μ = 1` needs `ratio < 0`, where
    /// `ratio = (Σ_{τ∉L_p} a_τ D_τ(p) + ℓ) / S_in`.
    Inequality { cell: usize, ratio: f64 },
    /// No sign choice upstream of a critical cell with `μ > 1` makes its
    /// square-root argument positive.
    NoAdmissibleSigns { cell: usize },
}

impl std::fmt::Display for Rejection {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Rejection::Inequality { cell, ratio } => write!(
                f,
                "cell {} needs (sum a D + ell)/S < 0, got {ratio}",
                cell + 1
            ),
            Rejection::NoAdmissibleSigns { cell } => {
                write!(f, "cell {} has no admissible sign choice", cell + 1)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RootEvaluation {
    pub branches: Vec<Branch>,
    /// Set only when `branches` is empty.
    pub rejection: Option<Rejection>,
}

/// Branches generated by `root` on one side of `λ = 0`.
///
/// The negative side is computed as the positive side of the problem in
/// `μ = -λ`, so coefficients multiply `|λ|^exponent`. `Direction::Both` is
/// treated as `Positive`.
pub fn branches_for_root(
    net: &Network,
    params: &SystemParams,
    crit: &Criticality,
    root: &CellSet,
    direction: Direction,
    tol: f64,
) -> Result<RootEvaluation, PredictError> {
    params.check_arity(net)?;
    let p = match direction {
        Direction::Negative => params.negated_lambda(),
        _ => params.clone(),
    };
    let mt = mu_values(net, crit, root)?;
    let order = net.partial_order().map_err(|_| PredictError::NotFeedforward)?;
    let lt = net.loop_types();
    let sync = sync_branch(&p, tol)?;
    let critical_lp = crit
        .critical_cells
        .iter()
        .next()
        .map(|c| lt.sets[c].clone())
        .unwrap_or_default();
    let s_in: f64 = critical_lp
        .iter()
        .flat_map(|&s| critical_lp.iter().map(move |&t| (s, t)))
        .map(|(s, t)| p.f2[s][t])
        .sum();
    let f2_scale = 1.0 + p.f2.iter().flatten().fold(0.0_f64, |m, v| m.max(v.abs()));

    let n = net.cells();
    let mut walk = Walk {
        net,
        p: &p,
        lt: &lt,
        mt: &mt,
        crit,
        root,
        order: order.topo.iter().rev().copied().collect(),
        sync,
        critical_lp,
        s_in,
        s_in_degenerate: s_in.abs() <= tol * f2_scale,
        transcritical: None,
        tol,
        direction,
        d: vec![0.0; n],
        cells: vec![None; n],
        signs: Vec::new(),
        out: Vec::new(),
        rejection: None,
    };
    walk.step(0)?;
    let rejection = if walk.out.is_empty() {
        walk.rejection
    } else {
        None
    };
    Ok(RootEvaluation {
        branches: walk.out,
        rejection,
    })
}

struct Walk<'a> {
    net: &'a Network,
    p: &'a SystemParams,
    lt: &'a LoopTypes,
    mt: &'a MuTable,
    crit: &'a Criticality,
    root: &'a CellSet,
    order: Vec<usize>,
    sync: SyncBranch,
    critical_lp: Vec<usize>,
    s_in: f64,
    s_in_degenerate: bool,
    transcritical: Option<f64>,
    tol: f64,
    direction: Direction,
    d: Vec<f64>,
    cells: Vec<Option<CellBranch>>,
    signs: Vec<(usize, i8)>,
    out: Vec<Branch>,
    rejection: Option<Rejection>,
}

impl Walk<'_> {
    /// `Σ a_τ D_τ(p)` over inputs `τ(p) ≠ p`, restricted to `leading` if given,
    /// with the sum of magnitudes.
    fn input_sum(&self, p: usize, leading: Option<&CellSet>) -> (f64, f64) {
        let mut sum = 0.0;
        let mut scale = 0.0;
        for (tau, map) in self.net.maps().iter().enumerate() {
            let q = map[p];
            if q == p || leading.is_some_and(|l| !l.contains(q)) {
                continue;
            }
            let term = self.p.a[tau] * self.d[q];
            sum += term;
            scale += term.abs();
        }
        (sum, scale)
    }

    fn set(&mut self, p: usize, coeff: f64, row: TableRow) {
        let mu = self.mt.mu[p];
        let synchronous = row == TableRow::Synchronous;
        self.d[p] = coeff;
        self.cells[p] = Some(CellBranch {
            mu,
            exponent: 0.5_f64.powi(mu as i32),
            coeff,
            second: synchronous.then_some(self.sync.r),
            synchronous,
            row,
            degenerate: false,
        });
    }

    fn step(&mut self, k: usize) -> Result<(), PredictError> {
        let Some(&p) = self.order.get(k) else {
            let mut signs = self.signs.clone();
            signs.sort();
            self.out.push(Branch {
                root: Root::Subnetwork(self.root.clone()),
                direction: self.direction,
                cells: self.cells.iter().map(|c| c.clone().expect("all cells set")).collect(),
                family_id: 0,
                signs,
            });
            return Ok(());
        };
        let mu = self.mt.mu[p];
        if self.root.contains(p) {
            self.set(p, self.sync.d, TableRow::Synchronous);
            return self.step(k + 1);
        }
        if !self.crit.critical_cells.contains(p) {
            let den: f64 = self.lt.sets[p].iter().map(|&s| self.p.a[s]).sum();
            let (num, scale, row) = if mu == 0 {
                let (s, sc) = self.input_sum(p, None);
                (s + self.p.ell, sc + self.p.ell.abs(), TableRow::NonCriticalLinear)
            } else {
                let (s, sc) = self.input_sum(p, Some(&self.mt.leading[p]));
                (s, sc, TableRow::NonCriticalAmplified)
            };
            if negligible(num, scale, self.tol) {
                return Err(PredictError::DegenerateCoefficient { cell: p, numerator: num });
            }
            self.set(p, -num / den, row);
            return self.step(k + 1);
        }
        if self.mt.surrounded.contains(p) {
            let dminus = match self.transcritical {
                Some(v) => v,
                None => {
                    let (_, dm) = transcritical_pair(self.p, &self.critical_lp, self.tol)?;
                    self.transcritical = Some(dm);
                    dm
                }
            };
            self.set(p, dminus, TableRow::Transcritical);
            return self.step(k + 1);
        }
        if self.s_in_degenerate {
            return Err(PredictError::DegenerateQuadratic(self.s_in));
        }
        let (num, scale, row) = if mu == 1 {
            let (s, sc) = self.input_sum(p, None);
            (s + self.p.ell, sc + self.p.ell.abs(), TableRow::SaddleNode)
        } else {
            let (s, sc) = self.input_sum(p, Some(&self.mt.leading[p]));
            (s, sc, TableRow::AmplifiedSaddleNode)
        };
        if negligible(num, scale, self.tol) {
            return Err(PredictError::DegenerateCoefficient { cell: p, numerator: num });
        }
        let arg = -num / self.s_in;
        if arg < 0.0 {
            if self.rejection.is_none() {
                self.rejection = Some(if mu == 1 {
                    Rejection::Inequality {
                        cell: p,
                        ratio: num / self.s_in,
                    }
                } else {
                    Rejection::NoAdmissibleSigns { cell: p }
                });
            }
            return Ok(());
        }
        for sign in [1i8, -1] {
            self.set(p, f64::from(sign) * arg.sqrt(), row);
            self.signs.push((p, sign));
            self.step(k + 1)?;
            self.signs.pop();
        }
        Ok(())
    }
}
