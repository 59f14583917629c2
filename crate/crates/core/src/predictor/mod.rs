//! Prediction of steady-state branches bifurcating from the origin.
//!
//! Coefficients are reported in the coordinate `t = |λ|` of the side on which
//! a branch lives: cell `p` behaves like `coeff · t^exponent`. Branches that
//! exist on both sides (the synchronous continuation and roots without square
//! roots) carry coefficients of `λ` itself.

mod case1;
mod catalog;
mod jet;
mod mu;
pub mod residual;
mod root;

pub use case1::case1_branches;
pub use catalog::{all_branches, all_branches_with, BranchCatalog, DegenerateRoot, RejectedRoot};
pub use jet::{discriminant_identity, discriminant_terms, sync_branch, transcritical_pair, Discriminant, SyncBranch};
pub use mu::{mu_values, MuTable};
pub use root::{branches_for_root, Rejection, RootEvaluation};

use serde::Serialize;
use thiserror::Error;

use crate::cellset::CellSet;
use crate::linear::{ParamsError, Scenario};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PredictError {
    #[error("prediction needs exactly one critical class, got {0:?}")]
    WrongScenario(Scenario),
    #[error("network is not feedforward")]
    NotFeedforward,
    #[error(transparent)]
    Params(#[from] ParamsError),
    #[error("K = Σa = {0} is within tolerance of zero")]
    DegenerateK(f64),
    #[error("quadratic coefficient {0} of the critical class is within tolerance of zero")]
    DegenerateQuadratic(f64),
    #[error("transcritical roots coincide at {0}")]
    CoincidentRoots(f64),
    #[error("numerator {numerator} for cell {} is within tolerance of zero", cell + 1)]
    DegenerateCoefficient { cell: usize, numerator: f64 },
    #[error("ℓ = {ell} or Σf = {sum_f2} is within tolerance of zero")]
    DegenerateJet { ell: f64, sum_f2: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Direction {
    Positive,
    Negative,
    /// Exists for `λ` of either sign.
    Both,
}

impl Direction {
    pub fn label(self) -> &'static str {
        match self {
            Direction::Positive => "pos",
            Direction::Negative => "neg",
            Direction::Both => "both",
        }
    }

    /// Whether a branch in this direction passes a `pos|neg|both` filter.
    pub fn matches(self, filter: Direction) -> bool {
        filter == Direction::Both || self == Direction::Both || self == filter
    }
}

/// Which leading-order rule fixed a cell's coefficient.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum TableRow {
    /// Cell of the root subnetwork, on the synchronous branch.
    Synchronous,
    /// Non-critical, all leading inputs linear.
    NonCriticalLinear,
    /// Non-critical, fed by a square-root input.
    NonCriticalAmplified,
    /// Critical and surrounded by the root: the non-synchronous transcritical root.
    Transcritical,
    /// Critical with `μ = 1`.
    SaddleNode,
    /// Critical with `μ > 1`.
    AmplifiedSaddleNode,
    /// Maximal cell when the maximal cells are critical.
    CaseOneMaximal,
    /// Other cells when the maximal cells are critical.
    CaseOnePropagated,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CellBranch {
    pub mu: u32,
    /// `2^-mu`.
    pub exponent: f64,
    pub coeff: f64,
    /// Second-order coefficient of a synchronous cell, `x = Dt + Rt²`.
    pub second: Option<f64>,
    pub synchronous: bool,
    pub row: TableRow,
    pub degenerate: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Root {
    Continuation,
    CaseOne,
    Subnetwork(CellSet),
}

impl Root {
    pub fn label(&self) -> String {
        match self {
            Root::Continuation => "continuation".into(),
            Root::CaseOne => "maximal".into(),
            Root::Subnetwork(b) => b.label(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Branch {
    pub root: Root,
    pub direction: Direction,
    pub cells: Vec<CellBranch>,
    pub family_id: usize,
    /// Sign choices `(cell, ±1)` on the sign-bearing cells, ascending by cell.
    pub signs: Vec<(usize, i8)>,
}

impl Branch {
    /// Leading-order state at `t = |λ|` on the branch's side
    /// (for `Both`, at `λ = t`).
    pub fn leading(&self, t: f64) -> Vec<f64> {
        self.cells
            .iter()
            .map(|c| c.coeff * t.powf(c.exponent))
            .collect()
    }

    /// Leading order plus the synchronous second-order terms.
    pub fn truncated(&self, t: f64) -> Vec<f64> {
        self.cells
            .iter()
            .map(|c| c.coeff * t.powf(c.exponent) + c.second.unwrap_or(0.0) * t * t)
            .collect()
    }

    pub fn sign_label(&self) -> String {
        self.signs
            .iter()
            .map(|(c, s)| format!("{}{}", c + 1, if *s > 0 { '+' } else { '-' }))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// `|x| <= tol * scale`, where `scale` sums the magnitudes of the terms.
fn negligible(x: f64, scale: f64, tol: f64) -> bool {
    x.abs() <= tol * scale
}

#[cfg(test)]
pub(crate) mod testparams {
    use crate::linear::SystemParams;

    /// `y + 2z - 4w + 5λx - 0.5x²` on five inputs.
    pub fn fig2() -> SystemParams {
        let mut p = SystemParams::zeros(5);
        p.a = vec![0.0, 1.0, 2.0, 0.0, -4.0];
        p.f2[0][0] = -0.5;
        p.flam[0] = 5.0;
        p
    }

    /// `y - 2z + λx - 0.1x²` on three inputs.
    pub fn fig3() -> SystemParams {
        let mut p = SystemParams::zeros(3);
        p.a = vec![0.0, 1.0, -2.0];
        p.f2[0][0] = -0.1;
        p.flam[0] = 1.0;
        p
    }

    /// `-x² + xy + λx + y - 2z + v + w + λ`.
    pub fn fig5a() -> SystemParams {
        let mut p = SystemParams::zeros(5);
        p.a = vec![0.0, 1.0, -2.0, 1.0, 1.0];
        p.ell = 1.0;
        p.f2[0][0] = -1.0;
        p.f2[0][1] = 0.5;
        p.f2[1][0] = 0.5;
        p.flam[0] = 1.0;
        p
    }

    /// `x² + y + z/2 - v/2 - λ`.
    pub fn fig5b() -> SystemParams {
        let mut p = SystemParams::zeros(5);
        p.a = vec![0.0, 1.0, 0.5, -0.5, 0.0];
        p.ell = -1.0;
        p.f2[0][0] = 1.0;
        p
    }
}
