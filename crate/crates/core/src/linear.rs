//! Linear admissible maps, the Jacobian at the origin and criticality.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cellset::CellSet;
use crate::network::Network;

/// Default genericity tolerance for class sums and coefficient numerators.
pub const DEFAULT_TOL: f64 = 1e-9;

#[derive(Debug, Error, PartialEq)]
pub enum LinearError {
    #[error("input index {index} out of range for {n} maps")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("expected {expected} coefficients, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ParamsError {
    #[error("malformed parameters: {0}")]
    Malformed(String),
    #[error("{field} has length {got}, expected {expected}")]
    DimensionMismatch {
        field: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("f2 is not symmetric at ({0},{1})")]
    Asymmetric(usize, usize),
}

/// Dense square matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    n: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.n).map(|i| self[(i, i)]).collect()
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self[(i, j)] * x[j]).sum())
            .collect()
    }

    /// `P A P^T` where row/column `i` of the result is `order[i]` of `self`.
    pub fn permuted(&self, order: &[usize]) -> Self {
        let mut m = Self::zeros(self.n);
        for (i, &r) in order.iter().enumerate() {
            for (j, &c) in order.iter().enumerate() {
                m[(i, j)] = self[(r, c)];
            }
        }
        m
    }

    pub fn is_upper_triangular(&self) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| self[(i, j)] == 0.0))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.n + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.n + j]
    }
}

/// `B_σ`: entry `(p, σ(p))` is one.
pub fn adjacency(net: &Network, sigma: usize) -> Result<Matrix, LinearError> {
    if sigma >= net.n_inputs() {
        return Err(LinearError::IndexOutOfRange {
            index: sigma,
            n: net.n_inputs(),
        });
    }
    let mut m = Matrix::zeros(net.cells());
    for p in 0..net.cells() {
        m[(p, net.source(sigma, p))] = 1.0;
    }
    Ok(m)
}

/// `Σ_σ b_σ B_σ`.
pub fn linear_map(net: &Network, b: &[f64]) -> Result<Matrix, LinearError> {
    if b.len() != net.n_inputs() {
        return Err(LinearError::DimensionMismatch {
            expected: net.n_inputs(),
            got: b.len(),
        });
    }
    let mut m = Matrix::zeros(net.cells());
    for (sigma, &coef) in b.iter().enumerate() {
        for p in 0..net.cells() {
            m[(p, net.source(sigma, p))] += coef;
        }
    }
    Ok(m)
}

pub fn jacobian_origin(net: &Network, params: &SystemParams) -> Result<Matrix, LinearError> {
    linear_map(net, &params.a)
}

/// The 2-jet of the response at the origin.
///
/// `f2` carries the ½ of the second derivative, so `c·x_σ x_τ` with `σ ≠ τ`
/// gives `f2[σ][τ] = f2[τ][σ] = c/2` and `c·x_σ²` gives `f2[σ][σ] = c`.
/// `flam[σ]` is the full mixed derivative and `flamlam` carries the ½.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SystemParams {
    pub a: Vec<f64>,
    pub ell: f64,
    pub f2: Vec<Vec<f64>>,
    pub flam: Vec<f64>,
    pub flamlam: f64,
}

impl SystemParams {
    pub fn zeros(n: usize) -> Self {
        Self {
            a: vec![0.0; n],
            ell: 0.0,
            f2: vec![vec![0.0; n]; n],
            flam: vec![0.0; n],
            flamlam: 0.0,
        }
    }

    pub fn n_inputs(&self) -> usize {
        self.a.len()
    }

    pub fn from_json(text: &str) -> Result<Self, ParamsError> {
        let p: Self =
            serde_json::from_str(text).map_err(|e| ParamsError::Malformed(e.to_string()))?;
        p.validate()?;
        Ok(p)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("params serialize")
    }

    pub fn validate(&self) -> Result<(), ParamsError> {
        let n = self.a.len();
        let check = |field, got| {
            if got == n {
                Ok(())
            } else {
                Err(ParamsError::DimensionMismatch {
                    field,
                    expected: n,
                    got,
                })
            }
        };
        check("flam", self.flam.len())?;
        check("f2", self.f2.len())?;
        for row in &self.f2 {
            check("f2 row", row.len())?;
        }
        let scale = 1.0
            + self
                .f2
                .iter()
                .flatten()
                .fold(0.0_f64, |m, v| m.max(v.abs()));
        for i in 0..n {
            for j in 0..i {
                if (self.f2[i][j] - self.f2[j][i]).abs() > 1e-12 * scale {
                    return Err(ParamsError::Asymmetric(i + 1, j + 1));
                }
            }
        }
        Ok(())
    }

    /// Parameters of the problem in `μ = -λ`.
    pub fn negated_lambda(&self) -> Self {
        Self {
            ell: -self.ell,
            flam: self.flam.iter().map(|v| -v).collect(),
            ..self.clone()
        }
    }

    /// Checks that the arity matches a network.
    pub fn check_arity(&self, net: &Network) -> Result<(), ParamsError> {
        if self.n_inputs() == net.n_inputs() {
            Ok(())
        } else {
            Err(ParamsError::DimensionMismatch {
                field: "a",
                expected: net.n_inputs(),
                got: self.n_inputs(),
            })
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Scenario {
    MaximalCritical,
    NonMaximalCritical,
    NoCriticalClass,
    MultipleCriticalClasses,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Criticality {
    pub scenario: Scenario,
    /// Index into `LoopTypes::classes` when exactly one class is critical.
    pub critical_class: Option<usize>,
    pub critical_cells: CellSet,
    /// `Σ_{σ ∈ L_p} a_σ` for each loop-type class.
    pub class_sums: Vec<f64>,
    pub tolerance: f64,
}

pub fn classify_criticality(net: &Network, params: &SystemParams, tol: f64) -> Criticality {
    let lt = net.loop_types();
    let amax = params.a.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let class_sums: Vec<f64> = lt
        .classes
        .iter()
        .map(|c| lt.sets[c[0]].iter().map(|&i| params.a[i]).sum())
        .collect();
    let critical: Vec<usize> = class_sums
        .iter()
        .enumerate()
        .filter(|(_, s)| s.abs() <= tol * (1.0 + amax))
        .map(|(k, _)| k)
        .collect();
    let critical_cells: CellSet = critical
        .iter()
        .flat_map(|&k| lt.classes[k].iter().copied())
        .collect();
    let (scenario, critical_class) = match critical.as_slice() {
        [] => (Scenario::NoCriticalClass, None),
        [k] => {
            let maximal = net.maximal_cells();
            if !maximal.is_empty() && lt.classes[*k].iter().copied().collect::<CellSet>() == maximal {
                (Scenario::MaximalCritical, Some(*k))
            } else {
                (Scenario::NonMaximalCritical, Some(*k))
            }
        }
        _ => (Scenario::MultipleCriticalClasses, None),
    };
    Criticality {
        scenario,
        critical_class,
        critical_cells,
        class_sums,
        tolerance: tol,
    }
}
