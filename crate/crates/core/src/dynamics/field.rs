//! The admissible vector field `ẋ_p = f(x_{σ_0(p)}, .., x_{σ_{n-1}(p)}; λ)`.

use super::poly::ResponsePolynomial;
use super::DynamicsError;
use crate::linear::Matrix;
use crate::network::Network;

#[derive(Clone, Debug)]
struct Sparse {
    /// `(input, power)` with power > 0.
    factors: Vec<(usize, u32)>,
    lambda_power: u32,
    coeff: f64,
}

/// A network together with a response; immutable and shareable.
#[derive(Clone, Debug)]
pub struct VectorField {
    maps: Vec<Vec<usize>>,
    terms: Vec<Sparse>,
}

/// The field at fixed `λ`, with powers of `λ` folded into coefficients.
#[derive(Clone, Debug)]
pub struct Frozen<'a> {
    maps: &'a [Vec<usize>],
    terms: Vec<(Vec<(usize, u32)>, f64)>,
}

impl VectorField {
    pub fn new(net: &Network, poly: &ResponsePolynomial) -> Result<Self, DynamicsError> {
        poly.check_arity(net.n_inputs())?;
        let terms = poly
            .terms
            .iter()
            .filter(|t| t.coeff != 0.0)
            .map(|t| Sparse {
                factors: t
                    .powers
                    .iter()
                    .enumerate()
                    .filter(|(_, &k)| k > 0)
                    .map(|(i, &k)| (i, k))
                    .collect(),
                lambda_power: t.lambda_power,
                coeff: t.coeff,
            })
            .collect();
        Ok(Self {
            maps: net.maps().to_vec(),
            terms,
        })
    }

    pub fn cells(&self) -> usize {
        self.maps[0].len()
    }

    pub fn at(&self, lambda: f64) -> Frozen<'_> {
        let mut terms: Vec<(Vec<(usize, u32)>, f64)> = Vec::new();
        for t in &self.terms {
            let c = t.coeff * lambda.powi(t.lambda_power as i32);
            if c == 0.0 {
                continue;
            }
            match terms.iter_mut().find(|(f, _)| *f == t.factors) {
                Some((_, acc)) => *acc += c,
                None => terms.push((t.factors.clone(), c)),
            }
        }
        Frozen {
            maps: &self.maps,
            terms,
        }
    }

    pub fn eval(&self, x: &[f64], lambda: f64) -> Vec<f64> {
        let mut out = vec![0.0; x.len()];
        self.at(lambda).eval(x, &mut out);
        out
    }

    pub fn jacobian(&self, x: &[f64], lambda: f64) -> Matrix {
        self.at(lambda).jacobian(x)
    }
}

impl Frozen<'_> {
    pub fn eval(&self, x: &[f64], out: &mut [f64]) {
        for (p, o) in out.iter_mut().enumerate() {
            *o = self
                .terms
                .iter()
                .map(|(factors, c)| {
                    factors
                        .iter()
                        .fold(*c, |acc, &(i, k)| acc * x[self.maps[i][p]].powi(k as i32))
                })
                .sum();
        }
    }

    pub fn jacobian(&self, x: &[f64]) -> Matrix {
        let n = x.len();
        let mut j = Matrix::zeros(n);
        for p in 0..n {
            for (factors, c) in &self.terms {
                for (slot, &(i, k)) in factors.iter().enumerate() {
                    let mut d = c * f64::from(k) * x[self.maps[i][p]].powi(k as i32 - 1);
                    for (other, &(i2, k2)) in factors.iter().enumerate() {
                        if other != slot {
                            d *= x[self.maps[i2][p]].powi(k2 as i32);
                        }
                    }
                    j[(p, self.maps[i][p])] += d;
                }
            }
        }
        j
    }
}
