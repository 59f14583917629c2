//! Polynomial response functions `f(y_0, .., y_{n-1}; λ)`.

use serde::{Deserialize, Serialize};

use super::DynamicsError;
use crate::linear::SystemParams;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Term {
    pub powers: Vec<u32>,
    #[serde(default)]
    pub lambda_power: u32,
    pub coeff: f64,
}

impl Term {
    pub fn new(powers: Vec<u32>, lambda_power: u32, coeff: f64) -> Self {
        Self {
            powers,
            lambda_power,
            coeff,
        }
    }

    fn degree(&self) -> u32 {
        self.powers.iter().sum::<u32>() + self.lambda_power
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ResponsePolynomial {
    pub terms: Vec<Term>,
}

impl ResponsePolynomial {
    pub fn new(terms: Vec<Term>) -> Self {
        Self { terms }
    }

    pub fn from_json(text: &str) -> Result<Self, DynamicsError> {
        let p: Self =
            serde_json::from_str(text).map_err(|e| DynamicsError::Malformed(e.to_string()))?;
        if let Some(n) = p.terms.first().map(|t| t.powers.len()) {
            p.check_arity(n)?;
        }
        Ok(p)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("polynomial serializes")
    }

    /// Every term must have `n` powers.
    pub fn check_arity(&self, n: usize) -> Result<(), DynamicsError> {
        match self.terms.iter().find(|t| t.powers.len() != n) {
            Some(t) => Err(DynamicsError::ArityMismatch {
                expected: n,
                got: t.powers.len(),
            }),
            None => Ok(()),
        }
    }

    pub fn eval(&self, y: &[f64], lambda: f64) -> f64 {
        self.terms
            .iter()
            .map(|t| {
                t.powers
                    .iter()
                    .zip(y)
                    .fold(t.coeff * lambda.powi(t.lambda_power as i32), |acc, (&k, &v)| {
                        acc * v.powi(k as i32)
                    })
            })
            .sum()
    }

    pub fn constant_term(&self) -> f64 {
        self.terms
            .iter()
            .filter(|t| t.degree() == 0)
            .map(|t| t.coeff)
            .sum()
    }

    /// The same response written in `μ = -λ`.
    pub fn negated_lambda(&self) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|t| Term {
                    coeff: if t.lambda_power % 2 == 1 { -t.coeff } else { t.coeff },
                    ..t.clone()
                })
                .collect(),
        }
    }

    /// The 2-jet at the origin with `n` inputs.
    pub fn jet(&self, n: usize) -> Result<SystemParams, DynamicsError> {
        self.check_arity(n)?;
        let mut p = SystemParams::zeros(n);
        for t in &self.terms {
            let vars: Vec<usize> = t
                .powers
                .iter()
                .enumerate()
                .flat_map(|(i, &k)| std::iter::repeat_n(i, k as usize))
                .collect();
            match (t.degree(), t.lambda_power, vars.as_slice()) {
                (1, 1, []) => p.ell += t.coeff,
                (1, 0, [i]) => p.a[*i] += t.coeff,
                (2, 2, []) => p.flamlam += t.coeff,
                (2, 1, [i]) => p.flam[*i] += t.coeff,
                (2, 0, [i, j]) if i == j => p.f2[*i][*i] += t.coeff,
                (2, 0, [i, j]) => {
                    p.f2[*i][*j] += t.coeff / 2.0;
                    p.f2[*j][*i] += t.coeff / 2.0;
                }
                _ => {}
            }
        }
        Ok(p)
    }
}

pub fn jet_of(poly: &ResponsePolynomial, n: usize) -> Result<SystemParams, DynamicsError> {
    poly.jet(n)
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;

    /// `y + 2z - 4w + 5λx - 0.5x²` in inputs `(x, y, z, v, w)`.
    pub fn fig2() -> ResponsePolynomial {
        ResponsePolynomial::new(vec![
            Term::new(vec![0, 1, 0, 0, 0], 0, 1.0),
            Term::new(vec![0, 0, 1, 0, 0], 0, 2.0),
            Term::new(vec![0, 0, 0, 0, 1], 0, -4.0),
            Term::new(vec![1, 0, 0, 0, 0], 1, 5.0),
            Term::new(vec![2, 0, 0, 0, 0], 0, -0.5),
        ])
    }

    /// `y - 2z + λx - 0.1x²` in inputs `(x, y, z)`.
    pub fn fig3() -> ResponsePolynomial {
        ResponsePolynomial::new(vec![
            Term::new(vec![0, 1, 0], 0, 1.0),
            Term::new(vec![0, 0, 1], 0, -2.0),
            Term::new(vec![1, 0, 0], 1, 1.0),
            Term::new(vec![2, 0, 0], 0, -0.1),
        ])
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    #[test]
    fn jets_of_the_figure_responses() {
        let p = fig2().jet(5).unwrap();
        assert_eq!(p.a, vec![0.0, 1.0, 2.0, 0.0, -4.0]);
        assert_eq!(p.ell, 0.0);
        assert_eq!(p.f2[0][0], -0.5);
        assert_eq!(p.flam, vec![5.0, 0.0, 0.0, 0.0, 0.0]);
        assert_eq!(p.f2.iter().flatten().filter(|v| **v != 0.0).count(), 1);
        let p = fig3().jet(3).unwrap();
        assert_eq!(p.a, vec![0.0, 1.0, -2.0]);
        assert_eq!((p.f2[0][0], p.flam[0]), (-0.1, 1.0));
        assert_eq!(ResponsePolynomial::default().jet(4).unwrap(), SystemParams::zeros(4));
    }

    #[test]
    fn jet_conventions() {
        let poly = ResponsePolynomial::new(vec![
            Term::new(vec![1, 1], 0, 3.0),
            Term::new(vec![0, 0], 2, 0.7),
            Term::new(vec![0, 0], 1, -2.0),
            Term::new(vec![3, 0], 0, 9.0),
            Term::new(vec![0, 1], 1, 4.0),
        ]);
        let p = poly.jet(2).unwrap();
        assert_eq!(p.f2, vec![vec![0.0, 1.5], vec![1.5, 0.0]]);
        assert_eq!((p.ell, p.flamlam), (-2.0, 0.7));
        assert_eq!(p.flam, vec![0.0, 4.0]);
        p.validate().unwrap();
    }

    #[test]
    fn arity_and_json() {
        assert!(matches!(
            fig2().jet(3),
            Err(DynamicsError::ArityMismatch { expected: 3, got: 5 })
        ));
        let back = ResponsePolynomial::from_json(&fig3().to_json()).unwrap();
        assert_eq!(back, fig3());
        let bad = r#"{"terms":[{"powers":[1],"coeff":1},{"powers":[1,0],"coeff":1}]}"#;
        assert!(ResponsePolynomial::from_json(bad).is_err());
    }

    #[test]
    fn evaluation() {
        let f = fig2();
        assert_eq!(f.eval(&[0.0; 5], 0.0), 0.0);
        assert_eq!(f.eval(&[2.0, 1.0, 1.0, 7.0, 1.0], 0.5), 1.0 + 2.0 - 4.0 + 5.0 - 2.0);
        assert_eq!(f.constant_term(), 0.0);
        let g = f.negated_lambda();
        assert_eq!(g.eval(&[2.0, 0.0, 0.0, 0.0, 0.0], -0.5), f.eval(&[2.0, 0.0, 0.0, 0.0, 0.0], 0.5));
    }
}
