//! Built-in networks and responses for the worked examples.

use crate::dynamics::{ResponsePolynomial, Term};
use crate::network::Network;

#[derive(Clone, Debug)]
pub struct Preset {
    pub name: &'static str,
    pub title: &'static str,
    pub net: Network,
    pub poly: ResponsePolynomial,
    /// Initial state for Euler sweeps, when the example has one.
    pub x0: Option<Vec<f64>>,
}

pub const NAMES: [&str; 5] = ["fig2", "fig3a", "fig3b", "fig5a", "fig5b"];

/// Five cells, input maps red, blue, grey, magenta; cell 5 is maximal.
pub fn five_cell_network() -> Network {
    Network::from_one_based(&[
        vec![1, 2, 3, 4, 5],
        vec![2, 5, 4, 5, 5],
        vec![3, 4, 5, 5, 5],
        vec![4, 5, 5, 5, 5],
        vec![5, 5, 5, 5, 5],
    ])
    .expect("valid network")
}

/// Four cells, two inputs; cell 2 feeds itself through the second input.
pub fn four_cell_top() -> Network {
    Network::from_one_based(&[vec![1, 2, 3, 4], vec![2, 3, 4, 4], vec![4, 2, 4, 4]])
        .expect("valid network")
}

/// Four cells, two inputs; cell 1 feeds itself through the second input.
pub fn four_cell_bottom() -> Network {
    Network::from_one_based(&[vec![1, 2, 3, 4], vec![2, 3, 4, 4], vec![1, 4, 4, 4]])
        .expect("valid network")
}

fn term(powers: [u32; 5], lambda_power: u32, coeff: f64) -> Term {
    Term::new(powers.to_vec(), lambda_power, coeff)
}

fn term3(powers: [u32; 3], lambda_power: u32, coeff: f64) -> Term {
    Term::new(powers.to_vec(), lambda_power, coeff)
}

/// `y + 2z - 4w + 5λx - 0.5x²`.
pub fn fig2_response() -> ResponsePolynomial {
    ResponsePolynomial::new(vec![
        term([0, 1, 0, 0, 0], 0, 1.0),
        term([0, 0, 1, 0, 0], 0, 2.0),
        term([0, 0, 0, 0, 1], 0, -4.0),
        term([1, 0, 0, 0, 0], 1, 5.0),
        term([2, 0, 0, 0, 0], 0, -0.5),
    ])
}

/// `y - 2z + λx - 0.1x²`.
pub fn fig3_response() -> ResponsePolynomial {
    ResponsePolynomial::new(vec![
        term3([0, 1, 0], 0, 1.0),
        term3([0, 0, 1], 0, -2.0),
        term3([1, 0, 0], 1, 1.0),
        term3([2, 0, 0], 0, -0.1),
    ])
}

/// `y - 2z + v + w + λ - x² + xy + λx`; the cross term carries the whole
/// `Σ_j f_{Id σ_j} = 1/2`.
pub fn fig5a_response() -> ResponsePolynomial {
    ResponsePolynomial::new(vec![
        term([0, 1, 0, 0, 0], 0, 1.0),
        term([0, 0, 1, 0, 0], 0, -2.0),
        term([0, 0, 0, 1, 0], 0, 1.0),
        term([0, 0, 0, 0, 1], 0, 1.0),
        term([0, 0, 0, 0, 0], 1, 1.0),
        term([2, 0, 0, 0, 0], 0, -1.0),
        term([1, 1, 0, 0, 0], 0, 1.0),
        term([1, 0, 0, 0, 0], 1, 1.0),
    ])
}

/// `y + z/2 - v/2 - λ + x²`.
pub fn fig5b_response() -> ResponsePolynomial {
    ResponsePolynomial::new(vec![
        term([0, 1, 0, 0, 0], 0, 1.0),
        term([0, 0, 1, 0, 0], 0, 0.5),
        term([0, 0, 0, 1, 0], 0, -0.5),
        term([0, 0, 0, 0, 0], 1, -1.0),
        term([2, 0, 0, 0, 0], 0, 1.0),
    ])
}

pub fn preset(name: &str) -> Option<Preset> {
    let p = match name {
        "fig2" => Preset {
            name: "fig2",
            title: "five-cell network, y + 2z - 4w + 5λx - 0.5x²",
            net: five_cell_network(),
            poly: fig2_response(),
            x0: Some(vec![0.01, 0.02, 0.03, 0.04, -0.05]),
        },
        "fig3a" => Preset {
            name: "fig3a",
            title: "four-cell network (top), y - 2z + λx - 0.1x²",
            net: four_cell_top(),
            poly: fig3_response(),
            x0: Some(vec![0.001, 0.002, 0.003, -0.004]),
        },
        "fig3b" => Preset {
            name: "fig3b",
            title: "four-cell network (bottom), y - 2z + λx - 0.1x²",
            net: four_cell_bottom(),
            poly: fig3_response(),
            x0: Some(vec![0.001, 0.002, 0.003, -0.004]),
        },
        "fig5a" => Preset {
            name: "fig5a",
            title: "five-cell network, ℓ = 1, one transcritical and three saddle-node roots",
            net: five_cell_network(),
            poly: fig5a_response(),
            x0: None,
        },
        "fig5b" => Preset {
            name: "fig5b",
            title: "five-cell network, ℓ = -1, every root supercritical",
            net: five_cell_network(),
            poly: fig5b_response(),
            x0: None,
        },
        _ => return None,
    };
    Some(p)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_name_resolves_and_is_consistent() {
        for name in NAMES {
            let p = preset(name).unwrap();
            let jet = p.poly.jet(p.net.n_inputs()).unwrap();
            jet.validate().unwrap();
            assert_eq!(p.poly.constant_term(), 0.0);
            if let Some(x0) = &p.x0 {
                assert_eq!(x0.len(), p.net.cells());
            }
        }
        assert!(preset("nope").is_none());
    }

    #[test]
    fn fig5_jets_match_the_stated_parameters() {
        let a = fig5a_response().jet(5).unwrap();
        assert_eq!(a.a, vec![0.0, 1.0, -2.0, 1.0, 1.0]);
        assert_eq!((a.ell, a.f2[0][0], a.flam[0]), (1.0, -1.0, 1.0));
        assert_eq!(a.f2[0][1..].iter().sum::<f64>(), 0.5);
        let b = fig5b_response().jet(5).unwrap();
        assert_eq!(b.a, vec![0.0, 1.0, 0.5, -0.5, 0.0]);
        assert_eq!((b.ell, b.f2[0][0], b.flam[0]), (-1.0, 1.0, 0.0));
    }
}
