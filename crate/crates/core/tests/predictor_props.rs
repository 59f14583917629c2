mod common;

use common::props::*;
use common::*;
use ffbif_core::linear::DEFAULT_TOL;
use ffbif_core::predictor::sync_branch;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(CASES))]

    #[test]
    fn discriminant_is_a_square_in_floats(net in ff_network(12, 4), pick in any::<usize>(), v in ints()) {
        discriminant_float(&net, pick, &v)?;
    }

    #[test]
    fn discriminant_is_a_square_exactly(net in ff_network(12, 4), pick in any::<usize>(), v in ints()) {
        discriminant_exact(&net, pick, &v)?;
    }

    #[test]
    fn negating_lambda_swaps_sub_and_supercritical(net in ff_network(7, 3), pick in any::<usize>(), v in ints()) {
        sub_super_duality(&net, pick, &v)?;
    }

    #[test]
    fn synchronous_branch_solves_the_reduced_jet(net in ff_network(12, 4), pick in any::<usize>(), v in ints()) {
        // On x_p = x for all p the jet reduces to K x + ℓ λ + Σf x² + Σfλ x λ + fλλ λ² = 0.
        let Some(cell) = pick_cell(&net, pick) else { return Ok(()); };
        let p = critical_params(&net, cell, &v);
        let Ok(s) = sync_branch(&p, DEFAULT_TOL) else { return Ok(()); };
        let sf: f64 = p.f2.iter().flatten().sum();
        let sl: f64 = p.flam.iter().sum();
        let lin = s.k * s.d + p.ell;
        let quad = s.k * s.r + sf * s.d * s.d + sl * s.d + p.flamlam;
        let scale = 1.0 + s.k.abs() * (s.d.abs() + s.r.abs()) + p.ell.abs()
            + sf.abs() * s.d * s.d + sl.abs() * s.d.abs() + p.flamlam.abs();
        prop_assert!(lin.abs() <= 1e-12 * scale);
        prop_assert!(quad.abs() <= 1e-12 * scale);
    }
}
