//! Oracle-vs-oracle equivalences: the closed forms, the dense solve, the
//! multi-community inverse, and the assembled parameter system must all
//! agree with each other on random valid instances.

mod common;

use common::random_model;
use gossip_blocks_core::oracle::{
    chi_gap, mean_matrices, multi_community_inverse, solve_eq12, stationary_mean_closed_form,
    stationary_mean_solve,
};
use gossip_blocks_core::rng::{stream_rng, Channel};
use nalgebra::{DMatrix, DVector};

#[test]
fn closed_form_matches_dense_solve_on_random_two_community_instances() {
    let mut rng = stream_rng(2024_01, 0, Channel::Algorithm);
    for case in 0..100 {
        let model = random_model(&mut rng, 2, 14, 4, 1);
        let profile = stationary_mean_closed_form(&model).unwrap();
        let dynamics = mean_matrices(&model);
        let solved = stationary_mean_solve(&dynamics, model.stubborn_states()).unwrap();
        let sup = profile
            .x_r
            .iter()
            .zip(&solved)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0f64, f64::max);
        assert!(sup <= 1e-10, "case {case}: sup-norm difference {sup:e}");
    }
}

#[test]
fn multi_community_inverse_reduces_to_the_two_community_closed_form() {
    let mut rng = stream_rng(2024_02, 0, Channel::Algorithm);
    for case in 0..40 {
        let model = random_model(&mut rng, 2, 10, 3, 1);
        let (inv, inv_b) = multi_community_inverse(&model).unwrap();
        let dynamics = mean_matrices(&model);
        let xs = DVector::from_column_slice(model.stubborn_states());
        let via_multi = &inv_b * &xs;
        let profile = stationary_mean_closed_form(&model).unwrap();
        for (i, &chi) in profile.x_r.iter().enumerate() {
            assert!(
                (via_multi[i] - chi).abs() <= 1e-10,
                "case {case}: entry {i} differs"
            );
        }
        let n_r = dynamics.n_regular();
        let direct = (DMatrix::identity(n_r, n_r) - &dynamics.a_bar)
            .try_inverse()
            .expect("stable dynamics invert");
        assert!(
            (&inv - &direct).abs().max() <= 1e-10,
            "case {case}: inverse mismatch"
        );
    }
}

#[test]
fn multi_community_inverse_matches_brute_force_for_k_2_3_4() {
    let mut rng = stream_rng(2024_03, 0, Channel::Algorithm);
    for case in 0..50 {
        let k = 2 + case % 3;
        let model = random_model(&mut rng, k, 3, 2, 0);
        if model.assignment().num_stubborn() == 0 {
            continue;
        }
        let (inv, inv_b) = multi_community_inverse(&model).unwrap();
        let dynamics = mean_matrices(&model);
        let n_r = dynamics.n_regular();
        assert!(n_r <= 12, "instances stay desk-sized");
        let direct = (DMatrix::identity(n_r, n_r) - &dynamics.a_bar)
            .try_inverse()
            .expect("stable dynamics invert");
        let max_inv = (&inv - &direct).abs().max();
        let direct_b = &direct * &dynamics.b_bar;
        let max_b = (&inv_b - &direct_b).abs().max();
        assert!(
            max_inv <= 1e-10 && max_b <= 1e-10,
            "case {case} (K={k}): entrywise errors {max_inv:e}, {max_b:e}"
        );
    }
}

#[test]
fn chi_gap_identity_matches_the_closed_form_chis() {
    let mut rng = stream_rng(2024_04, 0, Channel::Algorithm);
    for case in 0..100 {
        let model = random_model(&mut rng, 2, 12, 4, 0);
        if model.assignment().num_stubborn() == 0 {
            continue;
        }
        let gap = chi_gap(&model).unwrap();
        let profile = stationary_mean_closed_form(&model).unwrap();
        assert!(
            (gap - profile.chi_gap()).abs() <= 1e-12,
            "case {case}: identity {gap} vs closed form {}",
            profile.chi_gap()
        );
    }
}

#[test]
fn assembled_parameter_system_recovers_the_true_pair() {
    let mut rng = stream_rng(2024_05, 0, Channel::Algorithm);
    for case in 0..50 {
        let model = random_model(&mut rng, 2, 10, 3, 1);
        if !model.assumption2_holds() {
            continue;
        }
        let (w_s, w_d) = solve_eq12(&model).unwrap();
        assert!(
            (w_s - model.w_s()).abs() <= 1e-10 && (w_d - model.w_d()).abs() <= 1e-10,
            "case {case}: solved ({w_s}, {w_d}) vs ({}, {})",
            model.w_s(),
            model.w_d()
        );
    }
}

/// The gap is zero exactly on the identifiability boundary, nonzero off it.
#[test]
fn chi_gap_vanishes_exactly_on_constructed_boundary_instances() {
    use gossip_blocks_core::model::{BlockGossipModel, CommunityAssignment};
    // Balanced means with unequal counts: sums 0.5 and (0.25 + 0.75)/2.
    let balanced = BlockGossipModel::new(
        CommunityAssignment::sorted_blocks(&[(2, 1), (2, 2)]).unwrap(),
        {
            let (w_s, _) =
                gossip_blocks_core::model::solve_interaction_probs_k(&[3, 4], 3.0).unwrap();
            w_s
        },
        {
            let (_, w_d) =
                gossip_blocks_core::model::solve_interaction_probs_k(&[3, 4], 3.0).unwrap();
            w_d
        },
        0.5,
        vec![0.5, 0.25, 0.75],
    )
    .unwrap();
    assert!(!balanced.assumption2_holds());
    assert_eq!(chi_gap(&balanced).unwrap(), 0.0);

    let shifted = BlockGossipModel::new(
        balanced.assignment().clone(),
        balanced.w_s(),
        balanced.w_d(),
        0.5,
        vec![0.5, 0.25, 0.8],
    )
    .unwrap();
    assert!(shifted.assumption2_holds());
    assert_ne!(chi_gap(&shifted).unwrap(), 0.0);
}
