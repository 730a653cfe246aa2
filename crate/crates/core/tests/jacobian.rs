//! Assembled Jacobians against central finite differences of the residual.

mod common;

use common::jacobian::{small_ball, worst_mismatch};
use seepage_core::config::ScenarioConfig;

#[test]
fn jacobian_matches_differences_without_contact() {
    let worst = worst_mismatch(&small_ball("penalty", 5e-5), 4, 1);
    assert!(worst < 1e-5, "relative mismatch {worst:e}");
}

#[test]
fn jacobian_matches_differences_with_active_penalty_contact() {
    // a gap larger than the box keeps every contact point active
    let worst = worst_mismatch(&small_ball("penalty", 1.0), 3, 2);
    assert!(worst < 1e-5, "relative mismatch {worst:e}");
}

#[test]
fn jacobian_matches_differences_with_active_nitsche_contact() {
    let worst = worst_mismatch(&small_ball("nitsche", 1.0), 3, 3);
    assert!(worst < 1e-5, "relative mismatch {worst:e}");
}

#[test]
fn jacobian_matches_differences_for_the_reservoir() {
    let mut cfg = ScenarioConfig::reservoir();
    cfg.geometry.nx = 8;
    cfg.geometry.ny = 4;
    cfg.fluid.convection = true;
    let worst = worst_mismatch(&cfg, 3, 4);
    assert!(worst < 1e-5, "relative mismatch {worst:e}");
}
