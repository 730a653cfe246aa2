//! Two reservoirs joined through the porous bottom layer.

use seepage_core::config::ScenarioConfig;
use seepage_core::driver::Simulation;

#[test]
fn layer_flux_balances_and_runs_left_to_right() {
    let cfg = ScenarioConfig::reservoir();
    let mut sim = Simulation::new(cfg.build().unwrap()).unwrap();
    assert_eq!(sim.mesh().cells().len(), 16384);
    let mut last = None;
    while !sim.finished() {
        let r = sim.step().unwrap();
        let net = r.record.flux_left + r.record.flux_right;
        assert!(net.abs() <= 1e-9 * r.flux_abs, "t = {}: net {net:e}, total {:e}", r.record.t, r.flux_abs);
        last = Some(r.record);
    }
    let last = last.unwrap();
    assert!((last.t - 0.25).abs() < 1e-12);
    assert!(last.flux_left > 0.0, "left flux {}", last.flux_left);
    assert!(last.flux_right < 0.0, "right flux {}", last.flux_right);
}

#[test]
fn no_inflow_no_layer_flow() {
    let mut cfg = ScenarioConfig::reservoir();
    cfg.geometry.nx = 8;
    cfg.geometry.ny = 4;
    cfg.time.inflow_amplitude = 0.0;
    cfg.time.t_end = 0.03;
    let mut sim = Simulation::new(cfg.build().unwrap()).unwrap();
    while !sim.finished() {
        let r = sim.step().unwrap();
        assert_eq!(r.flux_abs, 0.0);
    }
    assert!(sim.state().pl.iter().all(|&p| p == 0.0));
}
