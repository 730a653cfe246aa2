//! WebAssembly bindings for the browser demo: fit the patch mesh to a ball,
//! run a small reservoir problem and query the step ladder.

use seepage_core::config::ScenarioConfig;
use seepage_core::driver::Simulation;
use seepage_core::mesh::Phase;
use wasm_bindgen::prelude::*;

/// Fits the falling-ball mesh to a ball at `(cx, cy)` with radius `r` on a
/// box of `nx` by `ny` patches. Returns 7 numbers per triangle: the three
/// vertices followed by the phase (0 fluid, 1 solid).
#[wasm_bindgen]
pub fn fit_mesh(cx: f64, cy: f64, r: f64, nx: usize, ny: usize) -> Result<Vec<f64>, JsError> {
    let mut cfg = ScenarioConfig::falling_ball();
    let g = &mut cfg.geometry;
    (g.center_x, g.center_y, g.radius, g.nx, g.ny) = (cx, cy, r, nx, ny);
    g.first_patch = 0.0;
    cfg.validate().map_err(|e| JsError::new(&e.to_string()))?;
    let scenario = cfg.build().map_err(|e| JsError::new(&e.to_string()))?;
    let sim = Simulation::new(scenario).map_err(|e| JsError::new(&e.to_string()))?;
    let mesh = sim.mesh();
    let mut out = Vec::with_capacity(7 * mesh.cells().len());
    for (c, cell) in mesh.cells().iter().enumerate() {
        for p in mesh.cell_points(c) {
            out.extend_from_slice(&p);
        }
        out.push(if cell.phase == Phase::Solid { 1.0 } else { 0.0 });
    }
    Ok(out)
}

/// Runs the two-reservoir problem on `n` by `n` patches per reservoir up to
/// `t_end`. Returns `[flux_left, flux_right, x_0, pl_0, x_1, pl_1, ...]`.
#[wasm_bindgen]
pub fn reservoir_profile(amplitude: f64, conductivity: f64, t_end: f64, n: usize) -> Result<Vec<f64>, JsError> {
    let mut cfg = ScenarioConfig::reservoir();
    cfg.geometry.nx = 2 * n;
    cfg.geometry.ny = n;
    cfg.time.inflow_amplitude = amplitude;
    cfg.time.t_end = t_end;
    cfg.porous.k_tau = conductivity;
    cfg.porous.k_n = conductivity;
    cfg.validate().map_err(|e| JsError::new(&e.to_string()))?;
    let scenario = cfg.build().map_err(|e| JsError::new(&e.to_string()))?;
    let mut sim = Simulation::new(scenario).map_err(|e| JsError::new(&e.to_string()))?;
    let mut flux = [0.0; 2];
    while !sim.finished() {
        let report = sim.step().map_err(|e| JsError::new(&e.to_string()))?;
        flux = [report.record.flux_left, report.record.flux_right];
    }
    let state = sim.state();
    let mut out = flux.to_vec();
    for (x, p) in state.pl_x.iter().zip(&state.pl) {
        out.extend_from_slice(&[*x, *p]);
    }
    Ok(out)
}

/// Time step chosen for a wall distance `d_min` by the halving ladder.
#[wasm_bindgen]
pub fn ladder_step(d_min: f64, dt: f64, dt_min: f64, unit: f64) -> f64 {
    let mut cfg = ScenarioConfig::falling_ball();
    (cfg.time.dt, cfg.time.dt_min, cfg.time.ladder_unit) = (dt, dt_min, unit);
    cfg.controller().adapt_dt(d_min)
}
