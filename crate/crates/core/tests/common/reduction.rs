//! The dG(0) step with the identity domain map against backward Euler.

use seepage_core::config::ScenarioConfig;
use seepage_core::driver::Simulation;
use seepage_core::fluid::{DomainMap, TimeScheme};
use seepage_core::system::{CoupledSystem, Extras};

pub fn coarse_ball() -> ScenarioConfig {
    let mut cfg = ScenarioConfig::falling_ball();
    cfg.geometry.nx = 8;
    cfg.geometry.ny = 20;
    cfg.geometry.max_patch = 6e-3;
    cfg
}

pub fn max_abs(v: impl IntoIterator<Item = f64>) -> f64 {
    v.into_iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Relative entry-wise differences of the Jacobian and of the residual
/// between the two schemes on the same step, after a few steps of the fall.
pub struct Reduction {
    pub mesh_velocity: f64,
    pub jacobian: f64,
    pub residual: f64,
    pub same_pattern: bool,
}

pub fn identity_against_backward_euler() -> Reduction {
    let mut sim = Simulation::new(coarse_ball().build().unwrap()).unwrap();
    for _ in 0..3 {
        sim.step().unwrap();
    }
    let dt = sim.proposed_dt();
    sim.scenario.scheme = TimeScheme::Dg0(DomainMap::Identity);
    let a = sim.prepare(dt).unwrap();
    sim.scenario.scheme = TimeScheme::BackwardEuler;
    let b = sim.prepare(dt).unwrap();

    let physics = sim.scenario.physics.clone();
    let sa = CoupledSystem::new(&a.mesh, &a.dofs, &physics, &a.step, Extras::default());
    let sb = CoupledSystem::new(&b.mesh, &b.dofs, &physics, &b.step, Extras::default());
    let x = a.guess.to_vector(&a.dofs);
    let (ja, jb) = (sa.jacobian_full(&x), sb.jacobian_full(&x));
    let scale = max_abs(ja.values().iter().copied());
    let (ra, rb) = (sa.assemble(&x, None), sb.assemble(&x, None));
    let rscale = max_abs(ra.iter().copied()).max(1.0);
    Reduction {
        mesh_velocity: max_abs(a.step.mesh_velocity.iter().flatten().copied()),
        same_pattern: ja.pattern().nnz() == jb.pattern().nnz(),
        jacobian: max_abs(ja.values().iter().zip(jb.values()).map(|(p, q)| p - q)) / scale,
        residual: max_abs(ra.iter().zip(&rb).map(|(p, q)| p - q)) / rscale,
    }
}
