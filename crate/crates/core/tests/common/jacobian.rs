//! Assembled Jacobians against central finite differences of the residual.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use seepage_core::config::ScenarioConfig;
use seepage_core::dofs::FieldState;
use seepage_core::driver::Simulation;
use seepage_core::fem::NonlinearSystem;
use seepage_core::system::{CoupledSystem, Extras, ReducedSystem, StepData};

pub fn small_ball(contact_mode: &str, eps_g: f64) -> ScenarioConfig {
    let mut cfg = ScenarioConfig::falling_ball();
    cfg.geometry.nx = 4;
    cfg.geometry.ny = 10;
    cfg.geometry.max_patch = 0.02;
    cfg.contact.mode = contact_mode.into();
    cfg.contact.eps_g = eps_g;
    cfg
}

fn random_pairs(rng: &mut ChaCha8Rng, n: usize, scale: f64) -> Vec<[f64; 2]> {
    (0..n).map(|_| [scale * rng.random_range(-1.0..1.0), scale * rng.random_range(-1.0..1.0)]).collect()
}

fn random_state(rng: &mut ChaCha8Rng, n: usize, n_pl: usize) -> FieldState {
    let mut s = FieldState::zeros(n);
    s.u = random_pairs(rng, n, 0.1);
    s.p = (0..n).map(|_| rng.random_range(-10.0..10.0)).collect();
    s.d = random_pairs(rng, n, 1e-4);
    s.dd = random_pairs(rng, n, 0.1);
    s.pl = (0..n_pl).map(|_| rng.random_range(-1.0..1.0)).collect();
    s
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Largest relative mismatch between `J v` and the central difference of
/// the residual along `v`, over `trials` random states and directions.
pub fn worst_mismatch(cfg: &ScenarioConfig, trials: usize, seed: u64) -> f64 {
    let sim = Simulation::new(cfg.build().unwrap()).unwrap();
    let (mesh, dofs) = (sim.mesh(), sim.dofs());
    let physics = cfg.physics();
    let n = mesh.n_nodes();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..trials {
        let mut step = StepData::steady(n);
        step.dt = Some(1e-3);
        step.u_old = random_pairs(&mut rng, n, 0.1);
        step.d_old = random_pairs(&mut rng, n, 1e-4);
        step.dd_old = random_pairs(&mut rng, n, 0.1);
        step.mesh_velocity = random_pairs(&mut rng, n, 0.01);
        let system = CoupledSystem::new(mesh, dofs, &physics, &step, Extras::default());
        let mut reduced = ReducedSystem { inner: &system };
        let x = dofs.restrict(&random_state(&mut rng, n, dofs.n_pl()).to_vector(dofs));
        let v = dofs.restrict(&random_state(&mut rng, n, dofs.n_pl()).to_vector(dofs));
        let jv = reduced.jacobian(&x).mul_vec(&v);
        let h = 1e-6;
        let shifted = |s: f64| -> Vec<f64> { x.iter().zip(&v).map(|(a, b)| a + s * b).collect() };
        let rp = reduced.residual(&shifted(h));
        let rm = reduced.residual(&shifted(-h));
        let fd: Vec<f64> = rp.iter().zip(&rm).map(|(a, b)| (a - b) / (2.0 * h)).collect();
        let diff: Vec<f64> = fd.iter().zip(&jv).map(|(a, b)| a - b).collect();
        worst = worst.max(norm(&diff) / norm(&jv));
    }
    worst
}
