//! Time loop: explicit geometry update, monolithic solve, step control and
//! observables.

use crate::dofs::{DofMap, FieldState};
use crate::fem::{LuSolver, NewtonError, NewtonSettings};
use crate::fluid::{self, DomainMap, TimeScheme};
use crate::geom::{self, Point};
use crate::mesh::{ExtendedField, FitReport, MeshError, PatchMesh, Phase};
use crate::system::{CoupledSystem, Extras, Physics, ReducedSystem, StepData};

/// Time-step ladder driven by the distance of the solid to the wall.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeController {
    pub base: f64,
    pub dt_min: f64,
    /// Distances below which the step is halved once more, decreasing.
    pub thresholds: Vec<f64>,
    pub t_end: f64,
}

impl TimeController {
    /// Ladder `unit * {2^(m-1), ..., 2, 1}` with `m = log2(base / dt_min)`,
    /// so that crossing every threshold reaches exactly `dt_min`.
    pub fn ladder(base: f64, dt_min: f64, unit: f64, t_end: f64) -> Self {
        let m = if dt_min > 0.0 && base > dt_min { (base / dt_min).log2().round() as i32 } else { 0 };
        let thresholds = (0..m).map(|j| unit * 2f64.powi(m - 1 - j)).collect();
        Self { base, dt_min, thresholds, t_end }
    }

    pub fn validate(&self) -> Result<(), String> {
        if !(self.dt_min > 0.0 && self.dt_min <= self.base) {
            return Err(format!("need 0 < dt_min <= dt (got dt_min = {}, dt = {})", self.dt_min, self.base));
        }
        if !(self.t_end >= 0.0) {
            return Err(format!("end time must be non-negative, got {}", self.t_end));
        }
        if self.thresholds.windows(2).any(|w| w[1] >= w[0]) || self.thresholds.iter().any(|&t| !(t > 0.0)) {
            return Err("step thresholds must be positive and strictly decreasing".into());
        }
        Ok(())
    }

    /// Step size for a solid at distance `d_min` from the wall. A missing
    /// distance (no solid) gives the base step.
    pub fn adapt_dt(&self, d_min: f64) -> f64 {
        if d_min.is_nan() {
            return self.base;
        }
        let k = self.thresholds.iter().filter(|&&th| d_min < th).count() as i32;
        (self.base / 2f64.powi(k)).max(self.dt_min)
    }
}

/// One row of the simulation log.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct LogRecord {
    pub t: f64,
    pub dt: f64,
    pub d_min: f64,
    pub avg_vy: f64,
    pub contact_force: f64,
    pub flux_left: f64,
    pub flux_right: f64,
    pub newton_iters: usize,
}

/// Extra per-step information that is not part of the log file.
#[derive(Debug, Clone, Default)]
pub struct StepReport {
    pub record: LogRecord,
    /// Integral of `|u . n|` over the porous wall.
    pub flux_abs: f64,
    pub complementarity: f64,
    pub residual_norm: f64,
    pub fit: FitReport,
    /// Number of rejected attempts before the step was accepted.
    pub rejected: usize,
}

#[derive(Debug, thiserror::Error)]
pub enum DriverError {
    #[error("mesh: {0}")]
    Mesh(#[from] MeshError),
    #[error("step at t = {t} failed with dt = {dt}: {source}")]
    Solver { t: f64, dt: f64, source: NewtonError },
}

/// A fully specified run.
pub struct Scenario {
    /// Unfitted patch mesh; its lattice is fitted anew at every step.
    pub template: PatchMesh,
    /// Reference solid shape (`<= 0` inside); `None` for a pure fluid run.
    pub shape: Option<Box<dyn Fn(Point) -> f64>>,
    pub physics: Physics,
    pub scheme: TimeScheme,
    /// Amplitude of the inflow pressure `a sin(2 pi t)`.
    pub inflow_amplitude: f64,
    pub controller: TimeController,
    pub newton: NewtonSettings,
    pub min_cut: f64,
    /// Width of the band in which fields are extended across the interface.
    pub band: f64,
}

/// Mesh, unknowns and mapped previous-step data of one step.
pub struct PreparedStep {
    pub mesh: PatchMesh,
    pub dofs: DofMap,
    pub step: StepData,
    /// Mapped previous state, the initial Newton iterate.
    pub guess: FieldState,
    pub fit: FitReport,
}

pub struct Simulation {
    pub scenario: Scenario,
    mesh: PatchMesh,
    dofs: DofMap,
    state: FieldState,
    t: f64,
    lu: LuSolver,
    last_d_min: f64,
    steps: usize,
}

/// Smallest height of the interface after adding `increment(k)` at its nodes,
/// sampled at the two-point Gauss rule of each segment where contact is
/// evaluated; NaN without an interface.
pub fn interface_min_height(mesh: &PatchMesh, increment: impl Fn(usize) -> f64) -> f64 {
    let mut m = f64::NAN;
    for s in mesh.interface() {
        let h = s.nodes.map(|k| mesh.node(k)[1] + increment(k));
        for (t, _) in crate::fem::GAUSS2 {
            m = m.min((1.0 - t) * h[0] + t * h[1]);
        }
    }
    m
}

impl Simulation {
    /// Fits the initial configuration (zero displacement, fluid and solid at
    /// rest).
    pub fn new(scenario: Scenario) -> Result<Self, DriverError> {
        let mut mesh = scenario.template.clone();
        if let Some(shape) = &scenario.shape {
            let lattice: Vec<Point> = (0..mesh.n_nodes()).map(|k| mesh.lattice_position(k)).collect();
            mesh.fit(|k| shape(lattice[k]), scenario.min_cut)?;
        }
        let dofs = DofMap::new(&mesh, scenario.physics.wall_mode, None);
        let mut state = FieldState::zeros(mesh.n_nodes());
        state.pl = vec![0.0; dofs.n_pl()];
        state.pl_x = dofs.pl_x.clone();
        let last_d_min = interface_min_height(&mesh, |_| 0.0);
        Ok(Self { scenario, mesh, dofs, state, t: 0.0, lu: LuSolver::new(), last_d_min, steps: 0 })
    }

    pub fn time(&self) -> f64 {
        self.t
    }

    pub fn mesh(&self) -> &PatchMesh {
        &self.mesh
    }

    pub fn dofs(&self) -> &DofMap {
        &self.dofs
    }

    pub fn state(&self) -> &FieldState {
        &self.state
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    /// Number of LU factorizations performed so far.
    pub fn factorizations(&self) -> usize {
        self.lu.factorizations
    }

    /// Log record of the initial state.
    pub fn initial_record(&self) -> LogRecord {
        LogRecord { t: self.t, d_min: self.last_d_min, ..Default::default() }
    }

    pub fn finished(&self) -> bool {
        self.t >= self.scenario.controller.t_end * (1.0 - 1e-12)
    }

    /// Step size the controller proposes for the next step, cut to end on
    /// the final time.
    pub fn proposed_dt(&self) -> f64 {
        let c = &self.scenario.controller;
        c.adapt_dt(self.last_d_min).min(c.t_end - self.t)
    }

    /// Advances by the controller's step, halving it on solver failure down
    /// to the minimum step.
    pub fn step(&mut self) -> Result<StepReport, DriverError> {
        let mut dt = self.proposed_dt();
        let dt_floor = self.scenario.controller.dt_min.min(dt);
        let mut rejected = 0;
        loop {
            match self.advance(dt) {
                Ok(mut report) => {
                    report.rejected = rejected;
                    return Ok(report);
                }
                Err(DriverError::Solver { source, .. }) if dt * 0.5 >= dt_floor * (1.0 - 1e-12) => {
                    log::warn!("t = {:.6e}: rejecting dt = {dt:.3e} ({source}), halving", self.t);
                    dt *= 0.5;
                    rejected += 1;
                }
                Err(e) => return Err(e),
            }
        }
    }

    /// Geometry update and field transfer of a step of length `dt`: refit
    /// the mesh to the interface moved by the previous displacement and map
    /// the old fields onto it.
    pub fn prepare(&self, dt: f64) -> Result<PreparedStep, MeshError> {
        let sc = &self.scenario;
        let band = sc.band;
        let t_new = self.t + dt;
        let old_mesh = &self.mesh;
        let old = &self.state;
        let solid_d = ExtendedField::new(old_mesh, Phase::Solid, &old.d, band);
        let solid_dd = ExtendedField::new(old_mesh, Phase::Solid, &old.dd, band);
        let fluid_u = ExtendedField::new(old_mesh, Phase::Fluid, &old.u, band);

        let mut mesh = sc.template.clone();
        let mut fit = FitReport::default();
        if let Some(shape) = &sc.shape {
            let level = |k: usize| {
                let x = sc.template.lattice_position(k);
                match solid_d.at_node(k, x) {
                    Some(d) => shape(geom::sub(x, d)),
                    None => shape(x).max(f64::MIN_POSITIVE),
                }
            };
            let values: Vec<f64> = (0..mesh.n_nodes()).map(level).collect();
            fit = mesh.fit(|k| values[k], sc.min_cut)?;
        }
        let dofs = DofMap::new(&mesh, sc.physics.wall_mode, None);

        // pull-back of every node to the previous configuration
        let n = mesh.n_nodes();
        let (map, moving) = match sc.scheme {
            TimeScheme::Dg0(DomainMap::Transport) => (true, true),
            TimeScheme::Dg0(DomainMap::Identity) => (false, true),
            TimeScheme::BackwardEuler => (false, false),
        };
        let locate = |x: Point| old_mesh.locate(x);
        let eval = |field: &ExtendedField<2>, k: usize, y: Point| {
            if map {
                field.at_node(k, y)
            } else {
                field.at_point(locate, y)
            }
        };
        let mut step = StepData::steady(n);
        step.dt = Some(dt);
        step.p_in = fluid::inflow_pressure(sc.inflow_amplitude, t_new);
        let mut guess = FieldState::zeros(n);
        for k in 0..n {
            let x = mesh.node(k);
            let y = if map { old_mesh.node(k) } else { x };
            if moving {
                step.mesh_velocity[k] = geom::scale(geom::sub(x, y), 1.0 / dt);
            }
            let d = eval(&solid_d, k, y);
            let dd = eval(&solid_dd, k, y);
            step.d_old[k] = d.unwrap_or([0.0; 2]);
            step.dd_old[k] = dd.unwrap_or([0.0; 2]);
            step.u_old[k] = eval(&fluid_u, k, y).or(dd).unwrap_or([0.0; 2]);
            guess.u[k] = step.u_old[k];
            guess.d[k] = step.d_old[k];
            guess.dd[k] = step.dd_old[k];
            guess.p[k] = if old_mesh.node_has_fluid(k) { old.p[k] } else { 0.0 };
        }
        guess.pl = old.pl.clone();
        guess.pl_x = old.pl_x.clone();
        Ok(PreparedStep { mesh, dofs, step, guess, fit })
    }

    /// One step of length `dt`: [`Simulation::prepare`], then a monolithic
    /// solve of all fields. The state is only replaced on success.
    pub fn advance(&mut self, dt: f64) -> Result<StepReport, DriverError> {
        let PreparedStep { mesh, dofs, step, guess, fit } = self.prepare(dt)?;
        let sc = &self.scenario;
        let t_new = self.t + dt;
        let system = CoupledSystem::new(&mesh, &dofs, &sc.physics, &step, Extras::default());
        let x0 = dofs.restrict(&guess.to_vector(&dofs));
        let outcome = crate::fem::newton_solve_with(&mut ReducedSystem { inner: &system }, x0, &sc.newton, &mut self.lu)
            .map_err(|source| DriverError::Solver { t: self.t, dt, source })?;
        let x = dofs.expand(&outcome.x);
        let obs = system.observe(&x);
        let state = FieldState::from_vector(&dofs, &x);
        let d_min = if sc.shape.is_some() {
            interface_min_height(&mesh, |k| state.d[k][1] - step.d_old[k][1])
        } else {
            f64::NAN
        };
        drop(system);

        let record = LogRecord {
            t: t_new,
            dt,
            d_min,
            avg_vy: obs.avg_vy,
            contact_force: obs.contact_force,
            flux_left: obs.flux_left,
            flux_right: obs.flux_right,
            newton_iters: outcome.iterations,
        };
        self.mesh = mesh;
        self.dofs = dofs;
        self.state = state;
        self.t = t_new;
        self.last_d_min = d_min;
        self.steps += 1;
        Ok(StepReport {
            record,
            flux_abs: obs.flux_abs,
            complementarity: obs.complementarity,
            residual_norm: outcome.residual_norm,
            fit,
            rejected: 0,
        })
    }
}

/// Events extracted from a falling-solid log.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct BounceAnalysis {
    /// First record with an active contact force.
    pub impact: Option<LogRecord>,
    /// Start of the contact-free phase that ends the first contact episode.
    pub release: Option<LogRecord>,
    pub bounces: usize,
    pub peak_force: f64,
    pub min_d_min: f64,
}

/// Impact is the first record with positive contact force. Release is the
/// first zero-force record after which the solid leaves the contact zone
/// (`d_min > 2 eps_g`) without touching again; zero-force records inside an
/// on/off contact chatter do not count. A bounce is a dip of `d_min` below
/// `2 eps_g` followed by a rise above `10 eps_g`.
pub fn analyse_bounces(log: &[LogRecord], eps_g: f64) -> BounceAnalysis {
    let mut out = BounceAnalysis { min_d_min: f64::INFINITY, ..Default::default() };
    let mut armed = false;
    let mut candidate = None;
    for r in log {
        out.peak_force = out.peak_force.max(r.contact_force);
        if !r.d_min.is_nan() {
            out.min_d_min = out.min_d_min.min(r.d_min);
        }
        if out.impact.is_none() {
            if r.contact_force > 0.0 {
                out.impact = Some(*r);
            }
        } else if out.release.is_none() {
            if r.contact_force > 0.0 {
                candidate = None;
            } else {
                candidate = candidate.or(Some(*r));
                if r.d_min > 2.0 * eps_g {
                    out.release = candidate;
                }
            }
        }
        if r.d_min < 2.0 * eps_g {
            armed = true;
        } else if armed && r.d_min > 10.0 * eps_g {
            out.bounces += 1;
            armed = false;
        }
    }
    if out.release.is_none() {
        out.release = candidate;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ball_ladder() -> TimeController {
        TimeController::ladder(2e-3, 1.25e-4, 2e-4, 1.0)
    }

    #[test]
    fn ladder_thresholds() {
        let c = ball_ladder();
        assert_eq!(c.thresholds, vec![1.6e-3, 8e-4, 4e-4, 2e-4]);
        c.validate().unwrap();
    }

    #[test]
    fn adapt_dt_examples() {
        let c = ball_ladder();
        assert_eq!(c.adapt_dt(0.04), 2e-3);
        assert_eq!(c.adapt_dt(1e-5), 1.25e-4);
        // monotone approach halves once per threshold crossed
        let expected = [2e-3, 1e-3, 5e-4, 2.5e-4, 1.25e-4];
        for (k, d) in [5e-3, 1e-3, 5e-4, 3e-4, 1e-4].into_iter().enumerate() {
            assert_eq!(c.adapt_dt(d), expected[k]);
        }
        assert_eq!(c.adapt_dt(f64::NAN), 2e-3);
    }

    #[test]
    fn ladder_reaches_smaller_minimum() {
        let c = TimeController::ladder(2e-3, 3.125e-5, 2e-4, 1.0);
        assert_eq!(c.thresholds.len(), 6);
        assert_eq!(c.adapt_dt(0.0), 3.125e-5);
    }

    #[test]
    fn invalid_controller() {
        assert!(TimeController::ladder(1e-3, 2e-3, 1.0, 1.0).validate().is_err());
        let mut c = ball_ladder();
        c.thresholds = vec![1.0, 2.0];
        assert!(c.validate().is_err());
    }

    fn rec(t: f64, d_min: f64, force: f64) -> LogRecord {
        LogRecord { t, d_min, contact_force: force, ..Default::default() }
    }

    #[test]
    fn bounce_detection() {
        let eps = 1.0;
        let log = [
            rec(0.0, 40.0, 0.0),
            rec(1.0, 1.5, 2.0),
            rec(2.0, 5.0, 0.0),
            rec(3.0, 11.0, 0.0),
            rec(4.0, 1.0, 1.0),
            rec(5.0, 12.0, 0.0),
            rec(6.0, 1.9, 0.5),
        ];
        let a = analyse_bounces(&log, eps);
        assert_eq!(a.bounces, 2);
        assert_eq!(a.impact.unwrap().t, 1.0);
        assert_eq!(a.release.unwrap().t, 2.0);
        assert_eq!(a.peak_force, 2.0);
        assert_eq!(a.min_d_min, 1.0);
    }

    #[test]
    fn chatter_is_not_a_release() {
        let log = [
            rec(0.0, 3.0, 0.0),
            rec(1.0, 0.9, 1.0),
            rec(2.0, 1.1, 0.0),
            rec(3.0, 0.8, 2.0),
            rec(4.0, 1.2, 0.0),
            rec(5.0, 1.5, 0.0),
            rec(6.0, 2.5, 0.0),
            rec(7.0, 0.9, 1.0),
        ];
        let a = analyse_bounces(&log, 1.0);
        assert_eq!(a.impact.unwrap().t, 1.0);
        assert_eq!(a.release.unwrap().t, 4.0);
    }
}
