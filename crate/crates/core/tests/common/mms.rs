//! Steady Stokes manufactured solutions on fitted patch meshes.

use seepage_core::dofs::{DofMap, FieldState, PorousWallMode};
use seepage_core::fem::{bary_point, newton_solve, NewtonSettings, TRI7};
use seepage_core::fluid::FluidParams;
use seepage_core::geom::{p1_gradients, Point};
use seepage_core::mesh::{BoundaryTag, PatchMesh, PatchMeshBuilder, Phase};
use seepage_core::porous::PorousParams;
use seepage_core::solid::SolidParams;
use seepage_core::system::{CoupledSystem, Extras, Physics, ReducedSystem, StepData};

fn physics(mu: f64) -> Physics {
    Physics {
        fluid: FluidParams { rho: 1.0, mu, gamma: 100.0, gamma_p: 1e-2 },
        solid: SolidParams { rho: 1.0, lambda: 1.0, mu: 1.0, gravity: [0.0, 0.0] },
        porous: PorousParams { eps_p: 1.0, k_tau: 1.0, k_n: 1.0, alpha: 0.0 },
        wall_mode: PorousWallMode::Darcy,
        contact: None,
        fluid_gravity: [0.0, 0.0],
        convection: false,
    }
}

fn unit_square(n: usize) -> PatchMesh {
    let breaks: Vec<f64> = (0..=n).map(|i| i as f64 / n as f64).collect();
    PatchMeshBuilder::new()
        .block([0.0, 0.0], breaks.clone(), breaks)
        .build(|_, normal| Some(if normal[0] > 0.5 { BoundaryTag::Outflow } else { BoundaryTag::Wall }))
        .unwrap()
}

struct Exact<'a> {
    u: &'a dyn Fn(Point) -> [f64; 2],
    grad: &'a dyn Fn(Point) -> [[f64; 2]; 2],
}

/// Solves and returns the (L2, H1-seminorm) velocity errors.
fn solve(mesh: &PatchMesh, mu_cells: &[f64], exact: &Exact, force: &dyn Fn(Point) -> [f64; 2], traction: &dyn Fn(Point, Point) -> [f64; 2]) -> (f64, f64) {
    let dofs = DofMap::new(mesh, PorousWallMode::Darcy, Some(exact.u));
    let ph = physics(1.0);
    let step = StepData::steady(mesh.n_nodes());
    let extras = Extras { cell_viscosity: Some(mu_cells), body_force: Some(force), traction: Some(traction) };
    let sys = CoupledSystem::new(mesh, &dofs, &ph, &step, extras);
    let mut x0 = vec![0.0; dofs.n_total()];
    dofs.apply_constraints(&mut x0);
    let settings = NewtonSettings { rtol: 1e-12, atol: 1e-13, ..NewtonSettings::default() };
    let out = newton_solve(&mut ReducedSystem { inner: &sys }, dofs.restrict(&x0), &settings).unwrap();
    let state = FieldState::from_vector(&dofs, &dofs.expand(&out.x));
    let (mut l2, mut h1) = (0.0, 0.0);
    for (c, cell) in mesh.cells().iter().enumerate() {
        let x = mesh.cell_points(c);
        let area = mesh.cell_area(c);
        let g = p1_gradients(&x);
        let uh = cell.nodes.map(|k| state.u[k]);
        let mut guh = [[0.0; 2]; 2];
        for i in 0..3 {
            for a in 0..2 {
                for b in 0..2 {
                    guh[a][b] += uh[i][a] * g[i][b];
                }
            }
        }
        for (l, w) in TRI7 {
            let p = bary_point(&x, &l);
            let ue = (exact.u)(p);
            let ge = (exact.grad)(p);
            for a in 0..2 {
                let v: f64 = (0..3).map(|i| l[i] * uh[i][a]).sum();
                l2 += w * area * (v - ue[a]).powi(2);
                for b in 0..2 {
                    h1 += w * area * (guh[a][b] - ge[a][b]).powi(2);
                }
            }
        }
    }
    (l2.sqrt(), h1.sqrt())
}

pub fn rates(e: &[f64]) -> Vec<f64> {
    e.windows(2).map(|w| (w[0] / w[1]).log2()).collect()
}

/// L2 and H1 rates of a Poiseuille-type solution over four uniform meshes.
pub fn uniform_rates() -> (Vec<f64>, Vec<f64>) {
    let mu = 1.0;
    let u = |p: Point| [p[1] * (1.0 - p[1]), 0.0];
    let grad = |p: Point| [[0.0, 1.0 - 2.0 * p[1]], [0.0, 0.0]];
    let force = move |_: Point| [2.0 * mu - 1.0, 0.0];
    // sigma n at x = 1 with p = 1 - x = 0
    let traction = move |p: Point, _n: Point| [0.0, mu * (1.0 - 2.0 * p[1])];
    let exact = Exact { u: &u, grad: &grad };
    let mut el2 = Vec::new();
    let mut eh1 = Vec::new();
    for n in [4, 8, 16, 32] {
        let mesh = unit_square(n);
        let mus = vec![mu; mesh.cells().len()];
        let (a, b) = solve(&mesh, &mus, &exact, &force, &traction);
        el2.push(a);
        eh1.push(b);
    }
    (rates(&el2), rates(&eh1))
}

const THETA: f64 = 0.3;
const X0: Point = [0.47, 0.5];
const MU_FLUID_SIDE: f64 = 1.0;
const MU_SOLID_SIDE: f64 = 10.0;

fn normal() -> Point {
    [THETA.cos(), THETA.sin()]
}

fn signed(p: Point) -> f64 {
    let n = normal();
    n[0] * (p[0] - X0[0]) + n[1] * (p[1] - X0[1])
}

fn side_mu(p: Point) -> f64 {
    if signed(p) > 0.0 { MU_FLUID_SIDE } else { MU_SOLID_SIDE }
}

// u = t (s + s^2) / mu(s) is divergence free, continuous, and has a
// continuous traction across the line s = 0.
fn kink_u(p: Point) -> [f64; 2] {
    let n = normal();
    let s = signed(p);
    let a = (s + s * s) / side_mu(p);
    [-n[1] * a, n[0] * a]
}

fn kink_grad(p: Point) -> [[f64; 2]; 2] {
    let n = normal();
    let t = [-n[1], n[0]];
    let ds = (1.0 + 2.0 * signed(p)) / side_mu(p);
    [[t[0] * ds * n[0], t[0] * ds * n[1]], [t[1] * ds * n[0], t[1] * ds * n[1]]]
}

/// L2 rates of a solution with a viscosity jump and a gradient kink along a
/// line cutting the patches.
pub fn kink_rates() -> Vec<f64> {
    let n = normal();
    let t = [-n[1], n[0]];
    // -mu lap u = -2 t on both sides, p = 1 - x
    let force = move |_: Point| [-2.0 * t[0] - 1.0, -2.0 * t[1]];
    let traction = |p: Point, nb: Point| {
        let g = kink_grad(p);
        let mu = side_mu(p);
        let pr = 1.0 - p[0];
        let mut out = [0.0; 2];
        for a in 0..2 {
            for b in 0..2 {
                out[a] += mu * (g[a][b] + g[b][a]) * nb[b];
            }
            out[a] -= pr * nb[a];
        }
        out
    };
    let exact = Exact { u: &kink_u, grad: &kink_grad };
    let mut el2 = Vec::new();
    for m in [4, 8, 16, 32] {
        let mut mesh = unit_square(m);
        let lattice: Vec<Point> = (0..mesh.n_nodes()).map(|k| mesh.lattice_position(k)).collect();
        mesh.fit(|k| signed(lattice[k]), 0.0).unwrap();
        let phases = mesh.merge_phases(Phase::Fluid);
        let mus: Vec<f64> = phases.iter().map(|p| if *p == Phase::Fluid { MU_FLUID_SIDE } else { MU_SOLID_SIDE }).collect();
        let (a, _) = solve(&mesh, &mus, &exact, &force, &traction);
        el2.push(a);
    }
    rates(&el2)
}
