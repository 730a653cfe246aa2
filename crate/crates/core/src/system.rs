//! Monolithic residual and Jacobian of one time step on a fitted mesh.

use std::sync::Arc;

use crate::dofs::{DofMap, PorousWallMode};
use crate::fem::{CsrMatrix, CsrPattern, Local, NonlinearSystem};
use crate::fluid::{self, FluidCell, FluidParams, InterfaceSegment, SegmentLocal};
use crate::geom::{self, Point};
use crate::mesh::{BoundaryTag, PatchMesh, Phase};
use crate::porous::{self, LayerTerms, PorousParams};
use crate::solid::{self, ContactParams, SolidCell, SolidParams};

/// Material and model constants of a run.
#[derive(Debug, Clone, PartialEq)]
pub struct Physics {
    pub fluid: FluidParams,
    pub solid: SolidParams,
    pub porous: PorousParams,
    pub wall_mode: PorousWallMode,
    /// Contact against `y = 0`; `None` disables the term.
    pub contact: Option<ContactParams>,
    /// Gravity acting on the fluid.
    pub fluid_gravity: [f64; 2],
    pub convection: bool,
}

/// Previous-step data mapped onto the current mesh.
#[derive(Debug, Clone)]
pub struct StepData {
    /// `None` solves the steady problem.
    pub dt: Option<f64>,
    pub u_old: Vec<[f64; 2]>,
    pub d_old: Vec<[f64; 2]>,
    pub dd_old: Vec<[f64; 2]>,
    pub mesh_velocity: Vec<[f64; 2]>,
    /// Pressure applied on inflow boundaries.
    pub p_in: f64,
}

impl StepData {
    pub fn steady(n_nodes: usize) -> Self {
        Self {
            dt: None,
            u_old: vec![[0.0; 2]; n_nodes],
            d_old: vec![[0.0; 2]; n_nodes],
            dd_old: vec![[0.0; 2]; n_nodes],
            mesh_velocity: vec![[0.0; 2]; n_nodes],
            p_in: 0.0,
        }
    }
}

/// Optional data used by manufactured-solution studies.
#[derive(Default)]
pub struct Extras<'a> {
    /// Per-cell fluid viscosity overriding the material value.
    pub cell_viscosity: Option<&'a [f64]>,
    /// Additional fluid body force per unit volume.
    pub body_force: Option<&'a dyn Fn(Point) -> [f64; 2]>,
    /// Traction prescribed on outflow boundaries (point, outward normal).
    pub traction: Option<&'a dyn Fn(Point, Point) -> [f64; 2]>,
}

const NONE: usize = usize::MAX;

struct InterfaceItem {
    seg: usize,
    ends: SegmentLocal,
    dofs: [usize; 21],
}

/// Observables of a converged state.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct StepObservables {
    pub contact_force: f64,
    /// Smallest predicted interface height `y + increment`.
    pub d_min: f64,
    pub avg_vy: f64,
    pub solid_area: f64,
    pub flux_left: f64,
    pub flux_right: f64,
    /// Integral of `|u . n|` over the porous wall.
    pub flux_abs: f64,
    pub complementarity: f64,
}

pub struct CoupledSystem<'a> {
    pub mesh: &'a PatchMesh,
    pub dofs: &'a DofMap,
    pub physics: &'a Physics,
    pub step: &'a StepData,
    extras: Extras<'a>,
    pattern: Arc<CsrPattern>,
    fluid_cells: Vec<(usize, [usize; 9])>,
    solid_cells: Vec<(usize, [usize; 12])>,
    interface: Vec<InterfaceItem>,
    facets: Vec<(usize, [usize; 6], f64)>,
    layer: Vec<(usize, [usize; 6])>,
    traction: Vec<(usize, [usize; 4])>,
    layer_split: f64,
}

fn fluid_dofs(dofs: &DofMap, nodes: [usize; 3]) -> [usize; 9] {
    let mut out = [NONE; 9];
    for (i, &k) in nodes.iter().enumerate() {
        let u = dofs.u[k].expect("fluid node has velocity");
        out[3 * i] = u[0];
        out[3 * i + 1] = u[1];
        out[3 * i + 2] = dofs.p[k].expect("fluid node has pressure");
    }
    out
}

fn solid_dofs(dofs: &DofMap, nodes: [usize; 3]) -> [usize; 12] {
    let mut out = [NONE; 12];
    for (i, &k) in nodes.iter().enumerate() {
        let d = dofs.d[k].expect("solid node has displacement");
        let v = dofs.dd[k].expect("solid node has velocity");
        out[4 * i..4 * i + 4].copy_from_slice(&[d[0], d[1], v[0], v[1]]);
    }
    out
}

fn local_position(nodes: &[usize; 3], k: usize) -> usize {
    nodes.iter().position(|&n| n == k).expect("segment endpoint belongs to the cell")
}

impl<'a> CoupledSystem<'a> {
    pub fn new(mesh: &'a PatchMesh, dofs: &'a DofMap, physics: &'a Physics, step: &'a StepData, extras: Extras<'a>) -> Self {
        let cells = mesh.cells();
        let mut fluid_cells = Vec::new();
        let mut solid_cells = Vec::new();
        for (c, cell) in cells.iter().enumerate() {
            match cell.phase {
                Phase::Fluid => fluid_cells.push((c, fluid_dofs(dofs, cell.nodes))),
                Phase::Solid => solid_cells.push((c, solid_dofs(dofs, cell.nodes))),
            }
        }
        let mut interface = Vec::new();
        for (si, s) in mesh.interface().iter().enumerate() {
            let (fc, sc) = (&cells[s.fluid_cell], &cells[s.solid_cell]);
            let ends = SegmentLocal {
                fluid: s.nodes.map(|k| local_position(&fc.nodes, k)),
                solid: s.nodes.map(|k| local_position(&sc.nodes, k)),
            };
            let mut d = [NONE; 21];
            d[..9].copy_from_slice(&fluid_dofs(dofs, fc.nodes));
            d[9..].copy_from_slice(&solid_dofs(dofs, sc.nodes));
            interface.push(InterfaceItem { seg: si, ends, dofs: d });
        }
        let mut facets = Vec::new();
        if physics.fluid.gamma_p > 0.0 {
            for (fi, f) in mesh.facets().iter().enumerate() {
                let [c0, c1] = f.cells;
                if cells[c0].phase != Phase::Fluid {
                    continue;
                }
                let mut d = [NONE; 6];
                for i in 0..3 {
                    d[i] = dofs.p[cells[c0].nodes[i]].expect("fluid pressure");
                    d[3 + i] = dofs.p[cells[c1].nodes[i]].expect("fluid pressure");
                }
                let h = mesh.patches()[cells[c0].patch].diameter.max(mesh.patches()[cells[c1].patch].diameter);
                let z = f
                    .nodes
                    .iter()
                    .map(|&k| geom::norm(step.u_old[k]))
                    .fold(0.0, f64::max);
                let mu = physics.fluid.mu;
                let w = fluid::cip_weight(physics.fluid.gamma_p, h, physics.fluid.rho, mu, z);
                facets.push((fi, d, w));
            }
        }
        let mut layer = Vec::new();
        let mut traction = Vec::new();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for (bi, s) in mesh.boundary().iter().enumerate() {
            if cells[s.cell].phase != Phase::Fluid {
                continue;
            }
            let u: Vec<[usize; 2]> = s.nodes.iter().map(|&k| dofs.u[k].expect("fluid velocity")).collect();
            match s.tag {
                BoundaryTag::Porous => {
                    let pl = s.nodes.map(|k| dofs.pl_of_node[k].unwrap_or(NONE));
                    layer.push((bi, [u[0][0], u[0][1], u[1][0], u[1][1], pl[0], pl[1]]));
                    for &k in &s.nodes {
                        lo = lo.min(mesh.node(k)[0]);
                        hi = hi.max(mesh.node(k)[0]);
                    }
                }
                BoundaryTag::Inflow | BoundaryTag::Outflow => traction.push((bi, [u[0][0], u[0][1], u[1][0], u[1][1]])),
                _ => {}
            }
        }
        let layer_split = 0.5 * (lo + hi);

        let free = |g: usize| if g == NONE { None } else { dofs.free[g] };
        let mut groups: Vec<Vec<usize>> = Vec::new();
        let mut push = |ds: &[usize]| groups.push(ds.iter().filter_map(|&g| free(g)).collect());
        fluid_cells.iter().for_each(|(_, d)| push(d));
        solid_cells.iter().for_each(|(_, d)| push(d));
        interface.iter().for_each(|it| push(&it.dofs));
        facets.iter().for_each(|(_, d, _)| push(d));
        layer.iter().for_each(|(_, d)| push(d));
        let pattern = Arc::new(CsrPattern::from_groups(dofs.n_free, groups.iter().map(|g| g.as_slice())));

        Self {
            mesh,
            dofs,
            physics,
            step,
            extras,
            pattern,
            fluid_cells,
            solid_cells,
            interface,
            facets,
            layer,
            traction,
            layer_split,
        }
    }

    pub fn pattern(&self) -> &Arc<CsrPattern> {
        &self.pattern
    }

    fn gather<const N: usize>(x: &[f64], d: &[usize; N]) -> [f64; N] {
        std::array::from_fn(|i| if d[i] == NONE { 0.0 } else { x[d[i]] })
    }

    fn scatter<const N: usize>(&self, l: &Local<N>, d: &[usize; N], r: &mut [f64], jac: &mut Option<&mut CsrMatrix>) {
        for i in 0..N {
            if d[i] == NONE {
                continue;
            }
            r[d[i]] += l.r[i];
            let Some(j) = jac.as_deref_mut() else { continue };
            let Some(fi) = self.dofs.free[d[i]] else { continue };
            for c in 0..N {
                if d[c] == NONE || l.k[i][c] == 0.0 {
                    continue;
                }
                if let Some(fc) = self.dofs.free[d[c]] {
                    j.add(fi, fc, l.k[i][c]);
                }
            }
        }
    }

    fn interface_segment(&self, it: &InterfaceItem) -> InterfaceSegment {
        let s = &self.mesh.interface()[it.seg];
        let cells = self.mesh.cells();
        let (a, b) = (self.mesh.node(s.nodes[0]), self.mesh.node(s.nodes[1]));
        InterfaceSegment {
            xf: self.mesh.cell_points(s.fluid_cell),
            xs: self.mesh.cell_points(s.solid_cell),
            ends: it.ends,
            normal: s.normal,
            length: geom::norm(geom::sub(b, a)),
            mu: self.cell_mu(s.fluid_cell),
            gamma: self.physics.fluid.gamma,
            h: self.mesh.patches()[cells[s.fluid_cell].patch].diameter,
        }
    }

    fn cell_mu(&self, c: usize) -> f64 {
        self.extras.cell_viscosity.map_or(self.physics.fluid.mu, |m| m[c])
    }

    fn layer_terms(&self) -> LayerTerms {
        match self.physics.wall_mode {
            PorousWallMode::Darcy => LayerTerms::Full,
            PorousWallMode::NavierSlip => LayerTerms::FrictionOnly,
        }
    }

    /// Full-length residual; the Jacobian (free rows and columns) is
    /// accumulated into `jac` when given.
    pub fn assemble(&self, x: &[f64], mut jac: Option<&mut CsrMatrix>) -> Vec<f64> {
        let mesh = self.mesh;
        let ph = self.physics;
        let step = self.step;
        let mut r = vec![0.0; x.len()];
        let rho_f = ph.fluid.rho;
        let g = ph.fluid_gravity;
        let extra = self.extras.body_force;
        let force = move |p: Point| {
            let e = extra.map_or([0.0, 0.0], |f| f(p));
            [rho_f * g[0] + e[0], rho_f * g[1] + e[1]]
        };
        for (c, d) in &self.fluid_cells {
            let nodes = mesh.cells()[*c].nodes;
            let cell = FluidCell {
                x: mesh.cell_points(*c),
                rho: rho_f,
                mu: self.cell_mu(*c),
                transient: step.dt.map(|dt| (dt, nodes.map(|k| step.u_old[k]))),
                mesh_velocity: nodes.map(|k| step.mesh_velocity[k]),
                convection: ph.convection,
                force: &force,
            };
            let l = fluid::fluid_cell(&cell, &Self::gather(x, d));
            self.scatter(&l, d, &mut r, &mut jac);
        }
        if let Some(dt) = step.dt {
            for (c, d) in &self.solid_cells {
                let nodes = mesh.cells()[*c].nodes;
                let cell = SolidCell {
                    x: mesh.cell_points(*c),
                    params: ph.solid.clone(),
                    dt,
                    d_old: nodes.map(|k| step.d_old[k]),
                    dd_old: nodes.map(|k| step.dd_old[k]),
                    mesh_velocity: nodes.map(|k| step.mesh_velocity[k]),
                };
                let l = solid::solid_cell(&cell, &Self::gather(x, d));
                self.scatter(&l, d, &mut r, &mut jac);
            }
        }
        for it in &self.interface {
            let seg = self.interface_segment(it);
            let xl = Self::gather(x, &it.dofs);
            let mut l = fluid::nitsche_segment(&seg, &xl);
            if let Some(contact) = &ph.contact {
                let sc = mesh.cells()[mesh.interface()[it.seg].solid_cell].nodes;
                let out = solid::contact_segment(&seg, &ph.solid, contact, sc.map(|k| step.d_old[k][1]), &xl);
                for i in 0..21 {
                    l.r[i] += out.local.r[i];
                    for j in 0..21 {
                        l.k[i][j] += out.local.k[i][j];
                    }
                }
            }
            self.scatter(&l, &it.dofs, &mut r, &mut jac);
        }
        for (fi, d, w) in &self.facets {
            let f = &mesh.facets()[*fi];
            let len = geom::norm(geom::sub(mesh.node(f.nodes[1]), mesh.node(f.nodes[0])));
            let l = fluid::cip_facet(&mesh.cell_points(f.cells[0]), &mesh.cell_points(f.cells[1]), len, *w, &Self::gather(x, d));
            self.scatter(&l, d, &mut r, &mut jac);
        }
        let terms = self.layer_terms();
        for (bi, d) in &self.layer {
            let s = &mesh.boundary()[*bi];
            let len = geom::norm(geom::sub(mesh.node(s.nodes[1]), mesh.node(s.nodes[0])));
            let l = porous::layer_segment(len, s.normal, &ph.porous, terms, &Self::gather(x, d));
            self.scatter(&l, d, &mut r, &mut jac);
        }
        for (bi, d) in &self.traction {
            let s = &mesh.boundary()[*bi];
            let (a, b) = (mesh.node(s.nodes[0]), mesh.node(s.nodes[1]));
            let len = geom::norm(geom::sub(b, a));
            let l = match (s.tag, self.extras.traction) {
                (BoundaryTag::Inflow, _) => fluid::traction_segment(len, s.normal, step.p_in),
                (BoundaryTag::Outflow, Some(t)) => {
                    // residual -(t, v) with a two-point rule
                    let mut l = Local::<4>::zero();
                    for (q, w) in crate::fem::GAUSS2 {
                        let tv = t(geom::lerp(a, b, q), s.normal);
                        for e in 0..2 {
                            l.r[e] -= w * len * tv[e] * (1.0 - q);
                            l.r[2 + e] -= w * len * tv[e] * q;
                        }
                    }
                    l
                }
                _ => continue,
            };
            self.scatter(&l, d, &mut r, &mut jac);
        }
        r
    }

    /// Jacobian on the free unknowns of the full state `x`.
    pub fn jacobian_full(&self, x: &[f64]) -> CsrMatrix {
        let mut j = CsrMatrix::zeros(self.pattern.clone());
        self.assemble(x, Some(&mut j));
        j
    }

    pub fn observe(&self, x: &[f64]) -> StepObservables {
        let mesh = self.mesh;
        let mut o = StepObservables { d_min: f64::INFINITY, ..Default::default() };
        if let Some(contact) = &self.physics.contact {
            for it in &self.interface {
                let seg = self.interface_segment(it);
                let sc = mesh.cells()[mesh.interface()[it.seg].solid_cell].nodes;
                let out = solid::contact_segment(&seg, &self.physics.solid, contact, sc.map(|k| self.step.d_old[k][1]), &Self::gather(x, &it.dofs));
                o.contact_force += out.force;
                o.d_min = o.d_min.min(out.min_height);
                o.complementarity = o.complementarity.max(out.complementarity);
            }
        }
        for (c, d) in &self.solid_cells {
            let area = mesh.cell_area(*c);
            let v: f64 = (0..3).map(|i| x[d[4 * i + 3]]).sum::<f64>() / 3.0;
            o.avg_vy += area * v;
            o.solid_area += area;
        }
        if o.solid_area > 0.0 {
            o.avg_vy /= o.solid_area;
        }
        for (bi, d) in &self.layer {
            let s = &mesh.boundary()[*bi];
            let (a, b) = (mesh.node(s.nodes[0]), mesh.node(s.nodes[1]));
            let len = geom::norm(geom::sub(b, a));
            let un = [x[d[0]] * s.normal[0] + x[d[1]] * s.normal[1], x[d[2]] * s.normal[0] + x[d[3]] * s.normal[1]];
            let flux = 0.5 * len * (un[0] + un[1]);
            o.flux_abs += abs_integral(un[0], un[1], len);
            if 0.5 * (a[0] + b[0]) < self.layer_split {
                o.flux_left += flux;
            } else {
                o.flux_right += flux;
            }
        }
        o
    }
}

/// Integral of `|f|` for `f` linear on a segment of length `len`.
fn abs_integral(fa: f64, fb: f64, len: f64) -> f64 {
    if fa * fb >= 0.0 {
        0.5 * len * (fa.abs() + fb.abs())
    } else {
        0.5 * len * (fa * fa + fb * fb) / (fa.abs() + fb.abs())
    }
}

/// The step system seen by Newton: free unknowns only.
pub struct ReducedSystem<'s, 'a> {
    pub inner: &'s CoupledSystem<'a>,
}

impl NonlinearSystem for ReducedSystem<'_, '_> {
    fn residual(&mut self, x: &[f64]) -> Vec<f64> {
        let full = self.inner.dofs.expand(x);
        self.inner.dofs.restrict(&self.inner.assemble(&full, None))
    }

    fn jacobian(&mut self, x: &[f64]) -> CsrMatrix {
        let full = self.inner.dofs.expand(x);
        self.inner.jacobian_full(&full)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn abs_integral_with_sign_change() {
        assert!((abs_integral(1.0, -1.0, 2.0) - 1.0).abs() < 1e-15);
        assert!((abs_integral(1.0, 3.0, 2.0) - 4.0).abs() < 1e-15);
    }
}
