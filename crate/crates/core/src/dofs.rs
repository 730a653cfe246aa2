//! Unknown numbering and the coupled field state.

use crate::geom::Point;
use crate::mesh::{BoundaryTag, PatchMesh, Phase};

/// Which strong conditions the boundary tags impose.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PorousWallMode {
    /// Surface Darcy layer coupled to the fluid.
    Darcy,
    /// Porous terms dropped: impermeable wall with tangential friction.
    NavierSlip,
}

/// Per-node global indices of every field, plus strong constraints.
#[derive(Debug, Clone)]
pub struct DofMap {
    pub u: Vec<Option<[usize; 2]>>,
    pub p: Vec<Option<usize>>,
    pub d: Vec<Option<[usize; 2]>>,
    pub dd: Vec<Option<[usize; 2]>>,
    /// Layer pressure index of a node lying on the porous wall.
    pub pl_of_node: Vec<Option<usize>>,
    /// Abscissa of every layer pressure unknown, in unknown order.
    pub pl_x: Vec<f64>,
    pl_offset: usize,
    n_total: usize,
    /// Prescribed value of constrained unknowns.
    pub fixed: Vec<Option<f64>>,
    /// Position in the reduced (free) system.
    pub free: Vec<Option<usize>>,
    pub n_free: usize,
}

/// Strong boundary data: no-slip walls carry a prescribed velocity.
pub type WallVelocity<'a> = &'a dyn Fn(Point) -> [f64; 2];

impl DofMap {
    /// Numbers the unknowns node by node so that coupled unknowns stay close.
    pub fn new(mesh: &PatchMesh, mode: PorousWallMode, wall_velocity: Option<WallVelocity>) -> Self {
        let n = mesh.n_nodes();
        let mut next = 0;
        let mut take = |k: usize| {
            let s = next;
            next += k;
            s
        };
        let mut u = vec![None; n];
        let mut p = vec![None; n];
        let mut d = vec![None; n];
        let mut dd = vec![None; n];
        for k in 0..n {
            if mesh.node_has_fluid(k) {
                let s = take(3);
                u[k] = Some([s, s + 1]);
                p[k] = Some(s + 2);
            }
            if mesh.node_has_solid(k) {
                let s = take(4);
                d[k] = Some([s, s + 1]);
                dd[k] = Some([s + 2, s + 3]);
            }
        }
        let pl_offset = next;
        let mut pl_of_node = vec![None; n];
        let mut pl_x: Vec<f64> = Vec::new();
        if mode == PorousWallMode::Darcy {
            let mut xs: Vec<(f64, usize)> = Vec::new();
            for s in mesh.boundary() {
                if s.tag == BoundaryTag::Porous && mesh.cells()[s.cell].phase == Phase::Fluid {
                    for &k in &s.nodes {
                        xs.push((mesh.node(k)[0], k));
                    }
                }
            }
            xs.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
            let [lo, hi] = mesh.bounding_box();
            let tol = 1e-12 * (hi[0] - lo[0]).max(hi[1] - lo[1]);
            for (x, k) in xs {
                if pl_x.last().map_or(true, |&last| x - last > tol) {
                    pl_x.push(x);
                }
                pl_of_node[k] = Some(pl_offset + pl_x.len() - 1);
            }
        }
        let n_total = pl_offset + pl_x.len();
        let mut fixed = vec![None; n_total];
        let zero = |_: Point| [0.0, 0.0];
        let wall = wall_velocity.unwrap_or(&zero);
        // symmetry first, walls override at shared corners
        for s in mesh.boundary() {
            for &k in &s.nodes {
                let normal_comp = if s.normal[0].abs() > 0.5 { 0 } else { 1 };
                match s.tag {
                    BoundaryTag::Symmetry => {
                        for f in [u[k], d[k], dd[k]].into_iter().flatten() {
                            fixed[f[normal_comp]] = Some(0.0);
                        }
                    }
                    BoundaryTag::Porous if mode == PorousWallMode::NavierSlip => {
                        if let Some(f) = u[k] {
                            fixed[f[normal_comp]] = Some(0.0);
                        }
                    }
                    _ => {}
                }
            }
        }
        for s in mesh.boundary() {
            if s.tag == BoundaryTag::Wall {
                for &k in &s.nodes {
                    if let Some(f) = u[k] {
                        let g = wall(mesh.node(k));
                        fixed[f[0]] = Some(g[0]);
                        fixed[f[1]] = Some(g[1]);
                    }
                }
            }
        }
        let mut free = vec![None; n_total];
        let mut n_free = 0;
        for (i, f) in free.iter_mut().enumerate() {
            if fixed[i].is_none() {
                *f = Some(n_free);
                n_free += 1;
            }
        }
        Self { u, p, d, dd, pl_of_node, pl_x, pl_offset, n_total, fixed, free, n_free }
    }

    pub fn n_total(&self) -> usize {
        self.n_total
    }

    pub fn n_pl(&self) -> usize {
        self.pl_x.len()
    }

    pub fn pl_index(&self, j: usize) -> usize {
        self.pl_offset + j
    }

    /// Writes the prescribed values into a full vector.
    pub fn apply_constraints(&self, x: &mut [f64]) {
        for (xi, f) in x.iter_mut().zip(&self.fixed) {
            if let Some(v) = f {
                *xi = *v;
            }
        }
    }

    pub fn restrict(&self, full: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.n_free];
        for (i, f) in self.free.iter().enumerate() {
            if let Some(j) = f {
                out[*j] = full[i];
            }
        }
        out
    }

    /// Inverse of [`DofMap::restrict`]; constrained entries get their values.
    pub fn expand(&self, reduced: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.n_total];
        for (i, f) in self.free.iter().enumerate() {
            out[i] = match f {
                Some(j) => reduced[*j],
                None => self.fixed[i].unwrap_or(0.0),
            };
        }
        out
    }
}

/// Nodal values of every field at one time level.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldState {
    pub u: Vec<[f64; 2]>,
    pub p: Vec<f64>,
    pub d: Vec<[f64; 2]>,
    pub dd: Vec<[f64; 2]>,
    /// Layer pressure per layer unknown, with its abscissa.
    pub pl: Vec<f64>,
    pub pl_x: Vec<f64>,
}

impl FieldState {
    pub fn zeros(n_nodes: usize) -> Self {
        Self {
            u: vec![[0.0; 2]; n_nodes],
            p: vec![0.0; n_nodes],
            d: vec![[0.0; 2]; n_nodes],
            dd: vec![[0.0; 2]; n_nodes],
            pl: Vec::new(),
            pl_x: Vec::new(),
        }
    }

    /// Packs the state into a full unknown vector.
    pub fn to_vector(&self, dofs: &DofMap) -> Vec<f64> {
        let mut x = vec![0.0; dofs.n_total()];
        for k in 0..self.u.len() {
            if let Some(f) = dofs.u[k] {
                x[f[0]] = self.u[k][0];
                x[f[1]] = self.u[k][1];
            }
            if let Some(f) = dofs.p[k] {
                x[f] = self.p[k];
            }
            if let Some(f) = dofs.d[k] {
                x[f[0]] = self.d[k][0];
                x[f[1]] = self.d[k][1];
            }
            if let Some(f) = dofs.dd[k] {
                x[f[0]] = self.dd[k][0];
                x[f[1]] = self.dd[k][1];
            }
        }
        for j in 0..dofs.n_pl() {
            let xj = dofs.pl_x[j];
            x[dofs.pl_index(j)] = interpolate_trace(&self.pl_x, &self.pl, xj);
        }
        dofs.apply_constraints(&mut x);
        x
    }

    /// Unpacks a full unknown vector; absent fields are zero.
    pub fn from_vector(dofs: &DofMap, x: &[f64]) -> Self {
        let n = dofs.u.len();
        let mut s = Self::zeros(n);
        for k in 0..n {
            if let Some(f) = dofs.u[k] {
                s.u[k] = [x[f[0]], x[f[1]]];
            }
            if let Some(f) = dofs.p[k] {
                s.p[k] = x[f];
            }
            if let Some(f) = dofs.d[k] {
                s.d[k] = [x[f[0]], x[f[1]]];
            }
            if let Some(f) = dofs.dd[k] {
                s.dd[k] = [x[f[0]], x[f[1]]];
            }
        }
        s.pl = (0..dofs.n_pl()).map(|j| x[dofs.pl_index(j)]).collect();
        s.pl_x = dofs.pl_x.clone();
        s
    }

    /// Layer pressure at abscissa `x` (piecewise linear).
    pub fn pl_at(&self, x: f64) -> f64 {
        interpolate_trace(&self.pl_x, &self.pl, x)
    }
}

fn interpolate_trace(xs: &[f64], vs: &[f64], x: f64) -> f64 {
    if xs.is_empty() {
        return 0.0;
    }
    let i = xs.partition_point(|&q| q < x);
    if i == 0 {
        return vs[0];
    }
    if i == xs.len() {
        return vs[xs.len() - 1];
    }
    let t = (x - xs[i - 1]) / (xs[i] - xs[i - 1]);
    vs[i - 1] + t * (vs[i] - vs[i - 1])
}
