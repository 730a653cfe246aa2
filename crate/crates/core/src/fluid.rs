//! Incompressible Navier-Stokes terms on the fluid subdomain: bulk form,
//! pressure stabilisation, Nitsche coupling to the solid and traction data.

use crate::fem::{p1_mass, Local, GAUSS2, TRI3};
use crate::geom::{self, dot, p1_gradients, signed_area, Point};

#[derive(Debug, Clone, PartialEq)]
pub struct FluidParams {
    /// Density.
    pub rho: f64,
    /// Dynamic viscosity.
    pub mu: f64,
    /// Nitsche penalty.
    pub gamma: f64,
    /// Pressure stabilisation parameter.
    pub gamma_p: f64,
}

impl FluidParams {
    pub fn validate(&self) -> Result<(), String> {
        for (name, v) in [("rho", self.rho), ("mu", self.mu), ("gamma", self.gamma)] {
            if !(v > 0.0) {
                return Err(format!("fluid {name} must be positive, got {v}"));
            }
        }
        if !(self.gamma_p >= 0.0) {
            return Err(format!("fluid gamma_p must be non-negative, got {}", self.gamma_p));
        }
        Ok(())
    }
}

/// How the previous solution is brought onto the current mesh.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DomainMap {
    /// Each node is mapped to its own position at the previous step, so only
    /// nodes moved by the fitting carry a mesh velocity.
    Transport,
    /// The identity map: no mesh velocity.
    Identity,
}

/// Discrete time derivative used for the fluid and solid inertia.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TimeScheme {
    Dg0(DomainMap),
    BackwardEuler,
}

/// Pointwise moving-domain quotient `(f - f_old o psi) / dt - w . grad f`.
pub fn dg0_time_derivative(f: f64, f_old_mapped: f64, mesh_velocity: Point, grad_f: Point, dt: f64) -> f64 {
    (f - f_old_mapped) / dt - dot(mesh_velocity, grad_f)
}

/// Facet weight of the pressure stabilisation, `gamma_p h^2 xi(Re) / (rho |z|)`
/// with `xi(Re) = min(1, Re)` and `Re = rho |z| h / mu`, written so that it is
/// continuous at `z = 0`.
pub fn cip_weight(gamma_p: f64, h: f64, rho: f64, mu: f64, z_norm: f64) -> f64 {
    let inv = if z_norm > 0.0 { 1.0 / (rho * z_norm) } else { f64::INFINITY };
    gamma_p * h * h * inv.min(h / mu)
}

/// Inflow pressure `amplitude * sin(2 pi t)`.
pub fn inflow_pressure(amplitude: f64, t: f64) -> f64 {
    amplitude * (2.0 * std::f64::consts::PI * t).sin()
}

/// Data of one fluid triangle. Local unknowns are `(u_x, u_y, p)` per vertex.
pub struct FluidCell<'a> {
    pub x: [Point; 3],
    pub rho: f64,
    pub mu: f64,
    /// Time step and mapped previous velocity; `None` for a steady problem.
    pub transient: Option<(f64, [[f64; 2]; 3])>,
    /// Nodal mesh velocity `(x - psi(x)) / dt`.
    pub mesh_velocity: [[f64; 2]; 3],
    pub convection: bool,
    /// Body force per unit volume.
    pub force: &'a dyn Fn(Point) -> [f64; 2],
}

pub fn fluid_cell(c: &FluidCell, x: &[f64; 9]) -> Local<9> {
    let g = p1_gradients(&c.x);
    let area = signed_area(c.x[0], c.x[1], c.x[2]);
    let m = p1_mass(area);
    let mut l = Local::<9>::zero();
    for i in 0..3 {
        for j in 0..3 {
            let gij = dot(g[i], g[j]);
            for cc in 0..2 {
                for e in 0..2 {
                    let delta = if cc == e { gij } else { 0.0 };
                    l.k[3 * i + cc][3 * j + e] += area * c.mu * (delta + g[j][cc] * g[i][e]);
                }
                l.k[3 * i + cc][3 * j + 2] -= area * g[i][cc] / 3.0;
                l.k[3 * i + 2][3 * j + cc] += area * g[j][cc] / 3.0;
            }
        }
    }
    if let Some((dt, u_old)) = c.transient {
        for i in 0..3 {
            for j in 0..3 {
                let wg: f64 = (0..3).map(|mm| m[i][mm] * dot(c.mesh_velocity[mm], g[j])).sum();
                for cc in 0..2 {
                    l.k[3 * i + cc][3 * j + cc] += c.rho / dt * m[i][j] - c.rho * wg;
                    l.r[3 * i + cc] -= c.rho / dt * m[i][j] * u_old[j][cc];
                }
            }
        }
    }
    for (bary, w) in TRI3 {
        let f = (c.force)(crate::fem::bary_point(&c.x, &bary));
        for i in 0..3 {
            for cc in 0..2 {
                l.r[3 * i + cc] -= area * w * f[cc] * bary[i];
            }
        }
    }
    l.apply_linear(x);
    if c.convection {
        let u = [[x[0], x[1]], [x[3], x[4]], [x[6], x[7]]];
        // grad u, row = component
        let mut gu = [[0.0; 2]; 2];
        for j in 0..3 {
            for cc in 0..2 {
                for k in 0..2 {
                    gu[cc][k] += u[j][cc] * g[j][k];
                }
            }
        }
        for i in 0..3 {
            for cc in 0..2 {
                let adv: f64 = (0..3).map(|mm| m[i][mm] * dot(u[mm], gu[cc])).sum();
                l.r[3 * i + cc] += c.rho * adv;
                for j in 0..3 {
                    let ug: f64 = (0..3).map(|mm| m[i][mm] * dot(u[mm], g[j])).sum();
                    for e in 0..2 {
                        let mut v = m[i][j] * gu[cc][e];
                        if cc == e {
                            v += ug;
                        }
                        l.k[3 * i + cc][3 * j + e] += c.rho * v;
                    }
                }
            }
        }
    }
    l
}

/// Pressure stabilisation on one interior facet. Local unknowns are the
/// pressures of the first cell's vertices followed by the second cell's.
pub fn cip_facet(x0: &[Point; 3], x1: &[Point; 3], facet_length: f64, weight: f64, p: &[f64; 6]) -> Local<6> {
    let g0 = p1_gradients(x0);
    let g1 = p1_gradients(x1);
    let d = [g0[0], g0[1], g0[2], geom::scale(g1[0], -1.0), geom::scale(g1[1], -1.0), geom::scale(g1[2], -1.0)];
    let mut l = Local::<6>::zero();
    for a in 0..6 {
        for b in 0..6 {
            l.k[a][b] = weight * facet_length * dot(d[a], d[b]);
        }
    }
    l.apply_linear(p);
    l
}

/// Position of a segment endpoint inside the two adjacent triangles.
#[derive(Debug, Clone, Copy)]
pub struct SegmentLocal {
    /// Local vertex indices of the segment endpoints in the fluid triangle.
    pub fluid: [usize; 2],
    /// Local vertex indices of the segment endpoints in the solid triangle.
    pub solid: [usize; 2],
}

/// Barycentric coordinates of the point at parameter `t` along a segment
/// whose endpoints are vertices `ends` of a triangle.
pub fn segment_bary(ends: [usize; 2], t: f64) -> [f64; 3] {
    let mut l = [0.0; 3];
    l[ends[0]] += 1.0 - t;
    l[ends[1]] += t;
    l
}

/// Interface data. Local unknowns: `(u_x, u_y, p)` per fluid vertex (0..9)
/// then `(d_x, d_y, ddot_x, ddot_y)` per solid vertex (9..21).
pub struct InterfaceSegment {
    pub xf: [Point; 3],
    pub xs: [Point; 3],
    pub ends: SegmentLocal,
    /// Normal pointing out of the fluid.
    pub normal: Point,
    pub length: f64,
    pub mu: f64,
    pub gamma: f64,
    pub h: f64,
}

pub const SOLID_OFFSET: usize = 9;

/// Coefficients of the fluid traction component `(sigma_f n)_c` at a point
/// with fluid barycentric coordinates `lf`.
pub fn fluid_traction_coeffs(g: &[Point; 3], lf: &[f64; 3], mu: f64, n: Point, c: usize) -> [f64; 21] {
    let mut a = [0.0; 21];
    for j in 0..3 {
        let gn = dot(g[j], n);
        for e in 0..2 {
            let mut v = mu * n[e] * g[j][c];
            if e == c {
                v += mu * gn;
            }
            a[3 * j + e] = v;
        }
        a[3 * j + 2] = -lf[j] * n[c];
    }
    a
}

/// Nitsche coupling: consistency, symmetry and penalty terms.
pub fn nitsche_segment(s: &InterfaceSegment, x: &[f64; 21]) -> Local<21> {
    let gf = p1_gradients(&s.xf);
    let n = s.normal;
    let pen = s.gamma * s.mu / s.h;
    let mut l = Local::<21>::zero();
    for (t, w) in GAUSS2 {
        let wq = w * s.length;
        let lf = segment_bary(s.ends.fluid, t);
        let ls = segment_bary(s.ends.solid, t);
        let sn = [0, 1].map(|c| fluid_traction_coeffs(&gf, &lf, s.mu, n, c));
        // jump u - ddot
        let mut jump = [[0.0; 21]; 2];
        for c in 0..2 {
            for i in 0..3 {
                jump[c][3 * i + c] += lf[i];
                jump[c][SOLID_OFFSET + 4 * i + 2 + c] -= ls[i];
            }
        }
        for i in 0..3 {
            let gin = dot(gf[i], n);
            for c in 0..2 {
                let row = 3 * i + c;
                for col in 0..21 {
                    let sym = s.mu * (jump[c][col] * gin + (jump[0][col] * gf[i][0] + jump[1][col] * gf[i][1]) * n[c]);
                    l.k[row][col] += wq * (-sn[c][col] * lf[i] - sym + pen * jump[c][col] * lf[i]);
                }
            }
            for col in 0..21 {
                l.k[3 * i + 2][col] -= wq * (jump[0][col] * n[0] + jump[1][col] * n[1]) * lf[i];
            }
            for c in 0..2 {
                let row = SOLID_OFFSET + 4 * i + c;
                for col in 0..21 {
                    l.k[row][col] += wq * (sn[c][col] - pen * jump[c][col]) * ls[i];
                }
            }
        }
    }
    l.apply_linear(x);
    l
}

/// Prescribed normal traction `-p_in n` on a boundary segment. Local
/// unknowns are the velocity components of the two endpoints.
pub fn traction_segment(length: f64, normal: Point, p_in: f64) -> Local<4> {
    let mut l = Local::<4>::zero();
    for a in 0..2 {
        for e in 0..2 {
            l.r[2 * a + e] = p_in * normal[e] * length / 2.0;
        }
    }
    l
}
