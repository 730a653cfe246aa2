//! Linear elasticity on the solid subdomain and the relaxed contact term
//! against the horizontal porous wall `y = 0`.

use crate::fem::{p1_mass, pos, pos_derivative, Local, GAUSS2};
use crate::fluid::{fluid_traction_coeffs, segment_bary, InterfaceSegment, SOLID_OFFSET};
use crate::geom::{dot, p1_gradients, signed_area, Point};

#[derive(Debug, Clone, PartialEq)]
pub struct SolidParams {
    pub rho: f64,
    pub lambda: f64,
    pub mu: f64,
    /// Gravity acceleration vector.
    pub gravity: [f64; 2],
}

impl SolidParams {
    /// Young's modulus derived from the Lamé parameters.
    pub fn young(&self) -> f64 {
        self.mu * (3.0 * self.lambda + 2.0 * self.mu) / (self.lambda + self.mu)
    }

    pub fn validate(&self) -> Result<(), String> {
        for (name, v) in [("rho", self.rho), ("lambda", self.lambda), ("mu", self.mu)] {
            if !(v > 0.0) {
                return Err(format!("solid {name} must be positive, got {v}"));
            }
        }
        Ok(())
    }
}

/// Cauchy stress of the linearised law for a displacement gradient
/// (`grad[c][k] = d d_c / d x_k`).
pub fn stress(grad: [[f64; 2]; 2], lambda: f64, mu: f64) -> [[f64; 2]; 2] {
    let tr = grad[0][0] + grad[1][1];
    let mut s = [[0.0; 2]; 2];
    for a in 0..2 {
        for b in 0..2 {
            s[a][b] = mu * (grad[a][b] + grad[b][a]);
        }
        s[a][a] += lambda * tr;
    }
    s
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ContactMode {
    /// Penalty on the relaxed gap only.
    Penalty,
    /// Penalty argument augmented by the normal stress jump.
    NitscheAugmented,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ContactScale {
    Lambda,
    Young,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContactParams {
    /// Dimensionless contact parameter multiplying the stiffness scale.
    pub gamma_c: f64,
    /// Gap relaxation distance.
    pub eps_g: f64,
    pub mode: ContactMode,
    pub scale: ContactScale,
}

impl ContactParams {
    pub fn validate(&self) -> Result<(), String> {
        if !(self.gamma_c > 0.0) {
            return Err(format!("contact gamma_c must be positive, got {}", self.gamma_c));
        }
        if !(self.eps_g >= 0.0) {
            return Err(format!("contact eps_g must be non-negative, got {}", self.eps_g));
        }
        Ok(())
    }

    /// Penalty weight `gamma_C = gamma_c * scale / h`.
    pub fn weight(&self, solid: &SolidParams, h: f64) -> f64 {
        let s = match self.scale {
            ContactScale::Lambda => solid.lambda,
            ContactScale::Young => solid.young(),
        };
        self.gamma_c * s / h
    }
}

/// Contact argument at an interface point: displacement increment towards
/// the wall minus the relaxed distance, optionally minus the stress jump
/// divided by the penalty weight.
pub fn gap_argument(increment_y: f64, height: f64, eps_g: f64, jump: Option<(f64, f64)>) -> f64 {
    let base = -increment_y - (height - eps_g);
    match jump {
        Some((sigma_jump, gamma_c)) => base - sigma_jump / gamma_c,
        None => base,
    }
}

/// Data of one solid triangle. Local unknowns: `(d_x, d_y, ddot_x, ddot_y)`
/// per vertex.
pub struct SolidCell {
    pub x: [Point; 3],
    pub params: SolidParams,
    pub dt: f64,
    pub d_old: [[f64; 2]; 3],
    pub dd_old: [[f64; 2]; 3],
    pub mesh_velocity: [[f64; 2]; 3],
}

pub fn solid_cell(c: &SolidCell, x: &[f64; 12]) -> Local<12> {
    let g = p1_gradients(&c.x);
    let area = signed_area(c.x[0], c.x[1], c.x[2]);
    let m = p1_mass(area);
    let SolidParams { rho, lambda, mu, gravity } = c.params;
    let dt = c.dt;
    // kinematic rows are scaled to the size of the inertia rows
    let ks = rho / dt;
    let mut l = Local::<12>::zero();
    for i in 0..3 {
        for j in 0..3 {
            let gij = dot(g[i], g[j]);
            let wg: f64 = (0..3).map(|mm| m[i][mm] * dot(c.mesh_velocity[mm], g[j])).sum();
            for cc in 0..2 {
                let (mom, kin) = (4 * i + cc, 4 * i + 2 + cc);
                for e in 0..2 {
                    let delta = if cc == e { gij } else { 0.0 };
                    l.k[mom][4 * j + e] += area * (mu * (delta + g[j][cc] * g[i][e]) + lambda * g[j][e] * g[i][cc]);
                }
                l.k[mom][4 * j + 2 + cc] += rho / dt * m[i][j] - rho * wg;
                l.r[mom] -= rho / dt * m[i][j] * c.dd_old[j][cc];
                l.k[kin][4 * j + 2 + cc] += ks * m[i][j];
                l.k[kin][4 * j + cc] += ks * (-m[i][j] / dt + wg);
                l.r[kin] += ks / dt * m[i][j] * c.d_old[j][cc];
            }
        }
        for cc in 0..2 {
            l.r[4 * i + cc] -= rho * gravity[cc] * area / 3.0;
        }
    }
    l.apply_linear(x);
    l
}

/// Result of the contact term on one interface segment.
pub struct ContactSegment {
    pub local: Local<21>,
    /// Integral of the force density `gamma_C [arg]_+`.
    pub force: f64,
    /// Smallest predicted height `y + increment` at the quadrature points.
    pub min_height: f64,
    /// Largest `force density * (-arg)_+` over the quadrature points.
    pub complementarity: f64,
}

/// Relaxed penalty contact with the wall `y = 0` (outward normal `(0, -1)`).
///
/// `d_old_y` are the mapped previous vertical displacements of the solid
/// vertices; local unknowns follow [`InterfaceSegment`].
pub fn contact_segment(
    s: &InterfaceSegment,
    solid: &SolidParams,
    contact: &ContactParams,
    d_old_y: [f64; 3],
    x: &[f64; 21],
) -> ContactSegment {
    let gamma_c = contact.weight(solid, s.h);
    let gs = p1_gradients(&s.xs);
    let gf = p1_gradients(&s.xf);
    let mut l = Local::<21>::zero();
    let mut force = 0.0;
    let mut complementarity: f64 = 0.0;
    let mut min_height = f64::INFINITY;
    let arg_at = |t: f64| -> ([f64; 21], f64, f64) {
        let ls = segment_bary(s.ends.solid, t);
        let lf = segment_bary(s.ends.fluid, t);
        let y: f64 = (0..3).map(|i| ls[i] * s.xs[i][1]).sum();
        let mut coef = [0.0; 21];
        let constant = d_old_y.iter().zip(&ls).map(|(d, l)| d * l).sum::<f64>() - (y - contact.eps_g);
        for i in 0..3 {
            coef[SOLID_OFFSET + 4 * i + 1] -= ls[i];
        }
        if contact.mode == ContactMode::NitscheAugmented {
            // jump of the yy stress, solid minus fluid, divided by gamma_C
            for j in 0..3 {
                coef[SOLID_OFFSET + 4 * j + 1] -= (solid.lambda + 2.0 * solid.mu) * gs[j][1] / gamma_c;
                coef[SOLID_OFFSET + 4 * j] -= solid.lambda * gs[j][0] / gamma_c;
            }
            let fluid_yy = fluid_traction_coeffs(&gf, &lf, s.mu, [0.0, 1.0], 1);
            for k in 0..21 {
                coef[k] += fluid_yy[k] / gamma_c;
            }
        }
        let value = constant + (0..21).map(|k| coef[k] * x[k]).sum::<f64>();
        (coef, value, y)
    };
    for (t, w) in GAUSS2 {
        let wq = w * s.length;
        let ls = segment_bary(s.ends.solid, t);
        let (coef, a, _) = arg_at(t);
        let f = gamma_c * pos(a);
        force += wq * f;
        complementarity = complementarity.max(f * pos(-a));
        let mut rows = [0.0; 21];
        for i in 0..3 {
            rows[SOLID_OFFSET + 4 * i + 1] = ls[i];
            l.r[SOLID_OFFSET + 4 * i + 1] -= wq * f * ls[i];
        }
        l.add_outer(&rows, &coef, -wq * gamma_c * pos_derivative(a));
    }
    for (t, _) in GAUSS2 {
        let ls = segment_bary(s.ends.solid, t);
        let y: f64 = (0..3).map(|i| ls[i] * s.xs[i][1]).sum();
        let inc: f64 = (0..3).map(|i| ls[i] * (x[SOLID_OFFSET + 4 * i + 1] - d_old_y[i])).sum();
        min_height = min_height.min(y + inc);
    }
    ContactSegment { local: l, force, min_height, complementarity }
}
