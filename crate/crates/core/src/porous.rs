//! Thin Darcy layer on the porous wall: layer pressure diffusion, porous
//! normal stress and Beavers-Joseph-Saffman friction.

use crate::fem::Local;
use crate::geom::Point;

#[derive(Debug, Clone, PartialEq)]
pub struct PorousParams {
    /// Layer thickness.
    pub eps_p: f64,
    /// Tangential conductivity.
    pub k_tau: f64,
    /// Normal conductivity.
    pub k_n: f64,
    /// Slip coefficient.
    pub alpha: f64,
}

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
#[error("normal conductivity must be non-zero")]
pub struct ZeroConductivity;

impl PorousParams {
    pub fn validate(&self) -> Result<(), String> {
        if !(self.eps_p > 0.0) {
            return Err(format!("porous eps_p must be positive, got {}", self.eps_p));
        }
        if !(self.k_tau > 0.0) || !(self.k_n > 0.0) {
            return Err(format!("porous conductivities must be positive, got {} and {}", self.k_tau, self.k_n));
        }
        if !(self.alpha >= 0.0) {
            return Err(format!("porous alpha must be non-negative, got {}", self.alpha));
        }
        Ok(())
    }

    /// Coefficient of the normal velocity in the porous stress.
    pub fn normal_resistance(&self) -> f64 {
        self.eps_p / (4.0 * self.k_n)
    }
}

/// Normal stress exerted by the layer, `-P_l - eps_p / (4 K_n) u_n`.
pub fn porous_stress(pl: f64, u_n: f64, params: &PorousParams) -> Result<f64, ZeroConductivity> {
    if params.k_n == 0.0 {
        return Err(ZeroConductivity);
    }
    Ok(-pl - params.eps_p / (4.0 * params.k_n) * u_n)
}

/// Tangential friction coefficient `alpha / sqrt(K_tau eps_p)`.
pub fn bjs_coefficient(params: &PorousParams) -> f64 {
    if params.alpha == 0.0 {
        return 0.0;
    }
    params.alpha / (params.k_tau * params.eps_p).sqrt()
}

/// What the wall segment couples.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LayerTerms {
    /// Layer pressure, porous stress and friction.
    Full,
    /// Friction only (normal velocity constrained elsewhere).
    FrictionOnly,
}

/// Terms on one straight wall segment. Local unknowns: `(u_x, u_y)` of both
/// endpoints followed by the two layer pressures.
pub fn layer_segment(length: f64, normal: Point, params: &PorousParams, terms: LayerTerms, x: &[f64; 6]) -> Local<6> {
    let n = normal;
    let tau = [-n[1], n[0]];
    let beta = bjs_coefficient(params);
    let m = [[length / 3.0, length / 6.0], [length / 6.0, length / 3.0]];
    let mut l = Local::<6>::zero();
    for a in 0..2 {
        for b in 0..2 {
            for e in 0..2 {
                for f in 0..2 {
                    l.k[2 * a + e][2 * b + f] += beta * m[a][b] * tau[e] * tau[f];
                }
            }
        }
    }
    if terms == LayerTerms::Full {
        let c = params.normal_resistance();
        let diff = params.eps_p * params.k_tau / length;
        for a in 0..2 {
            for b in 0..2 {
                for e in 0..2 {
                    l.k[2 * a + e][4 + b] += m[a][b] * n[e];
                    for f in 0..2 {
                        l.k[2 * a + e][2 * b + f] += c * m[a][b] * n[e] * n[f];
                    }
                    l.k[4 + a][2 * b + e] -= m[a][b] * n[e];
                }
                l.k[4 + a][4 + b] += if a == b { diff } else { -diff };
            }
        }
    }
    l.apply_linear(x);
    l
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params() -> PorousParams {
        PorousParams { eps_p: 0.01, k_tau: 1.0, k_n: 1.0, alpha: 0.0 }
    }

    #[test]
    fn porous_stress_examples() {
        assert_eq!(porous_stress(2.0, 0.0, &params()).unwrap(), -2.0);
        assert!((porous_stress(0.0, 4.0, &params()).unwrap() + 0.01).abs() < 1e-15);
        let thin = PorousParams { eps_p: 1e-14, ..params() };
        assert!((porous_stress(1.0, 3.0, &thin).unwrap() + 1.0).abs() < 1e-12);
        assert!(porous_stress(1.0, 1.0, &PorousParams { k_n: 0.0, ..params() }).is_err());
    }

    #[test]
    fn bjs_examples() {
        assert_eq!(bjs_coefficient(&params()), 0.0);
        let p = PorousParams { eps_p: 1.0, k_tau: 1.0, k_n: 1.0, alpha: 1.0 };
        assert_eq!(bjs_coefficient(&p), 1.0);
        let p = PorousParams { eps_p: 1e-4, k_tau: 1e-2, k_n: 1e-2, alpha: 1.0 };
        assert!((bjs_coefficient(&p) - 1e3).abs() < 1e-9);
    }

    #[test]
    fn constant_pressure_no_flux_has_zero_darcy_residual() {
        let l = layer_segment(0.3, [0.0, -1.0], &params(), LayerTerms::Full, &[0.5, 0.0, -0.2, 0.0, 2.0, 2.0]);
        assert!(l.r[4].abs() < 1e-15 && l.r[5].abs() < 1e-15);
    }

    #[test]
    fn alpha_zero_has_no_tangential_block() {
        let l = layer_segment(0.3, [0.0, -1.0], &params(), LayerTerms::Full, &[0.0; 6]);
        for a in 0..2 {
            for b in 0..2 {
                assert_eq!(l.k[2 * a][2 * b], 0.0);
            }
        }
    }

    #[test]
    fn darcy_rows_sum_to_minus_flux() {
        let x = [0.1, -0.3, 0.2, 0.4, 1.0, -1.0];
        let l = layer_segment(0.5, [0.0, -1.0], &params(), LayerTerms::Full, &x);
        // u_n = -u_y, integral of u_n over the segment
        let flux = -0.5 * (x[1] + x[3]) / 2.0;
        assert!((l.r[4] + l.r[5] + flux).abs() < 1e-15);
    }
}
