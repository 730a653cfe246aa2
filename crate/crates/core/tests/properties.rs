//! Randomised invariants of fitting, stabilisation, configuration and logs.

use nalgebra::DMatrix;
use proptest::prelude::*;
use seepage_core::config::{parse_config, ScenarioConfig};
use seepage_core::driver::{LogRecord, Simulation};
use seepage_core::fluid::cip_facet;
use seepage_core::geom::Point;
use seepage_core::mesh::{build_patch_mesh, disk, PatchMesh, Phase};
use seepage_core::output::{read_log, write_log};

const SIDE: f64 = 1.0;
const PATCHES: usize = 8;

fn fitted_disk(center: Point, radius: f64, min_cut: f64) -> PatchMesh {
    let mut m = build_patch_mesh(SIDE, SIDE, PATCHES, PATCHES, None).unwrap();
    let shape = disk(center, radius);
    let lattice: Vec<Point> = (0..m.n_nodes()).map(|k| m.lattice_position(k)).collect();
    m.fit(|k| shape(lattice[k]), min_cut).unwrap();
    m
}

/// Parity of the crossings of the ray `x + s e_x`, `s > 0`, with the
/// interface segments.
fn inside_interface(m: &PatchMesh, x: Point) -> bool {
    let mut crossings = 0;
    for s in m.interface() {
        let (a, b) = (m.node(s.nodes[0]), m.node(s.nodes[1]));
        if (a[1] > x[1]) != (b[1] > x[1]) {
            let xc = a[0] + (x[1] - a[1]) * (b[0] - a[0]) / (b[1] - a[1]);
            if xc > x[0] {
                crossings += 1;
            }
        }
    }
    crossings % 2 == 1
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn cut_patches_conserve_area(cx in 0.3..0.7f64, cy in 0.3..0.7f64, r in 0.12..0.28f64, min_cut in 0.01..0.2f64) {
        let m = fitted_disk([cx, cy], r, min_cut);
        let mut sums = vec![0.0; m.patches().len()];
        for (c, cell) in m.cells().iter().enumerate() {
            let a = m.cell_area(c);
            prop_assert!(a > 0.0);
            sums[cell.patch] += a;
        }
        for (p, s) in m.patches().iter().zip(&sums) {
            prop_assert!((s - p.area).abs() <= 1e-12 * p.area);
        }
    }

    #[test]
    fn affiliation_matches_fitted_interface(cx in 0.3..0.7f64, cy in 0.3..0.7f64, r in 0.12..0.28f64) {
        let m = fitted_disk([cx, cy], r, 0.05);
        for c in 0..m.cells().len() {
            let inside = inside_interface(&m, m.cell_centroid(c));
            prop_assert_eq!(m.cells()[c].phase == Phase::Solid, inside, "cell {}", c);
        }
    }

    #[test]
    fn translated_ball_nodes_lie_near_the_circle(dx in -0.2..0.2f64, dy in -0.2..0.2f64) {
        let r = 0.23;
        let center = [0.5 + dx, 0.5 + dy];
        let m = fitted_disk(center, r, 1e-9);
        let h = SIDE / PATCHES as f64;
        for s in m.interface() {
            for &k in &s.nodes {
                let p = m.node(k);
                let dist = ((p[0] - center[0]).powi(2) + (p[1] - center[1]).powi(2)).sqrt();
                prop_assert!((dist - r).abs() <= h * h / (2.0 * r), "node {} off by {:e}", k, dist - r);
            }
        }
    }

    #[test]
    fn cip_facet_matrix_is_symmetric_psd(
        pts in prop::collection::vec(-1.0..1.0f64, 8),
        weight in 1e-6..1e2f64,
        p in prop::collection::vec(-5.0..5.0f64, 6),
    ) {
        // two triangles sharing the edge (0,0)-(1,0), one on each side
        let x0 = [[0.0, 0.0], [1.0, 0.0], [0.3 + 0.2 * pts[0], 0.5 + 0.4 * pts[1].abs()]];
        let x1 = [[0.0, 0.0], [1.0, 0.0], [0.6 + 0.2 * pts[2], -0.5 - 0.4 * pts[3].abs()]];
        let pv: [f64; 6] = p.clone().try_into().unwrap();
        let l = cip_facet(&x0, &x1, 1.0, weight, &pv);
        let a = DMatrix::from_fn(6, 6, |i, j| l.k[i][j]);
        let scale = a.amax().max(f64::MIN_POSITIVE);
        prop_assert!((&a - a.transpose()).amax() <= 1e-14 * scale);
        let min_eig = a.symmetric_eigen().eigenvalues.min();
        prop_assert!(min_eig >= -1e-12 * scale, "eigenvalue {:e}", min_eig);
    }

    #[test]
    fn config_text_round_trips(
        nx in 2usize..40, ny in 2usize..90, eps_p in 1e-6..1e-1f64, k in 1e-6..1e1f64,
        gamma_c in 1.0..500.0f64, dt_min_exp in 0u32..6, convection in any::<bool>(),
    ) {
        let mut cfg = ScenarioConfig::falling_ball();
        cfg.geometry.nx = nx;
        cfg.geometry.ny = ny;
        cfg.porous.eps_p = eps_p;
        cfg.porous.k_tau = k;
        cfg.porous.k_n = k / 3.0;
        cfg.contact.gamma_c = gamma_c;
        cfg.time.dt_min = cfg.time.dt / 2f64.powi(dt_min_exp as i32);
        cfg.fluid.convection = convection;
        let back = parse_config(&cfg.to_text()).unwrap();
        prop_assert_eq!(back, cfg);
    }

    #[test]
    fn log_round_trips_bit_exactly(rows in prop::collection::vec(
        (any::<f64>(), -1e3..1e3f64, 0.0..1.0f64, any::<u16>()), 0..20,
    )) {
        let records: Vec<LogRecord> = rows.iter().map(|&(a, b, c, n)| LogRecord {
            t: c,
            dt: c * 1e-3,
            d_min: if a.is_finite() { a } else { f64::NAN },
            avg_vy: b,
            contact_force: b * b,
            flux_left: -b / 7.0,
            flux_right: a.sin(),
            newton_iters: n as usize,
        }).collect();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("log.csv");
        write_log(&records, &path).unwrap();
        let back = read_log(&path).unwrap();
        prop_assert_eq!(back.len(), records.len());
        for (x, y) in back.iter().zip(&records) {
            let bits = |r: &LogRecord| [r.t, r.dt, r.d_min, r.avg_vy, r.contact_force, r.flux_left, r.flux_right].map(f64::to_bits);
            prop_assert_eq!(bits(x), bits(y));
            prop_assert_eq!(x.newton_iters, y.newton_iters);
        }
    }
}

#[test]
fn runs_are_deterministic() {
    let run = || {
        let mut cfg = ScenarioConfig::falling_ball();
        cfg.geometry.nx = 8;
        cfg.geometry.ny = 20;
        cfg.geometry.max_patch = 6e-3;
        let mut sim = Simulation::new(cfg.build().unwrap()).unwrap();
        let log: Vec<LogRecord> = (0..3).map(|_| sim.step().unwrap().record).collect();
        (log, sim.state().clone())
    };
    let (a, b) = (run(), run());
    for (x, y) in a.0.iter().zip(&b.0) {
        assert_eq!(x.avg_vy.to_bits(), y.avg_vy.to_bits());
        assert_eq!(x.d_min.to_bits(), y.d_min.to_bits());
    }
    let bits = |v: &[[f64; 2]]| v.iter().flatten().map(|x| x.to_bits()).collect::<Vec<_>>();
    assert_eq!(bits(&a.1.u), bits(&b.1.u));
    assert_eq!(bits(&a.1.d), bits(&b.1.d));
}
