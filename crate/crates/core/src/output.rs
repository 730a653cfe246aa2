//! Log files, field snapshots and the file-producing run loop.

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use crate::config::ScenarioConfig;
use crate::dofs::FieldState;
use crate::driver::{DriverError, LogRecord, Simulation, StepReport};
use crate::mesh::{PatchMesh, Phase};

pub const LOG_HEADER: [&str; 8] = ["t", "dt", "d_min", "avg_vy", "contact_force", "flux_left", "flux_right", "newton_iters"];

/// Decimal text with 17 significant digits, enough to restore every bit.
pub fn full_precision(x: f64) -> String {
    format!("{x:.16e}")
}

fn csv_err(e: csv::Error) -> io::Error {
    io::Error::other(e)
}

/// Streams log rows to a CSV file, flushing after each row.
pub struct LogWriter {
    inner: csv::Writer<fs::File>,
}

impl LogWriter {
    pub fn create(path: &Path) -> io::Result<Self> {
        let mut inner = csv::Writer::from_writer(fs::File::create(path)?);
        inner.write_record(LOG_HEADER).map_err(csv_err)?;
        inner.flush()?;
        Ok(Self { inner })
    }

    pub fn push(&mut self, r: &LogRecord) -> io::Result<()> {
        let f = [r.t, r.dt, r.d_min, r.avg_vy, r.contact_force, r.flux_left, r.flux_right].map(full_precision);
        let iters = r.newton_iters.to_string();
        self.inner.write_record(f.iter().map(String::as_str).chain([iters.as_str()])).map_err(csv_err)?;
        self.inner.flush()
    }
}

pub fn write_log(records: &[LogRecord], path: &Path) -> io::Result<()> {
    let mut w = LogWriter::create(path)?;
    records.iter().try_for_each(|r| w.push(r))
}

/// Reads a log written by [`write_log`]; the header must match exactly.
pub fn read_log(path: &Path) -> io::Result<Vec<LogRecord>> {
    let mut rdr = csv::Reader::from_path(path).map_err(csv_err)?;
    let header = rdr.headers().map_err(csv_err)?.clone();
    if header.iter().ne(LOG_HEADER) {
        return Err(io::Error::new(io::ErrorKind::InvalidData, format!("unexpected log header {:?}", header)));
    }
    let bad = |line: usize, what: &str| io::Error::new(io::ErrorKind::InvalidData, format!("row {line}: invalid {what}"));
    let mut out = Vec::new();
    for (i, row) in rdr.records().enumerate() {
        let row = row.map_err(csv_err)?;
        let num = |j: usize| row[j].parse::<f64>().map_err(|_| bad(i + 2, LOG_HEADER[j]));
        out.push(LogRecord {
            t: num(0)?,
            dt: num(1)?,
            d_min: num(2)?,
            avg_vy: num(3)?,
            contact_force: num(4)?,
            flux_left: num(5)?,
            flux_right: num(6)?,
            newton_iters: row[7].parse().map_err(|_| bad(i + 2, "newton_iters"))?,
        });
    }
    Ok(out)
}

/// Which nodal fields go into a snapshot.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FieldSelection {
    pub u: bool,
    pub p: bool,
    pub d: bool,
    pub dd: bool,
}

impl FieldSelection {
    pub const ALL: Self = Self { u: true, p: true, d: true, dd: true };

    pub fn parse(list: &str) -> Self {
        let has = |name: &str| list.split(',').any(|f| f.trim() == name);
        Self { u: has("u"), p: has("p"), d: has("d"), dd: has("dd") }
    }
}

fn push_vectors(out: &mut String, name: &str, v: &[[f64; 2]]) {
    let _ = writeln!(out, "VECTORS {name} double");
    for x in v {
        let _ = writeln!(out, "{:e} {:e} 0", x[0], x[1]);
    }
}

/// Legacy ASCII VTK (3.0) unstructured grid of the fitted mesh with nodal
/// fields and the cell affiliation (0 fluid, 1 solid).
pub fn snapshot_text(mesh: &PatchMesh, state: &FieldState, fields: FieldSelection, t: f64) -> String {
    let mut out = String::new();
    let n = mesh.n_nodes();
    let cells = mesh.cells();
    let _ = writeln!(out, "# vtk DataFile Version 3.0\nfields at t = {t:e}\nASCII\nDATASET UNSTRUCTURED_GRID");
    let _ = writeln!(out, "POINTS {n} double");
    for p in mesh.nodes() {
        let _ = writeln!(out, "{:e} {:e} 0", p[0], p[1]);
    }
    let _ = writeln!(out, "CELLS {} {}", cells.len(), 4 * cells.len());
    for c in cells {
        let _ = writeln!(out, "3 {} {} {}", c.nodes[0], c.nodes[1], c.nodes[2]);
    }
    let _ = writeln!(out, "CELL_TYPES {}", cells.len());
    for _ in cells {
        out.push_str("5\n");
    }
    let _ = writeln!(out, "CELL_DATA {}\nSCALARS affiliation int 1\nLOOKUP_TABLE default", cells.len());
    for c in cells {
        out.push_str(if c.phase == Phase::Solid { "1\n" } else { "0\n" });
    }
    let _ = writeln!(out, "POINT_DATA {n}");
    if fields.u {
        push_vectors(&mut out, "u", &state.u);
    }
    if fields.p {
        out.push_str("SCALARS p double 1\nLOOKUP_TABLE default\n");
        for p in &state.p {
            let _ = writeln!(out, "{p:e}");
        }
    }
    if fields.d {
        push_vectors(&mut out, "d", &state.d);
    }
    if fields.dd {
        push_vectors(&mut out, "dd", &state.dd);
    }
    out
}

/// The layer pressure along the porous wall as a legacy VTK polyline.
pub fn layer_polyline_text(state: &FieldState, t: f64) -> String {
    let n = state.pl_x.len();
    let mut out = String::new();
    let _ = writeln!(out, "# vtk DataFile Version 3.0\nlayer pressure at t = {t:e}\nASCII\nDATASET POLYDATA");
    let _ = writeln!(out, "POINTS {n} double");
    for x in &state.pl_x {
        let _ = writeln!(out, "{x:e} 0 0");
    }
    if n >= 2 {
        let _ = writeln!(out, "LINES 1 {}", n + 1);
        let idx: Vec<String> = (0..n).map(|i| i.to_string()).collect();
        let _ = writeln!(out, "{n} {}", idx.join(" "));
    }
    let _ = writeln!(out, "POINT_DATA {n}\nSCALARS pl double 1\nLOOKUP_TABLE default");
    for p in &state.pl {
        let _ = writeln!(out, "{p:e}");
    }
    out
}

pub fn write_snapshot(mesh: &PatchMesh, state: &FieldState, fields: FieldSelection, t: f64, path: &Path) -> io::Result<()> {
    fs::write(path, snapshot_text(mesh, state, fields, t))
}

pub fn write_layer_polyline(state: &FieldState, t: f64, path: &Path) -> io::Result<()> {
    fs::write(path, layer_polyline_text(state, t))
}

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("io: {0}")]
    Io(#[from] io::Error),
    #[error(transparent)]
    Driver(#[from] DriverError),
}

#[derive(Debug, Clone)]
pub struct RunSummary {
    pub log: Vec<LogRecord>,
    pub csv: PathBuf,
    pub snapshots: Vec<PathBuf>,
}

/// Runs a configuration to its end time, writing the log (flushed per step)
/// and snapshots into `out_dir`. `observe` sees every accepted step.
pub fn run_to_dir(
    config: &ScenarioConfig,
    out_dir: &Path,
    mut observe: impl FnMut(&Simulation, &StepReport),
) -> Result<RunSummary, RunError> {
    fs::create_dir_all(out_dir)?;
    let scenario = config.build().map_err(DriverError::from)?;
    let mut sim = Simulation::new(scenario)?;
    let csv = out_dir.join(&config.output.csv);
    let mut writer = LogWriter::create(&csv)?;
    let fields = FieldSelection::parse(&config.output.fields);
    let every = config.output.snapshot_every;
    let mut snapshots = Vec::new();
    let snap = |sim: &Simulation, snapshots: &mut Vec<PathBuf>| -> io::Result<()> {
        let step = sim.steps();
        let path = out_dir.join(format!("snapshot_{step:06}.vtk"));
        write_snapshot(sim.mesh(), sim.state(), fields, sim.time(), &path)?;
        if !sim.state().pl_x.is_empty() {
            write_layer_polyline(sim.state(), sim.time(), &out_dir.join(format!("layer_{step:06}.vtk")))?;
        }
        snapshots.push(path);
        Ok(())
    };
    let first = sim.initial_record();
    writer.push(&first)?;
    let mut log = vec![first];
    if every > 0 {
        snap(&sim, &mut snapshots)?;
    }
    while !sim.finished() {
        let report = sim.step()?;
        writer.push(&report.record)?;
        log.push(report.record);
        observe(&sim, &report);
        if every > 0 && sim.steps() % every == 0 {
            snap(&sim, &mut snapshots)?;
        }
    }
    Ok(RunSummary { log, csv, snapshots })
}

/// Convenience wrapper writing to a sink for progress messages.
pub fn progress_line(out: &mut impl Write, r: &LogRecord) -> io::Result<()> {
    writeln!(
        out,
        "t = {:.6} dt = {:.3e} d_min = {:.4e} avg_vy = {:+.4e} force = {:.3e} newton = {}",
        r.t, r.dt, r.d_min, r.avg_vy, r.contact_force, r.newton_iters
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dofs::{DofMap, PorousWallMode};
    use crate::mesh::build_patch_mesh;

    #[test]
    fn header_is_pinned() {
        assert_eq!(LOG_HEADER.join(","), "t,dt,d_min,avg_vy,contact_force,flux_left,flux_right,newton_iters");
    }

    #[test]
    fn empty_and_single_logs() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("empty.csv");
        write_log(&[], &p).unwrap();
        assert_eq!(fs::read_to_string(&p).unwrap(), format!("{}\n", LOG_HEADER.join(",")));
        assert!(read_log(&p).unwrap().is_empty());
        let p = dir.path().join("one.csv");
        write_log(&[LogRecord::default()], &p).unwrap();
        assert_eq!(fs::read_to_string(&p).unwrap().lines().count(), 2);
    }

    #[test]
    fn log_round_trip_is_bit_exact() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("log.csv");
        let recs = vec![
            LogRecord { t: 0.1, dt: 2e-3, d_min: 0.04, avg_vy: -1.0 / 3.0, contact_force: 1e-300, flux_left: -0.0, flux_right: 5e-324, newton_iters: 3 },
            LogRecord { t: 0.30000000000000004, dt: f64::MAX, d_min: f64::NAN, avg_vy: std::f64::consts::PI, ..Default::default() },
        ];
        write_log(&recs, &p).unwrap();
        let back = read_log(&p).unwrap();
        for (a, b) in recs.iter().zip(&back) {
            for (x, y) in [(a.t, b.t), (a.dt, b.dt), (a.d_min, b.d_min), (a.avg_vy, b.avg_vy), (a.contact_force, b.contact_force), (a.flux_left, b.flux_left), (a.flux_right, b.flux_right)] {
                assert_eq!(x.to_bits(), y.to_bits());
            }
            assert_eq!(a.newton_iters, b.newton_iters);
        }
    }

    #[test]
    fn wrong_header_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("x.csv");
        fs::write(&p, "t,dt\n0,0\n").unwrap();
        assert!(read_log(&p).is_err());
    }

    #[test]
    fn zero_state_snapshot_structure() {
        let m = build_patch_mesh(1.0, 1.0, 2, 2, None).unwrap();
        let dofs = DofMap::new(&m, PorousWallMode::Darcy, None);
        let s = FieldState::from_vector(&dofs, &vec![0.0; dofs.n_total()]);
        let text = snapshot_text(&m, &s, FieldSelection::ALL, 0.0);
        assert!(text.starts_with("# vtk DataFile Version 3.0\n"));
        assert!(text.contains(&format!("POINTS {} double", m.n_nodes())));
        assert!(text.contains(&format!("CELLS {} {}", m.cells().len(), 4 * m.cells().len())));
        assert!(text.contains("VECTORS dd double"));
        let none = snapshot_text(&m, &s, FieldSelection::parse(""), 0.0);
        assert!(!none.contains("VECTORS"));
    }
}
