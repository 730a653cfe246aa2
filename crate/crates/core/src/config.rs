//! Sectioned key-value run configuration.
//!
//! The text format is TOML restricted to one level of `[section]` tables with
//! scalar values. Every key has a default that depends on the scenario, so
//! an empty section list yields a complete run.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::dofs::PorousWallMode;
use crate::driver::{Scenario, TimeController};
use crate::fem::NewtonSettings;
use crate::fluid::{DomainMap, FluidParams, TimeScheme};
use crate::geom::Point;
use crate::mesh::{disk, graded_breaks, BoundaryTag, MeshError, PatchMeshBuilder, RefinementBand};
use crate::porous::PorousParams;
use crate::solid::{ContactMode, ContactParams, ContactScale, SolidParams};
use crate::system::Physics;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("{}{message}", location(*.line))]
pub struct ConfigError {
    /// 1-based line of the offending entry, if it came from the text.
    pub line: Option<usize>,
    pub message: String,
}

fn location(line: Option<usize>) -> String {
    line.map_or(String::new(), |l| format!("line {l}: "))
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeometryConfig {
    /// `box` (symmetry on the left, porous bottom, walls elsewhere) or
    /// `reservoirs` (two unit blocks split by a wall, inflow on the top left).
    pub layout: String,
    pub width: f64,
    pub height: f64,
    pub nx: usize,
    pub ny: usize,
    /// Height of the first patch row at the bottom; 0 for uniform rows.
    pub first_patch: f64,
    pub max_patch: f64,
    pub center_x: f64,
    pub center_y: f64,
    /// Ball radius; 0 for no solid.
    pub radius: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FluidConfig {
    pub rho: f64,
    pub mu: f64,
    pub gamma: f64,
    pub gamma_p: f64,
    pub convection: bool,
    pub gravity: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolidConfig {
    pub rho: f64,
    pub lambda: f64,
    pub mu: f64,
    pub gravity: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PorousConfig {
    /// `darcy` or `navier_slip`.
    pub mode: String,
    pub eps_p: f64,
    pub k_tau: f64,
    pub k_n: f64,
    pub alpha: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContactConfig {
    pub enabled: bool,
    /// `penalty` or `nitsche`.
    pub mode: String,
    /// `lambda` or `young`.
    pub scale: String,
    pub gamma_c: f64,
    pub eps_g: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TimeConfig {
    pub dt: f64,
    pub dt_min: f64,
    pub ladder_unit: f64,
    pub t_end: f64,
    /// `dg0`, `dg0_identity` or `backward_euler`.
    pub scheme: String,
    pub inflow_amplitude: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NewtonConfig {
    pub rtol: f64,
    pub atol: f64,
    pub max_iter: usize,
    /// Number of damping factors `1, 1/2, 1/4, ...` tried per iteration.
    pub line_search: usize,
    pub reuse_ratio: f64,
    /// Full steps accepted without residual decrease per solve.
    pub max_forced: usize,
    /// Relative residual at which a stalled iteration is accepted.
    pub stall_rtol: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeshConfig {
    pub min_cut: f64,
    pub band: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutputConfig {
    pub csv: String,
    /// Write a snapshot every this many steps; 0 disables snapshots.
    pub snapshot_every: usize,
    /// Comma separated subset of `u,p,d,dd`.
    pub fields: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    /// `falling_ball`, `reservoir` or `custom`.
    pub name: String,
    pub geometry: GeometryConfig,
    pub fluid: FluidConfig,
    pub solid: SolidConfig,
    pub porous: PorousConfig,
    pub contact: ContactConfig,
    pub time: TimeConfig,
    pub newton: NewtonConfig,
    pub mesh: MeshConfig,
    pub output: OutputConfig,
}

enum Slot<'a> {
    F64(&'a mut f64),
    Usize(&'a mut usize),
    Bool(&'a mut bool),
    Choice(&'a mut String, &'static [&'static str]),
    Text(&'a mut String),
}

const SCENARIOS: &[&str] = &["falling_ball", "reservoir", "custom"];

impl ScenarioConfig {
    /// Defaults of the falling elastic ball in a water-glycerol mixture.
    pub fn falling_ball() -> Self {
        let first_patch = 4e-4;
        let cell = first_patch / 2.0;
        Self {
            name: "falling_ball".into(),
            geometry: GeometryConfig {
                layout: "box".into(),
                width: 0.03,
                height: 0.075,
                nx: 16,
                ny: 48,
                first_patch,
                max_patch: 3e-3,
                center_x: 0.0,
                center_y: 0.05,
                radius: 0.01,
            },
            fluid: FluidConfig { rho: 1141.0, mu: 1141.0 * 7e-6, gamma: 100.0, gamma_p: 1e-2, convection: true, gravity: -9.81 },
            solid: SolidConfig { rho: 1351.0, lambda: 7.64e6, mu: 1.04e6, gravity: -9.81 },
            porous: PorousConfig { mode: "darcy".into(), eps_p: 1e-4, k_tau: 1e-2, k_n: 1e-2, alpha: 1.0 },
            contact: ContactConfig {
                enabled: true,
                mode: "penalty".into(),
                scale: "lambda".into(),
                gamma_c: 30.0,
                eps_g: cell / 4.0,
            },
            time: TimeConfig {
                dt: 2e-3,
                dt_min: 1.25e-4,
                ladder_unit: cell,
                t_end: 0.8,
                scheme: "dg0".into(),
                inflow_amplitude: 0.0,
            },
            newton: NewtonConfig { rtol: 1e-8, atol: 1e-10, max_iter: 25, line_search: 4, reuse_ratio: 0.0, max_forced: 5, stall_rtol: 1e-5 },
            mesh: MeshConfig { min_cut: 0.15, band: 6e-3 },
            output: OutputConfig { csv: "log.csv".into(), snapshot_every: 0, fields: "u,p,d,dd".into() },
        }
    }

    /// Defaults of the two reservoirs connected through the porous wall.
    pub fn reservoir() -> Self {
        let mut c = Self::falling_ball();
        c.name = "reservoir".into();
        c.geometry = GeometryConfig {
            layout: "reservoirs".into(),
            width: 2.0,
            height: 1.0,
            nx: 64,
            ny: 32,
            first_patch: 0.0,
            max_patch: 1.0 / 32.0,
            center_x: 0.0,
            center_y: 0.0,
            radius: 0.0,
        };
        c.fluid = FluidConfig { rho: 1.0, mu: 0.03, gamma: 100.0, gamma_p: 1e-2, convection: false, gravity: 0.0 };
        c.solid.gravity = 0.0;
        c.porous = PorousConfig { mode: "darcy".into(), eps_p: 0.01, k_tau: 1.0, k_n: 1.0, alpha: 0.0 };
        c.contact.enabled = false;
        c.contact.eps_g = 0.0;
        c.time = TimeConfig {
            dt: 0.01,
            dt_min: 0.01,
            ladder_unit: 1.0,
            t_end: 0.25,
            scheme: "dg0".into(),
            inflow_amplitude: 5.0,
        };
        c.mesh.band = 0.1;
        c
    }

    /// Generic box without a solid; every value is meant to be overridden.
    pub fn custom() -> Self {
        let mut c = Self::falling_ball();
        c.name = "custom".into();
        c.geometry.radius = 0.0;
        c.contact.enabled = false;
        c
    }

    pub fn defaults_for(name: &str) -> Option<Self> {
        match name {
            "falling_ball" => Some(Self::falling_ball()),
            "reservoir" => Some(Self::reservoir()),
            "custom" => Some(Self::custom()),
            _ => None,
        }
    }

    fn slots(&mut self) -> Vec<(&'static str, &'static str, Slot<'_>)> {
        let g = &mut self.geometry;
        let f = &mut self.fluid;
        let s = &mut self.solid;
        let p = &mut self.porous;
        let c = &mut self.contact;
        let t = &mut self.time;
        let n = &mut self.newton;
        let m = &mut self.mesh;
        let o = &mut self.output;
        vec![
            ("scenario", "name", Slot::Choice(&mut self.name, SCENARIOS)),
            ("geometry", "layout", Slot::Choice(&mut g.layout, &["box", "reservoirs"])),
            ("geometry", "width", Slot::F64(&mut g.width)),
            ("geometry", "height", Slot::F64(&mut g.height)),
            ("geometry", "nx", Slot::Usize(&mut g.nx)),
            ("geometry", "ny", Slot::Usize(&mut g.ny)),
            ("geometry", "first_patch", Slot::F64(&mut g.first_patch)),
            ("geometry", "max_patch", Slot::F64(&mut g.max_patch)),
            ("geometry", "center_x", Slot::F64(&mut g.center_x)),
            ("geometry", "center_y", Slot::F64(&mut g.center_y)),
            ("geometry", "radius", Slot::F64(&mut g.radius)),
            ("fluid", "rho", Slot::F64(&mut f.rho)),
            ("fluid", "mu", Slot::F64(&mut f.mu)),
            ("fluid", "gamma", Slot::F64(&mut f.gamma)),
            ("fluid", "gamma_p", Slot::F64(&mut f.gamma_p)),
            ("fluid", "convection", Slot::Bool(&mut f.convection)),
            ("fluid", "gravity", Slot::F64(&mut f.gravity)),
            ("solid", "rho", Slot::F64(&mut s.rho)),
            ("solid", "lambda", Slot::F64(&mut s.lambda)),
            ("solid", "mu", Slot::F64(&mut s.mu)),
            ("solid", "gravity", Slot::F64(&mut s.gravity)),
            ("porous", "mode", Slot::Choice(&mut p.mode, &["darcy", "navier_slip"])),
            ("porous", "eps_p", Slot::F64(&mut p.eps_p)),
            ("porous", "k_tau", Slot::F64(&mut p.k_tau)),
            ("porous", "k_n", Slot::F64(&mut p.k_n)),
            ("porous", "alpha", Slot::F64(&mut p.alpha)),
            ("contact", "enabled", Slot::Bool(&mut c.enabled)),
            ("contact", "mode", Slot::Choice(&mut c.mode, &["penalty", "nitsche"])),
            ("contact", "scale", Slot::Choice(&mut c.scale, &["lambda", "young"])),
            ("contact", "gamma_c", Slot::F64(&mut c.gamma_c)),
            ("contact", "eps_g", Slot::F64(&mut c.eps_g)),
            ("time", "dt", Slot::F64(&mut t.dt)),
            ("time", "dt_min", Slot::F64(&mut t.dt_min)),
            ("time", "ladder_unit", Slot::F64(&mut t.ladder_unit)),
            ("time", "t_end", Slot::F64(&mut t.t_end)),
            ("time", "scheme", Slot::Choice(&mut t.scheme, &["dg0", "dg0_identity", "backward_euler"])),
            ("time", "inflow_amplitude", Slot::F64(&mut t.inflow_amplitude)),
            ("newton", "rtol", Slot::F64(&mut n.rtol)),
            ("newton", "atol", Slot::F64(&mut n.atol)),
            ("newton", "max_iter", Slot::Usize(&mut n.max_iter)),
            ("newton", "line_search", Slot::Usize(&mut n.line_search)),
            ("newton", "reuse_ratio", Slot::F64(&mut n.reuse_ratio)),
            ("newton", "max_forced", Slot::Usize(&mut n.max_forced)),
            ("newton", "stall_rtol", Slot::F64(&mut n.stall_rtol)),
            ("mesh", "min_cut", Slot::F64(&mut m.min_cut)),
            ("mesh", "band", Slot::F64(&mut m.band)),
            ("output", "csv", Slot::Text(&mut o.csv)),
            ("output", "snapshot_every", Slot::Usize(&mut o.snapshot_every)),
            ("output", "fields", Slot::Text(&mut o.fields)),
        ]
    }

    /// Sets `section.key` from a TOML value (bare words are taken as strings).
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        let err = |message: String| ConfigError { line: None, message };
        let (section, name) = key.split_once('.').ok_or_else(|| err(format!("override `{key}` must be section.key")))?;
        let parsed = value
            .trim()
            .parse::<toml_edit::Value>()
            .unwrap_or_else(|_| toml_edit::Value::from(value.trim()));
        self.assign(section, name, &parsed).map_err(|m| err(format!("override `{key}`: {m}")))?;
        Ok(())
    }

    fn assign(&mut self, section: &str, key: &str, v: &toml_edit::Value) -> Result<(), String> {
        if section == "porous" && key == "k" {
            self.assign("porous", "k_tau", v)?;
            return self.assign("porous", "k_n", v);
        }
        let mut slots = self.slots();
        let Some((_, _, slot)) = slots.iter_mut().find(|(s, k, _)| *s == section && *k == key) else {
            return Err(format!("unknown key `{key}` in section [{section}]"));
        };
        let mismatch = |want: &str| format!("`{key}` expects {want}, found {}", v.type_name());
        match slot {
            Slot::F64(x) => {
                **x = match (v.as_float(), v.as_integer()) {
                    (Some(f), _) => f,
                    (None, Some(i)) => i as f64,
                    _ => return Err(mismatch("a number")),
                }
            }
            Slot::Usize(x) => {
                let i = v.as_integer().ok_or_else(|| mismatch("an integer"))?;
                **x = usize::try_from(i).map_err(|_| format!("`{key}` must be non-negative, got {i}"))?;
            }
            Slot::Bool(x) => **x = v.as_bool().ok_or_else(|| mismatch("a boolean"))?,
            Slot::Choice(x, allowed) => {
                let s = v.as_str().ok_or_else(|| mismatch("a string"))?;
                if !allowed.contains(&s) {
                    return Err(format!("`{key}` must be one of {}, got `{s}`", allowed.join(", ")));
                }
                **x = s.to_string();
            }
            Slot::Text(x) => **x = v.as_str().ok_or_else(|| mismatch("a string"))?.to_string(),
        }
        Ok(())
    }

    /// Checks every parameter invariant. `lines` maps `section.key` to the
    /// line it was read from.
    fn validate_with(&self, lines: &HashMap<String, usize>) -> Result<(), ConfigError> {
        let fail = |key: &str, message: String| ConfigError { line: lines.get(key).copied(), message: format!("{key}: {message}") };
        let positive = |key: &str, v: f64| if v > 0.0 && v.is_finite() { Ok(()) } else { Err(fail(key, format!("must be positive, got {v}"))) };
        let g = &self.geometry;
        positive("geometry.width", g.width)?;
        positive("geometry.height", g.height)?;
        if g.nx == 0 || g.ny == 0 {
            return Err(fail("geometry.nx", "patch counts must be at least 1".into()));
        }
        if g.layout == "reservoirs" && g.nx % 2 != 0 {
            return Err(fail("geometry.nx", format!("must be even for two reservoirs, got {}", g.nx)));
        }
        if g.first_patch < 0.0 {
            return Err(fail("geometry.first_patch", "must be non-negative".into()));
        }
        if g.radius < 0.0 {
            return Err(fail("geometry.radius", "must be non-negative".into()));
        }
        if g.radius > 0.0 {
            let inside = g.center_x - g.radius >= -g.radius && g.center_x + g.radius < g.width && g.center_y - g.radius > 0.0 && g.center_y + g.radius < g.height;
            if !inside {
                return Err(fail("geometry.center_y", "ball must lie inside the box and off the bottom wall".into()));
            }
        }
        self.fluid_params().validate().map_err(|m| fail("fluid.mu", m))?;
        if self.has_solid() {
            self.solid_params().validate().map_err(|m| fail("solid.lambda", m))?;
        }
        self.porous_params().validate().map_err(|m| fail(if self.porous.eps_p <= 0.0 { "porous.eps_p" } else { "porous.k_tau" }, m))?;
        if self.contact.enabled {
            self.contact_params().validate().map_err(|m| fail("contact.gamma_c", m))?;
        }
        let c = self.controller();
        c.validate().map_err(|m| fail("time.dt_min", m))?;
        positive("time.ladder_unit", self.time.ladder_unit)?;
        self.newton_settings().validate().map_err(|m| fail("newton.rtol", m))?;
        if !(0.0..0.5).contains(&self.mesh.min_cut) {
            return Err(fail("mesh.min_cut", format!("must lie in [0, 0.5), got {}", self.mesh.min_cut)));
        }
        positive("mesh.band", self.mesh.band)?;
        for f in self.output.fields.split(',').map(str::trim).filter(|f| !f.is_empty()) {
            if !["u", "p", "d", "dd"].contains(&f) {
                return Err(fail("output.fields", format!("unknown field `{f}`")));
            }
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        self.validate_with(&HashMap::new())
    }

    pub fn has_solid(&self) -> bool {
        self.geometry.radius > 0.0
    }

    pub fn fluid_params(&self) -> FluidParams {
        let f = &self.fluid;
        FluidParams { rho: f.rho, mu: f.mu, gamma: f.gamma, gamma_p: f.gamma_p }
    }

    pub fn solid_params(&self) -> SolidParams {
        let s = &self.solid;
        SolidParams { rho: s.rho, lambda: s.lambda, mu: s.mu, gravity: [0.0, s.gravity] }
    }

    pub fn porous_params(&self) -> PorousParams {
        let p = &self.porous;
        PorousParams { eps_p: p.eps_p, k_tau: p.k_tau, k_n: p.k_n, alpha: p.alpha }
    }

    pub fn contact_params(&self) -> ContactParams {
        let c = &self.contact;
        ContactParams {
            gamma_c: c.gamma_c,
            eps_g: c.eps_g,
            mode: if c.mode == "nitsche" { ContactMode::NitscheAugmented } else { ContactMode::Penalty },
            scale: if c.scale == "young" { ContactScale::Young } else { ContactScale::Lambda },
        }
    }

    pub fn controller(&self) -> TimeController {
        let t = &self.time;
        TimeController::ladder(t.dt, t.dt_min, t.ladder_unit, t.t_end)
    }

    pub fn newton_settings(&self) -> NewtonSettings {
        let n = &self.newton;
        NewtonSettings {
            rtol: n.rtol,
            atol: n.atol,
            max_iter: n.max_iter,
            damping: (0..n.line_search.max(1)).map(|i| 0.5f64.powi(i as i32)).collect(),
            reuse_ratio: n.reuse_ratio,
            max_forced: n.max_forced,
            stall_rtol: n.stall_rtol,
        }
    }

    pub fn scheme(&self) -> TimeScheme {
        match self.time.scheme.as_str() {
            "dg0_identity" => TimeScheme::Dg0(DomainMap::Identity),
            "backward_euler" => TimeScheme::BackwardEuler,
            _ => TimeScheme::Dg0(DomainMap::Transport),
        }
    }

    pub fn physics(&self) -> Physics {
        Physics {
            fluid: self.fluid_params(),
            solid: self.solid_params(),
            porous: self.porous_params(),
            wall_mode: if self.porous.mode == "navier_slip" { PorousWallMode::NavierSlip } else { PorousWallMode::Darcy },
            contact: (self.contact.enabled && self.has_solid()).then(|| self.contact_params()),
            fluid_gravity: [0.0, self.fluid.gravity],
            convection: self.fluid.convection,
        }
    }

    /// Builds the background mesh and the run description.
    pub fn build(&self) -> Result<Scenario, MeshError> {
        let g = &self.geometry;
        let band = (g.first_patch > 0.0).then_some(RefinementBand { first: g.first_patch, max: g.max_patch });
        let template = match g.layout.as_str() {
            "reservoirs" => {
                let half = g.width / 2.0;
                let xs = graded_breaks(half, g.nx / 2, None)?;
                let ys = graded_breaks(g.height, g.ny, band)?;
                PatchMeshBuilder::new().block([0.0, 0.0], xs.clone(), ys.clone()).block([half, 0.0], xs, ys).build(|m, n| {
                    Some(if n[1] < -0.5 {
                        BoundaryTag::Porous
                    } else if n[1] > 0.5 {
                        if m[0] < half { BoundaryTag::Inflow } else { BoundaryTag::Outflow }
                    } else {
                        BoundaryTag::Wall
                    })
                })?
            }
            _ => {
                let xs = graded_breaks(g.width, g.nx, None)?;
                let ys = graded_breaks(g.height, g.ny, band)?;
                PatchMeshBuilder::new().block([0.0, 0.0], xs, ys).build(|_, n| {
                    Some(if n[1] < -0.5 {
                        BoundaryTag::Porous
                    } else if n[0] < -0.5 {
                        BoundaryTag::Symmetry
                    } else {
                        BoundaryTag::Wall
                    })
                })?
            }
        };
        let shape: Option<Box<dyn Fn(Point) -> f64>> =
            self.has_solid().then(|| Box::new(disk([g.center_x, g.center_y], g.radius)) as Box<dyn Fn(Point) -> f64>);
        Ok(Scenario {
            template,
            shape,
            physics: self.physics(),
            scheme: self.scheme(),
            inflow_amplitude: self.time.inflow_amplitude,
            controller: self.controller(),
            newton: self.newton_settings(),
            min_cut: self.mesh.min_cut,
            band: self.mesh.band,
        })
    }

    /// Canonical text form; parsing it gives back an equal configuration.
    pub fn to_text(&self) -> String {
        let mut copy = self.clone();
        let mut out = String::new();
        let mut current = "";
        for (section, key, slot) in copy.slots() {
            if section != current {
                if !current.is_empty() {
                    out.push('\n');
                }
                let _ = writeln!(out, "[{section}]");
                current = section;
            }
            let value = match slot {
                Slot::F64(x) => format!("{:?}", *x),
                Slot::Usize(x) => x.to_string(),
                Slot::Bool(x) => x.to_string(),
                Slot::Choice(s, _) | Slot::Text(s) => toml_edit::Value::from(s.as_str()).to_string().trim().to_string(),
            };
            let _ = writeln!(out, "{key} = {value}");
        }
        out
    }
}

fn line_of(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())].bytes().filter(|&b| b == b'\n').count() + 1
}

/// Parses and validates a configuration, then applies `section.key=value`
/// overrides.
pub fn parse_config_with(text: &str, overrides: &[(String, String)]) -> Result<ScenarioConfig, ConfigError> {
    let doc = toml_edit::Document::parse(text).map_err(|e| ConfigError {
        line: e.span().map(|s| line_of(text, s.start)),
        message: e.message().to_string(),
    })?;
    let root = doc.as_item().as_table().expect("document root is a table");
    let at = |span: Option<std::ops::Range<usize>>| span.map(|s| line_of(text, s.start));

    let mut name = "falling_ball".to_string();
    if let Some(scn) = root.get("scenario").and_then(|i| i.as_table()) {
        if let Some(item) = scn.get("name") {
            name = item
                .as_str()
                .ok_or_else(|| ConfigError { line: at(item.span()), message: "scenario name must be a string".into() })?
                .to_string();
        }
    }
    if let Some((_, v)) = overrides.iter().find(|(k, _)| k == "scenario.name") {
        name = v.trim().trim_matches('"').to_string();
    }
    let mut cfg = ScenarioConfig::defaults_for(&name).ok_or_else(|| ConfigError {
        line: root.get("scenario").and_then(|s| s.get("name")).and_then(|i| at(i.span())),
        message: format!("unknown scenario `{name}` (expected one of {})", SCENARIOS.join(", ")),
    })?;

    let mut lines = HashMap::new();
    for (section, item) in root.iter() {
        let line = at(root.key(section).and_then(|k| k.span()));
        let table = item
            .as_table()
            .ok_or_else(|| ConfigError { line, message: format!("`{section}` must be a [section]") })?;
        for (key, value) in table.iter() {
            let line = at(table.key(key).and_then(|k| k.span()));
            let v = value
                .as_value()
                .ok_or_else(|| ConfigError { line, message: format!("`{section}.{key}` must be a scalar value") })?;
            cfg.assign(section, key, v).map_err(|message| ConfigError { line, message })?;
            if let Some(l) = line {
                lines.insert(format!("{section}.{key}"), l);
                if section == "porous" && key == "k" {
                    lines.insert("porous.k_tau".into(), l);
                    lines.insert("porous.k_n".into(), l);
                }
            }
        }
    }
    for (k, v) in overrides {
        cfg.set(k, v)?;
        lines.remove(k);
    }
    cfg.validate_with(&lines)?;
    Ok(cfg)
}

pub fn parse_config(text: &str) -> Result<ScenarioConfig, ConfigError> {
    parse_config_with(text, &[])
}
