//! Background patch mesh, interface fitting and domain affiliation.
//!
//! The mesh is a set of structured blocks of coarse quadrilateral patches.
//! Each patch owns a 3x3 lattice of nodes (local index `3 * row + col`) and is
//! split into 8 triangles. Patches cut by the interface move their edge
//! midpoints onto the cut points and rearrange the triangles so the
//! subtriangulation resolves the interface with a straight segment.

use std::collections::HashMap;

use crate::geom::{self, Point};

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum MeshError {
    #[error("invalid mesh dimensions: {0}")]
    Dimensions(String),
    #[error("refinement band cannot be realised: {0}")]
    Band(String),
    #[error("boundary segment at ({x:.6}, {y:.6}) has no tag")]
    Untagged { x: f64, y: f64 },
    #[error("patch {patch} is cut twice by the interface (diagonal sign pattern); refine the mesh")]
    Unresolvable { patch: usize },
    #[error("subtriangle {cell} has non-positive area {area:e}")]
    Degenerate { cell: usize, area: f64 },
    #[error("point ({x:.6}, {y:.6}) lies outside the mesh")]
    OutsideMesh { x: f64, y: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Phase {
    Fluid,
    Solid,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundaryTag {
    /// No-slip wall.
    Wall,
    /// Wall carrying the thin porous layer.
    Porous,
    /// Symmetry axis (zero normal velocity, free tangential traction).
    Symmetry,
    /// Traction boundary driven by the inflow pressure.
    Inflow,
    /// Traction-free boundary.
    Outflow,
}

/// Geometric grading of patch heights away from `y = y0` of a block.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RefinementBand {
    /// Height of the first patch row.
    pub first: f64,
    /// Upper bound for patch heights further away.
    pub max: f64,
}

/// Patch breakpoints of `n` cells on `[0, length]`.
///
/// With a band the sizes follow `min(first * q^i, max)` where the growth
/// factor `q >= 1` is found by bisection so that the sizes add up to `length`.
pub fn graded_breaks(length: f64, n: usize, band: Option<RefinementBand>) -> Result<Vec<f64>, MeshError> {
    if !(length > 0.0) || n == 0 {
        return Err(MeshError::Dimensions(format!("length {length}, cells {n}")));
    }
    let Some(band) = band else {
        return Ok((0..=n).map(|i| length * i as f64 / n as f64).collect());
    };
    if !(band.first > 0.0) || band.max < band.first {
        return Err(MeshError::Band(format!("first {} max {}", band.first, band.max)));
    }
    let nf = n as f64;
    if band.first * nf > length * (1.0 + 1e-12) {
        return Err(MeshError::Band(format!("{n} rows of height {} exceed length {length}", band.first)));
    }
    if band.max * nf < length * (1.0 - 1e-12) {
        return Err(MeshError::Band(format!("{n} rows capped at {} cannot fill length {length}", band.max)));
    }
    let total = |q: f64| (0..n).map(|i| (band.first * q.powi(i as i32)).min(band.max)).sum::<f64>();
    let (mut lo, mut hi) = (1.0_f64, 2.0_f64);
    while total(hi) < length {
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if total(mid) < length {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let q = 0.5 * (lo + hi);
    let mut breaks = Vec::with_capacity(n + 1);
    breaks.push(0.0);
    let mut y = 0.0;
    for i in 0..n {
        y += (band.first * q.powi(i as i32)).min(band.max);
        breaks.push(y);
    }
    // remove the bisection residue from the last break
    let scale = length / y;
    for b in breaks.iter_mut() {
        *b *= scale;
    }
    breaks[n] = length;
    Ok(breaks)
}

#[derive(Debug, Clone)]
struct Block {
    xs: Vec<f64>,
    ys: Vec<f64>,
    node_offset: usize,
    patch_offset: usize,
}

impl Block {
    fn nx(&self) -> usize {
        self.xs.len() - 1
    }
    fn ny(&self) -> usize {
        self.ys.len() - 1
    }
    fn row_len(&self) -> usize {
        2 * self.nx() + 1
    }
}

#[derive(Debug, Clone)]
pub struct Patch {
    /// Global node indices of the 3x3 lattice, `3 * row + col`.
    pub nodes: [usize; 9],
    pub diameter: f64,
    pub area: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PatchKind {
    Uncut,
    /// Two adjacent corners per phase; interface crosses two opposite edges.
    Straight,
    /// One corner on its own; the center stays at the patch center.
    CornerFan,
    /// One corner on its own; the center is moved onto the interface.
    CornerSplit,
}

#[derive(Debug, Clone, Copy)]
pub struct Cell {
    pub nodes: [usize; 3],
    pub patch: usize,
    pub phase: Phase,
}

#[derive(Debug, Clone, Copy)]
struct CoarseBoundaryEdge {
    nodes: [usize; 3],
    normal: Point,
    tag: BoundaryTag,
}

#[derive(Debug, Clone, Copy)]
pub struct BoundarySegment {
    pub nodes: [usize; 2],
    pub cell: usize,
    pub tag: BoundaryTag,
    /// Outward unit normal of the domain.
    pub normal: Point,
}

#[derive(Debug, Clone, Copy)]
pub struct InterfaceSegment {
    pub nodes: [usize; 2],
    pub fluid_cell: usize,
    pub solid_cell: usize,
    /// Unit normal pointing out of the fluid, into the solid.
    pub normal: Point,
}

#[derive(Debug, Clone, Copy)]
pub struct InteriorFacet {
    pub nodes: [usize; 2],
    pub cells: [usize; 2],
}

/// Summary of a fitting pass.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FitReport {
    pub cut_patches: usize,
    pub straight: usize,
    pub corner_fan: usize,
    pub corner_split: usize,
    /// Number of edge cuts moved away from a corner by the clamp.
    pub clamped_cuts: usize,
}

#[derive(Debug, Clone)]
pub struct PatchMesh {
    blocks: Vec<Block>,
    lattice: Vec<Point>,
    nodes: Vec<Point>,
    patches: Vec<Patch>,
    kinds: Vec<PatchKind>,
    cells: Vec<Cell>,
    coarse_boundary: Vec<CoarseBoundaryEdge>,
    boundary: Vec<BoundarySegment>,
    interface: Vec<InterfaceSegment>,
    facets: Vec<InteriorFacet>,
    node_fluid: Vec<bool>,
    node_solid: Vec<bool>,
    node_cells: Vec<Vec<usize>>,
    bbox: [Point; 2],
}

/// Local indices of the patch corners in counter-clockwise order.
const CORNERS: [usize; 4] = [0, 2, 8, 6];

/// Local index of the lattice node obtained by a quarter turn about the center.
fn rot(local: usize) -> usize {
    let (a, b) = (local % 3, local / 3);
    let (ra, rb) = (2 - b, a);
    3 * rb + ra
}

fn rotate(local: usize, k: usize) -> usize {
    (0..k).fold(local, |l, _| rot(l))
}

const UNION_JACK: [[usize; 3]; 8] = [
    [0, 1, 4],
    [0, 4, 3],
    [1, 2, 4],
    [2, 5, 4],
    [4, 5, 8],
    [4, 8, 7],
    [3, 4, 6],
    [4, 7, 6],
];

const STRAIGHT_QUADS: [[usize; 4]; 4] = [[0, 1, 4, 3], [1, 2, 5, 4], [3, 4, 7, 6], [4, 5, 8, 7]];

const CORNER_FAN: [[usize; 3]; 8] = [
    [0, 1, 3],
    [1, 2, 4],
    [2, 5, 4],
    [5, 8, 4],
    [8, 7, 4],
    [7, 6, 4],
    [6, 3, 4],
    [3, 1, 4],
];

const CORNER_SPLIT: [[usize; 3]; 8] = [
    [0, 1, 4],
    [0, 4, 3],
    [4, 1, 2],
    [4, 2, 5],
    [4, 5, 8],
    [4, 8, 7],
    [4, 7, 6],
    [4, 6, 3],
];

/// Builder for meshes made of several non-merged rectangular blocks.
#[derive(Debug, Default)]
pub struct PatchMeshBuilder {
    blocks: Vec<(Point, Vec<f64>, Vec<f64>)>,
}

impl PatchMeshBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a block with lower-left corner `origin` and patch breakpoints
    /// relative to it.
    pub fn block(mut self, origin: Point, xs: Vec<f64>, ys: Vec<f64>) -> Self {
        self.blocks.push((origin, xs, ys));
        self
    }

    /// Builds the mesh; `tagger` receives the midpoint and outward normal of
    /// every coarse boundary edge.
    pub fn build<F>(self, tagger: F) -> Result<PatchMesh, MeshError>
    where
        F: Fn(Point, Point) -> Option<BoundaryTag>,
    {
        if self.blocks.is_empty() {
            return Err(MeshError::Dimensions("no blocks".into()));
        }
        let mut blocks = Vec::new();
        let mut lattice = Vec::new();
        let mut patches = Vec::new();
        let mut coarse_boundary = Vec::new();
        for (origin, xs, ys) in self.blocks {
            if xs.len() < 2 || ys.len() < 2 {
                return Err(MeshError::Dimensions("block needs at least one patch per direction".into()));
            }
            if xs.windows(2).any(|w| !(w[1] > w[0])) || ys.windows(2).any(|w| !(w[1] > w[0])) {
                return Err(MeshError::Dimensions("breakpoints must be strictly increasing".into()));
            }
            let block = Block {
                xs: xs.iter().map(|x| origin[0] + x).collect(),
                ys: ys.iter().map(|y| origin[1] + y).collect(),
                node_offset: lattice.len(),
                patch_offset: patches.len(),
            };
            let row = block.row_len();
            for j in 0..=2 * block.ny() {
                let y = half_break(&block.ys, j);
                for i in 0..row {
                    lattice.push([half_break(&block.xs, i), y]);
                }
            }
            for py in 0..block.ny() {
                for px in 0..block.nx() {
                    let mut nodes = [0; 9];
                    for b in 0..3 {
                        for a in 0..3 {
                            nodes[3 * b + a] = block.node_offset + (2 * py + b) * row + 2 * px + a;
                        }
                    }
                    let w = block.xs[px + 1] - block.xs[px];
                    let h = block.ys[py + 1] - block.ys[py];
                    let patch = patches.len();
                    patches.push(Patch { nodes, diameter: w.hypot(h), area: w * h });
                    let mut edge = |loc: [usize; 3], normal: Point| -> Result<(), MeshError> {
                        let g = loc.map(|l| patches[patch].nodes[l]);
                        let mid = lattice[g[1]];
                        let tag = tagger(mid, normal).ok_or(MeshError::Untagged { x: mid[0], y: mid[1] })?;
                        coarse_boundary.push(CoarseBoundaryEdge { nodes: g, normal, tag });
                        Ok(())
                    };
                    if py == 0 {
                        edge([0, 1, 2], [0.0, -1.0])?;
                    }
                    if px + 1 == block.nx() {
                        edge([2, 5, 8], [1.0, 0.0])?;
                    }
                    if py + 1 == block.ny() {
                        edge([8, 7, 6], [0.0, 1.0])?;
                    }
                    if px == 0 {
                        edge([6, 3, 0], [-1.0, 0.0])?;
                    }
                }
            }
            blocks.push(block);
        }
        let mut lo = [f64::INFINITY; 2];
        let mut hi = [f64::NEG_INFINITY; 2];
        for p in &lattice {
            for c in 0..2 {
                lo[c] = lo[c].min(p[c]);
                hi[c] = hi[c].max(p[c]);
            }
        }
        let n_nodes = lattice.len();
        let n_patches = patches.len();
        let mut mesh = PatchMesh {
            blocks,
            nodes: lattice.clone(),
            lattice,
            patches,
            kinds: vec![PatchKind::Uncut; n_patches],
            cells: Vec::with_capacity(8 * n_patches),
            coarse_boundary,
            boundary: Vec::new(),
            interface: Vec::new(),
            facets: Vec::new(),
            node_fluid: vec![false; n_nodes],
            node_solid: vec![false; n_nodes],
            node_cells: Vec::new(),
            bbox: [lo, hi],
        };
        mesh.fit(|_| 1.0, 0.05)?;
        Ok(mesh)
    }
}

fn half_break(breaks: &[f64], i: usize) -> f64 {
    if i % 2 == 0 {
        breaks[i / 2]
    } else {
        0.5 * (breaks[i / 2] + breaks[i / 2 + 1])
    }
}

/// Single-block rectangular mesh on `[0, width] x [0, height]` with every
/// boundary edge tagged as a no-slip wall. An optional band grades the patch
/// rows towards `y = 0`.
pub fn build_patch_mesh(
    width: f64,
    height: f64,
    nx: usize,
    ny: usize,
    band: Option<RefinementBand>,
) -> Result<PatchMesh, MeshError> {
    if !(width > 0.0) || !(height > 0.0) || nx == 0 || ny == 0 {
        return Err(MeshError::Dimensions(format!("{width} x {height} with {nx} x {ny} patches")));
    }
    let xs = graded_breaks(width, nx, None)?;
    let ys = graded_breaks(height, ny, band)?;
    PatchMeshBuilder::new().block([0.0, 0.0], xs, ys).build(|_, _| Some(BoundaryTag::Wall))
}

impl PatchMesh {
    pub fn nodes(&self) -> &[Point] {
        &self.nodes
    }
    pub fn node(&self, k: usize) -> Point {
        self.nodes[k]
    }
    pub fn lattice_position(&self, k: usize) -> Point {
        self.lattice[k]
    }
    pub fn n_nodes(&self) -> usize {
        self.nodes.len()
    }
    pub fn patches(&self) -> &[Patch] {
        &self.patches
    }
    pub fn patch_kind(&self, p: usize) -> PatchKind {
        self.kinds[p]
    }
    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }
    pub fn boundary(&self) -> &[BoundarySegment] {
        &self.boundary
    }
    pub fn interface(&self) -> &[InterfaceSegment] {
        &self.interface
    }
    /// Interior edges shared by two cells of the same phase.
    pub fn facets(&self) -> &[InteriorFacet] {
        &self.facets
    }
    pub fn node_has_fluid(&self, k: usize) -> bool {
        self.node_fluid[k]
    }
    pub fn node_has_solid(&self, k: usize) -> bool {
        self.node_solid[k]
    }
    pub fn node_cells(&self, k: usize) -> &[usize] {
        &self.node_cells[k]
    }
    pub fn bounding_box(&self) -> [Point; 2] {
        self.bbox
    }

    pub fn cell_points(&self, c: usize) -> [Point; 3] {
        self.cells[c].nodes.map(|k| self.nodes[k])
    }

    pub fn cell_area(&self, c: usize) -> f64 {
        let [a, b, cc] = self.cell_points(c);
        geom::signed_area(a, b, cc)
    }

    /// Whether `k` is one of the four corners of some patch.
    pub fn is_corner(&self, k: usize) -> bool {
        let b = self.block_of_node(k);
        let local = k - b.node_offset;
        let row = b.row_len();
        (local % row) % 2 == 0 && (local / row) % 2 == 0
    }

    fn block_of_node(&self, k: usize) -> &Block {
        let i = self.blocks.partition_point(|b| b.node_offset <= k) - 1;
        &self.blocks[i]
    }

    /// Smallest patch height adjacent to the lower boundary of any block.
    pub fn min_patch_height(&self) -> f64 {
        self.blocks
            .iter()
            .flat_map(|b| b.ys.windows(2).map(|w| w[1] - w[0]))
            .fold(f64::INFINITY, f64::min)
    }

    /// Refits the subtriangulation to the zero level of `level`, evaluated at
    /// patch corners (`level <= 0` is solid). Edge cuts are clamped to
    /// `[min_cut, 1 - min_cut]` of the edge length.
    pub fn fit<F>(&mut self, level: F, min_cut: f64) -> Result<FitReport, MeshError>
    where
        F: Fn(usize) -> f64,
    {
        let mut report = FitReport::default();
        self.nodes.clone_from(&self.lattice);
        let n = self.nodes.len();
        let mut corner_level = vec![f64::NAN; n];
        for p in &self.patches {
            for &c in &CORNERS {
                let k = p.nodes[c];
                if corner_level[k].is_nan() {
                    corner_level[k] = level(k);
                }
            }
        }
        let phase_of = |k: usize| if corner_level[k] <= 0.0 { Phase::Solid } else { Phase::Fluid };

        // cut points on patch edges, shared between neighbours
        for p in &self.patches {
            for e in 0..4 {
                let (ka, km, kb) = (p.nodes[CORNERS[e]], p.nodes[EDGE_MIDS[e]], p.nodes[CORNERS[(e + 1) % 4]]);
                if phase_of(ka) == phase_of(kb) {
                    continue;
                }
                let (lo, hi) = if ka < kb { (ka, kb) } else { (kb, ka) };
                let (fa, fb) = (corner_level[lo], corner_level[hi]);
                let raw = fa / (fa - fb);
                let t = raw.clamp(min_cut, 1.0 - min_cut);
                if t != raw {
                    report.clamped_cuts += 1;
                }
                self.nodes[km] = geom::lerp(self.lattice[lo], self.lattice[hi], t);
            }
        }

        self.cells.clear();
        for (pi, p) in self.patches.iter().enumerate() {
            let ph = CORNERS.map(|c| phase_of(p.nodes[c]));
            let n_solid = ph.iter().filter(|&&x| x == Phase::Solid).count();
            let g = |canon: usize, k: usize| p.nodes[rotate(canon, k)];
            let kind;
            let mut tris: Vec<([usize; 3], Phase)> = Vec::with_capacity(8);
            if n_solid == 0 || n_solid == 4 {
                kind = PatchKind::Uncut;
                for t in UNION_JACK {
                    tris.push((t.map(|l| p.nodes[l]), ph[0]));
                }
            } else if n_solid == 1 || n_solid == 3 {
                let odd = (0..4)
                    .find(|&i| ph.iter().filter(|&&x| x == ph[i]).count() == 1)
                    .expect("one corner differs");
                let (inside, outside) = (ph[odd], ph[(odd + 2) % 4]);
                let cut_a = self.nodes[g(1, odd)];
                let cut_b = self.nodes[g(3, odd)];
                let center = g(4, odd);
                let candidates = [
                    (PatchKind::CornerFan, self.lattice[center], &CORNER_FAN, 1usize),
                    (PatchKind::CornerSplit, geom::scale(geom::add(cut_a, cut_b), 0.5), &CORNER_SPLIT, 2usize),
                ];
                let mut best: Option<(f64, usize)> = None;
                for (ci, (_, cpos, templ, _)) in candidates.iter().enumerate() {
                    let mut pos = |k: usize| if k == center { *cpos } else { self.nodes[k] };
                    let q = template_quality(templ, |l| g(l, odd), &mut pos);
                    if let Some(q) = q {
                        if best.map_or(true, |(bq, _)| q < bq) {
                            best = Some((q, ci));
                        }
                    }
                }
                let ci = best.map_or(0, |b| b.1);
                let (k_, cpos, templ, n_inside) = candidates[ci];
                kind = k_;
                self.nodes[center] = cpos;
                for (ti, t) in templ.iter().enumerate() {
                    let phase = if ti < n_inside { inside } else { outside };
                    tris.push((t.map(|l| g(l, odd)), phase));
                }
            } else {
                let Some(k) = (0..4).find(|&i| ph[i] == ph[(i + 1) % 4]) else {
                    return Err(MeshError::Unresolvable { patch: pi });
                };
                kind = PatchKind::Straight;
                let (lower, upper) = (ph[k], ph[(k + 2) % 4]);
                let center = g(4, k);
                self.nodes[center] = geom::scale(geom::add(self.nodes[g(3, k)], self.nodes[g(5, k)]), 0.5);
                for (qi, q) in STRAIGHT_QUADS.iter().enumerate() {
                    let phase = if qi < 2 { lower } else { upper };
                    let v = q.map(|l| g(l, k));
                    let x = v.map(|i| self.nodes[i]);
                    let d1 = geom::max_angle(x[0], x[1], x[2]).max(geom::max_angle(x[0], x[2], x[3]));
                    let d2 = geom::max_angle(x[0], x[1], x[3]).max(geom::max_angle(x[1], x[2], x[3]));
                    let ok1 = geom::signed_area(x[0], x[1], x[2]) > 0.0 && geom::signed_area(x[0], x[2], x[3]) > 0.0;
                    let ok2 = geom::signed_area(x[0], x[1], x[3]) > 0.0 && geom::signed_area(x[1], x[2], x[3]) > 0.0;
                    if ok1 && (!ok2 || d1 <= d2) {
                        tris.push(([v[0], v[1], v[2]], phase));
                        tris.push(([v[0], v[2], v[3]], phase));
                    } else {
                        tris.push(([v[0], v[1], v[3]], phase));
                        tris.push(([v[1], v[2], v[3]], phase));
                    }
                }
            }
            match kind {
                PatchKind::Uncut => {}
                PatchKind::Straight => report.straight += 1,
                PatchKind::CornerFan => report.corner_fan += 1,
                PatchKind::CornerSplit => report.corner_split += 1,
            }
            if kind != PatchKind::Uncut {
                report.cut_patches += 1;
            }
            self.kinds[pi] = kind;
            for (nodes, phase) in tris {
                self.cells.push(Cell { nodes, patch: pi, phase });
            }
        }
        for c in 0..self.cells.len() {
            let area = self.cell_area(c);
            let patch_area = self.patches[self.cells[c].patch].area;
            if !(area > 1e-14 * patch_area) {
                return Err(MeshError::Degenerate { cell: c, area });
            }
        }
        self.rebuild_topology();
        Ok(report)
    }

    fn rebuild_topology(&mut self) {
        let n = self.nodes.len();
        self.node_fluid = vec![false; n];
        self.node_solid = vec![false; n];
        self.node_cells = vec![Vec::new(); n];
        let mut edges: HashMap<(usize, usize), [usize; 2]> = HashMap::with_capacity(12 * self.cells.len());
        for (ci, c) in self.cells.iter().enumerate() {
            for &k in &c.nodes {
                match c.phase {
                    Phase::Fluid => self.node_fluid[k] = true,
                    Phase::Solid => self.node_solid[k] = true,
                }
                self.node_cells[k].push(ci);
            }
            for e in 0..3 {
                let (a, b) = (c.nodes[e], c.nodes[(e + 1) % 3]);
                let key = (a.min(b), a.max(b));
                edges.entry(key).and_modify(|v| v[1] = ci).or_insert([ci, usize::MAX]);
            }
        }
        let mut keys: Vec<_> = edges.iter().filter(|(_, v)| v[1] != usize::MAX).map(|(k, v)| (*k, *v)).collect();
        keys.sort_unstable();
        self.interface.clear();
        self.facets.clear();
        for ((a, b), [c0, c1]) in keys {
            let (p0, p1) = (self.cells[c0].phase, self.cells[c1].phase);
            if p0 == p1 {
                self.facets.push(InteriorFacet { nodes: [a, b], cells: [c0, c1] });
                continue;
            }
            let (fc, sc) = if p0 == Phase::Fluid { (c0, c1) } else { (c1, c0) };
            let (xa, xb) = (self.nodes[a], self.nodes[b]);
            let t = geom::sub(xb, xa);
            let len = geom::norm(t);
            let mut normal = [t[1] / len, -t[0] / len];
            let centroid = self.cell_centroid(fc);
            if geom::dot(normal, geom::sub(centroid, xa)) > 0.0 {
                normal = geom::scale(normal, -1.0);
            }
            // orient so that the fluid cell lies to the left of a -> b
            let nodes = if geom::cross(t, geom::sub(centroid, xa)) > 0.0 { [a, b] } else { [b, a] };
            self.interface.push(InterfaceSegment { nodes, fluid_cell: fc, solid_cell: sc, normal });
        }
        self.boundary.clear();
        for e in &self.coarse_boundary {
            for (a, b) in [(e.nodes[0], e.nodes[1]), (e.nodes[1], e.nodes[2])] {
                let key = (a.min(b), a.max(b));
                let cell = edges[&key][0];
                self.boundary.push(BoundarySegment { nodes: [a, b], cell, tag: e.tag, normal: e.normal });
            }
        }
    }

    pub fn cell_centroid(&self, c: usize) -> Point {
        let [a, b, cc] = self.cell_points(c);
        [(a[0] + b[0] + cc[0]) / 3.0, (a[1] + b[1] + cc[1]) / 3.0]
    }

    /// Finds the cell containing `x` and the barycentric coordinates of `x`.
    pub fn locate(&self, x: Point) -> Option<(usize, [f64; 3])> {
        let tol = 1e-12;
        for b in &self.blocks {
            let (nx, ny) = (b.nx(), b.ny());
            let span = |br: &[f64], v: f64| -> Option<usize> {
                let len = br[br.len() - 1] - br[0];
                if v < br[0] - tol * len || v > br[br.len() - 1] + tol * len {
                    return None;
                }
                Some((br.partition_point(|&q| q <= v).max(1) - 1).min(br.len() - 2))
            };
            let (Some(px), Some(py)) = (span(&b.xs, x[0]), span(&b.ys, x[1])) else {
                continue;
            };
            // the fitted patch may bulge into its neighbours only through moved
            // edge midpoints, so also try the adjacent patches
            let mut best: Option<(usize, [f64; 3], f64)> = None;
            for dy in [0i64, -1, 1] {
                for dx in [0i64, -1, 1] {
                    let (qx, qy) = (px as i64 + dx, py as i64 + dy);
                    if qx < 0 || qy < 0 || qx >= nx as i64 || qy >= ny as i64 {
                        continue;
                    }
                    let patch = b.patch_offset + qy as usize * nx + qx as usize;
                    for c in 8 * patch..8 * patch + 8 {
                        let [p0, p1, p2] = self.cell_points(c);
                        let l = geom::barycentric(p0, p1, p2, x);
                        let m = l[0].min(l[1]).min(l[2]);
                        if best.as_ref().map_or(true, |bb| m > bb.2) {
                            best = Some((c, l, m));
                        }
                    }
                    if let Some(bb) = &best {
                        if bb.2 >= -1e-10 {
                            return Some((bb.0, bb.1));
                        }
                    }
                }
            }
        }
        None
    }

    pub fn contains(&self, x: Point) -> bool {
        self.locate(x).is_some()
    }

    /// Total area of the cells of one phase.
    /// Keeps the fitted geometry but assigns every cell to `phase`, returning
    /// the phases the fit had produced. Used for single-phase problems with
    /// an internal material interface.
    pub fn merge_phases(&mut self, phase: Phase) -> Vec<Phase> {
        let old = self.cells.iter().map(|c| c.phase).collect();
        for c in &mut self.cells {
            c.phase = phase;
        }
        self.rebuild_topology();
        old
    }

    pub fn phase_area(&self, phase: Phase) -> f64 {
        (0..self.cells.len()).filter(|&c| self.cells[c].phase == phase).map(|c| self.cell_area(c)).sum()
    }
}

const EDGE_MIDS: [usize; 4] = [1, 5, 7, 3];

/// Largest subtriangle angle of a patch template, or `None` if a triangle is
/// inverted.
fn template_quality(
    templ: &[[usize; 3]; 8],
    map: impl Fn(usize) -> usize,
    pos: &mut impl FnMut(usize) -> Point,
) -> Option<f64> {
    let mut worst: f64 = 0.0;
    for t in templ {
        let x = t.map(|l| pos(map(l)));
        if !(geom::signed_area(x[0], x[1], x[2]) > 0.0) {
            return None;
        }
        worst = worst.max(geom::max_angle(x[0], x[1], x[2]));
    }
    Some(worst)
}

/// Initial-point-set classification: a point is solid when its reference
/// position `x - d(x)` lies in the reference shape (`shape <= 0`). A missing
/// displacement means the point is far from the solid and hence fluid.
pub fn affiliation_of(
    mesh: &PatchMesh,
    x: Point,
    displacement: impl Fn(Point) -> Option<Point>,
    shape: impl Fn(Point) -> f64,
) -> Result<Phase, MeshError> {
    if !mesh.contains(x) {
        return Err(MeshError::OutsideMesh { x: x[0], y: x[1] });
    }
    Ok(match displacement(x) {
        Some(d) if shape(geom::sub(x, d)) <= 0.0 => Phase::Solid,
        _ => Phase::Fluid,
    })
}

/// Circle of radius `radius` around `center` as a signed distance.
pub fn disk(center: Point, radius: f64) -> impl Fn(Point) -> f64 + Clone {
    move |x| geom::norm(geom::sub(x, center)) - radius
}

/// A nodal field of one phase, extended by its nearest interface value into
/// a band around the interface.
#[derive(Debug, Clone)]
pub struct ExtendedField<const N: usize> {
    phase: Phase,
    values: Vec<Option<[f64; N]>>,
    cells: Vec<Cell>,
    trace: Vec<([Point; 2], [[f64; N]; 2])>,
    band: f64,
}

impl<const N: usize> ExtendedField<N> {
    /// `values[k]` must be set for every node carrying the phase.
    pub fn new(mesh: &PatchMesh, phase: Phase, values: &[[f64; N]], band: f64) -> Self {
        let has = |k: usize| match phase {
            Phase::Fluid => mesh.node_has_fluid(k),
            Phase::Solid => mesh.node_has_solid(k),
        };
        let vals: Vec<_> = (0..mesh.n_nodes()).map(|k| has(k).then(|| values[k])).collect();
        let trace = mesh
            .interface()
            .iter()
            .map(|s| (s.nodes.map(|k| mesh.node(k)), s.nodes.map(|k| values[k])))
            .collect();
        Self { phase, values: vals, cells: mesh.cells().to_vec(), trace, band: band.max(0.0) }
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }

    /// Value stored at node `k` of the mesh the field was built on, if the
    /// node carried the phase.
    pub fn nodal(&self, k: usize) -> Option<[f64; N]> {
        self.values.get(k).copied().flatten()
    }

    /// Nearest-interface value within the band.
    pub fn from_interface(&self, x: Point) -> Option<[f64; N]> {
        let mut best: Option<(f64, [f64; N])> = None;
        for (p, v) in &self.trace {
            let t = geom::project_on_segment(p[0], p[1], x);
            let q = geom::lerp(p[0], p[1], t);
            let dist = geom::norm(geom::sub(x, q));
            if dist <= self.band && best.as_ref().map_or(true, |b| dist < b.0) {
                let mut val = [0.0; N];
                for c in 0..N {
                    val[c] = v[0][c] + t * (v[1][c] - v[0][c]);
                }
                best = Some((dist, val));
            }
        }
        best.map(|b| b.1)
    }

    /// Value at node `k`: nodal if the node carried the phase, otherwise the
    /// extension evaluated at `x`.
    pub fn at_node(&self, k: usize, x: Point) -> Option<[f64; N]> {
        self.nodal(k).or_else(|| self.from_interface(x))
    }

    /// Value at an arbitrary point, interpolated inside the phase.
    pub fn at_point(&self, mesh_locate: impl Fn(Point) -> Option<(usize, [f64; 3])>, x: Point) -> Option<[f64; N]> {
        if let Some((c, l)) = mesh_locate(x) {
            let cell = &self.cells[c];
            if cell.phase == self.phase {
                let mut val = [0.0; N];
                for (i, &k) in cell.nodes.iter().enumerate() {
                    let v = self.values[k]?;
                    for c in 0..N {
                        val[c] += l[i] * v[c];
                    }
                }
                return Some(val);
            }
        }
        self.from_interface(x)
    }
}

/// Nearest-interface constant extension of a solid displacement.
pub fn extend_displacement(mesh: &PatchMesh, d: &[[f64; 2]], band_width: f64) -> ExtendedField<2> {
    ExtendedField::new(mesh, Phase::Solid, d, band_width)
}
