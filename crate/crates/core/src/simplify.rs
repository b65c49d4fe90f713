//! The edge-collapse engine.
//!
//! Every edge (plus optional virtual edges between nearby components) is
//! costed once and pushed on a min-heap. The loop pops the cheapest
//! candidate, drops it if stale or if it would flip a face, and otherwise
//! collapses it and re-costs the edges around the surviving vertex.
//! Staleness is detected lazily with per-vertex generation counters and
//! per-edge revisions; entries are never searched for and removed.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap};
use std::time::{Duration, Instant};

use log::warn;
use rayon::prelude::*;

use crate::history::{CollapseHistory, CollapseRecord};
use crate::mesh::{Mesh, Vec3};
use crate::quadric::{edge_cost_timed, gf_quadric, CostTimings, EdgeCost, MeshView, Quadric, Tolerances, WeightSet};
use crate::topology::{detect_uv_seams, insert_virtual_edges, Adjacency, Edge};

/// How far to simplify.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Target {
    Faces(usize),
    /// Fraction of the input face count, in `(0, 1]`.
    Ratio(f64),
}

impl Target {
    pub fn resolve(&self, input_faces: usize) -> usize {
        match *self {
            Target::Faces(n) => n.max(1),
            Target::Ratio(r) => ((input_faces as f64 * r).round() as usize).max(1),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimplifyConfig {
    pub weights: WeightSet,
    pub target: Target,
    pub enable_virtual_edges: bool,
    /// Only recorded here; welding happens at load time.
    pub weld_tolerance: f64,
    /// Edges shorter than this fraction of the bounding-box diagonal are never collapsed.
    pub degenerate_edge_fraction: f64,
    /// Virtual-edge search radius as a fraction of the bounding-box diagonal.
    pub virtual_edge_fraction: f64,
    pub rng_seed: u64,
}

impl Default for SimplifyConfig {
    fn default() -> Self {
        Self {
            weights: WeightSet::DEFAULT,
            target: Target::Ratio(0.1),
            enable_virtual_edges: false,
            weld_tolerance: crate::io::DEFAULT_WELD_TOLERANCE,
            degenerate_edge_fraction: 1e-8,
            virtual_edge_fraction: 0.01,
            rng_seed: 0,
        }
    }
}

impl SimplifyConfig {
    pub fn with_target(mut self, target: Target) -> Self {
        self.target = target;
        self
    }

    pub fn with_weights(mut self, weights: WeightSet) -> Self {
        self.weights = weights;
        self
    }
}

/// Wall-clock time per pipeline phase.
///
/// The four loop sub-phases partition `collapse_loop`: `neighbor_updates`
/// is everything in the loop that is not popping, solving, or area costing.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct PhaseTimings {
    pub quadric_construction: Duration,
    pub queue_population: Duration,
    pub collapse_loop: Duration,
    pub pop: Duration,
    pub solve: Duration,
    pub area: Duration,
    pub neighbor_updates: Duration,
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SimplifyStats {
    pub input_faces: usize,
    pub output_faces: usize,
    pub target_faces: usize,
    pub collapses: usize,
    pub flip_vetoes: usize,
    pub stale_pops: usize,
    pub infinite_pops: usize,
    pub virtual_edges: usize,
    /// The queue ran dry before reaching the target.
    pub exhausted: bool,
    pub timings: PhaseTimings,
}

/// Output of [`simplify`].
#[derive(Debug, Clone)]
pub struct Simplified {
    pub mesh: Mesh,
    pub history: CollapseHistory,
    /// Input-mesh index of each output vertex.
    pub vertex_origin: Vec<usize>,
    /// Input-mesh index of each output face.
    pub face_origin: Vec<usize>,
    pub stats: SimplifyStats,
}

/// A queued collapse candidate.
#[derive(Debug, Clone, Copy)]
pub struct EdgeCandidate {
    pub edge: Edge,
    pub cost: f64,
    pub target: Vec3,
    /// Generations of `edge.0` and `edge.1` when the cost was computed.
    pub stamp: (u32, u32),
    revision: u32,
}

impl PartialEq for EdgeCandidate {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for EdgeCandidate {}

impl PartialOrd for EdgeCandidate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for EdgeCandidate {
    /// Reversed so `BinaryHeap` pops the lowest `(cost, min index, max index)` first.
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .cost
            .total_cmp(&self.cost)
            .then_with(|| other.edge.cmp(&self.edge))
            .then_with(|| other.revision.cmp(&self.revision))
    }
}

/// Mutable simplification state: working mesh, quadrics, and queue.
pub struct Decimator {
    positions: Vec<Vec3>,
    faces: Vec<[usize; 3]>,
    face_alive: Vec<bool>,
    vertex_alive: Vec<bool>,
    adjacency: Adjacency,
    quadrics: Vec<Quadric>,
    generation: Vec<u32>,
    revision: HashMap<Edge, u32>,
    seam: Vec<bool>,
    heap: BinaryHeap<EdgeCandidate>,
    weights: WeightSet,
    tol: Tolerances,
    alive_faces: usize,
    history: CollapseHistory,
    stats: SimplifyStats,
    cost_timings: CostTimings,
}

impl Decimator {
    /// Builds quadrics, adjacency, optional virtual edges, and the initial queue.
    pub fn new(mesh: &Mesh, config: &SimplifyConfig) -> Self {
        let t0 = Instant::now();
        let n = mesh.vertex_count();
        let diag = mesh.diagonal();
        let tol = Tolerances::from_diagonal(diag, config.degenerate_edge_fraction);
        let mut adjacency = Adjacency::build(n, &mesh.faces);
        let weights = config.weights;

        let normals = mesh.resolved_normals();
        let quadrics: Vec<Quadric> = {
            let view = MeshView::new(&mesh.positions, &mesh.faces, &adjacency);
            (0..n).into_par_iter().map(|v| gf_quadric(&view, v, &normals[v], &weights, &tol)).collect()
        };
        let mut seam = vec![false; n];
        for v in detect_uv_seams(mesh) {
            seam[v] = true;
        }
        let mut virtual_edges = 0;
        if config.enable_virtual_edges {
            let ve = insert_virtual_edges(mesh, &adjacency, config.virtual_edge_fraction, config.degenerate_edge_fraction);
            virtual_edges = ve.len();
            for e in ve {
                adjacency.link(e.edge.0, e.edge.1);
            }
        }
        let quadric_time = t0.elapsed();

        let mut d = Self {
            positions: mesh.positions.clone(),
            faces: mesh.faces.clone(),
            face_alive: vec![true; mesh.face_count()],
            vertex_alive: vec![true; n],
            adjacency,
            quadrics,
            generation: vec![0; n],
            revision: HashMap::new(),
            seam,
            heap: BinaryHeap::new(),
            weights,
            tol,
            alive_faces: mesh.face_count(),
            history: CollapseHistory::default(),
            stats: SimplifyStats { input_faces: mesh.face_count(), virtual_edges, ..Default::default() },
            cost_timings: CostTimings::default(),
        };
        d.stats.timings.quadric_construction = quadric_time;

        let t1 = Instant::now();
        let edges: Vec<Edge> = (0..n)
            .flat_map(|a| d.adjacency.neighbors(a).iter().filter(move |&&b| b > a).map(move |&b| Edge(a, b)))
            .collect();
        let costs: Vec<EdgeCost> = {
            let view = d.view();
            edges
                .par_iter()
                .map(|&e| edge_cost_timed(&view, e, &d.quadrics, &d.weights, &d.seam, &d.tol, None))
                .collect()
        };
        let mut entries = Vec::with_capacity(edges.len());
        for (e, c) in edges.into_iter().zip(costs) {
            entries.push(EdgeCandidate { edge: e, cost: c.total, target: c.position, stamp: (0, 0), revision: 0 });
        }
        d.heap = BinaryHeap::from(entries);
        d.stats.timings.queue_population = t1.elapsed();
        d
    }

    fn view(&self) -> MeshView<'_> {
        MeshView::new(&self.positions, &self.faces, &self.adjacency)
    }

    pub fn alive_face_count(&self) -> usize {
        self.alive_faces
    }

    pub fn positions(&self) -> &[Vec3] {
        &self.positions
    }

    pub fn adjacency(&self) -> &Adjacency {
        &self.adjacency
    }

    pub fn quadric(&self, v: usize) -> &Quadric {
        &self.quadrics[v]
    }

    pub fn is_alive(&self, v: usize) -> bool {
        self.vertex_alive[v]
    }

    pub fn generation(&self, v: usize) -> u32 {
        self.generation[v]
    }

    pub fn queue_len(&self) -> usize {
        self.heap.len()
    }

    pub fn history(&self) -> &CollapseHistory {
        &self.history
    }

    pub fn stats(&self) -> &SimplifyStats {
        &self.stats
    }

    /// Costs `edge` against the current state.
    pub fn cost(&self, edge: Edge) -> EdgeCost {
        edge_cost_timed(&self.view(), edge, &self.quadrics, &self.weights, &self.seam, &self.tol, None)
    }

    /// A candidate is stale once either endpoint changed or the edge was re-costed.
    pub fn is_stale(&self, c: &EdgeCandidate) -> bool {
        let Edge(a, b) = c.edge;
        !self.vertex_alive[a]
            || !self.vertex_alive[b]
            || self.generation[a] != c.stamp.0
            || self.generation[b] != c.stamp.1
            || self.revision.get(&c.edge).copied().unwrap_or(0) != c.revision
    }

    /// Whether moving both endpoints of `edge` to `target` reverses or
    /// degenerates any surviving face around them.
    pub fn causes_flip(&self, edge: Edge, target: &Vec3) -> bool {
        let Edge(i, j) = edge;
        let around = self.adjacency.faces_of(i).iter().chain(self.adjacency.faces_of(j));
        for &f in around {
            let tri = self.faces[f];
            if tri.contains(&i) && tri.contains(&j) {
                continue;
            }
            let p = tri.map(|v| self.positions[v]);
            let q = tri.map(|v| if v == i || v == j { *target } else { self.positions[v] });
            let before = (p[1] - p[0]).cross(&(p[2] - p[0]));
            let after = (q[1] - q[0]).cross(&(q[2] - q[0]));
            if 0.5 * after.norm() < self.tol.area || before.dot(&after) < 0.0 {
                return true;
            }
        }
        false
    }

    /// Collapses `edge` into its lower-indexed endpoint placed at `target`.
    ///
    /// Caller must ensure both endpoints are alive; the flip check is not
    /// repeated here.
    pub fn collapse_edge(&mut self, edge: Edge, target: Vec3) -> &CollapseRecord {
        let Edge(kept, removed) = edge;
        debug_assert!(kept < removed && self.vertex_alive[kept] && self.vertex_alive[removed]);
        let kept_old = self.positions[kept];
        let removed_old = self.positions[removed];

        let mut removed_faces = Vec::new();
        let mut rewired_faces = Vec::new();
        for f in self.adjacency.faces_of(removed).to_vec() {
            if self.faces[f].contains(&kept) {
                removed_faces.push(f);
            } else {
                rewired_faces.push(f);
            }
        }
        for &f in &removed_faces {
            self.kill_face(f);
        }
        for &f in &rewired_faces {
            for v in &mut self.faces[f] {
                if *v == removed {
                    *v = kept;
                }
            }
            self.adjacency.detach_face(removed, f);
            self.adjacency.attach_face(kept, f);
        }
        // Rewiring can produce a face identical to one already around `kept`.
        let mut deduped = Vec::new();
        for &f in &rewired_faces {
            let key = sorted(self.faces[f]);
            let dup = self.adjacency.faces_of(kept).iter().any(|&g| g != f && sorted(self.faces[g]) == key);
            if dup {
                self.kill_face(f);
                deduped.push(f);
            }
        }
        rewired_faces.retain(|f| !deduped.contains(f));
        removed_faces.extend(deduped);

        for n in self.adjacency.neighbors(removed).to_vec() {
            self.adjacency.unlink(removed, n);
            if n != kept {
                self.adjacency.link(kept, n);
            }
        }
        self.positions[kept] = target;
        self.vertex_alive[removed] = false;
        let merged = self.quadrics[kept] + self.quadrics[removed];
        self.quadrics[kept] = merged;
        self.generation[kept] += 1;
        self.generation[removed] += 1;

        self.history.records.push(CollapseRecord {
            kept,
            removed,
            kept_old_position: kept_old,
            removed_old_position: removed_old,
            new_position: target,
            removed_faces,
            rewired_faces,
        });
        self.stats.collapses += 1;
        self.history.records.last().unwrap()
    }

    fn kill_face(&mut self, f: usize) {
        if !self.face_alive[f] {
            return;
        }
        self.face_alive[f] = false;
        self.alive_faces -= 1;
        for v in self.faces[f] {
            self.adjacency.detach_face(v, f);
        }
    }

    /// Re-costs every edge at `vertex` and every edge between two of its
    /// neighbours, superseding older queue entries. Returns the number pushed.
    pub fn update_neighbor_costs(&mut self, vertex: usize) -> usize {
        if !self.vertex_alive[vertex] {
            return 0;
        }
        let ring = self.adjacency.neighbors(vertex).to_vec();
        let mut edges: Vec<Edge> = ring.iter().map(|&n| Edge::new(vertex, n)).collect();
        for (k, &a) in ring.iter().enumerate() {
            for &b in &ring[k + 1..] {
                if self.adjacency.neighbors(a).binary_search(&b).is_ok() {
                    edges.push(Edge::new(a, b));
                }
            }
        }
        let mut timings = std::mem::take(&mut self.cost_timings);
        for &e in &edges {
            let c = edge_cost_timed(&self.view(), e, &self.quadrics, &self.weights, &self.seam, &self.tol, Some(&mut timings));
            let rev = self.revision.entry(e).or_insert(0);
            *rev += 1;
            let revision = *rev;
            self.heap.push(EdgeCandidate {
                edge: e,
                cost: c.total,
                target: c.position,
                stamp: (self.generation[e.0], self.generation[e.1]),
                revision,
            });
        }
        self.cost_timings = timings;
        edges.len()
    }

    /// Pops candidates until one is executed. Returns `false` once the
    /// queue is empty.
    pub fn step(&mut self) -> bool {
        loop {
            let t = Instant::now();
            let popped = self.heap.pop();
            self.stats.timings.pop += t.elapsed();
            let Some(c) = popped else { return false };
            if self.is_stale(&c) {
                self.stats.stale_pops += 1;
                continue;
            }
            if !c.cost.is_finite() {
                self.stats.infinite_pops += 1;
                continue;
            }
            if self.causes_flip(c.edge, &c.target) {
                self.stats.flip_vetoes += 1;
                continue;
            }
            let kept = c.edge.0;
            self.collapse_edge(c.edge, c.target);
            self.update_neighbor_costs(kept);
            #[cfg(debug_assertions)]
            if self.stats.collapses.is_multiple_of(1000) {
                self.assert_consistent();
            }
            return true;
        }
    }

    /// Runs until the face count reaches `target_faces` or the queue is exhausted.
    pub fn run(&mut self, target_faces: usize) {
        let t = Instant::now();
        let pop_before = self.stats.timings.pop;
        let cost_before = self.cost_timings;
        self.stats.target_faces = target_faces;
        while self.alive_faces > target_faces {
            if !self.step() {
                self.stats.exhausted = true;
                warn!("queue exhausted at {} faces (target {target_faces})", self.alive_faces);
                break;
            }
        }
        let tm = &mut self.stats.timings;
        let total = t.elapsed();
        tm.collapse_loop += total;
        tm.solve += self.cost_timings.solve - cost_before.solve;
        tm.area += self.cost_timings.area - cost_before.area;
        let accounted = (tm.pop - pop_before) + (self.cost_timings.solve - cost_before.solve) + (self.cost_timings.area - cost_before.area);
        tm.neighbor_updates += total.saturating_sub(accounted);
    }

    /// Panics if any alive face references a dead vertex or adjacency disagrees with faces.
    pub fn assert_consistent(&self) {
        for (f, tri) in self.faces.iter().enumerate() {
            if !self.face_alive[f] {
                continue;
            }
            for &v in tri {
                assert!(self.vertex_alive[v], "alive face {f} references dead vertex {v}");
                assert!(self.adjacency.faces_of(v).contains(&f), "face {f} missing from v_to_t[{v}]");
            }
        }
        for (v, faces) in self.adjacency.v_to_t.iter().enumerate() {
            for &f in faces {
                assert!(self.face_alive[f] && self.faces[f].contains(&v));
            }
        }
    }

    /// Compacts the working mesh into the final output.
    pub fn finish(mut self) -> Simplified {
        let mut index = vec![usize::MAX; self.positions.len()];
        let mut vertex_origin = Vec::new();
        for (v, &alive) in self.vertex_alive.iter().enumerate() {
            if alive {
                index[v] = vertex_origin.len();
                vertex_origin.push(v);
            }
        }
        let mut faces = Vec::with_capacity(self.alive_faces);
        let mut face_origin = Vec::with_capacity(self.alive_faces);
        for (f, tri) in self.faces.iter().enumerate() {
            if self.face_alive[f] {
                faces.push(tri.map(|v| index[v]));
                face_origin.push(f);
            }
        }
        let mesh = Mesh::new(vertex_origin.iter().map(|&v| self.positions[v]).collect(), faces);
        self.stats.output_faces = mesh.face_count();
        Simplified { mesh, history: self.history, vertex_origin, face_origin, stats: self.stats }
    }
}

fn sorted(mut f: [usize; 3]) -> [usize; 3] {
    f.sort_unstable();
    f
}

/// Simplifies `mesh` toward `config.target`.
///
/// Appearance attributes are not carried over; re-bake them from the
/// returned history. If the target is not below the input face count the
/// input geometry is returned with an empty history.
pub fn simplify(mesh: &Mesh, config: &SimplifyConfig) -> Simplified {
    let target = config.target.resolve(mesh.face_count());
    let mut d = Decimator::new(mesh, config);
    if target < mesh.face_count() {
        d.run(target);
    } else {
        d.stats.target_faces = target;
    }
    d.finish()
}
