//! Connectivity that tolerates non-manifold input: vertex adjacency, edge
//! classes, boundary chains, components, virtual edges, and UV seams.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::mesh::Mesh;
use crate::spatial::KdTree;

/// Undirected edge with `0 < 1` ordering.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge(pub usize, pub usize);

impl Edge {
    pub fn new(a: usize, b: usize) -> Self {
        if a <= b {
            Edge(a, b)
        } else {
            Edge(b, a)
        }
    }
}

/// Classification by number of incident faces.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeClass {
    Boundary,
    Interior,
    NonManifold,
}

impl EdgeClass {
    pub fn from_face_count(n: usize) -> Option<Self> {
        match n {
            0 => None,
            1 => Some(EdgeClass::Boundary),
            2 => Some(EdgeClass::Interior),
            _ => Some(EdgeClass::NonManifold),
        }
    }
}

/// Vertex-to-vertex and vertex-to-face incidence, each list sorted ascending.
///
/// Nothing here assumes an edge has at most two faces.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Adjacency {
    pub v_to_v: Vec<Vec<usize>>,
    pub v_to_t: Vec<Vec<usize>>,
}

fn insert_sorted(list: &mut Vec<usize>, x: usize) -> bool {
    match list.binary_search(&x) {
        Ok(_) => false,
        Err(pos) => {
            list.insert(pos, x);
            true
        }
    }
}

fn remove_sorted(list: &mut Vec<usize>, x: usize) -> bool {
    match list.binary_search(&x) {
        Ok(pos) => {
            list.remove(pos);
            true
        }
        Err(_) => false,
    }
}

impl Adjacency {
    pub fn build(vertex_count: usize, faces: &[[usize; 3]]) -> Self {
        let mut v_to_v = vec![Vec::new(); vertex_count];
        let mut v_to_t = vec![Vec::new(); vertex_count];
        for (fi, f) in faces.iter().enumerate() {
            for k in 0..3 {
                let (a, b) = (f[k], f[(k + 1) % 3]);
                v_to_v[a].push(b);
                v_to_v[b].push(a);
                v_to_t[a].push(fi);
            }
        }
        for l in v_to_v.iter_mut().chain(v_to_t.iter_mut()) {
            l.sort_unstable();
            l.dedup();
        }
        Self { v_to_v, v_to_t }
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.v_to_v[v]
    }

    pub fn faces_of(&self, v: usize) -> &[usize] {
        &self.v_to_t[v]
    }

    pub fn link(&mut self, a: usize, b: usize) {
        if a != b {
            insert_sorted(&mut self.v_to_v[a], b);
            insert_sorted(&mut self.v_to_v[b], a);
        }
    }

    pub fn unlink(&mut self, a: usize, b: usize) {
        remove_sorted(&mut self.v_to_v[a], b);
        remove_sorted(&mut self.v_to_v[b], a);
    }

    pub fn attach_face(&mut self, v: usize, face: usize) {
        insert_sorted(&mut self.v_to_t[v], face);
    }

    pub fn detach_face(&mut self, v: usize, face: usize) {
        remove_sorted(&mut self.v_to_t[v], face);
    }

    /// Number of faces in `faces` (as indexed by this adjacency) containing both `a` and `b`.
    pub fn edge_face_count(&self, faces: &[[usize; 3]], a: usize, b: usize) -> usize {
        self.v_to_t[a].iter().filter(|&&f| faces[f].contains(&b)).count()
    }

    /// Neighbours of `v` joined to it by a boundary (single-face) edge, ascending.
    pub fn boundary_neighbors(&self, faces: &[[usize; 3]], v: usize) -> Vec<usize> {
        self.v_to_v[v]
            .iter()
            .copied()
            .filter(|&u| self.edge_face_count(faces, v, u) == 1)
            .collect()
    }

    /// The two boundary-chain neighbours of `v` when it has exactly two
    /// boundary edges, lower index first.
    pub fn boundary_chain(&self, faces: &[[usize; 3]], v: usize) -> Option<(usize, usize)> {
        match self.boundary_neighbors(faces, v).as_slice() {
            &[a, b] => Some((a, b)),
            _ => None,
        }
    }
}

pub fn build_adjacency(mesh: &Mesh) -> Adjacency {
    Adjacency::build(mesh.vertex_count(), &mesh.faces)
}

/// Every undirected edge of the face list with its class.
pub fn classify_edges(mesh: &Mesh) -> BTreeMap<Edge, EdgeClass> {
    let mut edges: Vec<Edge> = mesh
        .faces
        .iter()
        .flat_map(|f| [Edge::new(f[0], f[1]), Edge::new(f[1], f[2]), Edge::new(f[2], f[0])])
        .collect();
    edges.sort_unstable();
    let mut out = BTreeMap::new();
    for run in edges.chunk_by(|a, b| a == b) {
        if let Some(class) = EdgeClass::from_face_count(run.len()) {
            out.insert(run[0], class);
        }
    }
    out
}

/// See [`Adjacency::boundary_chain`].
pub fn boundary_chain_neighbors(mesh: &Mesh, adjacency: &Adjacency, v: usize) -> Option<(usize, usize)> {
    adjacency.boundary_chain(&mesh.faces, v)
}

/// Per-vertex component labels numbered in order of lowest member vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Components {
    pub labels: Vec<usize>,
    pub count: usize,
}

pub fn connected_components(adjacency: &Adjacency) -> Components {
    let n = adjacency.v_to_v.len();
    let mut labels = vec![usize::MAX; n];
    let mut count = 0;
    let mut queue = VecDeque::new();
    for start in 0..n {
        if labels[start] != usize::MAX {
            continue;
        }
        labels[start] = count;
        queue.push_back(start);
        while let Some(v) = queue.pop_front() {
            for &u in &adjacency.v_to_v[v] {
                if labels[u] == usize::MAX {
                    labels[u] = count;
                    queue.push_back(u);
                }
            }
        }
        count += 1;
    }
    Components { labels, count }
}

/// An artificial collapse candidate joining two connected components.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VirtualEdge {
    pub edge: Edge,
}

/// Proposes virtual edges between nearby components.
///
/// Triangles from different components whose centroids lie within
/// `tau_fraction * diagonal` nominate the closest vertex pair between them.
/// Pairs no longer than `degenerate_fraction * diagonal` are discarded.
pub fn insert_virtual_edges(
    mesh: &Mesh,
    adjacency: &Adjacency,
    tau_fraction: f64,
    degenerate_fraction: f64,
) -> Vec<VirtualEdge> {
    let comps = connected_components(adjacency);
    let referenced: BTreeSet<usize> = comps.labels.iter().copied().collect();
    if mesh.faces.is_empty() || referenced.len() < 2 {
        return Vec::new();
    }
    let diag = mesh.diagonal();
    let tau = tau_fraction * diag;
    let min_len = degenerate_fraction * diag;

    let centroids: Vec<[f64; 3]> = (0..mesh.face_count())
        .map(|f| {
            let [a, b, c] = mesh.corners(f);
            let m = (a + b + c) / 3.0;
            [m.x, m.y, m.z]
        })
        .collect();
    let face_label: Vec<usize> = mesh.faces.iter().map(|f| comps.labels[f[0]]).collect();
    let tree = KdTree::new(&centroids);

    let mut found = BTreeSet::new();
    for (fi, c) in centroids.iter().enumerate() {
        for fj in tree.within(c, tau) {
            if face_label[fj] <= face_label[fi] {
                continue;
            }
            if let Some(e) = closest_vertex_pair(mesh, fi, fj) {
                let (a, b) = (e.0, e.1);
                if (mesh.positions[a] - mesh.positions[b]).norm() > min_len {
                    found.insert(VirtualEdge { edge: e });
                }
            }
        }
    }
    found.into_iter().collect()
}

fn closest_vertex_pair(mesh: &Mesh, fa: usize, fb: usize) -> Option<Edge> {
    let mut best: Option<(f64, Edge)> = None;
    for &a in &mesh.faces[fa] {
        for &b in &mesh.faces[fb] {
            let d = (mesh.positions[a] - mesh.positions[b]).norm_squared();
            let e = Edge::new(a, b);
            if best.is_none_or(|(bd, be)| d < bd || (d == bd && e < be)) {
                best = Some((d, e));
            }
        }
    }
    best.map(|(_, e)| e)
}

/// UV difference above which two corner coordinates count as distinct.
pub const UV_SEAM_EPSILON: f64 = 1e-7;

/// Vertices whose incident corners carry two or more distinct UVs.
pub fn detect_uv_seams(mesh: &Mesh) -> BTreeSet<usize> {
    let Some(uvs) = &mesh.corner_uvs else {
        return BTreeSet::new();
    };
    let mut first: Vec<Option<[f64; 2]>> = vec![None; mesh.vertex_count()];
    let mut seams = BTreeSet::new();
    for (f, tri) in mesh.faces.iter().zip(uvs) {
        for (k, &v) in f.iter().enumerate() {
            let uv = tri[k];
            match first[v] {
                None => first[v] = Some(uv),
                Some(seen) => {
                    if (seen[0] - uv[0]).abs() > UV_SEAM_EPSILON || (seen[1] - uv[1]).abs() > UV_SEAM_EPSILON {
                        seams.insert(v);
                    }
                }
            }
        }
    }
    seams
}

/// Euler characteristic `V - E + F` over referenced vertices.
pub fn euler_characteristic(mesh: &Mesh) -> i64 {
    let used: BTreeSet<usize> = mesh.faces.iter().flatten().copied().collect();
    used.len() as i64 - classify_edges(mesh).len() as i64 + mesh.face_count() as i64
}
