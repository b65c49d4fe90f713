//! Vertex welding with a uniform hash grid and union-find.

use std::collections::HashMap;

use crate::mesh::{Mesh, Vec3};

/// What a weld pass changed.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct WeldStats {
    pub merged_vertices: usize,
    pub dropped_faces: usize,
}

struct DisjointSet {
    parent: Vec<usize>,
}

impl DisjointSet {
    fn new(n: usize) -> Self {
        Self { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Union keeping the smaller index as the root.
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }
}

fn cell_of(p: &Vec3, cell: f64) -> (i64, i64, i64) {
    ((p.x / cell).floor() as i64, (p.y / cell).floor() as i64, (p.z / cell).floor() as i64)
}

/// Map from each vertex to its welded representative (the lowest index in
/// its cluster). Vertices strictly closer than `tolerance` are merged,
/// transitively.
pub fn weld_map(positions: &[Vec3], tolerance: f64) -> Vec<usize> {
    let n = positions.len();
    if tolerance <= 0.0 || n == 0 {
        return (0..n).collect();
    }
    let mut sets = DisjointSet::new(n);
    let mut grid: HashMap<(i64, i64, i64), Vec<usize>> = HashMap::new();
    let tol2 = tolerance * tolerance;
    for (i, p) in positions.iter().enumerate() {
        let (cx, cy, cz) = cell_of(p, tolerance);
        for dx in -1..=1 {
            for dy in -1..=1 {
                for dz in -1..=1 {
                    if let Some(bucket) = grid.get(&(cx + dx, cy + dy, cz + dz)) {
                        for &j in bucket {
                            if (positions[j] - p).norm_squared() < tol2 {
                                sets.union(i, j);
                            }
                        }
                    }
                }
            }
        }
        grid.entry((cx, cy, cz)).or_default().push(i);
    }
    (0..n).map(|i| sets.find(i)).collect()
}

/// Merge vertices closer than `tolerance`, rewrite faces to the surviving
/// indices and drop faces that collapse to a repeated index.
///
/// Surviving vertices keep the position, normal and color of the
/// lowest-indexed member of their cluster. Corner UVs travel with their
/// faces and are untouched.
pub fn weld_vertices(mesh: &Mesh, tolerance: f64) -> (Mesh, WeldStats) {
    let reps = weld_map(&mesh.positions, tolerance);
    let mut new_index = vec![usize::MAX; reps.len()];
    let mut kept = Vec::new();
    for (i, &r) in reps.iter().enumerate() {
        if r == i {
            new_index[i] = kept.len();
            kept.push(i);
        }
    }
    let remap = |v: usize| new_index[reps[v]];

    let mut faces = Vec::with_capacity(mesh.faces.len());
    let mut uvs = mesh.corner_uvs.as_ref().map(|_| Vec::with_capacity(mesh.faces.len()));
    let mut dropped = 0;
    for (fi, f) in mesh.faces.iter().enumerate() {
        let g = [remap(f[0]), remap(f[1]), remap(f[2])];
        if g[0] == g[1] || g[1] == g[2] || g[0] == g[2] {
            dropped += 1;
            continue;
        }
        faces.push(g);
        if let (Some(out), Some(src)) = (uvs.as_mut(), mesh.corner_uvs.as_ref()) {
            out.push(src[fi]);
        }
    }

    let welded = Mesh {
        positions: kept.iter().map(|&i| mesh.positions[i]).collect(),
        faces,
        corner_uvs: uvs,
        vertex_normals: mesh.vertex_normals.as_ref().map(|n| kept.iter().map(|&i| n[i]).collect()),
        vertex_colors: mesh.vertex_colors.as_ref().map(|c| kept.iter().map(|&i| c[i]).collect()),
        texture: mesh.texture.clone(),
    };
    let stats = WeldStats { merged_vertices: mesh.positions.len() - kept.len(), dropped_faces: dropped };
    (welded, stats)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn nearby_pair_merges() {
        let m = Mesh::new(
            vec![
                Vec3::new(0.0, 0.0, 0.0),
                Vec3::new(1.0, 0.0, 0.0),
                Vec3::new(0.0, 1.0, 0.0),
                Vec3::new(1e-7, 0.0, 0.0),
                Vec3::new(1.0, 1.0, 0.0),
            ],
            vec![[0, 1, 2], [3, 4, 2]],
        );
        let (w, stats) = weld_vertices(&m, 1e-6);
        assert_eq!(w.vertex_count(), 4);
        assert_eq!(stats.merged_vertices, 1);
        assert_eq!(w.faces, vec![[0, 1, 2], [0, 3, 2]]);
    }

    #[test]
    fn collapsed_face_is_dropped() {
        let m = Mesh::new(
            vec![Vec3::zeros(), Vec3::new(5e-7, 0.0, 0.0), Vec3::new(0.0, 1.0, 0.0)],
            vec![[0, 1, 2]],
        );
        let (w, stats) = weld_vertices(&m, 1e-6);
        assert_eq!(w.face_count(), 0);
        assert_eq!(stats.dropped_faces, 1);
    }

    #[test]
    fn zero_tolerance_is_identity() {
        let m = Mesh::new(vec![Vec3::zeros(), Vec3::zeros()], vec![]);
        assert_eq!(weld_map(&m.positions, 0.0), vec![0, 1]);
    }

    #[test]
    fn chains_merge_transitively() {
        let pts: Vec<Vec3> = (0..5).map(|i| Vec3::new(i as f64 * 0.8e-6, 0.0, 0.0)).collect();
        assert_eq!(weld_map(&pts, 1e-6), vec![0; 5]);
    }

    proptest! {
        #[test]
        fn weld_is_idempotent_and_in_range(
            coords in prop::collection::vec((0u8..6, 0u8..6, 0u8..3), 3..60),
            jitter in prop::collection::vec(-4e-7f64..4e-7, 60),
            faces in prop::collection::vec((0usize..60, 0usize..60, 0usize..60), 1..40),
        ) {
            let n = coords.len();
            let positions: Vec<Vec3> = coords.iter().enumerate().map(|(i, &(x, y, z))| {
                Vec3::new(x as f64 * 0.25 + jitter[i], y as f64 * 0.25, z as f64 * 0.25)
            }).collect();
            let faces: Vec<[usize; 3]> = faces.iter()
                .map(|&(a, b, c)| [a % n, b % n, c % n])
                .filter(|f| f[0] != f[1] && f[1] != f[2] && f[0] != f[2])
                .collect();
            let m = Mesh::new(positions, faces);
            let (once, _) = weld_vertices(&m, 1e-6);
            prop_assert!(once.vertex_count() <= m.vertex_count());
            prop_assert!(once.validate().is_ok());
            let (twice, stats) = weld_vertices(&once, 1e-6);
            prop_assert_eq!(stats, WeldStats::default());
            prop_assert_eq!(twice, once);
        }
    }
}
