//! Procedural test meshes.
//!
//! These cover the shapes the simplifier has to cope with: closed and open
//! surfaces, sharp creases, non-manifold edges, boundary junctions,
//! multiple components, and textured or noisy "scan-like" surfaces. All
//! generators are deterministic.

use std::f64::consts::PI;
use std::sync::Arc;

use crate::io::weld_vertices;
use crate::mesh::{Mesh, Vec3};
use crate::texture::TextureImage;

/// Axis-aligned unit cube `[0, 1]^3`, 8 vertices, 12 outward-facing triangles.
pub fn cube() -> Mesh {
    let positions = (0..8)
        .map(|i| Vec3::new((i & 1) as f64, ((i >> 1) & 1) as f64, ((i >> 2) & 1) as f64))
        .collect();
    let faces = vec![
        [0, 2, 1], [1, 2, 3], // z = 0
        [4, 5, 6], [5, 7, 6], // z = 1
        [0, 1, 4], [1, 5, 4], // y = 0
        [2, 6, 3], [3, 6, 7], // y = 1
        [0, 4, 2], [2, 4, 6], // x = 0
        [1, 3, 5], [3, 7, 5], // x = 1
    ];
    Mesh::new(positions, faces)
}

/// Cube with each side split into an `n` x `n` grid of quads.
pub fn subdivided_cube(n: usize) -> Mesh {
    let n = n.max(1);
    let mut positions = Vec::new();
    let mut faces = Vec::new();
    // Each side: origin, two edge directions chosen so (u x v) points outward.
    let sides = [
        (Vec3::new(0.0, 0.0, 0.0), Vec3::y(), Vec3::x()),
        (Vec3::new(0.0, 0.0, 1.0), Vec3::x(), Vec3::y()),
        (Vec3::new(0.0, 0.0, 0.0), Vec3::x(), Vec3::z()),
        (Vec3::new(0.0, 1.0, 0.0), Vec3::z(), Vec3::x()),
        (Vec3::new(0.0, 0.0, 0.0), Vec3::z(), Vec3::y()),
        (Vec3::new(1.0, 0.0, 0.0), Vec3::y(), Vec3::z()),
    ];
    for (origin, u, v) in sides {
        let base = positions.len();
        for j in 0..=n {
            for i in 0..=n {
                positions.push(origin + u * (i as f64 / n as f64) + v * (j as f64 / n as f64));
            }
        }
        push_grid_faces(&mut faces, base, n, n);
    }
    weld_vertices(&Mesh::new(positions, faces), 1e-9).0
}

fn push_grid_faces(faces: &mut Vec<[usize; 3]>, base: usize, nx: usize, ny: usize) {
    let idx = |i: usize, j: usize| base + j * (nx + 1) + i;
    for j in 0..ny {
        for i in 0..nx {
            faces.push([idx(i, j), idx(i + 1, j), idx(i + 1, j + 1)]);
            faces.push([idx(i, j), idx(i + 1, j + 1), idx(i, j + 1)]);
        }
    }
}

/// Flat `n` x `n` grid over `[0, size]^2` in the plane z = 0, `2 n^2` faces, normals +z.
pub fn grid(n: usize, size: f64) -> Mesh {
    heightfield(n, size, |_, _| 0.0)
}

/// Grid over `[0, size]^2` displaced by `z = height(x, y)`.
pub fn heightfield(n: usize, size: f64, height: impl Fn(f64, f64) -> f64) -> Mesh {
    let n = n.max(1);
    let mut positions = Vec::with_capacity((n + 1) * (n + 1));
    for j in 0..=n {
        for i in 0..=n {
            let (x, y) = (size * i as f64 / n as f64, size * j as f64 / n as f64);
            positions.push(Vec3::new(x, y, height(x, y)));
        }
    }
    let mut faces = Vec::with_capacity(2 * n * n);
    push_grid_faces(&mut faces, 0, n, n);
    Mesh::new(positions, faces)
}

/// Unit grid folded into two sharp ridges.
pub fn creased_grid(n: usize) -> Mesh {
    heightfield(n, 1.0, |x, y| 0.3 * (0.35 - (x - 0.35).abs()).max(0.0) + 0.25 * (y - 0.6).max(0.0))
}

/// Terrain-like heightfield with multi-octave bumps.
pub fn terrain(n: usize) -> Mesh {
    heightfield(n, 1.0, |x, y| 0.08 * bumps(x * 3.0, y * 3.0, 0.0))
}

/// Smooth deterministic pseudo-noise in roughly `[-1, 1]`.
fn bumps(x: f64, y: f64, z: f64) -> f64 {
    let mut s = 0.0;
    let mut amp = 0.5;
    let mut f = 1.0;
    for k in 0..4 {
        let k = k as f64;
        s += amp * ((f * x + 1.3 * k).sin() * (f * y * 1.1 + 0.7 * k).cos() + (f * z * 0.9 + 2.1 * k).sin() * 0.5);
        amp *= 0.5;
        f *= 2.17;
    }
    s
}

/// Recursively subdivided icosahedron on the unit sphere: `20 * 4^level` faces.
pub fn icosphere(level: usize) -> Mesh {
    let mut mesh = icosahedron();
    for _ in 0..level {
        let mut positions = mesh.positions.clone();
        let mut midpoints = std::collections::HashMap::new();
        let mut mid = |a: usize, b: usize, positions: &mut Vec<Vec3>| -> usize {
            let key = (a.min(b), a.max(b));
            *midpoints.entry(key).or_insert_with(|| {
                positions.push(((positions[a] + positions[b]) * 0.5).normalize());
                positions.len() - 1
            })
        };
        let mut faces = Vec::with_capacity(mesh.faces.len() * 4);
        for &[a, b, c] in &mesh.faces {
            let ab = mid(a, b, &mut positions);
            let bc = mid(b, c, &mut positions);
            let ca = mid(c, a, &mut positions);
            faces.extend([[a, ab, ca], [b, bc, ab], [c, ca, bc], [ab, bc, ca]]);
        }
        mesh = Mesh::new(positions, faces);
    }
    mesh
}

/// Geodesic sphere with each icosahedron face split `frequency^2` times: `20 f^2` faces.
pub fn geodesic_sphere(frequency: usize) -> Mesh {
    let f = frequency.max(1);
    let ico = icosahedron();
    let mut positions = Vec::new();
    let mut faces = Vec::new();
    for &[a, b, c] in &ico.faces {
        let (pa, pb, pc) = (ico.positions[a], ico.positions[b], ico.positions[c]);
        let base = positions.len();
        // Row i has f - i + 1 points.
        let mut row_start = Vec::with_capacity(f + 1);
        for i in 0..=f {
            row_start.push(positions.len() - base);
            for j in 0..=(f - i) {
                let u = j as f64 / f as f64;
                let v = i as f64 / f as f64;
                positions.push((pa + (pb - pa) * u + (pc - pa) * v).normalize());
            }
        }
        let at = |i: usize, j: usize| base + row_start[i] + j;
        for i in 0..f {
            for j in 0..(f - i) {
                faces.push([at(i, j), at(i, j + 1), at(i + 1, j)]);
                if j + 1 < f - i {
                    faces.push([at(i, j + 1), at(i + 1, j + 1), at(i + 1, j)]);
                }
            }
        }
    }
    weld_vertices(&Mesh::new(positions, faces), 1e-9).0
}

fn icosahedron() -> Mesh {
    let t = (1.0 + 5f64.sqrt()) / 2.0;
    let positions = [
        [-1.0, t, 0.0], [1.0, t, 0.0], [-1.0, -t, 0.0], [1.0, -t, 0.0],
        [0.0, -1.0, t], [0.0, 1.0, t], [0.0, -1.0, -t], [0.0, 1.0, -t],
        [t, 0.0, -1.0], [t, 0.0, 1.0], [-t, 0.0, -1.0], [-t, 0.0, 1.0],
    ]
    .iter()
    .map(|p| Vec3::new(p[0], p[1], p[2]).normalize())
    .collect();
    let faces = vec![
        [0, 11, 5], [0, 5, 1], [0, 1, 7], [0, 7, 10], [0, 10, 11],
        [1, 5, 9], [5, 11, 4], [11, 10, 2], [10, 7, 6], [7, 1, 8],
        [3, 9, 4], [3, 4, 2], [3, 2, 6], [3, 6, 8], [3, 8, 9],
        [4, 9, 5], [2, 4, 11], [6, 2, 10], [8, 6, 7], [9, 8, 1],
    ];
    Mesh::new(positions, faces)
}

/// Flat disk in z = 0 built from concentric rings, with boundary radius
/// `1 + wave_amplitude * sin(wave_count * theta)`.
///
/// Face count is `segments * (2 * rings - 1)`.
pub fn disk(rings: usize, segments: usize, wave_amplitude: f64, wave_count: f64) -> Mesh {
    let rings = rings.max(1);
    let segments = segments.max(3);
    let mut positions = vec![Vec3::zeros()];
    for r in 1..=rings {
        let t = r as f64 / rings as f64;
        for s in 0..segments {
            let theta = 2.0 * PI * s as f64 / segments as f64;
            let radius = t * (1.0 + wave_amplitude * (wave_count * theta).sin());
            positions.push(Vec3::new(radius * theta.cos(), radius * theta.sin(), 0.0));
        }
    }
    let ring = |r: usize, s: usize| 1 + (r - 1) * segments + (s % segments);
    let mut faces = Vec::new();
    for s in 0..segments {
        faces.push([0, ring(1, s), ring(1, s + 1)]);
    }
    for r in 1..rings {
        for s in 0..segments {
            faces.push([ring(r, s), ring(r + 1, s), ring(r + 1, s + 1)]);
            faces.push([ring(r, s), ring(r + 1, s + 1), ring(r, s + 1)]);
        }
    }
    Mesh::new(positions, faces)
}

/// Indices of the outermost ring of [`disk`].
pub fn disk_rim(rings: usize, segments: usize) -> std::ops::Range<usize> {
    let start = 1 + (rings.max(1) - 1) * segments.max(3);
    start..start + segments.max(3)
}

/// Three triangles sharing edge (0, 1): the minimal non-manifold edge.
pub fn nonmanifold_fan() -> Mesh {
    Mesh::new(
        vec![
            Vec3::new(0.0, 0.0, 0.0),
            Vec3::new(1.0, 0.0, 0.0),
            Vec3::new(0.5, 1.0, 0.0),
            Vec3::new(0.5, -0.5, 0.8),
            Vec3::new(0.5, -0.5, -0.8),
        ],
        vec![[0, 1, 2], [1, 0, 3], [0, 1, 4]],
    )
}

/// Three `n` x `n` sheets meeting along the segment x in [0, 1], y = z = 0,
/// so every edge on that segment is shared by three faces.
pub fn nonmanifold_book(n: usize) -> Mesh {
    let n = n.max(1);
    let mut positions = Vec::new();
    let mut faces = Vec::new();
    for k in 0..3 {
        let ang = 2.0 * PI * k as f64 / 3.0 + 0.3;
        let dir = Vec3::new(0.0, ang.cos(), ang.sin());
        let base = positions.len();
        for j in 0..=n {
            for i in 0..=n {
                let bump = 0.05 * ((i as f64 * 0.9).sin() * (j as f64 * 0.7).cos());
                let normal = Vec3::new(0.0, -ang.sin(), ang.cos());
                let jt = j as f64 / n as f64;
                positions.push(Vec3::new(i as f64 / n as f64, 0.0, 0.0) + dir * jt + normal * bump * jt);
            }
        }
        push_grid_faces(&mut faces, base, n, n);
    }
    weld_vertices(&Mesh::new(positions, faces), 1e-9).0
}

/// Two triangles in a fan plus a third triangle on the shared edge, so
/// vertex 0 has three incident boundary edges.
pub fn boundary_junction() -> Mesh {
    Mesh::new(
        vec![
            Vec3::new(0.0, 0.0, 0.0),
            Vec3::new(1.0, -0.3, 0.0),
            Vec3::new(1.0, 0.4, 0.0),
            Vec3::new(0.3, 1.0, 0.0),
            Vec3::new(0.7, 0.2, 0.9),
        ],
        vec![[0, 1, 2], [0, 2, 3], [0, 2, 4]],
    )
}

/// A grid sheet with two extra fins hanging off it, producing several
/// vertices with three or more boundary edges.
pub fn junction_sheet(n: usize) -> Mesh {
    let mut mesh = terrain(n);
    let n = n.max(2);
    let idx = |i: usize, j: usize| j * (n + 1) + i;
    // Fin along interior edge of the middle row (non-manifold edge, junction endpoints).
    let (a, b) = (idx(n / 2, n / 2), idx(n / 2 + 1, n / 2));
    let apex = mesh.positions.len();
    let mid = (mesh.positions[a] + mesh.positions[b]) * 0.5;
    mesh.positions.push(mid + Vec3::new(0.0, 0.02, 0.3));
    mesh.faces.push([a, b, apex]);
    // Fin touching only a border vertex (bow-tie junction).
    let c = idx(0, n / 2);
    let p = mesh.positions[c];
    let (f1, f2) = (mesh.positions.len(), mesh.positions.len() + 1);
    mesh.positions.push(p + Vec3::new(-0.2, -0.1, 0.05));
    mesh.positions.push(p + Vec3::new(-0.2, 0.1, 0.05));
    mesh.faces.push([c, f1, f2]);
    mesh
}

/// Two subdivided unit cubes side by side along x with a `gap` between them.
pub fn two_cubes(gap: f64, n: usize) -> Mesh {
    let a = subdivided_cube(n);
    let mut positions = a.positions.clone();
    let offset = a.positions.len();
    positions.extend(a.positions.iter().map(|p| p + Vec3::new(1.0 + gap, 0.0, 0.0)));
    let mut faces = a.faces.clone();
    faces.extend(a.faces.iter().map(|f| f.map(|v| v + offset)));
    Mesh::new(positions, faces)
}

/// Open hemisphere (bowl) with a circular rim.
pub fn bowl(rings: usize, segments: usize) -> Mesh {
    let rings = rings.max(1);
    let mut m = disk(rings, segments, 0.0, 0.0);
    for p in &mut m.positions {
        let r = (p.x * p.x + p.y * p.y).sqrt().min(1.0);
        let phi = r * PI / 2.0;
        let scale = if r > 0.0 { phi.sin() / r } else { 1.0 };
        *p = Vec3::new(p.x * scale, p.y * scale, -phi.cos());
    }
    m
}

/// Sphere with bumpy radial displacement, loosely resembling a scanned stone.
pub fn noisy_sphere(level: usize) -> Mesh {
    let mut m = icosphere(level);
    for p in &mut m.positions {
        let d = 1.0 + 0.12 * bumps(p.x * 2.5, p.y * 2.5, p.z * 2.5);
        *p *= d;
    }
    m
}

/// Torus (major radius 1, minor 0.35) with small surface ripples.
pub fn noisy_torus(major_segments: usize, minor_segments: usize) -> Mesh {
    let (nu, nv) = (major_segments.max(3), minor_segments.max(3));
    let mut positions = Vec::with_capacity(nu * nv);
    for i in 0..nu {
        let u = 2.0 * PI * i as f64 / nu as f64;
        for j in 0..nv {
            let v = 2.0 * PI * j as f64 / nv as f64;
            let r = 0.35 * (1.0 + 0.08 * (5.0 * u).sin() * (3.0 * v).cos());
            positions.push(Vec3::new((1.0 + r * v.cos()) * u.cos(), (1.0 + r * v.cos()) * u.sin(), r * v.sin()));
        }
    }
    let at = |i: usize, j: usize| (i % nu) * nv + (j % nv);
    let mut faces = Vec::with_capacity(2 * nu * nv);
    for i in 0..nu {
        for j in 0..nv {
            faces.push([at(i, j), at(i + 1, j), at(i + 1, j + 1)]);
            faces.push([at(i, j), at(i + 1, j + 1), at(i, j + 1)]);
        }
    }
    Mesh::new(positions, faces)
}

/// Color of the horizontal gradient used by [`gradient_plane`], as a function of `u`.
pub fn gradient_color(u: f64) -> [f64; 3] {
    [u, 0.5, 1.0 - u]
}

/// Unit `n` x `n` grid textured with a horizontal gradient at `texture_size` pixels.
///
/// UVs equal the xy coordinates, so the color at `(x, y)` is
/// `gradient_color(x)` up to 8-bit quantization.
pub fn gradient_plane(n: usize, texture_size: u32) -> Mesh {
    let mut m = grid(n, 1.0);
    let uvs = m
        .faces
        .iter()
        .map(|f| f.map(|v| [m.positions[v].x, m.positions[v].y]))
        .collect();
    m.corner_uvs = Some(uvs);
    let tex = TextureImage::from_fn(texture_size, texture_size, |x, _| {
        let u = (x as f64 + 0.5) / texture_size as f64;
        crate::texture::to_rgba8(gradient_color(u))
    });
    m.texture = Some(Arc::new(tex));
    m
}

/// Cube whose six sides each own a separate UV chart.
pub fn cube_with_separate_charts() -> Mesh {
    let mut m = cube();
    let mut uvs = Vec::new();
    for (fi, _) in m.faces.iter().enumerate() {
        let side = fi / 2;
        let (ox, oy) = ((side % 3) as f64 / 3.0, (side / 3) as f64 / 2.0);
        let local: [[f64; 2]; 3] = if fi % 2 == 0 {
            [[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]
        } else {
            [[1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]
        };
        uvs.push(local.map(|[u, v]| [ox + u * 0.3, oy + v * 0.45]));
    }
    m.corner_uvs = Some(uvs);
    m
}

/// `mesh` with its vertices renumbered by a seeded random permutation.
///
/// Geometry and per-vertex attributes are unchanged; only the order the
/// simplifier sees for tie-breaking differs.
pub fn permute_vertices(mesh: &Mesh, seed: u64) -> Mesh {
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    let mut order: Vec<usize> = (0..mesh.vertex_count()).collect();
    order.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
    let mut new_index = vec![0; order.len()];
    for (new, &old) in order.iter().enumerate() {
        new_index[old] = new;
    }
    fn pick<T: Copy>(order: &[usize], v: &[T]) -> Vec<T> {
        order.iter().map(|&o| v[o]).collect()
    }
    Mesh {
        positions: pick(&order, &mesh.positions),
        faces: mesh.faces.iter().map(|f| f.map(|v| new_index[v])).collect(),
        corner_uvs: mesh.corner_uvs.clone(),
        vertex_normals: mesh.vertex_normals.as_ref().map(|n| pick(&order, n)),
        vertex_colors: mesh.vertex_colors.as_ref().map(|c| pick(&order, c)),
        texture: mesh.texture.clone(),
    }
}

/// A named fixture for batch runs.
pub struct NamedFixture {
    pub name: &'static str,
    pub mesh: Mesh,
}

/// The bundled fixture set used by the ablation harness.
pub fn ablation_set() -> Vec<NamedFixture> {
    vec![
        NamedFixture { name: "wavy_disk", mesh: disk(16, 64, 0.15, 5.0) },
        NamedFixture { name: "icosphere", mesh: icosphere(3) },
        NamedFixture { name: "creased_grid", mesh: creased_grid(24) },
        NamedFixture { name: "nonmanifold_book", mesh: nonmanifold_book(12) },
        NamedFixture { name: "two_cubes", mesh: two_cubes(0.005, 6) },
        NamedFixture { name: "gradient_plane", mesh: gradient_plane(20, 64) },
        NamedFixture { name: "noisy_sphere", mesh: noisy_sphere(3) },
        NamedFixture { name: "noisy_torus", mesh: noisy_torus(48, 16) },
        NamedFixture { name: "terrain", mesh: terrain(28) },
        NamedFixture { name: "bowl", mesh: bowl(12, 48) },
        NamedFixture { name: "subdivided_cube", mesh: subdivided_cube(8) },
        NamedFixture { name: "junction_sheet", mesh: junction_sheet(16) },
    ]
}
