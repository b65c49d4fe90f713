//! The indexed triangle mesh shared by every stage of the pipeline.

use std::sync::Arc;

use nalgebra::Vector3;

use crate::error::{Error, Result};
use crate::texture::TextureImage;

pub type Vec3 = Vector3<f64>;

/// Unit-length tolerance for stored vertex normals.
pub const NORMAL_UNIT_TOLERANCE: f64 = 1e-6;

/// Indexed triangle mesh with optional appearance data.
///
/// UVs are stored per face corner so that seams survive vertex welding.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Mesh {
    pub positions: Vec<Vec3>,
    pub faces: Vec<[usize; 3]>,
    pub corner_uvs: Option<Vec<[[f64; 2]; 3]>>,
    pub vertex_normals: Option<Vec<Vec3>>,
    /// Linear RGB in `[0, 1]`, one per vertex.
    pub vertex_colors: Option<Vec<[f64; 3]>>,
    pub texture: Option<Arc<TextureImage>>,
}

impl Mesh {
    pub fn new(positions: Vec<Vec3>, faces: Vec<[usize; 3]>) -> Self {
        Self { positions, faces, ..Default::default() }
    }

    pub fn vertex_count(&self) -> usize {
        self.positions.len()
    }

    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    /// True when colors can be looked up on the surface.
    pub fn has_appearance(&self) -> bool {
        (self.texture.is_some() && self.corner_uvs.is_some()) || self.vertex_colors.is_some()
    }

    /// Checks the structural invariants every loader and operation maintains.
    pub fn validate(&self) -> Result<()> {
        let n = self.positions.len();
        for (fi, f) in self.faces.iter().enumerate() {
            if f.iter().any(|&v| v >= n) {
                return Err(Error::InvalidMesh(format!("face {fi} references vertex >= {n}")));
            }
            if f[0] == f[1] || f[1] == f[2] || f[0] == f[2] {
                return Err(Error::InvalidMesh(format!("face {fi} repeats a vertex: {f:?}")));
            }
        }
        if let Some(uvs) = &self.corner_uvs {
            if uvs.len() != self.faces.len() {
                return Err(Error::InvalidMesh(format!(
                    "{} UV triples for {} faces",
                    uvs.len(),
                    self.faces.len()
                )));
            }
        }
        if let Some(normals) = &self.vertex_normals {
            if normals.len() != n {
                return Err(Error::InvalidMesh("normal count differs from vertex count".into()));
            }
            if let Some(i) = normals.iter().position(|v| (v.norm() - 1.0).abs() > NORMAL_UNIT_TOLERANCE) {
                return Err(Error::InvalidMesh(format!("normal {i} is not unit length")));
            }
        }
        if let Some(colors) = &self.vertex_colors {
            if colors.len() != n {
                return Err(Error::InvalidMesh("color count differs from vertex count".into()));
            }
        }
        Ok(())
    }

    /// Axis-aligned bounds over all stored positions.
    pub fn bounding_box(&self) -> (Vec3, Vec3) {
        bounding_box(&self.positions)
    }

    /// Length of the bounding-box diagonal; 0 for an empty mesh.
    pub fn diagonal(&self) -> f64 {
        let (lo, hi) = self.bounding_box();
        (hi - lo).norm()
    }

    pub fn corners(&self, face: usize) -> [Vec3; 3] {
        let [a, b, c] = self.faces[face];
        [self.positions[a], self.positions[b], self.positions[c]]
    }

    pub fn face_area(&self, face: usize) -> f64 {
        let [a, b, c] = self.corners(face);
        triangle_area(&a, &b, &c)
    }

    /// Unit face normal, or zero for a degenerate face.
    pub fn face_normal(&self, face: usize) -> Vec3 {
        let [a, b, c] = self.corners(face);
        (b - a).cross(&(c - a)).try_normalize(0.0).unwrap_or_else(Vec3::zeros)
    }

    pub fn total_area(&self) -> f64 {
        (0..self.faces.len()).map(|f| self.face_area(f)).sum()
    }

    pub fn point_at(&self, face: usize, bary: [f64; 3]) -> Vec3 {
        let [a, b, c] = self.corners(face);
        a * bary[0] + b * bary[1] + c * bary[2]
    }

    /// Surface color at a barycentric location, preferring the texture over vertex colors.
    pub fn color_at(&self, face: usize, bary: [f64; 3]) -> Option<[f64; 3]> {
        if let (Some(tex), Some(uvs)) = (&self.texture, &self.corner_uvs) {
            let t = &uvs[face];
            let uv = [
                t[0][0] * bary[0] + t[1][0] * bary[1] + t[2][0] * bary[2],
                t[0][1] * bary[0] + t[1][1] * bary[1] + t[2][1] * bary[2],
            ];
            return Some(tex.sample(uv));
        }
        let colors = self.vertex_colors.as_ref()?;
        let f = self.faces[face];
        let mut out = [0.0; 3];
        for (k, &v) in f.iter().enumerate() {
            for ch in 0..3 {
                out[ch] += colors[v][ch] * bary[k];
            }
        }
        Some(out)
    }

    /// Per-vertex normals from the input when present, otherwise the
    /// area-weighted average of incident face normals. Vertices with no
    /// usable faces get a zero vector.
    pub fn resolved_normals(&self) -> Vec<Vec3> {
        if let Some(n) = &self.vertex_normals {
            return n.clone();
        }
        let mut acc = vec![Vec3::zeros(); self.positions.len()];
        for f in &self.faces {
            let [a, b, c] = [self.positions[f[0]], self.positions[f[1]], self.positions[f[2]]];
            // Cross product length is twice the area, which is the weight we want.
            let n = (b - a).cross(&(c - a));
            for &v in f {
                acc[v] += n;
            }
        }
        acc.into_iter().map(|n| n.try_normalize(0.0).unwrap_or_else(Vec3::zeros)).collect()
    }
}

pub fn bounding_box(points: &[Vec3]) -> (Vec3, Vec3) {
    if points.is_empty() {
        return (Vec3::zeros(), Vec3::zeros());
    }
    let mut lo = points[0];
    let mut hi = points[0];
    for p in points {
        lo = lo.inf(p);
        hi = hi.sup(p);
    }
    (lo, hi)
}

pub fn triangle_area(a: &Vec3, b: &Vec3, c: &Vec3) -> f64 {
    0.5 * (b - a).cross(&(c - a)).norm()
}

/// Closest point to `p` on triangle `abc`, returned as barycentric coordinates.
pub fn closest_point_on_triangle(p: &Vec3, a: &Vec3, b: &Vec3, c: &Vec3) -> [f64; 3] {
    let ab = b - a;
    let ac = c - a;
    let ap = p - a;
    let d1 = ab.dot(&ap);
    let d2 = ac.dot(&ap);
    if d1 <= 0.0 && d2 <= 0.0 {
        return [1.0, 0.0, 0.0];
    }
    let bp = p - b;
    let d3 = ab.dot(&bp);
    let d4 = ac.dot(&bp);
    if d3 >= 0.0 && d4 <= d3 {
        return [0.0, 1.0, 0.0];
    }
    let vc = d1 * d4 - d3 * d2;
    if vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0 {
        let v = d1 / (d1 - d3);
        return [1.0 - v, v, 0.0];
    }
    let cp = p - c;
    let d5 = ab.dot(&cp);
    let d6 = ac.dot(&cp);
    if d6 >= 0.0 && d5 <= d6 {
        return [0.0, 0.0, 1.0];
    }
    let vb = d5 * d2 - d1 * d6;
    if vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0 {
        let w = d2 / (d2 - d6);
        return [1.0 - w, 0.0, w];
    }
    let va = d3 * d6 - d5 * d4;
    if va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0 {
        let w = (d4 - d3) / ((d4 - d3) + (d5 - d6));
        return [0.0, 1.0 - w, w];
    }
    let denom = va + vb + vc;
    if denom.abs() < f64::MIN_POSITIVE {
        // Degenerate triangle: fall back to the nearest corner.
        let da = (p - a).norm_squared();
        let db = (p - b).norm_squared();
        let dc = (p - c).norm_squared();
        return if da <= db && da <= dc {
            [1.0, 0.0, 0.0]
        } else if db <= dc {
            [0.0, 1.0, 0.0]
        } else {
            [0.0, 0.0, 1.0]
        };
    }
    let v = vb / denom;
    let w = vc / denom;
    [1.0 - v - w, v, w]
}
