//! Sample-based surface distances: symmetric Hausdorff, mean-squared
//! Chamfer, and a joint position/color Chamfer for appearance.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::mesh::{Mesh, Vec3};
use crate::spatial::KdTree;

pub const DEFAULT_SAMPLE_COUNT: usize = 100_000;

/// Points drawn from a surface, with optional colors.
#[derive(Debug, Clone, PartialEq)]
pub struct PointCloudSample {
    pub points: Vec<Vec3>,
    pub colors: Option<Vec<[f64; 3]>>,
    /// Bounding-box diagonal of the source mesh.
    pub diagonal: f64,
    /// Face each point was drawn from.
    pub faces: Vec<usize>,
}

impl PointCloudSample {
    /// A cloud from explicit points; `diagonal` is taken from their bounding box.
    pub fn from_points(points: Vec<Vec3>) -> Self {
        let (lo, hi) = crate::mesh::bounding_box(&points);
        let diagonal = (hi - lo).norm();
        Self { faces: vec![0; points.len()], points, colors: None, diagonal }
    }

    pub fn with_colors(mut self, colors: Vec<[f64; 3]>) -> Self {
        assert_eq!(colors.len(), self.points.len());
        self.colors = Some(colors);
        self
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// A distance in model units and divided by the reference diagonal
/// (squared diagonal for squared quantities).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Distance {
    pub raw: f64,
    pub normalized: f64,
}

/// `n` area-weighted uniform samples of `mesh`, reproducible from `seed`.
pub fn sample_surface(mesh: &Mesh, n: usize, seed: u64) -> Result<PointCloudSample> {
    if n == 0 {
        return Err(Error::InvalidArgument("sample count must be at least 1".into()));
    }
    let mut cdf = Vec::with_capacity(mesh.face_count());
    let mut total = 0.0;
    for f in 0..mesh.face_count() {
        total += mesh.face_area(f);
        cdf.push(total);
    }
    if !(total > 0.0) {
        return Err(Error::DegenerateMesh);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let appearance = mesh.has_appearance();
    let mut points = Vec::with_capacity(n);
    let mut faces = Vec::with_capacity(n);
    let mut colors = appearance.then(|| Vec::with_capacity(n));
    for _ in 0..n {
        let r = rng.random::<f64>() * total;
        let f = cdf.partition_point(|&c| c <= r).min(cdf.len() - 1);
        let (r1, r2): (f64, f64) = (rng.random(), rng.random());
        let s = r1.sqrt();
        let bary = [1.0 - s, s * (1.0 - r2), s * r2];
        points.push(mesh.point_at(f, bary));
        faces.push(f);
        if let Some(c) = colors.as_mut() {
            c.push(mesh.color_at(f, bary).unwrap_or([0.0; 3]));
        }
    }
    Ok(PointCloudSample { points, colors, diagonal: mesh.diagonal(), faces })
}

fn as_array(p: &Vec3) -> [f64; 3] {
    [p.x, p.y, p.z]
}

/// Squared distance from each point of `from` to its nearest point in `to`.
fn directed_squared<const K: usize>(from: &[[f64; K]], to: &KdTree<K>) -> Vec<f64> {
    from.par_iter().map(|q| to.nearest(q).map_or(f64::INFINITY, |(_, d)| d)).collect()
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

fn max(v: &[f64]) -> f64 {
    v.iter().copied().fold(0.0, f64::max)
}

/// Both directed squared-distance lists, `a → b` then `b → a`.
pub fn directed_terms(a: &PointCloudSample, b: &PointCloudSample) -> (Vec<f64>, Vec<f64>) {
    let pa: Vec<[f64; 3]> = a.points.iter().map(as_array).collect();
    let pb: Vec<[f64; 3]> = b.points.iter().map(as_array).collect();
    let (ta, tb) = rayon::join(|| KdTree::new(&pa), || KdTree::new(&pb));
    (directed_squared(&pa, &tb), directed_squared(&pb, &ta))
}

fn normalize(raw: f64, scale: f64) -> Distance {
    Distance { raw, normalized: if scale > 0.0 { raw / scale } else { raw } }
}

/// Symmetric Hausdorff distance, normalized by `a`'s diagonal.
pub fn hausdorff_symmetric(a: &PointCloudSample, b: &PointCloudSample) -> Distance {
    let (ab, ba) = directed_terms(a, b);
    normalize(max(&ab).max(max(&ba)).sqrt(), a.diagonal)
}

/// Average of the two directed mean squared nearest distances, normalized
/// by `a`'s squared diagonal.
pub fn chamfer_mean_squared(a: &PointCloudSample, b: &PointCloudSample) -> Distance {
    let (ab, ba) = directed_terms(a, b);
    normalize(0.5 * (mean(&ab) + mean(&ba)), a.diagonal * a.diagonal)
}

/// Hausdorff and Chamfer from one pair of nearest-neighbour passes.
pub fn geometric_distances(a: &PointCloudSample, b: &PointCloudSample) -> (Distance, Distance) {
    let (ab, ba) = directed_terms(a, b);
    (
        normalize(max(&ab).max(max(&ba)).sqrt(), a.diagonal),
        normalize(0.5 * (mean(&ab) + mean(&ba)), a.diagonal * a.diagonal),
    )
}

/// Mean-squared symmetric Chamfer over `(p / diag, λ·rgb)`, using `a`'s
/// diagonal for both clouds.
pub fn texture_chamfer(a: &PointCloudSample, b: &PointCloudSample, lambda_color: f64) -> Result<f64> {
    let (Some(ca), Some(cb)) = (&a.colors, &b.colors) else {
        return Err(Error::MissingColors);
    };
    let scale = if a.diagonal > 0.0 { 1.0 / a.diagonal } else { 1.0 };
    let joint = |pts: &[Vec3], cols: &[[f64; 3]]| -> Vec<[f64; 6]> {
        pts.iter()
            .zip(cols)
            .map(|(p, c)| {
                [
                    p.x * scale,
                    p.y * scale,
                    p.z * scale,
                    lambda_color * c[0],
                    lambda_color * c[1],
                    lambda_color * c[2],
                ]
            })
            .collect()
    };
    let ja = joint(&a.points, ca);
    let jb = joint(&b.points, cb);
    let (ta, tb) = rayon::join(|| KdTree::new(&ja), || KdTree::new(&jb));
    let ab = directed_squared(&ja, &tb);
    let ba = directed_squared(&jb, &ta);
    Ok(0.5 * (mean(&ab) + mean(&ba)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tri() -> Mesh {
        Mesh::new(
            vec![Vec3::new(0.0, 0.0, 0.0), Vec3::new(1.0, 0.0, 0.0), Vec3::new(0.0, 1.0, 0.0)],
            vec![[0, 1, 2]],
        )
    }

    #[test]
    fn single_sample_inside_triangle() {
        let s = sample_surface(&tri(), 1, 7).unwrap();
        let p = s.points[0];
        assert!(p.x >= 0.0 && p.y >= 0.0 && p.x + p.y <= 1.0 + 1e-15 && p.z == 0.0);
    }

    #[test]
    fn point_pairs() {
        let a = PointCloudSample::from_points(vec![Vec3::zeros()]);
        let b = PointCloudSample::from_points(vec![Vec3::new(3.0, 0.0, 0.0)]);
        assert_eq!(hausdorff_symmetric(&a, &b).raw, 3.0);
        assert_eq!(chamfer_mean_squared(&a, &b).raw, 9.0);
    }

    #[test]
    fn degenerate_mesh_rejected() {
        let m = Mesh::new(vec![Vec3::zeros(), Vec3::x(), Vec3::x() * 2.0], vec![[0, 1, 2]]);
        assert!(matches!(sample_surface(&m, 10, 0), Err(Error::DegenerateMesh)));
    }

    #[test]
    fn missing_colors() {
        let a = PointCloudSample::from_points(vec![Vec3::zeros()]);
        assert!(matches!(texture_chamfer(&a, &a, 1.0), Err(Error::MissingColors)));
    }
}
