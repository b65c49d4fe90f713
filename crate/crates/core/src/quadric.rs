//! Quadric error matrices and every quadric the cost function is built from.
//!
//! A quadric is a symmetric 4x4 matrix `Q`; its error at a point `v` is
//! `[v, 1]^T Q [v, 1]`. Quadrics add coefficient-wise, so per-vertex
//! quadrics are summed when an edge collapses and evaluated at the
//! candidate position.

use std::ops::{Add, AddAssign, Mul};

use log::debug;
use nalgebra::{Matrix3, Vector4};

use crate::mesh::Vec3;
use crate::topology::{Adjacency, Edge};

/// Symmetric 4x4 matrix stored as its upper triangle.
///
/// ```text
/// | a00 a01 a02 a03 |
/// |     a11 a12 a13 |
/// |         a22 a23 |
/// |             a33 |
/// ```
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Quadric {
    pub coeffs: [f64; 10],
}

impl Quadric {
    pub const ZERO: Quadric = Quadric { coeffs: [0.0; 10] };

    /// `p p^T` for the plane `p . [x, y, z, 1] = 0`.
    pub fn from_plane(p: [f64; 4]) -> Self {
        let [a, b, c, d] = p;
        Self { coeffs: [a * a, a * b, a * c, a * d, b * b, b * c, b * d, c * c, c * d, d * d] }
    }

    /// Builds a quadric from its quadratic block `A`, linear part `b` and
    /// constant `c`, so that `eval(v) = v^T A v + 2 b.v + c`.
    pub fn from_parts(a: &Matrix3<f64>, b: &Vec3, c: f64) -> Self {
        let s = |i: usize, j: usize| 0.5 * (a[(i, j)] + a[(j, i)]);
        Self {
            coeffs: [s(0, 0), s(0, 1), s(0, 2), b.x, s(1, 1), s(1, 2), b.y, s(2, 2), b.z, c],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0.0)
    }

    /// `[v, 1]^T Q [v, 1]`.
    pub fn eval(&self, v: &Vec3) -> f64 {
        let q = &self.coeffs;
        let (x, y, z) = (v.x, v.y, v.z);
        q[0] * x * x
            + q[4] * y * y
            + q[7] * z * z
            + 2.0 * (q[1] * x * y + q[2] * x * z + q[5] * y * z)
            + 2.0 * (q[3] * x + q[6] * y + q[8] * z)
            + q[9]
    }

    /// Evaluates at a full homogeneous 4-vector.
    pub fn eval_homogeneous(&self, v: &Vector4<f64>) -> f64 {
        let m = self.matrix();
        (v.transpose() * m * v)[(0, 0)]
    }

    pub fn quadratic_block(&self) -> Matrix3<f64> {
        let q = &self.coeffs;
        Matrix3::new(q[0], q[1], q[2], q[1], q[4], q[5], q[2], q[5], q[7])
    }

    pub fn linear_part(&self) -> Vec3 {
        Vec3::new(self.coeffs[3], self.coeffs[6], self.coeffs[8])
    }

    pub fn constant(&self) -> f64 {
        self.coeffs[9]
    }

    pub fn matrix(&self) -> nalgebra::Matrix4<f64> {
        let q = &self.coeffs;
        nalgebra::Matrix4::new(
            q[0], q[1], q[2], q[3], //
            q[1], q[4], q[5], q[6], //
            q[2], q[5], q[7], q[8], //
            q[3], q[6], q[8], q[9],
        )
    }

    /// Gradient of [`Quadric::eval`] at `v`: `2 (A v + b)`.
    pub fn gradient(&self, v: &Vec3) -> Vec3 {
        2.0 * (self.quadratic_block() * v + self.linear_part())
    }
}

impl Add for Quadric {
    type Output = Quadric;

    fn add(mut self, rhs: Quadric) -> Quadric {
        self += rhs;
        self
    }
}

impl AddAssign for Quadric {
    fn add_assign(&mut self, rhs: Quadric) {
        for (a, b) in self.coeffs.iter_mut().zip(rhs.coeffs) {
            *a += b;
        }
    }
}

impl Mul<f64> for Quadric {
    type Output = Quadric;

    fn mul(mut self, s: f64) -> Quadric {
        for c in &mut self.coeffs {
            *c *= s;
        }
        self
    }
}

impl std::iter::Sum for Quadric {
    fn sum<I: Iterator<Item = Quadric>>(iter: I) -> Quadric {
        iter.fold(Quadric::ZERO, |a, b| a + b)
    }
}

/// Fundamental quadric `K_p = p p^T` of a plane.
pub fn plane_quadric(p: [f64; 4]) -> Quadric {
    Quadric::from_plane(p)
}

/// `eval` as a free function.
pub fn eval(q: &Quadric, v: &Vec3) -> f64 {
    q.eval(v)
}

/// The cost-function weights.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightSet {
    /// Scales the open-boundary area cost.
    pub w_area: f64,
    /// Scales the curvature-weighted boundary quadric.
    pub w_boundary: f64,
    /// Multiplier on the cost of edges touching a UV seam vertex. 0 disables it.
    pub w_uv: f64,
    /// Scales the tangent-plane (normal) quadric.
    pub w_normal: f64,
    /// Inverse-area plane weighting strength. 0 means uniform plane weights.
    pub w_plane_area: f64,
}

impl WeightSet {
    /// The tuned defaults.
    pub const DEFAULT: WeightSet =
        WeightSet { w_area: 100.0, w_boundary: 500.0, w_uv: 5000.0, w_normal: 0.01, w_plane_area: 1.0 };

    /// All terms off: plain quadric error with unweighted face planes.
    pub const ZERO: WeightSet = WeightSet { w_area: 0.0, w_boundary: 0.0, w_uv: 0.0, w_normal: 0.0, w_plane_area: 0.0 };

    pub fn is_valid(&self) -> bool {
        [self.w_area, self.w_boundary, self.w_uv, self.w_normal, self.w_plane_area]
            .iter()
            .all(|w| w.is_finite() && *w >= 0.0)
    }
}

impl Default for WeightSet {
    fn default() -> Self {
        Self::DEFAULT
    }
}

/// Scale-relative thresholds for degenerate geometry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Edges shorter than this are never collapsed.
    pub length: f64,
    /// Faces smaller than this are treated as degenerate.
    pub area: f64,
}

impl Tolerances {
    pub fn from_diagonal(diagonal: f64, fraction: f64) -> Self {
        let length = fraction * diagonal;
        Self { length, area: length * length }
    }
}

/// Read-only view of a triangle mesh with adjacency. Faces not listed in
/// the adjacency (dead faces in a working mesh) are invisible to queries.
#[derive(Debug, Clone, Copy)]
pub struct MeshView<'a> {
    pub positions: &'a [Vec3],
    pub faces: &'a [[usize; 3]],
    pub adjacency: &'a Adjacency,
}

impl<'a> MeshView<'a> {
    pub fn new(positions: &'a [Vec3], faces: &'a [[usize; 3]], adjacency: &'a Adjacency) -> Self {
        Self { positions, faces, adjacency }
    }

    fn face_cross(&self, f: usize) -> Vec3 {
        let [a, b, c] = self.faces[f];
        let (pa, pb, pc) = (self.positions[a], self.positions[b], self.positions[c]);
        (pb - pa).cross(&(pc - pa))
    }
}

/// Sum over the faces around `v` of the face-plane quadric, each divided by
/// `w_plane_area * area` when `w_plane_area > 0` (uniform weights when it
/// is 0). Faces below `tol.area` are skipped; if none remain the zero
/// quadric is returned.
pub fn base_quadric(view: &MeshView, v: usize, w_plane_area: f64, tol: &Tolerances) -> Quadric {
    let mut q = Quadric::ZERO;
    let mut used = 0;
    for &f in view.adjacency.faces_of(v) {
        let cross = view.face_cross(f);
        let area = 0.5 * cross.norm();
        if area <= tol.area || area == 0.0 {
            continue;
        }
        let n = cross / (2.0 * area);
        let p = view.positions[view.faces[f][0]];
        let k = Quadric::from_plane([n.x, n.y, n.z, -n.dot(&p)]);
        q += if w_plane_area > 0.0 { k * (1.0 / (w_plane_area * area)) } else { k };
        used += 1;
    }
    if used == 0 && !view.adjacency.faces_of(v).is_empty() {
        debug!("vertex {v}: all incident faces degenerate, base quadric is zero");
    }
    q
}

/// Discrete curvature of the boundary chain `v2 - v1 - v3`:
/// `|d1 x d2| / |d1|^3` with `d1 = v3 - v2` and `d2 = v3 - 2 v1 + v2`.
///
/// Returns exactly 0 for degenerate or collinear chains.
pub fn boundary_curvature(v1: &Vec3, v2: &Vec3, v3: &Vec3) -> f64 {
    let d1 = v3 - v2;
    let d2 = v3 - 2.0 * v1 + v2;
    let len = d1.norm();
    let scale = (v1 - v2).norm() + (v3 - v1).norm();
    if len <= 1e-12 * scale || len == 0.0 {
        return 0.0;
    }
    let cross = d1.cross(&d2).norm();
    if cross <= 1e-12 * len * d2.norm() {
        return 0.0;
    }
    cross / (len * len * len)
}

/// The two supporting planes of a boundary vertex.
///
/// `p1` has the (unnormalized) normal of triangle `v1 v2 v3`, `p2` has the
/// incoming chain direction `v1 - v2` as its normal; both pass through `v1`.
pub fn boundary_planes(v1: &Vec3, v2: &Vec3, v3: &Vec3) -> ([f64; 4], [f64; 4]) {
    let n1 = (v1 - v2).cross(&(v3 - v1));
    let d = v1 - v2;
    ([n1.x, n1.y, n1.z, -n1.dot(v1)], [d.x, d.y, d.z, -d.dot(v1)])
}

/// Curvature-scaled dual-plane quadric `w * kappa * (p1 p1^T + p2 p2^T)`.
pub fn boundary_quadric(v1: &Vec3, v2: &Vec3, v3: &Vec3, w_boundary: f64) -> Quadric {
    let kappa = boundary_curvature(v1, v2, v3);
    if kappa == 0.0 || w_boundary == 0.0 {
        return Quadric::ZERO;
    }
    let (p1, p2) = boundary_planes(v1, v2, v3);
    (Quadric::from_plane(p1) + Quadric::from_plane(p2)) * (w_boundary * kappa)
}

/// Tangent-plane quadric `w * p p^T` with `p = [n, -n.v]`.
///
/// `n` is renormalized when it is off unit length by more than 1e-6; a zero
/// normal yields the zero quadric.
pub fn normal_quadric(v: &Vec3, n: &Vec3, w_normal: f64) -> Quadric {
    if w_normal == 0.0 {
        return Quadric::ZERO;
    }
    let n = if (n.norm() - 1.0).abs() > 1e-6 {
        match n.try_normalize(0.0) {
            Some(u) => u,
            None => {
                debug!("zero normal at {v:?}; normal quadric is zero");
                return Quadric::ZERO;
            }
        }
    } else {
        *n
    };
    Quadric::from_plane([n.x, n.y, n.z, -n.dot(v)]) * w_normal
}

/// Composite per-vertex quadric: base + boundary (only for vertices with
/// exactly two boundary neighbours) + normal.
pub fn gf_quadric(view: &MeshView, v: usize, normal: &Vec3, weights: &WeightSet, tol: &Tolerances) -> Quadric {
    let mut q = base_quadric(view, v, weights.w_plane_area, tol);
    if weights.w_boundary > 0.0 {
        if let Some((a, b)) = view.adjacency.boundary_chain(view.faces, v) {
            q += boundary_quadric(&view.positions[v], &view.positions[a], &view.positions[b], weights.w_boundary);
        }
    }
    q += normal_quadric(&view.positions[v], normal, weights.w_normal);
    q
}

/// `[e]_x`, the matrix with `[e]_x v = e x v`.
pub fn cross_matrix(e: &Vec3) -> Matrix3<f64> {
    Matrix3::new(0.0, -e.z, e.y, e.z, 0.0, -e.x, -e.y, e.x, 0.0)
}

/// Area quadric of one boundary edge `(r, s)`: evaluates to
/// `0.5 * |(v_s - v_r) x v' + v_r x v_s|^2`, i.e. half the squared parallelogram
/// area spanned by the edge and `v'`.
pub fn boundary_edge_area_quadric(vr: &Vec3, vs: &Vec3) -> Quadric {
    let e = cross_matrix(&(vs - vr));
    let t = vr.cross(vs);
    let ete = e.transpose() * e;
    let et = e.transpose() * t;
    Quadric::from_parts(&(ete * 0.5), &(et * 0.5), 0.5 * t.dot(&t))
}

/// Boundary edges incident to either endpoint of `edge`, deduplicated.
pub fn incident_boundary_edges(view: &MeshView, edge: Edge) -> Vec<Edge> {
    let mut out = Vec::new();
    for r in [edge.0, edge.1] {
        for s in view.adjacency.boundary_neighbors(view.faces, r) {
            let e = Edge::new(r, s);
            if !out.contains(&e) {
                out.push(e);
            }
        }
    }
    out.sort_unstable();
    out
}

/// Sum of [`boundary_edge_area_quadric`] over the boundary edges around
/// `edge`; zero when neither endpoint touches the boundary.
pub fn area_quadric(view: &MeshView, edge: Edge) -> Quadric {
    incident_boundary_edges(view, edge)
        .into_iter()
        .map(|e| boundary_edge_area_quadric(&view.positions[e.0], &view.positions[e.1]))
        .sum()
}

/// How [`optimal_position`] chose its point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlacementSource {
    Solved,
    FallbackI,
    FallbackJ,
    FallbackMid,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimalPlacement {
    pub position: Vec3,
    pub cost: f64,
    pub source: PlacementSource,
}

/// Smallest-to-largest eigenvalue magnitude ratio below which the 3x3
/// system is considered singular.
pub const CONDITION_LIMIT: f64 = 1e-10;

fn clamp_cost(c: f64) -> f64 {
    if (-1e-9..0.0).contains(&c) {
        0.0
    } else {
        c
    }
}

/// Minimizer of `q` over positions, falling back to the best of `vi`, `vj`,
/// and their midpoint when the linear system is singular or ill-conditioned.
pub fn optimal_position(q: &Quadric, vi: &Vec3, vj: &Vec3) -> OptimalPlacement {
    let fallback = || {
        let mid = (vi + vj) * 0.5;
        let cands = [
            (*vi, PlacementSource::FallbackI),
            (*vj, PlacementSource::FallbackJ),
            (mid, PlacementSource::FallbackMid),
        ];
        let mut best = OptimalPlacement { position: *vi, cost: f64::INFINITY, source: PlacementSource::FallbackI };
        for (p, s) in cands {
            let c = q.eval(&p);
            if c < best.cost {
                best = OptimalPlacement { position: p, cost: clamp_cost(c), source: s };
            }
        }
        best
    };

    let a = q.quadratic_block();
    let b = q.linear_part();
    let eig = a.symmetric_eigenvalues();
    let max = eig.iter().fold(0.0f64, |m, e| m.max(e.abs()));
    let min = eig.iter().fold(f64::INFINITY, |m, e| m.min(e.abs()));
    if !(max > 0.0) || min < CONDITION_LIMIT * max {
        return fallback();
    }
    let Some(x) = a.lu().solve(&(-b)) else {
        return fallback();
    };
    let residual = (a * x + b).norm();
    if !x.iter().all(|c| c.is_finite()) || residual > 1e-6 * (1.0 + b.norm()) {
        return fallback();
    }
    let cost = q.eval(&x);
    let fb = fallback();
    if cost > fb.cost + 1e-9 {
        // Indefinite quadric: the stationary point is not a minimum.
        return fb;
    }
    OptimalPlacement { position: x, cost: clamp_cost(cost), source: PlacementSource::Solved }
}

/// Time spent inside [`edge_cost`] split by stage.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct CostTimings {
    pub solve: std::time::Duration,
    pub area: std::time::Duration,
}

/// Result of costing one edge collapse.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgeCost {
    /// `cost_gf + w_area * cost_area`, times `w_uv` across seams; `+inf` for degenerate edges.
    pub total: f64,
    pub position: Vec3,
    pub cost_gf: f64,
    pub cost_area: f64,
    pub source: PlacementSource,
}

/// Costs collapsing `edge` given per-vertex composite quadrics.
///
/// `seam` flags UV-seam vertices by index (may be empty for no seams).
pub fn edge_cost(
    view: &MeshView,
    edge: Edge,
    quadrics: &[Quadric],
    weights: &WeightSet,
    seam: &[bool],
    tol: &Tolerances,
) -> EdgeCost {
    edge_cost_timed(view, edge, quadrics, weights, seam, tol, None)
}

pub(crate) fn edge_cost_timed(
    view: &MeshView,
    edge: Edge,
    quadrics: &[Quadric],
    weights: &WeightSet,
    seam: &[bool],
    tol: &Tolerances,
    timings: Option<&mut CostTimings>,
) -> EdgeCost {
    let (i, j) = (edge.0, edge.1);
    let (vi, vj) = (view.positions[i], view.positions[j]);
    if (vi - vj).norm() < tol.length {
        return EdgeCost {
            total: f64::INFINITY,
            position: (vi + vj) * 0.5,
            cost_gf: f64::INFINITY,
            cost_area: 0.0,
            source: PlacementSource::FallbackMid,
        };
    }
    let clock = timings.as_ref().map(|_| std::time::Instant::now());
    let q = quadrics[i] + quadrics[j];
    let placement = optimal_position(&q, &vi, &vj);
    let mid_clock = clock.map(|c| (c.elapsed(), std::time::Instant::now()));

    let cost_area = if weights.w_area > 0.0 {
        clamp_cost(area_quadric(view, edge).eval(&placement.position)).max(0.0)
    } else {
        0.0
    };
    if let (Some(t), Some((solve, area_start))) = (timings, mid_clock) {
        t.solve += solve;
        t.area += area_start.elapsed();
    }

    let mut total = placement.cost.max(0.0) + weights.w_area * cost_area;
    let on_seam = seam.get(i).copied().unwrap_or(false) || seam.get(j).copied().unwrap_or(false);
    if on_seam && weights.w_uv > 0.0 {
        total *= weights.w_uv;
    }
    EdgeCost { total, position: placement.position, cost_gf: placement.cost, cost_area, source: placement.source }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: f64, y: f64, z: f64) -> Vec3 {
        Vec3::new(x, y, z)
    }

    #[test]
    fn plane_quadric_examples() {
        let q = plane_quadric([0.0, 0.0, 1.0, 0.0]);
        assert_eq!(q.eval(&v(3.0, -1.0, 0.7)), 0.7 * 0.7);
        assert_eq!(plane_quadric([1.0, 0.0, 0.0, -1.0]).eval(&v(3.0, 0.0, 0.0)), 4.0);
        assert_eq!(plane_quadric([0.0, 2.0, 0.0, 0.0]).eval(&v(0.0, 1.0, 0.0)), 4.0);
    }

    #[test]
    fn eval_examples() {
        assert_eq!(Quadric::ZERO.eval(&v(1.0, 2.0, 3.0)), 0.0);
        let q = plane_quadric([0.0, 0.0, 1.0, 0.0]) + plane_quadric([0.0, 0.0, 1.0, -2.0]);
        assert_eq!(q.eval(&v(0.0, 0.0, 1.0)), 2.0);
        assert_eq!(plane_quadric([1.0, 0.0, 0.0, 0.0]).eval(&v(-2.0, 5.0, 7.0)), 4.0);
    }

    #[test]
    fn homogeneous_eval_agrees() {
        let q = plane_quadric([0.3, -0.2, 0.9, 0.4]) + plane_quadric([1.0, 2.0, -1.0, 0.5]);
        let p = v(0.7, -1.1, 2.3);
        let h = Vector4::new(p.x, p.y, p.z, 1.0);
        assert!((q.eval(&p) - q.eval_homogeneous(&h)).abs() < 1e-12);
    }

    #[test]
    fn curvature_examples() {
        assert_eq!(boundary_curvature(&v(0.0, 0.0, 0.0), &v(-1.0, 0.0, 0.0), &v(2.0, 0.0, 0.0)), 0.0);
        let k = boundary_curvature(&v(0.0, 0.0, 0.0), &v(-1.0, 0.0, 0.0), &v(0.0, 1.0, 0.0));
        assert!((k - 2.0 / 2f64.sqrt().powi(3)).abs() < 1e-15);
        let k = boundary_curvature(&v(0.0, 1.0, 0.0), &v(1.0, 0.0, 0.0), &v(-1.0, 0.0, 0.0));
        assert!((k - 0.5).abs() < 1e-15);
        // Degenerate chain folding back on itself.
        assert_eq!(boundary_curvature(&v(1.0, 0.0, 0.0), &v(0.0, 0.0, 0.0), &v(0.0, 0.0, 0.0)), 0.0);
    }

    #[test]
    fn boundary_quadric_examples() {
        let (v1, v2, v3) = (v(0.0, 0.0, 0.0), v(-1.0, 0.0, 0.0), v(0.0, 1.0, 0.0));
        let collinear = boundary_quadric(&v(0.0, 0.0, 0.0), &v(-1.0, 0.0, 0.0), &v(1.0, 0.0, 0.0), 500.0);
        assert!(collinear.is_zero());
        let w = 500.0;
        let q = boundary_quadric(&v1, &v2, &v3, w);
        assert_eq!(q.eval(&v1), 0.0);
        let kappa = boundary_curvature(&v1, &v2, &v3);
        let n1 = (v1 - v2).cross(&(v3 - v1));
        let d = v1 - v2;
        let p = v1 + n1 / n1.norm();
        let expected = w * kappa * n1.norm_squared() + w * kappa * (d.dot(&n1) / n1.norm()).powi(2);
        assert!((q.eval(&p) - expected).abs() < 1e-9 * expected);
    }

    #[test]
    fn normal_quadric_examples() {
        let q = normal_quadric(&Vec3::zeros(), &Vec3::z(), 0.01);
        assert!((q.eval(&v(0.0, 0.0, 1.0)) - 0.01).abs() < 1e-15);
        assert_eq!(q.eval(&v(5.0, -3.0, 0.0)), 0.0);
        assert!(normal_quadric(&Vec3::zeros(), &Vec3::z(), 0.0).is_zero());
        assert!(normal_quadric(&Vec3::zeros(), &Vec3::zeros(), 1.0).is_zero());
        let renorm = normal_quadric(&Vec3::zeros(), &v(0.0, 0.0, 3.0), 1.0);
        assert!((renorm.eval(&v(0.0, 0.0, 2.0)) - 4.0).abs() < 1e-12);
    }

    #[test]
    fn area_quadric_single_edge() {
        let (r, s) = (v(0.0, 0.0, 0.0), v(1.0, 0.0, 0.0));
        let q = boundary_edge_area_quadric(&r, &s);
        assert_eq!(q.eval(&r), 0.0);
        for h in [0.1, 1.0, 10.0] {
            assert!((q.eval(&v(0.5, h, 0.0)) - 0.5 * h * h).abs() < 1e-9);
        }
    }

    #[test]
    fn solver_examples() {
        let q = plane_quadric([1.0, 0.0, 0.0, 0.0]) + plane_quadric([0.0, 1.0, 0.0, 0.0]) + plane_quadric([0.0, 0.0, 1.0, 0.0]);
        let p = optimal_position(&q, &v(1.0, 1.0, 1.0), &v(2.0, 0.0, 0.0));
        assert_eq!(p.source, PlacementSource::Solved);
        assert!(p.position.norm() < 1e-12 && p.cost.abs() < 1e-12);

        let q = plane_quadric([0.0, 0.0, 1.0, 0.0]) + plane_quadric([0.0, 0.0, 1.0, -2.0]);
        let p = optimal_position(&q, &v(0.0, 0.0, 0.0), &v(0.0, 0.0, 2.0));
        assert_eq!(p.source, PlacementSource::FallbackMid);
        assert_eq!(p.position, v(0.0, 0.0, 1.0));
        assert_eq!(p.cost, 2.0);

        let p = optimal_position(&Quadric::ZERO, &v(0.0, 0.0, 0.0), &v(1.0, 0.0, 0.0));
        assert_ne!(p.source, PlacementSource::Solved);
        assert_eq!(p.cost, 0.0);
    }
}
