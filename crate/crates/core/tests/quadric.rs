use decimate::fixtures;
use decimate::quadric::*;
use decimate::topology::{Adjacency, Edge};
use decimate::Vec3;
use nalgebra::Matrix3;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn v(x: f64, y: f64, z: f64) -> Vec3 {
    Vec3::new(x, y, z)
}

fn rand_vec(rng: &mut ChaCha8Rng, s: f64) -> Vec3 {
    v(rng.random_range(-s..s), rng.random_range(-s..s), rng.random_range(-s..s))
}

fn rand_plane(rng: &mut ChaCha8Rng) -> [f64; 4] {
    let n = rand_vec(rng, 1.0).normalize();
    let d = rng.random_range(-2.0..2.0);
    [n.x, n.y, n.z, d]
}

/// `(p . [v, 1])^2` written out by hand.
fn plane_sq(p: [f64; 4], x: &Vec3) -> f64 {
    let d = p[0] * x.x + p[1] * x.y + p[2] * x.z + p[3];
    d * d
}

#[test]
fn plane_eval_matches_squared_dot() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..1000 {
        let s = rng.random_range(0.1..10.0);
        let p = [rng.random_range(-s..s), rng.random_range(-s..s), rng.random_range(-s..s), rng.random_range(-s..s)];
        let x = rand_vec(&mut rng, 5.0);
        let scale = (p.iter().map(|c| c * c).sum::<f64>()) * (1.0 + x.norm_squared());
        assert!((plane_quadric(p).eval(&x) - plane_sq(p, &x)).abs() <= 1e-12 * scale);
    }
}

#[test]
fn addition_is_additive_and_psd() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..200 {
        let qs: Vec<Quadric> = (0..5).map(|_| plane_quadric(rand_plane(&mut rng)) * rng.random_range(0.0..3.0)).collect();
        let sum: Quadric = qs.iter().copied().sum();
        for _ in 0..5 {
            let x = rand_vec(&mut rng, 3.0);
            let parts: f64 = qs.iter().map(|q| q.eval(&x)).sum();
            assert!((sum.eval(&x) - parts).abs() <= 1e-12 * parts.abs().max(1.0));
            assert!(sum.eval(&x) >= -1e-9);
        }
        let (a, b) = (qs[0], qs[1]);
        assert_eq!(a + b, b + a);
    }
}

#[test]
fn fixture_quadrics_are_psd() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for mesh in [fixtures::icosphere(2), fixtures::disk(6, 24, 0.2, 3.0), fixtures::nonmanifold_book(4)] {
        let adj = Adjacency::build(mesh.vertex_count(), &mesh.faces);
        let view = MeshView::new(&mesh.positions, &mesh.faces, &adj);
        let tol = Tolerances::from_diagonal(mesh.diagonal(), 1e-8);
        let normals = mesh.resolved_normals();
        for vtx in 0..mesh.vertex_count() {
            let q = gf_quadric(&view, vtx, &normals[vtx], &WeightSet::DEFAULT, &tol);
            for _ in 0..10 {
                assert!(q.eval(&rand_vec(&mut rng, 2.0)) >= -1e-9);
            }
        }
    }
}

#[test]
fn solver_is_stationary_and_never_worse_than_fallback() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut solved = 0;
    for _ in 0..1000 {
        let q: Quadric = (0..rng.random_range(1..6)).map(|_| plane_quadric(rand_plane(&mut rng))).sum();
        let (vi, vj) = (rand_vec(&mut rng, 2.0), rand_vec(&mut rng, 2.0));
        let best_fallback = [vi, vj, (vi + vj) * 0.5].iter().map(|p| q.eval(p)).fold(f64::INFINITY, f64::min);
        let r = optimal_position(&q, &vi, &vj);
        assert!(r.cost <= best_fallback + 1e-9);
        assert!(r.cost >= -1e-9);
        if r.source == PlacementSource::Solved {
            solved += 1;
            let scale = 1.0 + q.matrix().norm();
            let h = 1e-3;
            for axis in [Vec3::x(), Vec3::y(), Vec3::z()] {
                let fd = (q.eval(&(r.position + axis * h)) - q.eval(&(r.position - axis * h))) / (2.0 * h);
                assert!(fd.abs() <= 1e-5 * scale, "fd {fd}");
            }
        }
    }
    assert!(solved > 300);
}

#[test]
fn solver_examples() {
    let q = plane_quadric([1.0, 0.0, 0.0, 0.0]) + plane_quadric([0.0, 1.0, 0.0, 0.0]) + plane_quadric([0.0, 0.0, 1.0, 0.0]);
    let r = optimal_position(&q, &v(1.0, 1.0, 1.0), &v(2.0, 0.0, 0.0));
    assert_eq!(r.source, PlacementSource::Solved);
    assert!(r.position.norm() < 1e-15 && r.cost == 0.0);

    let q = plane_quadric([0.0, 0.0, 1.0, 0.0]) + plane_quadric([0.0, 0.0, 1.0, -2.0]);
    let r = optimal_position(&q, &v(0.0, 0.0, 0.0), &v(0.0, 0.0, 2.0));
    assert_eq!(r.source, PlacementSource::FallbackMid);
    assert_eq!(r.position, v(0.0, 0.0, 1.0));
    assert_eq!(r.cost, 2.0);

    let r = optimal_position(&Quadric::ZERO, &v(0.0, 0.0, 0.0), &v(1.0, 0.0, 0.0));
    assert_ne!(r.source, PlacementSource::Solved);
    assert_eq!(r.cost, 0.0);
}

/// Curvature evaluated component by component, without the library's vector type.
fn kappa_oracle(v1: [f64; 3], v2: [f64; 3], v3: [f64; 3]) -> f64 {
    let d1 = [v3[0] - v2[0], v3[1] - v2[1], v3[2] - v2[2]];
    let d2 = [v3[0] - 2.0 * v1[0] + v2[0], v3[1] - 2.0 * v1[1] + v2[1], v3[2] - 2.0 * v1[2] + v2[2]];
    let c = [d1[1] * d2[2] - d1[2] * d2[1], d1[2] * d2[0] - d1[0] * d2[2], d1[0] * d2[1] - d1[1] * d2[0]];
    let cn = (c[0] * c[0] + c[1] * c[1] + c[2] * c[2]).sqrt();
    let dn = (d1[0] * d1[0] + d1[1] * d1[1] + d1[2] * d1[2]).sqrt();
    cn / (dn * dn * dn)
}

#[test]
fn curvature_matches_direct_evaluation() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..100 {
        let p: Vec<[f64; 3]> =
            (0..3).map(|_| [rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)]).collect();
        let k = boundary_curvature(&Vec3::from(p[0]), &Vec3::from(p[1]), &Vec3::from(p[2]));
        let o = kappa_oracle(p[0], p[1], p[2]);
        assert!((k - o).abs() <= 1e-10 * o.abs(), "{k} vs {o}");
    }
}

#[test]
fn curvature_examples() {
    assert_eq!(boundary_curvature(&v(0.0, 0.0, 0.0), &v(-1.0, 0.0, 0.0), &v(2.0, 0.0, 0.0)), 0.0);
    let k = boundary_curvature(&v(0.0, 0.0, 0.0), &v(-1.0, 0.0, 0.0), &v(0.0, 1.0, 0.0));
    assert!((k - 2.0 / 2f64.sqrt().powi(3)).abs() < 1e-15);
    let k = boundary_curvature(&v(0.0, 1.0, 0.0), &v(1.0, 0.0, 0.0), &v(-1.0, 0.0, 0.0));
    assert!((k - 0.5).abs() < 1e-15);
}

#[test]
fn collinear_chains_have_zero_curvature() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..100 {
        let v1 = rand_vec(&mut rng, 1.0);
        let d = rand_vec(&mut rng, 1.0);
        let (a, b) = (rng.random_range(0.01..2.0), rng.random_range(0.01..2.0));
        assert_eq!(boundary_curvature(&v1, &(v1 - d * a), &(v1 + d * b)), 0.0);
        assert!(boundary_quadric(&v1, &(v1 - d * a), &(v1 + d * b), 500.0).is_zero());
    }
}

#[test]
fn boundary_quadric_examples() {
    let (v1, v2, v3) = (v(0.0, 0.0, 0.0), v(-1.0, 0.0, 0.0), v(0.0, 1.0, 0.0));
    let w = 500.0;
    let q = boundary_quadric(&v1, &v2, &v3, w);
    assert_eq!(q.eval(&v1), 0.0);
    let kappa = boundary_curvature(&v1, &v2, &v3);
    let n1 = (v1 - v2).cross(&(v3 - v1));
    let d = v1 - v2;
    let x = v1 + n1.normalize();
    let expected = w * kappa * n1.norm_squared() + w * kappa * (d.dot(&n1) / n1.norm()).powi(2);
    assert!((q.eval(&x) - expected).abs() < 1e-9 * expected);
    let q2 = boundary_quadric(&v1, &v2, &v3, 2.0 * w);
    assert!((q2.eval(&x) - 2.0 * q.eval(&x)).abs() < 1e-9 * expected);
}

#[test]
fn normal_quadric_examples() {
    let q = normal_quadric(&Vec3::zeros(), &v(0.0, 0.0, 1.0), 0.01);
    assert!((q.eval(&v(0.0, 0.0, 1.0)) - 0.01).abs() < 1e-15);
    assert_eq!(q.eval(&v(5.0, -3.0, 0.0)), 0.0);
    assert!(normal_quadric(&Vec3::zeros(), &v(0.0, 0.0, 1.0), 0.0).is_zero());
    assert!(normal_quadric(&Vec3::zeros(), &Vec3::zeros(), 1.0).is_zero());
}

#[test]
fn base_quadric_inverse_area() {
    for (s, expected) in [(1.0, 4.0), (2.0, 1.0)] {
        let positions = vec![v(0.0, 0.0, 0.0), v(s, 0.0, 0.0), v(s, s, 0.0), v(0.0, s, 0.0)];
        let faces = vec![[0, 1, 2], [0, 2, 3]];
        let adj = Adjacency::build(4, &faces);
        let view = MeshView::new(&positions, &faces, &adj);
        let tol = Tolerances::from_diagonal(s * 2f64.sqrt(), 1e-8);
        let q = base_quadric(&view, 0, 1.0, &tol);
        let h = 0.3;
        assert!((q.eval(&v(0.0, 0.0, h)) - expected * h * h).abs() < 1e-12);
        let uniform = base_quadric(&view, 0, 0.0, &tol);
        assert!((uniform.eval(&v(0.0, 0.0, h)) - 2.0 * h * h).abs() < 1e-12);
    }
}

#[test]
fn gf_quadric_decomposes_at_boundary_corner() {
    let mesh = fixtures::grid(4, 1.0);
    let adj = Adjacency::build(mesh.vertex_count(), &mesh.faces);
    let view = MeshView::new(&mesh.positions, &mesh.faces, &adj);
    let tol = Tolerances::from_diagonal(mesh.diagonal(), 1e-8);
    let normals = mesh.resolved_normals();
    let w = WeightSet::DEFAULT;
    let corner = 0;
    let (a, b) = adj.boundary_chain(&mesh.faces, corner).expect("corner is on one chain");
    let gf = gf_quadric(&view, corner, &normals[corner], &w, &tol);
    let boundary = boundary_quadric(&mesh.positions[corner], &mesh.positions[a], &mesh.positions[b], w.w_boundary);
    assert!(!boundary.is_zero());
    let rest = base_quadric(&view, corner, w.w_plane_area, &tol) + normal_quadric(&mesh.positions[corner], &normals[corner], w.w_normal);
    let diff = gf.matrix() - (rest + boundary).matrix();
    assert!(diff.abs().max() <= 1e-12 * (1.0 + gf.matrix().abs().max()));
}

#[test]
fn area_quadric_swept_area() {
    let (vr, vs) = (v(0.0, 0.0, 0.0), v(1.0, 0.0, 0.0));
    let q = boundary_edge_area_quadric(&vr, &vs);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..100 {
        let t: f64 = rng.random_range(-3.0..3.0);
        assert!(q.eval(&(vr + (vs - vr) * t)).abs() <= 1e-12);
    }
    for h in [0.1, 1.0, 10.0] {
        assert!((q.eval(&v(0.5, h, 0.0)) - 0.5 * h * h).abs() <= 1e-9);
        assert!((q.eval(&v(0.5, 0.0, h)) - 0.5 * h * h).abs() <= 1e-9);
    }
    // Arbitrary edge position and orientation.
    for _ in 0..100 {
        let a = rand_vec(&mut rng, 5.0);
        let e = rand_vec(&mut rng, 1.0).normalize();
        let q = boundary_edge_area_quadric(&a, &(a + e));
        let t: f64 = rng.random_range(-2.0..2.0);
        let p = a + e * t;
        assert!(q.eval(&p).abs() <= 1e-12 * (1.0 + a.norm_squared()));
        let perp = e.cross(&rand_vec(&mut rng, 1.0)).normalize();
        let h = 0.7;
        assert!((q.eval(&(p + perp * h)) - 0.5 * h * h).abs() <= 1e-9 * (1.0 + a.norm_squared()));
    }
}

#[test]
fn cross_matrix_is_cross_product() {
    let e = v(1.0, -2.0, 3.0);
    let x = v(0.5, 4.0, -1.0);
    assert_eq!(cross_matrix(&e) * x, e.cross(&x));
    let m: Matrix3<f64> = cross_matrix(&e);
    assert_eq!(m.transpose(), -m);
}

#[test]
fn edge_cost_examples() {
    let mesh = fixtures::grid(4, 1.0);
    let adj = Adjacency::build(mesh.vertex_count(), &mesh.faces);
    let view = MeshView::new(&mesh.positions, &mesh.faces, &adj);
    let tol = Tolerances::from_diagonal(mesh.diagonal(), 1e-8);
    let normals = mesh.resolved_normals();
    let quadrics = |w: &WeightSet| -> Vec<Quadric> {
        (0..mesh.vertex_count()).map(|i| gf_quadric(&view, i, &normals[i], w, &tol)).collect()
    };
    let interior = (0..mesh.vertex_count())
        .flat_map(|a| adj.neighbors(a).iter().map(move |&b| Edge::new(a, b)))
        .find(|e| adj.boundary_neighbors(&mesh.faces, e.0).is_empty() && adj.boundary_neighbors(&mesh.faces, e.1).is_empty())
        .unwrap();
    let zero = quadrics(&WeightSet::ZERO);
    assert!(edge_cost(&view, interior, &zero, &WeightSet::ZERO, &[], &tol).total.abs() <= 1e-12);

    let d = WeightSet::DEFAULT;
    let full = quadrics(&d);
    // Vertex 1 sits mid-border; 6 is the interior vertex above it.
    assert_eq!(adj.boundary_neighbors(&mesh.faces, 1).len(), 2);
    assert!(adj.boundary_neighbors(&mesh.faces, 6).is_empty());
    let inward = Edge::new(1, 6);
    let p_in = mesh.positions[6];
    let area_in = area_quadric(&view, inward).eval(&p_in);
    assert!(area_in > 0.0);
    assert!(area_quadric(&view, interior).is_zero());
    let q_in = full[1] + full[6];
    let inward_cost = q_in.eval(&p_in) + d.w_area * area_in;
    let ci = edge_cost(&view, interior, &full, &d, &[], &tol);
    assert!(inward_cost > ci.total);
    let cb = edge_cost(&view, Edge::new(0, 1), &full, &d, &[], &tol);
    assert!(cb.total >= 0.0);

    let seam = vec![true; mesh.vertex_count()];
    let cs = edge_cost(&view, Edge::new(0, 1), &full, &d, &seam, &tol);
    assert!((cs.total - d.w_uv * cb.total).abs() <= 1e-12 * cs.total);
}

#[test]
fn degenerate_edge_is_infinite() {
    let positions = vec![v(0.0, 0.0, 0.0), v(1e-12, 0.0, 0.0), v(0.0, 1.0, 0.0) * (0.5f64).sqrt(), v(0.5f64.sqrt(), 0.0, 0.0)];
    let faces = vec![[0, 1, 2], [1, 3, 2]];
    let adj = Adjacency::build(4, &faces);
    let view = MeshView::new(&positions, &faces, &adj);
    let diag = decimate::mesh::bounding_box(&positions);
    let tol = Tolerances::from_diagonal((diag.1 - diag.0).norm(), 1e-8);
    let qs = vec![Quadric::ZERO; 4];
    assert_eq!(edge_cost(&view, Edge::new(0, 1), &qs, &WeightSet::ZERO, &[], &tol).total, f64::INFINITY);
}
