use decimate::metrics::{
    chamfer_mean_squared, directed_terms, geometric_distances, hausdorff_symmetric, sample_surface, texture_chamfer,
    PointCloudSample,
};
use decimate::{fixtures, simplify, Error, Mesh, SimplifyConfig, Target, Vec3};
use proptest::prelude::*;

fn translated(m: &Mesh, t: Vec3) -> Mesh {
    let mut out = m.clone();
    for p in &mut out.positions {
        *p += t;
    }
    out
}

/// Nearest squared distances by exhaustive scan.
fn brute_directed(a: &[Vec3], b: &[Vec3]) -> Vec<f64> {
    a.iter().map(|p| b.iter().map(|q| (p - q).norm_squared()).fold(f64::INFINITY, f64::min)).collect()
}

#[test]
fn single_sample_lies_in_triangle() {
    let m = Mesh::new(vec![Vec3::zeros(), Vec3::new(2.0, 0.0, 0.0), Vec3::new(0.0, 1.0, 0.0)], vec![[0, 1, 2]]);
    for seed in 0..50 {
        let s = sample_surface(&m, 1, seed).unwrap();
        let p = s.points[0];
        assert!(p.x >= 0.0 && p.y >= 0.0 && p.x / 2.0 + p.y <= 1.0 + 1e-12 && p.z == 0.0);
    }
}

#[test]
fn samples_follow_area() {
    // Two faces with areas 1 and 9.
    let m = Mesh::new(
        vec![
            Vec3::zeros(),
            Vec3::new(2.0, 0.0, 0.0),
            Vec3::new(0.0, 1.0, 0.0),
            Vec3::new(10.0, 0.0, 0.0),
            Vec3::new(16.0, 0.0, 0.0),
            Vec3::new(10.0, 3.0, 0.0),
        ],
        vec![[0, 1, 2], [3, 4, 5]],
    );
    assert!((m.face_area(1) / m.face_area(0) - 9.0).abs() < 1e-12);
    let s = sample_surface(&m, 10_000, 0).unwrap();
    let share = s.faces.iter().filter(|&&f| f == 1).count() as f64 / 10_000.0;
    assert!((share - 0.9).abs() <= 0.02, "{share}");
}

#[test]
fn sampling_is_bitwise_deterministic() {
    let m = fixtures::gradient_plane(4, 32);
    let a = sample_surface(&m, 5000, 7).unwrap();
    let b = sample_surface(&m, 5000, 7).unwrap();
    assert_eq!(a, b);
    assert!(a.colors.is_some());
    let c = sample_surface(&m, 5000, 8).unwrap();
    assert_ne!(a.points, c.points);
}

#[test]
fn degenerate_inputs_are_rejected() {
    let flat = Mesh::new(vec![Vec3::zeros(), Vec3::x(), Vec3::x() * 2.0], vec![[0, 1, 2]]);
    assert!(matches!(sample_surface(&flat, 10, 0), Err(Error::DegenerateMesh)));
    assert!(sample_surface(&fixtures::cube(), 0, 0).is_err());
}

#[test]
fn point_pairs() {
    let a = PointCloudSample::from_points(vec![Vec3::zeros()]);
    let b = PointCloudSample::from_points(vec![Vec3::new(0.0, 3.0, 0.0)]);
    assert_eq!(hausdorff_symmetric(&a, &b).raw, 3.0);
    assert_eq!(chamfer_mean_squared(&a, &b).raw, 9.0);
    assert_eq!(hausdorff_symmetric(&a, &a).raw, 0.0);
    assert_eq!(chamfer_mean_squared(&a, &a).raw, 0.0);
}

#[test]
fn translated_cube_hausdorff() {
    let cube = fixtures::cube();
    let moved = translated(&cube, Vec3::new(0.1, 0.0, 0.0));
    let a = sample_surface(&cube, 100_000, 0).unwrap();
    let b = sample_surface(&moved, 100_000, 1).unwrap();
    let h = hausdorff_symmetric(&a, &b);
    assert!((h.raw - 0.1).abs() <= 0.005, "{}", h.raw);
    assert!((h.normalized - h.raw / cube.diagonal()).abs() < 1e-15);
}

#[test]
fn parallel_planes_chamfer() {
    let a = fixtures::grid(4, 1.0);
    let b = translated(&a, Vec3::new(0.0, 0.0, 0.1));
    let sa = sample_surface(&a, 100_000, 0).unwrap();
    let sb = sample_surface(&b, 100_000, 1).unwrap();
    let c = chamfer_mean_squared(&sa, &sb).raw;
    assert!((c - 0.01).abs() <= 0.001, "{c}");
}

#[test]
fn tree_queries_match_brute_force() {
    let m = fixtures::noisy_sphere(2);
    let out = simplify(&m, &SimplifyConfig::default().with_target(Target::Faces(40)));
    let a = sample_surface(&m, 1500, 3).unwrap();
    let b = sample_surface(&out.mesh, 1200, 4).unwrap();
    let (ab, ba) = directed_terms(&a, &b);
    assert_eq!(ab, brute_directed(&a.points, &b.points));
    assert_eq!(ba, brute_directed(&b.points, &a.points));
    let h = ab.iter().chain(&ba).copied().fold(0.0, f64::max).sqrt();
    let c = 0.5 * (ab.iter().sum::<f64>() / ab.len() as f64 + ba.iter().sum::<f64>() / ba.len() as f64);
    let (gh, gc) = geometric_distances(&a, &b);
    assert_eq!(gh.raw, h);
    assert_eq!(gc.raw, c);
    assert_eq!(hausdorff_symmetric(&a, &b), gh);
    assert_eq!(chamfer_mean_squared(&a, &b), gc);
}

#[test]
fn color_shift_adds_three_delta_squared() {
    let m = fixtures::gradient_plane(4, 32);
    let a = sample_surface(&m, 3000, 0).unwrap();
    for (delta, lambda) in [(0.1, 1.0), (0.05, 2.0)] {
        let shifted = a.colors.as_ref().unwrap().iter().map(|c| c.map(|x| x + delta)).collect();
        let b = a.clone().with_colors(shifted);
        let t = texture_chamfer(&a, &b, lambda).unwrap();
        assert!((t - 3.0 * lambda * lambda * delta * delta).abs() <= 1e-12, "{t}");
    }
    assert_eq!(texture_chamfer(&a, &a, 1.0).unwrap(), 0.0);
}

#[test]
fn zero_lambda_is_geometric_chamfer() {
    let a = sample_surface(&fixtures::gradient_plane(4, 32), 4000, 0).unwrap();
    let mut m = fixtures::terrain(6);
    m.vertex_colors = Some(vec![[0.3, 0.2, 0.1]; m.vertex_count()]);
    let b = sample_surface(&m, 4000, 1).unwrap();
    let t = texture_chamfer(&a, &b, 0.0).unwrap();
    let c = chamfer_mean_squared(&a, &b).normalized;
    assert!((t - c).abs() <= 1e-12 * c, "{t} vs {c}");
}

#[test]
fn missing_colors_rejected() {
    let a = sample_surface(&fixtures::cube(), 100, 0).unwrap();
    assert!(a.colors.is_none());
    assert!(matches!(texture_chamfer(&a, &a, 1.0), Err(Error::MissingColors)));
}

#[test]
fn doubling_samples_is_stable() {
    for m in [fixtures::icosphere(3), fixtures::terrain(16), fixtures::noisy_torus(32, 12)] {
        let out = simplify(&m, &SimplifyConfig::default().with_target(Target::Ratio(0.1)));
        let h = |n: usize| {
            let a = sample_surface(&m, n, 0).unwrap();
            let b = sample_surface(&out.mesh, n, 0).unwrap();
            hausdorff_symmetric(&a, &b).raw
        };
        let (h1, h2) = (h(100_000), h(200_000));
        assert!((h1 - h2).abs() < 0.05 * h2, "{h1} vs {h2}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn distances_are_symmetric_and_bounded(
        pa in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0, -1.0f64..1.0), 1..60),
        pb in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0, -1.0f64..1.0), 1..60),
    ) {
        let a = PointCloudSample::from_points(pa.iter().map(|&(x, y, z)| Vec3::new(x, y, z)).collect());
        let b = PointCloudSample::from_points(pb.iter().map(|&(x, y, z)| Vec3::new(x, y, z)).collect());
        let (hab, hba) = (hausdorff_symmetric(&a, &b).raw, hausdorff_symmetric(&b, &a).raw);
        let (cab, cba) = (chamfer_mean_squared(&a, &b).raw, chamfer_mean_squared(&b, &a).raw);
        prop_assert_eq!(hab, hba);
        prop_assert!((cab - cba).abs() <= 1e-15 * (1.0 + cab));
        let (ab, ba) = directed_terms(&a, &b);
        let h2 = hab * hab;
        prop_assert!(h2 >= ab.iter().sum::<f64>() / ab.len() as f64 - 1e-15);
        prop_assert!(h2 >= ba.iter().sum::<f64>() / ba.len() as f64 - 1e-15);
    }
}
