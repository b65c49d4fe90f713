//! Appearance transfer from the original mesh to its simplification.
//!
//! Points are sampled on the simplified surface, each anchored to a
//! vertex. Walking the collapse history backwards, every un-collapse hands
//! the anchored samples of the merged vertex to whichever parent was
//! closer. Once the history is exhausted each sample is localized on the
//! original faces around its anchor, walking to adjacent faces while that
//! brings it closer, and takes the color found there.

use std::collections::HashMap;
use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::history::CollapseHistory;
use crate::mesh::{closest_point_on_triangle, Mesh, Vec3};
use crate::spatial::KdTree;
use crate::texture::{to_rgba8, TextureImage};
use crate::topology::Adjacency;

/// Default number of surface samples per atlas texel.
pub const DEFAULT_SAMPLES_PER_TEXEL: usize = 4;
/// Empty texels kept between charts and around the atlas border.
pub const GUTTER: u32 = 2;
/// Largest atlas side tried before giving up.
pub const MAX_ATLAS_RESOLUTION: u32 = 4096;
pub const MIN_ATLAS_RESOLUTION: u32 = 16;

/// A point on the simplified surface.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfaceSample {
    pub face: usize,
    pub bary: [f64; 3],
    pub position: Vec3,
    /// Vertex in input-mesh numbering.
    pub anchor: usize,
}

/// Where a sample landed on the original mesh.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MappedPoint {
    /// `None` only if the anchor has no incident faces.
    pub face: Option<usize>,
    pub bary: [f64; 3],
    pub position: Vec3,
    pub color: Option<[f64; 3]>,
}

/// Samples paired with their images on the original.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Correspondence {
    pub samples: Vec<SurfaceSample>,
    pub mapped: Vec<MappedPoint>,
}

impl Correspondence {
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }
}

/// Splits `total` across `weights` proportionally, handing leftovers to the
/// largest remainders (lower index first on ties).
pub fn allocate_proportional(weights: &[f64], total: usize) -> Vec<usize> {
    let sum: f64 = weights.iter().sum();
    if !(sum > 0.0) {
        return vec![0; weights.len()];
    }
    let quotas: Vec<f64> = weights.iter().map(|w| w / sum * total as f64).collect();
    let mut counts: Vec<usize> = quotas.iter().map(|q| q.floor() as usize).collect();
    let assigned: usize = counts.iter().sum();
    let mut order: Vec<usize> = (0..weights.len()).filter(|&i| weights[i] > 0.0).collect();
    order.sort_by(|&a, &b| (quotas[b] - quotas[b].floor()).total_cmp(&(quotas[a] - quotas[a].floor())).then(a.cmp(&b)));
    for &i in order.iter().take(total.saturating_sub(assigned)) {
        counts[i] += 1;
    }
    counts
}

/// `k` barycentric points spread over a triangle: centroids of a regular
/// `m x m` subdivision, `m = ceil(sqrt(k))`, picked at an even stride.
pub fn stratified_barycentrics(k: usize) -> Vec<[f64; 3]> {
    if k == 0 {
        return Vec::new();
    }
    let m = (k as f64).sqrt().ceil() as usize;
    let mf = 3.0 * m as f64;
    let mut cells = Vec::with_capacity(m * m);
    for i in 0..m {
        for j in 0..m - i {
            cells.push([(3 * i + 1) as f64 / mf, (3 * j + 1) as f64 / mf]);
            if i + j + 2 <= m {
                cells.push([(3 * i + 2) as f64 / mf, (3 * j + 2) as f64 / mf]);
            }
        }
    }
    (0..k)
        .map(|s| {
            let [b1, b2] = cells[s * cells.len() / k];
            [1.0 - b1 - b2, b1, b2]
        })
        .collect()
}

/// About `budget` stratified samples over `mesh`, allocated by face area.
///
/// `vertex_origin` maps `mesh` vertices to input-mesh numbering; each
/// sample is anchored at its nearest face corner.
pub fn sample_simplified_surface(mesh: &Mesh, vertex_origin: &[usize], budget: usize) -> Vec<SurfaceSample> {
    let areas: Vec<f64> = (0..mesh.face_count()).map(|f| mesh.face_area(f)).collect();
    let counts = allocate_proportional(&areas, budget);
    let mut out = Vec::with_capacity(budget);
    for (f, &k) in counts.iter().enumerate() {
        let corners = mesh.corners(f);
        for bary in stratified_barycentrics(k) {
            let position = mesh.point_at(f, bary);
            let mut nearest = 0;
            for c in 1..3 {
                if (corners[c] - position).norm_squared() < (corners[nearest] - position).norm_squared() {
                    nearest = c;
                }
            }
            out.push(SurfaceSample { face: f, bary, position, anchor: vertex_origin[mesh.faces[f][nearest]] });
        }
    }
    out
}

/// Per-sample anchors in input numbering, plus the number of un-collapse
/// stages walked.
#[derive(Debug, Clone, PartialEq)]
pub struct Reversal {
    pub anchors: Vec<usize>,
    pub stages: usize,
}

/// Anchors after reversing `history`, without the final localization.
pub fn reverse_anchors(vertex_count: usize, history: &CollapseHistory, samples: &[SurfaceSample]) -> Result<Vec<usize>> {
    reverse_history(vertex_count, history, samples).map(|r| r.anchors)
}

/// Walks `history` from the last collapse to the first, splitting each
/// kept vertex's samples by the closer-parent rule.
pub fn reverse_history(vertex_count: usize, history: &CollapseHistory, samples: &[SurfaceSample]) -> Result<Reversal> {
    let mut alive = vec![true; vertex_count];
    for (i, r) in history.records.iter().enumerate() {
        if r.kept >= vertex_count || r.removed >= vertex_count {
            return Err(Error::HistoryMismatch(format!("record {i} names a vertex beyond {vertex_count}")));
        }
        if !alive[r.kept] || !alive[r.removed] {
            return Err(Error::HistoryMismatch(format!("record {i} collapses a dead vertex")));
        }
        alive[r.removed] = false;
    }
    let mut by_anchor: HashMap<usize, Vec<usize>> = HashMap::new();
    for (s, sample) in samples.iter().enumerate() {
        if sample.anchor >= vertex_count || !alive[sample.anchor] {
            return Err(Error::HistoryMismatch(format!("sample {s} anchored at dead vertex {}", sample.anchor)));
        }
        by_anchor.entry(sample.anchor).or_default().push(s);
    }
    let mut stages = 0;
    for r in history.records.iter().rev() {
        stages += 1;
        let Some(group) = by_anchor.remove(&r.kept) else { continue };
        let (mut stay, mut go) = (Vec::new(), Vec::new());
        for s in group {
            let p = samples[s].position;
            if (p - r.removed_old_position).norm_squared() < (p - r.kept_old_position).norm_squared() {
                go.push(s);
            } else {
                stay.push(s);
            }
        }
        if !stay.is_empty() {
            by_anchor.insert(r.kept, stay);
        }
        if !go.is_empty() {
            by_anchor.insert(r.removed, go);
        }
    }
    let mut anchors = vec![0; samples.len()];
    for (v, group) in by_anchor {
        for s in group {
            anchors[s] = v;
        }
    }
    Ok(Reversal { anchors, stages })
}

/// Builds the simplified → original correspondence for `samples`.
///
/// Colors are attached when `original` has appearance data.
pub fn successive_map(original: &Mesh, history: &CollapseHistory, samples: &[SurfaceSample]) -> Result<Correspondence> {
    let anchors = reverse_anchors(original.vertex_count(), history, samples)?;
    let adjacency = Adjacency::build(original.vertex_count(), &original.faces);
    let mapped = samples
        .par_iter()
        .zip(&anchors)
        .map(|(s, &anchor)| localize(original, &adjacency, anchor, &s.position))
        .collect();
    Ok(Correspondence { samples: samples.to_vec(), mapped })
}

fn localize(original: &Mesh, adjacency: &Adjacency, anchor: usize, p: &Vec3) -> MappedPoint {
    let closest = |f: usize| {
        let [a, b, c] = original.corners(f);
        let bary = closest_point_on_triangle(p, &a, &b, &c);
        let q = a * bary[0] + b * bary[1] + c * bary[2];
        ((q - p).norm_squared(), f, bary, q)
    };
    let mut best: Option<(f64, usize, [f64; 3], Vec3)> = None;
    for &f in adjacency.faces_of(anchor) {
        let cand = closest(f);
        if best.is_none_or(|(bd, ..)| cand.0 < bd) {
            best = Some(cand);
        }
    }
    // Walk to neighbouring faces while the distance keeps shrinking.
    if let Some(mut current) = best {
        for _ in 0..original.face_count() {
            let mut next = current;
            for v in original.faces[current.1] {
                for &f in adjacency.faces_of(v) {
                    let cand = closest(f);
                    if cand.0 < next.0 {
                        next = cand;
                    }
                }
            }
            if next.1 == current.1 {
                break;
            }
            current = next;
        }
        best = Some(current);
    }
    match best {
        Some((_, f, bary, position)) => {
            MappedPoint { face: Some(f), bary, position, color: original.color_at(f, bary) }
        }
        None => MappedPoint {
            face: None,
            bary: [1.0, 0.0, 0.0],
            position: original.positions[anchor],
            color: original.vertex_colors.as_ref().map(|c| c[anchor]),
        },
    }
}

fn require_colors(original: &Mesh, corr: &Correspondence) -> Result<Vec<[f64; 3]>> {
    if !original.has_appearance() {
        return Err(Error::NoAppearance);
    }
    if corr.is_empty() {
        return Err(Error::EmptyCorrespondence);
    }
    corr.mapped.iter().map(|m| m.color.ok_or(Error::MissingColors)).collect()
}

/// A right-triangle chart occupying the lower-left half of a `size` square at `(x, y)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Chart {
    pub x: u32,
    pub y: u32,
    pub size: u32,
}

impl Chart {
    /// Texels `(i, j)` of the square with `i + j < size` belong to the chart.
    pub fn texels(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        (0..self.size).flat_map(move |j| (0..self.size - j).map(move |i| (i, j)))
    }

    pub fn texel_count(&self) -> usize {
        let s = self.size as usize;
        s * (s + 1) / 2
    }

    /// Corner UVs for face corners 0, 1, 2 in an atlas of side `res`.
    pub fn uvs(&self, res: u32) -> [[f64; 2]; 3] {
        let r = res as f64;
        let (x, y, s) = (self.x as f64, self.y as f64, self.size as f64);
        let uv = |px: f64, py: f64| [px / r, 1.0 - py / r];
        [uv(x, y), uv(x + s, y), uv(x, y + s)]
    }
}

/// Chart placement for every face of a mesh.
#[derive(Debug, Clone, PartialEq)]
pub struct AtlasLayout {
    pub resolution: u32,
    pub charts: Vec<Chart>,
}

impl AtlasLayout {
    pub fn texel_count(&self) -> usize {
        self.charts.iter().map(Chart::texel_count).sum()
    }
}

fn shelf_pack(sizes: &[u32], res: u32) -> Option<Vec<Chart>> {
    let mut order: Vec<usize> = (0..sizes.len()).collect();
    order.sort_by(|&a, &b| sizes[b].cmp(&sizes[a]).then(a.cmp(&b)));
    let mut charts = vec![Chart { x: 0, y: 0, size: 0 }; sizes.len()];
    let (mut x, mut y, mut shelf) = (GUTTER, GUTTER, 0);
    for i in order {
        let s = sizes[i];
        if x + s + GUTTER > res {
            x = GUTTER;
            y += shelf + GUTTER;
            shelf = 0;
        }
        if x + s + GUTTER > res || y + s + GUTTER > res {
            return None;
        }
        charts[i] = Chart { x, y, size: s };
        x += s + GUTTER;
        shelf = shelf.max(s);
    }
    Some(charts)
}

/// Lays out one chart per face with side proportional to the square root
/// of its area share, doubling `resolution` up to 4096 until everything fits.
pub fn plan_atlas(mesh: &Mesh, resolution: u32) -> Result<AtlasLayout> {
    if resolution < MIN_ATLAS_RESOLUTION {
        return Err(Error::InvalidArgument(format!("atlas resolution {resolution} below {MIN_ATLAS_RESOLUTION}")));
    }
    let n = mesh.face_count();
    let areas: Vec<f64> = (0..n).map(|f| mesh.face_area(f)).collect();
    let total: f64 = areas.iter().sum();
    let share = |a: f64| if total > 0.0 { (a / total).sqrt() } else { (1.0 / n.max(1) as f64).sqrt() };
    let mut res = resolution;
    loop {
        let mut scale = res as f64;
        while scale >= 1.0 {
            let sizes: Vec<u32> = areas.iter().map(|&a| ((share(a) * scale) as u32).max(1)).collect();
            if let Some(charts) = shelf_pack(&sizes, res) {
                return Ok(AtlasLayout { resolution: res, charts });
            }
            if sizes.iter().all(|&s| s == 1) {
                break;
            }
            scale *= 0.9;
        }
        if res >= MAX_ATLAS_RESOLUTION {
            return Err(Error::AtlasCapacity { faces: n, max: MAX_ATLAS_RESOLUTION });
        }
        res = (res * 2).min(MAX_ATLAS_RESOLUTION);
    }
}

/// A baked texture plus the UVs that address it.
#[derive(Debug, Clone, PartialEq)]
pub struct BakedAtlas {
    pub texture: TextureImage,
    pub layout: AtlasLayout,
    pub corner_uvs: Vec<[[f64; 2]; 3]>,
}

impl BakedAtlas {
    /// `mesh` with these UVs and texture attached.
    pub fn apply(&self, mesh: &Mesh) -> Mesh {
        let mut out = mesh.clone();
        out.corner_uvs = Some(self.corner_uvs.clone());
        out.texture = Some(Arc::new(self.texture.clone()));
        out.vertex_colors = None;
        out
    }
}

fn sample_index(corr: &Correspondence) -> (KdTree<3>, Vec<(KdTree<3>, Vec<usize>)>, usize) {
    let faces = corr.samples.iter().map(|s| s.face).max().map_or(0, |m| m + 1);
    let mut per_face: Vec<Vec<usize>> = vec![Vec::new(); faces];
    for (i, s) in corr.samples.iter().enumerate() {
        per_face[s.face].push(i);
    }
    let point = |i: &usize| {
        let p = corr.samples[*i].position;
        [p.x, p.y, p.z]
    };
    let global: Vec<[f64; 3]> = (0..corr.len()).map(|i| point(&i)).collect();
    let trees = per_face
        .into_par_iter()
        .map(|ids| (KdTree::new(&ids.iter().map(point).collect::<Vec<_>>()), ids))
        .collect();
    (KdTree::new(&global), trees, faces)
}

/// Bakes `corr` into a new atlas for `simplified`, starting at `resolution`.
///
/// Each chart texel is colored by the nearest sample on the same face
/// (falling back to the nearest sample anywhere); gutters are filled by
/// dilating chart edges.
pub fn bake_atlas(simplified: &Mesh, original: &Mesh, corr: &Correspondence, resolution: u32) -> Result<BakedAtlas> {
    let colors = require_colors(original, corr)?;
    let layout = plan_atlas(simplified, resolution)?;
    let res = layout.resolution;
    let (global, per_face, sampled_faces) = sample_index(corr);

    let texels: Vec<Vec<(u32, u32, [u8; 4])>> = layout
        .charts
        .par_iter()
        .enumerate()
        .map(|(f, chart)| {
            let s = chart.size as f64;
            chart
                .texels()
                .map(|(i, j)| {
                    let (mut b1, mut b2) = ((i as f64 + 0.5) / s, (j as f64 + 0.5) / s);
                    if b1 + b2 > 1.0 {
                        let k = b1 + b2;
                        b1 /= k;
                        b2 /= k;
                    }
                    let p = simplified.point_at(f, [1.0 - b1 - b2, b1, b2]);
                    let q = [p.x, p.y, p.z];
                    let hit = match per_face.get(f) {
                        Some((tree, ids)) if f < sampled_faces && !ids.is_empty() => ids[tree.nearest(&q).unwrap().0],
                        _ => global.nearest(&q).unwrap().0,
                    };
                    (chart.x + i, chart.y + j, to_rgba8(colors[hit]))
                })
                .collect()
        })
        .collect();

    let mut filled = vec![false; (res * res) as usize];
    let mut image = TextureImage::filled(res, res, [0, 0, 0, 255]);
    for (x, y, c) in texels.into_iter().flatten() {
        image.set_pixel(x, y, c);
        filled[(y * res + x) as usize] = true;
    }
    dilate(&mut image, &mut filled, GUTTER + 1);
    let corner_uvs = layout.charts.iter().map(|c| c.uvs(res)).collect();
    Ok(BakedAtlas { texture: image, layout, corner_uvs })
}

/// Grows filled regions outward by `passes` texels, averaging filled neighbours.
fn dilate(image: &mut TextureImage, filled: &mut [bool], passes: u32) {
    let (w, h) = (image.width() as i64, image.height() as i64);
    for _ in 0..passes {
        let mut updates = Vec::new();
        for y in 0..h {
            for x in 0..w {
                if filled[(y * w + x) as usize] {
                    continue;
                }
                let mut acc = [0u32; 4];
                let mut n = 0;
                for (dx, dy) in [(-1, 0), (1, 0), (0, -1), (0, 1)] {
                    let (nx, ny) = (x + dx, y + dy);
                    if nx >= 0 && ny >= 0 && nx < w && ny < h && filled[(ny * w + nx) as usize] {
                        let p = image.pixel(nx as u32, ny as u32);
                        for c in 0..4 {
                            acc[c] += p[c] as u32;
                        }
                        n += 1;
                    }
                }
                if n > 0 {
                    updates.push((x, y, acc.map(|a| ((a + n / 2) / n) as u8)));
                }
            }
        }
        if updates.is_empty() {
            break;
        }
        for (x, y, c) in updates {
            image.set_pixel(x as u32, y as u32, c);
            filled[(y * w + x) as usize] = true;
        }
    }
}

/// `simplified` with each vertex colored by the sample nearest to it.
pub fn bake_vertex_colors(simplified: &Mesh, original: &Mesh, corr: &Correspondence) -> Result<Mesh> {
    let colors = require_colors(original, corr)?;
    let (global, _, _) = sample_index(corr);
    let vertex_colors = simplified
        .positions
        .par_iter()
        .map(|p| colors[global.nearest(&[p.x, p.y, p.z]).unwrap().0])
        .collect();
    let mut out = simplified.clone();
    out.vertex_colors = Some(vertex_colors);
    out.corner_uvs = None;
    out.texture = None;
    Ok(out)
}

/// How [`transfer_appearance`] encodes the result.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BakeMode {
    Atlas { resolution: u32 },
    VertexColors,
}

/// Runs sampling, successive mapping, and baking in one call.
///
/// The sample budget is `samples_per_texel` times the atlas texel count for
/// atlas output, and `samples_per_texel` times the face count for vertex colors.
pub fn transfer_appearance(
    original: &Mesh,
    simplified: &Mesh,
    vertex_origin: &[usize],
    history: &CollapseHistory,
    mode: BakeMode,
    samples_per_texel: usize,
) -> Result<Mesh> {
    if !original.has_appearance() {
        return Err(Error::NoAppearance);
    }
    match mode {
        BakeMode::Atlas { resolution } => {
            let layout = plan_atlas(simplified, resolution)?;
            let samples = sample_simplified_surface(simplified, vertex_origin, samples_per_texel * layout.texel_count());
            let corr = successive_map(original, history, &samples)?;
            Ok(bake_atlas(simplified, original, &corr, layout.resolution)?.apply(simplified))
        }
        BakeMode::VertexColors => {
            let budget = samples_per_texel * simplified.face_count().max(simplified.vertex_count()) * 4;
            let samples = sample_simplified_surface(simplified, vertex_origin, budget);
            let corr = successive_map(original, history, &samples)?;
            bake_vertex_colors(simplified, original, &corr)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn proportional_split() {
        assert_eq!(allocate_proportional(&[1.0, 3.0], 40), vec![10, 30]);
        assert_eq!(allocate_proportional(&[0.0, 1.0], 5), vec![0, 5]);
        assert_eq!(allocate_proportional(&[1.0, 1.0, 1.0], 4), vec![2, 1, 1]);
    }

    #[test]
    fn single_sample_is_centroid() {
        let b = stratified_barycentrics(1);
        assert_eq!(b.len(), 1);
        for x in b[0] {
            assert!((x - 1.0 / 3.0).abs() < 1e-15);
        }
    }

    #[test]
    fn stratified_points_are_distinct_and_valid() {
        for k in [2, 5, 9, 17, 100] {
            let b = stratified_barycentrics(k);
            assert_eq!(b.len(), k);
            for p in &b {
                assert!(p.iter().all(|&x| x > 0.0) && (p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            }
            for i in 0..k {
                for j in i + 1..k {
                    assert_ne!(b[i], b[j]);
                }
            }
        }
    }

    #[test]
    fn charts_do_not_overlap() {
        let mesh = crate::fixtures::icosphere(2);
        let layout = plan_atlas(&mesh, 256).unwrap();
        let res = layout.resolution;
        let mut owner = vec![usize::MAX; (res * res) as usize];
        for (f, c) in layout.charts.iter().enumerate() {
            assert!(c.x >= GUTTER && c.y >= GUTTER && c.x + c.size + GUTTER <= res && c.y + c.size + GUTTER <= res);
            for y in c.y.saturating_sub(GUTTER)..(c.y + c.size + GUTTER).min(res) {
                for x in c.x.saturating_sub(GUTTER)..(c.x + c.size + GUTTER).min(res) {
                    let inside = x >= c.x && y >= c.y && x < c.x + c.size && y < c.y + c.size;
                    let cell = &mut owner[(y * res + x) as usize];
                    if inside {
                        assert_eq!(*cell, usize::MAX, "chart {f} overlaps");
                        *cell = f;
                    }
                }
            }
        }
    }

    #[test]
    fn small_atlas_grows() {
        let mesh = crate::fixtures::grid(10, 1.0);
        assert_eq!(mesh.face_count(), 200);
        let layout = plan_atlas(&mesh, 16).unwrap();
        assert!(layout.resolution > 16);
    }
}
