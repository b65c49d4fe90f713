//! Mesh file input and output: OBJ (+MTL/PNG) and PLY.

mod obj;
mod ply;
mod weld;

use std::path::Path;

use log::info;

use crate::error::{Error, Result};
use crate::mesh::Mesh;

pub use weld::{weld_map, weld_vertices, WeldStats};

/// Default absolute welding distance in model units.
pub const DEFAULT_WELD_TOLERANCE: f64 = 1e-6;

/// Counts gathered while loading.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct LoadReport {
    pub raw_vertices: usize,
    pub merged_vertices: usize,
    /// Faces dropped because they repeated a vertex, either in the file or after welding.
    pub dropped_faces: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Obj,
    Ply,
}

fn format_of(path: &Path) -> Result<Format> {
    match path.extension().and_then(|e| e.to_str()).map(str::to_ascii_lowercase).as_deref() {
        Some("obj") => Ok(Format::Obj),
        Some("ply") => Ok(Format::Ply),
        _ => Err(Error::UnsupportedFormat(path.to_path_buf())),
    }
}

/// Loads an OBJ or PLY file and welds vertices closer than `weld_tolerance`.
pub fn load_mesh(path: impl AsRef<Path>, weld_tolerance: f64) -> Result<Mesh> {
    load_mesh_with_report(path, weld_tolerance).map(|(m, _)| m)
}

/// Like [`load_mesh`], also returning what welding and cleanup changed.
pub fn load_mesh_with_report(path: impl AsRef<Path>, weld_tolerance: f64) -> Result<(Mesh, LoadReport)> {
    let path = path.as_ref();
    if !(weld_tolerance >= 0.0) {
        return Err(Error::InvalidArgument(format!("weld tolerance {weld_tolerance}")));
    }
    let (raw, dropped) = match format_of(path)? {
        Format::Obj => {
            let c = obj::read_obj(path)?;
            (c.mesh, c.dropped_faces)
        }
        Format::Ply => {
            let c = ply::read_ply(path)?;
            (c.mesh, c.dropped_faces)
        }
    };
    let raw_vertices = raw.vertex_count();
    let (mesh, stats) = weld_vertices(&raw, weld_tolerance);
    mesh.validate()?;
    let report = LoadReport {
        raw_vertices,
        merged_vertices: stats.merged_vertices,
        dropped_faces: dropped + stats.dropped_faces,
    };
    if report.dropped_faces > 0 || report.merged_vertices > 0 {
        info!(
            "{}: welded {} vertices, dropped {} degenerate faces",
            path.display(),
            report.merged_vertices,
            report.dropped_faces
        );
    }
    Ok((mesh, report))
}

/// Writes `mesh` in the format implied by the extension of `path`.
///
/// OBJ output includes `vt` records only when the mesh has corner UVs, and
/// an MTL plus PNG atlas next to the OBJ when it also has a texture. PLY
/// output carries vertex colors when present.
pub fn save_mesh(mesh: &Mesh, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    mesh.validate()?;
    match format_of(path)? {
        Format::Obj => obj::write_obj(mesh, path),
        Format::Ply => ply::write_ply(mesh, path),
    }
}
