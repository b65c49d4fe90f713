//! Wavefront OBJ / MTL reading and writing.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use log::warn;

use crate::error::{Error, Result};
use crate::mesh::{Mesh, Vec3};
use crate::texture::TextureImage;

#[derive(Clone, Copy)]
struct Corner {
    v: usize,
    vt: Option<usize>,
    vn: Option<usize>,
}

/// Resolves a 1-based (or negative, relative) OBJ index against `count` entries.
fn resolve(token: &str, count: usize, path: &Path, line: usize, what: &str) -> Result<usize> {
    let raw: i64 = token
        .parse()
        .map_err(|_| Error::parse(path, line, format!("bad {what} index '{token}'")))?;
    let idx = if raw > 0 {
        raw - 1
    } else if raw < 0 {
        count as i64 + raw
    } else {
        -1
    };
    if idx < 0 || idx as usize >= count {
        return Err(Error::parse(path, line, format!("{what} index {raw} out of range (have {count})")));
    }
    Ok(idx as usize)
}

fn parse_floats<const N: usize>(parts: &[&str], path: &Path, line: usize) -> Result<[f64; N]> {
    if parts.len() < N {
        return Err(Error::parse(path, line, format!("expected {N} numbers")));
    }
    let mut out = [0.0; N];
    for (o, t) in out.iter_mut().zip(parts) {
        *o = t.parse().map_err(|_| Error::parse(path, line, format!("bad number '{t}'")))?;
    }
    Ok(out)
}

/// Parsed OBJ contents before welding. Faces with a repeated index are
/// dropped here and counted.
pub(crate) struct ObjContents {
    pub mesh: Mesh,
    pub dropped_faces: usize,
}

pub(crate) fn read_obj(path: &Path) -> Result<ObjContents> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_obj(&text, path)
}

pub(crate) fn parse_obj(text: &str, path: &Path) -> Result<ObjContents> {
    let mut positions = Vec::new();
    let mut colors: Vec<[f64; 3]> = Vec::new();
    let mut texcoords: Vec<[f64; 2]> = Vec::new();
    let mut normals: Vec<Vec3> = Vec::new();
    let mut faces: Vec<[Corner; 3]> = Vec::new();
    let mut mtllib: Option<String> = None;
    let mut material: Option<String> = None;
    let mut dropped = 0;

    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let mut parts = content.split_whitespace();
        let Some(tag) = parts.next() else { continue };
        let rest: Vec<&str> = parts.collect();
        match tag {
            "v" => {
                let [x, y, z] = parse_floats::<3>(&rest, path, line)?;
                positions.push(Vec3::new(x, y, z));
                if rest.len() >= 6 {
                    let [r, g, b] = parse_floats::<3>(&rest[3..], path, line)?;
                    colors.push([r, g, b]);
                }
            }
            "vt" => {
                let [u, v] = parse_floats::<2>(&rest, path, line)?;
                texcoords.push([u, v]);
            }
            "vn" => {
                let [x, y, z] = parse_floats::<3>(&rest, path, line)?;
                normals.push(Vec3::new(x, y, z));
            }
            "f" => {
                if rest.len() < 3 {
                    return Err(Error::parse(path, line, "face needs at least 3 corners"));
                }
                let mut poly = Vec::with_capacity(rest.len());
                for tok in &rest {
                    let mut fields = tok.split('/');
                    let v = resolve(fields.next().unwrap_or(""), positions.len(), path, line, "vertex")?;
                    let vt = match fields.next() {
                        Some(s) if !s.is_empty() => Some(resolve(s, texcoords.len(), path, line, "texcoord")?),
                        _ => None,
                    };
                    let vn = match fields.next() {
                        Some(s) if !s.is_empty() => Some(resolve(s, normals.len(), path, line, "normal")?),
                        _ => None,
                    };
                    poly.push(Corner { v, vt, vn });
                }
                for k in 1..poly.len() - 1 {
                    let tri = [poly[0], poly[k], poly[k + 1]];
                    if tri[0].v == tri[1].v || tri[1].v == tri[2].v || tri[0].v == tri[2].v {
                        dropped += 1;
                    } else {
                        faces.push(tri);
                    }
                }
            }
            "mtllib" => {
                if mtllib.is_none() {
                    mtllib = Some(rest.join(" "));
                }
            }
            "usemtl"
                if material.is_none() => {
                    material = Some(rest.join(" "));
                }
            _ => {}
        }
    }

    let n = positions.len();
    let mut mesh = Mesh::new(positions, faces.iter().map(|t| [t[0].v, t[1].v, t[2].v]).collect());

    let with_uv = faces.iter().filter(|t| t.iter().all(|c| c.vt.is_some())).count();
    if with_uv == faces.len() && !faces.is_empty() {
        mesh.corner_uvs = Some(
            faces.iter().map(|t| t.map(|c| texcoords[c.vt.unwrap()])).collect(),
        );
    } else if with_uv > 0 {
        warn!("{}: only {with_uv} of {} faces carry UVs; ignoring UVs", path.display(), faces.len());
    }

    if !normals.is_empty() {
        let mut per_vertex: Vec<Option<Vec3>> = vec![None; n];
        for t in &faces {
            for c in t {
                if let (Some(vn), None) = (c.vn, per_vertex[c.v]) {
                    per_vertex[c.v] = normals[vn].try_normalize(0.0);
                }
            }
        }
        if per_vertex.iter().all(Option::is_some) {
            mesh.vertex_normals = Some(per_vertex.into_iter().map(Option::unwrap).collect());
        }
    }

    if colors.len() == n && n > 0 {
        mesh.vertex_colors = Some(colors);
    }

    if let Some(lib) = mtllib {
        let dir = path.parent().unwrap_or_else(|| Path::new("."));
        let mtl_path = dir.join(&lib);
        match read_diffuse_map(&mtl_path, material.as_deref()) {
            Ok(Some(tex_path)) => {
                let tex_path = mtl_path.parent().unwrap_or(dir).join(tex_path);
                match TextureImage::load_png(&tex_path) {
                    Ok(img) => mesh.texture = Some(Arc::new(img)),
                    Err(e) => warn!("{}: could not load texture: {e}", path.display()),
                }
            }
            Ok(None) => {}
            Err(e) => warn!("{}: could not read material library: {e}", path.display()),
        }
    }

    Ok(ObjContents { mesh, dropped_faces: dropped })
}

/// Returns the `map_Kd` path of `material` (or of the first material
/// declaring one when `material` is `None` or not found).
fn read_diffuse_map(mtl_path: &Path, material: Option<&str>) -> Result<Option<PathBuf>> {
    let text = fs::read_to_string(mtl_path).map_err(|e| Error::io(mtl_path, e))?;
    let mut current: Option<String> = None;
    let mut first: Option<PathBuf> = None;
    for raw in text.lines() {
        let content = raw.split('#').next().unwrap_or("").trim();
        let mut parts = content.split_whitespace();
        match parts.next() {
            Some("newmtl") => current = Some(parts.collect::<Vec<_>>().join(" ")),
            Some("map_Kd") => {
                // Options like `-s 1 1 1` precede the file name; the name is last.
                let Some(file) = parts.last() else { continue };
                let p = PathBuf::from(file);
                if material.is_some() && current.as_deref() == material {
                    return Ok(Some(p));
                }
                first.get_or_insert(p);
            }
            _ => {}
        }
    }
    Ok(first)
}

/// Writes `mesh` as OBJ. When a texture is attached, `<stem>.mtl` and
/// `<stem>.png` are written next to `path`.
pub(crate) fn write_obj(mesh: &Mesh, path: &Path) -> Result<()> {
    let mut out = String::new();
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("mesh").to_string();
    let textured = mesh.texture.is_some() && mesh.corner_uvs.is_some();
    if textured {
        let _ = writeln!(out, "mtllib {stem}.mtl");
    }
    for (i, p) in mesh.positions.iter().enumerate() {
        match &mesh.vertex_colors {
            Some(c) => {
                let c = c[i];
                let _ = writeln!(out, "v {} {} {} {} {} {}", p.x, p.y, p.z, c[0], c[1], c[2]);
            }
            None => {
                let _ = writeln!(out, "v {} {} {}", p.x, p.y, p.z);
            }
        }
    }
    if let Some(normals) = &mesh.vertex_normals {
        for n in normals {
            let _ = writeln!(out, "vn {} {} {}", n.x, n.y, n.z);
        }
    }
    if let Some(uvs) = &mesh.corner_uvs {
        for t in uvs {
            for uv in t {
                let _ = writeln!(out, "vt {} {}", uv[0], uv[1]);
            }
        }
    }
    if textured {
        let _ = writeln!(out, "usemtl material0");
    }
    let has_n = mesh.vertex_normals.is_some();
    for (fi, f) in mesh.faces.iter().enumerate() {
        out.push('f');
        for (k, &v) in f.iter().enumerate() {
            let v1 = v + 1;
            match (mesh.corner_uvs.is_some(), has_n) {
                (true, true) => {
                    let _ = write!(out, " {v1}/{}/{v1}", fi * 3 + k + 1);
                }
                (true, false) => {
                    let _ = write!(out, " {v1}/{}", fi * 3 + k + 1);
                }
                (false, true) => {
                    let _ = write!(out, " {v1}//{v1}");
                }
                (false, false) => {
                    let _ = write!(out, " {v1}");
                }
            }
        }
        out.push('\n');
    }
    fs::write(path, out).map_err(|e| Error::io(path, e))?;

    if let (true, Some(tex)) = (textured, &mesh.texture) {
        let dir = path.parent().unwrap_or_else(|| Path::new("."));
        let png = format!("{stem}.png");
        let mtl = format!("newmtl material0\nKd 1 1 1\nmap_Kd {png}\n");
        let mtl_path = dir.join(format!("{stem}.mtl"));
        fs::write(&mtl_path, mtl).map_err(|e| Error::io(&mtl_path, e))?;
        tex.save_png(&dir.join(png))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<ObjContents> {
        parse_obj(text, Path::new("test.obj"))
    }

    #[test]
    fn uv_corners_are_resolved_per_face() {
        let c = parse("v 0 0 0\nv 1 0 0\nv 0 1 0\nvt 0.1 0.2\nvt 0.3 0.4\nvt 0.5 0.6\nf 1/1 2/2 3/3\n").unwrap();
        let uvs = c.mesh.corner_uvs.unwrap();
        assert_eq!(uvs, vec![[[0.1, 0.2], [0.3, 0.4], [0.5, 0.6]]]);
    }

    #[test]
    fn quads_are_fanned_and_negative_indices_resolve() {
        let c = parse("v 0 0 0\nv 1 0 0\nv 1 1 0\nv 0 1 0\nf -4 -3 -2 -1\n").unwrap();
        assert_eq!(c.mesh.faces, vec![[0, 1, 2], [0, 2, 3]]);
    }

    #[test]
    fn normal_only_corners() {
        let c = parse("v 0 0 0\nv 1 0 0\nv 0 1 0\nvn 0 0 2\nf 1//1 2//1 3//1\n").unwrap();
        let n = c.mesh.vertex_normals.unwrap();
        assert!(n.iter().all(|v| (v - Vec3::z()).norm() < 1e-12));
        assert!(c.mesh.corner_uvs.is_none());
    }

    #[test]
    fn out_of_range_index_names_line() {
        let err = parse("v 0 0 0\nv 1 0 0\n# comment\nf 1 2 9\n").err().unwrap();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 4),
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn degenerate_input_faces_are_counted() {
        let c = parse("v 0 0 0\nv 1 0 0\nv 0 1 0\nf 1 2 3\nf 1 1 2\n").unwrap();
        assert_eq!(c.mesh.face_count(), 1);
        assert_eq!(c.dropped_faces, 1);
    }
}
