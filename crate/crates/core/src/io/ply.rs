//! PLY reading (ASCII and binary little-endian) and ASCII writing.
//!
//! Only what meshes need is interpreted: vertex `x y z`, optional
//! `nx ny nz` and `red green blue`, and the face index list. Other
//! elements and properties are parsed for their size and skipped.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::mesh::{Mesh, Vec3};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Scalar {
    I8,
    U8,
    I16,
    U16,
    I32,
    U32,
    F32,
    F64,
}

impl Scalar {
    fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "char" | "int8" => Scalar::I8,
            "uchar" | "uint8" => Scalar::U8,
            "short" | "int16" => Scalar::I16,
            "ushort" | "uint16" => Scalar::U16,
            "int" | "int32" => Scalar::I32,
            "uint" | "uint32" => Scalar::U32,
            "float" | "float32" => Scalar::F32,
            "double" | "float64" => Scalar::F64,
            _ => return None,
        })
    }

    fn size(self) -> usize {
        match self {
            Scalar::I8 | Scalar::U8 => 1,
            Scalar::I16 | Scalar::U16 => 2,
            Scalar::I32 | Scalar::U32 | Scalar::F32 => 4,
            Scalar::F64 => 8,
        }
    }

    fn read_le(self, b: &[u8]) -> f64 {
        match self {
            Scalar::I8 => b[0] as i8 as f64,
            Scalar::U8 => b[0] as f64,
            Scalar::I16 => i16::from_le_bytes([b[0], b[1]]) as f64,
            Scalar::U16 => u16::from_le_bytes([b[0], b[1]]) as f64,
            Scalar::I32 => i32::from_le_bytes([b[0], b[1], b[2], b[3]]) as f64,
            Scalar::U32 => u32::from_le_bytes([b[0], b[1], b[2], b[3]]) as f64,
            Scalar::F32 => f32::from_le_bytes([b[0], b[1], b[2], b[3]]) as f64,
            Scalar::F64 => f64::from_le_bytes(b[..8].try_into().unwrap()),
        }
    }
}

#[derive(Debug, Clone)]
enum Property {
    Scalar { name: String, ty: Scalar },
    List { name: String, count: Scalar, item: Scalar },
}

impl Property {
    fn name(&self) -> &str {
        match self {
            Property::Scalar { name, .. } | Property::List { name, .. } => name,
        }
    }
}

#[derive(Debug, Clone)]
struct Element {
    name: String,
    count: usize,
    props: Vec<Property>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Encoding {
    Ascii,
    BinaryLe,
}

/// One decoded element instance: scalar values and list values by property order.
type Record = Vec<Vec<f64>>;

struct Header {
    encoding: Encoding,
    elements: Vec<Element>,
    body_offset: usize,
}

fn parse_header(bytes: &[u8], path: &Path) -> Result<Header> {
    let end = bytes
        .windows(10)
        .position(|w| w == b"end_header")
        .ok_or_else(|| Error::parse(path, 1, "missing end_header"))?;
    let mut body_offset = end + 10;
    // Skip the rest of the end_header line including \r\n or \n.
    while body_offset < bytes.len() && bytes[body_offset] != b'\n' {
        body_offset += 1;
    }
    body_offset += 1;

    let text = std::str::from_utf8(&bytes[..end]).map_err(|_| Error::parse(path, 1, "header is not UTF-8"))?;
    let mut lines = text.lines();
    if lines.next().map(str::trim) != Some("ply") {
        return Err(Error::parse(path, 1, "missing 'ply' magic"));
    }
    let mut encoding = None;
    let mut elements: Vec<Element> = Vec::new();
    for (i, line) in lines.enumerate() {
        let lineno = i + 2;
        let parts: Vec<&str> = line.split_whitespace().collect();
        match parts.as_slice() {
            ["format", "ascii", _] => encoding = Some(Encoding::Ascii),
            ["format", "binary_little_endian", _] => encoding = Some(Encoding::BinaryLe),
            ["format", other, ..] => {
                return Err(Error::parse(path, lineno, format!("unsupported PLY encoding '{other}'")));
            }
            ["element", name, count] => {
                let count = count
                    .parse()
                    .map_err(|_| Error::parse(path, lineno, format!("bad element count '{count}'")))?;
                elements.push(Element { name: name.to_string(), count, props: Vec::new() });
            }
            ["property", "list", count, item, name] => {
                let (Some(count), Some(item)) = (Scalar::parse(count), Scalar::parse(item)) else {
                    return Err(Error::parse(path, lineno, "bad list property types"));
                };
                let el = elements.last_mut().ok_or_else(|| Error::parse(path, lineno, "property before element"))?;
                el.props.push(Property::List { name: name.to_string(), count, item });
            }
            ["property", ty, name] => {
                let ty = Scalar::parse(ty).ok_or_else(|| Error::parse(path, lineno, format!("bad type '{ty}'")))?;
                let el = elements.last_mut().ok_or_else(|| Error::parse(path, lineno, "property before element"))?;
                el.props.push(Property::Scalar { name: name.to_string(), ty });
            }
            _ => {}
        }
    }
    let encoding = encoding.ok_or_else(|| Error::parse(path, 1, "missing format line"))?;
    Ok(Header { encoding, elements, body_offset })
}

fn read_records_ascii(header: &Header, body: &str, path: &Path, first_line: usize) -> Result<Vec<Vec<Record>>> {
    let mut lines = body.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let mut out = Vec::new();
    for el in &header.elements {
        let mut records = Vec::with_capacity(el.count);
        for _ in 0..el.count {
            let (i, line) = lines
                .next()
                .ok_or_else(|| Error::parse(path, first_line, format!("truncated '{}' element", el.name)))?;
            let lineno = first_line + i;
            let mut toks = line.split_whitespace().map(|t| {
                t.parse::<f64>().map_err(|_| Error::parse(path, lineno, format!("bad number '{t}'")))
            });
            let mut next = || toks.next().unwrap_or_else(|| Err(Error::parse(path, lineno, "too few values")));
            let mut rec = Vec::with_capacity(el.props.len());
            for p in &el.props {
                match p {
                    Property::Scalar { .. } => rec.push(vec![next()?]),
                    Property::List { .. } => {
                        let n = next()? as usize;
                        let mut items = Vec::with_capacity(n);
                        for _ in 0..n {
                            items.push(next()?);
                        }
                        rec.push(items);
                    }
                }
            }
            records.push(rec);
        }
        out.push(records);
    }
    Ok(out)
}

fn read_records_binary(header: &Header, body: &[u8], path: &Path) -> Result<Vec<Vec<Record>>> {
    let mut pos = 0usize;
    let mut take = |n: usize| -> Result<&[u8]> {
        if pos + n > body.len() {
            return Err(Error::parse(path, header.body_offset + pos, "unexpected end of binary data"));
        }
        let s = &body[pos..pos + n];
        pos += n;
        Ok(s)
    };
    let mut out = Vec::new();
    for el in &header.elements {
        let mut records = Vec::with_capacity(el.count);
        for _ in 0..el.count {
            let mut rec = Vec::with_capacity(el.props.len());
            for p in &el.props {
                match *p {
                    Property::Scalar { ty, .. } => rec.push(vec![ty.read_le(take(ty.size())?)]),
                    Property::List { count, item, .. } => {
                        let n = count.read_le(take(count.size())?) as usize;
                        let mut items = Vec::with_capacity(n);
                        for _ in 0..n {
                            items.push(item.read_le(take(item.size())?));
                        }
                        rec.push(items);
                    }
                }
            }
            records.push(rec);
        }
        out.push(records);
    }
    Ok(out)
}

/// Parsed PLY contents; faces with repeated indices are dropped and counted.
pub(crate) struct PlyContents {
    pub mesh: Mesh,
    pub dropped_faces: usize,
}

pub(crate) fn read_ply(path: &Path) -> Result<PlyContents> {
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    parse_ply(&bytes, path)
}

pub(crate) fn parse_ply(bytes: &[u8], path: &Path) -> Result<PlyContents> {
    let header = parse_header(bytes, path)?;
    let body = &bytes[header.body_offset.min(bytes.len())..];
    let data = match header.encoding {
        Encoding::Ascii => {
            let text = std::str::from_utf8(body).map_err(|_| Error::parse(path, 1, "ASCII body is not UTF-8"))?;
            let header_lines = bytes[..header.body_offset].iter().filter(|&&b| b == b'\n').count();
            read_records_ascii(&header, text, path, header_lines + 1)?
        }
        Encoding::BinaryLe => read_records_binary(&header, body, path)?,
    };

    let mut mesh = Mesh::default();
    let mut dropped = 0;
    for (el, records) in header.elements.iter().zip(&data) {
        let idx = |name: &str| el.props.iter().position(|p| p.name() == name);
        match el.name.as_str() {
            "vertex" => {
                let (Some(x), Some(y), Some(z)) = (idx("x"), idx("y"), idx("z")) else {
                    return Err(Error::parse(path, 1, "vertex element lacks x/y/z"));
                };
                mesh.positions = records.iter().map(|r| Vec3::new(r[x][0], r[y][0], r[z][0])).collect();
                if let (Some(nx), Some(ny), Some(nz)) = (idx("nx"), idx("ny"), idx("nz")) {
                    let normals: Vec<Option<Vec3>> = records
                        .iter()
                        .map(|r| Vec3::new(r[nx][0], r[ny][0], r[nz][0]).try_normalize(0.0))
                        .collect();
                    if normals.iter().all(Option::is_some) {
                        mesh.vertex_normals = Some(normals.into_iter().map(Option::unwrap).collect());
                    }
                }
                if let (Some(r), Some(g), Some(b)) = (idx("red"), idx("green"), idx("blue")) {
                    let integral = |i: usize| matches!(&el.props[i], Property::Scalar { ty, .. } if *ty != Scalar::F32 && *ty != Scalar::F64);
                    let scale = if integral(r) { 1.0 / 255.0 } else { 1.0 };
                    mesh.vertex_colors = Some(
                        records.iter().map(|rec| [rec[r][0] * scale, rec[g][0] * scale, rec[b][0] * scale]).collect(),
                    );
                }
            }
            "face" => {
                let Some(list) = idx("vertex_indices").or_else(|| idx("vertex_index")) else {
                    return Err(Error::parse(path, 1, "face element lacks vertex_indices"));
                };
                let n = mesh.positions.len();
                for (fi, r) in records.iter().enumerate() {
                    let poly = &r[list];
                    if poly.len() < 3 {
                        return Err(Error::parse(path, fi + 1, format!("face {fi} has {} corners", poly.len())));
                    }
                    let ids: Vec<usize> = poly.iter().map(|&v| v as usize).collect();
                    if let Some(bad) = poly.iter().find(|&&v| v < 0.0 || v as usize >= n) {
                        return Err(Error::parse(path, fi + 1, format!("face {fi} index {bad} out of range (have {n})")));
                    }
                    for k in 1..ids.len() - 1 {
                        let t = [ids[0], ids[k], ids[k + 1]];
                        if t[0] == t[1] || t[1] == t[2] || t[0] == t[2] {
                            dropped += 1;
                        } else {
                            mesh.faces.push(t);
                        }
                    }
                }
            }
            _ => {}
        }
    }
    Ok(PlyContents { mesh, dropped_faces: dropped })
}

/// ASCII PLY with positions, faces and (when present) 8-bit vertex colors.
pub(crate) fn write_ply(mesh: &Mesh, path: &Path) -> Result<()> {
    let mut out = String::new();
    let _ = writeln!(out, "ply\nformat ascii 1.0\nelement vertex {}", mesh.positions.len());
    out.push_str("property double x\nproperty double y\nproperty double z\n");
    if mesh.vertex_colors.is_some() {
        out.push_str("property uchar red\nproperty uchar green\nproperty uchar blue\n");
    }
    let _ = writeln!(out, "element face {}", mesh.faces.len());
    out.push_str("property list uchar int vertex_indices\nend_header\n");
    for (i, p) in mesh.positions.iter().enumerate() {
        let _ = write!(out, "{} {} {}", p.x, p.y, p.z);
        if let Some(c) = &mesh.vertex_colors {
            let q = crate::texture::to_rgba8(c[i]);
            let _ = write!(out, " {} {} {}", q[0], q[1], q[2]);
        }
        out.push('\n');
    }
    for f in &mesh.faces {
        let _ = writeln!(out, "3 {} {} {}", f[0], f[1], f[2]);
    }
    fs::write(path, out).map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    const ASCII: &str = "ply\nformat ascii 1.0\ncomment hi\nelement vertex 4\nproperty float x\nproperty float y\nproperty float z\nproperty uchar red\nproperty uchar green\nproperty uchar blue\nelement face 1\nproperty list uchar int vertex_indices\nend_header\n0 0 0 255 0 0\n1 0 0 0 255 0\n1 1 0 0 0 255\n0 1 0 255 255 255\n4 0 1 2 3\n";

    #[test]
    fn ascii_with_colors_and_quad() {
        let c = parse_ply(ASCII.as_bytes(), Path::new("a.ply")).unwrap();
        assert_eq!(c.mesh.positions.len(), 4);
        assert_eq!(c.mesh.faces, vec![[0, 1, 2], [0, 2, 3]]);
        assert_eq!(c.mesh.vertex_colors.as_ref().unwrap()[0], [1.0, 0.0, 0.0]);
    }

    #[test]
    fn binary_little_endian() {
        let mut bytes = b"ply\nformat binary_little_endian 1.0\nelement vertex 3\nproperty double x\nproperty double y\nproperty double z\nelement edge 1\nproperty int a\nproperty int b\nelement face 1\nproperty list uchar uint vertex_indices\nend_header\n".to_vec();
        for p in [[0.0f64, 0.0, 0.0], [2.0, 0.0, 0.0], [0.0, 3.0, 0.5]] {
            for c in p {
                bytes.extend_from_slice(&c.to_le_bytes());
            }
        }
        bytes.extend_from_slice(&0i32.to_le_bytes());
        bytes.extend_from_slice(&1i32.to_le_bytes());
        bytes.push(3);
        for i in [0u32, 1, 2] {
            bytes.extend_from_slice(&i.to_le_bytes());
        }
        let c = parse_ply(&bytes, Path::new("b.ply")).unwrap();
        assert_eq!(c.mesh.positions[2], Vec3::new(0.0, 3.0, 0.5));
        assert_eq!(c.mesh.faces, vec![[0, 1, 2]]);
    }

    #[test]
    fn truncated_binary_reports_offset() {
        let bytes = b"ply\nformat binary_little_endian 1.0\nelement vertex 2\nproperty float x\nproperty float y\nproperty float z\nend_header\n\0\0\0\0".to_vec();
        assert!(matches!(parse_ply(&bytes, Path::new("t.ply")), Err(Error::Parse { .. })));
    }

    #[test]
    fn out_of_range_face_is_rejected() {
        let text = "ply\nformat ascii 1.0\nelement vertex 3\nproperty float x\nproperty float y\nproperty float z\nelement face 1\nproperty list uchar int vertex_indices\nend_header\n0 0 0\n1 0 0\n0 1 0\n3 0 1 5\n";
        assert!(matches!(parse_ply(text.as_bytes(), Path::new("r.ply")), Err(Error::Parse { .. })));
    }
}
