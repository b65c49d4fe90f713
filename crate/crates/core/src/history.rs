//! Collapse records, their text dump, and forward replay.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::mesh::{triangle_area, Mesh, Vec3};

/// One executed edge collapse, in input-mesh vertex and face numbering.
#[derive(Debug, Clone, PartialEq)]
pub struct CollapseRecord {
    pub kept: usize,
    pub removed: usize,
    pub kept_old_position: Vec3,
    pub removed_old_position: Vec3,
    pub new_position: Vec3,
    /// Faces deleted by this collapse (those spanning the edge, plus duplicates it created).
    pub removed_faces: Vec<usize>,
    /// Faces whose `removed` corner was redirected to `kept`.
    pub rewired_faces: Vec<usize>,
}

/// Collapses in execution order.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct CollapseHistory {
    pub records: Vec<CollapseRecord>,
}

impl CollapseHistory {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// One line per record: `kept removed kx ky kz rx ry rz nx ny nz`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            let (k, q, n) = (r.kept_old_position, r.removed_old_position, r.new_position);
            let _ = writeln!(
                out,
                "{} {} {} {} {} {} {} {} {} {} {}",
                r.kept, r.removed, k.x, k.y, k.z, q.x, q.y, q.z, n.x, n.y, n.z
            );
        }
        out
    }

    /// Parses [`CollapseHistory::to_text`] output. Face lists are not part
    /// of the text form and come back empty.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut records = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            let bad = || Error::parse("<history>", i + 1, format!("expected 11 fields, got '{line}'"));
            if parts.len() != 11 {
                return Err(bad());
            }
            let kept = parts[0].parse().map_err(|_| bad())?;
            let removed = parts[1].parse().map_err(|_| bad())?;
            let mut xs = [0.0; 9];
            for (x, t) in xs.iter_mut().zip(&parts[2..]) {
                *x = t.parse().map_err(|_| bad())?;
            }
            records.push(CollapseRecord {
                kept,
                removed,
                kept_old_position: Vec3::new(xs[0], xs[1], xs[2]),
                removed_old_position: Vec3::new(xs[3], xs[4], xs[5]),
                new_position: Vec3::new(xs[6], xs[7], xs[8]),
                removed_faces: Vec::new(),
                rewired_faces: Vec::new(),
            });
        }
        Ok(Self { records })
    }
}

/// The input mesh after applying a history forward, still in input numbering.
#[derive(Debug, Clone)]
pub struct ReplayedMesh {
    pub positions: Vec<Vec3>,
    pub faces: Vec<Option<[usize; 3]>>,
    pub alive: Vec<bool>,
}

/// Orientation problems found while replaying a history.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct FlipAudit {
    /// Surviving faces whose normal reversed in some collapse.
    pub reversed: usize,
    /// Surviving faces whose area fell below the tolerance in some collapse.
    pub degenerate: usize,
}

fn cross(p: &[Vec3], f: [usize; 3]) -> Vec3 {
    (p[f[1]] - p[f[0]]).cross(&(p[f[2]] - p[f[0]]))
}

/// Applies every record of `history` to `original`, checking that each one
/// references live vertices and faces. Also audits each touched face for
/// normal reversal and degeneracy against `area_tolerance`.
pub fn replay_history(original: &Mesh, history: &CollapseHistory, area_tolerance: f64) -> Result<(ReplayedMesh, FlipAudit)> {
    let n = original.vertex_count();
    let mut positions = original.positions.clone();
    let mut faces: Vec<Option<[usize; 3]>> = original.faces.iter().copied().map(Some).collect();
    let mut alive = vec![true; n];
    let mut v_to_t: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (fi, f) in original.faces.iter().enumerate() {
        for &v in f {
            v_to_t[v].push(fi);
        }
    }
    let mut audit = FlipAudit::default();

    for (step, r) in history.records.iter().enumerate() {
        let mismatch = |msg: String| Error::HistoryMismatch(format!("record {step}: {msg}"));
        if r.kept >= n || r.removed >= n || !alive[r.kept] || !alive[r.removed] || r.kept == r.removed {
            return Err(mismatch(format!("vertices {} / {} not both alive", r.kept, r.removed)));
        }
        for &f in &r.removed_faces {
            if faces.get(f).copied().flatten().is_none() {
                return Err(mismatch(format!("removed face {f} is not alive")));
            }
        }
        let removed_set: std::collections::BTreeSet<usize> = r.removed_faces.iter().copied().collect();

        // Surviving faces around the edge, before the move.
        let mut touched: Vec<usize> = v_to_t[r.kept].iter().chain(&v_to_t[r.removed]).copied().collect();
        touched.sort_unstable();
        touched.dedup();
        touched.retain(|f| !removed_set.contains(f) && faces[*f].is_some());
        let before: Vec<(usize, Vec3)> = touched.iter().map(|&f| (f, cross(&positions, faces[f].unwrap()))).collect();

        for &f in &r.removed_faces {
            let tri = faces[f].take().unwrap();
            for v in tri {
                v_to_t[v].retain(|&g| g != f);
            }
        }
        for &f in &r.rewired_faces {
            let Some(tri) = faces.get_mut(f).and_then(|t| t.as_mut()) else {
                return Err(mismatch(format!("rewired face {f} is not alive")));
            };
            let Some(slot) = tri.iter_mut().find(|v| **v == r.removed) else {
                return Err(mismatch(format!("rewired face {f} lacks vertex {}", r.removed)));
            };
            *slot = r.kept;
            v_to_t[r.removed].retain(|&g| g != f);
            v_to_t[r.kept].push(f);
        }
        positions[r.kept] = r.new_position;
        alive[r.removed] = false;
        if v_to_t[r.removed].iter().any(|&f| faces[f].is_some()) {
            return Err(mismatch(format!("faces still reference removed vertex {}", r.removed)));
        }

        for (f, old) in before {
            let Some(tri) = faces[f] else { continue };
            let new = cross(&positions, tri);
            if old.dot(&new) < 0.0 {
                audit.reversed += 1;
            }
            if 0.5 * new.norm() < area_tolerance {
                audit.degenerate += 1;
            }
        }
    }
    Ok((ReplayedMesh { positions, faces, alive }, audit))
}

/// Surviving faces of a replay whose area is below `area_tolerance`.
pub fn degenerate_faces(replayed: &ReplayedMesh, area_tolerance: f64) -> usize {
    replayed
        .faces
        .iter()
        .flatten()
        .filter(|f| {
            let p = &replayed.positions;
            triangle_area(&p[f[0]], &p[f[1]], &p[f[2]]) < area_tolerance
        })
        .count()
}
