//! Reader for Gmsh MSH ASCII files, versions 2.2 and 4.1.
//!
//! Only first-order triangles (type 2) and quadrilaterals (type 3) become
//! elements. Points (type 15) and 2-node lines (type 1) are accepted so that
//! boundary physical groups can be turned into node sets. Physical group
//! names become node-set names verbatim.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::path::Path;

use super::{Element, ElementKind, Mesh, MeshError, Regime};

struct RawElement {
    id: u64,
    dim: u8,
    physical: Vec<i64>,
    nodes: Vec<u64>,
}

struct Cursor<'a> {
    lines: std::iter::Peekable<std::iter::Enumerate<std::str::Lines<'a>>>,
    line: usize,
}

impl<'a> Cursor<'a> {
    fn new(text: &'a str) -> Self {
        Self { lines: text.lines().enumerate().peekable(), line: 0 }
    }

    fn next(&mut self) -> Option<&'a str> {
        loop {
            let (i, l) = self.lines.next()?;
            self.line = i + 1;
            let l = l.trim();
            if !l.is_empty() {
                return Some(l);
            }
        }
    }

    fn require(&mut self, what: &str) -> Result<&'a str, MeshError> {
        self.next().ok_or_else(|| self.err(format!("unexpected end of file, expected {what}")))
    }

    fn err(&self, message: impl Into<String>) -> MeshError {
        MeshError::Malformed { line: self.line, message: message.into() }
    }

    fn numbers<T: std::str::FromStr>(&mut self, what: &str) -> Result<Vec<T>, MeshError> {
        let l = self.require(what)?;
        l.split_whitespace()
            .map(|t| t.parse::<T>().map_err(|_| self.err(format!("bad number `{t}` in {what}"))))
            .collect()
    }

    fn expect_end(&mut self, section: &str) -> Result<(), MeshError> {
        let l = self.require(&format!("$End{section}"))?;
        if l != format!("$End{section}") {
            return Err(self.err(format!("expected $End{section}, found `{l}`")));
        }
        Ok(())
    }

    fn skip_section(&mut self, section: &str) -> Result<(), MeshError> {
        let end = format!("$End{section}");
        loop {
            if self.require(&end)? == end {
                return Ok(());
            }
        }
    }
}

fn element_dim(kind: u32) -> Option<(u8, usize)> {
    match kind {
        15 => Some((0, 1)),
        1 => Some((1, 2)),
        2 => Some((2, 3)),
        3 => Some((2, 4)),
        _ => None,
    }
}

pub fn parse_gmsh(path: impl AsRef<Path>) -> Result<Mesh, MeshError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)
        .map_err(|source| MeshError::Io { path: path.to_owned(), source })?;
    parse_gmsh_str(&text)
}

pub fn parse_gmsh_str(text: &str) -> Result<Mesh, MeshError> {
    let mut cur = Cursor::new(text);
    let mut version: Option<u8> = None;
    let mut names: HashMap<(u8, i64), String> = HashMap::new();
    let mut entity_physicals: HashMap<(u8, i64), Vec<i64>> = HashMap::new();
    let mut nodes: BTreeMap<u64, [f64; 2]> = BTreeMap::new();
    let mut elements: Vec<RawElement> = Vec::new();

    while let Some(header) = cur.next() {
        let Some(section) = header.strip_prefix('$') else {
            return Err(cur.err(format!("expected a section header, found `{header}`")));
        };
        match section {
            "MeshFormat" => {
                let l = cur.require("format line")?;
                let mut parts = l.split_whitespace();
                let v = parts.next().unwrap_or_default();
                let file_type = parts.next().unwrap_or("0");
                version = match v {
                    "2.2" => Some(2),
                    "4.1" => Some(4),
                    other => return Err(MeshError::UnsupportedVersion(other.to_owned())),
                };
                if file_type != "0" {
                    return Err(MeshError::UnsupportedVersion(format!("{v} (binary)")));
                }
                cur.expect_end("MeshFormat")?;
            }
            "PhysicalNames" => {
                let n: Vec<usize> = cur.numbers("physical name count")?;
                for _ in 0..n.first().copied().unwrap_or(0) {
                    let l = cur.require("physical name")?;
                    let mut it = l.splitn(3, char::is_whitespace);
                    let dim = it.next().and_then(|t| t.parse::<u8>().ok());
                    let tag = it.next().and_then(|t| t.parse::<i64>().ok());
                    let name = it.next().map(|t| t.trim().trim_matches('"').to_owned());
                    match (dim, tag, name) {
                        (Some(d), Some(t), Some(nm)) => {
                            names.insert((d, t), nm);
                        }
                        _ => return Err(cur.err("bad physical name line")),
                    }
                }
                cur.expect_end("PhysicalNames")?;
            }
            "Entities" => {
                let counts: Vec<usize> = cur.numbers("entity counts")?;
                if counts.len() < 4 {
                    return Err(cur.err("entity counts need four values"));
                }
                for (dim, &count) in counts.iter().take(4).enumerate() {
                    for _ in 0..count {
                        let v: Vec<f64> = cur.numbers("entity")?;
                        // points: tag x y z nphys ...; others: tag 6 bbox values nphys ...
                        let at = if dim == 0 { 4 } else { 7 };
                        let nphys = *v.get(at).ok_or_else(|| cur.err("truncated entity"))? as usize;
                        let phys = v
                            .get(at + 1..at + 1 + nphys)
                            .ok_or_else(|| cur.err("truncated entity physical tags"))?;
                        entity_physicals
                            .insert((dim as u8, v[0] as i64), phys.iter().map(|&p| p as i64).collect());
                    }
                }
                cur.expect_end("Entities")?;
            }
            "Nodes" => match version {
                Some(2) => {
                    let n: Vec<usize> = cur.numbers("node count")?;
                    for _ in 0..n.first().copied().unwrap_or(0) {
                        let v: Vec<f64> = cur.numbers("node")?;
                        if v.len() < 3 {
                            return Err(cur.err("node line needs id x y [z]"));
                        }
                        nodes.insert(v[0] as u64, [v[1], v[2]]);
                    }
                    cur.expect_end("Nodes")?;
                }
                Some(_) => {
                    let h: Vec<u64> = cur.numbers("node header")?;
                    let blocks = *h.first().ok_or_else(|| cur.err("empty node header"))?;
                    for _ in 0..blocks {
                        let b: Vec<i64> = cur.numbers("node block header")?;
                        if b.len() != 4 {
                            return Err(cur.err("node block header needs 4 values"));
                        }
                        if b[2] != 0 {
                            return Err(cur.err("parametric node coordinates are not supported"));
                        }
                        let count = b[3] as usize;
                        let mut tags = Vec::with_capacity(count);
                        for _ in 0..count {
                            let t: Vec<u64> = cur.numbers("node tag")?;
                            tags.push(*t.first().ok_or_else(|| cur.err("missing node tag"))?);
                        }
                        for tag in tags {
                            let v: Vec<f64> = cur.numbers("node coordinates")?;
                            if v.len() < 2 {
                                return Err(cur.err("node coordinates need x y z"));
                            }
                            nodes.insert(tag, [v[0], v[1]]);
                        }
                    }
                    cur.expect_end("Nodes")?;
                }
                None => return Err(cur.err("$Nodes before $MeshFormat")),
            },
            "Elements" => match version {
                Some(2) => {
                    let n: Vec<usize> = cur.numbers("element count")?;
                    for _ in 0..n.first().copied().unwrap_or(0) {
                        let v: Vec<i64> = cur.numbers("element")?;
                        if v.len() < 3 {
                            return Err(cur.err("element line too short"));
                        }
                        let (id, kind, ntags) = (v[0] as u64, v[1] as u32, v[2] as usize);
                        let (dim, nn) =
                            element_dim(kind).ok_or(MeshError::UnsupportedElement { id, kind })?;
                        if v.len() != 3 + ntags + nn {
                            return Err(cur.err(format!("element {id} has the wrong number of fields")));
                        }
                        let physical = if ntags > 0 { vec![v[3]] } else { Vec::new() };
                        let nodes = v[3 + ntags..].iter().map(|&t| t as u64).collect();
                        elements.push(RawElement { id, dim, physical, nodes });
                    }
                    cur.expect_end("Elements")?;
                }
                Some(_) => {
                    let h: Vec<u64> = cur.numbers("element header")?;
                    let blocks = *h.first().ok_or_else(|| cur.err("empty element header"))?;
                    for _ in 0..blocks {
                        let b: Vec<i64> = cur.numbers("element block header")?;
                        if b.len() != 4 {
                            return Err(cur.err("element block header needs 4 values"));
                        }
                        let (edim, etag, kind, count) = (b[0] as u8, b[1], b[2] as u32, b[3] as usize);
                        let physical = entity_physicals.get(&(edim, etag)).cloned().unwrap_or_default();
                        for _ in 0..count {
                            let v: Vec<u64> = cur.numbers("element")?;
                            let id = *v.first().ok_or_else(|| cur.err("missing element tag"))?;
                            let (dim, nn) =
                                element_dim(kind).ok_or(MeshError::UnsupportedElement { id, kind })?;
                            if v.len() != 1 + nn {
                                return Err(cur.err(format!("element {id} has the wrong number of nodes")));
                            }
                            elements.push(RawElement { id, dim, physical: physical.clone(), nodes: v[1..].to_vec() });
                        }
                    }
                    cur.expect_end("Elements")?;
                }
                None => return Err(cur.err("$Elements before $MeshFormat")),
            },
            other => cur.skip_section(other)?,
        }
    }
    if version.is_none() {
        return Err(MeshError::Malformed { line: cur.line, message: "missing $MeshFormat".into() });
    }
    build(nodes, elements, names)
}

fn build(
    nodes: BTreeMap<u64, [f64; 2]>,
    raw: Vec<RawElement>,
    names: HashMap<(u8, i64), String>,
) -> Result<Mesh, MeshError> {
    let used: BTreeSet<u64> = raw.iter().filter(|e| e.dim == 2).flat_map(|e| e.nodes.iter().copied()).collect();
    let mut index = HashMap::with_capacity(used.len());
    let mut coords = Vec::with_capacity(used.len());
    for tag in used {
        let c = nodes.get(&tag).ok_or_else(|| MeshError::Malformed {
            line: 0,
            message: format!("element references undefined node {tag}"),
        })?;
        index.insert(tag, coords.len());
        coords.push(*c);
    }
    let mut elements = Vec::new();
    let mut sets: BTreeMap<String, BTreeSet<usize>> = BTreeMap::new();
    for e in &raw {
        let local: Vec<usize> = e.nodes.iter().filter_map(|t| index.get(t).copied()).collect();
        if e.dim == 2 {
            let mut local = local.clone();
            if signed_area(&coords, &local) < 0.0 {
                local[1..].reverse();
            }
            let kind = if local.len() == 4 { ElementKind::Quad4 } else { ElementKind::Tri3 };
            elements.push(Element { kind, nodes: local });
        }
        for &p in &e.physical {
            let name = names.get(&(e.dim, p)).cloned().unwrap_or_else(|| format!("{}:{p}", e.dim));
            sets.entry(name).or_default().extend(local.iter().copied());
        }
        let _ = e.id;
    }
    let sets = sets.into_iter().map(|(k, v)| (k, v.into_iter().collect())).collect();
    Mesh::new(coords, elements, sets, Regime::PlaneStrain)
}

fn signed_area(coords: &[[f64; 2]], nodes: &[usize]) -> f64 {
    let n = nodes.len();
    (0..n)
        .map(|i| {
            let a = coords[nodes[i]];
            let b = coords[nodes[(i + 1) % n]];
            a[0] * b[1] - b[0] * a[1]
        })
        .sum::<f64>()
        * 0.5
}
