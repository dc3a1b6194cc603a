//! Text and SVG serialization of a diagram, and the reader plus checker
//! for the text form.
//!
//! Text format, one record per line:
//!
//! ```text
//! incvor-diagram 1
//! bound 1048576
//! sites 7
//! sentinels 0 1 2
//! vertex 4 0,3,5 1,7,inf
//! cell 3 10 -4 5 small 4,9,12,8,6
//! ```
//!
//! A vertex line lists its three cells counterclockwise and, in the same
//! rotation, the neighbor across the edge between each cell and the next.
//! The vertex at infinity closing the sentinel rays is written `inf`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use crate::diagram::{Diagram, VertexId, INFINITE_VERTEX};
use crate::error::{structure_err, Error, Result};
use crate::geometry::{sentinel_sites, side_of_circle, CircleSide, Site, SiteId, SiteTriple, TripleKey};
use crate::oracle::CanonicalGraph;

pub const FORMAT_VERSION: u32 = 1;

fn vid(v: VertexId) -> String {
    if v == INFINITE_VERTEX {
        "inf".to_string()
    } else {
        v.0.to_string()
    }
}

fn join<T, I: IntoIterator<Item = T>>(it: I, f: impl Fn(T) -> String) -> String {
    it.into_iter().map(f).collect::<Vec<_>>().join(",")
}

pub fn to_text(d: &Diagram, include_sentinels: bool) -> Result<String> {
    let mut out = String::new();
    writeln!(out, "incvor-diagram {FORMAT_VERSION}").unwrap();
    writeln!(out, "bound {}", d.bound()).unwrap();
    writeln!(out, "sites {}", d.num_sites()).unwrap();
    writeln!(out, "sentinels 0 1 2").unwrap();
    for v in d.vertex_ids() {
        if v == INFINITE_VERTEX {
            continue;
        }
        let vert = d.vertex(v).unwrap();
        if vert.degree() != 3 {
            return Err(structure_err!("vertex {v} has degree {}", vert.degree()));
        }
        let cells = d.cells_at(v).map(Option::unwrap);
        let nbrs = [0, 1, 2].map(|k| vert.nbr(k).unwrap());
        writeln!(out, "vertex {v} {} {}", join(cells, |c| c.to_string()), join(nbrs, vid)).unwrap();
    }
    for c in d.cell_ids() {
        if d.is_sentinel(c) && !include_sentinels {
            continue;
        }
        let cell = d.cell(c);
        let kind = if cell.is_big { "big" } else { "small" };
        writeln!(
            out,
            "cell {c} {} {} {} {kind} {}",
            cell.site.x,
            cell.site.y,
            d.cell_size(c),
            join(d.boundary(c), vid)
        )
        .unwrap();
    }
    Ok(out)
}

/// SVG drawing: finite Voronoi edges between exact circumcenters, and the
/// sites. Everything outside the coordinate box is clipped.
pub fn to_svg(d: &Diagram) -> Result<String> {
    let b = d.bound() as f64;
    let m = b * 0.05;
    let mut centers = BTreeMap::new();
    for v in d.vertex_ids() {
        if v != INFINITE_VERTEX {
            let (x, y) = d.circumcenter(v)?;
            centers.insert(v, (x.to_f64(), -y.to_f64()));
        }
    }
    let stroke = b / 800.0;
    let mut out = String::new();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{} {} {} {}" width="800" height="800">"#,
        -b - m,
        -b - m,
        2.0 * (b + m),
        2.0 * (b + m)
    )
    .unwrap();
    writeln!(out, r#"<defs><clipPath id="box"><rect x="{}" y="{}" width="{}" height="{}"/></clipPath></defs>"#, -b, -b, 2.0 * b, 2.0 * b).unwrap();
    writeln!(out, r#"<rect x="{}" y="{}" width="{}" height="{}" fill="white" stroke="gray" stroke-width="{stroke}"/>"#, -b, -b, 2.0 * b, 2.0 * b).unwrap();
    writeln!(out, r#"<g clip-path="url(#box)" stroke="black" stroke-width="{stroke}">"#).unwrap();
    for (&v, &(x1, y1)) in &centers {
        for u in d.vertex(v).unwrap().neighbors() {
            if u > v {
                if let Some(&(x2, y2)) = centers.get(&u) {
                    writeln!(out, r#"<line x1="{x1:.3}" y1="{y1:.3}" x2="{x2:.3}" y2="{y2:.3}"/>"#).unwrap();
                }
            }
        }
    }
    writeln!(out, "</g>").unwrap();
    writeln!(out, r#"<g fill="red">"#).unwrap();
    for s in d.sites() {
        if !d.is_sentinel(s.id) {
            writeln!(out, r#"<circle cx="{}" cy="{}" r="{}"/>"#, s.x, -s.y, stroke * 2.0).unwrap();
        }
    }
    writeln!(out, "</g>\n</svg>").unwrap();
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExportedVertex {
    pub id: u32,
    pub cells: [SiteId; 3],
    /// `None` stands for the vertex at infinity.
    pub nbrs: [Option<u32>; 3],
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExportedCell {
    pub site: Site,
    pub size: usize,
    pub big: bool,
    pub boundary: Vec<Option<u32>>,
}

/// Parsed text export.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Exported {
    pub bound: i64,
    pub num_sites: usize,
    pub vertices: BTreeMap<u32, ExportedVertex>,
    pub cells: BTreeMap<SiteId, ExportedCell>,
}

fn perr(line: usize, msg: impl std::fmt::Display) -> Error {
    Error::Structure(format!("line {line}: {msg}"))
}

fn parse_num<T: std::str::FromStr>(s: &str, line: usize) -> Result<T> {
    s.parse().map_err(|_| perr(line, format!("bad number `{s}`")))
}

fn parse_vid(s: &str, line: usize) -> Result<Option<u32>> {
    if s == "inf" {
        Ok(None)
    } else {
        parse_num(s, line).map(Some)
    }
}

pub fn parse_text(text: &str) -> Result<Exported> {
    let mut ex = Exported::default();
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty());
    match lines.next() {
        Some((_, l)) if l == format!("incvor-diagram {FORMAT_VERSION}") => {}
        Some((i, l)) => return Err(perr(i, format!("unsupported header `{l}`"))),
        None => return Err(perr(0, "empty export")),
    }
    for (i, l) in lines {
        let parts: Vec<&str> = l.split_whitespace().collect();
        match parts.as_slice() {
            ["bound", b] => ex.bound = parse_num(b, i)?,
            ["sites", n] => ex.num_sites = parse_num(n, i)?,
            ["sentinels", "0", "1", "2"] => {}
            ["vertex", id, cells, nbrs] => {
                let cs: Vec<SiteId> = cells.split(',').map(|c| parse_num(c, i).map(SiteId)).collect::<Result<_>>()?;
                let ns: Vec<Option<u32>> = nbrs.split(',').map(|c| parse_vid(c, i)).collect::<Result<_>>()?;
                if cs.len() != 3 || ns.len() != 3 {
                    return Err(perr(i, "a vertex needs three cells and three neighbors"));
                }
                let id: u32 = parse_num(id, i)?;
                let v = ExportedVertex { id, cells: [cs[0], cs[1], cs[2]], nbrs: [ns[0], ns[1], ns[2]] };
                if ex.vertices.insert(id, v).is_some() {
                    return Err(perr(i, format!("vertex {id} listed twice")));
                }
            }
            ["cell", id, x, y, size, kind, boundary] => {
                let id = SiteId(parse_num(id, i)?);
                let big = match *kind {
                    "big" => true,
                    "small" => false,
                    k => return Err(perr(i, format!("unknown cell kind `{k}`"))),
                };
                let boundary = boundary.split(',').map(|c| parse_vid(c, i)).collect::<Result<_>>()?;
                let cell = ExportedCell {
                    site: Site { id, x: parse_num(x, i)?, y: parse_num(y, i)? },
                    size: parse_num(size, i)?,
                    big,
                    boundary,
                };
                if ex.cells.insert(id, cell).is_some() {
                    return Err(perr(i, format!("cell {id} listed twice")));
                }
            }
            _ => return Err(perr(i, format!("unrecognized record `{l}`"))),
        }
    }
    if ex.bound <= 0 {
        return Err(perr(0, "missing bound"));
    }
    Ok(ex)
}

impl Exported {
    /// Canonical graph of the exported diagram.
    pub fn canonical(&self) -> Result<CanonicalGraph> {
        let mut g = CanonicalGraph::default();
        let keys: BTreeMap<u32, TripleKey> = self.vertices.iter().map(|(&id, v)| (id, TripleKey::from_ccw(v.cells))).collect();
        for (id, v) in &self.vertices {
            let key = keys[id];
            g.vertices.insert(key);
            for k in 0..3 {
                let (a, b) = (v.cells[k], v.cells[(k + 1) % 3]);
                g.site_pairs.insert((a.min(b), a.max(b)));
                if let Some(u) = v.nbrs[k] {
                    let uk = *keys.get(&u).ok_or_else(|| structure_err!("vertex {id} names unknown neighbor {u}"))?;
                    g.edges.insert((key.min(uk), key.max(uk)));
                }
            }
        }
        Ok(g)
    }

    /// Site coordinates by id: sentinels from the bound, the rest from the
    /// cell records.
    pub fn sites(&self) -> BTreeMap<SiteId, Site> {
        let mut out: BTreeMap<SiteId, Site> = sentinel_sites(self.bound).into_iter().map(|s| (s.id, s)).collect();
        for c in self.cells.values() {
            out.insert(c.site.id, c.site);
        }
        out
    }

    /// Checks the exported structure on its own: degrees, rotation
    /// consistency across every edge, cell boundaries against rotations,
    /// closed-form counts, and (when every site is present) empty circles.
    pub fn check(&self) -> Result<()> {
        let n = self.num_sites;
        if n < 3 {
            return Err(structure_err!("export holds {n} sites"));
        }
        if self.vertices.len() != 2 * n - 5 {
            return Err(structure_err!("{} vertices, expected {}", self.vertices.len(), 2 * n - 5));
        }
        let mut finite_edges = 0;
        let mut ray_count = 0;
        for (id, v) in &self.vertices {
            let [a, b, c] = v.cells;
            if a == b || b == c || a == c {
                return Err(structure_err!("vertex {id} repeats a cell"));
            }
            for k in 0..3 {
                let Some(u) = v.nbrs[k] else {
                    ray_count += 1;
                    continue;
                };
                let uv = self.vertices.get(&u).ok_or_else(|| structure_err!("vertex {id} names unknown neighbor {u}"))?;
                let ok = (0..3).any(|l| {
                    uv.nbrs[l] == Some(*id) && uv.cells[l] == v.cells[(k + 1) % 3] && uv.cells[(l + 1) % 3] == v.cells[k]
                });
                if !ok {
                    return Err(structure_err!("edge {id}-{u} has no consistent twin"));
                }
                finite_edges += 1;
            }
        }
        if finite_edges / 2 != 3 * n - 9 || ray_count != 3 {
            return Err(structure_err!("{} edges and {ray_count} rays, expected {} and 3", finite_edges / 2, 3 * n - 9));
        }
        for (cid, cell) in &self.cells {
            if cell.boundary.len() != cell.size {
                return Err(structure_err!("cell {cid} lists {} vertices but size {}", cell.boundary.len(), cell.size));
            }
            let m = cell.boundary.len();
            for i in 0..m {
                let (p, q) = (cell.boundary[(i + m - 1) % m], cell.boundary[i]);
                let Some(q) = q else { continue };
                let qv = self.vertices.get(&q).ok_or_else(|| structure_err!("cell {cid} lists unknown vertex {q}"))?;
                let k = (0..3).find(|&k| qv.cells[k] == *cid).ok_or_else(|| structure_err!("vertex {q} is not incident to cell {cid}"))?;
                if qv.nbrs[k] != p {
                    return Err(structure_err!("cell {cid}: boundary order disagrees with the rotation at {q}"));
                }
            }
        }
        let sites = self.sites();
        if sites.len() == n {
            for (id, v) in &self.vertices {
                let [a, b, c] = v.cells.map(|s| sites[&s]);
                let t = SiteTriple::new(a, b, c)?;
                for s in sites.values() {
                    if !t.contains(s.id) && side_of_circle(&t, s) != CircleSide::Outside {
                        return Err(structure_err!("site {} is not outside the circle of vertex {id}", s.id));
                    }
                }
            }
        }
        let listed: BTreeSet<SiteId> = self.vertices.values().flat_map(|v| v.cells).collect();
        if listed.len() != n {
            return Err(structure_err!("vertices mention {} cells, expected {n}", listed.len()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::Voronoi;

    #[test]
    fn one_site_export() {
        let mut v = Voronoi::with_default_bound();
        v.insert(5, -7).unwrap();
        let plain = to_text(v.diagram(), false).unwrap();
        assert_eq!(plain.lines().filter(|l| l.starts_with("cell ")).count(), 1);
        let full = to_text(v.diagram(), true).unwrap();
        let cells: Vec<&str> = full.lines().filter(|l| l.starts_with("cell ")).collect();
        assert_eq!(cells.len(), 4);
        assert!(cells.iter().any(|l| l.starts_with("cell 3 5 -7 3 ")));
        let ex = parse_text(&full).unwrap();
        ex.check().unwrap();
        assert_eq!(ex.canonical().unwrap(), v.canonical().unwrap());
    }

    #[test]
    fn round_trip_and_check() {
        let mut v = Voronoi::with_default_bound();
        for (x, y) in [(0, 0), (10, 0), (5, 8), (3, 3), (-20, 14), (17, -9), (1, 30)] {
            v.insert(x, y).unwrap();
        }
        let ex = parse_text(&to_text(v.diagram(), false).unwrap()).unwrap();
        ex.check().unwrap();
        assert_eq!(ex.canonical().unwrap(), v.canonical().unwrap());
        let svg = to_svg(v.diagram()).unwrap();
        assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
    }

    #[test]
    fn tampered_export_fails_check() {
        let mut v = Voronoi::with_default_bound();
        for (x, y) in [(0, 0), (10, 0), (5, 8)] {
            v.insert(x, y).unwrap();
        }
        let text = to_text(v.diagram(), true).unwrap();
        let line = text.lines().find(|l| l.starts_with("vertex ")).unwrap().to_string();
        let mut parts: Vec<String> = line.split(' ').map(String::from).collect();
        let mut cells: Vec<&str> = parts[2].split(',').collect();
        cells.swap(0, 1);
        parts[2] = cells.join(",");
        let bad = text.replace(&line, &parts.join(" "));
        assert!(parse_text(&bad).unwrap().check().is_err());
        assert!(parse_text("nonsense").is_err());
    }
}
