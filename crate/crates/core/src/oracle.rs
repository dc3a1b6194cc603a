//! Independent ground truth: a Bowyer-Watson Delaunay triangulation over
//! the same augmented site set, dualized into a canonical Voronoi graph.
//!
//! Shares only the predicates with the rest of the crate.

use std::collections::{BTreeSet, HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::geometry::{orientation, sentinel_sites, side_of_circle, CircleSide, Orientation, Site, SiteId, SiteTriple, TripleKey};

/// Combinatorial Voronoi graph in canonical form.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CanonicalGraph {
    /// Finite Voronoi vertices by defining triple.
    pub vertices: BTreeSet<TripleKey>,
    /// Finite Voronoi edges as ordered key pairs.
    pub edges: BTreeSet<(TripleKey, TripleKey)>,
    /// Pairs of sites whose cells share an edge (rays included).
    pub site_pairs: BTreeSet<(SiteId, SiteId)>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GraphDiff {
    pub added_pairs: BTreeSet<(SiteId, SiteId)>,
    pub removed_pairs: BTreeSet<(SiteId, SiteId)>,
    pub added_vertices: BTreeSet<TripleKey>,
    pub removed_vertices: BTreeSet<TripleKey>,
}

impl GraphDiff {
    pub fn is_empty(&self) -> bool {
        self.added_pairs.is_empty()
            && self.removed_pairs.is_empty()
            && self.added_vertices.is_empty()
            && self.removed_vertices.is_empty()
    }

    /// Size of the site-pair symmetric difference.
    pub fn pair_changes(&self) -> usize {
        self.added_pairs.len() + self.removed_pairs.len()
    }
}

pub fn graph_diff(prev: &CanonicalGraph, next: &CanonicalGraph) -> GraphDiff {
    GraphDiff {
        added_pairs: next.site_pairs.difference(&prev.site_pairs).copied().collect(),
        removed_pairs: prev.site_pairs.difference(&next.site_pairs).copied().collect(),
        added_vertices: next.vertices.difference(&prev.vertices).copied().collect(),
        removed_vertices: prev.vertices.difference(&next.vertices).copied().collect(),
    }
}

#[derive(Debug, Clone, Copy)]
struct Tri {
    v: [SiteId; 3],
    alive: bool,
}

/// Delaunay triangulation of the sentinels plus inserted sites. Neighbor
/// links are kept as a directed-edge map: the triangle across edge `(a, b)`
/// of one triangle is the one holding the directed edge `(b, a)`.
#[derive(Debug, Clone)]
pub struct Triangulation {
    sites: Vec<Site>,
    tris: Vec<Tri>,
    edges: HashMap<(SiteId, SiteId), usize>,
    live: usize,
}

impl Triangulation {
    pub fn new(bound: i64) -> Self {
        let sites = sentinel_sites(bound).to_vec();
        let mut t = Triangulation { sites, tris: Vec::new(), edges: HashMap::new(), live: 0 };
        t.add_tri([SiteId(0), SiteId(1), SiteId(2)]);
        t
    }

    pub fn sites(&self) -> &[Site] {
        &self.sites
    }

    pub fn triangle_count(&self) -> usize {
        self.live
    }

    pub fn triangles(&self) -> impl Iterator<Item = [SiteId; 3]> + '_ {
        self.tris.iter().filter(|t| t.alive).map(|t| t.v)
    }

    fn add_tri(&mut self, v: [SiteId; 3]) {
        let idx = self.tris.len();
        self.tris.push(Tri { v, alive: true });
        for k in 0..3 {
            self.edges.insert((v[k], v[(k + 1) % 3]), idx);
        }
        self.live += 1;
    }

    fn kill_tri(&mut self, idx: usize) {
        let v = self.tris[idx].v;
        for k in 0..3 {
            if self.edges.get(&(v[k], v[(k + 1) % 3])) == Some(&idx) {
                self.edges.remove(&(v[k], v[(k + 1) % 3]));
            }
        }
        self.tris[idx].alive = false;
        self.live -= 1;
    }

    fn triple(&self, v: [SiteId; 3]) -> SiteTriple {
        SiteTriple::new(self.sites[v[0].index()], self.sites[v[1].index()], self.sites[v[2].index()])
            .expect("triangulation holds a collinear triangle")
    }

    /// The triangle across edge `k` of triangle `idx`.
    pub fn neighbor(&self, idx: usize, k: usize) -> Option<usize> {
        let v = self.tris[idx].v;
        self.edges.get(&(v[(k + 1) % 3], v[k])).copied()
    }

    /// Inserts a site with coordinates `(x, y)`; it receives the next id.
    pub fn insert(&mut self, x: i64, y: i64) -> Result<SiteId> {
        let id = SiteId(self.sites.len() as u32);
        let s = Site { id, x, y };
        if let Some(dup) = self.sites.iter().find(|p| p.x == x && p.y == y) {
            return Err(Error::DuplicateSite { x, y, existing: dup.id });
        }
        let mut seed = None;
        for (i, t) in self.tris.iter().enumerate() {
            if !t.alive {
                continue;
            }
            match side_of_circle(&self.triple(t.v), &s) {
                CircleSide::On => {
                    return Err(Error::Degeneracy(format!("site ({x}, {y}) is cocyclic with triangle {:?}", t.v)))
                }
                CircleSide::Inside if seed.is_none() => seed = Some(i),
                _ => {}
            }
        }
        let seed = seed.ok_or_else(|| Error::Degeneracy(format!("site ({x}, {y}) lies outside the sentinel hull")))?;

        // Flood the cavity through neighbor links.
        let mut cavity = BTreeSet::from([seed]);
        let mut queue = VecDeque::from([seed]);
        let mut rim = Vec::new();
        while let Some(t) = queue.pop_front() {
            for k in 0..3 {
                let v = self.tris[t].v;
                let edge = (v[k], v[(k + 1) % 3]);
                match self.neighbor(t, k) {
                    Some(n) if cavity.contains(&n) => {}
                    Some(n) => match side_of_circle(&self.triple(self.tris[n].v), &s) {
                        CircleSide::Inside => {
                            cavity.insert(n);
                            queue.push_back(n);
                        }
                        CircleSide::On => {
                            return Err(Error::Degeneracy(format!(
                                "site ({x}, {y}) is cocyclic with triangle {:?}",
                                self.tris[n].v
                            )))
                        }
                        CircleSide::Outside => rim.push(edge),
                    },
                    None => rim.push(edge),
                }
            }
        }
        for &(a, b) in &rim {
            let o = orientation(&self.sites[a.index()], &self.sites[b.index()], &s);
            if o != Orientation::Ccw {
                return Err(Error::Degeneracy(format!("site ({x}, {y}) is collinear with sites {a} and {b}")));
            }
        }
        self.sites.push(s);
        for t in cavity {
            self.kill_tri(t);
        }
        for (a, b) in rim {
            self.add_tri([a, b, id]);
        }
        Ok(id)
    }

    /// Dual Voronoi graph: triangles become vertices, shared triangle edges
    /// become Voronoi edges, Delaunay edges become adjacent site pairs.
    pub fn dual_canonical(&self) -> CanonicalGraph {
        let mut g = CanonicalGraph::default();
        for (i, t) in self.tris.iter().enumerate() {
            if !t.alive {
                continue;
            }
            let key = TripleKey::from_ccw(t.v);
            g.vertices.insert(key);
            for k in 0..3 {
                let (a, b) = (t.v[k], t.v[(k + 1) % 3]);
                g.site_pairs.insert((a.min(b), a.max(b)));
                if let Some(n) = self.neighbor(i, k) {
                    let nk = TripleKey::from_ccw(self.tris[n].v);
                    g.edges.insert((key.min(nk), key.max(nk)));
                }
            }
        }
        g
    }

    /// Brute-force Delaunay check over all triangles and all sites.
    pub fn check_delaunay(&self) -> Result<()> {
        for t in self.triangles() {
            let tri = self.triple(t);
            for s in &self.sites {
                if tri.contains(s.id) {
                    continue;
                }
                if side_of_circle(&tri, s) != CircleSide::Outside {
                    return Err(Error::Structure(format!("site {} is not outside the circle of {:?}", s.id, t)));
                }
            }
        }
        Ok(())
    }
}

/// Canonical graph of a site sequence, built from scratch.
pub fn canonical_of(bound: i64, points: &[(i64, i64)]) -> Result<CanonicalGraph> {
    let mut t = Triangulation::new(bound);
    for &(x, y) in points {
        t.insert(x, y)?;
    }
    Ok(t.dual_canonical())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::COORD_BOUND;

    fn key(a: u32, b: u32, c: u32) -> TripleKey {
        TripleKey::from_ccw([SiteId(a), SiteId(b), SiteId(c)])
    }

    #[test]
    fn first_site_fans_three_triangles() {
        let mut t = Triangulation::new(COORD_BOUND);
        t.insert(0, 0).unwrap();
        assert_eq!(t.triangle_count(), 3);
        let g = t.dual_canonical();
        // Hand enumeration: the centre is inside A,B,C; fanning gives these.
        let want: BTreeSet<_> = [key(0, 1, 3), key(1, 2, 3), key(0, 3, 2)].into();
        assert_eq!(g.vertices, want);
        // Three vertices pairwise adjacent around the single interior site.
        assert_eq!(g.edges.len(), 3);
        assert_eq!(g.site_pairs.len(), 6);
    }

    #[test]
    fn cocyclic_insertion_is_rejected() {
        let mut t = Triangulation::new(COORD_BOUND);
        for (x, y) in [(0, 0), (4, 0), (0, 4)] {
            t.insert(x, y).unwrap();
        }
        assert!(matches!(t.insert(4, 4), Err(Error::Degeneracy(_))));
        assert_eq!(t.sites().len(), 6);
    }

    #[test]
    fn duplicate_is_rejected() {
        let mut t = Triangulation::new(COORD_BOUND);
        t.insert(3, 3).unwrap();
        assert!(matches!(t.insert(3, 3), Err(Error::DuplicateSite { .. })));
    }

    #[test]
    fn triangle_count_follows_euler() {
        let mut t = Triangulation::new(COORD_BOUND);
        let mut x: i64 = 17;
        for i in 0..60 {
            x = (x * 48271) % 2147483647;
            let (px, py) = (x % 2001 - 1000, (x / 2001) % 2001 - 1000);
            if t.insert(px, py).is_err() {
                continue;
            }
            let n = t.sites().len();
            assert_eq!(t.triangle_count(), 2 * n - 5, "after {i} inserts");
        }
        t.check_delaunay().unwrap();
    }

    #[test]
    fn diff_of_identical_graphs_is_empty() {
        let g = canonical_of(COORD_BOUND, &[(0, 0), (10, 0), (5, 8)]).unwrap();
        assert!(graph_diff(&g, &g).is_empty());
        assert_eq!(g, canonical_of(COORD_BOUND, &[(0, 0), (10, 0), (5, 8)]).unwrap());
    }

    #[test]
    fn interior_insertion_diff() {
        // 3 real sites, then a 4th inside their triangle and its circle.
        let before = canonical_of(COORD_BOUND, &[(0, 0), (10, 0), (5, 8)]).unwrap();
        let after = canonical_of(COORD_BOUND, &[(0, 0), (10, 0), (5, 8), (5, 3)]).unwrap();
        let d = graph_diff(&before, &after);
        // The only vertex whose circle encloses (5,3) is the one of the three
        // real sites, so one triangle is removed and three are fanned.
        assert_eq!(d.removed_vertices, [key(3, 4, 5)].into());
        assert_eq!(d.added_vertices.len(), 3);
        assert_eq!(d.added_pairs.len(), 3);
        assert!(d.removed_pairs.is_empty());
    }
}
