//! The explicit Voronoi graph.
//!
//! Vertices are stored with their three neighbors and three boundary-tree
//! nodes in a fixed rotation: `cells[i]` is the cell owning `slots[i]`, the
//! cells appear counterclockwise around the vertex, and `nbrs[i]` is the
//! vertex across the edge separating `cells[i]` from `cells[i + 1]`. For a
//! cell at rotation index `i`, `nbrs[i]` is its boundary predecessor and
//! `nbrs[i + 2]` its successor.
//!
//! The cell sites a vertex is incident to are never stored: they are read
//! through the owner of each slot's tree. Moving a range of boundary nodes to
//! another tree therefore relabels those vertices in `O(log n)`.
//!
//! Three sentinel sites surround the user's box. Their Voronoi rays are
//! closed off at a single vertex at infinity, [`INFINITE_VERTEX`], which keeps
//! the graph finite and 3-regular.

use std::collections::BTreeSet;
use std::fmt;

use crate::boundary::{Forest, NodeId};
use crate::error::{structure_err, Error, Result};
use crate::geometry::{circumcenter, sentinel_sites, Rational, Site, SiteId, SiteTriple, COORD_BOUND};
use crate::oracle::CanonicalGraph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub u32);

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// The vertex closing off the three sentinel rays.
pub const INFINITE_VERTEX: VertexId = VertexId(0);

pub const SENTINEL_COUNT: usize = 3;

#[derive(Debug, Clone, Default)]
pub struct Vertex {
    pub(crate) nbrs: [Option<VertexId>; 3],
    pub(crate) slots: [Option<NodeId>; 3],
}

impl Vertex {
    pub fn neighbors(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.nbrs.iter().flatten().copied()
    }

    pub fn degree(&self) -> usize {
        self.nbrs.iter().flatten().count()
    }

    pub fn nbr(&self, k: usize) -> Option<VertexId> {
        self.nbrs[k % 3]
    }

    pub fn slot(&self, k: usize) -> Option<NodeId> {
        self.slots[k % 3]
    }
}

#[derive(Debug, Clone)]
pub struct Cell {
    pub site: Site,
    pub(crate) root: Option<NodeId>,
    pub is_big: bool,
    pub sentinel: bool,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ChangeLog {
    pub links: u64,
    pub cuts: u64,
}

/// Vertex id, neighbor ids and incident cell ids of one vertex.
pub type FingerprintEntry = (u32, [Option<u32>; 3], [Option<u32>; 3]);

/// Smallest `t` with `t^4 >= n`.
pub fn threshold_for(n: usize) -> usize {
    let mut t = (n as f64).powf(0.25).floor() as usize;
    while t.pow(4) < n {
        t += 1;
    }
    while t > 0 && (t - 1).pow(4) >= n {
        t -= 1;
    }
    t
}

/// What [`Diagram::merge_boundaries`] removed, enough to undo it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MergeRecord {
    pub kept: SiteId,
    pub absorbed: SiteId,
    /// The shared edge, `a` before `b` in the kept cell's boundary.
    pub a: VertexId,
    pub b: VertexId,
    a_edge: usize,
    b_edge: usize,
    a_slot: usize,
    b_slot: usize,
}

#[derive(Debug, Clone)]
pub struct Diagram {
    bound: i64,
    cells: Vec<Cell>,
    vertices: Vec<Option<Vertex>>,
    live_vertices: usize,
    pub(crate) forest: Forest,
    log: ChangeLog,
}

impl Diagram {
    /// The diagram of the three sentinels alone: one finite vertex joined to
    /// the vertex at infinity by three rays.
    pub fn new(bound: i64) -> Result<Self> {
        if bound <= 0 || bound > COORD_BOUND {
            return Err(Error::OutOfBounds { x: bound, y: bound, bound: COORD_BOUND });
        }
        let mut d = Diagram {
            bound,
            cells: Vec::new(),
            vertices: Vec::new(),
            live_vertices: 0,
            forest: Forest::new(),
            log: ChangeLog::default(),
        };
        for s in sentinel_sites(bound) {
            d.cells.push(Cell { site: s, root: None, is_big: true, sentinel: true });
        }
        let (a, b, c) = (SiteId(0), SiteId(1), SiteId(2));
        let inf = d.alloc_vertex();
        let center = d.alloc_vertex();
        debug_assert_eq!(inf, INFINITE_VERTEX);
        // Around the center the cells appear as A, B, C; around infinity the
        // orientation flips.
        let center_rot = [a, b, c];
        let inf_rot = [a, c, b];
        for (v, rot, other) in [(center, center_rot, inf), (inf, inf_rot, center)] {
            for (k, &cell) in rot.iter().enumerate() {
                let n = d.forest.alloc(v, cell);
                let vert = d.vertex_mut(v);
                vert.slots[k] = Some(n);
                vert.nbrs[k] = Some(other);
            }
        }
        for cell in [a, b, c] {
            let cn = d.node_of(center, cell).unwrap();
            let inn = d.node_of(inf, cell).unwrap();
            let root = d.forest.build(&[cn, inn], cell);
            d.cells[cell.index()].root = root;
        }
        Ok(d)
    }

    pub fn bound(&self) -> i64 {
        self.bound
    }

    /// Total number of sites, sentinels included.
    pub fn num_sites(&self) -> usize {
        self.cells.len()
    }

    pub fn num_user_sites(&self) -> usize {
        self.cells.len() - SENTINEL_COUNT
    }

    /// Current big-cell threshold: a cell is big when its size exceeds it.
    pub fn threshold(&self) -> usize {
        threshold_for(self.num_sites())
    }

    pub fn site(&self, id: SiteId) -> &Site {
        &self.cells[id.index()].site
    }

    pub fn sites(&self) -> impl Iterator<Item = &Site> {
        self.cells.iter().map(|c| &c.site)
    }

    pub fn cell(&self, id: SiteId) -> &Cell {
        &self.cells[id.index()]
    }

    pub fn cell_ids(&self) -> impl Iterator<Item = SiteId> {
        (0..self.cells.len() as u32).map(SiteId)
    }

    pub fn is_sentinel(&self, id: SiteId) -> bool {
        id.index() < SENTINEL_COUNT
    }

    pub fn cell_size(&self, id: SiteId) -> usize {
        self.cells[id.index()].root.map_or(0, |r| self.forest.size(r))
    }

    pub fn change_log(&self) -> ChangeLog {
        self.log
    }

    pub fn vertex(&self, v: VertexId) -> Option<&Vertex> {
        self.vertices.get(v.0 as usize).and_then(|x| x.as_ref())
    }

    pub(crate) fn vertex_mut(&mut self, v: VertexId) -> &mut Vertex {
        self.vertices[v.0 as usize].as_mut().expect("dead vertex")
    }

    fn v(&self, v: VertexId) -> &Vertex {
        self.vertices[v.0 as usize].as_ref().expect("dead vertex")
    }

    pub fn vertex_ids(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.vertices
            .iter()
            .enumerate()
            .filter(|(_, v)| v.is_some())
            .map(|(i, _)| VertexId(i as u32))
    }

    /// Finite Voronoi vertices (the vertex at infinity is not counted).
    pub fn vertex_count(&self) -> usize {
        self.live_vertices - 1
    }

    /// Finite Voronoi edges (the sentinel rays are not counted).
    pub fn edge_count(&self) -> usize {
        let mut twice = 0;
        for id in self.vertex_ids() {
            if id == INFINITE_VERTEX {
                continue;
            }
            twice += self.v(id).neighbors().filter(|&u| u != INFINITE_VERTEX).count();
        }
        twice / 2
    }

    pub(crate) fn alloc_vertex(&mut self) -> VertexId {
        self.vertices.push(Some(Vertex::default()));
        self.live_vertices += 1;
        VertexId(self.vertices.len() as u32 - 1)
    }

    pub(crate) fn delete_vertex(&mut self, v: VertexId) {
        let slot = &mut self.vertices[v.0 as usize];
        debug_assert!(slot.is_some());
        *slot = None;
        self.live_vertices -= 1;
    }

    pub(crate) fn add_cell(&mut self, site: Site) -> SiteId {
        let id = SiteId(self.cells.len() as u32);
        debug_assert_eq!(site.id, id);
        self.cells.push(Cell { site, root: None, is_big: false, sentinel: false });
        id
    }

    pub(crate) fn set_root(&mut self, cell: SiteId, root: Option<NodeId>) {
        if let Some(r) = root {
            self.forest.set_owner(r, cell);
        }
        self.cells[cell.index()].root = root;
    }

    pub(crate) fn root_of(&self, cell: SiteId) -> Option<NodeId> {
        self.cells[cell.index()].root
    }

    pub(crate) fn set_big(&mut self, cell: SiteId, big: bool) {
        self.cells[cell.index()].is_big = big;
    }

    /// The cell owning a boundary node.
    pub fn owner_cell(&self, node: NodeId) -> SiteId {
        self.forest.owner(node)
    }

    pub fn cells_at(&self, v: VertexId) -> [Option<SiteId>; 3] {
        let vert = self.v(v);
        vert.slots.map(|s| s.map(|n| self.forest.owner(n)))
    }

    /// Rotation index of `cell` at `v`.
    pub fn slot_of(&self, v: VertexId, cell: SiteId) -> Option<usize> {
        let vert = self.v(v);
        (0..3).find(|&k| vert.slots[k].is_some_and(|n| self.forest.owner(n) == cell))
    }

    pub fn node_of(&self, v: VertexId, cell: SiteId) -> Option<NodeId> {
        self.slot_of(v, cell).and_then(|k| self.v(v).slots[k])
    }

    /// Sites of the three cells incident to `v`.
    pub fn vertex_triple(&self, v: VertexId) -> Result<SiteTriple> {
        let vert = self.vertex(v).ok_or_else(|| structure_err!("vertex {v} does not exist"))?;
        if vert.degree() != 3 {
            return Err(structure_err!("vertex {v} has degree {}", vert.degree()));
        }
        let cells = self.cells_at(v);
        let [a, b, c] = cells.map(|c| c.map(|id| *self.site(id)));
        match (a, b, c) {
            (Some(a), Some(b), Some(c)) => SiteTriple::new(a, b, c),
            _ => Err(structure_err!("vertex {v} is missing a cell slot")),
        }
    }

    pub fn circumcenter(&self, v: VertexId) -> Result<(Rational, Rational)> {
        Ok(circumcenter(&self.vertex_triple(v)?))
    }

    pub fn boundary_nodes(&self, cell: SiteId) -> Vec<NodeId> {
        self.root_of(cell).map_or_else(Vec::new, |r| self.forest.in_order(r))
    }

    /// Boundary vertices of `cell` in counterclockwise order.
    pub fn boundary(&self, cell: SiteId) -> Vec<VertexId> {
        self.boundary_nodes(cell).into_iter().map(|n| self.forest.vertex(n)).collect()
    }

    pub fn boundary_next(&self, n: NodeId) -> NodeId {
        self.forest.cyc_next(n)
    }

    pub fn boundary_prev(&self, n: NodeId) -> NodeId {
        self.forest.cyc_prev(n)
    }

    pub fn node_vertex(&self, n: NodeId) -> VertexId {
        self.forest.vertex(n)
    }

    /// Index `l` at `u` of the half-edge twin to `(v, k)`.
    pub(crate) fn twin_slot(&self, v: VertexId, k: usize) -> Option<usize> {
        let vert = self.v(v);
        let u = vert.nbrs[k]?;
        let cv = self.cells_at(v);
        let cu = self.cells_at(u);
        let uv = self.v(u);
        let (x, y) = (cv[k], cv[(k + 1) % 3]);
        let exact = (0..3).find(|&l| {
            uv.nbrs[l] == Some(v) && x.is_some() && y.is_some() && cu[l] == y && cu[(l + 1) % 3] == x
        });
        exact.or_else(|| {
            if v == u {
                None
            } else {
                (0..3).find(|&l| uv.nbrs[l] == Some(v))
            }
        })
    }

    /// Adds the edge `u`-`v` in the given rotation slots.
    pub(crate) fn link_slots(&mut self, u: VertexId, i: usize, v: VertexId, j: usize) -> Result<()> {
        if self.v(u).nbrs[i].is_some() || self.v(v).nbrs[j].is_some() {
            return Err(structure_err!("link {u}-{v}: slot already occupied"));
        }
        self.vertex_mut(u).nbrs[i] = Some(v);
        self.vertex_mut(v).nbrs[j] = Some(u);
        self.log.links += 1;
        Ok(())
    }

    /// Removes the edge at `(u, i)` and its twin `(v, j)`.
    pub(crate) fn cut_slots(&mut self, u: VertexId, i: usize, v: VertexId, j: usize) -> Result<()> {
        if self.v(u).nbrs[i] != Some(v) || self.v(v).nbrs[j] != Some(u) {
            return Err(structure_err!("cut {u}-{v}: no such edge"));
        }
        self.vertex_mut(u).nbrs[i] = None;
        self.vertex_mut(v).nbrs[j] = None;
        self.log.cuts += 1;
        Ok(())
    }

    /// Detaches a half-edge pair without charging it. Used only for the
    /// stub of a crossed edge, which shrinks onto its crossing point.
    pub(crate) fn shrink_stub(&mut self, x: VertexId, i: usize) -> Result<VertexId> {
        let inner = self.v(x).nbrs[i].ok_or_else(|| structure_err!("vertex {x} has no stub in slot {i}"))?;
        let j = (0..3)
            .find(|&j| self.v(inner).nbrs[j] == Some(x))
            .ok_or_else(|| structure_err!("stub {x}-{inner} is one-sided"))?;
        self.vertex_mut(x).nbrs[i] = None;
        self.vertex_mut(inner).nbrs[j] = None;
        Ok(inner)
    }

    /// Links two vertices through their first free slots.
    pub fn link(&mut self, u: VertexId, v: VertexId) -> Result<()> {
        if u == v {
            return Err(structure_err!("cannot link {u} to itself"));
        }
        let (uu, vv) = (
            self.vertex(u).ok_or_else(|| structure_err!("no vertex {u}"))?,
            self.vertex(v).ok_or_else(|| structure_err!("no vertex {v}"))?,
        );
        if uu.neighbors().any(|x| x == v) {
            return Err(structure_err!("{u} and {v} are already adjacent"));
        }
        let i = (0..3).find(|&k| uu.nbrs[k].is_none()).ok_or_else(|| structure_err!("{u} is full"))?;
        let j = (0..3).find(|&k| vv.nbrs[k].is_none()).ok_or_else(|| structure_err!("{v} is full"))?;
        self.link_slots(u, i, v, j)
    }

    pub fn cut(&mut self, u: VertexId, v: VertexId) -> Result<()> {
        let uu = self.vertex(u).ok_or_else(|| structure_err!("no vertex {u}"))?;
        let i = (0..3).find(|&k| uu.nbrs[k] == Some(v)).ok_or_else(|| structure_err!("{u}-{v} is not an edge"))?;
        let j = self.twin_slot(u, i).ok_or_else(|| structure_err!("{u}-{v} has no twin"))?;
        self.cut_slots(u, i, v, j)
    }

    /// Subdivides the edge leaving `v` through rotation slot `k`. The new
    /// vertex sits between `u = nbrs[k]` and `v` in both incident cells.
    /// Returns it together with the two cells `(X, Y)` it lies between.
    fn subdivide(&mut self, v: VertexId, k: usize) -> Result<(VertexId, SiteId, SiteId, VertexId)> {
        let cv = self.cells_at(v);
        let (x_cell, y_cell) = match (cv[k], cv[(k + 1) % 3]) {
            (Some(x), Some(y)) => (x, y),
            _ => return Err(structure_err!("edge at {v}/{k} lacks a cell on one side")),
        };
        let u = self.v(v).nbrs[k].ok_or_else(|| structure_err!("no edge at {v}/{k}"))?;
        let l = self.twin_slot(v, k).ok_or_else(|| structure_err!("edge {v}-{u} has no twin"))?;
        let w = self.alloc_vertex();
        let xn = self.forest.alloc(w, x_cell);
        let yn = self.forest.alloc(w, y_cell);
        let vx = self.v(v).slots[k].unwrap();
        let vy = self.v(v).slots[(k + 1) % 3].unwrap();
        let r = self.forest.insert_before(vx, xn);
        self.set_root(x_cell, Some(r));
        let r = self.forest.insert_after(vy, yn);
        self.set_root(y_cell, Some(r));
        {
            let wv = self.vertex_mut(w);
            wv.slots[0] = Some(xn);
            wv.slots[1] = Some(yn);
            wv.nbrs[0] = Some(u);
        }
        self.vertex_mut(v).nbrs[k] = Some(w);
        self.vertex_mut(u).nbrs[l] = Some(w);
        Ok((w, x_cell, y_cell, u))
    }

    /// Free subdivision of the edge at rotation slot `k` of `v`.
    pub fn insert_degree2_vertex(&mut self, v: VertexId, k: usize) -> Result<VertexId> {
        let (w, _, _, _) = self.subdivide(v, k)?;
        self.vertex_mut(w).nbrs[1] = Some(v);
        Ok(w)
    }

    /// Subdivides a crossed edge for the cell being processed. The new vertex
    /// gets rotation `[X, Y, new_cell]`; the stub toward `v` occupies the slot
    /// of whichever of `X`, `Y` is *not* `processing`, leaving the
    /// processing cell's slot free for its link.
    pub(crate) fn subdivide_crossing(
        &mut self,
        v: VertexId,
        k: usize,
        new_cell: SiteId,
        processing: SiteId,
    ) -> Result<VertexId> {
        let (w, x_cell, y_cell, _) = self.subdivide(v, k)?;
        let nn = self.forest.alloc(w, new_cell);
        let stub_slot = if processing == x_cell {
            1
        } else if processing == y_cell {
            2
        } else {
            return Err(structure_err!("cell {processing} is not incident to the crossed edge"));
        };
        let wv = self.vertex_mut(w);
        wv.slots[2] = Some(nn);
        wv.nbrs[stub_slot] = Some(v);
        Ok(w)
    }

    pub fn remove_degree2_vertex(&mut self, w: VertexId) -> Result<()> {
        let vert = self.vertex(w).ok_or_else(|| structure_err!("no vertex {w}"))?.clone();
        let nbrs: Vec<VertexId> = vert.neighbors().collect();
        if nbrs.len() != 2 {
            return Err(structure_err!("vertex {w} has degree {}, not 2", nbrs.len()));
        }
        let (a, b) = (nbrs[0], nbrs[1]);
        if a == b {
            return Err(structure_err!("vertex {w} closes a loop"));
        }
        let ia = (0..3).find(|&k| self.v(a).nbrs[k] == Some(w)).unwrap();
        let ib = (0..3).find(|&k| self.v(b).nbrs[k] == Some(w)).unwrap();
        self.vertex_mut(a).nbrs[ia] = Some(b);
        self.vertex_mut(b).nbrs[ib] = Some(a);
        for n in vert.slots.iter().flatten() {
            let owner = self.forest.owner(*n);
            let is_root = self.root_of(owner) == Some(self.forest.root(*n));
            let rest = self.forest.remove(*n);
            if is_root {
                self.set_root(owner, rest);
            }
            self.forest.release(*n);
        }
        self.delete_vertex(w);
        Ok(())
    }

    /// Moves the cyclic boundary range `first..=last` of `f` to the end of
    /// `g`'s boundary, preserving order.
    pub fn split_range(&mut self, f: SiteId, first: NodeId, last: NodeId, g: SiteId) -> Result<()> {
        if self.owner_cell(first) != f || self.owner_cell(last) != f {
            return Err(structure_err!("range handles are not on the boundary of cell {f}"));
        }
        let (rest, range) = self.forest.extract_range(first, last, g);
        self.set_root(f, rest);
        let merged = self.forest.concat(self.root_of(g), Some(range), g);
        self.set_root(g, merged);
        Ok(())
    }

    /// Joins `f` and `g` across their shared edge: the edge is cut and `g`'s
    /// boundary is spliced into `f`'s. The two endpoints of the shared edge
    /// are left with degree 2; smoothing them is up to the caller.
    pub fn merge_boundaries(&mut self, f: SiteId, g: SiteId) -> Result<MergeRecord> {
        let mut found = None;
        for n in self.boundary_nodes(f) {
            let b = self.forest.vertex(n);
            let i = self.slot_of(b, f).unwrap();
            let cells = self.cells_at(b);
            if cells[(i + 1) % 3] == Some(g) {
                if let Some(a) = self.v(b).nbrs[i] {
                    found = Some((a, b, i));
                    break;
                }
            }
        }
        let (a, b, b_edge) = found.ok_or_else(|| structure_err!("cells {f} and {g} are not adjacent"))?;
        let a_edge = self.twin_slot(b, b_edge).ok_or_else(|| structure_err!("edge {a}-{b} has no twin"))?;
        let a_slot = self.slot_of(a, g).unwrap();
        let b_slot = self.slot_of(b, g).unwrap();
        self.cut_slots(b, b_edge, a, a_edge)?;

        // f reads [b, .., a]; g reads [a', g_rest.., b'].
        let bf = self.node_of(b, f).unwrap();
        let rf = self.forest.rotate_to_front(bf);
        let ag = self.node_of(a, g).unwrap();
        let bg = self.node_of(b, g).unwrap();
        let after_a = self.forest.cyc_next(ag);
        let rg = self.forest.rotate_to_front(after_a);
        let size_g = self.forest.size(rg);
        let (g_rest, tail) = self.forest.split(rg, size_g - 2);
        let tail = tail.unwrap();
        debug_assert_eq!(self.forest.in_order(tail), vec![bg, ag]);
        let (x, y) = self.forest.split(tail, 1);
        self.forest.release(x.unwrap());
        self.forest.release(y.unwrap());
        self.vertex_mut(a).slots[a_slot] = None;
        self.vertex_mut(b).slots[b_slot] = None;
        let merged = self.forest.concat(Some(rf), g_rest, f);
        self.set_root(f, merged);
        self.cells[g.index()].root = None;
        Ok(MergeRecord { kept: f, absorbed: g, a, b, a_edge, b_edge, a_slot, b_slot })
    }

    /// Undoes [`Self::merge_boundaries`].
    pub fn split_cell(&mut self, rec: &MergeRecord) -> Result<()> {
        let MergeRecord { kept: f, absorbed: g, a, b, .. } = *rec;
        if self.root_of(g).is_some() {
            return Err(structure_err!("cell {g} still has a boundary"));
        }
        let af = self.node_of(a, f).ok_or_else(|| structure_err!("{a} is not on cell {f}"))?;
        let bf = self.node_of(b, f).ok_or_else(|| structure_err!("{b} is not on cell {f}"))?;
        let first = self.forest.cyc_next(af);
        let g_rest = if first == bf {
            None
        } else {
            let last = self.forest.cyc_prev(bf);
            let (rest, range) = self.forest.extract_range(first, last, g);
            self.set_root(f, rest);
            Some(range)
        };
        let ag = self.forest.alloc(a, g);
        let bg = self.forest.alloc(b, g);
        let tail = self.forest.build(&[bg, ag], g);
        let root = self.forest.concat(g_rest, tail, g);
        self.set_root(g, root);
        self.vertex_mut(a).slots[rec.a_slot] = Some(ag);
        self.vertex_mut(b).slots[rec.b_slot] = Some(bg);
        self.link_slots(b, rec.b_edge, a, rec.a_edge)
    }

    /// Paws of `f`: for each boundary vertex in order, its neighbor off the
    /// boundary, paired with that boundary vertex.
    pub fn paws(&self, f: SiteId) -> Vec<(VertexId, VertexId)> {
        let mut out = Vec::new();
        for n in self.boundary_nodes(f) {
            let q = self.forest.vertex(n);
            if let Some(p) = self.paw_at(q, f) {
                out.push((p, q));
            }
        }
        out
    }

    /// The paw of `f` hanging off boundary vertex `q`, if any.
    pub fn paw_at(&self, q: VertexId, f: SiteId) -> Option<VertexId> {
        let i = self.slot_of(q, f)?;
        let p = self.v(q).nbrs[(i + 1) % 3]?;
        if self.slot_of(p, f).is_some() {
            None
        } else {
            Some(p)
        }
    }

    /// Canonical combinatorial form: finite vertices by triple key, finite
    /// edges as key pairs, and the set of adjacent site pairs.
    pub fn canonical(&self) -> Result<CanonicalGraph> {
        let mut g = CanonicalGraph::default();
        for v in self.vertex_ids() {
            if v == INFINITE_VERTEX {
                continue;
            }
            let key = self.vertex_triple(v)?.key();
            g.vertices.insert(key);
            let cells = self.cells_at(v);
            let vert = self.v(v);
            for k in 0..3 {
                let (a, b) = (cells[k].unwrap(), cells[(k + 1) % 3].unwrap());
                g.site_pairs.insert((a.min(b), a.max(b)));
                let u = vert.nbrs[k].unwrap();
                if u != INFINITE_VERTEX && u > v {
                    let uk = self.vertex_triple(u)?.key();
                    g.edges.insert((key.min(uk), key.max(uk)));
                }
            }
        }
        Ok(g)
    }

    /// Full structural check: 3-regularity, rotation consistency, boundary
    /// order against rotation, tree integrity, and the closed-form counts.
    pub fn validate(&self) -> Result<()> {
        let mut node_total = 0;
        for v in self.vertex_ids() {
            let vert = self.v(v);
            let cells = self.cells_at(v);
            for k in 0..3 {
                let n = vert.slots[k].ok_or_else(|| structure_err!("vertex {v} slot {k} empty"))?;
                if !self.forest.is_live(n) || self.forest.vertex(n) != v {
                    return Err(structure_err!("vertex {v} slot {k} points at a foreign node"));
                }
                vert.nbrs[k].ok_or_else(|| structure_err!("vertex {v} has degree {}", vert.degree()))?;
            }
            let [a, b, c] = cells.map(Option::unwrap);
            if a == b || b == c || a == c {
                return Err(structure_err!("vertex {v} repeats a cell"));
            }
            for k in 0..3 {
                let u = vert.nbrs[k].unwrap();
                if self.vertex(u).is_none() {
                    return Err(structure_err!("vertex {v} points at dead vertex {u}"));
                }
                let cu = self.cells_at(u);
                let uv = self.v(u);
                let ok = (0..3).any(|l| {
                    uv.nbrs[l] == Some(v) && cu[l] == cells[(k + 1) % 3] && cu[(l + 1) % 3] == cells[k]
                });
                if !ok {
                    return Err(structure_err!("edge {v}-{u} has no consistent twin"));
                }
            }
        }
        let mut sizes = 0;
        for cell in self.cell_ids() {
            let root = self.root_of(cell).ok_or_else(|| structure_err!("cell {cell} has no boundary"))?;
            self.forest.validate(root).map_err(|e| structure_err!("cell {cell}: {e}"))?;
            if self.forest.owner(root) != cell {
                return Err(structure_err!("cell {cell} root owned by {}", self.forest.owner(root)));
            }
            let nodes = self.forest.in_order(root);
            sizes += nodes.len();
            node_total += nodes.len();
            let m = nodes.len();
            for idx in 0..m {
                let p = self.forest.vertex(nodes[(idx + m - 1) % m]);
                let q = self.forest.vertex(nodes[idx]);
                let qv = self.vertex(q).ok_or_else(|| structure_err!("cell {cell} lists dead vertex {q}"))?;
                let i = (0..3)
                    .find(|&k| qv.slots[k] == Some(nodes[idx]))
                    .ok_or_else(|| structure_err!("node of {q} in cell {cell} is not one of its slots"))?;
                if qv.nbrs[i] != Some(p) {
                    return Err(structure_err!(
                        "cell {cell}: boundary order {p} -> {q} disagrees with rotation at {q}"
                    ));
                }
            }
        }
        if node_total != self.forest.live_count() {
            return Err(structure_err!(
                "{} live boundary nodes but {} referenced",
                self.forest.live_count(),
                node_total
            ));
        }
        let total_edges = 3 * self.live_vertices / 2;
        if sizes != 2 * total_edges {
            return Err(structure_err!("cell sizes sum to {sizes}, expected {}", 2 * total_edges));
        }
        let n = self.num_sites();
        let (ev, ee) = (2 * n - 5, 3 * n - 9);
        if self.vertex_count() != ev || self.edge_count() != ee {
            return Err(structure_err!(
                "counts V={} E={} but expected V={ev} E={ee} for N={n}",
                self.vertex_count(),
                self.edge_count()
            ));
        }
        Ok(())
    }

    /// Sorted list of user-visible adjacency, used for bit-identity checks.
    pub fn fingerprint(&self) -> Vec<FingerprintEntry> {
        self.vertex_ids()
            .map(|v| {
                let vert = self.v(v);
                (
                    v.0,
                    vert.nbrs.map(|x| x.map(|y| y.0)),
                    self.cells_at(v).map(|c| c.map(|s| s.0)),
                )
            })
            .collect()
    }

    /// Cell ids adjacent to `cell` across a boundary edge.
    pub fn adjacent_cells(&self, cell: SiteId) -> BTreeSet<SiteId> {
        let mut out = BTreeSet::new();
        for n in self.boundary_nodes(cell) {
            let q = self.forest.vertex(n);
            if let Some(i) = self.slot_of(q, cell) {
                if let Some(c) = self.cells_at(q)[(i + 1) % 3] {
                    out.insert(c);
                }
            }
        }
        out
    }
}
