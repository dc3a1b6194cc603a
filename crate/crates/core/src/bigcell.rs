//! Structures kept only for big cells: the big-cell graph and, per big cell,
//! a circular chain of circle-reporting blocks over consecutive paw ranges.
//!
//! A block is identified by its start node, which carries the block id as
//! its tag in the boundary forest. A block runs from its start up to (not
//! including) the next tagged node of the same cell, so the chain always
//! partitions the boundary and follows splits and merges of the trees.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::boundary::NodeId;
use crate::diagram::{Diagram, VertexId, INFINITE_VERTEX};
use crate::error::{structure_err, Error, Result};
use crate::geometry::{side_of_circle, CircleSide, Site, SiteId, SiteTriple};

/// Circle-reporting structure: a set of Voronoi circles keyed by paw vertex.
/// Queries scan linearly.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Dcr {
    entries: Vec<(VertexId, SiteTriple)>,
}

impl Dcr {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn contains(&self, paw: VertexId) -> bool {
        self.entries.iter().any(|(p, _)| *p == paw)
    }

    pub fn insert(&mut self, paw: VertexId, circle: SiteTriple) -> Result<()> {
        if self.contains(paw) {
            return Err(structure_err!("paw {paw} is already stored"));
        }
        self.entries.push((paw, circle));
        Ok(())
    }

    pub fn delete(&mut self, paw: VertexId) -> Result<()> {
        let i = self
            .entries
            .iter()
            .position(|(p, _)| *p == paw)
            .ok_or_else(|| structure_err!("paw {paw} is not stored"))?;
        self.entries.swap_remove(i);
        Ok(())
    }

    /// Paws whose circle strictly encloses `q`.
    pub fn report(&self, q: &Site) -> Result<Vec<VertexId>> {
        let mut out = Vec::new();
        for (p, t) in &self.entries {
            match side_of_circle(t, q) {
                CircleSide::Inside => out.push(*p),
                CircleSide::On => {
                    return Err(Error::Degeneracy(format!("site ({}, {}) lies on the circle of vertex {p}", q.x, q.y)))
                }
                CircleSide::Outside => {}
            }
        }
        Ok(out)
    }

    /// Entries sorted by paw id.
    pub fn sorted(&self) -> Vec<(VertexId, SiteTriple)> {
        let mut v = self.entries.clone();
        v.sort_by_key(|e| e.0);
        v
    }
}

#[derive(Debug, Clone)]
pub struct DcrBlock {
    pub cell: SiteId,
    pub start: NodeId,
    /// Boundary vertices covered.
    pub len: usize,
    pub dcr: Dcr,
}

/// Shared Voronoi edge of two adjacent big cells, endpoints in id order.
pub type SharedEdge = (VertexId, VertexId);

fn shared(a: VertexId, b: VertexId) -> SharedEdge {
    (a.min(b), a.max(b))
}

#[derive(Debug, Clone, Default)]
pub struct BigCellGraph {
    cells: BTreeSet<SiteId>,
    adj: HashMap<SiteId, BTreeMap<SiteId, SharedEdge>>,
}

/// What [`BigCellGraph::gamma_join`] merged.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JoinRecord {
    pub kept: SiteId,
    pub absorbed: SiteId,
    pub edge: SharedEdge,
    pub moved: Vec<(SiteId, SharedEdge)>,
}

impl BigCellGraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn contains(&self, c: SiteId) -> bool {
        self.cells.contains(&c)
    }

    pub fn cells(&self) -> impl Iterator<Item = SiteId> + '_ {
        self.cells.iter().copied()
    }

    pub fn vertex_count(&self) -> usize {
        self.cells.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.values().map(|m| m.len()).sum::<usize>() / 2
    }

    pub fn add_vertex(&mut self, c: SiteId) {
        self.cells.insert(c);
        self.adj.entry(c).or_default();
    }

    pub fn remove_vertex(&mut self, c: SiteId) {
        if let Some(m) = self.adj.remove(&c) {
            for nb in m.keys() {
                if let Some(x) = self.adj.get_mut(nb) {
                    x.remove(&c);
                }
            }
        }
        self.cells.remove(&c);
    }

    pub fn neighbors(&self, c: SiteId) -> impl Iterator<Item = (SiteId, SharedEdge)> + '_ {
        self.adj.get(&c).into_iter().flat_map(|m| m.iter().map(|(k, v)| (*k, *v)))
    }

    pub fn edge(&self, a: SiteId, b: SiteId) -> Option<SharedEdge> {
        self.adj.get(&a).and_then(|m| m.get(&b)).copied()
    }

    pub fn set_edge(&mut self, a: SiteId, b: SiteId, v1: VertexId, v2: VertexId) -> Result<()> {
        if a == b || !self.contains(a) || !self.contains(b) {
            return Err(structure_err!("cannot add edge {a}-{b} to the big-cell graph"));
        }
        let e = shared(v1, v2);
        self.adj.get_mut(&a).unwrap().insert(b, e);
        self.adj.get_mut(&b).unwrap().insert(a, e);
        Ok(())
    }

    pub fn remove_edge(&mut self, a: SiteId, b: SiteId) -> Option<SharedEdge> {
        let e = self.adj.get_mut(&a).and_then(|m| m.remove(&b));
        if let Some(m) = self.adj.get_mut(&b) {
            m.remove(&a);
        }
        e
    }

    /// Replaces endpoint `old` of the shared edge of `a` and `b`, if any.
    pub fn replace_endpoint(&mut self, a: SiteId, b: SiteId, old: VertexId, new: VertexId) {
        if let Some((v1, v2)) = self.edge(a, b) {
            let e = if v1 == old { shared(new, v2) } else if v2 == old { shared(v1, new) } else { return };
            self.adj.get_mut(&a).unwrap().insert(b, e);
            self.adj.get_mut(&b).unwrap().insert(a, e);
        }
    }

    /// `f` falls apart into itself and `new_part`: the edges towards the
    /// cells in `moved` now belong to `new_part` (an edge to `new_part`
    /// itself disappears), and `f`-`new_part` is joined along `v1 v2`.
    pub fn gamma_split(&mut self, f: SiteId, new_part: SiteId, moved: &[SiteId], v1: VertexId, v2: VertexId) -> Result<()> {
        if !self.contains(f) {
            return Err(structure_err!("cell {f} is not in the big-cell graph"));
        }
        for &c in moved {
            if let Some((a, b)) = self.remove_edge(f, c) {
                if c != new_part && self.contains(new_part) {
                    self.set_edge(new_part, c, a, b)?;
                }
            }
        }
        if self.contains(new_part) {
            self.set_edge(f, new_part, v1, v2)?;
        }
        Ok(())
    }

    /// Merges `f2` into `f1` across their shared edge.
    pub fn gamma_join(&mut self, f1: SiteId, f2: SiteId) -> Result<JoinRecord> {
        let edge = self.remove_edge(f1, f2).ok_or_else(|| structure_err!("cells {f1} and {f2} are not adjacent"))?;
        let moved: Vec<(SiteId, SharedEdge)> = self.neighbors(f2).collect();
        self.remove_vertex(f2);
        for &(c, (a, b)) in &moved {
            if self.edge(f1, c).is_none() {
                self.set_edge(f1, c, a, b)?;
            }
        }
        Ok(JoinRecord { kept: f1, absorbed: f2, edge, moved })
    }

    /// All edges as `(smaller, larger) -> shared edge`.
    pub fn labeled(&self) -> BTreeMap<(SiteId, SiteId), SharedEdge> {
        let mut out = BTreeMap::new();
        for (&a, m) in &self.adj {
            for (&b, &e) in m {
                if a < b {
                    out.insert((a, b), e);
                }
            }
        }
        out
    }

    /// The big-cell graph recomputed from the diagram alone.
    pub fn from_scratch(d: &Diagram) -> Self {
        let mut g = BigCellGraph::new();
        for c in d.cell_ids() {
            if d.cell(c).is_big {
                g.add_vertex(c);
            }
        }
        let cells: Vec<SiteId> = g.cells().collect();
        for b in cells {
            for n in d.boundary_nodes(b) {
                let q = d.node_vertex(n);
                let i = d.slot_of(q, b).unwrap();
                let vert = d.vertex(q).unwrap();
                let (Some(p), Some(c)) = (vert.nbr(i), d.cells_at(q)[(i + 1) % 3]) else { continue };
                if g.contains(c) {
                    let _ = g.set_edge(b, c, p, q);
                }
            }
        }
        g
    }
}

/// Γ plus the block chains of every big cell.
#[derive(Debug, Clone, Default)]
pub struct BigCellIndex {
    pub gamma: BigCellGraph,
    blocks: Vec<Option<DcrBlock>>,
    free: Vec<u32>,
    chains: HashMap<SiteId, BTreeSet<u32>>,
    rebuilds: u64,
}

impl BigCellIndex {
    /// Index over the sentinel-only diagram, whose cells are all big.
    pub fn new(d: &mut Diagram) -> Self {
        let mut idx = BigCellIndex::default();
        let cells: Vec<SiteId> = d.cell_ids().collect();
        idx.gamma = BigCellGraph::from_scratch(d);
        for c in cells {
            idx.build_chain(d, c);
        }
        idx.rebuilds = 0;
        idx
    }

    /// Total block rebuilds so far.
    pub fn rebuilds(&self) -> u64 {
        self.rebuilds
    }

    pub fn block(&self, id: u32) -> Option<&DcrBlock> {
        self.blocks.get(id as usize).and_then(|b| b.as_ref())
    }

    pub fn chain(&self, cell: SiteId) -> Vec<&DcrBlock> {
        self.chains
            .get(&cell)
            .map(|s| s.iter().filter_map(|&id| self.block(id)).collect())
            .unwrap_or_default()
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len() - self.free.len()
    }

    /// A paw is relevant when none of its cells is big.
    pub fn is_relevant(d: &Diagram, paw: VertexId) -> bool {
        paw != INFINITE_VERTEX && d.cells_at(paw).iter().all(|c| c.is_some_and(|c| !d.cell(c).is_big))
    }

    fn alloc_block(&mut self, d: &mut Diagram, cell: SiteId, start: NodeId) -> u32 {
        let b = DcrBlock { cell, start, len: 0, dcr: Dcr::new() };
        let id = match self.free.pop() {
            Some(id) => {
                self.blocks[id as usize] = Some(b);
                id
            }
            None => {
                self.blocks.push(Some(b));
                self.blocks.len() as u32 - 1
            }
        };
        d.forest.set_tag(start, Some(id));
        self.chains.entry(cell).or_default().insert(id);
        id
    }

    fn free_block(&mut self, d: &mut Diagram, id: u32) {
        if let Some(b) = self.blocks[id as usize].take() {
            if d.forest.is_live(b.start) && d.forest.tag(b.start) == Some(id) {
                d.forest.set_tag(b.start, None);
            }
            if let Some(s) = self.chains.get_mut(&b.cell) {
                s.remove(&id);
                if s.is_empty() {
                    self.chains.remove(&b.cell);
                }
            }
            self.free.push(id);
        }
    }

    /// Inserts a relevant paw into a block.
    pub fn dcr_insert(&mut self, d: &Diagram, block: u32, paw: VertexId) -> Result<()> {
        if !Self::is_relevant(d, paw) {
            return Err(structure_err!("paw {paw} is incident to a big cell"));
        }
        let t = d.vertex_triple(paw)?;
        let b = self.blocks.get_mut(block as usize).and_then(|b| b.as_mut()).ok_or_else(|| structure_err!("no block {block}"))?;
        b.dcr.insert(paw, t)
    }

    pub fn dcr_delete(&mut self, block: u32, paw: VertexId) -> Result<()> {
        let b = self.blocks.get_mut(block as usize).and_then(|b| b.as_mut()).ok_or_else(|| structure_err!("no block {block}"))?;
        b.dcr.delete(paw)
    }

    /// Builds a fresh chain for a cell that has none.
    pub fn build_chain(&mut self, d: &mut Diagram, cell: SiteId) {
        let t = d.threshold().max(1);
        let nodes = d.boundary_nodes(cell);
        let mut ids = Vec::new();
        for chunk in nodes.chunks(t) {
            ids.push(self.alloc_block(d, cell, chunk[0]));
        }
        for id in ids {
            self.refill(d, id);
        }
    }

    pub fn drop_chain(&mut self, d: &mut Diagram, cell: SiteId) {
        let ids: Vec<u32> = self.chains.get(&cell).map(|s| s.iter().copied().collect()).unwrap_or_default();
        for id in ids {
            self.free_block(d, id);
        }
    }

    /// Frees the blocks starting at any of `nodes`. Returns how many.
    pub fn drop_blocks_at(&mut self, d: &mut Diagram, nodes: &[NodeId]) -> usize {
        let mut n = 0;
        for &node in nodes {
            if let Some(id) = d.forest.tag(node) {
                self.free_block(d, id);
                n += 1;
            }
        }
        n
    }

    pub fn add_block_start(&mut self, d: &mut Diagram, node: NodeId) -> u32 {
        if let Some(id) = d.forest.tag(node) {
            return id;
        }
        let cell = d.owner_cell(node);
        self.alloc_block(d, cell, node)
    }

    /// Block containing a boundary node of a big cell.
    pub fn block_of(&self, d: &Diagram, node: NodeId) -> Option<u32> {
        let mut cur = node;
        loop {
            if let Some(id) = d.forest.tag(cur) {
                return Some(id);
            }
            cur = d.forest.cyc_prev(cur);
            if cur == node {
                return None;
            }
        }
    }

    fn range_of(&self, d: &Diagram, id: u32) -> Vec<NodeId> {
        let start = self.blocks[id as usize].as_ref().unwrap().start;
        let mut out = vec![start];
        let mut cur = d.forest.cyc_next(start);
        while cur != start && d.forest.tag(cur).is_none() {
            out.push(cur);
            cur = d.forest.cyc_next(cur);
        }
        out
    }

    /// Expected block contents recomputed from the diagram.
    fn scan(d: &Diagram, cell: SiteId, range: &[NodeId]) -> Dcr {
        let mut dcr = Dcr::new();
        for &n in range {
            let q = d.node_vertex(n);
            if let Some(p) = d.paw_at(q, cell) {
                if Self::is_relevant(d, p) && !dcr.contains(p) {
                    if let Ok(t) = d.vertex_triple(p) {
                        dcr.entries.push((p, t));
                    }
                }
            }
        }
        dcr
    }

    fn refill(&mut self, d: &Diagram, id: u32) -> usize {
        let range = self.range_of(d, id);
        let cell = self.blocks[id as usize].as_ref().unwrap().cell;
        let dcr = Self::scan(d, cell, &range);
        let b = self.blocks[id as usize].as_mut().unwrap();
        b.len = range.len();
        b.dcr = dcr;
        self.rebuilds += 1;
        range.len()
    }

    /// Recomputes one block from its range, then restores the capacity
    /// bounds: over `2t` vertices it is cut into pieces of `t`; under `t/2`
    /// it absorbs its successor when that one is small too.
    pub fn rebuild_block(&mut self, d: &mut Diagram, id: u32) {
        let t = d.threshold().max(1);
        let len = self.refill(d, id);
        if len > 2 * t {
            let range = self.range_of(d, id);
            let mut fresh = Vec::new();
            for chunk in range.chunks(t).skip(1) {
                fresh.push(self.alloc_block(d, self.blocks[id as usize].as_ref().unwrap().cell, chunk[0]));
            }
            self.refill(d, id);
            for f in fresh {
                self.refill(d, f);
            }
        } else if 2 * len < t {
            let range = self.range_of(d, id);
            let after = d.forest.cyc_next(*range.last().unwrap());
            if let Some(next) = d.forest.tag(after) {
                if next != id && 2 * self.blocks[next as usize].as_ref().unwrap().len < t {
                    self.free_block(d, next);
                    self.refill(d, id);
                }
            }
        }
    }

    /// Paws of `cell` whose circles enclose `q`, over its whole chain.
    pub fn report(&self, cell: SiteId, q: &Site) -> Result<Vec<VertexId>> {
        let mut out = Vec::new();
        for id in self.chains.get(&cell).into_iter().flatten() {
            out.extend(self.blocks[*id as usize].as_ref().unwrap().dcr.report(q)?);
        }
        Ok(out)
    }

    /// Full-rescan comparison: Γ, every chain and every block's contents.
    pub fn check(&self, d: &Diagram) -> Result<()> {
        let t = d.threshold();
        for c in d.cell_ids() {
            let want = d.is_sentinel(c) || d.cell_size(c) > t;
            if d.cell(c).is_big != want {
                return Err(structure_err!("cell {c} of size {} flagged big={} at threshold {t}", d.cell_size(c), d.cell(c).is_big));
            }
            if d.cell(c).is_big != self.gamma.contains(c) {
                return Err(structure_err!("cell {c}: big flag and big-cell graph disagree"));
            }
        }
        let fresh = BigCellGraph::from_scratch(d);
        if fresh.labeled() != self.gamma.labeled() || fresh.cells != self.gamma.cells {
            return Err(structure_err!("big-cell graph differs from a full rescan"));
        }
        let mut seen = 0;
        for c in d.cell_ids() {
            let nodes = d.boundary_nodes(c);
            let tagged: Vec<(NodeId, u32)> = nodes.iter().filter_map(|&n| d.forest.tag(n).map(|id| (n, id))).collect();
            if !d.cell(c).is_big {
                if !tagged.is_empty() || self.chains.contains_key(&c) {
                    return Err(structure_err!("small cell {c} carries blocks"));
                }
                continue;
            }
            if tagged.is_empty() {
                return Err(structure_err!("big cell {c} has no blocks"));
            }
            let ids: BTreeSet<u32> = tagged.iter().map(|x| x.1).collect();
            if self.chains.get(&c) != Some(&ids) {
                return Err(structure_err!("chain of cell {c} does not match its tagged nodes"));
            }
            for &(n, id) in &tagged {
                let b = self.block(id).ok_or_else(|| structure_err!("tag {id} names no block"))?;
                if b.start != n || b.cell != c {
                    return Err(structure_err!("block {id} start or cell mismatch"));
                }
                let range = self.range_of(d, id);
                if b.len != range.len() {
                    return Err(structure_err!("block {id} of cell {c} has stale length"));
                }
                if b.dcr.sorted() != Self::scan(d, c, &range).sorted() {
                    return Err(structure_err!("block {id} of cell {c} differs from a rescan"));
                }
                seen += 1;
            }
        }
        if seen != self.block_count() {
            return Err(structure_err!("{} blocks allocated but {seen} reachable", self.block_count()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::Voronoi;
    use crate::geometry::COORD_BOUND;

    fn s(id: u32, x: i64, y: i64) -> Site {
        Site::new(id, x, y)
    }

    fn built(n: usize, seed: u64) -> Voronoi {
        let mut v = Voronoi::new(COORD_BOUND).unwrap();
        let mut state = seed;
        let mut added = 0;
        while added < n {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let (x, y) = ((state >> 33) as i64 % 2000 - 1000, (state >> 17) as i64 % 2000 - 1000);
            if v.insert(x, y).is_ok() {
                added += 1;
            }
        }
        v
    }

    #[test]
    fn dcr_examples() {
        let mut dcr = Dcr::new();
        let c1 = SiteTriple::new(s(0, 5, 0), s(1, 0, 5), s(2, -5, 0)).unwrap();
        let c2 = SiteTriple::new(s(3, 13, 0), s(4, 10, 3), s(5, 7, 0)).unwrap();
        dcr.insert(VertexId(1), c1).unwrap();
        dcr.insert(VertexId(2), c2).unwrap();
        assert!(dcr.insert(VertexId(1), c2).is_err());
        assert_eq!(dcr.report(&s(9, 1, 0)).unwrap(), vec![VertexId(1)]);
        assert_eq!(dcr.report(&s(9, 8, 0)).unwrap(), vec![VertexId(2)]);
        assert!(dcr.report(&s(9, 6, 0)).unwrap().is_empty());
        assert!(matches!(dcr.report(&s(9, 3, 4)), Err(Error::Degeneracy(_))));
        dcr.delete(VertexId(1)).unwrap();
        assert!(dcr.delete(VertexId(1)).is_err());
        assert!(dcr.report(&s(9, 1, 0)).unwrap().is_empty());
        assert_eq!(dcr.len(), 1);
    }

    #[test]
    fn gamma_split_and_join_are_inverse() {
        let [a, b, c, e, n] = [10, 11, 12, 13, 14].map(SiteId);
        let mut g = BigCellGraph::new();
        for x in [a, b, c, e] {
            g.add_vertex(x);
        }
        g.set_edge(a, b, VertexId(1), VertexId(2)).unwrap();
        g.set_edge(a, c, VertexId(3), VertexId(4)).unwrap();
        g.set_edge(b, e, VertexId(5), VertexId(6)).unwrap();
        assert!(g.set_edge(a, a, VertexId(1), VertexId(2)).is_err());
        assert!(g.set_edge(a, n, VertexId(1), VertexId(2)).is_err());
        let before = g.labeled();

        g.add_vertex(n);
        g.gamma_split(a, n, &[c], VertexId(7), VertexId(8)).unwrap();
        assert_eq!(g.edge(n, c), Some((VertexId(3), VertexId(4))));
        assert_eq!(g.edge(a, c), None);
        assert_eq!(g.edge(a, n), Some((VertexId(7), VertexId(8))));

        let rec = g.gamma_join(a, n).unwrap();
        assert_eq!(rec.edge, (VertexId(7), VertexId(8)));
        assert_eq!(rec.moved, vec![(c, (VertexId(3), VertexId(4)))]);
        assert!(!g.contains(n));
        assert_eq!(g.labeled(), before);
        assert!(g.gamma_join(c, e).is_err());
        assert!(g.gamma_split(n, a, &[], VertexId(1), VertexId(2)).is_err());
    }

    #[test]
    fn gamma_matches_rescan() {
        for seed in 1..6 {
            let v = built(50, seed);
            let d = v.diagram();
            let g = &v.index().gamma;
            let fresh = BigCellGraph::from_scratch(d);
            assert_eq!(g.labeled(), fresh.labeled());
            assert_eq!(g.cells().collect::<Vec<_>>(), fresh.cells().collect::<Vec<_>>());
            for c in d.cell_ids() {
                assert_eq!(g.contains(c), d.cell_size(c) > d.threshold() || d.is_sentinel(c));
            }
            v.index().check(d).unwrap();
        }
    }

    #[test]
    fn reports_match_brute_force() {
        let v = built(60, 9);
        let (d, idx) = (v.diagram(), v.index());
        for c in idx.gamma.cells().collect::<Vec<_>>() {
            let paws: BTreeSet<VertexId> = d.paws(c).into_iter().map(|(p, _)| p).filter(|&p| BigCellIndex::is_relevant(d, p)).collect();
            for (qx, qy) in [(1, 2), (-333, 500), (777, -12), (0, -999), (401, 403)] {
                let q = s(999, qx, qy);
                let mut got = idx.report(c, &q).unwrap();
                got.sort();
                let want: Vec<VertexId> = paws
                    .iter()
                    .copied()
                    .filter(|&p| side_of_circle(&d.vertex_triple(p).unwrap(), &q) == CircleSide::Inside)
                    .collect();
                assert_eq!(got, want, "cell {c}");
            }
        }
    }

    #[test]
    fn rebuild_is_idempotent() {
        let v = built(80, 4);
        let mut d = v.diagram().clone();
        let mut idx = v.index().clone();
        let snapshot = |idx: &BigCellIndex| {
            let mut out: Vec<_> = idx.blocks.iter().flatten().map(|b| (b.cell, b.start, b.len, b.dcr.sorted())).collect();
            out.sort_by_key(|e| (e.0, e.1));
            out
        };
        let rebuild_all = |d: &mut Diagram, idx: &mut BigCellIndex| {
            let ids: Vec<u32> = idx.chains.values().flatten().copied().collect();
            for id in ids {
                if idx.block(id).is_some() {
                    idx.rebuild_block(d, id);
                }
            }
        };
        rebuild_all(&mut d, &mut idx);
        idx.check(&d).unwrap();
        let first = snapshot(&idx);
        rebuild_all(&mut d, &mut idx);
        idx.check(&d).unwrap();
        assert_eq!(snapshot(&idx), first);
    }
}
