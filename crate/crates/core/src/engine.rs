//! Site insertion.
//!
//! Every insertion runs in two phases. Recognition walks the affected
//! region with predicates only and never mutates, so a degenerate site is
//! rejected with the structure untouched. Mutation then applies the plan
//! cell by cell in the order the cells were recognized.
//!
//! Processing one affected cell `P` with inside range `v_a..v_b`:
//! the two crossed boundary edges get a crossing vertex each (created by
//! whichever of the two incident cells comes first), the crossings are
//! linked along the new cell's boundary, every inside edge whose other cell
//! was already processed is cut, and the range moves to a fragment tree
//! owned by the new cell. Inside vertices end isolated and are dropped.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::time::{Duration, Instant};

use crate::bigcell::BigCellIndex;
use crate::diagram::{ChangeLog, Diagram, VertexId, INFINITE_VERTEX};
use crate::error::{structure_err, Error, Result};
use crate::geometry::{orientation, side_of_circle, CircleSide, Orientation, Site, SiteId, COORD_BOUND};
use crate::nn::NnIndex;
use crate::oracle::CanonicalGraph;

/// Per-insertion counters.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct InsertionStats {
    pub links: u64,
    pub cuts: u64,
    /// Existing cells whose boundary changed.
    pub cells_changed: usize,
    pub dcr_rebuilds: u64,
    pub wall_time: Duration,
    /// Vertices whose circle enclosed the new site.
    pub inside_vertices: usize,
    /// Cells dequeued during recognition.
    pub cells_visited: usize,
}

/// Inside range of one affected cell, as found by recognition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CellRange {
    pub cell: SiteId,
    pub first: VertexId,
    pub last: VertexId,
    pub len: usize,
}

/// Result of the recognition phase.
#[derive(Debug, Clone)]
pub struct InsertionPlan {
    pub site: Site,
    pub start_cell: SiteId,
    /// Affected cells in processing order.
    pub ranges: Vec<CellRange>,
    pub inside: BTreeSet<VertexId>,
    pub cells_visited: usize,
}

/// The maintained diagram with all auxiliary indices.
#[derive(Debug, Clone)]
pub struct Voronoi {
    diagram: Diagram,
    index: BigCellIndex,
    nn: NnIndex,
    last: Option<InsertionStats>,
}

struct Recognizer<'a> {
    vor: &'a Voronoi,
    s: Site,
    cache: HashMap<VertexId, bool>,
}

impl Recognizer<'_> {
    fn inside(&mut self, v: VertexId) -> Result<bool> {
        if v == INFINITE_VERTEX {
            return Ok(false);
        }
        if let Some(&b) = self.cache.get(&v) {
            return Ok(b);
        }
        let t = self.vor.diagram.vertex_triple(v)?;
        let b = match side_of_circle(&t, &self.s) {
            CircleSide::Inside => true,
            CircleSide::Outside => false,
            CircleSide::On => {
                return Err(Error::Degeneracy(format!(
                    "site ({}, {}) is cocyclic with sites {}",
                    self.s.x,
                    self.s.y,
                    t.key()
                )))
            }
        };
        self.cache.insert(v, b);
        Ok(b)
    }

    /// Maximal run of inside vertices around `seed` on `f`'s boundary.
    fn find_inside_range(&mut self, f: SiteId, seed: VertexId) -> Result<Vec<VertexId>> {
        let d = &self.vor.diagram;
        let n0 = d.node_of(seed, f).ok_or_else(|| structure_err!("seed {seed} is not on cell {f}"))?;
        if !self.inside(seed)? {
            return Err(structure_err!("seed {seed} of cell {f} is not inside"));
        }
        let mut first = n0;
        loop {
            let p = d.boundary_prev(first);
            if p == n0 {
                return Err(structure_err!("every vertex of cell {f} is inside"));
            }
            if self.inside(d.node_vertex(p))? {
                first = p;
            } else {
                break;
            }
        }
        let mut last = n0;
        loop {
            let nx = d.boundary_next(last);
            if self.inside(d.node_vertex(nx))? {
                last = nx;
            } else {
                break;
            }
        }
        let mut out = vec![d.node_vertex(first)];
        let mut cur = first;
        while cur != last {
            cur = d.boundary_next(cur);
            out.push(d.node_vertex(cur));
        }
        Ok(out)
    }

    fn small(&self, c: SiteId) -> bool {
        !self.vor.diagram.cell(c).is_big
    }

    fn run(mut self) -> Result<InsertionPlan> {
        let vor = self.vor;
        let d = &vor.diagram;
        let start_cell = vor.locate_start_cell(&self.s)?;
        let mut seed = None;
        for q in d.boundary(start_cell) {
            if self.inside(q)? {
                seed = Some(q);
                break;
            }
        }
        let seed = seed.ok_or_else(|| structure_err!("no vertex of cell {start_cell} encloses the new site"))?;

        let mut queue: VecDeque<SiteId> = vor.index.gamma.cells().collect();
        if !d.cell(start_cell).is_big {
            queue.push_back(start_cell);
        }
        let mut queued: HashSet<SiteId> = queue.iter().copied().collect();
        let mut seeds: HashMap<SiteId, VertexId> = HashMap::from([(start_cell, seed)]);
        let mut reported = HashSet::new();
        let mut ranged = HashSet::new();
        let mut ranges = Vec::new();
        let mut inside = BTreeSet::new();
        let mut visited = 0;

        let deliver = |c: SiteId,
                           v: VertexId,
                           seeds: &mut HashMap<SiteId, VertexId>,
                           queue: &mut VecDeque<SiteId>,
                           queued: &mut HashSet<SiteId>,
                           ranged: &HashSet<SiteId>| {
            seeds.entry(c).or_insert(v);
            if !ranged.contains(&c) && queued.insert(c) {
                queue.push_back(c);
            }
        };

        while let Some(f) = queue.pop_front() {
            queued.remove(&f);
            visited += 1;
            let big = d.cell(f).is_big;
            if reported.insert(f) {
                if big {
                    for p in vor.index.report(f, &self.s)? {
                        for c in d.cells_at(p).into_iter().flatten() {
                            deliver(c, p, &mut seeds, &mut queue, &mut queued, &ranged);
                        }
                    }
                } else {
                    for (p, q) in d.paws(f) {
                        if self.inside(p)? {
                            let at_q = d.cells_at(q);
                            for c in d.cells_at(p).into_iter().flatten() {
                                if at_q.contains(&Some(c)) && self.small(c) {
                                    deliver(c, p, &mut seeds, &mut queue, &mut queued, &ranged);
                                }
                            }
                        }
                    }
                }
            }
            let Some(&seed) = seeds.get(&f) else { continue };
            if !ranged.insert(f) {
                continue;
            }
            let range = self.find_inside_range(f, seed)?;
            let (first, last) = (range[0], *range.last().unwrap());
            for &v in &range {
                inside.insert(v);
                for c in d.cells_at(v).into_iter().flatten() {
                    if c != f {
                        deliver(c, v, &mut seeds, &mut queue, &mut queued, &ranged);
                    }
                }
            }
            // The cells across the two crossed edges.
            let i = d.slot_of(first, f).unwrap();
            let j = d.slot_of(last, f).unwrap();
            let left = d.cells_at(first)[(i + 1) % 3].unwrap();
            let right = d.cells_at(last)[(j + 2) % 3].unwrap();
            for nb in [left, right] {
                let (a, b) = (d.site(f), d.site(nb));
                if orientation(a, b, &self.s) == Orientation::Collinear {
                    return Err(Error::Degeneracy(format!(
                        "site ({}, {}) is collinear with sites {} and {}",
                        self.s.x, self.s.y, f, nb
                    )));
                }
            }
            if big {
                let pred = d.vertex(first).unwrap().nbr(i).unwrap();
                let succ = d.vertex(last).unwrap().nbr(j + 2).unwrap();
                for (nb, near) in [(left, [pred, first]), (right, [last, succ])] {
                    if !self.small(nb) {
                        continue;
                    }
                    for q in near {
                        let Some(p) = d.paw_at(q, f) else { continue };
                        if self.inside(p)? {
                            for c in d.cells_at(p).into_iter().flatten() {
                                if self.small(c) {
                                    deliver(c, p, &mut seeds, &mut queue, &mut queued, &ranged);
                                }
                            }
                        }
                    }
                }
            }
            ranges.push(CellRange { cell: f, first, last, len: range.len() });
        }
        for &v in &inside {
            for c in d.cells_at(v).into_iter().flatten() {
                if !ranged.contains(&c) {
                    return Err(structure_err!("cell {c} at inside vertex {v} was never recognized"));
                }
            }
        }
        Ok(InsertionPlan { site: self.s, start_cell, ranges, inside, cells_visited: visited })
    }
}

impl Voronoi {
    pub fn new(bound: i64) -> Result<Self> {
        let mut diagram = Diagram::new(bound)?;
        let index = BigCellIndex::new(&mut diagram);
        let mut nn = NnIndex::new();
        for s in diagram.sites().copied().collect::<Vec<_>>() {
            nn.insert(s)?;
        }
        Ok(Voronoi { diagram, index, nn, last: None })
    }

    pub fn with_default_bound() -> Self {
        Self::new(COORD_BOUND).expect("default bound is valid")
    }

    pub fn diagram(&self) -> &Diagram {
        &self.diagram
    }

    pub fn index(&self) -> &BigCellIndex {
        &self.index
    }

    pub fn bound(&self) -> i64 {
        self.diagram.bound()
    }

    pub fn num_sites(&self) -> usize {
        self.diagram.num_sites()
    }

    pub fn last_stats(&self) -> Option<InsertionStats> {
        self.last
    }

    pub fn change_log(&self) -> ChangeLog {
        self.diagram.change_log()
    }

    /// The cell containing `s`: that of its nearest site.
    pub fn locate_start_cell(&self, s: &Site) -> Result<SiteId> {
        Ok(self.nn.nearest(s.x, s.y)?.id)
    }

    /// Validates a candidate site against the bound and the current sites.
    pub fn admit(&self, x: i64, y: i64) -> Result<Site> {
        let b = self.diagram.bound();
        if x.abs() > b || y.abs() > b {
            return Err(Error::OutOfBounds { x, y, bound: b });
        }
        if let Some(s) = self.nn.find(x, y) {
            return Err(Error::DuplicateSite { x, y, existing: s.id });
        }
        Ok(Site::new(self.diagram.num_sites() as u32, x, y))
    }

    /// Recognition only: the plan an insertion of `(x, y)` would apply.
    pub fn recognize(&self, x: i64, y: i64) -> Result<InsertionPlan> {
        let s = self.admit(x, y)?;
        Recognizer { vor: self, s, cache: HashMap::new() }.run()
    }

    pub fn insert(&mut self, x: i64, y: i64) -> Result<InsertionStats> {
        let started = Instant::now();
        let plan = self.recognize(x, y)?;
        let log0 = self.diagram.change_log();
        let rebuilds0 = self.index.rebuilds();
        self.apply(&plan)?;
        let log1 = self.diagram.change_log();
        let stats = InsertionStats {
            links: log1.links - log0.links,
            cuts: log1.cuts - log0.cuts,
            cells_changed: plan.ranges.len(),
            dcr_rebuilds: self.index.rebuilds() - rebuilds0,
            wall_time: started.elapsed(),
            inside_vertices: plan.inside.len(),
            cells_visited: plan.cells_visited,
        };
        self.last = Some(stats);
        Ok(stats)
    }

    fn apply(&mut self, plan: &InsertionPlan) -> Result<()> {
        let t_before = self.diagram.threshold();
        let d = &mut self.diagram;
        let idx = &mut self.index;
        let new = d.add_cell(plan.site);
        idx.gamma.add_vertex(new);

        let mut crossings: Vec<VertexId> = Vec::new();
        let mut is_crossing: HashSet<VertexId> = HashSet::new();
        let mut dirty: BTreeSet<VertexId> = BTreeSet::new();
        let mut fragments = Vec::new();

        for r in &plan.ranges {
            let p = r.cell;
            // Crossing on the edge entering the range.
            let ia = d.slot_of(r.first, p).ok_or_else(|| structure_err!("{} left cell {p}", r.first))?;
            let pred = d.vertex(r.first).unwrap().nbr(ia).unwrap();
            let x_in = if is_crossing.contains(&pred) {
                d.shrink_stub(pred, 2)?;
                pred
            } else {
                let l = d.cells_at(r.first)[(ia + 1) % 3].unwrap();
                let x = d.subdivide_crossing(r.first, ia, new, p)?;
                dirty.insert(d.vertex(x).unwrap().nbr(0).unwrap());
                idx.gamma.replace_endpoint(p, l, r.first, x);
                is_crossing.insert(x);
                crossings.push(x);
                x
            };
            // Crossing on the edge leaving it.
            let jb = d.slot_of(r.last, p).ok_or_else(|| structure_err!("{} left cell {p}", r.last))?;
            let ko = (jb + 2) % 3;
            let succ = d.vertex(r.last).unwrap().nbr(ko).unwrap();
            let x_out = if is_crossing.contains(&succ) {
                d.shrink_stub(succ, 1)?;
                succ
            } else {
                let rc = d.cells_at(r.last)[ko].unwrap();
                let x = d.subdivide_crossing(r.last, ko, new, p)?;
                dirty.insert(d.vertex(x).unwrap().nbr(0).unwrap());
                idx.gamma.replace_endpoint(p, rc, r.last, x);
                is_crossing.insert(x);
                crossings.push(x);
                x
            };

            // Inside edges: cut those whose other cell is already processed.
            let n_first = d.node_of(r.first, p).unwrap();
            let n_last = d.node_of(r.last, p).unwrap();
            let mut range_nodes = vec![n_first];
            let mut moved = Vec::new();
            let mut cur = n_first;
            while cur != n_last {
                let nxt = d.boundary_next(cur);
                let (a, b) = (d.node_vertex(cur), d.node_vertex(nxt));
                let va = d.vertex(a).unwrap();
                let vb = d.vertex(b).unwrap();
                let pa = (0..3).find(|&k| va.slot(k) == Some(cur)).unwrap();
                let k = (0..3).find(|&k| vb.slot(k) == Some(nxt)).unwrap();
                let other = d.owner_cell(vb.slot(k + 1).unwrap());
                moved.push(other);
                if other == new {
                    d.cut_slots(b, k, a, (pa + 2) % 3)?;
                }
                range_nodes.push(nxt);
                cur = nxt;
            }

            d.link_slots(x_in, 2, x_out, 1)?;

            let dropped = if d.cell(p).is_big { idx.drop_blocks_at(d, &range_nodes) } else { 0 };
            let (rest, frag) = d.forest.extract_range(n_first, n_last, new);
            d.set_root(p, rest);
            fragments.push(frag);
            if dropped > 0 {
                let xo = d.node_of(x_out, p).unwrap();
                idx.add_block_start(d, xo);
            }
            if idx.gamma.contains(p) {
                idx.gamma.gamma_split(p, new, &moved, x_in, x_out)?;
            }
            dirty.insert(x_in);
            dirty.insert(x_out);
        }

        // The new cell's boundary runs through the crossings.
        let start = *crossings.first().ok_or_else(|| structure_err!("insertion crossed no edge"))?;
        let mut nodes = Vec::with_capacity(crossings.len());
        let mut cur = start;
        loop {
            let v = d.vertex(cur).unwrap();
            nodes.push(v.slot(2).unwrap());
            cur = v.nbr(1).ok_or_else(|| structure_err!("crossing {cur} is not linked"))?;
            if cur == start {
                break;
            }
            if nodes.len() > crossings.len() {
                return Err(structure_err!("new cell boundary does not close"));
            }
        }
        if nodes.len() != crossings.len() {
            return Err(structure_err!("new cell boundary visits {} of {} crossings", nodes.len(), crossings.len()));
        }
        let root = d.forest.build(&nodes, new);
        d.set_root(new, root);

        for frag in fragments {
            d.forest.release_tree(frag);
        }
        for &v in &plan.inside {
            if d.vertex(v).unwrap().degree() != 0 {
                return Err(structure_err!("inside vertex {v} still has edges"));
            }
            d.delete_vertex(v);
        }
        self.nn.insert(plan.site)?;

        // Reclassification.
        let t = self.diagram.threshold();
        let candidates: Vec<SiteId> = if t != t_before {
            self.diagram.cell_ids().collect()
        } else {
            plan.ranges.iter().map(|r| r.cell).chain([new]).collect()
        };
        let flipped = self.reclassify(&candidates, new)?;

        // Blocks to refresh: around every vertex whose neighborhood changed,
        // and wherever a flipped cell changed the relevance of a paw.
        let d = &self.diagram;
        let mut requests = Vec::new();
        let touch = |q: VertexId, not_at: Option<VertexId>, requests: &mut Vec<_>| {
            let at_other = not_at.map(|x| d.cells_at(x));
            for b in d.cells_at(q).into_iter().flatten() {
                if !d.cell(b).is_big || at_other.is_some_and(|o| o.contains(&Some(b))) {
                    continue;
                }
                requests.push(d.node_of(q, b).unwrap());
            }
        };
        for &x in &dirty {
            touch(x, None, &mut requests);
            for q in d.vertex(x).unwrap().neighbors() {
                touch(q, Some(x), &mut requests);
            }
        }
        for &c in &flipped {
            for p in d.boundary(c) {
                for q in d.vertex(p).unwrap().neighbors() {
                    touch(q, Some(p), &mut requests);
                }
            }
        }
        let mut blocks = BTreeSet::new();
        for n in requests {
            if let Some(id) = self.index.block_of(&self.diagram, n) {
                blocks.insert(id);
            }
        }
        for id in blocks {
            if self.index.block(id).is_some() {
                self.index.rebuild_block(&mut self.diagram, id);
            }
        }
        Ok(())
    }

    /// Restores `is_big == size > threshold` over `candidates`, building or
    /// tearing down Γ vertices and block chains. Returns the cells whose
    /// flag changed.
    fn reclassify(&mut self, candidates: &[SiteId], new: SiteId) -> Result<Vec<SiteId>> {
        let d = &mut self.diagram;
        let idx = &mut self.index;
        let t = d.threshold();
        let mut flipped = Vec::new();
        for &c in candidates {
            if d.is_sentinel(c) {
                continue;
            }
            let want = d.cell_size(c) > t;
            if c == new {
                // Held in Γ provisionally while the edges were moved.
                if want {
                    d.set_big(c, true);
                    idx.build_chain(d, c);
                    flipped.push(c);
                } else {
                    idx.gamma.remove_vertex(c);
                }
                continue;
            }
            if want == d.cell(c).is_big {
                continue;
            }
            d.set_big(c, want);
            if want {
                idx.gamma.add_vertex(c);
                for n in d.boundary_nodes(c) {
                    let q = d.node_vertex(n);
                    let i = d.slot_of(q, c).unwrap();
                    let p = d.vertex(q).unwrap().nbr(i).unwrap();
                    let across = d.cells_at(q)[(i + 1) % 3].unwrap();
                    if idx.gamma.contains(across) {
                        idx.gamma.set_edge(c, across, p, q)?;
                    }
                }
                idx.build_chain(d, c);
            } else {
                idx.gamma.remove_vertex(c);
                idx.drop_chain(d, c);
            }
            flipped.push(c);
        }
        Ok(flipped)
    }

    /// Structural validation plus full-rescan comparison of all indices.
    pub fn check_invariants(&self) -> Result<()> {
        self.diagram.validate()?;
        self.index.check(&self.diagram)?;
        if self.nn.len() != self.diagram.num_sites() {
            return Err(structure_err!("nearest-neighbor index holds {} of {} sites", self.nn.len(), self.diagram.num_sites()));
        }
        Ok(())
    }

    /// Brute force: every finite vertex's circle strictly excludes every
    /// site other than its own three.
    pub fn check_empty_circles(&self) -> Result<()> {
        for v in self.diagram.vertex_ids() {
            if v == INFINITE_VERTEX {
                continue;
            }
            let t = self.diagram.vertex_triple(v)?;
            for s in self.diagram.sites() {
                if !t.contains(s.id) && side_of_circle(&t, s) != CircleSide::Outside {
                    return Err(structure_err!("site {} is not outside the circle of vertex {v} ({})", s.id, t.key()));
                }
            }
        }
        Ok(())
    }

    pub fn canonical(&self) -> Result<CanonicalGraph> {
        self.diagram.canonical()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::Triangulation;

    fn lcg_points(n: usize, seed: u64, span: i64) -> Vec<(i64, i64)> {
        let mut x = seed;
        (0..n)
            .map(|_| {
                x = x.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                let a = ((x >> 33) as i64).rem_euclid(2 * span + 1) - span;
                x = x.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                let b = ((x >> 33) as i64).rem_euclid(2 * span + 1) - span;
                (a, b)
            })
            .collect()
    }

    #[test]
    fn matches_oracle_step_by_step() {
        for seed in 1..6 {
            let mut v = Voronoi::with_default_bound();
            let mut o = Triangulation::new(COORD_BOUND);
            for (i, (x, y)) in lcg_points(150, seed, 1000).into_iter().enumerate() {
                let r = o.insert(x, y);
                let e = v.insert(x, y);
                assert_eq!(r.is_ok(), e.is_ok(), "seed {seed} step {i}: {r:?} vs {e:?}");
                if e.is_err() {
                    continue;
                }
                v.check_invariants().unwrap_or_else(|err| panic!("seed {seed} step {i}: {err}"));
                assert_eq!(v.canonical().unwrap(), o.dual_canonical(), "seed {seed} step {i}");
            }
        }
    }

    fn built(n: usize, seed: u64) -> Voronoi {
        let mut v = Voronoi::with_default_bound();
        for (x, y) in lcg_points(n, seed, 1000) {
            let _ = v.insert(x, y);
        }
        v
    }

    #[test]
    fn recognition_matches_brute_force() {
        let v = built(120, 3);
        let d = v.diagram();
        let before = d.fingerprint();
        for (qx, qy) in lcg_points(60, 77, 1100) {
            let Ok(plan) = v.recognize(qx, qy) else { continue };
            let q = plan.site;
            let brute: BTreeSet<VertexId> = d
                .vertex_ids()
                .filter(|&w| w != INFINITE_VERTEX)
                .filter(|&w| side_of_circle(&d.vertex_triple(w).unwrap(), &q) == CircleSide::Inside)
                .collect();
            assert_eq!(plan.inside, brute);
            let cells: BTreeSet<SiteId> = brute.iter().flat_map(|&w| d.cells_at(w)).flatten().collect();
            assert_eq!(plan.ranges.iter().map(|r| r.cell).collect::<BTreeSet<_>>(), cells);
            for r in &plan.ranges {
                let bd = d.boundary(r.cell);
                let on: Vec<usize> = (0..bd.len()).filter(|&k| brute.contains(&bd[k])).collect();
                assert_eq!(on.len(), r.len);
                let start = bd.iter().position(|&w| w == r.first).unwrap();
                for k in 0..r.len {
                    assert!(brute.contains(&bd[(start + k) % bd.len()]), "range of cell {} is not contiguous", r.cell);
                }
                assert_eq!(bd[(start + r.len - 1) % bd.len()], r.last);
            }
            assert!(plan.ranges.iter().any(|r| r.cell == plan.start_cell));
        }
        assert_eq!(d.fingerprint(), before);
    }

    #[test]
    fn start_cell_is_nearest_site() {
        let v = built(200, 5);
        for (qx, qy) in lcg_points(100, 8, 1200) {
            let q = Site::new(u32::MAX, qx, qy);
            let want = v.diagram().sites().min_by_key(|s| (s.dist2(qx, qy), s.id)).unwrap().id;
            assert_eq!(v.locate_start_cell(&q).unwrap(), want);
        }
    }

    #[test]
    fn change_counts_follow_affected_cells() {
        let mut v = Voronoi::with_default_bound();
        let first = v.insert(0, 0).unwrap();
        assert_eq!((first.links, first.cuts, first.cells_changed), (3, 0, 3));
        for (x, y) in lcg_points(300, 12, 5000) {
            let Ok(st) = v.insert(x, y) else { continue };
            let m = st.cells_changed as u64;
            assert_eq!(m, st.inside_vertices as u64 + 2);
            assert_eq!((st.links, st.cuts), (m, m - 3));
        }
    }

    #[test]
    fn new_cells_are_classified_on_insertion() {
        let mut v = Voronoi::with_default_bound();
        v.insert(0, 0).unwrap();
        // Four sites in total, threshold 2: the new triangle cell is big.
        assert_eq!(v.diagram().threshold(), 2);
        assert!(v.diagram().cell(SiteId(3)).is_big);
        assert!(v.index().gamma.contains(SiteId(3)));
        v.insert(100, 0).unwrap();
        v.insert(50, 80).unwrap();
        v.insert(50, 30).unwrap();
        let d = v.diagram();
        assert_eq!(d.cell_size(SiteId(6)), 3);
        assert!(d.cell(SiteId(6)).is_big);
        for c in d.cell_ids() {
            assert!(!d.is_sentinel(c) || d.cell(c).is_big);
        }
    }

    #[test]
    fn threshold_change_reclassifies_untouched_cells() {
        let mut flipped = 0;
        for seed in 20..40 {
            let mut v = Voronoi::with_default_bound();
            let mut it = lcg_points(40, seed, 1000).into_iter();
            while v.diagram().num_sites() < 16 {
                let (x, y) = it.next().unwrap();
                let _ = v.insert(x, y);
            }
            assert_eq!(v.diagram().threshold(), 2);
            let d = v.diagram();
            let size3: Vec<(SiteId, BTreeSet<VertexId>)> = d
                .cell_ids()
                .filter(|&c| !d.is_sentinel(c) && d.cell_size(c) == 3)
                .map(|c| (c, d.boundary(c).into_iter().collect()))
                .collect();
            assert!(size3.iter().all(|(c, _)| d.cell(*c).is_big));
            while v.insert(it.next().unwrap().0, it.next().unwrap().1).is_err() {}
            let d = v.diagram();
            assert_eq!(d.threshold(), 3);
            for (c, b) in &size3 {
                if d.boundary(*c).into_iter().collect::<BTreeSet<_>>() == *b {
                    assert!(!d.cell(*c).is_big);
                    assert!(!v.index().gamma.contains(*c));
                    flipped += 1;
                }
            }
            v.check_invariants().unwrap();
        }
        assert!(flipped > 0);
    }

    #[test]
    fn rejections_leave_state_untouched() {
        let mut v = Voronoi::new(100).unwrap();
        for (x, y) in [(0, 0), (4, 0), (0, 4)] {
            v.insert(x, y).unwrap();
        }
        let before = format!("{v:?}");
        assert!(matches!(v.insert(4, 4), Err(Error::Degeneracy(_))));
        assert!(matches!(v.insert(0, 4), Err(Error::DuplicateSite { .. })));
        assert!(matches!(v.insert(0, 101), Err(Error::OutOfBounds { .. })));
        assert_eq!(format!("{v:?}"), before);
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(48))]
        #[test]
        fn random_sets_match_oracle(pts in proptest::collection::vec((-40i64..40, -40i64..40), 1..60)) {
            let mut v = Voronoi::new(64).unwrap();
            let mut o = Triangulation::new(64);
            for (x, y) in pts {
                let fp = v.diagram().fingerprint();
                let r = o.insert(x, y);
                let e = v.insert(x, y);
                proptest::prop_assert_eq!(r.is_ok(), e.is_ok());
                if e.is_err() {
                    proptest::prop_assert_eq!(v.diagram().fingerprint(), fp);
                    continue;
                }
                v.check_invariants().unwrap();
                proptest::prop_assert_eq!(v.canonical().unwrap(), o.dual_canonical());
            }
        }
    }
}
