//! Boundary trees: one balanced ordered tree per cell over its cyclic
//! boundary vertex sequence.
//!
//! All trees live in a single [`Forest`] arena. Nodes carry parent links and
//! subtree sizes, so a node can find its root (and through it the owning
//! cell) and its in-order rank in `O(log n)`. Balancing is a treap with
//! priorities derived from the node slot, which keeps the structure
//! deterministic across runs.

use crate::geometry::SiteId;
use crate::diagram::VertexId;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(u32);

impl NodeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

const NIL: u32 = u32::MAX;

#[derive(Debug, Clone)]
struct Node {
    vertex: VertexId,
    parent: u32,
    left: u32,
    right: u32,
    prio: u64,
    size: u32,
    /// Meaningful on roots only.
    owner: SiteId,
    /// Block start marker used by the big-cell index.
    tag: u32,
    live: bool,
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

#[derive(Debug, Clone, Default)]
pub struct Forest {
    nodes: Vec<Node>,
    free: Vec<u32>,
    generation: u64,
}

impl Forest {
    pub fn new() -> Self {
        Self::default()
    }

    /// Allocates a singleton tree.
    pub fn alloc(&mut self, vertex: VertexId, owner: SiteId) -> NodeId {
        self.generation += 1;
        let prio = splitmix(self.generation);
        let node = Node {
            vertex,
            parent: NIL,
            left: NIL,
            right: NIL,
            prio,
            size: 1,
            owner,
            tag: NIL,
            live: true,
        };
        if let Some(i) = self.free.pop() {
            self.nodes[i as usize] = node;
            NodeId(i)
        } else {
            self.nodes.push(node);
            NodeId(self.nodes.len() as u32 - 1)
        }
    }

    /// Releases a detached singleton node.
    pub fn release(&mut self, n: NodeId) {
        let node = &mut self.nodes[n.index()];
        debug_assert!(node.live);
        debug_assert!(node.parent == NIL && node.left == NIL && node.right == NIL);
        node.live = false;
        self.free.push(n.0);
    }

    /// Releases every node of the tree rooted at `root`.
    pub fn release_tree(&mut self, root: NodeId) -> Vec<VertexId> {
        let members = self.in_order(root);
        let mut out = Vec::with_capacity(members.len());
        for n in members {
            let node = &mut self.nodes[n.index()];
            out.push(node.vertex);
            node.parent = NIL;
            node.left = NIL;
            node.right = NIL;
            node.live = false;
            self.free.push(n.0);
        }
        out
    }

    pub fn live_count(&self) -> usize {
        self.nodes.len() - self.free.len()
    }

    pub fn is_live(&self, n: NodeId) -> bool {
        self.nodes.get(n.index()).is_some_and(|x| x.live)
    }

    pub fn vertex(&self, n: NodeId) -> VertexId {
        self.nodes[n.index()].vertex
    }

    pub fn tag(&self, n: NodeId) -> Option<u32> {
        let t = self.nodes[n.index()].tag;
        (t != NIL).then_some(t)
    }

    pub fn set_tag(&mut self, n: NodeId, tag: Option<u32>) {
        self.nodes[n.index()].tag = tag.unwrap_or(NIL);
    }

    pub fn root(&self, n: NodeId) -> NodeId {
        let mut cur = n.0;
        loop {
            let p = self.nodes[cur as usize].parent;
            if p == NIL {
                return NodeId(cur);
            }
            cur = p;
        }
    }

    /// The cell owning the tree that contains `n`.
    pub fn owner(&self, n: NodeId) -> SiteId {
        self.nodes[self.root(n).index()].owner
    }

    pub fn set_owner(&mut self, root: NodeId, owner: SiteId) {
        debug_assert_eq!(self.nodes[root.index()].parent, NIL);
        self.nodes[root.index()].owner = owner;
    }

    pub fn size(&self, root: NodeId) -> usize {
        self.nodes[root.index()].size as usize
    }

    fn sz(&self, i: u32) -> u32 {
        if i == NIL {
            0
        } else {
            self.nodes[i as usize].size
        }
    }

    fn pull(&mut self, i: u32) {
        let (l, r) = (self.nodes[i as usize].left, self.nodes[i as usize].right);
        self.nodes[i as usize].size = 1 + self.sz(l) + self.sz(r);
        if l != NIL {
            self.nodes[l as usize].parent = i;
        }
        if r != NIL {
            self.nodes[r as usize].parent = i;
        }
    }

    /// In-order position of `n` within its tree.
    pub fn rank(&self, n: NodeId) -> usize {
        let mut r = self.sz(self.nodes[n.index()].left) as usize;
        let mut cur = n.0;
        loop {
            let p = self.nodes[cur as usize].parent;
            if p == NIL {
                return r;
            }
            if self.nodes[p as usize].right == cur {
                r += 1 + self.sz(self.nodes[p as usize].left) as usize;
            }
            cur = p;
        }
    }

    pub fn at(&self, root: NodeId, mut k: usize) -> NodeId {
        let mut cur = root.0;
        loop {
            let l = self.nodes[cur as usize].left;
            let ls = self.sz(l) as usize;
            if k < ls {
                cur = l;
            } else if k == ls {
                return NodeId(cur);
            } else {
                k -= ls + 1;
                cur = self.nodes[cur as usize].right;
            }
        }
    }

    pub fn first(&self, root: NodeId) -> NodeId {
        let mut cur = root.0;
        while self.nodes[cur as usize].left != NIL {
            cur = self.nodes[cur as usize].left;
        }
        NodeId(cur)
    }

    pub fn last(&self, root: NodeId) -> NodeId {
        let mut cur = root.0;
        while self.nodes[cur as usize].right != NIL {
            cur = self.nodes[cur as usize].right;
        }
        NodeId(cur)
    }

    pub fn next(&self, n: NodeId) -> Option<NodeId> {
        let node = &self.nodes[n.index()];
        if node.right != NIL {
            let mut cur = node.right;
            while self.nodes[cur as usize].left != NIL {
                cur = self.nodes[cur as usize].left;
            }
            return Some(NodeId(cur));
        }
        let mut cur = n.0;
        loop {
            let p = self.nodes[cur as usize].parent;
            if p == NIL {
                return None;
            }
            if self.nodes[p as usize].left == cur {
                return Some(NodeId(p));
            }
            cur = p;
        }
    }

    pub fn prev(&self, n: NodeId) -> Option<NodeId> {
        let node = &self.nodes[n.index()];
        if node.left != NIL {
            let mut cur = node.left;
            while self.nodes[cur as usize].right != NIL {
                cur = self.nodes[cur as usize].right;
            }
            return Some(NodeId(cur));
        }
        let mut cur = n.0;
        loop {
            let p = self.nodes[cur as usize].parent;
            if p == NIL {
                return None;
            }
            if self.nodes[p as usize].right == cur {
                return Some(NodeId(p));
            }
            cur = p;
        }
    }

    /// Successor in the cyclic sequence.
    pub fn cyc_next(&self, n: NodeId) -> NodeId {
        self.next(n).unwrap_or_else(|| self.first(self.root(n)))
    }

    pub fn cyc_prev(&self, n: NodeId) -> NodeId {
        self.prev(n).unwrap_or_else(|| self.last(self.root(n)))
    }

    pub fn in_order(&self, root: NodeId) -> Vec<NodeId> {
        let mut out = Vec::with_capacity(self.size(root));
        let mut stack = Vec::new();
        let mut cur = root.0;
        while cur != NIL || !stack.is_empty() {
            while cur != NIL {
                stack.push(cur);
                cur = self.nodes[cur as usize].left;
            }
            let top = stack.pop().unwrap();
            out.push(NodeId(top));
            cur = self.nodes[top as usize].right;
        }
        out
    }

    fn merge_raw(&mut self, a: u32, b: u32) -> u32 {
        if a == NIL {
            return b;
        }
        if b == NIL {
            return a;
        }
        if self.nodes[a as usize].prio > self.nodes[b as usize].prio {
            let ar = self.nodes[a as usize].right;
            let m = self.merge_raw(ar, b);
            self.nodes[a as usize].right = m;
            self.pull(a);
            a
        } else {
            let bl = self.nodes[b as usize].left;
            let m = self.merge_raw(a, bl);
            self.nodes[b as usize].left = m;
            self.pull(b);
            b
        }
    }

    /// Splits off the first `k` nodes.
    fn split_raw(&mut self, t: u32, k: u32) -> (u32, u32) {
        if t == NIL {
            return (NIL, NIL);
        }
        let l = self.nodes[t as usize].left;
        let ls = self.sz(l);
        if k <= ls {
            let (a, b) = self.split_raw(l, k);
            self.nodes[t as usize].left = b;
            self.pull(t);
            if a != NIL {
                self.nodes[a as usize].parent = NIL;
            }
            (a, t)
        } else {
            let r = self.nodes[t as usize].right;
            let (a, b) = self.split_raw(r, k - ls - 1);
            self.nodes[t as usize].right = a;
            self.pull(t);
            if b != NIL {
                self.nodes[b as usize].parent = NIL;
            }
            (t, b)
        }
    }

    fn finish_root(&mut self, r: u32, owner: SiteId) -> Option<NodeId> {
        if r == NIL {
            return None;
        }
        self.nodes[r as usize].parent = NIL;
        self.nodes[r as usize].owner = owner;
        Some(NodeId(r))
    }

    /// Concatenates two trees; the result is owned by `owner`.
    pub fn concat(&mut self, a: Option<NodeId>, b: Option<NodeId>, owner: SiteId) -> Option<NodeId> {
        let r = self.merge_raw(a.map_or(NIL, |n| n.0), b.map_or(NIL, |n| n.0));
        self.finish_root(r, owner)
    }

    /// Splits `root` into the first `k` nodes and the rest. Both parts keep
    /// the original owner.
    pub fn split(&mut self, root: NodeId, k: usize) -> (Option<NodeId>, Option<NodeId>) {
        let owner = self.nodes[root.index()].owner;
        let (a, b) = self.split_raw(root.0, k as u32);
        (self.finish_root(a, owner), self.finish_root(b, owner))
    }

    /// Builds a tree from an ordered list of detached singletons.
    pub fn build(&mut self, nodes: &[NodeId], owner: SiteId) -> Option<NodeId> {
        let mut root = None;
        for &n in nodes {
            root = self.concat(root, Some(n), owner);
        }
        root
    }

    /// Inserts the singleton `n` at position `k` of the tree rooted at `root`.
    pub fn insert_at(&mut self, root: NodeId, k: usize, n: NodeId) -> NodeId {
        let owner = self.nodes[root.index()].owner;
        let (a, b) = self.split(root, k);
        let left = self.concat(a, Some(n), owner);
        self.concat(left, b, owner).unwrap()
    }

    /// Inserts `n` immediately before `anchor` in `anchor`'s tree.
    pub fn insert_before(&mut self, anchor: NodeId, n: NodeId) -> NodeId {
        let root = self.root(anchor);
        let k = self.rank(anchor);
        self.insert_at(root, k, n)
    }

    pub fn insert_after(&mut self, anchor: NodeId, n: NodeId) -> NodeId {
        let root = self.root(anchor);
        let k = self.rank(anchor);
        self.insert_at(root, k + 1, n)
    }

    /// Detaches `n` from its tree, returning the new root of the remainder.
    pub fn remove(&mut self, n: NodeId) -> Option<NodeId> {
        let root = self.root(n);
        let owner = self.nodes[root.index()].owner;
        let k = self.rank(n);
        let (a, rest) = self.split(root, k);
        let (mid, b) = self.split(rest.unwrap(), 1);
        debug_assert_eq!(mid, Some(n));
        self.concat(a, b, owner)
    }

    /// Removes the cyclic range `first..=last` from its tree. Returns the
    /// remainder root (owner unchanged) and the range as its own tree, with
    /// the range in cyclic order starting at `first`.
    pub fn extract_range(&mut self, first: NodeId, last: NodeId, range_owner: SiteId) -> (Option<NodeId>, NodeId) {
        let root = self.root(first);
        debug_assert_eq!(root, self.root(last));
        let owner = self.nodes[root.index()].owner;
        let r1 = self.rank(first);
        let r2 = self.rank(last);
        if r1 <= r2 {
            let (a, rest) = self.split(root, r1);
            let (mid, c) = self.split(rest.unwrap(), r2 - r1 + 1);
            let remainder = self.concat(a, c, owner);
            let mid = mid.unwrap();
            self.set_owner(mid, range_owner);
            (remainder, mid)
        } else {
            let (a, rest) = self.split(root, r2 + 1);
            let (mid, c) = self.split(rest.unwrap(), r1 - r2 - 1);
            let range = self.concat(c, a, range_owner).unwrap();
            if let Some(m) = mid {
                self.set_owner(m, owner);
            }
            (mid, range)
        }
    }

    /// Rotates the tree so that `n` becomes the first node.
    pub fn rotate_to_front(&mut self, n: NodeId) -> NodeId {
        let root = self.root(n);
        let owner = self.nodes[root.index()].owner;
        let k = self.rank(n);
        let (a, b) = self.split(root, k);
        self.concat(b, a, owner).unwrap()
    }

    /// Checks parent links, sizes and heap order below `root`.
    pub fn validate(&self, root: NodeId) -> Result<(), String> {
        if self.nodes[root.index()].parent != NIL {
            return Err(format!("node {} is not a root", root.0));
        }
        self.validate_rec(root.0).map(|_| ())
    }

    fn validate_rec(&self, i: u32) -> Result<u32, String> {
        if i == NIL {
            return Ok(0);
        }
        let node = &self.nodes[i as usize];
        if !node.live {
            return Err(format!("dead node {i} reachable"));
        }
        let mut total = 1;
        for c in [node.left, node.right] {
            if c != NIL {
                if self.nodes[c as usize].parent != i {
                    return Err(format!("parent link of {c} does not point to {i}"));
                }
                if self.nodes[c as usize].prio > node.prio {
                    return Err(format!("heap order violated at {i}"));
                }
                total += self.validate_rec(c)?;
            }
        }
        if total != node.size {
            return Err(format!("size mismatch at {i}: {} vs {total}", node.size));
        }
        Ok(total)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn make(f: &mut Forest, n: usize, owner: u32) -> (NodeId, Vec<NodeId>) {
        let nodes: Vec<NodeId> = (0..n).map(|i| f.alloc(VertexId(i as u32), SiteId(owner))).collect();
        let root = f.build(&nodes, SiteId(owner)).unwrap();
        (root, nodes)
    }

    fn verts(f: &Forest, root: NodeId) -> Vec<u32> {
        f.in_order(root).into_iter().map(|n| f.vertex(n).0).collect()
    }

    #[test]
    fn build_rank_and_owner() {
        let mut f = Forest::new();
        let (root, nodes) = make(&mut f, 50, 7);
        f.validate(root).unwrap();
        for (i, &n) in nodes.iter().enumerate() {
            assert_eq!(f.rank(n), i);
            assert_eq!(f.at(root, i), n);
            assert_eq!(f.owner(n), SiteId(7));
        }
    }

    #[test]
    fn wrapping_extract() {
        let mut f = Forest::new();
        let (_, nodes) = make(&mut f, 10, 1);
        let (rest, range) = f.extract_range(nodes[8], nodes[1], SiteId(2));
        assert_eq!(verts(&f, range), vec![8, 9, 0, 1]);
        assert_eq!(verts(&f, rest.unwrap()), (2..8).collect::<Vec<_>>());
        assert_eq!(f.owner(nodes[9]), SiteId(2));
        assert_eq!(f.owner(nodes[4]), SiteId(1));
    }

    #[test]
    fn remove_and_reinsert_restores_order() {
        let mut f = Forest::new();
        let (_, nodes) = make(&mut f, 6, 1);
        let rest = f.remove(nodes[3]).unwrap();
        assert_eq!(verts(&f, rest), vec![0, 1, 2, 4, 5]);
        let root = f.insert_after(nodes[2], nodes[3]);
        assert_eq!(verts(&f, root), (0..6).collect::<Vec<_>>());
        f.validate(root).unwrap();
    }

    proptest! {
        #[test]
        fn extract_then_reinsert_is_rotation(n in 2usize..60, a in 0usize..60, b in 0usize..60) {
            let mut f = Forest::new();
            let (_, nodes) = make(&mut f, n, 1);
            let (a, b) = (a % n, b % n);
            let (rest, range) = f.extract_range(nodes[a], nodes[b], SiteId(2));
            f.validate(range).unwrap();
            let range_v = verts(&f, range);
            let expect_len = if a <= b { b - a + 1 } else { n - a + b + 1 };
            prop_assert_eq!(range_v.len(), expect_len);
            for (i, v) in range_v.iter().enumerate() {
                prop_assert_eq!(*v as usize, (a + i) % n);
            }
            // Put it back: the remainder starts right after `b`.
            let whole = match rest {
                Some(r) => {
                    f.validate(r).unwrap();
                    let _ = r;
                    let r = f.rotate_to_front(nodes[(b + 1) % n]);
                    f.concat(Some(range), Some(r), SiteId(1)).unwrap()
                }
                None => range,
            };
            f.validate(whole).unwrap();
            let v = verts(&f, whole);
            for i in 0..n {
                prop_assert_eq!(v[(i + 1) % n] as usize, (v[i] as usize + 1) % n);
            }
        }

        #[test]
        fn cyclic_neighbors_agree_with_rank(n in 1usize..40, k in 0usize..40) {
            let mut f = Forest::new();
            let (_, nodes) = make(&mut f, n, 0);
            let k = k % n;
            prop_assert_eq!(f.cyc_next(nodes[k]), nodes[(k + 1) % n]);
            prop_assert_eq!(f.cyc_prev(nodes[k]), nodes[(k + n - 1) % n]);
        }
    }
}
