//! Insertion-only nearest-neighbor index by logarithmic rebuilding.
//!
//! Layer `i` is either empty or a static kd-tree over exactly `2^i` sites.
//! Inserting works like incrementing a binary counter: the new site and all
//! full low layers are merged into the first empty layer.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::geometry::Site;

/// Static kd-tree stored as an implicit array: the median of each range is
/// its root, left half below, right half above.
#[derive(Debug, Clone)]
struct KdTree {
    pts: Vec<Site>,
}

impl KdTree {
    fn build(mut pts: Vec<Site>) -> Self {
        let n = pts.len();
        Self::arrange(&mut pts[..], 0);
        debug_assert_eq!(pts.len(), n);
        KdTree { pts }
    }

    fn arrange(pts: &mut [Site], depth: usize) {
        if pts.len() <= 1 {
            return;
        }
        let mid = pts.len() / 2;
        if depth.is_multiple_of(2) {
            pts.select_nth_unstable_by_key(mid, |s| (s.x, s.y));
        } else {
            pts.select_nth_unstable_by_key(mid, |s| (s.y, s.x));
        }
        let (lo, hi) = pts.split_at_mut(mid);
        Self::arrange(lo, depth + 1);
        Self::arrange(&mut hi[1..], depth + 1);
    }

    fn nearest(&self, qx: i64, qy: i64, best: &mut Option<(i128, Site)>) {
        Self::search(&self.pts, 0, qx, qy, best);
    }

    fn search(pts: &[Site], depth: usize, qx: i64, qy: i64, best: &mut Option<(i128, Site)>) {
        if pts.is_empty() {
            return;
        }
        let mid = pts.len() / 2;
        let p = pts[mid];
        let d = p.dist2(qx, qy);
        if best.is_none_or(|(bd, bs)| (d, p.id) < (bd, bs.id)) {
            *best = Some((d, p));
        }
        let delta = if depth.is_multiple_of(2) { qx - p.x } else { qy - p.y } as i128;
        let (near, far) = if delta < 0 {
            (&pts[..mid], &pts[mid + 1..])
        } else {
            (&pts[mid + 1..], &pts[..mid])
        };
        Self::search(near, depth + 1, qx, qy, best);
        // Equal distance must still be explored: it may hold a smaller id.
        if best.is_none_or(|(bd, _)| delta * delta <= bd) {
            Self::search(far, depth + 1, qx, qy, best);
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct NnIndex {
    layers: Vec<Option<KdTree>>,
    by_coord: HashMap<(i64, i64), Site>,
}

impl NnIndex {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.by_coord.len()
    }

    pub fn is_empty(&self) -> bool {
        self.by_coord.is_empty()
    }

    /// Sizes of the occupied layers.
    pub fn layer_sizes(&self) -> Vec<usize> {
        self.layers.iter().flatten().map(|l| l.pts.len()).collect()
    }

    pub fn find(&self, x: i64, y: i64) -> Option<Site> {
        self.by_coord.get(&(x, y)).copied()
    }

    pub fn insert(&mut self, s: Site) -> Result<()> {
        if let Some(existing) = self.find(s.x, s.y) {
            return Err(Error::DuplicateSite { x: s.x, y: s.y, existing: existing.id });
        }
        self.by_coord.insert((s.x, s.y), s);
        let mut carry = vec![s];
        let mut i = 0;
        loop {
            if i == self.layers.len() {
                self.layers.push(None);
            }
            match self.layers[i].take() {
                Some(layer) => {
                    carry.extend(layer.pts);
                    i += 1;
                }
                None => {
                    self.layers[i] = Some(KdTree::build(carry));
                    return Ok(());
                }
            }
        }
    }

    /// A site minimizing squared distance to `(qx, qy)`, smallest id on ties.
    pub fn nearest(&self, qx: i64, qy: i64) -> Result<Site> {
        let mut best = None;
        for layer in self.layers.iter().flatten() {
            layer.nearest(qx, qy, &mut best);
        }
        best.map(|(_, s)| s).ok_or(Error::EmptyIndex)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn linear(sites: &[Site], qx: i64, qy: i64) -> Site {
        *sites.iter().min_by_key(|s| (s.dist2(qx, qy), s.id)).unwrap()
    }

    #[test]
    fn basics() {
        let mut nn = NnIndex::new();
        assert_eq!(nn.nearest(0, 0), Err(Error::EmptyIndex));
        nn.insert(Site::new(0, 0, 0)).unwrap();
        assert_eq!(nn.len(), 1);
        nn.insert(Site::new(1, 10, 0)).unwrap();
        assert_eq!(nn.nearest(1, 1).unwrap().id.0, 0);
        assert!(matches!(nn.insert(Site::new(2, 10, 0)), Err(Error::DuplicateSite { .. })));
    }

    #[test]
    fn ties_prefer_smaller_id() {
        let mut nn = NnIndex::new();
        nn.insert(Site::new(4, 2, 0)).unwrap();
        nn.insert(Site::new(7, 50, 50)).unwrap();
        nn.insert(Site::new(3, 0, 0)).unwrap();
        assert_eq!(nn.nearest(1, 5).unwrap().id.0, 3);
    }

    #[test]
    fn layer_count_is_logarithmic() {
        let mut nn = NnIndex::new();
        for i in 0..1024u32 {
            nn.insert(Site::new(i, i as i64 * 3, (i as i64 * 7) % 101)).unwrap();
        }
        assert_eq!(nn.layer_sizes(), vec![1024]);
        nn.insert(Site::new(5000, -1, -1)).unwrap();
        assert_eq!(nn.layer_sizes(), vec![1, 1024]);
    }

    proptest! {
        #[test]
        fn matches_linear_scan(pts in proptest::collection::vec((-50i64..50, -50i64..50), 1..200),
                               qs in proptest::collection::vec((-60i64..60, -60i64..60), 1..20)) {
            let mut nn = NnIndex::new();
            let mut sites = Vec::new();
            for (i, &(x, y)) in pts.iter().enumerate() {
                let s = Site::new(i as u32, x, y);
                if nn.insert(s).is_ok() {
                    sites.push(s);
                }
                let (qx, qy) = qs[i % qs.len()];
                prop_assert_eq!(nn.nearest(qx, qy).unwrap(), linear(&sites, qx, qy));
            }
        }
    }
}
