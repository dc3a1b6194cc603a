//! Exact predicates over integer sites.
//!
//! Every geometric decision in the crate goes through [`orientation`] or
//! [`side_of_circle`]. Both evaluate their determinants in `i128`, which is
//! exact for all coordinates up to the sentinel magnitude (`16 * COORD_BOUND`).

use std::cmp::Ordering;
use std::fmt;

use num_integer::Integer;

use crate::error::{Error, Result};

/// Largest admissible absolute value of a user coordinate.
pub const COORD_BOUND: i64 = 1 << 20;

/// Distance of the sentinel sites from the origin, in units of `COORD_BOUND`.
pub const SENTINEL_SCALE: i64 = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SiteId(pub u32);

impl SiteId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for SiteId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Site {
    pub id: SiteId,
    pub x: i64,
    pub y: i64,
}

impl Site {
    pub fn new(id: u32, x: i64, y: i64) -> Self {
        Site { id: SiteId(id), x, y }
    }

    pub fn dist2(&self, qx: i64, qy: i64) -> i128 {
        let dx = (self.x - qx) as i128;
        let dy = (self.y - qy) as i128;
        dx * dx + dy * dy
    }
}

/// The three sentinel sites, counterclockwise, enclosing the box
/// `[-bound, bound]^2` with a wide margin.
pub fn sentinel_sites(bound: i64) -> [Site; 3] {
    let r = SENTINEL_SCALE * bound;
    [
        Site::new(0, -r, -r),
        Site::new(1, r, -r),
        Site::new(2, 0, r),
    ]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Orientation {
    Ccw,
    Cw,
    Collinear,
}

pub fn orient_det(a: &Site, b: &Site, c: &Site) -> i128 {
    let bx = (b.x - a.x) as i128;
    let by = (b.y - a.y) as i128;
    let cx = (c.x - a.x) as i128;
    let cy = (c.y - a.y) as i128;
    bx * cy - by * cx
}

pub fn orientation(a: &Site, b: &Site, c: &Site) -> Orientation {
    match orient_det(a, b, c).cmp(&0) {
        Ordering::Greater => Orientation::Ccw,
        Ordering::Less => Orientation::Cw,
        Ordering::Equal => Orientation::Collinear,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CircleSide {
    Inside,
    On,
    Outside,
}

/// Three distinct sites in counterclockwise order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SiteTriple {
    sites: [Site; 3],
}

impl SiteTriple {
    /// Normalizes to counterclockwise order. Fails on collinear input.
    pub fn new(a: Site, b: Site, c: Site) -> Result<Self> {
        match orientation(&a, &b, &c) {
            Orientation::Ccw => Ok(SiteTriple { sites: [a, b, c] }),
            Orientation::Cw => Ok(SiteTriple { sites: [a, c, b] }),
            Orientation::Collinear => Err(Error::Degeneracy(format!(
                "sites {}, {}, {} are collinear",
                a.id, b.id, c.id
            ))),
        }
    }

    pub fn sites(&self) -> &[Site; 3] {
        &self.sites
    }

    pub fn contains(&self, id: SiteId) -> bool {
        self.sites.iter().any(|s| s.id == id)
    }

    /// Ids in counterclockwise order, rotated to start at the smallest id.
    pub fn key(&self) -> TripleKey {
        let ids = [self.sites[0].id, self.sites[1].id, self.sites[2].id];
        TripleKey::from_ccw(ids)
    }
}

/// Canonical identity of a Voronoi vertex: its defining site ids in
/// counterclockwise order starting from the smallest.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TripleKey(pub [SiteId; 3]);

impl TripleKey {
    pub fn from_ccw(ids: [SiteId; 3]) -> Self {
        let m = (0..3).min_by_key(|&i| ids[i]).unwrap();
        TripleKey([ids[m], ids[(m + 1) % 3], ids[(m + 2) % 3]])
    }

    pub fn shares_pair(&self, other: &TripleKey) -> Option<(SiteId, SiteId)> {
        let common: Vec<SiteId> = self.0.iter().copied().filter(|s| other.0.contains(s)).collect();
        match common[..] {
            [a, b] => Some((a.min(b), a.max(b))),
            _ => None,
        }
    }
}

impl fmt::Display for TripleKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{}", self.0[0], self.0[1], self.0[2])
    }
}

/// Raw incircle determinant for a counterclockwise triple. Positive means
/// `q` is strictly inside.
fn incircle_det(a: &Site, b: &Site, c: &Site, q: &Site) -> i128 {
    let adx = (a.x - q.x) as i128;
    let ady = (a.y - q.y) as i128;
    let bdx = (b.x - q.x) as i128;
    let bdy = (b.y - q.y) as i128;
    let cdx = (c.x - q.x) as i128;
    let cdy = (c.y - q.y) as i128;
    let alift = adx * adx + ady * ady;
    let blift = bdx * bdx + bdy * bdy;
    let clift = cdx * cdx + cdy * cdy;
    alift * (bdx * cdy - cdx * bdy) + blift * (cdx * ady - adx * cdy) + clift * (adx * bdy - bdx * ady)
}

pub fn side_of_circle(t: &SiteTriple, q: &Site) -> CircleSide {
    let [a, b, c] = &t.sites;
    match incircle_det(a, b, c, q).cmp(&0) {
        Ordering::Greater => CircleSide::Inside,
        Ordering::Less => CircleSide::Outside,
        Ordering::Equal => CircleSide::On,
    }
}

/// Exact rational number with positive denominator, always reduced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Rational {
    num: i128,
    den: i128,
}

impl Rational {
    pub fn new(num: i128, den: i128) -> Self {
        assert!(den != 0, "zero denominator");
        let g = num.gcd(&den);
        let sign = if den < 0 { -1 } else { 1 };
        Rational { num: sign * num / g, den: sign * den / g }
    }

    pub fn integer(n: i128) -> Self {
        Rational { num: n, den: 1 }
    }

    pub fn numer(&self) -> i128 {
        self.num
    }

    pub fn denom(&self) -> i128 {
        self.den
    }

    pub fn to_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

/// Center of the circle through the triple. Export only; never used to
/// decide anything.
pub fn circumcenter(t: &SiteTriple) -> (Rational, Rational) {
    let [a, b, c] = &t.sites;
    let bx = (b.x - a.x) as i128;
    let by = (b.y - a.y) as i128;
    let cx = (c.x - a.x) as i128;
    let cy = (c.y - a.y) as i128;
    let d = 2 * (bx * cy - by * cx);
    let b2 = bx * bx + by * by;
    let c2 = cx * cx + cy * cy;
    let ux = cy * b2 - by * c2;
    let uy = bx * c2 - cx * b2;
    (
        Rational::new(ux + a.x as i128 * d, d),
        Rational::new(uy + a.y as i128 * d, d),
    )
}

/// Circumcenter of three arbitrary sites, rejecting collinear input.
pub fn circumcenter_of(a: Site, b: Site, c: Site) -> Result<(Rational, Rational)> {
    Ok(circumcenter(&SiteTriple::new(a, b, c)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(id: u32, x: i64, y: i64) -> Site {
        Site::new(id, x, y)
    }

    #[test]
    fn orientation_examples() {
        assert_eq!(orientation(&s(0, 0, 0), &s(1, 1, 0), &s(2, 0, 1)), Orientation::Ccw);
        assert_eq!(orientation(&s(0, 0, 0), &s(1, 1, 1), &s(2, 2, 2)), Orientation::Collinear);
        assert_eq!(orientation(&s(0, 0, 0), &s(1, 0, 1), &s(2, 1, 0)), Orientation::Cw);
    }

    #[test]
    fn side_of_circle_examples() {
        let t = SiteTriple::new(s(0, 0, 0), s(1, 4, 0), s(2, 0, 4)).unwrap();
        assert_eq!(side_of_circle(&t, &s(3, 1, 1)), CircleSide::Inside);
        assert_eq!(side_of_circle(&t, &s(3, 5, 5)), CircleSide::Outside);
        assert_eq!(side_of_circle(&t, &s(3, 4, 4)), CircleSide::On);
    }

    #[test]
    fn circumcenter_examples() {
        let (x, y) = circumcenter_of(s(0, 0, 0), s(1, 2, 0), s(2, 0, 2)).unwrap();
        assert_eq!((x, y), (Rational::integer(1), Rational::integer(1)));
        let (x, y) = circumcenter_of(s(0, 0, 0), s(1, 10, 0), s(2, 5, 8)).unwrap();
        assert_eq!(x, Rational::integer(5));
        assert_eq!(y, Rational::new(39, 16));
        assert!(matches!(
            circumcenter_of(s(0, 0, 0), s(1, 1, 0), s(2, 2, 0)),
            Err(Error::Degeneracy(_))
        ));
    }

    #[test]
    fn key_rotates_to_smallest() {
        let t = SiteTriple::new(s(7, 0, 0), s(3, 4, 0), s(5, 0, 4)).unwrap();
        assert_eq!(t.key(), TripleKey([SiteId(3), SiteId(5), SiteId(7)]));
        let t = SiteTriple::new(s(7, 0, 0), s(5, 0, 4), s(3, 4, 0)).unwrap();
        assert_eq!(t.key(), TripleKey([SiteId(3), SiteId(5), SiteId(7)]));
    }

    #[test]
    fn sentinel_extremes_fit() {
        // Worst case: the three sentinels and a query in the far corner.
        let [a, b, c] = sentinel_sites(COORD_BOUND);
        let t = SiteTriple::new(a, b, c).unwrap();
        let q = s(9, COORD_BOUND, COORD_BOUND);
        assert_eq!(side_of_circle(&t, &q), CircleSide::Inside);
        let far = s(9, -COORD_BOUND, COORD_BOUND);
        let t2 = SiteTriple::new(a, b, far).unwrap();
        let _ = side_of_circle(&t2, &c);
    }

    fn scaled_dist2(cx: Rational, cy: Rational, p: &Site) -> i128 {
        // Both coordinates share the reduced denominators; compare over their product.
        let d = cx.denom() * cy.denom();
        let dx = p.x as i128 * d - cx.numer() * cy.denom();
        let dy = p.y as i128 * d - cy.numer() * cx.denom();
        dx * dx + dy * dy
    }

    proptest::proptest! {
        #[test]
        fn predicates_ignore_permutation(pts in proptest::array::uniform4((-1000i64..1000, -1000i64..1000))) {
            let [a, b, c, q] = pts;
            let (a, b, c, q) = (s(0, a.0, a.1), s(1, b.0, b.1), s(2, c.0, c.1), s(3, q.0, q.1));
            let Ok(t) = SiteTriple::new(a, b, c) else {
                proptest::prop_assume!(false);
                unreachable!()
            };
            let side = side_of_circle(&t, &q);
            for (x, y, z) in [(a, c, b), (b, a, c), (b, c, a), (c, a, b), (c, b, a)] {
                let u = SiteTriple::new(x, y, z).unwrap();
                proptest::prop_assert_eq!(side_of_circle(&u, &q), side);
                proptest::prop_assert_eq!(u.key(), t.key());
                proptest::prop_assert_eq!(circumcenter(&u), circumcenter(&t));
            }
            let flipped = orientation(&b, &a, &c);
            proptest::prop_assert_eq!(orientation(&a, &b, &c) == Orientation::Ccw, flipped == Orientation::Cw);
        }

        #[test]
        fn incircle_agrees_with_exact_circumcenter(pts in proptest::array::uniform4((-300i64..300, -300i64..300))) {
            let [a, b, c, q] = pts;
            let (a, b, c, q) = (s(0, a.0, a.1), s(1, b.0, b.1), s(2, c.0, c.1), s(3, q.0, q.1));
            let Ok(t) = SiteTriple::new(a, b, c) else {
                proptest::prop_assume!(false);
                unreachable!()
            };
            let (cx, cy) = circumcenter(&t);
            let r = scaled_dist2(cx, cy, &a);
            proptest::prop_assert_eq!(scaled_dist2(cx, cy, &b), r);
            let expect = match scaled_dist2(cx, cy, &q).cmp(&r) {
                Ordering::Less => CircleSide::Inside,
                Ordering::Equal => CircleSide::On,
                Ordering::Greater => CircleSide::Outside,
            };
            proptest::prop_assert_eq!(side_of_circle(&t, &q), expect);
        }
    }

    #[test]
    fn lattice_circle_points_are_on() {
        let t = SiteTriple::new(s(0, 3, 4), s(1, -5, 0), s(2, 0, -5)).unwrap();
        for (i, &(x, y)) in [(4, 3), (-3, -4), (5, 0), (0, 5), (-4, 3)].iter().enumerate() {
            assert_eq!(side_of_circle(&t, &s(10 + i as u32, x, y)), CircleSide::On);
        }
        assert_eq!(side_of_circle(&t, &s(20, 0, 0)), CircleSide::Inside);
        assert_eq!(side_of_circle(&t, &s(21, 4, 4)), CircleSide::Outside);
        assert_eq!(circumcenter(&t), (Rational::integer(0), Rational::integer(0)));
    }
}
