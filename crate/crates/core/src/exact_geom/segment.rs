use std::cmp::Ordering;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::coord::{orient, Coord};
use super::rational::Rational;

/// A closed line segment with distinct endpoints.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Segment {
    pub p: Coord,
    pub q: Coord,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IntersectionResult {
    Empty,
    Point(Coord),
    /// Collinear overlap; endpoints are in lexicographic order.
    Overlap(Segment),
}

impl Segment {
    /// Panics if `p == q`.
    pub fn new(p: Coord, q: Coord) -> Self {
        assert!(p != q, "degenerate segment at {p:?}");
        Self { p, q }
    }

    pub fn try_new(p: Coord, q: Coord) -> Option<Self> {
        (p != q).then_some(Self { p, q })
    }

    pub fn reversed(&self) -> Segment {
        Segment { p: self.q.clone(), q: self.p.clone() }
    }

    pub fn len2(&self) -> Rational {
        self.p.dist2(&self.q)
    }

    pub fn dir(&self) -> Coord {
        &self.q - &self.p
    }

    /// Closed-segment membership.
    pub fn contains(&self, c: &Coord) -> bool {
        on_segment(&self.p, &self.q, c)
    }

    /// Membership in the segment minus its endpoints.
    pub fn contains_interior(&self, c: &Coord) -> bool {
        c != &self.p && c != &self.q && self.contains(c)
    }

    /// Parameter `t` with `c = p + t (q - p)`, assuming `c` lies on the line.
    pub fn param_of(&self, c: &Coord) -> Rational {
        let d = self.dir();
        (c - &self.p).dot(&d) / d.norm2()
    }

    pub fn at(&self, t: &Rational) -> Coord {
        self.p.lerp(&self.q, t)
    }

    /// Squared Euclidean distance from `c` to the closed segment.
    pub fn dist2_to_point(&self, c: &Coord) -> Rational {
        let t = self.param_of(c);
        if t <= Rational::zero() {
            c.dist2(&self.p)
        } else if t >= Rational::one() {
            c.dist2(&self.q)
        } else {
            c.dist2(&self.at(&t))
        }
    }

    /// Closest point of the segment to `c`.
    pub fn closest_point(&self, c: &Coord) -> Coord {
        let t = self.param_of(c);
        if t <= Rational::zero() {
            self.p.clone()
        } else if t >= Rational::one() {
            self.q.clone()
        } else {
            self.at(&t)
        }
    }
}

/// `c` lies on the closed segment `[a, b]`.
pub fn on_segment(a: &Coord, b: &Coord, c: &Coord) -> bool {
    between(&a.x, &b.x, &c.x) && between(&a.y, &b.y, &c.y) && orient(a, b, c) == Ordering::Equal
}

/// `c` lies in the closed interval spanned by `a` and `b`.
pub fn between(a: &Rational, b: &Rational, c: &Rational) -> bool {
    if a <= b {
        a <= c && c <= b
    } else {
        b <= c && c <= a
    }
}

/// Exact intersection of two closed segments.
pub fn seg_intersect(a: &Segment, b: &Segment) -> IntersectionResult {
    let o1 = orient(&a.p, &a.q, &b.p);
    let o2 = orient(&a.p, &a.q, &b.q);
    let o3 = orient(&b.p, &b.q, &a.p);
    let o4 = orient(&b.p, &b.q, &a.q);

    if o1 == Ordering::Equal && o2 == Ordering::Equal {
        let (a0, a1) = sorted(&a.p, &a.q);
        let (b0, b1) = sorted(&b.p, &b.q);
        let lo = a0.max(b0);
        let hi = a1.min(b1);
        return match lo.cmp(hi) {
            Ordering::Less => IntersectionResult::Overlap(Segment::new(lo.clone(), hi.clone())),
            Ordering::Equal => IntersectionResult::Point(lo.clone()),
            Ordering::Greater => IntersectionResult::Empty,
        };
    }

    if o1 != o2 && o3 != o4 {
        if o1 == Ordering::Equal {
            return IntersectionResult::Point(b.p.clone());
        }
        if o2 == Ordering::Equal {
            return IntersectionResult::Point(b.q.clone());
        }
        if o3 == Ordering::Equal {
            return IntersectionResult::Point(a.p.clone());
        }
        if o4 == Ordering::Equal {
            return IntersectionResult::Point(a.q.clone());
        }
        let d1 = a.dir();
        let d2 = b.dir();
        let t = (&b.p - &a.p).cross(&d2) / d1.cross(&d2);
        return IntersectionResult::Point(a.at(&t));
    }
    IntersectionResult::Empty
}

/// True when the segments share at least one point.
pub fn segments_touch(a: &Segment, b: &Segment) -> bool {
    !matches!(seg_intersect(a, b), IntersectionResult::Empty)
}

/// True when the segments cross at a single point interior to both.
pub fn segments_cross_properly(a: &Segment, b: &Segment) -> bool {
    let o1 = orient(&a.p, &a.q, &b.p);
    let o2 = orient(&a.p, &a.q, &b.q);
    let o3 = orient(&b.p, &b.q, &a.p);
    let o4 = orient(&b.p, &b.q, &a.q);
    o1 != Ordering::Equal
        && o2 != Ordering::Equal
        && o3 != Ordering::Equal
        && o4 != Ordering::Equal
        && o1 != o2
        && o3 != o4
}

fn sorted<'a>(p: &'a Coord, q: &'a Coord) -> (&'a Coord, &'a Coord) {
    if p <= q {
        (p, q)
    } else {
        (q, p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(a: (i64, i64), b: (i64, i64)) -> Segment {
        Segment::new(Coord::from_ints(a.0, a.1), Coord::from_ints(b.0, b.1))
    }

    #[test]
    fn perpendicular_crossing() {
        let r = seg_intersect(&s((0, 0), (2, 0)), &s((1, -1), (1, 1)));
        assert_eq!(r, IntersectionResult::Point(Coord::from_ints(1, 0)));
    }

    #[test]
    fn disjoint_collinear() {
        assert_eq!(seg_intersect(&s((0, 0), (1, 0)), &s((2, 0), (3, 0))), IntersectionResult::Empty);
    }

    #[test]
    fn collinear_overlap() {
        let r = seg_intersect(&s((0, 0), (2, 0)), &s((3, 0), (1, 0)));
        assert_eq!(r, IntersectionResult::Overlap(s((1, 0), (2, 0))));
    }

    #[test]
    fn touching_endpoints() {
        let r = seg_intersect(&s((0, 0), (1, 1)), &s((1, 1), (2, 0)));
        assert_eq!(r, IntersectionResult::Point(Coord::from_ints(1, 1)));
        let r = seg_intersect(&s((0, 0), (1, 0)), &s((1, 0), (2, 0)));
        assert_eq!(r, IntersectionResult::Point(Coord::from_ints(1, 0)));
    }

    #[test]
    fn distance_to_segment() {
        let seg = s((0, 0), (4, 0));
        assert_eq!(seg.dist2_to_point(&Coord::from_ints(2, 3)), Rational::from_integer(9.into()));
        assert_eq!(seg.dist2_to_point(&Coord::from_ints(7, 4)), Rational::from_integer(25.into()));
    }
}
