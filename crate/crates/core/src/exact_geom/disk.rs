use std::cmp::Ordering;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::arc::{bbox_overlap, canonical_polyline};
use super::coord::{orient, signed_area2, Coord};
use super::rational::Rational;
use super::segment::{between, on_segment, seg_intersect, IntersectionResult, Segment};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DiskError {
    #[error("a disk boundary needs at least three non-collinear vertices")]
    TooFewVertices,
    #[error("boundary is not simple: edges {0} and {1} meet")]
    NotSimple(usize, usize),
    #[error("boundary encloses zero area")]
    ZeroArea,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Location {
    Inside,
    OnBoundary,
    Outside,
}

/// A polygonal disk: the closed region bounded by a simple polygon, stored
/// counterclockwise with collinear vertices removed.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PLDisk {
    boundary: Vec<Coord>,
}

impl PLDisk {
    /// Accepts either orientation; reorients to counterclockwise.
    pub fn new(boundary: Vec<Coord>) -> Result<Self, DiskError> {
        let ring = canonical_ring(boundary);
        if ring.len() < 3 {
            return Err(DiskError::TooFewVertices);
        }
        if let Some((i, j)) = ring_self_intersection(&ring) {
            return Err(DiskError::NotSimple(i, j));
        }
        Self::oriented(ring)
    }

    /// Skips the simplicity check.
    pub fn new_unchecked(boundary: Vec<Coord>) -> Self {
        let ring = canonical_ring(boundary);
        Self::oriented(ring).expect("degenerate disk")
    }

    fn oriented(mut ring: Vec<Coord>) -> Result<Self, DiskError> {
        let a = signed_area2(&ring);
        match a.cmp(&Rational::zero()) {
            Ordering::Equal => Err(DiskError::ZeroArea),
            Ordering::Less => {
                ring.reverse();
                Ok(Self { boundary: rotate_to_min(ring) })
            }
            Ordering::Greater => Ok(Self { boundary: rotate_to_min(ring) }),
        }
    }

    /// Axis-parallel rectangle `[x0, x1] × [y0, y1]`.
    pub fn rect(x0: Rational, y0: Rational, x1: Rational, y1: Rational) -> Self {
        Self::new_unchecked(vec![
            Coord::new(x0.clone(), y0.clone()),
            Coord::new(x1.clone(), y0),
            Coord::new(x1, y1.clone()),
            Coord::new(x0, y1),
        ])
    }

    pub fn boundary(&self) -> &[Coord] {
        &self.boundary
    }

    pub fn edges(&self) -> impl Iterator<Item = Segment> + '_ {
        let n = self.boundary.len();
        (0..n).map(move |i| Segment::new(self.boundary[i].clone(), self.boundary[(i + 1) % n].clone()))
    }

    pub fn area2(&self) -> Rational {
        signed_area2(&self.boundary)
    }

    pub fn bbox(&self) -> (Coord, Coord) {
        bbox_of(&self.boundary)
    }

    pub fn locate(&self, p: &Coord) -> Location {
        point_in_ring(p, &self.boundary)
    }

    pub fn contains(&self, p: &Coord) -> bool {
        self.locate(p) != Location::Outside
    }
}

pub fn point_in_disk(p: &Coord, d: &PLDisk) -> Location {
    d.locate(p)
}

/// Ray-crossing classification against a closed ring (either orientation).
/// Uses the half-open rule on the rightward ray so vertices are counted once.
pub fn point_in_ring(p: &Coord, ring: &[Coord]) -> Location {
    let n = ring.len();
    let mut inside = false;
    for i in 0..n {
        let a = &ring[i];
        let b = &ring[(i + 1) % n];
        if !between(&a.y, &b.y, &p.y) {
            continue;
        }
        if on_segment(a, b, p) {
            return Location::OnBoundary;
        }
        if (a.y > p.y) != (b.y > p.y) {
            // Sign of the crossing's x relative to p.x, decided by orientation.
            let o = orient(a, b, p);
            let crosses_right = if b.y > a.y { o == Ordering::Greater } else { o == Ordering::Less };
            if crosses_right {
                inside = !inside;
            }
        }
    }
    if inside {
        Location::Inside
    } else {
        Location::Outside
    }
}

/// Winding number of a closed ring around a point not on it.
pub fn winding_number(p: &Coord, ring: &[Coord]) -> i64 {
    let n = ring.len();
    let mut w = 0;
    for i in 0..n {
        let a = &ring[i];
        let b = &ring[(i + 1) % n];
        if a.y <= p.y {
            if b.y > p.y && orient(a, b, p) == Ordering::Greater {
                w += 1;
            }
        } else if b.y <= p.y && orient(a, b, p) == Ordering::Less {
            w -= 1;
        }
    }
    w
}

pub fn bbox_of(pts: &[Coord]) -> (Coord, Coord) {
    let mut lo = pts[0].clone();
    let mut hi = pts[0].clone();
    for p in &pts[1..] {
        if p.x < lo.x {
            lo.x = p.x.clone();
        }
        if p.y < lo.y {
            lo.y = p.y.clone();
        }
        if p.x > hi.x {
            hi.x = p.x.clone();
        }
        if p.y > hi.y {
            hi.y = p.y.clone();
        }
    }
    (lo, hi)
}

/// Removes repeated and straight-through vertices from a closed ring.
pub fn canonical_ring(boundary: Vec<Coord>) -> Vec<Coord> {
    let mut ring = canonical_polyline(boundary);
    while ring.len() > 1 && ring.first() == ring.last() {
        ring.pop();
    }
    loop {
        let n = ring.len();
        if n < 3 {
            return ring;
        }
        let mut removed = false;
        for i in 0..n {
            let a = &ring[(i + n - 1) % n];
            let b = &ring[i];
            let c = &ring[(i + 1) % n];
            if orient(a, b, c) == Ordering::Equal && (b - a).dot(&(c - b)) > Rational::zero() {
                ring.remove(i);
                removed = true;
                break;
            }
        }
        if !removed {
            return ring;
        }
    }
}

/// Starts the ring at its lexicographically smallest vertex.
pub fn rotate_to_min(mut ring: Vec<Coord>) -> Vec<Coord> {
    if let Some((k, _)) = ring.iter().enumerate().min_by(|a, b| a.1.cmp(b.1)) {
        ring.rotate_left(k);
    }
    ring
}

/// First pair of ring edges that meet other than at the vertex shared by
/// adjacent edges.
pub fn ring_self_intersection(ring: &[Coord]) -> Option<(usize, usize)> {
    let n = ring.len();
    let edges: Vec<Segment> = (0..n).map(|i| Segment::new(ring[i].clone(), ring[(i + 1) % n].clone())).collect();
    for i in 0..n {
        for j in (i + 1)..n {
            if !bbox_overlap(&edges[i], &edges[j]) {
                continue;
            }
            let adjacent_fwd = j == i + 1;
            let adjacent_wrap = i == 0 && j == n - 1;
            match seg_intersect(&edges[i], &edges[j]) {
                IntersectionResult::Empty => {}
                IntersectionResult::Point(p) if adjacent_fwd && p == edges[i].q => {}
                IntersectionResult::Point(p) if adjacent_wrap && p == edges[i].p => {}
                _ => return Some((i, j)),
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_geom::rational::int;

    fn sq4() -> PLDisk {
        PLDisk::rect(int(0), int(0), int(4), int(4))
    }

    #[test]
    fn classify_square() {
        assert_eq!(point_in_disk(&Coord::from_ints(1, 1), &sq4()), Location::Inside);
        assert_eq!(point_in_disk(&Coord::from_ints(0, 2), &sq4()), Location::OnBoundary);
        assert_eq!(point_in_disk(&Coord::from_ints(5, 5), &sq4()), Location::Outside);
        assert_eq!(point_in_disk(&Coord::from_ints(4, 4), &sq4()), Location::OnBoundary);
        assert_eq!(point_in_disk(&Coord::from_ints(-1, 4), &sq4()), Location::Outside);
        assert_eq!(point_in_disk(&Coord::from_ints(-1, 0), &sq4()), Location::Outside);
    }

    #[test]
    fn reorients_clockwise_input() {
        let d = PLDisk::new(vec![
            Coord::from_ints(0, 0),
            Coord::from_ints(0, 1),
            Coord::from_ints(1, 1),
            Coord::from_ints(1, 0),
        ])
        .unwrap();
        assert!(d.area2() > Rational::zero());
        assert_eq!(d.boundary()[0], Coord::from_ints(0, 0));
    }

    #[test]
    fn rejects_bowtie() {
        let r = PLDisk::new(vec![
            Coord::from_ints(0, 0),
            Coord::from_ints(1, 1),
            Coord::from_ints(1, 0),
            Coord::from_ints(0, 1),
        ]);
        assert!(matches!(r, Err(DiskError::NotSimple(_, _))));
    }

    #[test]
    fn vertex_on_ray_counted_once() {
        // Diamond with a vertex at the height of the query point.
        let d = PLDisk::new(vec![
            Coord::from_ints(0, -2),
            Coord::from_ints(2, 0),
            Coord::from_ints(0, 2),
            Coord::from_ints(-2, 0),
        ])
        .unwrap();
        assert_eq!(d.locate(&Coord::from_ints(0, 0)), Location::Inside);
        assert_eq!(d.locate(&Coord::from_ints(-3, 0)), Location::Outside);
        assert_eq!(d.locate(&Coord::from_ints(3, 0)), Location::Outside);
    }
}
