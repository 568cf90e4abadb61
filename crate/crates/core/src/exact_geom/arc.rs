use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use super::coord::{orient, Coord};
use super::segment::{seg_intersect, IntersectionResult, Segment};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ArcError {
    #[error("an arc needs at least two distinct vertices")]
    TooShort,
    #[error("polyline is not simple: segments {0} and {1} meet")]
    NotSimple(usize, usize),
}

/// A simple polygonal arc in canonical form: consecutive vertices distinct and
/// no interior vertex collinear with (and between) its neighbours.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PLArc {
    vertices: Vec<Coord>,
}

impl PLArc {
    /// Canonicalizes and checks simplicity.
    pub fn new(vertices: Vec<Coord>) -> Result<Self, ArcError> {
        let vertices = canonical_polyline(vertices);
        if vertices.len() < 2 {
            return Err(ArcError::TooShort);
        }
        if let Some((i, j)) = first_self_intersection(&vertices) {
            return Err(ArcError::NotSimple(i, j));
        }
        Ok(Self { vertices })
    }

    /// Canonicalizes without the quadratic simplicity check. For callers that
    /// construct arcs known to be simple.
    pub fn new_unchecked(vertices: Vec<Coord>) -> Self {
        let vertices = canonical_polyline(vertices);
        debug_assert!(vertices.len() >= 2);
        Self { vertices }
    }

    pub fn segment(p: Coord, q: Coord) -> Self {
        Self::new_unchecked(vec![p, q])
    }

    pub fn vertices(&self) -> &[Coord] {
        &self.vertices
    }

    pub fn into_vertices(self) -> Vec<Coord> {
        self.vertices
    }

    pub fn start(&self) -> &Coord {
        &self.vertices[0]
    }

    pub fn end(&self) -> &Coord {
        self.vertices.last().unwrap()
    }

    pub fn segments(&self) -> impl Iterator<Item = Segment> + '_ {
        self.vertices.windows(2).map(|w| Segment::new(w[0].clone(), w[1].clone()))
    }

    pub fn num_segments(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn reversed(&self) -> PLArc {
        let mut v = self.vertices.clone();
        v.reverse();
        PLArc { vertices: v }
    }

    /// Concatenation at a shared endpoint (`self.end() == other.start()`).
    /// The result is not re-checked for simplicity.
    pub fn concat(&self, other: &PLArc) -> PLArc {
        assert_eq!(self.end(), other.start(), "arcs do not share an endpoint");
        let mut v = self.vertices.clone();
        v.extend(other.vertices[1..].iter().cloned());
        PLArc::new_unchecked(v)
    }

    pub fn is_simple(&self) -> bool {
        first_self_intersection(&self.vertices).is_none()
    }

    /// Whether `c` lies on the arc.
    pub fn contains(&self, c: &Coord) -> bool {
        self.segments().any(|s| s.contains(c))
    }

    /// Canonical orientation: the lexicographically smaller endpoint first.
    pub fn normalized(&self) -> PLArc {
        if self.start() <= self.end() {
            self.clone()
        } else {
            self.reversed()
        }
    }
}

/// Removes repeated vertices and interior vertices that lie strictly between
/// their neighbours on a line.
pub fn canonical_polyline(vertices: Vec<Coord>) -> Vec<Coord> {
    let mut out: Vec<Coord> = Vec::with_capacity(vertices.len());
    for v in vertices {
        if out.last() == Some(&v) {
            continue;
        }
        while out.len() >= 2 {
            let a = &out[out.len() - 2];
            let b = &out[out.len() - 1];
            if orient(a, b, &v) == Ordering::Equal && (b - a).dot(&(&v - b)) > num_traits::Zero::zero() {
                out.pop();
            } else {
                break;
            }
        }
        out.push(v);
    }
    out
}

/// First pair of segments `(i, j)` (`i < j`) that meet outside of the shared
/// vertex allowed for consecutive segments.
pub fn first_self_intersection(vertices: &[Coord]) -> Option<(usize, usize)> {
    let segs: Vec<Segment> = vertices.windows(2).map(|w| Segment::new(w[0].clone(), w[1].clone())).collect();
    let n = segs.len();
    for i in 0..n {
        for j in (i + 1)..n {
            if !bbox_overlap(&segs[i], &segs[j]) {
                continue;
            }
            match seg_intersect(&segs[i], &segs[j]) {
                IntersectionResult::Empty => {}
                IntersectionResult::Point(p) if j == i + 1 && p == segs[i].q => {}
                _ => return Some((i, j)),
            }
        }
    }
    None
}

pub(crate) fn bbox_overlap(a: &Segment, b: &Segment) -> bool {
    let (ax0, ax1) = minmax(&a.p.x, &a.q.x);
    let (bx0, bx1) = minmax(&b.p.x, &b.q.x);
    if ax1 < bx0 || bx1 < ax0 {
        return false;
    }
    let (ay0, ay1) = minmax(&a.p.y, &a.q.y);
    let (by0, by1) = minmax(&b.p.y, &b.q.y);
    !(ay1 < by0 || by1 < ay0)
}

fn minmax<'a, T: Ord>(a: &'a T, b: &'a T) -> (&'a T, &'a T) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: i64, y: i64) -> Coord {
        Coord::from_ints(x, y)
    }

    #[test]
    fn strips_collinear_and_repeated() {
        let a = PLArc::new(vec![c(0, 0), c(1, 0), c(1, 0), c(2, 0), c(2, 1)]).unwrap();
        assert_eq!(a.vertices(), &[c(0, 0), c(2, 0), c(2, 1)]);
    }

    #[test]
    fn keeps_backtracking_vertex() {
        // A spike back along the same line is not simple and must stay visible.
        assert!(PLArc::new(vec![c(0, 0), c(2, 0), c(1, 0)]).is_err());
    }

    #[test]
    fn detects_crossing() {
        assert_eq!(
            PLArc::new(vec![c(0, 0), c(2, 0), c(2, 1), c(1, -1)]),
            Err(ArcError::NotSimple(0, 2))
        );
        assert!(PLArc::new(vec![c(0, 0), c(2, 0), c(2, 2), c(0, 2)]).is_ok());
    }

    #[test]
    fn closed_loop_is_not_an_arc() {
        assert!(PLArc::new(vec![c(0, 0), c(1, 0), c(1, 1), c(0, 0)]).is_err());
    }
}
