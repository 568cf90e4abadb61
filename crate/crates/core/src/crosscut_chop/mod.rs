//! Cutting simply connected regions into small Jordan disks with crosscuts:
//! thinness, spanning arcs along a square lattice, snapping arc ends onto
//! marked boundary points, rings of short crosscuts around a continuum, and
//! the nested subdivision of its complement.

pub mod plan;
pub mod ring;
pub mod snap;
pub mod span;
pub mod thin;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::exact_geom::arc::first_self_intersection;
use crate::exact_geom::coord::orient;
use crate::exact_geom::rational::int;
use crate::exact_geom::{seg_intersect, Coord, IntersectionResult, Location, PLArc, PLDisk, Rational, Segment};
use crate::planar::Region;
use crate::verify::Arrangement;

pub use plan::{chop_complement, round_epsilon, Band, ChopRound, CrosscutPlan};
pub use ring::{crosscut_ring, full_ring, Dilations, Ring};
pub use snap::{snap_to_marks, Snapped};
pub use span::{span_disk, span_disk_with_offset, Span};
pub use thin::{is_eps_thin, Thinness};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ChopError {
    #[error("region is not thin: {0:?} is at least eps from the complement")]
    NotThin(Coord),
    #[error("marks are not dense: the boundary between {0:?} and {1:?} is too wide")]
    MarksNotDense(Coord, Coord),
    #[error("at least two marks are needed")]
    TooFewMarks,
    #[error("{0:?} is not on the region boundary")]
    OffBoundary(Coord),
    #[error("arcs share the endpoint {0:?}")]
    SharedEndpoint(Coord),
    #[error("alpha is not a crosscut of the complement: {0}")]
    AlphaNotCrosscut(&'static str),
    #[error("the continuum separates the plane")]
    Separating,
    #[error("the set has {0} components, not one")]
    NotConnected(usize),
    #[error("no admissible construction down to the resolution floor: {0}")]
    ResolutionExhausted(&'static str),
    #[error("a face meets its own boundary at {0:?}")]
    NotJordan(Coord),
    #[error("a region of squared diameter {diameter2} exceeds {factor}·eps")]
    DiameterBound { factor: u32, diameter2: Rational },
}

/// Where a crosscut lives: the complement of the continuum itself, or one
/// band between consecutive crosscut rings.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Host {
    Complement,
    Band { round: u32, index: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Crosscut {
    pub arc: PLArc,
    pub host: Host,
}

/// A Jordan region cut out by crosscuts, with its exact squared diameter.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChopRegion {
    pub boundary: Vec<Coord>,
    #[serde(with = "crate::io::rat")]
    pub diameter2: Rational,
}

impl ChopRegion {
    pub fn new(boundary: Vec<Coord>) -> Self {
        let diameter2 = diameter2(&boundary);
        Self { boundary, diameter2 }
    }

    /// Whether the diameter is strictly below `factor · eps`.
    pub fn below(&self, factor: i64, eps: &Rational) -> bool {
        let b = int(factor) * eps;
        self.diameter2 < &b * &b
    }
}

/// Largest squared distance between two of the points.
pub fn diameter2(points: &[Coord]) -> Rational {
    let mut best = Rational::zero();
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            let d = points[i].dist2(&points[j]);
            if d > best {
                best = d;
            }
        }
    }
    best
}

pub(crate) fn l1(v: &Coord) -> Rational {
    v.x.abs() + v.y.abs()
}

/// `v` scaled to unit length in the L1 norm.
pub(crate) fn l1_unit(v: &Coord) -> Coord {
    let n = l1(v);
    Coord::new(&v.x / &n, &v.y / &n)
}

pub(crate) fn perp_left(v: &Coord) -> Coord {
    Coord::new(-v.y.clone(), v.x.clone())
}

/// A direction pointing into a counterclockwise ring at vertex `k`.
pub(crate) fn inward_at_vertex(ring: &[Coord], k: usize) -> Coord {
    let n = ring.len();
    let (a, b, c) = (&ring[(k + n - 1) % n], &ring[k], &ring[(k + 1) % n]);
    let e1 = l1_unit(&(b - a));
    let e2 = l1_unit(&(c - b));
    match orient(a, b, c) {
        std::cmp::Ordering::Greater => &e2 - &e1,
        std::cmp::Ordering::Less => &e1 - &e2,
        std::cmp::Ordering::Equal => perp_left(&e2),
    }
}

/// A counterclockwise ring measured by L1 arclength from its first vertex.
#[derive(Clone, Debug)]
pub(crate) struct Perimeter {
    pub ring: Vec<Coord>,
    /// `cum[k]` is the position of vertex `k`; `cum[n]` is the total.
    pub cum: Vec<Rational>,
}

impl Perimeter {
    pub fn new(ring: Vec<Coord>) -> Self {
        let n = ring.len();
        let mut cum = Vec::with_capacity(n + 1);
        let mut acc = Rational::zero();
        cum.push(acc.clone());
        for k in 0..n {
            acc += l1(&(&ring[(k + 1) % n] - &ring[k]));
            cum.push(acc.clone());
        }
        Self { ring, cum }
    }

    pub fn total(&self) -> &Rational {
        &self.cum[self.ring.len()]
    }

    pub fn len(&self) -> usize {
        self.ring.len()
    }

    pub fn wrap(&self, s: &Rational) -> Rational {
        let t = self.total();
        let mut s = s.clone();
        while s.is_negative() {
            s += t;
        }
        while s >= *t {
            s -= t;
        }
        s
    }

    /// Position of a point on the ring.
    pub fn locate(&self, p: &Coord) -> Option<Rational> {
        let n = self.ring.len();
        for k in 0..n {
            let (a, b) = (&self.ring[k], &self.ring[(k + 1) % n]);
            let s = Segment::new(a.clone(), b.clone());
            if s.contains(p) {
                return Some(&self.cum[k] + l1(&(p - a)));
            }
        }
        None
    }

    /// Index of the edge holding position `s`; a vertex belongs to the edge
    /// leaving it.
    pub fn edge_at(&self, s: &Rational) -> usize {
        let s = self.wrap(s);
        let n = self.ring.len();
        (0..n).find(|&k| self.cum[k + 1] > s).unwrap_or(n - 1)
    }

    pub fn point_at(&self, s: &Rational) -> Coord {
        let s = self.wrap(s);
        let k = self.edge_at(&s);
        let n = self.ring.len();
        let (a, b) = (&self.ring[k], &self.ring[(k + 1) % n]);
        let len = &self.cum[k + 1] - &self.cum[k];
        a.lerp(b, &((&s - &self.cum[k]) / len))
    }

    /// Vertex index at position `s`, if any.
    pub fn vertex_at(&self, s: &Rational) -> Option<usize> {
        let s = self.wrap(s);
        (0..self.ring.len()).find(|&k| self.cum[k] == s)
    }

    /// Inward direction at position `s`.
    pub fn inward_at(&self, s: &Rational) -> Coord {
        match self.vertex_at(s) {
            Some(k) => inward_at_vertex(&self.ring, k),
            None => {
                let k = self.edge_at(s);
                let n = self.ring.len();
                perp_left(&l1_unit(&(&self.ring[(k + 1) % n] - &self.ring[k])))
            }
        }
    }

    /// Vertices met walking counterclockwise from `from` for `length`, both
    /// ends excluded, with their offsets from `from`.
    pub fn vertices_ahead(&self, from: &Rational, length: &Rational) -> Vec<(usize, Rational)> {
        let mut out = Vec::new();
        let n = self.ring.len();
        for k in 0..n {
            let d = self.wrap(&(&self.cum[k] - from));
            if d.is_positive() && d < *length {
                out.push((k, d));
            }
        }
        out.sort_by(|a, b| a.1.cmp(&b.1));
        out
    }
}

/// Whether the open segment `(a, b)` lies in the open disk.
pub(crate) fn open_segment_inside(d: &PLDisk, a: &Coord, b: &Coord) -> bool {
    if a == b {
        return false;
    }
    let s = Segment::new(a.clone(), b.clone());
    for e in d.edges() {
        match seg_intersect(&s, &e) {
            IntersectionResult::Empty => {}
            IntersectionResult::Point(p) => {
                if p != *a && p != *b {
                    return false;
                }
            }
            IntersectionResult::Overlap(_) => return false,
        }
    }
    d.locate(&a.midpoint(b)) == Location::Inside
}

/// A spanning arc: simple, ends on the boundary, everything else inside.
pub(crate) fn is_spanning(d: &PLDisk, chain: &[Coord]) -> bool {
    chain.len() >= 2
        && first_self_intersection(chain).is_none()
        && d.locate(&chain[0]) == Location::OnBoundary
        && d.locate(&chain[chain.len() - 1]) == Location::OnBoundary
        && chain[1..chain.len() - 1].iter().all(|p| d.locate(p) == Location::Inside)
        && chain.windows(2).all(|w| open_segment_inside(d, &w[0], &w[1]))
}

/// Whether two chains meet only in points from `allowed`.
pub(crate) fn meet_only_at(a: &[Coord], b: &[Coord], allowed: &[&Coord]) -> bool {
    crate::verify::meeting(a, b).into_iter().all(|r| match r {
        IntersectionResult::Point(p) => allowed.contains(&&p),
        _ => false,
    })
}

/// Arcs pairwise disjoint, or meeting only at endpoints they share when
/// `shared_ends` is set.
pub(crate) fn pairwise_clean(chains: &[Vec<Coord>], shared_ends: bool) -> bool {
    let boxes: Vec<(Coord, Coord)> = chains.iter().map(|c| crate::exact_geom::disk::bbox_of(c)).collect();
    for i in 0..chains.len() {
        for j in i + 1..chains.len() {
            let (a, b) = (&boxes[i], &boxes[j]);
            if a.1.x < b.0.x || b.1.x < a.0.x || a.1.y < b.0.y || b.1.y < a.0.y {
                continue;
            }
            let (ci, cj) = (&chains[i], &chains[j]);
            let ends_i = [&ci[0], &ci[ci.len() - 1]];
            let shared: Vec<&Coord> = if shared_ends {
                [&cj[0], &cj[cj.len() - 1]].into_iter().filter(|e| ends_i.contains(e)).collect()
            } else {
                Vec::new()
            };
            if !meet_only_at(ci, cj, &shared) {
                return false;
            }
        }
    }
    true
}

/// The faces of the disk cut along the arcs, each checked to be bounded by a
/// simple cycle.
pub fn faces_of(d: &PLDisk, arcs: &[Vec<Coord>]) -> Result<Vec<ChopRegion>, ChopError> {
    let arr = Arrangement::of(&[Region::simple(d.boundary().to_vec())], arcs);
    let mut out = Vec::new();
    for ring in arr.inside_faces() {
        let mut sorted = ring.clone();
        sorted.sort();
        if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
            return Err(ChopError::NotJordan(w[0].clone()));
        }
        out.push(ChopRegion::new(ring));
    }
    Ok(out)
}
