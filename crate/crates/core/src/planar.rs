//! Exact unions of polygonal regions and boundary tracing.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

use crate::exact_geom::coord::{orient, signed_area2};
use crate::exact_geom::disk::{bbox_of, canonical_ring, point_in_ring};
use crate::exact_geom::segment::{seg_intersect, IntersectionResult};
use crate::exact_geom::{Coord, Location, Rational, Segment};

/// A closed polygonal region: a counterclockwise outer ring and clockwise
/// hole rings, so the region always lies to the left of its edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Region {
    pub outer: Vec<Coord>,
    pub holes: Vec<Vec<Coord>>,
}

impl Region {
    pub fn new(outer: Vec<Coord>, holes: Vec<Vec<Coord>>) -> Self {
        let outer = oriented(canonical_ring(outer), true);
        let holes = holes.into_iter().map(|h| oriented(canonical_ring(h), false)).collect();
        Self { outer, holes }
    }

    pub fn simple(outer: Vec<Coord>) -> Self {
        Self::new(outer, Vec::new())
    }

    pub fn rings(&self) -> impl Iterator<Item = &Vec<Coord>> {
        std::iter::once(&self.outer).chain(self.holes.iter())
    }

    pub fn locate(&self, p: &Coord) -> Location {
        match point_in_ring(p, &self.outer) {
            Location::Outside => Location::Outside,
            Location::OnBoundary => Location::OnBoundary,
            Location::Inside => {
                for h in &self.holes {
                    match point_in_ring(p, h) {
                        Location::Inside => return Location::Outside,
                        Location::OnBoundary => return Location::OnBoundary,
                        Location::Outside => {}
                    }
                }
                Location::Inside
            }
        }
    }

    pub fn bbox(&self) -> (Coord, Coord) {
        bbox_of(&self.outer)
    }

    pub fn edges(&self) -> Vec<Segment> {
        self.rings().flat_map(|r| ring_edges(r)).collect()
    }
}

pub fn ring_edges(ring: &[Coord]) -> Vec<Segment> {
    let n = ring.len();
    (0..n).map(|i| Segment::new(ring[i].clone(), ring[(i + 1) % n].clone())).collect()
}

/// Reorients a ring to counterclockwise (`ccw`) or clockwise.
pub fn oriented(mut ring: Vec<Coord>, ccw: bool) -> Vec<Coord> {
    let positive = signed_area2(&ring) > Rational::from_integer(0.into());
    if positive != ccw {
        ring.reverse();
    }
    ring
}

/// The union's boundary touches itself at this vertex.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("union boundary pinches at {0}")]
pub struct PinchError(pub Coord);

/// Boundary cycles of the union of regions: counterclockwise outer rings and
/// clockwise hole rings, each simple, pairwise disjoint.
pub fn union_boundary(regions: &[Region]) -> Result<Vec<Vec<Coord>>, PinchError> {
    // Directed edges tagged with their region.
    let mut edges: Vec<(Segment, usize)> = Vec::new();
    for (k, r) in regions.iter().enumerate() {
        for e in r.edges() {
            edges.push((e, k));
        }
    }
    let boxes: Vec<(Coord, Coord)> = regions.iter().map(|r| r.bbox()).collect();
    let pieces = split_edges(&edges);

    let mut kept: BTreeSet<(Coord, Coord)> = BTreeSet::new();
    let mut all: BTreeMap<(Coord, Coord), BTreeSet<usize>> = BTreeMap::new();
    for (a, b, k) in &pieces {
        all.entry((a.clone(), b.clone())).or_default().insert(*k);
    }
    for ((a, b), owners) in &all {
        if all.contains_key(&(b.clone(), a.clone())) {
            continue;
        }
        let mid = a.midpoint(b);
        let covered = regions.iter().enumerate().any(|(k, r)| {
            !owners.contains(&k) && in_box(&mid, &boxes[k]) && r.locate(&mid) == Location::Inside
        });
        if !covered {
            kept.insert((a.clone(), b.clone()));
        }
    }

    let mut next: BTreeMap<Coord, Coord> = BTreeMap::new();
    for (a, b) in &kept {
        if next.insert(a.clone(), b.clone()).is_some() {
            return Err(PinchError(a.clone()));
        }
    }
    let mut cycles = Vec::new();
    let mut used: BTreeSet<Coord> = BTreeSet::new();
    for start in next.keys() {
        if used.contains(start) {
            continue;
        }
        let mut ring = vec![start.clone()];
        used.insert(start.clone());
        let mut cur = next[start].clone();
        while &cur != start {
            if !used.insert(cur.clone()) {
                return Err(PinchError(cur));
            }
            ring.push(cur.clone());
            cur = match next.get(&cur) {
                Some(n) => n.clone(),
                None => return Err(PinchError(cur)),
            };
        }
        let ring = canonical_ring(ring);
        if ring.len() >= 3 {
            cycles.push(ring);
        }
    }
    Ok(cycles)
}

fn in_box(p: &Coord, b: &(Coord, Coord)) -> bool {
    p.x >= b.0.x && p.x <= b.1.x && p.y >= b.0.y && p.y <= b.1.y
}

/// Splits every edge at all points where it meets another edge.
fn split_edges(edges: &[(Segment, usize)]) -> Vec<(Coord, Coord, usize)> {
    let n = edges.len();
    let xmin = |s: &Segment| if s.p.x <= s.q.x { s.p.x.clone() } else { s.q.x.clone() };
    let xmax = |s: &Segment| if s.p.x >= s.q.x { s.p.x.clone() } else { s.q.x.clone() };
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| xmin(&edges[i].0).cmp(&xmin(&edges[j].0)));
    let mut cuts: Vec<Vec<Rational>> = vec![Vec::new(); n];
    for (oi, &i) in order.iter().enumerate() {
        let hi = xmax(&edges[i].0);
        for &j in &order[oi + 1..] {
            if xmin(&edges[j].0) > hi {
                break;
            }
            let (si, sj) = (&edges[i].0, &edges[j].0);
            let (ylo_i, yhi_i) = minmax(&si.p.y, &si.q.y);
            let (ylo_j, yhi_j) = minmax(&sj.p.y, &sj.q.y);
            if yhi_i < ylo_j || yhi_j < ylo_i {
                continue;
            }
            match seg_intersect(si, sj) {
                IntersectionResult::Empty => {}
                IntersectionResult::Point(p) => {
                    cuts[i].push(si.param_of(&p));
                    cuts[j].push(sj.param_of(&p));
                }
                IntersectionResult::Overlap(o) => {
                    for p in [&o.p, &o.q] {
                        cuts[i].push(si.param_of(p));
                        cuts[j].push(sj.param_of(p));
                    }
                }
            }
        }
    }
    let zero = Rational::from_integer(0.into());
    let one = Rational::from_integer(1.into());
    let mut out = Vec::new();
    for (k, (s, owner)) in edges.iter().enumerate() {
        let mut ts = std::mem::take(&mut cuts[k]);
        ts.push(zero.clone());
        ts.push(one.clone());
        ts.retain(|t| *t >= zero && *t <= one);
        ts.sort();
        ts.dedup();
        let pts: Vec<Coord> = ts.iter().map(|t| s.at(t)).collect();
        for w in pts.windows(2) {
            out.push((w[0].clone(), w[1].clone(), *owner));
        }
    }
    out
}

fn minmax<'a>(a: &'a Rational, b: &'a Rational) -> (&'a Rational, &'a Rational) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Convex hull, counterclockwise, without collinear points.
pub fn convex_hull(points: &[Coord]) -> Vec<Coord> {
    let mut pts: Vec<Coord> = points.to_vec();
    pts.sort();
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut lower: Vec<Coord> = Vec::new();
    for p in &pts {
        while lower.len() >= 2 && orient(&lower[lower.len() - 2], &lower[lower.len() - 1], p) != Ordering::Greater {
            lower.pop();
        }
        lower.push(p.clone());
    }
    let mut upper: Vec<Coord> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2 && orient(&upper[upper.len() - 2], &upper[upper.len() - 1], p) != Ordering::Greater {
            upper.pop();
        }
        upper.push(p.clone());
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// The set of points within sup-norm distance `r` of the segment `[a, b]`.
pub fn segment_box_hull(a: &Coord, b: &Coord, r: &Rational) -> Vec<Coord> {
    let mut pts = Vec::with_capacity(8);
    for p in [a, b] {
        for (sx, sy) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
            let dx = if sx > 0 { r.clone() } else { -r.clone() };
            let dy = if sy > 0 { r.clone() } else { -r.clone() };
            pts.push(Coord::new(&p.x + &dx, &p.y + &dy));
        }
    }
    convex_hull(&pts)
}

/// Pieces whose union is the closed sup-norm `r`-neighbourhood of `region`.
pub fn dilation_pieces(region: &Region, r: &Rational) -> Vec<Region> {
    let mut out = vec![region.clone()];
    for e in region.edges() {
        out.push(Region::simple(segment_box_hull(&e.p, &e.q, r)));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_geom::rational::{frac, int};

    fn sq(x0: i64, y0: i64, x1: i64, y1: i64) -> Region {
        Region::simple(vec![
            Coord::from_ints(x0, y0),
            Coord::from_ints(x1, y0),
            Coord::from_ints(x1, y1),
            Coord::from_ints(x0, y1),
        ])
    }

    #[test]
    fn overlapping_squares_merge() {
        let c = union_boundary(&[sq(0, 0, 2, 2), sq(1, 1, 3, 3)]).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].len(), 8);
        assert_eq!(signed_area2(&c[0]), int(14));
    }

    #[test]
    fn shared_edge_cancels() {
        let c = union_boundary(&[sq(0, 0, 1, 1), sq(1, 0, 2, 1)]).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].len(), 4);
    }

    #[test]
    fn ring_of_squares_has_hole() {
        let c = union_boundary(&[sq(0, 0, 3, 1), sq(0, 2, 3, 3), sq(0, 0, 1, 3), sq(2, 0, 3, 3)]).unwrap();
        assert_eq!(c.len(), 2);
        let areas: Vec<Rational> = c.iter().map(|r| signed_area2(r)).collect();
        assert!(areas.contains(&int(18)));
        assert!(areas.contains(&int(-2)));
    }

    #[test]
    fn corner_contact_is_a_pinch() {
        assert!(union_boundary(&[sq(0, 0, 1, 1), sq(1, 1, 2, 2)]).is_err());
    }

    #[test]
    fn dilated_triangle() {
        let t = Region::simple(vec![Coord::from_ints(0, 0), Coord::from_ints(4, 0), Coord::from_ints(0, 4)]);
        let c = union_boundary(&dilation_pieces(&t, &frac(1, 2))).unwrap();
        assert_eq!(c.len(), 1);
        // Octagon-like: the hypotenuse shifted by the box corner.
        assert!(c[0].contains(&Coord::new(frac(-1, 2), frac(-1, 2))));
        assert!(c[0].contains(&Coord::new(frac(9, 2), frac(1, 2))));
    }
}
