use std::cmp::Ordering;

use crate::exact_geom::segment::{seg_intersect, IntersectionResult};
use crate::exact_geom::{Coord, Location, PLArc, PLDisk, Rational, Segment};

use super::geodesic::{geodesic_in, GeodesicError, GeodesicResult};
use super::triangulate::{triangulate, Triangulation};

/// A closed piece of a target set inside a disk.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Target {
    Disk(PLDisk),
    Arc(PLArc),
    Point(Coord),
}

impl Target {
    pub fn contains(&self, p: &Coord) -> bool {
        match self {
            Target::Disk(d) => d.locate(p) != Location::Outside,
            Target::Arc(a) => a.contains(p),
            Target::Point(c) => c == p,
        }
    }

    pub fn vertices(&self) -> Vec<Coord> {
        match self {
            Target::Disk(d) => d.boundary().to_vec(),
            Target::Arc(a) => a.vertices().to_vec(),
            Target::Point(c) => vec![c.clone()],
        }
    }

    pub fn edges(&self) -> Vec<Segment> {
        match self {
            Target::Disk(d) => d.edges().collect(),
            Target::Arc(a) => a.segments().collect(),
            Target::Point(_) => Vec::new(),
        }
    }
}

/// Foot of the perpendicular from `p` onto the closed segment, when it falls
/// strictly inside the segment.
pub fn perpendicular_foot(s: &Segment, p: &Coord) -> Option<Coord> {
    let t = s.param_of(p);
    (t > Rational::from_integer(0.into()) && t < Rational::from_integer(1.into())).then(|| s.at(&t))
}

/// Reflex vertices of a counterclockwise disk boundary.
pub fn reflex_vertices(d: &PLDisk) -> Vec<Coord> {
    let b = d.boundary();
    let n = b.len();
    (0..n)
        .filter(|&i| crate::exact_geom::orient(&b[(i + n - 1) % n], &b[i], &b[(i + 1) % n]) == Ordering::Less)
        .map(|i| b[i].clone())
        .collect()
}

/// Shortest path inside `d` from `x` to the union of `targets`. Candidate
/// landings are target vertices and perpendicular feet from `x` and from the
/// reflex vertices of `d`; ties go to the lexicographically least landing.
pub fn geodesic_to_set(d: &PLDisk, x: &Coord, targets: &[Target]) -> Result<GeodesicResult, GeodesicError> {
    let tri = triangulate(d)?;
    geodesic_to_set_in(&tri, x, targets)
}

pub fn geodesic_to_set_in(tri: &Triangulation, x: &Coord, targets: &[Target]) -> Result<GeodesicResult, GeodesicError> {
    if targets.is_empty() {
        return Err(GeodesicError::EmptyTarget);
    }
    if tri.locate(x).is_none() {
        return Err(GeodesicError::PointOutsideDisk(x.clone()));
    }
    if targets.iter().any(|t| t.contains(x)) {
        return Ok(GeodesicResult::point(x.clone()));
    }
    let mut sources = vec![x.clone()];
    sources.extend(reflex_vertices(&tri.disk));

    let mut candidates: Vec<Coord> = Vec::new();
    for t in targets {
        candidates.extend(t.vertices());
        for e in t.edges() {
            for s in &sources {
                if let Some(f) = perpendicular_foot(&e, s) {
                    candidates.push(f);
                }
            }
        }
    }
    candidates.sort();
    candidates.dedup();

    let mut best: Option<GeodesicResult> = None;
    for c in candidates {
        let g = match geodesic_in(tri, x, &c) {
            Ok(g) => g,
            Err(GeodesicError::PointOutsideDisk(_)) => continue,
            Err(e) => return Err(e),
        };
        let g = trim_to_first_contact(g, targets);
        best = Some(match best {
            None => g,
            Some(b) => match g.length.cmp(&b.length).then_with(|| g.end().cmp(b.end())) {
                Ordering::Less => g,
                _ => b,
            },
        });
    }
    best.ok_or(GeodesicError::EmptyTarget)
}

/// Cuts a path at its first point in the target set.
pub fn trim_to_first_contact(g: GeodesicResult, targets: &[Target]) -> GeodesicResult {
    if g.is_point() {
        return g;
    }
    let v = &g.vertices;
    for i in 0..v.len() - 1 {
        let seg = Segment::new(v[i].clone(), v[i + 1].clone());
        if let Some(p) = first_contact_on_segment(&seg, targets) {
            let mut chain = v[..=i].to_vec();
            chain.push(p);
            return GeodesicResult::from_chain(chain);
        }
    }
    g
}

/// The point of `seg` nearest `seg.p` that lies in some target, if any.
pub fn first_contact_on_segment(seg: &Segment, targets: &[Target]) -> Option<Coord> {
    let mut best: Option<Rational> = None;
    let mut consider = |t: Rational| {
        if best.as_ref().map_or(true, |b| t < *b) {
            best = Some(t);
        }
    };
    for t in targets {
        if t.contains(&seg.p) {
            return Some(seg.p.clone());
        }
        match t {
            Target::Point(c) => {
                if seg.contains(c) {
                    consider(seg.param_of(c));
                }
            }
            _ => {
                for e in t.edges() {
                    match seg_intersect(seg, &e) {
                        IntersectionResult::Empty => {}
                        IntersectionResult::Point(p) => consider(seg.param_of(&p)),
                        IntersectionResult::Overlap(o) => {
                            consider(seg.param_of(&o.p));
                            consider(seg.param_of(&o.q));
                        }
                    }
                }
            }
        }
    }
    best.map(|t| seg.at(&t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_geom::rational::{frac, int};

    #[test]
    fn corner_to_inner_square() {
        let d = PLDisk::rect(int(0), int(0), int(4), int(4));
        let t = Target::Disk(PLDisk::rect(int(1), int(1), int(3), int(3)));
        let g = geodesic_to_set(&d, &Coord::from_ints(0, 0), &[t]).unwrap();
        assert_eq!(g.vertices, vec![Coord::from_ints(0, 0), Coord::from_ints(1, 1)]);
        assert_eq!(g.length.terms, vec![int(2)]);
    }

    #[test]
    fn inside_target_is_zero() {
        let d = PLDisk::rect(int(0), int(0), int(4), int(4));
        let t = Target::Disk(PLDisk::rect(int(1), int(1), int(3), int(3)));
        let g = geodesic_to_set(&d, &Coord::from_ints(2, 2), &[t]).unwrap();
        assert!(g.is_point());
    }

    #[test]
    fn foot_on_edge_wins() {
        let d = PLDisk::rect(int(0), int(0), int(4), int(4));
        let t = Target::Disk(PLDisk::rect(int(1), int(1), int(3), int(3)));
        let g = geodesic_to_set(&d, &Coord::new(frac(5, 2), int(0)), &[t]).unwrap();
        assert_eq!(g.end(), &Coord::new(frac(5, 2), int(1)));
    }

    #[test]
    fn around_reflex_corner() {
        let d = PLDisk::new(
            [(0, 0), (4, 0), (4, 1), (1, 1), (1, 4), (0, 4)].iter().map(|&(x, y)| Coord::from_ints(x, y)).collect(),
        )
        .unwrap();
        let t = Target::Arc(PLArc::segment(Coord::new(frac(1, 2), int(3)), Coord::new(frac(1, 2), int(4))));
        let g = geodesic_to_set(&d, &Coord::new(int(3), frac(1, 2)), &[t]).unwrap();
        assert_eq!(g.bend_vertices, vec![Coord::from_ints(1, 1)]);
        assert_eq!(g.end(), &Coord::new(frac(1, 2), int(3)));
    }
}
