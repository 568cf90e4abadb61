//! Exact planar arrangement of segments: every input is split at every
//! intersection, overlapping pieces are merged, and faces are traced with
//! half-edges.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_traits::{Signed, Zero};

use crate::exact_geom::coord::sign;
use crate::exact_geom::rational::zero;
use crate::exact_geom::{point_in_ring, seg_intersect, Coord, IntersectionResult, Location, Rational, Segment};
use crate::planar::{oriented, Region};

/// One input segment. `owner` is the region lying on its left, if the
/// segment is a piece of a region boundary.
#[derive(Clone, Debug)]
pub struct Piece {
    pub seg: Segment,
    pub owner: Option<usize>,
}

#[derive(Clone, Debug, Default)]
pub struct Edge {
    pub a: usize,
    pub b: usize,
    /// Regions on the left of `a → b`, and on the right.
    pub left: Vec<usize>,
    pub right: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct Arrangement {
    pub vertices: Vec<Coord>,
    pub edges: Vec<Edge>,
    regions: Vec<Region>,
}

/// Counts read off an arrangement of region boundaries and arcs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Topology {
    pub vertices: usize,
    pub edges: usize,
    /// Components of the union (regions count as connected through their
    /// interiors).
    pub components: usize,
    /// All faces of the arrangement, the unbounded one included.
    pub faces: usize,
    /// Faces lying inside some region.
    pub faces_inside: usize,
    /// `V − E + Σ χ(face)` over the faces inside the union.
    pub euler: i64,
    /// A vertex on the boundary of each bounded face outside the union.
    pub holes: Vec<Coord>,
    /// A vertex of each component after the first.
    pub extra_components: Vec<Coord>,
}

impl Topology {
    pub fn complement_components(&self) -> usize {
        self.faces - self.faces_inside
    }

    /// Connected with connected complement.
    pub fn is_cellular(&self) -> bool {
        self.components == 1 && self.euler == 1 && self.complement_components() == 1
    }
}

fn bbox_overlap(a: &Segment, b: &Segment) -> bool {
    let (ax0, ax1) = if a.p.x <= a.q.x { (&a.p.x, &a.q.x) } else { (&a.q.x, &a.p.x) };
    let (bx0, bx1) = if b.p.x <= b.q.x { (&b.p.x, &b.q.x) } else { (&b.q.x, &b.p.x) };
    if ax1 < bx0 || bx1 < ax0 {
        return false;
    }
    let (ay0, ay1) = if a.p.y <= a.q.y { (&a.p.y, &a.q.y) } else { (&a.q.y, &a.p.y) };
    let (by0, by1) = if b.p.y <= b.q.y { (&b.p.y, &b.q.y) } else { (&b.q.y, &b.p.y) };
    !(ay1 < by0 || by1 < ay0)
}

/// Counterclockwise angular order of direction vectors, starting at the
/// positive x axis.
fn angle_cmp(u: &Coord, v: &Coord) -> Ordering {
    let upper = |d: &Coord| d.y.is_positive() || (d.y.is_zero() && d.x.is_positive());
    match (upper(u), upper(v)) {
        (true, false) => Ordering::Less,
        (false, true) => Ordering::Greater,
        _ => sign(&v.cross(u)),
    }
}

impl Arrangement {
    /// Arrangement of the boundaries of `regions` and the segments of `arcs`.
    pub fn of(regions: &[Region], arcs: &[Vec<Coord>]) -> Self {
        let mut pieces = Vec::new();
        for (r, g) in regions.iter().enumerate() {
            let mut rings = vec![oriented(g.outer.clone(), true)];
            rings.extend(g.holes.iter().map(|h| oriented(h.clone(), false)));
            for ring in rings {
                for k in 0..ring.len() {
                    let next = &ring[(k + 1) % ring.len()];
                    pieces.push(Piece { seg: Segment::new(ring[k].clone(), next.clone()), owner: Some(r) });
                }
            }
        }
        for a in arcs {
            if a.len() == 1 {
                pieces.push(Piece { seg: Segment::new(a[0].clone(), a[0].clone()), owner: None });
            }
            for w in a.windows(2) {
                pieces.push(Piece { seg: Segment::new(w[0].clone(), w[1].clone()), owner: None });
            }
        }
        Self::build(regions.to_vec(), pieces)
    }

    pub fn build(regions: Vec<Region>, pieces: Vec<Piece>) -> Self {
        let n = pieces.len();
        let mut cuts: Vec<Vec<Coord>> = pieces.iter().map(|p| vec![p.seg.p.clone(), p.seg.q.clone()]).collect();
        for i in 0..n {
            for j in i + 1..n {
                let (a, b) = (&pieces[i].seg, &pieces[j].seg);
                if !bbox_overlap(a, b) {
                    continue;
                }
                let hits = if a.p == a.q {
                    if b.contains(&a.p) { vec![a.p.clone()] } else { Vec::new() }
                } else if b.p == b.q {
                    if a.contains(&b.p) { vec![b.p.clone()] } else { Vec::new() }
                } else {
                    match seg_intersect(a, b) {
                        IntersectionResult::Empty => Vec::new(),
                        IntersectionResult::Point(p) => vec![p],
                        IntersectionResult::Overlap(o) => vec![o.p, o.q],
                    }
                };
                for h in hits {
                    cuts[i].push(h.clone());
                    cuts[j].push(h);
                }
            }
        }
        let mut index: BTreeMap<Coord, usize> = BTreeMap::new();
        let mut vertices: Vec<Coord> = Vec::new();
        let mut id = |c: &Coord, vertices: &mut Vec<Coord>| -> usize {
            *index.entry(c.clone()).or_insert_with(|| {
                vertices.push(c.clone());
                vertices.len() - 1
            })
        };
        let mut edges: BTreeMap<(usize, usize), Edge> = BTreeMap::new();
        for (piece, mut pts) in pieces.iter().zip(cuts) {
            let s = &piece.seg;
            if s.p == s.q {
                id(&s.p, &mut vertices);
                continue;
            }
            pts.sort_by(|x, y| s.param_of(x).cmp(&s.param_of(y)));
            pts.dedup();
            for w in pts.windows(2) {
                let (u, v) = (id(&w[0], &mut vertices), id(&w[1], &mut vertices));
                let key = (u.min(v), u.max(v));
                let e = edges.entry(key).or_insert_with(|| Edge { a: key.0, b: key.1, ..Edge::default() });
                if let Some(r) = piece.owner {
                    if u < v { e.left.push(r) } else { e.right.push(r) }
                }
            }
        }
        Arrangement { vertices, edges: edges.into_values().collect(), regions }
    }

    fn find(parent: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while parent[r] != r {
            r = parent[r];
        }
        let mut k = i;
        while parent[k] != r {
            let next = parent[k];
            parent[k] = r;
            k = next;
        }
        r
    }

    /// Component label of every vertex; the second value counts components
    /// of the plain graph, the third of the union with region interiors.
    fn components(&self) -> (Vec<usize>, usize, usize) {
        let mut parent: Vec<usize> = (0..self.vertices.len()).collect();
        for e in &self.edges {
            let (a, b) = (Self::find(&mut parent, e.a), Self::find(&mut parent, e.b));
            parent[a.max(b)] = a.min(b);
        }
        let graph = (0..parent.len()).filter(|&i| Self::find(&mut parent, i) == i).count();
        let mut ring_first: BTreeMap<usize, usize> = BTreeMap::new();
        for e in &self.edges {
            for &r in e.left.iter().chain(&e.right) {
                let first = *ring_first.entry(r).or_insert(e.a);
                let (a, b) = (Self::find(&mut parent, first), Self::find(&mut parent, e.a));
                parent[a.max(b)] = a.min(b);
            }
        }
        let labels: Vec<usize> = (0..parent.len()).map(|i| Self::find(&mut parent, i)).collect();
        let union = (0..labels.len()).filter(|&i| labels[i] == i).count();
        (labels, graph, union)
    }

    /// Half-edge `2e` runs `a → b`, `2e + 1` runs `b → a`.
    fn half(&self, h: usize) -> (usize, usize) {
        let e = &self.edges[h / 2];
        if h % 2 == 0 { (e.a, e.b) } else { (e.b, e.a) }
    }

    /// Boundary cycles, each a list of half-edges with its face on the left.
    pub fn face_cycles(&self) -> Vec<Vec<usize>> {
        let nv = self.vertices.len();
        let mut around: Vec<Vec<usize>> = vec![Vec::new(); nv];
        for h in 0..2 * self.edges.len() {
            around[self.half(h).0].push(h);
        }
        for (v, list) in around.iter_mut().enumerate() {
            let at = &self.vertices[v];
            list.sort_by(|&x, &y| {
                let dx = &self.vertices[self.half(x).1] - at;
                let dy = &self.vertices[self.half(y).1] - at;
                angle_cmp(&dx, &dy)
            });
        }
        let mut pos = vec![0usize; 2 * self.edges.len()];
        for list in &around {
            for (k, &h) in list.iter().enumerate() {
                pos[h] = k;
            }
        }
        let mut seen = vec![false; 2 * self.edges.len()];
        let mut cycles = Vec::new();
        for start in 0..2 * self.edges.len() {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut h = start;
            while !seen[h] {
                seen[h] = true;
                cycle.push(h);
                let twin = h ^ 1;
                let v = self.half(h).1;
                let list = &around[v];
                h = list[(pos[twin] + list.len() - 1) % list.len()];
            }
            cycles.push(cycle);
        }
        cycles
    }

    fn cycle_area2(&self, cycle: &[usize]) -> Rational {
        let mut acc = zero();
        for &h in cycle {
            let (a, b) = self.half(h);
            acc += self.vertices[a].cross(&self.vertices[b]);
        }
        acc
    }

    /// Whether the face on the left of half-edge `h` lies in a region.
    fn left_in_union(&self, h: usize) -> bool {
        let e = &self.edges[h / 2];
        let owners = if h % 2 == 0 { &e.left } else { &e.right };
        if !owners.is_empty() {
            return true;
        }
        let (a, b) = self.half(h);
        let m = self.vertices[a].midpoint(&self.vertices[b]);
        self.regions.iter().any(|g| g.locate(&m) == Location::Inside)
    }

    pub fn topology(&self) -> Topology {
        let (labels, _, components) = self.components();
        let cycles = self.face_cycles();
        let mut bounded: Vec<(Vec<Coord>, Rational, bool)> = Vec::new();
        // One vertex on the outside of every graph component.
        let mut outer_of_component: Vec<Coord> = Vec::new();
        let mut touched = vec![false; self.vertices.len()];
        let mut holes = Vec::new();
        for cycle in &cycles {
            let ring: Vec<Coord> = cycle.iter().map(|&h| self.vertices[self.half(h).0].clone()).collect();
            for &h in cycle {
                touched[self.half(h).0] = true;
            }
            let area = self.cycle_area2(cycle);
            if area > zero() {
                let inside = self.left_in_union(cycle[0]);
                if !inside {
                    holes.push(ring[0].clone());
                }
                bounded.push((ring, area, inside));
            } else {
                outer_of_component.push(ring[0].clone());
            }
        }
        for (v, t) in touched.iter().enumerate() {
            if !t {
                outer_of_component.push(self.vertices[v].clone());
            }
        }
        // Each component sits in the smallest bounded face around it, or in
        // the unbounded face; that face loses one from its Euler characteristic.
        let mut nested = vec![0i64; bounded.len()];
        for v in &outer_of_component {
            let host = bounded
                .iter()
                .enumerate()
                .filter(|(_, (ring, _, _))| point_in_ring(v, ring) == Location::Inside)
                .min_by(|a, b| a.1 .1.cmp(&b.1 .1))
                .map(|(k, _)| k);
            if let Some(k) = host {
                nested[k] += 1;
            }
        }
        let faces_inside = bounded.iter().filter(|f| f.2).count();
        let face_euler: i64 = bounded.iter().zip(&nested).filter(|(f, _)| f.2).map(|(_, k)| 1 - k).sum();
        let mut first_seen = BTreeMap::new();
        for (v, &l) in labels.iter().enumerate() {
            first_seen.entry(l).or_insert(v);
        }
        let mut reps: Vec<usize> = first_seen.into_values().collect();
        reps.sort();
        let extra_components = reps.iter().skip(1).map(|&v| self.vertices[v].clone()).collect();
        Topology {
            vertices: self.vertices.len(),
            edges: self.edges.len(),
            components,
            faces: bounded.len() + 1,
            faces_inside,
            euler: self.vertices.len() as i64 - self.edges.len() as i64 + face_euler,
            holes,
            extra_components,
        }
    }

    /// Boundary walks of the bounded faces inside the union, counterclockwise.
    /// A walk that revisits a vertex belongs to a face that is not an open
    /// Jordan disk.
    pub fn inside_faces(&self) -> Vec<Vec<Coord>> {
        self.face_cycles()
            .into_iter()
            .filter(|c| self.cycle_area2(c) > zero() && self.left_in_union(c[0]))
            .map(|c| c.iter().map(|&h| self.vertices[self.half(h).0].clone()).collect())
            .collect()
    }

    /// The faces outside the union, each given by one boundary half-edge,
    /// the unbounded face first (as `None`).
    pub fn outside_faces(&self) -> Vec<Option<(Coord, Coord)>> {
        let mut out = vec![None];
        for cycle in self.face_cycles() {
            if self.cycle_area2(&cycle) <= zero() || self.left_in_union(cycle[0]) {
                continue;
            }
            let (a, b) = self.half(cycle[0]);
            out.push(Some((self.vertices[a].clone(), self.vertices[b].clone())));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_geom::rational::int;
    use crate::scenes::rect;

    fn pts(v: &[(i64, i64)]) -> Vec<Coord> {
        v.iter().map(|&(x, y)| Coord::from_ints(x, y)).collect()
    }

    #[test]
    fn filled_square_is_cellular() {
        let t = Arrangement::of(&[rect(int(0), int(0), int(1), int(1))], &[]).topology();
        assert_eq!((t.vertices, t.edges, t.faces_inside, t.faces), (4, 4, 1, 2));
        assert!(t.is_cellular());
    }

    #[test]
    fn annulus_has_one_hole() {
        let ring = Region::new(pts(&[(0, 0), (4, 0), (4, 4), (0, 4)]), vec![pts(&[(1, 1), (3, 1), (3, 3), (1, 3)])]);
        let t = Arrangement::of(&[ring], &[]).topology();
        assert_eq!(t.components, 1);
        assert_eq!(t.euler, 0);
        assert_eq!(t.complement_components(), 2);
        assert_eq!(t.holes.len(), 1);
        assert!(!t.is_cellular());
    }

    #[test]
    fn two_squares_with_an_arc() {
        let squares = [rect(int(0), int(0), int(1), int(1)), rect(int(3), int(0), int(4), int(1))];
        let apart = Arrangement::of(&squares, &[]).topology();
        assert_eq!(apart.components, 2);
        assert_eq!(apart.extra_components.len(), 1);
        let joined = Arrangement::of(&squares, &[pts(&[(1, 0), (3, 0)])]).topology();
        assert!(joined.is_cellular(), "{joined:?}");
    }

    #[test]
    fn two_arcs_enclosing_a_lens_are_not_cellular() {
        let squares = [rect(int(0), int(0), int(1), int(1)), rect(int(3), int(0), int(4), int(1))];
        let arcs = [pts(&[(1, 0), (3, 0)]), pts(&[(1, 1), (2, 3), (3, 1)])];
        let t = Arrangement::of(&squares, &arcs).topology();
        assert_eq!(t.complement_components(), 2);
        assert_eq!(t.euler, 0);
    }

    #[test]
    fn crossing_arcs_are_split() {
        let a = Arrangement::of(&[], &[pts(&[(0, 0), (2, 2)]), pts(&[(0, 2), (2, 0)])]);
        assert_eq!(a.vertices.len(), 5);
        assert_eq!(a.edges.len(), 4);
        assert!(a.topology().is_cellular());
    }

    #[test]
    fn overlapping_arcs_merge() {
        let a = Arrangement::of(&[], &[pts(&[(0, 0), (3, 0)]), pts(&[(1, 0), (4, 0)])]);
        assert_eq!(a.edges.len(), 3);
    }

    #[test]
    fn triangle_of_arcs_encloses_a_face() {
        let t = Arrangement::of(&[], &[pts(&[(0, 0), (2, 0), (1, 2), (0, 0)])]).topology();
        assert_eq!(t.complement_components(), 2);
        assert!(!t.is_cellular());
    }
}
