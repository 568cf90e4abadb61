//! Greedy choice of shortest arcs joining the components of a family of
//! cells inside a disk, one merge at a time.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::disk_metric::properties::intersection_pieces;
use crate::disk_metric::{geodesic_to_set, reflex_vertices, GeodesicResult, SetDistance};
use crate::exact_geom::rational::int;
use crate::exact_geom::{Coord, LengthValue, PLArc, PLDisk};

use super::router::trim_between;
use super::{Cell, WeldError};

/// A chosen shortest arc, from a point of `cells.0` to a point of `cells.1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawArc {
    pub arc: PLArc,
    pub length: LengthValue,
    pub cells: (usize, usize),
    /// Component ids (smallest member cell) joined at the time of choice.
    pub classes: (usize, usize),
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SelectionState {
    /// Component id of every cell after all merges.
    pub components: Vec<usize>,
    pub chosen: Vec<RawArc>,
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        Self((0..n).collect())
    }

    fn find(&mut self, i: usize) -> usize {
        let mut r = i;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut k = i;
        while self.0[k] != r {
            let next = self.0[k];
            self.0[k] = r;
            k = next;
        }
        r
    }

    /// Merges so that the root is always the smaller id.
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.0[hi] = lo;
    }
}

/// Component partition before each chosen arc, replayed from a selection.
pub fn classes_before(n: usize, chosen: &[RawArc]) -> Vec<Vec<usize>> {
    let mut uf = UnionFind::new(n);
    let mut out = Vec::with_capacity(chosen.len());
    for a in chosen {
        out.push((0..n).map(|i| uf.find(i)).collect());
        uf.union(a.cells.0, a.cells.1);
    }
    out
}

/// A shortest path from cell `i` to cell `j`, trimmed to touch each only at
/// its ends. Returns `None` if either set is unreachable.
fn shortest_between(p: &PLDisk, reflex: &[Coord], cells: &[Cell], sds: &[SetDistance], i: usize, j: usize) -> Option<GeodesicResult> {
    enum Via {
        FromI(Coord),
        FromJ(Coord),
        Bend(Coord),
    }
    let mut best: Option<(LengthValue, Via)> = None;
    let offer = |len: LengthValue, via: Via, best: &mut Option<(LengthValue, Via)>| {
        if best.as_ref().map_or(true, |(b, _)| len < *b) {
            *best = Some((len, via));
        }
    };
    for v in cells[i].vertices() {
        if let Some(d) = sds[j].distance(&v) {
            offer(d, Via::FromI(v), &mut best);
        }
    }
    for w in cells[j].vertices() {
        if let Some(d) = sds[i].distance(&w) {
            offer(d, Via::FromJ(w), &mut best);
        }
    }
    for r in reflex {
        if let (Some(a), Some(b)) = (sds[i].distance(r), sds[j].distance(r)) {
            offer(a.add(&b), Via::Bend(r.clone()), &mut best);
        }
    }
    let (_, via) = best?;
    let (ti, tj) = (cells[i].targets(), cells[j].targets());
    let chain = match via {
        Via::FromI(v) => geodesic_to_set(p, &v, &tj).ok()?.vertices,
        Via::FromJ(w) => {
            let mut c = geodesic_to_set(p, &w, &ti).ok()?.vertices;
            c.reverse();
            c
        }
        Via::Bend(r) => {
            let mut c = geodesic_to_set(p, &r, &ti).ok()?.vertices;
            c.reverse();
            c.extend(geodesic_to_set(p, &r, &tj).ok()?.vertices.into_iter().skip(1));
            c
        }
    };
    Some(GeodesicResult::from_chain(trim_between(chain, &ti, &tj)))
}

/// Whether the intersection of `earlier` with `later` leaves `later` whole:
/// empty, a single point, or one subarc through an endpoint of `later`.
pub fn meets_without_disconnecting(later: &GeodesicResult, earlier: &GeodesicResult) -> bool {
    let pieces = intersection_pieces(later, earlier);
    match pieces.as_slice() {
        [] => true,
        [(a, b)] => a == b || *a == int(0) || *b == int(later.vertices.len() as i64 - 1),
        _ => false,
    }
}

/// Chooses `components − 1` arcs, each a shortest path in `p` between two
/// cells of distinct current components. Equal lengths are broken by the
/// source component id and then by the landing point.
pub fn select_arcs(p: &PLDisk, cells: &[Cell], stage: u32) -> Result<SelectionState, WeldError> {
    let n = cells.len();
    let mut uf = UnionFind::new(n);
    if n < 2 {
        return Ok(SelectionState { components: (0..n).collect(), chosen: Vec::new() });
    }
    let reflex = reflex_vertices(p);
    let sds: Vec<SetDistance> = cells.iter().map(|c| SetDistance::new(p, c.targets())).collect();
    let mut pairs: Vec<(usize, usize, GeodesicResult)> = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if let Some(g) = shortest_between(p, &reflex, cells, &sds, i, j) {
                pairs.push((i, j, g));
            }
        }
    }
    let mut chosen: Vec<RawArc> = Vec::new();
    let mut geos: Vec<GeodesicResult> = Vec::new();
    while chosen.len() + 1 < n {
        let mut pick: Option<usize> = None;
        for (k, (i, j, g)) in pairs.iter().enumerate() {
            let (ci, cj) = (uf.find(*i), uf.find(*j));
            if ci == cj {
                continue;
            }
            let better = match pick {
                None => true,
                Some(b) => {
                    let (bi, _, bg) = &pairs[b];
                    match g.length.cmp(&bg.length) {
                        Ordering::Less => true,
                        Ordering::Greater => false,
                        Ordering::Equal => (uf.find(*i), g.end()) < (uf.find(*bi), bg.end()),
                    }
                }
            };
            if better {
                pick = Some(k);
            }
        }
        let Some(k) = pick else { break };
        let (i, j, g) = pairs[k].clone();
        for (e, prev) in geos.iter().enumerate() {
            if !meets_without_disconnecting(&g, prev) {
                return Err(WeldError::TieBreakViolated { stage, first: e, second: chosen.len() });
            }
        }
        let classes = (uf.find(i), uf.find(j));
        uf.union(i, j);
        chosen.push(RawArc { arc: PLArc::new_unchecked(g.vertices.clone()), length: g.length.clone(), cells: (i, j), classes });
        geos.push(g);
    }
    Ok(SelectionState { components: (0..n).map(|i| uf.find(i)).collect(), chosen })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_geom::rational::{frac, int};

    fn sq(x0: i64, y0: i64, x1: i64, y1: i64) -> Cell {
        Cell::disk(PLDisk::rect(int(x0), int(y0), int(x1), int(y1)))
    }

    #[test]
    fn two_cells_straight_segment() {
        let p = PLDisk::rect(int(0), int(0), int(10), int(10));
        let s = select_arcs(&p, &[sq(1, 1, 2, 2), sq(5, 1, 6, 2)], 1).unwrap();
        assert_eq!(s.chosen.len(), 1);
        assert_eq!(s.chosen[0].length.exact_value(), Some(int(3)));
        assert_eq!(s.components, vec![0, 0]);
    }

    #[test]
    fn collinear_squares_join_neighbours() {
        let p = PLDisk::rect(int(0), int(0), int(20), int(4));
        let cells = [sq(1, 1, 2, 2), sq(5, 1, 6, 2), sq(9, 1, 10, 2)];
        let s = select_arcs(&p, &cells, 1).unwrap();
        assert_eq!(s.chosen.len(), 2);
        let mut joined: Vec<(usize, usize)> = s.chosen.iter().map(|a| a.cells).collect();
        joined.sort();
        assert_eq!(joined, vec![(0, 1), (1, 2)]);
        assert!(s.chosen[0].length <= s.chosen[1].length);
    }

    #[test]
    fn bends_around_reflex_corner() {
        let p = PLDisk::new(
            [(0, 0), (10, 0), (10, 2), (2, 2), (2, 10), (0, 10)].iter().map(|&(x, y)| Coord::from_ints(x, y)).collect(),
        )
        .unwrap();
        let a = Cell::disk(PLDisk::rect(int(8), frac(1, 2), int(9), frac(3, 2)));
        let b = Cell::disk(PLDisk::rect(frac(1, 2), int(8), frac(3, 2), int(9)));
        let s = select_arcs(&p, &[a, b], 1).unwrap();
        assert!(s.chosen[0].arc.vertices().contains(&Coord::from_ints(2, 2)));
    }

    #[test]
    fn single_cell_selects_nothing() {
        let p = PLDisk::rect(int(0), int(0), int(10), int(10));
        assert!(select_arcs(&p, &[sq(1, 1, 2, 2)], 1).unwrap().chosen.is_empty());
    }

    #[test]
    fn disconnecting_overlap_detected() {
        let later = GeodesicResult::from_chain(vec![Coord::from_ints(0, 0), Coord::from_ints(4, 0)]);
        let inner = GeodesicResult::from_chain(vec![Coord::from_ints(1, 0), Coord::from_ints(2, 0)]);
        let tail = GeodesicResult::from_chain(vec![Coord::from_ints(3, 0), Coord::from_ints(4, 0)]);
        assert!(!meets_without_disconnecting(&later, &inner));
        assert!(meets_without_disconnecting(&later, &tail));
    }
}
