//! Conservative rasterisation onto square tiles and the tile-level
//! cellularity test.

use std::collections::{BTreeSet, HashSet, VecDeque};

use num_integer::Integer;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::exact_geom::rational::{half, int};
use crate::exact_geom::{Coord, Rational, Segment};
use crate::planar::Region;

/// Tiles `[x0 + i·side, x0 + (i+1)·side] × [y0 + j·side, …]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TileGrid {
    pub origin: Coord,
    #[serde(with = "crate::io::rat")]
    pub side: Rational,
}

fn floor_div(a: &Rational, b: &Rational) -> i64 {
    let q = a / b;
    let f = q.numer().div_floor(q.denom());
    i64::try_from(f).expect("tile index fits i64")
}

fn ceil_div(a: &Rational, b: &Rational) -> i64 {
    -floor_div(&-a, b)
}

impl TileGrid {
    /// Dyadic tiles fine enough to put at most `per_side` tiles across the
    /// longer side of the box, anchored on a multiple of the side.
    pub fn covering(lo: &Coord, hi: &Coord, per_side: i64) -> Self {
        let w = (&hi.x - &lo.x).max(&hi.y - &lo.y);
        let mut side = crate::exact_geom::rational::power_of_two_above(&if w.is_zero() { int(1) } else { w.clone() });
        while &w / &side * int(2) <= int(per_side) {
            side /= int(2);
        }
        let origin = Coord::new(&side * int(floor_div(&lo.x, &side)), &side * int(floor_div(&lo.y, &side)));
        Self { origin, side }
    }

    pub fn corner(&self, i: i64, j: i64) -> Coord {
        Coord::new(&self.origin.x + &self.side * int(i), &self.origin.y + &self.side * int(j))
    }

    pub fn center(&self, i: i64, j: i64) -> Coord {
        let h = half(&self.side);
        Coord::new(&self.origin.x + &self.side * int(i) + &h, &self.origin.y + &self.side * int(j) + h)
    }

    /// Indices `k` with `[k·side, (k+1)·side]` (shifted by `o`) meeting `[a, b]`.
    fn span(&self, o: &Rational, a: &Rational, b: &Rational) -> (i64, i64) {
        (ceil_div(&(a - o), &self.side) - 1, floor_div(&(b - o), &self.side))
    }

    /// Every tile whose closed square meets the closed segment.
    pub fn supercover(&self, s: &Segment, out: &mut BTreeSet<(i64, i64)>) {
        let (xa, xb) = if s.p.x <= s.q.x { (&s.p, &s.q) } else { (&s.q, &s.p) };
        let (i0, i1) = self.span(&self.origin.x, &xa.x, &xb.x);
        for i in i0..=i1 {
            let cx0 = &self.origin.x + &self.side * int(i);
            let cx1 = &cx0 + &self.side;
            let lo = if xa.x > cx0 { xa.x.clone() } else { cx0 };
            let hi = if xb.x < cx1 { xb.x.clone() } else { cx1 };
            if lo > hi {
                continue;
            }
            let y_at = |x: &Rational| -> Rational {
                if xa.x == xb.x {
                    xa.y.clone()
                } else {
                    &xa.y + (&xb.y - &xa.y) * (x - &xa.x) / (&xb.x - &xa.x)
                }
            };
            let (ya, yb) = if xa.x == xb.x {
                (xa.y.clone().min(xb.y.clone()), xa.y.clone().max(xb.y.clone()))
            } else {
                let (u, v) = (y_at(&lo), y_at(&hi));
                if u <= v { (u, v) } else { (v, u) }
            };
            let (j0, j1) = self.span(&self.origin.y, &ya, &yb);
            for j in j0..=j1 {
                out.insert((i, j));
            }
        }
    }

    /// Tiles whose closed square meets the closed region.
    pub fn fill_region(&self, g: &Region, out: &mut BTreeSet<(i64, i64)>) {
        let edges = g.edges();
        for e in &edges {
            self.supercover(e, out);
        }
        let (lo, hi) = g.bbox();
        let (j0, j1) = self.span(&self.origin.y, &lo.y, &hi.y);
        for j in j0..=j1 {
            let yc = self.center(0, j).y;
            let mut xs: Vec<Rational> = edges
                .iter()
                .filter(|e| (e.p.y <= yc) != (e.q.y <= yc))
                .map(|e| &e.p.x + (&e.q.x - &e.p.x) * (&yc - &e.p.y) / (&e.q.y - &e.p.y))
                .collect();
            xs.sort();
            for pair in xs.chunks(2) {
                if let [a, b] = pair {
                    let h = half(&self.side);
                    let i0 = ceil_div(&(a - &self.origin.x - &h), &self.side);
                    let i1 = floor_div(&(b - &self.origin.x - &h), &self.side);
                    for i in i0..=i1 {
                        out.insert((i, j));
                    }
                }
            }
        }
    }
}

/// Counts for a closed union of tiles.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TileTopology {
    pub tiles: usize,
    /// Components under corner contact.
    pub components: usize,
    /// `V − E + F` of the closed tile complex.
    pub euler: i64,
    /// Components of the complement under edge contact, the outside included.
    pub complement_components: usize,
    /// A tile of each bounded complementary component.
    pub hole_tiles: Vec<(i64, i64)>,
    pub extra_tiles: Vec<(i64, i64)>,
}

impl TileTopology {
    pub fn is_cellular(&self) -> bool {
        self.components == 1 && self.euler == 1 && self.complement_components == 1
    }
}

pub fn tile_topology(set: &BTreeSet<(i64, i64)>) -> TileTopology {
    let mut corners = HashSet::new();
    let mut h_edges = HashSet::new();
    let mut v_edges = HashSet::new();
    for &(i, j) in set {
        for c in [(i, j), (i + 1, j), (i, j + 1), (i + 1, j + 1)] {
            corners.insert(c);
        }
        h_edges.insert((i, j));
        h_edges.insert((i, j + 1));
        v_edges.insert((i, j));
        v_edges.insert((i + 1, j));
    }
    let euler = corners.len() as i64 - (h_edges.len() + v_edges.len()) as i64 + set.len() as i64;

    let mut seen: HashSet<(i64, i64)> = HashSet::new();
    let mut reps = Vec::new();
    for &t in set {
        if !seen.insert(t) {
            continue;
        }
        reps.push(t);
        let mut queue = VecDeque::from([t]);
        while let Some((i, j)) = queue.pop_front() {
            for di in -1..=1 {
                for dj in -1..=1 {
                    let n = (i + di, j + dj);
                    if set.contains(&n) && seen.insert(n) {
                        queue.push_back(n);
                    }
                }
            }
        }
    }

    let (mut i0, mut i1, mut j0, mut j1) = (i64::MAX, i64::MIN, i64::MAX, i64::MIN);
    for &(i, j) in set {
        i0 = i0.min(i - 1);
        i1 = i1.max(i + 1);
        j0 = j0.min(j - 1);
        j1 = j1.max(j + 1);
    }
    let mut outside_seen: HashSet<(i64, i64)> = HashSet::new();
    let mut hole_tiles = Vec::new();
    let mut complement_components = 0;
    if !set.is_empty() {
        for j in j0..=j1 {
            for i in i0..=i1 {
                let t = (i, j);
                if set.contains(&t) || outside_seen.contains(&t) {
                    continue;
                }
                complement_components += 1;
                if complement_components > 1 {
                    hole_tiles.push(t);
                }
                outside_seen.insert(t);
                let mut queue = VecDeque::from([t]);
                while let Some((a, b)) = queue.pop_front() {
                    for (da, db) in [(1, 0), (-1, 0), (0, 1), (0, -1)] {
                        let n = (a + da, b + db);
                        if n.0 < i0 || n.0 > i1 || n.1 < j0 || n.1 > j1 {
                            continue;
                        }
                        if !set.contains(&n) && outside_seen.insert(n) {
                            queue.push_back(n);
                        }
                    }
                }
            }
        }
    }
    TileTopology {
        tiles: set.len(),
        components: reps.len(),
        euler,
        complement_components,
        hole_tiles,
        extra_tiles: reps.into_iter().skip(1).collect(),
    }
}

/// Rasterises regions and arcs onto a grid with at most `per_side` tiles
/// across their common bounding box.
pub fn rasterize(regions: &[Region], arcs: &[Vec<Coord>], per_side: i64) -> (TileGrid, BTreeSet<(i64, i64)>) {
    let pts: Vec<Coord> =
        regions.iter().flat_map(|g| g.outer.iter().cloned()).chain(arcs.iter().flatten().cloned()).collect();
    let (lo, hi) = crate::exact_geom::disk::bbox_of(&pts);
    let grid = TileGrid::covering(&lo, &hi, per_side);
    let mut set = BTreeSet::new();
    for g in regions {
        grid.fill_region(g, &mut set);
    }
    for a in arcs {
        if a.len() == 1 {
            grid.supercover(&Segment::new(a[0].clone(), a[0].clone()), &mut set);
        }
        for w in a.windows(2) {
            grid.supercover(&Segment::new(w[0].clone(), w[1].clone()), &mut set);
        }
    }
    (grid, set)
}
