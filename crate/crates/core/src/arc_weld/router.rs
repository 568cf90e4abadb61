//! Shortest paths inside a closed disk that avoid open convex obstacles,
//! from one target set to another.
//!
//! Path search runs on `f64` edge weights over a visibility graph whose
//! nodes are reflex disk vertices and obstacle corners; every edge it uses is
//! admitted by exact predicates, so the returned chain is valid even when
//! float rounding picks a marginally longer route.

use std::cmp::Ordering;
use std::collections::{BTreeSet, BinaryHeap};

use crate::disk_metric::{reflex_vertices, segment_in_disk, Target};
use crate::disk_metric::to_set::{first_contact_on_segment, perpendicular_foot};
use crate::exact_geom::arc::canonical_polyline;
use crate::exact_geom::{Coord, Location, PLDisk, Rational, Segment};
use crate::planar::segment_box_hull;

/// An open convex polygon, stored counterclockwise with its bounding box.
#[derive(Clone, Debug)]
pub struct Obstacle {
    ring: Vec<Coord>,
    lo: Coord,
    hi: Coord,
}

impl Obstacle {
    pub fn convex(ring: Vec<Coord>) -> Self {
        let (lo, hi) = crate::exact_geom::disk::bbox_of(&ring);
        Self { ring, lo, hi }
    }

    /// Points within sup-norm distance `eta` of `[a, b]`.
    pub fn tube(a: &Coord, b: &Coord, eta: &Rational) -> Self {
        Self::convex(segment_box_hull(a, b, eta))
    }

    pub fn ring(&self) -> &[Coord] {
        &self.ring
    }

    pub fn contains_open(&self, p: &Coord) -> bool {
        if p.x <= self.lo.x || p.x >= self.hi.x || p.y <= self.lo.y || p.y >= self.hi.y {
            return false;
        }
        let n = self.ring.len();
        (0..n).all(|i| crate::exact_geom::orient(&self.ring[i], &self.ring[(i + 1) % n], p) == Ordering::Greater)
    }

    /// Whether the closed segment `[a, b]` meets the open interior.
    pub fn meets_open(&self, a: &Coord, b: &Coord) -> bool {
        if a.x.clone().max(b.x.clone()) <= self.lo.x
            || a.x.clone().min(b.x.clone()) >= self.hi.x
            || a.y.clone().max(b.y.clone()) <= self.lo.y
            || a.y.clone().min(b.y.clone()) >= self.hi.y
        {
            return false;
        }
        // The set of t in [0, 1] with every edge function strictly positive
        // is an interval (lo, hi) bounded by roots and the segment ends.
        let zero = Rational::from_integer(0.into());
        let one = Rational::from_integer(1.into());
        let mut lo = zero.clone();
        let mut hi = one;
        let n = self.ring.len();
        for i in 0..n {
            let (p, q) = (&self.ring[i], &self.ring[(i + 1) % n]);
            let e = q - p;
            let f0 = e.cross(&(a - p));
            let f1 = e.cross(&(b - p));
            let slope = &f1 - &f0;
            if slope == zero {
                if f0 <= zero {
                    return false;
                }
                continue;
            }
            let root = -&f0 / &slope;
            if slope > zero {
                if root > lo {
                    lo = root;
                }
            } else if root < hi {
                hi = root;
            }
            if lo >= hi {
                return false;
            }
        }
        lo < hi
    }
}

/// Tubes of sup-norm radius `eta` around every segment of a chain, or a box
/// around a single point.
pub fn tubes_around(chain: &[Coord], eta: &Rational) -> Vec<Obstacle> {
    if chain.len() == 1 {
        return vec![Obstacle::tube(&chain[0], &chain[0], eta)];
    }
    chain.windows(2).map(|w| Obstacle::tube(&w[0], &w[1], eta)).collect()
}

#[derive(Clone, Copy, PartialEq)]
struct Key(f64);

impl Eq for Key {}

impl PartialOrd for Key {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Key {
    fn cmp(&self, other: &Self) -> Ordering {
        // Reversed so that the max-heap pops the smallest key.
        other.0.total_cmp(&self.0)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Entry {
    /// Lower bound from the straight distance to the source set; the real
    /// source landing is looked up when popped.
    Probe(usize),
    Settled(usize),
}

#[derive(Clone)]
enum Parent {
    None,
    Source(Coord),
    Node(usize),
}

/// A disk with obstacles. Paths run in the closed disk and never meet an
/// obstacle's open interior.
pub struct Router<'a> {
    disk: &'a PLDisk,
    obstacles: Vec<Obstacle>,
    base: Vec<Coord>,
    base_f: Vec<(f64, f64)>,
}

fn fpt(p: &Coord) -> (f64, f64) {
    p.to_f64()
}

fn fdist(a: (f64, f64), b: (f64, f64)) -> f64 {
    ((a.0 - b.0).powi(2) + (a.1 - b.1).powi(2)).sqrt()
}

fn fdist_seg(p: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
    let (dx, dy) = (b.0 - a.0, b.1 - a.1);
    let l2 = dx * dx + dy * dy;
    if l2 == 0.0 {
        return fdist(p, a);
    }
    let t = (((p.0 - a.0) * dx + (p.1 - a.1) * dy) / l2).clamp(0.0, 1.0);
    fdist(p, (a.0 + t * dx, a.1 + t * dy))
}

/// Candidate contact points on a target set when arriving straight from `p`:
/// its vertices and the perpendicular feet of `p` on its edges.
fn landings(p: &Coord, sites: &[Target]) -> Vec<Coord> {
    let mut out = BTreeSet::new();
    for t in sites {
        for v in t.vertices() {
            out.insert(v);
        }
        for e in t.edges() {
            if let Some(f) = perpendicular_foot(&e, p) {
                out.insert(f);
            }
        }
    }
    out.into_iter().collect()
}

fn site_distance_f(p: (f64, f64), sites: &[(Vec<(f64, f64)>, bool)]) -> f64 {
    let mut best = f64::INFINITY;
    for (pts, closed) in sites {
        if pts.len() == 1 {
            best = best.min(fdist(p, pts[0]));
            continue;
        }
        let n = pts.len();
        let m = if *closed { n } else { n - 1 };
        for i in 0..m {
            best = best.min(fdist_seg(p, pts[i], pts[(i + 1) % n]));
        }
    }
    best
}

fn site_polylines(sites: &[Target]) -> Vec<(Vec<(f64, f64)>, bool)> {
    sites
        .iter()
        .map(|t| (t.vertices().iter().map(fpt).collect(), matches!(t, Target::Disk(_))))
        .collect()
}

impl<'a> Router<'a> {
    pub fn new(disk: &'a PLDisk, obstacles: Vec<Obstacle>) -> Self {
        let mut base: BTreeSet<Coord> = BTreeSet::new();
        for v in reflex_vertices(disk) {
            if !obstacles.iter().any(|o| o.contains_open(&v)) {
                base.insert(v);
            }
        }
        for o in &obstacles {
            for v in o.ring() {
                if disk.locate(v) != Location::Outside && !obstacles.iter().any(|q| q.contains_open(v)) {
                    base.insert(v.clone());
                }
            }
        }
        let base: Vec<Coord> = base.into_iter().collect();
        let base_f = base.iter().map(fpt).collect();
        Self { disk, obstacles, base, base_f }
    }

    pub fn obstacles(&self) -> &[Obstacle] {
        &self.obstacles
    }

    /// Whether `[a, b]` lies in the disk and misses every open obstacle.
    pub fn clear(&self, a: &Coord, b: &Coord) -> bool {
        !self.obstacles.iter().any(|o| o.meets_open(a, b)) && segment_in_disk(self.disk, a, b)
    }

    fn first_clear(&self, from: &Coord, mut cands: Vec<(f64, Coord)>, limit: f64) -> Option<(f64, Coord)> {
        cands.sort_by(|a, b| a.0.total_cmp(&b.0).then_with(|| a.1.cmp(&b.1)));
        cands.into_iter().take_while(|(d, _)| *d < limit).find(|(_, c)| self.clear(from, c))
    }

    fn scored(from: &Coord, pts: Vec<Coord>) -> Vec<(f64, Coord)> {
        let f = fpt(from);
        pts.into_iter().map(|c| (fdist(f, fpt(&c)), c)).collect()
    }

    /// A short path from the source set to the target set, trimmed so that
    /// only its first point lies in a source and only its last in a target.
    pub fn route(&self, sources: &[Target], targets: &[Target]) -> Option<Vec<Coord>> {
        let src_f = site_polylines(sources);
        let tgt_f = site_polylines(targets);
        let n = self.base.len();
        let h: Vec<f64> = self.base_f.iter().map(|&p| site_distance_f(p, &tgt_f)).collect();

        // Straight routes with one end at a vertex of either set.
        let mut best: Option<(f64, Vec<Coord>)> = None;
        let offer = |len: f64, chain: Vec<Coord>, best: &mut Option<(f64, Vec<Coord>)>| {
            if best.as_ref().map_or(true, |b| len < b.0) {
                *best = Some((len, chain));
            }
        };
        let src_vertices: BTreeSet<Coord> = sources.iter().flat_map(|t| t.vertices()).collect();
        for s in &src_vertices {
            let limit = best.as_ref().map_or(f64::INFINITY, |b| b.0);
            if let Some((d, q)) = self.first_clear(s, Self::scored(s, landings(s, targets)), limit) {
                offer(d, vec![s.clone(), q], &mut best);
            }
        }
        let tgt_vertices: BTreeSet<Coord> = targets.iter().flat_map(|t| t.vertices()).collect();
        for t in &tgt_vertices {
            let limit = best.as_ref().map_or(f64::INFINITY, |b| b.0);
            if let Some((d, q)) = self.first_clear(t, Self::scored(t, landings(t, sources)), limit) {
                offer(d, vec![q, t.clone()], &mut best);
            }
        }

        let mut g = vec![f64::INFINITY; n];
        let mut parent = vec![Parent::None; n];
        let mut closed = vec![false; n];
        let mut heap: BinaryHeap<(Key, Entry)> = BinaryHeap::new();
        for i in 0..n {
            let lb = site_distance_f(self.base_f[i], &src_f);
            heap.push((Key(lb + h[i]), Entry::Probe(i)));
        }
        while let Some((Key(f), e)) = heap.pop() {
            if best.as_ref().map_or(false, |b| f >= b.0) {
                break;
            }
            match e {
                Entry::Probe(i) => {
                    if closed[i] {
                        continue;
                    }
                    let v = &self.base[i];
                    if let Some((d, s)) = self.first_clear(v, Self::scored(v, landings(v, sources)), g[i]) {
                        g[i] = d;
                        parent[i] = Parent::Source(s);
                        heap.push((Key(d + h[i]), Entry::Settled(i)));
                    }
                }
                Entry::Settled(u) => {
                    if closed[u] || f > g[u] + h[u] {
                        continue;
                    }
                    closed[u] = true;
                    let uc = &self.base[u];
                    let limit = best.as_ref().map_or(f64::INFINITY, |b| b.0) - g[u];
                    if let Some((d, q)) = self.first_clear(uc, Self::scored(uc, landings(uc, targets)), limit) {
                        let mut chain = vec![q];
                        let mut k = u;
                        loop {
                            chain.push(self.base[k].clone());
                            match &parent[k] {
                                Parent::Node(p) => k = *p,
                                Parent::Source(s) => {
                                    chain.push(s.clone());
                                    break;
                                }
                                Parent::None => unreachable!("settled node without parent"),
                            }
                        }
                        chain.reverse();
                        offer(g[u] + d, chain, &mut best);
                    }
                    let bound = best.as_ref().map_or(f64::INFINITY, |b| b.0);
                    for v in 0..n {
                        if closed[v] || v == u {
                            continue;
                        }
                        let nd = g[u] + fdist(self.base_f[u], self.base_f[v]);
                        if nd < g[v] && nd + h[v] < bound && self.clear(uc, &self.base[v]) {
                            g[v] = nd;
                            parent[v] = Parent::Node(u);
                            heap.push((Key(nd + h[v]), Entry::Settled(v)));
                        }
                    }
                }
            }
        }
        let (_, chain) = best?;
        Some(trim_between(chain, sources, targets))
    }
}

/// Cuts a chain at its last contact with `sources`, then at the first
/// contact with `targets` after that.
pub fn trim_between(chain: Vec<Coord>, sources: &[Target], targets: &[Target]) -> Vec<Coord> {
    let mut rev = canonical_polyline(chain);
    rev.reverse();
    let rev = cut_at_first_contact(rev, sources);
    let mut fwd = rev;
    fwd.reverse();
    canonical_polyline(cut_at_first_contact(fwd, targets))
}

fn cut_at_first_contact(chain: Vec<Coord>, sites: &[Target]) -> Vec<Coord> {
    for i in 0..chain.len().saturating_sub(1) {
        if chain[i] == chain[i + 1] {
            continue;
        }
        let seg = Segment::new(chain[i].clone(), chain[i + 1].clone());
        if let Some(p) = first_contact_on_segment(&seg, sites) {
            let mut out = chain[..=i].to_vec();
            if out.last() != Some(&p) {
                out.push(p);
            }
            return out;
        }
    }
    chain
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_geom::rational::{frac, int};

    fn c(x: i64, y: i64) -> Coord {
        Coord::from_ints(x, y)
    }

    #[test]
    fn open_interior_only() {
        let o = Obstacle::convex(vec![c(0, 0), c(2, 0), c(2, 2), c(0, 2)]);
        assert!(o.meets_open(&c(-1, 1), &c(3, 1)));
        assert!(!o.meets_open(&c(-1, 0), &c(3, 0)));
        assert!(!o.meets_open(&c(-1, -1), &c(1, 0)));
        assert!(o.meets_open(&Coord::new(frac(1, 2), frac(1, 2)), &c(5, 5)));
        assert!(!o.meets_open(&c(2, 2), &c(3, 3)));
        assert!(o.contains_open(&c(1, 1)));
        assert!(!o.contains_open(&c(2, 1)));
    }

    #[test]
    fn straight_when_unobstructed() {
        let d = PLDisk::rect(int(0), int(0), int(10), int(10));
        let r = Router::new(&d, vec![]);
        let a = Target::Disk(PLDisk::rect(int(1), int(1), int(2), int(2)));
        let b = Target::Disk(PLDisk::rect(int(5), int(1), int(6), int(2)));
        let p = r.route(&[a], &[b]).unwrap();
        assert_eq!(p.len(), 2);
        assert_eq!(p[0].x, int(2));
        assert_eq!(p[1].x, int(5));
    }

    #[test]
    fn detours_around_tube() {
        let d = PLDisk::rect(int(0), int(0), int(10), int(10));
        let wall = tubes_around(&[Coord::new(frac(7, 2), int(0)), Coord::new(frac(7, 2), int(5))], &frac(1, 4));
        let r = Router::new(&d, wall);
        let a = Target::Point(c(1, 1));
        let b = Target::Point(c(6, 1));
        let p = r.route(&[a], &[b]).unwrap();
        assert_eq!(p.first(), Some(&c(1, 1)));
        assert_eq!(p.last(), Some(&c(6, 1)));
        assert!(p.iter().any(|q| q.y == frac(21, 4)));
        for w in p.windows(2) {
            assert!(r.clear(&w[0], &w[1]));
        }
    }

    #[test]
    fn blocked_returns_none() {
        let d = PLDisk::rect(int(0), int(0), int(10), int(10));
        let wall = tubes_around(&[c(5, -1), c(5, 11)], &frac(1, 4));
        let r = Router::new(&d, wall);
        assert!(r.route(&[Target::Point(c(1, 1))], &[Target::Point(c(9, 1))]).is_none());
    }

    #[test]
    fn follows_reflex_corner() {
        let d = PLDisk::new(vec![c(0, 0), c(4, 0), c(4, 1), c(1, 1), c(1, 4), c(0, 4)]).unwrap();
        let r = Router::new(&d, vec![]);
        let p = r.route(&[Target::Point(c(3, 0))], &[Target::Point(c(0, 3))]).unwrap();
        assert_eq!(p, vec![c(3, 0), c(1, 1), c(0, 3)]);
    }
}
