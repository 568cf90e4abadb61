#![allow(dead_code)]

use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap, HashSet};

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use weld_core::exact_geom::rational::frac;
use weld_core::exact_geom::segment::{seg_intersect, IntersectionResult};
use weld_core::exact_geom::{Coord, LengthValue, Location, PLArc, PLDisk, Rational, Segment};

/// Random simply connected polyomino on a `side × side` grid, grown cell by
/// cell, rejecting cells that would create a hole or a corner-only contact.
pub fn random_polyomino(rng: &mut ChaCha8Rng, side: i64, cells: usize) -> BTreeSet<(i64, i64)> {
    loop {
        let mut set = BTreeSet::new();
        set.insert((rng.gen_range(0..side), rng.gen_range(0..side)));
        let mut stuck = 0;
        while set.len() < cells && stuck < 200 {
            let all: Vec<_> = set.iter().copied().collect();
            let (cx, cy) = all[rng.gen_range(0..all.len())];
            let (dx, dy) = [(1, 0), (-1, 0), (0, 1), (0, -1)][rng.gen_range(0..4)];
            let c = (cx + dx, cy + dy);
            if c.0 < 0 || c.1 < 0 || c.0 >= side || c.1 >= side || set.contains(&c) {
                stuck += 1;
                continue;
            }
            set.insert(c);
            if boundary_ring(&set).is_none() {
                set.remove(&c);
                stuck += 1;
            } else {
                stuck = 0;
            }
        }
        if set.len() >= cells.min(3) {
            return set;
        }
    }
}

/// The boundary of a polyomino as a single simple ring, or `None` when the
/// cells have holes or pinch points.
pub fn boundary_ring(cells: &BTreeSet<(i64, i64)>) -> Option<Vec<(i64, i64)>> {
    let mut edges: Vec<((i64, i64), (i64, i64))> = Vec::new();
    for &(x, y) in cells {
        if !cells.contains(&(x, y - 1)) {
            edges.push(((x, y), (x + 1, y)));
        }
        if !cells.contains(&(x + 1, y)) {
            edges.push(((x + 1, y), (x + 1, y + 1)));
        }
        if !cells.contains(&(x, y + 1)) {
            edges.push(((x + 1, y + 1), (x, y + 1)));
        }
        if !cells.contains(&(x - 1, y)) {
            edges.push(((x, y + 1), (x, y)));
        }
    }
    let mut next = std::collections::HashMap::new();
    for &(a, b) in &edges {
        if next.insert(a, b).is_some() {
            return None;
        }
    }
    let start = edges[0].0;
    let mut ring = vec![start];
    let mut cur = next[&start];
    while cur != start {
        ring.push(cur);
        cur = next[&cur];
        if ring.len() > edges.len() {
            return None;
        }
    }
    (ring.len() == edges.len()).then_some(ring)
}

pub fn polyomino_disk(cells: &BTreeSet<(i64, i64)>) -> PLDisk {
    let ring = boundary_ring(cells).expect("simple polyomino");
    PLDisk::new(ring.into_iter().map(|(x, y)| Coord::from_ints(x, y)).collect()).unwrap()
}

/// Random rectilinear disk with at most `max_vertices` boundary vertices.
pub fn random_rectilinear_disk(rng: &mut ChaCha8Rng, max_vertices: usize) -> PLDisk {
    loop {
        let cells = rng.gen_range(3..14);
        let set = random_polyomino(rng, 6, cells);
        let d = polyomino_disk(&set);
        if d.boundary().len() <= max_vertices {
            return d;
        }
    }
}

/// Random point of the closed disk on the 1/8 lattice; now and then a
/// boundary vertex.
pub fn random_point_in(rng: &mut ChaCha8Rng, d: &PLDisk) -> Coord {
    if rng.gen_bool(0.1) {
        let b = d.boundary();
        return b[rng.gen_range(0..b.len())].clone();
    }
    let (lo, hi) = d.bbox();
    loop {
        let fx: i64 = rng.gen_range(0..=64);
        let fy: i64 = rng.gen_range(0..=64);
        let x = &lo.x + (&hi.x - &lo.x) * frac(fx, 64);
        let y = &lo.y + (&hi.y - &lo.y) * frac(fy, 64);
        let c = Coord::new(x, y);
        if d.locate(&c) != Location::Outside {
            return c;
        }
    }
}

/// Whether the closed segment lies in the closed disk: cut it at every
/// boundary contact and test each piece's midpoint.
pub fn segment_in_disk(d: &PLDisk, a: &Coord, b: &Coord) -> bool {
    if a == b {
        return d.locate(a) != Location::Outside;
    }
    let s = Segment::new(a.clone(), b.clone());
    let mut ts: Vec<Rational> = vec![Rational::from_integer(0.into()), Rational::from_integer(1.into())];
    for e in d.edges() {
        match seg_intersect(&s, &e) {
            IntersectionResult::Empty => {}
            IntersectionResult::Point(p) => ts.push(s.param_of(&p)),
            IntersectionResult::Overlap(o) => {
                ts.push(s.param_of(&o.p));
                ts.push(s.param_of(&o.q));
            }
        }
    }
    ts.sort();
    ts.dedup();
    ts.windows(2).all(|w| {
        let mid = s.at(&((&w[0] + &w[1]) / Rational::from_integer(2.into())));
        d.locate(&mid) != Location::Outside
    }) && d.locate(a) != Location::Outside
}

/// Shortest path by Dijkstra on the visibility graph of boundary vertices
/// plus the two endpoints, returned in canonical (collinear-free) form.
pub fn visibility_shortest_path(d: &PLDisk, x: &Coord, y: &Coord) -> Vec<Coord> {
    if x == y {
        return vec![x.clone()];
    }
    let mut nodes: Vec<Coord> = vec![x.clone(), y.clone()];
    for v in d.boundary() {
        if v != x && v != y {
            nodes.push(v.clone());
        }
    }
    let n = nodes.len();
    let mut vis = vec![vec![false; n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let ok = segment_in_disk(d, &nodes[i], &nodes[j]);
            vis[i][j] = ok;
            vis[j][i] = ok;
        }
    }
    let mut dist: Vec<Option<LengthValue>> = vec![None; n];
    let mut prev = vec![usize::MAX; n];
    let mut done = vec![false; n];
    dist[0] = Some(LengthValue::zero());
    let mut heap = BinaryHeap::new();
    heap.push(Reverse((LengthValue::zero(), 0usize)));
    while let Some(Reverse((dl, u))) = heap.pop() {
        if done[u] {
            continue;
        }
        done[u] = true;
        for v in 0..n {
            if !vis[u][v] || done[v] {
                continue;
            }
            let cand = dl.add(&LengthValue::from_terms(vec![nodes[u].dist2(&nodes[v])]));
            let better = match &dist[v] {
                None => true,
                Some(cur) => cand < *cur,
            };
            if better {
                dist[v] = Some(cand.clone());
                prev[v] = u;
                heap.push(Reverse((cand, v)));
            }
        }
    }
    let mut chain = vec![nodes[1].clone()];
    let mut c = 1;
    let mut seen = HashSet::new();
    while c != 0 {
        assert!(seen.insert(c), "cycle in predecessor chain");
        c = prev[c];
        chain.push(nodes[c].clone());
    }
    chain.reverse();
    PLArc::new_unchecked(chain).into_vertices()
}
