//! Cutting a thin disk into small pieces along a square lattice.
//!
//! Lattice lines meet a thin disk in a forest: a cycle would bound a lattice
//! square inside the disk, whose centre is too deep. Boundary crossings are
//! leaves and interior lattice corners are the branch points. Each corner is
//! resolved by clearing a small square around it and sending its legs to
//! distinct boundary points near the corner's nearest boundary point, so the
//! forest becomes a family of pairwise disjoint crosscuts.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};

use num_integer::Integer;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{faces_of, is_eps_thin, is_spanning, pairwise_clean, ChopError, ChopRegion, Perimeter};
use crate::exact_geom::arc::canonical_polyline;
use crate::exact_geom::rational::{frac, half, int};
use crate::exact_geom::{Coord, LengthValue, PLArc, PLDisk, Rational};

const OFFSET_DRAWS: usize = 64;
const ETA_HALVINGS: usize = 30;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Span {
    pub offset: Coord,
    #[serde(with = "crate::io::rat")]
    pub side: Rational,
    pub arcs: Vec<PLArc>,
    pub regions: Vec<ChopRegion>,
}

/// Lattice side for a given eps.
pub fn lattice_side(eps: &Rational) -> Rational {
    int(5) * eps
}

/// Spanning arcs cutting an eps-thin disk into regions of diameter below
/// `12·eps`, on a lattice whose offset is drawn from `seed`.
pub fn span_disk(d: &PLDisk, eps: &Rational, seed: u64) -> Result<Span, ChopError> {
    let thin = is_eps_thin(d, eps);
    if !thin.thin {
        return Err(ChopError::NotThin(thin.witness));
    }
    let side = lattice_side(eps);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let nudge = &side * frac(1, 3 * 65537);
    for _ in 0..OFFSET_DRAWS {
        let ox = &side * frac(rng.gen_range(0..65536), 65536) + &nudge;
        let oy = &side * frac(rng.gen_range(0..65536), 65536) + &nudge;
        let offset = Coord::new(ox, oy);
        if !generic_offset(d, &offset, &side) {
            continue;
        }
        if let Some(span) = build(d, eps, &offset, &side)? {
            return Ok(span);
        }
    }
    Err(ChopError::ResolutionExhausted("no lattice offset gave disjoint spanning arcs"))
}

/// As [`span_disk`] with a fixed lattice offset.
pub fn span_disk_with_offset(d: &PLDisk, eps: &Rational, offset: &Coord) -> Result<Span, ChopError> {
    let thin = is_eps_thin(d, eps);
    if !thin.thin {
        return Err(ChopError::NotThin(thin.witness));
    }
    let side = lattice_side(eps);
    if !generic_offset(d, offset, &side) {
        return Err(ChopError::ResolutionExhausted("lattice offset meets a boundary vertex or an edge meets a lattice corner"));
    }
    build(d, eps, offset, &side)?.ok_or(ChopError::ResolutionExhausted("corner resolution did not separate the arcs"))
}

fn on_line(v: &Rational, o: &Rational, side: &Rational) -> bool {
    ((v - o) / side).is_integer()
}

fn floor_index(v: &Rational, o: &Rational, side: &Rational) -> i64 {
    let q = (v - o) / side;
    i64::try_from(q.numer().div_floor(q.denom())).expect("lattice index fits i64")
}

/// No boundary vertex on a lattice line and no edge through a lattice corner.
fn generic_offset(d: &PLDisk, o: &Coord, side: &Rational) -> bool {
    if d.boundary().iter().any(|v| on_line(&v.x, &o.x, side) || on_line(&v.y, &o.y, side)) {
        return false;
    }
    for e in d.edges() {
        if e.p.x == e.q.x {
            continue;
        }
        let (a, b) = if e.p.x < e.q.x { (&e.p, &e.q) } else { (&e.q, &e.p) };
        for i in floor_index(&a.x, &o.x, side) + 1..=floor_index(&b.x, &o.x, side) {
            let x = &o.x + side * int(i);
            let y = &a.y + (&b.y - &a.y) * (&x - &a.x) / (&b.x - &a.x);
            if on_line(&y, &o.y, side) {
                return false;
            }
        }
    }
    true
}

const DIRS: [(i64, i64); 4] = [(1, 0), (0, 1), (-1, 0), (0, -1)];

fn dir(k: usize) -> Coord {
    Coord::from_ints(DIRS[k % 4].0, DIRS[k % 4].1)
}

/// An end of a lattice edge: a boundary crossing or a corner leg.
#[derive(Clone, Debug)]
enum End {
    Leaf(Coord),
    Leg(usize, usize),
}

struct Corner {
    p: Coord,
    rho: Rational,
    /// Routes per leg, from the leg stub towards the boundary, excluding the
    /// target; `None` for a leg that runs straight into `p`.
    routes: [Option<Vec<Coord>>; 4],
}

/// The corner's legs are cut back to `q_k = v + (rho/2)·d_k`. With the
/// nearest boundary point strictly inside quadrant `k`, legs `k` and `k+1`
/// head straight for it and the other two first cross to the near axes at
/// distance `rho/4`. With the nearest point on axis `k`, leg `k` is dropped
/// and the rest head straight for it.
fn resolve(v: Coord, p: Coord, r2: &Rational) -> Corner {
    let rho = LengthValue::from_terms(vec![r2.clone()]).lower;
    let h = half(&rho);
    let g = half(&h);
    let u = &p - &v;
    let q = |k: usize| &v + &dir(k).scale(&h);
    let c = |k: usize| &v + &dir(k).scale(&g);
    let mut routes: [Option<Vec<Coord>>; 4] = Default::default();
    let axis = (0..4).find(|&k| {
        let dk = dir(k);
        dk.cross(&u).is_zero() && dk.dot(&u).is_positive()
    });
    match axis {
        Some(k) => {
            for j in [k + 1, k + 2, k + 3] {
                routes[j % 4] = Some(vec![q(j)]);
            }
        }
        None => {
            let k = (0..4)
                .find(|&k| dir(k).cross(&u).is_positive() && dir(k + 1).cross(&u).is_negative())
                .expect("an off-axis vector lies in an open quadrant");
            routes[k] = Some(vec![q(k)]);
            routes[(k + 1) % 4] = Some(vec![q(k + 1)]);
            routes[(k + 3) % 4] = Some(vec![q(k + 3), c(k)]);
            routes[(k + 2) % 4] = Some(vec![q(k + 2), c(k + 1)]);
        }
    }
    Corner { p, rho, routes }
}

/// Compares directions by counterclockwise angle from `base`, in `[0, 2π)`.
fn angle_cmp(base: &Coord, a: &Coord, b: &Coord) -> Ordering {
    let upper = |w: &Coord| {
        let c = base.cross(w);
        c.is_positive() || (c.is_zero() && base.dot(w).is_positive())
    };
    match (upper(a), upper(b)) {
        (true, false) => Ordering::Less,
        (false, true) => Ordering::Greater,
        _ => Rational::zero().cmp(&a.cross(b)),
    }
}

fn build(d: &PLDisk, eps: &Rational, o: &Coord, side: &Rational) -> Result<Option<Span>, ChopError> {
    let (lo, hi) = d.bbox();
    let mut corners: Vec<Corner> = Vec::new();
    let mut corner_at: HashMap<(i64, i64), usize> = HashMap::new();
    let mut edges: Vec<(End, End)> = Vec::new();

    let mut corner = |i: i64, j: i64, corners: &mut Vec<Corner>| -> usize {
        *corner_at.entry((i, j)).or_insert_with(|| {
            let v = Coord::new(&o.x + side * int(i), &o.y + side * int(j));
            let (r2, p) = d
                .edges()
                .map(|e| (e.dist2_to_point(&v), e.closest_point(&v)))
                .min_by(|a, b| a.0.cmp(&b.0))
                .expect("disk has edges");
            corners.push(resolve(v, p, &r2));
            corners.len() - 1
        })
    };

    // axis 0: vertical lines x = const, walking up; axis 1: horizontal.
    for axis in 0..2 {
        let (olo, ohi, oo, cross_o) = if axis == 0 { (&lo.x, &hi.x, &o.x, &o.y) } else { (&lo.y, &hi.y, &o.y, &o.x) };
        for i in floor_index(olo, oo, side) + 1..=floor_index(ohi, oo, side) {
            let line = oo + side * int(i);
            let mut hits: Vec<Rational> = d
                .edges()
                .filter_map(|e| {
                    let (pa, pb, qa, qb) =
                        if axis == 0 { (&e.p.x, &e.q.x, &e.p.y, &e.q.y) } else { (&e.p.y, &e.q.y, &e.p.x, &e.q.x) };
                    ((pa < &line) != (pb < &line)).then(|| qa + (qb - qa) * (&line - pa) / (pb - pa))
                })
                .collect();
            hits.sort();
            let point = |t: &Rational| if axis == 0 { Coord::new(line.clone(), t.clone()) } else { Coord::new(t.clone(), line.clone()) };
            for pair in hits.chunks(2) {
                let [a, b] = pair else { unreachable!("a closed curve crosses a line an even number of times") };
                let mut nodes = vec![End::Leaf(point(a))];
                for j in floor_index(a, cross_o, side) + 1..=floor_index(b, cross_o, side) {
                    let t = cross_o + side * int(j);
                    if &t >= b {
                        break;
                    }
                    let ci = if axis == 0 { corner(i, j, &mut corners) } else { corner(j, i, &mut corners) };
                    nodes.push(End::Leg(ci, usize::MAX));
                }
                nodes.push(End::Leaf(point(b)));
                // Walking up (or right), the lower end uses leg N (E) and the
                // upper end leg S (W).
                let (fwd, back) = if axis == 0 { (1, 3) } else { (0, 2) };
                for w in nodes.windows(2) {
                    let a = match &w[0] {
                        End::Leg(c, _) => End::Leg(*c, fwd),
                        leaf => leaf.clone(),
                    };
                    let b = match &w[1] {
                        End::Leg(c, _) => End::Leg(*c, back),
                        leaf => leaf.clone(),
                    };
                    edges.push((a, b));
                }
            }
        }
    }

    let perim = Perimeter::new(d.boundary().to_vec());
    // Sources grouped by their common target point.
    let mut groups: BTreeMap<Coord, Vec<(usize, usize)>> = BTreeMap::new();
    for (ci, c) in corners.iter().enumerate() {
        for k in 0..4 {
            if c.routes[k].is_some() {
                groups.entry(c.p.clone()).or_default().push((ci, k));
            }
        }
    }
    let source = |ci: usize, k: usize| -> &Coord { corners[ci].routes[k].as_ref().expect("live leg").last().expect("nonempty") };
    let mut ordered: Vec<(Rational, Vec<(usize, usize)>)> = Vec::new();
    for (p, mut members) in groups {
        let s = perim.locate(&p).expect("nearest point is on the boundary");
        let k = perim.edge_at(&s);
        let t_out = &perim.ring[(k + 1) % perim.len()] - &perim.ring[k];
        members.sort_by(|a, b| angle_cmp(&t_out, &(source(a.0, a.1) - &p), &(source(b.0, b.1) - &p)).reverse());
        ordered.push((s, members));
    }

    let mut eta = corners.iter().map(|c| c.rho.clone()).min().unwrap_or_else(|| side.clone()) / int(4);
    if eta > side / int(8) {
        eta = side / int(8);
    }
    for _ in 0..ETA_HALVINGS {
        let mut target: HashMap<(usize, usize), Coord> = HashMap::new();
        for (s, members) in &ordered {
            let n = members.len() as i64;
            for (j, m) in members.iter().enumerate() {
                let off = &eta * frac(2 * j as i64 - (n - 1), 2);
                target.insert(*m, perim.point_at(&(s + off)));
            }
        }
        let end_path = |e: &End| -> Option<Vec<Coord>> {
            match e {
                End::Leaf(x) => Some(vec![x.clone()]),
                End::Leg(ci, k) => corners[*ci].routes[*k].as_ref().map(|r| {
                    let mut path = vec![target[&(*ci, *k)].clone()];
                    path.extend(r.iter().rev().cloned());
                    path
                }),
            }
        };
        let mut chains = Vec::new();
        for (a, b) in &edges {
            let (Some(mut pa), Some(pb)) = (end_path(a), end_path(b)) else { continue };
            pa.extend(pb.into_iter().rev());
            chains.push(canonical_polyline(pa));
        }
        if chains.iter().all(|c| is_spanning(d, c)) && pairwise_clean(&chains, false) {
            let regions = faces_of(d, &chains)?;
            let bound = int(12) * eps;
            if let Some(big) = regions.iter().find(|r| r.diameter2 >= &bound * &bound) {
                return Err(ChopError::DiameterBound { factor: 12, diameter2: big.diameter2.clone() });
            }
            let arcs = chains.into_iter().map(PLArc::new_unchecked).collect();
            return Ok(Some(Span { offset: o.clone(), side: side.clone(), arcs, regions }));
        }
        eta /= int(2);
    }
    Ok(None)
}
