//! Independent checks of welding output, recomputed from stored geometry.

pub mod arrangement;
pub mod run;
pub mod tiles;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::exact_geom::{
    arc_length, point_in_ring, seg_intersect, Coord, IntersectionResult, LengthValue, Location, PLArc, Rational,
    Segment,
};
use crate::grid_approx::Schedule;
use crate::planar::Region;

pub use arrangement::{Arrangement, Topology};
pub use run::{verify_chop, verify_multi, verify_weld};
pub use tiles::{rasterize, tile_topology, TileGrid, TileTopology};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Measure {
    Count(usize),
    Signed(i64),
    Length(LengthValue),
    Exact(#[serde(with = "crate::io::rat")] Rational),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    /// The property certified, in words.
    pub property: String,
    pub passed: bool,
    pub measured: Vec<(String, Measure)>,
    /// Offending geometry when the check fails.
    pub witness: Vec<Coord>,
}

impl Check {
    pub fn new(name: impl Into<String>, property: impl Into<String>) -> Self {
        Self { name: name.into(), property: property.into(), passed: true, measured: Vec::new(), witness: Vec::new() }
    }

    pub fn measure(mut self, label: &str, m: Measure) -> Self {
        self.measured.push((label.to_string(), m));
        self
    }

    pub fn fail_at(&mut self, witness: impl IntoIterator<Item = Coord>) {
        self.passed = false;
        if self.witness.is_empty() {
            self.witness.extend(witness);
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub seed: u64,
    pub schedule: Option<Schedule>,
    /// Finest tile side used by the raster checks.
    #[serde(with = "crate::io::opt_rat")]
    pub resolution: Option<Rational>,
    pub checks: Vec<Check>,
}

impl VerificationReport {
    pub fn failed(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TreeError {
    #[error("arcs {0} and {1} meet in a disconnected set")]
    PairwiseIntersectionNotConnected(usize, usize),
}

fn bbox(a: &[Coord]) -> (Coord, Coord) {
    crate::exact_geom::disk::bbox_of(a)
}

fn boxes_meet(a: &(Coord, Coord), b: &(Coord, Coord)) -> bool {
    !(a.1.x < b.0.x || b.1.x < a.0.x || a.1.y < b.0.y || b.1.y < a.0.y)
}

/// Points and overlaps where two polylines meet.
pub(crate) fn meeting(a: &[Coord], b: &[Coord]) -> Vec<IntersectionResult> {
    let mut out = Vec::new();
    for u in a.windows(2) {
        let su = Segment::new(u[0].clone(), u[1].clone());
        for v in b.windows(2) {
            let sv = Segment::new(v[0].clone(), v[1].clone());
            let r = seg_intersect(&su, &sv);
            if r != IntersectionResult::Empty {
                out.push(r);
            }
        }
    }
    out
}

/// Pairwise intersections may only be endpoints of one of the two arcs.
pub fn check_disjoint_interiors(name: &str, arcs: &[PLArc]) -> Check {
    let mut c = Check::new(name, "arcs meet only at endpoints").measure("arcs", Measure::Count(arcs.len()));
    let boxes: Vec<_> = arcs.iter().map(|a| bbox(a.vertices())).collect();
    for i in 0..arcs.len() {
        for j in i + 1..arcs.len() {
            if !boxes_meet(&boxes[i], &boxes[j]) {
                continue;
            }
            let ends = [arcs[i].start(), arcs[i].end(), arcs[j].start(), arcs[j].end()];
            for hit in meeting(arcs[i].vertices(), arcs[j].vertices()) {
                match hit {
                    IntersectionResult::Point(p) if ends.contains(&&p) => {}
                    IntersectionResult::Point(p) => c.fail_at([p]),
                    IntersectionResult::Overlap(s) => c.fail_at([s.p, s.q]),
                    IntersectionResult::Empty => {}
                }
            }
        }
    }
    c
}

/// The union of the arcs is a tree: connected, and `V − E = 1` in its exact
/// arrangement. Pairs of arcs must meet in a connected set first.
pub fn check_tree(name: &str, arcs: &[PLArc]) -> Result<Check, TreeError> {
    for i in 0..arcs.len() {
        for j in i + 1..arcs.len() {
            if !meets_connected(&arcs[i], &arcs[j]) {
                return Err(TreeError::PairwiseIntersectionNotConnected(i, j));
            }
        }
    }
    let chains: Vec<Vec<Coord>> = arcs.iter().map(|a| a.vertices().to_vec()).collect();
    let t = Arrangement::of(&[], &chains).topology();
    let mut c = Check::new(name, "the union of the arcs is a tree")
        .measure("vertices", Measure::Count(t.vertices))
        .measure("edges", Measure::Count(t.edges))
        .measure("components", Measure::Count(t.components));
    if t.components != 1 {
        c.fail_at(t.extra_components.clone());
    } else if t.vertices != t.edges + 1 {
        c.fail_at(t.holes.clone());
        if c.witness.is_empty() {
            c.witness.push(arcs[0].start().clone());
        }
    }
    Ok(c)
}

/// Whether two arcs meet in the empty set, a point, or one subarc.
pub fn meets_connected(a: &PLArc, b: &PLArc) -> bool {
    let mut pieces: Vec<(Rational, Rational)> = Vec::new();
    // Parametrise `a` by segment index plus local parameter.
    for (k, s) in a.segments().enumerate() {
        for t in b.segments() {
            match seg_intersect(&s, &t) {
                IntersectionResult::Empty => {}
                IntersectionResult::Point(p) => {
                    let u = crate::exact_geom::rational::int(k as i64) + s.param_of(&p);
                    pieces.push((u.clone(), u));
                }
                IntersectionResult::Overlap(o) => {
                    let (u, v) = (s.param_of(&o.p), s.param_of(&o.q));
                    let base = crate::exact_geom::rational::int(k as i64);
                    let (lo, hi) = if u <= v { (u, v) } else { (v, u) };
                    pieces.push((&base + lo, base + hi));
                }
            }
        }
    }
    pieces.sort();
    let mut merged: Vec<(Rational, Rational)> = Vec::new();
    for (lo, hi) in pieces {
        match merged.last_mut() {
            Some(last) if lo <= last.1 => {
                if hi > last.1 {
                    last.1 = hi;
                }
            }
            _ => merged.push((lo, hi)),
        }
    }
    merged.len() <= 1
}

/// Whether some point of the arc other than its endpoints lies in a region.
pub fn arc_interior_meets(arc: &[Coord], regions: &[Region]) -> Option<Coord> {
    let (first, last) = (&arc[0], &arc[arc.len() - 1]);
    for w in arc.windows(2) {
        let s = Segment::new(w[0].clone(), w[1].clone());
        for g in regions {
            for e in g.edges() {
                match seg_intersect(&s, &e) {
                    IntersectionResult::Empty => {}
                    IntersectionResult::Point(p) => {
                        if &p != first && &p != last {
                            return Some(p);
                        }
                    }
                    IntersectionResult::Overlap(o) => return Some(o.p.midpoint(&o.q)),
                }
            }
            let m = w[0].midpoint(&w[1]);
            if g.locate(&m) == Location::Inside {
                return Some(m);
            }
        }
        if w[0] != *first && regions.iter().any(|g| g.locate(&w[0]) != Location::Outside) {
            return Some(w[0].clone());
        }
    }
    None
}

/// Exact cellularity: connected, `V − E + F = 1`, and one complementary
/// face.
pub fn check_cellular_exact(name: &str, regions: &[Region], arcs: &[PLArc]) -> Check {
    let chains: Vec<Vec<Coord>> = arcs.iter().map(|a| a.vertices().to_vec()).collect();
    let t = Arrangement::of(regions, &chains).topology();
    let mut c = Check::new(name, "the union is connected with connected complement (exact)")
        .measure("components", Measure::Count(t.components))
        .measure("euler", Measure::Signed(t.euler))
        .measure("complement_components", Measure::Count(t.complement_components()));
    if !t.is_cellular() {
        let mut w = t.extra_components.clone();
        w.extend(t.holes.clone());
        c.fail_at(w);
    }
    c
}

/// Tile-level cellularity with conservative rasterisation.
pub fn check_cellular(name: &str, grid: &TileGrid, set: &std::collections::BTreeSet<(i64, i64)>) -> Check {
    let t = tile_topology(set);
    let mut c = Check::new(name, "the tile union is connected with connected complement")
        .measure("tiles", Measure::Count(t.tiles))
        .measure("components", Measure::Count(t.components))
        .measure("euler", Measure::Signed(t.euler))
        .measure("complement_components", Measure::Count(t.complement_components))
        .measure("tile_side", Measure::Exact(grid.side.clone()));
    if !t.is_cellular() {
        let tiles = t.extra_tiles.iter().chain(&t.hole_tiles);
        c.fail_at(tiles.map(|&(i, j)| grid.center(i, j)).collect::<Vec<_>>());
    }
    c
}

/// A complementary component of the scene: the unbounded one, or a hole.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Gap {
    Unbounded,
    Hole(usize, usize),
}

fn gap_containing(regions: &[Region], p: &Coord, skip: Option<usize>) -> Gap {
    let mut best: Option<(Rational, Gap)> = None;
    for (r, g) in regions.iter().enumerate() {
        if Some(r) == skip {
            continue;
        }
        for (h, ring) in g.holes.iter().enumerate() {
            if point_in_ring(p, ring) == Location::Inside {
                let area = crate::exact_geom::rational::abs(&crate::exact_geom::signed_area2(ring));
                if best.as_ref().map_or(true, |(a, _)| area < *a) {
                    best = Some((area, Gap::Hole(r, h)));
                }
            }
        }
    }
    best.map_or(Gap::Unbounded, |(_, g)| g)
}

/// After welding, every complementary component of the scene holds exactly
/// one complementary component of the welded set.
pub fn check_component_bijection(name: &str, regions: &[Region], arcs: &[PLArc]) -> Check {
    let chains: Vec<Vec<Coord>> = arcs.iter().map(|a| a.vertices().to_vec()).collect();
    let arr = Arrangement::of(regions, &chains);
    let mut counts: BTreeMap<Gap, usize> = BTreeMap::new();
    counts.insert(Gap::Unbounded, 0);
    for (r, g) in regions.iter().enumerate() {
        for h in 0..g.holes.len() {
            counts.insert(Gap::Hole(r, h), 0);
        }
    }
    let mut witness = Vec::new();
    for face in arr.outside_faces() {
        let gap = match &face {
            None => Gap::Unbounded,
            Some((a, b)) => {
                let m = a.midpoint(b);
                let mut found = None;
                for (r, g) in regions.iter().enumerate() {
                    if crate::planar::ring_edges(&g.outer).iter().any(|e| e.contains(&m)) {
                        found = Some(gap_containing(regions, &g.outer[0], Some(r)));
                    }
                    for (h, ring) in g.holes.iter().enumerate() {
                        if crate::planar::ring_edges(ring).iter().any(|e| e.contains(&m)) {
                            found = Some(Gap::Hole(r, h));
                        }
                    }
                }
                found.unwrap_or_else(|| gap_containing(regions, &m, None))
            }
        };
        let n = counts.entry(gap).or_insert(0);
        *n += 1;
        if *n > 1 {
            if let Some((a, _)) = face {
                witness.push(a);
            }
        }
    }
    let gaps = counts.len();
    let matched = counts.values().filter(|&&n| n == 1).count();
    let mut c = Check::new(name, "each complementary component of the scene holds exactly one of the welded set")
        .measure("scene_complement_components", Measure::Count(gaps))
        .measure("matched", Measure::Count(matched));
    if matched != gaps {
        c.fail_at(witness);
        c.passed = false;
    }
    c
}

/// Per-stage maxima of new arc lengths against their bounds.
pub fn check_null_sequence(name: &str, per_stage: &[(u32, Vec<LengthValue>, Rational)], schedule: &Schedule, stop_ok: bool) -> Check {
    let mut c = Check::new(name, "new arcs at stage n are shorter than their bound and the sequence stops")
        .measure("scale", Measure::Exact(schedule.scale.clone()));
    for (n, lengths, bound) in per_stage {
        let Some(max) = lengths.iter().max_by(|a, b| a.cmp(b)) else { continue };
        c.measured.push((format!("stage_{n}_max"), Measure::Length(max.clone())));
        if max.cmp_rational(bound) != std::cmp::Ordering::Less {
            c.passed = false;
        }
    }
    if !stop_ok {
        c.passed = false;
    }
    c
}

pub fn polyline_length(v: &[Coord]) -> LengthValue {
    arc_length(&PLArc::new_unchecked(v.to_vec()))
}
