//! Welding arcs between the components of nested stages: connectors from
//! marked boundary points inward, greedy shortest arcs between components,
//! clearance rerouting to make everything disjoint, and assembly of the
//! per-stage pieces into arcs that end on the scene.

pub mod connect;
pub mod driver;
pub mod router;
pub mod select;
pub mod disjoint;

use serde::{Deserialize, Serialize};

use crate::disk_metric::{GeodesicError, Target};
use crate::exact_geom::rational::{int, power_of_two_above};
use crate::exact_geom::{Coord, LengthValue, PLArc, PLDisk, Rational};
use crate::grid_approx::StageError;

pub use connect::connect_marks;
pub use disjoint::make_disjoint;
pub use driver::{assemble_kappa, run_weld, weld_all_components, weld_stage, DiskStage, HoleWeld, Kappa, MultiWeld, StageRecord, WeldConfig, WeldResult};
pub use select::{select_arcs, RawArc, SelectionState};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum WeldError {
    #[error("stage {stage}: mark {mark:?} is not within the schedule distance of the inner stage")]
    ScheduleViolated { stage: u32, mark: Coord },
    #[error("stage {stage}: clearance fell below the resolution floor")]
    CrowdingFailure { stage: u32 },
    #[error("the complement of the scene is not connected")]
    ComplementDisconnected,
    #[error("both ends of arc {0} land in the same component")]
    EndMerge(usize),
    #[error("arcs {first} and {second} of stage {stage} meet in a set that disconnects the later one")]
    TieBreakViolated { stage: u32, first: usize, second: usize },
    #[error(transparent)]
    Stage(#[from] StageError),
    #[error(transparent)]
    Geodesic(#[from] GeodesicError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Side {
    Start,
    End,
}

/// Which end of which assembled arc a mark continues.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Provenance {
    pub kappa: usize,
    pub side: Side,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mark {
    pub point: Coord,
    pub from: Provenance,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MarkedPoints {
    pub stage: u32,
    pub points: Vec<Mark>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConnectorArc {
    pub arc: PLArc,
    pub stage: u32,
    pub from: Mark,
    pub to: Coord,
    pub length: LengthValue,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum WeldKind {
    Raw,
    Perturbed,
    Slid,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeldArc {
    pub arc: PLArc,
    pub stage: u32,
    pub kind: WeldKind,
    /// Cells holding the start and the end.
    pub connects: (usize, usize),
    #[serde(with = "crate::io::rat")]
    pub clearance: Rational,
    pub length: LengthValue,
}

/// A piece of the inner configuration: a body (the disk where weld arcs may
/// end) together with the connectors landing on it.
#[derive(Clone, Debug)]
pub struct Cell {
    pub body: Vec<Target>,
    pub attached: Vec<PLArc>,
}

impl Cell {
    pub fn disk(d: PLDisk) -> Self {
        Self { body: vec![Target::Disk(d)], attached: Vec::new() }
    }

    /// The boundary of the ambient disk itself, as two closed arcs.
    pub fn frame(p: &PLDisk) -> Self {
        let b = p.boundary();
        let mid = b.len() / 2;
        let mut first = b[..=mid].to_vec();
        let mut second = b[mid..].to_vec();
        second.push(b[0].clone());
        first.dedup();
        second.dedup();
        Self {
            body: vec![Target::Arc(PLArc::new_unchecked(first)), Target::Arc(PLArc::new_unchecked(second))],
            attached: Vec::new(),
        }
    }

    pub fn targets(&self) -> Vec<Target> {
        let mut t = self.body.clone();
        t.extend(self.attached.iter().cloned().map(Target::Arc));
        t
    }

    pub fn body_contains(&self, p: &Coord) -> bool {
        self.body.iter().any(|t| t.contains(p))
    }

    pub fn vertices(&self) -> Vec<Coord> {
        let mut v: Vec<Coord> = self.targets().iter().flat_map(|t| t.vertices()).collect();
        v.sort();
        v.dedup();
        v
    }
}

/// Largest power of two not above `fraction · min(delta, sqrt(d2))`.
pub fn clearance_for(delta: &Rational, feature_d2: Option<&Rational>, fraction: &Rational) -> Rational {
    let mut cap = delta.clone();
    if let Some(d2) = feature_d2 {
        // Power of two whose square is at most d2.
        let mut s = power_of_two_above(d2);
        while &s * &s > *d2 {
            s /= int(2);
        }
        if s < cap {
            cap = s;
        }
    }
    let target = cap * fraction;
    let mut eta = power_of_two_above(&target);
    while eta > target {
        eta /= int(2);
    }
    eta
}

/// Smallest squared distance between distinct features: points, and the
/// boundaries of cells.
pub fn min_feature_d2(points: &[Coord], cells: &[Cell]) -> Option<Rational> {
    let mut best: Option<Rational> = None;
    let mut offer = |d: Rational| {
        if best.as_ref().map_or(true, |b| d < *b) {
            best = Some(d);
        }
    };
    for (i, p) in points.iter().enumerate() {
        for q in &points[i + 1..] {
            offer(p.dist2(q));
        }
        for c in cells {
            for t in &c.body {
                offer(target_d2(t, p));
            }
        }
    }
    for (i, a) in cells.iter().enumerate() {
        for b in &cells[i + 1..] {
            for ta in &a.body {
                for tb in &b.body {
                    for v in ta.vertices() {
                        offer(target_d2(tb, &v));
                    }
                    for v in tb.vertices() {
                        offer(target_d2(ta, &v));
                    }
                }
            }
        }
    }
    best
}

fn target_d2(t: &Target, p: &Coord) -> Rational {
    let edges = t.edges();
    if edges.is_empty() {
        return t.vertices()[0].dist2(p);
    }
    edges.iter().map(|e| e.dist2_to_point(p)).min().unwrap()
}
