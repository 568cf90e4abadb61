//! Turns a greedy selection into arcs with pairwise disjoint interiors that
//! end on cell bodies and keep clear of every connector.

use crate::disk_metric::Target;
use crate::exact_geom::{arc_length, Coord, PLArc, PLDisk, Rational, Segment};

use super::router::{tubes_around, Obstacle, Router};
use super::select::classes_before;
use super::{Cell, SelectionState, WeldArc, WeldError, WeldKind};

/// Whether some interior point of the chain lies in one of the targets.
pub fn interior_meets(chain: &[Coord], targets: &[Target]) -> bool {
    let n = chain.len();
    if n < 2 {
        return false;
    }
    for (i, w) in chain.windows(2).enumerate() {
        let seg = Segment::new(w[0].clone(), w[1].clone());
        for t in targets {
            let edges = t.edges();
            let hits: Vec<Coord> = if edges.is_empty() {
                t.vertices().into_iter().filter(|v| seg.contains(v)).collect()
            } else {
                let mut h = Vec::new();
                for e in &edges {
                    match crate::exact_geom::seg_intersect(&seg, e) {
                        crate::exact_geom::IntersectionResult::Empty => {}
                        crate::exact_geom::IntersectionResult::Point(p) => h.push(p),
                        crate::exact_geom::IntersectionResult::Overlap(_) => return true,
                    }
                }
                if let Target::Disk(d) = t {
                    let mid = w[0].midpoint(&w[1]);
                    if d.locate(&mid) == crate::exact_geom::Location::Inside {
                        return true;
                    }
                }
                h
            };
            for h in hits {
                let at_start = i == 0 && h == chain[0];
                let at_end = i == n - 2 && h == chain[n - 1];
                if !at_start && !at_end {
                    return true;
                }
            }
        }
    }
    false
}

fn body_index(cells: &[Cell], members: &[usize], p: &Coord) -> Option<usize> {
    members.iter().copied().find(|&c| cells[c].body_contains(p))
}

/// Reroutes the selected arcs in order. Each arc runs from a body of its
/// source component to a body of its target component (components as they
/// stood when it was chosen), avoiding open sup-norm tubes of radius `eta`
/// around every connector, every arc committed before it and the boundary of
/// every other cell.
pub fn make_disjoint(
    p: &PLDisk,
    cells: &[Cell],
    state: &SelectionState,
    eta: &Rational,
    stage: u32,
) -> Result<Vec<WeldArc>, WeldError> {
    let n = cells.len();
    let before = classes_before(n, &state.chosen);
    let mut connector_tubes: Vec<Obstacle> = Vec::new();
    for c in cells {
        for a in &c.attached {
            connector_tubes.extend(tubes_around(a.vertices(), eta));
        }
    }
    let mut committed: Vec<Obstacle> = Vec::new();
    let mut out: Vec<WeldArc> = Vec::with_capacity(state.chosen.len());
    let mut placed: Vec<PLArc> = Vec::new();
    for (k, raw) in state.chosen.iter().enumerate() {
        let cls = &before[k];
        let (ca, cb) = (cls[raw.cells.0], cls[raw.cells.1]);
        let src: Vec<usize> = (0..n).filter(|&c| cls[c] == ca).collect();
        let dst: Vec<usize> = (0..n).filter(|&c| cls[c] == cb).collect();
        let mut obstacles = connector_tubes.clone();
        obstacles.extend(committed.iter().cloned());
        for c in (0..n).filter(|&c| cls[c] != ca && cls[c] != cb) {
            for t in &cells[c].body {
                for e in t.edges() {
                    obstacles.push(Obstacle::tube(&e.p, &e.q, eta));
                }
                if let Target::Point(q) = t {
                    obstacles.push(Obstacle::tube(q, q, eta));
                }
            }
        }
        let router = Router::new(p, obstacles);
        let sources: Vec<Target> = src.iter().flat_map(|&c| cells[c].body.clone()).collect();
        let targets: Vec<Target> = dst.iter().flat_map(|&c| cells[c].body.clone()).collect();
        let mut everything: Vec<Target> = cells.iter().flat_map(|c| c.targets()).collect();
        everything.extend(placed.iter().cloned().map(Target::Arc));

        let rv = raw.arc.vertices();
        let raw_ok = body_index(cells, &src, &rv[0]).is_some()
            && body_index(cells, &dst, rv.last().unwrap()).is_some()
            && rv.windows(2).all(|w| router.clear(&w[0], &w[1]))
            && !interior_meets(rv, &everything);
        let (chain, kind) = if raw_ok {
            (rv.to_vec(), WeldKind::Raw)
        } else {
            let chain = router.route(&sources, &targets).ok_or(WeldError::CrowdingFailure { stage })?;
            let slid = body_index(cells, &src, &rv[0]).is_none() || body_index(cells, &dst, rv.last().unwrap()).is_none();
            (chain, if slid { WeldKind::Slid } else { WeldKind::Perturbed })
        };
        let arc = PLArc::new(chain).map_err(|_| WeldError::CrowdingFailure { stage })?;
        if interior_meets(arc.vertices(), &everything) {
            return Err(WeldError::CrowdingFailure { stage });
        }
        let from = body_index(cells, &src, arc.start()).ok_or(WeldError::CrowdingFailure { stage })?;
        let to = body_index(cells, &dst, arc.end()).ok_or(WeldError::CrowdingFailure { stage })?;
        committed.extend(tubes_around(arc.vertices(), eta));
        placed.push(arc.clone());
        let length = arc_length(&arc);
        out.push(WeldArc { arc, stage, kind, connects: (from, to), clearance: eta.clone(), length });
    }
    Ok(out)
}
