//! Short arcs from marked boundary points of an outer disk to the inner
//! stage, made pairwise disjoint.

use std::cmp::Ordering;

use crate::disk_metric::{geodesic_to_set, Target};
use crate::exact_geom::{arc_length, Coord, PLArc, PLDisk, Rational};

use super::router::{tubes_around, Obstacle, Router};
use super::{ConnectorArc, Mark, WeldError};

/// Position along the counterclockwise boundary: edge index and parameter.
fn boundary_key(p: &PLDisk, y: &Coord) -> (usize, Rational) {
    for (i, e) in p.edges().enumerate() {
        if e.contains(y) {
            return (i, e.param_of(y));
        }
    }
    (usize::MAX, Rational::from_integer(0.into()))
}

/// Marks in clockwise order from the disk's first boundary vertex.
pub fn clockwise_order(p: &PLDisk, marks: &[Mark]) -> Vec<usize> {
    let keys: Vec<(usize, Rational)> = marks.iter().map(|m| boundary_key(p, &m.point)).collect();
    let zero = Rational::from_integer(0.into());
    let mut idx: Vec<usize> = (0..marks.len()).collect();
    idx.sort_by(|&a, &b| {
        let sa = keys[a].0 == 0 && keys[a].1 == zero;
        let sb = keys[b].0 == 0 && keys[b].1 == zero;
        match (sa, sb) {
            (true, false) => Ordering::Less,
            (false, true) => Ordering::Greater,
            _ => keys[b].cmp(&keys[a]),
        }
    });
    idx
}

fn chain_clear(router: &Router, chain: &[Coord]) -> bool {
    chain.windows(2).all(|w| router.clear(&w[0], &w[1]))
}

/// One connector per mark, from the mark to the nearest point of `bodies`,
/// each shorter than `delta`. Geodesics are used as they are when they keep
/// clear of the connectors already placed; otherwise the mark is rerouted
/// around sup-norm tubes of radius `eta`. Returns the unperturbed geodesics
/// alongside the connectors, both in mark order.
pub fn connect_marks(
    p: &PLDisk,
    bodies: &[Target],
    marks: &[Mark],
    delta: &Rational,
    eta: &Rational,
    stage: u32,
) -> Result<(Vec<PLArc>, Vec<ConnectorArc>), WeldError> {
    let mut raw: Vec<PLArc> = Vec::with_capacity(marks.len());
    for m in marks {
        let g = geodesic_to_set(p, &m.point, bodies)?;
        if g.is_point() || g.length.cmp_rational(delta) != Ordering::Less {
            return Err(WeldError::ScheduleViolated { stage, mark: m.point.clone() });
        }
        raw.push(g.arc().unwrap());
    }
    let mut placed: Vec<Option<ConnectorArc>> = vec![None; marks.len()];
    let mut tubes: Vec<Obstacle> = Vec::new();
    for i in clockwise_order(p, marks) {
        let mut obstacles = tubes.clone();
        for (k, m) in marks.iter().enumerate() {
            if k != i {
                obstacles.extend(tubes_around(std::slice::from_ref(&m.point), eta));
            }
        }
        let router = Router::new(p, obstacles);
        let chain = if chain_clear(&router, raw[i].vertices()) {
            raw[i].vertices().to_vec()
        } else {
            router
                .route(&[Target::Point(marks[i].point.clone())], bodies)
                .ok_or(WeldError::CrowdingFailure { stage })?
        };
        let arc = PLArc::new(chain).map_err(|_| WeldError::CrowdingFailure { stage })?;
        let length = arc_length(&arc);
        if length.cmp_rational(delta) != Ordering::Less {
            return Err(WeldError::CrowdingFailure { stage });
        }
        tubes.extend(tubes_around(arc.vertices(), eta));
        placed[i] = Some(ConnectorArc { to: arc.end().clone(), arc, stage, from: marks[i].clone(), length });
    }
    Ok((raw, placed.into_iter().map(|c| c.unwrap()).collect()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arc_weld::{Provenance, Side};
    use crate::exact_geom::rational::{frac, int};
    use crate::exact_geom::seg_intersect;
    use crate::exact_geom::IntersectionResult;

    fn mark(x: Rational, y: Rational, k: usize) -> Mark {
        Mark { point: Coord::new(x, y), from: Provenance { kappa: k, side: Side::Start } }
    }

    #[test]
    fn corner_mark_goes_diagonally() {
        let p = PLDisk::rect(int(0), int(0), int(4), int(4));
        let e = [Target::Disk(PLDisk::rect(int(1), int(1), int(3), int(3)))];
        let (_, c) = connect_marks(&p, &e, &[mark(int(0), int(0), 0)], &int(2), &frac(1, 64), 1).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].arc.vertices(), &[Coord::from_ints(0, 0), Coord::from_ints(1, 1)]);
        assert_eq!(c[0].length.terms, vec![int(2)]);
    }

    #[test]
    fn shared_landing_is_separated() {
        // Both marks see the same nearest point (the corner of the inner
        // square), so their geodesics share it.
        let p = PLDisk::rect(int(0), int(0), int(4), int(4));
        let e = [Target::Disk(PLDisk::rect(int(1), int(1), int(3), int(3)))];
        let marks = [mark(int(0), frac(1, 2), 0), mark(frac(1, 2), int(0), 1)];
        let (raw, c) = connect_marks(&p, &e, &marks, &int(2), &frac(1, 64), 1).unwrap();
        assert_eq!(raw[0].end(), raw[1].end());
        assert_ne!(c[0].to, c[1].to);
        for a in c[0].arc.segments() {
            for b in c[1].arc.segments() {
                assert_eq!(seg_intersect(&a, &b), IntersectionResult::Empty);
            }
        }
        assert!(c.iter().all(|a| a.length.cmp_rational(&int(2)) == Ordering::Less));
    }

    #[test]
    fn far_mark_violates_schedule() {
        let p = PLDisk::rect(int(0), int(0), int(4), int(4));
        let e = [Target::Disk(PLDisk::rect(int(1), int(1), int(3), int(3)))];
        let r = connect_marks(&p, &e, &[mark(int(0), int(0), 0)], &int(1), &frac(1, 64), 1);
        assert!(matches!(r, Err(WeldError::ScheduleViolated { .. })));
    }

    #[test]
    fn no_marks_no_connectors() {
        let p = PLDisk::rect(int(0), int(0), int(4), int(4));
        let e = [Target::Disk(PLDisk::rect(int(1), int(1), int(3), int(3)))];
        let (raw, c) = connect_marks(&p, &e, &[], &int(1), &frac(1, 64), 1).unwrap();
        assert!(raw.is_empty() && c.is_empty());
    }
}
