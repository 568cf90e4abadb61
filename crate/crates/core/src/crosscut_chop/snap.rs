//! Moving spanning-arc endpoints onto marked boundary points.
//!
//! Each endpoint slides clockwise to the nearest mark. The arc's last
//! stretch is replaced by a path through a thin collar along the boundary,
//! and arcs converging on one mark are nested by depth so they stay
//! disjoint. Marks left without an arc get a shallow tent arc to their
//! counterclockwise neighbour.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::{diameter2, faces_of, inward_at_vertex, is_spanning, l1, l1_unit, pairwise_clean, ChopError, ChopRegion, Perimeter};
use crate::exact_geom::arc::canonical_polyline;
use crate::exact_geom::rational::{half, int};
use crate::exact_geom::{Coord, PLArc, PLDisk, Rational};

const TAU_HALVINGS: usize = 48;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Snapped {
    pub arcs: Vec<PLArc>,
    pub regions: Vec<ChopRegion>,
    /// Arcs added for marks that received no endpoint.
    pub added: usize,
}

struct Station {
    s: Rational,
    base: Coord,
    ray: Coord,
}

struct End {
    arc: usize,
    /// 0 for the first vertex, 1 for the last.
    which: usize,
    s: Rational,
    x: Coord,
    dir: Coord,
    /// L1 length of the segment the endpoint sits on.
    room: Rational,
}

/// Snaps arc endpoints to marks. Marks must be eps-dense: every boundary
/// piece between consecutive marks has diameter below eps.
pub fn snap_to_marks(d: &PLDisk, arcs: &[PLArc], marks: &[Coord], eps: &Rational) -> Result<Snapped, ChopError> {
    let perim = Perimeter::new(d.boundary().to_vec());
    let mut pos: Vec<(Rational, Coord)> = Vec::new();
    for m in marks {
        let s = perim.locate(m).ok_or_else(|| ChopError::OffBoundary(m.clone()))?;
        pos.push((s, m.clone()));
    }
    pos.sort();
    pos.dedup_by(|a, b| a.0 == b.0);
    let nm = pos.len();
    if nm < 2 {
        return Err(ChopError::TooFewMarks);
    }
    let eps2 = eps * eps;
    let piece_len: Vec<Rational> = (0..nm).map(|i| perim.wrap(&(&pos[(i + 1) % nm].0 - &pos[i].0))).collect();
    let piece_len: Vec<Rational> =
        piece_len.into_iter().map(|l| if l.is_zero() { perim.total().clone() } else { l }).collect();
    for i in 0..nm {
        let mut pts = vec![pos[i].1.clone(), pos[(i + 1) % nm].1.clone()];
        pts.extend(perim.vertices_ahead(&pos[i].0, &piece_len[i]).into_iter().map(|(k, _)| perim.ring[k].clone()));
        if diameter2(&pts) >= eps2 {
            return Err(ChopError::MarksNotDense(pos[i].1.clone(), pos[(i + 1) % nm].1.clone()));
        }
    }
    // Index of the mark an arclength position snaps to.
    let mark_of = |s: &Rational| -> usize { (0..nm).rev().find(|&i| pos[i].0 <= *s).unwrap_or(nm - 1) };

    let mut kept: Vec<Vec<Coord>> = Vec::new();
    let mut ends: Vec<Vec<End>> = (0..nm).map(|_| Vec::new()).collect();
    for a in arcs {
        let v = a.vertices();
        let n = v.len();
        let s0 = perim.locate(&v[0]).ok_or_else(|| ChopError::OffBoundary(v[0].clone()))?;
        let s1 = perim.locate(&v[n - 1]).ok_or_else(|| ChopError::OffBoundary(v[n - 1].clone()))?;
        let (m0, m1) = (mark_of(&s0), mark_of(&s1));
        if m0 == m1 {
            continue;
        }
        let idx = kept.len();
        kept.push(v.to_vec());
        for (which, s, m, x, y) in [(0, s0, m0, &v[0], &v[1]), (1, s1, m1, &v[n - 1], &v[n - 2])] {
            let rel = perim.wrap(&(&s - &pos[m].0));
            if rel.is_zero() {
                continue;
            }
            let dir = y - x;
            ends[m].push(End { arc: idx, which, s: rel, x: x.clone(), room: l1(&dir), dir: l1_unit(&dir) });
        }
    }

    let mut tau = eps / int(8);
    for _ in 0..TAU_HALVINGS {
        if let Some(out) = attempt(d, &perim, &pos, &piece_len, &kept, &ends, &tau) {
            let regions = faces_of(d, &out.0)?;
            let bound = int(14) * eps;
            if let Some(big) = regions.iter().find(|r| r.diameter2 >= &bound * &bound) {
                return Err(ChopError::DiameterBound { factor: 14, diameter2: big.diameter2.clone() });
            }
            let arcs = out.0.into_iter().map(PLArc::new_unchecked).collect();
            return Ok(Snapped { arcs, regions, added: out.1 });
        }
        tau /= int(2);
    }
    Err(ChopError::ResolutionExhausted("collar rerouting did not separate the arcs"))
}

fn attempt(
    d: &PLDisk,
    perim: &Perimeter,
    pos: &[(Rational, Coord)],
    piece_len: &[Rational],
    kept: &[Vec<Coord>],
    ends: &[Vec<End>],
    tau: &Rational,
) -> Option<(Vec<Vec<Coord>>, usize)> {
    let nm = pos.len();
    let mut chains: Vec<Vec<Coord>> = kept.to_vec();
    let mut incident = vec![false; nm];
    for c in &chains {
        for e in [&c[0], &c[c.len() - 1]] {
            if let Some(i) = pos.iter().position(|p| &p.1 == e) {
                incident[i] = true;
            }
        }
    }
    for (m, group) in ends.iter().enumerate() {
        if group.is_empty() {
            continue;
        }
        incident[m] = true;
        let mut stations: Vec<Station> = group
            .iter()
            .map(|e| Station { s: e.s.clone(), base: e.x.clone(), ray: e.dir.clone() })
            .collect();
        for (k, s) in perim.vertices_ahead(&pos[m].0, &piece_len[m]) {
            if group.iter().all(|e| e.s != s) {
                stations.push(Station { s, base: perim.ring[k].clone(), ray: inward_at_vertex(&perim.ring, k) });
            }
        }
        stations.sort_by(|a, b| b.s.cmp(&a.s));
        for e in group {
            if tau * int(2) >= e.room {
                return None;
            }
            let mut path = vec![&e.x + &e.dir.scale(tau)];
            for st in stations.iter().filter(|st| st.s < e.s) {
                path.push(&st.base + &st.ray.scale(&(tau * &st.s / &e.s)));
            }
            path.push(pos[m].1.clone());
            let c = &mut chains[e.arc];
            if e.which == 0 {
                path.reverse();
                path.extend(c[1..].iter().cloned());
                *c = path;
            } else {
                c.pop();
                c.extend(path);
            }
        }
    }
    let mut added = 0;
    for i in 0..nm {
        if incident[i] {
            continue;
        }
        let j = (i + 1) % nm;
        chains.push(tent(perim, &pos[i], &pos[j].1, &piece_len[i], tau));
        incident[i] = true;
        incident[j] = true;
        added += 1;
    }
    let chains: Vec<Vec<Coord>> = chains.into_iter().map(canonical_polyline).collect();
    (chains.iter().all(|c| is_spanning(d, c)) && pairwise_clean(&chains, true)).then_some((chains, added))
}

/// A shallow arc from one mark to the next, following the boundary piece
/// between them at depth proportional to the distance from the nearer end.
fn tent(perim: &Perimeter, from: &(Rational, Coord), to: &Coord, len: &Rational, tau: &Rational) -> Vec<Coord> {
    let mut stations: Vec<(Rational, Coord, Coord)> = perim
        .vertices_ahead(&from.0, len)
        .into_iter()
        .map(|(k, s)| (s, perim.ring[k].clone(), inward_at_vertex(&perim.ring, k)))
        .collect();
    let mid = half(len);
    if stations.iter().all(|st| st.0 != mid) {
        let at = &from.0 + &mid;
        stations.push((mid, perim.point_at(&at), perim.inward_at(&at)));
    }
    stations.sort_by(|a, b| a.0.cmp(&b.0));
    let mut path = vec![from.1.clone()];
    for (s, base, ray) in stations {
        let near = if s < len - &s { s.clone() } else { len - &s };
        path.push(&base + &ray.scale(&(tau * near / len)));
    }
    path.push(to.clone());
    path
}
