//! Chains of short crosscuts hugging a continuum.
//!
//! The chain follows the boundary of a small filled neighbourhood of X. At
//! evenly spaced junctions it dips to the nearest point of X in a narrow
//! notch, so each piece between consecutive junctions is a crosscut of the
//! complement with small diameter.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::{diameter2, meet_only_at, pairwise_clean, ChopError, Perimeter};
use crate::exact_geom::arc::{canonical_polyline, first_self_intersection};
use crate::exact_geom::disk::winding_number;
use crate::exact_geom::rational::{frac, half, int};
use crate::exact_geom::{Coord, IntersectionResult, Location, PLArc, PLDisk, Rational, Segment};
use crate::grid_approx::{filled_neighbourhood, Scene};
use crate::planar::PinchError;
use crate::verify::{arc_interior_meets, meeting};

const ETA_HALVINGS: usize = 20;
const RADIUS_STEPS: usize = 60;

/// Crosscuts of the complement joined end to end at junctions on X.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ring {
    pub arcs: Vec<PLArc>,
    /// Junctions in order; `arcs[i]` runs from `junctions[i]` to
    /// `junctions[i + 1]`, cyclically for a closed ring.
    pub junctions: Vec<Coord>,
    /// Sup-norm radius of the neighbourhood the ring follows.
    #[serde(with = "crate::io::rat")]
    pub radius: Rational,
}

/// Filled neighbourhoods of a scene, memoised by radius.
pub struct Dilations<'a> {
    pub scene: &'a Scene,
    cache: HashMap<Rational, Result<Vec<PLDisk>, PinchError>>,
}

impl<'a> Dilations<'a> {
    pub fn new(scene: &'a Scene) -> Self {
        Self { scene, cache: HashMap::new() }
    }

    pub fn get(&mut self, r: &Rational) -> Result<Vec<PLDisk>, PinchError> {
        self.cache.entry(r.clone()).or_insert_with(|| filled_neighbourhood(self.scene, r)).clone()
    }
}

/// Crosscuts `β₁ … β_k` of diameter below eps such that `alpha` together
/// with them is a simple closed curve not enclosing X.
pub fn crosscut_ring(scene: &Scene, alpha: &PLArc, eps: &Rational) -> Result<Ring, ChopError> {
    crosscut_ring_with(&mut Dilations::new(scene), alpha, eps)
}

pub fn crosscut_ring_with(dil: &mut Dilations, alpha: &PLArc, eps: &Rational) -> Result<Ring, ChopError> {
    let scene = dil.scene;
    let av = alpha.vertices();
    let (a, b) = (&av[0], &av[av.len() - 1]);
    if scene.locate(a) != Location::OnBoundary || scene.locate(b) != Location::OnBoundary {
        return Err(ChopError::AlphaNotCrosscut("an endpoint is not on the boundary of X"));
    }
    if a == b {
        return Err(ChopError::AlphaNotCrosscut("the endpoints coincide"));
    }
    if first_self_intersection(av).is_some() {
        return Err(ChopError::AlphaNotCrosscut("alpha is not simple"));
    }
    if arc_interior_meets(av, &scene.regions).is_some() {
        return Err(ChopError::AlphaNotCrosscut("the interior of alpha meets X"));
    }
    let probe = scene.regions[0].outer[0].clone();
    let mut r = eps / int(8);
    for _ in 0..RADIUS_STEPS {
        if r < scene.resolution_floor {
            break;
        }
        let disks = match dil.get(&r) {
            Ok(d) => d,
            Err(_) => {
                r *= frac(3, 4);
                continue;
            }
        };
        let Some(o) = disks.into_iter().find(|d| d.locate(a) == Location::Inside) else {
            r /= int(2);
            continue;
        };
        let Some(path) = exit_path(&o, av, &probe) else {
            r /= int(2);
            continue;
        };
        let perim = Perimeter::new(path);
        let total = perim.cum[perim.len() - 1].clone();
        let inner = junction_count(&total, eps, 0);
        let spacing = &total / int(inner as i64 + 1);
        let centres: Vec<Rational> = (1..=inner).map(|j| &spacing * int(j as i64)).collect();
        let mut eta = &spacing / int(8);
        for _ in 0..ETA_HALVINGS {
            let mut anchors = vec![Anchor { x: a.clone(), left: None, right: Some(eta.clone()) }];
            for s in &centres {
                let x = nearest_in_x(scene, &perim.point_at(s));
                anchors.push(Anchor { x, left: Some(s - &eta), right: Some(s + &eta) });
            }
            anchors.push(Anchor { x: b.clone(), left: Some(&total - &eta), right: None });
            let chains = pieces(&perim, &anchors, false);
            if valid(scene, &chains, eps) && chains.iter().all(|c| meet_only_at(c, av, &[a, b])) {
                return Ok(finish(chains, anchors, r));
            }
            eta /= int(2);
        }
        r /= int(2);
    }
    Err(ChopError::ResolutionExhausted("no neighbourhood radius gave a crosscut ring"))
}

/// A closed ring of at least three crosscuts of diameter below eps around X.
pub fn full_ring(dil: &mut Dilations, eps: &Rational) -> Result<Ring, ChopError> {
    let scene = dil.scene;
    let mut r = eps / int(8);
    for _ in 0..RADIUS_STEPS {
        if r < scene.resolution_floor {
            break;
        }
        let disks = match dil.get(&r) {
            Ok(d) => d,
            Err(_) => {
                r *= frac(3, 4);
                continue;
            }
        };
        if disks.len() != 1 {
            return Err(ChopError::NotConnected(disks.len()));
        }
        let perim = Perimeter::new(disks[0].boundary().to_vec());
        let total = perim.total().clone();
        let k = junction_count(&total, eps, 1).max(3);
        let spacing = &total / int(k as i64);
        let mut eta = &spacing / int(8);
        for _ in 0..ETA_HALVINGS {
            let anchors: Vec<Anchor> = (0..k)
                .map(|j| {
                    let s = &spacing * int(j as i64);
                    let x = nearest_in_x(scene, &perim.point_at(&s));
                    Anchor { x, left: Some(perim.wrap(&(&s - &eta))), right: Some(&s + &eta) }
                })
                .collect();
            let chains = pieces(&perim, &anchors, true);
            if valid(scene, &chains, eps) {
                return Ok(finish(chains, anchors, r));
            }
            eta /= int(2);
        }
        r /= int(2);
    }
    Err(ChopError::ResolutionExhausted("no neighbourhood radius gave a closed crosscut ring"))
}

/// Junctions needed so consecutive ones are at most eps/2 apart along a path
/// of L1 length `total`: interior ones for an open path (`closed = 0`), all
/// of them for a closed one (`closed = 1`).
fn junction_count(total: &Rational, eps: &Rational, closed: usize) -> usize {
    let q = total / half(eps);
    let c = q.ceil().to_integer();
    let c: usize = c.try_into().expect("junction count fits usize");
    (c + closed).saturating_sub(1).max(closed)
}

struct Anchor {
    x: Coord,
    /// Path position where the incoming piece leaves the path.
    left: Option<Rational>,
    /// Path position where the outgoing piece joins the path.
    right: Option<Rational>,
}

fn pieces(perim: &Perimeter, anchors: &[Anchor], cyclic: bool) -> Vec<Vec<Coord>> {
    let n = anchors.len();
    let count = if cyclic { n } else { n - 1 };
    (0..count)
        .map(|i| {
            let (u, v) = (&anchors[i], &anchors[(i + 1) % n]);
            let from = u.right.as_ref().expect("outgoing side");
            let to = v.left.as_ref().expect("incoming side");
            let len = perim.wrap(&(to - from));
            let mut c = vec![u.x.clone(), perim.point_at(from)];
            c.extend(perim.vertices_ahead(from, &len).into_iter().map(|(k, _)| perim.ring[k].clone()));
            c.push(perim.point_at(to));
            c.push(v.x.clone());
            canonical_polyline(c)
        })
        .collect()
}

fn valid(scene: &Scene, chains: &[Vec<Coord>], eps: &Rational) -> bool {
    let eps2 = eps * eps;
    chains.iter().all(|c| {
        c.len() >= 2
            && c[0] != c[c.len() - 1]
            && first_self_intersection(c).is_none()
            && arc_interior_meets(c, &scene.regions).is_none()
            && diameter2(c) < eps2
    }) && pairwise_clean(chains, true)
}

fn finish(chains: Vec<Vec<Coord>>, anchors: Vec<Anchor>, radius: Rational) -> Ring {
    Ring {
        arcs: chains.into_iter().map(PLArc::new_unchecked).collect(),
        junctions: anchors.into_iter().map(|a| a.x).collect(),
        radius,
    }
}

/// The point of X nearest to `p`.
fn nearest_in_x(scene: &Scene, p: &Coord) -> Coord {
    scene
        .regions
        .iter()
        .flat_map(|g| g.edges())
        .map(|e| {
            let c = e.closest_point(p);
            (c.dist2(p), c)
        })
        .min_by(|a, b| a.0.cmp(&b.0))
        .expect("X has edges")
        .1
}

/// Where the arc leaves the closed neighbourhood `o`: the boundary path of
/// `o` between the exit and re-entry points that, closed up by the outside
/// stretch of the arc, does not wind around `probe`. `None` unless the arc meets `∂o` in exactly two points.
fn exit_path(o: &PLDisk, arc: &[Coord], probe: &Coord) -> Option<Vec<Coord>> {
    let mut ring = o.boundary().to_vec();
    ring.push(ring[0].clone());
    let mut hits: Vec<Coord> = Vec::new();
    for r in meeting(arc, &ring) {
        match r {
            IntersectionResult::Point(p) => {
                if !hits.contains(&p) {
                    hits.push(p);
                }
            }
            _ => return None,
        }
    }
    if hits.len() != 2 {
        return None;
    }
    // Order the hits along the arc.
    let key = |p: &Coord| -> (usize, Rational) {
        for (i, w) in arc.windows(2).enumerate() {
            let s = Segment::new(w[0].clone(), w[1].clone());
            if s.contains(p) {
                return (i, s.param_of(p));
            }
        }
        unreachable!("hit lies on the arc")
    };
    hits.sort_by_key(|p| key(p));
    let (ca, cb) = (hits[0].clone(), hits[1].clone());
    let (ia, _) = key(&ca);
    let (ib, _) = key(&cb);
    let mut outside = vec![ca.clone()];
    outside.extend(arc[ia + 1..=ib].iter().cloned().filter(|v| *v != ca));
    outside.push(cb.clone());
    let outside = canonical_polyline(outside);

    let mut cyc = o.boundary().to_vec();
    for p in [&ca, &cb] {
        if !cyc.contains(p) {
            let n = cyc.len();
            let k = (0..n).find(|&k| Segment::new(cyc[k].clone(), cyc[(k + 1) % n].clone()).contains(p))?;
            cyc.insert(k + 1, p.clone());
        }
    }
    let n = cyc.len();
    let pa = cyc.iter().position(|v| *v == ca)?;
    let forward: Vec<Coord> = (0..n).map(|j| cyc[(pa + j) % n].clone()).take_while(|v| *v != cb).chain([cb.clone()]).collect();
    let backward: Vec<Coord> = (0..n).map(|j| cyc[(pa + n - j) % n].clone()).take_while(|v| *v != cb).chain([cb.clone()]).collect();
    for path in [forward, backward] {
        let mut lp = outside.clone();
        lp.extend(path.iter().rev().skip(1).take(path.len().saturating_sub(2)).cloned());
        if winding_number(probe, &lp) == 0 {
            return Some(path);
        }
    }
    None
}

/// Whether `p` is within sup-distance `r` of X; used by tests.
#[cfg(test)]
fn sup_close(scene: &Scene, p: &Coord, r: &Rational) -> bool {
    use num_traits::Signed;
    scene.regions.iter().flat_map(|g| g.edges()).any(|e| {
        let c = e.closest_point(p);
        let d = &c - p;
        d.x.abs() <= *r && d.y.abs() <= *r
    }) || scene.contains(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenes;

    fn square_scene() -> Scene {
        Scene::new("square", vec![scenes::rect(int(0), int(0), int(4), int(4))], None, None).unwrap()
    }

    fn alpha() -> PLArc {
        // Leaves the right side, loops out and comes back to the top.
        PLArc::new(vec![
            Coord::from_ints(4, 2),
            Coord::from_ints(8, 2),
            Coord::from_ints(8, 8),
            Coord::from_ints(2, 8),
            Coord::from_ints(2, 4),
        ])
        .unwrap()
    }

    #[test]
    fn ring_closes_alpha_without_enclosing_x() {
        let s = square_scene();
        let eps = int(1);
        let ring = crosscut_ring(&s, &alpha(), &eps).unwrap();
        assert_eq!(ring.junctions.first(), Some(&Coord::from_ints(4, 2)));
        assert_eq!(ring.junctions.last(), Some(&Coord::from_ints(2, 4)));
        assert_eq!(ring.arcs.len() + 1, ring.junctions.len());
        let mut cycle: Vec<Coord> = alpha().vertices().to_vec();
        for arc in ring.arcs.iter().rev() {
            let v = arc.vertices();
            cycle.extend(v[..v.len() - 1].iter().rev().cloned());
        }
        cycle.pop();
        let cycle = canonical_polyline(cycle);
        assert!(crate::exact_geom::disk::ring_self_intersection(&cycle).is_none());
        assert_eq!(winding_number(&Coord::from_ints(1, 1), &cycle), 0);
        for (arc, w) in ring.arcs.iter().zip(ring.junctions.windows(2)) {
            let v = arc.vertices();
            assert_eq!((&v[0], &v[v.len() - 1]), (&w[0], &w[1]));
            assert!(diameter2(v) < &eps * &eps);
            assert!(arc_interior_meets(v, &s.regions).is_none());
            assert!(v[1..v.len() - 1].iter().all(|p| sup_close(&s, p, &ring.radius)));
        }
    }

    #[test]
    fn ring_takes_the_short_way_round() {
        let s = square_scene();
        let ring = crosscut_ring(&s, &alpha(), &int(1)).unwrap();
        // The chain passes the top-right corner, never the bottom-left one.
        let near = |c: &Coord, p: &Coord| c.dist2(p) < int(1);
        let all: Vec<&Coord> = ring.arcs.iter().flat_map(|a| a.vertices()).collect();
        assert!(all.iter().any(|v| near(v, &Coord::from_ints(4, 4))));
        assert!(!all.iter().any(|v| near(v, &Coord::from_ints(0, 0))));
    }

    #[test]
    fn alpha_through_x_is_rejected() {
        let s = square_scene();
        let bad = PLArc::new(vec![Coord::from_ints(4, 2), Coord::from_ints(0, 2)]).unwrap();
        assert!(matches!(crosscut_ring(&s, &bad, &int(1)), Err(ChopError::AlphaNotCrosscut(_))));
        let off = PLArc::new(vec![Coord::from_ints(5, 2), Coord::from_ints(6, 2)]).unwrap();
        assert!(matches!(crosscut_ring(&s, &off, &int(1)), Err(ChopError::AlphaNotCrosscut(_))));
    }

    #[test]
    fn full_ring_surrounds_x() {
        let s = square_scene();
        let eps = int(2);
        let ring = full_ring(&mut Dilations::new(&s), &eps).unwrap();
        assert_eq!(ring.arcs.len(), ring.junctions.len());
        assert!(ring.arcs.len() >= 3);
        let mut cycle = Vec::new();
        for arc in &ring.arcs {
            let v = arc.vertices();
            cycle.extend(v[..v.len() - 1].iter().cloned());
        }
        let cycle = canonical_polyline(cycle);
        assert!(crate::exact_geom::disk::ring_self_intersection(&cycle).is_none());
        assert_eq!(winding_number(&Coord::from_ints(2, 2), &cycle).abs(), 1);
        for a in &ring.arcs {
            assert!(diameter2(a.vertices()) < &eps * &eps);
        }
    }
}
