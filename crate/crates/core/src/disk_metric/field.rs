use std::cmp::Ordering;

use crate::exact_geom::segment::{seg_intersect, IntersectionResult};
use crate::exact_geom::{Coord, LengthValue, Location, PLDisk, Rational, Segment};

use num_traits::Signed;

use super::to_set::{reflex_vertices, Target};

/// Whether the closed segment `[a, b]` lies in the closed disk.
pub fn segment_in_disk(d: &PLDisk, a: &Coord, b: &Coord) -> bool {
    if d.locate(a) == Location::Outside || d.locate(b) == Location::Outside {
        return false;
    }
    if a == b {
        return true;
    }
    let s = Segment::new(a.clone(), b.clone());
    let mut ts: Vec<Rational> = Vec::new();
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
    ts.push(Rational::from_integer(0.into()));
    ts.push(Rational::from_integer(1.into()));
    ts.sort();
    ts.dedup();
    let two = Rational::from_integer(2.into());
    ts.windows(2).all(|w| d.locate(&s.at(&((&w[0] + &w[1]) / &two))) != Location::Outside)
}

/// Intrinsic distance from points of a disk to a fixed target set, with the
/// distances from reflex vertices precomputed.
pub struct SetDistance {
    disk: PLDisk,
    convex: bool,
    targets: Vec<Target>,
    target_vertices: Vec<Coord>,
    target_edges: Vec<Segment>,
    reflex: Vec<Coord>,
    potential: Vec<Option<LengthValue>>,
}

impl SetDistance {
    pub fn new(disk: &PLDisk, targets: Vec<Target>) -> Self {
        let reflex = reflex_vertices(disk);
        let mut target_vertices: Vec<Coord> = targets.iter().flat_map(|t| t.vertices()).collect();
        target_vertices.sort();
        target_vertices.dedup();
        let target_edges = targets.iter().flat_map(|t| t.edges()).collect();
        let mut sd = SetDistance {
            disk: disk.clone(),
            convex: reflex.is_empty(),
            targets,
            target_vertices,
            target_edges,
            reflex,
            potential: Vec::new(),
        };
        sd.potential = sd.reflex_potentials();
        sd
    }

    fn visible(&self, a: &Coord, b: &Coord) -> bool {
        self.convex || segment_in_disk(&self.disk, a, b)
    }

    fn in_target(&self, x: &Coord) -> bool {
        self.targets.iter().any(|t| t.contains(x))
    }

    /// Squared length of the shortest straight connection from `u` to the
    /// targets that stays in the disk.
    fn direct(&self, u: &Coord) -> Option<Rational> {
        enum Landing<'a> {
            Vertex(&'a Coord),
            Foot(&'a Segment),
        }
        let mut cands: Vec<(Rational, Landing)> =
            self.target_vertices.iter().map(|c| (u.dist2(c), Landing::Vertex(c))).collect();
        for e in &self.target_edges {
            let d = e.dir();
            let (from_p, from_q) = (u - &e.p, u - &e.q);
            if from_p.dot(&d).is_positive() && from_q.dot(&d).is_negative() {
                let c = d.cross(&from_p);
                cands.push((&c * &c / d.norm2(), Landing::Foot(e)));
            }
        }
        cands.sort_by(|a, b| a.0.cmp(&b.0));
        if self.convex {
            return cands.into_iter().next().map(|(d2, _)| d2);
        }
        cands
            .into_iter()
            .find(|(_, l)| match l {
                Landing::Vertex(c) => self.visible(u, c),
                Landing::Foot(e) => self.visible(u, &e.closest_point(u)),
            })
            .map(|(d2, _)| d2)
    }

    fn reflex_potentials(&self) -> Vec<Option<LengthValue>> {
        let n = self.reflex.len();
        let mut dist: Vec<Option<LengthValue>> = self
            .reflex
            .iter()
            .map(|v| {
                if self.in_target(v) {
                    Some(LengthValue::zero())
                } else {
                    self.direct(v).map(|d2| LengthValue::from_terms(vec![d2]))
                }
            })
            .collect();
        let mut done = vec![false; n];
        for _ in 0..n {
            let next = (0..n)
                .filter(|&i| !done[i] && dist[i].is_some())
                .min_by(|&i, &j| dist[i].as_ref().unwrap().cmp(dist[j].as_ref().unwrap()));
            let Some(u) = next else { break };
            done[u] = true;
            let du = dist[u].clone().unwrap();
            for v in 0..n {
                if done[v] || !self.visible(&self.reflex[u], &self.reflex[v]) {
                    continue;
                }
                let cand = du.add(&LengthValue::from_terms(vec![self.reflex[u].dist2(&self.reflex[v])]));
                if dist[v].as_ref().map_or(true, |cur| cand < *cur) {
                    dist[v] = Some(cand);
                }
            }
        }
        dist
    }

    /// Intrinsic distance from `x` to the targets; `None` if they are not
    /// reachable (x outside the disk).
    pub fn distance(&self, x: &Coord) -> Option<LengthValue> {
        if self.in_target(x) {
            return Some(LengthValue::zero());
        }
        let mut best = self.direct(x).map(|d2| (d2.clone(), LengthValue::from_terms(vec![d2])));
        let mut order: Vec<(Rational, usize)> = self.reflex.iter().enumerate().map(|(i, v)| (x.dist2(v), i)).collect();
        order.sort();
        for (d2, i) in order {
            let Some(pot) = &self.potential[i] else { continue };
            if let Some((bd2, _)) = &best {
                if d2 >= *bd2 {
                    break;
                }
            }
            if !self.visible(x, &self.reflex[i]) {
                continue;
            }
            let cand = LengthValue::from_terms(vec![d2]).add(pot);
            let replace = match &best {
                None => true,
                Some((_, b)) => cand.cmp(b) == Ordering::Less,
            };
            if replace {
                best = Some((bound_sq(&cand), cand));
            }
        }
        best.map(|(_, l)| l)
    }
}

impl SetDistance {
    /// Whether the closed triangle lies inside one target disk, where the
    /// distance vanishes identically.
    pub fn covers_triangle(&self, a: &Coord, b: &Coord, c: &Coord) -> bool {
        self.targets.iter().any(|t| match t {
            Target::Disk(d) => segment_in_disk(d, a, b) && segment_in_disk(d, b, c) && segment_in_disk(d, c, a),
            _ => false,
        })
    }
}

/// A rational whose square root bounds the value from above, used only for
/// pruning.
fn bound_sq(l: &LengthValue) -> Rational {
    &l.upper * &l.upper
}
