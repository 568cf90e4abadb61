//! Thinness: every point of a disk lies within eps of its complement.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use crate::disk_metric::triangulate::triangulate;
use crate::exact_geom::rational::{frac, to_f64};
use crate::exact_geom::{Coord, LengthValue, PLDisk, Rational};

/// Triangles examined before giving up on certifying thinness.
const MAX_TRIANGLES: usize = 400_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Thinness {
    pub thin: bool,
    /// The deepest point found; for a thick disk it is at least eps deep.
    pub witness: Coord,
    #[serde(with = "crate::io::rat")]
    pub witness_depth2: Rational,
}

/// Squared distance to the boundary.
pub fn depth2(d: &PLDisk, p: &Coord) -> Rational {
    d.edges().map(|e| e.dist2_to_point(p)).min().expect("disk has edges")
}

struct Cell {
    bound: f64,
    corners: [Coord; 3],
    /// Sample whose depth the bound was built from, and its squared depth.
    center2: Rational,
    radius2: Rational,
}

impl PartialEq for Cell {
    fn eq(&self, o: &Self) -> bool {
        self.bound == o.bound
    }
}
impl Eq for Cell {}
impl PartialOrd for Cell {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Cell {
    fn cmp(&self, o: &Self) -> Ordering {
        self.bound.total_cmp(&o.bound)
    }
}

struct Search<'a> {
    d: &'a PLDisk,
    best: Coord,
    best2: Rational,
}

impl Search<'_> {
    fn sample(&mut self, p: Coord) -> Rational {
        let v = depth2(self.d, &p);
        if v > self.best2 {
            self.best2 = v.clone();
            self.best = p;
        }
        v
    }

    fn cell(&mut self, corners: [Coord; 3]) -> Cell {
        let g = Coord::new(
            (&corners[0].x + &corners[1].x + &corners[2].x) * frac(1, 3),
            (&corners[0].y + &corners[1].y + &corners[2].y) * frac(1, 3),
        );
        let radius2 = corners.iter().map(|c| c.dist2(&g)).max().expect("three corners");
        let center2 = self.sample(g);
        let bound = to_f64(&center2).sqrt() + to_f64(&radius2).sqrt();
        Cell { bound, corners, center2, radius2 }
    }
}

/// Decides whether the disk is eps-thin by branch and bound over a
/// triangulation. The depth is 1-Lipschitz, so a triangle is settled once
/// the depth at its centroid plus its circumradius about the centroid is
/// below eps. Gives up as not thin if the search exceeds its budget.
pub fn is_eps_thin(d: &PLDisk, eps: &Rational) -> Thinness {
    let tri = triangulate(d).expect("a simple polygon has an ear");
    let eps2 = eps * eps;
    let mut s = Search { d, best: d.boundary()[0].clone(), best2: Rational::from_integer(0.into()) };
    let mut heap = BinaryHeap::new();
    for t in 0..tri.triangles.len() {
        let [a, b, c] = tri.corners(t);
        for (p, q) in [(a, b), (b, c), (c, a)] {
            s.sample(p.midpoint(q));
        }
        let cell = s.cell([a.clone(), b.clone(), c.clone()]);
        heap.push(cell);
    }
    let slack = to_f64(eps) / 64.0;
    let mut examined = 0usize;
    while let Some(cell) = heap.pop() {
        let thick = s.best2 >= eps2;
        if thick && cell.bound <= to_f64(&s.best2).sqrt() + slack {
            break;
        }
        if !thick && LengthValue::from_terms(vec![cell.center2.clone(), cell.radius2.clone()]).cmp_rational(eps) == Ordering::Less {
            continue;
        }
        examined += 1;
        if examined > MAX_TRIANGLES {
            return Thinness { thin: false, witness: s.best, witness_depth2: s.best2 };
        }
        let [a, b, c] = cell.corners;
        let (la, lb, lc) = (b.dist2(&c), c.dist2(&a), a.dist2(&b));
        let (apex, p, q) = if la >= lb && la >= lc {
            (a, b, c)
        } else if lb >= lc {
            (b, c, a)
        } else {
            (c, a, b)
        };
        let m = p.midpoint(&q);
        s.sample(m.clone());
        let c1 = s.cell([apex.clone(), p, m.clone()]);
        let c2 = s.cell([apex, m, q]);
        heap.push(c1);
        heap.push(c2);
    }
    let thin = s.best2 < eps2;
    Thinness { thin, witness: s.best, witness_depth2: s.best2 }
}
