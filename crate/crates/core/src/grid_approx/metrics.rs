use std::collections::{BinaryHeap, HashMap};

use serde::{Deserialize, Serialize};

use crate::disk_metric::{triangulate, SetDistance, Target};
use crate::exact_geom::rational::{frac, int, zero};
use crate::exact_geom::{Coord, LengthValue, PLDisk, Rational};

use super::{DiskCollection, StageError};

/// Certified bounds on a supremum of intrinsic distances: `lower` is a
/// sampled value, `upper` a Lipschitz bound over the unsampled remainder.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SupBound {
    #[serde(with = "crate::io::rat")]
    pub lower: Rational,
    #[serde(with = "crate::io::rat")]
    pub upper: Rational,
    pub witness: Coord,
    pub samples: usize,
}

impl SupBound {
    pub fn zero(at: Coord) -> Self {
        Self { lower: int(0), upper: int(0), witness: at, samples: 0 }
    }

    fn merge(self, other: SupBound) -> SupBound {
        let samples = self.samples + other.samples;
        let (lower, witness) =
            if other.lower > self.lower { (other.lower, other.witness) } else { (self.lower, self.witness) };
        let upper = if other.upper > self.upper { other.upper } else { self.upper };
        SupBound { lower, upper, witness, samples }
    }
}

/// Distances between consecutive stages with the stage's schedule target.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageMetrics {
    pub n: SupBound,
    pub m: SupBound,
    #[serde(with = "crate::io::rat")]
    pub delta_target: Rational,
}

fn group_targets(outer: &DiskCollection, inner: &DiskCollection) -> Result<Vec<Vec<Target>>, StageError> {
    let parents = outer.parents_of(inner);
    let mut groups: Vec<Vec<Target>> = vec![Vec::new(); outer.disks.len()];
    for (e, p) in inner.disks.iter().zip(parents) {
        if let Some(p) = p {
            groups[p].push(Target::Disk(e.clone()));
        }
    }
    if let Some(k) = groups.iter().position(|g| g.is_empty()) {
        return Err(StageError::ComponentMismatch(k));
    }
    Ok(groups)
}

/// Best-first refinement of a 1-Lipschitz function's supremum over simplices
/// (segments or triangles). A simplex with vertices `vᵢ` and diameter `D`
/// satisfies `sup ≤ min f(vᵢ) + D` and `sup ≤ max f(vᵢ) + D/√3`, or `(f(p) + f(q) + |pq|) / 2` for a
/// segment; refinement stops once no simplex can beat the best sample by
/// more than `tol`.
struct Refiner<'a> {
    sd: &'a SetDistance,
    cache: HashMap<Coord, LengthValue>,
    best: SupBound,
}

impl<'a> Refiner<'a> {
    fn value(&mut self, p: &Coord) -> LengthValue {
        if let Some(v) = self.cache.get(p) {
            return v.clone();
        }
        let v = self.sd.distance(p).expect("sample inside its disk");
        self.best.samples += 1;
        if v.lower > self.best.lower || self.best.samples == 1 {
            self.best.lower = v.lower.clone();
            self.best.witness = p.clone();
        }
        self.cache.insert(p.clone(), v.clone());
        v
    }

    fn bound(&mut self, simplex: &[Coord]) -> Rational {
        let vals: Vec<LengthValue> = simplex.iter().map(|p| self.value(p)).collect();
        if simplex.len() == 2 {
            let len = LengthValue::from_terms(vec![simplex[0].dist2(&simplex[1])]).upper;
            (&vals[0].upper + &vals[1].upper + len) / int(2)
        } else if vals.iter().all(|v| v.upper == zero()) && self.sd.covers_triangle(&simplex[0], &simplex[1], &simplex[2]) {
            zero()
        } else {
            let d2 = [simplex[0].dist2(&simplex[1]), simplex[1].dist2(&simplex[2]), simplex[2].dist2(&simplex[0])]
                .into_iter()
                .max()
                .unwrap();
            let diam = LengthValue::from_terms(vec![d2]).upper;
            let lo = vals.iter().map(|v| &v.upper).min().unwrap() + &diam;
            // Every point of a triangle is within D/√3 of some vertex.
            let hi = vals.iter().map(|v| &v.upper).max().unwrap() + diam * frac(289, 500);
            lo.min(hi)
        }
    }

    fn run(mut self, simplices: Vec<Vec<Coord>>, tol: &Rational) -> SupBound {
        let mut heap: BinaryHeap<(Rational, Vec<Coord>)> = BinaryHeap::new();
        for s in simplices {
            let b = self.bound(&s);
            heap.push((b, s));
        }
        let mut upper = self.best.lower.clone();
        while let Some((b, s)) = heap.pop() {
            if b <= &self.best.lower + tol {
                if b > upper {
                    upper = b;
                }
                break;
            }
            for child in split(&s) {
                let cb = self.bound(&child);
                heap.push((cb, child));
            }
        }
        self.best.upper = upper;
        self.best
    }
}

/// Halves a segment, or bisects a triangle across its longest edge.
fn split(s: &[Coord]) -> Vec<Vec<Coord>> {
    if s.len() == 2 {
        let m = s[0].midpoint(&s[1]);
        return vec![vec![s[0].clone(), m.clone()], vec![m, s[1].clone()]];
    }
    let lens = [s[1].dist2(&s[2]), s[2].dist2(&s[0]), s[0].dist2(&s[1])];
    let k = (0..3).max_by(|&x, &y| lens[x].cmp(&lens[y])).unwrap();
    let (apex, p, q) = (&s[k], &s[(k + 1) % 3], &s[(k + 2) % 3]);
    let m = p.midpoint(q);
    vec![vec![apex.clone(), p.clone(), m.clone()], vec![apex.clone(), m, q.clone()]]
}

fn sup_over(sd: &SetDistance, simplices: Vec<Vec<Coord>>, tol: &Rational, start: &Coord) -> SupBound {
    let r = Refiner { sd, cache: HashMap::new(), best: SupBound::zero(start.clone()) };
    r.run(simplices, tol)
}

fn edge_simplices(d: &PLDisk) -> Vec<Vec<Coord>> {
    d.edges().map(|e| vec![e.p, e.q]).collect()
}

fn triangle_simplices(d: &PLDisk) -> Vec<Vec<Coord>> {
    let tri = triangulate(d).expect("stage disks triangulate");
    (0..tri.triangles.len())
        .map(|t| {
            let [a, b, c] = tri.corners(t);
            vec![a.clone(), b.clone(), c.clone()]
        })
        .collect()
}

/// Largest intrinsic distance from `∂P` to the inner disks inside `P`, over
/// all outer disks `P`.
pub fn compute_n(outer: &DiskCollection, inner: &DiskCollection, spacing: &Rational) -> Result<SupBound, StageError> {
    let groups = group_targets(outer, inner)?;
    let mut acc: Option<SupBound> = None;
    for (p, targets) in outer.disks.iter().zip(groups) {
        let sd = SetDistance::new(p, targets);
        let b = sup_over(&sd, edge_simplices(p), spacing, &p.boundary()[0]);
        acc = Some(match acc {
            None => b,
            Some(a) => a.merge(b),
        });
    }
    Ok(acc.expect("nonempty stage"))
}

/// Largest intrinsic distance from any point of `P` to the inner disks.
pub fn compute_m(outer: &DiskCollection, inner: &DiskCollection, spacing: &Rational) -> Result<SupBound, StageError> {
    let groups = group_targets(outer, inner)?;
    let mut acc: Option<SupBound> = None;
    for (p, targets) in outer.disks.iter().zip(groups) {
        let sd = SetDistance::new(p, targets);
        let b = sup_over(&sd, triangle_simplices(p), spacing, &p.boundary()[0]);
        acc = Some(match acc {
            None => b,
            Some(a) => a.merge(b),
        });
    }
    Ok(acc.expect("nonempty stage"))
}

/// Tolerance `δ/8` for `N` and `δ/4` for `M`.
pub fn stage_metrics(outer: &DiskCollection, inner: &DiskCollection, delta: &Rational) -> Result<StageMetrics, StageError> {
    let n = compute_n(outer, inner, &(delta * frac(1, 8)))?;
    let m = compute_m(outer, inner, &(delta * frac(1, 4)))?;
    Ok(StageMetrics { n, m, delta_target: delta.clone() })
}
