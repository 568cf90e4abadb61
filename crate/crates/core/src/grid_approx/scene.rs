use crate::exact_geom::disk::ring_self_intersection;
use crate::exact_geom::rational::{abs, int, power_of_two_above, ten_pow_neg};
use crate::exact_geom::segment::{seg_intersect, IntersectionResult};
use crate::exact_geom::{Coord, Location, Rational};
use crate::exact_geom::disk::point_in_ring;
use crate::planar::Region;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SceneError {
    #[error("scene has no polygons")]
    EmptyScene,
    #[error("polygon {0} is not simple")]
    NonSimplePolygon(usize),
    #[error("hole {1} of polygon {0} is not strictly inside it or meets another hole")]
    BadHole(usize, usize),
    #[error("polygons {0} and {1} intersect")]
    OverlappingInputs(usize, usize),
}

/// The compact set X: a finite union of pairwise disjoint closed polygonal
/// regions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Scene {
    pub label: String,
    pub regions: Vec<Region>,
    /// Length unit of the schedule `δₙ = scale / 10ⁿ`.
    pub scale: Rational,
    /// Smallest admissible dilation radius or clearance.
    pub resolution_floor: Rational,
}

impl Scene {
    /// Validates the regions. `scale` defaults to `32 R` where `[-R, R]²` is
    /// the first stage; `resolution_floor` defaults to `10⁻¹²·scale`.
    pub fn new(
        label: impl Into<String>,
        regions: Vec<Region>,
        scale: Option<Rational>,
        resolution_floor: Option<Rational>,
    ) -> Result<Self, SceneError> {
        if regions.is_empty() {
            return Err(SceneError::EmptyScene);
        }
        validate(&regions)?;
        let r = half_width_of(&regions);
        let scale = scale.unwrap_or_else(|| int(32) * &r);
        let resolution_floor = resolution_floor.unwrap_or_else(|| &scale * ten_pow_neg(12));
        Ok(Self { label: label.into(), regions, scale, resolution_floor })
    }

    /// `R`: the smallest power of two with X inside the open square `(-R, R)²`.
    pub fn half_width(&self) -> Rational {
        half_width_of(&self.regions)
    }

    /// X has a connected complement exactly when no region has a hole.
    pub fn complement_connected(&self) -> bool {
        self.regions.iter().all(|r| r.holes.is_empty())
    }

    pub fn locate(&self, p: &Coord) -> Location {
        let mut on = false;
        for r in &self.regions {
            match r.locate(p) {
                Location::Inside => return Location::Inside,
                Location::OnBoundary => on = true,
                Location::Outside => {}
            }
        }
        if on {
            Location::OnBoundary
        } else {
            Location::Outside
        }
    }

    pub fn contains(&self, p: &Coord) -> bool {
        self.locate(p) != Location::Outside
    }

    pub fn vertices(&self) -> impl Iterator<Item = &Coord> {
        self.regions.iter().flat_map(|r| r.rings().flatten())
    }

    /// Sup-norm distance from X to the boundary of `[-R, R]²`.
    pub fn margin(&self) -> Rational {
        let r = self.half_width();
        self.vertices()
            .map(|v| {
                let m = if abs(&v.x) > abs(&v.y) { abs(&v.x) } else { abs(&v.y) };
                &r - m
            })
            .min()
            .unwrap()
    }
}

fn half_width_of(regions: &[Region]) -> Rational {
    let m = regions
        .iter()
        .flat_map(|r| r.outer.iter())
        .map(|v| if abs(&v.x) > abs(&v.y) { abs(&v.x) } else { abs(&v.y) })
        .max()
        .unwrap();
    power_of_two_above(&m)
}

fn validate(regions: &[Region]) -> Result<(), SceneError> {
    for (k, r) in regions.iter().enumerate() {
        if r.outer.len() < 3 || ring_self_intersection(&r.outer).is_some() {
            return Err(SceneError::NonSimplePolygon(k));
        }
        for (h, hole) in r.holes.iter().enumerate() {
            if hole.len() < 3 || ring_self_intersection(hole).is_some() {
                return Err(SceneError::NonSimplePolygon(k));
            }
            if hole.iter().any(|v| point_in_ring(v, &r.outer) != Location::Inside) {
                return Err(SceneError::BadHole(k, h));
            }
            if rings_meet(hole, &r.outer) {
                return Err(SceneError::BadHole(k, h));
            }
            for other in &r.holes[h + 1..] {
                if rings_meet(hole, other) || point_in_ring(&other[0], hole) != Location::Outside {
                    return Err(SceneError::BadHole(k, h));
                }
                if point_in_ring(&hole[0], other) != Location::Outside {
                    return Err(SceneError::BadHole(k, h));
                }
            }
        }
    }
    for i in 0..regions.len() {
        for j in (i + 1)..regions.len() {
            if regions_meet(&regions[i], &regions[j]) {
                return Err(SceneError::OverlappingInputs(i, j));
            }
        }
    }
    Ok(())
}

fn rings_meet(a: &[Coord], b: &[Coord]) -> bool {
    let ea = crate::planar::ring_edges(a);
    let eb = crate::planar::ring_edges(b);
    ea.iter().any(|x| eb.iter().any(|y| seg_intersect(x, y) != IntersectionResult::Empty))
}

/// Closed regions share a point.
pub fn regions_meet(a: &Region, b: &Region) -> bool {
    let ea = a.edges();
    let eb = b.edges();
    if ea.iter().any(|x| eb.iter().any(|y| seg_intersect(x, y) != IntersectionResult::Empty)) {
        return true;
    }
    a.locate(&b.outer[0]) != Location::Outside || b.locate(&a.outer[0]) != Location::Outside
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_geom::rational::frac;

    fn sq(x0: i64, y0: i64, x1: i64, y1: i64) -> Vec<Coord> {
        vec![Coord::from_ints(x0, y0), Coord::from_ints(x1, y0), Coord::from_ints(x1, y1), Coord::from_ints(x0, y1)]
    }

    #[test]
    fn half_width_is_power_of_two_above() {
        let s = Scene::new("a", vec![Region::simple(sq(-3, -3, 3, 3))], None, None).unwrap();
        assert_eq!(s.half_width(), int(4));
        assert_eq!(s.scale, int(128));
        let s = Scene::new("b", vec![Region::simple(sq(-1, -1, 1, 1))], None, None).unwrap();
        assert_eq!(s.half_width(), int(2));
        let s = Scene::new("c", vec![Region::simple(vec![
            Coord::new(frac(1, 4), int(0)), Coord::new(frac(3, 4), int(0)), Coord::new(frac(1, 2), frac(1, 2)),
        ])], None, None).unwrap();
        assert_eq!(s.half_width(), int(1));
    }

    #[test]
    fn overlapping_inputs_rejected() {
        let r = Scene::new("o", vec![Region::simple(sq(0, 0, 2, 2)), Region::simple(sq(1, 1, 3, 3))], None, None);
        assert_eq!(r, Err(SceneError::OverlappingInputs(0, 1)));
        let r = Scene::new("n", vec![Region::simple(sq(0, 0, 4, 4)), Region::simple(sq(1, 1, 2, 2))], None, None);
        assert_eq!(r, Err(SceneError::OverlappingInputs(0, 1)));
    }

    #[test]
    fn holes_break_complement_connectivity() {
        let annulus = Region::new(sq(0, 0, 6, 6), vec![sq(2, 2, 4, 4)]);
        let s = Scene::new("ring", vec![annulus], None, None).unwrap();
        assert!(!s.complement_connected());
        assert!(!s.contains(&Coord::from_ints(3, 3)));
    }
}
