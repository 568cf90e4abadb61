use std::cmp::Ordering;

use crate::exact_geom::coord::orient;
use crate::exact_geom::{arc_length, Coord, LengthValue, PLArc, PLDisk};

use super::triangulate::{in_closed_triangle, triangulate, Triangulation, TriangulationError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GeodesicError {
    #[error("point {0} is outside the disk")]
    PointOutsideDisk(Coord),
    #[error("target set is empty")]
    EmptyTarget,
    #[error(transparent)]
    Triangulation(#[from] TriangulationError),
}

/// A shortest path inside a disk. `vertices` has length 1 when the endpoints
/// coincide.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeodesicResult {
    pub vertices: Vec<Coord>,
    pub length: LengthValue,
    /// Interior vertices of the path; each is a reflex vertex of the disk.
    pub bend_vertices: Vec<Coord>,
}

impl GeodesicResult {
    pub fn point(p: Coord) -> Self {
        Self { vertices: vec![p], length: LengthValue::zero(), bend_vertices: Vec::new() }
    }

    pub fn from_chain(chain: Vec<Coord>) -> Self {
        if chain.len() == 1 || chain.iter().all(|c| c == &chain[0]) {
            return Self::point(chain[0].clone());
        }
        let arc = PLArc::new_unchecked(chain);
        let length = arc_length(&arc);
        let v = arc.into_vertices();
        let bend_vertices = v[1..v.len() - 1].to_vec();
        Self { vertices: v, length, bend_vertices }
    }

    pub fn is_point(&self) -> bool {
        self.vertices.len() == 1
    }

    pub fn start(&self) -> &Coord {
        &self.vertices[0]
    }

    pub fn end(&self) -> &Coord {
        self.vertices.last().unwrap()
    }

    pub fn arc(&self) -> Option<PLArc> {
        (!self.is_point()).then(|| PLArc::new_unchecked(self.vertices.clone()))
    }
}

/// Geodesic between two points of a disk.
pub fn geodesic(d: &PLDisk, x: &Coord, y: &Coord) -> Result<GeodesicResult, GeodesicError> {
    let tri = triangulate(d)?;
    geodesic_in(&tri, x, y)
}

/// Geodesic using a prebuilt triangulation.
pub fn geodesic_in(tri: &Triangulation, x: &Coord, y: &Coord) -> Result<GeodesicResult, GeodesicError> {
    let tx = tri.locate(x).ok_or_else(|| GeodesicError::PointOutsideDisk(x.clone()))?;
    let ty = tri.locate(y).ok_or_else(|| GeodesicError::PointOutsideDisk(y.clone()))?;
    if x == y {
        return Ok(GeodesicResult::point(x.clone()));
    }
    let mut corridor = tri.corridor(tx, ty);
    // Start after the last triangle holding x and stop at the first holding y,
    // so neither endpoint lies on a portal.
    let contains = |t: usize, p: &Coord| {
        let [a, b, c] = tri.corners(t);
        in_closed_triangle(a, b, c, p)
    };
    let first = corridor.iter().rposition(|&t| contains(t, x)).unwrap();
    corridor.drain(..first);
    if let Some(last) = corridor.iter().position(|&t| contains(t, y)) {
        corridor.truncate(last + 1);
    }
    let mut portals: Vec<(Coord, Coord)> = Vec::with_capacity(corridor.len() + 1);
    portals.push((x.clone(), x.clone()));
    for w in corridor.windows(2) {
        let (l, r) = tri.portal(w[0], w[1]);
        portals.push((tri.vertex(l).clone(), tri.vertex(r).clone()));
    }
    portals.push((y.clone(), y.clone()));
    Ok(GeodesicResult::from_chain(funnel(&portals)))
}

/// Funnel walk over `(left, right)` portals; the first and last portals are
/// the degenerate endpoints.
pub fn funnel(portals: &[(Coord, Coord)]) -> Vec<Coord> {
    let mut path = vec![portals[0].0.clone()];
    let mut apex = portals[0].0.clone();
    let mut left = apex.clone();
    let mut right = apex.clone();
    let (mut left_i, mut right_i) = (0usize, 0usize);
    let mut i = 1;
    while i < portals.len() {
        let (l, r) = &portals[i];

        if orient(&apex, &right, r) != Ordering::Less {
            if apex == right || orient(&apex, &left, r) == Ordering::Less {
                right = r.clone();
                right_i = i;
            } else {
                path.push(left.clone());
                apex = left.clone();
                right = apex.clone();
                right_i = left_i;
                i = left_i + 1;
                continue;
            }
        }

        if orient(&apex, &left, l) != Ordering::Greater {
            if apex == left || orient(&apex, &right, l) == Ordering::Greater {
                left = l.clone();
                left_i = i;
            } else {
                path.push(right.clone());
                apex = right.clone();
                left = apex.clone();
                left_i = right_i;
                i = right_i + 1;
                continue;
            }
        }
        i += 1;
    }
    let end = &portals[portals.len() - 1].0;
    if path.last() != Some(end) {
        path.push(end.clone());
    }
    path.dedup();
    path
}
