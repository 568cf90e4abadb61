use std::cmp::Ordering;
use std::collections::HashMap;

use crate::exact_geom::coord::orient;
use crate::exact_geom::{Coord, PLDisk};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TriangulationError {
    #[error("no ear found among {0} remaining vertices")]
    DegenerateBoundary(usize),
}

/// Ear-clipping triangulation of a disk. Triangles index into
/// `disk.boundary()` and are counterclockwise.
#[derive(Clone, Debug)]
pub struct Triangulation {
    pub disk: PLDisk,
    pub triangles: Vec<[usize; 3]>,
    /// `neighbors[t][k]` is the triangle across the edge
    /// `(triangles[t][k], triangles[t][(k + 1) % 3])`.
    pub neighbors: Vec<[Option<usize>; 3]>,
}

pub fn triangulate(d: &PLDisk) -> Result<Triangulation, TriangulationError> {
    let pts = d.boundary();
    let n = pts.len();
    let mut idx: Vec<usize> = (0..n).collect();
    let mut triangles = Vec::with_capacity(n.saturating_sub(2));

    while idx.len() > 3 {
        let m = idx.len();
        let mut clipped = false;
        for k in 0..m {
            let a = idx[(k + m - 1) % m];
            let b = idx[k];
            let c = idx[(k + 1) % m];
            if is_ear(pts, &idx, a, b, c) {
                triangles.push([a, b, c]);
                idx.remove(k);
                clipped = true;
                break;
            }
        }
        if !clipped {
            return Err(TriangulationError::DegenerateBoundary(m));
        }
    }
    if orient(&pts[idx[0]], &pts[idx[1]], &pts[idx[2]]) != Ordering::Greater {
        return Err(TriangulationError::DegenerateBoundary(3));
    }
    triangles.push([idx[0], idx[1], idx[2]]);

    let neighbors = build_neighbors(&triangles);
    Ok(Triangulation { disk: d.clone(), triangles, neighbors })
}

fn is_ear(pts: &[Coord], idx: &[usize], a: usize, b: usize, c: usize) -> bool {
    let (pa, pb, pc) = (&pts[a], &pts[b], &pts[c]);
    if orient(pa, pb, pc) != Ordering::Greater {
        return false;
    }
    let m = idx.len();
    for k in 0..m {
        let v = idx[k];
        if v == a || v == b || v == c {
            continue;
        }
        let prev = &pts[idx[(k + m - 1) % m]];
        let next = &pts[idx[(k + 1) % m]];
        // Only non-convex vertices can block an ear.
        if orient(prev, &pts[v], next) == Ordering::Greater {
            continue;
        }
        if in_closed_triangle(pa, pb, pc, &pts[v]) {
            return false;
        }
    }
    true
}

/// Closed-triangle membership for a counterclockwise triangle.
pub fn in_closed_triangle(a: &Coord, b: &Coord, c: &Coord, p: &Coord) -> bool {
    orient(a, b, p) != Ordering::Less && orient(b, c, p) != Ordering::Less && orient(c, a, p) != Ordering::Less
}

fn build_neighbors(triangles: &[[usize; 3]]) -> Vec<[Option<usize>; 3]> {
    let mut edge_owner: HashMap<(usize, usize), (usize, usize)> = HashMap::new();
    for (t, tri) in triangles.iter().enumerate() {
        for k in 0..3 {
            edge_owner.insert((tri[k], tri[(k + 1) % 3]), (t, k));
        }
    }
    triangles
        .iter()
        .map(|tri| {
            let mut nb = [None; 3];
            for k in 0..3 {
                nb[k] = edge_owner.get(&(tri[(k + 1) % 3], tri[k])).map(|&(u, _)| u);
            }
            nb
        })
        .collect()
}

impl Triangulation {
    pub fn vertex(&self, i: usize) -> &Coord {
        &self.disk.boundary()[i]
    }

    pub fn corners(&self, t: usize) -> [&Coord; 3] {
        let tri = self.triangles[t];
        [self.vertex(tri[0]), self.vertex(tri[1]), self.vertex(tri[2])]
    }

    /// Some triangle containing `p` (closed), if any.
    pub fn locate(&self, p: &Coord) -> Option<usize> {
        (0..self.triangles.len()).find(|&t| {
            let [a, b, c] = self.corners(t);
            in_closed_triangle(a, b, c, p)
        })
    }

    /// Triangles on the dual-tree path from `from` to `to`, inclusive.
    pub fn corridor(&self, from: usize, to: usize) -> Vec<usize> {
        let nt = self.triangles.len();
        let mut parent = vec![usize::MAX; nt];
        parent[from] = from;
        let mut stack = vec![from];
        while let Some(t) = stack.pop() {
            if t == to {
                break;
            }
            for u in self.neighbors[t].iter().flatten() {
                if parent[*u] == usize::MAX {
                    parent[*u] = t;
                    stack.push(*u);
                }
            }
        }
        let mut path = vec![to];
        let mut t = to;
        while t != from {
            t = parent[t];
            path.push(t);
        }
        path.reverse();
        path
    }

    /// Shared edge of adjacent triangles as `(left, right)` when walking
    /// from `t` into `u`.
    pub fn portal(&self, t: usize, u: usize) -> (usize, usize) {
        let k = (0..3).find(|&k| self.neighbors[t][k] == Some(u)).expect("triangles are not adjacent");
        let tri = self.triangles[t];
        (tri[(k + 1) % 3], tri[k])
    }

    /// Number of dual edges; a tree has one fewer than triangles.
    pub fn dual_edge_count(&self) -> usize {
        self.neighbors.iter().map(|nb| nb.iter().flatten().count()).sum::<usize>() / 2
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn disk(pts: &[(i64, i64)]) -> PLDisk {
        PLDisk::new(pts.iter().map(|&(x, y)| Coord::from_ints(x, y)).collect()).unwrap()
    }

    #[test]
    fn convex_quad_has_two_triangles() {
        let t = triangulate(&disk(&[(0, 0), (3, 0), (4, 2), (0, 3)])).unwrap();
        assert_eq!(t.triangles.len(), 2);
        assert_eq!(t.dual_edge_count(), 1);
    }

    #[test]
    fn l_shape_dual_is_a_path() {
        let t = triangulate(&disk(&[(0, 0), (2, 0), (2, 1), (1, 1), (1, 2), (0, 2)])).unwrap();
        assert_eq!(t.triangles.len(), 4);
        assert_eq!(t.dual_edge_count(), 3);
        let degrees: Vec<usize> = t.neighbors.iter().map(|nb| nb.iter().flatten().count()).collect();
        assert!(degrees.iter().all(|&d| d <= 2));
        assert_eq!(degrees.iter().filter(|&&d| d == 1).count(), 2);
    }

    #[test]
    fn comb_triangulates() {
        let mut pts = vec![(0, 0)];
        for k in 0..10 {
            pts.push((2 * k + 1, 0));
            pts.push((2 * k + 1, 5));
            pts.push((2 * k + 2, 5));
            pts.push((2 * k + 2, 0));
        }
        pts.push((21, 0));
        pts.push((21, -1));
        pts.push((0, -1));
        let d = disk(&pts);
        let n = d.boundary().len();
        let t = triangulate(&d).unwrap();
        assert_eq!(t.triangles.len(), n - 2);
        assert_eq!(t.dual_edge_count(), n - 3);
    }
}
