//! Nested polygonal neighbourhoods `S₁ ⊃ S₂ ⊃ …` of a compact scene, the
//! complementary tile chains they avoid, and the intrinsic distances between
//! consecutive stages.

pub mod metrics;
pub mod scene;

use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::exact_geom::rational::{frac, int, min_rat};
use crate::exact_geom::{Coord, Location, PLDisk, Rational};
use crate::planar::{dilation_pieces, union_boundary, Region};

pub use metrics::{compute_m, compute_n, stage_metrics, StageMetrics, SupBound};
pub use scene::{regions_meet, Scene, SceneError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum StageError {
    #[error("grid anchor lies in the scene")]
    AnchorInsideX,
    #[error("dilation radius {0} fell below the resolution floor")]
    ResolutionExhausted(String),
    #[error("stage {0} meets the complement chain at every admissible radius")]
    ChainViolation(u32),
    #[error("outer disk {0} contains no inner disk")]
    ComponentMismatch(usize),
}

/// `δₙ = scale · baseⁿ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Schedule {
    #[serde(with = "crate::io::rat")]
    pub scale: Rational,
    #[serde(with = "crate::io::rat")]
    pub delta_base: Rational,
}

impl Schedule {
    pub fn new(scale: Rational) -> Self {
        Self { scale, delta_base: frac(1, 10) }
    }

    pub fn delta(&self, n: u32) -> Rational {
        let mut d = self.scale.clone();
        for _ in 0..n {
            d *= &self.delta_base;
        }
        d
    }
}

/// Square tiles of side `2R / 2ⁿ` anchored at `(-R, -R)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridSpec {
    pub level: u32,
    #[serde(with = "crate::io::rat")]
    pub side: Rational,
    pub anchor: Coord,
}

impl GridSpec {
    pub fn for_level(scene: &Scene, level: u32) -> Self {
        let r = scene.half_width();
        let side = int(2) * &r / Rational::from_integer(num_bigint::BigInt::from(1u8) << level as usize);
        Self { level, side, anchor: Coord::new(-r.clone(), -r) }
    }

    pub fn tiles_per_side(&self) -> i64 {
        1i64 << self.level
    }

    pub fn tile_ring(&self, i: i64, j: i64) -> Vec<Coord> {
        let x0 = &self.anchor.x + &self.side * int(i);
        let y0 = &self.anchor.y + &self.side * int(j);
        let x1 = &x0 + &self.side;
        let y1 = &y0 + &self.side;
        vec![
            Coord::new(x0.clone(), y0.clone()),
            Coord::new(x1.clone(), y0),
            Coord::new(x1, y1.clone()),
            Coord::new(x0, y1),
        ]
    }
}

/// Tiles strictly inside the complement of X, tile-connected to the anchor.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplementChain {
    pub grid: GridSpec,
    pub tiles: BTreeSet<(i64, i64)>,
}

/// A stage `Sₙ`: pairwise disjoint polygonal disks.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiskCollection {
    pub level: u32,
    pub disks: Vec<PLDisk>,
    /// Sup-norm dilation radius that produced the stage (none for `S₁`).
    #[serde(with = "crate::io::opt_rat")]
    pub radius: Option<Rational>,
}

impl DiskCollection {
    /// Index of the disk containing `p` (closed), if any.
    pub fn locate(&self, p: &Coord) -> Option<usize> {
        self.disks.iter().position(|d| d.locate(p) != Location::Outside)
    }

    /// For each disk of `inner`, the disk of `self` holding it.
    pub fn parents_of(&self, inner: &DiskCollection) -> Vec<Option<usize>> {
        inner
            .disks
            .iter()
            .map(|e| self.disks.iter().position(|p| p.locate(&e.boundary()[0]) != Location::Outside))
            .collect()
    }
}

/// `S₁ = [-R, R]²`.
pub fn initial_stage(scene: &Scene) -> DiskCollection {
    let r = scene.half_width();
    DiskCollection { level: 1, disks: vec![PLDisk::rect(-r.clone(), -r.clone(), r.clone(), r)], radius: None }
}

/// Flood fill of tiles disjoint from X, from the tile at the anchor corner.
/// The first level's chain is empty.
pub fn complement_chain(scene: &Scene, grid: &GridSpec) -> Result<ComplementChain, StageError> {
    if scene.contains(&grid.anchor) {
        return Err(StageError::AnchorInsideX);
    }
    let mut tiles = BTreeSet::new();
    if grid.level <= 1 {
        return Ok(ComplementChain { grid: grid.clone(), tiles });
    }
    let n = grid.tiles_per_side();
    let boxes: Vec<(Coord, Coord)> = scene.regions.iter().map(|r| r.bbox()).collect();
    let free = |i: i64, j: i64| -> bool {
        let ring = grid.tile_ring(i, j);
        let (lo, hi) = (&ring[0], &ring[2]);
        let tile = Region::simple(ring.clone());
        !scene.regions.iter().zip(&boxes).any(|(r, b)| {
            !(hi.x < b.0.x || lo.x > b.1.x || hi.y < b.0.y || lo.y > b.1.y) && regions_meet(&tile, r)
        })
    };
    if !free(0, 0) {
        return Ok(ComplementChain { grid: grid.clone(), tiles });
    }
    let mut queue = VecDeque::from([(0i64, 0i64)]);
    tiles.insert((0, 0));
    while let Some((i, j)) = queue.pop_front() {
        for (di, dj) in [(1, 0), (-1, 0), (0, 1), (0, -1)] {
            let t = (i + di, j + dj);
            if t.0 < 0 || t.1 < 0 || t.0 >= n || t.1 >= n || tiles.contains(&t) {
                continue;
            }
            if free(t.0, t.1) {
                tiles.insert(t);
                queue.push_back(t);
            }
        }
    }
    Ok(ComplementChain { grid: grid.clone(), tiles })
}

/// Filled components of the closed sup-norm `r`-neighbourhood of X, or the
/// pinch point when two boundary pieces touch.
pub fn filled_neighbourhood(scene: &Scene, r: &Rational) -> Result<Vec<PLDisk>, crate::planar::PinchError> {
    let pieces: Vec<Region> = scene.regions.iter().flat_map(|g| dilation_pieces(g, r)).collect();
    let cycles = union_boundary(&pieces)?;
    let zero = int(0);
    let outers: Vec<Vec<Coord>> =
        cycles.into_iter().filter(|c| crate::exact_geom::signed_area2(c) > zero).collect();
    let mut disks: Vec<PLDisk> = Vec::new();
    for (i, c) in outers.iter().enumerate() {
        let swallowed = outers.iter().enumerate().any(|(j, o)| {
            j != i && crate::exact_geom::point_in_ring(&c[0], o) == Location::Inside
        });
        if !swallowed {
            disks.push(PLDisk::new_unchecked(c.clone()));
        }
    }
    disks.sort_by(|a, b| a.boundary()[0].cmp(&b.boundary()[0]));
    Ok(disks)
}

/// The next stage: filled sup-norm neighbourhoods of X at a radius no more
/// than half of `delta`, half the previous radius, and half the margin to
/// `∂S₁`. The radius shrinks on pinches and on contact with the chain.
pub fn next_stage(
    prev: &DiskCollection,
    scene: &Scene,
    chain: &ComplementChain,
    delta: &Rational,
) -> Result<DiskCollection, StageError> {
    let half = frac(1, 2);
    let mut r = min_rat(&(delta * &half), &(scene.margin() * &half)).clone();
    if let Some(pr) = &prev.radius {
        r = min_rat(&r, &(pr * &half)).clone();
    }
    let mut chain_hit = false;
    loop {
        if r < scene.resolution_floor {
            return Err(if chain_hit {
                StageError::ChainViolation(prev.level + 1)
            } else {
                StageError::ResolutionExhausted(crate::exact_geom::format_rational(&r))
            });
        }
        let disks = match filled_neighbourhood(scene, &r) {
            Ok(d) => d,
            Err(_) => {
                r = r * frac(3, 4);
                continue;
            }
        };
        if meets_chain(&disks, chain) {
            chain_hit = true;
            r = r * &half;
            continue;
        }
        return Ok(DiskCollection { level: prev.level + 1, disks, radius: Some(r) });
    }
}

fn meets_chain(disks: &[PLDisk], chain: &ComplementChain) -> bool {
    chain.tiles.iter().any(|&(i, j)| {
        let ring = chain.grid.tile_ring(i, j);
        let tile = Region::simple(ring);
        disks.iter().any(|d| regions_meet(&tile, &Region::simple(d.boundary().to_vec())))
    })
}

/// `S₁, …, S_K` together with the chains used to build them.
pub fn build_stages(scene: &Scene, schedule: &Schedule, budget: u32) -> Result<Vec<DiskCollection>, StageError> {
    let mut stages = vec![initial_stage(scene)];
    for n in 1..budget {
        let chain = complement_chain(scene, &GridSpec::for_level(scene, n))?;
        let next = next_stage(stages.last().unwrap(), scene, &chain, &schedule.delta(n + 1))?;
        stages.push(next);
    }
    Ok(stages)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sq(x0: i64, y0: i64, x1: i64, y1: i64) -> Region {
        Region::simple(vec![
            Coord::from_ints(x0, y0),
            Coord::from_ints(x1, y0),
            Coord::from_ints(x1, y1),
            Coord::from_ints(x0, y1),
        ])
    }

    #[test]
    fn initial_square_contains_scene() {
        let s = Scene::new("t", vec![sq(-3, -3, 3, 3)], None, None).unwrap();
        let s1 = initial_stage(&s);
        assert_eq!(s1.disks[0].bbox(), (Coord::from_ints(-4, -4), Coord::from_ints(4, 4)));
    }

    #[test]
    fn far_squares_separate() {
        let s = Scene::new("two", vec![sq(-6, -1, -4, 1), sq(4, -1, 6, 1)], None, None).unwrap();
        let sched = Schedule::new(s.scale.clone());
        let stages = build_stages(&s, &sched, 3).unwrap();
        assert_eq!(stages[1].disks.len(), 2);
        assert_eq!(stages[2].disks.len(), 2);
    }

    #[test]
    fn chain_excludes_ring_hole() {
        let ring = Region::new(
            vec![Coord::from_ints(-3, -3), Coord::from_ints(3, -3), Coord::from_ints(3, 3), Coord::from_ints(-3, 3)],
            vec![vec![Coord::from_ints(-2, -2), Coord::from_ints(2, -2), Coord::from_ints(2, 2), Coord::from_ints(-2, 2)]],
        );
        let s = Scene::new("ring", vec![ring], None, None).unwrap();
        let chain = complement_chain(&s, &GridSpec::for_level(&s, 4)).unwrap();
        // Tiles of side 1/2 from -4; free tiles inside the hole have indices
        // 5..=10 and are unreachable from the corner.
        assert!(!chain.tiles.contains(&(6, 6)));
        assert!(chain.tiles.contains(&(0, 15)));
        assert!(chain.tiles.contains(&(15, 0)));
    }

    #[test]
    fn coarse_chain_is_empty() {
        let s = Scene::new("t", vec![sq(-3, -3, 3, 3)], None, None).unwrap();
        let chain = complement_chain(&s, &GridSpec::for_level(&s, 1)).unwrap();
        assert!(chain.tiles.is_empty());
    }
}
