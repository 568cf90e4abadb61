//! Nested crosscut subdivision of the complement of a nonseparating
//! continuum.
//!
//! Round 1 surrounds X with a closed ring of short crosscuts. In every round
//! each crosscut γ of the current ring is closed up by a chain of shorter
//! crosscuts hugging X; the band between γ and its chain is thin, so it is
//! cut along a lattice and the cut ends are snapped onto the chain's
//! junctions. The chains form the next round's ring.

use serde::{Deserialize, Serialize};

use super::ring::{crosscut_ring_with, full_ring, Dilations};
use super::{is_eps_thin, snap_to_marks, span_disk, ChopError, ChopRegion, Crosscut, Host};
use crate::exact_geom::rational::two_pow_neg;
use crate::exact_geom::{Coord, PLArc, PLDisk, Rational};
use crate::grid_approx::Scene;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Band {
    pub boundary: Vec<Coord>,
    pub thin: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChopRound {
    pub round: u32,
    #[serde(with = "crate::io::rat")]
    pub epsilon: Rational,
    pub bands: Vec<Band>,
    pub crosscuts: Vec<Crosscut>,
    pub regions: Vec<ChopRegion>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrosscutPlan {
    pub seed: u64,
    pub rounds: Vec<ChopRound>,
}

impl CrosscutPlan {
    pub fn crosscuts(&self) -> impl Iterator<Item = &Crosscut> {
        self.rounds.iter().flat_map(|r| r.crosscuts.iter())
    }
}

/// `scale · 2⁻ⁿ`.
pub fn round_epsilon(scene: &Scene, n: u32) -> Rational {
    &scene.scale * two_pow_neg(n)
}

fn band_seed(seed: u64, round: u32, index: usize) -> u64 {
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ (u64::from(round) << 40) ^ index as u64
}

/// The disk bounded by `gamma` and the chain from its first endpoint back
/// around to its last.
fn band_disk(gamma: &PLArc, chain: &[PLArc]) -> Result<PLDisk, ChopError> {
    let mut ring: Vec<Coord> = gamma.vertices().to_vec();
    for arc in chain.iter().rev() {
        let v = arc.vertices();
        ring.extend(v[..v.len() - 1].iter().rev().cloned());
    }
    ring.pop();
    PLDisk::new(ring).map_err(|_| ChopError::NotJordan(gamma.vertices()[0].clone()))
}

/// Runs `rounds` rounds of the subdivision. X must be one region without
/// holes.
pub fn chop_complement(scene: &Scene, rounds: u32, seed: u64) -> Result<CrosscutPlan, ChopError> {
    let mut plan = CrosscutPlan { seed, rounds: Vec::new() };
    if rounds == 0 {
        return Ok(plan);
    }
    if scene.regions.len() != 1 {
        return Err(ChopError::NotConnected(scene.regions.len()));
    }
    if !scene.complement_connected() {
        return Err(ChopError::Separating);
    }
    let mut dil = Dilations::new(scene);
    let first = full_ring(&mut dil, &round_epsilon(scene, 1))?;
    let mut current: Vec<PLArc> = first.arcs;
    for n in 1..=rounds {
        let eps = round_epsilon(scene, n);
        let finer = round_epsilon(scene, n + 1);
        let mut round = ChopRound { round: n, epsilon: eps.clone(), bands: Vec::new(), crosscuts: Vec::new(), regions: Vec::new() };
        if n == 1 {
            round.crosscuts.extend(current.iter().map(|a| Crosscut { arc: a.clone(), host: Host::Complement }));
        }
        let mut next = Vec::new();
        for (index, gamma) in current.iter().enumerate() {
            let ring = crosscut_ring_with(&mut dil, gamma, &finer)?;
            let v = band_disk(gamma, &ring.arcs)?;
            let thin = is_eps_thin(&v, &eps).thin;
            round.bands.push(Band { boundary: v.boundary().to_vec(), thin });
            let span = span_disk(&v, &eps, band_seed(seed, n, index))?;
            let snapped = snap_to_marks(&v, &span.arcs, &ring.junctions, &eps)?;
            let host = Host::Band { round: n, index };
            round.crosscuts.extend(ring.arcs.iter().map(|a| Crosscut { arc: a.clone(), host: host.clone() }));
            round.crosscuts.extend(snapped.arcs.into_iter().map(|arc| Crosscut { arc, host: host.clone() }));
            round.regions.extend(snapped.regions);
            next.extend(ring.arcs);
        }
        plan.rounds.push(round);
        current = next;
    }
    Ok(plan)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_geom::rational::int;
    use crate::scenes;

    #[test]
    fn zero_rounds_is_empty() {
        let s = Scene::new("sq", vec![scenes::rect(int(0), int(0), int(1), int(1))], None, None).unwrap();
        assert!(chop_complement(&s, 0, 1).unwrap().rounds.is_empty());
    }

    #[test]
    fn two_squares_are_not_connected() {
        let s = scenes::two_squares();
        assert!(matches!(chop_complement(&s, 1, 1), Err(ChopError::NotConnected(2))));
    }

    #[test]
    fn square_rounds_shrink() {
        let s = Scene::new("sq", vec![scenes::rect(int(0), int(0), int(1), int(1))], None, None).unwrap();
        let plan = chop_complement(&s, 3, 5).unwrap();
        assert_eq!(plan.rounds.len(), 3);
        for r in &plan.rounds {
            assert!(r.bands.iter().all(|b| b.thin));
            assert!(!r.regions.is_empty());
            assert!(r.regions.iter().all(|g| g.below(14, &r.epsilon)), "round {}", r.round);
        }
        let d1 = plan.rounds[0].regions.iter().map(|g| g.diameter2.clone()).max().unwrap();
        let d3 = plan.rounds[2].regions.iter().map(|g| g.diameter2.clone()).max().unwrap();
        assert!(d3 < d1);
    }

    fn check(plan: &CrosscutPlan) {
        for r in &plan.rounds {
            assert!(r.bands.iter().all(|b| b.thin), "round {}", r.round);
            assert!(r.regions.iter().all(|g| g.below(14, &r.epsilon)), "round {}", r.round);
        }
        let chains: Vec<Vec<Coord>> = plan.crosscuts().map(|c| c.arc.vertices().to_vec()).collect();
        assert!(super::super::pairwise_clean(&chains, true));
    }

    #[test]
    fn square_at_its_own_scale() {
        let s = Scene::new("sq", vec![scenes::rect(int(0), int(0), int(4), int(4))], Some(int(8)), None).unwrap();
        let plan = chop_complement(&s, 3, 2).unwrap();
        check(&plan);
        let counts: Vec<usize> = plan.rounds.iter().map(|r| r.regions.len()).collect();
        assert!(counts[2] > counts[0], "{counts:?}");
    }

    #[test]
    fn long_bar() {
        let s = Scene::new("bar", vec![scenes::rect(int(0), int(0), int(16), int(1))], Some(int(8)), None).unwrap();
        let plan = chop_complement(&s, 3, 9).unwrap();
        check(&plan);
    }
}
