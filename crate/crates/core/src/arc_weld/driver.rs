//! Stage-by-stage welding of a scene and assembly of the final arcs.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::disk_metric::Target;
use crate::exact_geom::arc::canonical_polyline;
use crate::exact_geom::rational::{frac, int, one, two_pow_neg};
use crate::exact_geom::{arc_length, point_in_ring, Coord, LengthValue, Location, PLArc, PLDisk, Rational};
use crate::grid_approx::{build_stages, stage_metrics, DiskCollection, Schedule, Scene, StageError, StageMetrics};
use crate::planar::{oriented, Region};

use super::{
    clearance_for, connect_marks, make_disjoint, min_feature_d2, select_arcs, Cell, ConnectorArc, Mark, Provenance,
    SelectionState, Side, WeldArc, WeldError,
};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeldConfig {
    pub stage_budget: u32,
    #[serde(with = "crate::io::rat")]
    pub delta_base: Rational,
    /// Staging stops early once the length still owed to the arc tails
    /// (`tail_bound`) falls below this.
    #[serde(with = "crate::io::rat")]
    pub epsilon_stop: Rational,
    /// Clearance as a fraction of the smaller of δₙ and the feature size.
    #[serde(with = "crate::io::rat")]
    pub eta_fraction: Rational,
    pub seed: u64,
}

impl WeldConfig {
    pub fn new(stage_budget: u32) -> Self {
        Self { stage_budget, delta_base: frac(1, 10), epsilon_stop: frac(1, 1_000_000_000), eta_fraction: frac(1, 16), seed: 0 }
    }

    pub fn schedule(&self, scene: &Scene) -> Schedule {
        Schedule { scale: scene.scale.clone(), delta_base: self.delta_base.clone() }
    }

    /// Number of stages to build: the budget, or fewer once the tail bound
    /// drops below `epsilon_stop`.
    pub fn stage_count(&self, schedule: &Schedule) -> u32 {
        let budget = self.stage_budget.max(1);
        (1..budget).find(|&k| tail_bound(schedule, k) < self.epsilon_stop).unwrap_or(budget)
    }
}

/// The work inside one outer disk at one stage.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiskStage {
    pub outer: usize,
    pub inner: Vec<usize>,
    #[serde(with = "crate::io::rat")]
    pub eta: Rational,
    pub marks: Vec<Mark>,
    /// Geodesics from the marks before they were made disjoint.
    pub raw_connectors: Vec<PLArc>,
    pub connectors: Vec<ConnectorArc>,
    pub selection: SelectionState,
    pub welds: Vec<WeldArc>,
    /// Ids of the assembled arcs started by `welds`, in the same order.
    pub kappa_ids: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageRecord {
    pub n: u32,
    pub outer: DiskCollection,
    /// The next stage, or the filled scene components at the last stage.
    pub inner: DiskCollection,
    #[serde(with = "crate::io::rat")]
    pub delta: Rational,
    /// `2·M + 2δₙ + δₙ/100`, strictly above `2M + 2δₙ`.
    #[serde(with = "crate::io::rat")]
    pub epsilon: Rational,
    pub metrics: StageMetrics,
    pub disks: Vec<DiskStage>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Kappa {
    pub id: usize,
    pub stage: u32,
    pub arc: PLArc,
    pub length: LengthValue,
    /// Scene regions holding the two ends.
    pub ends: (usize, usize),
    /// `2εₙ + scale/2ⁿ` for the stage that started the arc.
    #[serde(with = "crate::io::rat")]
    pub length_bound: Rational,
    /// Length the connector chains beyond the last stage could still add.
    #[serde(with = "crate::io::rat")]
    pub tail_bound: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeldResult {
    pub label: String,
    pub config: WeldConfig,
    pub schedule: Schedule,
    pub stages: Vec<StageRecord>,
    pub kappas: Vec<Kappa>,
}

fn reduce_eta(eta: &mut Rational, floor: &Rational, stage: u32) -> Result<(), WeldError> {
    *eta /= int(2);
    if *eta < *floor {
        return Err(WeldError::CrowdingFailure { stage });
    }
    Ok(())
}

/// Greedy selection followed by clearance rerouting inside one disk.
pub fn weld_stage(p: &PLDisk, cells: &[Cell], eta: &Rational, stage: u32) -> Result<(SelectionState, Vec<WeldArc>), WeldError> {
    let selection = select_arcs(p, cells, stage)?;
    let welds = make_disjoint(p, cells, &selection, eta, stage)?;
    Ok((selection, welds))
}

#[allow(clippy::too_many_arguments)]
fn weld_disk(
    p: &PLDisk,
    outer: usize,
    inner: Vec<usize>,
    bodies: &[PLDisk],
    marks: Vec<Mark>,
    delta: &Rational,
    config: &WeldConfig,
    floor: &Rational,
    stage: u32,
) -> Result<DiskStage, WeldError> {
    let targets: Vec<Target> = bodies.iter().cloned().map(Target::Disk).collect();
    let plain: Vec<Cell> = bodies.iter().cloned().map(Cell::disk).collect();
    let points: Vec<Coord> = marks.iter().map(|m| m.point.clone()).collect();
    let mut eta = clearance_for(delta, min_feature_d2(&points, &plain).as_ref(), &config.eta_fraction);
    loop {
        let attempt = (|| {
            let (raw, connectors) = connect_marks(p, &targets, &marks, delta, &eta, stage)?;
            let mut cells = plain.clone();
            for c in &connectors {
                let k = bodies.iter().position(|b| b.locate(&c.to) != Location::Outside).expect("connector lands on a body");
                cells[k].attached.push(c.arc.clone());
            }
            let (selection, welds) = weld_stage(p, &cells, &eta, stage)?;
            Ok::<_, WeldError>((raw, connectors, selection, welds))
        })();
        match attempt {
            Ok((raw_connectors, connectors, selection, welds)) => {
                return Ok(DiskStage {
                    outer,
                    inner,
                    eta,
                    marks,
                    raw_connectors,
                    connectors,
                    selection,
                    welds,
                    kappa_ids: Vec::new(),
                })
            }
            Err(WeldError::CrowdingFailure { .. }) => reduce_eta(&mut eta, floor, stage)?,
            Err(e) => return Err(e),
        }
    }
}

fn scene_disks(scene: &Scene, level: u32) -> DiskCollection {
    DiskCollection {
        level,
        disks: scene.regions.iter().map(|r| PLDisk::new_unchecked(r.outer.clone())).collect(),
        radius: Some(int(0)),
    }
}

/// Welds a scene whose complement is connected: stages `S₁ … S_K`, then a
/// last round from `S_K` onto the scene itself, so that every assembled arc
/// ends on the scene.
pub fn run_weld(scene: &Scene, config: &WeldConfig) -> Result<WeldResult, WeldError> {
    if !scene.complement_connected() {
        return Err(WeldError::ComplementDisconnected);
    }
    let schedule = config.schedule(scene);
    let stages = build_stages(scene, &schedule, config.stage_count(&schedule))?;
    let k = stages.len() as u32;
    let mut marks: Vec<Mark> = Vec::new();
    let mut records: Vec<StageRecord> = Vec::new();
    let mut next_kappa = 0usize;
    for n in 1..=k {
        let outer = stages[n as usize - 1].clone();
        let inner = if n < k { stages[n as usize].clone() } else { scene_disks(scene, k + 1) };
        let delta = schedule.delta(n);
        let metrics = stage_metrics(&outer, &inner, &delta)?;
        let epsilon = &metrics.m.upper * int(2) + &delta * int(2) + &delta / int(100);
        let parents = outer.parents_of(&inner);
        let mut disks = Vec::new();
        let mut new_marks: Vec<Mark> = Vec::new();
        for (d, p) in outer.disks.iter().enumerate() {
            let members: Vec<usize> = (0..inner.disks.len()).filter(|&i| parents[i] == Some(d)).collect();
            if members.is_empty() {
                return Err(StageError::ComponentMismatch(d).into());
            }
            let here: Vec<Mark> = marks.iter().filter(|m| p.locate(&m.point) != Location::Outside).cloned().collect();
            let bodies: Vec<PLDisk> = members.iter().map(|&i| inner.disks[i].clone()).collect();
            let mut work = weld_disk(p, d, members, &bodies, here, &delta, config, &scene.resolution_floor, n)?;
            for c in &work.connectors {
                new_marks.push(Mark { point: c.to.clone(), from: c.from.from });
            }
            for w in &work.welds {
                let id = next_kappa;
                next_kappa += 1;
                work.kappa_ids.push(id);
                new_marks.push(Mark { point: w.arc.start().clone(), from: Provenance { kappa: id, side: Side::Start } });
                new_marks.push(Mark { point: w.arc.end().clone(), from: Provenance { kappa: id, side: Side::End } });
            }
            disks.push(work);
        }
        marks = new_marks;
        records.push(StageRecord { n, outer, inner, delta, epsilon, metrics, disks });
    }
    let kappas = assemble_kappa(scene, &schedule, &records)?;
    Ok(WeldResult { label: scene.label.clone(), config: config.clone(), schedule, stages: records, kappas })
}

/// `Σ_{k ≥ K} 2·δ_k = 2·scale·base^K / (1 − base)`.
pub fn tail_bound(schedule: &Schedule, k: u32) -> Rational {
    schedule.delta(k) * int(2) / (one() - &schedule.delta_base)
}

/// Concatenates each stage weld arc with the connector chains continuing
/// its two ends through the later stages.
pub fn assemble_kappa(scene: &Scene, schedule: &Schedule, records: &[StageRecord]) -> Result<Vec<Kappa>, WeldError> {
    let mut chains: BTreeMap<Provenance, Vec<&ConnectorArc>> = BTreeMap::new();
    for r in records {
        for d in &r.disks {
            for c in &d.connectors {
                chains.entry(c.from.from).or_default().push(c);
            }
        }
    }
    let k = records.len() as u32;
    let tail = tail_bound(schedule, k.max(1));
    let mut out = Vec::new();
    for r in records {
        for d in &r.disks {
            for (w, &id) in d.welds.iter().zip(&d.kappa_ids) {
                let empty = Vec::new();
                let start = chains.get(&Provenance { kappa: id, side: Side::Start }).unwrap_or(&empty);
                let end = chains.get(&Provenance { kappa: id, side: Side::End }).unwrap_or(&empty);
                let mut v: Vec<Coord> = Vec::new();
                for c in start.iter().rev() {
                    v.extend(c.arc.reversed().into_vertices());
                }
                v.extend(w.arc.vertices().iter().cloned());
                for c in end.iter() {
                    v.extend(c.arc.vertices().iter().cloned());
                }
                let arc = PLArc::new_unchecked(canonical_polyline(v));
                let region_of = |p: &Coord| scene.regions.iter().position(|g| g.locate(p) != Location::Outside);
                let (a, b) = match (region_of(arc.start()), region_of(arc.end())) {
                    (Some(a), Some(b)) if a != b => (a, b),
                    _ => return Err(WeldError::EndMerge(id)),
                };
                let length = arc_length(&arc);
                let length_bound = &r.epsilon * int(2) + &schedule.scale * two_pow_neg(r.n);
                out.push(Kappa { id, stage: r.n, arc, length, ends: (a, b), length_bound, tail_bound: tail.clone() });
            }
        }
    }
    Ok(out)
}

/// Arcs welded inside one hole of a scene region.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HoleWeld {
    pub region: usize,
    pub hole: usize,
    /// Scene regions lying directly in the hole, in cell order after the
    /// frame (cell 0).
    pub islands: Vec<usize>,
    #[serde(with = "crate::io::rat")]
    pub eta: Rational,
    pub selection: SelectionState,
    pub welds: Vec<WeldArc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultiWeld {
    /// Scene regions whose outer boundaries face the unbounded component.
    pub top_level: Vec<usize>,
    pub outer: WeldResult,
    pub holes: Vec<HoleWeld>,
}

/// Regions lying directly inside hole `h` of region `r`.
pub fn islands_in(scene: &Scene, r: usize, h: usize) -> Vec<usize> {
    let hole = &scene.regions[r].holes[h];
    let inside: Vec<usize> = (0..scene.regions.len())
        .filter(|&q| q != r && point_in_ring(&scene.regions[q].outer[0], hole) == Location::Inside)
        .collect();
    inside
        .iter()
        .copied()
        .filter(|&q| {
            !inside.iter().any(|&o| {
                o != q
                    && scene.regions[o].holes.iter().any(|oh| point_in_ring(&scene.regions[q].outer[0], oh) == Location::Inside)
            })
        })
        .collect()
}

/// Regions not lying in a hole of another region.
pub fn top_level_regions(scene: &Scene) -> Vec<usize> {
    (0..scene.regions.len())
        .filter(|&q| {
            !scene.regions.iter().enumerate().any(|(r, g)| {
                r != q && g.holes.iter().any(|h| point_in_ring(&scene.regions[q].outer[0], h) == Location::Inside)
            })
        })
        .collect()
}

/// Welds every complementary component separately: the unbounded one by the
/// staged construction on the filled top-level regions, and each hole by a
/// single round inside the hole, with the hole's boundary as one more cell.
pub fn weld_all_components(scene: &Scene, config: &WeldConfig) -> Result<MultiWeld, WeldError> {
    let top = top_level_regions(scene);
    let filled: Vec<Region> = top.iter().map(|&i| Region::simple(scene.regions[i].outer.clone())).collect();
    let outer_scene = Scene::new(
        &scene.label,
        filled,
        Some(scene.scale.clone()),
        Some(scene.resolution_floor.clone()),
    )
    .expect("top-level regions of a valid scene are disjoint");
    let outer = run_weld(&outer_scene, config)?;
    let mut holes = Vec::new();
    for (r, g) in scene.regions.iter().enumerate() {
        for h in 0..g.holes.len() {
            let islands = islands_in(scene, r, h);
            let p = PLDisk::new_unchecked(oriented(g.holes[h].clone(), true));
            let mut cells = vec![Cell::frame(&p)];
            cells.extend(islands.iter().map(|&q| Cell::disk(PLDisk::new_unchecked(scene.regions[q].outer.clone()))));
            let mut eta = clearance_for(&scene.scale, min_feature_d2(&[], &cells).as_ref(), &config.eta_fraction);
            let (selection, welds) = loop {
                match weld_stage(&p, &cells, &eta, 0) {
                    Ok(v) => break v,
                    Err(WeldError::CrowdingFailure { .. }) => reduce_eta(&mut eta, &scene.resolution_floor, 0)?,
                    Err(e) => return Err(e),
                }
            };
            holes.push(HoleWeld { region: r, hole: h, islands, eta, selection, welds });
        }
    }
    Ok(MultiWeld { top_level: top, outer, holes })
}
