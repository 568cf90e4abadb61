//! Verification of a whole welding run from its stored stages and arcs.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use crate::arc_weld::{MultiWeld, Provenance, Side, WeldConfig, WeldResult};
use crate::crosscut_chop::CrosscutPlan;
use crate::exact_geom::arc::canonical_polyline;
use crate::exact_geom::rational::{int, one, two_pow_neg};
use crate::exact_geom::{arc_length, Coord, Location, PLArc, PLDisk, Rational};
use crate::grid_approx::Scene;
use crate::planar::Region;

use super::{
    arc_interior_meets, check_cellular, check_cellular_exact, check_component_bijection, check_disjoint_interiors,
    check_null_sequence, check_tree, rasterize, Check, Measure, VerificationReport,
};

/// Tiles across the bounding box for the raster checks.
pub const TILES_PER_SIDE: i64 = 256;

fn disk_region(d: &PLDisk) -> Region {
    Region::simple(d.boundary().to_vec())
}

/// Strict containment of every inner disk in the interior of some outer one.
fn nested_strictly(outer: &[PLDisk], inner: &[PLDisk]) -> Option<Coord> {
    for e in inner {
        let Some(p) = outer.iter().find(|p| p.locate(&e.boundary()[0]) == Location::Inside) else {
            return Some(e.boundary()[0].clone());
        };
        if let Some(v) = e.boundary().iter().find(|v| p.locate(v) != Location::Inside) {
            return Some(v.clone());
        }
        for a in e.edges() {
            for b in p.edges() {
                if crate::exact_geom::seg_intersect(&a, &b) != crate::exact_geom::IntersectionResult::Empty {
                    return Some(a.p.clone());
                }
            }
        }
    }
    None
}

fn scene_disks(scene: &Scene) -> Vec<PLDisk> {
    scene.regions.iter().map(|r| PLDisk::new_unchecked(r.outer.clone())).collect()
}

/// Rebuilds every assembled arc from the stage welds and connector chains.
fn check_assembly(result: &WeldResult) -> Check {
    let mut chains: BTreeMap<Provenance, Vec<(u32, &PLArc)>> = BTreeMap::new();
    for r in &result.stages {
        for d in &r.disks {
            for c in &d.connectors {
                chains.entry(c.from.from).or_default().push((c.stage, &c.arc));
            }
        }
    }
    for list in chains.values_mut() {
        list.sort_by_key(|(s, _)| *s);
    }
    let mut c = Check::new("kappa_assembly", "each assembled arc is its stage arc plus the connector chains at its ends")
        .measure("kappas", Measure::Count(result.kappas.len()));
    let mut stored: BTreeMap<usize, &PLArc> = result.kappas.iter().map(|k| (k.id, &k.arc)).collect();
    for r in &result.stages {
        for d in &r.disks {
            for (w, &id) in d.welds.iter().zip(&d.kappa_ids) {
                let mut v: Vec<Coord> = Vec::new();
                if let Some(list) = chains.get(&Provenance { kappa: id, side: Side::Start }) {
                    for (_, a) in list.iter().rev() {
                        v.extend(a.vertices().iter().rev().cloned());
                    }
                }
                v.extend(w.arc.vertices().iter().cloned());
                if let Some(list) = chains.get(&Provenance { kappa: id, side: Side::End }) {
                    for (_, a) in list {
                        v.extend(a.vertices().iter().cloned());
                    }
                }
                let expect = canonical_polyline(v);
                match stored.remove(&id) {
                    Some(k) if k.vertices() == expect.as_slice() => {}
                    Some(k) => c.fail_at([k.start().clone()]),
                    None => c.fail_at([w.arc.start().clone()]),
                }
            }
        }
    }
    if let Some((_, k)) = stored.into_iter().next() {
        c.fail_at([k.start().clone()]);
    }
    c
}

/// Ends on two distinct scene regions, interior off the scene.
fn check_ends(name: &str, regions: &[Region], arcs: &[PLArc]) -> Check {
    let mut c = Check::new(name, "each arc joins two distinct components of the scene and otherwise avoids it");
    for a in arcs {
        let region_of = |p: &Coord| regions.iter().position(|g| g.locate(p) != Location::Outside);
        match (region_of(a.start()), region_of(a.end())) {
            (Some(x), Some(y)) if x != y => {}
            _ => c.fail_at([a.start().clone(), a.end().clone()]),
        }
        if let Some(p) = arc_interior_meets(a.vertices(), regions) {
            c.fail_at([p]);
        }
    }
    c
}

fn raster_and_exact(name: &str, regions: &[Region], arcs: &[PLArc], resolution: &mut Option<Rational>) -> [Check; 2] {
    let exact = check_cellular_exact(&format!("{name}_exact"), regions, arcs);
    let chains: Vec<Vec<Coord>> = arcs.iter().map(|a| a.vertices().to_vec()).collect();
    let (grid, set) = rasterize(regions, &chains, TILES_PER_SIDE);
    if resolution.as_ref().map_or(true, |r| grid.side < *r) {
        *resolution = Some(grid.side.clone());
    }
    [exact, check_cellular(&format!("{name}_tiles"), &grid, &set)]
}

/// Checks of a staged run on a scene with connected complement.
pub fn verify_weld(scene: &Scene, result: &WeldResult, config: &WeldConfig) -> VerificationReport {
    let mut resolution: Option<Rational> = None;
    let mut checks = Vec::new();
    let schedule = &result.schedule;

    let mut sched = Check::new("stage_schedule", "N(S_n, S_n+1) < delta_n, S_n+1 inside int(S_n), scene inside int(S_n+1)");
    let mut nesting = Check::new("stage_nesting", "consecutive stages are strictly nested and contain the scene");
    let x = scene_disks(scene);
    for r in &result.stages {
        let delta = schedule.delta(r.n);
        if r.delta != delta || r.metrics.n.upper >= delta {
            sched.fail_at([r.metrics.n.witness.clone()]);
        }
        sched.measured.push((format!("stage_{}_n", r.n), Measure::Exact(r.metrics.n.upper.clone())));
        sched.measured.push((format!("stage_{}_m", r.n), Measure::Exact(r.metrics.m.upper.clone())));
        if let Some(p) = nested_strictly(&r.outer.disks, &r.inner.disks) {
            if r.inner.radius.as_ref().map_or(true, |rad| *rad != int(0)) {
                nesting.fail_at([p]);
            }
        }
        if let Some(p) = nested_strictly(&r.outer.disks, &x) {
            nesting.fail_at([p]);
        }
    }
    checks.push(sched);
    checks.push(nesting);

    let mut counts = Check::new("weld_counts", "each outer disk gets one weld arc fewer than its inner components");
    let mut bounds = Check::new("weld_lengths", "weld arcs are shorter than 2(M + N) plus clearance per bend");
    let mut disjoint_stage = Vec::new();
    let mut cellular_stage: Vec<Check> = Vec::new();
    let mut trees: Vec<Check> = Vec::new();
    let mut tree_errors = Check::new("tree_precondition", "arcs sharing a landing point meet pairwise in connected sets");
    for r in &result.stages {
        let m_plus_n = &r.metrics.m.upper + &r.metrics.n.upper;
        for d in &r.disks {
            if d.welds.len() + 1 != d.inner.len() {
                counts.fail_at([r.outer.disks[d.outer].boundary()[0].clone()]);
            }
            for w in &d.welds {
                let bends = w.arc.vertices().len().saturating_sub(2) as i64;
                let bound = &m_plus_n * int(2) + &d.eta * int(bends);
                if arc_length(&w.arc).cmp_rational(&bound) != Ordering::Less {
                    bounds.fail_at([w.arc.start().clone()]);
                }
            }
            let mut arcs: Vec<PLArc> = d.welds.iter().map(|w| w.arc.clone()).collect();
            arcs.extend(d.connectors.iter().map(|c| c.arc.clone()));
            let mut dc = check_disjoint_interiors(&format!("stage_{}_disk_{}_disjoint", r.n, d.outer), &arcs);
            dc.property = "weld arcs and connectors meet only at endpoints".into();
            disjoint_stage.push(dc);
            let bodies: Vec<Region> = d.inner.iter().map(|&i| disk_region(&r.inner.disks[i])).collect();
            cellular_stage.extend(raster_and_exact(&format!("stage_{}_disk_{}_cellular", r.n, d.outer), &bodies, &arcs, &mut resolution));

            let mut groups: BTreeMap<&Coord, Vec<PLArc>> = BTreeMap::new();
            for a in &d.raw_connectors {
                groups.entry(a.end()).or_default().push(a.clone());
            }
            for a in &d.selection.chosen {
                groups.entry(a.arc.end()).or_default().push(a.arc.clone());
                groups.entry(a.arc.start()).or_default().push(a.arc.clone());
            }
            for (p, g) in groups {
                if g.len() < 2 {
                    continue;
                }
                match check_tree(&format!("stage_{}_tree", r.n), &g) {
                    Ok(c) => trees.push(c),
                    Err(_) => tree_errors.fail_at([p.clone()]),
                }
            }
        }
    }
    checks.push(counts);
    checks.push(bounds);
    checks.extend(disjoint_stage);
    checks.extend(cellular_stage);
    let tree_fail: Vec<&Check> = trees.iter().filter(|c| !c.passed).collect();
    let mut tree = Check::new("landing_trees", "arcs sharing a landing point form a tree")
        .measure("groups", Measure::Count(trees.len()));
    if let Some(bad) = tree_fail.first() {
        tree.fail_at(bad.witness.clone());
    }
    checks.push(tree_errors);
    checks.push(tree);

    checks.push(check_assembly(result));
    let kappas: Vec<PLArc> = result.kappas.iter().map(|k| k.arc.clone()).collect();
    checks.push(check_ends("kappa_ends", &scene.regions, &kappas));
    checks.push(check_disjoint_interiors("kappa_disjoint", &kappas));

    let mut per_stage: BTreeMap<u32, (Vec<crate::exact_geom::LengthValue>, Rational)> = BTreeMap::new();
    for r in &result.stages {
        let delta = schedule.delta(r.n);
        let eps = &r.metrics.m.upper * int(2) + &delta * int(2) + &delta / int(100);
        let bound = &eps * int(2) + &schedule.scale * two_pow_neg(r.n);
        per_stage.insert(r.n, (Vec::new(), bound));
    }
    for k in &result.kappas {
        if let Some(e) = per_stage.get_mut(&k.stage) {
            e.0.push(arc_length(&k.arc));
        }
    }
    let stages = result.stages.len() as u32;
    let tail = schedule.delta(stages.max(1)) * int(2) / (one() - &schedule.delta_base);
    let stop_ok = stages >= config.stage_budget.max(1) || tail < config.epsilon_stop;
    let staged: Vec<_> = per_stage.into_iter().map(|(n, (l, b))| (n, l, b)).collect();
    checks.push(check_null_sequence("null_sequence", &staged, schedule, stop_ok).measure("tail_bound", Measure::Exact(tail)));

    if scene.complement_connected() {
        checks.extend(raster_and_exact("welded_cellular", &scene.regions, &kappas, &mut resolution));
    }
    VerificationReport { seed: config.seed, schedule: Some(schedule.clone()), resolution, checks }
}

/// Checks of a run over every complementary component.
pub fn verify_multi(scene: &Scene, multi: &MultiWeld, config: &WeldConfig) -> VerificationReport {
    let filled: Vec<Region> = multi.top_level.iter().map(|&i| Region::simple(scene.regions[i].outer.clone())).collect();
    let outer_scene = Scene { regions: filled, ..scene.clone() };
    let mut report = verify_weld(&outer_scene, &multi.outer, config);
    let mut hole_arcs = Vec::new();
    let mut counts = Check::new("hole_weld_counts", "each hole gets one weld arc per island");
    for h in &multi.holes {
        if h.welds.len() != h.islands.len() {
            counts.fail_at([scene.regions[h.region].holes[h.hole][0].clone()]);
        }
        hole_arcs.extend(h.welds.iter().map(|w| w.arc.clone()));
    }
    report.checks.push(counts);
    report.checks.push(check_ends("hole_weld_ends", &scene.regions, &hole_arcs));
    let mut all: Vec<PLArc> = multi.outer.kappas.iter().map(|k| k.arc.clone()).collect();
    all.extend(hole_arcs);
    report.checks.push(check_disjoint_interiors("all_arcs_disjoint", &all));
    let mut unbounded_ok = check_ends("outer_arc_ends", &scene.regions, &all[..multi.outer.kappas.len()]);
    unbounded_ok.property = "assembled arcs join distinct components of the scene".into();
    report.checks.push(unbounded_ok);
    report.checks.push(check_component_bijection("component_bijection", &scene.regions, &all));
    let (_, set) = rasterize(&scene.regions, &all.iter().map(|a| a.vertices().to_vec()).collect::<Vec<_>>(), TILES_PER_SIDE);
    let t = super::tile_topology(&set);
    let scene_holes: usize = scene.regions.iter().map(|g| g.holes.len()).sum();
    let mut tiles = Check::new("component_bijection_tiles", "tile flood fill finds one complementary component per scene component")
        .measure("complement_components", Measure::Count(t.complement_components))
        .measure("scene_complement_components", Measure::Count(scene_holes + 1));
    if t.complement_components != scene_holes + 1 {
        tiles.fail_at(Vec::new());
        tiles.passed = false;
    }
    report.checks.push(tiles);
    report
}

/// Checks of a crosscut subdivision of the complement of a continuum.
pub fn verify_chop(scene: &Scene, plan: &CrosscutPlan) -> VerificationReport {
    let arcs: Vec<PLArc> = plan.crosscuts().map(|c| c.arc.clone()).collect();
    let mut checks = vec![check_disjoint_interiors("crosscut_disjoint", &arcs)];

    let mut ends = Check::new("crosscut_endpoints", "every crosscut ends on the boundary of X");
    let mut interiors = Check::new("crosscut_interiors", "crosscut interiors avoid X");
    for a in &arcs {
        for e in [a.start(), a.end()] {
            if scene.locate(e) != Location::OnBoundary {
                ends.fail_at([e.clone()]);
            }
        }
        if let Some(p) = arc_interior_meets(a.vertices(), &scene.regions) {
            interiors.fail_at([p]);
        }
    }
    checks.push(ends);
    checks.push(interiors);

    let mut jordan = Check::new("region_jordan", "every region is bounded by a simple closed curve");
    let mut small = Check::new("region_diameter", "every region of round n has diameter below 14 eps_n");
    let mut thin = Check::new("band_thin", "every band of round n is eps_n-thin");
    let mut regions = 0;
    for r in &plan.rounds {
        let bound = int(14) * &r.epsilon;
        let bound2 = &bound * &bound;
        for g in &r.regions {
            regions += 1;
            let mut sorted = g.boundary.clone();
            sorted.sort();
            if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
                jordan.fail_at([w[0].clone()]);
            } else if let Some((i, _)) = crate::exact_geom::disk::ring_self_intersection(&g.boundary) {
                jordan.fail_at([g.boundary[i].clone()]);
            }
            if crate::crosscut_chop::diameter2(&g.boundary) >= bound2 {
                small.fail_at(g.boundary.iter().take(1).cloned());
            }
        }
        for b in &r.bands {
            let t = crate::crosscut_chop::is_eps_thin(&PLDisk::new_unchecked(b.boundary.clone()), &r.epsilon);
            if !t.thin {
                thin.fail_at([t.witness]);
            }
        }
    }
    checks.push(jordan.measure("regions", Measure::Count(regions)));
    checks.push(small);
    checks.push(thin);
    VerificationReport { seed: plan.seed, schedule: None, resolution: None, checks }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::crosscut_chop::chop_complement;
    use crate::scenes::rect;

    #[test]
    fn chop_plan_verifies_and_tampering_fails() {
        let s = Scene::new("sq", vec![rect(int(0), int(0), int(4), int(4))], Some(int(8)), None).unwrap();
        let mut plan = chop_complement(&s, 2, 3).unwrap();
        let report = verify_chop(&s, &plan);
        assert!(report.all_passed(), "{:?}", report.failed());
        let arc = &mut plan.rounds[0].crosscuts[0].arc;
        let shifted: Vec<Coord> = arc.vertices().iter().map(|v| &Coord::from_ints(1, 0) + v).collect();
        *arc = PLArc::new_unchecked(shifted);
        assert!(!verify_chop(&s, &plan).all_passed());
    }
}
