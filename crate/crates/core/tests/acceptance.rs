//! Acceptance suite. Each test prints one `PASS`/`FAIL` line for its
//! criterion before asserting, so `cargo test --test acceptance -- --nocapture`
//! gives a one-line-per-criterion summary.

mod common;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use weld_core::arc_weld::{connect_marks, run_weld, weld_all_components, Mark, MultiWeld, Provenance, Side, WeldConfig, WeldResult};
use weld_core::crosscut_chop::{chop_complement, round_epsilon, span_disk, CrosscutPlan};
use weld_core::disk_metric::properties::{point_at_fraction, sample_point};
use weld_core::disk_metric::{
    check_thin_triangles, geodesic_in, geodesics_intersection_connected, reflex_vertices, triangulate, Target, TriodVerdict,
};
use weld_core::exact_geom::rational::{frac, int, ten_pow_neg, two_pow_neg};
use weld_core::exact_geom::{arc_length, Coord, Location, PLArc, PLDisk, Rational};
use weld_core::grid_approx::Scene;
use weld_core::io::{emit_trace, parse_trace, TraceFile, TraceRun};
use weld_core::scenes;
use weld_core::verify::{check_disjoint_interiors, check_tree, verify_chop, verify_multi, verify_weld, VerificationReport};

fn verdict(n: u32, title: &str, ok: bool, detail: impl std::fmt::Display) {
    println!("criterion {n:>2} {} {title}: {detail}", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "criterion {n} ({title}) failed: {detail}");
}

fn failed_names(r: &VerificationReport) -> Vec<String> {
    r.failed().iter().map(|c| c.name.clone()).collect()
}

fn named<'a>(r: &'a VerificationReport, prefix: &str) -> Vec<&'a weld_core::Check> {
    r.checks.iter().filter(|c| c.name.starts_with(prefix)).collect()
}

struct Run {
    scene: Scene,
    result: WeldResult,
    report: VerificationReport,
    elapsed: Duration,
}

const STAGE_BUDGET: u32 = 5;

/// The three canned scenes of the staged runs, each welded once per test
/// binary.
fn staged_runs() -> &'static [Run] {
    static RUNS: OnceLock<Vec<Run>> = OnceLock::new();
    RUNS.get_or_init(|| {
        [scenes::two_squares(), scenes::cantor_bars(4), scenes::five_circles()]
            .into_iter()
            .map(|scene| {
                let config = WeldConfig::new(STAGE_BUDGET);
                let t = Instant::now();
                let result = run_weld(&scene, &config).expect("weld run");
                let elapsed = t.elapsed();
                let report = verify_weld(&scene, &result, &config);
                Run { scene, result, report, elapsed }
            })
            .collect()
    })
}

fn cantor_run() -> &'static Run {
    &staged_runs()[1]
}

#[test]
fn c01_geodesic_oracle_equivalence() {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0001);
    let (mut pairs, mut mismatches) = (0, 0);
    for _ in 0..200 {
        let d = common::random_rectilinear_disk(&mut rng, 30);
        let tri = triangulate(&d).unwrap();
        for _ in 0..5 {
            let x = common::random_point_in(&mut rng, &d);
            let y = common::random_point_in(&mut rng, &d);
            let g = geodesic_in(&tri, &x, &y).unwrap();
            if g.vertices != common::visibility_shortest_path(&d, &x, &y) {
                mismatches += 1;
            }
            pairs += 1;
        }
    }
    let secs = t.elapsed().as_secs_f64();
    verdict(1, "funnel geodesics match the visibility-graph oracle", mismatches == 0 && secs < 30.0, format!("{pairs} pairs, {mismatches} mismatches, {secs:.2}s"));
}

#[test]
fn c02_cat0_comparison_and_connected_intersections() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0002);
    let tol = ten_pow_neg(9);
    let mut worst = f64::NEG_INFINITY;
    let mut thin_ok = true;
    let mut disks = Vec::new();
    while disks.len() < 20 {
        let d = common::random_rectilinear_disk(&mut rng, 30);
        if !reflex_vertices(&d).is_empty() || disks.len() % 4 == 0 {
            disks.push(d);
        }
    }
    for (k, d) in disks.iter().enumerate() {
        let r = check_thin_triangles(d, 100, &tol, 100 + k as u64).unwrap();
        worst = worst.max(r.max_violation);
        thin_ok &= r.passed && r.max_violation <= 1e-9;
    }

    // Pairs built to overlap: independent chords, chords starting on the
    // first geodesic, and chords sharing an endpoint with it.
    let (mut pairs, mut meeting, mut bad) = (0, 0, 0);
    for k in 0..500 {
        let d = &disks[k % disks.len()];
        let tri = triangulate(d).unwrap();
        let x = sample_point(&mut rng, d, 5);
        let y = sample_point(&mut rng, d, 5);
        let z = sample_point(&mut rng, d, 5);
        let g1 = geodesic_in(&tri, &x, &y).unwrap();
        let from = match k % 3 {
            0 => sample_point(&mut rng, d, 5),
            1 => point_at_fraction(&g1, &frac(rng.gen_range(1..8), 8)),
            _ => x.clone(),
        };
        let g2 = geodesic_in(&tri, &from, &z).unwrap();
        let r = geodesics_intersection_connected(&g1, &g2);
        pairs += 1;
        meeting += usize::from(k % 3 != 0);
        bad += usize::from(!r.passed);
    }
    verdict(
        2,
        "geodesic triangles are thin and geodesics meet in connected sets",
        thin_ok && bad == 0,
        format!("20 disks x 100 triples, max violation {worst:.3e}; {pairs} pairs ({meeting} built to meet), {bad} disconnected"),
    );
}

/// Points in the three interior quadrants around a reflex vertex of a
/// polyomino disk, ordered so that the first two flank the exterior quadrant.
fn reflex_triple(rng: &mut ChaCha8Rng, d: &PLDisk, v: &Coord) -> Option<[Coord; 3]> {
    let h = frac(1, 64);
    let quads = [(1, 1), (-1, 1), (-1, -1), (1, -1)];
    let inside = |sx: i64, sy: i64| d.locate(&Coord::new(&v.x + &h * int(sx), &v.y + &h * int(sy))) == Location::Inside;
    let outside: Vec<(i64, i64)> = quads.iter().copied().filter(|&(sx, sy)| !inside(sx, sy)).collect();
    let [(ex, ey)] = outside[..] else { return None };
    let mut at = |sx: i64, sy: i64| {
        let (rx, ry) = (rng.gen_range(1..16), rng.gen_range(1..16));
        Coord::new(&v.x + frac(sx * rx, 16), &v.y + frac(sy * ry, 16))
    };
    let pts = [at(ex, -ey), at(-ex, ey), at(-ex, -ey)];
    pts.iter().all(|p| d.locate(p) == Location::Inside).then_some(pts)
}

#[test]
fn c03_no_geodesic_triods() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0003);
    let sep = ten_pow_neg(30);
    let (mut built, mut certified, mut degenerate, mut attempts) = (0, 0, 0, 0);
    let mut failures = Vec::new();
    while built < 50 && attempts < 2000 {
        attempts += 1;
        let d = common::random_rectilinear_disk(&mut rng, 30);
        let reflex = reflex_vertices(&d);
        if reflex.is_empty() {
            continue;
        }
        let v = reflex[rng.gen_range(0..reflex.len())].clone();
        let Some([a, b, c]) = reflex_triple(&mut rng, &d, &v) else { continue };
        let tri = triangulate(&d).unwrap();
        match weld_core::disk_metric::properties::triod_check_in(&tri, &a, &b, &c).unwrap() {
            TriodVerdict::DegenerateConfiguration => degenerate += 1,
            TriodVerdict::Shortenable { side_length, geodesic_length, .. } => {
                built += 1;
                let (s, g) = (side_length.refine(&sep), geodesic_length.refine(&sep));
                if s.lower > g.upper {
                    certified += 1;
                } else {
                    failures.push(format!("uncertified at {v:?}"));
                }
            }
            TriodVerdict::GeodesicTriod { center } => {
                built += 1;
                failures.push(format!("geodesic triod centred at {center:?}"));
            }
        }
    }
    verdict(
        3,
        "every triod has a side longer than its geodesic",
        built == 50 && certified == 50,
        format!("{built} triods, {certified} certified by interval separation, {degenerate} degenerate draws skipped {failures:?}"),
    );
}

#[test]
fn c04_stage_schedule() {
    let mut lines = Vec::new();
    let mut ok = true;
    for run in staged_runs() {
        let s = &run.result.schedule;
        let mut stage_ok = run.result.stages.len() as u32 == STAGE_BUDGET.min(run.result.config.stage_count(s));
        for r in &run.result.stages {
            let delta = s.scale.clone() * frac(1, 10).pow(r.n as i32);
            stage_ok &= r.metrics.n.upper < delta && r.delta == delta;
        }
        for name in ["stage_schedule", "stage_nesting"] {
            stage_ok &= named(&run.report, name).iter().all(|c| c.passed);
        }
        let last = run.result.stages.last().expect("at least one stage");
        let m_ok = last.metrics.m.upper < &last.metrics.n.lower * int(10);
        let secs = run.elapsed.as_secs_f64();
        ok &= stage_ok && m_ok && secs < 60.0;
        lines.push(format!(
            "{}: {} stages, final N in [{:.3e}, {:.3e}], M <= {:.3e}, {secs:.2}s",
            run.scene.label,
            run.result.stages.len(),
            to_f64(&last.metrics.n.lower),
            to_f64(&last.metrics.n.upper),
            to_f64(&last.metrics.m.upper)
        ));
    }
    verdict(4, "nested stages follow the schedule and M tracks N", ok, lines.join("; "));
}

fn to_f64(r: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

#[test]
fn c05_stage_welds() {
    let mut ok = true;
    let mut lines = Vec::new();
    for run in staged_runs() {
        let (mut welds, mut over) = (0, 0);
        let mut count_ok = true;
        for r in &run.result.stages {
            let bound2 = (&r.metrics.m.upper + &r.metrics.n.upper) * int(2);
            for d in &r.disks {
                count_ok &= d.welds.len() + 1 == d.inner.len();
                let mut arcs: Vec<PLArc> = d.welds.iter().map(|w| w.arc.clone()).collect();
                for w in &d.welds {
                    welds += 1;
                    let bends = int(w.arc.vertices().len() as i64 - 2);
                    if arc_length(&w.arc).cmp_rational(&(&bound2 + &d.eta * bends)) != Ordering::Less {
                        over += 1;
                    }
                }
                arcs.extend(d.connectors.iter().map(|c| c.arc.clone()));
                count_ok &= check_disjoint_interiors("welds_and_connectors", &arcs).passed;
            }
        }
        let verifier: Vec<_> = ["weld_counts", "weld_lengths", "stage_"]
            .iter()
            .flat_map(|p| named(&run.report, p))
            .filter(|c| c.name != "stage_schedule" && c.name != "stage_nesting")
            .collect();
        let tiles = verifier.iter().filter(|c| c.name.ends_with("_cellular_tiles")).count();
        let exact = verifier.iter().filter(|c| c.name.ends_with("_cellular_exact")).count();
        let v_ok = verifier.iter().all(|c| c.passed) && tiles == exact && tiles > 0;
        ok &= count_ok && over == 0 && v_ok;
        lines.push(format!("{}: {welds} welds, {over} over bound, {tiles} cellular disks", run.scene.label));
    }
    verdict(5, "per-stage weld arcs are counted, short, disjoint and cellular", ok, lines.join("; "));
}

#[test]
fn c06_cantor_end_to_end() {
    let run = cantor_run();
    let s = &run.result.schedule;
    let mut ok = run.result.kappas.len() == 15;
    let mut worst: BTreeMap<u32, f64> = BTreeMap::new();
    for k in &run.result.kappas {
        let r = run.result.stages.iter().find(|r| r.n == k.stage).expect("stage of arc");
        let delta = s.delta(r.n);
        ok &= r.epsilon > (&r.metrics.m.upper + &delta) * int(2);
        let bound = &r.epsilon * int(2) + &s.scale * two_pow_neg(r.n);
        ok &= arc_length(&k.arc).cmp_rational(&bound) == Ordering::Less;
        let e = worst.entry(k.stage).or_insert(0.0);
        *e = e.max(arc_length(&k.arc).to_f64());
    }
    for name in ["welded_cellular_exact", "welded_cellular_tiles", "kappa_ends", "kappa_disjoint", "null_sequence"] {
        ok &= named(&run.report, name).iter().all(|c| c.passed) && !named(&run.report, name).is_empty();
    }

    let config = WeldConfig::new(STAGE_BUDGET);
    let trace = |m: MultiWeld| {
        let report = verify_multi(&run.scene, &m, &config);
        emit_trace(&TraceFile::weld(&run.scene, config.clone(), m, report))
    };
    let a = trace(weld_all_components(&run.scene, &config).unwrap());
    let b = trace(weld_all_components(&run.scene, &config).unwrap());
    let same = a == b;
    verdict(
        6,
        "Cantor bars weld end to end",
        ok && same,
        format!("{} arcs, max length by stage {worst:?}, byte-identical traces: {same} ({} bytes)", run.result.kappas.len(), a.len()),
    );
}

#[test]
fn c07_one_component_per_component() {
    let scene = scenes::annulus_with_island();
    let config = WeldConfig::new(3);
    let multi = weld_all_components(&scene, &config).unwrap();
    let report = verify_multi(&scene, &multi, &config);
    let tiles = named(&report, "component_bijection_tiles");
    let found = tiles.first().and_then(|c| c.measured.iter().find(|(l, _)| l == "complement_components")).map(|(_, m)| format!("{m:?}"));
    let ok = report.all_passed() && tiles.len() == 1;
    verdict(7, "welding keeps one complementary component per original one", ok, format!("flood fill {found:?}, failed {:?}", failed_names(&report)));
}

fn chop_scenes() -> Vec<Scene> {
    vec![
        Scene::new("square", vec![scenes::rect(int(0), int(0), int(4), int(4))], Some(int(8)), None).unwrap(),
        Scene::new("bar", vec![scenes::rect(int(0), int(0), int(16), int(1))], Some(int(8)), None).unwrap(),
    ]
}

#[test]
fn c08_crosscut_subdivision() {
    let mut ok = true;
    let mut lines = Vec::new();
    let mut bands: Vec<(PLDisk, Rational)> = Vec::new();
    for (k, scene) in chop_scenes().into_iter().enumerate() {
        let plan: CrosscutPlan = chop_complement(&scene, 3, 11 + k as u64).unwrap();
        ok &= plan.rounds.len() == 3;
        let mut regions = 0;
        for r in &plan.rounds {
            ok &= r.epsilon == round_epsilon(&scene, r.round);
            for g in &r.regions {
                regions += 1;
                ok &= g.below(14, &r.epsilon);
                ok &= PLDisk::new(g.boundary.clone()).is_ok();
            }
            bands.extend(r.bands.iter().map(|b| (PLDisk::new(b.boundary.clone()).unwrap(), r.epsilon.clone())));
        }
        let arcs: Vec<PLArc> = plan.crosscuts().map(|c| c.arc.clone()).collect();
        ok &= check_disjoint_interiors("crosscuts", &arcs).passed;
        let report = verify_chop(&scene, &plan);
        ok &= report.all_passed();
        lines.push(format!("{}: {} crosscuts, {regions} regions", scene.label, arcs.len()));
    }

    let mut span_regions = 0;
    for (i, (d, eps)) in bands.iter().enumerate() {
        match span_disk(d, eps, i as u64) {
            Ok(s) => {
                span_regions += s.regions.len();
                ok &= s.regions.iter().all(|g| g.below(12, eps));
            }
            Err(e) => {
                ok = false;
                lines.push(format!("span failed on band {i}: {e}"));
            }
        }
    }
    lines.push(format!("span alone: {} bands, {span_regions} regions", bands.len()));
    verdict(8, "crosscut subdivision regions are small Jordan disks", ok, lines.join("; "));
}

#[test]
fn c09_verifier_rejects_moved_arcs() {
    let run = cantor_run();
    let config = WeldConfig::new(STAGE_BUDGET);
    let multi = weld_all_components(&run.scene, &config).unwrap();
    let report = verify_multi(&run.scene, &multi, &config);
    let step = report.resolution.clone().expect("raster resolution");
    let base = TraceFile::weld(&run.scene, config, multi, report);
    let mut ok = base.reverify().unwrap().all_passed();
    let n = match &base.run {
        TraceRun::Weld { result, .. } => result.outer.kappas.len(),
        TraceRun::Chop { .. } => 0,
    };
    let mut caught = 0;
    for i in 0..n {
        let mut t = base.clone();
        if let TraceRun::Weld { result, .. } = &mut t.run {
            let k = &mut result.outer.kappas[i];
            let moved = k.arc.vertices().iter().map(|v| Coord::new(&v.x + &step, v.y.clone())).collect();
            k.arc = PLArc::new_unchecked(moved);
        }
        let reread = parse_trace(&emit_trace(&t)).unwrap();
        if !reread.reverify().unwrap().all_passed() {
            caught += 1;
        }
    }
    ok &= n > 0 && caught == n;
    verdict(9, "moving any assembled arc by one grid step fails verification", ok, format!("{caught}/{n} mutations rejected, step {step}"));
}

/// Groups of arcs that share a landing point in one outer disk of a stage,
/// singletons included.
fn landing_groups(result: &WeldResult) -> Vec<Vec<PLArc>> {
    let mut out = Vec::new();
    for r in &result.stages {
        for d in &r.disks {
            let mut bundles: BTreeMap<&Coord, Vec<PLArc>> = BTreeMap::new();
            for c in &d.connectors {
                bundles.entry(&c.to).or_default().push(c.arc.clone());
            }
            let mut raw: BTreeMap<&Coord, Vec<PLArc>> = BTreeMap::new();
            for a in &d.raw_connectors {
                raw.entry(a.end()).or_default().push(a.clone());
            }
            for a in &d.selection.chosen {
                raw.entry(a.arc.start()).or_default().push(a.arc.clone());
                raw.entry(a.arc.end()).or_default().push(a.arc.clone());
            }
            out.extend(bundles.into_values().chain(raw.into_values()));
        }
    }
    out
}

/// Raw connector geodesics grouped by landing point.
fn raw_groups(p: &PLDisk, body: PLDisk, points: Vec<Coord>) -> Vec<Vec<PLArc>> {
    let marks: Vec<Mark> = points.into_iter().enumerate().map(|(k, point)| Mark { point, from: Provenance { kappa: k, side: Side::Start } }).collect();
    let (raw, _) = connect_marks(p, &[Target::Disk(body)], &marks, &int(64), &frac(1, 256), 1).expect("connectors");
    let mut groups: BTreeMap<Coord, Vec<PLArc>> = BTreeMap::new();
    for a in raw {
        groups.entry(a.end().clone()).or_default().push(a);
    }
    groups.into_values().collect()
}

/// Marks near the corners of a square around a smaller square, so several
/// geodesics land on the same corner of the inner one.
fn corner_bundles(rng: &mut ChaCha8Rng) -> Vec<Vec<PLArc>> {
    let p = PLDisk::rect(int(0), int(0), int(8), int(8));
    let mut points: Vec<Coord> = Vec::new();
    while points.len() < 8 {
        let t = rng.gen_range(1..64);
        let c = match rng.gen_range(0..4) {
            0 => Coord::new(frac(t, 8), int(0)),
            1 => Coord::new(int(8), frac(t, 8)),
            2 => Coord::new(frac(t, 8), int(8)),
            _ => Coord::new(int(0), frac(t, 8)),
        };
        if !points.contains(&c) {
            points.push(c);
        }
    }
    raw_groups(&p, PLDisk::rect(int(3), int(3), int(5), int(5)), points)
}

/// Marks at the end of one arm of an L, with the body in the other arm, so the
/// geodesics wrap the reflex corner and share their final segment.
fn reflex_bundles(rng: &mut ChaCha8Rng) -> Vec<Vec<PLArc>> {
    let ring = [(0, 0), (10, 0), (10, 2), (2, 2), (2, 10), (0, 10)].iter().map(|&(x, y)| Coord::from_ints(x, y)).collect();
    let p = PLDisk::new(ring).unwrap();
    let mut ys: Vec<i64> = (1..16).collect();
    let mut points = Vec::new();
    for _ in 0..rng.gen_range(2..5) {
        let y = ys.remove(rng.gen_range(0..ys.len()));
        points.push(Coord::new(int(10), frac(y, 8)));
    }
    raw_groups(&p, PLDisk::rect(frac(1, 4), int(8), int(1), int(9)), points)
}

fn is_tree(arcs: &[PLArc]) -> bool {
    matches!(check_tree("group", arcs), Ok(c) if c.passed)
}

/// A closed lattice polygon cut into two to four arcs at its vertices.
fn cyclic_union(rng: &mut ChaCha8Rng) -> Vec<PLArc> {
    loop {
        let k = rng.gen_range(3..7);
        let ring: Vec<Coord> = (0..k).map(|_| Coord::from_ints(rng.gen_range(0..10), rng.gen_range(0..10))).collect();
        let Ok(d) = PLDisk::new(ring) else { continue };
        let b = d.boundary();
        let pieces = rng.gen_range(2..=b.len().min(4));
        let mut cuts: Vec<usize> = (0..b.len()).collect();
        while cuts.len() > pieces {
            cuts.remove(rng.gen_range(0..cuts.len()));
        }
        let arcs = (0..pieces)
            .map(|i| {
                let (s, e) = (cuts[i], if i + 1 < pieces { cuts[i + 1] } else { cuts[0] + b.len() });
                PLArc::new_unchecked((s..=e).map(|j| b[j % b.len()].clone()).collect())
            })
            .collect();
        return arcs;
    }
}

#[test]
fn c10_landing_groups_are_trees() {
    let mut groups = 0;
    let mut bad = 0;
    let mut verifier_ok = true;
    for run in staged_runs() {
        for g in landing_groups(&run.result) {
            groups += 1;
            bad += usize::from(!is_tree(&g));
        }
        for name in ["tree_precondition", "landing_trees"] {
            verifier_ok &= named(&run.report, name).iter().all(|c| c.passed);
        }
    }
    let scene = scenes::annulus_with_island();
    let config = WeldConfig::new(3);
    let multi = weld_all_components(&scene, &config).unwrap();
    let mut all: Vec<Vec<PLArc>> = landing_groups(&multi.outer);
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_000a);
    for _ in 0..20 {
        all.extend(corner_bundles(&mut rng));
        all.extend(reflex_bundles(&mut rng));
    }
    let mut shared = 0;
    for g in all {
        groups += 1;
        shared += usize::from(g.len() >= 2);
        bad += usize::from(!is_tree(&g));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0010);
    let rejected = (0..20).filter(|_| !is_tree(&cyclic_union(&mut rng))).count();
    verdict(
        10,
        "landing groups are trees and cycles are rejected",
        bad == 0 && verifier_ok && rejected == 20 && shared > 0,
        format!("{groups} groups ({shared} with shared landings), {bad} not trees; {rejected}/20 cyclic unions rejected"),
    );
}
