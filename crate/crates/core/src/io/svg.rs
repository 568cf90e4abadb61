//! SVG renderings of runs. Output is a pure function of the geometry, with
//! elements and ids in a fixed order.

use std::fmt::Write;
use std::path::Path;

use crate::arc_weld::MultiWeld;
use crate::crosscut_chop::CrosscutPlan;
use crate::exact_geom::disk::bbox_of;
use crate::exact_geom::Coord;
use crate::grid_approx::Scene;

const ROUND_COLOURS: [&str; 6] = ["#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

struct Layer {
    id: String,
    body: String,
}

struct Canvas {
    lo: (f64, f64),
    hi: (f64, f64),
    stroke: f64,
    layers: Vec<Layer>,
}

fn pt(c: &Coord) -> String {
    let (x, y) = c.to_f64();
    format!("{x:.6},{:.6}", -y)
}

fn ring_path(ring: &[Coord]) -> String {
    let mut d = String::new();
    for (i, c) in ring.iter().enumerate() {
        let _ = write!(d, "{}{}", if i == 0 { "M" } else { " L" }, pt(c));
    }
    d.push_str(" Z");
    d
}

fn polyline(points: &[Coord]) -> String {
    points.iter().map(pt).collect::<Vec<_>>().join(" ")
}

impl Canvas {
    fn new(points: &[Coord]) -> Self {
        let (lo, hi) = bbox_of(points);
        let (lo, hi) = (lo.to_f64(), hi.to_f64());
        let extent = (hi.0 - lo.0).max(hi.1 - lo.1).max(1e-9);
        let pad = extent * 0.05;
        Self { lo: (lo.0 - pad, lo.1 - pad), hi: (hi.0 + pad, hi.1 + pad), stroke: extent / 600.0, layers: Vec::new() }
    }

    fn layer(&mut self, id: &str, body: String) {
        if !body.is_empty() {
            self.layers.push(Layer { id: id.to_string(), body });
        }
    }

    fn scene(&mut self, scene: &Scene) {
        let mut body = String::new();
        for (k, g) in scene.regions.iter().enumerate() {
            let d: Vec<String> = g.rings().map(|r| ring_path(r)).collect();
            let _ = writeln!(body, r##"    <path id="x-{k}" d="{}" fill="#555" fill-rule="evenodd" stroke="none"/>"##, d.join(" "));
        }
        self.layer("scene", body);
    }

    fn finish(self) -> String {
        let (w, h) = (self.hi.0 - self.lo.0, self.hi.1 - self.lo.1);
        let mut out = String::new();
        out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
        let _ = writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" viewBox="{:.6} {:.6} {w:.6} {h:.6}" width="800" height="{:.0}">"#,
            self.lo.0,
            -self.hi.1,
            800.0 * h / w
        );
        for l in self.layers {
            let _ = writeln!(out, r#"  <g id="layer-{}" stroke-width="{:.6}">"#, l.id, self.stroke);
            out.push_str(&l.body);
            out.push_str("  </g>\n");
        }
        out.push_str("</svg>\n");
        out
    }
}

fn scene_points(scene: &Scene) -> Vec<Coord> {
    scene.vertices().cloned().collect()
}

/// Scene, stage outlines, marks, connectors, weld arcs and assembled arcs.
pub fn weld_svg(scene: &Scene, multi: &MultiWeld) -> String {
    let result = &multi.outer;
    let mut pts = scene_points(scene);
    for r in &result.stages {
        pts.extend(r.outer.disks.iter().flat_map(|d| d.boundary().iter().cloned()));
    }
    let mut c = Canvas::new(&pts);
    c.scene(scene);

    let mut stages = String::new();
    for r in &result.stages {
        for (k, d) in r.outer.disks.iter().enumerate() {
            let _ = writeln!(stages, r##"    <path id="stage-{}-{k}" d="{}" fill="none" stroke="#999"/>"##, r.n, ring_path(d.boundary()));
        }
    }
    c.layer("stages", stages);

    let (mut marks, mut connectors, mut welds) = (String::new(), String::new(), String::new());
    for r in &result.stages {
        for (i, ds) in r.disks.iter().enumerate() {
            for (j, m) in ds.marks.iter().enumerate() {
                let (x, y) = m.point.to_f64();
                let _ = writeln!(marks, r##"    <circle id="mark-{}-{i}-{j}" cx="{x:.6}" cy="{:.6}" r="{:.6}" fill="#000"/>"##, r.n, -y, c.stroke * 2.0);
            }
            for (j, a) in ds.connectors.iter().enumerate() {
                let _ = writeln!(connectors, r##"    <polyline id="connector-{}-{i}-{j}" points="{}" fill="none" stroke="#1f77b4"/>"##, r.n, polyline(a.arc.vertices()));
            }
            for (j, a) in ds.welds.iter().enumerate() {
                let _ = writeln!(welds, r##"    <polyline id="weld-{}-{i}-{j}" points="{}" fill="none" stroke="#ff7f0e"/>"##, r.n, polyline(a.arc.vertices()));
            }
        }
    }
    for h in &multi.holes {
        for (j, a) in h.welds.iter().enumerate() {
            let _ = writeln!(welds, r##"    <polyline id="hole-weld-{}-{}-{j}" points="{}" fill="none" stroke="#ff7f0e"/>"##, h.region, h.hole, polyline(a.arc.vertices()));
        }
    }
    c.layer("marks", marks);
    c.layer("connectors", connectors);
    c.layer("welds", welds);

    let mut kappas = String::new();
    for k in &result.kappas {
        let _ = writeln!(kappas, r##"    <polyline id="kappa-{}" points="{}" fill="none" stroke="#d62728"/>"##, k.id, polyline(k.arc.vertices()));
    }
    c.layer("kappas", kappas);
    c.finish()
}

/// Scene and one layer of crosscuts per round, coloured by round.
pub fn chop_svg(scene: &Scene, plan: &CrosscutPlan) -> String {
    let mut pts = scene_points(scene);
    pts.extend(plan.crosscuts().flat_map(|c| c.arc.vertices().iter().cloned()));
    let mut c = Canvas::new(&pts);
    c.scene(scene);
    for r in &plan.rounds {
        let colour = ROUND_COLOURS[(r.round as usize - 1) % ROUND_COLOURS.len()];
        let mut body = String::new();
        for (j, x) in r.crosscuts.iter().enumerate() {
            let _ = writeln!(body, r#"    <polyline id="crosscut-{}-{j}" points="{}" fill="none" stroke="{colour}"/>"#, r.round, polyline(x.arc.vertices()));
        }
        c.layer(&format!("round-{}", r.round), body);
    }
    c.finish()
}

pub fn emit_svg(path: &Path, svg: &str) -> std::io::Result<()> {
    std::fs::write(path, svg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::crosscut_chop::chop_complement;
    use crate::exact_geom::rational::int;
    use crate::scenes::rect;

    fn layers(svg: &str) -> Vec<&str> {
        svg.lines().filter_map(|l| l.trim().strip_prefix("<g id=\"layer-")).map(|l| &l[..l.find('"').unwrap()]).collect()
    }

    #[test]
    fn empty_plan_has_scene_layer_only() {
        let s = Scene::new("sq", vec![rect(int(0), int(0), int(1), int(1))], None, None).unwrap();
        let svg = chop_svg(&s, &CrosscutPlan::default());
        assert_eq!(layers(&svg), vec!["scene"]);
        assert!(svg.starts_with("<?xml") && svg.ends_with("</svg>\n"));
    }

    #[test]
    fn chop_layers_per_round_and_stable() {
        let s = Scene::new("sq", vec![rect(int(0), int(0), int(4), int(4))], Some(int(8)), None).unwrap();
        let plan = chop_complement(&s, 2, 4).unwrap();
        let a = chop_svg(&s, &plan);
        assert_eq!(layers(&a), vec!["scene", "round-1", "round-2"]);
        assert!(a.contains(ROUND_COLOURS[0]) && a.contains(ROUND_COLOURS[1]));
        assert_eq!(a, chop_svg(&s, &chop_complement(&s, 2, 4).unwrap()));
    }
}
