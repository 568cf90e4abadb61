//! Small canned scenes used by the tests, the benches and `weld` itself.

use crate::exact_geom::rational::{frac, int};
use crate::exact_geom::{Coord, Rational};
use crate::grid_approx::Scene;
use crate::planar::Region;

fn rect_ring(x0: &Rational, y0: &Rational, x1: &Rational, y1: &Rational) -> Vec<Coord> {
    vec![
        Coord::new(x0.clone(), y0.clone()),
        Coord::new(x1.clone(), y0.clone()),
        Coord::new(x1.clone(), y1.clone()),
        Coord::new(x0.clone(), y1.clone()),
    ]
}

pub fn rect(x0: Rational, y0: Rational, x1: Rational, y1: Rational) -> Region {
    Region::simple(rect_ring(&x0, &y0, &x1, &y1))
}

/// Unit squares `[0,1]²` and `[3,4]×[0,1]`.
pub fn two_squares() -> Scene {
    Scene::new(
        "two-squares",
        vec![rect(int(0), int(0), int(1), int(1)), rect(int(3), int(0), int(4), int(1))],
        None,
        None,
    )
    .expect("valid scene")
}

/// The middle-thirds Cantor set at `depth` times `[0, 1/4]`, as `2^depth`
/// bars inside `[0,1] × [0,1/4]`.
pub fn cantor_bars(depth: u32) -> Scene {
    let mut bars = vec![(int(0), int(1))];
    for _ in 0..depth {
        bars = bars
            .into_iter()
            .flat_map(|(a, b)| {
                let t = (&b - &a) / int(3);
                vec![(a.clone(), &a + &t), (&b - &t, b)]
            })
            .collect();
    }
    let regions = bars.into_iter().map(|(a, b)| rect(a, int(0), b, frac(1, 4))).collect();
    Scene::new(format!("cantor-{depth}"), regions, None, None).expect("valid scene")
}

/// A 16-gon inscribed in the circle of radius `r` about `c`, with rational
/// vertices from the Pythagorean parametrisation.
pub fn circle_polygon(c: &Coord, r: &Rational) -> Vec<Coord> {
    // tan of half the angle, roughly 0°, 22.5°, 45° and 67.5°.
    let ts = [frac(0, 1), frac(1, 5), frac(2, 5), frac(2, 3)];
    let quarter: Vec<(Rational, Rational)> = ts
        .iter()
        .map(|t| {
            let d = int(1) + t * t;
            ((int(1) - t * t) / &d, int(2) * t / d)
        })
        .collect();
    let mut pts = Vec::with_capacity(16);
    for q in 0..4 {
        for (cx, sy) in &quarter {
            let (x, y) = match q {
                0 => (cx.clone(), sy.clone()),
                1 => (-sy.clone(), cx.clone()),
                2 => (-cx.clone(), -sy.clone()),
                _ => (sy.clone(), -cx.clone()),
            };
            pts.push(Coord::new(&c.x + r * x, &c.y + r * y));
        }
    }
    pts
}

/// Five disjoint polygonal disks of radii `1, 1/2, …, 1/16` in a row, each
/// separated from the next by the smaller radius.
pub fn five_circles() -> Scene {
    let mut regions = Vec::new();
    let mut x = int(0);
    let mut r = int(1);
    for k in 0..5 {
        if k > 0 {
            x += &r * int(3);
        }
        regions.push(Region::simple(circle_polygon(&Coord::new(x.clone(), int(0)), &r)));
        x += &r;
        r /= int(2);
    }
    Scene::new("five-circles", regions, None, None).expect("valid scene")
}

/// A square annulus `[0,8]² \ (2,6)²` with a unit square island in its hole.
pub fn annulus_with_island() -> Scene {
    let ring = Region::new(
        rect_ring(&int(0), &int(0), &int(8), &int(8)),
        vec![rect_ring(&int(2), &int(2), &int(6), &int(6))],
    );
    let island = rect(int(3), int(3), int(4), int(4));
    Scene::new("annulus-island", vec![ring, island], None, None).expect("valid scene")
}

/// A rectangle with two square holes, each holding one island.
pub fn nested_rings() -> Scene {
    let ring = Region::new(
        rect_ring(&int(0), &int(0), &int(14), &int(6)),
        vec![rect_ring(&int(1), &int(1), &int(6), &int(5)), rect_ring(&int(8), &int(1), &int(13), &int(5))],
    );
    let a = rect(int(3), int(2), int(4), int(3));
    let b = rect(int(10), int(3), int(11), int(4));
    Scene::new("nested-rings", vec![ring, a, b], None, None).expect("valid scene")
}
