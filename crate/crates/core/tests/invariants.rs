mod common;

use std::cmp::Ordering;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use weld_core::crosscut_chop::{is_eps_thin, span_disk};
use weld_core::disk_metric::{geodesic_in, triangulate};
use weld_core::exact_geom::rational::{frac, int, ten_pow_neg};
use weld_core::exact_geom::segment::seg_intersect;
use weld_core::exact_geom::{format_rational, parse_rational, Coord, IntersectionResult, LengthValue, PLDisk, Rational, Segment};
use weld_core::io::SceneDoc;
use weld_core::verify::check_disjoint_interiors;
use weld_core::{scenes, Scene};

fn rational() -> impl Strategy<Value = Rational> {
    (-1000i64..1000, 1i64..64).prop_map(|(p, q)| frac(p, q))
}

fn coord() -> impl Strategy<Value = Coord> {
    (-16i64..16, -16i64..16).prop_map(|(x, y)| Coord::new(frac(x, 2), frac(y, 2)))
}

fn disk() -> impl Strategy<Value = PLDisk> {
    any::<u64>().prop_map(|s| common::random_rectilinear_disk(&mut ChaCha8Rng::seed_from_u64(s), 30))
}

fn same_kind(a: &IntersectionResult, b: &IntersectionResult) -> bool {
    match (a, b) {
        (IntersectionResult::Empty, IntersectionResult::Empty) => true,
        (IntersectionResult::Point(p), IntersectionResult::Point(q)) => p == q,
        (IntersectionResult::Overlap(s), IntersectionResult::Overlap(t)) => {
            let mut u = [s.p.clone(), s.q.clone()];
            let mut v = [t.p.clone(), t.q.clone()];
            u.sort();
            v.sort();
            u == v
        }
        _ => false,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rationals_survive_text(r in rational()) {
        prop_assert_eq!(parse_rational(&format_rational(&r)).unwrap(), r);
    }

    #[test]
    fn length_bracket_matches_float(terms in prop::collection::vec(1i64..500, 1..6), probe in rational()) {
        let l = LengthValue::from_terms(terms.iter().map(|&t| int(t)).collect());
        prop_assert!(l.lower <= l.upper);
        let exact: f64 = terms.iter().map(|&t| (t as f64).sqrt()).sum();
        let p = weld_core::exact_geom::rational::to_f64(&probe);
        if (exact - p).abs() > 1e-6 {
            let expect = if exact < p { Ordering::Less } else { Ordering::Greater };
            prop_assert_eq!(l.cmp_rational(&probe), expect);
        }
    }

    #[test]
    fn perfect_squares_are_exact(roots in prop::collection::vec(1i64..40, 1..5)) {
        let l = LengthValue::from_terms(roots.iter().map(|&r| int(r * r)).collect());
        let sum: i64 = roots.iter().sum();
        prop_assert_eq!(l.cmp_rational(&int(sum)), Ordering::Equal);
    }

    #[test]
    fn segment_intersection_is_symmetric(a in coord(), b in coord(), c in coord(), d in coord()) {
        prop_assume!(a != b && c != d);
        let s = Segment::new(a.clone(), b.clone());
        let t = Segment::new(c.clone(), d.clone());
        let st = seg_intersect(&s, &t);
        prop_assert!(same_kind(&st, &seg_intersect(&t, &s)));
        prop_assert!(same_kind(&st, &seg_intersect(&Segment::new(b, a), &Segment::new(d, c))));
    }

    #[test]
    fn disks_are_canonical(d in disk(), shift in 0usize..30, flip in any::<bool>()) {
        let mut ring = d.boundary().to_vec();
        let k = shift % ring.len();
        ring.rotate_left(k);
        if flip {
            ring.reverse();
        }
        prop_assert_eq!(PLDisk::new(ring).unwrap(), d);
    }

    #[test]
    fn scene_documents_round_trip(seed in any::<u64>()) {
        let d = common::random_rectilinear_disk(&mut ChaCha8Rng::seed_from_u64(seed), 30);
        let scene = Scene::new("p", vec![weld_core::Region::simple(d.boundary().to_vec())], Some(int(8)), None).unwrap();
        let doc = SceneDoc::of(&scene);
        let text = serde_json::to_string(&doc).unwrap();
        let back: SceneDoc = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back.to_scene().unwrap(), scene);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn geodesics_reverse_and_satisfy_triangle_inequality(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = common::random_rectilinear_disk(&mut rng, 30);
        let tri = triangulate(&d).unwrap();
        let [x, y, z] = [(); 3].map(|_| common::random_point_in(&mut rng, &d));
        let xy = geodesic_in(&tri, &x, &y).unwrap();
        let mut yx = geodesic_in(&tri, &y, &x).unwrap().vertices;
        yx.reverse();
        prop_assert_eq!(&xy.vertices, &yx);
        let xz = geodesic_in(&tri, &x, &z).unwrap().length;
        let zy = geodesic_in(&tri, &z, &y).unwrap().length;
        let detour = xz.add(&zy).refine(&ten_pow_neg(25));
        let direct = xy.length.refine(&ten_pow_neg(25));
        prop_assert!(direct.lower <= detour.upper);
    }

    #[test]
    fn rectangles_are_thin_past_half_width(w in 1i64..8, h in 1i64..8, num in 1i64..40) {
        let d = PLDisk::rect(int(0), int(0), int(w), int(h));
        let eps = frac(num, 8);
        let half = frac(w.min(h), 2);
        prop_assert_eq!(is_eps_thin(&d, &eps).thin, eps > half);
    }

    #[test]
    fn spanning_regions_are_small(seed in any::<u64>(), k in 3i64..8) {
        let d = common::random_rectilinear_disk(&mut ChaCha8Rng::seed_from_u64(seed), 30);
        let eps = frac(k, 2);
        prop_assume!(is_eps_thin(&d, &eps).thin);
        let span = span_disk(&d, &eps, seed).unwrap();
        prop_assert!(span.regions.iter().all(|g| g.below(12, &eps)));
        prop_assert!(check_disjoint_interiors("span", &span.arcs).passed);
    }
}

#[test]
fn canned_scenes_are_valid() {
    for s in [scenes::two_squares(), scenes::cantor_bars(3), scenes::five_circles(), scenes::annulus_with_island(), scenes::nested_rings()] {
        let doc = SceneDoc::of(&s);
        assert_eq!(doc.to_scene().unwrap(), s, "{}", s.label);
    }
}
