use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::exact_geom::rational::{frac, int, ten_pow_neg, to_f64};
use crate::exact_geom::segment::{seg_intersect, IntersectionResult};
use crate::exact_geom::{compare_lengths, Coord, LengthOrdering, LengthValue, Location, PLDisk, Rational, Segment};

use super::geodesic::{geodesic_in, GeodesicError, GeodesicResult};
use super::to_set::{geodesic_to_set_in, Target};
use super::triangulate::{triangulate, Triangulation};

/// Outcome of a randomized or constructive property check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PropertyReport {
    pub name: String,
    pub passed: bool,
    pub trials: usize,
    /// Largest observed excess over the allowed bound (negative when every
    /// trial had slack).
    pub max_violation: f64,
    pub seed: u64,
    pub witness: Vec<Coord>,
}

/// A uniformly drawn point of the closed disk on a `1/2^bits` lattice of its
/// bounding box.
pub fn sample_point(rng: &mut ChaCha8Rng, d: &PLDisk, bits: u32) -> Coord {
    let (lo, hi) = d.bbox();
    let steps = 1i64 << bits;
    loop {
        let fx = rng.gen_range(0..=steps);
        let fy = rng.gen_range(0..=steps);
        let c = Coord::new(&lo.x + (&hi.x - &lo.x) * frac(fx, steps), &lo.y + (&hi.y - &lo.y) * frac(fy, steps));
        if d.locate(&c) != Location::Outside {
            return c;
        }
    }
}

fn approx(l: &LengthValue) -> Rational {
    let r = l.refine(&ten_pow_neg(30));
    (&r.lower + &r.upper) / int(2)
}

/// Point at fraction `s` of the length of a path, placed exactly on one of
/// its segments.
pub fn point_at_fraction(g: &GeodesicResult, s: &Rational) -> Coord {
    if g.is_point() {
        return g.start().clone();
    }
    let seg_len: Vec<Rational> =
        g.vertices.windows(2).map(|w| approx(&LengthValue::from_terms(vec![w[0].dist2(&w[1])]))).collect();
    let total: Rational = seg_len.iter().sum();
    let mut want = s * total;
    for (k, w) in g.vertices.windows(2).enumerate() {
        if want <= seg_len[k] || k + 1 == seg_len.len() {
            let mut lambda = &want / &seg_len[k];
            if lambda > int(1) {
                lambda = int(1);
            }
            if lambda < int(0) {
                lambda = int(0);
            }
            return w[0].lerp(&w[1], &lambda);
        }
        want -= &seg_len[k];
    }
    g.end().clone()
}

/// Compares intrinsic distances between points on two sides of random
/// geodesic triangles with the matching distances in Euclidean comparison
/// triangles.
pub fn check_thin_triangles(d: &PLDisk, trials: usize, tol: &Rational, seed: u64) -> Result<PropertyReport, GeodesicError> {
    let tri = triangulate(d)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let params: Vec<Rational> = (1..=16).map(|k| frac(k, 17)).collect();
    let mut worst = f64::NEG_INFINITY;
    let mut witness = Vec::new();
    let mut passed = true;
    for _ in 0..trials {
        let p = [sample_point(&mut rng, d, 6), sample_point(&mut rng, d, 6), sample_point(&mut rng, d, 6)];
        for apex in 0..3 {
            let (a, b, c) = (&p[apex], &p[(apex + 1) % 3], &p[(apex + 2) % 3]);
            let gab = geodesic_in(&tri, a, b)?;
            let gac = geodesic_in(&tri, a, c)?;
            let gbc = geodesic_in(&tri, b, c)?;
            let (lc, lb, la) = (approx(&gab.length), approx(&gac.length), approx(&gbc.length));
            if lc == int(0) || lb == int(0) {
                continue;
            }
            // Comparison triangle: a at the origin, b on the positive x-axis.
            let cx_times_c = (&lc * &lc + &lb * &lb - &la * &la) / int(2);
            for (i, s) in params.iter().enumerate() {
                for t in [&params[i], &params[15 - i]] {
                    let pp = point_at_fraction(&gab, s);
                    let qq = point_at_fraction(&gac, t);
                    let cmp2 = s * s * &lc * &lc - int(2) * s * t * &cx_times_c + t * t * &lb * &lb;
                    let cmp2 = if cmp2 < int(0) { int(0) } else { cmp2 };
                    let dp = geodesic_in(&tri, &pp, &qq)?.length;
                    let cmp = LengthValue::from_terms(vec![cmp2]);
                    let dp_r = dp.refine(&ten_pow_neg(20));
                    let cmp_r = cmp.refine(&ten_pow_neg(20));
                    let excess = to_f64(&(&dp_r.lower - &cmp_r.upper));
                    if excess > worst {
                        worst = excess;
                        witness = vec![a.clone(), b.clone(), c.clone(), pp.clone(), qq.clone()];
                    }
                    if &dp_r.lower - &cmp_r.upper > *tol {
                        passed = false;
                    }
                }
            }
        }
    }
    if passed {
        witness.clear();
    }
    Ok(PropertyReport {
        name: "thin_triangles".into(),
        passed,
        trials,
        max_violation: if worst.is_finite() { worst } else { 0.0 },
        seed,
        witness,
    })
}

/// Pieces of `g1 ∩ g2` as parameter intervals along `g1` (segment index plus
/// local parameter), merged where they touch.
pub fn intersection_pieces(g1: &GeodesicResult, g2: &GeodesicResult) -> Vec<(Rational, Rational)> {
    let segs = |g: &GeodesicResult| -> Vec<Segment> {
        if g.is_point() {
            Vec::new()
        } else {
            g.vertices.windows(2).map(|w| Segment::new(w[0].clone(), w[1].clone())).collect()
        }
    };
    let s1 = segs(g1);
    let s2 = segs(g2);
    let mut intervals: Vec<(Rational, Rational)> = Vec::new();
    let pos = |i: usize, s: &Segment, c: &Coord| int(i as i64) + s.param_of(c);
    if g1.is_point() || g2.is_point() {
        let (p, other) = if g1.is_point() { (g1.start(), g2) } else { (g2.start(), g1) };
        let hit = if other.is_point() { other.start() == p } else { segs(other).iter().any(|s| s.contains(p)) };
        return if hit { vec![(int(0), int(0))] } else { Vec::new() };
    }
    for (i, a) in s1.iter().enumerate() {
        for b in &s2 {
            match seg_intersect(a, b) {
                IntersectionResult::Empty => {}
                IntersectionResult::Point(p) => {
                    let t = pos(i, a, &p);
                    intervals.push((t.clone(), t));
                }
                IntersectionResult::Overlap(o) => {
                    let (t0, t1) = (pos(i, a, &o.p), pos(i, a, &o.q));
                    intervals.push(if t0 <= t1 { (t0, t1) } else { (t1, t0) });
                }
            }
        }
    }
    intervals.sort();
    let mut merged: Vec<(Rational, Rational)> = Vec::new();
    for (a, b) in intervals {
        match merged.last_mut() {
            Some(last) if a <= last.1 => {
                if b > last.1 {
                    last.1 = b;
                }
            }
            _ => merged.push((a, b)),
        }
    }
    merged
}

/// Two geodesics of one disk meet in a connected set (or not at all).
pub fn geodesics_intersection_connected(g1: &GeodesicResult, g2: &GeodesicResult) -> PropertyReport {
    let pieces = intersection_pieces(g1, g2);
    let passed = pieces.len() <= 1;
    let witness = if passed {
        Vec::new()
    } else {
        let mut w = g1.vertices.clone();
        w.extend(g2.vertices.iter().cloned());
        w
    };
    PropertyReport {
        name: "geodesic_intersection_connected".into(),
        passed,
        trials: 1,
        max_violation: pieces.len().saturating_sub(1) as f64,
        seed: 0,
        witness,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum TriodSide {
    AC,
    BC,
}

#[derive(Clone, Debug, PartialEq)]
pub enum TriodVerdict {
    /// The triod `g(a,b) ∪ g(c,x)` with center `x`; `side` runs through `x`
    /// and is strictly longer than the geodesic between its ends.
    Shortenable { center: Coord, side: TriodSide, side_length: LengthValue, geodesic_length: LengthValue },
    /// The union of the three pairwise geodesics is itself a triod.
    GeodesicTriod { center: Coord },
    /// `c` meets `g(a,b)` at one of the three points, so there is no triod.
    DegenerateConfiguration,
}

/// Joins `c` to the geodesic from `a` to `b`, which gives a triod whenever the
/// landing point `x` differs from `a`, `b`, `c`, and certifies that one of
/// its two sides through `c` is not a geodesic.
pub fn triod_check(d: &PLDisk, a: &Coord, b: &Coord, c: &Coord) -> Result<TriodVerdict, GeodesicError> {
    let tri = triangulate(d)?;
    triod_check_in(&tri, a, b, c)
}

pub fn triod_check_in(tri: &Triangulation, a: &Coord, b: &Coord, c: &Coord) -> Result<TriodVerdict, GeodesicError> {
    let gab = geodesic_in(tri, a, b)?;
    let gac = geodesic_in(tri, a, c)?;
    let gbc = geodesic_in(tri, b, c)?;
    if let Some(center) = common_branch_point(&gab, &gac, &gbc) {
        return Ok(TriodVerdict::GeodesicTriod { center });
    }
    let Some(ab_arc) = gab.arc() else {
        return Ok(TriodVerdict::DegenerateConfiguration);
    };
    let gcx = geodesic_to_set_in(tri, c, &[Target::Arc(ab_arc)])?;
    let x = gcx.end().clone();
    if &x == a || &x == b || &x == c {
        return Ok(TriodVerdict::DegenerateConfiguration);
    }
    let gax = geodesic_in(tri, a, &x)?;
    let gbx = geodesic_in(tri, b, &x)?;
    let side_ac = gax.length.add(&gcx.length);
    let side_bc = gbx.length.add(&gcx.length);
    let gap = ten_pow_neg(40);
    if compare_lengths(&side_ac, &gac.length, &gap) == LengthOrdering::Greater {
        return Ok(TriodVerdict::Shortenable {
            center: x,
            side: TriodSide::AC,
            side_length: side_ac,
            geodesic_length: gac.length,
        });
    }
    if compare_lengths(&side_bc, &gbc.length, &gap) == LengthOrdering::Greater {
        return Ok(TriodVerdict::Shortenable {
            center: x,
            side: TriodSide::BC,
            side_length: side_bc,
            geodesic_length: gbc.length,
        });
    }
    Ok(TriodVerdict::GeodesicTriod { center: x })
}

/// A point other than `a`, `b`, `c` where all three geodesics branch, if
/// their union is a triod.
fn common_branch_point(gab: &GeodesicResult, gac: &GeodesicResult, gbc: &GeodesicResult) -> Option<Coord> {
    // In a triod with center x, g(a,b) and g(a,c) share exactly the branch
    // from a to x, so x is the far end of their common initial piece.
    let pieces = intersection_pieces(gab, gac);
    if pieces.len() != 1 || gab.is_point() {
        return None;
    }
    let (lo, hi) = &pieces[0];
    if *lo != int(0) || *hi == int(0) {
        return None;
    }
    let x = param_point(gab, hi);
    if &x == gab.end() || &x == gac.end() {
        return None;
    }
    let on = |g: &GeodesicResult, p: &Coord| g.vertices.windows(2).any(|w| Segment::new(w[0].clone(), w[1].clone()).contains(p));
    let branches_meet =
        on(gbc, &x) && intersection_pieces(gbc, gab).len() == 1 && intersection_pieces(gbc, gac).len() == 1;
    branches_meet.then_some(x)
}

fn param_point(g: &GeodesicResult, t: &Rational) -> Coord {
    let i = t.floor().to_integer();
    let i: usize = i.try_into().unwrap_or(0);
    let local = t - int(i as i64);
    if i + 1 >= g.vertices.len() {
        return g.end().clone();
    }
    g.vertices[i].lerp(&g.vertices[i + 1], &local)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn l_disk() -> PLDisk {
        PLDisk::new(
            [(0, 0), (4, 0), (4, 2), (2, 2), (2, 4), (0, 4)].iter().map(|&(x, y)| Coord::from_ints(x, y)).collect(),
        )
        .unwrap()
    }

    #[test]
    fn convex_triangles_have_no_violation() {
        let d = PLDisk::rect(int(0), int(0), int(3), int(2));
        let r = check_thin_triangles(&d, 5, &ten_pow_neg(9), 1).unwrap();
        assert!(r.passed, "{r:?}");
        assert!(r.max_violation <= 1e-9);
    }

    #[test]
    fn l_disk_triangles_are_thin() {
        let r = check_thin_triangles(&l_disk(), 10, &ten_pow_neg(9), 2).unwrap();
        assert!(r.passed, "{r:?}");
    }

    #[test]
    fn crossing_chords_meet_once() {
        let d = PLDisk::rect(int(0), int(0), int(4), int(4));
        let tri = triangulate(&d).unwrap();
        let g1 = geodesic_in(&tri, &Coord::from_ints(0, 0), &Coord::from_ints(4, 4)).unwrap();
        let g2 = geodesic_in(&tri, &Coord::from_ints(0, 4), &Coord::from_ints(4, 0)).unwrap();
        assert!(geodesics_intersection_connected(&g1, &g2).passed);
        assert!(geodesics_intersection_connected(&g1, &g1).passed);
    }

    #[test]
    fn shared_final_segment_is_one_piece() {
        let tri = triangulate(&l_disk()).unwrap();
        let y = Coord::new(int(1), frac(7, 2));
        let g1 = geodesic_in(&tri, &Coord::new(frac(7, 2), int(1)), &y).unwrap();
        let g2 = geodesic_in(&tri, &Coord::new(frac(7, 2), frac(3, 2)), &y).unwrap();
        assert_eq!(intersection_pieces(&g1, &g2).len(), 1);
        assert!(geodesics_intersection_connected(&g1, &g2).passed);
    }

    #[test]
    fn disjoint_pieces_fail() {
        let a = GeodesicResult::from_chain(vec![Coord::from_ints(0, 0), Coord::from_ints(2, 2), Coord::from_ints(4, 0)]);
        let b = GeodesicResult::from_chain(vec![Coord::from_ints(0, 1), Coord::from_ints(4, 1)]);
        assert!(!geodesics_intersection_connected(&a, &b).passed);
    }

    #[test]
    fn triod_around_reflex_corner() {
        let a = Coord::new(frac(7, 2), int(1));
        let b = Coord::new(int(1), frac(7, 2));
        let c = Coord::new(frac(1, 2), frac(1, 2));
        match triod_check(&l_disk(), &a, &b, &c).unwrap() {
            TriodVerdict::Shortenable { center, side_length, geodesic_length, .. } => {
                assert_eq!(center, Coord::from_ints(2, 2));
                assert!(side_length > geodesic_length);
            }
            v => panic!("{v:?}"),
        }
    }

    #[test]
    fn collinear_points_are_degenerate() {
        let d = PLDisk::rect(int(0), int(0), int(4), int(4));
        let v = triod_check(&d, &Coord::from_ints(0, 0), &Coord::from_ints(4, 4), &Coord::from_ints(2, 2)).unwrap();
        assert_eq!(v, TriodVerdict::DegenerateConfiguration);
    }
}
