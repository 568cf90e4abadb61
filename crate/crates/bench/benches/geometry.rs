use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use weld_bench::comb;
use weld_core::arc_weld::{weld_all_components, WeldConfig};
use weld_core::crosscut_chop::{is_eps_thin, Dilations};
use weld_core::disk_metric::{geodesic_in, triangulate};
use weld_core::exact_geom::rational::{frac, int};
use weld_core::{scenes, Coord};

fn geodesics(c: &mut Criterion) {
    let mut g = c.benchmark_group("geodesic");
    for teeth in [4, 16, 64] {
        let d = comb(teeth);
        let tri = triangulate(&d).unwrap();
        let x = Coord::new(frac(1, 2), frac(1, 2));
        let y = Coord::new(int(2 * teeth) + frac(1, 2), frac(1, 2));
        g.bench_with_input(BenchmarkId::new("comb", teeth), &teeth, |b, _| b.iter(|| geodesic_in(&tri, black_box(&x), black_box(&y)).unwrap()));
    }
    g.finish();
}

fn triangulation(c: &mut Criterion) {
    let d = comb(64);
    c.bench_function("triangulate/comb/64", |b| b.iter(|| triangulate(black_box(&d)).unwrap()));
}

fn thinness(c: &mut Criterion) {
    let d = comb(8);
    c.bench_function("thin/comb/8", |b| b.iter(|| is_eps_thin(black_box(&d), &int(3))));
}

fn dilation(c: &mut Criterion) {
    let scene = scenes::five_circles();
    c.bench_function("dilation/five_circles", |b| {
        b.iter(|| {
            let mut dil = Dilations::new(&scene);
            dil.get(&frac(1, 4)).unwrap().len()
        })
    });
}

fn weld(c: &mut Criterion) {
    let scene = scenes::two_squares();
    let config = WeldConfig::new(2);
    let mut g = c.benchmark_group("weld");
    g.sample_size(10);
    g.bench_function("two_squares/2", |b| b.iter(|| weld_all_components(&scene, &config).unwrap()));
    g.finish();
}

criterion_group!(benches, geodesics, triangulation, thinness, dilation, weld);
criterion_main!(benches);
