use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rab_core::davis::{CoxeterData, DEFAULT_BLOCK_CAP};
use rab_core::holonomy::holonomy_profile;
use rab_core::local_reflections::kill_all_holonomy;
use rab_core::polygonal::samples;
use rab_core::{Building, FiniteGroup, LRSystem, ProductPresentation, Region, SubgroupData};

fn six_cycle() -> ProductPresentation {
    ProductPresentation::cycle(6, FiniteGroup::cyclic(2))
}

fn k23() -> CoxeterData {
    let names = (0..5).map(|i| format!("s{i}")).collect();
    let w: Vec<(usize, usize, u32)> = [0, 1].iter().flat_map(|&a| [2, 3, 4].map(|b| (a, b, 4))).collect();
    CoxeterData::new(names, &w).unwrap()
}

fn normal_forms(c: &mut Criterion) {
    let p = six_cycle();
    let word: Vec<(usize, usize)> = (0..60).map(|i| ((i * 7) % 6, 1)).collect();
    c.bench_function("normalize_60_syllables", |b| b.iter(|| p.normalize(black_box(&word)).unwrap()));
    c.bench_function("enumerate_ball_r4", |b| b.iter(|| p.enumerate_ball(black_box(4), 1 << 20).unwrap()));
}

fn buildings(c: &mut Criterion) {
    let b = Building::new(six_cycle()).unwrap();
    c.bench_function("building_ball_r3", |bn| bn.iter(|| b.ball(black_box(3), 1 << 20).unwrap()));
    let sub = SubgroupData::kernel(b.presentation().gamma0_hom());
    c.bench_function("holonomy_profile_gamma0", |bn| bn.iter(|| holonomy_profile(&b, black_box(&sub)).unwrap()));
}

fn walls(c: &mut Criterion) {
    let x = samples::torus_grid(6, 6);
    c.bench_function("walls_torus_6x6", |b| b.iter(|| black_box(&x).compute_walls().unwrap()));
    c.bench_function("ewalls_torus_6x6", |b| b.iter(|| black_box(&x).compute_ewalls().unwrap()));
}

fn local_reflections(c: &mut Criterion) {
    let d = k23();
    c.bench_function("davis_ball_k23_r3", |b| b.iter(|| Region::ball(&d, black_box(3), DEFAULT_BLOCK_CAP).unwrap()));
    let r = Region::ball(&d, 4, DEFAULT_BLOCK_CAP).unwrap();
    let s = LRSystem::random(&r, &mut ChaCha8Rng::seed_from_u64(7));
    let mut g = c.benchmark_group("lr");
    g.sample_size(10);
    g.bench_function("kill_all_holonomy_k23_r4", |b| b.iter(|| kill_all_holonomy(&r, black_box(&s)).unwrap()));
    g.finish();
}

criterion_group!(benches, normal_forms, buildings, walls, local_reflections);
criterion_main!(benches);
